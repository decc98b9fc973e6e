use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use nilhsp::nil2::{brute_force_hsp, hiding_function, random_group, random_hidden_subgroup, DEFAULT_BOUND};
use nilhsp::qsim::{find_hidden_subgroup, HspConfig};
use nilhsp::quadsys::{full_bound, solve_full_system};
use nilhsp::reduction::{
    algorithm1, algorithm1_call_bound, exponent_p_subgroup, hall_coset_property, prime_step_chain, sylow_decompose,
    BruteForceSolver, ExplicitGroup, QuantumSolver, SubSolver, DEFAULT_EXPLICIT_BOUND,
};
use nilhsp::{Error, FpMatrix, GroupSpec, Prime, QuadLinSystem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::report::{
    elements, BenchPoint, BenchReport, BenchSlope, GroupJson, HspConfigJson, HspReport, HspSummary, HspTrial,
    ReductionReport, SylowJson,
};
use crate::{Failure, HspArgs, OrderChoice, ReductionArgs, SolverChoice, Suite};

type CmdResult = Result<(), Failure>;

const BOUND_VAR: &str = "HSP_MAX_GROUP_ORDER";

/// `HSP_MAX_GROUP_ORDER` if set, else `default`.
fn bound(default: usize) -> Result<usize, Failure> {
    match std::env::var(BOUND_VAR) {
        Ok(v) => {
            v.trim().parse().map_err(|_| Failure::input(format!("{BOUND_VAR} must be a positive integer, got {v:?}")))
        }
        Err(_) => Ok(default),
    }
}

/// The generator for `stream` under `seed`; streams are independent, so trials
/// can run in any order.
fn stream_rng(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn print_json<T: serde::Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("report serializes"));
}

pub fn gen_group(p: u64, m: usize, d: usize, seed: u64, out: Option<&Path>) -> CmdResult {
    let mut rng = stream_rng(seed, 0);
    let g = Prime::new(p).and_then(|p| random_group(p, m, d, &mut rng)).map_err(|e| Failure::input(e.to_string()))?;
    let text = g.to_text();
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn solve_quadsys(input: &Path, seed: u64, verify: bool) -> CmdResult {
    let sys = QuadLinSystem::parse(&read(input)?)?;
    let mut rng = stream_rng(seed, 0);
    let sol = solve_full_system(&sys, &mut rng)?;
    println!("{}", sol.j.iter().map(u64::to_string).collect::<Vec<_>>().join(" "));
    if verify {
        if sys.is_solution(&sol.j) {
            println!("OK");
        } else {
            let (q, l) = sys.residuals(&sol.j);
            println!("FAIL quadratic residual {q:?} linear residual {l:?}");
            return Err(Failure::mismatch("solution does not satisfy the system"));
        }
    }
    Ok(())
}

pub fn run_hsp(args: &HspArgs) -> CmdResult {
    let bound = bound(DEFAULT_BOUND)?;
    let fixed = match &args.group_file {
        Some(path) => Some(GroupSpec::parse(&read(path)?)?),
        None => None,
    };
    let (p, m, d) = match &fixed {
        Some(g) => (g.p().get(), g.m(), g.d()),
        None => (args.p.unwrap(), args.m.unwrap(), args.d.unwrap()),
    };
    // validate parameters once, before spawning trials
    let prime = Prime::new(p).map_err(|e| Failure::input(e.to_string()))?;
    if fixed.is_none() {
        random_group(prime, m, d, &mut stream_rng(args.seed, 0)).map_err(|e| Failure::input(e.to_string()))?;
    }
    let size = (p as u128).checked_pow((m + d) as u32).unwrap_or(u128::MAX);
    if size > bound as u128 {
        return Err(Error::Resource(format!("group order {size} exceeds bound {bound}")).into());
    }

    let config = HspConfig { bound, max_attempts: args.max_attempts };
    let records: Vec<HspTrial> = (0..args.trials)
        .into_par_iter()
        .map(|t| hsp_trial(t, args, fixed.as_ref(), prime, (m, d), &config))
        .collect::<Result<_, Failure>>()?;
    let summary = HspSummary::from_records(&records);
    let ok = summary.failed == 0;
    if args.json {
        let order = match args.order {
            OrderChoice::One => "1",
            OrderChoice::P => "p",
            OrderChoice::Random => "random",
        };
        print_json(&HspReport {
            command: "run-hsp",
            seed: args.seed,
            config: HspConfigJson {
                p,
                m,
                d,
                order: order.to_string(),
                trials: args.trials,
                max_attempts: args.max_attempts,
                bound,
                fixed_group: fixed.is_some(),
            },
            records,
            summary,
        });
    } else {
        println!(
            "run-hsp: {}/{} trials matched, mean attempts {:.2}, mean samples {:.1}",
            summary.matched, summary.trials, summary.mean_attempts, summary.mean_samples
        );
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::mismatch("some trials did not recover the hidden subgroup"))
    }
}

fn hsp_trial(
    trial: usize,
    args: &HspArgs,
    fixed: Option<&GroupSpec>,
    prime: Prime,
    (m, d): (usize, usize),
    config: &HspConfig,
) -> Result<HspTrial, Failure> {
    // stream 0 is reserved for parameter validation
    let mut rng = stream_rng(args.seed, trial as u64 + 1);
    let g = match fixed {
        Some(g) => g.clone(),
        None => random_group(prime, m, d, &mut rng)?,
    };
    let order = match args.order {
        OrderChoice::One => 1,
        OrderChoice::P => prime.get(),
        OrderChoice::Random => {
            if rng.gen_bool(0.5) {
                1
            } else {
                prime.get()
            }
        }
    };
    let h = random_hidden_subgroup(&g, order, &mut rng)?;
    let f = hiding_function(&g, &h, config.bound)?;
    let oracle = brute_force_hsp(&g, &f, config.bound)?;
    let start = Instant::now();
    let result = find_hidden_subgroup(&g, &f, config, &mut rng);
    let wall_ms = args.timings.then(|| start.elapsed().as_secs_f64() * 1e3);
    let mut record = HspTrial {
        trial,
        group: GroupJson::from(&g),
        hidden_generators: elements(&h),
        oracle_order: oracle.len(),
        recovered_order: None,
        recovered_generators: Vec::new(),
        matched: false,
        attempts: config.max_attempts,
        samples: 0,
        diagnostics: Vec::new(),
        error: None,
        wall_ms,
    };
    match result {
        Ok(out) => {
            let want: BTreeSet<_> = oracle.iter().collect();
            record.matched = out.subgroup.iter().collect::<BTreeSet<_>>() == want;
            record.recovered_order = Some(out.subgroup.len());
            record.recovered_generators = elements(&out.generators);
            record.attempts = out.attempts;
            record.samples = out.samples;
            record.diagnostics = out.diagnostics;
        }
        Err(Error::Retryable(msg)) => record.error = Some(msg),
        Err(e) => return Err(e.into()),
    }
    Ok(record)
}

pub fn run_reduction(args: &ReductionArgs) -> CmdResult {
    let g = ExplicitGroup::parse(&read(&args.table_file)?, bound(DEFAULT_EXPLICIT_BOUND)?)?;
    let mut rng = stream_rng(args.seed, 0);
    let gens = match &args.hidden {
        Some(gens) => {
            if let Some(bad) = gens.iter().find(|&&x| x >= g.order()) {
                return Err(Failure::input(format!("hidden generator {bad} is not an element index")));
            }
            gens.clone()
        }
        None => {
            let h = g.random_subgroup(rng.gen_range(0..3), &mut rng);
            g.greedy_generators(&h, &[])
        }
    };
    let h = g.closure(&gens);
    let labels = g.coset_labels(&h);
    let base = labels[g.identity()];
    let oracle: Vec<usize> = (0..g.order()).filter(|&x| labels[x] == base).collect();

    let quantum =
        QuantumSolver::new(stream_rng(args.seed, 1), HspConfig { bound: bound(DEFAULT_BOUND)?, max_attempts: 10 });
    let solver: &dyn SubSolver = match args.solver {
        SolverChoice::Brute => &BruteForceSolver,
        SolverChoice::Quantum => &quantum,
    };

    let mut sylow = Vec::new();
    let mut found = Vec::new();
    for (q, part) in sylow_decompose(&g)? {
        let (sub, emb) = g.subgroup_as_group(&part)?;
        let f = |x: usize| labels[emb[x]];
        let out = algorithm1(&sub, &f, solver)?;
        found.extend(out.subgroup.iter().map(|&x| emb[x]));
        let chain_length = prime_step_chain(&sub)?.len();
        let (gs_order, hall, gs_err) = match exponent_p_subgroup(&sub, q as u64) {
            Ok(gs) => (Some(gs.len()), Some(hall_coset_property(&sub, &gs, q as u64)), None),
            Err(e @ Error::Domain(_)) => (None, None, Some(e.to_string())),
            Err(e) => return Err(e.into()),
        };
        sylow.push(SylowJson {
            prime: q,
            order: part.len(),
            chain_length,
            recovered_order: out.subgroup.len(),
            p_calls: out.p_calls,
            call_bound: algorithm1_call_bound(part.len()),
            rounds: out.rounds,
            exponent_subgroup_order: gs_order,
            hall_property: hall,
            exponent_subgroup_error: gs_err,
        });
    }
    let recovered = g.closure(&found);
    let matched = recovered == oracle;
    let (quantum_calls, fallback_calls) = quantum.calls();
    let report = ReductionReport {
        command: "run-reduction",
        seed: args.seed,
        order: g.order(),
        solver: format!("{:?}", args.solver).to_lowercase(),
        hidden_generators: gens,
        oracle,
        recovered,
        matched,
        sylow,
        quantum_calls,
        fallback_calls,
    };
    if args.json {
        print_json(&report);
    } else {
        let calls: usize = report.sylow.iter().map(|s| s.p_calls).sum();
        let parts: Vec<String> = report
            .sylow
            .iter()
            .map(|s| match s.exponent_subgroup_order {
                Some(n) => format!("{}: |P|={} |G*|={}", s.prime, s.order, n),
                None => format!("{}: |P|={} G* not a subgroup", s.prime, s.order),
            })
            .collect();
        println!(
            "run-reduction: |G|={} |H|={} recovered {} with {calls} P calls; {}; {}",
            report.order,
            report.oracle.len(),
            report.recovered.len(),
            parts.join(", "),
            if matched { "match" } else { "MISMATCH" }
        );
    }
    if matched {
        Ok(())
    } else {
        Err(Failure::mismatch("recovered subgroup differs from the oracle"))
    }
}

const BENCH_PRIMES: [u64; 4] = [3, 101, 10_007, 1_000_003];
const BENCH_MIN_TIME: Duration = Duration::from_millis(50);

pub fn bench(suite: Suite, seed: u64, json: bool) -> CmdResult {
    let mut rng = stream_rng(seed, 0);
    let mut points = Vec::new();
    let mut slopes = Vec::new();
    match suite {
        Suite::Solver => {
            for &p in &BENCH_PRIMES {
                let prime = Prime::new(p)?;
                let mut fit = Vec::new();
                for d in 1..=8usize {
                    let n = full_bound(d);
                    let systems: Vec<QuadLinSystem> = (0..5)
                        .map(|_| {
                            let rows: Vec<Vec<u64>> =
                                (0..d).map(|_| (0..n).map(|_| rng.gen_range(0..p)).collect()).collect();
                            QuadLinSystem::new(prime, FpMatrix::from_rows(&rows, n, prime))
                        })
                        .collect();
                    let (mut reps, start) = (0, Instant::now());
                    while start.elapsed() < BENCH_MIN_TIME {
                        for s in &systems {
                            solve_full_system(s, &mut rng)?;
                        }
                        reps += systems.len();
                    }
                    let mean_us = start.elapsed().as_secs_f64() * 1e6 / reps as f64;
                    fit.push(((d as f64).ln(), mean_us.ln()));
                    points.push(BenchPoint { p, m: None, d, n, reps, mean_us, mean_attempts: None });
                }
                slopes.push(BenchSlope { p, slope: slope(&fit) });
            }
        }
        Suite::Hsp => {
            for (p, m, d) in [(3u64, 2usize, 1usize), (3, 3, 2), (5, 2, 1), (5, 3, 2)] {
                let prime = Prime::new(p)?;
                let (reps, mut attempts, start) = (5, 0, Instant::now());
                for _ in 0..reps {
                    let g = random_group(prime, m, d, &mut rng)?;
                    let h = random_hidden_subgroup(&g, p, &mut rng)?;
                    let f = hiding_function(&g, &h, DEFAULT_BOUND)?;
                    attempts += find_hidden_subgroup(&g, &f, &HspConfig::default(), &mut rng)?.attempts;
                }
                let mean_us = start.elapsed().as_secs_f64() * 1e6 / reps as f64;
                let mean_attempts = Some(attempts as f64 / reps as f64);
                points.push(BenchPoint { p, m: Some(m), d, n: full_bound(d), reps, mean_us, mean_attempts });
            }
        }
    }
    let report = BenchReport { command: "bench", suite: format!("{suite:?}").to_lowercase(), seed, points, slopes };
    if json {
        print_json(&report);
    } else {
        for pt in &report.points {
            let m = pt.m.map(|m| format!(" m={m}")).unwrap_or_default();
            println!("p={}{m} d={} n={}: {:.1} us over {} reps", pt.p, pt.d, pt.n, pt.mean_us, pt.reps);
        }
        for s in &report.slopes {
            println!("p={}: log-log slope {:.2}", s.p, s.slope);
        }
    }
    Ok(())
}

/// Least-squares slope of `(x, y)` points.
fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let num: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = points.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    num / den
}
