//! The hiding procedure for HG' and the full hidden-subgroup pipeline.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use rand::Rng;

use super::fourier::{abelian_hsp, default_budget, fourier_sample_distribution, Distribution};
use super::state::{coset_state_family_from_coset, FactorState};
use crate::error::{bail, Error, Result};
use crate::fplinalg::{FpMatrix, FpVector};
use crate::nil2::{Element, GroupSpec, DEFAULT_BOUND};
use crate::quadsys::{full_bound, solve_full_system, QuadLinSystem};

/// A classical hiding function on a nil-2 group, labels being group elements.
pub type HidingFn<'a> = dyn Fn(&Element) -> Element + Sync + 'a;

/// The oracle as seen by the simulator: the function together with its fibres,
/// which stand in for the post-measurement coset states `|aH⟩`.
pub struct HspOracle<'a> {
    group: &'a GroupSpec,
    f: &'a HidingFn<'a>,
    fibres: BTreeMap<Element, Vec<Element>>,
}

impl<'a> HspOracle<'a> {
    pub fn new(group: &'a GroupSpec, f: &'a HidingFn<'a>, bound: usize) -> Result<Self> {
        let fibres = crate::nil2::fibres(group, f, bound)?;
        let sizes: Vec<usize> = fibres.values().map(Vec::len).collect();
        if sizes.windows(2).any(|w| w[0] != w[1]) {
            bail!(Precondition, "function is not constant-size on fibres, so it hides no subgroup");
        }
        let p = group.p().get() as usize;
        if sizes[0] != 1 && sizes[0] != p {
            bail!(Precondition, "hidden subgroup has order {}, promise requires 1 or {p}", sizes[0]);
        }
        Ok(HspOracle { group, f, fibres })
    }

    pub fn group(&self) -> &GroupSpec {
        self.group
    }

    pub fn eval(&self, g: &Element) -> Element {
        (self.f)(g)
    }

    /// The coset `aH` observed after evaluating f on `a`.
    pub fn coset_of(&self, a: &Element) -> &[Element] {
        &self.fibres[&(self.f)(a)]
    }
}

/// Parameters (ā, ū, j̄) of the hiding procedure, plus the prepared base states
/// `|a_i H G'_{u_i}⟩`.
#[derive(Debug, Clone)]
pub struct HidingTuple {
    pub a_list: Vec<Element>,
    pub u_list: Vec<FpVector>,
    pub j_list: FpVector,
    pub bases: Vec<FactorState>,
}

impl HidingTuple {
    /// Whether (ū, j̄) solves both halves of the quadratic-linear system with j̄ ≠ 0.
    pub fn is_solution(&self, group: &GroupSpec) -> bool {
        let sys = QuadLinSystem::new(group.p(), FpMatrix::from_columns(&self.u_list, group.d(), group.p()));
        sys.is_solution(&self.j_list)
    }
}

/// Samples a_i uniformly, measures u_i from the exact sector distribution of
/// `|a_i H G'_u⟩`, and solves for j̄ with the full-system solver.
pub fn make_appropriate_triple<R: Rng + ?Sized>(oracle: &HspOracle<'_>, rng: &mut R) -> Result<HidingTuple> {
    let group = oracle.group();
    let (p, d) = (group.p(), group.d());
    let n = full_bound(d);
    let (mut a_list, mut u_list, mut bases) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    for _ in 0..n {
        let a = group.random_element(rng);
        let sectors = coset_state_family_from_coset(group, oracle.coset_of(&a))?;
        let dist = Distribution {
            p,
            k: d,
            outcomes: sectors
                .iter()
                .filter(|s| s.state.norm_sq() > 0)
                .map(|s| (s.u.clone(), s.probability.clone()))
                .collect(),
        };
        let u = dist.sample(rng);
        let sector = sectors.into_iter().find(|s| s.u == u).expect("sampled u is a sector");
        a_list.push(a);
        u_list.push(u);
        bases.push(sector.state);
    }
    let sys = QuadLinSystem::new(p, FpMatrix::from_columns(&u_list, d, p));
    let j_list = solve_full_system(&sys, rng)?.j;
    Ok(HidingTuple { a_list, u_list, j_list, bases })
}

/// `Ψ_g = ⊗_i |a_i H G'_{u_i} · φ_{j_i}(g)⟩`, as its list of tensor factors.
pub fn hiding_state(group: &GroupSpec, t: &HidingTuple, g: &Element) -> Vec<FactorState> {
    t.bases.iter().zip(&t.j_list).map(|(b, &j)| b.act(group, &group.phi(j, g))).collect()
}

/// Product of factorwise inner products, `⟨Ψ|Φ⟩` for tensor product states.
pub fn tensor_inner(a: &[FactorState], b: &[FactorState]) -> crate::BigCycInt {
    let p = a.first().map(FactorState::modulus).unwrap_or(2);
    a.iter().zip(b).fold(crate::BigCycInt::one(p), |acc, (x, y)| {
        let ip = x.inner(y);
        &acc * &ip.map(|&c| num_bigint::BigInt::from(c))
    })
}

/// Whether two product states are equal as tensors: factorwise equal up to
/// phases ω^{k_i} with Σ k_i = 0.
pub fn tensor_eq(a: &[FactorState], b: &[FactorState]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let p = a.first().map(FactorState::modulus).unwrap_or(2) as i64;
    let mut total = 0;
    for (x, y) in a.iter().zip(b) {
        match x.phase_relative_to(y) {
            Some(k) => total += k,
            None => return false,
        }
    }
    total.rem_euclid(p) == 0
}

/// Whether `hiding_state(g)` equals the base tensor for every g in `hg`.
pub fn is_appropriate(group: &GroupSpec, t: &HidingTuple, hg: &[Element]) -> bool {
    hg.iter().all(|g| tensor_eq(&hiding_state(group, t, g), &t.bases))
}

#[derive(Debug, Clone)]
pub struct HspConfig {
    pub bound: usize,
    pub max_attempts: usize,
}

impl Default for HspConfig {
    fn default() -> Self {
        HspConfig { bound: DEFAULT_BOUND, max_attempts: 10 }
    }
}

/// Result of [`find_hidden_subgroup`].
#[derive(Debug, Clone)]
pub struct HspOutcome {
    /// The recovered subgroup, sorted.
    pub subgroup: Vec<Element>,
    pub generators: Vec<Element>,
    /// Number of attempts including the successful one.
    pub attempts: usize,
    /// Fourier samples drawn over all attempts.
    pub samples: usize,
    /// Failure reasons of the discarded attempts.
    pub diagnostics: Vec<String>,
}

/// Finds the hidden subgroup H (|H| ∈ {1, p}) of a nil-2 group of exponent p:
/// hides HG' with an appropriate triple, recovers `HG' ∩ Ḡ` by Fourier sampling
/// over Ḡ ≅ Z_p^m, then recovers H inside the abelian group HG' with the
/// classical oracle. Each attempt's output is verified against f; failed
/// attempts are retried with fresh randomness.
pub fn find_hidden_subgroup<R: Rng + ?Sized>(
    group: &GroupSpec,
    f: &HidingFn<'_>,
    config: &HspConfig,
    rng: &mut R,
) -> Result<HspOutcome> {
    let oracle = HspOracle::new(group, f, config.bound)?;
    let mut diagnostics = Vec::new();
    let mut samples = 0;
    for attempt in 1..=config.max_attempts {
        match attempt_once(&oracle, config, rng, &mut samples) {
            Ok(generators) => {
                let subgroup = group.closure(&generators, config.bound)?;
                return Ok(HspOutcome { subgroup, generators, attempts: attempt, samples, diagnostics });
            }
            Err(Error::Retryable(msg)) => diagnostics.push(msg),
            Err(e) => return Err(e),
        }
    }
    bail!(Retryable, "no verified subgroup after {} attempts: {}", config.max_attempts, diagnostics.join("; "))
}

fn attempt_once<R: Rng + ?Sized>(
    oracle: &HspOracle<'_>,
    config: &HspConfig,
    rng: &mut R,
    samples: &mut usize,
) -> Result<Vec<Element>> {
    let group = oracle.group();
    let (p, m, d) = (group.p(), group.m(), group.d());

    let triple = make_appropriate_triple(oracle, rng)?;
    if !triple.is_solution(group) {
        bail!(Internal, "hiding tuple does not solve its system");
    }

    // HG' ∩ Ḡ inside Ḡ ≅ Z_p^m
    let psi = |a: &[u64]| hiding_state(group, &triple, &group.lift(a));
    let dist = fourier_sample_distribution(p, m, &psi, config.bound)?;
    let bar_part = abelian_hsp(&dist, default_budget(m), rng)?;
    *samples += bar_part.samples;

    // HG' is generated by the lifted basis and the central generators
    let mut gens: Vec<Element> = bar_part.basis.iter().map(|b| group.lift(b)).collect();
    gens.extend((0..d).map(|k| group.z(k)));
    let r = gens.len();
    let hg = group.closure(&gens, config.bound)?;
    if !group.is_abelian_set(&gens) {
        bail!(Retryable, "candidate HG' is not abelian");
    }
    let expected = (p.get() as u128).pow(r as u32);
    if hg.len() as u128 != expected {
        bail!(Retryable, "candidate HG' has order {} rather than p^{r}", hg.len());
    }

    // H inside HG' ≅ Z_p^r with the classical oracle
    let embed = |lambda: &[u64]| -> Element {
        gens.iter().zip(lambda).fold(group.identity(), |acc, (g, &l)| group.mul(&acc, &group.pow(g, l as i64)))
    };
    let classical = |lambda: &[u64]| vec![FactorState::basis(p.get(), oracle.eval(&embed(lambda)))];
    let dist = fourier_sample_distribution(p, r, &classical, config.bound)?;
    let h_part = abelian_hsp(&dist, default_budget(r), rng)?;
    *samples += h_part.samples;

    let generators: Vec<Element> = h_part.basis.iter().map(|k| embed(k)).collect();
    let at_identity = oracle.eval(&group.identity());
    if generators.iter().any(|h| oracle.eval(h) != at_identity) {
        bail!(Retryable, "recovered generator outside the hidden subgroup");
    }
    let size = group.closure(&generators, config.bound)?.len();
    if size != 1 && size.to_u64() != Some(p.get()) {
        bail!(Retryable, "recovered subgroup has order {size}");
    }
    Ok(generators)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp::Prime;
    use crate::nil2::{hiding_function, random_group, random_hidden_subgroup};
    use crate::qsim::state::phase;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup(p: u64, m: usize, d: usize, order: u64, seed: u64) -> (GroupSpec, Vec<Element>, ChaCha8Rng) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_group(Prime::new(p).unwrap(), m, d, &mut rng).unwrap();
        let h = random_hidden_subgroup(&g, order, &mut rng).unwrap();
        (g, h, rng)
    }

    #[test]
    fn triple_solves_and_hides_hg() {
        for seed in 0..6 {
            let (g, h, mut rng) = setup(3, 3, 2, 3, seed);
            let f = hiding_function(&g, &h, DEFAULT_BOUND).unwrap();
            let oracle = HspOracle::new(&g, &f, DEFAULT_BOUND).unwrap();
            let t = make_appropriate_triple(&oracle, &mut rng).unwrap();
            assert!(t.is_solution(&g));
            let mut gens = h.clone();
            gens.extend((0..g.d()).map(|k| g.z(k)));
            let hg = g.closure(&gens, DEFAULT_BOUND).unwrap();
            assert!(is_appropriate(&g, &t, &hg));
        }
    }

    #[test]
    fn h_acts_on_factors_by_central_phase() {
        // φ_j(h) = h^j z_h^(j - j²) and h fixes |aHG'_u⟩, so only the central part acts
        let (g, h, mut rng) = setup(5, 2, 1, 5, 3);
        let f = hiding_function(&g, &h, DEFAULT_BOUND).unwrap();
        let oracle = HspOracle::new(&g, &f, DEFAULT_BOUND).unwrap();
        let t = make_appropriate_triple(&oracle, &mut rng).unwrap();
        let p = g.p();
        for x in g.closure(&h, DEFAULT_BOUND).unwrap() {
            let z = g.z_of(&x).f;
            for ((base, u), &j) in t.bases.iter().zip(&t.u_list).zip(&t.j_list) {
                let k = phase(u, &z, p) * (j as i64 - (j * j) as i64);
                assert_eq!(base.act(&g, &g.phi(j, &x)), base.mul_omega(k));
            }
        }
    }

    #[test]
    fn recovers_hidden_subgroup() {
        for (p, m, d, order, seed) in
            [(3, 2, 1, 3, 1), (3, 2, 1, 1, 2), (3, 3, 2, 3, 3), (5, 2, 1, 5, 4), (3, 3, 1, 3, 5)]
        {
            let (g, h, mut rng) = setup(p, m, d, order, seed);
            let f = hiding_function(&g, &h, DEFAULT_BOUND).unwrap();
            let out = find_hidden_subgroup(&g, &f, &HspConfig::default(), &mut rng).unwrap();
            assert_eq!(out.subgroup, g.closure(&h, DEFAULT_BOUND).unwrap(), "p={p} m={m} d={d}");
            assert!(out.attempts >= 1 && out.samples > 0);
        }
    }

    #[test]
    fn rejects_large_hidden_subgroup() {
        let (g, _, _) = setup(3, 2, 1, 1, 7);
        let h = vec![g.x(0), g.z(0)];
        let f = hiding_function(&g, &h, DEFAULT_BOUND).unwrap();
        assert!(matches!(HspOracle::new(&g, &f, DEFAULT_BOUND), Err(Error::Precondition(_))));
    }
}
