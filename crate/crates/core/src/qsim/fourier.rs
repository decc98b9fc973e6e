//! Fourier sampling over Z_p^k with hiding-set oracles, computed exactly.
//!
//! Preparing `|A|^-1/2 Σ_a |a⟩|Ψ_a⟩` and Fourier transforming the first register
//! yields y with probability
//!
//! ```text
//!     Pr[y] = |A|^-2 Σ_{a,b} ω^⟨y, b-a⟩ ⟨Ψ_a|Ψ_b⟩
//! ```
//!
//! which, grouping pairs by their difference δ = b - a, is
//! `|A|^-2 Σ_δ W(δ) ω^⟨y,δ⟩` with `W(δ) = Σ_a ⟨Ψ_a|Ψ_{a+δ}⟩`. Identical Ψ lists are
//! collapsed into classes first so each Gram entry is computed once per class pair.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, RandBigInt};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use super::state::{all_vectors, FactorState};
use crate::error::{bail, Result};
use crate::fp::Prime;
use crate::fplinalg::{dot, orthogonal_complement, rank, span_basis, FpMatrix, FpVector};
use crate::{BigCycInt, RatCycInt};

/// Exact outcome distribution over Z_p^k. Only outcomes of nonzero probability are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution {
    pub p: Prime,
    pub k: usize,
    pub outcomes: BTreeMap<FpVector, BigRational>,
}

impl Distribution {
    pub fn prob(&self, y: &[u64]) -> BigRational {
        self.outcomes.get(y).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn total(&self) -> BigRational {
        self.outcomes.values().fold(BigRational::zero(), |a, b| a + b)
    }

    /// Draws an outcome exactly: a uniform integer below the common denominator.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> FpVector {
        let denom = self.outcomes.values().fold(BigInt::one(), |l, r| l.lcm(r.denom()));
        let mut draw = rng.gen_bigint_range(&BigInt::zero(), &denom);
        for (y, pr) in &self.outcomes {
            let weight = pr.numer() * (&denom / pr.denom());
            if draw < weight {
                return y.clone();
            }
            draw -= weight;
        }
        unreachable!("probabilities sum to one")
    }

    /// Whether this is exactly the uniform distribution on the subspace spanned by `basis`.
    pub fn is_uniform_on(&self, basis: &[FpVector]) -> bool {
        let r = rank(&FpMatrix::from_rows(basis, self.k, self.p), self.p);
        let size = BigInt::from(self.p.get()).pow(r as u32);
        let expected = BigRational::new(BigInt::one(), size.clone());
        let span = span_basis(basis, self.k, self.p);
        BigInt::from(self.outcomes.len()) == size
            && self.outcomes.iter().all(|(y, pr)| *pr == expected && crate::fplinalg::in_span(&span, y, self.p))
    }
}

/// Exact Fourier-sampling distribution over Z_p^k for the family `psi`.
///
/// Fails with an internal error if a Gram entry or an outcome probability is not
/// rational, which cannot happen when `psi` is a hiding set.
pub fn fourier_sample_distribution(
    p: Prime,
    k: usize,
    psi: &(dyn Fn(&[u64]) -> Vec<FactorState> + Sync),
    bound: usize,
) -> Result<Distribution> {
    let size = (p.get() as u128).pow(k as u32);
    if size > bound as u128 {
        bail!(Resource, "Fourier domain of size {size} exceeds bound {bound}");
    }
    let pu = p.get();
    let points: Vec<FpVector> = all_vectors(pu, k).collect();

    let mut class_of: HashMap<Vec<FactorState>, usize> = HashMap::new();
    let mut classes: Vec<(Vec<FactorState>, Vec<usize>)> = Vec::new();
    for (idx, a) in points.iter().enumerate() {
        let states = psi(a);
        match class_of.get(&states) {
            Some(&c) => classes[c].1.push(idx),
            None => {
                class_of.insert(states.clone(), classes.len());
                classes.push((states, vec![idx]));
            }
        }
    }
    drop(class_of);

    let norms: Vec<BigInt> =
        classes.iter().map(|(st, _)| st.iter().fold(BigInt::one(), |acc, s| acc * BigInt::from(s.norm_sq()))).collect();
    if norms.iter().any(|n| n.is_zero()) {
        bail!(Precondition, "hiding family contains a zero vector");
    }

    let diff = |a: &FpVector, b: &FpVector| -> FpVector { a.iter().zip(b).map(|(&x, &y)| p.sub(y, x)).collect() };
    let mut weights: HashMap<FpVector, RatCycInt> = HashMap::new();
    let mut add_weight = |delta: FpVector, w: &RatCycInt| {
        weights.entry(delta).and_modify(|acc| *acc += w).or_insert_with(|| w.clone());
    };

    // within a class the normalized states coincide: Gram entry 1
    let one = RatCycInt::one(pu);
    for (_, members) in &classes {
        for &a in members {
            for &b in members {
                add_weight(diff(&points[a], &points[b]), &one);
            }
        }
    }

    for c in 0..classes.len() {
        for d in c + 1..classes.len() {
            let Some(gram) = normalized_gram(&classes[c].0, &classes[d].0, &norms[c], &norms[d])? else {
                continue;
            };
            let gram_conj = gram.conj();
            for &a in &classes[c].1 {
                for &b in &classes[d].1 {
                    add_weight(diff(&points[a], &points[b]), &gram);
                    add_weight(diff(&points[b], &points[a]), &gram_conj);
                }
            }
        }
    }

    let scale = BigRational::new(BigInt::one(), BigInt::from(size) * BigInt::from(size));
    let mut outcomes = BTreeMap::new();
    for y in &points {
        let mut acc = RatCycInt::zero(pu);
        for (delta, w) in &weights {
            acc += &w.mul_omega(dot(y, delta, p) as i64);
        }
        let Some(v) = acc.as_scalar() else {
            bail!(Internal, "probability of outcome {y:?} is not rational");
        };
        let v = v * &scale;
        if v.is_negative() {
            bail!(Internal, "negative probability for outcome {y:?}");
        }
        if !v.is_zero() {
            outcomes.insert(y.clone(), v);
        }
    }
    let dist = Distribution { p, k, outcomes };
    if dist.total() != BigRational::one() {
        bail!(Internal, "outcome probabilities do not sum to one");
    }
    Ok(dist)
}

/// `⟨Ψ_C|Ψ_D⟩ / (‖Ψ_C‖ ‖Ψ_D‖)` as an element of Q(ω), or None when it vanishes.
fn normalized_gram(
    a: &[FactorState],
    b: &[FactorState],
    norm_a: &BigInt,
    norm_b: &BigInt,
) -> Result<Option<RatCycInt>> {
    let p = a.first().map(FactorState::modulus).unwrap_or(2);
    let mut prod = BigCycInt::one(p);
    for (x, y) in a.iter().zip(b) {
        let ip = x.inner(y);
        if ip.is_zero() {
            return Ok(None);
        }
        prod = &prod * &ip.map(|&c| BigInt::from(c));
    }
    let norm2 = norm_a * norm_b;
    let root = norm2.sqrt();
    if &root * &root != norm2 {
        bail!(Internal, "Gram normalization {norm2} is not a perfect square");
    }
    Ok(Some(prod.map(|c| BigRational::new(c.clone(), root.clone()))))
}

/// Outcome of [`abelian_hsp`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianHspResult {
    /// Basis of the recovered subgroup of Z_p^k.
    pub basis: Vec<FpVector>,
    pub samples: usize,
}

/// Standard abelian hidden-subgroup loop: draw characters y from `dist`, keep
/// their span, and stop once the span has not grown for k consecutive draws.
/// Returns the orthogonal complement of the span.
///
/// The drawn y all lie in the annihilator of the hidden subgroup, so a premature
/// stop can only return a supergroup of it. Callers verify the result.
pub fn abelian_hsp<R: Rng + ?Sized>(dist: &Distribution, budget: usize, rng: &mut R) -> Result<AbelianHspResult> {
    let (p, k) = (dist.p, dist.k);
    let mut span: Vec<FpVector> = Vec::new();
    let mut current_rank = 0;
    let mut stable = 0;
    let mut samples = 0;
    while stable < k {
        if samples == budget {
            bail!(Retryable, "abelian HSP sample budget {budget} exhausted");
        }
        let y = dist.sample(rng);
        samples += 1;
        span.push(y);
        let r = rank(&FpMatrix::from_rows(&span, k, p), p);
        if r > current_rank {
            current_rank = r;
            span = span_basis(&span, k, p);
            stable = 0;
        } else {
            span.pop();
            stable += 1;
        }
    }
    Ok(AbelianHspResult { basis: orthogonal_complement(&span, k, p), samples })
}

/// Default sample budget, 20·k draws (at least one).
pub fn default_budget(k: usize) -> usize {
    (20 * k).max(1)
}
