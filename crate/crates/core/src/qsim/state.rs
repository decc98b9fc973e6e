//! Sparse unnormalized states over a nil-2 group with cyclotomic amplitudes.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{bail, Result};
use crate::fplinalg::{dot, FpVector};
use crate::nil2::{Element, GroupSpec};
use crate::CycInt;

/// `Σ amp(g)|g⟩`, stored without the global normalization. `norm_sq` is the
/// exact squared norm, an integer because the amplitudes are algebraic integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FactorState {
    p: u64,
    amps: BTreeMap<Element, CycInt>,
    norm_sq: i64,
}

impl std::fmt::Debug for FactorState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FactorState").field("support", &self.amps.len()).field("norm_sq", &self.norm_sq).finish()
    }
}

impl FactorState {
    /// Builds a state from amplitudes, dropping zeros and computing the norm.
    pub fn from_amplitudes(p: u64, amps: impl IntoIterator<Item = (Element, CycInt)>) -> Result<Self> {
        let amps: BTreeMap<Element, CycInt> = amps.into_iter().filter(|(_, a)| !a.is_zero()).collect();
        let mut s = FactorState { p, amps, norm_sq: 0 };
        let n = s.inner(&s);
        match n.as_scalar() {
            Some(v) => s.norm_sq = v,
            None => bail!(Internal, "squared norm {n:?} is not rational"),
        }
        Ok(s)
    }

    /// The basis state `|g⟩`.
    pub fn basis(p: u64, g: Element) -> Self {
        FactorState { p, amps: BTreeMap::from([(g, CycInt::one(p))]), norm_sq: 1 }
    }

    /// The p of the amplitudes' cyclotomic ring.
    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn norm_sq(&self) -> i64 {
        self.norm_sq
    }

    pub fn support(&self) -> impl Iterator<Item = &Element> {
        self.amps.keys()
    }

    pub fn support_len(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitude(&self, g: &Element) -> Option<&CycInt> {
        self.amps.get(g)
    }

    pub fn amplitudes(&self) -> impl Iterator<Item = (&Element, &CycInt)> {
        self.amps.iter()
    }

    /// Right multiplication of every basis element by `g`. A permutation of
    /// the support, so the norm is unchanged.
    pub fn act(&self, group: &GroupSpec, g: &Element) -> FactorState {
        if g.is_identity() {
            return self.clone();
        }
        FactorState {
            p: self.p,
            amps: self.amps.iter().map(|(s, a)| (group.mul(s, g), a.clone())).collect(),
            norm_sq: self.norm_sq,
        }
    }

    /// The k in `0..p` with `self = ω^k · other`, if any.
    pub fn phase_relative_to(&self, other: &FactorState) -> Option<i64> {
        (0..self.p as i64).find(|&k| *self == other.mul_omega(k))
    }

    /// Global phase ω^k.
    pub fn mul_omega(&self, k: i64) -> FactorState {
        FactorState {
            p: self.p,
            amps: self.amps.iter().map(|(s, a)| (s.clone(), a.mul_omega(k))).collect(),
            norm_sq: self.norm_sq,
        }
    }

    /// `⟨self|other⟩ = Σ conj(self(g)) other(g)`.
    pub fn inner(&self, other: &FactorState) -> CycInt {
        let mut acc = CycInt::zero(self.p);
        let (small, large, flip) =
            if self.amps.len() <= other.amps.len() { (self, other, false) } else { (other, self, true) };
        for (g, a) in &small.amps {
            if let Some(b) = large.amps.get(g) {
                let term = if flip { &b.conj() * a } else { &a.conj() * b };
                acc += &term;
            }
        }
        acc
    }
}

/// One outcome of the coset-state preparation: the measured u, the resulting
/// state and its exact probability.
#[derive(Debug, Clone)]
pub struct CosetSector {
    pub u: FpVector,
    pub state: FactorState,
    pub probability: BigRational,
}

/// All sectors `Σ_{x ∈ coset, z} ω^(-⟨u,z⟩) |x z⟩` of the Fourier-twisted state
/// over the given coset `aH`, one per u in Z_p^d, in lexicographic order of u.
///
/// Probabilities are the normalized squared norms; zero-norm sectors carry
/// probability 0 and an empty state.
pub fn coset_state_family_from_coset(group: &GroupSpec, coset: &[Element]) -> Result<Vec<CosetSector>> {
    let p = group.p();
    let d = group.d();
    let count = (p.get() as usize).pow(d as u32);
    let zs: Vec<FpVector> = (0..count).map(|i| digits(i, p.get(), d)).collect();
    let mut sectors = Vec::with_capacity(count);
    for u in &zs {
        let mut amps: BTreeMap<Element, CycInt> = BTreeMap::new();
        for x in coset {
            for z in zs.iter() {
                let phase = -(dot(u, z, p) as i64);
                let target = group.mul(x, &group.central(z));
                let w = CycInt::omega_pow(p.get(), phase);
                amps.entry(target).and_modify(|a| *a += &w).or_insert(w);
            }
        }
        let state = FactorState::from_amplitudes(p.get(), amps)?;
        sectors.push(CosetSector { u: u.clone(), state, probability: BigRational::from_integer(0.into()) });
    }
    let total: i64 = sectors.iter().map(|s| s.state.norm_sq()).sum();
    if total == 0 {
        bail!(Internal, "coset state family has zero total norm");
    }
    for s in &mut sectors {
        s.probability = BigRational::new(BigInt::from(s.state.norm_sq()), BigInt::from(total));
    }
    Ok(sectors)
}

/// [`coset_state_family_from_coset`] for the coset `a·H`, H given by its elements.
pub fn coset_state_family(group: &GroupSpec, subgroup: &[Element], a: &Element) -> Result<Vec<CosetSector>> {
    let coset: Vec<Element> = subgroup.iter().map(|h| group.mul(a, h)).collect();
    coset_state_family_from_coset(group, &coset)
}

/// Base-p digits of `idx`, most significant first.
pub(crate) fn digits(mut idx: usize, p: u64, len: usize) -> FpVector {
    let mut v = vec![0; len];
    for x in v.iter_mut().rev() {
        *x = idx as u64 % p;
        idx /= p as usize;
    }
    v
}

/// All vectors of Z_p^k in lexicographic order.
pub fn all_vectors(p: u64, k: usize) -> impl Iterator<Item = FpVector> {
    (0..(p as usize).pow(k as u32)).map(move |i| digits(i, p, k))
}

/// `⟨u, z⟩` as an exponent of ω.
#[cfg(test)]
pub(crate) fn phase(u: &[crate::FpElem], z: &[crate::FpElem], p: crate::Prime) -> i64 {
    dot(u, z, p) as i64
}
