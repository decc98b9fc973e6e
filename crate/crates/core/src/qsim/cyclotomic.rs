//! Exact arithmetic in Z[ω] (and Q[ω]) for ω a primitive p-th root of unity.
//!
//! Elements are stored as coefficient vectors of length p over `1, ω, …, ω^(p-1)`
//! and kept canonical by the relation `1 + ω + … + ω^(p-1) = 0`: the last
//! coefficient is subtracted from all others, leaving it zero. Canonical forms
//! are unique, so equality is exact.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_traits::{Num, Zero};

/// Coefficient rings usable in [`Cyclotomic`].
pub trait Coeff: Num + Clone + Neg<Output = Self> {}
impl<T: Num + Clone + Neg<Output = T>> Coeff for T {}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic<T> {
    coeffs: Vec<T>,
}

impl<T: Coeff> Cyclotomic<T> {
    pub fn zero(p: u64) -> Self {
        Cyclotomic { coeffs: vec![T::zero(); p as usize] }
    }

    pub fn one(p: u64) -> Self {
        Self::from_scalar(p, T::one())
    }

    pub fn from_scalar(p: u64, c: T) -> Self {
        let mut z = Self::zero(p);
        z.coeffs[0] = c;
        z.canonicalize();
        z
    }

    /// ω^k for any integer k.
    pub fn omega_pow(p: u64, k: i64) -> Self {
        let mut z = Self::zero(p);
        z.coeffs[k.rem_euclid(p as i64) as usize] = T::one();
        z.canonicalize();
        z
    }

    /// Builds from an arbitrary coefficient vector of length p.
    pub fn from_coeffs(coeffs: Vec<T>) -> Self {
        assert!(coeffs.len() >= 2, "cyclotomic order must be at least 2");
        let mut z = Cyclotomic { coeffs };
        z.canonicalize();
        z
    }

    pub fn order(&self) -> u64 {
        self.coeffs.len() as u64
    }

    /// Canonical coefficients; the last one is always zero.
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    fn canonicalize(&mut self) {
        let last = self.coeffs.last().expect("nonempty").clone();
        if !last.is_zero() {
            for c in &mut self.coeffs {
                *c = c.clone() - last.clone();
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The value as a scalar, if it lies in the base ring.
    pub fn as_scalar(&self) -> Option<T> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| self.coeffs[0].clone())
    }

    /// Multiplication by ω^k: a cyclic shift of the coefficients.
    pub fn mul_omega(&self, k: i64) -> Self {
        let p = self.coeffs.len();
        let k = k.rem_euclid(p as i64) as usize;
        if k == 0 {
            return self.clone();
        }
        let mut out = vec![T::zero(); p];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[(i + k) % p] = c.clone();
        }
        Self::from_coeffs(out)
    }

    /// Complex conjugation, ω^k ↦ ω^-k.
    pub fn conj(&self) -> Self {
        let p = self.coeffs.len();
        let mut out = vec![T::zero(); p];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[(p - i) % p] = c.clone();
        }
        Self::from_coeffs(out)
    }

    pub fn scale(&self, s: &T) -> Self {
        Cyclotomic { coeffs: self.coeffs.iter().map(|c| c.clone() * s.clone()).collect() }
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> Cyclotomic<U> {
        Cyclotomic::from_coeffs(self.coeffs.iter().map(f).collect())
    }

    fn check_order(&self, other: &Self) {
        assert_eq!(self.coeffs.len(), other.coeffs.len(), "mixing cyclotomic orders");
    }
}

impl<T: Coeff> Add for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn add(self, rhs: Self) -> Cyclotomic<T> {
        self.check_order(rhs);
        // both canonical, so the sum has a zero last coefficient too
        Cyclotomic { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a.clone() + b.clone()).collect() }
    }
}

impl<T: Coeff> Sub for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn sub(self, rhs: Self) -> Cyclotomic<T> {
        self.check_order(rhs);
        Cyclotomic { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a.clone() - b.clone()).collect() }
    }
}

impl<T: Coeff> Neg for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn neg(self) -> Cyclotomic<T> {
        Cyclotomic { coeffs: self.coeffs.iter().map(|a| -a.clone()).collect() }
    }
}

impl<T: Coeff> Mul for &Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn mul(self, rhs: Self) -> Cyclotomic<T> {
        self.check_order(rhs);
        let p = self.coeffs.len();
        let mut out = vec![T::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let k = (i + j) % p;
                out[k] = out[k].clone() + a.clone() * b.clone();
            }
        }
        Cyclotomic::from_coeffs(out)
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl<T: Coeff> $tr for Cyclotomic<T> {
            type Output = Cyclotomic<T>;
            fn $m(self, rhs: Self) -> Cyclotomic<T> {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl<T: Coeff> Neg for Cyclotomic<T> {
    type Output = Cyclotomic<T>;
    fn neg(self) -> Cyclotomic<T> {
        -&self
    }
}

impl<T: Coeff> AddAssign<&Cyclotomic<T>> for Cyclotomic<T> {
    fn add_assign(&mut self, rhs: &Cyclotomic<T>) {
        self.check_order(rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a = a.clone() + b.clone();
        }
    }
}

impl<T: Coeff + fmt::Display> fmt::Debug for Cyclotomic<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| if i == 0 { format!("{c}") } else { format!("{c}·ω^{i}") })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}
