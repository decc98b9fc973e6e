//! Arithmetic in the prime field Z_p together with the quadratic-residue toolkit:
//! Euler's criterion, nonresidue search, Tonelli–Shanks square roots and the two
//! small diagonal-form solvers the recursive system solver bottoms out in.
//!
//! Field elements are plain `u64` values in `[0, p)`; the modulus travels with the
//! [`Prime`] handle rather than with every value.

use std::fmt;

use rand::Rng;

use crate::error::{bail, Error, Result};

/// An element of Z_p, always reduced into `[0, p)`.
pub type FpElem = u64;

/// Largest modulus accepted by [`Prime::new`].
pub const MAX_PRIME: u64 = 1 << 61;

/// A prime modulus, verified at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if p > MAX_PRIME {
            bail!(Precondition, "modulus {p} exceeds 2^61");
        }
        if !is_prime(p) {
            bail!(Precondition, "{p} is not prime");
        }
        Ok(Prime(p))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn is_odd(self) -> bool {
        self.0 != 2
    }

    /// Reduces an arbitrary signed integer into `[0, p)`.
    #[inline]
    pub fn reduce(self, a: i128) -> FpElem {
        a.rem_euclid(self.0 as i128) as u64
    }

    #[inline]
    pub fn add(self, a: FpElem, b: FpElem) -> FpElem {
        let s = a as u128 + b as u128;
        (s % self.0 as u128) as u64
    }

    #[inline]
    pub fn sub(self, a: FpElem, b: FpElem) -> FpElem {
        if a >= b {
            a - b
        } else {
            self.0 - (b - a)
        }
    }

    #[inline]
    pub fn neg(self, a: FpElem) -> FpElem {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: FpElem, b: FpElem) -> FpElem {
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }

    pub fn pow(self, mut base: FpElem, mut exp: u64) -> FpElem {
        let mut acc = 1 % self.0;
        base %= self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(self, a: FpElem) -> Result<FpElem> {
        inv(a, self)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl TryFrom<u64> for Prime {
    type Error = Error;
    fn try_from(p: u64) -> Result<Self> {
        Prime::new(p)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin; the first twelve prime bases are exact below 3.3·10^24.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Multiplicative inverse via the extended Euclidean algorithm.
pub fn inv(a: FpElem, p: Prime) -> Result<FpElem> {
    let a = a % p.get();
    if a == 0 {
        bail!(Domain, "non-invertible: 0 has no inverse mod {p}");
    }
    let (mut r0, mut r1) = (p.get() as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    Ok(p.reduce(t0))
}

fn require_odd_nonzero(a: FpElem, p: Prime, what: &str) -> Result<()> {
    if !p.is_odd() {
        bail!(Domain, "{what} requires an odd prime");
    }
    if a.is_multiple_of(p.get()) {
        bail!(Domain, "{what} is undefined for 0");
    }
    Ok(())
}

/// Euler's criterion: `a^((p-1)/2) == 1`.
pub fn is_qr(a: FpElem, p: Prime) -> Result<bool> {
    require_odd_nonzero(a, p, "quadratic residuosity")?;
    Ok(p.pow(a, (p.get() - 1) / 2) == 1)
}

fn euler(a: FpElem, p: Prime) -> bool {
    p.pow(a, (p.get() - 1) / 2) == 1
}

/// Las Vegas search for a quadratic nonresidue. Half of Z_p^* qualifies, so the
/// expected number of draws is two.
pub fn find_nonresidue<R: Rng + ?Sized>(p: Prime, rng: &mut R) -> Result<FpElem> {
    if !p.is_odd() {
        bail!(Domain, "no quadratic nonresidue exists mod 2");
    }
    loop {
        let cand = rng.gen_range(1..p.get());
        if !euler(cand, p) {
            return Ok(cand);
        }
    }
}

/// Square root mod p by Tonelli–Shanks. Returns the smaller of the two roots.
pub fn sqrt_mod<R: Rng + ?Sized>(a: FpElem, p: Prime, rng: &mut R) -> Result<FpElem> {
    let a = a % p.get();
    if a == 0 {
        return Ok(0);
    }
    if !p.is_odd() {
        return Ok(a);
    }
    if !euler(a, p) {
        bail!(Domain, "{a} is a quadratic nonresidue mod {p}");
    }
    let root = if p.get() % 4 == 3 {
        p.pow(a, (p.get() + 1) / 4)
    } else {
        let lambda = find_nonresidue(p, rng)?;
        tonelli_shanks(a, lambda, p)
    };
    debug_assert_eq!(p.mul(root, root), a);
    Ok(root.min(p.get() - root))
}

/// Tonelli–Shanks given a residue `a` and a known nonresidue `lambda`.
pub fn tonelli_shanks(a: FpElem, lambda: FpElem, p: Prime) -> FpElem {
    let pm1 = p.get() - 1;
    let s = pm1.trailing_zeros();
    let q = pm1 >> s;
    let mut m = s;
    let mut c = p.pow(lambda, q);
    let mut t = p.pow(a, q);
    let mut r = p.pow(a, q.div_ceil(2));
    while t != 1 {
        // least i with t^(2^i) == 1
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = p.mul(t2, t2);
            i += 1;
        }
        let mut b = c;
        for _ in 0..(m - i - 1) {
            b = p.mul(b, b);
        }
        m = i;
        c = p.mul(b, b);
        t = p.mul(t, c);
        r = p.mul(r, b);
    }
    r
}

/// Nontrivial zero of `a x^2 + b y^2 + c z^2` over Z_p, p odd.
///
/// A zero coefficient yields the matching unit vector. Otherwise z is fixed to 1
/// and random y are drawn until `-(c + b y^2) / a` is a square.
pub fn solve_ternary_diagonal<R: Rng + ?Sized>(
    a: FpElem,
    b: FpElem,
    c: FpElem,
    p: Prime,
    rng: &mut R,
) -> Result<(FpElem, FpElem, FpElem)> {
    if !p.is_odd() {
        bail!(Domain, "ternary diagonal solver requires an odd prime");
    }
    let (a, b, c) = (a % p.get(), b % p.get(), c % p.get());
    if a == 0 {
        return Ok((1, 0, 0));
    }
    if b == 0 {
        return Ok((0, 1, 0));
    }
    if c == 0 {
        return Ok((0, 0, 1));
    }
    let a_inv = inv(a, p)?;
    loop {
        let y = rng.gen_range(0..p.get());
        let rhs = p.mul(p.neg(p.add(c, p.mul(b, p.mul(y, y)))), a_inv);
        if rhs == 0 || euler(rhs, p) {
            let x = sqrt_mod(rhs, p, rng)?;
            return Ok((x, y, 1));
        }
    }
}

/// Solves `x^2 + alpha y^2 + b = 0` over Z_p, p odd, alpha nonzero.
///
/// A nondegenerate binary form represents every element of Z_p, so a solution
/// always exists; it is found by the same randomized search as the ternary case.
pub fn solve_binary_inhomogeneous<R: Rng + ?Sized>(
    alpha: FpElem,
    b: FpElem,
    p: Prime,
    rng: &mut R,
) -> Result<(FpElem, FpElem)> {
    if !p.is_odd() {
        bail!(Domain, "binary solver requires an odd prime");
    }
    let (alpha, b) = (alpha % p.get(), b % p.get());
    if alpha == 0 {
        bail!(Domain, "binary form coefficient alpha must be nonzero");
    }
    if b == 0 {
        return Ok((0, 0));
    }
    loop {
        let y = rng.gen_range(0..p.get());
        let rhs = p.neg(p.add(b, p.mul(alpha, p.mul(y, y))));
        if rhs == 0 || euler(rhs, p) {
            let x = sqrt_mod(rhs, p, rng)?;
            return Ok((x, y));
        }
    }
}
