//! Nil-2 p-groups of exponent p given by structure constants.
//!
//! Every element has the unique normal form `x_1^e_1 ... x_m^e_m z_1^f_1 ... z_d^f_d`
//! with the z's central. Generators satisfy `[x_j, x_i] = z^c(i,j)` for i < j, so
//! moving `x_i^b` left past `x_j^a` costs `z^(a b c(i,j))` and the product is
//!
//! ```text
//!     (e, f)(e', f') = (e + e', f + f' + sum_{i<j} e_j e'_i c(i,j))
//! ```

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use rand::Rng;
use smallvec::SmallVec;

use crate::error::{bail, Error, Result};
use crate::fp::{FpElem, Prime};
use crate::fplinalg::{rank, FpMatrix, FpVector};
use crate::quadsys::{join, parse_ints};

/// Default cap on enumerated subgroup and group sizes.
pub const DEFAULT_BOUND: usize = 1_000_000;

pub type Coords = SmallVec<[FpElem; 6]>;

/// Normal-form element: exponents of the x's and of the z's.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    pub e: Coords,
    pub f: Coords,
}

impl Element {
    pub fn new(e: &[FpElem], f: &[FpElem]) -> Self {
        Element { e: e.iter().copied().collect(), f: f.iter().copied().collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.e.iter().chain(&self.f).all(|&x| x == 0)
    }

    /// Whether the element lies in the derived subgroup (its x-part vanishes).
    pub fn is_central(&self) -> bool {
        self.e.iter().all(|&x| x == 0)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "({}|{})", join(&self.e), join(&self.f))
    }
}

/// The image of an element in the abelian group `Ḡ ≅ Z_p^m`: its x-exponents.
pub type BarElement = FpVector;

/// A nil-2 group of exponent p with parameters (m, d).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    p: Prime,
    m: usize,
    d: usize,
    /// `consts[pair_index(i, j)]` is c(i, j) for 0-based i < j.
    consts: Vec<FpVector>,
}

fn pair_index(m: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < m);
    // pairs (0,1),(0,2),...,(0,m-1),(1,2),...
    i * (2 * m - i - 1) / 2 + (j - i - 1)
}

impl GroupSpec {
    /// Builds a group from structure constants listed in lexicographic (i, j) order.
    ///
    /// Requires p odd, `d <= m(m-1)/2` and that the constants span Z_p^d.
    pub fn new(p: Prime, m: usize, d: usize, consts: Vec<FpVector>) -> Result<Self> {
        if !p.is_odd() {
            bail!(Precondition, "nil-2 groups of exponent 2 are abelian; p must be odd");
        }
        if m == 0 {
            bail!(Precondition, "m must be at least 1");
        }
        let pairs = m * (m - 1) / 2;
        if d > pairs {
            bail!(Precondition, "d = {d} exceeds m(m-1)/2 = {pairs}");
        }
        if consts.len() != pairs {
            bail!(Precondition, "expected {pairs} structure constants, got {}", consts.len());
        }
        if consts.iter().any(|c| c.len() != d) {
            bail!(Precondition, "structure constants must have length d = {d}");
        }
        let consts: Vec<FpVector> = consts.into_iter().map(|c| c.into_iter().map(|x| x % p.get()).collect()).collect();
        if d > 0 && rank(&FpMatrix::from_rows(&consts, d, p), p) < d {
            bail!(Precondition, "structure constants do not span Z_p^{d}");
        }
        Ok(GroupSpec { p, m, d, consts })
    }

    /// The Heisenberg group of order p^3: m = 2, d = 1, c(1,2) = 1.
    pub fn heisenberg(p: Prime) -> Result<Self> {
        GroupSpec::new(p, 2, 1, vec![vec![1]])
    }

    /// The elementary abelian group Z_p^m.
    pub fn elementary_abelian(p: Prime, m: usize) -> Result<Self> {
        GroupSpec::new(p, m, 0, vec![vec![]; m * (m.max(1) - 1) / 2])
    }

    pub fn p(&self) -> Prime {
        self.p
    }
    pub fn m(&self) -> usize {
        self.m
    }
    pub fn d(&self) -> usize {
        self.d
    }

    /// c(i, j) for 0-based generator indices i < j.
    pub fn structure_constant(&self, i: usize, j: usize) -> &[FpElem] {
        &self.consts[pair_index(self.m, i, j)]
    }

    pub fn order(&self) -> u128 {
        (self.p.get() as u128).pow((self.m + self.d) as u32)
    }

    pub fn identity(&self) -> Element {
        Element { e: SmallVec::from_elem(0, self.m), f: SmallVec::from_elem(0, self.d) }
    }

    /// Generator x_i, 0-based.
    pub fn x(&self, i: usize) -> Element {
        let mut g = self.identity();
        g.e[i] = 1;
        g
    }

    /// Central generator z_k, 0-based.
    pub fn z(&self, k: usize) -> Element {
        let mut g = self.identity();
        g.f[k] = 1;
        g
    }

    /// The central element with f-part `f`.
    pub fn central(&self, f: &[FpElem]) -> Element {
        Element { e: SmallVec::from_elem(0, self.m), f: f.iter().map(|&x| x % self.p.get()).collect() }
    }

    pub fn check(&self, g: &Element) -> Result<()> {
        if g.e.len() != self.m || g.f.len() != self.d {
            bail!(Precondition, "element {g} does not match parameters (m, d) = ({}, {})", self.m, self.d);
        }
        if g.e.iter().chain(&g.f).any(|&x| x >= self.p.get()) {
            bail!(Precondition, "element {g} is not reduced mod {}", self.p);
        }
        Ok(())
    }

    /// `sum_{i<j} a_j b_i c(i,j)`: the f-correction of the product of x-parts a and b.
    fn cross(&self, a: &[FpElem], b: &[FpElem]) -> Coords {
        let p = self.p;
        let mut out: Coords = SmallVec::from_elem(0, self.d);
        if self.d == 0 {
            return out;
        }
        for (i, &bi) in b.iter().enumerate().take(self.m) {
            if bi == 0 {
                continue;
            }
            for (j, &aj) in a.iter().enumerate().take(self.m).skip(i + 1) {
                let w = p.mul(aj, bi);
                if w == 0 {
                    continue;
                }
                for (o, &c) in out.iter_mut().zip(self.structure_constant(i, j)) {
                    *o = p.add(*o, p.mul(w, c));
                }
            }
        }
        out
    }

    /// `Q(e) = sum_{i<j} e_j e_i c(i,j)`.
    pub fn quadratic_part(&self, e: &[FpElem]) -> Coords {
        self.cross(e, e)
    }

    pub fn mul(&self, g: &Element, h: &Element) -> Element {
        let p = self.p;
        let corr = self.cross(&g.e, &h.e);
        Element {
            e: g.e.iter().zip(&h.e).map(|(&a, &b)| p.add(a, b)).collect(),
            f: g.f.iter().zip(&h.f).zip(&corr).map(|((&a, &b), &c)| p.add(p.add(a, b), c)).collect(),
        }
    }

    /// Checked multiplication for elements of unknown provenance.
    pub fn try_mul(&self, g: &Element, h: &Element) -> Result<Element> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.mul(g, h))
    }

    /// `g^k = (k e, k f + C(k,2) Q(e))`, for any integer k.
    pub fn pow(&self, g: &Element, k: i64) -> Element {
        let p = self.p;
        let k = p.reduce(k as i128);
        let binom = p.reduce((k as i128) * (k as i128 - 1) / 2);
        let q = self.quadratic_part(&g.e);
        Element {
            e: g.e.iter().map(|&a| p.mul(k, a)).collect(),
            f: g.f.iter().zip(&q).map(|(&a, &b)| p.add(p.mul(k, a), p.mul(binom, b))).collect(),
        }
    }

    /// `g^-1 = (-e, -f + Q(e))`.
    pub fn inv(&self, g: &Element) -> Element {
        let p = self.p;
        let q = self.quadratic_part(&g.e);
        Element {
            e: g.e.iter().map(|&a| p.neg(a)).collect(),
            f: g.f.iter().zip(&q).map(|(&a, &b)| p.sub(b, a)).collect(),
        }
    }

    /// `[g, h] = g^-1 h^-1 g h`.
    pub fn commutator(&self, g: &Element, h: &Element) -> Element {
        let gi = self.inv(g);
        let hi = self.inv(h);
        self.mul(&self.mul(&gi, &hi), &self.mul(g, h))
    }

    /// The endomorphism extending `x_i -> x_i^j`: `(e, f) -> (j e, j^2 f)`.
    /// `phi(0, g)` is the identity element.
    pub fn phi(&self, j: FpElem, g: &Element) -> Element {
        let p = self.p;
        let j = j % p.get();
        let j2 = p.mul(j, j);
        Element { e: g.e.iter().map(|&a| p.mul(j, a)).collect(), f: g.f.iter().map(|&a| p.mul(j2, a)).collect() }
    }

    /// The unique central `z_g` with `phi(j, g) = g^j z_g^(j - j^2)` for all j:
    /// `z_g = (0, Q(e)/2 - f)`.
    pub fn z_of(&self, g: &Element) -> Element {
        let p = self.p;
        let half = p.inv(2).expect("p is odd");
        let q = self.quadratic_part(&g.e);
        Element {
            e: SmallVec::from_elem(0, self.m),
            f: g.f.iter().zip(&q).map(|(&a, &b)| p.sub(p.mul(half, b), a)).collect(),
        }
    }

    pub fn bar(&self, g: &Element) -> BarElement {
        g.e.to_vec()
    }

    /// The element with x-part `e` and trivial f-part.
    pub fn lift(&self, e: &[FpElem]) -> Element {
        Element { e: e.iter().map(|&x| x % self.p.get()).collect(), f: SmallVec::from_elem(0, self.d) }
    }

    /// `ḡ * h̄ = bar(lift(ḡ) lift(h̄))`.
    pub fn bar_mul(&self, a: &[FpElem], b: &[FpElem]) -> BarElement {
        self.bar(&self.mul(&self.lift(a), &self.lift(b)))
    }

    /// Position of `g` in lexicographic order of normal forms.
    pub fn index_of(&self, g: &Element) -> usize {
        let p = self.p.get() as usize;
        g.e.iter().chain(&g.f).fold(0, |acc, &x| acc * p + x as usize)
    }

    pub fn element_at(&self, mut idx: usize) -> Element {
        let p = self.p.get() as usize;
        let mut coords = vec![0u64; self.m + self.d];
        for c in coords.iter_mut().rev() {
            *c = (idx % p) as u64;
            idx /= p;
        }
        Element::new(&coords[..self.m], &coords[self.m..])
    }

    /// All elements in lexicographic order, or a resource error if |G| exceeds `bound`.
    pub fn elements(&self, bound: usize) -> Result<Vec<Element>> {
        let n = self.order();
        if n > bound as u128 {
            bail!(Resource, "group order {n} exceeds bound {bound}");
        }
        Ok((0..n as usize).map(|i| self.element_at(i)).collect())
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Element {
        let p = self.p.get();
        let e: Vec<u64> = (0..self.m).map(|_| rng.gen_range(0..p)).collect();
        let f: Vec<u64> = (0..self.d).map(|_| rng.gen_range(0..p)).collect();
        Element::new(&e, &f)
    }

    /// Subgroup generated by `gens`, by breadth-first closure under right
    /// multiplication with the generators. Sorted.
    pub fn closure(&self, gens: &[Element], bound: usize) -> Result<Vec<Element>> {
        for g in gens {
            self.check(g)?;
        }
        let gens: Vec<&Element> = gens.iter().filter(|g| !g.is_identity()).collect();
        let id = self.identity();
        let mut seen: HashSet<Element> = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = self.mul(&x, g);
                if seen.insert(y.clone()) {
                    if seen.len() > bound {
                        bail!(Resource, "subgroup closure exceeds bound {bound}");
                    }
                    queue.push_back(y);
                }
            }
        }
        let mut out: Vec<Element> = seen.into_iter().collect();
        out.sort();
        Ok(out)
    }

    pub fn is_abelian_set(&self, xs: &[Element]) -> bool {
        xs.iter().all(|a| xs.iter().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Parses the text format: `p m d`, then one line `i j c_1 .. c_d` per pair
    /// i < j (1-based) in lexicographic order.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty group file".into()))?;
        let [p, m, d] = parse_ints(header)?[..] else {
            bail!(Parse, "header must be `p m d`, got {header:?}");
        };
        let p = Prime::new(p).map_err(|e| Error::Parse(e.to_string()))?;
        let (m, d) = (m as usize, d as usize);
        if m == 0 {
            bail!(Parse, "m must be positive");
        }
        let mut consts = Vec::new();
        for i in 1..=m {
            for j in i + 1..=m {
                let line = lines.next().ok_or_else(|| Error::Parse(format!("missing constants for ({i}, {j})")))?;
                let v = parse_ints(line)?;
                if v.len() != d + 2 || v[0] as usize != i || v[1] as usize != j {
                    bail!(Parse, "expected `{i} {j}` followed by {d} values, got {line:?}");
                }
                consts.push(v[2..].to_vec());
            }
        }
        if lines.next().is_some() {
            bail!(Parse, "trailing data in group file");
        }
        GroupSpec::new(p, m, d, consts).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.p, self.m, self.d);
        for i in 0..self.m {
            for j in i + 1..self.m {
                let c = self.structure_constant(i, j);
                if c.is_empty() {
                    s.push_str(&format!("{} {}\n", i + 1, j + 1));
                } else {
                    s.push_str(&format!("{} {} {}\n", i + 1, j + 1, join(c)));
                }
            }
        }
        s
    }
}

/// Random group with parameters (p, m, d): constants drawn uniformly until they span Z_p^d.
pub fn random_group<R: Rng + ?Sized>(p: Prime, m: usize, d: usize, rng: &mut R) -> Result<GroupSpec> {
    if !p.is_odd() {
        bail!(Precondition, "p must be odd");
    }
    if m == 0 || d > m * (m - 1) / 2 {
        bail!(Precondition, "need m >= 1 and d <= m(m-1)/2, got m = {m}, d = {d}");
    }
    loop {
        let consts: Vec<FpVector> =
            (0..m * (m - 1) / 2).map(|_| (0..d).map(|_| rng.gen_range(0..p.get())).collect()).collect();
        match GroupSpec::new(p, m, d, consts) {
            Ok(g) => return Ok(g),
            Err(Error::Precondition(_)) => continue,
            Err(e) => return Err(e),
        }
    }
}

/// Generators of a hidden subgroup of order 1 or p: none, or one uniform nonidentity element.
pub fn random_hidden_subgroup<R: Rng + ?Sized>(g: &GroupSpec, order: u64, rng: &mut R) -> Result<Vec<Element>> {
    if order == 1 {
        return Ok(Vec::new());
    }
    if order != g.p().get() {
        bail!(Precondition, "hidden subgroup order must be 1 or p = {}", g.p());
    }
    loop {
        let h = g.random_element(rng);
        if !h.is_identity() {
            return Ok(vec![h]);
        }
    }
}

/// Classical hiding function for a subgroup H: maps g to the least element of gH.
#[derive(Debug, Clone)]
pub struct CosetLabeler {
    group: GroupSpec,
    subgroup: Vec<Element>,
}

impl CosetLabeler {
    pub fn new(group: &GroupSpec, gens: &[Element], bound: usize) -> Result<Self> {
        Ok(CosetLabeler { group: group.clone(), subgroup: group.closure(gens, bound)? })
    }

    pub fn subgroup(&self) -> &[Element] {
        &self.subgroup
    }

    pub fn label(&self, g: &Element) -> Element {
        self.subgroup.iter().map(|h| self.group.mul(g, h)).min().expect("subgroup contains the identity")
    }
}

/// Hiding function for the explicit group `G`: equal labels exactly on left cosets.
pub fn hiding_function(g: &GroupSpec, gens: &[Element], bound: usize) -> Result<impl Fn(&Element) -> Element + Sync> {
    let lab = CosetLabeler::new(g, gens, bound)?;
    Ok(move |x: &Element| lab.label(x))
}

/// The hidden subgroup read off classically: `{g : f(g) = f(1)}`.
pub fn brute_force_hsp(g: &GroupSpec, f: &(dyn Fn(&Element) -> Element + Sync), bound: usize) -> Result<Vec<Element>> {
    let target = f(&g.identity());
    Ok(g.elements(bound)?.into_iter().filter(|x| f(x) == target).collect())
}

/// Partition of G into fibres of `f`, keyed by label.
pub fn fibres(
    g: &GroupSpec,
    f: &(dyn Fn(&Element) -> Element + Sync),
    bound: usize,
) -> Result<std::collections::BTreeMap<Element, Vec<Element>>> {
    let mut out: std::collections::BTreeMap<Element, Vec<Element>> = Default::default();
    for x in g.elements(bound)? {
        out.entry(f(&x)).or_default().push(x);
    }
    Ok(out)
}

/// Set of elements, for order-independent comparisons.
pub fn as_set(xs: &[Element]) -> BTreeSet<Element> {
    xs.iter().cloned().collect()
}
