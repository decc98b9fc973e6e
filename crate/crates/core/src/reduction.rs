//! Classical reductions over explicitly enumerated groups: Sylow splitting,
//! the normalizer-iteration loop and the exponent-p subgroup G*.
//!
//! Groups are small (|G| ≤ 10^4 by default) and carry a full multiplication
//! table, so every subroutine is exact brute force.

use std::cell::{Cell, RefCell};
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use rand::Rng;

use crate::error::{bail, Error, Result};
use crate::fp::{is_prime, Prime};
use crate::nil2::{Element, GroupSpec};
use crate::qsim::pipeline::{find_hidden_subgroup, HspConfig};
use crate::quadsys::parse_ints;

pub const DEFAULT_EXPLICIT_BOUND: usize = 10_000;

/// A finite group given by its multiplication table on `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitGroup {
    n: usize,
    table: Vec<u32>,
    identity: usize,
    inverse: Vec<u32>,
}

impl ExplicitGroup {
    /// Builds the table from `mul`; checks closure, identity and inverses.
    /// Associativity is the caller's responsibility (see [`Self::check_associative`]).
    pub fn from_fn(n: usize, bound: usize, mut mul: impl FnMut(usize, usize) -> usize) -> Result<Self> {
        if n == 0 {
            bail!(Precondition, "a group has at least one element");
        }
        if n > bound {
            bail!(Resource, "group order {n} exceeds bound {bound}");
        }
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let c = mul(a, b);
                if c >= n {
                    bail!(Domain, "product {a}*{b} = {c} is out of range");
                }
                table.push(c as u32);
            }
        }
        let at = |a: usize, b: usize| table[a * n + b] as usize;
        let Some(identity) = (0..n).find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x)) else {
            bail!(Domain, "table has no identity");
        };
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            match (0..n).find(|&b| at(a, b) == identity && at(b, a) == identity) {
                Some(b) => inverse.push(b as u32),
                None => bail!(Domain, "element {a} has no inverse"),
            }
        }
        Ok(ExplicitGroup { n, table, identity, inverse })
    }

    pub fn from_table(rows: &[Vec<usize>], bound: usize) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            bail!(Parse, "multiplication table must be {n}x{n}");
        }
        Self::from_fn(n, bound, |a, b| rows[a][b])
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        Self::from_fn(n, usize::MAX, |a, b| (a + b) % n)
    }

    /// `A × B` with `(a, b) ↦ a·|B| + b`.
    pub fn direct_product(a: &ExplicitGroup, b: &ExplicitGroup) -> Result<Self> {
        let nb = b.n;
        Self::from_fn(a.n * nb, usize::MAX, |x, y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb))
    }

    /// The table of a nil-2 group, indexed by [`GroupSpec::index_of`].
    pub fn from_group_spec(g: &GroupSpec, bound: usize) -> Result<Self> {
        let elems = g.elements(bound)?;
        Self::from_fn(elems.len(), bound, |a, b| g.index_of(&g.mul(&elems[a], &elems[b])))
    }

    /// The modular group of order p^3, `Z_{p²} ⋊ Z_p` with
    /// `(i, j)(k, l) = (i + (1+p)^j k mod p², j + l mod p)`; index `i·p + j`.
    pub fn modular(p: u64) -> Result<Self> {
        let p = p as usize;
        let p2 = p * p;
        let mut tw = vec![1usize; p];
        for j in 1..p {
            tw[j] = tw[j - 1] * (1 + p) % p2;
        }
        Self::from_fn(p2 * p, usize::MAX, |x, y| {
            let (i, j, k, l) = (x / p, x % p, y / p, y % p);
            ((i + tw[j] * k) % p2) * p + (j + l) % p
        })
    }

    /// Exhaustive associativity check, O(n³).
    pub fn check_associative(&self) -> bool {
        (0..self.n).all(|a| {
            (0..self.n).all(|b| (0..self.n).all(|c| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c))))
        })
    }

    /// Reads `n` followed by n rows of n indices.
    pub fn parse(text: &str, bound: usize) -> Result<Self> {
        let nums = parse_ints(text)?;
        let Some((&n, rest)) = nums.split_first() else {
            bail!(Parse, "empty table file");
        };
        let n = n as usize;
        if n > bound {
            bail!(Resource, "group order {n} exceeds bound {bound}");
        }
        if rest.len() != n * n {
            bail!(Parse, "expected {} table entries, found {}", n * n, rest.len());
        }
        let rows: Vec<Vec<usize>> = rest.chunks(n.max(1)).map(|r| r.iter().map(|&x| x as usize).collect()).collect();
        let g = Self::from_table(&rows, bound)?;
        if n <= 300 && !g.check_associative() {
            bail!(Domain, "table is not associative");
        }
        Ok(g)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for a in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|b| self.mul(a, b).to_string()).collect();
            let _ = writeln!(s, "{}", row.join(" "));
        }
        s
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    pub fn pow(&self, a: usize, mut k: u64) -> usize {
        let (mut acc, mut base) = (self.identity, a);
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// `[a, b] = a⁻¹ b⁻¹ a b`.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// The subgroup generated by `gens`, sorted.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        seen[self.identity] = true;
        let mut stack = vec![self.identity];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        members(&seen)
    }

    pub fn is_subgroup(&self, set: &[usize]) -> bool {
        let inside = self.indicator(set);
        inside[self.identity] && set.iter().all(|&a| set.iter().all(|&b| inside[self.mul(a, b)]))
    }

    /// `N_G(X) = {g : g X g⁻¹ = X}` by testing each g.
    pub fn normalizer(&self, x: &[usize]) -> Vec<usize> {
        let inside = self.indicator(x);
        (0..self.n).filter(|&g| x.iter().all(|&s| inside[self.conjugate(g, s)])).collect()
    }

    /// Whether `n` is normal in the subgroup `within`.
    pub fn is_normal_in(&self, n: &[usize], within: &[usize]) -> bool {
        let inside = self.indicator(n);
        within.iter().all(|&g| n.iter().all(|&s| inside[self.conjugate(g, s)]))
    }

    /// Smallest normal subgroup of `within` containing `set`.
    pub fn normal_closure_in(&self, set: &[usize], within: &[usize]) -> Vec<usize> {
        let gens: Vec<usize> =
            within.iter().flat_map(|&g| set.iter().map(move |&s| (g, s))).map(|(g, s)| self.conjugate(g, s)).collect();
        self.closure(&dedup(gens))
    }

    /// Greedy generating set of the subgroup `set`: scan in index order and keep
    /// each element not yet generated.
    pub fn greedy_generators(&self, set: &[usize], start: &[usize]) -> Vec<usize> {
        let mut gens: Vec<usize> = start.to_vec();
        let mut cur = self.indicator(&self.closure(&gens));
        let mut picked = Vec::new();
        for &g in set {
            if !cur[g] {
                gens.push(g);
                picked.push(g);
                cur = self.indicator(&self.closure(&gens));
            }
        }
        picked
    }

    /// The subgroup `set` as a group of its own, with the embedding back into `self`.
    pub fn subgroup_as_group(&self, set: &[usize]) -> Result<(ExplicitGroup, Vec<usize>)> {
        let pos: HashMap<usize, usize> = set.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let mut bad = false;
        let g = ExplicitGroup::from_fn(set.len(), usize::MAX, |a, b| match pos.get(&self.mul(set[a], set[b])) {
            Some(&c) => c,
            None => {
                bad = true;
                0
            }
        });
        if bad {
            bail!(Domain, "set is not closed under multiplication");
        }
        Ok((g?, set.to_vec()))
    }

    /// `G/N` on least-index coset representatives.
    pub fn quotient(&self, n: &[usize]) -> Result<Quotient> {
        if !self.is_subgroup(n) {
            bail!(Domain, "quotient by a non-subgroup");
        }
        if !self.is_normal_in(n, &(0..self.n).collect::<Vec<_>>()) {
            bail!(Domain, "quotient by a non-normal subgroup");
        }
        let mut proj = vec![usize::MAX; self.n];
        let mut reps = Vec::new();
        for g in 0..self.n {
            if proj[g] == usize::MAX {
                for &s in n {
                    proj[self.mul(g, s)] = reps.len();
                }
                reps.push(g);
            }
        }
        let group = ExplicitGroup::from_fn(reps.len(), usize::MAX, |a, b| proj[self.mul(reps[a], reps[b])])?;
        Ok(Quotient { group, reps, proj })
    }

    /// Left-coset labels of `h`: `label[g] = min(g h)`.
    pub fn coset_labels(&self, h: &[usize]) -> Vec<usize> {
        (0..self.n).map(|g| h.iter().map(|&s| self.mul(g, s)).min().expect("nonempty subgroup")).collect()
    }

    pub fn random_subgroup<R: Rng + ?Sized>(&self, gens: usize, rng: &mut R) -> Vec<usize> {
        let gs: Vec<usize> = (0..gens).map(|_| rng.gen_range(0..self.n)).collect();
        self.closure(&gs)
    }

    fn indicator(&self, set: &[usize]) -> Vec<bool> {
        let mut v = vec![false; self.n];
        for &x in set {
            v[x] = true;
        }
        v
    }
}

fn members(ind: &[bool]) -> Vec<usize> {
    ind.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()
}

fn dedup(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The prime p with `n = p^k`, k ≥ 1.
pub fn prime_power_base(n: usize) -> Option<usize> {
    match prime_factors(n).as_slice() {
        [p] => Some(*p),
        _ => None,
    }
}

fn log_base(n: usize, p: usize) -> usize {
    let (mut k, mut x) = (0, 1);
    while x < n {
        x *= p;
        k += 1;
    }
    k
}

#[derive(Debug, Clone)]
pub struct Quotient {
    pub group: ExplicitGroup,
    /// `reps[c]` is the least element of coset c.
    pub reps: Vec<usize>,
    /// Coset index of each element.
    pub proj: Vec<usize>,
}

/// Splits a nilpotent group into its Sylow subgroups.
pub fn sylow_decompose(g: &ExplicitGroup) -> Result<BTreeMap<usize, Vec<usize>>> {
    let orders: Vec<usize> = (0..g.order()).map(|x| g.element_order(x)).collect();
    let mut parts = BTreeMap::new();
    for q in prime_factors(g.order()) {
        let part: Vec<usize> =
            (0..g.order()).filter(|&x| prime_power_base(orders[x]).map_or(orders[x] == 1, |b| b == q)).collect();
        if g.closure(&part).len() != part.len() {
            bail!(Domain, "the {q}-elements do not form a subgroup; group is not nilpotent");
        }
        parts.insert(q, part);
    }
    let product: usize = parts.values().map(Vec::len).product();
    if product != g.order() {
        bail!(Domain, "Sylow parts have product order {product}, not {}", g.order());
    }
    let list: Vec<&Vec<usize>> = parts.values().collect();
    for (i, a) in list.iter().enumerate() {
        for b in &list[i + 1..] {
            if a.iter().any(|&x| b.iter().any(|&y| g.mul(x, y) != g.mul(y, x))) {
                bail!(Domain, "Sylow parts do not commute; group is not nilpotent");
            }
        }
    }
    Ok(parts)
}

/// `G = G_1 ⊳ G_2 ⊳ … ⊳ {1}` with every step of index p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubnormalChain {
    pub subgroups: Vec<Vec<usize>>,
}

impl SubnormalChain {
    pub fn len(&self) -> usize {
        self.subgroups.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Checks that each step is a normal subgroup of prime index p.
    pub fn verify(&self, g: &ExplicitGroup, p: usize) -> bool {
        self.subgroups
            .windows(2)
            .all(|w| w[1].len() * p == w[0].len() && g.is_subgroup(&w[1]) && g.is_normal_in(&w[1], &w[0]))
            && self.subgroups.last().is_some_and(|s| s.len() == 1)
    }
}

/// Descends through maximal subgroups: from K, take the Frattini subgroup
/// `K^p [K, K]`, extend it greedily by K's elements in index order, and drop
/// the last extension.
pub fn prime_step_chain(g: &ExplicitGroup) -> Result<SubnormalChain> {
    let n = g.order();
    let mut subgroups = vec![(0..n).collect::<Vec<_>>()];
    if n == 1 {
        return Ok(SubnormalChain { subgroups });
    }
    let Some(p) = prime_power_base(n) else {
        bail!(Domain, "group of order {n} is not a p-group");
    };
    loop {
        let k = subgroups.last().unwrap();
        if k.len() == 1 {
            break;
        }
        let frattini = frattini_in(g, k, p);
        let fgens = g.greedy_generators(&frattini, &[]);
        let mut ext = g.greedy_generators(k, &fgens);
        ext.pop();
        let mut gens = fgens;
        gens.extend(ext);
        let m = g.closure(&gens);
        if m.len() * p != k.len() || !g.is_normal_in(&m, k) {
            bail!(Internal, "maximal subgroup construction failed at order {}", k.len());
        }
        subgroups.push(m);
    }
    Ok(SubnormalChain { subgroups })
}

fn frattini_in(g: &ExplicitGroup, k: &[usize], p: usize) -> Vec<usize> {
    let gens = g.greedy_generators(k, &[]);
    let mut seeds: Vec<usize> = k.iter().map(|&x| g.pow(x, p as u64)).collect();
    for &a in &gens {
        for &b in &gens {
            seeds.push(g.commutator(a, b));
        }
    }
    g.normal_closure_in(&dedup(seeds), k)
}

/// Solver for hidden subgroups of order 1 or p, the contract [`algorithm1`] relies on.
pub trait SubSolver {
    /// Generators of the subgroup of `group` hidden by `f`.
    fn solve(&self, group: &ExplicitGroup, f: &(dyn Fn(usize) -> usize + Sync)) -> Result<Vec<usize>>;
}

/// `H = {g : f(g) = f(1)}` by evaluating f everywhere.
#[derive(Debug, Clone, Copy, Default)]
pub struct BruteForceSolver;

impl SubSolver for BruteForceSolver {
    fn solve(&self, group: &ExplicitGroup, f: &(dyn Fn(usize) -> usize + Sync)) -> Result<Vec<usize>> {
        let base = f(group.identity());
        let h: Vec<usize> = (0..group.order()).filter(|&x| f(x) == base).collect();
        Ok(group.greedy_generators(&h, &[]))
    }
}

/// Runs the simulated quantum pipeline when the group converts to a nil-2
/// exponent-p [`GroupSpec`], and brute force otherwise.
pub struct QuantumSolver<R> {
    rng: RefCell<R>,
    config: HspConfig,
    quantum_calls: Cell<usize>,
    fallback_calls: Cell<usize>,
}

impl<R: Rng> QuantumSolver<R> {
    pub fn new(rng: R, config: HspConfig) -> Self {
        QuantumSolver { rng: RefCell::new(rng), config, quantum_calls: Cell::new(0), fallback_calls: Cell::new(0) }
    }

    /// `(quantum, brute force)` call counts so far.
    pub fn calls(&self) -> (usize, usize) {
        (self.quantum_calls.get(), self.fallback_calls.get())
    }
}

impl<R: Rng> SubSolver for QuantumSolver<R> {
    fn solve(&self, group: &ExplicitGroup, f: &(dyn Fn(usize) -> usize + Sync)) -> Result<Vec<usize>> {
        let Some(conv) = to_group_spec(group)? else {
            self.fallback_calls.set(self.fallback_calls.get() + 1);
            return BruteForceSolver.solve(group, f);
        };
        self.quantum_calls.set(self.quantum_calls.get() + 1);
        let spec = &conv.spec;
        let label = |e: &Element| Element::new(&[f(conv.to_explicit[spec.index_of(e)]) as u64], &[]);
        let out = find_hidden_subgroup(spec, &label, &self.config, &mut *self.rng.borrow_mut())?;
        Ok(out.generators.iter().map(|h| conv.to_explicit[spec.index_of(h)]).collect())
    }
}

/// An explicit group recognised as a nil-2 group of exponent p.
#[derive(Debug, Clone)]
pub struct SpecConversion {
    pub spec: GroupSpec,
    /// Explicit index of the spec element with [`GroupSpec::index_of`] = i.
    pub to_explicit: Vec<usize>,
}

/// Recognises nil-2 groups of odd prime exponent. Generators are chosen
/// greedily: a basis of G' first, then a basis of G/G'. Returns `None` for the
/// trivial group and for groups outside the class.
pub fn to_group_spec(g: &ExplicitGroup) -> Result<Option<SpecConversion>> {
    let n = g.order();
    let Some(p) = prime_power_base(n) else { return Ok(None) };
    if p == 2 || (0..n).any(|x| g.pow(x, p as u64) != g.identity()) {
        return Ok(None);
    }
    let all: Vec<usize> = (0..n).collect();
    let gens = g.greedy_generators(&all, &[]);
    let comms: Vec<usize> =
        gens.iter().flat_map(|&a| gens.iter().map(move |&b| (a, b))).map(|(a, b)| g.commutator(a, b)).collect();
    let derived = g.normal_closure_in(&dedup(comms), &all);
    if derived.iter().any(|&z| gens.iter().any(|&x| g.mul(x, z) != g.mul(z, x))) {
        return Ok(None);
    }
    let zs = g.greedy_generators(&derived, &[]);
    let xs = g.greedy_generators(&all, &zs);
    let (m, d) = (xs.len(), zs.len());

    let pp = p as u64;
    let mut coords_of: HashMap<usize, Vec<u64>> = HashMap::new();
    for idx in 0..derived.len() {
        let f = digits(idx, pp, d);
        let z = zs.iter().zip(&f).fold(g.identity(), |acc, (&z, &k)| g.mul(acc, g.pow(z, k)));
        coords_of.insert(z, f);
    }
    let mut consts = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let c = g.commutator(xs[j], xs[i]);
            match coords_of.get(&c) {
                Some(f) => consts.push(f.clone()),
                None => bail!(Internal, "commutator outside the computed derived subgroup"),
            }
        }
    }
    let spec = GroupSpec::new(Prime::new(pp)?, m, d, consts)?;
    let mut to_explicit = Vec::with_capacity(n);
    for idx in 0..n {
        let el = spec.element_at(idx);
        let word = xs.iter().zip(el.e.iter()).chain(zs.iter().zip(el.f.iter()));
        to_explicit.push(word.fold(g.identity(), |acc, (&x, &k)| g.mul(acc, g.pow(x, k))));
    }
    if dedup(to_explicit.clone()).len() != n {
        bail!(Internal, "normal-form map is not a bijection");
    }
    // a bijection respecting right multiplication by generators is an isomorphism
    for idx in 0..n {
        let el = spec.element_at(idx);
        for (k, &x) in xs.iter().enumerate() {
            if to_explicit[spec.index_of(&spec.mul(&el, &spec.x(k)))] != g.mul(to_explicit[idx], x) {
                bail!(Internal, "normal-form map is not a homomorphism");
            }
        }
        for (k, &z) in zs.iter().enumerate() {
            if to_explicit[spec.index_of(&spec.mul(&el, &spec.z(k)))] != g.mul(to_explicit[idx], z) {
                bail!(Internal, "normal-form map is not a homomorphism");
            }
        }
    }
    Ok(Some(SpecConversion { spec, to_explicit }))
}

fn digits(mut idx: usize, p: u64, k: usize) -> Vec<u64> {
    let mut v = vec![0; k];
    for c in v.iter_mut().rev() {
        *c = idx as u64 % p;
        idx /= p as usize;
    }
    v
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Algorithm1Outcome {
    pub subgroup: Vec<usize>,
    pub generators: Vec<usize>,
    pub p_calls: usize,
    pub rounds: usize,
}

/// Finds the subgroup of the p-group `g` hidden by `f`, calling `solver` only on
/// instances whose hidden subgroup has order 1 or p.
///
/// Keeps `H̃ ≤ H`; each round walks a prime-step chain of `N_G(H̃)/H̃` bottom up
/// and absorbs the first nontrivial element found. A round finding nothing
/// certifies `N_H(H̃) = H̃`, hence `H̃ = H`.
pub fn algorithm1(
    g: &ExplicitGroup,
    f: &(dyn Fn(usize) -> usize + Sync),
    solver: &dyn SubSolver,
) -> Result<Algorithm1Outcome> {
    if g.order() > 1 && prime_power_base(g.order()).is_none() {
        bail!(Precondition, "algorithm1 needs a p-group, got order {}", g.order());
    }
    let base = f(g.identity());
    let mut gens: Vec<usize> = Vec::new();
    let mut p_calls = 0;
    let mut rounds = 0;
    loop {
        rounds += 1;
        let ht = g.closure(&gens);
        let norm = g.normalizer(&ht);
        let (ngrp, emb) = g.subgroup_as_group(&norm)?;
        let local: Vec<usize> = ht.iter().map(|x| norm.binary_search(x).expect("H̃ lies in its normalizer")).collect();
        let q = ngrp.quotient(&local)?;
        let chain = prime_step_chain(&q.group)?;
        let mut found = None;
        for sub in chain.subgroups.iter().rev().filter(|s| s.len() > 1) {
            let (sg, semb) = q.group.subgroup_as_group(sub)?;
            let lift = |x: usize| emb[q.reps[semb[x]]];
            let fl = |x: usize| f(lift(x));
            p_calls += 1;
            let hs = solver.solve(&sg, &fl).map_err(|e| {
                Error::Retryable(format!("sub-solver failed on a subgroup of order {}: {e}", sg.order()))
            })?;
            if let Some(&h) = hs.iter().find(|&&h| h != sg.identity()) {
                let h = lift(h);
                if f(h) != base {
                    bail!(Internal, "sub-solver returned an element outside the hidden subgroup");
                }
                found = Some(h);
                break;
            }
        }
        match found {
            Some(h) => {
                if ht.binary_search(&h).is_ok() {
                    bail!(Internal, "sub-solver returned an element of H̃");
                }
                gens.push(h);
            }
            None => return Ok(Algorithm1Outcome { subgroup: ht, generators: gens, p_calls, rounds }),
        }
    }
}

/// The bound `4 (log_p |G|)²` on sub-solver calls.
pub fn algorithm1_call_bound(order: usize) -> usize {
    match prime_power_base(order) {
        Some(p) => 4 * log_base(order, p).pow(2),
        None => 0,
    }
}

/// `G* = {g : g^p = 1}`; a domain error if it is not closed.
pub fn exponent_p_subgroup(g: &ExplicitGroup, p: u64) -> Result<Vec<usize>> {
    if !is_prime(p) {
        bail!(Precondition, "{p} is not prime");
    }
    let set: Vec<usize> = (0..g.order()).filter(|&x| g.pow(x, p) == g.identity()).collect();
    if g.closure(&set).len() != set.len() {
        bail!(Domain, "elements of order dividing {p} are not closed: p ≤ class, not supported");
    }
    Ok(set)
}

/// Whether `x ↦ x^p` is constant on left cosets of `gstar` and distinct across them.
pub fn hall_coset_property(g: &ExplicitGroup, gstar: &[usize], p: u64) -> bool {
    let inside = g.indicator(gstar);
    let pw: Vec<usize> = (0..g.order()).map(|x| g.pow(x, p)).collect();
    (0..g.order()).all(|x| (0..g.order()).all(|y| (pw[x] == pw[y]) == inside[g.mul(g.inv(x), y)]))
}
