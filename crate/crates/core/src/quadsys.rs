//! Constructive solver for the homogeneous diagonal system
//!
//! ```text
//!     sum_i u_i j_i^2 = 0   and   sum_i u_i j_i = 0     (u_i in Z_p^d)
//! ```
//!
//! For odd p the quadratic part is solved block by block with a recursion that
//! peels off one equation per level; the linear part is then met by scaling the
//! block solutions with a kernel vector of a small d x (d+1) matrix. For p = 2 the
//! two halves coincide and a linear kernel vector suffices.

use rand::Rng;

use crate::error::{bail, Error, Result};
use crate::fp::{find_nonresidue, is_qr, solve_binary_inhomogeneous, solve_ternary_diagonal, sqrt_mod, FpElem, Prime};
use crate::fplinalg::{kernel_basis, rref, FpMatrix, FpVector};

/// Number of variables one quadratic block needs: (d+1)(d+2)/2.
pub fn block_size(d: usize) -> usize {
    (d + 1) * (d + 2) / 2
}

/// Number of variables the full system needs: (d+1)^2 (d+2)/2.
pub fn full_bound(d: usize) -> usize {
    (d + 1) * block_size(d)
}

/// A system given by its d x n coefficient matrix; column i is the vector u_i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadLinSystem {
    pub p: Prime,
    pub u: FpMatrix,
}

/// A nonzero vector j satisfying both halves of the system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub j: FpVector,
}

impl QuadLinSystem {
    pub fn new(p: Prime, u: FpMatrix) -> Self {
        QuadLinSystem { p, u }
    }

    pub fn d(&self) -> usize {
        self.u.rows()
    }

    pub fn n(&self) -> usize {
        self.u.cols()
    }

    /// Parses `p d n` followed by d rows of n integers.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty system file".into()))?;
        let head = parse_ints(header)?;
        let [p, d, n] = head[..] else {
            bail!(Parse, "header must be `p d n`, got {header:?}");
        };
        let p = Prime::new(p).map_err(|e| Error::Parse(e.to_string()))?;
        let (d, n) = (d as usize, n as usize);
        let mut rows = Vec::with_capacity(d);
        for l in 0..d {
            let line = lines.next().ok_or_else(|| Error::Parse(format!("missing row {}", l + 1)))?;
            let row = parse_ints(line)?;
            if row.len() != n {
                bail!(Parse, "row {} has {} entries, expected {n}", l + 1, row.len());
            }
            rows.push(row);
        }
        if lines.next().is_some() {
            bail!(Parse, "trailing data after {d} rows");
        }
        Ok(QuadLinSystem::new(p, FpMatrix::from_rows(&rows, n, p)))
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.p, self.d(), self.n());
        for r in self.u.to_rows() {
            s.push_str(&join(&r));
            s.push('\n');
        }
        s
    }

    /// Both residual vectors `U (j∘j)` and `U j`.
    pub fn residuals(&self, j: &[FpElem]) -> (FpVector, FpVector) {
        let p = self.p;
        let sq: FpVector = j.iter().map(|&x| p.mul(x, x)).collect();
        (self.u.mul_vec(&sq, p), self.u.mul_vec(j, p))
    }

    /// Whether `j` is a nonzero solution of both halves.
    pub fn is_solution(&self, j: &[FpElem]) -> bool {
        if j.len() != self.n() || j.iter().all(|&x| x == 0) {
            return false;
        }
        let (q, l) = self.residuals(j);
        q.iter().chain(&l).all(|&x| x == 0)
    }
}

pub(crate) fn parse_ints(line: &str) -> Result<Vec<u64>> {
    line.split_whitespace()
        .map(|t| t.parse::<u64>().map_err(|_| Error::Parse(format!("not a nonnegative integer: {t:?}"))))
        .collect()
}

pub(crate) fn join(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

/// Whether `j` is a nonzero zero of the quadratic forms given by the rows of `u`.
pub fn solves_quadratic(u: &FpMatrix, j: &[FpElem], p: Prime) -> bool {
    let sq: FpVector = j.iter().map(|&x| p.mul(x, x)).collect();
    j.iter().any(|&x| x != 0) && u.mul_vec(&sq, p).iter().all(|&x| x == 0)
}

/// One step of the change of variables, recorded while reducing and replayed in
/// reverse to recover values in the original coordinates.
#[derive(Debug, Clone, Copy)]
enum Subst {
    /// `j[var] = 0`
    Zero { var: usize },
    /// `j[var] = by * j'[var]`
    Scale { var: usize, by: FpElem },
    /// `j'[var] = factor * j'[src]`
    Tie { var: usize, src: usize, factor: FpElem },
}

struct BlockSolver<'r, R: ?Sized> {
    p: Prime,
    rng: &'r mut R,
    nonresidue: Option<FpElem>,
    sqrt_minus_one: Option<FpElem>,
}

impl<R: Rng + ?Sized> BlockSolver<'_, R> {
    fn nonresidue(&mut self) -> Result<FpElem> {
        if let Some(l) = self.nonresidue {
            return Ok(l);
        }
        let p = self.p;
        let l = if p.get() % 4 == 3 { p.get() - 1 } else { find_nonresidue(p, self.rng)? };
        self.nonresidue = Some(l);
        Ok(l)
    }

    fn sqrt_minus_one(&mut self) -> Result<FpElem> {
        if let Some(s) = self.sqrt_minus_one {
            return Ok(s);
        }
        let s = sqrt_mod(self.p.get() - 1, self.p, self.rng)?;
        self.sqrt_minus_one = Some(s);
        Ok(s)
    }

    fn solve(&mut self, m: &FpMatrix) -> Result<FpVector> {
        let p = self.p;
        let (d, n) = (m.rows(), m.cols());
        debug_assert!(n >= block_size(d));
        let mut j = vec![0; n];
        if d == 0 {
            j[0] = 1;
            return Ok(j);
        }
        if d == 1 {
            let (x, y, z) = solve_ternary_diagonal(m[(0, 0)], m[(0, 1)], m[(0, 2)], p, self.rng)?;
            j[..3].copy_from_slice(&[x, y, z]);
            return Ok(j);
        }

        let ech = rref(m, p);
        if ech.rank < d {
            // dependent equations carry no information
            let kept: Vec<usize> = (0..ech.rank).collect();
            return self.solve(&ech.reduced.select_rows(&kept));
        }
        let r = ech.reduced;
        let pivots = ech.pivot_cols;
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let lead = free[0];
        let tail = &free[1..];

        if (0..d).all(|i| r[(i, lead)] == 0) {
            j[lead] = 1;
            return Ok(j);
        }

        // Sort rows by the lead coefficient: squares, nonresidues, zeros.
        let lambda = self.nonresidue()?;
        let lambda_inv = p.inv(lambda)?;
        let (mut squares, mut nonsquares, mut zeros) = (Vec::new(), Vec::new(), Vec::new());
        for i in 0..d {
            let c = r[(i, lead)];
            if c == 0 {
                zeros.push(i);
            } else if is_qr(c, p)? {
                squares.push((i, sqrt_mod(c, p, self.rng)?));
            } else {
                nonsquares.push((i, sqrt_mod(p.mul(c, lambda_inv), p, self.rng)?));
            }
        }

        let mut stack = Vec::new();
        let mut tail_rows: Vec<FpVector> = Vec::with_capacity(d - 1);
        let tail_part =
            |row: &[FpElem], scale: FpElem| -> FpVector { tail.iter().map(|&c| p.mul(row[c], scale)).collect() };
        for &i in &zeros {
            stack.push(Subst::Zero { var: pivots[i] });
            tail_rows.push(tail_part(r.row(i), 1));
        }

        // Rescale j_i = v_i j'_i and divide line i by v_i^2, so the lead
        // coefficient becomes 1 on square lines and lambda on the others.
        let scaled = |group: &[(usize, FpElem)], stack: &mut Vec<Subst>| -> Result<Vec<(usize, FpVector)>> {
            group
                .iter()
                .map(|&(i, v)| {
                    stack.push(Subst::Scale { var: pivots[i], by: v });
                    let inv_v2 = p.inv(p.mul(v, v))?;
                    Ok((pivots[i], tail_part(r.row(i), inv_v2)))
                })
                .collect()
        };
        let sq_lines = scaled(&squares, &mut stack)?;
        let ns_lines = scaled(&nonsquares, &mut stack)?;

        // Subtract the first line of each group from the others and identify the
        // corresponding variables; the differences lose their non-tail terms.
        for lines in [&sq_lines, &ns_lines] {
            if let Some(((head_var, head_tail), rest)) = lines.split_first() {
                for (var, t) in rest {
                    stack.push(Subst::Tie { var: *var, src: *head_var, factor: 1 });
                    tail_rows.push(t.iter().zip(head_tail).map(|(&a, &b)| p.sub(a, b)).collect());
                }
            }
        }

        let (binary_var, alpha, binary_tail) = match (sq_lines.first(), ns_lines.first()) {
            (Some((s_var, s_tail)), Some((n_var, n_tail))) => {
                if p.get() % 4 == 1 {
                    // j'_s = i j_lead with i^2 = -1 kills the square line's non-tail part
                    let s = self.sqrt_minus_one()?;
                    stack.push(Subst::Tie { var: *s_var, src: lead, factor: s });
                    tail_rows.push(s_tail.clone());
                    (*n_var, lambda, n_tail.clone())
                } else {
                    // lambda = -1, so j'_n = j_lead does the same for the other line
                    stack.push(Subst::Tie { var: *n_var, src: lead, factor: 1 });
                    tail_rows.push(n_tail.clone());
                    (*s_var, 1, s_tail.clone())
                }
            }
            (Some((v, t)), None) => (*v, 1, t.clone()),
            (None, Some((v, t))) => (*v, lambda, t.clone()),
            (None, None) => unreachable!("lead column is nonzero"),
        };
        debug_assert_eq!(tail_rows.len(), d - 1);

        let sub = FpMatrix::from_rows(&tail_rows, tail.len(), p);
        let tail_sol = self.solve(&sub)?;
        let b = binary_tail.iter().zip(&tail_sol).fold(0, |acc, (&u, &t)| p.add(acc, p.mul(u, p.mul(t, t))));
        let (x, y) = solve_binary_inhomogeneous(alpha, b, p, self.rng)?;

        for (&c, &t) in tail.iter().zip(&tail_sol) {
            j[c] = t;
        }
        j[lead] = y;
        j[binary_var] = x;
        for s in stack.iter().rev() {
            match *s {
                Subst::Tie { var, src, factor } => j[var] = p.mul(factor, j[src]),
                Subst::Scale { var, by } => j[var] = p.mul(by, j[var]),
                Subst::Zero { var } => j[var] = 0,
            }
        }
        Ok(j)
    }
}

/// Finds a nonzero j with `sum_i u_i j_i^2 = 0` for a d x n' matrix with
/// n' >= (d+1)(d+2)/2 and p odd.
pub fn solve_quadratic_block<R: Rng + ?Sized>(u: &FpMatrix, p: Prime, rng: &mut R) -> Result<FpVector> {
    if !p.is_odd() {
        bail!(Precondition, "the quadratic block solver needs an odd prime");
    }
    let (d, n) = (u.rows(), u.cols());
    if n < block_size(d) {
        bail!(Precondition, "block has {n} columns, needs at least {} for d = {d}", block_size(d));
    }
    let mut solver = BlockSolver { p, rng, nonresidue: None, sqrt_minus_one: None };
    let j = solver.solve(u)?;
    if !solves_quadratic(u, &j, p) {
        bail!(Internal, "block solver produced a non-solution");
    }
    Ok(j)
}

/// Finds a nonzero solution of the full system when n >= (d+1)^2(d+2)/2.
///
/// Columns past the first (d+1) blocks are set to zero.
pub fn solve_full_system<R: Rng + ?Sized>(sys: &QuadLinSystem, rng: &mut R) -> Result<Solution> {
    let (p, d, n) = (sys.p, sys.d(), sys.n());
    if n < full_bound(d) {
        bail!(Precondition, "system has {n} variables, needs at least {} for d = {d}", full_bound(d));
    }
    let j = if !p.is_odd() {
        // over Z_2 squaring is the identity, so the quadratic and linear halves coincide
        kernel_basis(&sys.u, p).into_iter().next().ok_or_else(|| Error::Internal("empty kernel with n > d".into()))?
    } else {
        let width = block_size(d);
        let mut blocks = Vec::with_capacity(d + 1);
        let mut linear = FpMatrix::zeros(d, d + 1);
        for k in 0..=d {
            let cols: Vec<usize> = (k * width..(k + 1) * width).collect();
            let block = sys.u.select_columns(&cols);
            let sol = solve_quadratic_block(&block, p, rng)?;
            for (l, v) in block.mul_vec(&sol, p).into_iter().enumerate() {
                linear[(l, k)] = v;
            }
            blocks.push(sol);
        }
        let lambda = kernel_basis(&linear, p)
            .into_iter()
            .next()
            .ok_or_else(|| Error::Internal("d x (d+1) system without kernel".into()))?;
        let mut j = vec![0; n];
        for (k, sol) in blocks.iter().enumerate() {
            for (i, &x) in sol.iter().enumerate() {
                j[k * width + i] = p.mul(lambda[k], x);
            }
        }
        j
    };
    if !sys.is_solution(&j) {
        bail!(Internal, "full-system solver produced a non-solution");
    }
    Ok(Solution { j })
}
