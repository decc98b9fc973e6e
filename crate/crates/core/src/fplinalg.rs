//! Dense linear algebra over Z_p: row reduction, kernels and orthogonal complements.

use crate::fp::{FpElem, Prime};

/// A vector over Z_p.
pub type FpVector = Vec<FpElem>;

/// Row-major dense matrix over Z_p. The modulus is supplied by each operation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    rows: usize,
    cols: usize,
    data: Vec<FpElem>,
}

impl FpMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FpMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Builds a matrix from rows, reducing every entry mod p.
    ///
    /// Panics if the rows are ragged.
    pub fn from_rows<R: AsRef<[FpElem]>>(rows: &[R], cols: usize, p: Prime) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r.iter().map(|&x| x % p.get()));
        }
        FpMatrix { rows: rows.len(), cols, data }
    }

    pub fn from_columns(columns: &[FpVector], rows: usize, p: Prime) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged matrix columns");
            for i in 0..rows {
                m[(i, j)] = c[i] % p.get();
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[FpElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    fn row_mut(&mut self, i: usize) -> &mut [FpElem] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> FpVector {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<FpVector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Submatrix made of the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> FpMatrix {
        let mut m = Self::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (k, &j) in cols.iter().enumerate() {
                m[(i, k)] = self[(i, j)];
            }
        }
        m
    }

    pub fn select_rows(&self, rows: &[usize]) -> FpMatrix {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            data.extend_from_slice(self.row(i));
        }
        FpMatrix { rows: rows.len(), cols: self.cols, data }
    }

    pub fn mul_vec(&self, v: &[FpElem], p: Prime) -> FpVector {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| dot(self.row(i), v, p)).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }
}

impl std::ops::Index<(usize, usize)> for FpMatrix {
    type Output = FpElem;
    fn index(&self, (i, j): (usize, usize)) -> &FpElem {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for FpMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut FpElem {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot(a: &[FpElem], b: &[FpElem], p: Prime) -> FpElem {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0, |acc, (&x, &y)| p.add(acc, p.mul(x, y)))
}

/// Result of [`rref`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Echelon {
    pub reduced: FpMatrix,
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
}

/// Reduced row-echelon form with leftmost pivots. Deterministic: the first
/// nonzero entry at or below the current row is chosen as pivot.
pub fn rref(m: &FpMatrix, p: Prime) -> Echelon {
    let mut r = m.clone();
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..r.cols {
        if row == r.rows {
            break;
        }
        let Some(piv) = (row..r.rows).find(|&i| r[(i, col)] != 0) else {
            continue;
        };
        r.swap_rows(row, piv);
        let scale = p.inv(r[(row, col)]).expect("pivot is nonzero");
        for x in r.row_mut(row) {
            *x = p.mul(*x, scale);
        }
        let pivot_row = r.row(row).to_vec();
        for i in 0..r.rows {
            if i == row {
                continue;
            }
            let factor = r[(i, col)];
            if factor == 0 {
                continue;
            }
            for (x, &y) in r.row_mut(i).iter_mut().zip(&pivot_row) {
                *x = p.sub(*x, p.mul(factor, y));
            }
        }
        pivot_cols.push(col);
        row += 1;
    }
    Echelon { rank: pivot_cols.len(), reduced: r, pivot_cols }
}

pub fn rank(m: &FpMatrix, p: Prime) -> usize {
    rref(m, p).rank
}

/// Basis of `{v : M v = 0}`: one vector per free column, that column set to 1
/// and the pivot variables solved for.
pub fn kernel_basis(m: &FpMatrix, p: Prime) -> Vec<FpVector> {
    let Echelon { reduced, pivot_cols, .. } = rref(m, p);
    let mut is_pivot = vec![false; m.cols];
    for &c in &pivot_cols {
        is_pivot[c] = true;
    }
    (0..m.cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![0; m.cols];
            v[free] = 1;
            for (i, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = p.neg(reduced[(i, free)]);
            }
            v
        })
        .collect()
}

/// Basis of `{w in Z_p^k : <w, v> = 0 for all v in vs}`.
pub fn orthogonal_complement(vs: &[FpVector], k: usize, p: Prime) -> Vec<FpVector> {
    kernel_basis(&FpMatrix::from_rows(vs, k, p), p)
}

/// Reduced basis of the row span of `vs`.
pub fn span_basis(vs: &[FpVector], k: usize, p: Prime) -> Vec<FpVector> {
    let e = rref(&FpMatrix::from_rows(vs, k, p), p);
    (0..e.rank).map(|i| e.reduced.row(i).to_vec()).collect()
}

/// Whether `v` lies in the span of `vs`.
pub fn in_span(vs: &[FpVector], v: &[FpElem], p: Prime) -> bool {
    let k = v.len();
    let base = rank(&FpMatrix::from_rows(vs, k, p), p);
    let mut ext: Vec<FpVector> = vs.to_vec();
    ext.push(v.to_vec());
    rank(&FpMatrix::from_rows(&ext, k, p), p) == base
}

/// Whether two families span the same subspace of Z_p^k.
pub fn same_span(a: &[FpVector], b: &[FpVector], k: usize, p: Prime) -> bool {
    span_basis(a, k, p) == span_basis(b, k, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pr(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn rref_examples() {
        let p = pr(7);
        let e = rref(&FpMatrix::from_rows(&[[2u64, 4]], 2, p), p);
        assert_eq!(e.reduced.to_rows(), vec![vec![1, 2]]);
        assert_eq!(e.rank, 1);

        let z = FpMatrix::zeros(2, 3);
        let e = rref(&z, p);
        assert_eq!(e.reduced, z);
        assert_eq!(e.rank, 0);

        let id = FpMatrix::identity(2);
        let e = rref(&id, p);
        assert_eq!(e.reduced, id);
        assert_eq!(e.rank, 2);
        assert_eq!(e.pivot_cols, vec![0, 1]);
    }

    #[test]
    fn kernel_examples() {
        let p = pr(3);
        assert_eq!(kernel_basis(&FpMatrix::from_rows(&[[1u64, 1]], 2, p), p), vec![vec![2, 1]]);
        assert!(kernel_basis(&FpMatrix::identity(2), p).is_empty());
        let p5 = pr(5);
        assert_eq!(kernel_basis(&FpMatrix::zeros(1, 2), p5).len(), 2);
    }

    #[test]
    fn complement_examples() {
        let p = pr(3);
        assert_eq!(orthogonal_complement(&[vec![1, 0]], 2, p), vec![vec![0, 1]]);
        assert_eq!(orthogonal_complement(&[], 2, p), vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(orthogonal_complement(&[vec![1, 1]], 2, p), vec![vec![2, 1]]);
    }

    fn matrix_strategy() -> impl Strategy<Value = (u64, FpMatrix)> {
        (prop::sample::select(vec![3u64, 5, 13]), 1usize..=8, 1usize..=8).prop_flat_map(|(p, r, c)| {
            prop::collection::vec(0..p, r * c).prop_map(move |data| {
                let rows: Vec<Vec<u64>> = data.chunks(c).map(|x| x.to_vec()).collect();
                (p, FpMatrix::from_rows(&rows, c, pr(p)))
            })
        })
    }

    proptest! {
        #[test]
        fn rref_idempotent((p, m) in matrix_strategy()) {
            let p = pr(p);
            let once = rref(&m, p);
            let twice = rref(&once.reduced, p);
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn kernel_is_annihilated_and_rank_nullity((p, m) in matrix_strategy()) {
            let p = pr(p);
            let ker = kernel_basis(&m, p);
            prop_assert_eq!(rank(&m, p) + ker.len(), m.cols());
            for v in &ker {
                prop_assert!(m.mul_vec(v, p).iter().all(|&x| x == 0));
            }
            prop_assert_eq!(rank(&FpMatrix::from_rows(&ker, m.cols(), p), p), ker.len());
        }

        #[test]
        fn double_complement((p, m) in matrix_strategy()) {
            let p = pr(p);
            let vs = m.to_rows();
            let k = m.cols();
            let back = orthogonal_complement(&orthogonal_complement(&vs, k, p), k, p);
            prop_assert!(vs.iter().all(|v| in_span(&back, v, p)));
            prop_assert!(back.iter().all(|v| in_span(&vs, v, p)));
        }
    }
}
