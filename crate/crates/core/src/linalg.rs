//! Dense exact linear algebra over a [`Field`].
//!
//! Vectors are plain `Vec<F>`; matrices are lists of columns or rows as
//! documented per function. Nothing here is clever: the matrices produced
//! by the Koszul computations are at most a few hundred entries wide.

use crate::scalar::Field;

/// An incrementally built subspace, stored as echelon rows keyed by pivot.
#[derive(Clone, Debug)]
pub struct Span<F> {
    dim: usize,
    rows: Vec<(usize, Vec<F>)>,
}

impl<F: Field> Span<F> {
    pub fn new(dim: usize) -> Self {
        Span {
            dim,
            rows: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows. Returns the remainder.
    pub fn reduce(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        let mut v = v.to_vec();
        for (pivot, row) in &self.rows {
            if v[*pivot].is_zero() {
                continue;
            }
            let c = v[*pivot].clone();
            for (x, r) in v.iter_mut().zip(row).skip(*pivot) {
                if !r.is_zero() {
                    *x = x.minus(&c.times(r));
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.reduce(v).iter().all(F::is_zero)
    }

    /// Adds `v`; returns whether the rank grew.
    pub fn insert(&mut self, v: &[F]) -> bool {
        let r = self.reduce(v);
        let Some(pivot) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[pivot].inv();
        let r: Vec<F> = r.iter().map(|x| x.times(&inv)).collect();
        self.rows.push((pivot, r));
        true
    }
}

/// Rank of the matrix whose columns are `cols`.
pub fn rank_of_columns<F: Field>(dim: usize, cols: &[Vec<F>]) -> usize {
    let mut span = Span::new(dim);
    for c in cols {
        span.insert(c);
    }
    span.rank()
}

/// Basis of `{ c : sum_j c_j cols[j] = 0 }`.
pub fn kernel_of_columns<F: Field>(dim: usize, cols: &[Vec<F>]) -> Vec<Vec<F>> {
    let n = cols.len();
    // Row-reduce the dim x n matrix in place, tracking pivot columns.
    let mut rows: Vec<Vec<F>> = (0..dim)
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..dim).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].inv();
        for x in rows[r].iter_mut() {
            *x = x.times(&inv);
        }
        for i in 0..dim {
            if i != r && !rows[i][col].is_zero() {
                let c = rows[i][col].clone();
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x = x.minus(&c.times(y));
                    }
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == dim {
            break;
        }
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![F::zero(); n];
            v[f] = F::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = rows[i][f].negated();
            }
            v
        })
        .collect()
}

/// Solves `sum_j c_j cols[j] = target`, returning one solution if any.
pub fn solve_columns<F: Field>(dim: usize, cols: &[Vec<F>], target: &[F]) -> Option<Vec<F>> {
    let mut augmented: Vec<Vec<F>> = cols.to_vec();
    augmented.push(target.to_vec());
    let kernel = kernel_of_columns(dim, &augmented);
    let n = cols.len();
    let v = kernel.into_iter().find(|v| !v[n].is_zero())?;
    let scale = v[n].negated().inv();
    Some(v[..n].iter().map(|x| x.times(&scale)).collect())
}

/// Applies the matrix with columns `cols` to `coeffs`.
pub fn combine_columns<F: Field>(dim: usize, cols: &[Vec<F>], coeffs: &[F]) -> Vec<F> {
    let mut out = vec![F::zero(); dim];
    for (c, col) in coeffs.iter().zip(cols) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(col) {
            if !x.is_zero() {
                *o = o.plus(&c.times(x));
            }
        }
    }
    out
}
