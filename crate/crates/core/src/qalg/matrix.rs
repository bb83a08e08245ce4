use num_traits::{One, Zero};

use super::{sparse_from_dense, Echelon, SparseVec, Q};
use crate::Error;

/// Dense rational matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        RatMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| super::q(x)).collect())
                .collect(),
        )
    }

    /// Matrix whose columns are the given sparse vectors.
    pub fn from_sparse_columns(rows: usize, cols: &[SparseVec]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, c) in col {
                m.set(*i, j, c.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Q {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Q] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vec(&self, r: usize) -> Vec<Q> {
        self.row(r).to_vec()
    }

    pub fn column_sparse(&self, c: usize) -> SparseVec {
        (0..self.rows)
            .filter(|&r| !self.get(r, c).is_zero())
            .map(|r| (r, self.get(r, c).clone()))
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j) + a * b;
                        out.set(i, j, cur);
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Q::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn apply_sparse(&self, v: &[(usize, Q)]) -> SparseVec {
        let mut out = vec![Q::zero(); self.rows];
        for (j, c) in v {
            for (r, o) in out.iter_mut().enumerate() {
                let a = self.get(r, *j);
                if !a.is_zero() {
                    *o += a * c;
                }
            }
        }
        sparse_from_dense(&out)
    }

    pub fn scale(&self, s: &Q) -> Self {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.rows)
    }

    pub fn pow(&self, k: usize) -> RatMatrix {
        let mut out = Self::identity(self.rows);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn rank(&self) -> usize {
        row_reduce(self).rank
    }
}

#[derive(Clone, Debug)]
pub struct RowReduced {
    pub rref: RatMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

/// Reduced row-echelon form of `m`.
pub fn row_reduce(m: &RatMatrix) -> RowReduced {
    let mut e = Echelon::new(m.cols());
    for r in 0..m.rows() {
        e.insert(&sparse_from_dense(m.row(r)));
    }
    let rows = e.rref_rows();
    let pivots: Vec<usize> = rows.iter().map(|r| r[0].0).collect();
    let mut rref = RatMatrix::zeros(m.rows(), m.cols());
    for (i, row) in rows.iter().enumerate() {
        for (j, c) in row {
            rref.set(i, *j, c.clone());
        }
    }
    RowReduced {
        rank: pivots.len(),
        rref,
        pivots,
    }
}

/// Basis of the null space `{x : m x = 0}`, one vector per free column.
pub fn kernel_basis(m: &RatMatrix) -> Vec<Vec<Q>> {
    let rr = row_reduce(m);
    let n = m.cols();
    let free: Vec<usize> = (0..n).filter(|c| !rr.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); n];
            v[f] = Q::one();
            for (i, &p) in rr.pivots.iter().enumerate() {
                v[p] = -rr.rref.get(i, f).clone();
            }
            v
        })
        .collect()
}

/// Quotient of `Q^ambient_dim` by the span of `subspace`.
///
/// Coset representatives are the ambient basis vectors at non-pivot columns of
/// the row-reduced subspace; `reduce` has one row per representative and maps
/// an ambient vector to its quotient coordinates.
pub fn quotient_basis(ambient_dim: usize, subspace: &[Vec<Q>]) -> (Vec<usize>, RatMatrix) {
    let mut e = Echelon::new(ambient_dim);
    for v in subspace {
        assert_eq!(v.len(), ambient_dim, "subspace vector has wrong length");
        e.insert(&sparse_from_dense(v));
    }
    let reps: Vec<usize> = (0..ambient_dim).filter(|c| !e.is_pivot(*c)).collect();
    let pos: std::collections::HashMap<usize, usize> =
        reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let mut reduce = RatMatrix::zeros(reps.len(), ambient_dim);
    for j in 0..ambient_dim {
        for (i, c) in e.reduce(&[(j, Q::one())]) {
            reduce.set(pos[&i], j, c);
        }
    }
    (reps, reduce)
}

/// Basis of `{w : <v, w> = 0 for all v in subspace}` for the bilinear form
/// `<v, w> = v^T pairing w`.
pub fn orthogonal_complement(
    subspace: &[Vec<Q>],
    ambient_dim: usize,
    pairing: &RatMatrix,
) -> Result<Vec<Vec<Q>>, Error> {
    if pairing.rows() != ambient_dim || pairing.cols() != ambient_dim {
        return Err(Error::Shape(format!(
            "pairing is {}x{}, ambient dimension {}",
            pairing.rows(),
            pairing.cols(),
            ambient_dim
        )));
    }
    if pairing.rank() != ambient_dim {
        return Err(Error::Degenerate);
    }
    if subspace.is_empty() {
        return Ok((0..ambient_dim)
            .map(|i| {
                let mut v = vec![Q::zero(); ambient_dim];
                v[i] = Q::one();
                v
            })
            .collect());
    }
    let bt = pairing.transpose();
    let rows: Vec<Vec<Q>> = subspace.iter().map(|v| bt.apply(v)).collect();
    Ok(kernel_basis(&RatMatrix::from_rows(rows)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qalg::q;

    #[test]
    fn identity_is_its_own_rref() {
        let rr = row_reduce(&RatMatrix::identity(2));
        assert_eq!(rr.rref, RatMatrix::identity(2));
        assert_eq!(rr.rank, 2);
    }

    #[test]
    fn proportional_rows() {
        let rr = row_reduce(&RatMatrix::from_i64(&[&[1, 2], &[2, 4]]));
        assert_eq!(rr.rref, RatMatrix::from_i64(&[&[1, 2], &[0, 0]]));
        assert_eq!(rr.rank, 1);
        assert_eq!(rr.pivots, vec![0]);
    }

    #[test]
    fn kernels() {
        assert!(kernel_basis(&RatMatrix::identity(3)).is_empty());
        assert_eq!(kernel_basis(&RatMatrix::zeros(3, 3)).len(), 3);
        let k = kernel_basis(&RatMatrix::from_i64(&[&[1, 1, 0], &[0, 0, 1]]));
        assert_eq!(k, vec![vec![q(-1), q(1), q(0)]]);
    }

    #[test]
    fn quotients() {
        let (reps, red) = quotient_basis(3, &[]);
        assert_eq!(reps, vec![0, 1, 2]);
        assert!(red.is_identity());
        let (reps, red) = quotient_basis(2, &[vec![q(1), q(-1)]]);
        assert_eq!(reps, vec![1]);
        assert_eq!(red.get(0, 0), red.get(0, 1));
    }

    #[test]
    fn complements() {
        let id = RatMatrix::identity(3);
        assert_eq!(orthogonal_complement(&[], 3, &id).unwrap().len(), 3);
        let all: Vec<Vec<Q>> = RatMatrix::identity(3)
            .transpose()
            .data
            .chunks(3)
            .map(|c| c.to_vec())
            .collect();
        assert!(orthogonal_complement(&all, 3, &id).unwrap().is_empty());
        let degenerate = RatMatrix::from_i64(&[&[1, 0], &[0, 0]]);
        assert!(matches!(
            orthogonal_complement(&[], 2, &degenerate),
            Err(Error::Degenerate)
        ));
    }
}
