use std::collections::BTreeMap;

use serde::Serialize;

use super::{sparse_from_terms, Echelon, RatMatrix, SparseVec, Q};
use crate::Error;

/// Finite-dimensional space with a chosen, labelled basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasedSpace {
    pub labels: Vec<String>,
}

impl BasedSpace {
    pub fn new(labels: Vec<String>) -> Self {
        debug_assert!(
            {
                let mut l = labels.clone();
                l.sort();
                l.dedup();
                l.len() == labels.len()
            },
            "basis labels must be distinct"
        );
        BasedSpace { labels }
    }

    pub fn anonymous(dim: usize) -> Self {
        BasedSpace {
            labels: (0..dim).map(|i| format!("e{i}")).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }
}

/// Linear map stored by columns: `column(j)` is the image of source basis
/// vector `j` as a sparse vector in the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub columns: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn apply(&self, v: &[(usize, Q)]) -> SparseVec {
        sparse_from_terms(
            v.iter()
                .flat_map(|(j, c)| self.columns[*j].iter().map(move |(i, a)| (*i, a * c))),
        )
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &SparseMatrix) -> SparseMatrix {
        SparseMatrix {
            rows: self.rows,
            columns: first.columns.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_empty())
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(self.rows);
        for c in &self.columns {
            e.insert(c);
        }
        e.rank()
    }

    pub fn to_dense(&self) -> RatMatrix {
        RatMatrix::from_sparse_columns(self.rows, &self.columns)
    }

    pub fn from_dense(m: &RatMatrix) -> Self {
        SparseMatrix {
            rows: m.rows(),
            columns: (0..m.cols()).map(|j| m.column_sparse(j)).collect(),
        }
    }
}

/// Cochain complex over a contiguous degree window `start..start+len`, with
/// `differentials[k]` mapping degree `start+k` to `start+k+1`.
#[derive(Clone, Debug)]
pub struct ComplexData {
    pub start: i32,
    pub spaces: Vec<BasedSpace>,
    pub differentials: Vec<SparseMatrix>,
}

impl ComplexData {
    pub fn new(
        start: i32,
        spaces: Vec<BasedSpace>,
        differentials: Vec<SparseMatrix>,
    ) -> Result<Self, Error> {
        let c = ComplexData {
            start,
            spaces,
            differentials,
        };
        c.check_shapes()?;
        Ok(c)
    }

    pub fn degrees(&self) -> Vec<i32> {
        (0..self.spaces.len() as i32).map(|k| self.start + k).collect()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.spaces.iter().map(|s| s.dim()).collect()
    }

    fn check_shapes(&self) -> Result<(), Error> {
        let n = self.spaces.len();
        if self.differentials.len() + 1 != n.max(1) {
            return Err(Error::Shape(format!(
                "{} spaces need {} differentials, got {}",
                n,
                n.saturating_sub(1),
                self.differentials.len()
            )));
        }
        for (k, d) in self.differentials.iter().enumerate() {
            if d.cols() != self.spaces[k].dim() || d.rows != self.spaces[k + 1].dim() {
                return Err(Error::Shape(format!(
                    "differential out of degree {} has shape {}x{}, expected {}x{}",
                    self.start + k as i32,
                    d.rows,
                    d.cols(),
                    self.spaces[k + 1].dim(),
                    self.spaces[k].dim()
                )));
            }
        }
        Ok(())
    }

    /// Checks that consecutive differentials compose to zero.
    pub fn check_square_zero(&self) -> Result<(), Error> {
        for k in 1..self.differentials.len() {
            if !self.differentials[k].compose(&self.differentials[k - 1]).is_zero() {
                return Err(Error::NotAComplex(self.start + k as i32 - 1));
            }
        }
        Ok(())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims()
            .iter()
            .enumerate()
            .map(|(k, &d)| {
                let deg = self.start + k as i32;
                if deg.rem_euclid(2) == 0 {
                    d as i64
                } else {
                    -(d as i64)
                }
            })
            .sum()
    }
}

/// Homology dimension in every degree of the window.
pub fn homology_dims(c: &ComplexData) -> Result<BTreeMap<i32, usize>, Error> {
    c.check_shapes()?;
    c.check_square_zero()?;
    let ranks: Vec<usize> = c.differentials.iter().map(|d| d.rank()).collect();
    let mut out = BTreeMap::new();
    for (k, space) in c.spaces.iter().enumerate() {
        let out_rank = ranks.get(k).copied().unwrap_or(0);
        let in_rank = if k == 0 { 0 } else { ranks[k - 1] };
        out.insert(c.start + k as i32, space.dim() - out_rank - in_rank);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qalg::RatMatrix;

    #[test]
    fn point() {
        let c = ComplexData::new(0, vec![BasedSpace::anonymous(1)], vec![]).unwrap();
        assert_eq!(homology_dims(&c).unwrap(), BTreeMap::from([(0, 1)]));
    }

    #[test]
    fn identity_is_acyclic() {
        let c = ComplexData::new(
            -1,
            vec![BasedSpace::anonymous(1), BasedSpace::anonymous(1)],
            vec![SparseMatrix::from_dense(&RatMatrix::identity(1))],
        )
        .unwrap();
        assert_eq!(homology_dims(&c).unwrap(), BTreeMap::from([(-1, 0), (0, 0)]));
    }

    #[test]
    fn triangle_boundary_circle() {
        // C_1 -> C_0 written cohomologically: degree -1 (edges) -> degree 0 (vertices)
        // edges 01, 02, 12
        let boundary = RatMatrix::from_i64(&[&[-1, -1, 0], &[1, 0, -1], &[0, 1, 1]]);
        let c = ComplexData::new(
            -1,
            vec![BasedSpace::anonymous(3), BasedSpace::anonymous(3)],
            vec![SparseMatrix::from_dense(&boundary)],
        )
        .unwrap();
        let h = homology_dims(&c).unwrap();
        assert_eq!(h[&-1], 1);
        assert_eq!(h[&0], 1);
        let chi: i64 = h
            .iter()
            .map(|(d, n)| if d % 2 == 0 { *n as i64 } else { -(*n as i64) })
            .sum();
        assert_eq!(chi, c.euler_characteristic());
    }

    #[test]
    fn rejects_non_complex() {
        let one = SparseMatrix::from_dense(&RatMatrix::identity(1));
        let c = ComplexData::new(
            0,
            vec![BasedSpace::anonymous(1); 3],
            vec![one.clone(), one],
        )
        .unwrap();
        assert!(matches!(homology_dims(&c), Err(Error::NotAComplex(0))));
    }
}
