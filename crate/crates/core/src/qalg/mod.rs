//! Exact linear algebra over the rationals.
//!
//! Everything here works with [`Q`] (arbitrary precision rationals). Vectors
//! that come out of tree enumeration are very sparse, so the workhorse is
//! [`Echelon`], an incrementally built row-echelon basis over sparse rows.
//! The dense [`RatMatrix`] is used for small maps and for file I/O.

mod complex;
mod matrix;

pub use complex::{homology_dims, BasedSpace, ComplexData, SparseMatrix};
pub use matrix::{
    kernel_basis, orthogonal_complement, quotient_basis, row_reduce, RatMatrix, RowReduced,
};

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::Error;

/// Exact rational scalar.
pub type Q = BigRational;

/// Sparse vector as index-sorted `(index, value)` pairs without zeros.
pub type SparseVec = Vec<(usize, Q)>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn sign_q(sign: i32) -> Q {
    if sign >= 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

/// Formats a rational as `"p/q"` (or `"p"` for integers).
pub fn format_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_q(s: &str) -> Result<Q, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Collects `(index, value)` terms into a sorted sparse vector, summing
/// duplicates and dropping zeros.
pub fn sparse_from_terms<I: IntoIterator<Item = (usize, Q)>>(terms: I) -> SparseVec {
    let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
    for (i, c) in terms {
        if c.is_zero() {
            continue;
        }
        *acc.entry(i).or_insert_with(Q::zero) += c;
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

pub fn sparse_from_dense(v: &[Q]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.clone()))
        .collect()
}

pub fn sparse_to_dense(v: &[(usize, Q)], dim: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); dim];
    for (i, c) in v {
        out[*i] = c.clone();
    }
    out
}

/// `a + s*b` for sparse vectors.
pub fn sparse_axpy(a: &[(usize, Q)], s: &Q, b: &[(usize, Q)]) -> SparseVec {
    sparse_from_terms(
        a.iter()
            .cloned()
            .chain(b.iter().map(|(i, c)| (*i, c * s))),
    )
}

/// Incrementally built echelon basis of a subspace of `Q^dim`.
///
/// Every stored row has a leading coefficient of 1 at its pivot column and
/// no entries left of it. Rows are not reduced against each other; `reduce`
/// scans left to right so it still eliminates every pivot column.
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    rows: Vec<SparseVec>,
    pivot_row: HashMap<usize, usize>,
}

impl Echelon {
    pub fn new(dim: usize) -> Self {
        Echelon {
            dim,
            rows: Vec::new(),
            pivot_row: HashMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row.contains_key(&col)
    }

    /// Pivot columns in increasing order.
    pub fn pivots(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.pivot_row.keys().copied().collect();
        p.sort_unstable();
        p
    }

    /// Residue of `v` after eliminating every pivot column.
    pub fn reduce(&self, v: &[(usize, Q)]) -> SparseVec {
        let mut work: BTreeMap<usize, Q> = v
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (*i, c.clone()))
            .collect();
        let mut cursor = 0usize;
        loop {
            let next = work.range(cursor..).next().map(|(k, _)| *k);
            let Some(col) = next else { break };
            if let Some(&r) = self.pivot_row.get(&col) {
                let factor = work.remove(&col).expect("present");
                for (j, c) in self.rows[r].iter().skip(1) {
                    let e = work.entry(*j).or_insert_with(Q::zero);
                    *e -= &factor * c;
                    if e.is_zero() {
                        work.remove(j);
                    }
                }
            }
            cursor = col + 1;
        }
        work.into_iter().collect()
    }

    pub fn contains(&self, v: &[(usize, Q)]) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the span. Returns `true` when the rank grew.
    pub fn insert(&mut self, v: &[(usize, Q)]) -> bool {
        let r = self.reduce(v);
        if r.is_empty() {
            return false;
        }
        let lead = r[0].1.clone();
        let row: SparseVec = if lead.is_one() {
            r
        } else {
            let inv = lead.recip();
            r.into_iter().map(|(i, c)| (i, c * &inv)).collect()
        };
        self.pivot_row.insert(row[0].0, self.rows.len());
        self.rows.push(row);
        true
    }

    /// Rows of the reduced row-echelon form, sorted by pivot.
    pub fn rref_rows(&self) -> Vec<SparseVec> {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| self.rows[r][0].0);
        let mut done: HashMap<usize, SparseVec> = HashMap::new();
        for &r in order.iter().rev() {
            let row = &self.rows[r];
            let mut work: BTreeMap<usize, Q> = row.iter().cloned().collect();
            let cols: Vec<usize> = work.keys().copied().skip(1).collect();
            for col in cols {
                if let Some(other) = done.get(&col) {
                    if let Some(f) = work.get(&col).cloned() {
                        for (j, c) in other {
                            let e = work.entry(*j).or_insert_with(Q::zero);
                            *e -= &f * c;
                        }
                    }
                }
            }
            let clean: SparseVec = work.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            done.insert(row[0].0, clean);
        }
        let mut out: Vec<SparseVec> = done.into_values().collect();
        out.sort_by_key(|r| r[0].0);
        out
    }

    pub fn span_rank_of(vectors: &[SparseVec], dim: usize) -> usize {
        let mut e = Echelon::new(dim);
        for v in vectors {
            e.insert(v);
        }
        e.rank()
    }
}

/// Echelon basis that remembers how each row was built from the inserted
/// generators, so membership queries also return coefficients.
#[derive(Clone, Debug)]
pub struct Solver {
    ech: Echelon,
    // combination of generators producing each echelon row (keyed by row index)
    combos: Vec<SparseVec>,
    ngens: usize,
}

impl Solver {
    pub fn new(dim: usize) -> Self {
        Solver {
            ech: Echelon::new(dim),
            combos: Vec::new(),
            ngens: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.ech.rank()
    }

    /// Adds generator number `self.ngens` (returned).
    pub fn push(&mut self, v: &[(usize, Q)]) -> usize {
        let id = self.ngens;
        self.ngens += 1;
        let (res, combo) = self.reduce_tracked(v);
        if !res.is_empty() {
            let mut combo = combo;
            combo.push((id, Q::one()));
            let combo = sparse_from_terms(combo);
            let inv = res[0].1.recip();
            let row: SparseVec = res.into_iter().map(|(i, c)| (i, c * &inv)).collect();
            let combo: SparseVec = combo.into_iter().map(|(i, c)| (i, c * &inv)).collect();
            self.ech.pivot_row.insert(row[0].0, self.ech.rows.len());
            self.ech.rows.push(row);
            self.combos.push(combo);
        }
        id
    }

    // residue r and combination c with v = r + sum c_k gen_k ... returned as
    // (r, -c) so that r = v + sum combo_k gen_k
    fn reduce_tracked(&self, v: &[(usize, Q)]) -> (SparseVec, SparseVec) {
        let mut work: BTreeMap<usize, Q> = v
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (*i, c.clone()))
            .collect();
        let mut combo: Vec<(usize, Q)> = Vec::new();
        let mut cursor = 0usize;
        loop {
            let next = work.range(cursor..).next().map(|(k, _)| *k);
            let Some(col) = next else { break };
            if let Some(&r) = self.ech.pivot_row.get(&col) {
                let factor = work.remove(&col).expect("present");
                for (j, c) in self.ech.rows[r].iter().skip(1) {
                    let e = work.entry(*j).or_insert_with(Q::zero);
                    *e -= &factor * c;
                    if e.is_zero() {
                        work.remove(j);
                    }
                }
                for (g, c) in &self.combos[r] {
                    combo.push((*g, -(&factor * c)));
                }
            }
            cursor = col + 1;
        }
        (work.into_iter().collect(), sparse_from_terms(combo))
    }

    /// Coefficients `x` with `sum x_k gen_k = target`, or `None` if the target
    /// is outside the span. Generators that became dependent get coefficient 0.
    pub fn solve(&self, target: &[(usize, Q)]) -> Option<SparseVec> {
        let (res, combo) = self.reduce_tracked(target);
        if !res.is_empty() {
            return None;
        }
        Some(combo.into_iter().map(|(i, c)| (i, -c)).collect())
    }
}

/// Rank of a list of dense rows.
pub fn rank_of_rows(rows: &[Vec<Q>]) -> usize {
    let dim = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut e = Echelon::new(dim);
    for r in rows {
        e.insert(&sparse_from_dense(r));
    }
    e.rank()
}

pub fn is_integer(x: &Q) -> bool {
    x.denom().is_one()
}

pub fn abs_q(x: &Q) -> Q {
    x.abs()
}
