use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::qalg::{homology_dims, kernel_basis, BasedSpace, ComplexData, RatMatrix, SparseMatrix, Q};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub vertices: usize,
    pub simplices: Vec<Vec<usize>>,
}

/// A finite simplicial complex, closed under faces. Simplices are sorted
/// vertex lists, oriented by that order, and indexed by dimension then
/// lexicographically.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    pub vertices: usize,
    pub simplices: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

fn faces_of(s: &[usize]) -> Vec<Vec<usize>> {
    if s.len() <= 1 {
        return Vec::new();
    }
    (0..s.len())
        .map(|i| s.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect())
        .collect()
}

impl SimplicialComplex {
    /// Closes the given simplices under faces.
    pub fn new(vertices: usize, simplices: &[Vec<usize>]) -> Result<Self> {
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut stack: Vec<Vec<usize>> = Vec::new();
        for s in simplices {
            let mut t = s.clone();
            t.sort_unstable();
            if t.is_empty() {
                return Err(Error::Parse("empty simplex".into()));
            }
            if t.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Parse(format!("repeated vertex in {s:?}")));
            }
            if let Some(&v) = t.iter().find(|&&v| v >= vertices) {
                return Err(Error::Parse(format!("vertex {v} out of range {vertices}")));
            }
            stack.push(t);
        }
        while let Some(s) = stack.pop() {
            if all.insert(s.clone()) {
                stack.extend(faces_of(&s));
            }
        }
        let mut list: Vec<Vec<usize>> = all.into_iter().collect();
        list.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let index = list.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let c = SimplicialComplex { vertices, simplices: list, index };
        if !c.boundary_squares_to_zero() {
            return Err(Error::NotAComplex(0));
        }
        Ok(c)
    }

    pub fn from_json(j: &ComplexJson) -> Result<Self> {
        Self::new(j.vertices, &j.simplices)
    }

    pub fn to_json(&self) -> ComplexJson {
        let maximal = (0..self.len()).filter(|&i| self.cofaces(i).is_empty()).map(|i| self.simplices[i].clone()).collect();
        ComplexJson { vertices: self.vertices, simplices: maximal }
    }

    /// Boundary of the standard `n`-simplex (`n + 1` vertices).
    pub fn sphere(n: usize) -> Self {
        let facets: Vec<Vec<usize>> = faces_of(&(0..=n + 1).collect::<Vec<_>>());
        Self::new(n + 2, &facets).expect("simplex boundary")
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn dim(&self, i: usize) -> usize {
        self.simplices[i].len() - 1
    }

    pub fn top_dim(&self) -> usize {
        self.simplices.iter().map(|s| s.len() - 1).max().unwrap_or(0)
    }

    pub fn find(&self, s: &[usize]) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn label(&self, i: usize) -> String {
        let v: Vec<String> = self.simplices[i].iter().map(|v| v.to_string()).collect();
        format!("[{}]", v.join(","))
    }

    /// `∂σ = Σ (-1)^i d_i σ`.
    pub fn boundary(&self, i: usize) -> Vec<(usize, i64)> {
        faces_of(&self.simplices[i])
            .into_iter()
            .enumerate()
            .map(|(k, f)| (self.index[&f], if k % 2 == 0 { 1 } else { -1 }))
            .collect()
    }

    pub fn cofaces(&self, i: usize) -> Vec<usize> {
        let s = &self.simplices[i];
        (0..self.len())
            .filter(|&j| self.simplices[j].len() == s.len() + 1 && s.iter().all(|v| self.simplices[j].contains(v)))
            .collect()
    }

    /// The simplex and all of its faces, in index order.
    pub fn closure(&self, i: usize) -> Vec<usize> {
        let s = &self.simplices[i];
        let mut out: Vec<usize> = (0..self.len()).filter(|&j| self.simplices[j].iter().all(|v| s.contains(v))).collect();
        out.sort_unstable();
        out
    }

    /// The front face `[v_0..v_k]` and back face `[v_k..v_p]`.
    pub fn front_back(&self, i: usize, k: usize) -> (usize, usize) {
        let s = &self.simplices[i];
        (self.index[&s[..=k].to_vec()], self.index[&s[k..].to_vec()])
    }

    fn of_dim(&self, p: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.dim(i) == p).collect()
    }

    fn boundary_matrix(&self, p: usize) -> SparseMatrix {
        let rows = self.of_dim(p - 1);
        let pos: HashMap<usize, usize> = rows.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let columns = self
            .of_dim(p)
            .iter()
            .map(|&i| {
                let mut v: Vec<(usize, Q)> = self.boundary(i).into_iter().map(|(f, s)| (pos[&f], Q::from_integer(s.into()))).collect();
                v.sort_by_key(|x| x.0);
                v
            })
            .collect();
        SparseMatrix { rows: rows.len(), columns }
    }

    fn boundary_squares_to_zero(&self) -> bool {
        (2..=self.top_dim()).all(|p| self.boundary_matrix(p - 1).compose(&self.boundary_matrix(p)).is_zero())
    }

    /// Simplicial chains as a complex in degree `-p`.
    pub fn chain_complex(&self) -> Result<ComplexData> {
        let top = self.top_dim();
        let spaces = (0..=top).rev().map(|p| BasedSpace::new(self.of_dim(p).iter().map(|&i| self.label(i)).collect())).collect();
        let differentials = (1..=top).rev().map(|p| self.boundary_matrix(p)).collect();
        ComplexData::new(-(top as i32), spaces, differentials)
    }

    /// Betti numbers indexed by dimension.
    pub fn homology(&self) -> Result<Vec<usize>> {
        let h: BTreeMap<i32, usize> = homology_dims(&self.chain_complex()?)?;
        Ok((0..=self.top_dim()).map(|p| h[&-(p as i32)]).collect())
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.top_dim()).map(|p| self.of_dim(p).len()).collect()
    }

    /// The top-dimensional cycle with coefficients `±1` on every top
    /// simplex, normalized to `+1` on the first one.
    pub fn fundamental_cycle(&self) -> Result<Vec<(usize, Q)>> {
        let top = self.top_dim();
        if top == 0 {
            if self.len() == 1 {
                return Ok(vec![(0, Q::from_integer(1.into()))]);
            }
            return Err(Error::NoFundamentalCycle(format!("{} components", self.len())));
        }
        let cols = self.of_dim(top);
        let m = self.boundary_matrix(top);
        let dense = RatMatrix::from_sparse_columns(m.rows, &m.columns);
        let ker = kernel_basis(&dense);
        if ker.len() != 1 {
            return Err(Error::NoFundamentalCycle(format!("top homology has dimension {}", ker.len())));
        }
        let k = &ker[0];
        let lead = k[0].clone();
        if lead == Q::from_integer(0.into()) {
            return Err(Error::NoFundamentalCycle("a top simplex is missing from the cycle".into()));
        }
        let mut out = Vec::new();
        for (j, c) in k.iter().enumerate() {
            let c = c / &lead;
            if c != Q::from_integer(1.into()) && c != Q::from_integer((-1).into()) {
                return Err(Error::NoFundamentalCycle(format!("coefficient {c} on {}", self.label(cols[j]))));
            }
            out.push((cols[j], c));
        }
        Ok(out)
    }
}
