//! Homotopy inner products on the simplicial chains of a triangulated
//! Poincaré duality space, built order by order from local solves.
//!
//! Letters: every simplex `σ` of dimension `p` gives an algebra letter and
//! a module letter of degree `1 - p` (chains shifted by one) and a dual
//! module letter of degree `1 + p`. `d₁` and `g₁` are the boundary, `d₂`
//! and `g₂` the symmetrized Alexander–Whitney diagonal.

mod build;
mod complex;
pub mod io;
mod verify;

pub use build::{BuildOptions, Mutation, PdStructure};
pub use complex::{ComplexJson, SimplicialComplex};
pub use io::{LoadedPd, PdFile};
pub use verify::{verify, PdCheck, PdReport};

use std::sync::Arc;

use num_traits::One;

use crate::algebras::{add_into, Alphabet, Element, FreeAlgebra, Generators};
use crate::duality::quadratic_dual;
use crate::operad::presets::{preset, Preset};
use crate::operad::Operad;
use crate::qalg::Q;

/// `Lie`, as the quadratic dual of `Comm`.
pub fn lie_operad() -> Arc<Operad> {
    let p = quadratic_dual(&preset(Preset::Comm)).expect("Comm is quadratic").presentation;
    Arc::new(Operad::new(p).expect("valid dual"))
}

/// The free algebra and module letters attached to a complex.
pub struct PdAlgebra {
    pub complex: SimplicialComplex,
    pub alg: FreeAlgebra,
    pub v: Vec<usize>,
    pub w: Vec<usize>,
    pub w_dual: Vec<usize>,
}

impl PdAlgebra {
    pub fn new(complex: SimplicialComplex, max_order: usize) -> Self {
        let deg: Vec<i32> = (0..complex.len()).map(|i| 1 - complex.dim(i) as i32).collect();
        let dual: Vec<i32> = deg.iter().map(|d| 2 - d).collect();
        let mut a = Alphabet::new();
        let v = a.push(false, &deg, "a");
        let w = a.push(true, &deg, "m");
        let w_dual = a.push(true, &dual, "n");
        for i in 0..complex.len() {
            let s = complex.label(i);
            a.labels[v[i]] = format!("a{s}");
            a.labels[w[i]] = format!("m{s}");
            a.labels[w_dual[i]] = format!("n{s}");
        }
        let alg = FreeAlgebra::new(lie_operad(), a, max_order);
        PdAlgebra { complex, alg, v, w, w_dual }
    }

    /// Simplex index of any letter.
    pub fn simplex_of(&self, l: usize) -> usize {
        let n = self.complex.len();
        l % n
    }

    fn linear(&self, letters: &[usize], terms: &[(usize, i64)]) -> Element {
        let mut e = Element::new();
        for &(i, c) in terms {
            add_into(&mut e, &self.alg.generator(letters[i]), &Q::from_integer(c.into()));
        }
        e
    }

    /// `d₁` on the algebra letters.
    pub fn d1(&self) -> Generators {
        (0..self.complex.len())
            .filter(|&i| self.complex.dim(i) > 0)
            .map(|i| (self.v[i], self.linear(&self.v, &self.complex.boundary(i))))
            .collect()
    }

    /// `g₁` on the module letters.
    pub fn g1(&self) -> Generators {
        (0..self.complex.len())
            .filter(|&i| self.complex.dim(i) > 0)
            .map(|i| (self.w[i], self.linear(&self.w, &self.complex.boundary(i))))
            .collect()
    }

    /// Terms `(sign, front, back)` of the Alexander–Whitney diagonal of
    /// simplex `i`, with the sign of the shifted grading.
    pub fn aw_terms(&self, i: usize) -> Vec<(i64, usize, usize)> {
        let p = self.complex.dim(i);
        (0..=p)
            .map(|k| {
                let (f, b) = self.complex.front_back(i, k);
                (aw_sign(k), f, b)
            })
            .collect()
    }

    fn bracket(&self, x: usize, y: usize, c: i64) -> Element {
        self.alg.normalize(vec![(vec![x, y], vec![(0, Q::from_integer(c.into()))])])
    }

    /// `d₂`: the symmetrized Alexander–Whitney diagonal.
    pub fn d2(&self) -> Generators {
        let mut out = Generators::new();
        for i in 0..self.complex.len() {
            let mut e = Element::new();
            for (s, f, b) in self.aw_terms(i) {
                add_into(&mut e, &self.bracket(self.v[f], self.v[b], s), &Q::one());
            }
            if !e.is_empty() {
                out.insert(self.v[i], e);
            }
        }
        out
    }

    /// `g₂`: the diagonal with either factor as the module letter.
    pub fn g2(&self) -> Generators {
        let mut out = Generators::new();
        for i in 0..self.complex.len() {
            let mut e = Element::new();
            for (s, f, b) in self.aw_terms(i) {
                add_into(&mut e, &self.bracket(self.v[f], self.w[b], s), &Q::one());
                add_into(&mut e, &self.bracket(self.w[f], self.v[b], s), &Q::one());
            }
            if !e.is_empty() {
                out.insert(self.w[i], e);
            }
        }
        out
    }
}

fn aw_sign(k: usize) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complexes() {
        let c = SimplicialComplex::sphere(1);
        assert_eq!(c.dims(), vec![3, 3]);
        assert_eq!(c.homology().unwrap(), vec![1, 1]);
        let s = SimplicialComplex::sphere(2);
        assert_eq!(s.dims(), vec![4, 6, 4]);
        assert_eq!(s.homology().unwrap(), vec![1, 0, 1]);
        let p = SimplicialComplex::new(1, &[vec![0]]).unwrap();
        assert_eq!(p.homology().unwrap(), vec![1]);
        let mu = c.fundamental_cycle().unwrap();
        let named: Vec<(String, Q)> = mu.iter().map(|(i, q)| (c.label(*i), q.clone())).collect();
        assert_eq!(named.len(), 3);
        assert!(SimplicialComplex::new(6, &[vec![0, 1], vec![1, 2], vec![0, 2], vec![3, 4], vec![4, 5], vec![3, 5]]).unwrap().fundamental_cycle().is_err());
    }
}
