//! Built-in presentations for the associative, commutative and Lie
//! operads. The relations are computed, not typed in: every binary tree is
//! evaluated as a multilinear polynomial in noncommuting (or commuting)
//! variables and the relations are the kernel of that evaluation.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{FreeComponent, GeneratorSet, PTree, Presentation};
use crate::qalg::{kernel_basis, rank_of_rows, sparse_from_dense, RatMatrix, Q};
use crate::trees::Signature;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    Assoc,
    Comm,
    Lie,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Assoc, Preset::Comm, Preset::Lie];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Assoc => "assoc",
            Preset::Comm => "comm",
            Preset::Lie => "lie",
        }
    }

    pub fn parse(s: &str) -> Option<Preset> {
        Preset::ALL.into_iter().find(|p| p.name() == s)
    }
}

/// Multilinear polynomial: word (sequence of leaf labels) to coefficient.
pub type Poly = BTreeMap<Vec<usize>, Q>;

fn mul(a: &Poly, b: &Poly, commutative: bool) -> Poly {
    let mut out = Poly::new();
    for (u, x) in a {
        for (v, y) in b {
            let mut w = u.clone();
            w.extend_from_slice(v);
            if commutative {
                w.sort_unstable();
            }
            let e = out.entry(w).or_insert_with(Q::zero);
            *e += x * y;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn sub(a: &Poly, b: &Poly) -> Poly {
    let mut out = a.clone();
    for (w, c) in b {
        let e = out.entry(w.clone()).or_insert_with(Q::zero);
        *e -= c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Evaluates a decorated planar tree as a polynomial in the leaf labels.
pub fn evaluate(preset: Preset, t: &PTree) -> Poly {
    match t {
        PTree::Leaf(l) => Poly::from([(vec![*l], Q::one())]),
        PTree::Node(n) => {
            let a = evaluate(preset, &n.kids[0]);
            let b = evaluate(preset, &n.kids[1]);
            let mut out = Poly::new();
            for (g, c) in &n.deco {
                let v = match (preset, *g) {
                    (Preset::Assoc, 0) => mul(&a, &b, false),
                    (Preset::Assoc, _) => mul(&b, &a, false),
                    (Preset::Comm, _) => mul(&a, &b, true),
                    (Preset::Lie, _) => sub(&mul(&a, &b, false), &mul(&b, &a, false)),
                };
                for (w, x) in v {
                    let e = out.entry(w).or_insert_with(Q::zero);
                    *e += x * c;
                }
            }
            out.retain(|_, c| !c.is_zero());
            out
        }
    }
}

pub fn generators(preset: Preset) -> GeneratorSet {
    match preset {
        Preset::Assoc => GeneratorSet::uncolored(2, RatMatrix::from_i64(&[&[0, 1], &[1, 0]]), true),
        Preset::Comm => GeneratorSet::uncolored(1, RatMatrix::identity(1), true),
        Preset::Lie => GeneratorSet::uncolored(1, RatMatrix::from_i64(&[&[-1]]), true),
    }
}

/// Rows of the evaluation map on the free component of arity `n`: one row
/// per basis tree, columns indexed by the words that occur.
pub fn evaluation_rows(preset: Preset, n: usize) -> Vec<Vec<Q>> {
    let gens = generators(preset);
    let fc = FreeComponent::new(&gens, &Signature::uncolored(n));
    let polys: Vec<Poly> = (0..fc.dim()).map(|i| evaluate(preset, &fc.ptree(i))).collect();
    let mut words: Vec<Vec<usize>> = polys.iter().flat_map(|p| p.keys().cloned()).collect();
    words.sort();
    words.dedup();
    polys
        .iter()
        .map(|p| {
            words
                .iter()
                .map(|w| p.get(w).cloned().unwrap_or_else(Q::zero))
                .collect()
        })
        .collect()
}

/// Dimension of the span of all evaluated trees of arity `n`.
pub fn word_rank(preset: Preset, n: usize) -> usize {
    rank_of_rows(&evaluation_rows(preset, n))
}

pub fn preset(p: Preset) -> Presentation {
    let gens = generators(p);
    let s3 = Signature::uncolored(3);
    let rows = evaluation_rows(p, 3);
    // relations: kernel of x -> x^T (rows), i.e. null space of rows^T
    let m = RatMatrix::from_rows(rows).transpose();
    let rels: Vec<_> = kernel_basis(&m).iter().map(|v| sparse_from_dense(v)).collect();
    Presentation {
        name: p.name().to_string(),
        gens,
        relations: BTreeMap::from([(s3, rels)]),
    }
}

/// Closed-form dimension of the arity `n` component.
pub fn expected_dim(p: Preset, n: usize) -> usize {
    let fact = |k: usize| (1..=k).product::<usize>();
    match p {
        Preset::Assoc => fact(n),
        Preset::Comm => 1,
        Preset::Lie => fact(n.saturating_sub(1)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relation_counts() {
        let count = |p| preset(p).relations.values().map(|r| r.len()).sum::<usize>();
        assert_eq!(count(Preset::Assoc), 6);
        assert_eq!(count(Preset::Comm), 2);
        assert_eq!(count(Preset::Lie), 1);
    }

    #[test]
    fn lie_brackets_expand() {
        let t = PTree::node(vec![(0, Q::one())], PTree::Leaf(1), PTree::Leaf(2));
        let p = evaluate(Preset::Lie, &t);
        assert_eq!(p.len(), 2);
        assert_eq!(p[&vec![2, 1]], -Q::one());
    }
}
