//! The cyclic structure: the `S_{n+1}` action on arity `n` obtained by
//! turning a leaf into the output, and a checker for the cyclic axioms.

use num_traits::One;
use serde::Serialize;

use super::{Operad, PTree};
use crate::par;
use crate::perm;
use crate::qalg::{sparse_from_terms, RatMatrix, SparseVec, Q};
use crate::trees::Signature;
use crate::{Error, Result};

/// Deliberate corruptions of the cyclic structure, for mutation tests.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum Mutation {
    #[default]
    None,
    /// The vertex next to the new output picks up a sign when rotated, so
    /// the action stops being compatible with grafting into the last slot.
    NegateOutputVertex,
}

/// Makes leaf `leaf` the output. The old output becomes a leaf labelled
/// `leaf`. At each vertex on the path the flags keep their cyclic order
/// (output, left, right) and the decoration is unchanged.
pub fn reroot_ptree(t: &PTree, leaf: usize, mutation: Mutation) -> (PTree, i32) {
    let mut path = Vec::new();
    if !find_path(t, leaf, &mut path) {
        panic!("leaf {leaf} not in tree");
    }
    let mut above = PTree::Leaf(leaf);
    let mut node = t;
    let mut sign = 1;
    for &c in &path {
        let PTree::Node(n) = node else { unreachable!() };
        above = if c == 0 {
            PTree::node(n.deco.clone(), n.kids[1].clone(), above)
        } else {
            PTree::node(n.deco.clone(), above, n.kids[0].clone())
        };
        if mutation == Mutation::NegateOutputVertex && matches!(n.kids[c], PTree::Leaf(_)) {
            sign = -sign;
        }
        node = &n.kids[c];
    }
    (above, sign)
}

fn find_path(t: &PTree, leaf: usize, path: &mut Vec<usize>) -> bool {
    match t {
        PTree::Leaf(l) => *l == leaf,
        PTree::Node(n) => {
            for c in 0..2 {
                path.push(c);
                if find_path(&n.kids[c], leaf, path) {
                    return true;
                }
                path.pop();
            }
            false
        }
    }
}

/// `τ_{n+1}` as a permutation of the flags `0..=n` (0 is the output).
pub fn tau(n: usize) -> Vec<usize> {
    (0..=n).map(|j| (j + 1) % (n + 1)).collect()
}

impl Operad {
    /// The action of `p` (a permutation of `0..=n`, flag `j` relabelled
    /// `p[j]`) on a free vector of arity `n`.
    pub fn cyclic_free(&self, n: usize, p: &[usize], x: &[(usize, Q)], mutation: Mutation) -> SparseVec {
        let sig = Signature::uncolored(n);
        let fc = self.free(&sig);
        let l = p.iter().position(|&j| j == 0).expect("permutation");
        let mut out = Vec::new();
        for (i, c) in x {
            let t = fc.ptree(*i);
            let (t, s) = if l == 0 {
                (t, 1)
            } else {
                reroot_ptree(&t, l, mutation)
            };
            let t = t.relabel(&|k| if k == l { p[0] } else { p[k] });
            let c = if s > 0 { c.clone() } else { -c.clone() };
            fc.expand_into(&self.pres.gens, &t, &c, &mut out);
        }
        sparse_from_terms(out)
    }

    /// The `S_{n+1}` action on the quotient component of arity `n`.
    pub fn cyclic(&self, n: usize, p: &[usize], x: &[(usize, Q)]) -> SparseVec {
        self.cyclic_mutated(n, p, x, Mutation::None)
    }

    pub fn cyclic_mutated(&self, n: usize, p: &[usize], x: &[(usize, Q)], m: Mutation) -> SparseVec {
        let comp = self.component(&Signature::uncolored(n));
        comp.reduce(&self.cyclic_free(n, p, &comp.lift(x), m))
    }

    pub fn tau(&self, n: usize, x: &[(usize, Q)]) -> SparseVec {
        self.cyclic(n, &tau(n), x)
    }

    pub fn tau_inverse(&self, n: usize, x: &[(usize, Q)]) -> SparseVec {
        self.cyclic(n, &perm::inverse(&tau(n)), x)
    }

    /// Matrix of the flag permutation `p` on arity `n`.
    pub fn cyclic_matrix(&self, n: usize, p: &[usize]) -> RatMatrix {
        let d = self.dim(&Signature::uncolored(n));
        let cols: Vec<SparseVec> = (0..d).map(|i| self.cyclic(n, p, &[(i, Q::one())])).collect();
        RatMatrix::from_sparse_columns(d, &cols)
    }
}

/// Matrix of `τ_{n+1}` on the arity `n` component.
pub fn cyclic_action(op: &Operad, n: usize) -> Result<RatMatrix> {
    if !op.gens().cyclic || !op.gens().is_uncolored() {
        return Err(Error::NotCyclic);
    }
    Ok(op.cyclic_matrix(n, &tau(n)))
}

/// Outcome of [`check_cyclic_axioms`].
#[derive(Clone, Debug, Serialize)]
pub struct CyclicCheck {
    /// `(name, number of instances checked, number of violations)`.
    pub checks: Vec<(String, usize, usize)>,
    /// First few violations, human readable.
    pub violations: Vec<String>,
    pub pass: bool,
}

impl CyclicCheck {
    fn record(&mut self, name: &str, total: usize, bad: Vec<String>) {
        self.checks.push((name.to_string(), total, bad.len()));
        self.violations.extend(bad.into_iter().take(5));
        self.pass = self.checks.iter().all(|c| c.2 == 0);
    }

    pub fn failed(&self, name: &str) -> bool {
        self.checks.iter().any(|c| c.0 == name && c.2 > 0)
    }
}

fn unit(i: usize) -> SparseVec {
    vec![(i, Q::one())]
}

/// Checks that the rotation action is well defined on the quotient, has the
/// right order, is compatible with the relabelling action, and satisfies
/// the three composition identities of a cyclic operad on basis elements
/// with composite arity at most `max_arity`.
pub fn check_cyclic_axioms(op: &Operad, max_arity: usize, mutation: Mutation) -> Result<CyclicCheck> {
    if !op.gens().cyclic || !op.gens().is_uncolored() {
        return Err(Error::NotCyclic);
    }
    let mut report = CyclicCheck {
        checks: Vec::new(),
        violations: Vec::new(),
        pass: true,
    };
    let sigs: Vec<Signature> = (1..=max_arity).map(Signature::uncolored).collect();
    op.prepare(&sigs);
    let rot = |n: usize, x: &[(usize, Q)]| op.cyclic_mutated(n, &tau(n), x, mutation);

    // τ_2(1) = 1
    let one = unit(0);
    let bad = if rot(1, &one) == one {
        vec![]
    } else {
        vec!["tau_2(1) != 1".to_string()]
    };
    report.record("unit_fixed", 1, bad);

    // the ideal is carried into itself
    let mut total = 0;
    let mut bad = Vec::new();
    for n in 3..=max_arity {
        let comp = op.component(&Signature::uncolored(n));
        let ideal = op.ideal(&Signature::uncolored(n));
        total += ideal.len();
        let t = tau(n);
        let results = par::map(&ideal, |v| comp.reduce(&op.cyclic_free(n, &t, v, mutation)).is_empty());
        for (k, ok) in results.into_iter().enumerate() {
            if !ok {
                bad.push(format!("rotation moves ideal generator {k} of arity {n} out of the ideal"));
            }
        }
    }
    report.record("well_defined", total, bad);

    // τ^{n+1} = id and τ s_i τ^{-1} = s_{i+1} for adjacent transpositions
    let mut total = 0;
    let mut bad = Vec::new();
    for n in 1..=max_arity {
        let d = op.dim(&Signature::uncolored(n));
        for i in 0..d {
            total += 1;
            let mut x = unit(i);
            for _ in 0..=n {
                x = rot(n, &x);
            }
            if x != unit(i) {
                bad.push(format!("tau_{}^{} != id on basis {i} of arity {n}", n + 1, n + 1));
            }
            for s in 1..n {
                total += 1;
                let mut sw: Vec<usize> = (0..=n).collect();
                sw.swap(s, s + 1);
                let mut sw2: Vec<usize> = (0..=n).collect();
                sw2.swap((s + 1) % (n + 1), (s + 2) % (n + 1));
                let lhs = rot(n, &op.cyclic(n, &sw, &unit(i)));
                let rhs = op.cyclic(n, &sw2, &rot(n, &unit(i)));
                if lhs != rhs {
                    bad.push(format!("rotation does not conjugate s_{s} to s_{} in arity {n}", s + 1));
                }
            }
        }
    }
    report.record("group_relations", total, bad);

    // τ_{m+n}(α ∘_k β) = τ_{m+1}(α) ∘_{k+1} β for k < m, and
    // τ_{m+n}(α ∘_m β) = τ_{n+1}(β) ∘_1 τ_{m+1}(α)
    let mut cases = Vec::new();
    for m in 1..=max_arity {
        for n in 1..=max_arity {
            if m + n - 1 <= max_arity && m + n - 1 >= 1 {
                for k in 1..=m {
                    cases.push((m, n, k));
                }
            }
        }
    }
    let results = par::map(&cases, |&(m, n, k)| {
        let (sm, sn) = (Signature::uncolored(m), Signature::uncolored(n));
        let (dm, dn) = (op.dim(&sm), op.dim(&sn));
        let mut bad = Vec::new();
        let mut total = 0;
        for a in 0..dm {
            for b in 0..dn {
                total += 1;
                let (_, ab) = op.compose(&sm, &unit(a), k, &sn, &unit(b)).expect("uncolored");
                let lhs = rot(m + n - 1, &ab);
                let rhs = if k < m {
                    op.compose(&sm, &rot(m, &unit(a)), k + 1, &sn, &unit(b))
                        .expect("uncolored")
                        .1
                } else {
                    op.compose(&sn, &rot(n, &unit(b)), 1, &sm, &rot(m, &unit(a)))
                        .expect("uncolored")
                        .1
                };
                if lhs != rhs {
                    bad.push(format!("m={m} n={n} k={k} alpha={a} beta={b}"));
                }
            }
        }
        (k < m, total, bad)
    });
    for (name, want) in [("inner_composition", true), ("last_slot_composition", false)] {
        let mut total = 0;
        let mut bad = Vec::new();
        for (kind, t, b) in &results {
            if *kind == want {
                total += t;
                bad.extend(b.iter().map(|s| format!("{name}: {s}")));
            }
        }
        report.record(name, total, bad);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::presets::{preset, Preset};

    #[test]
    fn presets_are_cyclic() {
        for p in Preset::ALL {
            let op = Operad::new(preset(p)).unwrap();
            let r = check_cyclic_axioms(&op, 4, Mutation::None).unwrap();
            assert!(r.pass, "{}: {:?}", p.name(), r);
        }
    }

    #[test]
    fn rotation_order() {
        let op = Operad::new(preset(Preset::Lie)).unwrap();
        let t = cyclic_action(&op, 3).unwrap();
        assert!(t.pow(4).is_identity());
        assert!(!t.is_identity());
        let a = Operad::new(preset(Preset::Assoc)).unwrap();
        assert!(cyclic_action(&a, 2).unwrap().pow(3).is_identity());
    }

    #[test]
    fn corrupted_sign_is_detected() {
        for p in Preset::ALL {
            let op = Operad::new(preset(p)).unwrap();
            let r = check_cyclic_axioms(&op, 4, Mutation::NegateOutputVertex).unwrap();
            assert!(!r.pass);
            assert!(r.failed("last_slot_composition"), "{}: {:?}", p.name(), r.checks);
            assert!(!r.failed("inner_composition"));
        }
    }
}
