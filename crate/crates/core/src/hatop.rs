//! The colored operad built from a cyclic operad `O`, whose algebras are an
//! `O`-algebra, a module over it and an invariant inner product.
//!
//! [`HatOperad`] realizes it directly: a signature with full output and
//! full inputs, or dashed output and one dashed input, is `O(n)`; empty
//! output with two dashed inputs is `O(n-1)`, read with the last input in
//! the role of the output of `O`. [`hat_presentation`] gives the quadratic
//! presentation by generators and relations, and the two are compared
//! dimension by dimension.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::One;
use serde::Serialize;

use crate::operad::{
    relabel_free, tau, FreeComponent, GenBlock, GeneratorSet, Mutation, Operad, OperadData,
    PTree, Presentation,
};
use crate::par;
use crate::perm;
use crate::qalg::{Echelon, SparseVec, Q};
use crate::trees::{Color, Signature};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum HatKind {
    Full,
    Dashed,
    Empty,
    Zero,
}

pub fn kind(sig: &Signature) -> HatKind {
    if !sig.is_consistent() || sig.arity() == 0 {
        return HatKind::Zero;
    }
    match (sig.output, sig.dashed_count()) {
        (Color::Full, 0) => HatKind::Full,
        (Color::Dashed, 1) => HatKind::Dashed,
        (Color::Empty, 2) if sig.arity() >= 2 => HatKind::Empty,
        _ => HatKind::Zero,
    }
}

/// Arity of the `O` component realizing `sig`, if nonzero.
pub fn base_arity(sig: &Signature) -> Option<usize> {
    match kind(sig) {
        HatKind::Full | HatKind::Dashed => Some(sig.arity()),
        HatKind::Empty => Some(sig.arity() - 1),
        HatKind::Zero => None,
    }
}

/// Description of one component of the hat operad.
#[derive(Clone, Debug, Serialize)]
pub struct HatComponent {
    pub signature: Signature,
    pub kind: HatKind,
    pub base_arity: Option<usize>,
    pub dim: usize,
}

#[derive(Clone, Debug)]
pub struct HatOperad {
    pub base: Arc<Operad>,
    /// Corrupts the rotation used for grafting into the last input.
    pub mutation: Mutation,
}

impl HatOperad {
    pub fn new(base: Arc<Operad>) -> Result<Self> {
        if !base.gens().cyclic || !base.gens().is_uncolored() {
            return Err(Error::NotCyclic);
        }
        Ok(HatOperad {
            base,
            mutation: Mutation::None,
        })
    }

    pub fn with_mutation(mut self, m: Mutation) -> Self {
        self.mutation = m;
        self
    }

    pub fn component(&self, sig: &Signature) -> HatComponent {
        let base_arity = base_arity(sig);
        HatComponent {
            signature: sig.clone(),
            kind: kind(sig),
            base_arity,
            dim: base_arity
                .map(|n| self.base.dim(&Signature::uncolored(n)))
                .unwrap_or(0),
        }
    }

    fn rot(&self, n: usize, x: &[(usize, Q)]) -> SparseVec {
        self.base.cyclic_mutated(n, &tau(n), x, self.mutation)
    }

    fn ocompose(&self, m: usize, a: &[(usize, Q)], i: usize, n: usize, b: &[(usize, Q)]) -> SparseVec {
        self.base
            .compose(&Signature::uncolored(m), a, i, &Signature::uncolored(n), b)
            .expect("uncolored composition")
            .1
    }

    /// Both closed forms of grafting `β ∈ O(n)` into the last input of
    /// `α ∈ O(m)` read as an empty-output element with `m + 1` inputs:
    /// `τ_{n+m}(τ_{m+1}^{-1}(α) ∘_m β)` and `τ_{n+1}(β) ∘_1 α`.
    pub fn last_slot_forms(
        &self,
        m: usize,
        a: &[(usize, Q)],
        n: usize,
        b: &[(usize, Q)],
    ) -> (SparseVec, SparseVec) {
        let inner = self.ocompose(m, &self.base.tau_inverse(m, a), m, n, b);
        let first = self.base.tau(n + m - 1, &inner);
        let second = self.ocompose(n, &self.rot(n, b), 1, m, a);
        (first, second)
    }
}

impl OperadData for HatOperad {
    fn dim(&self, sig: &Signature) -> usize {
        self.component(sig).dim
    }

    fn compose(
        &self,
        sa: &Signature,
        a: &[(usize, Q)],
        i: usize,
        sb: &Signature,
        b: &[(usize, Q)],
    ) -> Result<(Signature, SparseVec)> {
        let sc = Operad::compose_signature(sa, i, sb)?;
        let (ka, kb) = (kind(sa), kind(sb));
        if ka == HatKind::Zero || kb == HatKind::Zero || kind(&sc) == HatKind::Zero {
            return Ok((sc, Vec::new()));
        }
        let (na, nb) = (base_arity(sa).expect("nonzero"), base_arity(sb).expect("nonzero"));
        let v = if ka == HatKind::Empty && i == sa.arity() {
            let (_, second) = self.last_slot_forms(na, a, nb, b);
            second
        } else {
            self.ocompose(na, a, i, nb, b)
        };
        Ok((sc, v))
    }

    fn permute(&self, sig: &Signature, p: &[usize], x: &[(usize, Q)]) -> SparseVec {
        match kind(sig) {
            HatKind::Zero => Vec::new(),
            HatKind::Full | HatKind::Dashed => {
                self.base.permute(&Signature::uncolored(sig.arity()), p, x)
            }
            HatKind::Empty => {
                // flags of O(n-1): 0 is input n, j is input j
                let n = sig.arity();
                let leg = |f: usize| if f == 0 { n } else { f };
                let flag = |l: usize| if l == n { 0 } else { l };
                let q: Vec<usize> = (0..n).map(|f| flag(p[leg(f) - 1] + 1)).collect();
                self.base.cyclic(n - 1, &q, x)
            }
        }
    }

    fn label(&self, sig: &Signature, i: usize) -> String {
        match base_arity(sig) {
            Some(n) => self.base.component(&Signature::uncolored(n)).label(i),
            None => String::new(),
        }
    }

    fn prepare(&self, sigs: &[Signature]) {
        let mut arities: Vec<Signature> = sigs
            .iter()
            .filter_map(base_arity)
            .map(Signature::uncolored)
            .collect();
        arities.sort();
        arities.dedup();
        self.base.prepare(&arities);
    }
}

/// Component of the hat operad for `sig`.
pub fn hat_direct(op: &HatOperad, sig: &Signature) -> HatComponent {
    op.component(sig)
}

/// Signatures with `n` inputs colored full or dashed, outputs forced by the
/// dashed count (so at most two dashed inputs).
pub fn hat_signatures(n: usize) -> Vec<Signature> {
    let mut out = Vec::new();
    for bits in 0..(1u32 << n) {
        if bits.count_ones() > 2 {
            continue;
        }
        let inputs: Vec<Color> = (0..n)
            .map(|i| if bits & (1 << i) != 0 { Color::Dashed } else { Color::Full })
            .collect();
        if let Some(sig) = Signature::forced(inputs) {
            if base_arity(&sig).is_some() {
                out.push(sig);
            }
        }
    }
    out
}

/// Every input coloring with `n` inputs and every output color, including
/// inadmissible ones.
pub fn all_signatures(n: usize) -> Vec<Signature> {
    let mut out = Vec::new();
    for bits in 0..(1u32 << n) {
        let inputs: Vec<Color> = (0..n)
            .map(|i| if bits & (1 << i) != 0 { Color::Dashed } else { Color::Full })
            .collect();
        for output in [Color::Full, Color::Dashed, Color::Empty] {
            out.push(Signature::new(inputs.clone(), output));
        }
    }
    out
}

/// Which identity of the last-slot associativity check an instance tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AssocCase {
    /// `j <= m`
    Before,
    /// `m < j < m + n`
    Inside,
    /// `j = m + n`
    Last,
}

#[derive(Clone, Debug, Serialize)]
pub struct HatAssocReport {
    /// `(case, instances, violations)`.
    pub cases: Vec<(AssocCase, usize, usize)>,
    pub violations: Vec<String>,
    pub pass: bool,
}

impl HatAssocReport {
    pub fn failed(&self, c: AssocCase) -> bool {
        self.cases.iter().any(|x| x.0 == c && x.2 > 0)
    }
}

fn basis(i: usize) -> SparseVec {
    vec![(i, Q::one())]
}

fn dashed_at(n: usize, positions: &[usize], output: Color) -> Signature {
    let inputs = (1..=n)
        .map(|k| if positions.contains(&k) { Color::Dashed } else { Color::Full })
        .collect();
    Signature::new(inputs, output)
}

/// Checks `(α ∘_{m+1} β) ∘_j γ` against the regrouped composite for every
/// empty-output basis element `α` (dashed inputs first and last), every
/// `β` with dashed output, every `γ`, and all slots `j`, up to
/// `max_total` inputs in the result.
pub fn check_hat_associativity(h: &HatOperad, max_total: usize) -> HatAssocReport {
    let mut jobs = Vec::new();
    for m in 1..max_total {
        for n in 1..max_total {
            for p in 1..max_total {
                if m + n + p - 1 > max_total {
                    continue;
                }
                for q in 1..=n {
                    for j in 1..=m + n {
                        jobs.push((m, n, p, q, j));
                    }
                }
            }
        }
    }
    let base_sigs: Vec<Signature> = (1..=max_total).map(Signature::uncolored).collect();
    h.base.prepare(&base_sigs);
    let results = par::map(&jobs, |&(m, n, p, q, j)| {
        let sa = dashed_at(m + 1, &[1, m + 1], Color::Empty);
        let sb = dashed_at(n, &[q], Color::Dashed);
        let ab_sig = Operad::compose_signature(&sa, m + 1, &sb).expect("colors match");
        let sg = match ab_sig.inputs[j - 1] {
            Color::Dashed => dashed_at(p, &[1], Color::Dashed),
            _ => dashed_at(p, &[], Color::Full),
        };
        let case = if j <= m {
            AssocCase::Before
        } else if j < m + n {
            AssocCase::Inside
        } else {
            AssocCase::Last
        };
        let (da, db, dg) = (h.dim(&sa), h.dim(&sb), h.dim(&sg));
        let mut bad = Vec::new();
        let mut total = 0;
        for a in 0..da {
            for b in 0..db {
                let (s_ab, ab) = h.compose(&sa, &basis(a), m + 1, &sb, &basis(b)).expect("colors");
                for g in 0..dg {
                    total += 1;
                    let (_, lhs) = h.compose(&s_ab, &ab, j, &sg, &basis(g)).expect("colors");
                    let rhs = match case {
                        AssocCase::Before => {
                            let (s_ag, ag) =
                                h.compose(&sa, &basis(a), j, &sg, &basis(g)).expect("colors");
                            h.compose(&s_ag, &ag, m + p, &sb, &basis(b)).expect("colors").1
                        }
                        AssocCase::Inside | AssocCase::Last => {
                            let (s_bg, bg) =
                                h.compose(&sb, &basis(b), j - m, &sg, &basis(g)).expect("colors");
                            h.compose(&sa, &basis(a), m + 1, &s_bg, &bg).expect("colors").1
                        }
                    };
                    if lhs != rhs {
                        bad.push(format!(
                            "{case:?}: m={m} n={n} p={p} dashed={q} j={j} basis=({a},{b},{g})"
                        ));
                    }
                }
            }
        }
        (case, total, bad)
    });
    let mut cases = Vec::new();
    let mut violations = Vec::new();
    for c in [AssocCase::Before, AssocCase::Inside, AssocCase::Last] {
        let mut total = 0;
        let mut nbad = 0;
        for (case, t, bad) in &results {
            if *case == c {
                total += t;
                nbad += bad.len();
                violations.extend(bad.iter().take(3).cloned());
            }
        }
        cases.push((c, total, nbad));
    }
    let pass = cases.iter().all(|c| c.2 == 0);
    HatAssocReport {
        cases,
        violations,
        pass,
    }
}

/// The colored quadratic presentation: three copies of `E` (inputs
/// `ff`, `fd`, `df`), a one-dimensional inner-product generator on two
/// dashed inputs, four copies of `R`, and the relations tying the inner
/// product to `E`.
pub fn hat_presentation(p: &Presentation) -> Result<Presentation> {
    let gens = &p.gens;
    if !gens.cyclic || !gens.is_uncolored() {
        return Err(Error::NotCyclic);
    }
    let (f, d, e) = (Color::Full, Color::Dashed, Color::Empty);
    let base = &gens.blocks[&(f, f, f)];
    let mut blocks = BTreeMap::new();
    for t in [(f, f, f), (f, d, d), (d, f, d)] {
        blocks.insert(t, base.clone());
    }
    blocks.insert(
        (d, d, e),
        GenBlock {
            dim: 1,
            swap: crate::qalg::RatMatrix::identity(1),
        },
    );
    let hgens = GeneratorSet {
        blocks,
        cyclic: false,
    };
    let s3 = Signature::uncolored(3);
    let rels = p.relations.get(&s3).cloned().unwrap_or_default();
    let mut relations: BTreeMap<Signature, Vec<SparseVec>> = BTreeMap::new();
    for inputs in [[f, f, f], [f, f, d], [f, d, f], [d, f, f]] {
        let sig = Signature::forced(inputs.to_vec()).expect("admissible");
        relations.insert(sig, rels.clone());
    }
    // inner product relators on (d, f, d; e): α under the root on {1,2}
    // minus α on {2,3}; rotating the three flags of α acts trivially
    let g_sig = Signature::new(vec![d, f, d], e);
    let g_fc = FreeComponent::new(&hgens, &g_sig);
    let ip = vec![(0usize, Q::one())];
    let mut g_rels = Vec::new();
    for a in 0..base.dim {
        let alpha = vec![(a, Q::one())];
        let left = PTree::node(
            ip.clone(),
            PTree::node(alpha.clone(), PTree::Leaf(1), PTree::Leaf(2)),
            PTree::Leaf(3),
        );
        let right = PTree::node(
            ip.clone(),
            PTree::Leaf(1),
            PTree::node(alpha, PTree::Leaf(2), PTree::Leaf(3)),
        );
        let l = g_fc.vector_of(&hgens, &left);
        let r = g_fc.vector_of(&hgens, &right);
        g_rels.push(crate::qalg::sparse_axpy(&l, &-Q::one(), &r));
    }
    let mut g_all: BTreeMap<Signature, Echelon> = BTreeMap::new();
    let mut g_vecs: BTreeMap<Signature, Vec<SparseVec>> = BTreeMap::new();
    for s in perm::all(3) {
        let tsig = g_sig.permuted(&s);
        let dst = FreeComponent::new(&hgens, &tsig);
        let ech = g_all
            .entry(tsig.clone())
            .or_insert_with(|| Echelon::new(dst.dim()));
        for r in &g_rels {
            let img = relabel_free(&hgens, &g_fc, &s, r, &dst);
            if ech.insert(&img) {
                g_vecs.entry(tsig.clone()).or_default().push(img);
            }
        }
    }
    relations.extend(g_vecs);
    let out = Presentation {
        name: format!("{}-hat", p.name),
        gens: hgens,
        relations,
    };
    out.validate()?;
    Ok(out)
}

/// One line of the dimension comparison between the presentation and the
/// direct construction.
#[derive(Clone, Debug, Serialize)]
pub struct DimComparison {
    pub signature: String,
    pub presented: usize,
    pub direct: usize,
    pub pass: bool,
}

/// Compares quotient dimensions of the presentation with the direct
/// components on every signature (admissible or not) with `1..=max_inputs`
/// inputs.
pub fn cross_validate(p: &Presentation, max_inputs: usize) -> Result<Vec<DimComparison>> {
    let base = Arc::new(Operad::new(p.clone())?);
    let direct = HatOperad::new(base)?;
    let presented = Operad::new(hat_presentation(p)?)?;
    let sigs: Vec<Signature> = (1..=max_inputs).flat_map(all_signatures).collect();
    presented.prepare(&sigs);
    Ok(sigs
        .iter()
        .map(|s| {
            let a = presented.dim(s);
            let b = direct.dim(s);
            DimComparison {
                signature: s.to_string(),
                presented: a,
                direct: b,
                pass: a == b,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::presets::{preset, Preset};

    fn hat(p: Preset) -> HatOperad {
        HatOperad::new(Arc::new(Operad::new(preset(p)).unwrap())).unwrap()
    }

    #[test]
    fn direct_table() {
        use Color::*;
        let h = hat(Preset::Assoc);
        assert_eq!(h.dim(&Signature::new(vec![Full, Full], Full)), 2);
        assert_eq!(h.dim(&Signature::new(vec![Dashed, Dashed], Empty)), 1);
        assert_eq!(h.dim(&Signature::new(vec![Dashed, Full, Dashed], Empty)), 2);
        assert_eq!(h.dim(&Signature::new(vec![Dashed, Full, Dashed], Full)), 0);
        assert_eq!(h.dim(&Signature::new(vec![Dashed, Dashed], Dashed)), 0);
    }

    #[test]
    fn unit_inner_product_rotates() {
        use Color::*;
        let h = hat(Preset::Assoc);
        let sa = Signature::new(vec![Dashed, Dashed], Empty);
        let sb = Signature::new(vec![Full, Dashed], Dashed);
        for b in 0..2 {
            let (_, v) = h.compose(&sa, &basis(0), 2, &sb, &basis(b)).unwrap();
            assert_eq!(v, h.base.tau(2, &basis(b)));
        }
    }

    #[test]
    fn last_slot_forms_agree() {
        let h = hat(Preset::Lie);
        for m in 1..=3 {
            for n in 1..=3 {
                let dm = h.base.dim(&Signature::uncolored(m));
                let dn = h.base.dim(&Signature::uncolored(n));
                for a in 0..dm {
                    for b in 0..dn {
                        let (x, y) = h.last_slot_forms(m, &basis(a), n, &basis(b));
                        assert_eq!(x, y);
                    }
                }
            }
        }
    }

    #[test]
    fn associativity() {
        for p in [Preset::Assoc, Preset::Comm] {
            let r = check_hat_associativity(&hat(p), 4);
            assert!(r.pass, "{:?}", r);
        }
        let r = check_hat_associativity(&hat(Preset::Assoc).with_mutation(Mutation::NegateOutputVertex), 4);
        assert!(r.failed(AssocCase::Last));
    }

    #[test]
    fn presentation_generators() {
        use Color::*;
        let hp = hat_presentation(&preset(Preset::Assoc)).unwrap();
        assert_eq!(hp.gens.dim((Full, Dashed, Dashed)), 2);
        assert_eq!(hp.gens.dim((Dashed, Dashed, Empty)), 1);
        let g = Signature::new(vec![Dashed, Full, Dashed], Empty);
        assert_eq!(hp.relations[&g].len(), 2);
    }

    #[test]
    fn presentation_matches_direct() {
        for p in Preset::ALL {
            for c in cross_validate(&preset(p), 4).unwrap() {
                assert!(c.pass, "{}: {:?}", p.name(), c);
            }
        }
    }
}
