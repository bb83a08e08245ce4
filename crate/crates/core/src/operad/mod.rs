//! Quadratic colored operads given by generators and relations.
//!
//! An [`Operad`] wraps a [`Presentation`] and lazily builds (and caches)
//! the free components `F(E)(sig)`, the arity pieces of the relation ideal,
//! and the quotient components with a chosen coset basis. Elements of a
//! component are sparse vectors in that coset basis.

mod cyclic;
mod data;
mod free;
pub mod io;
pub mod presets;

pub use cyclic::{check_cyclic_axioms, cyclic_action, reroot_ptree, tau, CyclicCheck, Mutation};
pub use data::OperadData;
pub use free::{product, FreeComponent, GenBlock, GeneratorSet, PNode, PTree, Triple};

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use num_traits::One;

use crate::par;
use crate::qalg::{sparse_from_terms, Echelon, RatMatrix, SparseVec, Q};
use crate::trees::{Color, Mask, Signature};
use crate::{Error, Result};

/// Generators plus quadratic relations, stored per 3-input signature as
/// vectors in the basis of the corresponding free component.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub name: String,
    pub gens: GeneratorSet,
    pub relations: BTreeMap<Signature, Vec<SparseVec>>,
}

impl Presentation {
    pub fn colors(&self) -> Vec<Color> {
        let mut cs: Vec<Color> = self
            .gens
            .blocks
            .keys()
            .flat_map(|&(x, y, z)| [x, y, z])
            .collect();
        cs.sort();
        cs.dedup();
        cs
    }

    /// All 3-input signatures whose free component is nonzero.
    pub fn ternary_signatures(&self) -> Vec<Signature> {
        let inputs: Vec<Color> = self
            .colors()
            .into_iter()
            .filter(|c| *c != Color::Empty)
            .collect();
        let mut out = Vec::new();
        for a in &inputs {
            for b in &inputs {
                for c in &inputs {
                    if let Some(sig) = Signature::forced(vec![*a, *b, *c]) {
                        if FreeComponent::new(&self.gens, &sig).dim() > 0 {
                            out.push(sig);
                        }
                    }
                }
            }
        }
        out
    }

    /// Checks generator actions and that the relations are stable under
    /// relabelling of the three inputs.
    pub fn validate(&self) -> Result<()> {
        self.gens.validate()?;
        for (sig, rels) in &self.relations {
            if sig.arity() != 3 || !sig.is_consistent() {
                return Err(Error::Presentation(format!("relations filed under {sig}")));
            }
            let fc = FreeComponent::new(&self.gens, sig);
            for r in rels {
                if r.iter().any(|(i, _)| *i >= fc.dim()) {
                    return Err(Error::Presentation(format!(
                        "relation index out of range for {sig}"
                    )));
                }
            }
        }
        for (sig, rels) in &self.relations {
            let src = FreeComponent::new(&self.gens, sig);
            for p in crate::perm::all(3) {
                let tsig = sig.permuted(&p);
                let dst = FreeComponent::new(&self.gens, &tsig);
                let mut span = Echelon::new(dst.dim());
                for r in self.relations.get(&tsig).into_iter().flatten() {
                    span.insert(r);
                }
                for r in rels {
                    let img = relabel_free(&self.gens, &src, &p, r, &dst);
                    if !span.contains(&img) {
                        return Err(Error::Presentation(format!(
                            "relations are not stable under relabelling {p:?} of {sig}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Relabels each leaf `k` as `p[k - 1] + 1` and re-expands in `dst`.
pub fn relabel_free(
    gens: &GeneratorSet,
    src: &FreeComponent,
    p: &[usize],
    x: &[(usize, Q)],
    dst: &FreeComponent,
) -> SparseVec {
    let mut out = Vec::new();
    for (i, c) in x {
        let t = src.ptree(*i).relabel(&|k| p[k - 1] + 1);
        dst.expand_into(gens, &t, c, &mut out);
    }
    sparse_from_terms(out)
}

/// Quotient component `F(E)(sig) / I(sig)` with coset representatives.
#[derive(Clone, Debug)]
pub struct Component {
    pub sig: Signature,
    pub free: Arc<FreeComponent>,
    /// Free basis indices of the coset representatives.
    pub reps: Vec<usize>,
    pub ideal_rank: usize,
    // quotient coordinates of every free basis vector
    reduce_cols: Vec<SparseVec>,
}

impl Component {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn reduce(&self, x: &[(usize, Q)]) -> SparseVec {
        sparse_from_terms(
            x.iter()
                .flat_map(|(j, c)| self.reduce_cols[*j].iter().map(move |(i, a)| (*i, a * c))),
        )
    }

    pub fn lift(&self, x: &[(usize, Q)]) -> SparseVec {
        sparse_from_terms(x.iter().map(|(i, c)| (self.reps[*i], c.clone())))
    }

    /// Reduction as a dense `dim x free_dim` matrix.
    pub fn reduce_matrix(&self) -> RatMatrix {
        RatMatrix::from_sparse_columns(self.dim(), &self.reduce_cols)
    }

    pub fn label(&self, i: usize) -> String {
        self.free.label(self.reps[i])
    }
}

/// Cached engine around a presentation.
#[derive(Debug)]
pub struct Operad {
    pub pres: Presentation,
    free: RwLock<HashMap<Signature, Arc<FreeComponent>>>,
    comps: RwLock<HashMap<Signature, Arc<Component>>>,
}

impl Clone for Operad {
    fn clone(&self) -> Self {
        Operad::new_unchecked(self.pres.clone())
    }
}

impl Operad {
    pub fn new(pres: Presentation) -> Result<Self> {
        pres.validate()?;
        Ok(Self::new_unchecked(pres))
    }

    pub fn new_unchecked(pres: Presentation) -> Self {
        Operad {
            pres,
            free: RwLock::new(HashMap::new()),
            comps: RwLock::new(HashMap::new()),
        }
    }

    pub fn gens(&self) -> &GeneratorSet {
        &self.pres.gens
    }

    pub fn free(&self, sig: &Signature) -> Arc<FreeComponent> {
        if let Some(f) = self.free.read().expect("lock").get(sig) {
            return f.clone();
        }
        let f = Arc::new(FreeComponent::new(&self.pres.gens, sig));
        self.free
            .write()
            .expect("lock")
            .entry(sig.clone())
            .or_insert(f)
            .clone()
    }

    /// Spanning set of the arity piece of the ideal generated by the
    /// relations: every relation substituted at every ternary vertex of
    /// every binary frame, with all decorations elsewhere.
    pub fn ideal(&self, sig: &Signature) -> Vec<SparseVec> {
        let fc = self.free(sig);
        if sig.arity() < 3 {
            return Vec::new();
        }
        let gens = &self.pres.gens;
        let per_tree = par::map_range(fc.trees.len(), |ti| {
            let t = &fc.trees[ti];
            let verts = fc.vertices(ti);
            let mut out = Vec::new();
            for &c in t.internal_edges() {
                let v = t.parent(c);
                let mut branches: Vec<Mask> = t
                    .children(v)
                    .into_iter()
                    .filter(|&b| b != c)
                    .chain(t.children(c))
                    .collect();
                branches.sort_by_key(|b| b.trailing_zeros());
                // each ternary vertex once: from its first admissible resolution
                let first = [(0, 1), (0, 2), (1, 2)]
                    .iter()
                    .map(|&(x, y)| branches[x] | branches[y])
                    .find(|&u| t.edge_color(sig, u).is_some());
                if first != Some(c) {
                    continue;
                }
                let local = Signature {
                    inputs: branches
                        .iter()
                        .map(|&b| t.edge_color(sig, b).expect("admissible"))
                        .collect(),
                    output: t.edge_color(sig, v).expect("admissible"),
                };
                let Some(rels) = self.pres.relations.get(&local) else {
                    continue;
                };
                if rels.is_empty() {
                    continue;
                }
                let fc3 = self.free(&local);
                let (pv, pc) = (
                    verts.iter().position(|&x| x == v).expect("vertex"),
                    verts.iter().position(|&x| x == c).expect("vertex"),
                );
                for (_, decos) in fc.basis.iter().filter(|(i, d)| *i == ti && d[pv] == 0 && d[pc] == 0) {
                    let deco: HashMap<Mask, usize> =
                        verts.iter().copied().zip(decos.iter().copied()).collect();
                    let subs: Vec<PTree> = branches
                        .iter()
                        .map(|&b| free::build_ptree_with(t, b, &deco, &HashMap::new()))
                        .collect();
                    for r in rels {
                        let mut acc = Vec::new();
                        for (j, coef) in r {
                            let local_tree = fc3.ptree(*j).substitute(&subs);
                            let over = HashMap::from([(v, local_tree)]);
                            let frame = free::build_ptree_with(t, t.full(), &deco, &over);
                            fc.expand_into(gens, &frame, coef, &mut acc);
                        }
                        let vec = sparse_from_terms(acc);
                        if !vec.is_empty() {
                            out.push(vec);
                        }
                    }
                }
            }
            out
        });
        per_tree.into_iter().flatten().collect()
    }

    pub fn component(&self, sig: &Signature) -> Arc<Component> {
        if let Some(c) = self.comps.read().expect("lock").get(sig) {
            return c.clone();
        }
        let fc = self.free(sig);
        let mut ech = Echelon::new(fc.dim());
        for v in self.ideal(sig) {
            ech.insert(&v);
        }
        let reps: Vec<usize> = (0..fc.dim()).filter(|c| !ech.is_pivot(*c)).collect();
        let pos: HashMap<usize, usize> = reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let reduce_cols = par::map_range(fc.dim(), |j| {
            ech.reduce(&[(j, Q::one())])
                .into_iter()
                .map(|(i, c)| (pos[&i], c))
                .collect()
        });
        let comp = Arc::new(Component {
            sig: sig.clone(),
            free: fc,
            reps,
            ideal_rank: ech.rank(),
            reduce_cols,
        });
        self.comps
            .write()
            .expect("lock")
            .entry(sig.clone())
            .or_insert(comp)
            .clone()
    }

    /// Builds the components for all `sigs` in parallel.
    pub fn prepare(&self, sigs: &[Signature]) {
        par::map(sigs, |s| {
            self.component(s);
        });
    }

    pub fn dim(&self, sig: &Signature) -> usize {
        self.component(sig).dim()
    }

    /// Composite signature of `a ∘_i b` (1-based `i`).
    pub fn compose_signature(sa: &Signature, i: usize, sb: &Signature) -> Result<Signature> {
        if i == 0 || i > sa.arity() {
            return Err(Error::Product(format!("slot {i} out of range for {sa}")));
        }
        if sa.inputs[i - 1] != sb.output {
            return Err(Error::ColorMismatch(format!(
                "slot {i} of {sa} takes {}, got output {} of {sb}",
                sa.inputs[i - 1].mark(),
                sb.output.mark()
            )));
        }
        let mut inputs = sa.inputs[..i - 1].to_vec();
        inputs.extend_from_slice(&sb.inputs);
        inputs.extend_from_slice(&sa.inputs[i..]);
        Ok(Signature {
            inputs,
            output: sa.output,
        })
    }

    /// Grafting on free vectors.
    pub fn free_compose(
        &self,
        sa: &Signature,
        a: &[(usize, Q)],
        i: usize,
        sb: &Signature,
        b: &[(usize, Q)],
    ) -> Result<(Signature, SparseVec)> {
        let sc = Self::compose_signature(sa, i, sb)?;
        let (fa, fb, fcmp) = (self.free(sa), self.free(sb), self.free(&sc));
        let m = sb.arity();
        let mut out = Vec::new();
        for (x, cx) in a {
            let ta = fa.ptree(*x);
            for (y, cy) in b {
                let t = ta.graft(i, &fb.ptree(*y), m);
                fcmp.expand_into(&self.pres.gens, &t, &(cx * cy), &mut out);
            }
        }
        Ok((sc, sparse_from_terms(out)))
    }

    /// `a ∘_i b` on quotient elements.
    pub fn compose(
        &self,
        sa: &Signature,
        a: &[(usize, Q)],
        i: usize,
        sb: &Signature,
        b: &[(usize, Q)],
    ) -> Result<(Signature, SparseVec)> {
        let (ca, cb) = (self.component(sa), self.component(sb));
        let (sc, v) = self.free_compose(sa, &ca.lift(a), i, sb, &cb.lift(b))?;
        Ok((sc.clone(), self.component(&sc).reduce(&v)))
    }

    /// Relabels input `k` as input `p[k]` (0-based); the result lives in
    /// `sig.permuted(p)`.
    pub fn permute(&self, sig: &Signature, p: &[usize], x: &[(usize, Q)]) -> SparseVec {
        let src = self.component(sig);
        let tsig = sig.permuted(p);
        let dst = self.component(&tsig);
        let v = relabel_free(&self.pres.gens, &src.free, p, &src.lift(x), &dst.free);
        dst.reduce(&v)
    }

    /// Matrix of the relabelling `p` from `sig` to `sig.permuted(p)`.
    pub fn sym_matrix(&self, sig: &Signature, p: &[usize]) -> RatMatrix {
        let d = self.dim(sig);
        let tsig = sig.permuted(p);
        let cols: Vec<SparseVec> = (0..d)
            .map(|i| self.permute(sig, p, &[(i, Q::one())]))
            .collect();
        RatMatrix::from_sparse_columns(self.dim(&tsig), &cols)
    }
}

/// `F(E)(sig)` for a generator set.
pub fn free_component(gens: &GeneratorSet, sig: &Signature) -> FreeComponent {
    FreeComponent::new(gens, sig)
}

/// Spanning set of the ideal `(R)` in arity `sig`.
pub fn ideal_component(p: &Presentation, sig: &Signature) -> Vec<SparseVec> {
    Operad::new_unchecked(p.clone()).ideal(sig)
}

/// Quotient component `F(E)(sig) / (R)(sig)`.
pub fn quotient_component(p: &Presentation, sig: &Signature) -> Result<Arc<Component>> {
    Ok(Operad::new(p.clone())?.component(sig))
}

#[cfg(test)]
mod tests {
    use super::presets::{preset, Preset};
    use super::*;

    #[test]
    fn free_dims() {
        let s3 = Signature::uncolored(3);
        assert_eq!(free_component(&preset(Preset::Assoc).gens, &s3).dim(), 12);
        assert_eq!(free_component(&preset(Preset::Comm).gens, &s3).dim(), 3);
        assert_eq!(free_component(&preset(Preset::Lie).gens, &s3).dim(), 3);
    }

    #[test]
    fn quotient_dims() {
        let a = Operad::new(preset(Preset::Assoc)).unwrap();
        let dims: Vec<usize> = (1..=4).map(|n| a.dim(&Signature::uncolored(n))).collect();
        assert_eq!(dims, vec![1, 2, 6, 24]);
        let l = Operad::new(preset(Preset::Lie)).unwrap();
        let dims: Vec<usize> = (1..=4).map(|n| l.dim(&Signature::uncolored(n))).collect();
        assert_eq!(dims, vec![1, 1, 2, 6]);
        let c = Operad::new(preset(Preset::Comm)).unwrap();
        let dims: Vec<usize> = (1..=4).map(|n| c.dim(&Signature::uncolored(n))).collect();
        assert_eq!(dims, vec![1, 1, 1, 1]);
        assert!(a.ideal(&Signature::uncolored(2)).is_empty());
    }

    #[test]
    fn unit_is_neutral() {
        let a = Operad::new(preset(Preset::Assoc)).unwrap();
        let (s1, s2) = (Signature::uncolored(1), Signature::uncolored(2));
        let x = vec![(0, crate::qalg::q(3)), (1, crate::qalg::q(-2))];
        let unit = vec![(0, Q::one())];
        assert_eq!(a.compose(&s2, &x, 2, &s1, &unit).unwrap().1, x);
        assert_eq!(a.compose(&s1, &unit, 1, &s2, &x).unwrap().1, x);
    }

    #[test]
    fn associativity_relator_vanishes() {
        let a = Operad::new(preset(Preset::Assoc)).unwrap();
        let s2 = Signature::uncolored(2);
        let mu = vec![(0, Q::one())];
        let (_, l) = a.compose(&s2, &mu, 1, &s2, &mu).unwrap();
        let (_, r) = a.compose(&s2, &mu, 2, &s2, &mu).unwrap();
        assert_eq!(l, r);
    }

    #[test]
    fn rejects_unstable_relations() {
        let mut p = preset(Preset::Comm);
        let s3 = Signature::uncolored(3);
        // keep only one of the two commutative relators
        p.relations.get_mut(&s3).unwrap().truncate(1);
        assert!(matches!(Operad::new(p), Err(Error::Presentation(_))));
    }
}
