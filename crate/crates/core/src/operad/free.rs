use std::collections::{BTreeMap, HashMap};

use num_traits::One;
use crate::qalg::{sparse_from_terms, RatMatrix, SparseVec, Q};
use crate::trees::{enumerate_trees, forced_output, Color, Mask, Signature, Tree};
use crate::{Error, Result};

/// Colors `(left input, right input; output)` of a binary generator block.
pub type Triple = (Color, Color, Color);

/// One block `E^{x,y}_z` of binary generators.
#[derive(Clone, Debug, PartialEq)]
pub struct GenBlock {
    pub dim: usize,
    /// Action of the input swap, `E^{x,y}_z -> E^{y,x}_z`.
    pub swap: RatMatrix,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSet {
    pub blocks: BTreeMap<Triple, GenBlock>,
    /// The swap action extends to `S_3` through the sign map `S_3 -> S_2`.
    pub cyclic: bool,
}

impl GeneratorSet {
    pub fn uncolored(dim: usize, swap: RatMatrix, cyclic: bool) -> Self {
        let mut blocks = BTreeMap::new();
        blocks.insert((Color::Full, Color::Full, Color::Full), GenBlock { dim, swap });
        GeneratorSet { blocks, cyclic }
    }

    pub fn dim(&self, t: Triple) -> usize {
        self.blocks.get(&t).map(|b| b.dim).unwrap_or(0)
    }

    pub fn is_uncolored(&self) -> bool {
        self.blocks.keys().all(|&(x, y, z)| {
            x == Color::Full && y == Color::Full && z == Color::Full
        })
    }

    pub fn swap(&self, t: Triple) -> &RatMatrix {
        &self.blocks[&t].swap
    }

    pub fn validate(&self) -> Result<()> {
        for (&(x, y, z), b) in &self.blocks {
            if z == Color::Empty && forced_output(&[x, y]) != Some(Color::Empty) {
                return Err(Error::Presentation(format!(
                    "block ({},{};{}) has an empty output without two dashed inputs",
                    x.mark(),
                    y.mark(),
                    z.mark()
                )));
            }
            if x == Color::Empty || y == Color::Empty {
                return Err(Error::Presentation("empty color on an input".into()));
            }
            let partner = self.blocks.get(&(y, x, z)).ok_or_else(|| {
                Error::Presentation(format!(
                    "block ({},{};{}) has no swapped partner",
                    x.mark(),
                    y.mark(),
                    z.mark()
                ))
            })?;
            if b.swap.rows() != partner.dim || b.swap.cols() != b.dim {
                return Err(Error::Shape(format!(
                    "swap matrix of ({},{};{}) is {}x{}",
                    x.mark(),
                    y.mark(),
                    z.mark(),
                    b.swap.rows(),
                    b.swap.cols()
                )));
            }
            if b.dim > 0 && !partner.swap.mul(&b.swap).is_identity() {
                return Err(Error::Presentation(format!(
                    "swap action of ({},{};{}) does not square to the identity",
                    x.mark(),
                    y.mark(),
                    z.mark()
                )));
            }
        }
        Ok(())
    }
}

/// Planar binary tree with leaf labels `1..=n` and a generator vector at
/// each internal node.
#[derive(Clone, Debug, PartialEq)]
pub enum PTree {
    Leaf(usize),
    Node(Box<PNode>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PNode {
    pub deco: SparseVec,
    pub kids: [PTree; 2],
}

impl PTree {
    pub fn node(deco: SparseVec, left: PTree, right: PTree) -> PTree {
        PTree::Node(Box::new(PNode {
            deco,
            kids: [left, right],
        }))
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            PTree::Leaf(_) => 1,
            PTree::Node(n) => n.kids[0].leaf_count() + n.kids[1].leaf_count(),
        }
    }

    pub fn leaf_mask(&self) -> Mask {
        match self {
            PTree::Leaf(l) => 1 << (l - 1),
            PTree::Node(n) => n.kids[0].leaf_mask() | n.kids[1].leaf_mask(),
        }
    }

    pub fn relabel(&self, f: &impl Fn(usize) -> usize) -> PTree {
        match self {
            PTree::Leaf(l) => PTree::Leaf(f(*l)),
            PTree::Node(n) => PTree::node(
                n.deco.clone(),
                n.kids[0].relabel(f),
                n.kids[1].relabel(f),
            ),
        }
    }

    /// Replaces leaf `k` by `subs[k - 1]`.
    pub fn substitute(&self, subs: &[PTree]) -> PTree {
        match self {
            PTree::Leaf(l) => subs[l - 1].clone(),
            PTree::Node(n) => PTree::node(
                n.deco.clone(),
                n.kids[0].substitute(subs),
                n.kids[1].substitute(subs),
            ),
        }
    }

    /// Operadic grafting `self ∘_i other`, where `other` has `m` leaves.
    pub fn graft(&self, i: usize, other: &PTree, m: usize) -> PTree {
        match self {
            PTree::Leaf(l) if *l == i => other.relabel(&|k| k + i - 1),
            PTree::Leaf(l) if *l > i => PTree::Leaf(l + m - 1),
            PTree::Leaf(l) => PTree::Leaf(*l),
            PTree::Node(n) => PTree::node(
                n.deco.clone(),
                n.kids[0].graft(i, other, m),
                n.kids[1].graft(i, other, m),
            ),
        }
    }
}

/// Color of the edge carrying the leaves `m` in a tree of signature `sig`.
pub(crate) fn mask_color(sig: &Signature, m: Mask) -> Option<Color> {
    let full: Mask = (1 << sig.arity()) - 1;
    if m == full {
        return Some(sig.output).filter(|_| sig.is_consistent());
    }
    match (sig.dashed_mask() & m).count_ones() {
        0 => Some(Color::Full),
        1 => Some(Color::Dashed),
        _ => None,
    }
}

/// Basis of the free operad component `F(E)(sig)`: canonical binary trees
/// with one generator basis index per vertex.
#[derive(Clone, Debug)]
pub struct FreeComponent {
    pub sig: Signature,
    pub trees: Vec<Tree>,
    /// `(tree index, decoration per vertex)` with vertices in
    /// [`Tree::vertices`] order.
    pub basis: Vec<(usize, Vec<usize>)>,
    vertices: Vec<Vec<Mask>>,
    index: HashMap<(usize, Vec<usize>), usize>,
    tree_index: HashMap<Tree, usize>,
    unit: bool,
}

impl FreeComponent {
    pub fn new(gens: &GeneratorSet, sig: &Signature) -> Self {
        let mut fc = FreeComponent {
            sig: sig.clone(),
            trees: Vec::new(),
            basis: Vec::new(),
            vertices: Vec::new(),
            index: HashMap::new(),
            tree_index: HashMap::new(),
            unit: false,
        };
        if sig.arity() == 1 {
            if sig.inputs[0] == sig.output && sig.output != Color::Empty {
                fc.unit = true;
                fc.basis.push((0, Vec::new()));
                fc.index.insert((0, Vec::new()), 0);
            }
            return fc;
        }
        for t in enumerate_trees(sig, |a| a == 2) {
            let verts = t.vertices();
            let dims: Vec<usize> = verts
                .iter()
                .map(|&v| {
                    let local = t.local_signature(sig, v);
                    gens.dim((local.inputs[0], local.inputs[1], local.output))
                })
                .collect();
            if dims.iter().any(|&d| d == 0) {
                continue;
            }
            let ti = fc.trees.len();
            for decos in product(&dims) {
                fc.index.insert((ti, decos.clone()), fc.basis.len());
                fc.basis.push((ti, decos));
            }
            fc.tree_index.insert(t.clone(), ti);
            fc.trees.push(t);
            fc.vertices.push(verts);
        }
        fc
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, tree: &Tree, decos: &[usize]) -> Option<usize> {
        let ti = *self.tree_index.get(tree)?;
        self.index.get(&(ti, decos.to_vec())).copied()
    }

    pub fn tree_index(&self, tree: &Tree) -> Option<usize> {
        self.tree_index.get(tree).copied()
    }

    pub fn vertices(&self, ti: usize) -> &[Mask] {
        &self.vertices[ti]
    }

    pub fn label(&self, i: usize) -> String {
        if self.unit {
            return format!("(1{})", self.sig.output.mark());
        }
        let (ti, decos) = &self.basis[i];
        let d: Vec<String> = decos.iter().map(|x| x.to_string()).collect();
        format!("{}[{}]", self.trees[*ti].serialize(&self.sig), d.join(","))
    }

    /// The basis element as a planar tree, children in canonical order.
    pub fn ptree(&self, i: usize) -> PTree {
        if self.unit {
            return PTree::Leaf(1);
        }
        let (ti, decos) = &self.basis[i];
        let t = &self.trees[*ti];
        let deco: HashMap<Mask, usize> = self.vertices[*ti]
            .iter()
            .copied()
            .zip(decos.iter().copied())
            .collect();
        build_ptree(t, t.full(), &deco)
    }

    /// Expands a planar decorated tree of this signature in the basis.
    pub fn vector_of(&self, gens: &GeneratorSet, t: &PTree) -> SparseVec {
        let mut out = Vec::new();
        self.expand_into(gens, t, &Q::one(), &mut out);
        sparse_from_terms(out)
    }

    pub fn expand_into(&self, gens: &GeneratorSet, t: &PTree, coeff: &Q, out: &mut Vec<(usize, Q)>) {
        if self.unit {
            if let PTree::Leaf(_) = t {
                out.push((0, coeff.clone()));
                return;
            }
        }
        let Some(nt) = normalize(gens, &self.sig, t) else {
            return;
        };
        let mut nodes: Vec<(Mask, SparseVec)> = Vec::new();
        preorder(&nt, &mut nodes);
        let full: Mask = (1 << self.sig.arity()) - 1;
        let clusters: Vec<Mask> = nodes.iter().map(|(m, _)| *m).filter(|&m| m != full).collect();
        let Ok(tree) = Tree::from_clusters(self.sig.arity(), clusters) else {
            return;
        };
        let Some(&ti) = self.tree_index.get(&tree) else {
            return;
        };
        let decos: Vec<&SparseVec> = nodes.iter().map(|(_, d)| d).collect();
        let mut cur = Vec::with_capacity(decos.len());
        expand_rec(&decos, 0, coeff.clone(), &mut cur, &mut |idx, c| {
            if let Some(&b) = self.index.get(&(ti, idx.to_vec())) {
                out.push((b, c));
            }
        });
    }
}

fn expand_rec(
    decos: &[&SparseVec],
    k: usize,
    c: Q,
    cur: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize], Q),
) {
    if k == decos.len() {
        emit(cur, c);
        return;
    }
    for (j, a) in decos[k] {
        cur.push(*j);
        expand_rec(decos, k + 1, &c * a, cur, emit);
        cur.pop();
    }
}

fn preorder(t: &PTree, out: &mut Vec<(Mask, SparseVec)>) {
    if let PTree::Node(n) = t {
        out.push((t.leaf_mask(), n.deco.clone()));
        preorder(&n.kids[0], out);
        preorder(&n.kids[1], out);
    }
}

/// Orders children by smallest leaf, applying the swap action where needed.
/// `None` if some edge has no admissible color.
pub(crate) fn normalize(gens: &GeneratorSet, sig: &Signature, t: &PTree) -> Option<PTree> {
    match t {
        PTree::Leaf(l) => Some(PTree::Leaf(*l)),
        PTree::Node(n) => {
            let a = normalize(gens, sig, &n.kids[0])?;
            let b = normalize(gens, sig, &n.kids[1])?;
            let (ma, mb) = (a.leaf_mask(), b.leaf_mask());
            let ca = mask_color(sig, ma)?;
            let cb = mask_color(sig, mb)?;
            let co = mask_color(sig, ma | mb)?;
            if ma.trailing_zeros() < mb.trailing_zeros() {
                Some(PTree::node(n.deco.clone(), a, b))
            } else {
                let block = gens.blocks.get(&(ca, cb, co))?;
                let deco = block.swap.apply_sparse(&n.deco);
                Some(PTree::node(deco, b, a))
            }
        }
    }
}

fn build_ptree(t: &Tree, v: Mask, deco: &HashMap<Mask, usize>) -> PTree {
    if v.count_ones() == 1 {
        return PTree::Leaf(v.trailing_zeros() as usize + 1);
    }
    let kids = t.children(v);
    PTree::node(
        vec![(deco[&v], Q::one())],
        build_ptree(t, kids[0], deco),
        build_ptree(t, kids[1], deco),
    )
}

/// Like the basis planar tree, but the subtrees at masks in `over` are
/// replaced by the given planar trees.
pub(crate) fn build_ptree_with(
    t: &Tree,
    v: Mask,
    deco: &HashMap<Mask, usize>,
    over: &HashMap<Mask, PTree>,
) -> PTree {
    if let Some(p) = over.get(&v) {
        return p.clone();
    }
    if v.count_ones() == 1 {
        return PTree::Leaf(v.trailing_zeros() as usize + 1);
    }
    let kids = t.children(v);
    PTree::node(
        vec![(deco[&v], Q::one())],
        build_ptree_with(t, kids[0], deco, over),
        build_ptree_with(t, kids[1], deco, over),
    )
}

/// All index tuples `x` with `x[k] < dims[k]`, in lexicographic order.
pub fn product(dims: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &d in dims {
        let mut next = Vec::with_capacity(out.len() * d);
        for p in &out {
            for j in 0..d {
                let mut q = p.clone();
                q.push(j);
                next.push(q);
            }
        }
        out = next;
    }
    out
}
