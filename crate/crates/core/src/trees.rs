//! Rooted trees with labelled leaves and colored edges.
//!
//! A tree on leaves `1..=n` is stored as the set of leaf sets ("clusters")
//! sitting above its internal edges. Leaf edges are the singletons and the
//! root edge is the full set, so every edge is named by the bitmask of the
//! leaves above it. Children are unordered; whenever an order is needed they
//! are sorted by their smallest leaf label.
//!
//! Edge colors are not stored. They follow from the leaf colors of a
//! [`Signature`]: an edge is dashed iff exactly one dashed leaf lies above
//! it, and the root output is empty iff the tree has two dashed leaves.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::perm;
use crate::qalg::Q;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    #[serde(rename = "f")]
    Full,
    #[serde(rename = "d")]
    Dashed,
    #[serde(rename = "e")]
    Empty,
}

impl Color {
    pub fn mark(self) -> char {
        match self {
            Color::Full => 'f',
            Color::Dashed => 'd',
            Color::Empty => 'e',
        }
    }

    pub fn from_mark(c: char) -> Option<Color> {
        match c {
            'f' => Some(Color::Full),
            'd' => Some(Color::Dashed),
            'e' => Some(Color::Empty),
            _ => None,
        }
    }
}

/// Output color forced by a list of edge colors feeding into it.
pub fn forced_output(inputs: &[Color]) -> Option<Color> {
    if inputs.contains(&Color::Empty) {
        return None;
    }
    match inputs.iter().filter(|c| **c == Color::Dashed).count() {
        0 => Some(Color::Full),
        1 => Some(Color::Dashed),
        2 => Some(Color::Empty),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Signature {
    pub inputs: Vec<Color>,
    pub output: Color,
}

impl Signature {
    pub fn new(inputs: Vec<Color>, output: Color) -> Self {
        Signature { inputs, output }
    }

    /// All inputs and the output full.
    pub fn uncolored(n: usize) -> Self {
        Signature {
            inputs: vec![Color::Full; n],
            output: Color::Full,
        }
    }

    /// Inputs given, output forced by the dashed count.
    pub fn forced(inputs: Vec<Color>) -> Option<Self> {
        let output = forced_output(&inputs)?;
        Some(Signature { inputs, output })
    }

    pub fn arity(&self) -> usize {
        self.inputs.len()
    }

    pub fn dashed_count(&self) -> usize {
        self.inputs.iter().filter(|c| **c == Color::Dashed).count()
    }

    /// Output agrees with the dashed-count rule.
    pub fn is_consistent(&self) -> bool {
        forced_output(&self.inputs) == Some(self.output)
    }

    /// Moves input `i` to position `p[i]`.
    pub fn permuted(&self, p: &[usize]) -> Signature {
        let mut inputs = self.inputs.clone();
        for (i, &j) in p.iter().enumerate() {
            inputs[j] = self.inputs[i];
        }
        Signature {
            inputs,
            output: self.output,
        }
    }

    /// Mask of the dashed leaves (bit `i` = leaf `i + 1`).
    pub fn dashed_mask(&self) -> Mask {
        self.inputs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c == Color::Dashed)
            .fold(0, |m, (i, _)| m | (1 << i))
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ins: String = self.inputs.iter().map(|c| c.mark()).collect();
        write!(f, "({};{})", ins, self.output.mark())
    }
}

/// Set of leaves, bit `i` standing for leaf `i + 1`.
pub type Mask = u32;

pub fn min_leaf(m: Mask) -> u32 {
    m.trailing_zeros()
}

pub fn leaves_of(m: Mask) -> Vec<usize> {
    (0..32).filter(|i| m & (1 << i) != 0).map(|i| i + 1).collect()
}

/// Ordered list of the edges of a tree, representing a generator of the top
/// exterior power of the span of the edges.
pub type Orientation = Vec<Mask>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tree {
    n: usize,
    clusters: Vec<Mask>,
}

impl Tree {
    pub fn corolla(n: usize) -> Tree {
        assert!((1..=31).contains(&n));
        Tree {
            n,
            clusters: Vec::new(),
        }
    }

    pub fn from_clusters(n: usize, mut clusters: Vec<Mask>) -> Result<Tree> {
        if n == 0 || n > 31 {
            return Err(Error::Tree(format!("unsupported leaf count {n}")));
        }
        let full: Mask = (1 << n) - 1;
        clusters.sort_unstable();
        clusters.dedup();
        for &c in &clusters {
            if c & !full != 0 || c.count_ones() < 2 || c == full {
                return Err(Error::Tree(format!("bad cluster {c:#b}")));
            }
        }
        for (i, &a) in clusters.iter().enumerate() {
            for &b in &clusters[i + 1..] {
                let meet = a & b;
                if meet != 0 && meet != a && meet != b {
                    return Err(Error::Tree(format!("clusters {a:#b} and {b:#b} overlap")));
                }
            }
        }
        Ok(Tree { n, clusters })
    }

    pub fn leaf_count(&self) -> usize {
        self.n
    }

    pub fn full(&self) -> Mask {
        (1 << self.n) - 1
    }

    /// Leaf sets above the internal edges, sorted.
    pub fn internal_edges(&self) -> &[Mask] {
        &self.clusters
    }

    pub fn is_internal(&self, e: Mask) -> bool {
        self.clusters.binary_search(&e).is_ok()
    }

    /// Is `v` the leaf set of a vertex (an internal cluster or the root)?
    pub fn is_vertex(&self, v: Mask) -> bool {
        v == self.full() || self.is_internal(v)
    }

    /// Children edges of vertex `v`, sorted by smallest leaf.
    pub fn children(&self, v: Mask) -> Vec<Mask> {
        let mut covered: Mask = 0;
        let mut kids: Vec<Mask> = Vec::new();
        // maximal clusters strictly inside v: process large ones first
        let mut inner: Vec<Mask> = self
            .clusters
            .iter()
            .copied()
            .filter(|&c| c != v && c & v == c)
            .collect();
        inner.sort_by_key(|c| std::cmp::Reverse(c.count_ones()));
        for c in inner {
            if c & covered == 0 {
                covered |= c;
                kids.push(c);
            }
        }
        for i in 0..self.n {
            let bit = 1 << i;
            if v & bit != 0 && covered & bit == 0 {
                kids.push(bit);
            }
        }
        kids.sort_by_key(|&c| min_leaf(c));
        kids
    }

    pub fn arity(&self, v: Mask) -> usize {
        self.children(v).len()
    }

    /// The vertex directly below edge `e` (the smallest cluster or root
    /// strictly containing it).
    pub fn parent(&self, e: Mask) -> Mask {
        self.clusters
            .iter()
            .copied()
            .filter(|&c| c != e && c & e == e)
            .min_by_key(|c| c.count_ones())
            .unwrap_or(self.full())
    }

    /// Vertices in depth-first preorder from the root.
    pub fn vertices(&self) -> Vec<Mask> {
        let mut out = Vec::with_capacity(self.clusters.len() + 1);
        self.visit_vertices(self.full(), &mut out);
        out
    }

    fn visit_vertices(&self, v: Mask, out: &mut Vec<Mask>) {
        out.push(v);
        for c in self.children(v) {
            if c.count_ones() > 1 {
                self.visit_vertices(c, out);
            }
        }
    }

    /// Canonical edge order: depth-first from the root, children by smallest
    /// leaf, each edge listed before the edges above it; root edge last.
    pub fn canonical_edges(&self) -> Orientation {
        let mut out = Vec::with_capacity(self.n + self.clusters.len() + 1);
        self.visit_edges(self.full(), &mut out);
        out.push(self.full());
        out
    }

    fn visit_edges(&self, v: Mask, out: &mut Vec<Mask>) {
        for c in self.children(v) {
            out.push(c);
            if c.count_ones() > 1 {
                self.visit_edges(c, out);
            }
        }
    }

    pub fn is_binary(&self) -> bool {
        self.vertices().iter().all(|&v| self.arity(v) == 2)
    }

    /// Color of edge `e` under the leaf colors of `sig`, if admissible.
    pub fn edge_color(&self, sig: &Signature, e: Mask) -> Option<Color> {
        if e == self.full() {
            return forced_output(&sig.inputs);
        }
        match (sig.dashed_mask() & e).count_ones() {
            0 => Some(Color::Full),
            1 => Some(Color::Dashed),
            _ => None,
        }
    }

    /// Every edge has an admissible color and the root matches `sig.output`.
    pub fn is_admissible(&self, sig: &Signature) -> bool {
        sig.arity() == self.n
            && sig.is_consistent()
            && self.clusters.iter().all(|&c| self.edge_color(sig, c).is_some())
    }

    /// Input colors (children in canonical order) and output color of vertex `v`.
    pub fn local_signature(&self, sig: &Signature, v: Mask) -> Signature {
        let inputs = self
            .children(v)
            .iter()
            .map(|&c| self.edge_color(sig, c).expect("admissible tree"))
            .collect();
        let output = self.edge_color(sig, v).expect("admissible tree");
        Signature { inputs, output }
    }

    /// Nested-parenthesis form, e.g. `((1f,2f)f,3d)d`: children sorted by
    /// smallest leaf, every edge followed by its color mark.
    pub fn serialize(&self, sig: &Signature) -> String {
        let mut s = String::new();
        self.write_vertex(sig, self.full(), &mut s);
        s.push(self.edge_color(sig, self.full()).map(|c| c.mark()).unwrap_or('?'));
        s
    }

    fn write_vertex(&self, sig: &Signature, v: Mask, s: &mut String) {
        s.push('(');
        for (k, c) in self.children(v).into_iter().enumerate() {
            if k > 0 {
                s.push(',');
            }
            if c.count_ones() == 1 {
                s.push_str(&(min_leaf(c) + 1).to_string());
            } else {
                self.write_vertex(sig, c, s);
            }
            s.push(self.edge_color(sig, c).map(|c| c.mark()).unwrap_or('?'));
        }
        s.push(')');
    }

    /// Relabels leaf `i` as `p[i - 1] + 1`.
    pub fn relabel(&self, p: &[usize]) -> Tree {
        let map = |m: Mask| -> Mask {
            (0..self.n)
                .filter(|i| m & (1 << i) != 0)
                .fold(0, |acc, i| acc | (1 << p[i]))
        };
        let mut clusters: Vec<Mask> = self.clusters.iter().map(|&c| map(c)).collect();
        clusters.sort_unstable();
        Tree { n: self.n, clusters }
    }
}

/// Sign of the permutation carrying orientation `o` to the canonical edge
/// order of `t`, together with `t` itself (trees are stored canonically).
pub fn canonical_form(t: &Tree, o: &[Mask]) -> Result<(Tree, i32)> {
    let canon = t.canonical_edges();
    if o.len() != canon.len() {
        return Err(Error::Tree("orientation does not list every edge".into()));
    }
    let mut pos = Vec::with_capacity(o.len());
    for e in o {
        match canon.iter().position(|c| c == e) {
            Some(p) => pos.push(p),
            None => return Err(Error::Tree(format!("{e:#b} is not an edge"))),
        }
    }
    let mut check = pos.clone();
    check.sort_unstable();
    check.dedup();
    if check.len() != pos.len() {
        return Err(Error::Tree("orientation repeats an edge".into()));
    }
    Ok((t.clone(), perm::sort_sign(&pos)))
}

/// Reroutes the children of `v` whose union is `s` through a new vertex.
/// Returns the new tree, the new edge, and the sign relating
/// `o` followed by the new edge to the canonical orientation of the result.
pub fn split_vertex(
    t: &Tree,
    sig: &Signature,
    v: Mask,
    s: Mask,
    o: &[Mask],
) -> Result<(Tree, Mask, i32)> {
    if !t.is_vertex(v) {
        return Err(Error::Tree(format!("{v:#b} is not a vertex")));
    }
    let kids = t.children(v);
    let chosen: Vec<Mask> = kids.iter().copied().filter(|&c| c & s == c).collect();
    let union = chosen.iter().fold(0, |a, c| a | c);
    if union != s || chosen.len() < 2 || chosen.len() + 1 > kids.len() {
        return Err(Error::Tree(format!(
            "{s:#b} is not a union of between 2 and arity-1 children of {v:#b}"
        )));
    }
    if t.edge_color(sig, s).is_none() {
        return Err(Error::Coloring(format!(
            "new edge {:?} would carry two dashed leaves",
            leaves_of(s)
        )));
    }
    let mut clusters = t.clusters.clone();
    clusters.push(s);
    let t2 = Tree::from_clusters(t.n, clusters)?;
    let mut o2 = o.to_vec();
    o2.push(s);
    let (_, sign) = canonical_form(&t2, &o2)?;
    Ok((t2, s, sign))
}

/// Merges the endpoints of internal edge `e`. The sign is that of moving `e`
/// to the end of `o`, times the sign relating the remaining edges to the
/// canonical orientation of the result.
pub fn contract_edge(t: &Tree, e: Mask, o: &[Mask]) -> Result<(Tree, i32)> {
    if !t.is_internal(e) {
        return Err(Error::Tree(format!("{e:#b} is not an internal edge")));
    }
    let p = o
        .iter()
        .position(|x| *x == e)
        .ok_or_else(|| Error::Tree("edge missing from orientation".into()))?;
    let move_sign = if (o.len() - 1 - p) % 2 == 0 { 1 } else { -1 };
    let clusters: Vec<Mask> = t.clusters.iter().copied().filter(|&c| c != e).collect();
    let t2 = Tree::from_clusters(t.n, clusters)?;
    let rest: Vec<Mask> = o.iter().copied().filter(|x| *x != e).collect();
    let (_, s) = canonical_form(&t2, &rest)?;
    Ok((t2, move_sign * s))
}

/// Makes leaf `leaf` the new root; the old root becomes leaf `leaf`.
pub fn reroot(t: &Tree, leaf: usize) -> Result<Tree> {
    if leaf == 0 || leaf > t.n {
        return Err(Error::Tree(format!("no leaf {leaf}")));
    }
    let bit: Mask = 1 << (leaf - 1);
    let full = t.full();
    let clusters = t
        .clusters
        .iter()
        .map(|&c| if c & bit != 0 { (full & !c) | bit } else { c })
        .collect();
    Tree::from_clusters(t.n, clusters)
}

/// All trees of signature `sig` whose vertex arities pass `arity_ok` and
/// whose edges admit colors, sorted by internal-edge count then clusters.
pub fn enumerate_trees(sig: &Signature, arity_ok: impl Fn(usize) -> bool) -> Vec<Tree> {
    let n = sig.arity();
    if n == 0 || !sig.is_consistent() {
        return Vec::new();
    }
    let full: Mask = (1 << n) - 1;
    let dashed = sig.dashed_mask();
    let block_ok = |b: Mask| (b & dashed).count_ones() <= 1;
    let mut out: Vec<Tree> = subtrees(full, &arity_ok, &block_ok)
        .into_iter()
        .map(|clusters| Tree::from_clusters(n, clusters).expect("valid laminar family"))
        .collect();
    out.sort_by(|a, b| {
        a.clusters
            .len()
            .cmp(&b.clusters.len())
            .then_with(|| a.clusters.cmp(&b.clusters))
    });
    out
}

// cluster sets of all trees whose root vertex has leaf set `s` (excluding `s`)
fn subtrees(
    s: Mask,
    arity_ok: &impl Fn(usize) -> bool,
    block_ok: &impl Fn(Mask) -> bool,
) -> Vec<Vec<Mask>> {
    let mut out = Vec::new();
    for blocks in set_partitions(s) {
        if blocks.len() < 2 || !arity_ok(blocks.len()) {
            continue;
        }
        let mut partial: Vec<Vec<Mask>> = vec![Vec::new()];
        for &b in &blocks {
            if b.count_ones() == 1 {
                continue;
            }
            if !block_ok(b) {
                partial.clear();
                break;
            }
            let subs = subtrees(b, arity_ok, block_ok);
            let mut next = Vec::new();
            for p in &partial {
                for sub in &subs {
                    let mut q = p.clone();
                    q.push(b);
                    q.extend_from_slice(sub);
                    next.push(q);
                }
            }
            partial = next;
        }
        out.extend(partial);
    }
    out
}

fn set_partitions(s: Mask) -> Vec<Vec<Mask>> {
    let elems: Vec<Mask> = (0..32).filter(|i| s & (1 << i) != 0).map(|i| 1 << i).collect();
    let mut out = Vec::new();
    let mut blocks: Vec<Mask> = Vec::new();
    fn rec(elems: &[Mask], i: usize, blocks: &mut Vec<Mask>, out: &mut Vec<Vec<Mask>>) {
        if i == elems.len() {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b] |= elems[i];
            rec(elems, i + 1, blocks, out);
            blocks[b] &= !elems[i];
        }
        blocks.push(elems[i]);
        rec(elems, i + 1, blocks, out);
        blocks.pop();
    }
    rec(&elems, 0, &mut blocks, &mut out);
    out
}

/// One term of a decorated tree vector: the tree, one basis index per vertex
/// (vertices in [`Tree::vertices`] order), an orientation and a coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoratedTerm {
    pub tree: Tree,
    pub decorations: Vec<usize>,
    pub orientation: Orientation,
    pub coeff: Q,
}

/// Rational combination of decorated trees sharing one signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoratedTreeVector {
    pub signature: Signature,
    pub terms: Vec<DecoratedTerm>,
}

impl DecoratedTreeVector {
    pub fn new(signature: Signature) -> Self {
        DecoratedTreeVector {
            signature,
            terms: Vec::new(),
        }
    }

    /// Rewrites every orientation canonically (absorbing signs), merges equal
    /// terms and drops zeros.
    pub fn normalized(&self) -> DecoratedTreeVector {
        use num_traits::Zero;
        let mut acc: std::collections::BTreeMap<(Tree, Vec<usize>), Q> = Default::default();
        for term in &self.terms {
            let (t, s) = canonical_form(&term.tree, &term.orientation).expect("valid orientation");
            let c = if s > 0 {
                term.coeff.clone()
            } else {
                -term.coeff.clone()
            };
            *acc.entry((t, term.decorations.clone())).or_insert_with(Q::zero) += c;
        }
        DecoratedTreeVector {
            signature: self.signature.clone(),
            terms: acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|((tree, decorations), coeff)| DecoratedTerm {
                    orientation: tree.canonical_edges(),
                    tree,
                    decorations,
                    coeff,
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full(n: usize) -> Signature {
        Signature::uncolored(n)
    }

    #[test]
    fn reduced_and_binary_counts() {
        let counts: Vec<usize> = (2..=4).map(|n| enumerate_trees(&full(n), |_| true).len()).collect();
        assert_eq!(counts, vec![1, 4, 26]);
        let binary: Vec<usize> = (2..=5)
            .map(|n| enumerate_trees(&full(n), |a| a == 2).len())
            .collect();
        assert_eq!(binary, vec![1, 3, 15, 105]);
    }

    #[test]
    fn three_leaf_binary_pairings() {
        let ts = enumerate_trees(&full(3), |a| a == 2);
        let pairs: Vec<Vec<Mask>> = ts.iter().map(|t| t.internal_edges().to_vec()).collect();
        assert_eq!(pairs, vec![vec![0b011], vec![0b101], vec![0b110]]);
    }

    #[test]
    fn colored_enumeration_excludes_double_dashed_edges() {
        use Color::*;
        let sig = Signature::new(vec![Dashed, Full, Dashed], Empty);
        let ts = enumerate_trees(&sig, |a| a == 2);
        assert_eq!(ts.len(), 2);
        assert!(ts.iter().all(|t| !t.is_internal(0b101)));
        // wrong output color gives nothing
        assert!(enumerate_trees(&Signature::new(vec![Dashed, Full, Dashed], Full), |_| true).is_empty());
    }

    #[test]
    fn canonical_signs() {
        let t = Tree::from_clusters(3, vec![0b011]).unwrap();
        let canon = t.canonical_edges();
        assert_eq!(canonical_form(&t, &canon).unwrap().1, 1);
        let mut swapped = canon.clone();
        swapped.swap(0, 2);
        assert_eq!(canonical_form(&t, &swapped).unwrap().1, -1);
    }

    #[test]
    fn split_corolla() {
        let t = Tree::corolla(3);
        let (t2, e, s) = split_vertex(&t, &full(3), t.full(), 0b011, &t.canonical_edges()).unwrap();
        assert_eq!(t2.internal_edges(), &[0b011]);
        assert_eq!(e, 0b011);
        assert_eq!(s, 1);
        assert_eq!(t2.serialize(&full(3)), "((1f,2f)f,3f)f");
    }

    #[test]
    fn split_colors_new_edge() {
        use Color::*;
        let sig = Signature::new(vec![Dashed, Full, Dashed], Empty);
        let t = Tree::corolla(3);
        let (t2, e, _) = split_vertex(&t, &sig, t.full(), 0b011, &t.canonical_edges()).unwrap();
        assert_eq!(t2.edge_color(&sig, e), Some(Dashed));
        assert!(matches!(
            split_vertex(&t, &sig, t.full(), 0b101, &t.canonical_edges()),
            Err(Error::Coloring(_))
        ));
    }

    #[test]
    fn contract_binary() {
        let t = Tree::from_clusters(3, vec![0b011]).unwrap();
        let (c, s) = contract_edge(&t, 0b011, &t.canonical_edges()).unwrap();
        assert_eq!(c, Tree::corolla(3));
        assert_eq!(s, 1);
        assert!(contract_edge(&t, 0b001, &t.canonical_edges()).is_err());
    }

    #[test]
    fn reroot_examples() {
        let c = Tree::corolla(3);
        assert_eq!(reroot(&c, 1).unwrap(), c);
        let t = Tree::from_clusters(3, vec![0b011]).unwrap();
        let r = reroot(&t, 1).unwrap();
        assert_eq!(r.internal_edges(), &[0b101]);
        assert_eq!(reroot(&r, 1).unwrap(), t);
    }

    #[test]
    fn serialization() {
        use Color::*;
        let sig = Signature::new(vec![Full, Dashed, Dashed], Empty);
        let t = Tree::from_clusters(3, vec![0b011]).unwrap();
        assert_eq!(t.serialize(&sig), "((1f,2d)d,3d)e");
    }
}
