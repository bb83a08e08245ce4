//! Every cell of the cobar complex of the hat operad with empty output and
//! dashed first and last inputs is, up to sign, a unique product of two
//! cells with dashed output: `φ * ψ` joins both outputs at the binary inner
//! product vertex, `φ # ψ` reads the root decoration of `φ` as an inner
//! product and grafts `ψ` into its new last input. The full leaves of the
//! two factors are interleaved by a shuffle.

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::Serialize;

use super::cobar::{cobar_complex, CobarOptions};
use crate::operad::OperadData;
use crate::perm;
use crate::qalg::{Echelon, Q};
use crate::trees::{canonical_form, Color, Mask, Signature, Tree};
use crate::{Error, Result};

/// A basis cell with dashed output; one leaf and no decorations is the unit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Factor {
    pub signature: Signature,
    pub tree: Tree,
    pub decos: Vec<usize>,
}

impl Factor {
    pub fn unit() -> Factor {
        Factor {
            signature: Signature::new(vec![Color::Dashed], Color::Dashed),
            tree: Tree::corolla(1),
            decos: Vec::new(),
        }
    }

    pub fn is_unit(&self) -> bool {
        self.tree.leaf_count() == 1
    }

    pub fn degree(&self) -> i32 {
        if self.is_unit() {
            0
        } else {
            self.tree.internal_edges().len() as i32 - (self.tree.leaf_count() as i32 - 2)
        }
    }

    fn edges(&self) -> Vec<Mask> {
        if self.is_unit() {
            vec![1]
        } else {
            self.tree.canonical_edges()
        }
    }
}

/// Tree and decorations in the target signature.
pub type Cell = (Tree, Vec<usize>);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ProductKind {
    Star,
    Hash,
}

#[derive(Clone, Debug)]
pub struct Factorization {
    pub kind: ProductKind,
    /// A combination of factors sharing one tree (the root decoration of a
    /// hash factor may need to be re-expressed).
    pub phi: Vec<(Factor, Q)>,
    pub psi: Factor,
    /// Positions, among the full leaves of the product, taken by the full
    /// leaves of `phi`.
    pub shuffle: Vec<usize>,
}

fn dashed_first(full: usize) -> Signature {
    let mut inputs = vec![Color::Dashed];
    inputs.extend(std::iter::repeat(Color::Full).take(full));
    Signature::new(inputs, Color::Dashed)
}

fn dashed_last(full: usize) -> Signature {
    let mut inputs = vec![Color::Full; full];
    inputs.push(Color::Dashed);
    Signature::new(inputs, Color::Dashed)
}

/// Empty-output signature with `n` inputs, the first and last dashed.
pub fn outer_signature(n: usize) -> Signature {
    let mut inputs = vec![Color::Full; n];
    inputs[0] = Color::Dashed;
    inputs[n - 1] = Color::Dashed;
    Signature::new(inputs, Color::Empty)
}

fn map_mask(m: Mask, leaves: &[usize]) -> Mask {
    leaves
        .iter()
        .enumerate()
        .filter(|(i, _)| m & (1 << i) != 0)
        .fold(0, |acc, (_, &j)| acc | (1 << j))
}

fn check_shuffle(shuffle: &[usize], total: usize) -> Result<Vec<usize>> {
    if shuffle.windows(2).any(|w| w[0] >= w[1]) || shuffle.iter().any(|&x| x >= total) {
        return Err(Error::Product(format!("{shuffle:?} is not a shuffle of {total} leaves")));
    }
    Ok((0..total).filter(|x| !shuffle.contains(x)).collect())
}

// leaf maps (0-based) of both factors into the product
fn leaf_maps(phi_full: usize, psi_full: usize, shuffle: &[usize], n: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    if shuffle.len() != phi_full {
        return Err(Error::Product("shuffle length does not match the first factor".into()));
    }
    let rest = check_shuffle(shuffle, phi_full + psi_full)?;
    let mut a = vec![0];
    a.extend(shuffle.iter().map(|&x| x + 1));
    let mut b: Vec<usize> = rest.iter().map(|&x| x + 1).collect();
    b.push(n - 1);
    Ok((a, b))
}

fn check_factor(f: &Factor, expected: &Signature) -> Result<()> {
    if &f.signature != expected || f.tree.leaf_count() != expected.arity() {
        return Err(Error::Product(format!(
            "factor has signature {}, expected {expected}",
            f.signature
        )));
    }
    Ok(())
}

fn assemble(n: usize, clusters: Vec<Mask>, o: Vec<Mask>, decos: &HashMap<Mask, usize>) -> Result<(Cell, i32)> {
    let t = Tree::from_clusters(n, clusters)?;
    let (t, sign) = canonical_form(&t, &o)?;
    let d = t.vertices().iter().map(|v| decos[v]).collect();
    Ok(((t, d), sign))
}

/// `φ * ψ` for `φ` in `(d f^k; d)` and `ψ` in `(f^l d; d)`; the result has
/// `k + l + 2` inputs and degree `deg φ + deg ψ`.
pub fn star_product(phi: &Factor, psi: &Factor, shuffle: &[usize]) -> Result<(Signature, Cell, i32)> {
    let (k, l) = (phi.tree.leaf_count() - 1, psi.tree.leaf_count() - 1);
    check_factor(phi, &dashed_first(k))?;
    check_factor(psi, &dashed_last(l))?;
    let n = k + l + 2;
    let (a, b) = leaf_maps(k, l, shuffle, n)?;
    let full: Mask = (1 << n) - 1;
    let mut clusters = Vec::new();
    let mut o = Vec::new();
    let mut decos = HashMap::from([(full, 0)]);
    for (f, map) in [(phi, &a), (psi, &b)] {
        o.extend(f.edges().iter().map(|&e| map_mask(e, map)));
        if !f.is_unit() {
            clusters.extend(f.tree.internal_edges().iter().map(|&c| map_mask(c, map)));
            clusters.push(map_mask(f.tree.full(), map));
            for (v, d) in f.tree.vertices().iter().zip(&f.decos) {
                decos.insert(map_mask(*v, map), *d);
            }
        }
    }
    o.push(full);
    let (cell, sign) = assemble(n, clusters, o, &decos)?;
    Ok((outer_signature(n), cell, sign))
}

// p[t] is the position among the root's children of input t of the standard
// reading; `slot` is the position of the grafted edge
fn root_transport<P: OperadData + ?Sized>(
    h: &P,
    root_sig: &Signature,
    slot: usize,
) -> (Signature, Vec<usize>, Vec<Vec<(usize, Q)>>) {
    let r = root_sig.arity();
    // standard reading: the grafted edge last, others in order
    let p: Vec<usize> = (0..r)
        .filter(|&i| i != slot)
        .chain(std::iter::once(slot))
        .collect();
    let standard = root_sig.permuted(&perm::inverse(&p));
    let inv = perm::inverse(&p);
    let d = h.dim(root_sig);
    // rows: dual basis of the outer root, entries: dual basis of the standard reading
    let rows = (0..d)
        .map(|x| h.permute(root_sig, &inv, &[(x, Q::one())]))
        .collect();
    (standard, p, rows)
}

/// `φ # ψ` for `φ` in `(d f^{k-1}; d)` with `k >= 2` and `ψ` in
/// `(f^l d; d)`; the result has `k + l + 1` inputs and degree
/// `deg φ + deg ψ - 1`. Returns a combination when the root decoration has
/// to be re-expressed.
pub fn hash_product<P: OperadData + ?Sized>(
    h: &P,
    phi: &Factor,
    psi: &Factor,
    shuffle: &[usize],
) -> Result<(Signature, Vec<(Cell, Q)>)> {
    let k = phi.tree.leaf_count();
    let l = psi.tree.leaf_count() - 1;
    if k < 2 {
        return Err(Error::Product("the first factor of # needs at least two inputs".into()));
    }
    check_factor(phi, &dashed_first(k - 1))?;
    check_factor(psi, &dashed_last(l))?;
    let n = k + l + 1;
    let (a, b) = leaf_maps(k - 1, l, shuffle, n)?;
    let full: Mask = (1 << n) - 1;
    let slot_edge = map_mask(psi.tree.full(), &b);
    let mut clusters: Vec<Mask> = phi.tree.internal_edges().iter().map(|&c| map_mask(c, &a)).collect();
    let mut o: Vec<Mask> = phi.edges().iter().map(|&e| map_mask(e, &a)).collect();
    o.pop();
    o.extend(psi.edges().iter().map(|&e| map_mask(e, &b)));
    o.push(full);
    let mut decos = HashMap::new();
    let phi_verts = phi.tree.vertices();
    for (v, d) in phi_verts.iter().zip(&phi.decos).skip(1) {
        decos.insert(map_mask(*v, &a), *d);
    }
    if !psi.is_unit() {
        clusters.extend(psi.tree.internal_edges().iter().map(|&c| map_mask(c, &b)));
        clusters.push(slot_edge);
        for (v, d) in psi.tree.vertices().iter().zip(&psi.decos) {
            decos.insert(map_mask(*v, &b), *d);
        }
    }
    let sig = outer_signature(n);
    let t = Tree::from_clusters(n, clusters.clone())?;
    let root_sig = t.local_signature(&sig, full);
    let slot = t
        .children(full)
        .iter()
        .position(|&c| c == slot_edge)
        .expect("grafted edge is a child of the root");
    let (_, _, rows) = root_transport(h, &root_sig, slot);
    let z = phi.decos[0];
    let mut out = Vec::new();
    for (x, row) in rows.iter().enumerate() {
        let c = row
            .iter()
            .find(|(i, _)| *i == z)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Q::zero);
        if c.is_zero() {
            continue;
        }
        decos.insert(full, x);
        let (cell, sign) = assemble(n, clusters.clone(), o.clone(), &decos)?;
        out.push((cell, if sign > 0 { c } else { -c }));
    }
    Ok((sig, out))
}

fn restrict(t: &Tree, decos: &[usize], branch: Mask, leaves: &[usize]) -> (Tree, Vec<usize>) {
    // leaves: positions (0-based) of the factor's leaves in the product
    let back = |m: Mask| -> Mask {
        leaves
            .iter()
            .enumerate()
            .filter(|(_, &j)| m & (1 << j) != 0)
            .fold(0, |acc, (i, _)| acc | (1 << i))
    };
    let clusters: Vec<Mask> = t
        .internal_edges()
        .iter()
        .copied()
        .filter(|&c| c != branch && c & branch == c)
        .map(back)
        .collect();
    let sub = Tree::from_clusters(leaves.len(), clusters).expect("subtree");
    let deco_of: HashMap<Mask, usize> = t.vertices().into_iter().zip(decos.iter().copied()).collect();
    let d = sub
        .vertices()
        .iter()
        .map(|&v| {
            let fwd = map_mask(v, leaves);
            deco_of[&fwd]
        })
        .collect();
    (sub, d)
}

fn factor_from(sig: Signature, leaves: &[usize], t: &Tree, decos: &[usize], branch: Mask) -> Factor {
    if leaves.len() == 1 {
        return Factor::unit();
    }
    let (tree, d) = restrict(t, decos, branch, leaves);
    Factor {
        signature: sig,
        tree,
        decos: d,
    }
}

/// Splits a cell of signature `(d f^m d; e)` into its unique product.
pub fn decompose_star_hash<P: OperadData + ?Sized>(h: &P, cell: &Cell) -> Result<Factorization> {
    let (t, decos) = cell;
    let n = t.leaf_count();
    let full = t.full();
    let kids = t.children(full);
    let last: Mask = 1 << (n - 1);
    let psi_branch = *kids.iter().find(|&&c| c & last != 0).expect("leaf n");
    let psi_leaves: Vec<usize> = (0..n).filter(|&i| psi_branch & (1 << i) != 0).collect();
    let phi_leaves: Vec<usize> = (0..n).filter(|&i| psi_branch & (1 << i) == 0).collect();
    let shuffle: Vec<usize> = phi_leaves[1..].iter().map(|&i| i - 1).collect();
    let psi = factor_from(dashed_last(psi_leaves.len() - 1), &psi_leaves, t, decos, psi_branch);
    if kids.len() == 2 {
        let phi = factor_from(dashed_first(phi_leaves.len() - 1), &phi_leaves, t, decos, kids[0]);
        let (_, c, sign) = star_product(&phi, &psi, &shuffle)?;
        if &c != cell {
            return Err(Error::Product("star recomposition moved the cell".into()));
        }
        return Ok(Factorization {
            kind: ProductKind::Star,
            phi: vec![(phi, if sign > 0 { Q::one() } else { -Q::one() })],
            psi,
            shuffle,
        });
    }
    // hash: φ is everything but the branch of leaf n, rooted at that branch
    let phi_mask = full & !psi_branch;
    let (tree, mut d) = {
        let back = |m: Mask| -> Mask {
            phi_leaves
                .iter()
                .enumerate()
                .filter(|(_, &j)| m & (1 << j) != 0)
                .fold(0, |acc, (i, _)| acc | (1 << i))
        };
        let clusters: Vec<Mask> = t
            .internal_edges()
            .iter()
            .copied()
            .filter(|&c| c & phi_mask == c)
            .map(back)
            .collect();
        let sub = Tree::from_clusters(phi_leaves.len(), clusters)?;
        let deco_of: HashMap<Mask, usize> = t.vertices().into_iter().zip(decos.iter().copied()).collect();
        let d: Vec<usize> = sub
            .vertices()
            .iter()
            .map(|&v| {
                if v == sub.full() {
                    usize::MAX
                } else {
                    deco_of[&map_mask(v, &phi_leaves)]
                }
            })
            .collect();
        (sub, d)
    };
    let sig = outer_signature(n);
    let root_sig = t.local_signature(&sig, full);
    let slot = kids.iter().position(|&c| c == psi_branch).expect("child");
    let (standard, p, _) = root_transport(h, &root_sig, slot);
    // inverse transport: dual e_x of the outer root in the standard reading
    let dim = h.dim(&standard);
    let phi_sig = dashed_first(phi_leaves.len() - 1);
    let mut phi = Vec::new();
    for z in 0..dim {
        let img = h.permute(&standard, &p, &[(z, Q::one())]);
        if let Some((_, c)) = img.iter().find(|(i, _)| *i == decos[0]) {
            d[0] = z;
            phi.push((
                Factor {
                    signature: phi_sig.clone(),
                    tree: tree.clone(),
                    decos: d.clone(),
                },
                c.clone(),
            ));
        }
    }
    let total = combine(h, &phi, &psi, &shuffle)?;
    let coeff = total
        .iter()
        .find(|(c, _)| c == cell)
        .map(|(_, c)| c.clone())
        .ok_or_else(|| Error::Product("hash recomposition lost the cell".into()))?;
    let phi = phi.into_iter().map(|(f, c)| (f, c / coeff.clone())).collect();
    Ok(Factorization {
        kind: ProductKind::Hash,
        phi,
        psi,
        shuffle,
    })
}

fn combine<P: OperadData + ?Sized>(h: &P, phi: &[(Factor, Q)], psi: &Factor, shuffle: &[usize]) -> Result<Vec<(Cell, Q)>> {
    let mut acc: Vec<(Cell, Q)> = Vec::new();
    for (f, c) in phi {
        let (_, v) = hash_product(h, f, psi, shuffle)?;
        for (cell, x) in v {
            match acc.iter_mut().find(|(y, _)| *y == cell) {
                Some(e) => e.1 += c * &x,
                None => acc.push((cell, c * &x)),
            }
        }
    }
    acc.retain(|(_, c)| !c.is_zero());
    Ok(acc)
}

/// Multiplies a factorization back out.
pub fn recompose<P: OperadData + ?Sized>(h: &P, f: &Factorization) -> Result<Vec<(Cell, Q)>> {
    match f.kind {
        ProductKind::Star => {
            let mut out = Vec::new();
            for (phi, c) in &f.phi {
                let (_, cell, sign) = star_product(phi, &f.psi, &f.shuffle)?;
                out.push((cell, if sign > 0 { c.clone() } else { -c.clone() }));
            }
            Ok(out)
        }
        ProductKind::Hash => combine(h, &f.phi, &f.psi, &f.shuffle),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionCheck {
    pub signature: String,
    pub cells: usize,
    pub star_products: usize,
    pub hash_products: usize,
    /// Rank of all products, written in the cell basis.
    pub rank: usize,
    pub roundtrip_failures: usize,
    pub degree_failures: usize,
    pub pass: bool,
}

fn factors<P: OperadData + ?Sized>(h: &P, sig: &Signature) -> Result<Vec<Factor>> {
    if sig.arity() == 1 {
        return Ok(vec![Factor::unit()]);
    }
    let c = cobar_complex(h, sig, CobarOptions::default())?;
    Ok(c.cells
        .iter()
        .flatten()
        .map(|(ti, d)| Factor {
            signature: sig.clone(),
            tree: c.trees[*ti].clone(),
            decos: d.clone(),
        })
        .collect())
}

/// Enumerates both sides for `n` inputs: every cell decomposes and
/// recomposes to itself, and the products of all factor pairs and shuffles
/// are as many as the cells and linearly independent.
pub fn check_decomposition<P: OperadData + ?Sized>(h: &P, n: usize) -> Result<DecompositionCheck> {
    let sig = outer_signature(n);
    let outer = cobar_complex(h, &sig, CobarOptions::default())?;
    let cells: Vec<Cell> = outer
        .cells
        .iter()
        .flatten()
        .map(|(ti, d)| (outer.trees[*ti].clone(), d.clone()))
        .collect();
    let pos: HashMap<&Cell, usize> = cells.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let degree = |c: &Cell| c.0.internal_edges().len() as i32 - (n as i32 - 2);

    let mut roundtrip_failures = 0;
    for c in &cells {
        let ok = decompose_star_hash(h, c)
            .and_then(|f| recompose(h, &f))
            .map(|v| v.len() == 1 && v[0].0 == *c && v[0].1.is_one())
            .unwrap_or(false);
        if !ok {
            roundtrip_failures += 1;
        }
    }

    let mut ech = Echelon::new(cells.len());
    let (mut stars, mut hashes, mut degree_failures) = (0, 0, 0);
    let mut push = |v: Vec<(Cell, Q)>, want: i32, ech: &mut Echelon| -> Result<()> {
        let mut sv = Vec::new();
        for (c, x) in v {
            if degree(&c) != want {
                degree_failures += 1;
            }
            let i = *pos
                .get(&c)
                .ok_or_else(|| Error::Product("product outside the cell basis".into()))?;
            sv.push((i, x));
        }
        ech.insert(&crate::qalg::sparse_from_terms(sv));
        Ok(())
    };
    for k in 0..=n - 2 {
        let l = n - 2 - k;
        let (fa, fb) = (factors(h, &dashed_first(k))?, factors(h, &dashed_last(l))?);
        for s in perm::shuffles(k, l) {
            for a in &fa {
                for b in &fb {
                    let (_, c, sign) = star_product(a, b, &s)?;
                    let x = if sign > 0 { Q::one() } else { -Q::one() };
                    push(vec![(c, x)], a.degree() + b.degree(), &mut ech)?;
                    stars += 1;
                }
            }
        }
    }
    for k in 2..n {
        let l = n - 1 - k;
        let (fa, fb) = (factors(h, &dashed_first(k - 1))?, factors(h, &dashed_last(l))?);
        for s in perm::shuffles(k - 1, l) {
            for a in &fa {
                for b in &fb {
                    let (_, v) = hash_product(h, a, b, &s)?;
                    push(v, a.degree() + b.degree() - 1, &mut ech)?;
                    hashes += 1;
                }
            }
        }
    }
    let rank = ech.rank();
    Ok(DecompositionCheck {
        signature: sig.to_string(),
        cells: cells.len(),
        star_products: stars,
        hash_products: hashes,
        rank,
        roundtrip_failures,
        degree_failures,
        pass: roundtrip_failures == 0
            && degree_failures == 0
            && stars + hashes == cells.len()
            && rank == cells.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hatop::HatOperad;
    use crate::operad::presets::{preset, Preset};
    use crate::operad::Operad;
    use std::sync::Arc;

    #[test]
    fn decomposition_is_bijective() {
        for p in Preset::ALL {
            let h = HatOperad::new(Arc::new(Operad::new(preset(p)).unwrap())).unwrap();
            for n in 2..=5 {
                let r = check_decomposition(&h, n).unwrap();
                assert!(r.pass, "{}: {r:?}", p.name());
            }
        }
    }
}
