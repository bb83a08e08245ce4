use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::One;
use serde::Serialize;

use super::quadratic_dual;
use crate::hatop::{hat_signatures, HatOperad};
use crate::operad::{Operad, OperadData, Presentation};
use crate::par;
use crate::qalg::{homology_dims, sparse_from_terms, BasedSpace, ComplexData, SparseMatrix, Q};
use crate::trees::{enumerate_trees, split_vertex, Color, Mask, Signature, Tree};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CobarOptions {
    /// Drops the orientation signs from the differential (mutation testing).
    pub ignore_orientation: bool,
}

/// Basis element: index into `trees` and one dual-basis index per vertex,
/// vertices in depth-first preorder.
pub type CobarCell = (usize, Vec<usize>);

/// The cobar complex of `P` in one signature: trees with vertices of arity
/// at least two, each vertex decorated by the dual of `P` at its local
/// signature, tensored with the determinant of the edges. The differential
/// splits a vertex in two and dualizes the partial composition.
#[derive(Clone, Debug)]
pub struct CobarComplex {
    pub signature: Signature,
    pub trees: Vec<Tree>,
    /// Cells grouped by number of internal edges.
    pub cells: Vec<Vec<CobarCell>>,
    index: Vec<HashMap<CobarCell, usize>>,
    pub complex: ComplexData,
}

impl CobarComplex {
    /// Cohomological degree of cells with `k` internal edges.
    pub fn degree(&self, k: usize) -> i32 {
        k as i32 - (self.signature.arity() as i32 - 2)
    }

    pub fn locate(&self, cell: &CobarCell) -> Option<(usize, usize)> {
        let k = self.trees[cell.0].internal_edges().len();
        self.index.get(k)?.get(cell).map(|&i| (k, i))
    }

    pub fn tree_index(&self, t: &Tree) -> Option<usize> {
        self.trees.iter().position(|x| x == t)
    }

    pub fn homology(&self) -> Result<BTreeMap<i32, usize>> {
        homology_dims(&self.complex)
    }
}

// for each decoration of v: the (a, b, coefficient) with <e_d, a ∘ b> != 0
type CoTable = Vec<Vec<(usize, usize, Q)>>;
type TableKey = (Signature, u32);

fn child_subsets(r: usize) -> impl Iterator<Item = u32> {
    (0u32..(1 << r)).filter(move |j| (2..r as u32).contains(&j.count_ones()))
}

fn subset_color(local: &Signature, j: u32) -> Color {
    let dashed = (0..local.arity())
        .filter(|&i| j & (1 << i) != 0 && local.inputs[i] == Color::Dashed)
        .count();
    if dashed == 0 {
        Color::Full
    } else {
        Color::Dashed
    }
}

fn cotable<P: OperadData + ?Sized>(p: &P, local: &Signature, j: u32) -> Result<CoTable> {
    let r = local.arity();
    let chosen: Vec<usize> = (0..r).filter(|&i| j & (1 << i) != 0).collect();
    let first = chosen[0];
    let u_sig = Signature::new(chosen.iter().map(|&i| local.inputs[i]).collect(), subset_color(local, j));
    // slots of v': unchosen children and the new edge, by smallest leaf
    let mut slots: Vec<Option<usize>> = Vec::new();
    for i in 0..r {
        if i == first {
            slots.push(None);
        } else if j & (1 << i) == 0 {
            slots.push(Some(i));
        }
    }
    let pos = slots.iter().position(|s| s.is_none()).expect("new edge") + 1;
    let w_sig = Signature::new(
        slots
            .iter()
            .map(|s| s.map(|i| local.inputs[i]).unwrap_or(u_sig.output))
            .collect(),
        local.output,
    );
    let mut orig = Vec::with_capacity(r);
    for s in &slots {
        match s {
            Some(i) => orig.push(*i),
            None => orig.extend_from_slice(&chosen),
        }
    }
    let (dw, du, dv) = (p.dim(&w_sig), p.dim(&u_sig), p.dim(local));
    let mut table: CoTable = vec![Vec::new(); dv];
    for a in 0..dw {
        for b in 0..du {
            let (sc, x) = p.compose(&w_sig, &[(a, Q::one())], pos, &u_sig, &[(b, Q::one())])?;
            for (d, c) in p.permute(&sc, &orig, &x) {
                table[d].push((a, b, c));
            }
        }
    }
    Ok(table)
}

fn cell_label<P: OperadData + ?Sized>(p: &P, sig: &Signature, t: &Tree, decos: &[usize]) -> String {
    let parts: Vec<String> = t
        .vertices()
        .iter()
        .zip(decos)
        .map(|(&v, &d)| p.label(&t.local_signature(sig, v), d))
        .collect();
    format!("{}[{}]", t.serialize(sig), parts.join(";"))
}

/// Builds the cobar complex of `p` in signature `sig` and checks that the
/// differential squares to zero.
pub fn cobar_complex<P: OperadData + ?Sized>(p: &P, sig: &Signature, opts: CobarOptions) -> Result<CobarComplex> {
    let n = sig.arity();
    if n < 2 {
        return Err(Error::Shape(format!("cobar complex needs at least two inputs, got {sig}")));
    }
    let trees: Vec<Tree> = enumerate_trees(sig, |a| a >= 2);
    let mut locals: Vec<Signature> = trees
        .iter()
        .flat_map(|t| t.vertices().into_iter().map(|v| t.local_signature(sig, v)).collect::<Vec<_>>())
        .collect();
    locals.sort();
    locals.dedup();
    p.prepare(&locals);

    let mut cells: Vec<Vec<CobarCell>> = vec![Vec::new(); n - 1];
    for (ti, t) in trees.iter().enumerate() {
        let dims: Vec<usize> = t.vertices().iter().map(|&v| p.dim(&t.local_signature(sig, v))).collect();
        if dims.contains(&0) {
            continue;
        }
        let k = t.internal_edges().len();
        for decos in crate::operad::product(&dims) {
            cells[k].push((ti, decos));
        }
    }
    let index: Vec<HashMap<CobarCell, usize>> = cells
        .iter()
        .map(|c| c.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect())
        .collect();
    let tree_pos: HashMap<&Tree, usize> = trees.iter().enumerate().map(|(i, t)| (t, i)).collect();

    let mut keys: Vec<TableKey> = Vec::new();
    for t in &trees {
        for v in t.vertices() {
            let local = t.local_signature(sig, v);
            for j in child_subsets(local.arity()) {
                keys.push((local.clone(), j));
            }
        }
    }
    keys.sort();
    keys.dedup();
    let built = par::map(&keys, |(local, j)| cotable(p, local, *j));
    let mut tables: HashMap<TableKey, Arc<CoTable>> = HashMap::new();
    for (key, table) in keys.into_iter().zip(built) {
        tables.insert(key, Arc::new(table?));
    }

    let mut differentials = Vec::with_capacity(n.saturating_sub(2));
    for k in 0..n - 2 {
        let cols = par::map(&cells[k], |(ti, decos)| -> Result<Vec<(usize, Q)>> {
            let t = &trees[*ti];
            let verts = t.vertices();
            let deco_of: HashMap<Mask, usize> = verts.iter().copied().zip(decos.iter().copied()).collect();
            let o = t.canonical_edges();
            let mut out = Vec::new();
            for (vi, &v) in verts.iter().enumerate() {
                let kids = t.children(v);
                let local = t.local_signature(sig, v);
                for j in child_subsets(kids.len()) {
                    let s: Mask = (0..kids.len()).filter(|&i| j & (1 << i) != 0).fold(0, |a, i| a | kids[i]);
                    if t.edge_color(sig, s).is_none() {
                        continue;
                    }
                    let entries = &tables[&(local.clone(), j)][decos[vi]];
                    if entries.is_empty() {
                        continue;
                    }
                    let (t2, _, sign) = split_vertex(t, sig, v, s, &o)?;
                    let sign = if opts.ignore_orientation { 1 } else { sign };
                    let Some(&t2i) = tree_pos.get(&t2) else { continue };
                    let verts2 = t2.vertices();
                    for (a, b, c) in entries {
                        let d2: Vec<usize> = verts2
                            .iter()
                            .map(|&w| {
                                if w == s {
                                    *b
                                } else if w == v {
                                    *a
                                } else {
                                    deco_of[&w]
                                }
                            })
                            .collect();
                        if let Some(&row) = index[k + 1].get(&(t2i, d2)) {
                            out.push((row, if sign > 0 { c.clone() } else { -c.clone() }));
                        }
                    }
                }
            }
            Ok(sparse_from_terms(out))
        });
        let cols: Vec<Vec<(usize, Q)>> = cols.into_iter().collect::<Result<_>>()?;
        let mut m = SparseMatrix::zeros(cells[k + 1].len(), cells[k].len());
        m.columns = cols;
        differentials.push(m);
    }
    let spaces = cells
        .iter()
        .map(|c| BasedSpace::new(c.iter().map(|(ti, d)| cell_label(p, sig, &trees[*ti], d)).collect()))
        .collect();
    let complex = ComplexData::new(-(n as i32 - 2), spaces, differentials)?;
    complex
        .check_square_zero()
        .map_err(|_| Error::CobarSquare(sig.to_string()))?;
    Ok(CobarComplex {
        signature: sig.clone(),
        trees,
        cells,
        index,
        complex,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct KoszulEntry {
    pub signature: String,
    pub degrees: Vec<i32>,
    pub dims: Vec<usize>,
    pub homology: Vec<usize>,
    pub target: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct KoszulReport {
    pub operad: String,
    pub dual: String,
    pub hat: bool,
    pub max_arity: usize,
    pub entries: Vec<KoszulEntry>,
    pub pass: bool,
}

fn entry<P: OperadData + ?Sized>(p: &P, sig: &Signature, target: usize, opts: CobarOptions) -> Result<KoszulEntry> {
    let c = cobar_complex(p, sig, opts)?;
    let h = c.homology()?;
    let degrees = c.complex.degrees();
    let homology: Vec<usize> = degrees.iter().map(|d| h[d]).collect();
    let pass = degrees
        .iter()
        .zip(&homology)
        .all(|(&d, &x)| x == if d == 0 { target } else { 0 });
    Ok(KoszulEntry {
        signature: sig.to_string(),
        degrees,
        dims: c.complex.dims(),
        homology,
        target,
        pass,
    })
}

/// Computes the cobar complex of the quadratic dual of `p` in every arity
/// from 2 to `max_arity` and compares its cohomology with `p`: it must be
/// concentrated in degree 0 with the dimension of `p`. With `hat`, the same
/// is done for the colored operads built from the dual and from `p`.
pub fn koszul_report(p: &Presentation, max_arity: usize, hat: bool, opts: CobarOptions) -> Result<KoszulReport> {
    let dual = quadratic_dual(p)?.presentation;
    let op = Arc::new(Operad::new(p.clone())?);
    let dual_op = Arc::new(Operad::new(dual.clone())?);
    let entries: Vec<KoszulEntry> = if hat {
        let h = HatOperad::new(op)?;
        let hd = HatOperad::new(dual_op)?;
        let sigs: Vec<Signature> = (2..=max_arity).flat_map(hat_signatures).collect();
        par::map(&sigs, |s| entry(&hd, s, h.dim(s), opts))
            .into_iter()
            .collect::<Result<_>>()?
    } else {
        let sigs: Vec<Signature> = (2..=max_arity).map(Signature::uncolored).collect();
        par::map(&sigs, |s| entry(dual_op.as_ref(), s, op.dim(s), opts))
            .into_iter()
            .collect::<Result<_>>()?
    };
    Ok(KoszulReport {
        operad: p.name.clone(),
        dual: dual.name.clone(),
        hat,
        max_arity,
        pass: entries.iter().all(|e| e.pass),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::presets::{preset, Preset};

    fn dual_op(p: Preset) -> Operad {
        Operad::new(quadratic_dual(&preset(p)).unwrap().presentation).unwrap()
    }

    #[test]
    fn small_complexes() {
        let lie = Operad::new(preset(Preset::Lie)).unwrap();
        let c = cobar_complex(&lie, &Signature::uncolored(3), CobarOptions::default()).unwrap();
        assert_eq!(c.complex.dims(), vec![2, 3]);
        let h = c.homology().unwrap();
        assert_eq!(h[&0], 1);
        assert_eq!(h[&-1], 0);
        let assoc = Operad::new(preset(Preset::Assoc)).unwrap();
        let c = cobar_complex(&assoc, &Signature::uncolored(3), CobarOptions::default()).unwrap();
        assert_eq!(c.complex.dims(), vec![6, 12]);
        assert_eq!(c.homology().unwrap()[&0], 6);
    }

    #[test]
    fn square_zero_in_arity_four() {
        for p in Preset::ALL {
            cobar_complex(&dual_op(p), &Signature::uncolored(4), CobarOptions::default()).unwrap();
        }
    }

    #[test]
    fn presets_are_koszul() {
        for p in Preset::ALL {
            let r = koszul_report(&preset(p), 4, false, CobarOptions::default()).unwrap();
            assert!(r.pass, "{:?}", r.entries);
        }
    }

    #[test]
    fn dropping_signs_breaks_the_complex() {
        let e = cobar_complex(
            &dual_op(Preset::Comm),
            &Signature::uncolored(4),
            CobarOptions { ignore_orientation: true },
        );
        assert!(matches!(e, Err(Error::CobarSquare(_))));
    }
}

#[cfg(test)]
mod hat_tests {
    use super::*;
    use crate::operad::presets::{preset, Preset};

    #[test]
    fn hat_duals_are_koszul() {
        for p in Preset::ALL {
            let r = koszul_report(&preset(p), 4, true, CobarOptions::default()).unwrap();
            assert!(r.pass, "{}", p.name());
        }
    }
}
