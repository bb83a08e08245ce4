//! Quadratic duals, cobar complexes over decorated trees, Koszulness
//! reports, and the star/hash decomposition of empty-output cobar trees.

mod cobar;
mod starhash;

pub use starhash::{
    check_decomposition, decompose_star_hash, hash_product, outer_signature, recompose,
    star_product, Cell, DecompositionCheck, Factor, Factorization, ProductKind,
};
pub use cobar::{
    cobar_complex, koszul_report, CobarComplex, CobarOptions, KoszulEntry, KoszulReport,
};

use std::collections::BTreeMap;

use num_traits::One;
use serde::Serialize;

use crate::operad::{FreeComponent, GenBlock, GeneratorSet, Presentation};
use crate::qalg::{orthogonal_complement, sparse_from_dense, sparse_to_dense, RatMatrix, SparseVec, Q};
use crate::trees::{Mask, Signature};
use crate::{perm, Result};

/// Sign of a three-leaf binary tree in the duality pairing: with upper pair
/// `{i, j}` (`i < j`) and lone leaf `k`, the sign of `(i, j, k)` as a
/// permutation, negated when `k < i`.
pub fn pairing_sign(cluster: Mask) -> i32 {
    let leaves: Vec<usize> = (0..3).filter(|b| cluster & (1 << b) != 0).collect();
    let k = (0..3).find(|b| cluster & (1 << b) == 0).expect("three leaves");
    let s = perm::sign(&[leaves[0], leaves[1], k]);
    if k < leaves[0] {
        -s
    } else {
        s
    }
}

/// Diagonal pairing matrix between `F(E)(sig)` and `F(E^∨)(sig)` for a
/// three-input signature.
pub fn pairing_matrix(fc: &FreeComponent) -> RatMatrix {
    let mut m = RatMatrix::zeros(fc.dim(), fc.dim());
    for (i, (ti, _)) in fc.basis.iter().enumerate() {
        let c = fc.trees[*ti].internal_edges()[0];
        let s = pairing_sign(c);
        m.set(i, i, if s > 0 { Q::one() } else { -Q::one() });
    }
    m
}

/// The dual generators: same block dimensions, swap action `-T^t` (dual
/// tensored with the sign representation).
pub fn dual_generators(gens: &GeneratorSet) -> GeneratorSet {
    let blocks = gens
        .blocks
        .iter()
        .map(|(&(x, y, z), _)| {
            let partner = &gens.blocks[&(y, x, z)];
            let swap = partner.swap.transpose().scale(&-Q::one());
            ((x, y, z), GenBlock { dim: partner.dim, swap })
        })
        .collect();
    GeneratorSet {
        blocks,
        cyclic: gens.cyclic,
    }
}

#[derive(Clone, Debug)]
pub struct DualPresentation {
    pub presentation: Presentation,
    /// `(signature, dim R, dim R^⊥, ambient dim)` per three-input block.
    pub blocks: Vec<(Signature, usize, usize, usize)>,
}

/// Line of [`DualPresentation::summary`].
#[derive(Clone, Debug, Serialize)]
pub struct DualBlock {
    pub signature: String,
    pub relations: usize,
    pub dual_relations: usize,
    pub ambient: usize,
}

impl DualPresentation {
    pub fn summary(&self) -> Vec<DualBlock> {
        self.blocks
            .iter()
            .map(|(s, r, rp, a)| DualBlock {
                signature: s.to_string(),
                relations: *r,
                dual_relations: *rp,
                ambient: *a,
            })
            .collect()
    }
}

/// Generators `E^∨` and relations `R^⊥`, block by block over the
/// three-input colorings.
pub fn quadratic_dual(p: &Presentation) -> Result<DualPresentation> {
    let dgens = dual_generators(&p.gens);
    let mut relations = BTreeMap::new();
    let mut blocks = Vec::new();
    for sig in p.ternary_signatures() {
        let fc = FreeComponent::new(&p.gens, &sig);
        let rels: Vec<Vec<Q>> = p
            .relations
            .get(&sig)
            .into_iter()
            .flatten()
            .map(|r| sparse_to_dense(r, fc.dim()))
            .collect();
        let rank = crate::qalg::rank_of_rows(&rels);
        let perp = orthogonal_complement(&rels, fc.dim(), &pairing_matrix(&fc))?;
        let perp: Vec<SparseVec> = perp.iter().map(|v| sparse_from_dense(v)).collect();
        blocks.push((sig.clone(), rank, perp.len(), fc.dim()));
        if !perp.is_empty() {
            relations.insert(sig, perp);
        }
    }
    let name = match p.name.strip_suffix("^!") {
        Some(base) => base.to_string(),
        None => format!("{}^!", p.name),
    };
    let presentation = Presentation {
        name,
        gens: dgens,
        relations,
    };
    presentation.validate()?;
    Ok(DualPresentation {
        presentation,
        blocks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::presets::{expected_dim, preset, Preset};
    use crate::operad::Operad;

    #[test]
    fn pairing_signs_by_shape() {
        assert_eq!(pairing_sign(0b011), 1);
        assert_eq!(pairing_sign(0b101), -1);
        assert_eq!(pairing_sign(0b110), -1);
    }

    fn dims(p: &Presentation, max: usize) -> Vec<usize> {
        let op = Operad::new(p.clone()).unwrap();
        (1..=max).map(|n| op.dim(&Signature::uncolored(n))).collect()
    }

    #[test]
    fn known_duals() {
        let lie: Vec<usize> = (1..=4).map(|n| expected_dim(Preset::Lie, n)).collect();
        let assoc: Vec<usize> = (1..=4).map(|n| expected_dim(Preset::Assoc, n)).collect();
        let comm_dual = quadratic_dual(&preset(Preset::Comm)).unwrap().presentation;
        assert_eq!(dims(&comm_dual, 4), lie);
        let lie_dual = quadratic_dual(&preset(Preset::Lie)).unwrap().presentation;
        assert_eq!(dims(&lie_dual, 4), vec![1; 4]);
        let assoc_dual = quadratic_dual(&preset(Preset::Assoc)).unwrap().presentation;
        assert_eq!(dims(&assoc_dual, 4), assoc);
    }

    #[test]
    fn complement_dimensions() {
        for p in Preset::ALL {
            let d = quadratic_dual(&preset(p)).unwrap();
            for (_, r, rp, a) in &d.blocks {
                assert_eq!(r + rp, *a);
            }
        }
    }

    #[test]
    fn double_dual_dims() {
        for p in Preset::ALL {
            let pres = preset(p);
            let dd = quadratic_dual(&quadratic_dual(&pres).unwrap().presentation)
                .unwrap()
                .presentation;
            assert_eq!(dd.name, pres.name);
            assert_eq!(dims(&dd, 4), dims(&pres, 4));
        }
    }
}
