use std::sync::Arc;

use num_traits::{One, Zero};

use super::{add_into, Alphabet, Element, FreeAlgebra, Generators, RandomInstance, StructureData};
use crate::operad::Operad;
use crate::qalg::Q;

/// A finite-dimensional graded algebra with an invariant inner product.
#[derive(Clone, Debug)]
pub struct FrobeniusAlgebra {
    pub degrees: Vec<i32>,
    /// `product[a][b]` is `e_a e_b` in the basis.
    pub product: Vec<Vec<Vec<(usize, Q)>>>,
    pub pairing: Vec<Vec<Q>>,
}

impl FrobeniusAlgebra {
    /// `k[x]/x²` with `⟨1, x⟩ = 1`.
    pub fn dual_numbers() -> Self {
        let one = Q::one();
        FrobeniusAlgebra {
            degrees: vec![0, 0],
            product: vec![
                vec![vec![(0, one.clone())], vec![(1, one.clone())]],
                vec![vec![(1, one.clone())], vec![]],
            ],
            pairing: vec![vec![Q::zero(), one.clone()], vec![one, Q::zero()]],
        }
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    /// `⟨ab, c⟩ = ⟨a, bc⟩` on the basis.
    pub fn is_invariant(&self) -> bool {
        let n = self.dim();
        let pair = |x: &[(usize, Q)], c: usize| -> Q { x.iter().map(|(i, q)| q * &self.pairing[*i][c]).sum() };
        let pair_left = |a: usize, x: &[(usize, Q)]| -> Q { x.iter().map(|(i, q)| q * &self.pairing[a][*i]).sum() };
        (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| pair(&self.product[a][b], c) == pair_left(a, &self.product[b][c]))))
    }
}

/// Letters `e_a^*[1]` for the algebra, `m_a = e_a^*[1]` for the module
/// `M = A` and `n_a = e_a[1]` for its dual. `d` and `g` are dual to the
/// product, `f` is the inner product.
pub fn frobenius_instance(op: Arc<Operad>, a: &FrobeniusAlgebra, max_order: usize) -> RandomInstance {
    let shifted: Vec<i32> = a.degrees.iter().map(|d| 1 - d).collect();
    let dual: Vec<i32> = a.degrees.iter().map(|d| 1 + d).collect();
    let mut alpha = Alphabet::new();
    let v = alpha.push(false, &shifted, "e");
    let w = alpha.push(true, &shifted, "m");
    let w_dual = alpha.push(true, &dual, "n");
    let alg = FreeAlgebra::new(op, alpha, max_order);
    let n = a.dim();
    let mut d = Generators::new();
    let mut g = Generators::new();
    for x in 0..n {
        for y in 0..n {
            for (c, q) in &a.product[x][y] {
                let unit = vec![(0, q.clone())];
                add_into(d.entry(v[*c]).or_default(), &alg.normalize(vec![(vec![v[x], v[y]], unit.clone())]), &Q::one());
                let gc = g.entry(w[*c]).or_default();
                add_into(gc, &alg.normalize(vec![(vec![v[x], w[y]], unit.clone())]), &Q::one());
                add_into(gc, &alg.normalize(vec![(vec![w[x], v[y]], unit)]), &Q::one());
            }
        }
    }
    d.retain(|_, x| !x.is_empty());
    g.retain(|_, x| !x.is_empty());
    let mut f = Generators::new();
    for x in 0..n {
        let mut e = Element::new();
        for y in 0..n {
            if !a.pairing[x][y].is_zero() {
                add_into(&mut e, &alg.generator(w[y]), &a.pairing[x][y]);
            }
        }
        f.insert(w_dual[x], e);
    }
    RandomInstance {
        data: StructureData { v, w, w_dual, d, g, f },
        alg,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebras::{check_symmetry_involution, check_structure, DualSign};
    use crate::duality::quadratic_dual;
    use crate::operad::presets::{preset, Preset};

    fn assoc_dual() -> Arc<Operad> {
        Arc::new(Operad::new(quadratic_dual(&preset(Preset::Assoc)).unwrap().presentation).unwrap())
    }

    #[test]
    fn dual_numbers_pass() {
        let a = FrobeniusAlgebra::dual_numbers();
        assert!(a.is_invariant());
        let inst = frobenius_instance(assoc_dual(), &a, 3);
        let r = check_structure(&inst.alg, &inst.data, DualSign::Shifted);
        assert!(r.pass, "{:?}", r.first_failure);
        assert!(check_symmetry_involution(&inst.alg, &inst.data));
    }

    #[test]
    fn unshifted_sign_is_detected() {
        let inst = frobenius_instance(assoc_dual(), &FrobeniusAlgebra::dual_numbers(), 3);
        let r = check_structure(&inst.alg, &inst.data, DualSign::Unshifted);
        assert!(!r.pass);
        assert_eq!(r.first_failure, Some(("symmetry".to_string(), 1)));
    }

    #[test]
    fn zero_data_passes() {
        let mut inst = frobenius_instance(assoc_dual(), &FrobeniusAlgebra::dual_numbers(), 3);
        inst.data.d.clear();
        inst.data.g.clear();
        inst.data.f.clear();
        assert!(check_structure(&inst.alg, &inst.data, DualSign::Shifted).pass);
    }
}
