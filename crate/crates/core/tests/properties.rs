use std::sync::Arc;

use num_traits::One;
use opkit::algebras::{
    check_symmetry_involution, induced_dual_derivation, random_element, random_gauge_instance, square_residual, Alphabet, Element, FreeAlgebra,
    Generators, RandomSpec,
};
use opkit::duality::quadratic_dual;
use opkit::operad::presets::{preset, Preset};
use opkit::operad::Operad;
use opkit::pdspace::{verify, BuildOptions, PdAlgebra, PdFile, SimplicialComplex};
use opkit::perm;
use opkit::qalg::{format_q, parse_q, sparse_from_terms, Solver, SparseVec, Q};
use opkit::trees::{enumerate_trees, Signature};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn dual_of(p: Preset) -> Arc<Operad> {
    Arc::new(Operad::new(quadratic_dual(&preset(p)).unwrap().presentation).unwrap())
}

fn any_preset() -> impl Strategy<Value = Preset> {
    prop_oneof![Just(Preset::Assoc), Just(Preset::Comm), Just(Preset::Lie)]
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

fn apply(m: &[SparseVec], x: &[(usize, Q)]) -> SparseVec {
    let mut out = Vec::new();
    for (j, c) in x {
        out.extend(m[*j].iter().map(|(i, a)| (*i, a * c)));
    }
    sparse_from_terms(out)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rationals_round_trip(p in -10_000i64..10_000, q in 1i64..10_000) {
        let x = Q::new(p.into(), q.into());
        prop_assert_eq!(parse_q(&format_q(&x)).unwrap(), x);
    }

    #[test]
    fn permutation_sign_is_multiplicative((a, b) in (1usize..7).prop_flat_map(|n| (permutation(n), permutation(n)))) {
        let ab = perm::compose(&a, &b);
        prop_assert_eq!(perm::sign(&ab), perm::sign(&a) * perm::sign(&b));
        prop_assert_eq!(perm::compose(&perm::inverse(&a), &a), perm::identity(a.len()));
    }

    #[test]
    fn solver_finds_preimages(cols in prop::collection::vec(prop::collection::vec((0usize..6, -3i64..4), 0..4), 1..6),
                              x in prop::collection::vec(-3i64..4, 6)) {
        let m: Vec<SparseVec> = cols.iter().map(|c| sparse_from_terms(c.iter().map(|(i, v)| (*i, Q::from_integer((*v).into()))))).collect();
        let x: SparseVec = sparse_from_terms(x.iter().take(m.len()).enumerate().map(|(j, v)| (j, Q::from_integer((*v).into()))));
        let target = apply(&m, &x);
        let mut s = Solver::new(6);
        for c in &m {
            s.push(c);
        }
        let y = s.solve(&target).expect("target is in the span");
        prop_assert_eq!(apply(&m, &y), target);
    }

    #[test]
    fn relabelled_trees_stay_in_the_enumeration(n in 3usize..6, seed in any::<u64>()) {
        let sig = Signature::uncolored(n);
        let trees = enumerate_trees(&sig, |_| true);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = {
            use rand::seq::SliceRandom;
            let mut p: Vec<usize> = (0..n).collect();
            p.shuffle(&mut rng);
            p
        };
        for t in &trees {
            let r = t.relabel(&p);
            prop_assert_eq!(r.internal_edges().len(), t.internal_edges().len());
            prop_assert!(trees.contains(&r));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn square_of_odd_derivation_is_a_derivation(p in any_preset(), seed in any::<u64>()) {
        let mut a = Alphabet::new();
        let x = a.push(false, &[0, 1, 1], "x");
        let alg = FreeAlgebra::new(dual_of(p), a, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens: Generators = x
            .iter()
            .map(|&l| (l, random_element(&alg, &x, None, alg.alphabet.degrees[l] + 1, |w| w.len() <= 2, &mut rng)))
            .collect();
        let squared: Generators = gens.iter().map(|(&l, e)| (l, alg.apply_derivation(&gens, e))).collect();
        let e: Element = random_element(&alg, &x, None, 1, |w| w.len() <= 2, &mut rng);
        let twice = alg.apply_derivation(&gens, &alg.apply_derivation(&gens, &e));
        let once = alg.apply_derivation(&squared, &e);
        let mut diff = twice.clone();
        opkit::algebras::add_into(&mut diff, &once, &-Q::one());
        let low: Vec<_> = diff.keys().filter(|w| w.len() <= 3).collect();
        prop_assert!(low.is_empty(), "{:?}", low);
    }

    #[test]
    fn induced_dual_squares_to_zero(p in any_preset(), seed in any::<u64>()) {
        let inst = random_gauge_instance(&RandomSpec { operad: dual_of(p), max_order: 3, max_total_dim: 6, seed });
        let (alg, s) = (&inst.alg, &inst.data);
        let h = induced_dual_derivation(alg, &s.v, &s.w, &s.w_dual, &s.g);
        let mut dh = s.d.clone();
        dh.extend(h);
        prop_assert!(square_residual(alg, &dh, &s.w_dual).is_empty());
    }

    #[test]
    fn symmetry_transform_is_an_involution(p in any_preset(), seed in any::<u64>()) {
        let mut inst = random_gauge_instance(&RandomSpec { operad: dual_of(p), max_order: 3, max_total_dim: 5, seed });
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let (v, w) = (inst.data.v.clone(), inst.data.w.clone());
        for n in inst.data.w_dual.clone() {
            let deg = inst.alg.alphabet.degrees[n];
            let e = random_element(&inst.alg, &v, Some(&w), deg, |_| true, &mut rng);
            inst.data.f.insert(n, e);
        }
        prop_assert!(check_symmetry_involution(&inst.alg, &inst.data));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn polygons_satisfy_every_identity(k in 3usize..6, relabel in (3usize..6).prop_flat_map(permutation)) {
        let n = k.max(relabel.len());
        let label = |i: usize| if i < relabel.len() { relabel[i] } else { i };
        let edges: Vec<Vec<usize>> = (0..k).map(|i| vec![label(i), label((i + 1) % k)]).collect();
        let c = SimplicialComplex::new(n, &edges).unwrap();
        prop_assume!(c.dims()[0] == k);
        let built = PdAlgebra::new(c, 3).build(&BuildOptions::new(3)).unwrap();
        let r = verify(&PdFile::from_structure(&built)).unwrap();
        prop_assert!(r.pass, "{:?}", r.first_failure());
    }
}
