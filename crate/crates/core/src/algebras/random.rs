use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{add_into, difference, on_generators, truncate, Alphabet, Element, FreeAlgebra, Generators, StructureData};
use crate::operad::Operad;
use crate::qalg::Q;

#[derive(Clone, Debug)]
pub struct RandomSpec {
    pub operad: Arc<Operad>,
    pub max_order: usize,
    /// Bound on `dim V + dim W`.
    pub max_total_dim: usize,
    pub seed: u64,
}

pub struct RandomInstance {
    pub alg: FreeAlgebra,
    pub data: StructureData,
}

fn small(rng: &mut ChaCha8Rng) -> Q {
    let x: i64 = rng.gen_range(-2..=2);
    Q::from_integer(x.into())
}

// letters in pairs (x, y) with |y| = |x| + 1, plus an optional loose
// letter; the base differential is x -> y
fn paired_degrees(n: usize, rng: &mut ChaCha8Rng) -> Vec<i32> {
    let mut out = Vec::new();
    while out.len() + 1 < n {
        let d = rng.gen_range(-1..=0);
        out.extend([d, d + 1]);
    }
    if out.len() < n {
        out.push(rng.gen_range(-1..=1));
    }
    out
}

fn pairing_differential(alg: &FreeAlgebra, letters: &[usize]) -> Generators {
    letters
        .chunks(2)
        .filter(|c| c.len() == 2)
        .map(|c| (c[0], alg.generator(c[1])))
        .collect()
}

/// A random element of the given degree with small integer coefficients,
/// over the words accepted by `keep`.
pub fn random_element(
    alg: &FreeAlgebra,
    v: &[usize],
    w: Option<&[usize]>,
    degree: i32,
    keep: impl Fn(&[usize]) -> bool,
    rng: &mut ChaCha8Rng,
) -> Element {
    let mut e = Element::new();
    for n in 1..=alg.max_order {
        for word in alg.words(n, v, w) {
            if alg.word_degree(&word) != degree || !keep(&word) || rng.gen_bool(0.5) {
                continue;
            }
            let q: Vec<(usize, Q)> = (0..alg.pdim(n)).map(|b| (b, small(rng))).filter(|(_, c)| *c != Q::from_integer(0.into())).collect();
            add_into(&mut e, &alg.normalize(vec![(word, q)]), &Q::from_integer(1.into()));
        }
    }
    e
}

// degree-zero unipotent substitution: x -> x + (lower letters) + higher order
fn random_gauge(alg: &FreeAlgebra, v: &[usize], w: &[usize], rng: &mut ChaCha8Rng) -> Generators {
    let mut out = Generators::new();
    for (&x, module) in v.iter().map(|x| (x, false)).chain(w.iter().map(|x| (x, true))) {
        let deg = alg.alphabet.degrees[x];
        let mut e = alg.generator(x);
        let r = random_element(alg, v, module.then_some(w), deg, |word| word.len() > 1 || word[0] < x, rng);
        add_into(&mut e, &r, &Q::from_integer(1.into()));
        out.insert(x, e);
    }
    out
}

fn inverse_on(alg: &FreeAlgebra, phi: &Generators, x: &Element) -> Element {
    // φ^{-1} = Σ (-N)^k with N = φ - id, nilpotent on the truncation
    let mut acc = x.clone();
    let mut term = x.clone();
    for _ in 0..64 {
        let n = truncate(&difference(&alg.apply_morphism(phi, &term), &term), alg.max_order);
        if n.is_empty() {
            return acc;
        }
        term = super::scaled(&n, &-Q::from_integer(1.into()));
        add_into(&mut acc, &term, &Q::from_integer(1.into()));
    }
    panic!("gauge transformation is not unipotent");
}

/// A structure `(d, g)` with `d² = 0` and `g² = 0` through the truncation:
/// a square-zero linear part conjugated by a random unipotent
/// automorphism of the free algebra and module. `f` is left empty.
pub fn random_gauge_instance(spec: &RandomSpec) -> RandomInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let total = rng.gen_range(3..=spec.max_total_dim.max(3));
    let wdim = rng.gen_range(1..=(total - 2).clamp(1, 2));
    let vdim = total - wdim;
    let vdeg = paired_degrees(vdim, &mut rng);
    let wdeg = paired_degrees(wdim, &mut rng);
    let mut a = Alphabet::new();
    let v = a.push(false, &vdeg, "a");
    let w = a.push(true, &wdeg, "m");
    let dual_deg: Vec<i32> = wdeg.iter().map(|d| 2 - d).collect();
    let w_dual = a.push(true, &dual_deg, "n");
    let alg = FreeAlgebra::new(spec.operad.clone(), a, spec.max_order);

    let d0 = pairing_differential(&alg, &v);
    let g0 = pairing_differential(&alg, &w);
    let mut base = d0.clone();
    base.extend(g0);
    let phi = random_gauge(&alg, &v, &w, &mut rng);
    let conj = |x: &Element| -> Element {
        let y = inverse_on(&alg, &phi, x);
        let z = truncate(&alg.apply_derivation(&base, &y), alg.max_order);
        truncate(&alg.apply_morphism(&phi, &z), alg.max_order)
    };
    let d = on_generators(&alg, &v, &conj);
    let g = on_generators(&alg, &w, &conj);
    RandomInstance {
        data: StructureData {
            v,
            w,
            w_dual,
            d,
            g,
            f: Generators::new(),
        },
        alg,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebras::{check_dual_positions, induced_dual_derivation, square_residual};
    use crate::duality::quadratic_dual;
    use crate::operad::presets::{preset, Preset};

    fn dual_of(p: Preset) -> Arc<Operad> {
        Arc::new(Operad::new(quadratic_dual(&preset(p)).unwrap().presentation).unwrap())
    }

    #[test]
    fn induced_dual_squares_to_zero() {
        let mut nontrivial = 0;
        for p in [Preset::Assoc, Preset::Comm, Preset::Lie] {
            let op = dual_of(p);
            for seed in 0..24 {
                let inst = random_gauge_instance(&RandomSpec {
                    operad: op.clone(),
                    max_order: 3,
                    max_total_dim: 5,
                    seed,
                });
                let (alg, s) = (&inst.alg, &inst.data);
                let mut dg = s.d.clone();
                dg.extend(s.g.clone());
                assert!(square_residual(alg, &s.d, &s.v).is_empty(), "{p:?} {seed} d");
                assert!(square_residual(alg, &dg, &s.w).is_empty(), "{p:?} {seed} g");
                let h = induced_dual_derivation(alg, &s.v, &s.w, &s.w_dual, &s.g);
                nontrivial += usize::from(!h.is_empty());
                assert_eq!(check_dual_positions(alg, &s.v, &s.w, &s.w_dual, &s.g, &h), 0, "{p:?} {seed} positions");
                let mut dh = s.d.clone();
                dh.extend(h);
                assert!(square_residual(alg, &dh, &s.w_dual).is_empty(), "{p:?} {seed} h");
            }
        }
        assert!(nontrivial >= 20, "{nontrivial}");
    }

    #[test]
    fn double_dual_recovers_g() {
        let op = dual_of(Preset::Assoc);
        for seed in 0..6 {
            let inst = random_gauge_instance(&RandomSpec { operad: op.clone(), max_order: 3, max_total_dim: 4, seed });
            let (alg, s) = (&inst.alg, &inst.data);
            let h = induced_dual_derivation(alg, &s.v, &s.w, &s.w_dual, &s.g);
            let back = induced_dual_derivation(alg, &s.v, &s.w_dual, &s.w, &h);
            // W** = W with the sign (-1)^{|m|}
            let expected: Generators = s
                .g
                .iter()
                .map(|(&m2, x)| {
                    let y = x
                        .iter()
                        .map(|(w, v)| {
                            let odd = alg.alphabet.odd(m2) != alg.alphabet.odd(*w.last().unwrap());
                            (w.clone(), if odd { v.iter().map(|(i, c)| (*i, -c)).collect() } else { v.clone() })
                        })
                        .collect();
                    (m2, y)
                })
                .collect();
            assert_eq!(back, expected, "{seed}");
        }
    }

    #[test]
    fn zero_g_gives_zero_h() {
        let inst = random_gauge_instance(&RandomSpec { operad: dual_of(Preset::Lie), max_order: 3, max_total_dim: 4, seed: 3 });
        let s = &inst.data;
        assert!(induced_dual_derivation(&inst.alg, &s.v, &s.w, &s.w_dual, &Generators::new()).is_empty());
    }

    #[test]
    fn symmetry_transform_is_an_involution() {
        use crate::algebras::{check_symmetry_involution, StructureData};
        let mut nontrivial = 0;
        for p in [Preset::Assoc, Preset::Comm, Preset::Lie] {
            let op = dual_of(p);
            for seed in 0..6 {
                let mut inst = random_gauge_instance(&RandomSpec { operad: op.clone(), max_order: 3, max_total_dim: 5, seed });
                let mut rng = ChaCha8Rng::seed_from_u64(seed + 100);
                let StructureData { v, w, w_dual, .. } = inst.data.clone();
                for &n in &w_dual {
                    let deg = inst.alg.alphabet.degrees[n];
                    let e = random_element(&inst.alg, &v, Some(&w), deg, |_| true, &mut rng);
                    inst.data.f.insert(n, e);
                }
                nontrivial += usize::from(inst.data.f.values().any(|x| x.keys().any(|k| k.len() > 1)));
                assert!(check_symmetry_involution(&inst.alg, &inst.data), "{p:?} {seed}");
            }
        }
        assert!(nontrivial >= 6, "{nontrivial}");
    }
}
