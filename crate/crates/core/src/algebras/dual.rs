use std::collections::BTreeMap;

use serde::Serialize;

use super::{add_into, difference, truncate, Element, FreeAlgebra, Generators, Word};
use crate::qalg::{SparseVec, Q};

/// Sign rule for the symmetry of an inner product.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum DualSign {
    #[default]
    Shifted,
    /// Uses the unshifted degrees (mutation testing).
    Unshifted,
}

/// `(d, g, f)` on an alphabet split into algebra letters `v`, module
/// letters `w` (where `g` acts) and their duals `w_dual` (where the induced
/// `h` acts). `f` sends `w_dual` letters to module elements over `w`.
#[derive(Clone, Debug, Default)]
pub struct StructureData {
    pub v: Vec<usize>,
    pub w: Vec<usize>,
    pub w_dual: Vec<usize>,
    pub d: Generators,
    pub g: Generators,
    pub f: Generators,
}

impl StructureData {
    fn over_d(&self, m: &Generators) -> Generators {
        let mut all = self.d.clone();
        all.extend(m.iter().map(|(k, v)| (*k, v.clone())));
        all
    }
}

fn parity(alg: &FreeAlgebra, letters: &[usize]) -> usize {
    letters.iter().filter(|&&l| alg.alphabet.odd(l)).count() % 2
}

fn signed(v: SparseVec, negative: bool) -> SparseVec {
    if negative {
        v.into_iter().map(|(i, c)| (i, -c)).collect()
    } else {
        v
    }
}

/// Value of the induced dual derivation on `m1*` at the tuple
/// `(a_1, …, a_k, m2, a_{k+1}, …, a_{k+l})`: the value of `g(m2)` on
/// `(a_{k+1}, …, a_{k+l}, m1, a_1, …, a_k)`, relabelled so that `m1`
/// becomes the output, with the Koszul sign of exchanging the two groups
/// and the sign `-(-1)^{|m1|}` of the pairing.
/// `src` and `dst` are the module letters of `g` and of the dual.
fn dual_value(
    alg: &FreeAlgebra,
    g: &Generators,
    m1: usize,
    m1_dual: usize,
    m2: usize,
    a: &[usize],
    k: usize,
) -> SparseVec {
    let Some(gm2) = g.get(&m2) else { return Vec::new() };
    let n = a.len() + 1;
    let mut u: Vec<usize> = a[k..].to_vec();
    u.push(m1);
    u.extend_from_slice(&a[..k]);
    let val = alg.eval(gm2, &u);
    if val.is_empty() {
        return val;
    }
    let rotated = alg.rotate(n, k + 1, &val);
    let first = (parity(alg, &[m1_dual]) + parity(alg, &a[..k])) % 2;
    let second = (parity(alg, &[m2]) + parity(alg, &a[k..])) % 2;
    let e = first * second + parity(alg, &[m1]) + 1;
    signed(rotated, e % 2 == 1)
}

/// The derivation on the dual module induced by `g` through the cyclic
/// structure. `w[i]` and `w_dual[i]` are dual letters; `v` are the algebra
/// letters.
pub fn induced_dual_derivation(
    alg: &FreeAlgebra,
    v: &[usize],
    w: &[usize],
    w_dual: &[usize],
    g: &Generators,
) -> Generators {
    let mut h = Generators::new();
    for (i, &m1_dual) in w_dual.iter().enumerate() {
        let m1 = w[i];
        let mut out = Element::new();
        for (j, &m2) in w.iter().enumerate() {
            let m2_dual = w_dual[j];
            for n in 1..=alg.max_order {
                for word in alg.words(n, v, Some(&[m2_dual])) {
                    let a = &word[..n - 1];
                    let val = dual_value(alg, g, m1, m1_dual, m2, a, n - 1);
                    if !val.is_empty() {
                        add_into(&mut out, &alg.from_value(&word, &val), &Q::from_integer(1.into()));
                    }
                }
            }
        }
        if !out.is_empty() {
            h.insert(m1_dual, out);
        }
    }
    h
}

/// Checks that the induced derivation has the value prescribed by the
/// defining formula at every position of the module slot, not only the
/// last one used to build it. Returns the number of mismatches.
pub fn check_dual_positions(alg: &FreeAlgebra, v: &[usize], w: &[usize], w_dual: &[usize], g: &Generators, h: &Generators) -> usize {
    let mut bad = 0;
    for (i, &m1_dual) in w_dual.iter().enumerate() {
        let m1 = w[i];
        let empty = Element::new();
        let hm = h.get(&m1_dual).unwrap_or(&empty);
        for (j, &m2) in w.iter().enumerate() {
            let m2_dual = w_dual[j];
            for n in 1..=alg.max_order {
                for tuple in all_tuples(v, n - 1) {
                    for k in 0..n {
                        let mut t = tuple[..k].to_vec();
                        t.push(m2_dual);
                        t.extend_from_slice(&tuple[k..]);
                        let lhs = alg.eval(hm, &t);
                        let rhs = dual_value(alg, g, m1, m1_dual, m2, &tuple, k);
                        if lhs != rhs {
                            bad += 1;
                        }
                    }
                }
            }
        }
    }
    bad
}

fn all_tuples(v: &[usize], len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                v.iter().map(move |&x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

/// The right-hand side of the inner product symmetry applied to `f`:
/// `T(f)(m2)(a, m1, a') = ± τ(f(m1)(a', m2, a))`, with the Koszul sign of
/// the cyclic exchange and an overall `-1`.
pub fn symmetry_transform(alg: &FreeAlgebra, s: &StructureData, f: &Generators, sign: DualSign) -> Generators {
    let mut out = Generators::new();
    for (j2, &m2) in s.w_dual.iter().enumerate() {
        let mut acc = Element::new();
        for (j1, &m1) in s.w_dual.iter().enumerate() {
            let Some(fm1) = f.get(&m1) else { continue };
            let (w1, w2) = (s.w[j1], s.w[j2]);
            for n in 1..=alg.max_order {
                for word in alg.words(n, &s.v, Some(&[w1])) {
                    let a = &word[..n - 1];
                    // i = n - 1 inputs before m1, none after
                    let mut u = vec![w2];
                    u.extend_from_slice(a);
                    let val = alg.eval(fm1, &u);
                    if val.is_empty() {
                        continue;
                    }
                    let i = n - 1;
                    let rotated = alg.rotate(n, i + 1, &val);
                    let mut e = (parity(alg, &[m2]) + parity(alg, a)) * parity(alg, &[m1]) + 1;
                    if sign == DualSign::Unshifted {
                        e = (e + i + 1) % 2;
                    }
                    add_into(&mut acc, &alg.from_value(&word, &signed(rotated, e == 1)), &Q::from_integer(1.into()));
                }
            }
        }
        if !acc.is_empty() {
            out.insert(m2, acc);
        }
    }
    out
}

/// Applying the symmetry transformation twice returns `f`.
pub fn check_symmetry_involution(alg: &FreeAlgebra, s: &StructureData) -> bool {
    let t = symmetry_transform(alg, s, &s.f, DualSign::Shifted);
    let tt = symmetry_transform(alg, s, &t, DualSign::Shifted);
    let empty = Element::new();
    s.w_dual.iter().all(|m| tt.get(m).unwrap_or(&empty) == s.f.get(m).unwrap_or(&empty))
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderCheck {
    pub name: String,
    pub order: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    pub max_order: usize,
    pub checks: Vec<OrderCheck>,
    /// Name and order of the first failure.
    pub first_failure: Option<(String, usize)>,
    pub pass: bool,
}

fn residual_orders(r: &BTreeMap<usize, Element>) -> Vec<usize> {
    let mut o: Vec<usize> = r.values().flat_map(|x| x.keys().map(|w: &Word| w.len())).collect();
    o.sort_unstable();
    o.dedup();
    o
}

impl StructureReport {
    fn record(&mut self, name: &str, residual: &BTreeMap<usize, Element>) {
        let bad = residual_orders(residual);
        for order in 1..=self.max_order {
            let pass = !bad.contains(&order);
            if !pass && self.first_failure.is_none() {
                self.first_failure = Some((name.to_string(), order));
            }
            self.checks.push(OrderCheck {
                name: name.to_string(),
                order,
                pass,
            });
        }
        self.pass = self.checks.iter().all(|c| c.pass);
    }

    pub fn failed(&self, name: &str) -> bool {
        self.checks.iter().any(|c| c.name == name && !c.pass)
    }
}

/// `D²` on the given generators, truncated.
pub fn square_residual(alg: &FreeAlgebra, der: &Generators, letters: &[usize]) -> BTreeMap<usize, Element> {
    letters
        .iter()
        .filter_map(|&l| {
            let x = der.get(&l)?;
            let y = truncate(&alg.apply_derivation(der, x), alg.max_order);
            (!y.is_empty()).then_some((l, y))
        })
        .collect()
}

/// `f∘h - g∘f` on the generators of the source module.
pub fn intertwining_residual(alg: &FreeAlgebra, s: &StructureData, h: &Generators) -> BTreeMap<usize, Element> {
    module_map_residual(alg, s, &s.f, false, h)
}

/// `f∘h - (-1)^{|f|} g∘f` for a module map `f` of the given parity.
pub fn module_map_residual(alg: &FreeAlgebra, s: &StructureData, f: &Generators, odd: bool, h: &Generators) -> BTreeMap<usize, Element> {
    let dg = s.over_d(&s.g);
    let empty = Element::new();
    s.w_dual
        .iter()
        .filter_map(|&m| {
            let hm = h.get(&m).unwrap_or(&empty);
            let fh = alg.apply_module_map(f, odd, hm);
            let fm = f.get(&m).unwrap_or(&empty);
            let gf = alg.apply_derivation(&dg, fm);
            let mut r = fh;
            add_into(&mut r, &gf, &Q::from_integer(if odd { 1 } else { -1 }.into()));
            let r = truncate(&r, alg.max_order);
            (!r.is_empty()).then_some((m, r))
        })
        .collect()
}

/// Checks, through the truncation order: `d² = 0`, `g² = 0`, `h² = 0` for
/// the induced `h`, `f∘h = g∘f`, and the symmetry of `f`.
pub fn check_structure(alg: &FreeAlgebra, s: &StructureData, sign: DualSign) -> StructureReport {
    let mut report = StructureReport {
        max_order: alg.max_order,
        checks: Vec::new(),
        first_failure: None,
        pass: true,
    };
    let h = induced_dual_derivation(alg, &s.v, &s.w, &s.w_dual, &s.g);
    report.record("d_square", &square_residual(alg, &s.d, &s.v));
    report.record("g_square", &square_residual(alg, &s.over_d(&s.g), &s.w));
    report.record("h_square", &square_residual(alg, &s.over_d(&h), &s.w_dual));
    report.record("f_intertwines", &intertwining_residual(alg, s, &h));
    let t = symmetry_transform(alg, s, &s.f, sign);
    let sym: BTreeMap<usize, Element> = s
        .w_dual
        .iter()
        .filter_map(|&m| {
            let a = s.f.get(&m).cloned().unwrap_or_default();
            let b = t.get(&m).cloned().unwrap_or_default();
            let r = difference(&a, &b);
            (!r.is_empty()).then_some((m, r))
        })
        .collect();
    report.record("symmetry", &sym);
    report
}
