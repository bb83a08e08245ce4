use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::Serialize;

use super::io::{LoadedPd, PdFile};
use crate::algebras::{
    add_into, difference, symmetry_transform, induced_dual_derivation, module_map_residual, square_residual, truncate, DualSign, Element,
    Generators, StructureData,
};
use crate::qalg::Q;
use crate::Result;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PdCheck {
    pub name: String,
    pub order: Option<usize>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PdReport {
    pub order: usize,
    pub top_dim: usize,
    pub f_degree: i32,
    pub checks: Vec<PdCheck>,
    pub locality_violations: Vec<String>,
    /// Reported but not part of the verdict.
    pub info: Vec<PdCheck>,
    pub pass: bool,
}

impl PdReport {
    fn push(&mut self, name: &str, order: Option<usize>, pass: bool, detail: Option<String>) {
        self.checks.push(PdCheck { name: name.into(), order, pass, detail });
    }

    fn per_order(&mut self, name: &str, residual: &BTreeMap<usize, Element>, labels: &[String]) {
        for n in 1..=self.order {
            let bad: Vec<String> = residual
                .iter()
                .filter(|(_, e)| e.keys().any(|w| w.len() == n))
                .map(|(k, _)| labels[*k].clone())
                .collect();
            let detail = (!bad.is_empty()).then(|| format!("nonzero on {}", bad.join(" ")));
            self.push(name, Some(n), bad.is_empty(), detail);
        }
    }

    pub fn first_failure(&self) -> Option<&PdCheck> {
        self.checks.iter().find(|c| !c.pass)
    }

    pub fn failed(&self, name: &str) -> bool {
        self.checks.iter().any(|c| c.name == name && !c.pass)
    }

    fn finish(mut self) -> Self {
        self.pass = self.checks.iter().all(|c| c.pass) && self.locality_violations.is_empty();
        self
    }
}

fn merged(a: &Generators, b: &Generators) -> Generators {
    let mut out = a.clone();
    for (k, x) in b {
        add_into(out.entry(*k).or_default(), x, &Q::one());
    }
    out
}

fn sign(k: usize) -> Q {
    if k % 2 == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

/// Re-derives every identity from the stored data: the letters, `∂² = 0`,
/// `μ`, the base case `d₂`, locality, and per order `d² = 0`, `g² = 0`,
/// `h² = 0`, the chain condition on `χ` and the intertwining of `f`.
pub fn verify(file: &PdFile) -> Result<PdReport> {
    let l = file.load()?;
    let mut r = PdReport {
        order: l.order,
        top_dim: l.complex.top_dim(),
        f_degree: -(l.complex.top_dim() as i32),
        checks: Vec::new(),
        locality_violations: Vec::new(),
        info: Vec::new(),
        pass: false,
    };
    let exp = l.expected_letters();
    let letters_ok = exp.alg.alphabet == l.alg.alphabet && exp.v == l.data.v && exp.w == l.data.w && exp.w_dual == l.data.w_dual;
    r.push("letters", None, letters_ok, (!letters_ok).then(|| "alphabet does not match the complex and order".into()));
    if !letters_ok {
        return Ok(r.finish());
    }
    boundary_square(&l, &mut r);
    mu_cycle(&l, &mut r);
    d2_oracle(&l, &mut r);
    locality(&l, &mut r);

    let labels = &l.alg.alphabet.labels;
    let s = &l.data;
    let alg = &l.alg;
    r.per_order("d_square", &square_residual(alg, &s.d, &s.v), labels);
    let dg = merged(&s.d, &s.g);
    r.per_order("g_square", &square_residual(alg, &dg, &s.w), labels);
    let h = induced_dual_derivation(alg, &s.v, &s.w, &s.w_dual, &s.g);
    r.per_order("h_square", &square_residual(alg, &merged(&s.d, &h), &s.w_dual), labels);
    chi_chain(&l, &h, &mut r);

    let mut fmu = Generators::new();
    for (t, q) in &l.mu {
        for (k, e) in &l.chi[*t] {
            add_into(fmu.entry(*k).or_default(), e, q);
        }
    }
    let same = s.w_dual.iter().all(|m| fmu.get(m).cloned().unwrap_or_default() == s.f.get(m).cloned().unwrap_or_default());
    r.push("f_is_chi_mu", None, same, None);
    let odd = l.complex.top_dim() % 2 == 1;
    r.per_order("f_intertwines", &module_map_residual(alg, s, &s.f, odd, &h), labels);

    let t = symmetry_transform(alg, s, &s.f, DualSign::Shifted);
    for n in 1..=l.order {
        let pass = s.w_dual.iter().all(|m| {
            let a = truncate(&s.f.get(m).cloned().unwrap_or_default(), n);
            let b = truncate(&t.get(m).cloned().unwrap_or_default(), n);
            difference(&a, &b).keys().all(|w| w.len() != n)
        });
        r.info.push(PdCheck { name: "symmetry".into(), order: Some(n), pass, detail: None });
    }
    Ok(r.finish())
}

fn boundary_square(l: &LoadedPd, r: &mut PdReport) {
    let c = &l.complex;
    let bad: Vec<String> = (0..c.len())
        .filter(|&i| {
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for (f, s) in c.boundary(i) {
                for (g, t) in c.boundary(f) {
                    *acc.entry(g).or_insert(0) += s * t;
                }
            }
            acc.values().any(|&x| x != 0)
        })
        .map(|i| c.label(i))
        .collect();
    r.push("boundary_square", None, bad.is_empty(), (!bad.is_empty()).then(|| bad.join(" ")));
}

fn mu_cycle(l: &LoadedPd, r: &mut PdReport) {
    let c = &l.complex;
    let unit = l.mu.iter().all(|(_, q)| q == &Q::one() || q == &-Q::one());
    r.push("mu_unit_coefficients", None, unit, None);
    let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
    if c.top_dim() > 0 {
        for (t, q) in &l.mu {
            for (f, s) in c.boundary(*t) {
                *acc.entry(f).or_insert_with(Q::zero) += q * Q::from_integer(s.into());
            }
        }
    }
    let closed = acc.values().all(Zero::is_zero);
    r.push("mu_cycle", None, closed, None);
}

/// `d₂(σ)` against the front/back face enumeration with shift signs,
/// compared value by value on ordered pairs of closure letters.
fn d2_oracle(l: &LoadedPd, r: &mut PdReport) {
    if l.order < 2 {
        return;
    }
    let c = &l.complex;
    let alg = &l.alg;
    let v = &l.data.v;
    let e0 = vec![(0usize, Q::one())];
    let swapped = alg.act(&[1, 0], &e0);
    let lie_swap = swapped.iter().find(|(i, _)| *i == 0).map(|(_, q)| q.clone()).unwrap_or_else(Q::zero);
    let mut bad = Vec::new();
    for i in 0..c.len() {
        let mut pairs: BTreeMap<(usize, usize), Q> = BTreeMap::new();
        for k in 0..=c.dim(i) {
            let (f, b) = c.front_back(i, k);
            let (x, y) = (v[f], v[b]);
            *pairs.entry((x, y)).or_insert_with(Q::zero) += sign(k);
            let koszul = if alg.alphabet.odd(x) && alg.alphabet.odd(y) { -Q::one() } else { Q::one() };
            *pairs.entry((y, x)).or_insert_with(Q::zero) += sign(k) * koszul * lie_swap.clone();
        }
        let got: Element = l.data.d.get(&v[i]).map(|e| e.iter().filter(|(w, _)| w.len() == 2).map(|(w, q)| (w.clone(), q.clone())).collect()).unwrap_or_default();
        let closure: Vec<usize> = c.closure(i).iter().map(|&j| v[j]).collect();
        let ok = closure.iter().all(|&x| {
            closure.iter().all(|&y| {
                let want = pairs.get(&(x, y)).cloned().unwrap_or_else(Q::zero);
                let val = alg.eval(&got, &[x, y]);
                let have = val.iter().find(|(b, _)| *b == 0).map(|(_, q)| q.clone()).unwrap_or_else(Q::zero);
                have == want && val.iter().all(|(b, q)| *b == 0 || q.is_zero())
            })
        });
        let local = got.keys().all(|w| w.iter().all(|x| closure.contains(x)));
        if !(ok && local) {
            bad.push(c.label(i));
        }
    }
    r.push("d2_is_aw", Some(2), bad.is_empty(), (!bad.is_empty()).then(|| bad.join(" ")));
}

fn locality(l: &LoadedPd, r: &mut PdReport) {
    let c = &l.complex;
    let n = c.len();
    let s = &l.data;
    let simplex_of = |x: usize| x % n;
    for i in 0..n {
        let closure: BTreeSet<usize> = c.closure(i).into_iter().collect();
        let maps: [(&str, Option<&Element>); 2] = [("d", s.d.get(&s.v[i])), ("g", s.g.get(&s.w[i]))];
        for (name, e) in maps {
            let Some(e) = e else { continue };
            for w in e.keys() {
                if w.iter().any(|&x| !closure.contains(&simplex_of(x))) {
                    r.locality_violations.push(format!("{name}({}) has word {}", c.label(i), word_label(l, w)));
                }
            }
        }
        for (k, e) in &l.chi[i] {
            if !closure.contains(&simplex_of(*k)) {
                r.locality_violations.push(format!("chi({}) is nonzero on {}", c.label(i), l.alg.alphabet.labels[*k]));
            }
            for w in e.keys() {
                if w.iter().any(|&x| !closure.contains(&simplex_of(x))) {
                    r.locality_violations.push(format!("chi({}) has word {}", c.label(i), word_label(l, w)));
                }
            }
        }
    }
    r.push("locality", None, r.locality_violations.is_empty(), None);
}

fn word_label(l: &LoadedPd, w: &[usize]) -> String {
    w.iter().map(|&x| l.alg.alphabet.labels[x].as_str()).collect::<Vec<_>>().join(" ")
}

/// `χ(∂σ) = χ(σ)∘h - (-1)^{|σ|} (d + g)∘χ(σ)` on every simplex.
fn chi_chain(l: &LoadedPd, h: &Generators, r: &mut PdReport) {
    let c = &l.complex;
    let mut total: BTreeMap<usize, Element> = BTreeMap::new();
    for i in 0..c.len() {
        let s = StructureData { f: l.chi[i].clone(), ..l.data.clone() };
        let mut res = module_map_residual(&l.alg, &s, &l.chi[i], c.dim(i) % 2 == 1, h);
        for (f, sg) in c.boundary(i) {
            for (k, e) in &l.chi[f] {
                add_into(res.entry(*k).or_default(), &truncate(e, l.order), &-Q::from_integer(sg.into()));
            }
        }
        for (k, e) in res {
            if !e.is_empty() {
                total.entry(k).or_default().extend(e.keys().map(|w| (w.clone(), vec![(0, Q::one())])));
            }
        }
    }
    total.retain(|_, e| !e.is_empty());
    r.per_order("chi_chain", &total, &l.alg.alphabet.labels);
}
