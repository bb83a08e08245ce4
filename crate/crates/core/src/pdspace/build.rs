use std::collections::BTreeMap;

use num_traits::One;

use super::PdAlgebra;
use crate::algebras::{add_into, induced_dual_derivation, Element, Generators, StructureData, Word};
use crate::par;
use crate::qalg::{Solver, SparseVec, Q};
use crate::{Error, Result};

/// Deliberate defects, for checking that the verifier notices them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// Negates `d₂` on the first simplex of positive dimension.
    CorruptSign,
    /// Leaves out the correction of `g` at the given order.
    SkipCorrection(usize),
    /// Adds one to a coefficient of `d` in the top order.
    PerturbCoefficient,
}

#[derive(Clone, Debug)]
pub struct BuildOptions {
    pub order: usize,
    pub mutation: Option<Mutation>,
}

impl BuildOptions {
    pub fn new(order: usize) -> Self {
        BuildOptions { order, mutation: None }
    }
}

/// `d`, `g`, the induced `h`, `χ` on every simplex, and `f = χ(μ)`.
pub struct PdStructure {
    pub pd: PdAlgebra,
    pub order: usize,
    pub d: Generators,
    pub g: Generators,
    pub h: Generators,
    /// `χ(σ)` for every simplex, as a module map on the dual letters.
    pub chi: Vec<Generators>,
    pub mu: Vec<(usize, Q)>,
    pub f: Generators,
}

impl PdStructure {
    pub fn data(&self) -> StructureData {
        StructureData {
            v: self.pd.v.clone(),
            w: self.pd.w.clone(),
            w_dual: self.pd.w_dual.clone(),
            d: self.d.clone(),
            g: self.g.clone(),
            f: self.f.clone(),
        }
    }

    /// `f` has degree `-dim(μ)`.
    pub fn f_degree(&self) -> i32 {
        -(self.pd.complex.top_dim() as i32)
    }
}

fn order_part(x: &Element, n: usize) -> Element {
    x.iter().filter(|(w, _)| w.len() == n).map(|(w, v)| (w.clone(), v.clone())).collect()
}

fn up_to(g: &Generators, n: usize) -> Generators {
    g.iter()
        .map(|(k, x)| (*k, x.iter().filter(|(w, _)| w.len() <= n).map(|(w, v)| (w.clone(), v.clone())).collect::<Element>()))
        .filter(|(_, x)| !x.is_empty())
        .collect()
}

fn merge(into: &mut Generators, from: &Generators) {
    for (k, x) in from {
        let e = into.entry(*k).or_default();
        add_into(e, x, &Q::one());
    }
    into.retain(|_, x| !x.is_empty());
}

/// Order-`n` part of `D(x)`, using only the terms of `D` that can land in
/// order `n`.
fn derivation_part(pd: &PdAlgebra, der: &Generators, x: &Element, n: usize) -> Element {
    let mut out = Element::new();
    for b in 1..=n {
        let xb = order_part(x, b);
        if xb.is_empty() {
            continue;
        }
        let db = up_to(der, n + 1 - b);
        add_into(&mut out, &order_part(&pd.alg.apply_derivation(&db, &xb), n), &Q::one());
    }
    out
}

fn coords(index: &mut BTreeMap<(usize, Word, usize), usize>, g: &Generators) -> SparseVec {
    let mut v = Vec::new();
    for (k, x) in g {
        for (w, q) in x {
            for (b, c) in q {
                let n = index.len();
                let i = *index.entry((*k, w.clone(), *b)).or_insert(n);
                v.push((i, c.clone()));
            }
        }
    }
    crate::qalg::sparse_from_terms(v)
}

/// A solution `x` in the span of `spans` with `op(x) = rhs`.
fn local_solve(spans: &[Generators], op: impl Fn(&Generators) -> Generators, rhs: &Generators) -> Option<Generators> {
    let mut index: BTreeMap<(usize, Word, usize), usize> = BTreeMap::new();
    let cols: Vec<SparseVec> = spans.iter().map(|s| coords(&mut index, &op(s))).collect();
    let target = coords(&mut index, rhs);
    let mut solver = Solver::new(index.len());
    for c in &cols {
        solver.push(c);
    }
    let x = solver.solve(&target)?;
    let mut out = Generators::new();
    for (j, c) in x {
        for (k, e) in &spans[j] {
            add_into(out.entry(*k).or_default(), e, &c);
        }
    }
    out.retain(|_, e| !e.is_empty());
    Some(out)
}

/// Single basis elements on the given words, as values of the generator `key`.
fn spans_on(pd: &PdAlgebra, key: usize, words: Vec<Word>, degree: i32) -> Vec<Generators> {
    let mut out = Vec::new();
    for w in words {
        if pd.alg.word_degree(&w) != degree {
            continue;
        }
        for b in 0..pd.alg.pdim(w.len()) {
            let e = pd.alg.normalize(vec![(w.clone(), vec![(b, Q::one())])]);
            if !e.is_empty() {
                out.push(Generators::from([(key, e)]));
            }
        }
    }
    out
}

impl PdAlgebra {
    fn closure_letters(&self, i: usize) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
        let c = self.complex.closure(i);
        (c.iter().map(|&j| self.v[j]).collect(), c.iter().map(|&j| self.w[j]).collect(), c.iter().map(|&j| self.w_dual[j]).collect())
    }

    fn by_dimension(&self) -> Vec<Vec<usize>> {
        (0..=self.complex.top_dim()).map(|p| (0..self.complex.len()).filter(|&i| self.complex.dim(i) == p).collect()).collect()
    }

    fn unsolvable(&self, i: usize, order: usize) -> Error {
        Error::Unsolvable { simplex: self.complex.simplices[i].clone(), order }
    }

    /// `d₁ + d₂ + …` through the given order.
    pub fn build_d(&self, order: usize) -> Result<Generators> {
        self.build_d_from(self.d2(), order, true)
    }

    fn build_d_from(&self, d2: Generators, order: usize, strict: bool) -> Result<Generators> {
        let d1 = self.d1();
        let mut d = d1.clone();
        if order >= 2 {
            merge(&mut d, &d2);
        }
        for n in 3..=order {
            for layer in self.by_dimension() {
                let solved = par::map(&layer, |&i| -> Result<Generators> {
                    let x = self.v[i];
                    let dx = d.get(&x).cloned().unwrap_or_default();
                    let mut rhs = derivation_part(self, &d, &dx, n);
                    rhs = rhs.into_iter().map(|(w, v)| (w, v.into_iter().map(|(b, c)| (b, -c)).collect())).collect();
                    if rhs.is_empty() {
                        return Ok(Generators::new());
                    }
                    let (cv, _, _) = self.closure_letters(i);
                    let spans = spans_on(self, x, self.alg.words(n, &cv, None), self.alg.alphabet.degrees[x] + 1);
                    let op = |s: &Generators| s.iter().map(|(k, e)| (*k, self.alg.apply_derivation(&d1, e))).collect();
                    lenient(local_solve(&spans, op, &Generators::from([(x, rhs)])), strict, || self.unsolvable(i, n))
                });
                for s in solved {
                    merge(&mut d, &s?);
                }
            }
        }
        Ok(d)
    }

    /// `g₁ + g₂ + …` over `d`, through the given order.
    pub fn build_g(&self, d: &Generators, order: usize) -> Result<Generators> {
        self.build_g_skipping(d, order, None)
    }

    fn build_g_skipping(&self, d: &Generators, order: usize, skip: Option<usize>) -> Result<Generators> {
        let strict = skip.is_none();
        let mut lin = self.d1();
        merge(&mut lin, &self.g1());
        let mut g = self.g1();
        if order >= 2 {
            merge(&mut g, &self.g2());
        }
        for n in 3..=order {
            if skip == Some(n) {
                continue;
            }
            for layer in self.by_dimension() {
                let mut all = d.clone();
                merge(&mut all, &g);
                let solved = par::map(&layer, |&i| -> Result<Generators> {
                    let m = self.w[i];
                    let gm = all.get(&m).cloned().unwrap_or_default();
                    let rhs: Element = derivation_part(self, &all, &gm, n)
                        .into_iter()
                        .map(|(w, v)| (w, v.into_iter().map(|(b, c)| (b, -c)).collect()))
                        .collect();
                    if rhs.is_empty() {
                        return Ok(Generators::new());
                    }
                    let (cv, cw, _) = self.closure_letters(i);
                    let spans = spans_on(self, m, self.alg.words(n, &cv, Some(&cw)), self.alg.alphabet.degrees[m] + 1);
                    let op = |s: &Generators| s.iter().map(|(k, e)| (*k, self.alg.apply_derivation(&lin, e))).collect();
                    lenient(local_solve(&spans, op, &Generators::from([(m, rhs)])), strict, || self.unsolvable(i, n))
                });
                for s in solved {
                    merge(&mut g, &s?);
                }
            }
        }
        Ok(g)
    }

    /// `χ₂(σ)`: capping with `σ` through the symmetrized diagonal.
    pub fn chi2(&self, i: usize) -> Generators {
        let mut out = Generators::new();
        let p = self.complex.dim(i);
        for k in 0..=p {
            let (f, b) = self.complex.front_back(i, k);
            let sf = if (k + 1) * (p + 1) % 2 == 0 { Q::one() } else { -Q::one() };
            let sb = if p % 2 == 0 { Q::one() } else { -Q::one() };
            add_into(out.entry(self.w_dual[f]).or_default(), &self.alg.generator(self.w[b]), &sf);
            add_into(out.entry(self.w_dual[b]).or_default(), &self.alg.generator(self.w[f]), &sb);
        }
        out.retain(|_, e| !e.is_empty());
        out
    }

    /// `δ(φ) = φ∘h - (-1)^{|φ|} g∘φ`, restricted to the order-`n` part.
    fn delta_part(&self, dg: &Generators, h: &Generators, phi: &Generators, odd: bool, n: usize) -> Generators {
        let mut out = Generators::new();
        for &m in &self.w_dual {
            let mut r = Element::new();
            if let Some(hm) = h.get(&m) {
                for b in 1..=n {
                    let part = order_part(hm, b);
                    if part.is_empty() {
                        continue;
                    }
                    let phi_b = up_to(phi, n + 1 - b);
                    add_into(&mut r, &order_part(&self.alg.apply_module_map(&phi_b, odd, &part), n), &Q::one());
                }
            }
            if let Some(pm) = phi.get(&m) {
                let s = if odd { Q::one() } else { -Q::one() };
                add_into(&mut r, &derivation_part(self, dg, pm, n), &s);
            }
            if !r.is_empty() {
                out.insert(m, r);
            }
        }
        out
    }

    /// `χ` on every simplex, with `χ(∂σ) = δ(χ(σ))` through module order
    /// `order - 1`.
    pub fn build_chi(&self, d: &Generators, g: &Generators, h: &Generators, order: usize) -> Result<Vec<Generators>> {
        self.build_chi_from(d, g, h, order, true)
    }

    fn build_chi_from(&self, d: &Generators, g: &Generators, h: &Generators, order: usize, strict: bool) -> Result<Vec<Generators>> {
        let mut dg = d.clone();
        merge(&mut dg, g);
        let mut lin = self.d1();
        merge(&mut lin, &self.g1());
        let h1 = up_to(h, 1);
        let mut chi: Vec<Generators> = (0..self.complex.len()).map(|i| self.chi2(i)).collect();
        for n in 3..=order {
            let m = n - 1;
            for layer in self.by_dimension() {
                let solved = par::map(&layer, |&i| -> Result<Generators> {
                    let odd = self.complex.dim(i) % 2 == 1;
                    // χ(∂σ) - δ(χ(σ)) in order m
                    let mut res = Generators::new();
                    for (f, s) in self.complex.boundary(i) {
                        for (k, e) in &chi[f] {
                            add_into(res.entry(*k).or_default(), &order_part(e, m), &Q::from_integer(s.into()));
                        }
                    }
                    for (k, e) in self.delta_part(&dg, h, &chi[i], odd, m) {
                        add_into(res.entry(k).or_default(), &e, &-Q::one());
                    }
                    res.retain(|_, e| !e.is_empty());
                    if res.is_empty() {
                        return Ok(Generators::new());
                    }
                    let (cv, cw, cn) = self.closure_letters(i);
                    let mut spans = Vec::new();
                    for &c in &cn {
                        let deg = self.alg.alphabet.degrees[c] - self.complex.dim(i) as i32;
                        spans.extend(spans_on(self, c, self.alg.words(m, &cv, Some(&cw)), deg));
                    }
                    let op = |s: &Generators| self.delta_part(&lin, &h1, s, odd, m);
                    lenient(local_solve(&spans, op, &res), strict, || self.unsolvable(i, n))
                });
                for (i, s) in layer.iter().zip(solved) {
                    merge(&mut chi[*i], &s?);
                }
            }
        }
        Ok(chi)
    }

    pub fn build(self, opts: &BuildOptions) -> Result<PdStructure> {
        let order = opts.order.max(1);
        let strict = opts.mutation.is_none();
        let mu = self.complex.fundamental_cycle()?;
        let mut d2 = self.d2();
        if opts.mutation == Some(Mutation::CorruptSign) {
            let i = (0..self.complex.len()).find(|&i| self.complex.dim(i) > 0).unwrap_or(0);
            if let Some(e) = d2.get_mut(&self.v[i]) {
                *e = e.iter().map(|(w, v)| (w.clone(), v.iter().map(|(b, c)| (*b, -c.clone())).collect())).collect();
            }
        }
        let mut d = self.build_d_from(d2, order, strict)?;
        if opts.mutation == Some(Mutation::PerturbCoefficient) {
            perturb_top(&self, &mut d, order);
        }
        let skip = match opts.mutation {
            Some(Mutation::SkipCorrection(n)) => Some(n),
            _ => None,
        };
        let g = if strict { self.build_g(&d, order)? } else { self.build_g_skipping(&d, order, skip.or(Some(usize::MAX)))? };
        let h = induced_dual_derivation(&self.alg, &self.v, &self.w, &self.w_dual, &g);
        let chi = self.build_chi_from(&d, &g, &h, order + 1, strict)?;
        let mut f = Generators::new();
        for (t, c) in &mu {
            for (k, e) in &chi[*t] {
                add_into(f.entry(*k).or_default(), e, c);
            }
        }
        f.retain(|_, e| !e.is_empty());
        Ok(PdStructure { pd: self, order, d, g, h, chi, mu, f })
    }
}

fn lenient(x: Option<Generators>, strict: bool, err: impl FnOnce() -> Error) -> Result<Generators> {
    match x {
        Some(x) => Ok(x),
        None if strict => Err(err()),
        None => Ok(Generators::new()),
    }
}

/// Adds a basis element on the first highest-order word of `d` on a
/// top-dimensional simplex.
fn perturb_top(pd: &PdAlgebra, d: &mut Generators, order: usize) {
    let top = pd.complex.top_dim();
    for n in (1..=order).rev() {
        for i in (0..pd.complex.len()).filter(|&i| pd.complex.dim(i) == top) {
            let Some(e) = d.get_mut(&pd.v[i]) else { continue };
            let words: Vec<Word> = e.keys().filter(|w| w.len() == n).cloned().collect();
            for w in words {
                let bump = pd.alg.normalize(vec![(w, vec![(0, Q::one())])]);
                if !bump.is_empty() {
                    add_into(e, &bump, &Q::one());
                    return;
                }
            }
        }
    }
}
