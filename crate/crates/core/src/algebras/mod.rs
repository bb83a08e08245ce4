//! Free algebras and free modules over an operad `P` on graded generators,
//! truncated at a maximal order, together with derivations, algebra
//! morphisms and module maps determined by their values on generators.
//!
//! An element of order `n` is a class in `(P(n) ⊗ X^{⊗n})_{S_n}`. Each class
//! is stored in normal form: the word of letters sorted (module letters
//! last), and the `P(n)` part averaged over the stabilizer of the word with
//! Koszul signs.

mod dual;
mod frobenius;
pub mod io;
mod random;

pub use dual::{
    check_dual_positions, check_symmetry_involution, check_structure, symmetry_transform, induced_dual_derivation, intertwining_residual, module_map_residual,
    square_residual, DualSign, OrderCheck, StructureReport, StructureData,
};
pub use frobenius::{frobenius_instance, FrobeniusAlgebra};
pub use random::{random_element, random_gauge_instance, RandomInstance, RandomSpec};

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::operad::Operad;
use crate::perm;
use crate::qalg::{sparse_axpy, sparse_from_terms, Echelon, SparseVec, Q};
use crate::trees::Signature;

/// Letters of the generating spaces. Algebra letters must come before
/// module letters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alphabet {
    pub degrees: Vec<i32>,
    pub module: Vec<bool>,
    pub labels: Vec<String>,
}

impl Alphabet {
    pub fn new() -> Self {
        Alphabet {
            degrees: Vec::new(),
            module: Vec::new(),
            labels: Vec::new(),
        }
    }

    /// Appends letters and returns their indices.
    pub fn push(&mut self, module: bool, degrees: &[i32], prefix: &str) -> Vec<usize> {
        assert!(
            module || !self.module.iter().any(|&m| m),
            "algebra letters must precede module letters"
        );
        let start = self.degrees.len();
        for (i, &d) in degrees.iter().enumerate() {
            self.degrees.push(d);
            self.module.push(module);
            self.labels.push(format!("{prefix}{i}"));
        }
        (start..self.degrees.len()).collect()
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn odd(&self, l: usize) -> bool {
        self.degrees[l].rem_euclid(2) == 1
    }
}

impl Default for Alphabet {
    fn default() -> Self {
        Self::new()
    }
}

pub type Word = Vec<usize>;
/// Unnormalized terms: any word order, any `P(n)` vector.
pub type Terms = Vec<(Word, SparseVec)>;
/// Normal forms: sorted words to stabilizer-averaged `P(n)` vectors.
pub type Element = BTreeMap<Word, SparseVec>;
/// Values of a map on generators.
pub type Generators = BTreeMap<usize, Element>;

pub fn add_into(target: &mut Element, x: &Element, c: &Q) {
    for (w, v) in x {
        let e = target.entry(w.clone()).or_default();
        *e = sparse_axpy(e, c, v);
        if e.is_empty() {
            target.remove(w);
        }
    }
}

pub fn scaled(x: &Element, c: &Q) -> Element {
    let mut out = Element::new();
    add_into(&mut out, x, c);
    out
}

pub fn difference(a: &Element, b: &Element) -> Element {
    let mut out = a.clone();
    add_into(&mut out, b, &-Q::one());
    out
}

/// Orders present in an element.
pub fn orders(x: &Element) -> Vec<usize> {
    let mut o: Vec<usize> = x.keys().map(|w| w.len()).collect();
    o.dedup();
    o
}

pub fn truncate(x: &Element, max_order: usize) -> Element {
    x.iter()
        .filter(|(w, _)| w.len() <= max_order)
        .map(|(w, v)| (w.clone(), v.clone()))
        .collect()
}

fn apply_columns(cols: &[SparseVec], x: &[(usize, Q)]) -> SparseVec {
    let mut out = Vec::new();
    for (i, c) in x {
        for (j, y) in &cols[*i] {
            out.push((*j, c * y));
        }
    }
    sparse_from_terms(out)
}

type StabKey = Vec<(usize, bool)>;

/// Free `P`-algebra and free modules on an alphabet, truncated at
/// `max_order`.
pub struct FreeAlgebra {
    pub op: Arc<Operad>,
    pub alphabet: Alphabet,
    pub max_order: usize,
    act_cache: RwLock<HashMap<Vec<usize>, Arc<Vec<SparseVec>>>>,
    proj_cache: RwLock<HashMap<StabKey, Arc<Vec<SparseVec>>>>,
    comp_cache: RwLock<HashMap<(usize, usize, usize, usize, usize), SparseVec>>,
}

impl FreeAlgebra {
    pub fn new(op: Arc<Operad>, alphabet: Alphabet, max_order: usize) -> Self {
        let sigs: Vec<Signature> = (1..=max_order.max(1) + 1).map(Signature::uncolored).collect();
        op.prepare(&sigs);
        FreeAlgebra {
            op,
            alphabet,
            max_order,
            act_cache: RwLock::new(HashMap::new()),
            proj_cache: RwLock::new(HashMap::new()),
            comp_cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn pdim(&self, n: usize) -> usize {
        self.op.dim(&Signature::uncolored(n))
    }

    pub fn word_degree(&self, w: &[usize]) -> i32 {
        w.iter().map(|&l| self.alphabet.degrees[l]).sum()
    }

    fn word_odd(&self, w: &[usize]) -> bool {
        w.iter().filter(|&&l| self.alphabet.odd(l)).count() % 2 == 1
    }

    /// Koszul sign of moving letter `k` of `w` to position `sigma[k]`.
    pub fn koszul_sign(&self, w: &[usize], sigma: &[usize]) -> i32 {
        let mut s = 1;
        for i in 0..w.len() {
            if !self.alphabet.odd(w[i]) {
                continue;
            }
            for j in i + 1..w.len() {
                if self.alphabet.odd(w[j]) && sigma[i] > sigma[j] {
                    s = -s;
                }
            }
        }
        s
    }

    /// Input `k` of a `P(n)` vector becomes input `sigma[k]`.
    pub fn act(&self, sigma: &[usize], x: &[(usize, Q)]) -> SparseVec {
        if sigma.iter().enumerate().all(|(i, &j)| i == j) {
            return x.to_vec();
        }
        if let Some(cols) = self.act_cache.read().unwrap().get(sigma) {
            return apply_columns(cols, x);
        }
        let n = sigma.len();
        let sig = Signature::uncolored(n);
        let cols: Vec<SparseVec> = (0..self.pdim(n))
            .map(|i| self.op.permute(&sig, sigma, &[(i, Q::one())]))
            .collect();
        let out = apply_columns(&cols, x);
        self.act_cache
            .write()
            .unwrap()
            .insert(sigma.to_vec(), Arc::new(cols));
        out
    }

    /// The cyclic relabelling `p` of flags `0..=n` on `P(n)`.
    pub fn cyclic(&self, n: usize, p: &[usize], x: &[(usize, Q)]) -> SparseVec {
        self.op.cyclic(n, p, x)
    }

    /// `τ_{n+1}^k` on `P(n)`, flag `j` to `j + k`.
    pub fn rotate(&self, n: usize, k: usize, x: &[(usize, Q)]) -> SparseVec {
        let p: Vec<usize> = (0..=n).map(|j| (j + k) % (n + 1)).collect();
        if k % (n + 1) == 0 {
            return x.to_vec();
        }
        self.cyclic(n, &p, x)
    }

    /// Stable sorting permutation: letter `k` of `w` goes to `sigma[k]`.
    pub fn sort_perm(w: &[usize]) -> (Word, Vec<usize>) {
        let mut idx: Vec<usize> = (0..w.len()).collect();
        idx.sort_by_key(|&i| (w[i], i));
        let mut sigma = vec![0; w.len()];
        for (pos, &i) in idx.iter().enumerate() {
            sigma[i] = pos;
        }
        let sorted = idx.iter().map(|&i| w[i]).collect();
        (sorted, sigma)
    }

    fn stab_key(&self, sorted: &[usize]) -> StabKey {
        let mut key: StabKey = Vec::new();
        let mut i = 0;
        while i < sorted.len() {
            let mut j = i;
            while j < sorted.len() && sorted[j] == sorted[i] {
                j += 1;
            }
            key.push((j - i, self.alphabet.odd(sorted[i])));
            i = j;
        }
        key
    }

    /// Permutations of positions fixing a sorted word, with their Koszul
    /// signs.
    fn stabilizer(key: &StabKey) -> Vec<(Vec<usize>, i32)> {
        let mut out = vec![(Vec::new(), 1)];
        let mut offset = 0;
        for &(len, odd) in key {
            let mut next = Vec::new();
            for (p, s) in &out {
                for q in perm::all(len) {
                    let mut p2: Vec<usize> = p.clone();
                    p2.extend(q.iter().map(|&x| x + offset));
                    let sq = if odd { perm::sign(&q) } else { 1 };
                    next.push((p2, s * sq));
                }
            }
            out = next;
            offset += len;
        }
        out
    }

    /// Averaging projector of a sorted word applied to `q`.
    pub fn project(&self, sorted: &[usize], q: &[(usize, Q)]) -> SparseVec {
        let key = self.stab_key(sorted);
        if key.iter().all(|&(len, _)| len == 1) {
            return q.to_vec();
        }
        if let Some(cols) = self.proj_cache.read().unwrap().get(&key) {
            return apply_columns(cols, q);
        }
        let n = sorted.len();
        let stab = Self::stabilizer(&key);
        let scale = Q::new(1.into(), (stab.len() as i64).into());
        let cols: Vec<SparseVec> = (0..self.pdim(n))
            .map(|b| {
                let mut acc = Vec::new();
                for (p, s) in &stab {
                    let c = if *s > 0 { scale.clone() } else { -scale.clone() };
                    acc = sparse_axpy(&acc, &c, &self.act(p, &[(b, Q::one())]));
                }
                acc
            })
            .collect();
        let out = apply_columns(&cols, q);
        self.proj_cache.write().unwrap().insert(key, Arc::new(cols));
        out
    }

    pub fn stabilizer_order(&self, sorted: &[usize]) -> usize {
        self.stab_key(sorted)
            .iter()
            .map(|&(len, _)| (1..=len).product::<usize>())
            .product()
    }

    /// Normal form of a list of terms.
    pub fn normalize(&self, terms: Terms) -> Element {
        let mut grouped: BTreeMap<Word, SparseVec> = BTreeMap::new();
        for (w, q) in terms {
            if q.is_empty() {
                continue;
            }
            let (sorted, sigma) = Self::sort_perm(&w);
            let s = self.koszul_sign(&w, &sigma);
            let v = self.act(&sigma, &q);
            let c = if s > 0 { Q::one() } else { -Q::one() };
            let e = grouped.entry(sorted).or_default();
            *e = sparse_axpy(e, &c, &v);
        }
        let mut out = Element::new();
        for (w, v) in grouped {
            let v = self.project(&w, &v);
            if !v.is_empty() {
                out.insert(w, v);
            }
        }
        out
    }

    pub fn generator(&self, l: usize) -> Element {
        Element::from([(vec![l], vec![(0, Q::one())])])
    }

    /// `a ∘_i b` in `P` (1-based slot).
    pub fn compose(&self, n: usize, a: &[(usize, Q)], i: usize, m: usize, b: &[(usize, Q)]) -> SparseVec {
        let mut out = Vec::new();
        for (x, cx) in a {
            for (y, cy) in b {
                let key = (n, i, m, *x, *y);
                let cached = self.comp_cache.read().unwrap().get(&key).cloned();
                let v = match cached {
                    Some(v) => v,
                    None => {
                        let v = self
                            .op
                            .compose(
                                &Signature::uncolored(n),
                                &[(*x, Q::one())],
                                i,
                                &Signature::uncolored(m),
                                &[(*y, Q::one())],
                            )
                            .expect("uncolored composition")
                            .1;
                        self.comp_cache.write().unwrap().insert(key, v.clone());
                        v
                    }
                };
                let c = cx * cy;
                for (k, z) in v {
                    out.push((k, &c * z));
                }
            }
        }
        sparse_from_terms(out)
    }

    /// Replaces letter `pos` of a term by an element.
    fn substitute(&self, w: &[usize], q: &[(usize, Q)], pos: usize, image: &Element, sign: i32, out: &mut Terms) {
        let n = w.len();
        for (y, r) in image {
            if n - 1 + y.len() > self.max_order {
                continue;
            }
            let mut u = w[..pos].to_vec();
            u.extend_from_slice(y);
            u.extend_from_slice(&w[pos + 1..]);
            let mut v = self.compose(n, q, pos + 1, y.len(), r);
            if sign < 0 {
                for t in v.iter_mut() {
                    t.1 = -t.1.clone();
                }
            }
            out.push((u, v));
        }
    }

    /// The odd derivation with the given values on generators (letters
    /// without a value are sent to zero).
    pub fn apply_derivation(&self, gens: &Generators, x: &Element) -> Element {
        let mut terms = Vec::new();
        for (w, q) in x {
            let mut sign = 1;
            for pos in 0..w.len() {
                if let Some(img) = gens.get(&w[pos]) {
                    self.substitute(w, q, pos, img, sign, &mut terms);
                }
                if self.alphabet.odd(w[pos]) {
                    sign = -sign;
                }
            }
        }
        self.normalize(terms)
    }

    /// The degree-zero algebra (and module) morphism substituting every
    /// letter with a value (other letters are fixed).
    pub fn apply_morphism(&self, gens: &Generators, x: &Element) -> Element {
        let mut terms = Vec::new();
        for (w, q) in x {
            let mut cur: Terms = vec![(w.clone(), q.clone())];
            for pos in (0..w.len()).rev() {
                let Some(img) = gens.get(&w[pos]) else { continue };
                let mut next = Vec::new();
                for (u, v) in &cur {
                    self.substitute(u, v, pos, img, 1, &mut next);
                }
                cur = next;
            }
            terms.extend(cur);
        }
        self.normalize(terms)
    }

    /// A module map of the given parity, applied to the module letter of
    /// every word (with the Koszul sign of the preceding letters when odd).
    pub fn apply_module_map(&self, f: &Generators, odd: bool, x: &Element) -> Element {
        if odd {
            self.apply_derivation(f, x)
        } else {
            let mapped: Element = x
                .iter()
                .filter(|(w, _)| w.iter().any(|l| self.alphabet.module[*l] && f.contains_key(l)))
                .map(|(w, v)| (w.clone(), v.clone()))
                .collect();
            self.apply_morphism(f, &mapped)
        }
    }

    /// Value of an element on a tuple of dual letters, as an element of
    /// `P(n)` with inputs in tuple order.
    pub fn eval(&self, x: &Element, tuple: &[usize]) -> SparseVec {
        let (sorted, sigma) = Self::sort_perm(tuple);
        let Some(q) = x.get(&sorted) else { return Vec::new() };
        // sorted position k holds tuple position inv[k]
        let inv = perm::inverse(&sigma);
        let s = self.koszul_sign(&sorted, &inv) as i64 * self.stabilizer_order(&sorted) as i64;
        let v = self.act(&inv, q);
        v.into_iter().map(|(i, c)| (i, c * Q::from_integer(s.into()))).collect()
    }

    /// Inverse of [`FreeAlgebra::eval`] on one orbit: the element whose
    /// value on the sorted word `w` is `value`.
    pub fn from_value(&self, w: &[usize], value: &[(usize, Q)]) -> Element {
        let (sorted, _) = Self::sort_perm(w);
        let mut terms = Vec::new();
        let s = self.stabilizer_order(&sorted) as i64;
        let v: SparseVec = value
            .iter()
            .map(|(i, c)| (*i, c / Q::from_integer(s.into())))
            .collect();
        terms.push((w.to_vec(), v));
        self.normalize(terms)
    }

    /// All sorted words of order `n` with algebra letters from `alg` and,
    /// when `module` is given, exactly one letter from it.
    pub fn words(&self, n: usize, alg: &[usize], module: Option<&[usize]>) -> Vec<Word> {
        fn multisets(letters: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..letters.len() {
                cur.push(letters[i]);
                multisets(letters, k, i, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        match module {
            None => multisets(alg, n, 0, &mut Vec::new(), &mut out),
            Some(m) => {
                if n == 0 {
                    return out;
                }
                let mut base = Vec::new();
                multisets(alg, n - 1, 0, &mut Vec::new(), &mut base);
                for b in base {
                    for &l in m {
                        let mut w = b.clone();
                        w.push(l);
                        out.push(w);
                    }
                }
            }
        }
        out
    }

    /// Dimension of the order-`n` component spanned by the given words.
    pub fn component_dim(&self, words: &[Word]) -> usize {
        words
            .iter()
            .map(|w| {
                let d = self.pdim(w.len());
                let mut e = Echelon::new(d);
                for b in 0..d {
                    e.insert(&self.project(w, &[(b, Q::one())]));
                }
                e.rank()
            })
            .sum()
    }

    /// Total degree of a homogeneous element, if nonzero.
    pub fn degree(&self, x: &Element) -> Option<i32> {
        x.keys().next().map(|w| self.word_degree(w))
    }

    pub fn is_homogeneous(&self, x: &Element, degree: i32) -> bool {
        x.keys().all(|w| self.word_degree(w) == degree)
    }

    pub fn letters_used(&self, x: &Element) -> Vec<usize> {
        let mut l: Vec<usize> = x.keys().flatten().copied().collect();
        l.sort_unstable();
        l.dedup();
        l
    }

    fn parity_sign(&self, w: &[usize]) -> i32 {
        if self.word_odd(w) {
            -1
        } else {
            1
        }
    }

    /// `x` with every term multiplied by `(-1)^{|word|}`.
    pub fn twist(&self, x: &Element) -> Element {
        x.iter()
            .map(|(w, v)| {
                let v = if self.parity_sign(w) < 0 {
                    v.iter().map(|(i, c)| (*i, -c.clone())).collect()
                } else {
                    v.clone()
                };
                (w.clone(), v)
            })
            .collect()
    }
}

/// Values of `map` on every generator in `letters`, truncated.
pub fn on_generators(
    alg: &FreeAlgebra,
    letters: &[usize],
    map: impl Fn(&Element) -> Element,
) -> Generators {
    letters
        .iter()
        .map(|&l| (l, truncate(&map(&alg.generator(l)), alg.max_order)))
        .filter(|(_, x)| !x.is_empty())
        .collect()
}

/// True when every element of `gens` vanishes.
pub fn all_zero(gens: &Generators) -> bool {
    gens.values().all(|x| x.is_empty())
}

/// Lowest order with a nonzero term, over all generators.
pub fn lowest_order(gens: &Generators) -> Option<usize> {
    gens.values().flat_map(|x| x.keys().map(|w| w.len())).min()
}

pub fn is_zero_q(q: &Q) -> bool {
    q.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duality::quadratic_dual;
    use crate::operad::presets::{preset, Preset};
    use crate::algebras::random_element;

    fn dual_of(p: Preset) -> Arc<Operad> {
        Arc::new(Operad::new(quadratic_dual(&preset(p)).unwrap().presentation).unwrap())
    }

    #[test]
    fn tensor_algebra_dims() {
        for degs in [vec![0, 0], vec![1, 0], vec![1, 1, 0]] {
            let mut a = Alphabet::new();
            let v = a.push(false, &degs, "a");
            let w = a.push(true, &[1], "m");
            let alg = FreeAlgebra::new(dual_of(Preset::Assoc), a, 3);
            for n in 1..=3 {
                let d = degs.len();
                assert_eq!(alg.component_dim(&alg.words(n, &v, None)), d.pow(n as u32));
                assert_eq!(alg.component_dim(&alg.words(n, &v, Some(&w))), n * d.pow(n as u32 - 1));
            }
        }
    }

    #[test]
    fn free_lie_on_one_generator() {
        // even generator: only order 1; odd generator: orders 1 and 2
        for (deg, dims) in [(0, vec![1, 0, 0]), (1, vec![1, 1, 0])] {
            let mut a = Alphabet::new();
            let v = a.push(false, &[deg], "x");
            let alg = FreeAlgebra::new(dual_of(Preset::Comm), a, 3);
            let got: Vec<usize> = (1..=3).map(|n| alg.component_dim(&alg.words(n, &v, None))).collect();
            assert_eq!(got, dims);
        }
    }

    #[test]
    fn eval_round_trip() {
        let mut a = Alphabet::new();
        let v = a.push(false, &[1, 0, 1], "a");
        let alg = FreeAlgebra::new(dual_of(Preset::Assoc), a, 3);
        for w in alg.words(3, &v, None) {
            for b in 0..6 {
                let x = alg.normalize(vec![(w.clone(), vec![(b, Q::one())])]);
                if x.is_empty() {
                    continue;
                }
                let val = alg.eval(&x, &w);
                assert_eq!(alg.from_value(&w, &val), x);
            }
        }
    }

    #[test]
    fn zero_derivation() {
        let mut a = Alphabet::new();
        let v = a.push(false, &[1, 0], "a");
        let alg = FreeAlgebra::new(dual_of(Preset::Lie), a, 3);
        let x = alg.normalize(vec![(vec![v[0], v[1]], vec![(0, Q::one())])]);
        assert!(alg.apply_derivation(&Generators::new(), &x).is_empty());
    }

    fn tuples(letters: &[usize], n: usize) -> Vec<Vec<usize>> {
        (0..n).fold(vec![Vec::new()], |acc, _| {
            acc.into_iter()
                .flat_map(|t| letters.iter().map(move |&l| [t.clone(), vec![l]].concat()))
                .collect()
        })
    }

    #[test]
    fn linear_derivation_acts_slotwise() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut a = Alphabet::new();
        let v = a.push(false, &[0, 1, 1, 2], "a");
        let alg = FreeAlgebra::new(dual_of(Preset::Assoc), a, 3);
        // d1: a0 -> a1 - a2, a1 -> 2 a3, a2 -> a3
        let mut d = Generators::new();
        let lin = |pairs: &[(usize, i64)]| -> Element {
            let mut e = Element::new();
            for &(l, c) in pairs {
                add_into(&mut e, &alg.generator(v[l]), &Q::from_integer(c.into()));
            }
            e
        };
        d.insert(v[0], lin(&[(1, 1), (2, -1)]));
        d.insert(v[1], lin(&[(3, 2)]));
        d.insert(v[2], lin(&[(3, 1)]));
        for deg in 0..4 {
            let x = random_element(&alg, &v, None, deg, |_| true, &mut rng);
            let dx = alg.apply_derivation(&d, &x);
            for n in 1..=3 {
                for t in tuples(&v, n) {
                    let mut expected = Vec::new();
                    let mut sign = Q::one();
                    for pos in 0..n {
                        for (&l, img) in &d {
                            if let Some(c) = img.get(&vec![t[pos]]).and_then(|q| q.first()) {
                                let mut u = t.clone();
                                u[pos] = l;
                                let val = alg.eval(&x, &u);
                                expected = sparse_axpy(&expected, &(&sign * &c.1), &val);
                            }
                        }
                        if alg.alphabet.odd(t[pos]) {
                            sign = -sign;
                        }
                    }
                    assert_eq!(alg.eval(&dx, &t), expected, "{t:?}");
                }
            }
        }
    }
}
