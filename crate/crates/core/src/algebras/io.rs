//! JSON form of `(d, g, f)` structures. Maps are grouped by order and by
//! the degree of the source generator; coefficients are `"p/q"` strings.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Alphabet, Element, FreeAlgebra, Generators, StructureData};
use crate::operad::io::PresentationJson;
use crate::operad::Operad;
use crate::qalg::{format_q, parse_q, sparse_from_terms};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub generator: String,
    /// Sorted word of letter labels.
    pub word: Vec<String>,
    /// `(basis index of P(n), coefficient)`.
    pub value: Vec<(usize, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapBlockJson {
    pub order: usize,
    pub source_degree: i32,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StructureJson {
    pub operad: PresentationJson,
    pub max_order: usize,
    pub alphabet: Alphabet,
    pub v: Vec<String>,
    pub w: Vec<String>,
    pub w_dual: Vec<String>,
    /// Dimension per degree of each generating space.
    pub graded_dims: BTreeMap<String, BTreeMap<String, usize>>,
    pub d: Vec<MapBlockJson>,
    pub g: Vec<MapBlockJson>,
    pub f: Vec<MapBlockJson>,
}

fn graded(alpha: &Alphabet, letters: &[usize]) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for &l in letters {
        *out.entry(alpha.degrees[l].to_string()).or_insert(0) += 1;
    }
    out
}

pub(crate) fn blocks(alpha: &Alphabet, map: &Generators) -> Vec<MapBlockJson> {
    let mut grouped: BTreeMap<(usize, i32), Vec<TermJson>> = BTreeMap::new();
    for (&l, x) in map {
        for (w, v) in x {
            grouped.entry((w.len(), alpha.degrees[l])).or_default().push(TermJson {
                generator: alpha.labels[l].clone(),
                word: w.iter().map(|&k| alpha.labels[k].clone()).collect(),
                value: v.iter().map(|(i, c)| (*i, format_q(c))).collect(),
            });
        }
    }
    grouped
        .into_iter()
        .map(|((order, source_degree), terms)| MapBlockJson { order, source_degree, terms })
        .collect()
}

fn labels(alpha: &Alphabet, letters: &[usize]) -> Vec<String> {
    letters.iter().map(|&l| alpha.labels[l].clone()).collect()
}

impl StructureJson {
    pub fn from_structure(alg: &FreeAlgebra, s: &StructureData) -> Self {
        let a = &alg.alphabet;
        StructureJson {
            operad: PresentationJson::from_presentation(&alg.op.pres),
            max_order: alg.max_order,
            alphabet: a.clone(),
            v: labels(a, &s.v),
            w: labels(a, &s.w),
            w_dual: labels(a, &s.w_dual),
            graded_dims: BTreeMap::from([
                ("v".to_string(), graded(a, &s.v)),
                ("w".to_string(), graded(a, &s.w)),
                ("w_dual".to_string(), graded(a, &s.w_dual)),
            ]),
            d: blocks(a, &s.d),
            g: blocks(a, &s.g),
            f: blocks(a, &s.f),
        }
    }

    /// Rebuilds the algebra and the data. Terms are normalized again, so a
    /// file whose words are not in normal form is still read correctly.
    pub fn to_structure(&self) -> Result<(FreeAlgebra, StructureData)> {
        let a = &self.alphabet;
        if a.module.len() != a.degrees.len() || a.labels.len() != a.degrees.len() {
            return Err(Error::Parse("alphabet fields have different lengths".into()));
        }
        let index = letter_index(a);
        if index.len() != a.labels.len() {
            return Err(Error::Parse("duplicate letter labels".into()));
        }
        let look = |l: &str| index.get(l).copied().ok_or_else(|| Error::Parse(format!("unknown letter {l:?}")));
        let group = |ls: &[String]| ls.iter().map(|l| look(l)).collect::<Result<Vec<_>>>();
        let op = Operad::new(self.operad.to_presentation()?)?;
        let alg = FreeAlgebra::new(Arc::new(op), a.clone(), self.max_order);
        let read = |bs: &[MapBlockJson]| read_blocks(&alg, bs);
        let data = StructureData {
            v: group(&self.v)?,
            w: group(&self.w)?,
            w_dual: group(&self.w_dual)?,
            d: read(&self.d)?,
            g: read(&self.g)?,
            f: read(&self.f)?,
        };
        Ok((alg, data))
    }
}

fn letter_index(a: &Alphabet) -> BTreeMap<&str, usize> {
    a.labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect()
}

/// Reads map blocks against the alphabet of `alg`, normalizing every term.
pub(crate) fn read_blocks(alg: &FreeAlgebra, bs: &[MapBlockJson]) -> Result<Generators> {
    let index = letter_index(&alg.alphabet);
    let look = |l: &str| index.get(l).copied().ok_or_else(|| Error::Parse(format!("unknown letter {l:?}")));
    let mut out = Generators::new();
    for b in bs {
        if b.order == 0 || b.order > alg.max_order {
            return Err(Error::Parse(format!("block order {} outside 1..={}", b.order, alg.max_order)));
        }
        let dim = alg.pdim(b.order);
        for t in &b.terms {
            let word = t.word.iter().map(|l| look(l)).collect::<Result<Vec<_>>>()?;
            if word.len() != b.order {
                return Err(Error::Parse(format!("word {:?} is not of order {}", t.word, b.order)));
            }
            let mut v = Vec::new();
            for (i, c) in &t.value {
                if *i >= dim {
                    return Err(Error::Parse(format!("basis index {i} out of range {dim}")));
                }
                v.push((*i, parse_q(c)?));
            }
            let x = alg.normalize(vec![(word, sparse_from_terms(v))]);
            let e: &mut Element = out.entry(look(&t.generator)?).or_default();
            super::add_into(e, &x, &num_traits::One::one());
        }
    }
    out.retain(|_, x| !x.is_empty());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebras::{frobenius_instance, FrobeniusAlgebra};
    use crate::duality::quadratic_dual;
    use crate::operad::presets::{preset, Preset};

    #[test]
    fn round_trip() {
        let op = Arc::new(Operad::new(quadratic_dual(&preset(Preset::Assoc)).unwrap().presentation).unwrap());
        let inst = frobenius_instance(op, &FrobeniusAlgebra::dual_numbers(), 3);
        let j = StructureJson::from_structure(&inst.alg, &inst.data);
        let text = serde_json::to_string(&j).unwrap();
        let back: StructureJson = serde_json::from_str(&text).unwrap();
        let (_, data) = back.to_structure().unwrap();
        assert_eq!(data.d, inst.data.d);
        assert_eq!(data.g, inst.data.g);
        assert_eq!(data.f, inst.data.f);
        assert_eq!(data.w_dual, inst.data.w_dual);
    }
}
