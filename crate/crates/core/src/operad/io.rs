//! JSON form of presentations. Rationals are written as `"p/q"` strings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{FreeComponent, GenBlock, GeneratorSet, Presentation};
use crate::qalg::{format_q, parse_q, sparse_from_dense, sparse_to_dense, RatMatrix, Q};
use crate::trees::{Color, Signature};
use crate::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlockJson {
    /// `[left input, right input, output]`.
    pub colors: [Color; 3],
    pub dim: usize,
    /// Swap action as a row-major matrix.
    pub swap: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RelationsJson {
    pub signature: Signature,
    /// Labels of the free basis the vectors are written in (informational,
    /// checked on load when present).
    #[serde(default)]
    pub basis: Vec<String>,
    pub vectors: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PresentationJson {
    pub name: String,
    pub colors: Vec<Color>,
    pub cyclic: bool,
    pub generators: Vec<BlockJson>,
    pub relations: Vec<RelationsJson>,
}

fn matrix_strings(m: &RatMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(format_q).collect())
        .collect()
}

fn parse_matrix(rows: &[Vec<String>], r: usize, c: usize) -> Result<RatMatrix> {
    if rows.len() != r || rows.iter().any(|x| x.len() != c) {
        return Err(Error::Shape(format!("expected a {r}x{c} matrix")));
    }
    if r == 0 || c == 0 {
        return Ok(RatMatrix::zeros(r, c));
    }
    let parsed: Result<Vec<Vec<Q>>> = rows
        .iter()
        .map(|row| row.iter().map(|s| parse_q(s)).collect())
        .collect();
    Ok(RatMatrix::from_rows(parsed?))
}

impl PresentationJson {
    pub fn from_presentation(p: &Presentation) -> Self {
        PresentationJson {
            name: p.name.clone(),
            colors: p.colors(),
            cyclic: p.gens.cyclic,
            generators: p
                .gens
                .blocks
                .iter()
                .map(|(&(x, y, z), b)| BlockJson {
                    colors: [x, y, z],
                    dim: b.dim,
                    swap: matrix_strings(&b.swap),
                })
                .collect(),
            relations: p
                .relations
                .iter()
                .map(|(sig, rels)| {
                    let fc = FreeComponent::new(&p.gens, sig);
                    RelationsJson {
                        signature: sig.clone(),
                        basis: (0..fc.dim()).map(|i| fc.label(i)).collect(),
                        vectors: rels
                            .iter()
                            .map(|r| sparse_to_dense(r, fc.dim()).iter().map(format_q).collect())
                            .collect(),
                    }
                })
                .collect(),
        }
    }

    pub fn to_presentation(&self) -> Result<Presentation> {
        let mut blocks = BTreeMap::new();
        let dims: BTreeMap<(Color, Color, Color), usize> = self
            .generators
            .iter()
            .map(|b| ((b.colors[0], b.colors[1], b.colors[2]), b.dim))
            .collect();
        for b in &self.generators {
            let [x, y, z] = b.colors;
            let target = dims.get(&(y, x, z)).copied().unwrap_or(0);
            let swap = parse_matrix(&b.swap, target, b.dim)?;
            blocks.insert((x, y, z), GenBlock { dim: b.dim, swap });
        }
        let gens = GeneratorSet {
            blocks,
            cyclic: self.cyclic,
        };
        gens.validate()?;
        let mut relations = BTreeMap::new();
        for r in &self.relations {
            let fc = FreeComponent::new(&gens, &r.signature);
            if !r.basis.is_empty() {
                let labels: Vec<String> = (0..fc.dim()).map(|i| fc.label(i)).collect();
                if labels != r.basis {
                    return Err(Error::Presentation(format!(
                        "relation basis for {} does not match the canonical free basis",
                        r.signature
                    )));
                }
            }
            let mut vecs = Vec::new();
            for v in &r.vectors {
                if v.len() != fc.dim() {
                    return Err(Error::Shape(format!(
                        "relation of length {} in a free component of dimension {}",
                        v.len(),
                        fc.dim()
                    )));
                }
                let dense: Result<Vec<Q>> = v.iter().map(|s| parse_q(s)).collect();
                vecs.push(sparse_from_dense(&dense?));
            }
            relations
                .entry(r.signature.clone())
                .or_insert_with(Vec::new)
                .extend(vecs);
        }
        let p = Presentation {
            name: self.name.clone(),
            gens,
            relations,
        };
        p.validate()?;
        Ok(p)
    }
}

pub fn to_json(p: &Presentation) -> Result<String> {
    Ok(serde_json::to_string_pretty(&PresentationJson::from_presentation(p))?)
}

pub fn from_json(s: &str) -> Result<Presentation> {
    let j: PresentationJson = serde_json::from_str(s)?;
    j.to_presentation()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::presets::{preset, Preset};

    #[test]
    fn round_trip() {
        for p in Preset::ALL {
            let pres = preset(p);
            let back = from_json(&to_json(&pres).unwrap()).unwrap();
            assert_eq!(back.gens, pres.gens);
            assert_eq!(back.relations, pres.relations);
        }
    }

    #[test]
    fn rejects_bad_length() {
        let mut j = PresentationJson::from_presentation(&preset(Preset::Lie));
        j.relations[0].vectors[0].pop();
        j.relations[0].basis.clear();
        assert!(j.to_presentation().is_err());
    }
}
