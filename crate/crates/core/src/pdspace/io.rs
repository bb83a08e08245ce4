use serde::{Deserialize, Serialize};

use super::{ComplexJson, PdAlgebra, PdStructure, SimplicialComplex};
use crate::algebras::io::{blocks, read_blocks, MapBlockJson, StructureJson};
use crate::algebras::{FreeAlgebra, Generators, StructureData};
use crate::qalg::{format_q, parse_q, Q};
use crate::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChiJson {
    pub simplex: Vec<usize>,
    pub map: Vec<MapBlockJson>,
}

/// A built structure on disk: the algebra data plus the complex, the
/// fundamental cycle (one coefficient per top simplex, in index order), the
/// truncation order and `χ` per simplex.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PdFile {
    #[serde(flatten)]
    pub structure: StructureJson,
    pub complex: ComplexJson,
    pub order: usize,
    pub mu: Vec<String>,
    pub chi: Vec<ChiJson>,
}

/// A structure file read back into memory.
pub struct LoadedPd {
    pub complex: SimplicialComplex,
    pub alg: FreeAlgebra,
    pub data: StructureData,
    pub order: usize,
    pub mu: Vec<(usize, Q)>,
    pub chi: Vec<Generators>,
}

impl PdFile {
    pub fn from_structure(s: &PdStructure) -> Self {
        let c = &s.pd.complex;
        let a = &s.pd.alg.alphabet;
        PdFile {
            structure: StructureJson::from_structure(&s.pd.alg, &s.data()),
            complex: c.to_json(),
            order: s.order,
            mu: s.mu.iter().map(|(_, q)| format_q(q)).collect(),
            chi: s.chi.iter().enumerate().map(|(i, m)| ChiJson { simplex: c.simplices[i].clone(), map: blocks(a, m) }).collect(),
        }
    }

    pub fn load(&self) -> Result<LoadedPd> {
        let complex = SimplicialComplex::from_json(&self.complex)?;
        let (alg, data) = self.structure.to_structure()?;
        let top: Vec<usize> = (0..complex.len()).filter(|&i| complex.dim(i) == complex.top_dim()).collect();
        if self.mu.len() != top.len() {
            return Err(Error::Parse(format!("mu has {} entries for {} top simplices", self.mu.len(), top.len())));
        }
        let mu = top.iter().zip(&self.mu).map(|(&i, q)| Ok((i, parse_q(q)?))).collect::<Result<Vec<_>>>()?;
        let mut chi = vec![Generators::new(); complex.len()];
        for c in &self.chi {
            let i = complex.find(&c.simplex).ok_or_else(|| Error::Parse(format!("chi on unknown simplex {:?}", c.simplex)))?;
            chi[i] = read_blocks(&alg, &c.map)?;
        }
        Ok(LoadedPd { complex, alg, data, order: self.order, mu, chi })
    }
}

impl LoadedPd {
    /// The letters the complex and order call for, to compare with the file.
    pub fn expected_letters(&self) -> PdAlgebra {
        PdAlgebra::new(self.complex.clone(), self.order)
    }
}
