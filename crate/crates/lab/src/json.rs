//! JSON forms of matrices, algebras, elements, maps and finite structures.

use std::collections::BTreeMap;
use std::path::Path;

use effectus_core::effect_structs::{
    semilattice_bridge, BooleanAlgebra, FiniteConvexSet, FiniteOrtholattice, FiniteScalars, Reading, Semilattice, TableEa,
};
use effectus_core::{AlgElement, CMatrix, CpMap, FdAlgebra, C64};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::LabError;

/// Row-major; `im` may be omitted for real matrices.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let re = m.data().iter().map(|z| z.re).collect();
        let im: Vec<f64> = m.data().iter().map(|z| z.im).collect();
        let im = if im.iter().all(|x| *x == 0.0) { None } else { Some(im) };
        MatrixJson { rows: m.rows, cols: m.cols, re, im }
    }

    pub fn to_matrix(&self) -> Result<CMatrix, LabError> {
        let n = self.rows * self.cols;
        if self.re.len() != n || self.im.as_ref().is_some_and(|v| v.len() != n) {
            return Err(LabError::Input(format!("matrix data must have rows·cols = {n} entries")));
        }
        let im = self.im.clone().unwrap_or_else(|| vec![0.0; n]);
        Ok(CMatrix::from_vec(self.rows, self.cols, self.re.iter().zip(im).map(|(r, i)| C64::new(*r, i)).collect()))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct AlgebraJson {
    pub blocks: Vec<usize>,
}

impl AlgebraJson {
    pub fn to_algebra(&self) -> Result<FdAlgebra, LabError> {
        Ok(FdAlgebra::new(self.blocks.clone())?)
    }
}

/// An element as one matrix per block; the algebra is read off the shapes
/// unless given.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ElementJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraJson>,
    pub mats: Vec<MatrixJson>,
}

impl ElementJson {
    pub fn from_element(a: &AlgElement) -> Self {
        ElementJson { algebra: Some(AlgebraJson { blocks: a.algebra.blocks.clone() }), mats: a.mats.iter().map(MatrixJson::from_matrix).collect() }
    }

    pub fn to_element(&self, expected: Option<&FdAlgebra>) -> Result<AlgElement, LabError> {
        let mats = self.mats.iter().map(MatrixJson::to_matrix).collect::<Result<Vec<_>, _>>()?;
        let alg = match &self.algebra {
            Some(a) => a.to_algebra()?,
            None => FdAlgebra::new(mats.iter().map(|m| m.rows).collect())?,
        };
        if let Some(e) = expected {
            if *e != alg {
                return Err(LabError::Input(format!("element lives in {:?}, expected {:?}", alg.blocks, e.blocks)));
            }
        }
        Ok(AlgElement::new(alg, mats)?)
    }
}

/// `{"source", "target", "kraus": {"i,j": [matrix, …]}}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MapJson {
    pub source: AlgebraJson,
    pub target: AlgebraJson,
    pub kraus: BTreeMap<String, Vec<MatrixJson>>,
}

impl MapJson {
    pub fn from_map(f: &CpMap) -> Self {
        let mut kraus = BTreeMap::new();
        for i in 0..f.source.n_blocks() {
            for j in 0..f.target.n_blocks() {
                let ks = f.kraus(i, j);
                if !ks.is_empty() {
                    kraus.insert(format!("{i},{j}"), ks.iter().map(MatrixJson::from_matrix).collect());
                }
            }
        }
        MapJson {
            source: AlgebraJson { blocks: f.source.blocks.clone() },
            target: AlgebraJson { blocks: f.target.blocks.clone() },
            kraus,
        }
    }

    pub fn to_map(&self) -> Result<CpMap, LabError> {
        let (s, t) = (self.source.to_algebra()?, self.target.to_algebra()?);
        let mut f = CpMap::zero(&s, &t);
        for (key, ks) in &self.kraus {
            let (i, j) = key
                .split_once(',')
                .and_then(|(i, j)| Some((i.trim().parse::<usize>().ok()?, j.trim().parse::<usize>().ok()?)))
                .ok_or_else(|| LabError::Input(format!("Kraus key {key:?} is not \"i,j\"")))?;
            if i >= s.n_blocks() || j >= t.n_blocks() {
                return Err(LabError::Input(format!("Kraus key {key:?} out of range")));
            }
            for k in ks {
                let v = k.to_matrix()?;
                if v.rows != s.blocks[i] || v.cols != t.blocks[j] {
                    return Err(LabError::Input(format!("Kraus operator at {key:?} must be {}×{}", s.blocks[i], t.blocks[j])));
                }
                f.kraus_mut(i, j).push(v);
            }
        }
        Ok(f)
    }
}

/// A finite effect algebra (optionally a monoid) as tables over carrier
/// indices. `ovee` lists the defined sums `[i, j, k]` meaning `i ⊻ j = k`;
/// each is recorded symmetrically.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StructureJson {
    pub carrier: Vec<String>,
    pub ovee: Vec<[usize; 3]>,
    pub perp: Vec<usize>,
    #[serde(default)]
    pub odot: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    pub zero: Option<usize>,
}

impl StructureJson {
    pub fn to_table(&self) -> Result<TableEa, LabError> {
        let n = self.carrier.len();
        if n == 0 {
            return Err(LabError::Input("carrier is empty".into()));
        }
        let mut ovee = vec![vec![None; n]; n];
        for &[i, j, k] in &self.ovee {
            if i >= n || j >= n || k >= n {
                return Err(LabError::Input(format!("ovee entry [{i}, {j}, {k}] out of range")));
            }
            for (a, b) in [(i, j), (j, i)] {
                if ovee[a][b].is_some_and(|v| v != k) {
                    return Err(LabError::Input(format!("ovee entry for ({a}, {b}) given twice")));
                }
                ovee[a][b] = Some(k);
            }
        }
        if self.perp.len() != n || self.perp.iter().any(|&p| p >= n) {
            return Err(LabError::Input("perp must map the carrier to itself".into()));
        }
        let zero = match self.zero {
            Some(z) if z < n => z,
            Some(z) => return Err(LabError::Input(format!("zero = {z} out of range"))),
            None => (0..n)
                .find(|&z| (0..n).all(|a| ovee[z][a] == Some(a)))
                .ok_or_else(|| LabError::Input("no neutral element for ovee; give \"zero\"".into()))?,
        };
        let t = TableEa::new(self.carrier.clone(), zero, self.perp[zero], self.perp.clone(), ovee)?;
        match &self.odot {
            Some(o) => Ok(t.with_odot(o.clone())?),
            None => Ok(t),
        }
    }
}

/// A finite ortholattice by its order relation (pairs `[a, b]` with
/// `a ≤ b`, closed transitively) and orthocomplement.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LatticeJson {
    pub carrier: Vec<String>,
    pub leq: Vec<[usize; 2]>,
    pub perp: Vec<usize>,
}

impl LatticeJson {
    pub fn to_lattice(&self) -> Result<FiniteOrtholattice, LabError> {
        let names: Vec<&str> = self.carrier.iter().map(String::as_str).collect();
        let covers: Vec<(usize, usize)> = self.leq.iter().map(|&[a, b]| (a, b)).collect();
        if covers.iter().any(|&(a, b)| a >= names.len() || b >= names.len()) {
            return Err(LabError::Input("leq entry out of range".into()));
        }
        Ok(FiniteOrtholattice::from_covers(&names, &covers, self.perp.clone())?)
    }
}

/// Scalars for convex sets: a Boolean algebra with `atoms` atoms (`1`
/// is the two-element monoid) and how its partial sum is read.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ScalarsJson {
    #[serde(default = "one_atom")]
    pub atoms: u32,
    pub reading: ReadingJson,
}

fn one_atom() -> u32 {
    1
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "lowercase")]
pub enum ReadingJson {
    Strict,
    Join,
}

impl ScalarsJson {
    pub fn to_scalars(&self) -> Result<FiniteScalars, LabError> {
        let reading = match self.reading {
            ReadingJson::Strict => Reading::Strict,
            ReadingJson::Join => Reading::Join,
        };
        Ok(FiniteScalars { alg: BooleanAlgebra::new(self.atoms)?, reading })
    }
}

/// A finite convex set, either from a join table (scalars `2` with joins)
/// or from `h` on its non-point distributions; point masses map to their
/// point.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConvexJson {
    pub scalars: ScalarsJson,
    pub carrier: Vec<String>,
    #[serde(default)]
    pub join: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    pub h: Vec<HEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HEntry {
    pub dist: Vec<u32>,
    pub value: usize,
}

impl ConvexJson {
    pub fn to_convex(&self) -> Result<FiniteConvexSet, LabError> {
        let m = self.scalars.to_scalars()?;
        if let Some(j) = &self.join {
            if m != FiniteScalars::two(Reading::Join) {
                return Err(LabError::Input("a join table needs scalars 2 read with joins".into()));
            }
            if j.len() != self.carrier.len() {
                return Err(LabError::Input("join table size differs from the carrier".into()));
            }
            let mut x = semilattice_bridge(&Semilattice::new(j.clone())?);
            x.names = self.carrier.clone();
            return Ok(x);
        }
        let table: BTreeMap<&[u32], usize> = self.h.iter().map(|e| (e.dist.as_slice(), e.value)).collect();
        let missing = std::cell::Cell::new(false);
        let x = FiniteConvexSet::from_fn(m, self.carrier.clone(), |p| match table.get(p) {
            Some(&v) => v,
            None => {
                let nz: Vec<usize> = (0..p.len()).filter(|&i| p[i] != 0).collect();
                if nz.len() == 1 && p[nz[0]] == m.alg.full() {
                    nz[0]
                } else {
                    missing.set(true);
                    0
                }
            }
        })?;
        if missing.get() {
            return Err(LabError::Input("h is missing a value for some distribution".into()));
        }
        Ok(x)
    }
}

/// Nmiu-free dilation triple `(P, ρ, h)` for `dilate mediate`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TripleJson {
    pub p: AlgebraJson,
    pub rho: MapJson,
    pub h: MapJson,
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, LabError> {
    let text = std::fs::read_to_string(path).map_err(|e| LabError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| LabError::Input(format!("{}: line {}, column {}: {e}", path.display(), e.line(), e.column())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use effectus_core::cpmap::Normalization;
    use effectus_core::Rng;

    #[test]
    fn map_round_trip() {
        let mut rng = Rng::new(3);
        let f = CpMap::random(&FdAlgebra::new(vec![2, 1]).unwrap(), &FdAlgebra::matrix(3), 2, Normalization::Unital, &mut rng);
        let j = MapJson::from_map(&f);
        let text = serde_json::to_string(&j).unwrap();
        let g = serde_json::from_str::<MapJson>(&text).unwrap().to_map().unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn rejects_bad_shapes() {
        let m = MatrixJson { rows: 2, cols: 2, re: vec![1.0; 3], im: None };
        assert!(m.to_matrix().is_err());
        let j: MapJson = serde_json::from_str(
            r#"{"source":{"blocks":[2]},"target":{"blocks":[2]},"kraus":{"0,0":[{"rows":1,"cols":2,"re":[1,0]}]}}"#,
        )
        .unwrap();
        assert!(j.to_map().is_err());
        let j: MapJson = serde_json::from_str(r#"{"source":{"blocks":[2]},"target":{"blocks":[2]},"kraus":{"0;0":[]}}"#).unwrap();
        assert!(j.to_map().is_err());
    }

    #[test]
    fn structure_finds_zero() {
        let s: StructureJson =
            serde_json::from_str(r#"{"carrier":["0","1"],"ovee":[[0,0,0],[0,1,1]],"perp":[1,0],"odot":[[0,0],[0,1]]}"#).unwrap();
        let t = s.to_table().unwrap();
        assert_eq!(t.size(), 2);
    }

    #[test]
    fn convex_from_h_entries() {
        let c: ConvexJson = serde_json::from_str(
            r#"{"scalars":{"reading":"join"},"carrier":["a","b"],"h":[{"dist":[1,1],"value":1}]}"#,
        )
        .unwrap();
        let x = c.to_convex().unwrap();
        assert!(x.verify(3).passed());
        let c: ConvexJson = serde_json::from_str(r#"{"scalars":{"reading":"join"},"carrier":["a","b"]}"#).unwrap();
        assert!(c.to_convex().is_err());
    }
}
