//! JSON encodings shared by the library and the command line.
//!
//! Matrices are `{"rows", "cols", "data"}` with `data` the row-major list of
//! `[re, im]` pairs. [`to_json`] emits keys in sorted order and floats in
//! shortest round-trip form, so equal values give byte-identical text.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flagorbit::{OrbitPoint, PartialFlag};
use crate::jacobi::MoserData;
use crate::linalg::{c, ComplexMatrix};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let (rows, cols) = m.shape();
        let data = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .map(|(i, j)| [m[(i, j)].re, m[(i, j)].im])
            .collect();
        MatrixJson { rows, cols, data }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.data.len() != self.rows * self.cols {
            return Err(Error::Dimension(format!(
                "field data has {} entries, expected rows * cols = {}",
                self.data.len(),
                self.rows * self.cols
            )));
        }
        if self.data.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Precondition(
                "field data contains a non-finite entry".into(),
            ));
        }
        Ok(ComplexMatrix::from_fn(self.rows, self.cols, |i, j| {
            let [re, im] = self.data[i * self.cols + j];
            c(re, im)
        }))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlagJson {
    pub n: usize,
    #[serde(rename = "K")]
    pub dims: Vec<usize>,
    pub rep: MatrixJson,
}

impl FlagJson {
    pub fn from_flag(v: &PartialFlag) -> Self {
        FlagJson {
            n: v.n(),
            dims: v.dims().to_vec(),
            rep: MatrixJson::from_matrix(v.rep()),
        }
    }

    pub fn to_flag(&self) -> Result<PartialFlag> {
        let rep = self.rep.to_matrix()?;
        if rep.shape() != (self.n, self.n) {
            return Err(Error::Dimension(format!(
                "field rep is {}x{}, expected n = {}",
                rep.nrows(),
                rep.ncols(),
                self.n
            )));
        }
        PartialFlag::new(rep, self.dims.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitJson {
    pub lambda: Vec<f64>,
    #[serde(rename = "L")]
    pub l: MatrixJson,
}

impl OrbitJson {
    pub fn from_orbit(p: &OrbitPoint) -> Self {
        OrbitJson {
            lambda: p.lambda().to_vec(),
            l: MatrixJson::from_matrix(p.matrix()),
        }
    }

    pub fn to_orbit(&self) -> Result<OrbitPoint> {
        OrbitPoint::with_lambda(self.l.to_matrix()?, &self.lambda)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MoserJson {
    pub lambda: Vec<f64>,
    pub x: Vec<f64>,
}

impl MoserJson {
    pub fn from_moser(d: &MoserData) -> Self {
        MoserJson {
            lambda: d.lambda().to_vec(),
            x: d.x().to_vec(),
        }
    }

    pub fn to_moser(&self) -> Result<MoserData> {
        MoserData::new(self.lambda.clone(), self.x.clone())
    }
}

/// Compact JSON with sorted object keys.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Json(e.to_string()))?;
    serde_json::to_string(&v).map_err(|e| Error::Json(e.to_string()))
}

/// Indented JSON with sorted object keys.
pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Json(e.to_string()))?;
    serde_json::to_string_pretty(&v).map_err(|e| Error::Json(e.to_string()))
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))
}
