//! Reading JSON inputs and recognizing their kind from the object keys.

use std::fmt;
use std::io::Read;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde_json::Value;
use tnn_orbits::ampli::{ZData, ZDataJson};
use tnn_orbits::flagorbit::{OrbitPoint, PartialFlag};
use tnn_orbits::io::{FlagJson, MatrixJson, MoserJson, OrbitJson};
use tnn_orbits::jacobi::MoserData;
use tnn_orbits::ComplexMatrix;

/// An input or usage error; the process exits with status 2.
#[derive(Debug)]
pub struct Failure(pub String);

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<tnn_orbits::Error> for Failure {
    fn from(e: tnn_orbits::Error) -> Self {
        Failure(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure(e.to_string())
    }
}

pub type CliResult<T> = Result<T, Failure>;

pub enum Input {
    Matrix(ComplexMatrix),
    Flag(PartialFlag),
    Orbit(OrbitPoint),
    Moser(MoserData),
    Z(ZData),
}

impl Input {
    pub fn kind(&self) -> &'static str {
        match self {
            Input::Matrix(_) => "matrix",
            Input::Flag(_) => "flag",
            Input::Orbit(_) => "orbit point",
            Input::Moser(_) => "Moser data",
            Input::Z(_) => "Z data",
        }
    }
}

/// File contents, with `-` meaning standard input.
pub fn read_text(path: &Path) -> CliResult<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn decode<T: DeserializeOwned>(v: Value, origin: &str) -> CliResult<T> {
    serde_json::from_value(v).map_err(|e| Failure(format!("{origin}: {e}")))
}

/// Kind is chosen by key: `Z`, `L`, `K`, `x`, then `data`.
pub fn parse(text: &str, origin: &str) -> CliResult<Input> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| Failure(format!("{origin}: invalid JSON: {e}")))?;
    let obj = v
        .as_object()
        .ok_or_else(|| Failure(format!("{origin}: expected a JSON object")))?;
    let ctx = |e: tnn_orbits::Error| Failure(format!("{origin}: {e}"));
    if obj.contains_key("Z") {
        Ok(Input::Z(
            ZData::from_json(&decode::<ZDataJson>(v, origin)?).map_err(ctx)?,
        ))
    } else if obj.contains_key("L") {
        Ok(Input::Orbit(
            decode::<OrbitJson>(v, origin)?.to_orbit().map_err(ctx)?,
        ))
    } else if obj.contains_key("K") {
        Ok(Input::Flag(
            decode::<FlagJson>(v, origin)?.to_flag().map_err(ctx)?,
        ))
    } else if obj.contains_key("x") {
        Ok(Input::Moser(
            decode::<MoserJson>(v, origin)?.to_moser().map_err(ctx)?,
        ))
    } else if obj.contains_key("data") {
        Ok(Input::Matrix(
            decode::<MatrixJson>(v, origin)?.to_matrix().map_err(ctx)?,
        ))
    } else {
        Err(Failure(format!(
            "{origin}: unrecognized object; expected one of the fields Z, L, K, x or data"
        )))
    }
}

pub fn load(path: &Path) -> CliResult<Input> {
    parse(&read_text(path)?, &path.display().to_string())
}

pub fn wrong_kind(input: &Input, wanted: &str) -> Failure {
    Failure(format!("expected {wanted} input, got {}", input.kind()))
}

pub fn load_matrix(path: &Path) -> CliResult<ComplexMatrix> {
    match load(path)? {
        Input::Matrix(m) => Ok(m),
        other => Err(wrong_kind(&other, "a matrix")),
    }
}

pub fn load_z(path: &Path) -> CliResult<ZData> {
    match load(path)? {
        Input::Z(z) => Ok(z),
        other => Err(wrong_kind(&other, "Z data")),
    }
}
