//! Browser bindings for three operations: the twist map on a real unitary
//! matrix, a Toda trajectory from Moser data, and a Kahler gradient-flow
//! trajectory from the same starting point.
//!
//! Matrices cross the boundary as row-major `Float64Array`s. Trajectories are
//! the concatenated real symmetric matrices `-iL(t)` for each sample time.

use tnn_orbits::flagorbit::{twist_flag, OrbitPoint, PartialFlag};
use tnn_orbits::flows::{kahler_flow, uniform_times};
use tnn_orbits::jacobi::{jacobi_from_moser, MoserData};
use tnn_orbits::linalg::{diag_real, real_matrix, C64, I};
use tnn_orbits::toda::toda_symes;
use wasm_bindgen::prelude::*;

fn square_side(len: usize) -> Result<usize, String> {
    let n = (len as f64).sqrt().round() as usize;
    if n * n != len || n == 0 {
        return Err(format!("expected a square matrix, got {len} entries"));
    }
    Ok(n)
}

fn symmetric_part_rows(l: &OrbitPoint) -> Vec<f64> {
    let h = l.matrix() * (-I);
    let n = h.nrows();
    (0..n * n).map(|k| h[(k / n, k % n)].re).collect()
}

fn trajectory(
    lambda: &[f64],
    x: &[f64],
    t1: f64,
    samples: usize,
    step: impl Fn(&OrbitPoint, f64) -> tnn_orbits::Result<OrbitPoint>,
) -> Result<Vec<f64>, String> {
    if !(t1.is_finite() && t1 > 0.0) || samples == 0 {
        return Err("t1 must be positive and samples nonzero".into());
    }
    let l0 =
        jacobi_from_moser(&MoserData::new(lambda.to_vec(), x.to_vec()).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    for t in uniform_times(0.0, t1, samples) {
        out.extend(symmetric_part_rows(
            &step(&l0, t).map_err(|e| e.to_string())?,
        ));
    }
    Ok(out)
}

/// Twisted representative of the complete flag of a real unitary matrix.
pub fn twist_rows(data: &[f64]) -> Result<Vec<f64>, String> {
    let n = square_side(data.len())?;
    let flag = PartialFlag::complete(real_matrix(n, n, data)).map_err(|e| e.to_string())?;
    let t = twist_flag(&flag).map_err(|e| e.to_string())?;
    let rep = t.rep();
    Ok((0..n * n).map(|k| rep[(k / n, k % n)].re).collect())
}

/// Symes solution of the Toda flow from the Jacobi matrix with Moser data `(lambda, x)`.
pub fn toda_rows(lambda: &[f64], x: &[f64], t1: f64, samples: usize) -> Result<Vec<f64>, String> {
    trajectory(lambda, x, t1, samples, toda_symes)
}

/// Kahler flow driven by `-i diag(mu)` from the same Jacobi start.
pub fn kahler_rows(
    lambda: &[f64],
    x: &[f64],
    mu: &[f64],
    t1: f64,
    samples: usize,
) -> Result<Vec<f64>, String> {
    if mu.len() != lambda.len() {
        return Err(format!(
            "mu has {} entries, lambda has {}",
            mu.len(),
            lambda.len()
        ));
    }
    let drive = diag_real(mu) * C64::new(0.0, -1.0);
    trajectory(lambda, x, t1, samples, |l0, t| kahler_flow(l0, &drive, t))
}

#[wasm_bindgen]
pub fn twist(data: &[f64]) -> Result<Vec<f64>, JsError> {
    twist_rows(data).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn toda_trajectory(
    lambda: &[f64],
    x: &[f64],
    t1: f64,
    samples: usize,
) -> Result<Vec<f64>, JsError> {
    toda_rows(lambda, x, t1, samples).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn kahler_trajectory(
    lambda: &[f64],
    x: &[f64],
    mu: &[f64],
    t1: f64,
    samples: usize,
) -> Result<Vec<f64>, JsError> {
    kahler_rows(lambda, x, mu, t1, samples).map_err(|e| JsError::new(&e))
}
