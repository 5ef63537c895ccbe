//! The symmetric Toda flow `dL/dt = [L, pi_k(-iL)]` on adjoint orbits.

use crate::error::{Error, Result};
use crate::flagorbit::{twist_orbit, OrbitPoint};
use crate::flows::{integrate_lax, kahler_flow, Trajectory, DEFAULT_DRIFT_TOL};
use crate::linalg::{
    c, commutator, diag_real, herm_eig, k_factor_scaled, k_project, max_abs, max_abs_diff,
    ComplexMatrix, CLUSTER_TOL, I,
};

/// `dL/dt` of the Toda flow.
pub fn toda_rhs(l: &ComplexMatrix) -> ComplexMatrix {
    commutator(l, &k_project(&(l * (-I))))
}

/// `-i diag(n-1, ..., 1, 0)`; on tridiagonal `L` the Toda flow is the
/// normal-metric gradient flow driven by this matrix.
pub fn toda_drive(n: usize) -> ComplexMatrix {
    let d: Vec<f64> = (0..n).map(|i| (n - 1 - i) as f64).collect();
    diag_real(&d) * c(0.0, -1.0)
}

/// Symes' solution `L(t) = k^{-1} L_0 k` with `k = Pi^U(exp(-t iL_0))`,
/// evaluated through the eigendecomposition of `-iL_0`.
pub fn toda_symes(l0: &OrbitPoint, t: f64) -> Result<OrbitPoint> {
    let (lambda, u) = herm_eig(&(l0.matrix() * (-I)))?;
    let scaled: Vec<f64> = lambda.iter().map(|x| t * x).collect();
    let k = &u * k_factor_scaled(&scaled, &u.adjoint())?;
    OrbitPoint::with_lambda(k.adjoint() * l0.matrix() * &k, l0.lambda())
}

/// RK4 integration of the Toda equation with drift control.
pub fn toda_ode(l0: &OrbitPoint, times: &[f64], step: f64) -> Result<Trajectory> {
    integrate_lax(
        l0,
        times,
        step,
        DEFAULT_DRIFT_TOL,
        &toda_drive(l0.n()),
        toda_rhs,
    )
}

/// `|theta(Symes(L_0, t)) - Kähler(theta(L_0), -i diag lambda, t)|_max`.
pub fn toda_twist_residual(l0: &OrbitPoint, t: f64) -> Result<f64> {
    let drive = diag_real(l0.lambda()) * c(0.0, -1.0);
    let lhs = twist_orbit(&toda_symes(l0, t)?)?;
    let rhs = kahler_flow(&twist_orbit(l0)?, &drive, t)?;
    Ok(max_abs_diff(lhs.matrix(), rhs.matrix()))
}

/// `30 / min_k (lambda_k - lambda_{k+1})`.
pub fn default_limit_time(lambda: &[f64]) -> Result<f64> {
    let gap = lambda
        .windows(2)
        .map(|w| w[0] - w[1])
        .fold(f64::INFINITY, f64::min);
    let scale = lambda.iter().map(|x| x.abs()).fold(1.0, f64::max);
    if !(gap > CLUSTER_TOL * scale) {
        return Err(Error::Precondition(format!(
            "lambda {lambda:?} must be strictly decreasing"
        )));
    }
    Ok(if gap.is_finite() { 30.0 / gap } else { 0.0 })
}

/// `(Symes(L_0, t_max), Symes(L_0, -t_max))`.
pub fn toda_limits(l0: &OrbitPoint, t_max: Option<f64>) -> Result<(OrbitPoint, OrbitPoint)> {
    let t = match t_max {
        Some(t) => t,
        None => default_limit_time(l0.lambda())?,
    };
    Ok((toda_symes(l0, t)?, toda_symes(l0, -t)?))
}

/// `|pi_k(-iL) - [L, -i diag(n-1, ..., 0)]|_max`, zero for tridiagonal `L`.
pub fn tridiagonal_bracket_residual(l: &ComplexMatrix) -> f64 {
    let n = l.nrows();
    max_abs(&(k_project(&(l * (-I))) - commutator(l, &toda_drive(n))))
}

/// Flaschka variables of a real tridiagonal `-iL`: diagonal `b` and off-diagonal `a`.
pub fn flaschka_coordinates(l: &ComplexMatrix) -> (Vec<f64>, Vec<f64>) {
    let h = l * (-I);
    let n = h.nrows();
    let a = (0..n.saturating_sub(1)).map(|i| h[(i, i + 1)].re).collect();
    let b = (0..n).map(|i| h[(i, i)].re).collect();
    (a, b)
}

/// `a_i' = a_i (b_{i+1} - b_i)` and `b_i' = 2 (a_i^2 - a_{i-1}^2)`.
pub fn flaschka_velocity(a: &[f64], b: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = b.len();
    let sq = |i: isize| {
        if i >= 0 && (i as usize) < a.len() {
            a[i as usize].powi(2)
        } else {
            0.0
        }
    };
    let adot = (0..a.len()).map(|i| a[i] * (b[i + 1] - b[i])).collect();
    let bdot = (0..n)
        .map(|i| 2.0 * (sq(i as isize) - sq(i as isize - 1)))
        .collect();
    (adot, bdot)
}
