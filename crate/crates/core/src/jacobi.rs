//! Vandermonde flags, Jacobi matrices and Moser coordinates.

use crate::error::{Error, Result};
use crate::flagorbit::{twist_unitary, OrbitPoint, PartialFlag};
use crate::linalg::{c, ensure_real, herm_eig, i_diag, ComplexMatrix, CLUSTER_TOL, I};
use crate::positivity::{is_jacobi_cone, is_plucker_nonneg, DEFAULT_TOL};

/// Strictly decreasing `lambda` and a positive vector `x`, defined up to scale.
#[derive(Clone, Debug, PartialEq)]
pub struct MoserData {
    lambda: Vec<f64>,
    x: Vec<f64>,
}

impl MoserData {
    pub fn new(lambda: Vec<f64>, x: Vec<f64>) -> Result<Self> {
        if lambda.len() != x.len() || lambda.is_empty() {
            return Err(Error::Dimension(format!(
                "lambda has {} entries, x has {}",
                lambda.len(),
                x.len()
            )));
        }
        let diam = lambda[0] - lambda[lambda.len() - 1];
        if lambda
            .windows(2)
            .any(|w| !(w[0] - w[1] > CLUSTER_TOL * diam.abs()))
        {
            return Err(Error::Precondition(format!(
                "lambda {lambda:?} must be strictly decreasing"
            )));
        }
        if x.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
            return Err(Error::Precondition(format!("x {x:?} must be positive")));
        }
        Ok(MoserData { lambda, x })
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// `x / |x|`.
    pub fn r(&self) -> Vec<f64> {
        let nrm = self.x.iter().map(|v| v * v).sum::<f64>().sqrt();
        self.x.iter().map(|v| v / nrm).collect()
    }
}

/// `(lambda_i^(j-1) x_i)`.
pub fn vandermonde_matrix(lambda: &[f64], x: &[f64]) -> ComplexMatrix {
    let n = x.len();
    ComplexMatrix::from_fn(n, n, |i, j| c(lambda[i].powi(j as i32) * x[i], 0.0))
}

/// `lambda` mapped affinely onto `[-1, 1]`; Krylov flags are unchanged.
fn rescaled(lambda: &[f64]) -> Vec<f64> {
    let n = lambda.len();
    if n == 1 {
        return vec![0.0];
    }
    let (hi, lo) = (lambda[0], lambda[n - 1]);
    lambda
        .iter()
        .map(|l| (2.0 * l - hi - lo) / (hi - lo))
        .collect()
}

/// Vandermonde flag `Kry_lambda(x)` with its canonical representative.
pub fn vandermonde_flag(d: &MoserData) -> Result<PartialFlag> {
    let n = d.n();
    PartialFlag::from_matrix(
        &vandermonde_matrix(&rescaled(&d.lambda), &d.x),
        (1..n).collect(),
    )
}

/// Jacobi matrix `L = iota(u) (i diag lambda) iota(u)^*` with `u` the canonical
/// representative of `Kry_lambda(x)`.
pub fn jacobi_from_moser(d: &MoserData) -> Result<OrbitPoint> {
    let u = vandermonde_flag(d)?;
    let g = twist_unitary(u.rep())?;
    let l = &g * i_diag(&d.lambda) * g.adjoint();
    let h = (&l * (-I)).map(|z| c(z.re, 0.0));
    let verdict = is_jacobi_cone(&h, DEFAULT_TOL)?;
    if !verdict.is_positive() {
        return Err(Error::Certification(format!(
            "result is not a positive Jacobi matrix: {verdict:?}"
        )));
    }
    OrbitPoint::from_rep(&g, &d.lambda)
}

/// Moser coordinates: spectrum and the moduli of the first eigenvector entries.
pub fn moser_from_jacobi(l: &OrbitPoint) -> Result<MoserData> {
    let h = l.matrix() * (-I);
    ensure_real(&h, 1e-10)?;
    let verdict = is_jacobi_cone(&h.map(|z| c(z.re, 0.0)), DEFAULT_TOL)?;
    if !verdict.is_positive() {
        return Err(Error::Precondition(format!(
            "not a positive Jacobi matrix: {verdict:?}"
        )));
    }
    let (lambda, u) = herm_eig(&h)?;
    let r: Vec<f64> = (0..l.n()).map(|j| u[(0, j)].norm()).collect();
    if r.iter().any(|&v| v <= 1e-14) {
        return Err(Error::Precondition(
            "an eigenvector has a vanishing first entry".into(),
        ));
    }
    MoserData::new(lambda, r)
}

/// The positive Jacobi matrix whose top two eigenvectors, with eigenvalues
/// `0` and `-1`, span the given `{1, 2}` flag.
///
/// With `V_1 = span(v)` and `y` in `V_2` orthogonal to `v`, the entries are
/// `a_i = (v_1 y_1 + ... + v_i y_i) / (v_{i+1} y_i - v_i y_{i+1})` and
/// `b_i = -(a_{i-1} v_{i-1} + a_i v_{i+1}) / v_i`.
pub fn jacobi_from_12flag(flag: &PartialFlag) -> Result<OrbitPoint> {
    let n = flag.n();
    let has_plane = n == 2 || flag.dims().contains(&2);
    if n < 2 || !flag.dims().contains(&1) || !has_plane {
        return Err(Error::Precondition(format!(
            "flag type {:?} must contain 1 and 2",
            flag.dims()
        )));
    }
    let rep = flag.canonical();
    let g = rep.rep();
    ensure_real(&g.columns(0, 2).into_owned(), 1e-10)?;
    let verdict = is_plucker_nonneg(&g.columns(0, 2).into_owned(), &[1, 2], DEFAULT_TOL)?;
    if !verdict.is_positive() {
        return Err(Error::Precondition(format!(
            "flag is not totally positive: {verdict:?}"
        )));
    }
    let v: Vec<f64> = (0..n).map(|i| g[(i, 0)].re).collect();
    let mut y: Vec<f64> = (0..n).map(|i| g[(i, 1)].re).collect();
    if y[0] < 0.0 {
        y.iter_mut().for_each(|t| *t = -*t);
    }
    let gaps: Vec<f64> = (0..n - 1)
        .map(|i| v[i + 1] * y[i] - v[i] * y[i + 1])
        .collect();
    if gaps.iter().any(|&d| d <= 0.0) {
        return Err(Error::Precondition(
            "y / v is not strictly decreasing".into(),
        ));
    }
    let mut a = vec![0.0; n - 1];
    let mut partial = 0.0;
    for i in 0..n - 1 {
        partial += v[i] * y[i];
        a[i] = partial / gaps[i];
    }
    let mut j = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        let left = if i > 0 { a[i - 1] * v[i - 1] } else { 0.0 };
        let right = if i + 1 < n { a[i] * v[i + 1] } else { 0.0 };
        j[(i, i)] = c(-(left + right) / v[i], 0.0);
        if i + 1 < n {
            j[(i, i + 1)] = c(a[i], 0.0);
            j[(i + 1, i)] = c(a[i], 0.0);
        }
    }
    OrbitPoint::new(j * I)
}
