//! Gradient flows of the height function `kappa(., N)` on adjoint orbits in the
//! Kähler, normal and induced metrics.
//!
//! All flows use the ascent convention: `t -> kappa(L(t), N)` is nondecreasing.
//! Points are lifted to unitary representatives `g` with
//! `L = g (i diag lambda) g^*`; the Kähler flow has the closed form
//! `g(t) = Pi^U(exp(t iN) g_0)`, the other two are integrated with RK4.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flagorbit::{dual_unitary, orbit_to_flag, rev_unitary, OrbitPoint};
use crate::linalg::{
    c, clusters, commutator, delta, det, ensure_decreasing, ensure_skew_hermitian, ensure_square,
    ensure_unitary, flag_minor, herm_eig, i_diag, k_factor_scaled, k_project, max_abs, max_imag,
    multiplicity_set, polar_unitary, real_matrix, singular_values, skew_hermitian_part,
    span_projector, submatrix, subsets, trace, unitarity_defect, ComplexMatrix, IndexSet, C64,
    CLUSTER_TOL, I, RANK_TOL,
};

pub const DEFAULT_STEP: f64 = 1e-3;
pub const DEFAULT_DRIFT_TOL: f64 = 1e-9;
/// Smallest RK4 step tried before giving up on the drift tolerance.
pub const MIN_STEP: f64 = 1e-7;
/// Largest number of RK4 steps attempted for one sampling interval.
pub const MAX_STEPS: usize = 2_000_000;
/// `|Delta_I(g_0)|` below this counts as a boundary minor.
pub const BOUNDARY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Kahler,
    Normal,
    Induced,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Kahler, Metric::Normal, Metric::Induced];
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Kahler => "kahler",
            Metric::Normal => "normal",
            Metric::Induced => "induced",
        })
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "kahler" | "kähler" => Ok(Metric::Kahler),
            "normal" => Ok(Metric::Normal),
            "induced" => Ok(Metric::Induced),
            other => Err(Error::Precondition(format!("unknown metric '{other}'"))),
        }
    }
}

/// `kappa(L, M) = 2n tr(LM) - 2 tr(L) tr(M)`.
pub fn killing(l: &ComplexMatrix, m: &ComplexMatrix) -> Result<f64> {
    let n = ensure_square(l)?;
    if m.shape() != l.shape() {
        return Err(Error::Dimension(format!(
            "{:?} vs {:?}",
            l.shape(),
            m.shape()
        )));
    }
    let v = trace(&(l * m)) * c(2.0 * n as f64, 0.0) - trace(l) * trace(m) * c(2.0, 0.0);
    Ok(v.re)
}

/// `V(L) = -kappa(L, N)`, strictly decreasing along nonconstant flows.
pub fn lyapunov(l: &ComplexMatrix, drive: &ComplexMatrix) -> Result<f64> {
    Ok(-killing(l, drive)?)
}

fn cluster_ids(lambda: &[f64]) -> Vec<usize> {
    let mut ids = vec![0; lambda.len()];
    for (id, (s, e)) in clusters(lambda).into_iter().enumerate() {
        ids[s..e].iter_mut().for_each(|x| *x = id);
    }
    ids
}

/// `ad^{-1}` of `i diag(lambda)`: entries `i M_ij / (lambda_j - lambda_i)`
/// off the diagonal blocks of equal eigenvalues, zero on them.
pub fn ad_inverse_diag(lambda: &[f64], m: &ComplexMatrix) -> ComplexMatrix {
    let ids = cluster_ids(lambda);
    let n = lambda.len();
    ComplexMatrix::from_fn(n, n, |i, j| {
        if ids[i] == ids[j] {
            C64::new(0.0, 0.0)
        } else {
            I * m[(i, j)] / c(lambda[j] - lambda[i], 0.0)
        }
    })
}

fn eigenbasis(l: &OrbitPoint) -> Result<(Vec<f64>, ComplexMatrix)> {
    herm_eig(&(l.matrix() * (-I)))
}

/// The inverse of `ad_L` on its image, extended by zero on the centralizer.
pub fn ad_inverse(l: &OrbitPoint, m: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_same_size(l.matrix(), m)?;
    let (vals, u) = eigenbasis(l)?;
    let y = u.adjoint() * m * &u;
    Ok(&u * ad_inverse_diag(&vals, &y) * u.adjoint())
}

/// Component of `M` in the image of `ad_L`, by masking the eigenbasis blocks.
pub fn image_component(l: &OrbitPoint, m: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_same_size(l.matrix(), m)?;
    let (vals, u) = eigenbasis(l)?;
    let ids = cluster_ids(&vals);
    let y = u.adjoint() * m * &u;
    let n = vals.len();
    let masked = ComplexMatrix::from_fn(n, n, |i, j| {
        if ids[i] == ids[j] {
            C64::new(0.0, 0.0)
        } else {
            y[(i, j)]
        }
    });
    Ok(&u * masked * u.adjoint())
}

fn check_same_size(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(Error::Dimension(format!(
            "{:?} vs {:?}",
            a.shape(),
            b.shape()
        )));
    }
    Ok(())
}

fn check_drive(drive: &ComplexMatrix, n: usize) -> Result<()> {
    let m = ensure_skew_hermitian(drive, 1e-10)?;
    if m != n {
        return Err(Error::Dimension(format!("N is {m}x{m}, expected {n}x{n}")));
    }
    Ok(())
}

/// `Pi^U(exp(t iN) g_0)` through the eigendecomposition `iN = V diag(mu) V^*`,
/// never forming the exponential.
pub fn kahler_rep(g0: &ComplexMatrix, drive: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let n = ensure_unitary(g0, 1e-9)?;
    check_drive(drive, n)?;
    let (mu, v) = herm_eig(&(drive * I))?;
    let scaled: Vec<f64> = mu.iter().map(|m| t * m).collect();
    Ok(&v * k_factor_scaled(&scaled, &(v.adjoint() * g0))?)
}

/// Closed-form Kähler gradient flow at time `t`.
pub fn kahler_flow(l0: &OrbitPoint, drive: &ComplexMatrix, t: f64) -> Result<OrbitPoint> {
    check_drive(drive, l0.n())?;
    let g0 = orbit_to_flag(l0)?;
    OrbitPoint::from_rep(&kahler_rep(g0.rep(), drive, t)?, l0.lambda())
}

/// Kähler flow evaluated as `sum_k (lambda_k - lambda_{k+1}) i P_k(t) + lambda_n i I`
/// with `P_k(t)` the projector onto `exp(t iN) V_k`.
///
/// Columns are rescaled by `exp(-max_i t mu_i)`; accuracy degrades once the
/// rescaled subspaces become numerically parallel, so this route serves as a
/// cross-check at moderate `t`.
pub fn kahler_flow_projection(
    l0: &OrbitPoint,
    drive: &ComplexMatrix,
    t: f64,
) -> Result<OrbitPoint> {
    let n = l0.n();
    check_drive(drive, n)?;
    let g0 = orbit_to_flag(l0)?;
    let (mu, v) = herm_eig(&(drive * I))?;
    let top = mu.iter().map(|m| t * m).fold(f64::NEG_INFINITY, f64::max);
    let scale = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        n,
        mu.iter().map(|m| c((t * m - top).exp(), 0.0)),
    ));
    let w = &v * scale * v.adjoint() * g0.rep();
    let lam = l0.lambda();
    let mut h = ComplexMatrix::identity(n, n) * c(lam[n - 1], 0.0);
    for &k in l0.dims() {
        h += span_projector(&w.columns(0, k).into_owned())? * c(lam[k - 1] - lam[k], 0.0);
    }
    OrbitPoint::with_lambda(h * I, lam)
}

/// `dg/dt` at `t = 0` for the lift of the flow through `g0`.
pub fn rep_velocity(
    metric: Metric,
    lambda: &[f64],
    drive: &ComplexMatrix,
    g0: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    let n = ensure_unitary(g0, 1e-9)?;
    ensure_decreasing(lambda)?;
    if lambda.len() != n {
        return Err(Error::Dimension(format!(
            "lambda has {} entries for n = {n}",
            lambda.len()
        )));
    }
    check_drive(drive, n)?;
    Ok(match metric {
        Metric::Kahler => g0 * k_project(&(g0.adjoint() * drive * I * g0)),
        Metric::Normal => {
            let l0 = g0 * i_diag(lambda) * g0.adjoint();
            -(commutator(&l0, drive) * g0)
        }
        Metric::Induced => g0 * ad_inverse_diag(lambda, &(g0.adjoint() * drive * g0)),
    })
}

/// `dL/dt` at `t = 0`.
pub fn velocity(metric: Metric, l0: &OrbitPoint, drive: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_drive(drive, l0.n())?;
    let l = l0.matrix();
    Ok(match metric {
        Metric::Normal => commutator(l, &commutator(l, drive)),
        Metric::Induced => -image_component(l0, drive)?,
        Metric::Kahler => {
            let g0 = orbit_to_flag(l0)?;
            let g = g0.rep();
            let gdot = rep_velocity(Metric::Kahler, l0.lambda(), drive, g)?;
            commutator(&(gdot * g.adjoint()), l)
        }
    })
}

/// `h' = -ad^{-1}_{i diag lambda}(h delta N delta h^{-1}) h`, the induced flow
/// conjugated by `iota`.
pub fn twisted_induced_velocity(
    h: &ComplexMatrix,
    lambda: &[f64],
    drive: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    let n = ensure_unitary(h, 1e-9)?;
    check_drive(drive, n)?;
    let d = delta(n);
    let inner = h * &d * drive * &d * h.adjoint();
    Ok(-(ad_inverse_diag(lambda, &inner) * h))
}

/// `d/dt Delta_I(g)` from `g` and `dg/dt`, by replacing one column at a time.
pub fn minor_derivative(g: &ComplexMatrix, gdot: &ComplexMatrix, rows: &IndexSet) -> Result<C64> {
    let k = rows.len();
    let cols = IndexSet::first(k);
    let base = submatrix(g, rows, &cols);
    let tangent = submatrix(gdot, rows, &cols);
    let mut total = C64::new(0.0, 0.0);
    for j in 0..k {
        let mut m = base.clone();
        m.set_column(j, &tangent.column(j));
        total += det(&m);
    }
    Ok(total)
}

/// First-order derivative of the flag minor `Delta_I` along the flow from `g0`,
/// defined when `Delta_I(g0)` vanishes.
pub fn boundary_derivative(
    metric: Metric,
    lambda: &[f64],
    drive: &ComplexMatrix,
    g0: &ComplexMatrix,
    rows: &IndexSet,
) -> Result<f64> {
    let value = flag_minor(g0, rows)?;
    if value.norm() > BOUNDARY_TOL {
        return Err(Error::Precondition(format!(
            "Delta_{rows}(g0) = {} is not zero",
            value.norm()
        )));
    }
    let gdot = rep_velocity(metric, lambda, drive, g0)?;
    Ok(minor_derivative(g0, &gdot, rows)?.re)
}

/// Every flag minor of `g0` on the boundary, with its first-order derivative.
pub fn boundary_audit(
    metric: Metric,
    lambda: &[f64],
    drive: &ComplexMatrix,
    g0: &ComplexMatrix,
) -> Result<Vec<(IndexSet, f64)>> {
    let gdot = rep_velocity(metric, lambda, drive, g0)?;
    let n = g0.nrows();
    let mut out = Vec::new();
    for k in multiplicity_set(lambda) {
        for rows in subsets(n, k) {
            if flag_minor(g0, &rows)?.norm() <= BOUNDARY_TOL {
                let d = minor_derivative(g0, &gdot, &rows)?.re;
                out.push((rows, d));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KahlerClass {
    Strict,
    Weak,
    None,
}

impl fmt::Display for KahlerClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KahlerClass::Strict => "strict",
            KahlerClass::Weak => "weak",
            KahlerClass::None => "none",
        })
    }
}

fn connected(n: usize, edge: impl Fn(usize, usize) -> bool) -> bool {
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(i) = queue.pop_front() {
        for j in 0..n {
            if !seen[j] && i != j && edge(i, j) {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Whether the Kähler gradient flow driven by `N` preserves total positivity on
/// the orbit of `lambda`. Entries below `tol` (relative) count as zero.
pub fn classify_kahler(drive: &ComplexMatrix, lambda: &[f64], tol: f64) -> Result<KahlerClass> {
    ensure_decreasing(lambda)?;
    let n = lambda.len();
    check_drive(drive, n)?;
    let m = drive * I;
    let scale = max_abs(&m).max(1.0);
    if max_imag(&m) > tol * scale {
        return Ok(KahlerClass::None);
    }
    let e = |i: usize, j: usize| {
        let v = m[(i, j)].re;
        if v.abs() < tol * scale {
            0.0
        } else {
            v
        }
    };
    let cuts = multiplicity_set(lambda);
    if cuts.is_empty() {
        return Ok(KahlerClass::Weak);
    }
    let off = |f: &dyn Fn(usize, usize) -> bool| (0..n).all(|i| (0..n).all(|j| i == j || f(i, j)));
    if cuts.len() == 1 {
        let k = cuts[0];
        let weak = if k == 1 || k == n - 1 {
            let first = k != 1 || off(&|i, j| e(i, j) >= 0.0);
            let last = k != n - 1
                || off(&|i, j| {
                    if (i + j) % 2 == 1 {
                        e(i, j) >= 0.0
                    } else {
                        e(i, j) <= 0.0
                    }
                });
            first && last
        } else {
            let corner = if k % 2 == 1 {
                e(n - 1, 0)
            } else {
                -e(n - 1, 0)
            };
            let band = (0..n - 1).all(|i| e(i, i + 1) >= 0.0) && corner >= 0.0;
            let zeros = off(&|i, j| {
                let d = (i + n - j) % n;
                d == 1 || d == n - 1 || e(i, j) == 0.0
            });
            band && zeros
        };
        if !weak {
            return Ok(KahlerClass::None);
        }
        return Ok(if connected(n, |i, j| e(i, j) != 0.0) {
            KahlerClass::Strict
        } else {
            KahlerClass::Weak
        });
    }
    let tridiagonal = off(&|i, j| i.abs_diff(j) == 1 || e(i, j) == 0.0);
    if !tridiagonal || (0..n - 1).any(|i| e(i + 1, i) < 0.0) {
        return Ok(KahlerClass::None);
    }
    Ok(if (0..n - 1).all(|i| e(i + 1, i) > 0.0) {
        KahlerClass::Strict
    } else {
        KahlerClass::Weak
    })
}

/// One of the six `n = 3` normal-metric test configurations.
#[derive(Clone, Debug, Serialize)]
pub struct AuditEntry {
    pub label: String,
    pub rows: Vec<usize>,
    pub derivative: f64,
}

fn normal_audit_configs() -> Vec<(&'static str, ComplexMatrix, IndexSet)> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let h = 0.5;
    let set = |v: Vec<usize>| IndexSet::new(v).expect("valid index set");
    vec![
        (
            "N21",
            real_matrix(3, 3, &[1.0, 0.0, 0.0, 0.0, r, -r, 0.0, r, r]),
            set(vec![3]),
        ),
        (
            "N23",
            real_matrix(3, 3, &[0.0, -r, r, 0.0, -r, -r, 1.0, 0.0, 0.0]),
            set(vec![1]),
        ),
        (
            "N11-N22",
            real_matrix(3, 3, &[r, -h, h, r, h, -h, 0.0, r, r]),
            set(vec![3]),
        ),
        (
            "N33-N22",
            real_matrix(3, 3, &[0.0, -r, r, r, -h, -h, r, h, h]),
            set(vec![1]),
        ),
        (
            "N22-N11",
            real_matrix(3, 3, &[h, -h, r, h, -h, -r, r, r, 0.0]),
            set(vec![1, 2]),
        ),
        (
            "N22-N33",
            real_matrix(3, 3, &[r, -r, 0.0, h, h, -r, h, h, r]),
            set(vec![2, 3]),
        ),
    ]
}

/// Normal-metric boundary derivatives at the six `n = 3` configurations that
/// force a positivity-preserving `N` to be scalar.
pub fn normal_nogo_audit(lambda: &[f64], drive: &ComplexMatrix) -> Result<Vec<AuditEntry>> {
    if lambda.len() != 3 {
        return Err(Error::Dimension(format!(
            "the audit needs n = 3, got {}",
            lambda.len()
        )));
    }
    normal_audit_configs()
        .into_iter()
        .map(|(label, g0, rows)| {
            let derivative = boundary_derivative(Metric::Normal, lambda, drive, &g0, &rows)?;
            Ok(AuditEntry {
                label: label.to_string(),
                rows: rows.as_slice().to_vec(),
                derivative,
            })
        })
        .collect()
}

/// Closed-form audit of the `n = 3` induced flow.
#[derive(Clone, Debug, Serialize)]
pub struct InducedAudit {
    /// All first-order boundary inequalities hold.
    pub admissible: bool,
    /// `iN` is tridiagonal with nonnegative off-diagonal entries.
    pub tridiagonal: bool,
    /// `min(u, v) / |(u, v)| - max(c / (c + 2d), d / (2c + d))`; `+inf` when `u = v = 0`.
    pub edge_slack: f64,
    /// Minimum of the four face functions over `(alpha, beta)`, scaled by `1 / ((c + d) |N|)`.
    pub face_min: f64,
    /// `max(c/d, d/c) <= 2 + 2 sqrt 2`, i.e. some nonscalar `N` is admissible for this `lambda`.
    pub interval: bool,
    pub c: f64,
    pub d: f64,
    pub p: f64,
    pub q: f64,
    pub u: f64,
    pub v: f64,
}

const AUDIT_TOL: f64 = 1e-10;

/// `(c, d, p, q, u, v)` after translating `iN` so that its middle entry vanishes.
fn induced_data(lambda: &[f64], drive: &ComplexMatrix) -> Result<([f64; 6], bool)> {
    if lambda.len() != 3 {
        return Err(Error::Dimension(format!(
            "the audit needs n = 3, got {}",
            lambda.len()
        )));
    }
    ensure_decreasing(lambda)?;
    check_drive(drive, 3)?;
    let (c_, d_) = (lambda[0] - lambda[1], lambda[1] - lambda[2]);
    if c_ <= CLUSTER_TOL || d_ <= CLUSTER_TOL {
        return Err(Error::Precondition(format!(
            "lambda {lambda:?} must be strictly decreasing"
        )));
    }
    let m = drive * I;
    let scale = max_abs(&m).max(1.0);
    if max_imag(&m) > AUDIT_TOL * scale {
        return Err(Error::NotReal(max_imag(&m)));
    }
    let mid = m[(1, 1)].re;
    let (p, q) = (m[(0, 0)].re - mid, m[(2, 2)].re - mid);
    let (u, v, corner) = (m[(0, 1)].re, m[(1, 2)].re, m[(0, 2)].re);
    let tridiagonal =
        corner.abs() <= AUDIT_TOL * scale && u >= -AUDIT_TOL * scale && v >= -AUDIT_TOL * scale;
    Ok(([c_, d_, p, q, u.max(0.0), v.max(0.0)], tridiagonal))
}

/// `c q sin2a cos b + c u (1 - cos2a) + c v sin2a cos2b / sin b + 2 d u`.
fn face(c_: f64, d_: f64, q: f64, u: f64, v: f64, a: f64, b: f64) -> f64 {
    let s2a = (2.0 * a).sin();
    c_ * q * s2a * b.cos()
        + c_ * u * (1.0 - (2.0 * a).cos())
        + c_ * v * s2a * (2.0 * b).cos() / b.sin()
        + 2.0 * d_ * u
}

fn face_minimum(f: impl Fn(f64, f64) -> f64) -> f64 {
    let half_pi = std::f64::consts::FRAC_PI_2;
    let (mut best, mut ba, mut bb) = (f64::INFINITY, 0.0, 0.0);
    let coarse = 96;
    for i in 1..coarse {
        let a = half_pi * i as f64 / coarse as f64;
        for j in 0..=coarse {
            let b = if j == 0 {
                1e-9
            } else {
                half_pi * j as f64 / coarse as f64
            };
            let v = f(a, b);
            if v < best {
                (best, ba, bb) = (v, a, b);
            }
        }
    }
    let mut width = half_pi / coarse as f64;
    for _ in 0..6 {
        let (ca, cb) = (ba, bb);
        for i in -10..=10 {
            let a = (ca + width * i as f64 / 10.0).clamp(1e-12, half_pi - 1e-12);
            for j in -10..=10 {
                let b = (cb + width * j as f64 / 10.0).clamp(1e-9, half_pi);
                let v = f(a, b);
                if v < best {
                    (best, ba, bb) = (v, a, b);
                }
            }
        }
        width *= 0.2;
    }
    best
}

/// Evaluates the edge and face inequalities and the interval criterion for
/// the induced flow on a regular `n = 3` orbit.
///
/// These are first-order conditions at the boundary: necessary for
/// positivity preservation, not known to be sufficient.
pub fn induced_audit_n3(lambda: &[f64], drive: &ComplexMatrix) -> Result<InducedAudit> {
    let ([c_, d_, p, q, u, v], tridiagonal) = induced_data(lambda, drive)?;
    let norm = (u * u + v * v).sqrt();
    let scale = [p.abs(), q.abs(), u, v].into_iter().fold(0.0, f64::max);
    let bound = (c_ / (c_ + 2.0 * d_)).max(d_ / (2.0 * c_ + d_));
    let edge_slack = if norm <= AUDIT_TOL * scale.max(1.0) {
        f64::INFINITY
    } else {
        u.min(v) / norm - bound
    };
    let face_min = if scale == 0.0 {
        0.0
    } else {
        let images = [
            (c_, d_, q, u, v),
            (d_, c_, -q, u, v),
            (c_, d_, p, v, u),
            (d_, c_, -p, v, u),
        ];
        images
            .iter()
            .map(|&(cc, dd, qq, uu, vv)| face_minimum(|a, b| face(cc, dd, qq, uu, vv, a, b)))
            .fold(f64::INFINITY, f64::min)
            / ((c_ + d_) * scale)
    };
    let ratio = (c_ / d_).max(d_ / c_);
    let interval = ratio <= 2.0 + 2.0 * std::f64::consts::SQRT_2;
    let admissible = tridiagonal && edge_slack >= -AUDIT_TOL && face_min >= -AUDIT_TOL;
    Ok(InducedAudit {
        admissible,
        tridiagonal,
        edge_slack,
        face_min,
        interval,
        c: c_,
        d: d_,
        p,
        q,
        u,
        v,
    })
}

/// Representatives `g0(alpha, beta)` of one cell from each symmetry class of
/// the boundary of the totally nonnegative part of `U_3`; only the last
/// depends on `beta`.
pub fn induced_case_reps(alpha: f64, beta: f64) -> Vec<ComplexMatrix> {
    let (ca, sa, cb, sb) = (alpha.cos(), alpha.sin(), beta.cos(), beta.sin());
    vec![
        real_matrix(3, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]),
        real_matrix(3, 3, &[1.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0, 0.0]),
        real_matrix(3, 3, &[1.0, 0.0, 0.0, 0.0, ca, -sa, 0.0, sa, ca]),
        real_matrix(3, 3, &[0.0, -ca, sa, 1.0, 0.0, 0.0, 0.0, sa, ca]),
        real_matrix(3, 3, &[ca, 0.0, sa, sa, 0.0, -ca, 0.0, 1.0, 0.0]),
        real_matrix(
            3,
            3,
            &[ca, -sa * cb, sa * sb, sa, ca * cb, -ca * sb, 0.0, sb, cb],
        ),
    ]
}

/// Minimum boundary derivative of the twisted induced flow over the case
/// representatives on a `steps x steps` grid and their images under the
/// reversal and duality symmetries, scaled by `1 / |N|`.
pub fn induced_audit_n3_numeric(
    lambda: &[f64],
    drive: &ComplexMatrix,
    steps: usize,
) -> Result<f64> {
    induced_data(lambda, drive)?;
    let scale = max_abs(drive).max(1e-300);
    let half_pi = std::f64::consts::FRAC_PI_2;
    let mut worst = f64::INFINITY;
    let mut visit = |g: &ComplexMatrix| -> Result<()> {
        let rg = rev_unitary(g);
        for h in [dual_unitary(g), dual_unitary(&rg), rg, g.clone()] {
            let hdot = twisted_induced_velocity(&h, lambda, drive)?;
            for k in 1..3 {
                for rows in subsets(3, k) {
                    if flag_minor(&h, &rows)?.norm() <= BOUNDARY_TOL {
                        worst = worst.min(minor_derivative(&h, &hdot, &rows)?.re / scale);
                    }
                }
            }
        }
        Ok(())
    };
    for i in 1..steps {
        let a = half_pi * i as f64 / steps as f64;
        let reps = induced_case_reps(a, half_pi);
        for g in &reps[..5] {
            visit(g)?;
        }
        for j in 1..=steps {
            visit(&induced_case_reps(a, half_pi * j as f64 / steps as f64)[5])?;
        }
    }
    Ok(worst)
}

fn spectral_gap_projectors(drive: &ComplexMatrix, cuts: &[usize]) -> Result<Vec<ComplexMatrix>> {
    let (mu, v) = herm_eig(&(drive * I))?;
    let spread = (mu[0] - mu[mu.len() - 1]).abs().max(1.0);
    cuts.iter()
        .map(|&k| {
            if mu[k - 1] - mu[k] <= CLUSTER_TOL * spread {
                return Err(Error::Precondition(format!(
                    "iN has no spectral gap between eigenvalues {k} and {}",
                    k + 1
                )));
            }
            let b = v.columns(0, k);
            Ok(b * b.adjoint())
        })
        .collect()
}

/// `sum_k (lambda_k - lambda_{k+1}) i P_k + lambda_n i I` with `P_k` the
/// projector onto the top `k` eigenvectors of `iN`.
pub fn limit_point(drive: &ComplexMatrix, lambda: &[f64]) -> Result<OrbitPoint> {
    ensure_decreasing(lambda)?;
    let n = lambda.len();
    check_drive(drive, n)?;
    let cuts = multiplicity_set(lambda);
    let projectors = spectral_gap_projectors(drive, &cuts)?;
    let mut h = ComplexMatrix::identity(n, n) * c(lambda[n - 1], 0.0);
    for (&k, p) in cuts.iter().zip(&projectors) {
        h += p * c(lambda[k - 1] - lambda[k], 0.0);
    }
    OrbitPoint::with_lambda(h * I, lambda)
}

/// `rank(P_k^inf P_k) = k` for every cut `k`.
pub fn in_stable_manifold(l: &OrbitPoint, drive: &ComplexMatrix) -> Result<bool> {
    check_drive(drive, l.n())?;
    let flag = orbit_to_flag(l)?;
    let projectors = spectral_gap_projectors(drive, l.dims())?;
    Ok(l.dims().iter().zip(&projectors).all(|(&k, p)| {
        let prod = p * flag.projector(k);
        singular_values(&prod)
            .iter()
            .filter(|&&s| s > RANK_TOL)
            .count()
            == k
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StepDiagnostics {
    pub spectrum_drift: f64,
    pub unitarity_drift: f64,
    pub lyapunov: f64,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub points: Vec<OrbitPoint>,
    pub diagnostics: Vec<StepDiagnostics>,
}

impl Trajectory {
    pub fn last(&self) -> &OrbitPoint {
        self.points.last().expect("trajectories are nonempty")
    }

    pub fn max_spectrum_drift(&self) -> f64 {
        self.diagnostics
            .iter()
            .map(|d| d.spectrum_drift)
            .fold(0.0, f64::max)
    }

    /// `t, L_re[i][j]..., L_im[i][j]...`, row-major.
    pub fn csv_header(&self) -> Vec<String> {
        let n = self.points.first().map_or(0, |p| p.n());
        let mut h = vec!["t".to_string()];
        for part in ["re", "im"] {
            for i in 0..n {
                for j in 0..n {
                    h.push(format!("L_{part}[{i}][{j}]"));
                }
            }
        }
        h
    }

    pub fn csv_rows(&self) -> Vec<Vec<f64>> {
        self.times
            .iter()
            .zip(&self.points)
            .map(|(&t, p)| {
                let l = p.matrix();
                let n = l.nrows();
                let mut row = vec![t];
                row.extend((0..n * n).map(|k| l[(k / n, k % n)].re));
                row.extend((0..n * n).map(|k| l[(k / n, k % n)].im));
                row
            })
            .collect()
    }
}

/// `t0, ..., t1` in `samples` equal steps (`samples + 1` points).
pub fn uniform_times(t0: f64, t1: f64, samples: usize) -> Vec<f64> {
    if samples == 0 {
        return vec![t0];
    }
    (0..=samples)
        .map(|i| t0 + (t1 - t0) * i as f64 / samples as f64)
        .collect()
}

/// Metric, driving matrix, spectrum and integration controls.
#[derive(Clone, Debug)]
pub struct FlowSpec {
    pub metric: Metric,
    pub drive: ComplexMatrix,
    pub lambda: Vec<f64>,
    pub step: f64,
    pub tol: f64,
}

impl FlowSpec {
    pub fn new(metric: Metric, drive: ComplexMatrix, lambda: Vec<f64>) -> Result<Self> {
        ensure_decreasing(&lambda)?;
        check_drive(&drive, lambda.len())?;
        Ok(FlowSpec {
            metric,
            drive,
            lambda,
            step: DEFAULT_STEP,
            tol: DEFAULT_DRIFT_TOL,
        })
    }

    pub fn with_step(mut self, step: f64) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::Precondition(format!("step {step} must be positive")));
        }
        self.step = step;
        Ok(self)
    }

    pub fn with_tol(mut self, tol: f64) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(Error::Precondition(format!("tol {tol} must be positive")));
        }
        self.tol = tol;
        Ok(self)
    }

    fn drift_limit(&self) -> f64 {
        self.tol * self.lambda.iter().map(|x| x.abs()).fold(1.0, f64::max)
    }

    fn diagnostics(&self, l: &ComplexMatrix, unitarity_drift: f64) -> Result<StepDiagnostics> {
        Ok(StepDiagnostics {
            spectrum_drift: spectrum_drift(l, &self.lambda)?,
            unitarity_drift,
            lyapunov: lyapunov(l, &self.drive)?,
        })
    }

    /// The flow from `l0` sampled at `times`, which must be sorted; integration starts at `t = 0`.
    /// Samples at `t = 0` are `l0` itself.
    pub fn run(&self, l0: &OrbitPoint, times: &[f64]) -> Result<Trajectory> {
        let start = OrbitPoint::with_lambda(l0.matrix().clone(), &self.lambda)?;
        let g0 = orbit_to_flag(&start)?.rep().clone();
        let mut traj = self.run_from_rep(&g0, times)?;
        for (k, _) in times.iter().enumerate().filter(|(_, &t)| t == 0.0) {
            traj.points[k] = start.clone();
            traj.diagnostics[k] = self.diagnostics(start.matrix(), 0.0)?;
        }
        Ok(traj)
    }

    /// As [`FlowSpec::run`], starting from the unitary lift `g0`.
    pub fn run_from_rep(&self, g0: &ComplexMatrix, times: &[f64]) -> Result<Trajectory> {
        let n = ensure_unitary(g0, 1e-9)?;
        if n != self.lambda.len() {
            return Err(Error::Dimension(format!(
                "g0 is {n}x{n} for {} eigenvalues",
                self.lambda.len()
            )));
        }
        check_times(times)?;
        let mut traj = Trajectory {
            times: times.to_vec(),
            points: Vec::new(),
            diagnostics: Vec::new(),
        };
        match self.metric {
            Metric::Kahler => {
                for &t in times {
                    let g = kahler_rep(g0, &self.drive, t)?;
                    let p = OrbitPoint::from_rep(&g, &self.lambda)?;
                    traj.diagnostics
                        .push(self.diagnostics(p.matrix(), unitarity_defect(&g))?);
                    traj.points.push(p);
                }
            }
            Metric::Normal => {
                let l0 = OrbitPoint::from_rep(g0, &self.lambda)?;
                let drive = &self.drive;
                return integrate_lax(&l0, times, self.step, self.tol, drive, |l| {
                    commutator(l, &commutator(l, drive))
                });
            }
            Metric::Induced => {
                let lambda = self.lambda.clone();
                let drive = self.drive.clone();
                let rhs = move |g: &ComplexMatrix| {
                    g * ad_inverse_diag(&lambda, &(g.adjoint() * &drive * g))
                };
                let post = |y: ComplexMatrix| {
                    let defect = unitarity_defect(&y);
                    (polar_unitary(&y), defect)
                };
                let mut state = g0.clone();
                let mut t_prev = 0.0;
                for &t in times {
                    state = segment(
                        state,
                        t_prev,
                        t,
                        self.step,
                        self.tol,
                        self.drift_limit(),
                        &rhs,
                        post,
                        |_| Ok(0.0),
                    )?;
                    t_prev = t;
                    let p = OrbitPoint::from_rep(&state, &self.lambda)?;
                    traj.diagnostics
                        .push(self.diagnostics(p.matrix(), unitarity_defect(&state))?);
                    traj.points.push(p);
                }
            }
        }
        Ok(traj)
    }
}

/// RK4 from `t0` to `t1`, halving the step until every per-step defect
/// reported by `post` and the endpoint drift stay below `limit`.
#[allow(clippy::too_many_arguments)]
fn segment(
    y0: ComplexMatrix,
    t0: f64,
    t1: f64,
    initial_step: f64,
    tol: f64,
    limit: f64,
    rhs: &impl Fn(&ComplexMatrix) -> ComplexMatrix,
    post: impl Fn(ComplexMatrix) -> (ComplexMatrix, f64),
    endpoint_drift: impl Fn(&ComplexMatrix) -> Result<f64>,
) -> Result<ComplexMatrix> {
    let span = t1 - t0;
    if span == 0.0 {
        return Ok(y0);
    }
    let mut step = initial_step;
    loop {
        let steps = (span.abs() / step).ceil().max(1.0) as usize;
        if steps > MAX_STEPS {
            return Err(Error::DriftUnreachable { tol, step });
        }
        let h = span / steps as f64;
        let mut y = y0.clone();
        let mut worst: f64 = 0.0;
        for _ in 0..steps {
            let (next, defect) = post(rk4(&y, h, rhs));
            worst = worst.max(defect);
            y = next;
            if !worst.is_finite() || worst > limit {
                break;
            }
        }
        if worst <= limit
            && y.iter().all(|z| z.re.is_finite() && z.im.is_finite())
            && endpoint_drift(&y)? <= limit
        {
            return Ok(y);
        }
        step /= 2.0;
        if step < MIN_STEP {
            return Err(Error::DriftUnreachable {
                tol,
                step: step * 2.0,
            });
        }
    }
}

fn spectrum_drift(l: &ComplexMatrix, lambda: &[f64]) -> Result<f64> {
    let (vals, _) = herm_eig(&(l * (-I)))?;
    Ok(vals
        .iter()
        .zip(lambda)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

/// Integrates an isospectral equation `dL/dt = F(L)` from `l0` with RK4,
/// re-projecting onto skew-Hermitian matrices after every step and halving the
/// step until the spectrum drift stays below `tol * max(1, |lambda|)`.
/// The Lyapunov diagnostic is `-kappa(L, drive)`.
pub fn integrate_lax(
    l0: &OrbitPoint,
    times: &[f64],
    step: f64,
    tol: f64,
    drive: &ComplexMatrix,
    rhs: impl Fn(&ComplexMatrix) -> ComplexMatrix,
) -> Result<Trajectory> {
    check_times(times)?;
    let lambda = l0.lambda();
    let limit = tol * lambda.iter().map(|x| x.abs()).fold(1.0, f64::max);
    let mut traj = Trajectory {
        times: times.to_vec(),
        points: Vec::new(),
        diagnostics: Vec::new(),
    };
    let mut state = l0.matrix().clone();
    let mut t_prev = 0.0;
    for &t in times {
        state = segment(
            state,
            t_prev,
            t,
            step,
            tol,
            limit,
            &rhs,
            |y| (skew_hermitian_part(&y), 0.0),
            |l| spectrum_drift(l, lambda),
        )?;
        t_prev = t;
        traj.diagnostics.push(StepDiagnostics {
            spectrum_drift: spectrum_drift(&state, lambda)?,
            unitarity_drift: 0.0,
            lyapunov: lyapunov(&state, drive)?,
        });
        traj.points
            .push(OrbitPoint::with_lambda(state.clone(), lambda)?);
    }
    Ok(traj)
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty()
        || times.iter().any(|t| !t.is_finite())
        || times.windows(2).any(|w| w[1] < w[0])
    {
        return Err(Error::Precondition(
            "sample times must be nonempty, finite and sorted".into(),
        ));
    }
    Ok(())
}

/// One classical Runge-Kutta step.
pub fn rk4(
    y: &ComplexMatrix,
    h: f64,
    rhs: &impl Fn(&ComplexMatrix) -> ComplexMatrix,
) -> ComplexMatrix {
    let hh = c(h, 0.0);
    let half = c(h / 2.0, 0.0);
    let k1 = rhs(y);
    let k2 = rhs(&(y + &k1 * half));
    let k3 = rhs(&(y + &k2 * half));
    let k4 = rhs(&(y + &k3 * hh));
    y + (k1 + k2 * c(2.0, 0.0) + k3 * c(2.0, 0.0) + k4) * (hh / c(6.0, 0.0))
}

/// Normal-metric flow from `l0` sampled at `0` and `t`.
pub fn normal_flow(
    l0: &OrbitPoint,
    drive: &ComplexMatrix,
    t: f64,
    step: f64,
) -> Result<Trajectory> {
    let spec =
        FlowSpec::new(Metric::Normal, drive.clone(), l0.lambda().to_vec())?.with_step(step)?;
    spec.run(l0, &sorted_pair(t))
}

/// Induced-metric flow of the lift `g0` of `g0 (i diag lambda) g0^*`, sampled at `0` and `t`.
pub fn induced_flow(
    g0: &ComplexMatrix,
    lambda: &[f64],
    drive: &ComplexMatrix,
    t: f64,
    step: f64,
) -> Result<Trajectory> {
    let spec = FlowSpec::new(Metric::Induced, drive.clone(), lambda.to_vec())?.with_step(step)?;
    spec.run_from_rep(g0, &sorted_pair(t))
}

fn sorted_pair(t: f64) -> Vec<f64> {
    if t >= 0.0 {
        vec![0.0, t]
    } else {
        vec![t, 0.0]
    }
}
