//! Amplituhedra `Z~(Gr_{k,n}^{>=0}) ⊂ Gr_{k,k+m}` and projected gradient flows.
//!
//! A point of `Gr_{k,k+m}` is carried as a `(k+m) x k` matrix whose columns span it.
//! Membership of arbitrary points is only decided for `k = 1`, where the
//! amplituhedron is the convex polytope spanned by the columns of `Z`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flagorbit::{twist_flag, OrbitPoint};
use crate::io::MatrixJson;
use crate::jacobi::{vandermonde_flag, MoserData};
use crate::linalg::{
    c, diag_real, ensure_real, ensure_skew_hermitian, herm_eig, mat_exp, max_abs, max_abs_diff,
    minor, null_space, orthonormal_columns, rank, real_matrix, singular_values, submatrix, subsets,
    ComplexMatrix, IndexSet, I, RANK_TOL,
};
use crate::positivity::{sample_tp, DEFAULT_TOL};

/// Tolerance for `Z Z^T = I`.
pub const ORTHONORMAL_TOL: f64 = 1e-10;

/// Real `(k+m) x n` matrix with positive maximal minors.
#[derive(Clone, Debug, PartialEq)]
pub struct ZData {
    n: usize,
    k: usize,
    m: usize,
    z: ComplexMatrix,
    orthonormal: bool,
}

/// Serialized form `{"n", "k", "m", "Z"}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZDataJson {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    #[serde(rename = "Z")]
    pub z: MatrixJson,
}

impl ZData {
    /// Negates the last row if the first maximal minor is negative, then
    /// requires every maximal minor to exceed `DEFAULT_TOL`.
    pub fn new(k: usize, m: usize, z: ComplexMatrix) -> Result<Self> {
        let (r, n) = z.shape();
        if k == 0 || r != k + m || r > n {
            return Err(Error::Dimension(format!(
                "Z is {r}x{n}, need (k+m) x n with k = {k}, m = {m}, k >= 1, k+m <= n"
            )));
        }
        ensure_real(&z, 1e-12)?;
        let mut z = z.map(|v| c(v.re, 0.0));
        if rank(&z, RANK_TOL) < r {
            return Err(Error::Singular);
        }
        if maximal_minors(&z)?[0].1 < 0.0 {
            let mut row = z.row_mut(r - 1);
            row.neg_mut();
        }
        let (cols, worst) = maximal_minors(&z)?
            .into_iter()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("at least one maximal minor");
        if !(worst > DEFAULT_TOL) {
            return Err(Error::Certification(format!(
                "maximal minor on columns {cols} equals {worst:.3e}"
            )));
        }
        let gram = &z * z.adjoint();
        let orthonormal = max_abs_diff(&gram, &ComplexMatrix::identity(r, r)) < ORTHONORMAL_TOL;
        Ok(ZData {
            n,
            k,
            m,
            z,
            orthonormal,
        })
    }

    /// Same row span, split as a different `(k, m)`.
    pub fn with_k(&self, k: usize) -> Result<Self> {
        let r = self.r();
        if k == 0 || k > r {
            return Err(Error::Dimension(format!("k = {k} must lie in 1..={r}")));
        }
        Ok(ZData {
            k,
            m: r - k,
            ..self.clone()
        })
    }

    /// `(Z Z^T)^{-1/2} Z`: orthonormal rows, same kernel, minors stay positive.
    pub fn orthonormalized(&self) -> Result<Self> {
        let (vals, u) = herm_eig(&(&self.z * self.z.adjoint()))?;
        let inv_sqrt: Vec<f64> = vals.iter().map(|v| 1.0 / v.sqrt()).collect();
        let s = &u * diag_real(&inv_sqrt) * u.adjoint();
        ZData::new(self.k, self.m, s * &self.z)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `k + m`.
    pub fn r(&self) -> usize {
        self.k + self.m
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.z
    }

    pub fn is_orthonormal(&self) -> bool {
        self.orthonormal
    }

    pub fn to_json(&self) -> ZDataJson {
        ZDataJson {
            n: self.n,
            k: self.k,
            m: self.m,
            z: MatrixJson::from_matrix(&self.z),
        }
    }

    pub fn from_json(j: &ZDataJson) -> Result<Self> {
        let z = j.z.to_matrix()?;
        if z.shape() != (j.k + j.m, j.n) {
            return Err(Error::Dimension(format!(
                "field Z is {}x{}, expected {}x{}",
                z.nrows(),
                z.ncols(),
                j.k + j.m,
                j.n
            )));
        }
        ZData::new(j.k, j.m, z)
    }
}

/// Every maximal minor of `z` with its column set, in lexicographic order.
pub fn maximal_minors(z: &ComplexMatrix) -> Result<Vec<(IndexSet, f64)>> {
    let (r, n) = z.shape();
    let rows = IndexSet::first(r);
    subsets(n, r)
        .into_iter()
        .map(|cols| Ok((cols.clone(), minor(z, &rows, &cols)?.re)))
        .collect()
}

/// The example `Z` with columns `e_1, e_2, e_3, (a, -b, c)`, split as `k = 1, m = 2`.
pub fn quadrilateral_z(a: f64, b: f64, cc: f64) -> Result<ZData> {
    let z = real_matrix(
        3,
        4,
        &[1.0, 0.0, 0.0, a, 0.0, 1.0, 0.0, -b, 0.0, 0.0, 1.0, cc],
    );
    ZData::new(1, 2, z)
}

/// `Z V`, requiring `rank(Z V) = k`.
pub fn zmap(z: &ZData, v: &ComplexMatrix) -> Result<ComplexMatrix> {
    if v.nrows() != z.n || v.ncols() != z.k {
        return Err(Error::Dimension(format!(
            "V is {}x{}, need {}x{}",
            v.nrows(),
            v.ncols(),
            z.n,
            z.k
        )));
    }
    let q = orthonormal_columns(v)?;
    let zmax = singular_values(z.matrix()).first().copied().unwrap_or(0.0);
    let smallest = singular_values(&(z.matrix() * q))
        .last()
        .copied()
        .unwrap_or(0.0);
    if !(smallest > RANK_TOL * zmax) {
        return Err(Error::OutsideDomain("V meets ker Z".into()));
    }
    Ok(z.matrix() * v)
}

/// Orthonormal basis of `ker Z`, `n x (n - k - m)`.
pub fn kernel_basis(z: &ZData) -> ComplexMatrix {
    null_space(z.matrix(), RANK_TOL)
}

/// `V + ker Z = W + ker Z`, decided by ranks of stacked bases.
pub fn same_fiber(z: &ZData, v: &ComplexMatrix, w: &ComplexMatrix) -> Result<bool> {
    let kern = kernel_basis(z);
    let stack = |parts: &[&ComplexMatrix]| {
        let cols: usize = parts.iter().map(|p| p.ncols()).sum();
        let mut out = ComplexMatrix::zeros(z.n, cols);
        let mut at = 0;
        for p in parts {
            out.columns_mut(at, p.ncols()).copy_from(p);
            at += p.ncols();
        }
        out
    };
    if v.nrows() != z.n || w.nrows() != z.n {
        return Err(Error::Dimension(format!("V and W must have {} rows", z.n)));
    }
    let rv = rank(&stack(&[v, &kern]), RANK_TOL);
    let rw = rank(&stack(&[w, &kern]), RANK_TOL);
    let rvw = rank(&stack(&[v, w, &kern]), RANK_TOL);
    Ok(rv == rvw && rw == rvw)
}

/// `N(ker Z) ⊆ ker Z`, i.e. `rank([K | N K]) = n - k - m`.
pub fn kernel_invariant(z: &ZData, drive: &ComplexMatrix) -> Result<bool> {
    ensure_skew_hermitian(drive, 1e-10)?;
    if drive.nrows() != z.n {
        return Err(Error::Dimension(format!(
            "N is {}x{}, need n = {}",
            drive.nrows(),
            drive.ncols(),
            z.n
        )));
    }
    let kern = kernel_basis(z);
    let d = kern.ncols();
    if d == 0 {
        return Ok(true);
    }
    let mut stacked = ComplexMatrix::zeros(z.n, 2 * d);
    stacked.columns_mut(0, d).copy_from(&kern);
    stacked.columns_mut(d, d).copy_from(&(drive * &kern));
    Ok(rank(&stacked, RANK_TOL) == d)
}

/// `M = Z N Z^T` for orthonormal-row `Z` and kernel-invariant `N`.
pub fn project_n(z: &ZData, drive: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !z.orthonormal {
        return Err(Error::Precondition("Z must have orthonormal rows".into()));
    }
    if !kernel_invariant(z, drive)? {
        return Err(Error::Precondition("N does not preserve ker Z".into()));
    }
    let m = z.matrix() * drive * z.matrix().adjoint();
    ensure_skew_hermitian(&m, 1e-10)?;
    Ok(m)
}

/// `|Z exp(t iN) - exp(t iM) Z|_max`.
pub fn commutation_residual(z: &ZData, drive: &ComplexMatrix, m: &ComplexMatrix, t: f64) -> f64 {
    let lhs = z.matrix() * mat_exp(&(drive * (I * t)));
    let rhs = mat_exp(&(m * (I * t))) * z.matrix();
    max_abs_diff(&lhs, &rhs)
}

/// `Z` from the first `k + m` subspaces of the twisted Vandermonde flag of `d`:
/// rows are the first `k + m` columns of its canonical unitary representative.
pub fn twisted_vdm_z(d: &MoserData, k: usize, m: usize) -> Result<ZData> {
    let n = d.n();
    let r = k + m;
    if k == 0 || r > n {
        return Err(Error::Dimension(format!(
            "need 1 <= k and k + m <= n, got k = {k}, m = {m}, n = {n}"
        )));
    }
    let g = twist_flag(&vandermonde_flag(d)?)?.canonical().rep().clone();
    let rows = g.columns(0, r).transpose();
    ensure_real(&rows, 1e-10)?;
    ZData::new(k, m, rows)
}

/// `(1, ..., 1, 0, ..., 0)` with `k` ones, the spectrum of `Gr_{k,r}` as an orbit.
pub fn omega(k: usize, r: usize) -> Vec<f64> {
    (0..r).map(|i| if i < k { 1.0 } else { 0.0 }).collect()
}

/// The orbit point `i P` of the span of the columns of `v`, with `P` its projector.
pub fn grassmannian_point(v: &ComplexMatrix) -> Result<OrbitPoint> {
    let (r, k) = v.shape();
    let q = orthonormal_columns(v)?;
    let mut g = ComplexMatrix::zeros(r, r);
    g.columns_mut(0, k).copy_from(&q);
    if k < r {
        g.columns_mut(k, r - k)
            .copy_from(&null_space(&q.adjoint(), RANK_TOL));
    }
    OrbitPoint::from_rep(&g, &omega(k, r))
}

/// `Z~` of the span of the top `k` eigenvectors of `iN`.
pub fn projected_limit(z: &ZData, drive: &ComplexMatrix) -> Result<ComplexMatrix> {
    ensure_skew_hermitian(drive, 1e-10)?;
    let (vals, u) = herm_eig(&(drive * I))?;
    let k = z.k;
    if k < vals.len() && !(vals[k - 1] - vals[k] > 1e-8 * vals[0].abs().max(1.0)) {
        return Err(Error::Precondition(format!(
            "iN has no gap after its top {k} eigenvalues"
        )));
    }
    zmap(z, &u.columns(0, k).into_owned())
}

/// `Z V` for `V` the first `k` columns of a totally positive matrix.
pub fn sample_amplituhedron<R: Rng + ?Sized>(
    z: &ZData,
    count: usize,
    rng: &mut R,
) -> Result<Vec<ComplexMatrix>> {
    (0..count)
        .map(|_| {
            let g = sample_tp(z.n, rng)?;
            zmap(z, &g.columns(0, z.k).into_owned())
        })
        .collect()
}

/// For `k = 1`: whether the line through `p` meets the polytope spanned by the
/// columns of `Z`, via nonnegative solutions on every basis of columns.
pub fn polytope_contains(z: &ZData, p: &ComplexMatrix, tol: f64) -> Result<bool> {
    if z.k != 1 {
        return Err(Error::Precondition(
            "membership is only decided for k = 1".into(),
        ));
    }
    let r = z.r();
    if p.shape() != (r, 1) {
        return Err(Error::Dimension(format!(
            "point is {}x{}, need {r}x1",
            p.nrows(),
            p.ncols()
        )));
    }
    let rows = IndexSet::first(r);
    let scale = max_abs(p);
    if scale == 0.0 {
        return Err(Error::Singular);
    }
    for cols in subsets(z.n, r) {
        let basis = submatrix(z.matrix(), &rows, &cols);
        let Some(inv) = basis.try_inverse() else {
            continue;
        };
        let x = inv * p / c(scale, 0.0);
        let (lo, hi) = x
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v.re), hi.max(v.re))
            });
        if lo >= -tol || hi <= tol {
            return Ok(true);
        }
    }
    Ok(false)
}
