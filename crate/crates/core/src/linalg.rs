//! Complex matrices, index sets, minors, Iwasawa factors and spectral data.
//!
//! Matrices are `nalgebra::DMatrix<Complex64>`. Index sets are 1-based to match
//! the usual notation for minors; every function converts at the boundary.

use std::cmp::Ordering;
use std::fmt;

use nalgebra::{DMatrix, Schur, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type ComplexMatrix = DMatrix<C64>;

pub const I: C64 = C64::new(0.0, 1.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const ZERO: C64 = C64::new(0.0, 0.0);

/// Relative singular-value threshold for numerical rank.
pub const RANK_TOL: f64 = 1e-9;
/// Relative threshold, in units of the spectral diameter, for merging eigenvalues.
pub const CLUSTER_TOL: f64 = 1e-8;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Builds a complex matrix from real row-major entries.
pub fn real_matrix(rows: usize, cols: usize, data: &[f64]) -> ComplexMatrix {
    assert_eq!(data.len(), rows * cols);
    ComplexMatrix::from_fn(rows, cols, |i, j| c(data[i * cols + j], 0.0))
}

pub fn from_real(m: &DMatrix<f64>) -> ComplexMatrix {
    m.map(|x| c(x, 0.0))
}

pub fn diag_real(d: &[f64]) -> ComplexMatrix {
    let n = d.len();
    ComplexMatrix::from_fn(n, n, |i, j| if i == j { c(d[i], 0.0) } else { ZERO })
}

/// `i * diag(lambda)`, the base point of the orbit with spectrum `lambda`.
pub fn i_diag(lambda: &[f64]) -> ComplexMatrix {
    diag_real(lambda) * I
}

pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn max_imag(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
}

pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a * b - b * a
}

pub fn trace(m: &ComplexMatrix) -> C64 {
    m.diagonal().iter().sum()
}

/// `delta = diag(1, -1, 1, ...)`.
pub fn delta(n: usize) -> ComplexMatrix {
    diag_real(
        &(0..n)
            .map(|i| if i % 2 == 0 { 1.0 } else { -1.0 })
            .collect::<Vec<_>>(),
    )
}

/// Signed longest element: entry `(n + 1 - j, j)` equals `(-1)^(j - 1)`.
pub fn w0_signed(n: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        m[(n - 1 - j, j)] = c(if j % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
    }
    m
}

/// Largest entry of `g^* g - 1`.
pub fn unitarity_defect(g: &ComplexMatrix) -> f64 {
    if !g.is_square() {
        return f64::INFINITY;
    }
    let n = g.nrows();
    max_abs_diff(&(g.adjoint() * g), &ComplexMatrix::identity(n, n))
}

pub fn ensure_square(m: &ComplexMatrix) -> Result<usize> {
    if m.is_square() {
        Ok(m.nrows())
    } else {
        Err(Error::Dimension(format!(
            "expected a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )))
    }
}

pub fn ensure_unitary(g: &ComplexMatrix, tol: f64) -> Result<usize> {
    let n = ensure_square(g)?;
    let r = unitarity_defect(g);
    if r > tol {
        return Err(Error::NotUnitary(r));
    }
    Ok(n)
}

/// Checks `L^* = -L` to `tol` relative to the largest entry.
pub fn ensure_skew_hermitian(l: &ComplexMatrix, tol: f64) -> Result<usize> {
    let n = ensure_square(l)?;
    let r = max_abs(&(l + l.adjoint()));
    if r > tol * max_abs(l).max(1.0) {
        return Err(Error::NotSkewHermitian(r));
    }
    Ok(n)
}

pub fn ensure_real(m: &ComplexMatrix, tol: f64) -> Result<()> {
    let r = max_imag(m);
    if r > tol * max_abs(m).max(1.0) {
        return Err(Error::NotReal(r));
    }
    Ok(())
}

pub fn skew_hermitian_part(l: &ComplexMatrix) -> ComplexMatrix {
    (l - l.adjoint()) * c(0.5, 0.0)
}

/// Strictly increasing set of 1-based indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct IndexSet(Vec<usize>);

impl TryFrom<Vec<usize>> for IndexSet {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        IndexSet::new(v)
    }
}

impl From<IndexSet> for Vec<usize> {
    fn from(s: IndexSet) -> Self {
        s.0
    }
}

impl IndexSet {
    pub fn new(elems: Vec<usize>) -> Result<Self> {
        if elems.first() == Some(&0) || elems.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadIndexSet(elems));
        }
        Ok(IndexSet(elems))
    }

    /// Sorts and deduplicates before validating.
    pub fn from_unsorted(mut elems: Vec<usize>) -> Result<Self> {
        elems.sort_unstable();
        elems.dedup();
        Self::new(elems)
    }

    /// `{a, a + 1, ..., b}`; empty when `a > b`.
    pub fn interval(a: usize, b: usize) -> Self {
        assert!(a >= 1);
        IndexSet((a..=b).collect())
    }

    /// `[k] = {1, ..., k}`.
    pub fn first(k: usize) -> Self {
        IndexSet((1..=k).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn max(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn sum(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn complement(&self, n: usize) -> IndexSet {
        IndexSet((1..=n).filter(|&i| !self.contains(i)).collect())
    }

    pub fn union(&self, other: &IndexSet) -> IndexSet {
        let mut v: Vec<usize> = self.0.iter().chain(other.0.iter()).copied().collect();
        v.sort_unstable();
        v.dedup();
        IndexSet(v)
    }

    pub fn intersection_len(&self, other: &IndexSet) -> usize {
        self.0.iter().filter(|&&i| other.contains(i)).count()
    }

    pub fn is_disjoint(&self, other: &IndexSet) -> bool {
        self.intersection_len(other) == 0
    }

    /// Image under `i -> n + 1 - i`.
    pub fn reversed(&self, n: usize) -> IndexSet {
        let mut v: Vec<usize> = self.0.iter().map(|&i| n + 1 - i).collect();
        v.sort_unstable();
        IndexSet(v)
    }

    pub fn zero_based(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&i| i - 1)
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// `#{(i, j) in I x J : i > j}`.
pub fn inv(i: &IndexSet, j: &IndexSet) -> usize {
    i.0.iter()
        .map(|&a| j.0.iter().filter(|&&b| a > b).count())
        .sum()
}

/// All `k`-subsets of `[n]` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<IndexSet> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (1..=k).collect();
    loop {
        out.push(IndexSet(cur.clone()));
        let mut pos = k;
        while pos > 0 && cur[pos - 1] == n - k + pos {
            pos -= 1;
        }
        if pos == 0 {
            return out;
        }
        cur[pos - 1] += 1;
        for q in pos..k {
            cur[q] = cur[q - 1] + 1;
        }
    }
}

pub fn submatrix(m: &ComplexMatrix, rows: &IndexSet, cols: &IndexSet) -> ComplexMatrix {
    let r: Vec<usize> = rows.zero_based().collect();
    let cc: Vec<usize> = cols.zero_based().collect();
    ComplexMatrix::from_fn(r.len(), cc.len(), |a, b| m[(r[a], cc[b])])
}

/// Determinant; cofactor expansion up to size 3, LU with partial pivoting above.
pub fn det(a: &ComplexMatrix) -> C64 {
    match a.nrows() {
        0 => ONE,
        1 => a[(0, 0)],
        2 => a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)],
        3 => {
            a[(0, 0)] * (a[(1, 1)] * a[(2, 2)] - a[(1, 2)] * a[(2, 1)])
                - a[(0, 1)] * (a[(1, 0)] * a[(2, 2)] - a[(1, 2)] * a[(2, 0)])
                + a[(0, 2)] * (a[(1, 0)] * a[(2, 1)] - a[(1, 1)] * a[(2, 0)])
        }
        _ => a.clone().lu().determinant(),
    }
}

/// `Delta_{I,J}(M)`.
pub fn minor(m: &ComplexMatrix, rows: &IndexSet, cols: &IndexSet) -> Result<C64> {
    if rows.len() != cols.len() {
        return Err(Error::Dimension(format!(
            "row set {rows} and column set {cols} have different sizes"
        )));
    }
    if let Some(r) = rows.max().filter(|&r| r > m.nrows()) {
        return Err(Error::IndexOutOfRange {
            index: r,
            bound: m.nrows(),
        });
    }
    if let Some(cmax) = cols.max().filter(|&cmax| cmax > m.ncols()) {
        return Err(Error::IndexOutOfRange {
            index: cmax,
            bound: m.ncols(),
        });
    }
    Ok(det(&submatrix(m, rows, cols)))
}

/// Left-justified minor `Delta_I(M) = Delta_{I,[|I|]}(M)`.
pub fn flag_minor(m: &ComplexMatrix, rows: &IndexSet) -> Result<C64> {
    minor(m, rows, &IndexSet::first(rows.len()))
}

/// All left-justified minors of order `k`, indexed like `subsets(n, k)`.
pub fn pluecker_coordinates(m: &ComplexMatrix, k: usize) -> Vec<C64> {
    let cols = IndexSet::first(k);
    subsets(m.nrows(), k)
        .iter()
        .map(|rows| det(&submatrix(m, rows, &cols)))
        .collect()
}

#[derive(Clone, Debug)]
pub struct IwasawaFactors {
    pub k_factor: ComplexMatrix,
    pub h_factor: ComplexMatrix,
    pub n_factor: ComplexMatrix,
}

pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// `g = k h n` with `k` unitary, `h` positive diagonal, `n` unit upper triangular.
pub fn iwasawa(g: &ComplexMatrix) -> Result<IwasawaFactors> {
    let n = ensure_square(g)?;
    let s = singular_values(g);
    if n == 0 || s[n - 1] <= RANK_TOL * s[0] {
        return Err(Error::Singular);
    }
    let (k, r) = positive_qr(g)?;
    let h: Vec<f64> = (0..n).map(|i| r[(i, i)].re).collect();
    let hinv = diag_real(&h.iter().map(|x| 1.0 / x).collect::<Vec<_>>());
    let mut nf = hinv * r;
    for i in 0..n {
        nf[(i, i)] = ONE;
        for j in 0..i {
            nf[(i, j)] = ZERO;
        }
    }
    Ok(IwasawaFactors {
        k_factor: k,
        h_factor: diag_real(&h),
        n_factor: nf,
    })
}

/// QR with `R` carrying a positive real diagonal.
fn positive_qr(g: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let n = ensure_square(g)?;
    let qr = g.clone().qr();
    let mut q = qr.q();
    let mut r = qr.r();
    let scale = max_abs(g);
    for i in 0..n {
        let d = r[(i, i)];
        if d.norm() <= 1e-14 * scale || scale == 0.0 {
            return Err(Error::Singular);
        }
        let ph = d / d.norm();
        for row in 0..n {
            q[(row, i)] *= ph;
        }
        for col in 0..n {
            r[(i, col)] *= ph.conj();
        }
        r[(i, i)] = c(r[(i, i)].re, 0.0);
    }
    Ok((q, r))
}

/// Unitary Iwasawa factor `Pi^U(g)`.
pub fn k_factor(g: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(positive_qr(g)?.0)
}

/// `Pi^U(diag(exp(log_scale)) * w)` without forming the scaled product.
///
/// Column operations by unit upper-triangular matrices and positive column
/// scalings leave the unitary factor unchanged, so elimination pivoted on the
/// scaled magnitudes yields a bounded matrix with the same factor.
pub fn k_factor_scaled(log_scale: &[f64], w: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = ensure_square(w)?;
    if log_scale.len() != n {
        return Err(Error::Dimension(format!(
            "{} scales for a {n}x{n} matrix",
            log_scale.len()
        )));
    }
    let mut m = w.clone();
    let mut used = vec![false; n];
    let mut b = ComplexMatrix::zeros(n, n);
    let mut phases = Vec::with_capacity(n);
    for j in 0..n {
        let colmax = (0..n)
            .filter(|&i| !used[i])
            .map(|i| m[(i, j)].norm())
            .fold(0.0, f64::max);
        let floor = 1e-14 * colmax;
        let mut best: Option<(usize, f64)> = None;
        for i in (0..n).filter(|&i| !used[i]) {
            let a = m[(i, j)].norm();
            if a == 0.0 || a <= floor {
                continue;
            }
            let score = a.ln() + log_scale[i];
            if best.is_none_or(|(_, s)| score > s) {
                best = Some((i, score));
            }
        }
        let (p, _) = best.ok_or(Error::Singular)?;
        let piv = m[(p, j)];
        for col in j + 1..n {
            let f = m[(p, col)] / piv;
            if f != ZERO {
                for i in 0..n {
                    let v = m[(i, j)];
                    m[(i, col)] -= f * v;
                }
            }
            m[(p, col)] = ZERO;
        }
        for i in (0..n).filter(|&i| !used[i]) {
            let a = m[(i, j)];
            b[(i, j)] = if i == p {
                ONE
            } else if a.norm() > floor {
                a / piv * (log_scale[i] - log_scale[p]).exp()
            } else {
                ZERO
            };
        }
        used[p] = true;
        phases.push(piv / piv.norm());
    }
    let mut k = k_factor(&b)?;
    for (j, ph) in phases.into_iter().enumerate() {
        for i in 0..n {
            k[(i, j)] *= ph;
        }
    }
    Ok(k)
}

/// Skew-Hermitian part of the Iwasawa decomposition of the Lie algebra:
/// the unique skew-Hermitian `K` with `X - K` upper triangular with real diagonal.
pub fn k_project(x: &ComplexMatrix) -> ComplexMatrix {
    let n = x.nrows();
    ComplexMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        Ordering::Greater => x[(i, j)],
        Ordering::Less => -x[(j, i)].conj(),
        Ordering::Equal => c(0.0, x[(i, i)].im),
    })
}

/// Matrix exponential by scaling and squaring of a degree-18 Taylor polynomial.
pub fn mat_exp(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.nrows();
    let norm1 = (0..a.ncols())
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm1 > 0.5 {
        (norm1 / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let b = a * c(0.5f64.powi(squarings as i32), 0.0);
    let mut term = ComplexMatrix::identity(n, n);
    let mut sum = term.clone();
    for k in 1..=18 {
        term = &term * &b * c(1.0 / k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Unitary polar factor.
pub fn polar_unitary(g: &ComplexMatrix) -> ComplexMatrix {
    let svd = g.clone().svd(true, true);
    svd.u.expect("u requested") * svd.v_t.expect("v_t requested")
}

/// Rotates each column so that its largest-modulus entry is real positive.
pub fn normalize_column_phases(v: &mut ComplexMatrix) {
    for j in 0..v.ncols() {
        let mut best = ZERO;
        for i in 0..v.nrows() {
            if v[(i, j)].norm() > best.norm() * (1.0 + 1e-12) {
                best = v[(i, j)];
            }
        }
        if best.norm() > 0.0 {
            let ph = best.conj() / best.norm();
            for i in 0..v.nrows() {
                v[(i, j)] *= ph;
            }
        }
    }
}

/// Eigenvalues in decreasing order and a unitary matrix of eigenvectors.
pub fn herm_eig(h: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = ensure_square(h)?;
    let r = max_abs(&(h - h.adjoint()));
    if r > 1e-10 * max_abs(h).max(1.0) {
        return Err(Error::NotHermitian(r));
    }
    let sym = (h + h.adjoint()) * c(0.5, 0.0);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = ComplexMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    normalize_column_phases(&mut vecs);
    Ok((vals, vecs))
}

/// Half-open ranges of consecutive eigenvalues (sorted decreasingly) closer
/// than `CLUSTER_TOL` times the larger of the spectral diameter and `max |lambda_i|`.
pub fn clusters(lambda: &[f64]) -> Vec<(usize, usize)> {
    let n = lambda.len();
    if n == 0 {
        return Vec::new();
    }
    let scale = lambda
        .iter()
        .map(|x| x.abs())
        .fold(lambda[0] - lambda[n - 1], f64::max);
    let tol = CLUSTER_TOL * scale;
    let mut out = Vec::new();
    let mut start = 0;
    for k in 1..n {
        if lambda[k - 1] - lambda[k] > tol {
            out.push((start, k));
            start = k;
        }
    }
    out.push((start, n));
    out
}

/// `K(lambda) = {k : lambda_k > lambda_{k+1}}` as 1-based cut positions.
pub fn multiplicity_set(lambda: &[f64]) -> Vec<usize> {
    let cl = clusters(lambda);
    cl[..cl.len() - 1].iter().map(|&(_, e)| e).collect()
}

pub fn ensure_decreasing(lambda: &[f64]) -> Result<()> {
    if lambda.windows(2).any(|w| w[0] < w[1]) || lambda.iter().any(|x| !x.is_finite()) {
        return Err(Error::Precondition(format!(
            "lambda {lambda:?} must be weakly decreasing"
        )));
    }
    Ok(())
}

fn eig_order(a: &C64, b: &C64) -> Ordering {
    let scale = a.norm().max(b.norm()).max(1e-300);
    let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * scale;
    if !close(a.norm(), b.norm()) {
        return b.norm().total_cmp(&a.norm());
    }
    if !close(a.re, b.re) {
        return b.re.total_cmp(&a.re);
    }
    b.im.total_cmp(&a.im)
}

/// Eigenvalues sorted by decreasing modulus, then real part, then imaginary
/// part, with unit eigenvectors as columns.
pub fn general_eig(g: &ComplexMatrix) -> Result<(Vec<C64>, ComplexMatrix)> {
    let n = ensure_square(g)?;
    if n == 0 {
        return Ok((Vec::new(), ComplexMatrix::zeros(0, 0)));
    }
    let (q, t) = Schur::new(g.clone()).unpack();
    let tnorm = max_abs(&t).max(1e-300);
    let small = 1e-14 * tnorm;
    let mut y = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        y[(k, k)] = ONE;
        for i in (0..k).rev() {
            let mut s = ZERO;
            for l in i + 1..=k {
                s += t[(i, l)] * y[(l, k)];
            }
            let mut d = t[(i, i)] - t[(k, k)];
            if d.norm() < small {
                d = c(small, 0.0);
            }
            y[(i, k)] = -s / d;
        }
    }
    let mut v = q * y;
    for j in 0..n {
        let nrm = v.column(j).norm();
        for i in 0..n {
            v[(i, j)] /= c(nrm, 0.0);
        }
    }
    let s = singular_values(&v);
    let cond = s[0] / s[n - 1].max(1e-300);
    if s[n - 1] <= 1e-9 * s[0] {
        return Err(Error::Defective(cond));
    }
    let vals: Vec<C64> = (0..n).map(|i| t[(i, i)]).collect();
    let mut order: Vec<usize> = (0..n).collect();
    for a in 1..n {
        let mut b = a;
        while b > 0 && eig_order(&vals[order[b]], &vals[order[b - 1]]) == Ordering::Less {
            order.swap(b, b - 1);
            b -= 1;
        }
    }
    let mut vecs = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    normalize_column_phases(&mut vecs);
    Ok((order.iter().map(|&i| vals[i]).collect(), vecs))
}

/// Number of singular values above `tol * sigma_max`.
pub fn rank(m: &ComplexMatrix, tol: f64) -> usize {
    let s = singular_values(m);
    match s.first() {
        Some(&top) if top > 0.0 => s.iter().filter(|&&x| x > tol * top).count(),
        _ => 0,
    }
}

/// Orthonormal basis of the kernel of an `r x n` matrix, as `n x (n - rank)` columns.
pub fn null_space(m: &ComplexMatrix, tol: f64) -> ComplexMatrix {
    let (r, n) = m.shape();
    let rows = r.max(n);
    let mut padded = ComplexMatrix::zeros(rows, n);
    padded.view_mut((0, 0), (r, n)).copy_from(m);
    let svd = padded.svd(true, true);
    let vt = svd.v_t.expect("v_t requested");
    let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let kernel: Vec<usize> = (0..n)
        .filter(|&i| svd.singular_values[i] <= tol * top.max(1e-300))
        .collect();
    ComplexMatrix::from_fn(n, kernel.len(), |i, j| vt[(kernel[j], i)].conj())
}

/// Orthonormal basis of the column span of a full-rank `n x k` matrix.
pub fn orthonormal_columns(v: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (n, k) = v.shape();
    if k > n || rank(v, RANK_TOL) < k {
        return Err(Error::Singular);
    }
    let q = v.clone().qr().q();
    Ok(q.columns(0, k).into_owned())
}

/// Orthogonal projector onto the column span of a full-rank `n x k` matrix.
pub fn span_projector(v: &ComplexMatrix) -> Result<ComplexMatrix> {
    let q = orthonormal_columns(v)?;
    Ok(&q * q.adjoint())
}
