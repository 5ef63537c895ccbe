//! Partial flags, coadjoint orbit points, the twist map and cell labels.
//!
//! A partial flag of type `dims = {k_1 < ... < k_r}` is stored through a unitary
//! representative `g`, with `V_k = span(g[:, 1..k])`. The orbit point with
//! spectrum `lambda` is `L = g (i diag lambda) g^*`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    c, clusters, delta, det, ensure_decreasing, ensure_skew_hermitian, ensure_square,
    ensure_unitary, general_eig, herm_eig, i_diag, inv, k_factor, max_abs_diff, multiplicity_set,
    singular_values, submatrix, subsets, w0_signed, ComplexMatrix, IndexSet, C64, CLUSTER_TOL, I,
    ONE, ZERO,
};
use crate::perm::Perm;
use crate::positivity::is_tnn_unitary;

/// Unitarity tolerance for flag representatives.
pub const REP_TOL: f64 = 1e-10;
/// Two flags are equal when every pair of projectors agrees to this tolerance.
pub const FLAG_EQ_TOL: f64 = 1e-8;
/// Lower bound on `|S_k|` inside the twist chart.
pub const CHART_TOL: f64 = 1e-9;
const TWIST_TNN_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct PartialFlag {
    rep: ComplexMatrix,
    dims: Vec<usize>,
}

impl PartialFlag {
    pub fn new(rep: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        let n = ensure_unitary(&rep, REP_TOL)?;
        if dims.iter().any(|&k| k == 0 || k >= n) || dims.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Precondition(format!(
                "dims {dims:?} must be strictly increasing within 1..{n}"
            )));
        }
        Ok(PartialFlag { rep, dims })
    }

    /// Complete flag of a unitary representative.
    pub fn complete(rep: ComplexMatrix) -> Result<Self> {
        let n = rep.nrows();
        Self::new(rep, (1..n).collect())
    }

    /// Flag of an invertible matrix, represented by its canonical unitary factor.
    pub fn from_matrix(g: &ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        let k = k_factor(g)?;
        Self::new(canonical_rep(&k), dims)
    }

    pub fn n(&self) -> usize {
        self.rep.nrows()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn rep(&self) -> &ComplexMatrix {
        &self.rep
    }

    pub fn is_complete(&self) -> bool {
        self.dims.len() + 1 == self.n()
    }

    /// Orthogonal projector onto `V_k`.
    pub fn projector(&self, k: usize) -> ComplexMatrix {
        let cols = self.rep.columns(0, k);
        cols * cols.adjoint()
    }

    /// Largest projector discrepancy over the common type.
    pub fn distance(&self, other: &PartialFlag) -> f64 {
        if self.dims != other.dims || self.n() != other.n() {
            return f64::INFINITY;
        }
        self.dims
            .iter()
            .map(|&k| max_abs_diff(&self.projector(k), &other.projector(k)))
            .fold(0.0, f64::max)
    }

    pub fn same_flag(&self, other: &PartialFlag) -> bool {
        self.distance(other) < FLAG_EQ_TOL
    }

    /// Same flag with the canonical representative.
    pub fn canonical(&self) -> PartialFlag {
        PartialFlag {
            rep: canonical_rep(&self.rep),
            dims: self.dims.clone(),
        }
    }

    /// Flag of type `dims` obtained by forgetting the other subspaces.
    pub fn restrict(&self, dims: Vec<usize>) -> Result<PartialFlag> {
        if dims.iter().any(|k| !self.dims.contains(k)) {
            return Err(Error::Precondition(format!(
                "{dims:?} is not a subset of {:?}",
                self.dims
            )));
        }
        PartialFlag::new(self.rep.clone(), dims)
    }
}

/// `S_k(g) = sum_{|I| = k} Delta_I(g)` for `k = 1..n`.
pub fn chart_sums(g: &ComplexMatrix) -> Vec<C64> {
    let n = g.nrows();
    (1..=n)
        .map(|k| {
            let cols = IndexSet::first(k);
            subsets(n, k)
                .iter()
                .map(|r| det(&submatrix(g, r, &cols)))
                .sum()
        })
        .collect()
}

/// Rotates columns in order so that every `S_k` becomes real positive.
/// Columns whose `S_k` vanishes are left unchanged.
pub fn canonical_rep(g: &ComplexMatrix) -> ComplexMatrix {
    let n = g.nrows();
    let mut rep = g.clone();
    for k in 1..=n {
        let cols = IndexSet::first(k);
        let s: C64 = subsets(n, k)
            .iter()
            .map(|r| det(&submatrix(&rep, r, &cols)))
            .sum();
        if s.norm() > CHART_TOL {
            let ph = s.conj() / s.norm();
            for i in 0..n {
                rep[(i, k - 1)] *= ph;
            }
        }
    }
    rep
}

/// True when every `S_k(g)` is real and exceeds `CHART_TOL`.
pub fn in_chart(g: &ComplexMatrix) -> bool {
    chart_sums(g)
        .iter()
        .all(|s| s.re > CHART_TOL && s.im.abs() <= 1e-9 * s.re.max(1.0))
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitPoint {
    l: ComplexMatrix,
    lambda: Vec<f64>,
    dims: Vec<usize>,
}

impl OrbitPoint {
    /// Validates skew-Hermitian input and reads the spectrum of `-iL`.
    pub fn new(l: ComplexMatrix) -> Result<Self> {
        ensure_skew_hermitian(&l, 1e-10)?;
        let (lambda, _) = herm_eig(&(&l * (-I)))?;
        let dims = multiplicity_set(&lambda);
        Ok(OrbitPoint { l, lambda, dims })
    }

    /// As [`OrbitPoint::new`], also checking the spectrum against `lambda`.
    pub fn with_lambda(l: ComplexMatrix, lambda: &[f64]) -> Result<Self> {
        ensure_decreasing(lambda)?;
        let p = Self::new(l)?;
        if p.lambda.len() != lambda.len() {
            return Err(Error::Dimension(format!(
                "lambda has {} entries for n = {}",
                lambda.len(),
                p.lambda.len()
            )));
        }
        let scale = lambda.iter().map(|x| x.abs()).fold(1.0, f64::max);
        let err = p
            .lambda
            .iter()
            .zip(lambda)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if err > 1e-8 * scale {
            return Err(Error::Precondition(format!(
                "spectrum {:?} of -iL differs from lambda {lambda:?}",
                p.lambda
            )));
        }
        Ok(OrbitPoint {
            l: p.l,
            lambda: lambda.to_vec(),
            dims: multiplicity_set(lambda),
        })
    }

    /// `g (i diag lambda) g^*` for a unitary `g`, without flag-type checks.
    pub fn from_rep(g: &ComplexMatrix, lambda: &[f64]) -> Result<Self> {
        let n = ensure_unitary(g, REP_TOL)?;
        ensure_decreasing(lambda)?;
        if lambda.len() != n {
            return Err(Error::Dimension(format!(
                "lambda has {} entries for n = {n}",
                lambda.len()
            )));
        }
        let l = g * i_diag(lambda) * g.adjoint();
        Ok(OrbitPoint {
            l,
            lambda: lambda.to_vec(),
            dims: multiplicity_set(lambda),
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.l
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn n(&self) -> usize {
        self.l.nrows()
    }
}

/// Cell `(v, w)` with `v <= w` in Bruhat order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellLabel {
    pub v: String,
    pub w: String,
}

impl CellLabel {
    pub fn new(v: &Perm, w: &Perm) -> Self {
        CellLabel {
            v: v.to_string(),
            w: w.to_string(),
        }
    }

    pub fn perms(&self) -> Result<(Perm, Perm)> {
        Ok((self.v.parse()?, self.w.parse()?))
    }
}

impl fmt::Display for CellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.v, self.w)
    }
}

/// Plücker coordinates of `V_k`, scaled so that the largest-modulus one is real positive.
pub fn pluecker(v: &PartialFlag, k: usize) -> Result<Vec<(IndexSet, C64)>> {
    if k == 0 || k > v.n() {
        return Err(Error::Dimension(format!("k = {k} outside 1..={}", v.n())));
    }
    let cols = IndexSet::first(k);
    let sets = subsets(v.n(), k);
    let coords: Vec<C64> = sets
        .iter()
        .map(|r| det(&submatrix(v.rep(), r, &cols)))
        .collect();
    let top = coords.iter().copied().fold(ZERO, |a, b| {
        if b.norm() > a.norm() * (1.0 + 1e-12) {
            b
        } else {
            a
        }
    });
    let ph = top.conj() / top.norm();
    Ok(sets
        .into_iter()
        .zip(coords)
        .map(|(s, x)| (s, x * ph))
        .collect())
}

/// `L = rep (i diag lambda) rep^*`; `lambda` must have multiplicity set `V.dims`.
pub fn flag_to_orbit(v: &PartialFlag, lambda: &[f64]) -> Result<OrbitPoint> {
    ensure_decreasing(lambda)?;
    if lambda.len() != v.n() {
        return Err(Error::Dimension(format!(
            "lambda has {} entries for n = {}",
            lambda.len(),
            v.n()
        )));
    }
    let k = multiplicity_set(lambda);
    if k != v.dims() {
        return Err(Error::Precondition(format!(
            "multiplicity set {k:?} of lambda does not match flag type {:?}",
            v.dims()
        )));
    }
    OrbitPoint::from_rep(v.rep(), lambda)
}

/// Orthonormal basis of the column span of `block` chosen by Gram-Schmidt on
/// the projected coordinate vectors `P e_1, P e_2, ...`.
fn canonical_cluster_basis(block: &ComplexMatrix) -> ComplexMatrix {
    let (n, m) = block.shape();
    let p = block * block.adjoint();
    let mut basis: Vec<nalgebra::DVector<C64>> = Vec::with_capacity(m);
    for e in 0..n {
        if basis.len() == m {
            break;
        }
        let mut x = p.column(e).into_owned();
        for _ in 0..2 {
            for b in &basis {
                let proj = b.dotc(&x);
                x -= b * proj;
            }
        }
        let nrm = x.norm();
        if nrm > 1e-6 {
            basis.push(x / c(nrm, 0.0));
        }
    }
    ComplexMatrix::from_columns(&basis)
}

/// Eigenflag of `-iL` with the canonical representative.
pub fn orbit_to_flag(l: &OrbitPoint) -> Result<PartialFlag> {
    let n = l.n();
    let (lambda, u) = herm_eig(&(l.matrix() * (-I)))?;
    let mut rep = ComplexMatrix::zeros(n, n);
    for (s, e) in clusters(&lambda) {
        let block = u.columns(s, e - s).into_owned();
        let b = if e - s == 1 {
            block
        } else {
            canonical_cluster_basis(&block)
        };
        rep.columns_mut(s, e - s).copy_from(&b);
    }
    PartialFlag::new(canonical_rep(&rep), multiplicity_set(&lambda))
}

/// Orthogonal projector onto the column span of an `n x k` matrix of full rank.
pub fn proj_matrix(v: &ComplexMatrix) -> Result<ComplexMatrix> {
    let gram = v.adjoint() * v;
    let inv = gram.try_inverse().ok_or(Error::Singular)?;
    Ok(v * inv * v.adjoint())
}

/// `Delta_{I,J}(Proj_V)` as a sum over Plücker products of `V` (`n x k`).
pub fn projection_minor_closed_form(
    v: &ComplexMatrix,
    rows: &IndexSet,
    cols: &IndexSet,
) -> Result<C64> {
    let (n, k) = v.shape();
    let l = rows.len();
    if cols.len() != l {
        return Err(Error::Dimension(
            "row and column sets differ in size".into(),
        ));
    }
    for s in [rows, cols] {
        if let Some(m) = s.max().filter(|&m| m > n) {
            return Err(Error::IndexOutOfRange { index: m, bound: n });
        }
    }
    if l > k {
        return Ok(ZERO);
    }
    let all = IndexSet::first(k);
    let norm: f64 = subsets(n, k)
        .iter()
        .map(|s| det(&submatrix(v, s, &all)).norm_sqr())
        .sum();
    if norm <= 0.0 {
        return Err(Error::Singular);
    }
    let free = rows.union(cols).complement(n);
    let mut total = ZERO;
    for pick in subsets(free.len(), k - l) {
        let kset = IndexSet::new(
            pick.as_slice()
                .iter()
                .map(|&i| free.as_slice()[i - 1])
                .collect(),
        )?;
        let sign = if (inv(rows, &kset) + inv(cols, &kset)).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        let a = det(&submatrix(v, &rows.union(&kset), &all));
        let b = det(&submatrix(v, &cols.union(&kset), &all));
        total += a * b.conj() * sign;
    }
    Ok(total / norm)
}

/// Between consecutive elements of `Z \ (I u J)` the multiset `I + J` has an even count.
pub fn evenness_condition(rows: &IndexSet, cols: &IndexSet, n: usize) -> bool {
    let outside: Vec<usize> = (0..=n + 1)
        .filter(|&i| !rows.contains(i) && !cols.contains(i))
        .collect();
    outside.windows(2).all(|w| {
        let count = |s: &IndexSet| {
            s.as_slice()
                .iter()
                .filter(|&&i| i > w[0] && i < w[1])
                .count()
        };
        (count(rows) + count(cols)) % 2 == 0
    })
}

/// `-iL = sum_k (lambda_k - lambda_{k+1}) P_k + lambda_n`, over the cut positions `k`.
#[derive(Clone, Debug)]
pub struct OrbitDecomposition {
    pub terms: Vec<(usize, f64, ComplexMatrix)>,
    pub lambda_n: f64,
}

impl OrbitDecomposition {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.terms.first().map_or(0, |t| t.2.nrows());
        let mut h = ComplexMatrix::identity(n, n) * c(self.lambda_n, 0.0);
        for (_, w, p) in &self.terms {
            h += p * c(*w, 0.0);
        }
        h * I
    }
}

pub fn decompose_orbit(l: &OrbitPoint) -> Result<OrbitDecomposition> {
    let v = orbit_to_flag(l)?;
    let lam = l.lambda();
    let terms = v
        .dims()
        .iter()
        .map(|&k| (k, lam[k - 1] - lam[k], v.projector(k)))
        .collect();
    Ok(OrbitDecomposition {
        terms,
        lambda_n: lam[lam.len() - 1],
    })
}

/// `rep -> w0 delta rep delta`, reversing the ground set.
pub fn rev_unitary(g: &ComplexMatrix) -> ComplexMatrix {
    let n = g.nrows();
    w0_signed(n) * delta(n) * g * delta(n)
}

/// `rep -> delta rep delta w0`, passing to orthogonal complements.
pub fn dual_unitary(g: &ComplexMatrix) -> ComplexMatrix {
    let n = g.nrows();
    delta(n) * g * delta(n) * w0_signed(n)
}

pub fn rev_flag(v: &PartialFlag) -> Result<PartialFlag> {
    PartialFlag::new(rev_unitary(v.rep()), v.dims().to_vec())
}

pub fn dual_flag(v: &PartialFlag) -> Result<PartialFlag> {
    let n = v.n();
    let mut dims: Vec<usize> = v.dims().iter().map(|&k| n - k).collect();
    dims.sort_unstable();
    PartialFlag::new(dual_unitary(v.rep()), dims)
}

/// `iota(g) = delta g^{-1} delta`.
pub fn twist_unitary(g: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = ensure_square(g)?;
    let inv = g.clone().try_inverse().ok_or(Error::Singular)?;
    Ok(delta(n) * inv * delta(n))
}

/// The twist map on complete flags, defined where the canonical representative
/// `g` and `iota(g)` both have positive chart sums.
pub fn twist_flag(v: &PartialFlag) -> Result<PartialFlag> {
    if !v.is_complete() {
        return Err(Error::Precondition(
            "the twist map acts on complete flags".into(),
        ));
    }
    let g = canonical_rep(v.rep());
    if !in_chart(&g) {
        return Err(Error::OutsideDomain(
            "a chart sum S_k of the flag vanishes or is not positive".into(),
        ));
    }
    let t = twist_unitary(&g)?;
    if !in_chart(&t) {
        return Err(Error::OutsideDomain(
            "a chart sum S_k of the twisted flag is not positive".into(),
        ));
    }
    PartialFlag::complete(t)
}

/// The twist map on a regular totally nonnegative orbit, `L -> delta g^* (i diag lambda) g delta`.
pub fn twist_orbit(l: &OrbitPoint) -> Result<OrbitPoint> {
    if l.dims().len() + 1 != l.n() {
        return Err(Error::Precondition(format!(
            "lambda {:?} has repeated entries",
            l.lambda()
        )));
    }
    let v = orbit_to_flag(l)?;
    let verdict = is_tnn_unitary(v.rep(), TWIST_TNN_TOL)?;
    if !verdict.is_nonnegative() {
        return Err(Error::OutsideDomain(
            "orbit point is not totally nonnegative".into(),
        ));
    }
    let t = twist_flag(&v)?;
    OrbitPoint::from_rep(t.rep(), l.lambda())
}

/// Reversal on orbit points, `L -> (w0 delta) L (w0 delta)^*`.
pub fn rev_orbit(l: &OrbitPoint) -> Result<OrbitPoint> {
    let n = l.n();
    let a = w0_signed(n) * delta(n);
    OrbitPoint::with_lambda(&a * l.matrix() * a.adjoint(), l.lambda())
}

/// Flag of eigenvectors of a diagonalizable matrix, eigenvalues ordered by
/// decreasing modulus, with clusters merged into single steps.
pub fn eigenflag(g: &ComplexMatrix) -> Result<PartialFlag> {
    let (vals, vecs) = general_eig(g)?;
    let n = vals.len();
    let mut diam: f64 = 0.0;
    for a in &vals {
        for b in &vals {
            diam = diam.max((a - b).norm());
        }
    }
    let dims = (1..n)
        .filter(|&k| (vals[k - 1] - vals[k]).norm() > CLUSTER_TOL * diam)
        .collect();
    PartialFlag::from_matrix(&vecs, dims)
}

fn cell_rank(m: &ComplexMatrix, tol: f64) -> Result<usize> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(0);
    }
    let s = singular_values(m);
    if let Some(x) = s.iter().find(|&&x| x > tol * 1e-3 && x <= tol * 1e3) {
        return Err(Error::AmbiguousRank(format!(
            "singular value {x:.3e} near threshold {tol:.1e}"
        )));
    }
    Ok(s.iter().filter(|&&x| x > tol).count())
}

/// Perm whose `j`-th value is the unique new row index in `S_j \ S_{j-1}`.
fn perm_from_jumps(jumps: Vec<Vec<usize>>) -> Result<Perm> {
    let mut one_line = Vec::with_capacity(jumps.len());
    let mut prev: Vec<usize> = Vec::new();
    for s in jumps {
        let new: Vec<usize> = s.iter().copied().filter(|i| !prev.contains(i)).collect();
        if new.len() != 1 || s.len() != prev.len() + 1 {
            return Err(Error::AmbiguousRank(format!(
                "rank jumps {s:?} are not nested"
            )));
        }
        one_line.push(new[0]);
        prev = s;
    }
    Perm::new(one_line)
}

/// Cell `(v, w)` of a complete flag from the ranks of its corner submatrices.
pub fn locate_cell(v: &PartialFlag, tol: f64) -> Result<CellLabel> {
    if !v.is_complete() {
        return Err(Error::Precondition(
            "cells are located for complete flags".into(),
        ));
    }
    let n = v.n();
    let g = v.rep();
    let thr = tol * crate::linalg::max_abs(g).max(1.0);
    let mut w_jumps = Vec::with_capacity(n);
    let mut v_jumps = Vec::with_capacity(n);
    for j in 1..=n {
        let cols = IndexSet::first(j);
        let mut bottom = vec![0; n + 2];
        let mut top = vec![0; n + 1];
        for i in (1..=n).rev() {
            bottom[i] = cell_rank(&submatrix(g, &IndexSet::interval(i, n), &cols), thr)?;
        }
        for i in 1..=n {
            top[i] = cell_rank(&submatrix(g, &IndexSet::first(i), &cols), thr)?;
        }
        w_jumps.push((1..=n).filter(|&i| bottom[i] > bottom[i + 1]).collect());
        v_jumps.push((1..=n).filter(|&i| top[i] > top[i - 1]).collect());
    }
    let w = perm_from_jumps(w_jumps)?;
    let vv = perm_from_jumps(v_jumps)?;
    Ok(CellLabel::new(&vv, &w))
}

/// Signed permutation matrix with column `j` supported on row `w(j)`, signs
/// chosen in order so that `Delta_{w([j]),[j]} > 0`.
pub fn signed_perm(w: &Perm) -> ComplexMatrix {
    let n = w.n();
    let mut m = ComplexMatrix::zeros(n, n);
    for j in 1..=n {
        m[(w.at(j) - 1, j - 1)] = ONE;
        let rows =
            IndexSet::from_unsorted((1..=j).map(|a| w.at(a)).collect()).expect("distinct rows");
        if det(&submatrix(&m, &rows, &IndexSet::first(j))).re < 0.0 {
            m[(w.at(j) - 1, j - 1)] = -ONE;
        }
    }
    m
}

/// Cell labels of the images under the twist, reversal and duality maps.
pub fn twist_cell(cell: &CellLabel) -> Result<CellLabel> {
    let (v, w) = cell.perms()?;
    Ok(CellLabel::new(&v.inverse(), &w.inverse()))
}

pub fn rev_cell(cell: &CellLabel) -> Result<CellLabel> {
    let (v, w) = cell.perms()?;
    let w0 = Perm::longest(v.n());
    Ok(CellLabel::new(&w0.compose(&w), &w0.compose(&v)))
}

pub fn dual_cell(cell: &CellLabel) -> Result<CellLabel> {
    let (v, w) = cell.perms()?;
    let w0 = Perm::longest(v.n());
    Ok(CellLabel::new(&w.compose(&w0), &v.compose(&w0)))
}
