//! Certification of total positivity and samplers for positive points.
//!
//! Every check returns a [`Verdict`] carrying the extremal minor, so callers can
//! report which minor decided the outcome.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flagorbit::signed_perm;
use crate::linalg::{
    c, det, ensure_real, ensure_square, ensure_unitary, herm_eig, k_factor, max_abs, submatrix,
    subsets, ComplexMatrix, IndexSet, C64,
};
use crate::perm::Perm;

/// Default certification tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Largest size for exhaustive enumeration of all square minors.
pub const MAX_EXHAUSTIVE_N: usize = 8;
const SAMPLE_RETRIES: usize = 32;
/// Bidiagonal parameters near 1 make products Pascal-like with nearly parallel rows.
const TP_CENTER: f64 = 0.3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Positive,
    Nonnegative,
    Outside,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub rows: IndexSet,
    pub cols: IndexSet,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub witness: Option<Witness>,
    pub tol: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl Verdict {
    pub fn is_positive(&self) -> bool {
        self.status == Status::Positive
    }

    /// True for positive and nonnegative verdicts.
    pub fn is_nonnegative(&self) -> bool {
        self.status != Status::Outside
    }
}

/// Accumulates the worst minor seen, normalized by its scale.
struct Tally {
    tol: f64,
    status: Status,
    worst: Option<(f64, Witness)>,
}

impl Tally {
    fn new(tol: f64) -> Self {
        Tally {
            tol,
            status: Status::Positive,
            worst: None,
        }
    }

    /// `ratio` is the minor divided by its scale; `value` is the raw minor.
    fn push(&mut self, ratio: f64, rows: &IndexSet, cols: &IndexSet, value: f64) {
        if ratio <= -self.tol {
            self.status = Status::Outside;
        } else if ratio <= self.tol && self.status == Status::Positive {
            self.status = Status::Nonnegative;
        }
        if self.worst.as_ref().is_none_or(|(r, _)| ratio < *r) {
            self.worst = Some((
                ratio,
                Witness {
                    rows: rows.clone(),
                    cols: cols.clone(),
                    value,
                },
            ));
        }
    }

    /// Marks an outright failure that no later minor may override.
    fn fail(&mut self, rows: &IndexSet, cols: &IndexSet, value: f64) {
        self.status = Status::Outside;
        self.worst = Some((
            f64::NEG_INFINITY,
            Witness {
                rows: rows.clone(),
                cols: cols.clone(),
                value,
            },
        ));
    }

    fn finish(self, note: Option<String>) -> Verdict {
        Verdict {
            status: self.status,
            witness: self.worst.map(|(_, w)| w),
            tol: self.tol,
            note,
        }
    }
}

/// Total positivity of a real square matrix over all square minors.
///
/// A minor counts as positive when it exceeds `tol` times the product of the
/// Euclidean norms of the rows of its submatrix.
pub fn is_tp_matrix(m: &ComplexMatrix, tol: f64) -> Result<Verdict> {
    let n = ensure_square(m)?;
    if n > MAX_EXHAUSTIVE_N {
        return Err(Error::TooLarge {
            n,
            max: MAX_EXHAUSTIVE_N,
        });
    }
    ensure_real(m, tol)?;
    let mut tally = Tally::new(tol);
    for k in 1..=n {
        let sets = subsets(n, k);
        for rows in &sets {
            for cols in &sets {
                let sub = submatrix(m, rows, cols);
                let d = det(&sub).re;
                let scale: f64 = sub.row_iter().map(|r| r.norm()).product();
                let ratio = if scale > 0.0 { d / scale } else { 0.0 };
                tally.push(ratio, rows, cols, d);
                if tally.status == Status::Outside {
                    return Ok(tally.finish(None));
                }
            }
        }
    }
    Ok(tally.finish(None))
}

/// Membership of a real tridiagonal matrix in the Jacobi cone: nonnegative
/// off-diagonal entries and zeros outside the tridiagonal band.
pub fn is_jacobi_cone(l: &ComplexMatrix, tol: f64) -> Result<Verdict> {
    let n = ensure_square(l)?;
    ensure_real(l, tol)?;
    let scale = max_abs(l).max(1.0);
    let mut tally = Tally::new(tol);
    for i in 1..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            let rows = IndexSet::interval(i, i);
            let cols = IndexSet::interval(j, j);
            let v = l[(i - 1, j - 1)].re;
            if i.abs_diff(j) > 1 {
                if v.abs() > tol * scale {
                    tally.fail(&rows, &cols, v);
                    return Ok(tally.finish(Some("entry outside the tridiagonal band".into())));
                }
            } else {
                tally.push(v / scale, &rows, &cols, v);
            }
        }
    }
    Ok(tally.finish(None))
}

/// Total nonnegativity of the complete flag spanned by the columns of a unitary matrix.
///
/// Consecutive left-justified minors decide strict positivity; otherwise every
/// left-justified minor is checked.
pub fn is_tnn_unitary(g: &ComplexMatrix, tol: f64) -> Result<Verdict> {
    let n = ensure_unitary(g, tol.max(1e-10))?;
    if n > MAX_EXHAUSTIVE_N + 4 {
        return Err(Error::TooLarge {
            n,
            max: MAX_EXHAUSTIVE_N + 4,
        });
    }
    let mut fast = Tally::new(tol);
    let mut consecutive_ok = true;
    for k in 1..=n {
        let cols = IndexSet::first(k);
        for start in 1..=n + 1 - k {
            let rows = IndexSet::interval(start, start + k - 1);
            let d = det(&submatrix(g, &rows, &cols));
            if d.im.abs() > tol || d.re <= tol {
                consecutive_ok = false;
                break;
            }
            fast.push(d.re, &rows, &cols, d.re);
        }
        if !consecutive_ok {
            break;
        }
    }
    if consecutive_ok {
        return Ok(fast.finish(None));
    }
    let mut tally = Tally::new(tol);
    for k in 1..=n {
        let cols = IndexSet::first(k);
        for rows in subsets(n, k) {
            let d = det(&submatrix(g, &rows, &cols));
            if d.im.abs() > tol {
                tally.fail(&rows, &cols, d.re);
                return Ok(tally.finish(Some("non-real flag minor".into())));
            }
            tally.push(d.re, &rows, &cols, d.re);
        }
    }
    Ok(tally.finish(None))
}

fn is_consecutive(dims: &[usize]) -> bool {
    dims.windows(2).all(|w| w[1] == w[0] + 1)
}

/// Plücker nonnegativity of the partial flag `V_k = span(rep[:, 1..k])`, `k` in `dims`.
///
/// The coordinates of each `V_k` are divided by the largest-modulus one before
/// comparing against `tol`. `rep` may be `n x c` with `c >= max(dims)`.
pub fn is_plucker_nonneg(rep: &ComplexMatrix, dims: &[usize], tol: f64) -> Result<Verdict> {
    let (n, ncols) = rep.shape();
    if dims.iter().any(|&k| k == 0 || k > ncols || k > n) {
        return Err(Error::Dimension(format!(
            "dims {dims:?} incompatible with a {n}x{ncols} rep"
        )));
    }
    let mut tally = Tally::new(tol);
    for &k in dims {
        let cols = IndexSet::first(k);
        let sets = subsets(n, k);
        let coords: Vec<C64> = sets
            .iter()
            .map(|r| det(&submatrix(rep, r, &cols)))
            .collect();
        let top = coords
            .iter()
            .copied()
            .fold(c(0.0, 0.0), |a, b| if b.norm() > a.norm() { b } else { a });
        if top.norm() < 1e-14 {
            return Err(Error::Singular);
        }
        for (rows, x) in sets.iter().zip(coords) {
            let y = x / top;
            if y.im.abs() > tol {
                tally.fail(rows, &cols, y.re);
                return Ok(tally.finish(Some("non-real Plücker ratio".into())));
            }
            tally.push(y.re, rows, &cols, y.re);
        }
    }
    let note = if is_consecutive(dims) {
        "consecutive dimensions: Plücker positivity coincides with total positivity"
    } else {
        "non-consecutive dimensions: Plücker positivity only, total positivity undecided"
    };
    Ok(tally.finish(Some(note.into())))
}

/// Smallest `m <= m_max` with `L^m` totally positive, for real symmetric
/// `L` with positive spectrum.
pub fn is_eventually_tp(l: &ComplexMatrix, m_max: u32) -> Result<Option<u32>> {
    let n = ensure_square(l)?;
    ensure_real(l, 1e-12)?;
    let (lam, u) = herm_eig(l)?;
    if lam.iter().any(|&x| x <= 0.0) {
        return Err(Error::Precondition(format!(
            "spectrum {lam:?} is not positive"
        )));
    }
    for m in 1..=m_max {
        let d: Vec<f64> = lam.iter().map(|x| (x / lam[0]).powi(m as i32)).collect();
        let p = &u * crate::linalg::diag_real(&d) * u.adjoint();
        let p = p.map(|z| c(z.re, 0.0));
        if n == 0 || is_tp_matrix(&p, DEFAULT_TOL)?.is_positive() {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

fn log_uniform<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    10f64.powf(rng.gen_range(-1.0..=1.0))
}

/// `center * 10^u` with `u` uniform on `[-0.3, 0.3]`.
fn tp_parameter<R: Rng + ?Sized>(rng: &mut R, center: f64) -> f64 {
    center * 10f64.powf(rng.gen_range(-0.3..=0.3))
}

/// `g <- g (1 + s E_{j+1,j})`, 0-based `j`.
fn mul_lower(g: &mut ComplexMatrix, j: usize, s: f64) {
    let n = g.nrows();
    for r in 0..n {
        let v = g[(r, j + 1)];
        g[(r, j)] += v * s;
    }
}

/// `g <- g (1 + t E_{j,j+1})`, 0-based `j`.
fn mul_upper(g: &mut ComplexMatrix, j: usize, t: f64) {
    let n = g.nrows();
    for r in 0..n {
        let v = g[(r, j)];
        g[(r, j + 1)] += v * t;
    }
}

/// Reduced word `s_1 s_2 s_1 s_3 s_2 s_1 ...` for the longest element, 0-based.
fn longest_word(n: usize) -> Vec<usize> {
    (1..n).flat_map(|a| (0..a).rev()).collect()
}

/// Totally positive matrix `L D U`, each triangular factor a product of
/// elementary bidiagonal factors along a reduced word for the longest element.
pub fn sample_tp<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ComplexMatrix> {
    if n > MAX_EXHAUSTIVE_N {
        return Err(Error::TooLarge {
            n,
            max: MAX_EXHAUSTIVE_N,
        });
    }
    let word = longest_word(n);
    for _ in 0..SAMPLE_RETRIES {
        let mut g = ComplexMatrix::identity(n, n);
        for &j in &word {
            mul_lower(&mut g, j, tp_parameter(rng, TP_CENTER));
        }
        for col in 0..n {
            let d = tp_parameter(rng, 1.0);
            for r in 0..n {
                g[(r, col)] *= d;
            }
        }
        for &j in &word {
            mul_upper(&mut g, j, tp_parameter(rng, TP_CENTER));
        }
        balance(&mut g);
        if is_tp_matrix(&g, DEFAULT_TOL)?.is_positive() {
            return Ok(g);
        }
    }
    Err(Error::Certification(format!(
        "no certified TP sample of size {n} after {SAMPLE_RETRIES} draws"
    )))
}

/// Positive diagonal scaling `D1 g D2` toward unit row and column norms.
fn balance(g: &mut ComplexMatrix) {
    let n = g.nrows();
    for _ in 0..30 {
        for i in 0..n {
            let r = g.row(i).norm();
            if r > 0.0 {
                g.row_mut(i).scale_mut(1.0 / r);
            }
        }
        for j in 0..n {
            let r = g.column(j).norm();
            if r > 0.0 {
                g.column_mut(j).scale_mut(1.0 / r);
            }
        }
    }
}

/// Unitary representative of a totally positive complete flag.
///
/// `Pi^U(L D U) = Pi^U(L)` for the factors of [`sample_tp`], so only the lower
/// unipotent factor is drawn; this keeps the representative well conditioned.
pub fn sample_tnn_flag<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ComplexMatrix> {
    let word = longest_word(n);
    for _ in 0..SAMPLE_RETRIES {
        let mut l = ComplexMatrix::identity(n, n);
        for &j in &word {
            mul_lower(&mut l, j, log_uniform(rng));
        }
        let g = k_factor(&l)?;
        if is_tnn_unitary(&g, DEFAULT_TOL)?.is_positive() {
            return Ok(g);
        }
    }
    Err(Error::Certification(format!(
        "no certified positive flag of size {n}"
    )))
}

/// Unitary representative of a totally nonnegative complete flag, usually on
/// the boundary: a random product of elementary positive factors applied to a
/// signed permutation matrix.
pub fn sample_tnn_boundary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ComplexMatrix> {
    for _ in 0..SAMPLE_RETRIES {
        let mut v: Vec<usize> = (1..=n).collect();
        v.shuffle(rng);
        let w = Perm::new(v)?;
        let mut a = ComplexMatrix::identity(n, n);
        if n > 1 {
            let count = rng.gen_range(0..=n * (n - 1));
            for _ in 0..count {
                let j = rng.gen_range(0..n - 1);
                if rng.gen_bool(0.5) {
                    mul_lower(&mut a, j, log_uniform(rng));
                } else {
                    mul_upper(&mut a, j, log_uniform(rng));
                }
            }
        }
        for col in 0..n {
            let d = log_uniform(rng);
            for r in 0..n {
                a[(r, col)] *= d;
            }
        }
        let g = k_factor(&(a * signed_perm(&w)))?;
        if is_tnn_unitary(&g, DEFAULT_TOL)?.is_nonnegative() {
            return Ok(g);
        }
    }
    Err(Error::Certification(format!(
        "no certified nonnegative flag of size {n}"
    )))
}

/// Random real matrix with entries uniform in `[-1, 1]`.
pub fn sample_real<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| c(rng.gen_range(-1.0..=1.0), 0.0))
}

/// Random complex matrix with entries uniform in the unit square.
pub fn sample_complex<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        c(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
    })
}

/// Haar-like random unitary: unitary factor of a random complex matrix.
pub fn sample_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    loop {
        if let Ok(k) = k_factor(&sample_complex(n, n, rng)) {
            return k;
        }
    }
}
