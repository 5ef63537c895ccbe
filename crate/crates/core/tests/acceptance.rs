//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::{max_diff, real, rng};
use rand::Rng;
use tnn_orbits::ampli::*;
use tnn_orbits::flagorbit::*;
use tnn_orbits::flows::*;
use tnn_orbits::jacobi::*;
use tnn_orbits::linalg::*;
use tnn_orbits::positivity::*;
use tnn_orbits::toda::*;
use tnn_orbits::Result;

type Outcome = Result<(bool, String)>;
type Criterion = fn() -> Outcome;

/// Largest value seen, together with whether every value stayed below the bound.
struct Worst {
    bound: f64,
    value: f64,
}

impl Worst {
    fn new(bound: f64) -> Self {
        Worst { bound, value: 0.0 }
    }

    fn push(&mut self, v: f64) {
        self.value = if v.is_nan() {
            f64::INFINITY
        } else {
            self.value.max(v)
        };
    }

    fn ok(&self) -> bool {
        self.value < self.bound
    }

    fn show(&self, name: &str) -> String {
        format!("{name} {:.2e} (< {:.0e})", self.value, self.bound)
    }
}

fn drive_from(s: &ComplexMatrix) -> ComplexMatrix {
    s * c(0.0, -1.0)
}

fn symmetric<R: Rng>(n: usize, r: &mut R) -> ComplexMatrix {
    let a = sample_real(n, n, r);
    (&a + a.transpose()) * c(0.5, 0.0)
}

fn tridiagonal_positive<R: Rng>(n: usize, r: &mut R) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = c(r.gen_range(-1.0..1.0), 0.0);
        if i + 1 < n {
            let x = r.gen_range(0.2..1.5);
            m[(i, i + 1)] = c(x, 0.0);
            m[(i + 1, i)] = c(x, 0.0);
        }
    }
    m
}

fn random_moser<R: Rng>(n: usize, r: &mut R) -> Result<MoserData> {
    let mut lambda: Vec<f64> = (0..n).map(|_| r.gen_range(-2.0..2.0)).collect();
    lambda.sort_by(|a, b| b.total_cmp(a));
    for i in 1..n {
        if lambda[i - 1] - lambda[i] < 0.2 {
            lambda[i] = lambda[i - 1] - 0.2;
        }
    }
    MoserData::new(lambda, (0..n).map(|_| r.gen_range(0.2..2.0)).collect())
}

fn central_difference(f: impl Fn(f64) -> Result<ComplexMatrix>, h: f64) -> Result<ComplexMatrix> {
    Ok((f(h)? - f(-h)?) * c(1.0 / (2.0 * h), 0.0))
}

fn criterion_1() -> Outcome {
    let g = real(3, 3, &[1.0, 2.0, 1.0, 1.0, 3.0, 2.0, 1.0, 4.0, 4.0]);
    let (vals, _) = general_eig(&g)?;
    let r5 = 5f64.sqrt();
    let mut err = Worst::new(1e-10);
    for (x, y) in vals
        .iter()
        .zip([(7.0 + 3.0 * r5) / 2.0, 1.0, (7.0 - 3.0 * r5) / 2.0])
    {
        err.push((x - c(y, 0.0)).norm());
    }
    let flag = eigenflag(&g)?;
    let tp = is_tnn_unitary(flag.rep(), DEFAULT_TOL)?.is_positive();
    Ok((
        err.ok() && tp,
        format!(
            "{}, eigenflag positive = {tp}",
            err.show("eigenvalue error")
        ),
    ))
}

fn intro_input() -> ComplexMatrix {
    let (a, b) = (2f64.sqrt(), 3f64.sqrt());
    real(
        3,
        3,
        &[
            b / 2.0,
            -1.0 / (2.0 * a),
            1.0 / (2.0 * a),
            b / 4.0,
            1.0 / (4.0 * a),
            -5.0 / (4.0 * a),
            0.25,
            3.0 * b / (4.0 * a),
            b / (4.0 * a),
        ],
    )
}

fn intro_image() -> ComplexMatrix {
    let (a, b) = (2f64.sqrt(), 3f64.sqrt());
    real(
        3,
        3,
        &[
            b / 2.0,
            -b / 4.0,
            0.25,
            1.0 / (2.0 * a),
            1.0 / (4.0 * a),
            -3.0 * b / (4.0 * a),
            1.0 / (2.0 * a),
            5.0 / (4.0 * a),
            b / (4.0 * a),
        ],
    )
}

fn criterion_2() -> Outcome {
    let golden = max_diff(
        twist_flag(&PartialFlag::complete(intro_input())?)?.rep(),
        &intro_image(),
    );
    let mut inv = Worst::new(1e-8);
    for seed in 0..100u64 {
        let mut r = rng(1000 + seed);
        let n = 2 + (seed as usize % 5);
        let g = if seed % 2 == 0 {
            sample_tnn_flag(n, &mut r)?
        } else {
            sample_tnn_boundary(n, &mut r)?
        };
        let v = PartialFlag::complete(g)?;
        inv.push(twist_flag(&twist_flag(&v)?)?.distance(&v));
    }
    Ok((
        golden < 1e-10 && inv.ok(),
        format!(
            "golden {golden:.2e} (< 1e-10), {}",
            inv.show("involution defect")
        ),
    ))
}

fn jacobi_closed_form(x: &[f64]) -> ComplexMatrix {
    let (x1, x2, x3) = (x[0] * x[0], x[1] * x[1], x[2] * x[2]);
    let s = x1 + x2 + x3;
    let q = x1 * x2 + 4.0 * x1 * x3 + x2 * x3;
    let l12 = q.sqrt() / s;
    let l23 = 2.0 * x[0] * x[1] * x[2] * s.sqrt() / q;
    real(
        3,
        3,
        &[
            (x1 - x3) / s,
            l12,
            0.0,
            l12,
            (x1 - x3) * (x2 * x2 - 4.0 * x1 * x3) / (s * q),
            l23,
            0.0,
            l23,
            x2 * (x3 - x1) / q,
        ],
    )
}

fn criterion_3() -> Outcome {
    let mut r = rng(3);
    let mut closed = Worst::new(1e-9);
    for _ in 0..20 {
        let x: Vec<f64> = (0..3).map(|_| r.gen_range(0.1..3.0)).collect();
        let l = jacobi_from_moser(&MoserData::new(vec![1.0, 0.0, -1.0], x.clone())?)?;
        closed.push(max_diff(&(l.matrix() * (-I)), &jacobi_closed_form(&x)));
    }
    let mut roundtrip = Worst::new(1e-8);
    let mut identity = Worst::new(1e-9);
    for _ in 0..50 {
        let n = r.gen_range(2..=6);
        let d = random_moser(n, &mut r)?;
        let l = jacobi_from_moser(&d)?;
        let back = moser_from_jacobi(&l)?;
        for (a, b) in back
            .lambda()
            .iter()
            .zip(d.lambda())
            .chain(back.x().iter().zip(&d.r()))
        {
            roundtrip.push((a - b).abs());
        }
        let h = l.matrix() * (-I);
        let l11 = h[(0, 0)].re;
        let rhs: f64 = back
            .lambda()
            .iter()
            .zip(back.x())
            .map(|(lj, rj)| ((lj - l11) * rj).powi(2))
            .sum();
        identity.push((h[(0, 1)].re.powi(2) - rhs).abs());
    }
    let ok = closed.ok() && roundtrip.ok() && identity.ok();
    Ok((
        ok,
        format!(
            "{}, {}, {}",
            closed.show("closed form"),
            roundtrip.show("roundtrip"),
            identity.show("L12^2 identity")
        ),
    ))
}

fn criterion_4() -> Outcome {
    let l0 = OrbitPoint::new(real(2, 2, &[0.0, 1.0, 1.0, 0.0]) * I)?;
    let drive = drive_from(&diag_real(&[1.0, -1.0]));
    let mut err = Worst::new(1e-9);
    for t in [-2.0f64, -1.0, 0.0, 1.0, 2.0] {
        let (th, sh) = ((2.0 * t).tanh(), 1.0 / (2.0 * t).cosh());
        err.push(max_diff(
            kahler_flow(&l0, &drive, t)?.matrix(),
            &(real(2, 2, &[th, sh, sh, -th]) * I),
        ));
    }
    let plus = kahler_flow(&l0, &drive, 400.0)?;
    let minus = kahler_flow(&l0, &drive, -400.0)?;
    let limit = limit_point(&drive, l0.lambda())?;
    let reverse = limit_point(&(-drive.clone()), l0.lambda())?;
    let mut lim = Worst::new(1e-9);
    lim.push(max_diff(plus.matrix(), &i_diag(&[1.0, -1.0])));
    lim.push(max_diff(minus.matrix(), &i_diag(&[-1.0, 1.0])));
    lim.push(max_diff(limit.matrix(), plus.matrix()));
    lim.push(max_diff(reverse.matrix(), minus.matrix()));
    Ok((
        err.ok() && lim.ok(),
        format!("{}, {}", err.show("trajectory"), lim.show("limits")),
    ))
}

fn criterion_5() -> Outcome {
    let mut r = rng(5);
    let lambda = [1.5, 1.5, -0.5, -0.5];
    let spread = lambda[0] - lambda[3];
    let times = uniform_times(0.0, 2.0, 10);
    let (mut normal, mut induced) = (Worst::new(1e-6), Worst::new(1e-6));
    for _ in 0..3 {
        let l0 = OrbitPoint::from_rep(&sample_unitary(4, &mut r), &lambda)?;
        let drive = skew_hermitian_part(&sample_complex(4, 4, &mut r));
        let tn = FlowSpec::new(Metric::Normal, drive.clone(), lambda.to_vec())?
            .with_step(1e-3)?
            .run(&l0, &times)?;
        let ti =
            FlowSpec::new(Metric::Induced, drive.clone(), lambda.to_vec())?.run(&l0, &times)?;
        for (k, &t) in times.iter().enumerate() {
            normal.push(max_diff(
                tn.points[k].matrix(),
                kahler_flow(&l0, &drive, spread * t)?.matrix(),
            ));
            induced.push(max_diff(
                ti.points[k].matrix(),
                kahler_flow(&l0, &drive, t / spread)?.matrix(),
            ));
        }
    }
    Ok((
        normal.ok() && induced.ok(),
        format!("{}, {}", normal.show("normal"), induced.show("induced")),
    ))
}

fn criterion_6() -> Outcome {
    let mut r = rng(6);
    let h = 1e-5;
    let (mut fd, mut closed) = (Worst::new(1e-7), Worst::new(1e-7));
    for _ in 0..20 {
        let [a, b, p, q]: [f64; 4] = std::array::from_fn(|_| r.gen_range(-1.0..1.0));
        if a * a + b * b < 1e-2 {
            continue;
        }
        let l0 = OrbitPoint::new(real(2, 2, &[a, b, b, -a]) * I)?;
        let drive = drive_from(&real(2, 2, &[p, q, q, -p]));
        let tangent = real(2, 2, &[-b, a, a, b]) * I;
        let s = a * q - b * p;
        let want = [
            (Metric::Kahler, 2.0 * s / (a * a + b * b).sqrt()),
            (Metric::Normal, 4.0 * s),
            (Metric::Induced, s / (a * a + b * b)),
        ];
        let g0 = orbit_to_flag(&l0)?.rep().clone();
        for (metric, factor) in want {
            let expected = &tangent * c(factor, 0.0);
            closed.push(max_diff(&velocity(metric, &l0, &drive)?, &expected));
            let at = |t: f64| -> Result<ComplexMatrix> {
                let tr = match metric {
                    Metric::Kahler => return Ok(kahler_flow(&l0, &drive, t)?.matrix().clone()),
                    Metric::Normal => normal_flow(&l0, &drive, t, h)?,
                    Metric::Induced => induced_flow(&g0, l0.lambda(), &drive, t, h)?,
                };
                Ok(if t >= 0.0 {
                    tr.last().matrix().clone()
                } else {
                    tr.points[0].matrix().clone()
                })
            };
            fd.push(max_diff(&central_difference(at, h)?, &expected));
        }
    }
    Ok((
        fd.ok() && closed.ok(),
        format!(
            "{}, {}",
            fd.show("finite difference"),
            closed.show("velocity")
        ),
    ))
}

/// Random decreasing spectrum with a random multiplicity pattern.
fn random_lambda<R: Rng>(n: usize, r: &mut R) -> Vec<f64> {
    let mut blocks = Vec::new();
    let mut left = n;
    while left > 0 {
        let b = r.gen_range(1..=left.min(n - 1).max(1));
        blocks.push(b);
        left -= b;
    }
    let mut out = Vec::new();
    let mut value = 2.0;
    for b in blocks {
        out.extend(std::iter::repeat_n(value, b));
        value -= r.gen_range(0.3..1.5);
    }
    out
}

/// Symmetric `S` with `-iS` in the preserving set for the cut pattern of `lambda`.
fn admissible_pattern<R: Rng>(lambda: &[f64], r: &mut R) -> ComplexMatrix {
    let n = lambda.len();
    let cuts = multiplicity_set(lambda);
    let mut s = ComplexMatrix::zeros(n, n);
    let mut put = |i: usize, j: usize, v: f64| {
        s[(i, j)] = c(v, 0.0);
        s[(j, i)] = c(v, 0.0);
    };
    let weight = |r: &mut R| {
        if r.gen_bool(0.2) {
            0.0
        } else {
            r.gen_range(0.1..1.5)
        }
    };
    for i in 0..n {
        put(i, i, r.gen_range(-1.0..1.0));
    }
    match cuts.as_slice() {
        [1] => {
            for i in 0..n {
                for j in i + 1..n {
                    put(i, j, weight(r));
                }
            }
        }
        [k] if *k == n - 1 => {
            for i in 0..n {
                for j in i + 1..n {
                    let sign = if (i + j) % 2 == 1 { 1.0 } else { -1.0 };
                    put(i, j, sign * weight(r));
                }
            }
        }
        [k] => {
            for i in 0..n - 1 {
                put(i, i + 1, weight(r));
            }
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            put(n - 1, 0, sign * weight(r));
        }
        _ => {
            for i in 0..n - 1 {
                put(i, i + 1, weight(r));
            }
        }
    }
    s
}

fn criterion_7() -> Outcome {
    let mut r = rng(7);
    let mut worst_allowed = 0.0f64;
    let mut preserving = 0;
    let mut pattern_rejected = 0;
    for pair in 0..200 {
        let n = if pair % 2 == 0 { 3 } else { 4 };
        let lambda = random_lambda(n, &mut r);
        let s = if pair % 4 < 2 {
            admissible_pattern(&lambda, &mut r)
        } else {
            symmetric(n, &mut r)
        };
        let drive = drive_from(&s);
        let class = classify_kahler(&drive, &lambda, 1e-12)?;
        if pair % 4 < 2 && class == KahlerClass::None {
            pattern_rejected += 1;
        }
        if class == KahlerClass::None {
            continue;
        }
        preserving += 1;
        for _ in 0..3 {
            let g0 = sample_tnn_boundary(n, &mut r)?;
            for (_, d) in boundary_audit(Metric::Kahler, &lambda, &drive, &g0)? {
                worst_allowed = worst_allowed.min(d);
            }
        }
    }
    let audit_ok = worst_allowed >= -1e-9 && pattern_rejected == 0 && preserving >= 100;

    let mut nogo_ok = true;
    let lambda = [2.0, 0.5, -0.25];
    for _ in 0..100 {
        let mut s = tridiagonal_positive(3, &mut r);
        if r.gen_bool(0.5) {
            for (i, j) in [(0, 1), (1, 0), (1, 2), (2, 1)] {
                s[(i, j)] = c(0.0, 0.0);
            }
        }
        let audit = normal_nogo_audit(&lambda, &drive_from(&s))?;
        nogo_ok &= audit.iter().any(|a| a.derivative < 0.0);
    }

    let threshold = 2.0 + 2.0 * 2f64.sqrt();
    let tri = drive_from(&real(3, 3, &[0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0]));
    let mut threshold_ok = true;
    for ratio in [
        0.1,
        1.0 / threshold * 0.99,
        1.0 / threshold * 1.01,
        0.5,
        1.0,
        2.0,
        4.0,
        threshold * 0.99,
        threshold * 1.01,
        8.0,
    ] {
        let lambda = [ratio + 1.0, 1.0, 0.0];
        let audit = induced_audit_n3(&lambda, &tri)?;
        let expect = ratio.max(1.0 / ratio) <= threshold;
        let numeric = induced_audit_n3_numeric(&lambda, &tri, 48)? >= -1e-10;
        threshold_ok &= audit.admissible == expect && audit.interval == expect && numeric == expect;
    }
    Ok((
        audit_ok && nogo_ok && threshold_ok,
        format!(
            "{preserving} preserving pairs, worst audited derivative {worst_allowed:.2e} (>= -1e-9), normal no-go {nogo_ok}, induced threshold {threshold_ok}"
        ),
    ))
}

fn criterion_8() -> Outcome {
    let mut r = rng(8);
    let (mut symes, mut drift) = (Worst::new(1e-6), Worst::new(1e-8));
    let times = uniform_times(0.0, 5.0, 20);
    for _ in 0..3 {
        let l0 = OrbitPoint::new(skew_hermitian_part(&sample_complex(4, 4, &mut r)))?;
        let tr = toda_ode(&l0, &times, 1e-3)?;
        drift.push(tr.max_spectrum_drift());
        for (t, p) in times.iter().zip(&tr.points) {
            symes.push(max_diff(p.matrix(), toda_symes(&l0, *t)?.matrix()));
        }
    }
    let mut twist = Worst::new(1e-7);
    for n in 3..=5 {
        let l0 = jacobi_from_moser(&random_moser(n, &mut r)?)?;
        for t in [-1.0, 0.5, 2.0] {
            twist.push(toda_twist_residual(&l0, t)?);
        }
    }
    let mut sorting = Worst::new(1e-4);
    for _ in 0..5 {
        let lambda = [3.0, 1.0, -0.5, -2.0];
        let l0 = OrbitPoint::from_rep(&sample_tnn_flag(4, &mut r)?, &lambda)?;
        let (plus, minus) = toda_limits(&l0, None)?;
        sorting.push(max_diff(plus.matrix(), &i_diag(&lambda)));
        let anti: Vec<f64> = lambda.iter().rev().copied().collect();
        sorting.push(max_diff(minus.matrix(), &i_diag(&anti)));
    }
    let mut bracket = Worst::new(1e-10);
    for n in 2..=6 {
        let mut h = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            h[(i, i)] = c(r.gen_range(-1.0..1.0), 0.0);
            if i + 1 < n {
                let z = c(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
                h[(i + 1, i)] = z;
                h[(i, i + 1)] = z.conj();
            }
        }
        bracket.push(tridiagonal_bracket_residual(&(h * I)));
    }
    let all = [&symes, &drift, &twist, &sorting, &bracket];
    Ok((
        all.iter().all(|w| w.ok()),
        format!(
            "{}, {}, {}, {}, {}",
            symes.show("Symes vs RK4"),
            drift.show("drift"),
            twist.show("twist residual"),
            sorting.show("sorting"),
            bracket.show("bracket")
        ),
    ))
}

fn criterion_9() -> Outcome {
    let mut formula = Worst::new(1e-9);
    for seed in 0..50u64 {
        let mut r = rng(9000 + seed);
        let n = 2 + (seed as usize % 5);
        let k = r.gen_range(1..n);
        let v = sample_complex(n, k, &mut r);
        let p = proj_matrix(&v)?;
        for l in 1..=k {
            for rows in subsets(n, l) {
                for cols in subsets(n, l) {
                    formula.push(
                        (minor(&p, &rows, &cols)?
                            - projection_minor_closed_form(&v, &rows, &cols)?)
                        .norm(),
                    );
                }
            }
        }
    }
    let mut dichotomy = true;
    for seed in 0..50u64 {
        let mut r = rng(9100 + seed);
        let n = 3 + (seed as usize % 4);
        let k = 2;
        let v = sample_tnn_flag(n, &mut r)?.columns(0, k).into_owned();
        let p = proj_matrix(&v)?;
        for l in 1..=k {
            for rows in subsets(n, l) {
                for cols in subsets(n, l) {
                    if !evenness_condition(&rows, &cols, n) {
                        continue;
                    }
                    let m = minor(&p, &rows, &cols)?.re;
                    dichotomy &= if rows.intersection_len(&cols) + n >= k + l {
                        m > 0.0
                    } else {
                        m.abs() < 1e-10
                    };
                }
            }
        }
    }
    Ok((
        formula.ok() && dichotomy,
        format!(
            "{}, evenness dichotomy {dichotomy}",
            formula.show("minor formula")
        ),
    ))
}

fn criterion_10() -> Outcome {
    let d = MoserData::new(vec![1.0, 0.0, -1.0], vec![1.0, 1.0, 1.0])?;
    let z = twisted_vdm_z(&d, 1, 1)?;
    let (s3, s2, s6) = (3f64.sqrt(), 2f64.sqrt(), 6f64.sqrt());
    let golden = max_diff(
        z.matrix(),
        &real(
            2,
            3,
            &[1.0 / s3, 1.0 / s2, 1.0 / s6, -1.0 / s3, 0.0, 2.0 / s6],
        ),
    );
    let minors_positive = maximal_minors(z.matrix())?.iter().all(|(_, v)| *v > 0.0);
    let mut r = rng(10);
    let mut commute = Worst::new(1e-8);
    for _ in 0..20 {
        let n = r.gen_range(3..7);
        let d = random_moser(n, &mut r)?;
        let rr = r.gen_range(1..n);
        let z = twisted_vdm_z(&d, 1, rr - 1)?;
        let drive = -jacobi_from_moser(&d)?.matrix().clone();
        let m = project_n(&z, &drive)?;
        for t in [-1.0, 0.5, 2.0] {
            commute.push(commutation_residual(&z, &drive, &m, t));
        }
    }
    let mut inside = 0;
    let mut total = 0;
    for _ in 0..10 {
        let z = quadrilateral_z(
            r.gen_range(0.1..3.0),
            r.gen_range(0.1..3.0),
            r.gen_range(0.1..3.0),
        )?;
        for p in sample_amplituhedron(&z, 50, &mut r)? {
            total += 1;
            inside += polytope_contains(&z, &p, 1e-12)? as usize;
        }
    }
    let ok = golden < 1e-10 && minors_positive && commute.ok() && inside == total;
    Ok((
        ok,
        format!(
            "golden {golden:.2e} (< 1e-10), minors positive {minors_positive}, {}, hull {inside}/{total}",
            commute.show("commutation")
        ),
    ))
}

fn criterion_11() -> Outcome {
    let mut r = rng(11);
    let mut decreasing = true;
    let mut gap_to_limit = Worst::new(1e-5);
    for _ in 0..50 {
        let n = r.gen_range(3..=5);
        let lambda: Vec<f64> = (0..n).map(|i| (n - i) as f64 - 1.0).collect();
        let s = tridiagonal_positive(n, &mut r);
        let drive = drive_from(&s);
        let (mu, _) = herm_eig(&s)?;
        let gap = mu
            .windows(2)
            .map(|w| w[0] - w[1])
            .fold(f64::INFINITY, f64::min);
        let l0 = OrbitPoint::from_rep(&sample_tnn_flag(n, &mut r)?, &lambda)?;
        let mut last = f64::INFINITY;
        for t in uniform_times(0.0, 10.0 / gap, 50) {
            let v = lyapunov(kahler_flow(&l0, &drive, t)?.matrix(), &drive)?;
            decreasing &= v < last;
            last = v;
        }
        let v_end = lyapunov(kahler_flow(&l0, &drive, 30.0 / gap)?.matrix(), &drive)?;
        let v_limit = lyapunov(limit_point(&drive, &lambda)?.matrix(), &drive)?;
        gap_to_limit.push((v_end - v_limit).abs());
    }
    Ok((
        decreasing && gap_to_limit.ok(),
        format!(
            "strictly decreasing {decreasing}, {}",
            gap_to_limit.show("V - V(limit)")
        ),
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 11] = [
        ("eigenvalue reproduction", criterion_1),
        ("twist golden and involution", criterion_2),
        ("Jacobi closed forms", criterion_3),
        ("Kahler closed form", criterion_4),
        ("metric dilation", criterion_5),
        ("derivative formulas", criterion_6),
        ("classifier audits", criterion_7),
        ("Toda", criterion_8),
        ("projection minors", criterion_9),
        ("amplituhedron", criterion_10),
        ("Lyapunov", criterion_11),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (ok, detail) = match run() {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!ok);
        let tag = if ok { "PASS" } else { "FAIL" };
        println!(
            "{tag} {:>2} {name}: {detail} [{:.2}s]",
            i + 1,
            t.elapsed().as_secs_f64()
        );
    }
    println!(
        "{} of {} criteria passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
