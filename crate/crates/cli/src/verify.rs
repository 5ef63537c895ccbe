//! Seeded self-checks run by `tnn verify`, one thread per suite.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tnn_orbits::flagorbit::*;
use tnn_orbits::flows::*;
use tnn_orbits::jacobi::*;
use tnn_orbits::linalg::*;
use tnn_orbits::positivity::*;
use tnn_orbits::toda::*;
use tnn_orbits::Result;

use crate::input::CliResult;

type Suite = fn(&mut ChaCha8Rng, usize) -> Result<f64>;

/// Name, suite, and the bound its worst residual must stay under.
const SUITES: [(&str, Suite, f64); 6] = [
    ("twist involution", twist_involution, 1e-8),
    ("iota preserves positivity", iota_positive, 1.0),
    ("Jacobi-Moser roundtrip", moser_roundtrip, 1e-8),
    ("Kahler closed form", kahler_closed_form, 1e-9),
    ("Toda Symes vs ODE", toda_cross_check, 1e-6),
    ("projection minor formula", projection_minors, 1e-9),
];

fn twist_involution(rng: &mut ChaCha8Rng, cases: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for i in 0..cases {
        let v = PartialFlag::complete(sample_tnn_flag(2 + i % 5, rng)?)?;
        worst = worst.max(twist_flag(&twist_flag(&v)?)?.distance(&v));
    }
    Ok(worst)
}

/// Number of samples whose image is not certified positive.
fn iota_positive(rng: &mut ChaCha8Rng, cases: usize) -> Result<f64> {
    let mut failures = 0;
    for i in 0..cases {
        let g = sample_tnn_flag(2 + i % 4, rng)?;
        failures += usize::from(!is_tnn_unitary(&twist_unitary(&g)?, DEFAULT_TOL)?.is_positive());
    }
    Ok(failures as f64)
}

fn moser_roundtrip(rng: &mut ChaCha8Rng, cases: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for i in 0..cases {
        let n = 2 + i % 5;
        let lambda: Vec<f64> = (0..n)
            .map(|j| (n - j) as f64 + rng.gen_range(-0.3..0.3))
            .collect();
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..2.0)).collect();
        let d = MoserData::new(lambda, x)?;
        let back = moser_from_jacobi(&jacobi_from_moser(&d)?)?;
        for (a, b) in back
            .lambda()
            .iter()
            .zip(d.lambda())
            .chain(back.x().iter().zip(&d.r()))
        {
            worst = worst.max((a - b).abs());
        }
    }
    Ok(worst)
}

fn kahler_closed_form(rng: &mut ChaCha8Rng, cases: usize) -> Result<f64> {
    let l0 = OrbitPoint::new(real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0]) * I)?;
    let drive = diag_real(&[1.0, -1.0]) * c(0.0, -1.0);
    let mut worst = 0.0f64;
    for _ in 0..cases {
        let t: f64 = rng.gen_range(-3.0..3.0);
        let (th, sh) = ((2.0 * t).tanh(), 1.0 / (2.0 * t).cosh());
        let want = real_matrix(2, 2, &[th, sh, sh, -th]) * I;
        worst = worst.max(max_abs_diff(kahler_flow(&l0, &drive, t)?.matrix(), &want));
    }
    Ok(worst)
}

fn toda_cross_check(rng: &mut ChaCha8Rng, cases: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    let times = uniform_times(0.0, 5.0, 10);
    for _ in 0..cases.div_ceil(5) {
        let l0 = OrbitPoint::new(skew_hermitian_part(&sample_complex(4, 4, rng)))?;
        let traj = toda_ode(&l0, &times, DEFAULT_STEP)?;
        for (&t, p) in times.iter().zip(&traj.points) {
            worst = worst.max(max_abs_diff(p.matrix(), toda_symes(&l0, t)?.matrix()));
        }
    }
    Ok(worst)
}

fn projection_minors(rng: &mut ChaCha8Rng, cases: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for i in 0..cases {
        let n = 2 + i % 4;
        let k = rng.gen_range(1..n);
        let v = sample_complex(n, k, rng);
        let p = proj_matrix(&v)?;
        for rows in subsets(n, k) {
            for cols in subsets(n, k) {
                worst = worst.max(
                    (minor(&p, &rows, &cols)? - projection_minor_closed_form(&v, &rows, &cols)?)
                        .norm(),
                );
            }
        }
    }
    Ok(worst)
}

/// Runs every suite and writes one PASS/FAIL line each; true when all pass.
pub fn run_all(seed: u64, cases: usize, out: &mut impl Write) -> CliResult<bool> {
    let results: Vec<Result<f64>> = std::thread::scope(|s| {
        let handles: Vec<_> = SUITES
            .iter()
            .enumerate()
            .map(|(i, (_, suite, _))| {
                s.spawn(move || {
                    suite(
                        &mut ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64)),
                        cases,
                    )
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("suite thread panicked"))
            .collect()
    });
    let mut all = true;
    for ((name, _, bound), result) in SUITES.iter().zip(results) {
        let (ok, detail) = match result {
            Ok(v) => (v < *bound, format!("{v:.3e} (< {bound:.0e})")),
            Err(e) => (false, format!("error: {e}")),
        };
        all &= ok;
        writeln!(out, "{} {name}: {detail}", if ok { "PASS" } else { "FAIL" })?;
    }
    Ok(all)
}
