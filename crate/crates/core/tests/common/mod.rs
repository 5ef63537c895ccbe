#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tnn_orbits::linalg::{c, ComplexMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn real(rows: usize, cols: usize, data: &[f64]) -> ComplexMatrix {
    tnn_orbits::linalg::real_matrix(rows, cols, data)
}

pub fn max_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Leibniz-formula determinant, independent of the library routines.
pub fn leibniz_det(a: &ComplexMatrix) -> tnn_orbits::C64 {
    let n = a.nrows();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = c(0.0, 0.0);
    heap(&mut perm, n, &mut |p| {
        let mut sign = 1.0;
        for i in 0..n {
            for j in i + 1..n {
                if p[i] > p[j] {
                    sign = -sign;
                }
            }
        }
        let mut prod = c(sign, 0.0);
        for i in 0..n {
            prod *= a[(i, p[i])];
        }
        total += prod;
    });
    total
}

fn heap(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k <= 1 {
        f(p);
        return;
    }
    for i in 0..k {
        heap(p, k - 1, f);
        if k.is_multiple_of(2) {
            p.swap(i, k - 1);
        } else {
            p.swap(0, k - 1);
        }
    }
}

/// Minor computed by the Leibniz formula on 1-based index lists.
pub fn oracle_minor(m: &ComplexMatrix, rows: &[usize], cols: &[usize]) -> tnn_orbits::C64 {
    let sub = ComplexMatrix::from_fn(rows.len(), cols.len(), |a, b| m[(rows[a] - 1, cols[b] - 1)]);
    leibniz_det(&sub)
}

/// Rotation `[[cos a, -sin a], [sin a, cos a]]`.
pub fn rotation(a: f64) -> ComplexMatrix {
    real(2, 2, &[a.cos(), -a.sin(), a.sin(), a.cos()])
}
