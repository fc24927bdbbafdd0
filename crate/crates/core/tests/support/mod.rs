//! Independent reference computations for the integration suites. Nothing
//! here calls the crate's design-matrix or solver code.
#![allow(dead_code)]

use implicit_regression::{Dataset, SeededRng, Term};

/// `Σ x^a y^b` straight from the raw observations.
pub fn power_sum(x: &[f64], y: &[f64], a: f64, b: f64) -> f64 {
    x.iter().zip(y).map(|(&u, &v)| u.powf(a) * v.powf(b)).sum()
}

fn powi_sum(x: &[f64], y: &[f64], a: i32, b: i32) -> f64 {
    x.iter().zip(y).map(|(&u, &v)| u.powi(a) * v.powi(b)).sum()
}

fn exps(t: &Term) -> (i32, i32) {
    assert!(t.x_exp.fract() == 0.0 && t.y_exp.fract() == 0.0, "oracle handles integer exponents");
    (t.x_exp as i32, t.y_exp as i32)
}

/// Normal equations of `1 = Σ α_k T_k` from raw power sums.
pub fn nonresponse_system(x: &[f64], y: &[f64], terms: &[Term]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let e: Vec<(i32, i32)> = terms.iter().map(exps).collect();
    let a = e
        .iter()
        .map(|&(aj, bj)| e.iter().map(|&(ak, bk)| powi_sum(x, y, aj + ak, bj + bk)).collect())
        .collect();
    let b = e.iter().map(|&(aj, bj)| powi_sum(x, y, aj, bj)).collect();
    (a, b)
}

/// Normal equations of `T_p = α_0 + Σ_{k≠p} α_k T_k` from raw power sums.
pub fn rotation_system(x: &[f64], y: &[f64], terms: &[Term], pivot: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut e: Vec<(i32, i32)> = vec![(0, 0)];
    e.extend(terms.iter().enumerate().filter(|&(k, _)| k != pivot).map(|(_, t)| exps(t)));
    let (ap, bp) = exps(&terms[pivot]);
    let a = e
        .iter()
        .map(|&(aj, bj)| e.iter().map(|&(ak, bk)| powi_sum(x, y, aj + ak, bj + bk)).collect())
        .collect();
    let b = e.iter().map(|&(aj, bj)| powi_sum(x, y, aj + ap, bj + bp)).collect();
    (a, b)
}

/// Determinant by cofactor expansion along the first row.
pub fn det_laplace(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    match n {
        0 => 1.0,
        1 => a[0][0],
        2 => a[0][0] * a[1][1] - a[0][1] * a[1][0],
        _ => (0..n)
            .map(|j| {
                let minor: Vec<Vec<f64>> = a[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &v)| v).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sign * a[0][j] * det_laplace(&minor)
            })
            .sum(),
    }
}

/// Cramer's rule with full expansion.
pub fn cramer(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let d = det_laplace(a);
    (0..a.len())
        .map(|j| {
            let aj: Vec<Vec<f64>> = a
                .iter()
                .zip(b)
                .map(|(row, &bi)| {
                    let mut r = row.clone();
                    r[j] = bi;
                    r
                })
                .collect();
            det_laplace(&aj) / d
        })
        .collect()
}

/// Gauss–Jordan elimination with complete pivoting.
pub fn gauss_jordan(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.iter().zip(b).map(|(r, &v)| {
        let mut row = r.clone();
        row.push(v);
        row
    }).collect();
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let (mut pi, mut pj, mut best) = (k, k, -1.0);
        for i in k..n {
            for j in k..n {
                if m[i][j].abs() > best {
                    best = m[i][j].abs();
                    pi = i;
                    pj = j;
                }
            }
        }
        m.swap(k, pi);
        for row in m.iter_mut() {
            row.swap(k, pj);
        }
        perm.swap(k, pj);
        let p = m[k][k];
        for v in m[k].iter_mut() {
            *v /= p;
        }
        for i in 0..n {
            if i != k {
                let f = m[i][k];
                if f != 0.0 {
                    for j in k..=n {
                        m[i][j] -= f * m[k][j];
                    }
                }
            }
        }
    }
    let mut out = vec![0.0; n];
    for k in 0..n {
        out[perm[k]] = m[k][n];
    }
    out
}

/// Oracle solve: Cramer for up to three unknowns, Gauss–Jordan beyond.
pub fn oracle_solve(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    if a.len() <= 3 {
        cramer(a, b)
    } else {
        gauss_jordan(a, b)
    }
}

pub fn max_rel_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let scale = b.iter().fold(1e-300_f64, |m, v| m.max(v.abs()));
    a.iter().zip(b).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max) / scale
}

/// Scattered points, both coordinates uniform on `[lo, hi)`.
pub fn random_scatter(seed: u64, n: usize, lo: f64, hi: f64) -> Dataset<f64> {
    let mut rng = SeededRng::new(seed);
    let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.uniform_in(lo, hi), rng.uniform_in(lo, hi))).collect();
    Dataset::from_points(&pts).unwrap()
}

/// A random 2–5 term subset of the conic set, in conic order.
pub fn random_conic_subset(rng: &mut SeededRng) -> Vec<Term> {
    let all = Term::conic_set();
    loop {
        let picked: Vec<Term> = all.iter().copied().filter(|_| rng.uniform() < 0.6).collect();
        if picked.len() >= 2 {
            return picked;
        }
    }
}

pub fn approx(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}
