//! Least-squares fit of `A·exp(−(t−t₀)²/2σ²) + b` to a sampled trace (Levenberg-Marquardt).
//!
//! The fit runs in normalised coordinates (time relative to the initial centre and width,
//! intensity relative to the trace maximum) so the normal equations stay well conditioned
//! whatever the physical scales. Initialisation is deterministic: baseline from the median of
//! the first decile of samples, centre and width from the first two moments above baseline.

use alloc::vec::Vec;

use crate::{Error, Result};

/// Minimum peak-to-median ratio for a trace to count as peaked.
pub const MIN_PEAK_RATIO: f64 = 3.0;
/// Largest accepted residual rms relative to the trace maximum.
pub const MAX_RELATIVE_RMS: f64 = 0.05;

const MAX_ITERATIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianFit {
    pub amplitude: f64,
    pub peak_time: f64,
    pub sigma: f64,
    pub baseline: f64,
    /// Residual rms relative to the trace maximum.
    pub residual: f64,
    /// One-sigma uncertainty of `peak_time` from the fit covariance.
    pub peak_time_uncertainty: f64,
    pub iterations: usize,
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.total_cmp(b));
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

fn model(p: &[f64; 4], t: f64) -> (f64, [f64; 4]) {
    let [a, t0, s, b] = *p;
    let u = (t - t0) / s;
    let e = libm::exp(-0.5 * u * u);
    let value = a * e + b;
    (value, [e, a * e * u / s, a * e * u * u / s, 1.0])
}

fn solve4(mut m: [[f64; 4]; 4], mut rhs: [f64; 4]) -> Option<[f64; 4]> {
    for col in 0..4 {
        let pivot = (col..4).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[pivot][col] == 0.0 || !m[pivot][col].is_finite() {
            return None;
        }
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in col + 1..4 {
            let factor = m[row][col] / m[col][col];
            let upper = m[col];
            for (v, u) in m[row].iter_mut().zip(upper).skip(col) {
                *v -= factor * u;
            }
            rhs[row] -= factor * rhs[col];
        }
    }
    let mut x = [0.0; 4];
    for row in (0..4).rev() {
        let tail: f64 = (row + 1..4).map(|k| m[row][k] * x[k]).sum();
        x[row] = (rhs[row] - tail) / m[row][row];
    }
    Some(x)
}

fn normal_equations(t: &[f64], y: &[f64], p: &[f64; 4]) -> ([[f64; 4]; 4], [f64; 4], f64) {
    let mut jtj = [[0.0; 4]; 4];
    let mut jtr = [0.0; 4];
    let mut cost = 0.0;
    for (&ti, &yi) in t.iter().zip(y) {
        let (value, grad) = model(p, ti);
        let r = yi - value;
        cost += r * r;
        for i in 0..4 {
            jtr[i] += grad[i] * r;
            for j in 0..4 {
                jtj[i][j] += grad[i] * grad[j];
            }
        }
    }
    (jtj, jtr, cost)
}

fn cost(t: &[f64], y: &[f64], p: &[f64; 4]) -> f64 {
    t.iter()
        .zip(y)
        .map(|(&ti, &yi)| {
            let r = yi - model(p, ti).0;
            r * r
        })
        .sum()
}

pub fn fit_gaussian_peak(t: &[f64], intensity: &[f64]) -> Result<GaussianFit> {
    if t.len() != intensity.len() || t.len() < 8 {
        return Err(Error::InvalidParameter {
            name: "trace",
            reason: "needs at least 8 samples with matching time axis",
        });
    }
    let peak = intensity.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut sorted = intensity.to_vec();
    let med = median(&mut sorted);
    let ratio = if med > 0.0 {
        peak / med
    } else if peak > 0.0 {
        f64::INFINITY
    } else {
        0.0
    };
    if !(ratio >= MIN_PEAK_RATIO) {
        return Err(Error::NoPeak { ratio });
    }

    let decile = (intensity.len() / 10).max(1);
    let mut head = intensity[..decile].to_vec();
    let baseline = median(&mut head);
    let (mut w, mut m1) = (0.0, 0.0);
    for (&ti, &yi) in t.iter().zip(intensity) {
        let weight = (yi - baseline).max(0.0);
        w += weight;
        m1 += weight * ti;
    }
    let centre = m1 / w;
    let variance = t
        .iter()
        .zip(intensity)
        .map(|(&ti, &yi)| (yi - baseline).max(0.0) * (ti - centre) * (ti - centre))
        .sum::<f64>()
        / w;
    let width = libm::sqrt(variance);
    if !(width > 0.0 && width.is_finite()) {
        return Err(Error::NoPeak { ratio });
    }

    // normalised coordinates
    let ts: Vec<f64> = t.iter().map(|&ti| (ti - centre) / width).collect();
    let ys: Vec<f64> = intensity.iter().map(|&yi| yi / peak).collect();
    let mut p = [(peak - baseline) / peak, 0.0, 1.0, baseline / peak];
    let mut lambda = 1e-3;
    let mut iterations = 0;
    let (mut jtj, mut jtr, mut current) = normal_equations(&ts, &ys, &p);
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let mut damped = jtj;
        for (i, row) in damped.iter_mut().enumerate() {
            row[i] += lambda * jtj[i][i].max(1e-300);
        }
        let Some(step) = solve4(damped, jtr) else {
            lambda *= 10.0;
            continue;
        };
        let trial = [
            p[0] + step[0],
            p[1] + step[1],
            p[2] + step[2],
            p[3] + step[3],
        ];
        let trial_cost = if trial[2] > 0.0 {
            cost(&ts, &ys, &trial)
        } else {
            f64::INFINITY
        };
        if trial_cost <= current {
            let small = step
                .iter()
                .zip(&trial)
                .all(|(s, v)| s.abs() <= 1e-13 * v.abs().max(1.0));
            let stalled = current - trial_cost <= 1e-16 * current.max(f64::MIN_POSITIVE);
            p = trial;
            lambda = (lambda * 0.1).max(1e-12);
            let refreshed = normal_equations(&ts, &ys, &p);
            jtj = refreshed.0;
            jtr = refreshed.1;
            current = refreshed.2;
            if small || stalled {
                break;
            }
        } else {
            lambda *= 10.0;
            if lambda > 1e12 {
                break;
            }
        }
    }

    let n = ts.len() as f64;
    let relative_rms = libm::sqrt(current / n);
    let residual_variance = current / (n - 4.0);
    let centre_variance = invert_diagonal(jtj, 1)
        .map(|d| d * residual_variance)
        .unwrap_or(f64::NAN);
    if !(relative_rms < MAX_RELATIVE_RMS) {
        return Err(Error::PoorFit { relative_rms });
    }
    Ok(GaussianFit {
        amplitude: p[0] * peak,
        peak_time: centre + p[1] * width,
        sigma: p[2] * width,
        baseline: p[3] * peak,
        residual: relative_rms,
        peak_time_uncertainty: libm::sqrt(centre_variance.max(0.0)) * width,
        iterations,
    })
}

/// Diagonal element `index` of the inverse of a 4×4 matrix.
fn invert_diagonal(m: [[f64; 4]; 4], index: usize) -> Option<f64> {
    let mut unit = [0.0; 4];
    unit[index] = 1.0;
    solve4(m, unit).map(|column| column[index])
}
