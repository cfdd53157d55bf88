//! Fourier transforms of indicator functions, `Â(ξ) = ∫_A e(-xξ) dx` with
//! `e(x) = exp(2πix)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::grid::GridSet;
use crate::numeric::sinc;

/// `e(-θ)` for a phase given in cycles; the integer part is dropped first.
#[inline]
pub(crate) fn e_neg(cycles: f64) -> Complex64 {
    let frac = cycles - cycles.floor();
    let ang = -2.0 * PI * frac;
    Complex64::new(ang.cos(), ang.sin())
}

/// `∫_a^b e(-xξ) dx = e(-cξ)·(b-a)·sinc(πξ(b-a))` with `c` the midpoint.
#[inline]
fn interval_transform(a: f64, b: f64, xi: f64) -> Complex64 {
    let len = b - a;
    let mid = 0.5 * (a + b);
    e_neg(mid * xi) * (len * sinc(PI * xi * len))
}

/// `Â(ξ)` as a sum of closed forms over the maximal runs of `A`; equals `|A|` at `ξ = 0`.
pub fn fourier_indicator(a: &GridSet, xi: f64) -> Complex64 {
    let n = a.scale().n() as f64;
    a.runs()
        .iter()
        .map(|&(s, e)| {
            let len = (e - s) as f64 / n;
            // midpoint phase kept in integer cell units until the last step
            let mid_cycles = ((s + e) as f64) * xi / (2.0 * n);
            e_neg(mid_cycles) * (len * sinc(PI * xi * len))
        })
        .sum()
}

/// Transform of a union of disjoint half-open intervals.
pub fn fourier_intervals(intervals: &[(f64, f64)], xi: f64) -> Complex64 {
    intervals
        .iter()
        .map(|&(a, b)| interval_transform(a, b, xi))
        .sum()
}

/// Chirp-z transform `X_m = Σ_{j<L} x_j e(-w·j·m)` for `m < len`, via Bluestein's
/// identity `jm = (j² + m² - (m-j)²)/2`.
pub fn chirp_z(x: &[Complex64], w: f64, len: usize) -> Vec<Complex64> {
    let l = x.len();
    if l == 0 || len == 0 {
        return vec![Complex64::new(0.0, 0.0); len];
    }
    let size = (l + len - 1).next_power_of_two();
    let chirp = |k: i64| -> f64 {
        let kk = (k as i128 * k as i128) as f64;
        0.5 * w * kk
    };
    let mut y = vec![Complex64::new(0.0, 0.0); size];
    for (j, &v) in x.iter().enumerate() {
        y[j] = v * e_neg(chirp(j as i64));
    }
    let mut kern = vec![Complex64::new(0.0, 0.0); size];
    for (d, k) in kern.iter_mut().enumerate().take(len) {
        *k = e_neg(-chirp(d as i64));
    }
    for d in 1..l {
        kern[size - d] = e_neg(-chirp(d as i64));
    }
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(size);
    let inv = planner.plan_fft_inverse(size);
    fwd.process(&mut y);
    fwd.process(&mut kern);
    for (a, b) in y.iter_mut().zip(&kern) {
        *a *= b;
    }
    inv.process(&mut y);
    let norm = 1.0 / size as f64;
    (0..len)
        .map(|m| y[m] * norm * e_neg(chirp(m as i64)))
        .collect()
}

/// `|P(s·m·h)|²` for `m < len`, where `P(ξ) = Σ_{k∈A} e(-kδξ)` is the cell
/// polynomial of `A`. The phase of the first cell is dropped, which does not
/// change the modulus.
pub fn cell_polynomial_power(a: &GridSet, s: f64, h: f64, len: usize) -> Vec<f64> {
    let coeffs: Vec<Complex64> = (a.offset()..a.end())
        .map(|k| {
            if a.contains_cell(k) {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    let w = s * h * a.delta();
    chirp_z(&coeffs, w, len).iter().map(|z| z.norm_sqr()).collect()
}
