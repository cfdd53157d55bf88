//! Additive energy `E(A, B) = ∫ (A∗B)(x)² dx`.
//!
//! For grid sets `A∗B` is piecewise linear with `(A∗B)(mδ) = δ·r[m-1]`, where
//! `r` counts occupied cell pairs by index sum, so the energy is an exact
//! finite sum. For non-grid interval unions (dilates `tA`) the convolution is
//! swept as a sum of ramps.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fourier::quad::simpson_samples;
use crate::fourier::transform::cell_polynomial_power;
use crate::grid::GridSet;
use crate::kernels::{pair_counts, sumset, SumsetKernel};
use crate::numeric::sinc;

/// Relative float slack on `(|A||B|)² ≤ E(A,B)·|A+B|`.
pub const LOWER_BOUND_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub energy: f64,
    /// From pair counts computed by the direct loop.
    pub path_closed_form: f64,
    /// From pair counts computed by FFT and rounded.
    pub path_fft: f64,
    pub measure_a: f64,
    pub measure_b: f64,
    pub sumset_measure: f64,
    /// `(|A||B|)² ≤ E·|A+B|` up to [`LOWER_BOUND_SLACK`].
    pub lower_bound_check: bool,
    /// `(|A||B|)² / (E·|A+B|)`, at most 1.
    pub cauchy_schwarz_ratio: f64,
}

pub fn energy(a: &GridSet, b: &GridSet) -> Result<EnergyReport> {
    let (_, direct) = pair_counts(a, b, SumsetKernel::PairLoop)?;
    let (_, fft) = pair_counts(a, b, SumsetKernel::Fft)?;
    let delta = a.delta();
    let path_closed_form = energy_from_counts(&direct, delta);
    let path_fft = energy_from_counts(&fft, delta);
    let sum = sumset(a, b)?;
    let ma = a.measure();
    let mb = b.measure();
    let lhs = (ma * mb).powi(2);
    let rhs = path_closed_form * sum.measure();
    Ok(EnergyReport {
        energy: path_closed_form,
        path_closed_form,
        path_fft,
        measure_a: ma,
        measure_b: mb,
        sumset_measure: sum.measure(),
        lower_bound_check: lhs <= rhs * (1.0 + LOWER_BOUND_SLACK),
        cauchy_schwarz_ratio: lhs / rhs,
    })
}

/// `E = δ³/3 · Σ_m (r[m-1]² + r[m-1]·r[m] + r[m]²)`, summed in integers.
pub fn energy_from_counts(counts: &[u64], delta: f64) -> f64 {
    let mut acc: u128 = 0;
    let mut prev: u128 = 0;
    for &c in counts.iter().chain(std::iter::once(&0)) {
        let c = c as u128;
        acc += prev * prev + prev * c + c * c;
        prev = c;
    }
    acc as f64 * delta.powi(3) / 3.0
}

/// Energy of two unions of disjoint half-open intervals.
///
/// `1_[a0,a1) ∗ 1_[b0,b1)` is the ramp combination
/// `(x-a0-b0)₊ - (x-a1-b0)₊ - (x-a0-b1)₊ + (x-a1-b1)₊`; summing all of them and
/// integrating the square of the resulting piecewise-linear function piece by
/// piece is exact up to rounding.
pub fn interval_energy(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let mut kinks: Vec<(f64, f64)> = Vec::with_capacity(4 * a.len() * b.len());
    for &(a0, a1) in a {
        for &(b0, b1) in b {
            kinks.push((a0 + b0, 1.0));
            kinks.push((a1 + b0, -1.0));
            kinks.push((a0 + b1, -1.0));
            kinks.push((a1 + b1, 1.0));
        }
    }
    kinks.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut pieces = Vec::with_capacity(kinks.len());
    let mut value = 0.0;
    let mut slope = 0.0;
    let mut x = match kinks.first() {
        Some(k) => k.0,
        None => return 0.0,
    };
    let mut i = 0;
    while i < kinks.len() {
        let next = kinks[i].0;
        if next > x {
            let dx = next - x;
            let v1 = (value + slope * dx).max(0.0);
            pieces.push(dx * (value * value + value * v1 + v1 * v1) / 3.0);
            value = v1;
            x = next;
        }
        while i < kinks.len() && kinks[i].0 == next {
            slope += kinks[i].1;
            i += 1;
        }
    }
    crate::numeric::pairwise_sum(&pieces)
}

/// Fourier-side energy `∫_{|ξ| ≤ X} |Â(ξ)|² |B̂(ξ)|² dξ` for grid sets, with `X`
/// rounded up to a whole number of periods `Q·n`.
///
/// `|Â(ξ)|² = |P_A(ξ)|² δ² sinc²(πδξ)` with `P_A` periodic of period `n`, so the
/// integral folds onto one period against the weight
/// `W(u) = δ⁴ Σ_{q<Q} sinc⁴(πδ(u + qn))`, and is evaluated by Simpson's rule.
pub fn fourier_side_energy(a: &GridSet, b: &GridSet, xi_max: f64) -> Result<f64> {
    a.scale().ensure_same(&b.scale())?;
    let n = a.scale().n() as f64;
    let delta = a.delta();
    let periods = (xi_max / n).ceil().max(1.0) as usize;
    let samples = 16 * (a.span() + b.span()).next_power_of_two();
    let h = n / samples as f64;
    let pa = cell_polynomial_power(a, 1.0, h, samples + 1);
    let pb = cell_polynomial_power(b, 1.0, h, samples + 1);
    let d4 = delta.powi(4);
    let f: Vec<f64> = (0..=samples)
        .map(|m| {
            let x = m as f64 / samples as f64;
            let s4 = (PI * x).sin().powi(4) / PI.powi(4);
            let mut tail = 0.0;
            for q in (1..periods).rev() {
                tail += (x + q as f64).powi(-4);
            }
            let w = d4 * (sinc(PI * x).powi(4) + s4 * tail);
            pa[m] * pb[m] * w
        })
        .collect();
    Ok(2.0 * simpson_samples(&f, 0, samples, h))
}
