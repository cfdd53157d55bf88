//! Plancherel defect `|A| - ∫_{-Ξ}^{Ξ} |Â(ξ)|² dξ`.
//!
//! By Parseval the truncated integral equals `∫ g(x)·sin(2πΞx)/(πx) dx` where
//! `g = A ∗ (-A)` is the autocorrelation. `g` is piecewise linear on the grid
//! with `g(mδ) = δ·c[m]`, `c[m] = #{k : k, k+m ∈ A}`, so each piece integrates
//! in closed form through the sine integral.

use std::f64::consts::PI;

use crate::conv::pair_counts_fft;
use crate::error::{Error, Result};
use crate::fourier::quad::sine_integral;
use crate::grid::GridSet;
use crate::numeric::pairwise_sum;

pub fn plancherel_defect(a: &GridSet, xi_max: f64) -> Result<f64> {
    if !(xi_max > 0.0 && xi_max.is_finite()) {
        return Err(Error::param("xi_max", format!("{xi_max} must be positive")));
    }
    let bits = a.bits();
    let conv = pair_counts_fft(bits, &bits.reversed())?;
    let span = a.span();
    // c[m] for m = 0..span, with c[span] = 0
    let mut c: Vec<f64> = conv[span - 1..].iter().map(|&v| v as f64).collect();
    c.push(0.0);
    let delta = a.delta();
    let omega = 2.0 * PI * xi_max;

    let mut pieces = Vec::with_capacity(span);
    let mut si_prev = 0.0;
    let mut cos_prev = 1.0;
    for m in 0..span {
        let x0 = m as f64 * delta;
        let x1 = (m + 1) as f64 * delta;
        let g0 = delta * c[m];
        let g1 = delta * c[m + 1];
        let si_next = sine_integral(omega * x1);
        let cos_next = (omega * x1).cos();
        if g0 != 0.0 || g1 != 0.0 {
            let slope = (g1 - g0) / delta;
            let intercept = g0 - slope * x0;
            pieces.push(
                intercept / PI * (si_next - si_prev) + slope / PI * (cos_prev - cos_next) / omega,
            );
        }
        si_prev = si_next;
        cos_prev = cos_next;
    }
    Ok(a.measure() - 2.0 * pairwise_sum(&pieces))
}

/// `2R²/(π²Ξ)` from `|Â(ξ)| ≤ R/(π|ξ|)` for `R` maximal runs.
pub fn plancherel_tail_bound(a: &GridSet, xi_max: f64) -> f64 {
    let r = a.runs().len() as f64;
    2.0 * r * r / (PI * PI * xi_max)
}
