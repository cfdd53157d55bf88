//! Mean of `E(A, tA)` over a dilation set `T`, with a three-band spectral split.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::energy::interval_energy;
use crate::fourier::plancherel::plancherel_defect;
use crate::fourier::quad::simpson_samples;
use crate::fourier::transform::cell_polynomial_power;
use crate::grid::GridSet;
use crate::numeric::{pairwise_sum, sinc};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyMeanOptions {
    /// The high band is truncated at `i2_multiplier / δ`.
    pub i2_multiplier: f64,
    /// Simpson samples per period of the fastest oscillation.
    pub samples_per_cycle: usize,
}

impl Default for EnergyMeanOptions {
    fn default() -> Self {
        EnergyMeanOptions {
            i2_multiplier: 4.0,
            samples_per_cycle: 8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyMeanReport {
    pub sigma: f64,
    /// `δ · Σ_{t ∈ T} E(A, tA)` over cell centers.
    pub integral: f64,
    pub bound: f64,
    pub ratio: f64,
    /// `|ξ| ≤ L0`.
    pub i0: f64,
    /// `L0 ≤ |ξ| ≤ 1/δ`.
    pub i1: f64,
    /// `1/δ ≤ |ξ| ≤ i2_cutoff`.
    pub i2: f64,
    pub l0: f64,
    pub i2_cutoff: f64,
    /// Upper bound for the part of the high band beyond `i2_cutoff`.
    pub tail_bound: f64,
    /// `(I0 + I1 + I2) / integral`.
    pub closure: f64,
    pub t_cells: usize,
}

/// `|A|³|T|(|A|^{2σ/(1+2σ)}|T|^{-1/(1+2σ)} + δ(|A||T|)^{-1})`.
pub fn energy_mean_bound(ma: f64, mt: f64, delta: f64, sigma: f64) -> f64 {
    let e = 1.0 + 2.0 * sigma;
    ma.powi(3) * mt * (ma.powf(2.0 * sigma / e) * mt.powf(-1.0 / e) + delta / (ma * mt))
}

pub fn energy_mean_over_t(
    a: &GridSet,
    t: &GridSet,
    sigma: f64,
    opts: &EnergyMeanOptions,
) -> Result<EnergyMeanReport> {
    if !(sigma > 0.5 && sigma < 1.0) {
        return Err(Error::param("sigma", format!("{sigma} not in (1/2, 1)")));
    }
    if opts.i2_multiplier.is_nan() || opts.i2_multiplier < 1.0 || opts.samples_per_cycle < 2 {
        return Err(Error::param("options", "need i2_multiplier >= 1 and samples_per_cycle >= 2"));
    }
    a.scale().ensure_same(&t.scale())?;
    if !t.within(0.4, 2.1) {
        return Err(Error::Hypothesis("T must lie in [0.4, 2.1]".into()));
    }
    let delta = a.delta();
    let n = a.scale().n() as f64;
    let ts: Vec<f64> = t.cells().map(|c| (c as f64 + 0.5) * delta).collect();
    let a_iv = a.intervals();

    let energies: Vec<f64> = ts
        .par_iter()
        .map(|&s| {
            let scaled: Vec<(f64, f64)> = a_iv.iter().map(|&(lo, hi)| (s * lo, s * hi)).collect();
            interval_energy(&a_iv, &scaled)
        })
        .collect();
    let integral = delta * pairwise_sum(&energies);

    let (ma, mt) = (a.measure(), t.measure());
    let bound = energy_mean_bound(ma, mt, delta, sigma);
    let l0 = (ma * mt).powf(-1.0 / (1.0 + 2.0 * sigma));

    // Uniform ξ-grid with step 1/q fine enough for the fastest oscillation of
    // |P(ξ)|²|P(tξ)|² (frequency ≤ (1 + t_max)·span·δ cycles per unit ξ).
    let t_max = ts.iter().cloned().fold(0.0, f64::max);
    let reach = (1.0 + t_max) * (a.span() as f64 + 2.0) * delta;
    let q = opts.samples_per_cycle as f64 * reach.ceil().max(1.0);
    let h = 1.0 / q;
    let i_n = (n * q).round() as usize;
    let i_top = (opts.i2_multiplier * n * q).round() as usize;
    let i_l = ((l0 * q).round() as usize).min(i_n);
    let len = i_top + 1;
    let i2_cutoff = i_top as f64 * h;

    let base: Vec<f64> = cell_polynomial_power(a, 1.0, h, len)
        .into_iter()
        .enumerate()
        .map(|(m, p)| {
            let s = sinc(std::f64::consts::PI * delta * m as f64 * h);
            delta * delta * s * s * p
        })
        .collect();

    let bands: Vec<[f64; 3]> = ts
        .par_iter()
        .map(|&s| {
            let dil = cell_polynomial_power(a, s, h, len);
            let f: Vec<f64> = dil
                .iter()
                .zip(&base)
                .enumerate()
                .map(|(m, (&p, &b))| {
                    let sc = sinc(std::f64::consts::PI * delta * s * m as f64 * h);
                    b * s * s * delta * delta * sc * sc * p
                })
                .collect();
            [
                2.0 * simpson_samples(&f, 0, i_l, h),
                2.0 * simpson_samples(&f, i_l, i_n, h),
                2.0 * simpson_samples(&f, i_n, i_top, h),
            ]
        })
        .collect();
    let band = |k: usize| delta * pairwise_sum(&bands.iter().map(|b| b[k]).collect::<Vec<_>>());
    let (i0, i1, i2) = (band(0), band(1), band(2));

    // Beyond the cutoff X, |(tA)^(ξ)|² ≤ (R/(π|ξ|))², so each t contributes at
    // most R²/(π²X²)·∫_{|ξ|>X} |Â|².
    let r = a.runs().len() as f64;
    let per_t = r * r / (std::f64::consts::PI.powi(2) * i2_cutoff * i2_cutoff)
        * plancherel_defect(a, i2_cutoff)?;
    let tail_bound = delta * ts.len() as f64 * per_t;

    Ok(EnergyMeanReport {
        sigma,
        integral,
        bound,
        ratio: integral / bound,
        i0,
        i1,
        i2,
        l0,
        i2_cutoff,
        tail_bound,
        closure: (i0 + i1 + i2) / integral,
        t_cells: ts.len(),
    })
}
