//! Empirical side of the bilinear decay bound
//! `∫_A |∫_B e(-xyξ) dx| dy ≲ ξ^{-(α+β-1)/2} δ^{(2-α-β)/2} √(|A||B|)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::quad::GaussRule;
use crate::fourier::transform::fourier_indicator;
use crate::grid::GridSet;
use crate::numeric::pairwise_sum;
use crate::profile::NonConcentrationProfile;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BilinearOptions {
    /// Non-concentration constant used to read `α`, `β` off the profiles.
    pub concentration_constant: f64,
    /// Relative tolerance of the adaptive quadrature.
    pub rel_tol: f64,
    pub gauss_order: usize,
}

impl Default for BilinearOptions {
    fn default() -> Self {
        BilinearOptions {
            concentration_constant: 16.0,
            rel_tol: 1e-6,
            gauss_order: 8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BilinearReport {
    pub xi: f64,
    /// `∫_A |B̂(yξ)| dy`
    pub lhs: f64,
    /// `ξ^{-(α+β-1)/2} δ^{(2-α-β)/2} √(|A||B|)`
    pub rhs: f64,
    pub ratio: f64,
    pub alpha: f64,
    pub beta: f64,
    /// Every panel met its share of the tolerance after halving.
    pub converged: bool,
}

/// Exponent of a set for the bound: the profile's fitted dimension, falling back
/// to the minimal non-concentration exponent at constant `C` when there are too
/// few scales to fit; clamped to `[0, 1]`.
pub fn dimension_exponent(set: &GridSet, c: f64) -> f64 {
    let profile = NonConcentrationProfile::compute(set);
    profile
        .fitted_sigma
        .or_else(|| profile.min_sigma(c))
        .unwrap_or(1.0)
        .clamp(0.0, 1.0)
}

pub fn bilinear_bound(xi: f64, delta: f64, alpha: f64, beta: f64, ma: f64, mb: f64) -> f64 {
    xi.powf(-(alpha + beta - 1.0) / 2.0) * delta.powf((2.0 - alpha - beta) / 2.0) * (ma * mb).sqrt()
}

pub fn bilinear_integral(
    a: &GridSet,
    b: &GridSet,
    xi: f64,
    opts: &BilinearOptions,
) -> Result<BilinearReport> {
    let alpha = dimension_exponent(a, opts.concentration_constant);
    let beta = dimension_exponent(b, opts.concentration_constant);
    bilinear_integral_with_exponents(a, b, xi, alpha, beta, opts)
}

pub fn bilinear_integral_with_exponents(
    a: &GridSet,
    b: &GridSet,
    xi: f64,
    alpha: f64,
    beta: f64,
    opts: &BilinearOptions,
) -> Result<BilinearReport> {
    a.scale().ensure_same(&b.scale())?;
    let n = a.scale().n() as f64;
    if !(1.0..=n).contains(&xi) {
        return Err(Error::param("xi", format!("{xi} not in [1, {n}]")));
    }
    if !a.within(0.0, 4.0) || !b.within(0.0, 4.0) {
        return Err(Error::Hypothesis("bilinear sets must lie in [0, 4]".into()));
    }
    let rule = GaussRule::new(opts.gauss_order);
    let delta = a.delta();
    let b_reach = b.end() as f64 / n;
    // about one oscillation of y ↦ B̂(yξ) per initial panel
    let width = delta.min(1.0 / (xi * b_reach));
    let f = |y: f64| fourier_indicator(b, y * xi).norm();

    let panels_per_cell = (delta / width).ceil() as usize;
    let h = delta / panels_per_cell as f64;
    let panels: Vec<(f64, f64)> = a
        .cells()
        .flat_map(|k| {
            (0..panels_per_cell).map(move |p| {
                let lo = k as f64 * delta + p as f64 * h;
                (lo, lo + h)
            })
        })
        .collect();

    let coarse: Vec<f64> = panels
        .par_iter()
        .map(|&(lo, hi)| rule.integrate(lo, hi, f))
        .collect();
    let coarse_total = pairwise_sum(&coarse);
    let tol = opts.rel_tol * 0.1 * coarse_total.abs().max(f64::MIN_POSITIVE) / panels.len() as f64;

    let refined: Vec<(f64, bool)> = panels
        .par_iter()
        .zip(coarse.par_iter())
        .map(|(&(lo, hi), &whole)| adapt(&rule, &f, lo, hi, whole, tol, 0))
        .collect();
    let converged = refined.iter().all(|r| r.1);
    let values: Vec<f64> = refined.iter().map(|r| r.0).collect();
    let lhs = pairwise_sum(&values);

    let rhs = bilinear_bound(xi, delta, alpha, beta, a.measure(), b.measure());
    Ok(BilinearReport {
        xi,
        lhs,
        rhs,
        ratio: lhs / rhs,
        alpha,
        beta,
        converged,
    })
}

fn adapt<F: Fn(f64) -> f64>(
    rule: &GaussRule,
    f: &F,
    lo: f64,
    hi: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> (f64, bool) {
    let mid = 0.5 * (lo + hi);
    let left = rule.integrate(lo, mid, f);
    let right = rule.integrate(mid, hi, f);
    let halves = left + right;
    if (halves - whole).abs() <= tol {
        return (halves, true);
    }
    if depth >= 24 {
        return (halves, false);
    }
    let (l, lc) = adapt(rule, f, lo, mid, left, tol / 2.0, depth + 1);
    let (r, rc) = adapt(rule, f, mid, hi, right, tol / 2.0, depth + 1);
    (l + r, lc && rc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridScale;

    #[test]
    fn trivial_bound_holds() {
        let s = GridScale::new(64).unwrap();
        let a = GridSet::from_cell_ranges(s, &[(64, 70), (100, 110)]).unwrap();
        let b = GridSet::from_cell_ranges(s, &[(70, 72), (90, 128)]).unwrap();
        for xi in [1.0, 4.0, 64.0] {
            let r = bilinear_integral(&a, &b, xi, &BilinearOptions::default()).unwrap();
            assert!(r.lhs >= 0.0 && r.lhs <= a.measure() * b.measure() * (1.0 + 1e-12));
            assert!(r.converged);
        }
    }

    #[test]
    fn unit_square_against_sinc_integral() {
        // A = B = [0,1]: lhs = ∫_0^1 |sin(πyξ)/(πyξ)| dy
        let s = GridScale::new(64).unwrap();
        let a = GridSet::from_intervals(s, &[(0.0, 1.0)]).unwrap();
        let r = bilinear_integral(&a, &a, 4.0, &BilinearOptions::default()).unwrap();
        let fine = GaussRule::new(20);
        let mut want = 0.0;
        for k in 0..4 {
            let (lo, hi) = (k as f64 / 4.0, (k + 1) as f64 / 4.0);
            want += fine.integrate(lo, hi, |y| {
                let u = std::f64::consts::PI * y * 4.0;
                crate::numeric::sinc(u).abs()
            });
        }
        assert!((r.lhs - want).abs() < 1e-8 * want, "{} vs {want}", r.lhs);
        assert_eq!((r.alpha, r.beta), (1.0, 1.0));
        assert!((r.rhs - 0.5).abs() < 1e-15);
    }

    #[test]
    fn frequency_range_enforced() {
        let s = GridScale::new(16).unwrap();
        let a = GridSet::from_intervals(s, &[(1.0, 2.0)]).unwrap();
        let o = BilinearOptions::default();
        assert!(bilinear_integral(&a, &a, 0.5, &o).is_err());
        assert!(bilinear_integral(&a, &a, 17.0, &o).is_err());
    }
}
