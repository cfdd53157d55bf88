//! Dyadic non-concentration profile: `m(r) = max_x |A ∩ B(x, r)|` at `r = 2^j δ`.
//!
//! Ball centres range over all cell boundaries, so each `m(r)` is within one
//! cell (±2δ of mass) of the supremum over real centres.

use serde::{Deserialize, Serialize};

use crate::grid::GridSet;
use crate::numeric::ls_slope;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleEntry {
    /// `r = 2^j δ`
    pub j: u32,
    pub radius: f64,
    /// `m(r)`, a measure
    pub max_mass: f64,
    /// `log(m(r)/δ) / log(r/δ)`, undefined at `r = δ`
    pub sigma_hat: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonConcentrationProfile {
    pub n: u64,
    pub delta: f64,
    pub measure: f64,
    pub scales: Vec<ScaleEntry>,
    /// Least-squares slope of `log m(r)` against `log r` over the mid scales
    /// `δ < r`, excluding the top scale.
    pub fitted_sigma: Option<f64>,
}

impl NonConcentrationProfile {
    pub fn compute(set: &GridSet) -> Self {
        let n = set.scale().n();
        let delta = set.delta();
        let mut prefix = Vec::with_capacity(set.span() + 1);
        prefix.push(0u64);
        let mut acc = 0;
        for k in set.offset()..set.end() {
            if set.contains_cell(k) {
                acc += 1;
            }
            prefix.push(acc);
        }
        let total = acc;
        let span = set.span();

        let mut scales = Vec::new();
        let mut j = 0u32;
        while (1u64 << j) < n {
            // B(x, r) with x on a boundary covers exactly 2^{j+1} cells
            let width = 2usize << j;
            let best = if width >= span {
                total
            } else {
                (0..=span - width)
                    .map(|s| prefix[s + width] - prefix[s])
                    .max()
                    .unwrap_or(total)
            };
            let radius = (1u64 << j) as f64 * delta;
            let cells = best as f64;
            let sigma_hat = (j > 0).then(|| cells.ln() / ((1u64 << j) as f64).ln());
            scales.push(ScaleEntry {
                j,
                radius,
                max_mass: cells * delta,
                sigma_hat,
            });
            j += 1;
        }

        let mid: Vec<&ScaleEntry> = if scales.len() > 2 {
            scales[1..scales.len() - 1].iter().collect()
        } else {
            scales.iter().skip(1).collect()
        };
        let xs: Vec<f64> = mid.iter().map(|s| s.radius.ln()).collect();
        let ys: Vec<f64> = mid.iter().map(|s| s.max_mass.ln()).collect();
        let fitted_sigma = ls_slope(&xs, &ys);

        NonConcentrationProfile {
            n,
            delta,
            measure: set.measure(),
            scales,
            fitted_sigma,
        }
    }

    /// Smallest `σ ≥ 0` with `m(r) ≤ C·δ·(r/δ)^σ` at every dyadic scale, or
    /// `None` when the bound already fails at `r = δ`. Values above 1 mean no
    /// `σ ∈ [0, 1]` works.
    pub fn min_sigma(&self, c: f64) -> Option<f64> {
        let first = self.scales.first()?;
        if first.max_mass > c * self.delta * (1.0 + 1e-12) {
            return None;
        }
        let mut sigma: f64 = 0.0;
        for s in self.scales.iter().skip(1) {
            let ratio = s.max_mass / (c * self.delta);
            let scale = (s.radius / self.delta).ln();
            sigma = sigma.max(ratio.ln() / scale);
        }
        Some(sigma)
    }

    /// Whether the `(δ, σ)` non-concentration bound holds with constant `C`.
    pub fn passes(&self, sigma: f64, c: f64) -> bool {
        self.scales.iter().all(|s| {
            s.max_mass <= c * self.delta * (s.radius / self.delta).powf(sigma) * (1.0 + 1e-12)
        })
    }

    /// Frostman constant `K(α) = max_r μ(B(x, r)) / r^α` for the normalised
    /// restriction `μ(X) = |X ∩ A| / |A|`.
    pub fn frostman_constant(&self, alpha: f64) -> f64 {
        self.scales
            .iter()
            .map(|s| s.max_mass / self.measure / s.radius.powf(alpha))
            .fold(0.0, f64::max)
    }
}
