//! Theory curves for the sum-product exponent and the falsification sweep.
//!
//! Exponents are evaluated in exact rationals; `σ` given as `f64` is converted
//! exactly, so only the final report is rounded.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extraction::sum_product::sum_product_k;
use crate::generators::{generate, GeneratorSpec};
use crate::grid::GridSet;
use crate::kernels::{productset_pair_loop, sumset_with, SumsetKernel};
use crate::numeric::ls_slope;
use crate::profile::NonConcentrationProfile;

/// An exponent value; `in_range` is false (and `value` zero) outside `(1/2, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Exponent {
    pub value: BigRational,
    pub in_range: bool,
}

impl Exponent {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }
}

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Exact rational value of a finite `f64`.
pub fn exact(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::param("sigma", format!("{x} is not finite")))
}

fn in_open_range(sigma: &BigRational) -> bool {
    sigma > &rat(1, 2) && sigma < &BigRational::one()
}

/// `(1-σ)(2σ-1)/(6σ+4)`, the exponent of `δ` in the main theorem.
pub fn theorem_exponent_exact(sigma: &BigRational) -> Exponent {
    if !in_open_range(sigma) {
        return Exponent {
            value: BigRational::zero(),
            in_range: false,
        };
    }
    let one = BigRational::one();
    let two = rat(2, 1);
    let value = (&one - sigma) * (&two * sigma - &one) / (rat(6, 1) * sigma + rat(4, 1));
    Exponent {
        value,
        in_range: true,
    }
}

/// `σ(1-σ)/(4(7+3σ))`, the earlier exponent.
pub fn gkz_exponent_exact(sigma: &BigRational) -> Exponent {
    if !in_open_range(sigma) {
        return Exponent {
            value: BigRational::zero(),
            in_range: false,
        };
    }
    let one = BigRational::one();
    let value = sigma * (&one - sigma) / (rat(4, 1) * (rat(7, 1) + rat(3, 1) * sigma));
    Exponent {
        value,
        in_range: true,
    }
}

pub fn theorem_exponent(sigma: f64) -> Result<Exponent> {
    Ok(theorem_exponent_exact(&exact(sigma)?))
}

pub fn gkz_exponent(sigma: f64) -> Result<Exponent> {
    Ok(gkz_exponent_exact(&exact(sigma)?))
}

/// `(2σ-1)/4`, the other branch of the closing minimum.
pub fn min_branch(sigma: f64) -> f64 {
    (2.0 * sigma - 1.0) / 4.0
}

/// The unique `σ ∈ (1/2, 1)` where the two exponents agree, by bisection with
/// exact sign evaluation down to a bracket of width `1e-14`.
pub fn crossover_sigma() -> f64 {
    let diff = |s: f64| {
        let r = exact(s).expect("finite");
        theorem_exponent_exact(&r).value - gkz_exponent_exact(&r).value
    };
    let (mut lo, mut hi) = (0.5 + 1e-9, 1.0 - 1e-9);
    debug_assert!(diff(lo).is_negative() && diff(hi).is_positive());
    while hi - lo > 1e-14 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if diff(mid).is_negative() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    pub sigmas: Vec<f64>,
    pub ladder: Vec<u64>,
    pub seeds: Vec<u64>,
    pub concentration_constant: f64,
    pub exponent_slack: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            sigmas: vec![0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9],
            ladder: (8..=14).map(|m| 1u64 << m).collect(),
            seeds: (1..=5).collect(),
            concentration_constant: 16.0,
            exponent_slack: 0.1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointFlag {
    Ok,
    /// Measure or non-concentration hypothesis not met; not a counterexample.
    HypothesisFailed,
    /// `σ` outside `(1/2, 1)`, where the theorem says nothing.
    Excluded,
    /// `K < δ^{-c+slack}` confirmed by the pair-loop kernels.
    FalsificationCandidate,
    /// The fast kernels suggested a candidate that the pair loops did not confirm.
    KernelMismatch,
}

impl PointFlag {
    pub fn as_str(&self) -> &'static str {
        match self {
            PointFlag::Ok => "ok",
            PointFlag::HypothesisFailed => "hypothesis_failed",
            PointFlag::Excluded => "excluded",
            PointFlag::FalsificationCandidate => "falsification_candidate",
            PointFlag::KernelMismatch => "kernel_mismatch",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub n: u64,
    pub delta: f64,
    pub measure_a: f64,
    pub sum_measure: f64,
    pub prod_measure: f64,
    pub k: f64,
    /// `δ^{-c_paper + slack}`.
    pub k_threshold: f64,
    pub flag: PointFlag,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentReport {
    pub sigma: f64,
    pub seed: u64,
    pub points: Vec<SweepPoint>,
    /// Least-squares slope of `ln K` against `ln(1/δ)`.
    pub fitted_slope: f64,
    pub c_paper: f64,
    pub c_gkz: f64,
    pub min_branch: f64,
    pub exponent_slack: f64,
}

impl ExponentReport {
    pub fn candidates(&self) -> usize {
        self.points
            .iter()
            .filter(|p| p.flag == PointFlag::FalsificationCandidate)
            .count()
    }
}

fn hypothesis_holds(a: &GridSet, sigma: f64, c: f64) -> bool {
    let expected = a.delta().powf(1.0 - sigma);
    let m = a.measure();
    m >= expected / 4.0 && m <= 4.0 * expected && NonConcentrationProfile::compute(a).passes(sigma, c)
}

fn measure_point(spec: &GeneratorSpec, opts: &SweepOptions, c_paper: &Exponent) -> Result<SweepPoint> {
    let a = generate(spec)?;
    let entry = sum_product_k(&a)?;
    let k_threshold = entry.delta.powf(-c_paper.to_f64() + opts.exponent_slack);
    let flag = if !c_paper.in_range {
        PointFlag::Excluded
    } else if !hypothesis_holds(&a, spec.sigma, opts.concentration_constant) {
        PointFlag::HypothesisFailed
    } else if entry.k < k_threshold {
        let sum = sumset_with(&a, &a, SumsetKernel::PairLoop)?.cell_count();
        let prod = productset_pair_loop(&a, &a)?.cell_count();
        let k = sum.max(prod) as f64 / a.cell_count() as f64;
        if k < k_threshold {
            PointFlag::FalsificationCandidate
        } else {
            PointFlag::KernelMismatch
        }
    } else {
        PointFlag::Ok
    };
    Ok(SweepPoint {
        n: entry.n,
        delta: entry.delta,
        measure_a: entry.measure_a,
        sum_measure: entry.sum_measure,
        prod_measure: entry.prod_measure,
        k: entry.k,
        k_threshold,
        flag,
    })
}

/// One report per `(σ, seed)`, in input order. The template fixes the generator
/// kind and its other parameters; `sigma`, `seed` and `n` are overwritten.
pub fn sweep(template: &GeneratorSpec, opts: &SweepOptions) -> Result<Vec<ExponentReport>> {
    if let Some(&n) = opts.ladder.iter().find(|&&n| n < 64) {
        return Err(Error::param("ladder", format!("n = {n} is below 64")));
    }
    if opts.sigmas.is_empty() || opts.ladder.is_empty() || opts.seeds.is_empty() {
        return Err(Error::param("sweep", "sigmas, ladder and seeds must be nonempty"));
    }
    let jobs: Vec<(f64, u64)> = opts
        .sigmas
        .iter()
        .flat_map(|&s| opts.seeds.iter().map(move |&seed| (s, seed)))
        .collect();
    jobs.par_iter()
        .map(|&(sigma, seed)| {
            let c_paper = theorem_exponent(sigma)?;
            let c_gkz = gkz_exponent(sigma)?;
            let points: Vec<SweepPoint> = opts
                .ladder
                .par_iter()
                .map(|&n| {
                    let spec = GeneratorSpec {
                        n,
                        sigma,
                        seed,
                        ..template.clone()
                    };
                    measure_point(&spec, opts, &c_paper)
                })
                .collect::<Result<_>>()?;
            let xs: Vec<f64> = points.iter().map(|p| (p.n as f64).ln()).collect();
            let ys: Vec<f64> = points.iter().map(|p| p.k.ln()).collect();
            Ok(ExponentReport {
                sigma,
                seed,
                fitted_slope: ls_slope(&xs, &ys).unwrap_or(0.0),
                c_paper: c_paper.to_f64(),
                c_gkz: c_gkz.to_f64(),
                min_branch: min_branch(sigma),
                exponent_slack: opts.exponent_slack,
                points,
            })
        })
        .collect()
}

pub const CSV_HEADER: &str = "sigma,n,delta,measure_A,sum_measure,prod_measure,K,c_paper,c_gkz,slope,flag";

pub fn to_csv(reports: &[ExponentReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in reports {
        for p in &r.points {
            out.push_str(&format!(
                "{},{},{:e},{:e},{:e},{:e},{},{},{},{},{}\n",
                r.sigma,
                p.n,
                p.delta,
                p.measure_a,
                p.sum_measure,
                p.prod_measure,
                p.k,
                r.c_paper,
                r.c_gkz,
                r.fitted_slope,
                p.flag.as_str()
            ));
        }
    }
    out
}
