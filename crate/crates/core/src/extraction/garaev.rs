//! Dilation-set extraction: from a set with small `|A+A|` and `|AA|`, a large set
//! `T` of ratios `t` with small `|A+tA|`.
//!
//! Overlap and class arithmetic is done in integer cell counts; measures are
//! derived only for reporting.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::Bits;
use crate::config::Slack;
use crate::error::{Error, Result};
use crate::grid::{GridSet, Net};
use crate::kernels::{dilate_sumset, productset, sumset};
use crate::numeric::{div_ceil, div_floor};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtractionOptions {
    pub slack: Slack,
    pub witness_samples: usize,
}

impl Default for ExtractionOptions {
    fn default() -> Self {
        ExtractionOptions {
            slack: Slack::default(),
            witness_samples: 64,
        }
    }
}

/// One postcondition: `passed` iff `value <= bound` (or the exact identity held).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DyadicClass {
    /// Overlaps in the class lie in `(2^{-k-1}, 2^{-k}]`.
    pub k: i32,
    pub indices: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub t: f64,
    pub sumset_measure: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtractionResult {
    pub n: u64,
    pub lambda: f64,
    pub measure_a: f64,
    pub sumset_measure: f64,
    pub productset_measure: f64,
    pub net_size: usize,
    pub j0: usize,
    /// The net point `a_{j0}`.
    pub j0_point: f64,
    /// `|U_i ∩ U_{j0}|` for every net index `i`.
    pub overlaps: Vec<f64>,
    /// `Σ_i |U_i ∩ U_{j0}|`.
    pub row_sum: f64,
    /// `Σ_{i,j} |U_i ∩ U_j|`.
    pub total_overlap: f64,
    /// `|A|² / (2|AA|)`.
    pub threshold: f64,
    pub p_indices: Vec<usize>,
    pub dyadic_classes: Vec<DyadicClass>,
    /// Number of dyadic classes between the threshold class and the largest overlap.
    pub dyadic_depth: u32,
    pub winning_class: i32,
    pub tau: f64,
    pub d_tau: Vec<usize>,
    #[serde(with = "crate::dset::serde_dset")]
    pub t_set: GridSet,
    pub t_measure: f64,
    pub witnesses: Vec<Witness>,
    pub checks: Vec<CheckRecord>,
}

impl ExtractionResult {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Cell ranges of `U_i`, the grid cover of `(k/n)·A`, merged and sorted.
fn dilation_ranges(a: &GridSet, k: i64) -> Vec<(i64, i64)> {
    let n = a.scale().ni();
    let mut out: Vec<(i64, i64)> = Vec::with_capacity(a.runs().len());
    for &(l0, l1) in a.runs() {
        let (s, e) = (div_floor(k * l0, n), div_ceil(k * l1, n));
        match out.last_mut() {
            Some(last) if s <= last.1 => last.1 = last.1.max(e),
            _ => out.push((s, e)),
        }
    }
    out
}

/// Bitset of `U_i` in the frame starting at cell `lo`.
fn dilation_bits(a: &GridSet, k: i64, lo: i64, len: usize) -> Bits {
    let mut bits = Bits::zeros(len);
    for (s, e) in dilation_ranges(a, k) {
        bits.set_range((s - lo) as usize, (e - lo) as usize);
    }
    bits
}

fn frame(a: &GridSet) -> (i64, usize) {
    let n = a.scale().ni();
    let lo = div_floor(a.offset() * a.offset(), n);
    let hi = div_ceil(a.end() * a.end(), n);
    (lo, (hi - lo) as usize)
}

fn check_domain(a: &GridSet) -> Result<()> {
    if !a.within(1.0, 2.0) {
        return Err(Error::Hypothesis("extraction needs A ⊆ [1, 2]".into()));
    }
    Ok(())
}

/// `|U_i ∩ U_j|` in cells for every `i`, by bitset AND and popcount.
pub fn overlap_matrix_row_cells(a: &GridSet, net: &Net, j: usize) -> Result<Vec<u64>> {
    check_domain(a)?;
    a.scale().ensure_same(&net.scale())?;
    let cells = net.cells();
    let kj = *cells
        .get(j)
        .ok_or_else(|| Error::param("j", format!("index {j} outside net of size {}", cells.len())))?;
    let (lo, len) = frame(a);
    let uj = dilation_bits(a, kj, lo, len);
    Ok(cells
        .par_iter()
        .map(|&ki| dilation_bits(a, ki, lo, len).and_count(&uj))
        .collect())
}

/// `|U_i ∩ U_j|` as measures for every `i`.
pub fn overlap_matrix_row(a: &GridSet, net: &Net, j: usize) -> Result<Vec<f64>> {
    let delta = a.delta();
    Ok(overlap_matrix_row_cells(a, net, j)?
        .into_iter()
        .map(|c| c as f64 * delta)
        .collect())
}

/// `⌊log₂(q/p)⌋` for positive integers.
pub(crate) fn dyadic_class(p: u128, q: u128) -> i32 {
    debug_assert!(p > 0 && q > 0);
    if q >= p {
        (q / p).ilog2() as i32
    } else {
        let mut e = (p / q).ilog2();
        if q << e < p {
            e += 1;
        }
        -(e as i32)
    }
}

/// `x · 2^{e}` compared against `y`, exactly; returns `x·2^e >= y`.
fn scaled_ge(x: u128, e: i32, y: u128) -> bool {
    if e >= 0 {
        x << e >= y
    } else {
        x >= y << (-e)
    }
}

pub fn garaev_extract(a: &GridSet, opts: &ExtractionOptions) -> Result<ExtractionResult> {
    check_domain(a)?;
    if opts.witness_samples == 0 {
        return Err(Error::param("witness_samples", "must be positive"));
    }
    let scale = a.scale();
    let n = scale.ni();
    let delta = scale.delta();
    let lambda = opts.slack.lambda(scale);

    let sum = sumset(a, a)?;
    let prod = productset(a, a)?;
    let ca = a.cell_count() as u128;
    let cp = prod.cell_count() as u128;

    let net = a.delta_net();
    let ks = net.cells();
    let big_n = ks.len();

    // f = Σ_i 1_{U_i}, then row j sums f over U_j.
    let (lo, len) = frame(a);
    let all_ranges: Vec<Vec<(i64, i64)>> = ks.par_iter().map(|&k| dilation_ranges(a, k)).collect();
    let mut diff = vec![0i64; len + 1];
    for ranges in &all_ranges {
        for &(s, e) in ranges {
            diff[(s - lo) as usize] += 1;
            diff[(e - lo) as usize] -= 1;
        }
    }
    // prefix[c] = Σ_{cells < c} f(cell); also Σ f² for the total.
    let mut prefix = vec![0u128; len + 1];
    let mut f = 0i64;
    let mut total_cells: u128 = 0;
    for c in 0..len {
        f += diff[c];
        prefix[c + 1] = prefix[c] + f as u128;
        total_cells += (f * f) as u128;
    }
    let row_sums: Vec<u128> = all_ranges
        .par_iter()
        .map(|ranges| {
            ranges
                .iter()
                .map(|&(s, e)| prefix[(e - lo) as usize] - prefix[(s - lo) as usize])
                .sum()
        })
        .collect();
    let (j0, &row_cells) = row_sums
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.cmp(y.1).then(y.0.cmp(&x.0)))
        .ok_or(Error::EmptySet)?;

    let overlaps_cells = overlap_matrix_row_cells(a, &net, j0)?;
    let overlap_row_total: u128 = overlaps_cells.iter().map(|&c| c as u128).sum();

    // P = {i : ov_i ≥ |A|²/(2|AA|)}, in cells: 2·cp·ov ≥ ca².
    let p_indices: Vec<usize> = (0..big_n)
        .filter(|&i| 2 * cp * overlaps_cells[i] as u128 >= ca * ca)
        .collect();
    if p_indices.is_empty() {
        return Err(Error::Hypothesis("no net index reaches the overlap threshold".into()));
    }

    let n_u = n as u128;
    let mut classes: Vec<DyadicClass> = Vec::new();
    for &i in &p_indices {
        let k = dyadic_class(overlaps_cells[i] as u128, n_u);
        match classes.iter_mut().find(|c| c.k == k) {
            Some(c) => c.indices.push(i),
            None => classes.push(DyadicClass { k, indices: vec![i] }),
        }
    }
    classes.sort_by_key(|c| c.k);
    let threshold_class = dyadic_class(ca * ca, 2 * n_u * cp);
    let min_class = classes[0].k;
    let depth = (threshold_class - min_class + 1).max(1) as u32;

    // Maximize 2^{-k}·#P_k; ties go to the smaller k.
    let winner = classes
        .iter()
        .max_by(|x, y| {
            let wx = (x.indices.len() as f64) * 2f64.powi(-x.k);
            let wy = (y.indices.len() as f64) * 2f64.powi(-y.k);
            wx.total_cmp(&wy).then(y.k.cmp(&x.k))
        })
        .expect("classes nonempty");
    let k_star = winner.k;
    let tau = 2f64.powi(-k_star - 1);
    let d_tau = winner.indices.clone();

    // T: cells meeting the open ball B(k_i/k_j0, δ/2) in cell units,
    // j > n·k_i/k_j0 - 3/2 and j < n·k_i/k_j0 + 1/2.
    let kj0 = ks[j0];
    let mut t_ranges = Vec::with_capacity(d_tau.len());
    for &i in &d_tau {
        let ki = ks[i];
        let j_min = div_floor(2 * n * ki - 3 * kj0, 2 * kj0) + 1;
        let j_max = div_ceil(2 * n * ki + kj0, 2 * kj0) - 1;
        t_ranges.push((j_min, j_max + 1));
    }
    let t_set = GridSet::from_cell_ranges(scale, &t_ranges)?;
    if !t_set.within(0.4, 2.1) {
        return Err(Error::Hypothesis("extracted T leaves [0.4, 2.1]".into()));
    }

    let t_cells: Vec<i64> = t_set.cells().collect();
    let samples = opts.witness_samples.min(t_cells.len());
    let witnesses: Vec<Witness> = (0..samples)
        .into_par_iter()
        .map(|s| {
            let c = t_cells[s * t_cells.len() / samples];
            let t = (c as f64 + 0.5) * delta;
            dilate_sumset(a, t).map(|w| Witness {
                t,
                sumset_measure: w.measure(),
            })
        })
        .collect::<Result<_>>()?;

    // Postconditions.
    let mut checks = Vec::new();
    let mut exact = |name: &str, ok: bool, value: f64, bound: f64| {
        checks.push(CheckRecord {
            name: name.to_string(),
            passed: ok,
            value,
            bound,
        })
    };
    let big_n_u = big_n as u128;
    exact(
        "net_count",
        big_n_u == ca,
        big_n as f64 * delta,
        a.measure(),
    );
    exact(
        "row_sum_consistency",
        overlap_row_total == row_cells,
        overlap_row_total as f64 * delta,
        row_cells as f64 * delta,
    );
    // Σ_{i,j}|U_i∩U_j| ≥ N²|A|²/|AA| (Cauchy–Schwarz with |∪U_i| ≤ |AA|).
    let union_cells = (0..len).filter(|&c| prefix[c + 1] > prefix[c]).count() as u128;
    exact(
        "cauchy_schwarz_total",
        total_cells * union_cells >= big_n_u * big_n_u * ca * ca && union_cells <= cp,
        total_cells as f64 * delta,
        (big_n_u * big_n_u * ca * ca) as f64 / cp as f64 * delta,
    );
    exact(
        "pigeonhole_row",
        big_n_u * row_cells >= total_cells,
        row_cells as f64 * delta,
        total_cells as f64 * delta / big_n as f64,
    );
    let p_sum: u128 = p_indices.iter().map(|&i| overlaps_cells[i] as u128).sum();
    let d_sum: u128 = d_tau.iter().map(|&i| overlaps_cells[i] as u128).sum();
    let depth_u = depth as u128;
    exact(
        "pigeonhole_dyadic",
        2 * depth_u * d_sum >= p_sum,
        d_sum as f64 * delta,
        p_sum as f64 * delta / (2.0 * depth as f64),
    );
    // τ·#D_τ ≥ Σ_P ov/(2K): (#D_τ · n · 2K) · 2^{-k-1} ≥ Σ_P cells.
    let lhs = d_tau.len() as u128 * n_u * 2 * depth_u;
    exact(
        "tau_mass",
        scaled_ge(lhs, -k_star - 1, p_sum),
        tau * d_tau.len() as f64,
        p_sum as f64 * delta / (2.0 * depth as f64),
    );
    let band_ok = d_tau.iter().all(|&i| {
        let c = overlaps_cells[i] as u128;
        // τ < c/n ≤ 2τ with τ = 2^{-k-1}.
        !scaled_ge(n_u, -k_star - 1, c) && scaled_ge(n_u, -k_star, c)
    });
    exact("tau_band", band_ok, tau, 2.0 * tau);
    let threshold_ok = d_tau
        .iter()
        .all(|&i| 2 * cp * overlaps_cells[i] as u128 >= ca * ca);
    let threshold = (ca * ca) as f64 / (2.0 * cp as f64) * delta;
    exact(
        "d_tau_threshold",
        threshold_ok,
        d_tau
            .iter()
            .map(|&i| overlaps_cells[i] as f64 * delta)
            .fold(f64::INFINITY, f64::min),
        threshold,
    );
    let au_ok = ks.iter().all(|&k| dilation_containment(a, k));
    exact("dilation_containment", au_ok, 0.0, 0.0);
    exact(
        "t_within",
        t_set.within(0.4, 2.1),
        t_set.offset() as f64 * delta,
        0.4,
    );

    let t_needed = a.measure().powi(2) / (prod.measure() * lambda);
    let t_measure = t_set.measure();
    checks.push(CheckRecord {
        name: "t_measure".into(),
        passed: t_measure >= t_needed,
        value: t_measure,
        bound: t_needed,
    });
    let witness_bound = lambda * sum.measure().powi(2) * prod.measure() / a.measure().powi(2);
    let worst = witnesses
        .iter()
        .map(|w| w.sumset_measure)
        .fold(0.0, f64::max);
    checks.push(CheckRecord {
        name: "witness_sumset".into(),
        passed: worst <= witness_bound,
        value: worst,
        bound: witness_bound,
    });

    Ok(ExtractionResult {
        n: scale.n(),
        lambda,
        measure_a: a.measure(),
        sumset_measure: sum.measure(),
        productset_measure: prod.measure(),
        net_size: big_n,
        j0,
        j0_point: kj0 as f64 * delta,
        overlaps: overlaps_cells.iter().map(|&c| c as f64 * delta).collect(),
        row_sum: row_cells as f64 * delta,
        total_overlap: total_cells as f64 * delta,
        threshold,
        p_indices,
        dyadic_classes: classes,
        dyadic_depth: depth,
        winning_class: k_star,
        tau,
        d_tau,
        t_measure,
        t_set,
        witnesses,
        checks,
    })
}

/// `(k/n)·A ⊆ U ⊆ (k/n)·A + B(0, δ)`, checked run by run in integers: the
/// cover `[s, e)` of the image `[k·l0/n, k·l1/n)` must contain it and stay
/// within one cell of it on both sides.
fn dilation_containment(a: &GridSet, k: i64) -> bool {
    let n = a.scale().ni();
    a.runs().iter().all(|&(l0, l1)| {
        let (s, e) = (div_floor(k * l0, n), div_ceil(k * l1, n));
        s * n <= k * l0 && e * n >= k * l1 && (s + 1) * n > k * l0 - n && (e - 1) * n < k * l1 + n
    })
}
