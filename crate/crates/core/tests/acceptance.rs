//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sumprod_core::exponents::{min_branch, sweep, PointFlag};
use sumprod_core::fourier::bilinear::bilinear_integral;
use sumprod_core::fourier::energy::interval_energy;
use sumprod_core::fourier::plancherel::{plancherel_defect, plancherel_tail_bound};
use sumprod_core::generators::{arithmetic_progression, cantor, geometric_progression, random_tree};
use sumprod_core::kernels::productset;
use sumprod_core::numeric::ls_slope;
use sumprod_core::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn lambda(n: u64) -> f64 {
    16.0 * (n as f64).log2().powi(3)
}

/// Random union of runs inside `[1, 2)`.
fn random_set(rng: &mut ChaCha8Rng, n: u64, max_runs: usize, max_len: i64) -> GridSet {
    let s = GridScale::new(n).unwrap();
    let ni = n as i64;
    let runs = rng.random_range(1..=max_runs);
    let ranges: Vec<(i64, i64)> = (0..runs)
        .map(|_| {
            let start = rng.random_range(0..ni);
            let len = rng.random_range(1..=max_len);
            (ni + start, ni + (start + len).min(ni))
        })
        .collect();
    GridSet::from_cell_ranges(s, &ranges).unwrap()
}

/// Generated sets grouped by scale.
fn suite() -> Vec<Vec<GridSet>> {
    let mut groups = Vec::new();
    for n in [256u64, 1024] {
        let s = GridScale::new(n).unwrap();
        let mut g = vec![
            GridSet::from_intervals(s, &[(1.0, 2.0)]).unwrap(),
            GridSet::from_intervals(s, &[(1.0, 1.25), (1.5, 1.625)]).unwrap(),
            arithmetic_progression(s, 32).unwrap(),
            geometric_progression(s, 32).unwrap(),
        ];
        for (i, sigma) in [0.55, 0.7, 0.9].into_iter().enumerate() {
            g.push(random_tree(s, sigma, 100 + i as u64).unwrap());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(n);
        g.push(random_set(&mut rng, n, 12, 20));
        groups.push(g);
    }
    for m in [5u32, 6] {
        let s = GridScale::new(3u64.pow(m)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(m as u64);
        groups.push(vec![cantor(s).unwrap(), random_set(&mut rng, 3u64.pow(m), 8, 10)]);
    }
    groups
}

/// Independent product cover: cell `m` is hit by cells `k, l` iff
/// `m·n < (k+1)(l+1)` and `(m+1)·n > k·l`.
fn product_oracle(a: &GridSet, b: &GridSet) -> BTreeSet<i64> {
    let n = a.scale().n() as i128;
    let bs: Vec<i64> = b.cells().collect();
    let mut hit = BTreeSet::new();
    for k in a.cells() {
        for &l in &bs {
            let (k, l) = (k as i128, l as i128);
            let lo = k * l / n;
            let hi = ((k + 1) * (l + 1) + n - 1) / n;
            for m in lo..hi {
                if m * n < (k + 1) * (l + 1) && (m + 1) * n > k * l {
                    hit.insert(m as i64);
                }
            }
        }
    }
    hit
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut sum_ok = 0;
    let mut prod_ok = 0;
    let total = 200;
    for i in 0..total {
        let n = [256u64, 1024, 4096][i % 3];
        let max_len = (n / 64) as i64;
        let a = random_set(&mut rng, n, 16, max_len);
        let b = random_set(&mut rng, n, 16, max_len);
        if sumset_with(&a, &b, SumsetKernel::Fft).unwrap()
            == sumset_with(&a, &b, SumsetKernel::PairLoop).unwrap()
        {
            sum_ok += 1;
        }
        let fast: BTreeSet<i64> = productset(&a, &b).unwrap().cells().collect();
        if fast == product_oracle(&a, &b) {
            prod_ok += 1;
        }
    }
    outcome(
        sum_ok == total && prod_ok == total,
        format!("sumset {sum_ok}/{total} bit-identical, productset {prod_ok}/{total} equal to oracle"),
    )
}

/// Simpson on each grid cell of the squared convolution, from direct counts.
fn simpson_energy(a: &GridSet, b: &GridSet) -> f64 {
    let delta = a.delta();
    let bs: Vec<i64> = b.cells().collect();
    let base = a.offset() + b.offset();
    let len = (a.end() + b.end() - base) as usize + 1;
    let mut r = vec![0f64; len];
    for k in a.cells() {
        for &l in &bs {
            r[(k + l - base) as usize] += 1.0;
        }
    }
    // g((s+1)δ) = δ·r[s]; g at the midpoint of [(s+1)δ, (s+2)δ] averages neighbours.
    let at = |s: i64| if s < 0 || s as usize >= len { 0.0 } else { delta * r[s as usize] };
    let mut total = 0.0;
    for s in -1..len as i64 {
        let g0 = at(s);
        let g1 = at(s + 1);
        let gm = 0.5 * (g0 + g1);
        total += delta / 6.0 * (g0 * g0 + 4.0 * gm * gm + g1 * g1);
    }
    total
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let n = [256u64, 1024][i % 2];
        let a = random_set(&mut rng, n, 10, 24);
        let b = random_set(&mut rng, n, 10, 24);
        let e = energy(&a, &b).unwrap().energy;
        worst = worst.max((e - simpson_energy(&a, &b)).abs() / e);
    }
    let unit = interval_energy(&[(0.0, 1.0)], &[(0.0, 1.0)]);
    let s = GridScale::new(1024).unwrap();
    let cell = GridSet::from_cells(s, [1500]).unwrap();
    let ec = energy(&cell, &cell).unwrap().energy;
    let want_cell = 2.0 * s.delta().powi(3) / 3.0;
    let unit_err = (unit - 2.0 / 3.0).abs() / (2.0 / 3.0);
    let cell_err = (ec - want_cell).abs() / want_cell;
    outcome(
        worst <= 1e-12 && unit_err <= 1e-12 && cell_err <= 1e-12,
        format!("max rel err {worst:.2e}; E([0,1]²) err {unit_err:.2e}; E(cell²) err {cell_err:.2e}"),
    )
}

fn criterion_3() -> Outcome {
    let mut pairs = 0;
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for g in suite() {
        for a in &g {
            for b in &g {
                let r = energy(a, b).unwrap();
                pairs += 1;
                ok &= r.lower_bound_check;
                worst = worst.max(r.cauchy_schwarz_ratio);
            }
        }
    }
    let s = GridScale::new(512).unwrap();
    let c = GridSet::from_cells(s, [700]).unwrap();
    let sharp = energy(&c, &c).unwrap().cauchy_schwarz_ratio;
    let sharp_ok = (sharp - 0.75).abs() <= 1e-9;
    outcome(
        ok && sharp_ok,
        format!("{pairs} pairs, max (|A||B|)²/(E|A+B|) = {worst:.6}; single-cell ratio {sharp:.12}"),
    )
}

fn criterion_4() -> Outcome {
    let mut ok = true;
    let mut count = 0;
    let mut worst: f64 = 0.0;
    for g in suite() {
        for a in &g {
            let xi = 1e3 * a.scale().n() as f64;
            let d = plancherel_defect(a, xi).unwrap();
            let bound = plancherel_tail_bound(a, xi);
            ok &= d >= 0.0 && d <= bound;
            worst = worst.max(d / bound);
            count += 1;
        }
    }
    outcome(ok, format!("{count} sets, max defect/bound = {worst:.4}"))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let net_sum = |x: &GridSet, y: &GridSet| -> u128 {
        let ys: Vec<i64> = y.cells().collect();
        let mut s = BTreeSet::new();
        for k in x.cells() {
            for &l in &ys {
                s.insert(k + l);
            }
        }
        s.len() as u128
    };
    let mut exact_ok = 0;
    for _ in 0..500 {
        let a = random_set(&mut rng, 256, 6, 8);
        let b = random_set(&mut rng, 256, 6, 8);
        let c = random_set(&mut rng, 256, 6, 8);
        if net_sum(&a, &b) * c.cell_count() as u128 <= net_sum(&a, &c) * net_sum(&c, &b) {
            exact_ok += 1;
        }
    }
    let mut worst: f64 = 0.0;
    let mut triples = 0;
    for g in suite() {
        let sums: Vec<Vec<f64>> = g
            .iter()
            .map(|x| g.iter().map(|y| sumset(x, y).unwrap().measure()).collect())
            .collect();
        for i in 0..g.len() {
            for j in 0..g.len() {
                for k in 0..g.len() {
                    let ratio = sums[i][j] * g[k].measure() / (sums[i][k] * sums[k][j]);
                    worst = worst.max(ratio);
                    triples += 1;
                }
            }
        }
    }
    outcome(
        exact_ok == 500 && worst <= 100.0,
        format!("net inequality {exact_ok}/500; measure-level max ratio {worst:.3} over {triples} triples (limit 100)"),
    )
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for i in 0..50 {
        let n = [256u64, 1024][i % 2];
        let a = random_set(&mut rng, n, 10, 16);
        let d = a.delta();
        for t in [0.5, 1.0, 2.0] {
            let base = dilate_sumset(&a, t).unwrap().measure();
            for x in [-d, -0.5 * d, 0.0, 0.5 * d, d, rng.random_range(-d..d)] {
                let r = dilate_sumset(&a, t + x).unwrap().measure() / base;
                lo = lo.min(r);
                hi = hi.max(r);
            }
        }
    }
    outcome(
        lo >= 1.0 / 9.0 && hi <= 9.0,
        format!("ratio range [{lo:.4}, {hi:.4}] within [1/9, 9]"),
    )
}

fn criterion_7() -> Outcome {
    let opts = BilinearOptions::default();
    let s = GridScale::new(1024).unwrap();
    let unit = GridSet::from_intervals(s, &[(0.0, 1.0)]).unwrap();
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for j in 3..=10 {
        let xi = 2f64.powi(j);
        let r = bilinear_integral(&unit, &unit, xi, &opts).unwrap();
        xs.push(xi.ln());
        ys.push(r.lhs.ln());
    }
    let slope = ls_slope(&xs, &ys).unwrap();
    let slope_ok = (slope + 0.5).abs() <= 0.1;

    let lam = lambda(1024);
    let mut worst: f64 = 0.0;
    for p in 0..5u64 {
        let a = random_tree(s, 0.7, 700 + 2 * p).unwrap();
        let b = random_tree(s, 0.7, 701 + 2 * p).unwrap();
        for j in 0..=10 {
            let r = bilinear_integral(&a, &b, 2f64.powi(j), &opts).unwrap();
            worst = worst.max(r.ratio);
        }
    }
    let ratio_ok = worst <= lam;
    outcome(
        slope_ok && ratio_ok,
        format!(
            "[0,1]² slope {slope:.4} (target -0.5 ± 0.1: {}); random pairs max lhs/rhs {worst:.3} ≤ {lam:.0}: {}",
            if slope_ok { "ok" } else { "miss" },
            if ratio_ok { "ok" } else { "miss" }
        ),
    )
}

fn extraction_instances() -> Vec<(String, GridSet)> {
    let s = GridScale::new(1024).unwrap();
    (1..=20u64)
        .map(|seed| (format!("tree seed {seed}"), random_tree(s, 0.7, seed).unwrap()))
        .collect()
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let opts = ExtractionOptions::default();
    let mut sets = extraction_instances();
    let s10 = GridScale::new(1024).unwrap();
    let s12 = GridScale::new(4096).unwrap();
    sets.push(("ap N=64".into(), arithmetic_progression(s10, 64).unwrap()));
    sets.push(("gp N=64 n=4096".into(), geometric_progression(s12, 64).unwrap()));
    sets.push(("interval".into(), GridSet::from_intervals(s10, &[(1.0, 2.0)]).unwrap()));
    let mut failures = Vec::new();
    for (name, a) in &sets {
        let r = garaev_extract(a, &opts).unwrap();
        for c in r.checks.iter().filter(|c| !c.passed) {
            failures.push(format!("{name}: {}", c.name));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        failures.is_empty() && secs <= 120.0,
        format!(
            "{} instances, {} failed checks{}; {secs:.1}s of 120s",
            sets.len(),
            failures.len(),
            if failures.is_empty() { String::new() } else { format!(" ({})", failures.join(", ")) }
        ),
    )
}

fn criterion_9() -> Outcome {
    let ext = ExtractionOptions::default();
    let em = EnergyMeanOptions::default();
    let mut worst_ratio: f64 = 0.0;
    let mut worst_closure = f64::INFINITY;
    let mut tail_ok = true;
    let mut ok = true;
    for (_, a) in extraction_instances() {
        let r = garaev_extract(&a, &ext).unwrap();
        let lam = r.lambda;
        let m = energy_mean_over_t(&a, &r.t_set, 0.7, &em).unwrap();
        worst_ratio = worst_ratio.max(m.ratio / lam);
        worst_closure = worst_closure.min(m.closure);
        tail_ok &= m.tail_bound.is_finite() && m.tail_bound >= 0.0;
        ok &= m.integral <= lam * m.bound && m.closure >= 0.95;
    }
    outcome(
        ok && tail_ok,
        format!("max integral/(Λ·bound) {worst_ratio:.3e}; min (I0+I1+I2)/integral {worst_closure:.5}; tail bounds attached"),
    )
}

fn criterion_10() -> Outcome {
    let c = crossover_sigma();
    let want = (226f64.sqrt() - 10.0) / 9.0;
    let cross_ok = (c - want).abs() <= 1e-12;
    let t = theorem_exponent(0.75).unwrap().value;
    let g = gkz_exponent(0.75).unwrap().value;
    let r = |p: i64, q: i64| {
        num_rational::BigRational::new(num_bigint::BigInt::from(p), num_bigint::BigInt::from(q))
    };
    let exact_ok = t == r(1, 68) && g == r(3, 592);
    let mut grid_ok = true;
    let mut k = 1;
    while k < 5000 {
        let sigma = 0.5 + k as f64 * 1e-4;
        let c = theorem_exponent(sigma).unwrap().value;
        grid_ok &= c <= num_rational::BigRational::from_float(min_branch(sigma)).unwrap();
        k += 1;
    }
    outcome(
        cross_ok && exact_ok && grid_ok,
        format!("crossover {c:.15} vs {want:.15}; c(3/4) = {t}, c_gkz(3/4) = {g}; branch bound on 1e-4 grid: {grid_ok}"),
    )
}

fn criterion_11() -> Outcome {
    let start = Instant::now();
    let cfg = RunConfig::default();
    let opts = SweepOptions {
        sigmas: cfg.sigmas.clone(),
        ladder: cfg.ladder.clone(),
        seeds: cfg.seeds.clone(),
        concentration_constant: cfg.concentration_constant,
        exponent_slack: cfg.exponent_slack,
    };
    let reports = sweep(&GeneratorSpec::new(GeneratorKind::RandomTree, 256), &opts).unwrap();
    let points: usize = reports.iter().map(|r| r.points.len()).sum();
    let candidates: usize = reports.iter().map(|r| r.candidates()).sum();
    let mismatches = reports
        .iter()
        .flat_map(|r| &r.points)
        .filter(|p| p.flag == PointFlag::KernelMismatch)
        .count();
    let hyp_failed = reports
        .iter()
        .flat_map(|r| &r.points)
        .filter(|p| p.flag == PointFlag::HypothesisFailed)
        .count();
    let secs = start.elapsed().as_secs_f64();
    let cantor_set = cantor(GridScale::new(3u64.pow(7)).unwrap()).unwrap();
    let sigma_hat = NonConcentrationProfile::compute(&cantor_set).fitted_sigma.unwrap();
    let target = 2f64.ln() / 3f64.ln();
    let cantor_ok = (sigma_hat - target).abs() <= 0.02;
    outcome(
        candidates == 0 && mismatches == 0 && cantor_ok && secs <= 600.0,
        format!(
            "{points} sweep points, {candidates} falsification candidates, {hyp_failed} outside hypothesis; sweep {secs:.1}s of 600s; Cantor σ̂ = {sigma_hat:.4} vs {target:.4}"
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("exact kernel equivalence", criterion_1),
        ("energy exactness", criterion_2),
        ("energy and sumset inequality", criterion_3),
        ("Plancherel defect", criterion_4),
        ("Ruzsa triangle inequality", criterion_5),
        ("continuity of dilates", criterion_6),
        ("bilinear decay", criterion_7),
        ("dilation-set extraction", criterion_8),
        ("energy mean over T", criterion_9),
        ("exponent algebra", criterion_10),
        ("falsification harness", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = f();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {verdict} [{name}] {} ({:.1}s)",
            i + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
