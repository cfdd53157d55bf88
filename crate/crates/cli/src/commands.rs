use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::Serialize;
use sumprod_core::exponents::{
    crossover_sigma, gkz_exponent, min_branch, sweep as run_sweep, theorem_exponent, to_csv,
    PointFlag, SweepOptions,
};
use sumprod_core::extraction::{
    energy_mean_over_t, garaev_extract, sum_product_k, EnergyMeanOptions, ExtractionOptions,
};
use sumprod_core::fourier::bilinear::{bilinear_integral, BilinearOptions};
use sumprod_core::{
    from_dset, generate as gen, to_dset, GeneratorKind, GeneratorSpec, GridSet,
    NonConcentrationProfile, RunConfig,
};

use crate::svg;

/// A failed command: exit code, message, and any report to print anyway.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
    pub output: Option<String>,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
            output: None,
        }
    }

    fn invariant(message: impl Into<String>, output: String) -> Self {
        Failure {
            code: 3,
            message: message.into(),
            output: Some(output),
        }
    }
}

type Out = Result<Option<String>, Failure>;

fn io_err(path: &Path, e: std::io::Error) -> Failure {
    Failure::usage(format!("{}: {e}", path.display()))
}

pub fn load_config(path: Option<&Path>) -> Result<RunConfig, Failure> {
    match path {
        None => Ok(RunConfig::default()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| io_err(p, e))?;
            RunConfig::parse(&text).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))
        }
    }
}

fn read_set(path: &Path) -> Result<GridSet, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    from_dset(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn write_or_return(text: String, out: Option<&Path>) -> Out {
    match out {
        Some(p) => {
            fs::write(p, text).map_err(|e| io_err(p, e))?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialise");
    s.push('\n');
    s
}

#[derive(Args)]
pub struct GenerateArgs {
    #[arg(long)]
    kind: GeneratorKind,
    #[arg(long)]
    n: u64,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Point count for the progressions
    #[arg(long, default_value_t = 64)]
    count: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn generate(args: &GenerateArgs) -> Out {
    let spec = GeneratorSpec {
        sigma: args.sigma,
        seed: args.seed,
        count: args.count,
        ..GeneratorSpec::new(args.kind, args.n)
    };
    let set = gen(&spec)?;
    write_or_return(to_dset(&set), args.out.as_deref())
}

pub fn analyze(file: &Path) -> Out {
    let set = read_set(file)?;
    Ok(Some(json(&NonConcentrationProfile::compute(&set))))
}

#[derive(Serialize)]
struct SumProductJson {
    n: u64,
    measure_a: f64,
    sum_measure: f64,
    prod_measure: f64,
    #[serde(rename = "K")]
    k: f64,
}

pub fn sumprod(file: &Path) -> Out {
    let set = read_set(file)?;
    let e = sum_product_k(&set)?;
    Ok(Some(json(&SumProductJson {
        n: e.n,
        measure_a: e.measure_a,
        sum_measure: e.sum_measure,
        prod_measure: e.prod_measure,
        k: e.k,
    })))
}

pub fn energy(a: &Path, b: &Path) -> Out {
    let (a, b) = (read_set(a)?, read_set(b)?);
    let r = sumprod_core::energy(&a, &b)?;
    let body = json(&r);
    if !r.lower_bound_check {
        return Err(Failure::invariant("(|A||B|)² ≤ E(A,B)|A+B| violated", body));
    }
    if r.path_closed_form != r.path_fft {
        return Err(Failure::invariant("direct and FFT energy routes disagree", body));
    }
    Ok(Some(body))
}

#[derive(Args)]
pub struct BilinearArgs {
    a: PathBuf,
    b: PathBuf,
    /// `2^a..2^b` (powers of two) or a comma list of frequencies
    #[arg(long, default_value = "2^2..2^10")]
    xi_grid: String,
}

pub fn parse_xi_grid(text: &str) -> Result<Vec<f64>, Failure> {
    let bad = || Failure::usage(format!("bad --xi-grid `{text}`: expected 2^a..2^b or a comma list"));
    if let Some((lo, hi)) = text.split_once("..") {
        let exp = |s: &str| -> Result<i32, Failure> {
            s.trim().strip_prefix("2^").ok_or_else(bad)?.parse().map_err(|_| bad())
        };
        let (lo, hi) = (exp(lo)?, exp(hi)?);
        if lo > hi {
            return Err(bad());
        }
        Ok((lo..=hi).map(|j| 2f64.powi(j)).collect())
    } else {
        text.split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|_| bad()))
            .collect()
    }
}

pub fn bilinear(args: &BilinearArgs, cfg: &RunConfig) -> Out {
    let (a, b) = (read_set(&args.a)?, read_set(&args.b)?);
    let opts = BilinearOptions {
        concentration_constant: cfg.concentration_constant,
        rel_tol: cfg.bilinear_rel_tol,
        gauss_order: cfg.gauss_order,
    };
    let reports = parse_xi_grid(&args.xi_grid)?
        .into_iter()
        .map(|xi| bilinear_integral(&a, &b, xi, &opts))
        .collect::<Result<Vec<_>, _>>()?;
    let body = json(&reports);
    if let Some(r) = reports.iter().find(|r| r.lhs > a.measure() * b.measure() * (1.0 + 1e-9)) {
        return Err(Failure::invariant(format!("lhs exceeds |A||B| at ξ = {}", r.xi), body));
    }
    Ok(Some(body))
}

#[derive(Args)]
pub struct ExtractArgs {
    file: PathBuf,
    /// Also write the extracted T as a DSET file
    #[arg(long)]
    t_out: Option<PathBuf>,
}

pub fn extract(args: &ExtractArgs, cfg: &RunConfig) -> Out {
    let a = read_set(&args.file)?;
    let opts = ExtractionOptions {
        slack: cfg.slack,
        witness_samples: cfg.witness_samples,
    };
    let r = garaev_extract(&a, &opts)?;
    if let Some(p) = &args.t_out {
        fs::write(p, to_dset(&r.t_set)).map_err(|e| io_err(p, e))?;
    }
    let body = json(&r);
    let failed: Vec<&str> = r.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    if !failed.is_empty() {
        return Err(Failure::invariant(format!("failed checks: {}", failed.join(", ")), body));
    }
    Ok(Some(body))
}

#[derive(Args)]
pub struct EnergyMeanArgs {
    a: PathBuf,
    t: PathBuf,
    #[arg(long)]
    sigma: f64,
}

pub fn energy_mean(args: &EnergyMeanArgs, cfg: &RunConfig) -> Out {
    let (a, t) = (read_set(&args.a)?, read_set(&args.t)?);
    let opts = EnergyMeanOptions {
        i2_multiplier: cfg.i2_multiplier,
        samples_per_cycle: cfg.samples_per_cycle,
    };
    let r = energy_mean_over_t(&a, &t, args.sigma, &opts)?;
    Ok(Some(json(&r)))
}

#[derive(Args)]
pub struct ExponentsArgs {
    /// `start:stop:step`, inclusive of stop
    #[arg(long, default_value = "0.5:1:0.01")]
    sigma_grid: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn parse_sigma_grid(text: &str) -> Result<Vec<f64>, Failure> {
    let bad = || Failure::usage(format!("bad --sigma-grid `{text}`: expected start:stop:step"));
    let parts: Vec<f64> = text
        .split(':')
        .map(|s| s.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    let [start, stop, step] = parts[..] else {
        return Err(bad());
    };
    if step.is_nan() || step <= 0.0 || stop < start {
        return Err(bad());
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| start + i as f64 * step).collect())
}

pub const THEORY_HEADER: &str = "kind,sigma,c_paper,c_gkz,min_branch,in_range";

pub fn exponents(args: &ExponentsArgs) -> Out {
    let mut rows = vec![THEORY_HEADER.to_string()];
    let mut line = |kind: &str, sigma: f64| -> Result<(), Failure> {
        let c = theorem_exponent(sigma)?;
        let g = gkz_exponent(sigma)?;
        rows.push(format!(
            "{kind},{sigma},{},{},{},{}",
            c.to_f64(),
            g.to_f64(),
            min_branch(sigma),
            c.in_range
        ));
        Ok(())
    };
    for sigma in parse_sigma_grid(&args.sigma_grid)? {
        line("grid", sigma)?;
    }
    line("crossover", crossover_sigma())?;
    let mut text = rows.join("\n");
    text.push('\n');
    write_or_return(text, args.out.as_deref())
}

#[derive(Args)]
pub struct SweepArgs {
    /// CSV destination (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a log-log chart of K against 1/δ
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Generator family (overrides the config)
    #[arg(long)]
    kind: Option<GeneratorKind>,
}

pub fn sweep(args: &SweepArgs, cfg: &RunConfig) -> Out {
    let opts = SweepOptions {
        sigmas: cfg.sigmas.clone(),
        ladder: cfg.ladder.clone(),
        seeds: cfg.seeds.clone(),
        concentration_constant: cfg.concentration_constant,
        exponent_slack: cfg.exponent_slack,
    };
    let kind = args.kind.unwrap_or(cfg.kind);
    let reports = run_sweep(&GeneratorSpec::new(kind, cfg.ladder[0]), &opts)?;
    if let Some(p) = &args.svg {
        fs::write(p, svg::sweep_chart(&reports)).map_err(|e| io_err(p, e))?;
    }
    let csv = to_csv(&reports);
    let flagged = reports
        .iter()
        .flat_map(|r| &r.points)
        .filter(|p| matches!(p.flag, PointFlag::FalsificationCandidate | PointFlag::KernelMismatch))
        .count();
    let out = write_or_return(csv, args.out.as_deref())?;
    if flagged > 0 {
        return Err(Failure {
            code: 3,
            message: format!("{flagged} falsification candidates or kernel mismatches"),
            output: out,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xi_grid_forms() {
        assert_eq!(parse_xi_grid("2^2..2^4").unwrap(), vec![4.0, 8.0, 16.0]);
        assert_eq!(parse_xi_grid("1, 3.5").unwrap(), vec![1.0, 3.5]);
        for bad in ["2^4..2^2", "4..16", "x"] {
            assert!(parse_xi_grid(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn sigma_grid_includes_stop() {
        let g = parse_sigma_grid("0.5:0.6:0.05").unwrap();
        assert_eq!(g.len(), 3);
        assert!((g[2] - 0.6).abs() < 1e-12);
        assert!(parse_sigma_grid("0.5:0.6").is_err());
        assert!(parse_sigma_grid("0.5:0.6:0").is_err());
        assert!(parse_sigma_grid("0.6:0.5:0.1").is_err());
    }
}
