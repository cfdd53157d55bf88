//! Families of test sets inside `[1, 2]`: Cantor sets, random branching trees,
//! arithmetic and geometric progressions, and plain intervals.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{GridScale, GridSet};

/// Regeneration attempts before a random tree gives up.
pub const MAX_RETRIES: u32 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    Cantor,
    RandomTree,
    ArithmeticProgression,
    GeometricProgression,
    Interval,
}

impl std::str::FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "cantor" => GeneratorKind::Cantor,
            "random_tree" => GeneratorKind::RandomTree,
            "arithmetic_progression" | "ap" => GeneratorKind::ArithmeticProgression,
            "geometric_progression" | "gp" => GeneratorKind::GeometricProgression,
            "interval" => GeneratorKind::Interval,
            other => return Err(Error::param("kind", format!("unknown generator `{other}`"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub n: u64,
    /// Target dimension for `random_tree`.
    pub sigma: f64,
    pub seed: u64,
    /// Point count for the progressions.
    pub count: usize,
    /// Used by `interval`; other kinds always live in `[1, 2]`.
    pub support: (f64, f64),
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, n: u64) -> Self {
        GeneratorSpec {
            kind,
            n,
            sigma: 1.0,
            seed: 0,
            count: 64,
            support: (1.0, 2.0),
        }
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<GridSet> {
    let scale = GridScale::new(spec.n)?;
    let (lo, hi) = spec.support;
    if !(1.0..=2.0).contains(&lo) || !(1.0..=2.0).contains(&hi) || lo >= hi {
        return Err(Error::param("support", format!("({lo}, {hi}) is not inside [1, 2]")));
    }
    let set = match spec.kind {
        GeneratorKind::Cantor => cantor(scale)?,
        GeneratorKind::RandomTree => random_tree(scale, spec.sigma, spec.seed)?,
        GeneratorKind::ArithmeticProgression => arithmetic_progression(scale, spec.count)?,
        GeneratorKind::GeometricProgression => geometric_progression(scale, spec.count)?,
        GeneratorKind::Interval => GridSet::from_intervals(scale, &[(lo, hi)])?,
    };
    debug_assert!(set.within(1.0, 2.0));
    Ok(set)
}

/// Depth-`m` middle-thirds Cantor set at `n = 3^m`, translated to `[1, 2]`.
pub fn cantor(scale: GridScale) -> Result<GridSet> {
    let n = scale.n();
    let depth = power_of(n, 3)
        .ok_or_else(|| Error::param("n", format!("{n} is not a power of 3")))?;
    let mut cells = vec![0i64];
    for _ in 0..depth {
        cells = cells
            .iter()
            .flat_map(|&c| [3 * c, 3 * c + 2])
            .collect();
    }
    GridSet::from_cells(scale, cells.into_iter().map(|c| c + n as i64))
}

/// Random dyadic tree at `n = 2^m` with expected branching `2^σ`.
///
/// Each child of a surviving node is kept with probability `p = 2 - 2^{1-σ}`;
/// nodes whose children all die are resampled. Conditioned on survival the
/// mean offspring is `2p / (1 - (1-p)^2) = 2/(2-p) = 2^σ`. Outputs with more
/// than `4·n^σ` cells are thinned to `n^σ` cells; outputs with fewer than
/// `n^σ / 4` cells are regenerated with `seed + 1`.
pub fn random_tree(scale: GridScale, sigma: f64, seed: u64) -> Result<GridSet> {
    if !(sigma > 0.0 && sigma <= 1.0) {
        return Err(Error::param("sigma", format!("{sigma} not in (0, 1]")));
    }
    let n = scale.n();
    let depth = power_of(n, 2)
        .ok_or_else(|| Error::param("n", format!("{n} is not a power of 2")))?;
    let target = (n as f64).powf(sigma);
    let keep = 2.0 - 2f64.powf(1.0 - sigma);

    for attempt in 0..MAX_RETRIES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt as u64));
        let mut nodes = vec![0i64];
        for _ in 0..depth {
            let mut next = Vec::with_capacity(nodes.len() * 2);
            for &v in &nodes {
                loop {
                    let left = rng.random::<f64>() < keep;
                    let right = rng.random::<f64>() < keep;
                    if left || right {
                        if left {
                            next.push(2 * v);
                        }
                        if right {
                            next.push(2 * v + 1);
                        }
                        break;
                    }
                }
            }
            nodes = next;
        }
        let count = nodes.len() as f64;
        if count * 4.0 < target {
            continue;
        }
        if count > 4.0 * target {
            nodes.shuffle(&mut rng);
            nodes.truncate(target.round().max(1.0) as usize);
        }
        return GridSet::from_cells(scale, nodes.into_iter().map(|c| c + n as i64));
    }
    Err(Error::GeneratorExhausted {
        attempts: MAX_RETRIES,
        reason: format!("measure stayed below a quarter of n^σ for σ = {sigma}"),
    })
}

/// Cells containing `1 + j/N`, `j < N`.
pub fn arithmetic_progression(scale: GridScale, count: usize) -> Result<GridSet> {
    check_count(scale, count)?;
    let n = scale.n() as i64;
    let c = count as i64;
    GridSet::from_cells(scale, (0..c).map(|j| n + (n * j).div_euclid(c)))
}

/// Cells containing `2^{j/N}`, `j < N`.
pub fn geometric_progression(scale: GridScale, count: usize) -> Result<GridSet> {
    check_count(scale, count)?;
    let n = scale.n() as f64;
    GridSet::from_cells(
        scale,
        (0..count).map(|j| (n * 2f64.powf(j as f64 / count as f64)).floor() as i64),
    )
}

fn check_count(scale: GridScale, count: usize) -> Result<()> {
    if count < 2 || count as u64 > scale.n() / 2 {
        return Err(Error::param(
            "count",
            format!("{count} points need 2 <= N <= n/2 = {}", scale.n() / 2),
        ));
    }
    Ok(())
}

fn power_of(mut n: u64, base: u64) -> Option<u32> {
    let mut e = 0;
    while n > 1 {
        if !n.is_multiple_of(base) {
            return None;
        }
        n /= base;
        e += 1;
    }
    Some(e)
}
