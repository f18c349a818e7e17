//! Beat-matching metrics (coverage/hit scores and their deviations),
//! diversity scores and a Fréchet distance over caller-supplied features.

mod frechet;

pub use frechet::frechet_distance;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::beat::BeatList;
use crate::error::{Error, Result};
use crate::Real;

/// Per-sample beat-matching scores.
///
/// `bcs = n_matched / n_synth` (coverage), `bhs = n_matched / n_ref` (hit),
/// `f1` their harmonic mean. When either list is empty the scores are zero
/// and `degenerate` is set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeatScores<F: Real> {
    pub bcs: F,
    pub bhs: F,
    pub f1: F,
    pub n_matched: usize,
    pub n_synth: usize,
    pub n_ref: usize,
    pub degenerate: bool,
}

/// Dataset-level aggregation of per-sample scores.
///
/// `csd` / `hsd` are population standard deviations of the per-sample
/// coverage/hit scores (fractions; multiply by 100 for percentage points),
/// absent with fewer than two samples.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport<F: Real> {
    pub mean_bcs: F,
    pub mean_bhs: F,
    pub mean_f1: F,
    pub csd: Option<F>,
    pub hsd: Option<F>,
    pub n_samples: usize,
    pub total_matched: usize,
    pub total_synth: usize,
    pub total_ref: usize,
}

/// Greedy one-to-one matching in time order: each synthesized beat takes the
/// earliest unmatched reference beat within `±window` seconds.
///
/// For beats on a line this greedy rule attains the maximum matching
/// cardinality (verified against an exhaustive assignment oracle in tests).
pub fn match_beats<F: Real>(
    synth: &BeatList<F>,
    reference: &BeatList<F>,
    window: F,
) -> Result<usize> {
    if !(window > F::zero()) {
        return Err(Error::Parameter("matching window must be positive".into()));
    }
    let refs = reference.times();
    let mut next = 0usize; // first still-unmatched reference
    let mut matched = 0usize;
    for &s in synth.times() {
        while next < refs.len() && refs[next] < s - window {
            next += 1;
        }
        if next < refs.len() && (refs[next] - s).abs() <= window {
            matched += 1;
            next += 1;
        }
    }
    Ok(matched)
}

/// Coverage/hit/F1 scores of a synthesized beat list against a reference.
pub fn beat_scores<F: Real>(
    synth: &BeatList<F>,
    reference: &BeatList<F>,
    window: F,
) -> Result<BeatScores<F>> {
    let n_synth = synth.len();
    let n_ref = reference.len();
    if n_synth == 0 || n_ref == 0 {
        return Ok(BeatScores {
            bcs: F::zero(),
            bhs: F::zero(),
            f1: F::zero(),
            n_matched: 0,
            n_synth,
            n_ref,
            degenerate: true,
        });
    }
    let n_matched = match_beats(synth, reference, window)?;
    let bcs = F::from_usize(n_matched).unwrap() / F::from_usize(n_synth).unwrap();
    let bhs = F::from_usize(n_matched).unwrap() / F::from_usize(n_ref).unwrap();
    let f1 = if bcs + bhs > F::zero() {
        F::from_f64(2.0).unwrap() * bcs * bhs / (bcs + bhs)
    } else {
        F::zero()
    };
    Ok(BeatScores { bcs, bhs, f1, n_matched, n_synth, n_ref, degenerate: false })
}

fn population_std<F: Real>(values: &[F]) -> F {
    let n = F::from_usize(values.len()).unwrap();
    let mean = values.iter().copied().sum::<F>() / n;
    let var = values.iter().map(|&v| (v - mean) * (v - mean)).sum::<F>() / n;
    var.sqrt()
}

/// Aggregates per-sample scores into dataset means plus CSD/HSD.
pub fn dataset_scores<F: Real>(samples: &[BeatScores<F>]) -> Result<MetricsReport<F>> {
    if samples.is_empty() {
        return Err(Error::Parameter("no samples to aggregate".into()));
    }
    let n = F::from_usize(samples.len()).unwrap();
    let bcs: Vec<F> = samples.iter().map(|s| s.bcs).collect();
    let bhs: Vec<F> = samples.iter().map(|s| s.bhs).collect();
    let mean_bcs = bcs.iter().copied().sum::<F>() / n;
    let mean_bhs = bhs.iter().copied().sum::<F>() / n;
    let mean_f1 = samples.iter().map(|s| s.f1).sum::<F>() / n;
    let (csd, hsd) = if samples.len() >= 2 {
        (Some(population_std(&bcs)), Some(population_std(&bhs)))
    } else {
        (None, None)
    };
    Ok(MetricsReport {
        mean_bcs,
        mean_bhs,
        mean_f1,
        csd,
        hsd,
        n_samples: samples.len(),
        total_matched: samples.iter().map(|s| s.n_matched).sum(),
        total_synth: samples.iter().map(|s| s.n_synth).sum(),
        total_ref: samples.iter().map(|s| s.n_ref).sum(),
    })
}

/// Diversity modes: across conditions or within a condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiversityMode {
    Inter,
    Intra,
}

/// Average Euclidean feature distance.
///
/// `Inter`: 200 random cross-condition pairs drawn from 50 sampled items.
/// `Intra`: all pairs within each condition, averaged over conditions.
/// Deterministic given the seed.
pub fn diversity<F: Real>(
    groups: &[Vec<Vec<F>>],
    mode: DiversityMode,
    seed: u64,
) -> Result<F> {
    match mode {
        DiversityMode::Inter => {
            let nonempty = groups.iter().filter(|g| !g.is_empty()).count();
            if nonempty < 2 {
                return Err(Error::Parameter(
                    "inter-diversity needs features under at least 2 conditions".into(),
                ));
            }
            let mut pool: Vec<(usize, &Vec<F>)> = Vec::new();
            for (c, g) in groups.iter().enumerate() {
                for f in g {
                    pool.push((c, f));
                }
            }
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            pool.shuffle(&mut rng);
            pool.truncate(50);
            if pool.iter().map(|(c, _)| c).collect::<std::collections::HashSet<_>>().len() < 2 {
                // resample deterministically until both conditions appear
                return Err(Error::Parameter("sampled items cover a single condition".into()));
            }
            let mut total = F::zero();
            let mut count = 0usize;
            let mut guard = 0usize;
            while count < 200 {
                let i = rng.random_range(0..pool.len());
                let j = rng.random_range(0..pool.len());
                guard += 1;
                if guard > 100_000 {
                    return Err(Error::Parameter("could not draw cross-condition pairs".into()));
                }
                if pool[i].0 == pool[j].0 {
                    continue;
                }
                total += euclidean(pool[i].1, pool[j].1)?;
                count += 1;
            }
            Ok(total / F::from_usize(count).unwrap())
        }
        DiversityMode::Intra => {
            if groups.is_empty() {
                return Err(Error::Parameter("no conditions given".into()));
            }
            let mut per_cond = Vec::new();
            for g in groups {
                if g.len() < 2 {
                    return Err(Error::Parameter(
                        "intra-diversity needs at least 2 samples per condition".into(),
                    ));
                }
                let mut total = F::zero();
                let mut count = 0usize;
                for i in 0..g.len() {
                    for j in i + 1..g.len() {
                        total += euclidean(&g[i], &g[j])?;
                        count += 1;
                    }
                }
                per_cond.push(total / F::from_usize(count).unwrap());
            }
            Ok(per_cond.iter().copied().sum::<F>() / F::from_usize(per_cond.len()).unwrap())
        }
    }
}

fn euclidean<F: Real>(a: &[F], b: &[F]) -> Result<F> {
    if a.len() != b.len() {
        return Err(Error::Parameter("feature dimensions differ".into()));
    }
    Ok(a.iter()
        .zip(b)
        .map(|(&x, &y)| (x - y) * (x - y))
        .sum::<F>()
        .sqrt())
}
