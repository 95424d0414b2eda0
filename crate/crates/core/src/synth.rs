//! Seeded synthetic score tables: a block of human metrics driven by one
//! latent quality factor and a block of automatic metrics driven by a
//! second, correlated and monotonically distorted factor.

use chrono::NaiveDate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::scoreset::{MetricProfile, Orientation, ScoreSetError, ScoreTensor};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthConfig {
    pub humans: usize,
    pub automatics: usize,
    pub systems: usize,
    pub utterances: usize,
    /// Spread of per-system quality offsets.
    pub system_sd: f64,
    /// Noise of each human metric around the human factor.
    pub sigma_h: f64,
    /// Noise of each automatic metric around the automatic factor.
    pub sigma_a: f64,
    /// Correlation between the human and automatic factors.
    pub rho: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            humans: 5,
            automatics: 8,
            systems: 10,
            utterances: 100,
            system_sd: 0.5,
            sigma_h: 0.4,
            sigma_a: 0.6,
            rho: 0.6,
            seed: 0,
        }
    }
}

impl SynthConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

fn human_names(n: usize) -> Vec<String> {
    const NAMES: [&str; 6] = ["H:coherence", "H:fluency", "H:relevance", "H:consistency", "H:overall", "H:informativeness"];
    (0..n)
        .map(|i| NAMES.get(i).map_or_else(|| format!("H:human{i}"), |s| (*s).to_owned()))
        .collect()
}

/// Monotone increasing distortions applied to automatic metrics.
fn distort(kind: usize, x: f64) -> f64 {
    match kind % 4 {
        0 => x,
        1 => x.exp(),
        2 => x.tanh(),
        _ => x * x * x + x,
    }
}

/// Profiles matching [`generate`]: humans first, then `auto0..`; every
/// third automatic metric is lower-is-better, and automatic metrics carry
/// release dates with `auto1`/`auto2` forming one family.
pub fn profiles(config: &SynthConfig) -> Vec<MetricProfile> {
    let mut out: Vec<MetricProfile> = human_names(config.humans)
        .into_iter()
        .map(MetricProfile::human)
        .collect();
    for j in 0..config.automatics {
        let year = 2002 + 2 * i32::try_from(j).unwrap_or(0);
        let mut p = MetricProfile::automatic(format!("auto{j}"))
            .with_release(NaiveDate::from_ymd_opt(year, 6, 1).expect("valid date"));
        if j % 3 == 2 {
            p = p.with_orientation(Orientation::LowerBetter);
        }
        if j == 1 || j == 2 {
            p = p.with_family("auto-pair");
        }
        out.push(p);
    }
    out
}

/// Draws a dense tensor. Raw scores of lower-is-better metrics are negated
/// so that every metric agrees in direction with its factor.
pub fn generate(config: &SynthConfig) -> Result<ScoreTensor, ScoreSetError> {
    let SynthConfig {
        humans,
        automatics,
        systems: n,
        utterances: k,
        ..
    } = *config;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let std_normal = |rng: &mut ChaCha8Rng| -> f64 { StandardNormal.sample(rng) };
    let system_effect = Normal::new(0.0, config.system_sd.max(0.0)).map_err(|e| ScoreSetError::Shape(e.to_string()))?;
    // residual spread chosen so the factor has unit variance
    let cell_sd = (1.0 - config.system_sd.powi(2)).max(0.0).sqrt();

    let offsets: Vec<f64> = (0..n).map(|_| system_effect.sample(&mut rng)).collect();
    let human_factor: Vec<f64> = (0..n * k)
        .map(|c| offsets[c / k] + cell_sd * std_normal(&mut rng))
        .collect();
    let rho = config.rho.clamp(-1.0, 1.0);
    let auto_factor: Vec<f64> = human_factor
        .iter()
        .map(|q| rho * q + (1.0 - rho * rho).sqrt() * std_normal(&mut rng))
        .collect();

    let metrics = profiles(config);
    let mut raw = Vec::with_capacity((humans + automatics) * n * k);
    for _ in 0..humans {
        raw.extend(human_factor.iter().map(|q| q + config.sigma_h * std_normal(&mut rng)));
    }
    for (j, p) in metrics[humans..].iter().enumerate() {
        let sign = if p.orientation == Orientation::LowerBetter { -1.0 } else { 1.0 };
        let scale = rng.random_range(0.5..2.0);
        raw.extend(
            auto_factor
                .iter()
                .map(|q| sign * scale * distort(j, q + config.sigma_a * std_normal(&mut rng))),
        );
    }
    ScoreTensor::from_raw(
        "synthetic",
        metrics,
        (0..n).map(|s| format!("sys{s:02}")).collect(),
        (0..k).map(|u| format!("utt{u:03}")).collect(),
        raw,
    )
}
