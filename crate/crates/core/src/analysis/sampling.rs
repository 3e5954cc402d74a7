//! Finite-shot estimates of the correlators.
//!
//! Each cut is a separate measurement setting with its own shot budget and
//! its own random stream, derived from the seed, so results do not depend on
//! evaluation order.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlators::{
    full_distribution, geometric_mean, joint_distribution, mutual_information, pcc_outcome_distribution,
    Bipartition, JointOutcome, ObservableSpec, PccMoments, PccValue, ProductBasis,
};
use crate::density::DensityMatrix3Q;
use crate::error::{Error, Result};

pub const BOOTSTRAP_RESAMPLES: usize = 200;
/// Below this many shots the bootstrap spread is not a usable error bar.
pub const MIN_RELIABLE_SHOTS: u64 = 100;
const MP_STREAM: u64 = 3;

/// What to estimate.
#[derive(Debug, Clone, PartialEq)]
pub enum SampleTarget {
    Pcc(ObservableSpec),
    Mi(ProductBasis),
    Mp(ProductBasis),
}

impl SampleTarget {
    pub fn label(&self) -> String {
        match self {
            SampleTarget::Pcc(obs) => format!("pcc:{}", obs.label()),
            SampleTarget::Mi(basis) => format!("mi:{}", basis.label()),
            SampleTarget::Mp(basis) => format!("mp:{}", basis.label()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutEstimate {
    pub cut: Option<Bipartition>,
    pub exact: f64,
    pub estimate: f64,
    pub std_error: f64,
    pub degenerate: bool,
    pub counts: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleEstimate {
    pub target: String,
    pub shots: u64,
    pub seed: u64,
    pub resamples: usize,
    pub exact: f64,
    pub estimate: f64,
    pub std_error: f64,
    pub reliable: bool,
    pub settings: Vec<CutEstimate>,
}

/// Multinomial draw by sequential conditional binomials.
pub fn multinomial<R: Rng>(rng: &mut R, shots: u64, probs: &[f64]) -> Result<Vec<u64>> {
    let mut counts = vec![0; probs.len()];
    let mut left = shots;
    let mut mass: f64 = probs.iter().sum();
    for (slot, &p) in counts.iter_mut().zip(probs) {
        if left == 0 {
            break;
        }
        let frac = if mass > 0.0 { (p / mass).clamp(0.0, 1.0) } else { 0.0 };
        let k = Binomial::new(left, frac)
            .map_err(|e| Error::Numerical(format!("binomial draw: {e}")))?
            .sample(rng);
        *slot = k;
        left -= k;
        mass -= p;
    }
    // Rounding can leave a remainder; it belongs to the last cell with weight.
    if left > 0 {
        let last = probs.iter().rposition(|&p| p > 0.0).unwrap_or(probs.len() - 1);
        counts[last] += left;
    }
    Ok(counts)
}

fn frequencies(counts: &[u64]) -> Vec<f64> {
    let n: u64 = counts.iter().sum();
    counts.iter().map(|&c| c as f64 / n as f64).collect()
}

fn pcc_from_frequencies(outcomes: &[JointOutcome], freq: &[f64]) -> PccValue {
    let mut m = PccMoments {
        mean_a: 0.0,
        mean_b: 0.0,
        mean_ab: 0.0,
        var_a: 0.0,
        var_b: 0.0,
    };
    let (mut a2, mut b2) = (0.0, 0.0);
    for (o, &f) in outcomes.iter().zip(freq) {
        m.mean_a += f * o.a;
        m.mean_b += f * o.b;
        m.mean_ab += f * o.a * o.b;
        a2 += f * o.a * o.a;
        b2 += f * o.b * o.b;
    }
    m.var_a = a2 - m.mean_a * m.mean_a;
    m.var_b = b2 - m.mean_b * m.mean_b;
    m.abs_pcc()
}

fn mi_from_frequencies(freq: &[f64]) -> f64 {
    let mut joint = [[0.0; 4]; 2];
    for (k, &f) in freq.iter().enumerate() {
        joint[k / 4][k % 4] = f;
    }
    mutual_information(&joint)
}

fn std_dev(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return 0.0;
    }
    let mean = xs.iter().sum::<f64>() / n;
    (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
}

/// One measurement setting: exact probabilities and an estimator mapping
/// frequencies to a value (`None` = degenerate).
type Estimator<'a> = Box<dyn Fn(&[f64]) -> Option<f64> + Send + Sync + 'a>;

struct Setting<'a> {
    cut: Option<Bipartition>,
    stream: u64,
    probs: Vec<f64>,
    estimator: Estimator<'a>,
}

struct SettingResult {
    estimate: CutEstimate,
    replicates: Vec<f64>,
}

fn run_setting(setting: &Setting<'_>, shots: u64, seed: u64) -> Result<SettingResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(setting.stream);
    let counts = multinomial(&mut rng, shots, &setting.probs)?;
    let freq = frequencies(&counts);
    let point = (setting.estimator)(&freq);
    let mut replicates = Vec::with_capacity(BOOTSTRAP_RESAMPLES);
    for _ in 0..BOOTSTRAP_RESAMPLES {
        let resample = multinomial(&mut rng, shots, &freq)?;
        replicates.push((setting.estimator)(&frequencies(&resample)).unwrap_or(0.0));
    }
    let exact = (setting.estimator)(&setting.probs).unwrap_or(0.0);
    Ok(SettingResult {
        estimate: CutEstimate {
            cut: setting.cut,
            exact,
            estimate: point.unwrap_or(0.0),
            std_error: std_dev(&replicates),
            degenerate: point.is_none(),
            counts,
        },
        replicates,
    })
}

/// Simulates `shots` measurements per setting and reports plug-in estimates
/// with bootstrap standard errors.
pub fn sample_correlators(rho: &DensityMatrix3Q, target: &SampleTarget, shots: u64, seed: u64) -> Result<SampleEstimate> {
    if shots == 0 {
        return Err(Error::InvalidInput("shots must be at least 1".into()));
    }
    let settings: Vec<Setting<'_>> = match target {
        SampleTarget::Pcc(obs) => Bipartition::ALL
            .into_iter()
            .map(|cut| {
                let outcomes = pcc_outcome_distribution(rho, cut, obs)?;
                let probs = outcomes.iter().map(|o| o.probability).collect();
                Ok(Setting {
                    cut: Some(cut),
                    stream: cut.index() as u64,
                    probs,
                    estimator: Box::new(move |f: &[f64]| pcc_from_frequencies(&outcomes, f).value()),
                })
            })
            .collect::<Result<_>>()?,
        SampleTarget::Mi(basis) => Bipartition::ALL
            .into_iter()
            .map(|cut| {
                let joint = joint_distribution(rho, cut, basis)?;
                Ok(Setting {
                    cut: Some(cut),
                    stream: cut.index() as u64,
                    probs: joint.iter().flatten().copied().collect(),
                    estimator: Box::new(|f: &[f64]| Some(mi_from_frequencies(f))),
                })
            })
            .collect::<Result<_>>()?,
        SampleTarget::Mp(basis) => vec![Setting {
            cut: None,
            stream: MP_STREAM,
            probs: full_distribution(rho, basis)?.to_vec(),
            estimator: Box::new(|f: &[f64]| Some(f[0b000] + f[0b111])),
        }],
    };

    let results: Vec<SettingResult> = settings
        .par_iter()
        .map(|s| run_setting(s, shots, seed))
        .collect::<Result<_>>()?;

    let combine = |vals: &[f64]| -> f64 {
        if vals.len() == 1 {
            vals[0]
        } else {
            geometric_mean(vals)
        }
    };
    let pick = |f: fn(&CutEstimate) -> f64| results.iter().map(|r| f(&r.estimate)).collect::<Vec<_>>();
    let exact = combine(&pick(|e| e.exact));
    let estimate = combine(&pick(|e| e.estimate));
    let boot: Vec<f64> = (0..BOOTSTRAP_RESAMPLES)
        .map(|b| combine(&results.iter().map(|r| r.replicates[b]).collect::<Vec<_>>()))
        .collect();
    let any_degenerate = results.iter().any(|r| r.estimate.degenerate);

    Ok(SampleEstimate {
        target: target.label(),
        shots,
        seed,
        resamples: BOOTSTRAP_RESAMPLES,
        exact,
        estimate,
        std_error: std_dev(&boot),
        reliable: shots >= MIN_RELIABLE_SHOTS && !any_degenerate,
        settings: results.into_iter().map(|r| r.estimate).collect(),
    })
}
