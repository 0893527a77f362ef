//! Synthetic instances: Matérn cluster and homogeneous Poisson point
//! processes on the unit square, with sampled facility costs and client
//! counts.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::model::{Instance, MetricSpace, Point};

/// Attempts before an empty realization is reported as a failure.
pub const EMPTY_RETRY_BUDGET: usize = 16;

/// Rejection attempts allowed when conditioning a demand draw on `>= 1`.
const POSITIVE_DRAW_BUDGET: usize = 10_000;

/// Lower bound on the probability that a location hosts at least one client.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PresenceProb(f64);

impl PresenceProb {
    pub fn new(p: f64) -> Result<Self> {
        if p > 0.0 && p <= 1.0 {
            Ok(PresenceProb(p))
        } else {
            Err(Error::param(format!(
                "presence probability must lie in (0, 1], got {p}"
            )))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// How client counts are drawn per location.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ClientModel {
    /// Normal(mean, sd), rounded to the nearest integer, clamped to [lo, hi].
    TruncatedGaussian {
        mean: f64,
        sd: f64,
        lo: u64,
        hi: u64,
    },
    /// Every location gets the same count.
    Constant(u64),
    /// Zero with probability `1 - p`, otherwise a draw from `demand`
    /// conditioned on being at least one.
    BernoulliPresence {
        p: PresenceProb,
        demand: Box<ClientModel>,
    },
}

impl Default for ClientModel {
    /// Mean 2.5, standard deviation 1.5, restricted to [0, 8].
    fn default() -> Self {
        ClientModel::TruncatedGaussian {
            mean: 2.5,
            sd: 1.5,
            lo: 0,
            hi: 8,
        }
    }
}

impl ClientModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            ClientModel::TruncatedGaussian { mean, sd, lo, hi } => {
                if !mean.is_finite() || !sd.is_finite() || *sd < 0.0 {
                    return Err(Error::param(format!(
                        "truncated gaussian needs finite mean and sd >= 0, got ({mean}, {sd})"
                    )));
                }
                if hi < lo {
                    return Err(Error::param(format!(
                        "client range [{lo}, {hi}] is inverted"
                    )));
                }
                Ok(())
            }
            ClientModel::Constant(_) => Ok(()),
            ClientModel::BernoulliPresence { demand, .. } => {
                demand.validate()?;
                if !demand.can_be_positive() {
                    return Err(Error::param(
                        "presence demand model never yields a positive count",
                    ));
                }
                Ok(())
            }
        }
    }

    fn can_be_positive(&self) -> bool {
        match self {
            ClientModel::TruncatedGaussian { hi, .. } => *hi >= 1,
            ClientModel::Constant(c) => *c >= 1,
            ClientModel::BernoulliPresence { demand, .. } => demand.can_be_positive(),
        }
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<u64> {
        match self {
            ClientModel::TruncatedGaussian { mean, sd, lo, hi } => {
                let x = Normal::new(*mean, *sd)
                    .map_err(|e| Error::param(e.to_string()))?
                    .sample(rng)
                    .round();
                Ok(x.clamp(*lo as f64, *hi as f64) as u64)
            }
            ClientModel::Constant(c) => Ok(*c),
            ClientModel::BernoulliPresence { p, demand } => {
                if rng.random::<f64>() < p.get() {
                    demand.draw_positive(rng)
                } else {
                    Ok(0)
                }
            }
        }
    }

    fn draw_positive<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<u64> {
        match self {
            ClientModel::BernoulliPresence { demand, .. } => demand.draw_positive(rng),
            _ => {
                for _ in 0..POSITIVE_DRAW_BUDGET {
                    let b = self.draw(rng)?;
                    if b >= 1 {
                        return Ok(b);
                    }
                }
                Err(Error::Generation(format!(
                    "no positive demand drawn from {self} in {POSITIVE_DRAW_BUDGET} attempts"
                )))
            }
        }
    }
}

impl fmt::Display for ClientModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClientModel::TruncatedGaussian { mean, sd, lo, hi } => {
                write!(f, "gauss:{mean},{sd},{lo},{hi}")
            }
            ClientModel::Constant(c) => write!(f, "const:{c}"),
            ClientModel::BernoulliPresence { p, demand } => match **demand {
                ref d if *d == ClientModel::default() => write!(f, "bern:{}", p.get()),
                ref d => write!(f, "bern:{},{d}", p.get()),
            },
        }
    }
}

/// Accepts `gauss`, `gauss:MEAN,SD,LO,HI`, `const:K`, `bern:P` and
/// `bern:P,<model>`.
impl FromStr for ClientModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::param(format!("unrecognized client model '{s}'"));
        let model = match s.split_once(':') {
            None if s == "gauss" => ClientModel::default(),
            Some(("gauss", rest)) => {
                let parts: Vec<&str> = rest.split(',').collect();
                let [mean, sd, lo, hi] = parts[..] else {
                    return Err(bad());
                };
                ClientModel::TruncatedGaussian {
                    mean: mean.trim().parse().map_err(|_| bad())?,
                    sd: sd.trim().parse().map_err(|_| bad())?,
                    lo: lo.trim().parse().map_err(|_| bad())?,
                    hi: hi.trim().parse().map_err(|_| bad())?,
                }
            }
            Some(("const", k)) => ClientModel::Constant(k.trim().parse().map_err(|_| bad())?),
            Some(("bern", rest)) => {
                let (p, demand) = match rest.split_once(',') {
                    Some((p, d)) => (p, d.parse()?),
                    None => (rest, ClientModel::default()),
                };
                ClientModel::BernoulliPresence {
                    p: PresenceProb::new(p.trim().parse().map_err(|_| bad())?)?,
                    demand: Box::new(demand),
                }
            }
            _ => return Err(bad()),
        };
        model.validate()?;
        Ok(model)
    }
}

/// Closed interval facility costs are drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostRange {
    pub lo: f64,
    pub hi: f64,
}

impl CostRange {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || lo < 0.0 || hi < lo {
            return Err(Error::param(format!(
                "cost range needs 0 <= lo <= hi (finite), got [{lo}, {hi}]"
            )));
        }
        Ok(CostRange { lo, hi })
    }
}

impl FromStr for CostRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::param(format!("cost range must be LO,HI, got '{s}'"));
        let (lo, hi) = s.split_once(',').ok_or_else(bad)?;
        CostRange::new(
            lo.trim().parse().map_err(|_| bad())?,
            hi.trim().parse().map_err(|_| bad())?,
        )
    }
}

impl fmt::Display for CostRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.lo, self.hi)
    }
}

/// Parameters shared by both point processes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    /// Expected number of locations.
    pub n: usize,
    /// Cluster density scale; the expected cluster size is γ²·ln²n.
    pub gamma: f64,
    /// Cluster radius of the Matérn process.
    pub delta_gen: f64,
    pub clients: ClientModel,
    pub cost_range: CostRange,
    /// Raise every sampled client count to at least one.
    pub min_one: bool,
    /// Seed used by [`generate`]; the `generate_*` functions take an RNG
    /// instead.
    pub seed: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            n: 1000,
            gamma: 2.0,
            delta_gen: 0.2,
            clients: ClientModel::default(),
            cost_range: CostRange { lo: 0.1, hi: 0.3 },
            min_one: false,
            seed: 0,
        }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::param("n must be at least 1"));
        }
        if !(self.gamma >= 1.0) || !self.gamma.is_finite() {
            return Err(Error::param(format!(
                "gamma must be finite and >= 1, got {}",
                self.gamma
            )));
        }
        if !(self.delta_gen >= 0.0) || !self.delta_gen.is_finite() {
            return Err(Error::param(format!(
                "delta_gen must be finite and >= 0, got {}",
                self.delta_gen
            )));
        }
        CostRange::new(self.cost_range.lo, self.cost_range.hi)?;
        self.clients.validate()
    }
}

/// Which point process places the locations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Process {
    Matern,
    Poisson,
}

impl FromStr for Process {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "matern" => Ok(Process::Matern),
            "poisson" => Ok(Process::Poisson),
            _ => Err(Error::param(format!(
                "unknown process '{s}', expected matern or poisson"
            ))),
        }
    }
}

impl fmt::Display for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Process::Matern => "matern",
            Process::Poisson => "poisson",
        })
    }
}

/// Generates an instance from `cfg.seed`.
pub fn generate(process: Process, cfg: &GeneratorConfig) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    generate_with(process, cfg, &mut rng)
}

pub fn generate_with<R: Rng + ?Sized>(
    process: Process,
    cfg: &GeneratorConfig,
    rng: &mut R,
) -> Result<Instance> {
    match process {
        Process::Matern => generate_matern(cfg, rng),
        Process::Poisson => generate_poisson(cfg, rng),
    }
}

/// Rates `(λ_daughter, λ_centers)` of the Matérn process: expected cluster
/// size γ²·ln²n and expected center count n / λ_daughter.
pub fn matern_rates(n: usize, gamma: f64) -> Result<(f64, f64)> {
    if n < 2 {
        return Err(Error::param(
            "the Matérn process needs n >= 2 so that ln n > 0",
        ));
    }
    let ln_n = (n as f64).ln();
    let daughter = gamma * gamma * ln_n * ln_n;
    Ok((daughter, n as f64 / daughter))
}

fn poisson<R: Rng + ?Sized>(lambda: f64, rng: &mut R) -> Result<usize> {
    let dist = Poisson::new(lambda).map_err(|e| Error::param(format!("Poisson({lambda}): {e}")))?;
    Ok(dist.sample(rng) as usize)
}

/// One realization of the Matérn cluster process (possibly empty).
///
/// Centers are uniform on the unit square; each daughter sits at a radius
/// drawn uniformly from [0, δ_gen] and an angle uniform on [0, 2π) around
/// its center. Points lie in [-δ_gen, 1 + δ_gen]².
pub fn sample_matern_points<R: Rng + ?Sized>(
    cfg: &GeneratorConfig,
    rng: &mut R,
) -> Result<Vec<Point>> {
    cfg.validate()?;
    let (lambda_daughter, lambda_centers) = matern_rates(cfg.n, cfg.gamma)?;
    let n_centers = poisson(lambda_centers, rng)?;
    let mut points = Vec::with_capacity(cfg.n + cfg.n / 4);
    for _ in 0..n_centers {
        let center: Point = [rng.random(), rng.random()];
        let n_daughters = poisson(lambda_daughter, rng)?;
        for _ in 0..n_daughters {
            let r = rng.random_range(0.0..=cfg.delta_gen);
            let theta = rng.random_range(0.0..TAU);
            let p = [center[0] + r * theta.cos(), center[1] + r * theta.sin()];
            debug_assert!(
                (p[0] - center[0]).hypot(p[1] - center[1]) <= cfg.delta_gen * (1.0 + 1e-12)
            );
            points.push(p);
        }
    }
    Ok(points)
}

/// One realization of the homogeneous Poisson process of intensity `n` on
/// the unit square (possibly empty).
pub fn sample_poisson_points<R: Rng + ?Sized>(
    cfg: &GeneratorConfig,
    rng: &mut R,
) -> Result<Vec<Point>> {
    cfg.validate()?;
    let count = poisson(cfg.n as f64, rng)?;
    Ok((0..count).map(|_| [rng.random(), rng.random()]).collect())
}

pub fn generate_matern<R: Rng + ?Sized>(cfg: &GeneratorConfig, rng: &mut R) -> Result<Instance> {
    let points = retry_nonempty(|| sample_matern_points(cfg, rng))?;
    attach(cfg, points, rng)
}

pub fn generate_poisson<R: Rng + ?Sized>(cfg: &GeneratorConfig, rng: &mut R) -> Result<Instance> {
    let points = retry_nonempty(|| sample_poisson_points(cfg, rng))?;
    attach(cfg, points, rng)
}

fn retry_nonempty(mut sample: impl FnMut() -> Result<Vec<Point>>) -> Result<Vec<Point>> {
    for _ in 0..EMPTY_RETRY_BUDGET {
        let points = sample()?;
        if !points.is_empty() {
            return Ok(points);
        }
    }
    Err(Error::Generation(format!(
        "no locations realized in {EMPTY_RETRY_BUDGET} attempts"
    )))
}

fn attach<R: Rng + ?Sized>(
    cfg: &GeneratorConfig,
    points: Vec<Point>,
    rng: &mut R,
) -> Result<Instance> {
    let n = points.len();
    let costs = sample_facility_costs(n, cfg.cost_range, rng)?;
    let mut clients = sample_clients(n, &cfg.clients, rng)?;
    if cfg.min_one {
        clients.iter_mut().for_each(|b| *b = (*b).max(1));
    }
    Instance::new(MetricSpace::from_points(points)?, costs, clients)
}

/// Draws `count` client counts from `model`.
pub fn sample_clients<R: Rng + ?Sized>(
    count: usize,
    model: &ClientModel,
    rng: &mut R,
) -> Result<Vec<u64>> {
    model.validate()?;
    (0..count).map(|_| model.draw(rng)).collect()
}

/// Draws `count` facility costs i.i.d. uniform on the closed range.
pub fn sample_facility_costs<R: Rng + ?Sized>(
    count: usize,
    range: CostRange,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let CostRange { lo, hi } = CostRange::new(range.lo, range.hi)?;
    Ok((0..count).map(|_| rng.random_range(lo..=hi)).collect())
}

/// Per-location neighbourhood sizes against the threshold γ²·ln²n.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub delta: f64,
    pub gamma: f64,
    pub threshold: f64,
    pub ball_sizes: Vec<usize>,
    pub satisfied: Vec<bool>,
    /// Share of locations meeting the threshold.
    pub fraction: f64,
}

impl DensityReport {
    pub fn all_satisfied(&self) -> bool {
        self.satisfied.iter().all(|&s| s)
    }
}

/// Checks `|B(v, δ)| >= γ²·ln²n` for every location. Advisory: no solver
/// requires it.
pub fn density_check(inst: &Instance, delta: f64, gamma: f64) -> Result<DensityReport> {
    if !(delta >= 0.0) {
        return Err(Error::param(format!("delta must be >= 0, got {delta}")));
    }
    if !(gamma >= 1.0) || !gamma.is_finite() {
        return Err(Error::param(format!(
            "gamma must be finite and >= 1, got {gamma}"
        )));
    }
    let n = inst.len();
    let ln_n = (n as f64).ln();
    let threshold = gamma * gamma * ln_n * ln_n;
    let metric = inst.metric();
    let ball_sizes = Exec::default().map_range(n, |v| metric.ball_size(v, delta));
    let satisfied: Vec<bool> = ball_sizes.iter().map(|&s| s as f64 >= threshold).collect();
    let fraction = satisfied.iter().filter(|&&s| s).count() as f64 / n as f64;
    Ok(DensityReport {
        delta,
        gamma,
        threshold,
        ball_sizes,
        satisfied,
        fraction,
    })
}
