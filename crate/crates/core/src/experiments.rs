// Copyright 2026 The coherent-qubits Authors
// SPDX-License-Identifier: Apache-2.0

//! Reproducible sweeps that print CSV, and the validation report.
//!
//! A run is described by a [`RunConfig`], read from `key = value` lines and
//! overridden key by key. Monte Carlo trial `t` at grid point `p` draws from
//! [`trial_rng`]`(seed, p, t)`, a ChaCha8 stream keyed by the seed with
//! stream id `p` and word offset `t·2³²`, so adding trials never changes the
//! earlier ones.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::algebra::CoherentKet;
use crate::code::{end_to_end, general_code_success, CodeParams, HadamardModel, Restoration};
use crate::encoding::{make_qubit, Encoding, QubitSpec};
use crate::error::{Error, Result};
use crate::loss::{error_prob, transmit, ChannelParams, DEFAULT_LAMBDA};
use crate::oracle::Check;
use crate::protocols::{
    hadamard_report, restore_success_prob, teleport_success_prob, HadamardOptions,
};
use crate::{invariants, oracle};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Tolerance of the oracle comparisons in the validation report.
pub const ORACLE_TOLERANCE: f64 = 1e-8;

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

/// Inclusive grid `start:stop:step`; a single number is a one-point grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub fn single(value: f64) -> Self {
        Self {
            start: value,
            stop: value,
            step: 1.0,
        }
    }

    /// Grid values rounded to nine decimals so that printed values stay short.
    pub fn points(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|k| ((self.start + k as f64 * self.step) * 1e9).round() / 1e9)
            .collect()
    }

    /// Accepts grids inside `range`, described to the user as `bounds`.
    fn check(&self, name: &str, range: impl Fn(f64) -> bool, bounds: &str) -> Result<()> {
        let ok =
            self.step > 0.0 && self.start <= self.stop && range(self.start) && range(self.stop);
        if ok {
            Ok(())
        } else {
            Err(invalid(format!(
                "{name} grid {self} needs {bounds}, start ≤ stop and step > 0"
            )))
        }
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.start == self.stop {
            write!(f, "{}", self.start)
        } else {
            write!(f, "{}:{}:{}", self.start, self.stop, self.step)
        }
    }
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let nums: Vec<f64> = s
            .split(':')
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| invalid(format!("bad grid `{s}`")))
            })
            .collect::<Result<_>>()?;
        match nums[..] {
            [v] => Ok(Grid::single(v)),
            [start, stop, step] => Ok(Grid { start, stop, step }),
            _ => Err(invalid(format!("grid `{s}` is not start:stop:step"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    TeleportSweep,
    HadamardSweep,
    LossSweep,
    Ecc,
    Validate,
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Experiment::TeleportSweep => "teleport-sweep",
            Experiment::HadamardSweep => "hadamard-sweep",
            Experiment::LossSweep => "loss-sweep",
            Experiment::Ecc => "ecc",
            Experiment::Validate => "validate",
        })
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "teleport-sweep" => Ok(Experiment::TeleportSweep),
            "hadamard-sweep" => Ok(Experiment::HadamardSweep),
            "loss-sweep" => Ok(Experiment::LossSweep),
            "ecc" => Ok(Experiment::Ecc),
            "validate" => Ok(Experiment::Validate),
            other => Err(invalid(format!("unknown experiment `{other}`"))),
        }
    }
}

fn parse_complex(s: &str) -> Result<C64> {
    let nums: Vec<f64> = s
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| invalid(format!("bad complex number `{s}`")))
        })
        .collect::<Result<_>>()?;
    match nums[..] {
        [re] => Ok(C64::new(re, 0.0)),
        [re, im] => Ok(C64::new(re, im)),
        _ => Err(invalid(format!("complex number `{s}` is not re,im"))),
    }
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| invalid(format!("bad value `{value}` for `{key}`")))
}

/// Every parameter of a run. Unset options take the experiment's default.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub alpha: Option<Grid>,
    pub mu: Option<C64>,
    pub nu: Option<C64>,
    pub encoding: Encoding,
    pub lambda: f64,
    pub length: Option<Grid>,
    pub eta: Option<Grid>,
    pub pe: Option<Grid>,
    pub n: usize,
    pub seed: Option<u64>,
    pub trials: usize,
    pub fidelity_target: f64,
    pub restoration: Restoration,
    pub hadamard: HadamardModel,
    pub out: Option<String>,
}

/// Keys accepted by [`RunConfig::set`].
pub const KEYS: [&str; 16] = [
    "experiment",
    "alpha",
    "mu",
    "nu",
    "encoding",
    "lambda",
    "length",
    "eta",
    "pe",
    "n",
    "seed",
    "trials",
    "fidelity_target",
    "restoration",
    "hadamard",
    "out",
];

impl RunConfig {
    pub fn new(experiment: Experiment) -> Self {
        Self {
            experiment,
            alpha: None,
            mu: None,
            nu: None,
            encoding: Encoding::Pm,
            lambda: DEFAULT_LAMBDA,
            length: None,
            eta: None,
            pe: None,
            n: 1,
            seed: None,
            trials: 1000,
            fidelity_target: 0.99,
            restoration: Restoration::Off,
            hadamard: HadamardModel::Ideal,
            out: None,
        }
    }

    /// Reads `key = value` lines; `#` starts a comment.
    pub fn parse(experiment: Experiment, text: &str) -> Result<Self> {
        let mut cfg = Self::new(experiment);
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| invalid(format!("line {}: expected `key = value`", k + 1)))?;
            cfg.set(key.trim(), value.trim()).map_err(|e| match e {
                Error::InvalidParameter(m) => invalid(format!("line {}: {m}", k + 1)),
                other => other,
            })?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key.replace('-', "_").as_str() {
            "experiment" => {
                let e: Experiment = value.parse()?;
                if e != self.experiment {
                    return Err(invalid(format!(
                        "config is for `{e}`, not `{}`",
                        self.experiment
                    )));
                }
            }
            "alpha" => self.alpha = Some(value.parse()?),
            "mu" => self.mu = Some(parse_complex(value)?),
            "nu" => self.nu = Some(parse_complex(value)?),
            "encoding" => self.encoding = value.parse()?,
            "lambda" => self.lambda = parse_num(key, value)?,
            "length" => self.length = Some(value.parse()?),
            "eta" => self.eta = Some(value.parse()?),
            "pe" => self.pe = Some(value.parse()?),
            "n" => self.n = parse_num(key, value)?,
            "seed" => self.seed = Some(parse_num(key, value)?),
            "trials" => self.trials = parse_num(key, value)?,
            "fidelity_target" => self.fidelity_target = parse_num(key, value)?,
            "restoration" => {
                self.restoration = match value {
                    "off" => Restoration::Off,
                    "after" => Restoration::AfterDecoding,
                    "before" => Restoration::BeforeDecoding,
                    _ => {
                        return Err(invalid(format!(
                            "restoration `{value}` is not off, after or before"
                        )))
                    }
                }
            }
            "hadamard" => {
                self.hadamard = match value {
                    "ideal" => HadamardModel::Ideal,
                    "physical" => HadamardModel::Physical,
                    _ => {
                        return Err(invalid(format!(
                            "hadamard `{value}` is not ideal or physical"
                        )))
                    }
                }
            }
            "out" => self.out = Some(value.to_string()),
            _ => return Err(invalid(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    pub fn alpha_grid(&self) -> Grid {
        self.alpha.unwrap_or(match self.experiment {
            Experiment::TeleportSweep => Grid {
                start: 0.2,
                stop: 4.0,
                step: 0.1,
            },
            Experiment::HadamardSweep => Grid {
                start: 0.2,
                stop: 6.0,
                step: 0.1,
            },
            _ => Grid::single(2.0),
        })
    }

    /// `(μ, ν)` before normalization.
    pub fn logical(&self) -> (C64, C64) {
        let (mu, nu) = match self.experiment {
            Experiment::HadamardSweep => (C64::new(0.0, 0.0), C64::new(1.0, 0.0)),
            Experiment::Ecc => (C64::new(1.0, 0.0), C64::new(0.0, 0.0)),
            _ => (C64::new(FRAC_1_SQRT_2, 0.0), C64::new(FRAC_1_SQRT_2, 0.0)),
        };
        (self.mu.unwrap_or(mu), self.nu.unwrap_or(nu))
    }

    pub fn pe_grid(&self) -> Grid {
        self.pe.unwrap_or(Grid {
            start: 0.0,
            stop: 0.5,
            step: 0.05,
        })
    }

    /// `(λL, η)` pairs of the loss sweep.
    pub fn loss_points(&self) -> Vec<(f64, f64)> {
        match self.eta {
            Some(g) => g
                .points()
                .into_iter()
                .map(|eta| (-eta.ln() + 0.0, eta))
                .collect(),
            None => {
                let g = self.length.unwrap_or(Grid {
                    start: 0.0,
                    stop: 20.0,
                    step: 0.5,
                });
                g.points()
                    .into_iter()
                    .map(|l| {
                        let ll = ((self.lambda * l) * 1e12).round() / 1e12;
                        (ll, (-ll).exp())
                    })
                    .collect()
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.alpha_grid()
            .check("alpha", |a| a > 0.0 && a <= 50.0, "0 < alpha ≤ 50")?;
        let (mu, nu) = self.logical();
        if mu.norm_sqr() + nu.norm_sqr() == 0.0 || !(mu.norm_sqr() + nu.norm_sqr()).is_finite() {
            return Err(invalid("mu and nu must not both vanish"));
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(invalid("lambda must be non-negative"));
        }
        if self.length.is_some() && self.eta.is_some() {
            return Err(invalid("length and eta are mutually exclusive"));
        }
        if let Some(g) = self.length {
            g.check(
                "length",
                |l| (0.0..f64::INFINITY).contains(&l),
                "finite length ≥ 0",
            )?;
        }
        if let Some(g) = self.eta {
            g.check("eta", |e| e > 0.0 && e <= 1.0, "0 < eta ≤ 1")?;
        }
        if let Some(g) = self.pe {
            g.check("pe", |p| (0.0..=1.0).contains(&p), "0 ≤ pe ≤ 1")?;
        }
        if self.n == 0 {
            return Err(invalid("n must be at least 1"));
        }
        if self.trials == 0 {
            return Err(invalid("trials must be at least 1"));
        }
        if !(self.fidelity_target > 0.0 && self.fidelity_target <= 1.0) {
            return Err(invalid("fidelity_target must lie in (0, 1]"));
        }
        if self.experiment == Experiment::Ecc && self.seed.is_none() {
            return Err(invalid("ecc needs a seed"));
        }
        Ok(())
    }

    /// One `key = value` line per field; the config hash is taken over this.
    pub fn canonical(&self) -> String {
        let opt = |v: Option<String>| v.unwrap_or_else(|| "default".into());
        let c = |z: C64| format!("{},{}", z.re, z.im);
        let restoration = match self.restoration {
            Restoration::Off => "off",
            Restoration::AfterDecoding => "after",
            Restoration::BeforeDecoding => "before",
        };
        let hadamard = match self.hadamard {
            HadamardModel::Ideal => "ideal",
            HadamardModel::Physical => "physical",
        };
        let values = [
            self.experiment.to_string(),
            opt(self.alpha.map(|g| g.to_string())),
            opt(self.mu.map(c)),
            opt(self.nu.map(c)),
            self.encoding.to_string(),
            self.lambda.to_string(),
            opt(self.length.map(|g| g.to_string())),
            opt(self.eta.map(|g| g.to_string())),
            opt(self.pe.map(|g| g.to_string())),
            self.n.to_string(),
            opt(self.seed.map(|s| s.to_string())),
            self.trials.to_string(),
            self.fidelity_target.to_string(),
            restoration.into(),
            hadamard.into(),
            opt(self.out.clone()),
        ];
        KEYS.iter()
            .zip(values)
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }

    pub fn sha256(&self) -> String {
        Sha256::digest(self.canonical().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    fn header(&self) -> String {
        let seed = self
            .seed
            .map_or_else(|| "none".to_string(), |s| s.to_string());
        format!(
            "# coherent-qubits {VERSION}\n# experiment: {}\n# config-sha256: {}\n# seed: {seed}\n",
            self.experiment,
            self.sha256()
        )
    }
}

/// Random stream of trial `trial` at grid point `point`.
pub fn trial_rng(seed: u64, point: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(point);
    rng.set_word_pos(u128::from(trial) << 32);
    rng
}

/// Rendered output of a run.
#[derive(Clone, Debug, PartialEq)]
pub struct Output {
    pub text: String,
    /// False only for a validation run with a failing check.
    pub passed: bool,
}

pub fn run(cfg: &RunConfig) -> Result<Output> {
    cfg.validate()?;
    let mut text = cfg.header();
    let mut passed = true;
    match cfg.experiment {
        Experiment::TeleportSweep => teleport_sweep(cfg, &mut text)?,
        Experiment::HadamardSweep => hadamard_sweep(cfg, &mut text)?,
        Experiment::LossSweep => loss_sweep(cfg, &mut text)?,
        Experiment::Ecc => ecc(cfg, &mut text)?,
        Experiment::Validate => {
            let checks = validation_checks()?;
            let failed = checks.iter().filter(|c| !c.passed()).count();
            for c in &checks {
                writeln!(text, "{c}").unwrap();
            }
            writeln!(text, "{} checks, {failed} failed", checks.len()).unwrap();
            passed = failed == 0;
        }
    }
    Ok(Output { text, passed })
}

/// The oracle comparisons followed by the invariant checks.
pub fn validation_checks() -> Result<Vec<Check>> {
    let mut checks = oracle::standard_suite(ORACLE_TOLERANCE)?;
    checks.extend(invariants::suite()?);
    Ok(checks)
}

/// `P(n₁ = n₂ = 0)` for the PM flow with unnormalized qubit and Bell pair.
fn unnormalized_failure(alpha: f64, mu: C64, nu: C64) -> f64 {
    let a = C64::new(alpha, 0.0);
    let q = CoherentKet::from_pairs(1, [(mu, vec![-a]), (nu, vec![a])]);
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let bell = CoherentKet::from_pairs(2, [(h, vec![-a, -a]), (h, vec![a, a])]);
    q.tensor(&bell)
        .beam_splitter(1, 0, FRAC_PI_4)
        .project_vacuum(&[0, 1])
        .norm_sqr()
}

fn normalized_logical(cfg: &RunConfig) -> (C64, C64) {
    let (mu, nu) = cfg.logical();
    let n = (mu.norm_sqr() + nu.norm_sqr()).sqrt();
    (mu / n, nu / n)
}

fn teleport_sweep(cfg: &RunConfig, text: &mut String) -> Result<()> {
    let (mu, nu) = normalized_logical(cfg);
    let rows: Vec<(f64, f64, f64, f64)> = cfg
        .alpha_grid()
        .points()
        .into_par_iter()
        .map(|a| {
            let pm = teleport_success_prob(a, mu, nu, Encoding::Pm)?;
            let za = teleport_success_prob(a, mu, nu, Encoding::ZeroAlpha)?;
            let unnormalized = 1.0 - unnormalized_failure(a, mu, nu);
            Ok((a, pm, za, unnormalized))
        })
        .collect::<Result<_>>()?;
    let (worst_alpha, worst) = rows
        .iter()
        .map(|r| (r.0, (r.3 - r.1).abs()))
        .fold((0.0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
    if worst > 1e-6 {
        writeln!(
            text,
            "# unnormalized states change p_success by up to {worst:.3e} (alpha = {worst_alpha})"
        )
        .unwrap();
    }
    writeln!(text, "alpha,p_success_pm,p_success_zeroalpha,p_fail").unwrap();
    for (a, pm, za, _) in rows {
        writeln!(text, "{a},{pm},{za},{}", 1.0 - pm).unwrap();
    }
    Ok(())
}

fn hadamard_sweep(cfg: &RunConfig, text: &mut String) -> Result<()> {
    let (mu, nu) = cfg.logical();
    let opts = HadamardOptions {
        target_fidelity: cfg.fidelity_target,
        ..HadamardOptions::default()
    };
    let rows: Vec<(f64, f64, f64)> = cfg
        .alpha_grid()
        .points()
        .into_par_iter()
        .map(|a| {
            let spec = QubitSpec::normalized(mu, nu, a, Encoding::ZeroAlpha)?;
            let r = hadamard_report(&spec, &opts)?;
            Ok((a, r.average_fidelity, r.accepted_probability))
        })
        .collect::<Result<_>>()?;
    writeln!(text, "alpha,avg_fidelity,postselect_success_at_target").unwrap();
    for (a, f, p) in rows {
        writeln!(text, "{a},{f},{p}").unwrap();
    }
    Ok(())
}

fn loss_sweep(cfg: &RunConfig, text: &mut String) -> Result<()> {
    let (mu, nu) = cfg.logical();
    let grid = cfg.alpha_grid();
    if grid.start != grid.stop {
        return Err(invalid("loss-sweep takes a single alpha"));
    }
    let alpha = grid.start;
    let q = make_qubit(&QubitSpec::normalized(mu, nu, alpha, Encoding::Pm)?)?;
    let rows: Vec<String> = cfg
        .loss_points()
        .into_par_iter()
        .map(|(ll, eta)| {
            let (s, _) = transmit(&q, 0, &ChannelParams::from_eta(eta)?);
            let surviving = alpha * eta.sqrt();
            let p = restore_success_prob(&s, 0, surviving, alpha)?;
            Ok(format!(
                "{ll},{eta},{surviving},{p},{}",
                error_prob(alpha, eta)
            ))
        })
        .collect::<Result<_>>()?;
    writeln!(text, "lambdaL,eta,surviving_alpha,p_success,p_e").unwrap();
    for r in rows {
        writeln!(text, "{r}").unwrap();
    }
    Ok(())
}

/// Transmissivity at which a single mode of amplitude `alpha` suffers phase
/// flips with probability `pe`, if one exists.
pub fn eta_for_error_prob(alpha: f64, pe: f64) -> Option<f64> {
    let eta = 1.0 + (1.0 - 2.0 * pe).ln() / (2.0 * alpha * alpha);
    (pe >= 0.0 && pe < 0.5 && (0.0..=1.0).contains(&eta)).then_some(eta)
}

/// Mean, standard error and mean undetected weight of `trials` end-to-end
/// runs at one grid point.
pub fn ecc_point(
    spec: &QubitSpec,
    params: &CodeParams,
    eta: f64,
    restoration: Restoration,
    seed: u64,
    point: u64,
    trials: usize,
) -> Result<(f64, f64, f64)> {
    let channel = ChannelParams::from_eta(eta)?;
    let runs: Vec<(f64, f64)> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, point, t);
            let r = end_to_end(spec, params, &channel, restoration, &mut rng)?;
            let missed = r.syndrome.as_ref().map_or(0.0, |s| s.undetected_weight);
            Ok((r.fidelity, missed))
        })
        .collect::<Result<_>>()?;
    let n = runs.len() as f64;
    let mean = runs.iter().map(|r| r.0).sum::<f64>() / n;
    let var = if runs.len() > 1 {
        runs.iter().map(|r| (r.0 - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let missed = runs.iter().map(|r| r.1).sum::<f64>() / n;
    Ok((mean, (var / n).sqrt(), missed))
}

fn ecc(cfg: &RunConfig, text: &mut String) -> Result<()> {
    let grid = cfg.alpha_grid();
    if grid.start != grid.stop {
        return Err(invalid("ecc takes a single alpha"));
    }
    let alpha = grid.start;
    let (mu, nu) = cfg.logical();
    let spec = QubitSpec::normalized(mu, nu, alpha, cfg.encoding)?;
    let params = CodeParams::new(cfg.n, alpha)?.with_hadamard(cfg.hadamard);
    let seed = cfg.seed.expect("validated");
    writeln!(
        text,
        "pe,n,ps_analytic,ps_montecarlo,stderr,undetected_rate"
    )
    .unwrap();
    for (point, pe) in cfg.pe_grid().points().into_iter().enumerate() {
        let analytic = general_code_success(cfg.n, pe);
        let (mc, se, missed) = match eta_for_error_prob(alpha, pe) {
            Some(eta) => ecc_point(
                &spec,
                &params,
                eta,
                cfg.restoration,
                seed,
                point as u64,
                cfg.trials,
            )?,
            None => (f64::NAN, f64::NAN, f64::NAN),
        };
        writeln!(text, "{pe},{},{analytic},{mc},{se},{missed}", cfg.n).unwrap();
    }
    Ok(())
}
