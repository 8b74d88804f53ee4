// Copyright 2026 The coherent-qubits Authors
// SPDX-License-Identifier: Apache-2.0

//! Fiber loss as a beam splitter onto a vacuum environment mode.
//!
//! The environment is kept as an extra mode of the pure state until
//! something needs it traced out.

use num_complex::Complex64 as C64;

use crate::algebra::{CoherentDensity, CoherentKet};
use crate::encoding::{make_qubit, QubitSpec};
use crate::error::{Error, Result};

/// Typical telecom fiber loss, per kilometre.
pub const DEFAULT_LAMBDA: f64 = 0.06;

/// Loss coefficient `λ`, length `L` and transmissivity `η = e^{−λL}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelParams {
    lambda: f64,
    length: f64,
    eta: f64,
}

impl ChannelParams {
    pub fn from_fiber(lambda: f64, length: f64) -> Result<Self> {
        if !(lambda >= 0.0 && length >= 0.0 && lambda.is_finite() && length.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "lambda and length must be non-negative, got {lambda} and {length}"
            )));
        }
        Ok(Self {
            lambda,
            length,
            eta: (-lambda * length).exp(),
        })
    }

    /// Direct transmissivity; `λ` is set to the default and `L` derived.
    pub fn from_eta(eta: f64) -> Result<Self> {
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "eta must lie in (0, 1], got {eta}"
            )));
        }
        Ok(Self {
            lambda: DEFAULT_LAMBDA,
            length: -eta.ln() / DEFAULT_LAMBDA,
            eta,
        })
    }

    pub fn lossless() -> Self {
        Self {
            lambda: DEFAULT_LAMBDA,
            length: 0.0,
            eta: 1.0,
        }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn lambda_l(&self) -> f64 {
        self.lambda * self.length
    }

    /// Beam-splitter angle with `cos²θ = η`.
    pub fn theta(&self) -> f64 {
        self.eta.sqrt().acos()
    }
}

/// `P_e = ½(1 − e^{−2(1−η)α²})`.
pub fn error_prob(alpha: f64, eta: f64) -> f64 {
    0.5 * (1.0 - (-2.0 * (1.0 - eta) * alpha * alpha).exp())
}

/// Sends `mode` through the channel; returns the state with the new
/// environment mode appended and that mode's index.
pub fn transmit(state: &CoherentKet, mode: usize, params: &ChannelParams) -> (CoherentKet, usize) {
    let env = state.modes();
    let out = state
        .with_vacuum_mode()
        .beam_splitter(mode, env, params.theta());
    (out, env)
}

/// Applies [`transmit`] to each listed mode in turn.
pub fn multi_mode_transmit(
    state: &CoherentKet,
    modes: &[usize],
    params: &ChannelParams,
) -> (CoherentKet, Vec<usize>) {
    let mut s = state.clone();
    let mut envs = Vec::with_capacity(modes.len());
    for &m in modes {
        let (next, e) = transmit(&s, m, params);
        s = next;
        envs.push(e);
    }
    (s, envs)
}

/// The traced channel output as a two-branch Z-error mixture.
///
/// `pe` is the channel's flip probability: the weight of the flipped branch
/// when both branches carry the unnormalized form `μ|0_L⟩ ± ν|1_L⟩`. The
/// `p_no_error`/`p_z_error` fields are the weights of the normalized branch
/// states; they differ from `1 − pe`, `pe` by terms of order `e^{−2ηα²}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZErrorMixture {
    pub pe: f64,
    pub p_no_error: f64,
    pub p_z_error: f64,
    pub surviving_alpha: f64,
}

/// Closed-form mixture for a qubit sent through a channel of transmissivity
/// `eta`, with the two normalized branch states `Q(α√η)` and `Z Q(α√η)`.
pub fn channel_mixture(
    spec: &QubitSpec,
    eta: f64,
) -> Result<(ZErrorMixture, CoherentKet, CoherentKet)> {
    let a = spec.alpha * eta.sqrt();
    let pe = error_prob(spec.alpha, eta);
    let kept = spec.with_alpha(a);
    let flipped = kept.z();
    let n_in = spec.norm_factor().value;
    let mix = ZErrorMixture {
        pe,
        p_no_error: (1.0 - pe) * kept.norm_factor().value / n_in,
        p_z_error: pe * flipped.norm_factor().value / n_in,
        surviving_alpha: a,
    };
    Ok((mix, make_qubit(&kept)?, make_qubit(&flipped)?))
}

/// Density of the channel output assembled from [`channel_mixture`].
pub fn mixture_density(spec: &QubitSpec, eta: f64) -> Result<CoherentDensity> {
    let (mix, q, zq) = channel_mixture(spec, eta)?;
    Ok(CoherentDensity::mixture(&[
        (mix.p_no_error, CoherentDensity::pure(&q)),
        (mix.p_z_error, CoherentDensity::pure(&zq)),
    ]))
}

/// `1 − |⟨lhs|rhs⟩|²` between the transmitted ZeroAlpha qubit and the
/// transmitted PM qubit after displacing its qubit mode by `α√η` and its
/// environment by `α√(1−η)`.
pub fn encoding_equivalence_witness(alpha: f64, eta: f64, mu: C64, nu: C64) -> Result<f64> {
    use crate::encoding::Encoding;
    let params = ChannelParams::from_eta(eta)?;
    let pm = make_qubit(&QubitSpec::normalized(mu, nu, alpha, Encoding::Pm)?)?;
    let za = make_qubit(&QubitSpec::normalized(mu, nu, alpha, Encoding::ZeroAlpha)?)?;
    let (pm_out, env) = transmit(&pm, 0, &params);
    let lhs = pm_out
        .displace(0, C64::new(alpha * eta.sqrt(), 0.0))
        .displace(env, C64::new(alpha * (1.0 - eta).sqrt(), 0.0));
    let (rhs, _) = transmit(&za, 0, &params);
    Ok(1.0 - lhs.inner(&rhs).norm_sqr())
}
