// Copyright 2026 The coherent-qubits Authors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64 as C64;
use rand::Rng;

use super::record::{Correction, FailureReason, OutcomeRecord, Status};
use super::{make_bell, BellSpec, HALF};
use crate::algebra::CoherentKet;
use crate::encoding::{logical_x, make_qubit, z_nearest, Encoding, QubitSpec, SPAN_TOL};
use crate::error::{Error, Result};

/// Which Pauli corrections teleportation applies itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PauliHandling {
    Apply,
    /// Apply `X` but leave `Z` pending.
    SkipZ,
    /// Leave both pending.
    Defer,
}

/// Outcome of one teleportation attempt.
#[derive(Clone, Debug)]
pub struct Teleported {
    pub record: OutcomeRecord,
    /// The input's mode index now holds the teleported qubit.
    pub output: Option<CoherentKet>,
    /// An `X` was called for but not applied.
    pub pending_x: bool,
    /// A `Z` was called for but not applied.
    pub pending_z: bool,
}

/// A two-mode resource for teleportation. Mode 0 is interfered with the
/// qubit, mode 1 carries the output.
#[derive(Clone, Debug)]
pub struct TeleportResource {
    pub state: CoherentKet,
    pub encoding: Encoding,
    /// Logical amplitude the incoming qubit should carry.
    pub input_alpha: f64,
    /// Logical amplitude of the output mode.
    pub output_alpha: f64,
}

impl TeleportResource {
    pub fn from_bell(spec: &BellSpec) -> Result<Self> {
        Ok(Self {
            state: make_bell(spec)?,
            encoding: spec.encoding(),
            input_alpha: spec.input_alpha(),
            output_alpha: spec.output_alpha(),
        })
    }

    fn mismatched(&self, state: &CoherentKet, mode: usize) -> bool {
        let (zero, one) = self.encoding.logical_amplitudes(self.input_alpha);
        state
            .distinct_amplitudes(mode)
            .iter()
            .any(|a| (a - zero).norm() > SPAN_TOL && (a - one).norm() > SPAN_TOL)
    }

    /// Displacement applied to the qubit port in the ZeroAlpha flow when the
    /// resource port counts zero.
    fn zero_alpha_shift(&self) -> C64 {
        C64::new(-std::f64::consts::SQRT_2 * self.input_alpha, 0.0)
    }
}

fn failed(mut record: OutcomeRecord, reason: FailureReason) -> Teleported {
    record.status = Status::Failure(reason);
    Teleported {
        record,
        output: None,
        pending_x: false,
        pending_z: false,
    }
}

/// Teleports `mode` of `state` through `resource`. The output replaces the
/// input at the same mode index.
///
/// The resource port and the qubit enter a 50/50 splitter; `n1` counts the
/// qubit port and `n2` the resource port.
pub fn teleport_through<R: Rng + ?Sized>(
    state: &CoherentKet,
    mode: usize,
    resource: &TeleportResource,
    paulis: PauliHandling,
    rng: &mut R,
) -> Result<Teleported> {
    let m = state.modes();
    let port = m;
    let mut record = OutcomeRecord::new();
    record.amplitude_mismatch = resource.mismatched(state, mode);
    let full = state
        .tensor(&resource.state)
        .beam_splitter(port, mode, HALF);

    let (rest, flip, odd) = match resource.encoding {
        Encoding::Pm => {
            let (n1, _, s) = full.measure_photon_count(mode, rng)?;
            let (n2, _, s) = s.measure_photon_count(port - 1, rng)?;
            record.push_count("n1", n1);
            record.push_count("n2", n2);
            match (n1 > 0, n2 > 0) {
                (false, false) => return Ok(failed(record, FailureReason::BothZero)),
                (true, true) => return Ok(failed(record, FailureReason::Uncorrectable)),
                _ => (s, n2 > 0, (n1 + n2) % 2 == 1),
            }
        }
        Encoding::ZeroAlpha => {
            let (n2, _, s) = full.measure_photon_count(port, rng)?;
            if n2 > 0 {
                // with matched amplitudes the qubit port is left in a
                // product coherent state and carries no information
                let s = if s.distinct_amplitudes(mode).len() == 1 {
                    s.drop_mode_raw(mode)
                } else {
                    let (n1, _, s) = s.measure_photon_count(mode, rng)?;
                    record.push_count("n1", n1);
                    s
                };
                record.push_count("n2", n2);
                (s, true, n2 % 2 == 1)
            } else {
                let shift = resource.zero_alpha_shift();
                record.corrections.push(Correction::Displace(shift));
                let (n1, _, s) = s.displace(mode, shift).measure_photon_count(mode, rng)?;
                record.push_count("n1", n1);
                record.push_count("n2", n2);
                if n1 == 0 {
                    return Ok(failed(record, FailureReason::BothZero));
                }
                (s, false, n1 % 2 == 1)
            }
        }
    };

    let alpha = resource.output_alpha;
    let mut out = rest.move_mode(m - 1, mode);
    let pending_x = flip && paulis == PauliHandling::Defer;
    if flip && !pending_x {
        out = logical_x(&out, mode, resource.encoding, alpha);
        record.corrections.push(Correction::X);
    }
    let pending_z = odd && paulis != PauliHandling::Apply;
    if odd && !pending_z {
        let (zero, one) = resource.encoding.logical_amplitudes(alpha);
        out = z_nearest(&out, mode, zero, one);
        record.corrections.push(Correction::Z);
    }
    Ok(Teleported {
        record,
        output: Some(out),
        pending_x,
        pending_z,
    })
}

/// Teleports `mode` of `state` through a Bell resource.
pub fn teleport<R: Rng + ?Sized>(
    state: &CoherentKet,
    mode: usize,
    bell: &BellSpec,
    encoding: Encoding,
    rng: &mut R,
) -> Result<Teleported> {
    if bell.encoding() != encoding {
        return Err(Error::InvalidParameter(format!(
            "{bell:?} cannot teleport a {encoding} qubit"
        )));
    }
    teleport_through(
        state,
        mode,
        &TeleportResource::from_bell(bell)?,
        PauliHandling::Apply,
        rng,
    )
}

/// Exact probability that both detectors read zero.
pub fn teleport_failure_prob(state: &CoherentKet, mode: usize, resource: &TeleportResource) -> f64 {
    let port = state.modes();
    let mut full = state
        .tensor(&resource.state)
        .beam_splitter(port, mode, HALF);
    if resource.encoding == Encoding::ZeroAlpha {
        full = full.displace(mode, resource.zero_alpha_shift());
    }
    full.project_vacuum(&[mode, port]).norm_sqr() / full.norm_sqr()
}

/// `P_s = 1 − P(n1 = n2 = 0)` for the qubit `(μ, ν)` at `α`.
pub fn teleport_success_prob(alpha: f64, mu: C64, nu: C64, encoding: Encoding) -> Result<f64> {
    let q = make_qubit(&QubitSpec::normalized(mu, nu, alpha, encoding)?)?;
    let bell = match encoding {
        Encoding::Pm => BellSpec::Symmetric(alpha),
        Encoding::ZeroAlpha => BellSpec::ZeroAlpha(alpha),
    };
    Ok(1.0 - teleport_failure_prob(&q, 0, &TeleportResource::from_bell(&bell)?))
}

/// Teleports a PM qubit at amplitude `beta` onto amplitude `alpha`.
pub fn restore_amplitude<R: Rng + ?Sized>(
    state: &CoherentKet,
    mode: usize,
    beta: f64,
    alpha: f64,
    rng: &mut R,
) -> Result<Teleported> {
    let res = TeleportResource::from_bell(&BellSpec::AmplitudeMatched { beta, alpha })?;
    teleport_through(state, mode, &res, PauliHandling::Apply, rng)
}

/// Exact success probability of [`restore_amplitude`]; `state` may carry
/// extra modes such as loss environments.
pub fn restore_success_prob(
    state: &CoherentKet,
    mode: usize,
    beta: f64,
    alpha: f64,
) -> Result<f64> {
    let res = TeleportResource::from_bell(&BellSpec::AmplitudeMatched { beta, alpha })?;
    Ok(1.0 - teleport_failure_prob(state, mode, &res))
}

/// Result of [`apply_z_by_reteleport`].
#[derive(Clone, Debug)]
pub struct Reteleported {
    pub attempts: Vec<OutcomeRecord>,
    pub status: Status,
    pub output: Option<CoherentKet>,
}

/// Applies `Z` (when `flip`) by teleporting repeatedly, keeping the odd
/// detector parity uncorrected, until an odd parity has been picked up.
pub fn apply_z_by_reteleport<R: Rng + ?Sized>(
    state: &CoherentKet,
    mode: usize,
    bell: &BellSpec,
    flip: bool,
    max_attempts: usize,
    rng: &mut R,
) -> Result<Reteleported> {
    let res = TeleportResource::from_bell(bell)?;
    let mut attempts = Vec::new();
    let mut current = state.clone();
    let mut pending = flip;
    while pending {
        if attempts.len() == max_attempts {
            return Ok(Reteleported {
                attempts,
                status: Status::Failure(FailureReason::AttemptsExhausted),
                output: None,
            });
        }
        let t = teleport_through(&current, mode, &res, PauliHandling::SkipZ, rng)?;
        attempts.push(t.record.clone());
        match t.output {
            None => {
                return Ok(Reteleported {
                    attempts,
                    status: t.record.status,
                    output: None,
                })
            }
            Some(out) => {
                current = out;
                pending = !t.pending_z;
            }
        }
    }
    Ok(Reteleported {
        attempts,
        status: Status::Success,
        output: Some(current),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::qubit_fidelity;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn pm_teleport_is_exact_on_success() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let spec = QubitSpec::normalized(c(0.6), C64::new(0.2, 0.77), 1.2, Encoding::Pm).unwrap();
        let q = make_qubit(&spec).unwrap();
        let mut successes = 0;
        for _ in 0..200 {
            let t = teleport(&q, 0, &BellSpec::Symmetric(1.2), Encoding::Pm, &mut rng).unwrap();
            if let Some(out) = t.output {
                successes += 1;
                assert!((qubit_fidelity(&out, &spec).unwrap() - 1.0).abs() < 1e-12);
                assert!(!t.record.amplitude_mismatch);
            }
        }
        assert!(successes > 150);
    }

    #[test]
    fn zero_alpha_teleport_is_exact_on_success() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let spec =
            QubitSpec::normalized(c(0.8), C64::new(0.0, -0.6), 1.0, Encoding::ZeroAlpha).unwrap();
        let q = make_qubit(&spec).unwrap();
        let mut seen_shift = false;
        for _ in 0..200 {
            let t = teleport(
                &q,
                0,
                &BellSpec::ZeroAlpha(1.0),
                Encoding::ZeroAlpha,
                &mut rng,
            )
            .unwrap();
            seen_shift |= t.record.correction_tokens().starts_with("D(-1.41)");
            if let Some(out) = t.output {
                assert!((qubit_fidelity(&out, &spec).unwrap() - 1.0).abs() < 1e-12);
            }
        }
        assert!(seen_shift);
    }

    #[test]
    fn encodings_share_success_probability() {
        let (mu, nu) = (c(0.6), c(0.8));
        let pm = teleport_success_prob(1.3, mu, nu, Encoding::Pm).unwrap();
        let za = teleport_success_prob(1.3, mu, nu, Encoding::ZeroAlpha).unwrap();
        assert!((pm - za).abs() < 1e-12);
        assert!((teleport_success_prob(6.0, mu, nu, Encoding::Pm).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mismatch_is_flagged() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let q = make_qubit(&QubitSpec::plus(1.0, Encoding::Pm)).unwrap();
        let t = teleport(&q, 0, &BellSpec::Symmetric(1.5), Encoding::Pm, &mut rng).unwrap();
        assert!(t.record.amplitude_mismatch);
        assert!(teleport(&q, 0, &BellSpec::ZeroAlpha(1.0), Encoding::Pm, &mut rng).is_err());
    }

    #[test]
    fn teleport_keeps_other_modes_in_place() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let q = make_qubit(&QubitSpec::plus(1.5, Encoding::Pm)).unwrap();
        let state = CoherentKet::coherent(&[c(0.3)])
            .tensor(&q)
            .tensor(&CoherentKet::coherent(&[c(-0.4)]));
        loop {
            let t = teleport(&state, 1, &BellSpec::Symmetric(1.5), Encoding::Pm, &mut rng).unwrap();
            if let Some(out) = t.output {
                assert_eq!(out.modes(), 3);
                assert!(out.infidelity(&state) < 1e-12);
                break;
            }
        }
    }

    #[test]
    fn reteleport_edge_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let q = make_qubit(&QubitSpec::plus(2.0, Encoding::Pm)).unwrap();
        let bell = BellSpec::Symmetric(2.0);
        let none = apply_z_by_reteleport(&q, 0, &bell, false, 5, &mut rng).unwrap();
        assert!(none.attempts.is_empty());
        assert!(none.status.is_success());
        let zero = apply_z_by_reteleport(&q, 0, &bell, true, 0, &mut rng).unwrap();
        assert_eq!(
            zero.status,
            Status::Failure(FailureReason::AttemptsExhausted)
        );
        let spec = QubitSpec::plus(2.0, Encoding::Pm);
        let done = apply_z_by_reteleport(&q, 0, &bell, true, 100, &mut rng).unwrap();
        let out = done.output.unwrap();
        assert!((qubit_fidelity(&out, &spec.z()).unwrap() - 1.0).abs() < 1e-12);
    }
}
