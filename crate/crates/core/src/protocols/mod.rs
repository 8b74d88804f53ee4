// Copyright 2026 The coherent-qubits Authors
// SPDX-License-Identifier: Apache-2.0

//! Resource states and the measurement-based protocols built on them:
//! teleportation, amplitude restoration, the approximate Hadamard gate and
//! displacement by a strong ancilla.

mod hadamard;
mod record;
mod teleport;

pub use hadamard::{
    derive_correction_table, hadamard, hadamard_postselect, hadamard_report, protected_hadamard,
    AcceptanceRule, CorrectionTable, HadamardAngle, HadamardOptions, HadamardReport,
    OutcomeFidelity, ParityClass, Pauli, ProtectedHadamard, HADAMARD_CORRECTIONS,
};
pub use record::{Correction, FailureReason, OutcomeRecord, Reading, Status};
pub use teleport::{
    apply_z_by_reteleport, restore_amplitude, restore_success_prob, teleport,
    teleport_failure_prob, teleport_success_prob, teleport_through, PauliHandling, Reteleported,
    TeleportResource, Teleported,
};

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64 as C64;

use crate::algebra::{CoherentDensity, CoherentKet};
use crate::encoding::Encoding;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CatSign {
    Even,
    Odd,
}

/// Normalized `|−a⟩ ± |a⟩`.
pub fn make_cat(a: C64, sign: CatSign) -> Result<CoherentKet> {
    let s = match sign {
        CatSign::Even => 1.0,
        CatSign::Odd => -1.0,
    };
    CoherentKet::from_pairs(
        1,
        [(C64::new(1.0, 0.0), vec![-a]), (C64::new(s, 0.0), vec![a])],
    )
    .normalize()
}

/// Two-mode entangled resources. Mode 0 meets the qubit, mode 1 carries
/// the teleported output.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BellSpec {
    /// `|−α⟩|−α⟩ + |α⟩|α⟩`.
    Symmetric(f64),
    /// `|0⟩|0⟩ + |2α⟩|2α⟩`.
    ZeroAlpha(f64),
    /// `|−β⟩|−α⟩ + |β⟩|α⟩`.
    AmplitudeMatched { beta: f64, alpha: f64 },
}

impl BellSpec {
    /// Transmissivity `T = cos²θ = (1 + α²/β²)⁻¹` of the splitter that
    /// divides the cat into the two Bell modes.
    pub fn transmissivity(&self) -> f64 {
        match *self {
            BellSpec::Symmetric(_) | BellSpec::ZeroAlpha(_) => 0.5,
            BellSpec::AmplitudeMatched { beta, alpha } => {
                1.0 / (1.0 + alpha * alpha / (beta * beta))
            }
        }
    }

    pub fn encoding(&self) -> Encoding {
        match self {
            BellSpec::ZeroAlpha(_) => Encoding::ZeroAlpha,
            _ => Encoding::Pm,
        }
    }

    /// Amplitude of the output mode's logical one.
    pub fn output_alpha(&self) -> f64 {
        match *self {
            BellSpec::Symmetric(a) | BellSpec::ZeroAlpha(a) => a,
            BellSpec::AmplitudeMatched { alpha, .. } => alpha,
        }
    }

    /// Amplitude the qubit must carry for total interference.
    pub fn input_alpha(&self) -> f64 {
        match *self {
            BellSpec::Symmetric(a) | BellSpec::ZeroAlpha(a) => a,
            BellSpec::AmplitudeMatched { beta, .. } => beta,
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            BellSpec::Symmetric(a) | BellSpec::ZeroAlpha(a) => a > 0.0 && a.is_finite(),
            BellSpec::AmplitudeMatched { beta, alpha } => {
                beta > 0.0 && alpha > 0.0 && beta.is_finite() && alpha.is_finite()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "invalid Bell amplitudes in {self:?}"
            )))
        }
    }
}

/// Prepares the Bell state by splitting an even cat against vacuum.
pub fn make_bell(spec: &BellSpec) -> Result<CoherentKet> {
    spec.validate()?;
    let theta = spec.transmissivity().sqrt().acos();
    let cat_amp = match *spec {
        BellSpec::Symmetric(a) | BellSpec::ZeroAlpha(a) => a * std::f64::consts::SQRT_2,
        BellSpec::AmplitudeMatched { beta, .. } => beta / theta.cos(),
    };
    let split = make_cat(C64::new(cat_amp, 0.0), CatSign::Even)?
        .with_vacuum_mode()
        .beam_splitter(0, 1, theta);
    Ok(match *spec {
        BellSpec::ZeroAlpha(a) => split
            .displace(0, C64::new(a, 0.0))
            .displace(1, C64::new(a, 0.0)),
        _ => split,
    })
}

/// `|−β⟩|−α⟩ + |β⟩|α⟩` written down directly, for checking [`make_bell`].
pub fn direct_bell(beta: f64, alpha: f64) -> Result<CoherentKet> {
    let one = C64::new(1.0, 0.0);
    CoherentKet::from_pairs(
        2,
        [
            (one, vec![C64::new(-beta, 0.0), C64::new(-alpha, 0.0)]),
            (one, vec![C64::new(beta, 0.0), C64::new(alpha, 0.0)]),
        ],
    )
    .normalize()
}

/// Displacement of `mode` by `γ` realized by mixing with a strong coherent
/// ancilla `|β⟩`, `|β| = beta_magnitude`, on a splitter of reflectivity
/// `|γ|²/|β|²`; the ancilla is traced out.
pub fn simulated_displacement(
    state: &CoherentKet,
    mode: usize,
    gamma: C64,
    beta_magnitude: f64,
) -> Result<CoherentDensity> {
    if gamma.norm() == 0.0 {
        return Ok(CoherentDensity::pure(state));
    }
    if !(beta_magnitude > gamma.norm()) {
        return Err(Error::InvalidParameter(format!(
            "ancilla amplitude {beta_magnitude} must exceed |γ| = {}",
            gamma.norm()
        )));
    }
    let sin = gamma.norm() / beta_magnitude;
    let theta = sin.asin();
    let beta = -gamma / sin;
    let anc = state.modes();
    Ok(state
        .with_coherent_mode(beta)
        .beam_splitter(mode, anc, theta)
        .trace_out(anc))
}

/// Exact 50/50 angle used by every comparison splitter.
pub(crate) const HALF: f64 = FRAC_PI_4;
