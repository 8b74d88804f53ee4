// Copyright 2026 The coherent-qubits Authors
// SPDX-License-Identifier: Apache-2.0

//! Exact algebra for finite superpositions of multimode coherent states.
//!
//! A pure state is stored as `Σ_k c_k |a_k1⟩|a_k2⟩…|a_kM⟩`. Every linear
//! optical element used here (displacement, beam splitters, phase shifts)
//! maps a product of coherent states to another product of coherent states,
//! so these operations act term by term and never leave the representation.
//! Inner products come from the closed-form overlap
//!
//! ```text
//! ⟨β|α⟩ = exp(−|α|²/2 − |β|²/2 + β̄α)
//! ```
//!
//! multiplied over modes. Photon counting is exact as well: projecting one
//! mode onto `|n⟩` multiplies each coefficient by `⟨n|a⟩` and drops the mode.

mod density;
mod ket;
mod measure;

pub use density::{CoherentDensity, Dyad};
pub use ket::{CoherentKet, CoherentTerm, MERGE_TOL, PRUNE_TOL};
pub use measure::{
    default_n_max, CountDistribution, Projection, DEFAULT_TAIL_BOUND, SAMPLING_TAIL,
};

use num_complex::Complex64 as C64;
use statrs::function::gamma::ln_gamma;

/// Multimode overlap `⟨bra|ket⟩` of two coherent-state products.
///
/// Panics if the amplitude lists have different lengths.
pub fn overlap(bra: &[C64], ket: &[C64]) -> C64 {
    assert_eq!(
        bra.len(),
        ket.len(),
        "overlap: amplitude lists differ in length"
    );
    log_overlap(bra, ket).exp()
}

/// Logarithm of [`overlap`], useful when the overlap underflows.
pub(crate) fn log_overlap(bra: &[C64], ket: &[C64]) -> C64 {
    bra.iter()
        .zip(ket)
        .map(|(b, a)| -0.5 * (a.norm_sqr() + b.norm_sqr()) + b.conj() * a)
        .sum()
}

const DIRECT_FACTORIAL_LIMIT: u64 = 20;

/// Fock amplitude `⟨n|α⟩ = e^{−|α|²/2} αⁿ/√n!`.
pub fn number_amplitude(alpha: C64, n: u64) -> C64 {
    number_amplitude_checked(alpha, n).0
}

/// Like [`number_amplitude`], also reporting whether the result saturated
/// to zero because its magnitude is below the smallest representable double.
pub fn number_amplitude_checked(alpha: C64, n: u64) -> (C64, bool) {
    let r2 = alpha.norm_sqr();
    if n == 0 {
        return (C64::new((-0.5 * r2).exp(), 0.0), (-0.5 * r2) < -745.0);
    }
    if r2 == 0.0 {
        return (C64::new(0.0, 0.0), false);
    }
    if n <= DIRECT_FACTORIAL_LIMIT {
        let mut fact = 1.0f64;
        for k in 2..=n {
            fact *= k as f64;
        }
        let value = (-0.5 * r2).exp() * alpha.powu(n as u32) / fact.sqrt();
        return (value, value == C64::new(0.0, 0.0));
    }
    let nf = n as f64;
    let log_mag = -0.5 * r2 + 0.5 * nf * r2.ln() - 0.5 * ln_gamma(nf + 1.0);
    if !log_mag.is_finite() || log_mag < -745.0 {
        return (C64::new(0.0, 0.0), true);
    }
    let phase = nf * alpha.arg();
    (C64::from_polar(log_mag.exp(), phase), false)
}
