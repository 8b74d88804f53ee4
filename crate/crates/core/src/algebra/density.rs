// Copyright 2026 The coherent-qubits Authors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64 as C64;

use super::{overlap, CoherentKet};

/// One weighted coherent dyad `w |ket⟩⟨bra|`.
#[derive(Clone, Debug, PartialEq)]
pub struct Dyad {
    pub weight: C64,
    pub ket: Vec<C64>,
    pub bra: Vec<C64>,
}

/// Mixed state written as a weighted sum of coherent dyads.
#[derive(Clone, Debug, PartialEq)]
pub struct CoherentDensity {
    modes: usize,
    dyads: Vec<Dyad>,
}

impl CoherentDensity {
    pub fn from_dyads(modes: usize, dyads: Vec<Dyad>) -> Self {
        for d in &dyads {
            assert!(
                d.ket.len() == modes && d.bra.len() == modes,
                "dyad has the wrong number of modes"
            );
        }
        Self { modes, dyads }
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn pure(state: &CoherentKet) -> Self {
        let mut dyads = Vec::with_capacity(state.len() * state.len());
        for a in state.terms() {
            for b in state.terms() {
                dyads.push(Dyad {
                    weight: a.coeff * b.coeff.conj(),
                    ket: a.amps.clone(),
                    bra: b.amps.clone(),
                });
            }
        }
        Self::from_dyads(state.modes(), dyads)
    }

    /// Convex combination `Σ p_i ρ_i`.
    pub fn mixture(parts: &[(f64, CoherentDensity)]) -> Self {
        let modes = parts.first().map(|(_, r)| r.modes).unwrap_or(0);
        let mut dyads = Vec::new();
        for (p, rho) in parts {
            assert_eq!(rho.modes, modes, "mixture: mode count mismatch");
            dyads.extend(rho.dyads.iter().map(|d| Dyad {
                weight: d.weight * *p,
                ket: d.ket.clone(),
                bra: d.bra.clone(),
            }));
        }
        Self { modes, dyads }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn dyads(&self) -> &[Dyad] {
        &self.dyads
    }

    /// `Σ w ⟨bra|ket⟩`.
    pub fn trace(&self) -> C64 {
        self.dyads
            .iter()
            .map(|d| d.weight * overlap(&d.bra, &d.ket))
            .sum()
    }

    pub fn normalized(self) -> Self {
        let t = self.trace().re;
        let dyads = self
            .dyads
            .into_iter()
            .map(|d| Dyad {
                weight: d.weight / t,
                ..d
            })
            .collect();
        Self {
            modes: self.modes,
            dyads,
        }
    }

    /// Largest deviation between a dyad's weight and the conjugate weight of
    /// its mirror dyad, or `None` if some mirror is missing.
    pub fn hermiticity_defect(&self) -> Option<f64> {
        let mut worst: f64 = 0.0;
        for d in &self.dyads {
            let mirror = self
                .dyads
                .iter()
                .find(|e| e.ket == d.bra && e.bra == d.ket)?;
            worst = worst.max((mirror.weight - d.weight.conj()).norm());
        }
        Some(worst)
    }

    /// Partial trace over one mode.
    pub fn trace_out(&self, mode: usize) -> Self {
        assert!(mode < self.modes, "mode {mode} out of range");
        let dyads = self
            .dyads
            .iter()
            .map(|d| {
                let w = d.weight * overlap(&[d.bra[mode]], &[d.ket[mode]]);
                let mut ket = d.ket.clone();
                let mut bra = d.bra.clone();
                ket.remove(mode);
                bra.remove(mode);
                Dyad {
                    weight: w,
                    ket,
                    bra,
                }
            })
            .collect();
        Self {
            modes: self.modes - 1,
            dyads,
        }
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn fidelity_pure(&self, psi: &CoherentKet) -> f64 {
        assert_eq!(psi.modes(), self.modes, "fidelity: mode count mismatch");
        self.dyads
            .iter()
            .map(|d| {
                let left: C64 = psi
                    .terms()
                    .iter()
                    .map(|t| t.coeff.conj() * overlap(&t.amps, &d.ket))
                    .sum();
                let right: C64 = psi
                    .terms()
                    .iter()
                    .map(|t| t.coeff * overlap(&d.bra, &t.amps))
                    .sum();
                d.weight * left * right
            })
            .sum::<C64>()
            .re
    }

    /// `Tr(ρσ)`.
    pub fn hs_inner(&self, other: &CoherentDensity) -> C64 {
        assert_eq!(self.modes, other.modes, "hs_inner: mode count mismatch");
        let mut acc = C64::new(0.0, 0.0);
        for d in &self.dyads {
            for e in &other.dyads {
                acc += d.weight * e.weight * overlap(&d.bra, &e.ket) * overlap(&e.bra, &d.ket);
            }
        }
        acc
    }

    /// Squared Hilbert–Schmidt distance `Tr(ρ−σ)²`.
    pub fn hs_distance_sqr(&self, other: &CoherentDensity) -> f64 {
        (self.hs_inner(self) + other.hs_inner(other) - 2.0 * self.hs_inner(other)).re
    }

    /// `Tr(ρ a†a)` for one mode.
    pub fn mean_photon_number(&self, mode: usize) -> f64 {
        assert!(mode < self.modes, "mode {mode} out of range");
        self.dyads
            .iter()
            .map(|d| d.weight * d.bra[mode].conj() * d.ket[mode] * overlap(&d.bra, &d.ket))
            .sum::<C64>()
            .re
    }
}
