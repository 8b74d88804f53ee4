// Copyright 2026 The coherent-qubits Authors
// SPDX-License-Identifier: Apache-2.0

//! Photon-counting statistics and state collapse.

use num_complex::Complex64 as C64;
use rand::Rng;

use super::ket::{CoherentKet, CoherentTerm, MERGE_TOL};
use super::{number_amplitude, overlap, CoherentDensity, Dyad};
use crate::error::{Error, Result};

/// Largest tail mass a truncated count distribution may leave unaccounted.
pub const DEFAULT_TAIL_BOUND: f64 = 1e-9;
/// Tail mass below which sampling stops extending its count range.
pub const SAMPLING_TAIL: f64 = 1e-12;

const NORM_CHECK: f64 = 1e-9;

/// `max(20, ⌈m + 10√m + 10⌉)` with `m` the largest `|a|²` on the mode.
pub fn default_n_max(state: &CoherentKet, mode: usize) -> usize {
    let m = state.max_intensity(mode);
    (m + 10.0 * m.sqrt() + 10.0).ceil().max(20.0) as usize
}

/// `P(n)` for `n = 0..=n_max` plus the unaccounted tail.
#[derive(Clone, Debug, PartialEq)]
pub struct CountDistribution {
    pub probs: Vec<f64>,
    pub tail: f64,
}

impl CountDistribution {
    pub fn even_odd(&self) -> (f64, f64) {
        self.probs
            .iter()
            .enumerate()
            .fold(
                (0.0, 0.0),
                |(e, o), (n, p)| {
                    if n % 2 == 0 {
                        (e + p, o)
                    } else {
                        (e, o + p)
                    }
                },
            )
    }
}

/// Result of projecting one mode onto a photon number.
#[derive(Clone, Debug, PartialEq)]
pub struct Projection {
    pub probability: f64,
    /// Normalized state of the remaining modes; `None` when the outcome has
    /// zero probability.
    pub state: Option<CoherentKet>,
}

/// Reduced description of a state for counting on one mode: the distinct
/// amplitudes `b_p` on the mode and the weights
/// `H_pq = Σ_{j∈p, k∈q} c_j c̄_k ⟨rest_k|rest_j⟩`, so that
/// `P(n) = Σ_pq H_pq ⟨n|b_p⟩ conj⟨n|b_q⟩`.
struct CountModel {
    amps: Vec<C64>,
    weights: Vec<Vec<C64>>,
    group: Vec<usize>,
}

impl CountModel {
    fn new(state: &CoherentKet, mode: usize) -> Self {
        let amps = state.distinct_amplitudes(mode);
        let group: Vec<usize> = state
            .terms()
            .iter()
            .map(|t| {
                amps.iter()
                    .position(|b| {
                        (b.re - t.amps[mode].re).abs() <= MERGE_TOL
                            && (b.im - t.amps[mode].im).abs() <= MERGE_TOL
                    })
                    .expect("amplitude listed")
            })
            .collect();
        let rest: Vec<Vec<C64>> = state
            .terms()
            .iter()
            .map(|t| {
                let mut r = t.amps.clone();
                r.remove(mode);
                r
            })
            .collect();
        let r = amps.len();
        let mut weights = vec![vec![C64::new(0.0, 0.0); r]; r];
        let terms = state.terms();
        for j in 0..terms.len() {
            weights[group[j]][group[j]] += terms[j].coeff.norm_sqr();
            for k in j + 1..terms.len() {
                let w = terms[j].coeff * terms[k].coeff.conj() * overlap(&rest[k], &rest[j]);
                weights[group[j]][group[k]] += w;
                weights[group[k]][group[j]] += w.conj();
            }
        }
        Self {
            amps,
            weights,
            group,
        }
    }

    fn prob(&self, n: usize) -> f64 {
        let f: Vec<C64> = self
            .amps
            .iter()
            .map(|b| number_amplitude(*b, n as u64))
            .collect();
        let mut acc = 0.0;
        for p in 0..f.len() {
            acc += self.weights[p][p].re * f[p].norm_sqr();
            for q in p + 1..f.len() {
                acc += 2.0 * (self.weights[p][q] * f[p] * f[q].conj()).re;
            }
        }
        acc.max(0.0)
    }

    fn collapse(&self, state: &CoherentKet, mode: usize, n: usize, prob: f64) -> CoherentKet {
        let f: Vec<C64> = self
            .amps
            .iter()
            .map(|b| number_amplitude(*b, n as u64))
            .collect();
        let scale = 1.0 / prob.sqrt();
        let terms = state
            .terms()
            .iter()
            .zip(&self.group)
            .map(|(t, &g)| CoherentTerm::new(t.coeff * f[g] * scale, t.amps.clone()))
            .collect();
        CoherentKet::from_terms_unchecked(state.modes(), terms)
            .drop_mode_raw(mode)
            .canonical()
    }
}

fn ensure_normalized(state: &CoherentKet) -> Result<()> {
    let n2 = state.norm_sqr();
    if (n2 - 1.0).abs() > NORM_CHECK {
        return Err(Error::NotNormalized(n2));
    }
    Ok(())
}

impl CoherentKet {
    /// Exact photon-number distribution of `mode` up to `n_max`.
    ///
    /// Fails with [`Error::Truncation`] when the omitted tail exceeds
    /// [`DEFAULT_TAIL_BOUND`].
    pub fn photon_count_distribution(
        &self,
        mode: usize,
        n_max: usize,
    ) -> Result<CountDistribution> {
        self.photon_count_distribution_with_bound(mode, n_max, DEFAULT_TAIL_BOUND)
    }

    pub fn photon_count_distribution_with_bound(
        &self,
        mode: usize,
        n_max: usize,
        tail_bound: f64,
    ) -> Result<CountDistribution> {
        ensure_normalized(self)?;
        let model = CountModel::new(self, mode);
        let probs: Vec<f64> = (0..=n_max).map(|n| model.prob(n)).collect();
        let tail = (1.0 - probs.iter().sum::<f64>()).max(0.0);
        if tail > tail_bound {
            return Err(Error::Truncation { n_max, tail });
        }
        Ok(CountDistribution { probs, tail })
    }

    /// Probability of counting `n` photons in `mode`, and the collapsed state
    /// of the other modes.
    pub fn project_photon_count(&self, mode: usize, n: usize) -> Result<Projection> {
        ensure_normalized(self)?;
        let model = CountModel::new(self, mode);
        let p = model.prob(n);
        if p <= 0.0 {
            return Ok(Projection {
                probability: 0.0,
                state: None,
            });
        }
        let collapsed = model.collapse(self, mode, n, p);
        Ok(Projection {
            probability: p,
            state: (!collapsed.is_empty()).then_some(collapsed),
        })
    }

    /// Draws a photon count for `mode` and collapses the state.
    ///
    /// Returns `(n, P(n), collapsed state)`. The count range grows until the
    /// remaining tail is below [`SAMPLING_TAIL`].
    pub fn measure_photon_count<R: Rng + ?Sized>(
        &self,
        mode: usize,
        rng: &mut R,
    ) -> Result<(usize, f64, CoherentKet)> {
        ensure_normalized(self)?;
        let model = CountModel::new(self, mode);
        let u: f64 = rng.gen();
        let n_max = default_n_max(self, mode);
        let mut cumulative = 0.0;
        let mut last_nonzero = 0;
        let mut n = 0;
        loop {
            let p = model.prob(n);
            if p > 0.0 {
                last_nonzero = n;
            }
            cumulative += p;
            if u < cumulative {
                break;
            }
            if n >= n_max && 1.0 - cumulative < SAMPLING_TAIL {
                // u landed in the rounding gap above the accumulated mass
                n = last_nonzero;
                break;
            }
            n += 1;
        }
        let p = model.prob(n);
        Ok((n, p, model.collapse(self, mode, n, p)))
    }

    /// Draws a photon count for `mode` without returning the collapsed state.
    pub fn sample_photon_count<R: Rng + ?Sized>(&self, mode: usize, rng: &mut R) -> Result<usize> {
        self.measure_photon_count(mode, rng).map(|(n, _, _)| n)
    }

    /// Unnormalized `(⊗_m ⟨0|_m)|ψ⟩` with the listed modes removed; its
    /// squared norm is the probability that all of them count zero.
    pub fn project_vacuum(&self, modes: &[usize]) -> CoherentKet {
        for &m in modes {
            assert!(m < self.modes(), "mode {m} out of range");
        }
        let keep = self.modes() - modes.len();
        let terms = self
            .terms()
            .iter()
            .map(|t| {
                let mut w = t.coeff;
                let mut amps = Vec::with_capacity(keep);
                for (m, a) in t.amps.iter().enumerate() {
                    if modes.contains(&m) {
                        w *= (-0.5 * a.norm_sqr()).exp();
                    } else {
                        amps.push(*a);
                    }
                }
                CoherentTerm::new(w, amps)
            })
            .collect();
        CoherentKet::from_terms(keep, terms)
    }

    /// `(P(even), P(odd))` for `mode`, from `⟨β|Π|α⟩ = ⟨β|−α⟩`.
    pub fn parity_probabilities(&self, mode: usize) -> (f64, f64) {
        let norm = self.norm_sqr();
        let flipped = self.phase_rotation(mode, std::f64::consts::PI);
        let expect_parity = (self.inner(&flipped).re / norm).clamp(-1.0, 1.0);
        (0.5 * (1.0 + expect_parity), 0.5 * (1.0 - expect_parity))
    }

    /// Traces out one mode in closed dyad form,
    /// `Σ_jk c_j c̄_k ⟨β_k|β_j⟩ |rest_j⟩⟨rest_k|`, normalized to unit trace.
    pub fn trace_out(&self, mode: usize) -> CoherentDensity {
        let keep: Vec<usize> = (0..self.modes()).filter(|&m| m != mode).collect();
        self.reduce_to(&keep)
    }

    /// Reduced density of the listed modes (in the listed order).
    pub fn reduce_to(&self, keep: &[usize]) -> CoherentDensity {
        for &m in keep {
            assert!(m < self.modes(), "mode {m} out of range");
        }
        let traced: Vec<usize> = (0..self.modes()).filter(|m| !keep.contains(m)).collect();
        let split = |t: &CoherentTerm| -> (Vec<C64>, Vec<C64>) {
            (
                keep.iter().map(|&m| t.amps[m]).collect(),
                traced.iter().map(|&m| t.amps[m]).collect(),
            )
        };
        let parts: Vec<(C64, Vec<C64>, Vec<C64>)> = self
            .terms()
            .iter()
            .map(|t| {
                let (k, e) = split(t);
                (t.coeff, k, e)
            })
            .collect();
        let mut dyads = Vec::with_capacity(parts.len() * parts.len());
        for (cj, kj, ej) in &parts {
            for (ck, kk, ek) in &parts {
                let w = *cj * ck.conj() * overlap(ek, ej);
                dyads.push(Dyad {
                    weight: w,
                    ket: kj.clone(),
                    bra: kk.clone(),
                });
            }
        }
        CoherentDensity::from_dyads(keep.len(), dyads).normalized()
    }
}
