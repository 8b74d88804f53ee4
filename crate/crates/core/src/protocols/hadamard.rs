// Copyright 2026 The coherent-qubits Authors
// SPDX-License-Identifier: Apache-2.0

//! Approximate Hadamard gate on a ZeroAlpha qubit: an i-type splitter with
//! half of a Bell pair acts as a controlled sign, both modes are displaced
//! by `−α` and counted, and a Pauli fixes up the other Bell half.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rand::Rng;

use super::record::{Correction, FailureReason, OutcomeRecord, Status};
use super::teleport::{teleport_through, PauliHandling, TeleportResource};
use super::{make_bell, BellSpec};
use crate::algebra::{number_amplitude, CoherentKet};
use crate::encoding::{logical_x, make_qubit, z_nearest, Encoding, QubitSpec};
use crate::error::{Error, Result};

/// Splitter angle of the controlled-sign interaction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HadamardAngle {
    /// `θ = π/(8α²)`: the `|2α⟩|2α⟩` branch picks up a phase of exactly −1.
    Scaled,
    /// `θ = π/(2α²)`, which gives phase +1 when logical one is `|2α⟩`.
    Literal,
}

impl HadamardAngle {
    pub fn theta(self, alpha: f64) -> f64 {
        match self {
            HadamardAngle::Scaled => PI / (8.0 * alpha * alpha),
            HadamardAngle::Literal => PI / (2.0 * alpha * alpha),
        }
    }
}

/// Logical Pauli corrections; `XZ` applies `Z` first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Z,
    XZ,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Z, Pauli::XZ];

    /// Action on logical coefficients `(u0, u1)`.
    pub fn apply(self, u0: C64, u1: C64) -> (C64, C64) {
        match self {
            Pauli::I => (u0, u1),
            Pauli::X => (u1, u0),
            Pauli::Z => (u0, -u1),
            Pauli::XZ => (-u1, u0),
        }
    }

    fn corrections(self) -> Vec<Correction> {
        match self {
            Pauli::I => vec![],
            Pauli::X => vec![Correction::X],
            Pauli::Z => vec![Correction::Z],
            Pauli::XZ => vec![Correction::Z, Correction::X],
        }
    }
}

/// Pauli correction indexed by the parities of `(n_a, n_b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorrectionTable {
    /// `table[n_a odd][n_b odd]`.
    pub table: [[Pauli; 2]; 2],
}

impl CorrectionTable {
    pub fn lookup(&self, odd_a: bool, odd_b: bool) -> Pauli {
        self.table[odd_a as usize][odd_b as usize]
    }
}

/// The table chosen by [`derive_correction_table`] at `α = 6`.
pub const HADAMARD_CORRECTIONS: CorrectionTable = CorrectionTable {
    table: [[Pauli::I, Pauli::Z], [Pauli::X, Pauli::XZ]],
};

/// How post-selection picks the accepted outcomes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AcceptanceRule {
    /// Longest fidelity-sorted prefix whose average fidelity meets the
    /// target.
    AverageFidelity,
    /// Every outcome whose own fidelity meets the target.
    PerOutcomeThreshold,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HadamardOptions {
    pub angle: HadamardAngle,
    pub table: CorrectionTable,
    pub rule: AcceptanceRule,
    pub target_fidelity: f64,
}

impl Default for HadamardOptions {
    fn default() -> Self {
        Self {
            angle: HadamardAngle::Scaled,
            table: HADAMARD_CORRECTIONS,
            rule: AcceptanceRule::AverageFidelity,
            target_fidelity: 0.99,
        }
    }
}

/// Probability and conditional fidelity of one count pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OutcomeFidelity {
    pub n_a: usize,
    pub n_b: usize,
    pub probability: f64,
    pub fidelity: f64,
}

/// Outcomes grouped by the parities that select the correction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParityClass {
    pub odd_a: bool,
    pub odd_b: bool,
    pub probability: f64,
    pub fidelity: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HadamardReport {
    pub alpha: f64,
    /// Sorted by `(n_a, n_b)`.
    pub per_outcome: Vec<OutcomeFidelity>,
    pub per_parity: Vec<ParityClass>,
    /// `Σ P(n_a, n_b)·F(n_a, n_b)`.
    pub average_fidelity: f64,
    pub accepted: Vec<(usize, usize)>,
    pub accepted_probability: f64,
    /// Probability mass beyond the enumerated counts.
    pub tail: f64,
}

/// The measured three-mode state with its terms reduced to
/// `(coefficient, amplitude on A, amplitude on B, C is logical one)`.
struct Circuit {
    alpha: f64,
    terms: Vec<(C64, C64, C64, bool)>,
    n_max_a: usize,
    n_max_b: usize,
}

fn count_range(m: f64) -> usize {
    (20.0f64).max((m + 10.0 * m.sqrt() + 10.0).ceil()) as usize
}

/// Applies the interaction and the `−α` displacements to `state` (qubit on
/// `mode`) with a fresh ZeroAlpha Bell pair appended; returns the state and
/// the indices of A, B and C.
fn interact(
    state: &CoherentKet,
    mode: usize,
    alpha: f64,
    angle: HadamardAngle,
) -> Result<(CoherentKet, usize, usize)> {
    let b = state.modes();
    let shift = C64::new(-alpha, 0.0);
    let full = state
        .tensor(&make_bell(&BellSpec::ZeroAlpha(alpha))?)
        .ibeam_splitter(mode, b, angle.theta(alpha))
        .displace(mode, shift)
        .displace(b, shift);
    Ok((full, b, b + 1))
}

impl Circuit {
    fn new(spec: &QubitSpec, angle: HadamardAngle) -> Result<Self> {
        if spec.encoding != Encoding::ZeroAlpha {
            return Err(Error::InvalidParameter(
                "the Hadamard gate acts on ZeroAlpha qubits".into(),
            ));
        }
        let alpha = spec.alpha;
        let (full, b, c) = interact(&make_qubit(spec)?, 0, alpha, angle)?;
        let two = C64::new(2.0 * alpha, 0.0);
        let terms: Vec<_> = full
            .terms()
            .iter()
            .map(|t| {
                (
                    t.coeff,
                    t.amps[0],
                    t.amps[b],
                    (t.amps[c] - two).norm() < t.amps[c].norm(),
                )
            })
            .collect();
        let max_a = terms.iter().map(|t| t.1.norm_sqr()).fold(0.0, f64::max);
        let max_b = terms.iter().map(|t| t.2.norm_sqr()).fold(0.0, f64::max);
        Ok(Self {
            alpha,
            terms,
            n_max_a: count_range(max_a),
            n_max_b: count_range(max_b),
        })
    }

    /// Unnormalized logical coefficients of C for the counts `(n_a, n_b)`.
    fn conditional(&self, n_a: usize, n_b: usize) -> (C64, C64) {
        let mut u = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
        for &(coeff, a, b, one) in &self.terms {
            let w = coeff * number_amplitude(a, n_a as u64) * number_amplitude(b, n_b as u64);
            if one {
                u.1 += w;
            } else {
                u.0 += w;
            }
        }
        u
    }

    fn gram(&self) -> f64 {
        (-2.0 * self.alpha * self.alpha).exp()
    }

    fn norm_sqr(&self, u: (C64, C64)) -> f64 {
        u.0.norm_sqr() + u.1.norm_sqr() + 2.0 * (u.0.conj() * u.1).re * self.gram()
    }

    /// `|⟨target|u⟩|²/‖u‖²` with `target` given by normalized coefficients.
    fn fidelity(&self, target: (C64, C64), u: (C64, C64), p: f64) -> f64 {
        let g = self.gram();
        let amp = target.0.conj() * (u.0 + u.1 * g) + target.1.conj() * (u.0 * g + u.1);
        amp.norm_sqr() / p
    }

    /// Every outcome with nonzero probability: `(n_a, n_b, p, u)`.
    fn outcomes(&self) -> Vec<(usize, usize, f64, (C64, C64))> {
        let mut out = Vec::new();
        for n_a in 0..=self.n_max_a {
            for n_b in 0..=self.n_max_b {
                let u = self.conditional(n_a, n_b);
                let p = self.norm_sqr(u);
                if p > 0.0 {
                    out.push((n_a, n_b, p, u));
                }
            }
        }
        out
    }
}

fn target_coefficients(spec: &QubitSpec) -> (C64, C64) {
    let h = spec.h();
    let s = 1.0 / h.norm_factor().value.sqrt();
    (h.mu * s, h.nu * s)
}

/// Accepted outcomes under `rule`, with their total probability.
fn select(
    outcomes: &[OutcomeFidelity],
    target: f64,
    rule: AcceptanceRule,
) -> (Vec<(usize, usize)>, f64) {
    let mut sorted: Vec<&OutcomeFidelity> = outcomes.iter().collect();
    sorted.sort_by(|x, y| {
        y.fidelity
            .total_cmp(&x.fidelity)
            .then((x.n_a, x.n_b).cmp(&(y.n_a, y.n_b)))
    });
    let accepted: Vec<&OutcomeFidelity> = match rule {
        AcceptanceRule::PerOutcomeThreshold => sorted
            .into_iter()
            .filter(|o| o.fidelity >= target)
            .collect(),
        AcceptanceRule::AverageFidelity => {
            let (mut p, mut pf, mut keep) = (0.0, 0.0, 0);
            for (k, o) in sorted.iter().enumerate() {
                p += o.probability;
                pf += o.probability * o.fidelity;
                if pf >= target * p {
                    keep = k + 1;
                }
            }
            sorted.truncate(keep);
            sorted
        }
    };
    let prob = accepted.iter().map(|o| o.probability).sum::<f64>() + 0.0;
    let mut set: Vec<_> = accepted.iter().map(|o| (o.n_a, o.n_b)).collect();
    set.sort_unstable();
    (set, prob)
}

/// Exact outcome statistics of the gate for the input `spec` (ZeroAlpha).
pub fn hadamard_report(spec: &QubitSpec, opts: &HadamardOptions) -> Result<HadamardReport> {
    let circuit = Circuit::new(spec, opts.angle)?;
    let target = target_coefficients(spec);
    let mut per_outcome = Vec::new();
    let mut classes = [[(0.0, 0.0); 2]; 2];
    for (n_a, n_b, p, u) in circuit.outcomes() {
        let pauli = opts.table.lookup(n_a % 2 == 1, n_b % 2 == 1);
        let (v0, v1) = pauli.apply(u.0, u.1);
        let fidelity = circuit.fidelity(target, (v0, v1), circuit.norm_sqr((v0, v1)));
        let class = &mut classes[n_a % 2][n_b % 2];
        class.0 += p;
        class.1 += p * fidelity;
        per_outcome.push(OutcomeFidelity {
            n_a,
            n_b,
            probability: p,
            fidelity,
        });
    }
    let total: f64 = per_outcome.iter().map(|o| o.probability).sum();
    let average_fidelity = per_outcome.iter().map(|o| o.probability * o.fidelity).sum();
    let per_parity = (0..4)
        .map(|k| {
            let (pa, pb) = (k / 2, k % 2);
            let (p, pf) = classes[pa][pb];
            ParityClass {
                odd_a: pa == 1,
                odd_b: pb == 1,
                probability: p,
                fidelity: if p > 0.0 { pf / p } else { 0.0 },
            }
        })
        .collect();
    let (accepted, accepted_probability) = select(&per_outcome, opts.target_fidelity, opts.rule);
    Ok(HadamardReport {
        alpha: spec.alpha,
        per_outcome,
        per_parity,
        average_fidelity,
        accepted,
        accepted_probability,
        tail: (1.0 - total).max(0.0),
    })
}

/// Accepted outcome set and its probability at the options' target.
pub fn hadamard_postselect(
    spec: &QubitSpec,
    opts: &HadamardOptions,
) -> Result<(Vec<(usize, usize)>, f64)> {
    let r = hadamard_report(spec, opts)?;
    Ok((r.accepted, r.accepted_probability))
}

/// For each parity class, the Pauli that maximizes the class-conditional
/// fidelity to `H|Q⟩` averaged over the six Pauli eigenstates.
pub fn derive_correction_table(alpha: f64, angle: HadamardAngle) -> Result<CorrectionTable> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let (one, zero, i) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 1.0));
    let inputs = [
        (one, zero),
        (zero, one),
        (one * h, one * h),
        (one * h, -one * h),
        (one * h, i * h),
        (one * h, -i * h),
    ];
    // score[parity a][parity b][pauli]
    let mut score = [[[0.0f64; 4]; 2]; 2];
    for (mu, nu) in inputs {
        let spec = QubitSpec::new(mu, nu, alpha, Encoding::ZeroAlpha)?;
        let circuit = Circuit::new(&spec, angle)?;
        let target = target_coefficients(&spec);
        let mut acc = [[([0.0f64; 4], 0.0f64); 2]; 2];
        for (n_a, n_b, p, u) in circuit.outcomes() {
            let cell = &mut acc[n_a % 2][n_b % 2];
            cell.1 += p;
            for (k, pauli) in Pauli::ALL.iter().enumerate() {
                let v = pauli.apply(u.0, u.1);
                cell.0[k] += p * circuit.fidelity(target, v, circuit.norm_sqr(v));
            }
        }
        for a in 0..2 {
            for b in 0..2 {
                let (pf, p) = acc[a][b];
                for k in 0..4 {
                    score[a][b][k] += pf[k] / p;
                }
            }
        }
    }
    let mut table = [[Pauli::I; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            let best = (0..4)
                .max_by(|&x, &y| score[a][b][x].total_cmp(&score[a][b][y]))
                .expect("four candidates");
            table[a][b] = Pauli::ALL[best];
        }
    }
    Ok(CorrectionTable { table })
}

fn apply_pauli(state: &CoherentKet, mode: usize, alpha: f64, pauli: Pauli) -> CoherentKet {
    let (zero, one) = Encoding::ZeroAlpha.logical_amplitudes(alpha);
    let mut s = state.clone();
    for c in pauli.corrections() {
        s = match c {
            Correction::X => logical_x(&s, mode, Encoding::ZeroAlpha, alpha),
            Correction::Z => z_nearest(&s, mode, zero, one),
            Correction::Displace(g) => s.displace(mode, g),
        };
    }
    s
}

/// Runs the gate once on `mode` of `state` (a ZeroAlpha qubit at `alpha`),
/// sampling the counts. The corrected output replaces the input mode.
pub fn hadamard<R: Rng + ?Sized>(
    state: &CoherentKet,
    mode: usize,
    alpha: f64,
    opts: &HadamardOptions,
    rng: &mut R,
) -> Result<(OutcomeRecord, CoherentKet)> {
    let m = state.modes();
    let (full, _, _) = interact(state, mode, alpha, opts.angle)?;
    let (n_a, _, s) = full.measure_photon_count(mode, rng)?;
    let (n_b, _, s) = s.measure_photon_count(m - 1, rng)?;
    let pauli = opts.table.lookup(n_a % 2 == 1, n_b % 2 == 1);
    let out = apply_pauli(&s, m - 1, alpha, pauli)
        .move_mode(m - 1, mode)
        .normalize()?;
    let mut record = OutcomeRecord::new();
    record.push_count("n_a", n_a);
    record.push_count("n_b", n_b);
    record.corrections = pauli.corrections();
    Ok((record, out))
}

/// Result of [`protected_hadamard`]. On rejection nothing touched the data
/// qubit, which the caller still holds.
#[derive(Clone, Debug)]
pub struct ProtectedHadamard {
    pub record: OutcomeRecord,
    pub output: Option<CoherentKet>,
}

/// Gate teleportation: the Hadamard flow runs on one half of a fresh
/// ZeroAlpha Bell pair; if its counts are in `accepted`, the data qubit on
/// `mode` is teleported through the modified pair with the teleportation
/// Paulis conjugated by `H`.
pub fn protected_hadamard<R: Rng + ?Sized>(
    state: &CoherentKet,
    mode: usize,
    alpha: f64,
    accepted: &[(usize, usize)],
    opts: &HadamardOptions,
    rng: &mut R,
) -> Result<ProtectedHadamard> {
    let bell = make_bell(&BellSpec::ZeroAlpha(alpha))?;
    let (mut record, modified) = hadamard(&bell, 1, alpha, opts, rng)?;
    let counts = (
        record.count("n_a").expect("recorded"),
        record.count("n_b").expect("recorded"),
    );
    if !accepted.contains(&counts) {
        record.status = Status::Failure(FailureReason::Rejected);
        return Ok(ProtectedHadamard {
            record,
            output: None,
        });
    }
    let resource = TeleportResource {
        state: modified,
        encoding: Encoding::ZeroAlpha,
        input_alpha: alpha,
        output_alpha: alpha,
    };
    let t = teleport_through(state, mode, &resource, PauliHandling::Defer, rng)?;
    record.readings.extend(t.record.readings.iter().cloned());
    record
        .corrections
        .extend(t.record.corrections.iter().copied());
    record.amplitude_mismatch = t.record.amplitude_mismatch;
    record.status = t.record.status;
    let Some(raw) = t.output else {
        return Ok(ProtectedHadamard {
            record,
            output: None,
        });
    };
    // the raw output is H·X^x·Z^z|Q⟩ = Z^x·X^z·H|Q⟩
    let fix = match (t.pending_x, t.pending_z) {
        (false, false) => Pauli::I,
        (true, false) => Pauli::Z,
        (false, true) => Pauli::X,
        (true, true) => Pauli::XZ,
    };
    record.corrections.extend(fix.corrections());
    Ok(ProtectedHadamard {
        record,
        output: Some(apply_pauli(&raw, mode, alpha, fix).normalize()?),
    })
}
