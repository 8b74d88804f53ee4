// Copyright 2026 The coherent-qubits Authors
// SPDX-License-Identifier: Apache-2.0

//! The phase-flip repetition code built from beam splitters.
//!
//! A PM qubit is boosted to `√m·α`, split evenly over `m = 2n+1` modes,
//! rotated by a Hadamard layer, sent through lossy fibers, rotated back and
//! decoded by pairwise photon-counting comparisons.

use std::f64::consts::FRAC_1_SQRT_2;

use rand::Rng;
use statrs::function::factorial::binomial;

use crate::algebra::{CoherentKet, CoherentTerm};
use crate::encoding::{
    convert_encoding, make_qubit, qubit_fidelity_mixed, z_nearest, Encoding, QubitSpec, SPAN_TOL,
};
use crate::error::{Error, Result};
use crate::loss::{transmit, ChannelParams};
use crate::protocols::{
    hadamard, restore_amplitude, FailureReason, HadamardOptions, OutcomeRecord, Status,
};

/// How the logical Hadamard layers are realized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum HadamardModel {
    /// Exact map on each mode's logical coefficients.
    #[default]
    Ideal,
    /// The measurement-based gate, without post-selection.
    Physical,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CodeParams {
    /// Number of phase flips the block tolerates.
    pub n: usize,
    /// Amplitude of the input qubit and of each mode after encoding.
    pub alpha: f64,
    pub hadamard: HadamardModel,
}

impl CodeParams {
    pub fn new(n: usize, alpha: f64) -> Result<Self> {
        if n == 0 || !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "code needs n ≥ 1 and α > 0, got n = {n}, α = {alpha}"
            )));
        }
        Ok(Self {
            n,
            alpha,
            hadamard: HadamardModel::Ideal,
        })
    }

    pub fn with_hadamard(self, hadamard: HadamardModel) -> Self {
        Self { hadamard, ..self }
    }

    pub fn block_size(&self) -> usize {
        2 * self.n + 1
    }
}

/// Where amplitude restoration happens, if at all.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Restoration {
    Off,
    /// Restore the decoded qubit.
    #[default]
    AfterDecoding,
    /// Restore every code mode before the decoding Hadamard layer.
    BeforeDecoding,
}

/// One pairwise comparison: a copy split off the modes merged so far
/// (`reference`) against the next code mode (`probe`).
#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub reference: Vec<usize>,
    pub probe: usize,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SyndromeRecord {
    pub comparisons: Vec<Comparison>,
    /// Whether the net parity of the nonzero counts called for `Z`.
    pub applied_z: bool,
    /// Code modes merged into the output; its amplitude is `√copies·α`.
    pub copies: usize,
    /// Expected number of comparisons that read zero although the compared
    /// modes disagreed.
    pub undetected_weight: f64,
}

impl SyndromeRecord {
    /// The mode singled out as faulty, when the counts identify one.
    pub fn inferred_error_mode(&self) -> Option<usize> {
        let mut fired = self.comparisons.iter().filter(|c| c.count > 0);
        match (fired.next(), fired.next()) {
            (Some(c), None) if c.reference.len() >= 2 => Some(c.probe),
            _ => None,
        }
    }

    /// Comparison counts joined by `/`, e.g. `0/3`.
    pub fn token(&self) -> String {
        let counts: Vec<String> = self
            .comparisons
            .iter()
            .map(|c| c.count.to_string())
            .collect();
        counts.join("/")
    }
}

/// Teleports a PM qubit at `alpha` onto amplitude `√block_size·α`.
pub fn boost_amplitude<R: Rng + ?Sized>(
    state: &CoherentKet,
    mode: usize,
    alpha: f64,
    block_size: usize,
    rng: &mut R,
) -> Result<(OutcomeRecord, Option<CoherentKet>)> {
    let t = restore_amplitude(state, mode, alpha, (block_size as f64).sqrt() * alpha, rng)?;
    Ok((t.record, t.output))
}

/// Spreads `mode` over itself and `block_size − 1` appended vacuum modes
/// with a cascade of splitters of transmissivity `1/m, 1/(m−1), …, 1/2`.
/// Returns the state and the code modes in order.
pub fn encode(state: &CoherentKet, mode: usize, block_size: usize) -> (CoherentKet, Vec<usize>) {
    let first = state.modes();
    let mut s = state.clone();
    let mut modes = vec![mode];
    for k in 0..block_size - 1 {
        s = s.with_vacuum_mode();
        let t = 1.0 / (block_size - k) as f64;
        let prev = *modes.last().expect("nonempty");
        s = s.beam_splitter(prev, first + k, t.sqrt().acos());
        modes.push(first + k);
    }
    (s, modes)
}

/// Applies `H` to the logical coefficients of `mode`, whose amplitudes must
/// all be `±alpha`. The result is renormalized.
pub fn logical_h_ideal(state: &CoherentKet, mode: usize, alpha: f64) -> Result<CoherentKet> {
    let (zero, one) = Encoding::Pm.logical_amplitudes(alpha);
    let tol = SPAN_TOL * alpha.max(1.0);
    let mut terms = Vec::with_capacity(2 * state.len());
    for t in state.terms() {
        let a = t.amps[mode];
        let sign = if (a - zero).norm() <= tol {
            1.0
        } else if (a - one).norm() <= tol {
            -1.0
        } else {
            return Err(Error::NotInLogicalSpan);
        };
        let c = t.coeff * FRAC_1_SQRT_2;
        for (amp, w) in [(zero, c), (one, c * sign)] {
            let mut amps = t.amps.clone();
            amps[mode] = amp;
            terms.push(CoherentTerm::new(w, amps));
        }
    }
    CoherentKet::from_terms(state.modes(), terms).normalize()
}

/// Applies the logical Hadamard to every listed PM mode at amplitude
/// `alpha`. The physical model returns one record per gate.
pub fn apply_logical_h_blockwise<R: Rng + ?Sized>(
    state: &CoherentKet,
    modes: &[usize],
    alpha: f64,
    model: HadamardModel,
    rng: &mut R,
) -> Result<(CoherentKet, Vec<OutcomeRecord>)> {
    let mut s = state.clone();
    let mut records = Vec::new();
    for &m in modes {
        s = match model {
            HadamardModel::Ideal => logical_h_ideal(&s, m, alpha)?,
            HadamardModel::Physical => {
                let shifted = convert_encoding(&s, m, Encoding::Pm, Encoding::ZeroAlpha, alpha);
                let (record, out) = hadamard(&shifted, m, alpha, &HadamardOptions::default(), rng)?;
                records.push(record);
                convert_encoding(&out, m, Encoding::ZeroAlpha, Encoding::Pm, alpha)
            }
        };
    }
    Ok((s, records))
}

/// A state whose modes are tracked through measurements by slot.
struct Register {
    state: CoherentKet,
    slots: Vec<Option<usize>>,
}

impl Register {
    fn at(&self, slot: usize) -> usize {
        self.slots[slot].expect("slot is live")
    }

    fn fresh(&mut self) -> usize {
        self.slots.push(Some(self.state.modes()));
        self.state = self.state.with_vacuum_mode();
        self.slots.len() - 1
    }

    fn split(&mut self, i: usize, j: usize, transmissivity: f64) {
        self.state = self
            .state
            .beam_splitter(self.at(i), self.at(j), transmissivity.sqrt().acos());
    }

    fn measure<R: Rng + ?Sized>(&mut self, slot: usize, rng: &mut R) -> Result<usize> {
        let p = self.slots[slot].take().expect("slot is live");
        let (n, _, s) = self.state.measure_photon_count(p, rng)?;
        self.state = s;
        for q in self.slots.iter_mut().flatten() {
            if *q > p {
                *q -= 1;
            }
        }
        Ok(n)
    }

    /// Probability that `slot` counts zero while holding light.
    fn missed_weight(&self, slot: usize) -> f64 {
        let p = self.at(slot);
        let lit: Vec<CoherentTerm> = self
            .state
            .terms()
            .iter()
            .filter(|t| t.amps[p].norm() > SPAN_TOL)
            .cloned()
            .collect();
        CoherentKet::from_terms(self.state.modes(), lit)
            .project_vacuum(&[p])
            .norm_sqr()
            / self.state.norm_sqr()
    }
}

/// Decodes the PM code `modes` (each at amplitude `alpha`) into one mode.
///
/// The modes merged so far form an accumulator holding `k` agreeing copies
/// at `√k·α`. Each further mode is compared with a copy split off the
/// accumulator on a 50/50 splitter. A zero count merges the pair back; a
/// nonzero count discards both and contributes its parity to the final `Z`.
/// Other modes of `state` are carried along untouched.
///
/// Returns the syndrome, the corrected state (discarded modes are kept in
/// it as ancillas to be traced out) and the output mode.
pub fn decode_and_correct<R: Rng + ?Sized>(
    state: &CoherentKet,
    modes: &[usize],
    alpha: f64,
    rng: &mut R,
) -> Result<(SyndromeRecord, CoherentKet, usize)> {
    if modes.len() < 3 || modes.len() % 2 == 0 {
        return Err(Error::InvalidParameter(format!(
            "block size {} must be odd and at least 3",
            modes.len()
        )));
    }
    let mut reg = Register {
        state: state.clone(),
        slots: (0..state.modes()).map(Some).collect(),
    };
    let mut record = SyndromeRecord {
        comparisons: Vec::new(),
        applied_z: false,
        copies: 0,
        undetected_weight: 0.0,
    };
    let mut parity = 0;
    // accumulator slot, copy count and the code modes merged into it
    let mut acc: Option<(usize, usize, Vec<usize>)> = None;
    for &probe in modes {
        let Some((slot, k, merged)) = acc.take() else {
            acc = Some((probe, 1, vec![probe]));
            continue;
        };
        let copy = if k == 1 {
            slot
        } else {
            let c = reg.fresh();
            reg.split(slot, c, (k - 1) as f64 / k as f64);
            c
        };
        // the copy port carries the difference, the probe port the sum
        reg.split(copy, probe, 0.5);
        record.undetected_weight += reg.missed_weight(copy);
        let count = reg.measure(copy, rng)?;
        record.comparisons.push(Comparison {
            reference: merged.clone(),
            probe,
            count,
        });
        if count > 0 {
            parity += count;
            if k > 1 {
                acc = Some((slot, k - 1, merged));
            }
        } else if k == 1 {
            let mut merged = merged;
            merged.push(probe);
            acc = Some((probe, 2, merged));
        } else {
            reg.split(probe, slot, (k - 1) as f64 / (k + 1) as f64);
            let mut merged = merged;
            merged.push(probe);
            acc = Some((slot, k + 1, merged));
        }
    }
    let (slot, k, _) =
        acc.ok_or_else(|| Error::InvalidParameter("no mode survived decoding".into()))?;
    let out = reg.at(slot);
    record.copies = k;
    record.applied_z = parity % 2 == 1;
    let mut s = reg.state;
    if record.applied_z {
        let (zero, one) = Encoding::Pm.logical_amplitudes((k as f64).sqrt() * alpha);
        s = z_nearest(&s, out, zero, one);
    }
    Ok((record, s, out))
}

/// `1 − 3P_e² + 2P_e³`.
pub fn code_success_prob(pe: f64) -> f64 {
    1.0 - 3.0 * pe * pe + 2.0 * pe * pe * pe
}

/// Probability that at most `n` of `2n+1` modes flip.
pub fn general_code_success(n: usize, pe: f64) -> f64 {
    let m = 2 * n + 1;
    (0..=n)
        .map(|j| binomial(m as u64, j as u64) * pe.powi(j as i32) * (1.0 - pe).powi((m - j) as i32))
        .sum()
}

/// Result of one [`end_to_end`] run.
#[derive(Clone, Debug)]
pub struct EndToEnd {
    pub status: Status,
    /// Fidelity of the output to the input spec at `output_alpha`; zero on
    /// failure.
    pub fidelity: f64,
    pub output_alpha: f64,
    pub syndrome: Option<SyndromeRecord>,
    /// Records of every teleportation and physical gate, in order.
    pub trail: Vec<OutcomeRecord>,
}

impl EndToEnd {
    /// The run succeeded and the output is closer to the input than to its
    /// phase-flipped image.
    pub fn success(&self) -> bool {
        self.status.is_success() && self.fidelity > 0.5
    }

    /// `trial,pe,eta,alpha,n,syndrome,success,fidelity`.
    pub fn csv_row(&self, trial: usize, pe: f64, eta: f64, alpha: f64, n: usize) -> String {
        let syndrome = self
            .syndrome
            .as_ref()
            .map(SyndromeRecord::token)
            .unwrap_or_default();
        format!(
            "{trial},{pe},{eta},{alpha},{n},{syndrome},{},{}",
            self.success(),
            self.fidelity
        )
    }

    fn failed(trail: Vec<OutcomeRecord>, syndrome: Option<SyndromeRecord>) -> Self {
        let status = trail
            .last()
            .map(|r| r.status)
            .filter(|s| !s.is_success())
            .unwrap_or(Status::Failure(FailureReason::Uncorrectable));
        Self {
            status,
            fidelity: 0.0,
            output_alpha: 0.0,
            syndrome,
            trail,
        }
    }
}

/// Boost, encode, Hadamard layer, lossy transmission of every mode,
/// Hadamard layer, decoding and optional amplitude restoration.
pub fn end_to_end<R: Rng + ?Sized>(
    spec: &QubitSpec,
    params: &CodeParams,
    channel: &ChannelParams,
    restoration: Restoration,
    rng: &mut R,
) -> Result<EndToEnd> {
    let alpha = params.alpha;
    let m = params.block_size();
    let spec = spec.with_alpha(alpha);
    let pm = spec.with_encoding(Encoding::Pm);
    let mut trail = Vec::new();

    let (record, boosted) = boost_amplitude(&make_qubit(&pm)?, 0, alpha, m, rng)?;
    trail.push(record);
    let Some(boosted) = boosted else {
        return Ok(EndToEnd::failed(trail, None));
    };
    let (s, modes) = encode(&boosted, 0, m);
    let (mut s, records) = apply_logical_h_blockwise(&s, &modes, alpha, params.hadamard, rng)?;
    trail.extend(records);
    for &mode in &modes {
        s = transmit(&s, mode, channel).0;
    }
    let mut a = alpha * channel.eta().sqrt();
    if restoration == Restoration::BeforeDecoding {
        for &mode in &modes {
            let t = restore_amplitude(&s, mode, a, alpha, rng)?;
            trail.push(t.record);
            let Some(out) = t.output else {
                return Ok(EndToEnd::failed(trail, None));
            };
            s = out;
        }
        a = alpha;
    }
    let (s, records) = apply_logical_h_blockwise(&s, &modes, a, params.hadamard, rng)?;
    trail.extend(records);
    let (syndrome, mut s, out) = decode_and_correct(&s, &modes, a, rng)?;
    let mut output_alpha = (syndrome.copies as f64).sqrt() * a;
    if restoration == Restoration::AfterDecoding {
        let t = restore_amplitude(&s, out, output_alpha, alpha, rng)?;
        trail.push(t.record);
        let Some(restored) = t.output else {
            return Ok(EndToEnd::failed(trail, Some(syndrome)));
        };
        s = restored;
        output_alpha = alpha;
    }
    let mut rho = s.reduce_to(&[out]);
    let mut target = pm.with_alpha(output_alpha);
    if spec.encoding == Encoding::ZeroAlpha {
        let back = convert_encoding(&s, out, Encoding::Pm, Encoding::ZeroAlpha, output_alpha);
        rho = back.reduce_to(&[out]);
        target = spec.with_alpha(output_alpha);
    }
    let fidelity = qubit_fidelity_mixed(&rho, &target)?;
    Ok(EndToEnd {
        status: Status::Success,
        fidelity,
        output_alpha,
        syndrome: Some(syndrome),
        trail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::qubit_fidelity;
    use num_complex::Complex64 as C64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn ghz(mu: C64, nu: C64, alpha: f64, m: usize) -> CoherentKet {
        CoherentKet::from_pairs(m, [(mu, vec![c(-alpha); m]), (nu, vec![c(alpha); m])])
            .normalize()
            .unwrap()
    }

    #[test]
    fn encoder_builds_the_repetition_state() {
        for m in [3, 5, 7] {
            let (mu, nu) = (c(0.6), C64::new(0.0, 0.8));
            let a = 1.5;
            let q =
                make_qubit(&QubitSpec::new(mu, nu, (m as f64).sqrt() * a, Encoding::Pm).unwrap())
                    .unwrap();
            let (s, modes) = encode(&q, 0, m);
            assert_eq!(modes, (0..m).collect::<Vec<_>>());
            assert!(s.infidelity(&ghz(mu, nu, a, m)) < 1e-12);
        }
    }

    #[test]
    fn ideal_h_is_an_involution() {
        let spec = QubitSpec::normalized(c(0.3), C64::new(0.5, 0.4), 1.1, Encoding::Pm).unwrap();
        let q = make_qubit(&spec).unwrap();
        let h = logical_h_ideal(&q, 0, 1.1).unwrap();
        assert!((qubit_fidelity(&h, &spec.h()).unwrap() - 1.0).abs() < 1e-12);
        let hh = logical_h_ideal(&h, 0, 1.1).unwrap();
        assert!(hh.infidelity(&q) < 1e-12);
        assert_eq!(logical_h_ideal(&q, 0, 1.2), Err(Error::NotInLogicalSpan));
    }

    #[test]
    fn clean_block_decodes_to_full_amplitude() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (mu, nu) = (c(0.8), c(0.6));
        let (rec, s, out) =
            decode_and_correct(&ghz(mu, nu, 1.3, 3), &[0, 1, 2], 1.3, &mut rng).unwrap();
        assert_eq!(rec.token(), "0/0");
        assert_eq!(rec.copies, 3);
        assert!(!rec.applied_z);
        let spec = QubitSpec::new(mu, nu, 3f64.sqrt() * 1.3, Encoding::Pm).unwrap();
        assert!((qubit_fidelity_mixed(&s.reduce_to(&[out]), &spec).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_flip_is_located_and_corrected() {
        let (mu, nu) = (c(0.6), C64::new(0.0, 0.8));
        let a = 2.0;
        for bad in 0..3 {
            let flipped = ghz(mu, nu, a, 3).phase_rotation(bad, std::f64::consts::PI);
            let mut rng = ChaCha8Rng::seed_from_u64(bad as u64);
            for _ in 0..20 {
                let (rec, s, out) = decode_and_correct(&flipped, &[0, 1, 2], a, &mut rng).unwrap();
                let fired: Vec<_> = rec.comparisons.iter().filter(|c| c.count > 0).collect();
                assert!(fired.len() <= 1);
                if fired.is_empty() {
                    continue;
                }
                assert_eq!(rec.copies, 1);
                if bad == 2 {
                    assert_eq!(rec.inferred_error_mode(), Some(2));
                }
                let spec = QubitSpec::new(mu, nu, a, Encoding::Pm).unwrap();
                let f = qubit_fidelity_mixed(&s.reduce_to(&[out]), &spec).unwrap();
                assert!((f - 1.0).abs() < 1e-10, "bad = {bad}: {f}");
            }
        }
    }

    #[test]
    fn closed_forms() {
        assert_eq!(code_success_prob(0.0), 1.0);
        for n in 1..6 {
            assert!((general_code_success(n, 0.5) - 0.5).abs() < 1e-15);
        }
        let p: f64 = 0.1;
        let direct =
            p.powi(0) * 0.9f64.powi(5) + 5.0 * p * 0.9f64.powi(4) + 10.0 * p * p * 0.9f64.powi(3);
        assert!((general_code_success(2, p) - direct).abs() < 1e-15);
        assert!((general_code_success(1, 0.23) - code_success_prob(0.23)).abs() < 1e-15);
    }

    #[test]
    fn lossless_end_to_end_is_perfect() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let spec = QubitSpec::normalized(c(0.6), c(0.8), 2.0, Encoding::Pm).unwrap();
        let params = CodeParams::new(1, 2.0).unwrap();
        let mut done = 0;
        while done < 5 {
            let r = end_to_end(
                &spec,
                &params,
                &ChannelParams::lossless(),
                Restoration::AfterDecoding,
                &mut rng,
            )
            .unwrap();
            if r.status.is_success() {
                assert!((r.fidelity - 1.0).abs() < 1e-10);
                assert_eq!(r.output_alpha, 2.0);
                done += 1;
            }
        }
    }

    #[test]
    fn restoration_off_reports_decoded_amplitude() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let spec = QubitSpec::plus(2.0, Encoding::Pm);
        let params = CodeParams::new(1, 2.0).unwrap();
        let channel = ChannelParams::from_eta((-0.6f64).exp()).unwrap();
        let surviving = 2.0 * channel.eta().sqrt();
        for _ in 0..10 {
            let r = end_to_end(&spec, &params, &channel, Restoration::Off, &mut rng).unwrap();
            if let Some(syn) = &r.syndrome {
                let want = if syn.copies == 1 {
                    surviving
                } else {
                    3f64.sqrt() * surviving
                };
                assert!((r.output_alpha - want).abs() < 1e-12);
            }
        }
    }
}
