// Copyright 2026 The coherent-qubits Authors
// SPDX-License-Identifier: Apache-2.0

//! Cross-checks of the exact coherent-state results against the truncated
//! Fock-space engine. Each check reports the largest deviation it saw.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, SQRT_2};
use std::fmt;

use num_complex::Complex64 as C64;

use crate::algebra::CoherentKet;
use crate::code::encode;
use crate::encoding::{make_qubit, qubit_fidelity, qubit_fidelity_mixed, Encoding, QubitSpec};
use crate::error::Result;
use crate::fock::{
    beam_splitter_matrix, coherent_fock, displacement_matrix, CutoffPolicy, FockVector,
    SplitterKind,
};
use crate::loss::{error_prob, transmit, ChannelParams};
use crate::protocols::{
    hadamard_report, make_bell, simulated_displacement, BellSpec, HadamardOptions, TeleportResource,
};

/// Outcomes rarer than this are compared by probability only.
const FIDELITY_FLOOR: f64 = 1e-6;

/// A named comparison with its measured deviation.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub deviation: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn new(name: impl Into<String>, deviation: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            deviation,
            tolerance,
        }
    }

    /// A NaN deviation fails.
    pub fn passed(&self) -> bool {
        self.deviation <= self.tolerance
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: deviation {:.3e} (tolerance {:.0e})",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.deviation,
            self.tolerance
        )
    }
}

fn cutoff(states: &[&CoherentKet]) -> usize {
    let policy = CutoffPolicy::default();
    states
        .iter()
        .map(|s| policy.cutoff_for_ket(s))
        .max()
        .unwrap_or(0)
}

fn fock(state: &CoherentKet, cutoff: usize) -> Result<FockVector> {
    Ok(FockVector::from_coherent_ket_at(state, cutoff)?.0)
}

/// `|⟨a|b⟩|²/(‖a‖²‖b‖²)`.
fn fock_fidelity(a: &FockVector, b: &FockVector) -> f64 {
    a.inner(b).norm_sqr() / (a.norm_sqr() * b.norm_sqr())
}

/// Joint count distribution `P[n_a][n_b]` of two modes.
fn fock_joint(v: &FockVector, a: usize, b: usize) -> Vec<Vec<f64>> {
    let d = v.cutoff() + 1;
    let modes = v.modes();
    let total = v.norm_sqr();
    let mut p = vec![vec![0.0; d]; d];
    for (idx, z) in v.data().iter().enumerate() {
        let count = |m: usize| (idx / d.pow((modes - 1 - m) as u32)) % d;
        p[count(a)][count(b)] += z.norm_sqr() / total;
    }
    p
}

/// Joint distribution from sequential exact projections: `first`, then
/// `second` indexed after `first` has been removed.
fn coherent_joint(
    state: &CoherentKet,
    first: usize,
    second: usize,
    n_max: usize,
) -> Result<Vec<Vec<f64>>> {
    let mut p = vec![vec![0.0; n_max + 1]; n_max + 1];
    let d1 = state.photon_count_distribution_with_bound(first, n_max, 1.0)?;
    for (n1, &p1) in d1.probs.iter().enumerate() {
        if p1 <= 0.0 {
            continue;
        }
        let Some(rest) = state.project_photon_count(first, n1)?.state else {
            continue;
        };
        let d2 = rest.photon_count_distribution_with_bound(second, n_max, 1.0)?;
        for (n2, &p2) in d2.probs.iter().enumerate() {
            p[n1][n2] = p1 * p2;
        }
    }
    Ok(p)
}

fn max_diff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| x.iter().zip(y).map(|(u, v)| (u - v).abs()))
        .fold(0.0, f64::max)
}

fn project(state: &CoherentKet, mode: usize, n: usize) -> Result<Option<CoherentKet>> {
    Ok(state.project_photon_count(mode, n)?.state)
}

fn fock_project(v: &FockVector, mode: usize, n: usize) -> Option<FockVector> {
    v.number_projection(mode, n).1
}

/// The uncorrected teleported state expected for Pauli flags.
pub(crate) fn raw_target(spec: QubitSpec, flip: bool, odd: bool) -> QubitSpec {
    let s = if odd { spec.z() } else { spec };
    if flip {
        s.x()
    } else {
        s
    }
}

/// Teleportation of `spec` through `resource`: joint detector statistics and
/// the fidelity of every uncorrected output to its expected Pauli image.
pub fn teleport_vs_fock(
    spec: &QubitSpec,
    resource: &TeleportResource,
    tolerance: f64,
) -> Result<Vec<Check>> {
    let label = format!(
        "teleport {} α={:.3} → {:.3}",
        resource.encoding, resource.input_alpha, resource.output_alpha
    );
    let q = make_qubit(spec)?;
    let pre = q.tensor(&resource.state);
    let full = pre.beam_splitter(1, 0, FRAC_PI_4);
    let shift = C64::new(-SQRT_2 * resource.input_alpha, 0.0);
    let mut n = cutoff(&[&pre, &full]);
    if resource.encoding == Encoding::ZeroAlpha {
        n = n.max(cutoff(&[&full.displace(0, shift)]));
    }
    let fv = fock(&pre, n)?.apply_beam_splitter(
        1,
        0,
        &beam_splitter_matrix(FRAC_PI_4, n, SplitterKind::Standard),
    );
    let out_spec = spec.with_alpha(resource.output_alpha);
    let mut dev_p: f64 = 0.0;
    let mut dev_f: f64 = 0.0;
    let compare = |raw: &CoherentKet, v: &FockVector, target: QubitSpec| -> Result<f64> {
        let t = fock(&make_qubit(&target)?, n)?;
        Ok((qubit_fidelity(raw, &target)? - fock_fidelity(&t, v)).abs())
    };
    match resource.encoding {
        Encoding::Pm => {
            let want = fock_joint(&fv, 0, 1);
            let got = coherent_joint(&full, 0, 0, n)?;
            dev_p = max_diff(&want, &got);
            for n1 in 0..=n {
                for n2 in 0..=n {
                    if got[n1][n2] < FIDELITY_FLOOR || (n1 > 0) == (n2 > 0) {
                        continue;
                    }
                    let Some(raw) =
                        project(&full, 0, n1)?.and_then(|s| project(&s, 0, n2).ok().flatten())
                    else {
                        continue;
                    };
                    let v = fock_project(&fv, 0, n1)
                        .and_then(|s| fock_project(&s, 0, n2))
                        .expect("likely outcome");
                    dev_f = dev_f.max(compare(
                        &raw,
                        &v,
                        raw_target(out_spec, n2 > 0, (n1 + n2) % 2 == 1),
                    )?);
                }
            }
        }
        Encoding::ZeroAlpha => {
            let fd = fv.apply_single(0, &displacement_matrix(shift, n));
            let plain = fock_joint(&fv, 0, 1);
            let moved = fock_joint(&fd, 0, 1);
            let d2 = full.photon_count_distribution_with_bound(1, n, 1.0)?;
            for n2 in 1..=n {
                let want: f64 = plain.iter().map(|row| row[n2]).sum();
                dev_p = dev_p.max((want - d2.probs[n2]).abs());
                if d2.probs[n2] < FIDELITY_FLOOR {
                    continue;
                }
                let s = project(&full, 1, n2)?.expect("likely outcome");
                let target = raw_target(out_spec, true, n2 % 2 == 1);
                let rho = s.reduce_to(&[1]);
                let v = fock_project(&fv, 1, n2).expect("likely outcome");
                let t = fock(&make_qubit(&target)?, n)?;
                let f_fock = v.reduced_density(&[1])?.fidelity_pure(&t) / t.norm_sqr();
                dev_f = dev_f.max((qubit_fidelity_mixed(&rho, &target)? - f_fock).abs());
            }
            if let Some(s0) = project(&full, 1, 0)? {
                let s0 = s0.displace(0, shift);
                let d1 = s0.photon_count_distribution_with_bound(0, n, 1.0)?;
                for n1 in 0..=n {
                    dev_p = dev_p.max((moved[n1][0] - d2.probs[0] * d1.probs[n1]).abs());
                    if n1 == 0 || d2.probs[0] * d1.probs[n1] < FIDELITY_FLOOR {
                        continue;
                    }
                    let raw = project(&s0, 0, n1)?.expect("likely outcome");
                    let v = fock_project(&fd, 1, 0)
                        .and_then(|s| fock_project(&s, 0, n1))
                        .expect("likely outcome");
                    dev_f = dev_f.max(compare(&raw, &v, raw_target(out_spec, false, n1 % 2 == 1))?);
                }
            }
        }
    }
    Ok(vec![
        Check::new(format!("{label}: outcome probabilities"), dev_p, tolerance),
        Check::new(format!("{label}: output fidelities"), dev_f, tolerance),
    ])
}

/// `P_e` against the environment eigenweights for a logical input entangled
/// with an orthonormal reference mode.
pub fn error_prob_vs_fock(alpha: f64, eta: f64, tolerance: f64) -> Result<Check> {
    let n = CutoffPolicy::default().cutoff_for(alpha * alpha);
    let (zero, _) = coherent_fock(C64::new(-alpha, 0.0), n);
    let (one, _) = coherent_fock(C64::new(alpha, 0.0), n);
    let vac = FockVector::basis(n, &[0]);
    let a = FockVector::basis(n, &[0]).tensor(&zero).tensor(&vac);
    let b = FockVector::basis(n, &[1]).tensor(&one).tensor(&vac);
    let data = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| (x + y) * FRAC_1_SQRT_2)
        .collect();
    let theta = eta.sqrt().acos();
    let v = FockVector::from_data(n, 3, data).apply_beam_splitter(
        1,
        2,
        &beam_splitter_matrix(theta, n, SplitterKind::Standard),
    );
    let ev = v.reduced_density(&[2])?.eigenvalues();
    let pe = error_prob(alpha, eta);
    let dev = (ev[0] - (1.0 - pe))
        .abs()
        .max((ev.get(1).copied().unwrap_or(0.0) - pe).abs());
    Ok(Check::new(format!("P_e α={alpha} η={eta}"), dev, tolerance))
}

/// Loss on one mode: fidelity of the traced state to the surviving qubit.
pub fn transmit_vs_fock(spec: &QubitSpec, eta: f64, tolerance: f64) -> Result<Check> {
    let q = make_qubit(spec)?;
    let params = ChannelParams::from_eta(eta)?;
    let (s, env) = transmit(&q, 0, &params);
    let target = make_qubit(&spec.with_alpha(spec.alpha * eta.sqrt()))?;
    let f_coh = s.trace_out(env).fidelity_pure(&target);
    let n = cutoff(&[&q]);
    let v = fock(&q.with_vacuum_mode(), n)?.apply_beam_splitter(
        0,
        1,
        &beam_splitter_matrix(params.theta(), n, SplitterKind::Standard),
    );
    let t = fock(&target, n)?;
    let f_fock = v.reduced_density(&[0])?.fidelity_pure(&t) / t.norm_sqr();
    Ok(Check::new(
        format!(
            "loss {} α={} η={eta}: surviving fidelity",
            spec.encoding, spec.alpha
        ),
        (f_coh - f_fock).abs(),
        tolerance,
    ))
}

/// Hadamard gate: report probabilities and per-outcome fidelities.
pub fn hadamard_vs_fock(
    spec: &QubitSpec,
    opts: &HadamardOptions,
    tolerance: f64,
) -> Result<Vec<Check>> {
    let alpha = spec.alpha;
    let label = format!("hadamard α={alpha}");
    let report = hadamard_report(spec, opts)?;
    let theta = opts.angle.theta(alpha);
    let shift = C64::new(-alpha, 0.0);
    let pre = make_qubit(spec)?.tensor(&make_bell(&BellSpec::ZeroAlpha(alpha))?);
    let mid = pre.ibeam_splitter(0, 1, theta);
    let post = mid.displace(0, shift).displace(1, shift);
    let n = cutoff(&[&pre, &mid, &post]);
    let d = displacement_matrix(shift, n);
    let fv = fock(&pre, n)?
        .apply_beam_splitter(
            0,
            1,
            &beam_splitter_matrix(theta, n, SplitterKind::Imaginary),
        )
        .apply_single(0, &d)
        .apply_single(1, &d);
    let joint = fock_joint(&fv, 0, 1);
    let mut got = vec![vec![0.0; n + 1]; n + 1];
    for o in &report.per_outcome {
        if o.n_a <= n && o.n_b <= n {
            got[o.n_a][o.n_b] = o.probability;
        }
    }
    let dev_p = max_diff(&joint, &got);
    let (zero, _) = coherent_fock(C64::new(0.0, 0.0), n);
    let (one, _) = coherent_fock(C64::new(2.0 * alpha, 0.0), n);
    let target = fock(&make_qubit(&spec.h())?, n)?;
    let g = zero.inner(&one);
    let mut dev_f: f64 = 0.0;
    for o in report
        .per_outcome
        .iter()
        .filter(|o| o.probability >= FIDELITY_FLOOR)
    {
        let v = fock_project(&fv, 0, o.n_a)
            .and_then(|s| fock_project(&s, 0, o.n_b))
            .expect("likely outcome");
        // logical coefficients from the biorthogonal pair of the span
        let (b0, b1) = (zero.inner(&v), one.inner(&v));
        let det = 1.0 - g.norm_sqr();
        let u0 = (b0 - g * b1) / det;
        let u1 = (b1 - g.conj() * b0) / det;
        let (c0, c1) = opts
            .table
            .lookup(o.n_a % 2 == 1, o.n_b % 2 == 1)
            .apply(u0, u1);
        let data = zero
            .data()
            .iter()
            .zip(one.data())
            .map(|(z, w)| c0 * z + c1 * w)
            .collect();
        let corrected = FockVector::from_data(n, 1, data);
        dev_f = dev_f.max((fock_fidelity(&target, &corrected) - o.fidelity).abs());
    }
    Ok(vec![
        Check::new(format!("{label}: outcome probabilities"), dev_p, tolerance),
        Check::new(format!("{label}: outcome fidelities"), dev_f, tolerance),
    ])
}

/// Three-mode encoder against the splitter cascade in the Fock basis.
pub fn encoder_vs_fock(spec: &QubitSpec, tolerance: f64) -> Result<Check> {
    let boosted = spec
        .with_encoding(Encoding::Pm)
        .with_alpha(3f64.sqrt() * spec.alpha);
    let q = make_qubit(&boosted)?;
    let (coh, _) = encode(&q, 0, 3);
    let pre = q.with_vacuum_mode().with_vacuum_mode();
    let n = cutoff(&[&pre]);
    let kind = SplitterKind::Standard;
    let v = fock(&pre, n)?
        .apply_beam_splitter(
            0,
            1,
            &beam_splitter_matrix((1.0f64 / 3.0).sqrt().acos(), n, kind),
        )
        .apply_beam_splitter(1, 2, &beam_splitter_matrix(FRAC_PI_4, n, kind));
    let dev = 1.0 - fock_fidelity(&fock(&coh, n)?, &v);
    Ok(Check::new(
        format!("encoder α={}", spec.alpha),
        dev.abs(),
        tolerance,
    ))
}

/// First syndrome comparison on a three-mode block with `flipped` modes
/// phase-shifted by π.
pub fn comparison_vs_fock(spec: &QubitSpec, flipped: &[usize], tolerance: f64) -> Result<Check> {
    let a = C64::new(spec.alpha, 0.0);
    let mut block =
        CoherentKet::from_pairs(3, [(spec.mu, vec![-a; 3]), (spec.nu, vec![a; 3])]).normalize()?;
    for &m in flipped {
        block = block.phase_rotation(m, std::f64::consts::PI);
    }
    let n = cutoff(&[&block]);
    let v = fock(&block, n)?.apply_beam_splitter(
        0,
        1,
        &beam_splitter_matrix(FRAC_PI_4, n, SplitterKind::Standard),
    );
    let joint = fock_joint(&v, 0, 1);
    let coh = block
        .beam_splitter(0, 1, FRAC_PI_4)
        .photon_count_distribution_with_bound(0, n, 1.0)?;
    let dev = (0..=n)
        .map(|k| (joint[k].iter().sum::<f64>() - coh.probs[k]).abs())
        .fold(0.0, f64::max);
    Ok(Check::new(
        format!("syndrome count α={} flipped {flipped:?}", spec.alpha),
        dev,
        tolerance,
    ))
}

/// Displacement by mixing with a coherent ancilla, traced in both engines.
pub fn displacement_vs_fock(
    spec: &QubitSpec,
    gamma: C64,
    beta_magnitude: f64,
    tolerance: f64,
) -> Result<Check> {
    let q = make_qubit(spec)?;
    let exact = q.displace(0, gamma);
    let f_coh = simulated_displacement(&q, 0, gamma, beta_magnitude)?.fidelity_pure(&exact);
    let sin = gamma.norm() / beta_magnitude;
    let theta = sin.asin();
    let pre = q.with_coherent_mode(-gamma / sin);
    let post = pre.beam_splitter(0, 1, theta);
    let n = cutoff(&[&pre, &post, &exact]);
    let v = fock(&pre, n)?.apply_beam_splitter(
        0,
        1,
        &beam_splitter_matrix(theta, n, SplitterKind::Standard),
    );
    let t = fock(&exact, n)?;
    let f_fock = v.reduced_density(&[0])?.fidelity_pure(&t) / t.norm_sqr();
    Ok(Check::new(
        format!("simulated displacement γ={gamma} |β|={beta_magnitude}"),
        (f_coh - f_fock).abs(),
        tolerance,
    ))
}

/// Every oracle comparison at amplitudes inside the Fock envelope.
pub fn standard_suite(tolerance: f64) -> Result<Vec<Check>> {
    let c = |re: f64, im: f64| C64::new(re, im);
    let mut checks = Vec::new();
    let spec =
        |mu: C64, nu: C64, alpha: f64, enc: Encoding| QubitSpec::normalized(mu, nu, alpha, enc);
    for alpha in [1.0, 1.5, 2.0] {
        let s = spec(c(0.6, 0.0), c(0.0, 0.8), alpha, Encoding::Pm)?;
        checks.extend(teleport_vs_fock(
            &s,
            &TeleportResource::from_bell(&BellSpec::Symmetric(alpha))?,
            tolerance,
        )?);
        checks.push(error_prob_vs_fock(alpha, 0.7, tolerance)?);
        checks.push(transmit_vs_fock(&s, 0.6, tolerance)?);
    }
    for alpha in [0.8, 1.3] {
        let s = spec(c(0.6, 0.0), c(0.48, 0.64), alpha, Encoding::ZeroAlpha)?;
        checks.extend(teleport_vs_fock(
            &s,
            &TeleportResource::from_bell(&BellSpec::ZeroAlpha(alpha))?,
            tolerance,
        )?);
        checks.push(transmit_vs_fock(&s, 0.6, tolerance)?);
    }
    let beta = 2.0 * (-0.3f64).exp();
    let s = spec(
        c(FRAC_1_SQRT_2, 0.0),
        c(FRAC_1_SQRT_2, 0.0),
        beta,
        Encoding::Pm,
    )?;
    let restore = BellSpec::AmplitudeMatched { beta, alpha: 2.0 };
    checks.extend(teleport_vs_fock(
        &s,
        &TeleportResource::from_bell(&restore)?,
        tolerance,
    )?);
    for alpha in [1.0, 1.5, 2.0] {
        let s = QubitSpec::basis(true, alpha, Encoding::ZeroAlpha);
        checks.extend(hadamard_vs_fock(
            &s,
            &HadamardOptions::default(),
            tolerance,
        )?);
    }
    let s = spec(c(0.6, 0.0), c(0.8, 0.0), 1.2, Encoding::ZeroAlpha)?;
    checks.extend(hadamard_vs_fock(
        &s,
        &HadamardOptions::default(),
        tolerance,
    )?);
    let s = spec(c(0.6, 0.0), c(0.0, 0.8), 1.0, Encoding::Pm)?;
    checks.push(encoder_vs_fock(&s, tolerance)?);
    for flipped in [&[][..], &[0], &[1], &[2]] {
        checks.push(comparison_vs_fock(&s.with_alpha(1.5), flipped, tolerance)?);
    }
    checks.push(displacement_vs_fock(&s, c(0.5, -0.3), 3.0, tolerance)?);
    Ok(checks)
}
