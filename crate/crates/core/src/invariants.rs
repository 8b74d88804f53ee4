// Copyright 2026 The coherent-qubits Authors
// SPDX-License-Identifier: Apache-2.0

//! Deterministic invariant checks over the whole library. Every check draws
//! its random inputs from a fixed seed.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{CoherentKet, CoherentTerm};
use crate::code::{decode_and_correct, encode, general_code_success};
use crate::encoding::{
    convert_encoding, logical_x, logical_z_physical, make_qubit, qubit_fidelity,
    qubit_fidelity_mixed, Encoding, QubitSpec,
};
use crate::error::Result;
use crate::fock::{
    beam_splitter_matrix, displacement_matrix, CutoffPolicy, FockVector, SplitterKind,
};
use crate::loss::{channel_mixture, error_prob, transmit, ChannelParams};
use crate::oracle::{raw_target, Check};
use crate::protocols::{
    hadamard_report, make_bell, teleport_failure_prob, BellSpec, HadamardOptions, TeleportResource,
};

const SEED: u64 = 0x5eed;

fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(SEED);
    r.set_stream(stream);
    r
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn random_c<R: Rng>(rng: &mut R, radius: f64) -> C64 {
    let r = radius * rng.gen::<f64>().sqrt();
    C64::from_polar(r, rng.gen_range(0.0..2.0 * PI))
}

/// Normalized superposition of up to `max_terms` product coherent states.
fn random_ket<R: Rng>(rng: &mut R, modes: usize, max_terms: usize, radius: f64) -> CoherentKet {
    let terms = (0..rng.gen_range(1..=max_terms))
        .map(|_| {
            CoherentTerm::new(
                random_c(rng, 1.0),
                (0..modes).map(|_| random_c(rng, radius)).collect(),
            )
        })
        .collect();
    CoherentKet::from_terms(modes, terms)
        .normalize()
        .expect("random terms have weight")
}

fn random_spec<R: Rng>(rng: &mut R, alpha: f64, encoding: Encoding) -> QubitSpec {
    QubitSpec::normalized(random_c(rng, 1.0), random_c(rng, 1.0), alpha, encoding)
        .expect("nonzero coefficients")
}

/// `‖a − b‖`.
fn distance(a: &CoherentKet, b: &CoherentKet) -> f64 {
    a.add(&b.scale(c(-1.0, 0.0))).norm_sqr().max(0.0).sqrt()
}

fn overlap_defect(a: &CoherentKet, b: &CoherentKet) -> f64 {
    1.0 - a.inner(b).norm_sqr() / (a.norm_sqr() * b.norm_sqr())
}

/// Largest upward step of a sequence that should not increase.
fn rise(values: &[f64]) -> f64 {
    values.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
}

fn unitarity() -> Check {
    let mut rng = rng(1);
    let mut dev: f64 = 0.0;
    for _ in 0..50 {
        let modes = rng.gen_range(2..=4);
        let s = random_ket(&mut rng, modes, 8, 4.0);
        let (i, j) = (rng.gen_range(0..modes), rng.gen_range(0..modes - 1));
        let j = if j >= i { j + 1 } else { j };
        let theta = rng.gen_range(-PI..PI);
        for t in [
            s.displace(i, random_c(&mut rng, 2.0)),
            s.beam_splitter(i, j, theta),
            s.ibeam_splitter(i, j, theta),
            s.phase_rotation(i, theta),
        ] {
            dev = dev.max((t.norm_sqr() - 1.0).abs());
        }
    }
    Check::new("algebra: unitaries preserve the norm", dev, 1e-12)
}

fn splitter_composition() -> Check {
    let mut rng = rng(2);
    let mut dev: f64 = 0.0;
    for _ in 0..50 {
        let s = random_ket(&mut rng, 3, 8, 4.0);
        let (t1, t2) = (rng.gen_range(-PI..PI), rng.gen_range(-PI..PI));
        let two = s.beam_splitter(0, 2, t1).beam_splitter(0, 2, t2);
        dev = dev.max(distance(&two, &s.beam_splitter(0, 2, t1 + t2)));
    }
    Check::new("algebra: splitter angles add", dev, 1e-12)
}

fn displacement_phase_law() -> Check {
    let mut rng = rng(3);
    let mut dev: f64 = 0.0;
    for _ in 0..50 {
        let s = random_ket(&mut rng, 2, 8, 3.0);
        let (g, d) = (random_c(&mut rng, 2.0), random_c(&mut rng, 2.0));
        let phase = ((g * d.conj() - g.conj() * d) / 2.0).exp();
        let two = s.displace(1, d).displace(1, g);
        dev = dev.max(distance(&two, &s.displace(1, g + d).scale(phase)));
    }
    Check::new("algebra: displacement phase law", dev, 1e-12)
}

fn measurement_completeness() -> Result<Check> {
    let mut rng = rng(4);
    let mut dev: f64 = 0.0;
    for _ in 0..30 {
        let s = random_ket(&mut rng, 3, 6, 3.0);
        let mode = rng.gen_range(0..3);
        let n_max = rng.gen_range(5..40);
        let d = s.photon_count_distribution_with_bound(mode, n_max, 1.0)?;
        let (even, odd) = s.parity_probabilities(mode);
        let (de, dodd) = d.even_odd();
        let total: f64 = d.probs.iter().sum();
        dev = dev.max(((1.0 - total).abs() - d.tail).max(0.0));
        dev = dev.max((even + odd - 1.0).abs());
        if d.tail < 1e-13 {
            dev = dev.max((even - de).abs()).max((odd - dodd).abs());
        }
    }
    Ok(Check::new(
        "algebra: count distribution and parity are complete",
        dev,
        1e-12,
    ))
}

fn operation_oracle() -> Result<Check> {
    let mut rng = rng(5);
    let mut dev: f64 = 0.0;
    for _ in 0..10 {
        let a = random_ket(&mut rng, 2, 4, 1.5);
        let b = random_ket(&mut rng, 2, 4, 1.5);
        let g = random_c(&mut rng, 1.0);
        let theta = rng.gen_range(-PI..PI);
        let phi = rng.gen_range(-PI..PI);
        let n = CutoffPolicy::default().cutoff_for(9.0);
        let fa = FockVector::from_coherent_ket_at(&a, n)?.0;
        let fb = FockVector::from_coherent_ket_at(&b, n)?.0;
        let pairs = [
            (
                a.displace(0, g),
                fa.apply_single(0, &displacement_matrix(g, n)),
            ),
            (
                a.beam_splitter(0, 1, theta),
                fa.apply_beam_splitter(
                    0,
                    1,
                    &beam_splitter_matrix(theta, n, SplitterKind::Standard),
                ),
            ),
            (
                a.ibeam_splitter(0, 1, theta),
                fa.apply_beam_splitter(
                    0,
                    1,
                    &beam_splitter_matrix(theta, n, SplitterKind::Imaginary),
                ),
            ),
            (a.phase_rotation(1, phi), fa.phase_rotation(1, phi)),
        ];
        for (coh, fock) in pairs {
            dev = dev.max((b.inner(&coh) - fb.inner(&fock)).norm());
        }
    }
    Ok(Check::new(
        "fock: single operations match the coherent algebra",
        dev,
        1e-8,
    ))
}

fn oracle_unitarity() -> Check {
    let n = 40;
    let mut dev: f64 = 0.0;
    let d = displacement_matrix(c(0.7, -0.4), n);
    let b = beam_splitter_matrix(0.9, n, SplitterKind::Standard).to_dense();
    let ib = beam_splitter_matrix(0.9, n, SplitterKind::Imaginary).to_dense();
    for u in [d, b, ib] {
        // columns whose images keep their weight inside the truncation
        let k = u.ncols() / 2;
        let low = u.columns(0, k);
        let defect = low.adjoint() * low - nalgebra::DMatrix::<C64>::identity(k, k);
        dev = dev.max(defect.iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    Check::new("fock: truncated unitaries are unitary", dev, 1e-10)
}

fn cutoff_monotonicity() -> Result<Check> {
    let cat = CoherentKet::from_pairs(
        1,
        [
            (c(1.0, 0.0), vec![c(-2.0, 0.0)]),
            (c(1.0, 0.0), vec![c(2.0, 0.0)]),
        ],
    )
    .normalize()?;
    let (small, tail) = FockVector::from_coherent_ket_at(&cat, 15)?;
    let (large, _) = FockVector::from_coherent_ket_at(&cat, 40)?;
    let (small, large) = (small.normalize()?, large.normalize()?);
    let dev = (0..=15)
        .map(|k| (small.amplitude(&[k]).norm_sqr() - large.amplitude(&[k]).norm_sqr()).abs())
        .fold(0.0, f64::max);
    Ok(Check::new(
        "fock: raising the cutoff moves probabilities by at most the tail",
        (dev - tail).max(0.0),
        1e-12,
    ))
}

fn near_orthogonality() -> Check {
    let mut rng = rng(6);
    let mut dev: f64 = 0.0;
    for alpha in [2.0, 2.5, 3.0, 4.0] {
        for _ in 0..25 {
            dev = dev.max(
                (random_spec(&mut rng, alpha, Encoding::Pm)
                    .norm_factor()
                    .value
                    - 1.0)
                    .abs(),
            );
        }
    }
    Check::new("encoding: |N(α) − 1| for α ≥ 2", dev, 7e-4)
}

fn conversion_commutes() -> Result<Check> {
    let mut rng = rng(7);
    let mut dev: f64 = 0.0;
    for _ in 0..20 {
        let alpha = rng.gen_range(0.5..3.0);
        let q = make_qubit(&random_spec(&mut rng, alpha, Encoding::Pm))?;
        let to_za =
            |s: &CoherentKet| convert_encoding(s, 0, Encoding::Pm, Encoding::ZeroAlpha, alpha);
        let x1 = to_za(&logical_x(&q, 0, Encoding::Pm, alpha));
        let x2 = logical_x(&to_za(&q), 0, Encoding::ZeroAlpha, alpha);
        let z1 = to_za(&logical_z_physical(&q, 0, Encoding::Pm, alpha)?);
        let z2 = logical_z_physical(&to_za(&q), 0, Encoding::ZeroAlpha, alpha)?;
        dev = dev
            .max(overlap_defect(&x1, &x2))
            .max(overlap_defect(&z1, &z2));
    }
    Ok(Check::new(
        "encoding: conversion commutes with X and Z",
        dev,
        1e-10,
    ))
}

fn qubit_round_trip() -> Result<Check> {
    let mut rng = rng(8);
    let mut dev: f64 = 0.0;
    for k in 0..100 {
        let enc = if k % 2 == 0 {
            Encoding::Pm
        } else {
            Encoding::ZeroAlpha
        };
        let alpha = rng.gen_range(0.5..4.0);
        let spec = random_spec(&mut rng, alpha, enc);
        dev = dev.max((qubit_fidelity(&make_qubit(&spec)?, &spec)? - 1.0).abs());
    }
    Ok(Check::new(
        "encoding: make_qubit has fidelity 1 to its spec",
        dev,
        1e-12,
    ))
}

const ALPHAS: [f64; 5] = [0.5, 1.0, 1.5, 2.0, 3.0];
const ETAS: [f64; 5] = [0.3, 0.5, 0.8, 0.95, 1.0];

fn mixture_matches_error_prob() -> Result<Check> {
    let mut dev: f64 = 0.0;
    for alpha in ALPHAS {
        for eta in ETAS {
            let (mix, _, _) = channel_mixture(&QubitSpec::plus(alpha, Encoding::Pm), eta)?;
            dev = dev.max((mix.pe - error_prob(alpha, eta)).abs());
        }
    }
    Ok(Check::new("loss: channel mixture carries P_e", dev, 1e-12))
}

fn traced_fidelity() -> Result<Check> {
    let mut rng = rng(9);
    let mut dev: f64 = 0.0;
    for alpha in ALPHAS {
        for eta in ETAS {
            let spec = random_spec(&mut rng, alpha, Encoding::Pm);
            let (mix, q, zq) = channel_mixture(&spec, eta)?;
            let (s, env) = transmit(&make_qubit(&spec)?, 0, &ChannelParams::from_eta(eta)?);
            let want = mix.p_no_error + mix.p_z_error * q.inner(&zq).norm_sqr();
            dev = dev.max((s.trace_out(env).fidelity_pure(&q) - want).abs());
        }
    }
    Ok(Check::new(
        "loss: surviving fidelity equals the Z-mixture value",
        dev,
        1e-10,
    ))
}

fn loss_composition() -> Result<Check> {
    let mut rng = rng(10);
    let mut dev: f64 = 0.0;
    for _ in 0..10 {
        let alpha = rng.gen_range(0.5..3.0);
        let spec = random_spec(&mut rng, alpha, Encoding::Pm);
        let (e1, e2) = (rng.gen_range(0.2..1.0), rng.gen_range(0.2..1.0));
        let q = make_qubit(&spec)?;
        let (s, _) = transmit(&q, 0, &ChannelParams::from_eta(e1)?);
        let (s, _) = transmit(&s, 0, &ChannelParams::from_eta(e2)?);
        let two = s.reduce_to(&[0]);
        let (one, env) = transmit(&q, 0, &ChannelParams::from_eta(e1 * e2)?);
        dev = dev.max(two.hs_distance_sqr(&one.trace_out(env)).abs());
    }
    Ok(Check::new(
        "loss: transmissivities multiply (squared HS distance)",
        dev,
        1e-12,
    ))
}

fn loss_energy() -> Result<Check> {
    let mut rng = rng(11);
    let mut dev: f64 = 0.0;
    for _ in 0..10 {
        let a = random_c(&mut rng, 3.0);
        let eta = rng.gen_range(0.0..1.0);
        let (s, env) = transmit(
            &CoherentKet::coherent(&[a]),
            0,
            &ChannelParams::from_eta(eta)?,
        );
        dev = dev.max((s.trace_out(env).mean_photon_number(0) - eta * a.norm_sqr()).abs());
    }
    Ok(Check::new(
        "loss: mean photon number scales by η",
        dev,
        1e-10,
    ))
}

/// Probabilities that the first, the second and both counting modes read
/// zero after the teleportation splitter.
fn vacuum_probs(full: &CoherentKet, a: usize, b: usize) -> (f64, f64, f64) {
    let n = full.norm_sqr();
    (
        full.project_vacuum(&[a]).norm_sqr() / n,
        full.project_vacuum(&[b]).norm_sqr() / n,
        full.project_vacuum(&[a, b]).norm_sqr() / n,
    )
}

fn teleport_exactness() -> Result<Vec<Check>> {
    let mut rng = rng(12);
    let (mut dev_f, mut dev_x): (f64, f64) = (0.0, 0.0);
    for _ in 0..20 {
        let alpha = rng.gen_range(1.0..4.0);
        let spec = random_spec(&mut rng, alpha, Encoding::Pm);
        let res = TeleportResource::from_bell(&BellSpec::Symmetric(alpha))?;
        let full = make_qubit(&spec)?
            .tensor(&res.state)
            .beam_splitter(1, 0, FRAC_PI_4);
        let (p1, p2, p12) = vacuum_probs(&full, 0, 1);
        dev_x = dev_x.max((1.0 - p1 - p2 + p12).abs());
        let n_max = crate::algebra::default_n_max(&full, 0);
        for (first, n) in (1..=n_max)
            .map(|n| (0, n))
            .chain((1..=n_max).map(|n| (1, n)))
        {
            let Some(s) = full.project_photon_count(first, n)?.state else {
                continue;
            };
            let Some(raw) = s.project_photon_count(0, 0)?.state else {
                continue;
            };
            dev_f = dev_f.max(
                (qubit_fidelity(&raw, &raw_target(spec, first == 1, n % 2 == 1))? - 1.0).abs(),
            );
        }
    }
    Ok(vec![
        Check::new("teleport: every successful outcome is exact", dev_f, 1e-12),
        Check::new("teleport: both detectors never fire", dev_x, 1e-12),
    ])
}

fn teleport_monotone() -> Result<Vec<Check>> {
    let alphas: Vec<f64> = (5..=40).map(|k| k as f64 / 10.0).collect();
    let fail: Vec<f64> = alphas
        .iter()
        .map(|&a| {
            let q = make_qubit(&QubitSpec::plus(a, Encoding::Pm))?;
            Ok(teleport_failure_prob(
                &q,
                0,
                &TeleportResource::from_bell(&BellSpec::Symmetric(a))?,
            ))
        })
        .collect::<Result<_>>()?;
    let mut decay: f64 = 0.0;
    for (k, &a) in alphas.iter().enumerate() {
        if let Some(&next) = fail.get(k + 5) {
            decay = decay.max(next / fail[k] - (-a + 0.5).exp());
        }
    }
    Ok(vec![
        Check::new(
            "teleport: success probability increases with α",
            rise(&fail),
            0.0,
        ),
        Check::new(
            "teleport: failure shrinks by e^{0.5−α} per 0.5 step",
            decay.max(0.0),
            0.0,
        ),
    ])
}

fn hadamard_self_consistency() -> Result<Check> {
    let mut dev: f64 = 0.0;
    for alpha in [0.5, 1.0, 2.0, 3.0] {
        let r = hadamard_report(
            &QubitSpec::basis(true, alpha, Encoding::ZeroAlpha),
            &HadamardOptions::default(),
        )?;
        let sum: f64 = r
            .per_outcome
            .iter()
            .map(|o| o.probability * o.fidelity)
            .sum();
        dev = dev.max((sum - r.average_fidelity).abs());
    }
    Ok(Check::new(
        "hadamard: average fidelity is the outcome-weighted sum",
        dev,
        1e-12,
    ))
}

fn bell_symmetry() -> Result<Check> {
    let mut dev: f64 = 0.0;
    for alpha in [0.5, 1.0, 2.0, 3.0] {
        let b = make_bell(&BellSpec::Symmetric(alpha))?;
        dev = dev.max((1.0 - b.inner(&b.swap_modes(0, 1)).norm()).abs());
    }
    Ok(Check::new(
        "teleport: the symmetric Bell pair is swap invariant",
        dev,
        1e-12,
    ))
}

fn encoder_linearity_and_energy() -> Result<Vec<Check>> {
    let mut rng = rng(13);
    let (mut dev_l, mut dev_e): (f64, f64) = (0.0, 0.0);
    for _ in 0..10 {
        let a = rng.gen_range(0.5..2.5) * 3f64.sqrt();
        let spec = random_spec(&mut rng, a, Encoding::Pm);
        let (mu, nu) = (spec.mu, spec.nu);
        let zero = CoherentKet::coherent(&[c(-a, 0.0)]);
        let one = CoherentKet::coherent(&[c(a, 0.0)]);
        let sum = zero.scale(mu).add(&one.scale(nu));
        let lhs = encode(&sum, 0, 3).0;
        let rhs = encode(&zero, 0, 3)
            .0
            .scale(mu)
            .add(&encode(&one, 0, 3).0.scale(nu));
        dev_l = dev_l.max(distance(&lhs, &rhs));
        let (s, modes) = encode(&one, 0, 3);
        let total: f64 = modes
            .iter()
            .map(|&m| s.reduce_to(&[m]).mean_photon_number(0))
            .sum();
        dev_e = dev_e.max((total - a * a).abs());
    }
    Ok(vec![
        Check::new("code: encoder is linear", dev_l, 1e-12),
        Check::new("code: encoder conserves photon number", dev_e, 1e-10),
    ])
}

fn block(spec: &QubitSpec, flipped: Option<usize>) -> Result<CoherentKet> {
    let a = c(spec.alpha, 0.0);
    let s =
        CoherentKet::from_pairs(3, [(spec.mu, vec![-a; 3]), (spec.nu, vec![a; 3])]).normalize()?;
    Ok(match flipped {
        Some(m) => s.phase_rotation(m, PI),
        None => s,
    })
}

fn syndrome_locality_and_correction() -> Result<Vec<Check>> {
    let mut rng = rng(14);
    let spec = QubitSpec::normalized(c(0.6, 0.0), c(0.0, 0.8), 2.0, Encoding::Pm)?;
    let (mut dev_loc, mut dev_fix): (f64, f64) = (0.0, 0.0);
    let tail = block(&spec, Some(2))?.beam_splitter(0, 1, FRAC_PI_4);
    dev_loc = dev_loc.max(1.0 - tail.project_vacuum(&[0]).norm_sqr() / tail.norm_sqr());
    for bad in 0..3 {
        let s = block(&spec, Some(bad))?;
        for _ in 0..1000 {
            let (rec, out_state, out) = decode_and_correct(&s, &[0, 1, 2], spec.alpha, &mut rng)?;
            let fired = rec.comparisons.iter().filter(|c| c.count > 0).count();
            if fired > 1 {
                dev_loc = dev_loc.max(1.0);
            }
            // a silent first comparison on a flipped pair is an undetected error
            let missed = bad < 2 && rec.comparisons[0].count == 0;
            if fired == 1 && !missed {
                let f = qubit_fidelity_mixed(&out_state.reduce_to(&[out]), &spec)?;
                dev_fix = dev_fix.max((f - 1.0).abs());
            }
        }
    }
    Ok(vec![
        Check::new(
            "code: one flipped mode fires at most one comparison",
            dev_loc,
            1e-12,
        ),
        Check::new(
            "code: a fired comparison restores the qubit",
            dev_fix,
            1e-10,
        ),
    ])
}

fn code_monotone_in_n() -> Check {
    let mut dev: f64 = 0.0;
    for k in 1..20 {
        let pe = k as f64 / 20.0;
        let ps: Vec<f64> = (1..=6).map(|n| general_code_success(n, pe)).collect();
        let falling: Vec<f64> = ps.iter().map(|p| -p).collect();
        if pe < 0.5 {
            dev = dev.max(rise(&falling));
        } else if pe > 0.5 {
            dev = dev.max(rise(&ps));
        }
    }
    Check::new("code: success improves with n iff P_e < 1/2", dev, 0.0)
}

/// Every invariant check, in library order.
pub fn suite() -> Result<Vec<Check>> {
    let mut checks = vec![
        unitarity(),
        splitter_composition(),
        displacement_phase_law(),
    ];
    checks.push(measurement_completeness()?);
    checks.push(operation_oracle()?);
    checks.push(oracle_unitarity());
    checks.push(cutoff_monotonicity()?);
    checks.push(near_orthogonality());
    checks.push(conversion_commutes()?);
    checks.push(qubit_round_trip()?);
    checks.push(mixture_matches_error_prob()?);
    checks.push(traced_fidelity()?);
    checks.push(loss_composition()?);
    checks.push(loss_energy()?);
    checks.extend(teleport_exactness()?);
    checks.extend(teleport_monotone()?);
    checks.push(bell_symmetry()?);
    checks.push(hadamard_self_consistency()?);
    checks.extend(encoder_linearity_and_energy()?);
    checks.extend(syndrome_locality_and_correction()?);
    checks.push(code_monotone_in_n());
    Ok(checks)
}
