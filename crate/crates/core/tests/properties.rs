// Copyright 2026 The coherent-qubits Authors
// SPDX-License-Identifier: Apache-2.0

use coherent_qubits::algebra::{overlap, CoherentKet, CoherentTerm};
use coherent_qubits::code::general_code_success;
use coherent_qubits::encoding::{make_qubit, qubit_fidelity, Encoding, QubitSpec};
use coherent_qubits::experiments::Grid;
use coherent_qubits::loss::error_prob;
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn complex(radius: f64) -> impl Strategy<Value = C64> {
    (-radius..radius, -radius..radius).prop_map(|(re, im)| C64::new(re, im))
}

fn ket(modes: usize, radius: f64) -> impl Strategy<Value = CoherentKet> {
    prop::collection::vec(
        (complex(1.0), prop::collection::vec(complex(radius), modes)),
        1..6,
    )
    .prop_filter_map("zero norm", move |terms| {
        let terms = terms
            .into_iter()
            .map(|(c, a)| CoherentTerm::new(c, a))
            .collect();
        CoherentKet::from_terms(modes, terms).normalize().ok()
    })
}

fn encoding() -> impl Strategy<Value = Encoding> {
    prop_oneof![Just(Encoding::Pm), Just(Encoding::ZeroAlpha)]
}

fn spec() -> impl Strategy<Value = QubitSpec> {
    (complex(1.0), complex(1.0), 0.3..4.0f64, encoding())
        .prop_filter_map("degenerate", |(mu, nu, a, e)| {
            QubitSpec::normalized(mu, nu, a, e).ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn overlap_modulus_is_gaussian(a in complex(3.0), b in complex(3.0)) {
        let o = overlap(&[b], &[a]);
        prop_assert!((o.norm_sqr() - (-(a - b).norm_sqr()).exp()).abs() < 1e-12);
        prop_assert!((overlap(&[a], &[b]) - o.conj()).norm() < 1e-12);
    }

    #[test]
    fn splitter_inverts(s in ket(2, 3.0), theta in -3.0..3.0f64) {
        let back = s.beam_splitter(0, 1, theta).beam_splitter(0, 1, -theta);
        prop_assert!(back.infidelity(&s) < 1e-12);
        prop_assert!((s.ibeam_splitter(0, 1, theta).norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn displacement_inverts(s in ket(2, 3.0), g in complex(2.0)) {
        prop_assert!(s.displace(1, g).displace(1, -g).infidelity(&s) < 1e-12);
    }

    #[test]
    fn counts_sum_to_one(s in ket(2, 2.0), mode in 0..2usize) {
        let d = s.photon_count_distribution(mode, 80).unwrap();
        let total: f64 = d.probs.iter().sum();
        prop_assert!((total + d.tail - 1.0).abs() < 1e-10);
        prop_assert!(d.probs.iter().all(|&p| p >= -1e-15));
    }

    #[test]
    fn dump_round_trips(s in ket(3, 3.0)) {
        let back = CoherentKet::parse_dump(&s.dump()).unwrap();
        prop_assert!(back.infidelity(&s) < 1e-12);
    }

    #[test]
    fn qubits_match_their_spec(q in spec()) {
        prop_assert!((qubit_fidelity(&make_qubit(&q).unwrap(), &q).unwrap() - 1.0).abs() < 1e-12);
        let back: QubitSpec = q.to_string().parse().unwrap();
        prop_assert!((back.mu - q.mu).norm() < 1e-12 && (back.nu - q.nu).norm() < 1e-12);
        prop_assert_eq!(back.encoding, q.encoding);
    }

    #[test]
    fn hadamard_spec_is_an_involution(q in spec()) {
        let hh = q.h().h();
        prop_assert!((hh.mu - q.mu).norm() < 1e-12 && (hh.nu - q.nu).norm() < 1e-12);
    }

    #[test]
    fn error_prob_is_a_flip_probability(alpha in 0.0..5.0f64, e1 in 0.0..1.0f64, e2 in 0.0..1.0f64) {
        let (lo, hi) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
        let (p_lo, p_hi) = (error_prob(alpha, lo), error_prob(alpha, hi));
        prop_assert!((0.0..0.5).contains(&p_hi) || p_hi == 0.0);
        prop_assert!(p_lo >= p_hi);
        prop_assert_eq!(error_prob(alpha, 1.0), 0.0);
    }

    #[test]
    fn code_success_is_symmetric(n in 1..6usize, p in 0.0..1.0f64) {
        prop_assert!((general_code_success(n, p) + general_code_success(n, 1.0 - p) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn grids_cover_their_range(start in 0.0..5.0f64, len in 0..40usize, step in 0.05..1.0f64) {
        let step = (step * 100.0).round() / 100.0;
        let stop = start + len as f64 * step;
        let g: Grid = format!("{start}:{stop}:{step}").parse().unwrap();
        let pts = g.points();
        prop_assert_eq!(pts.len(), len + 1);
        prop_assert!((pts[len] - stop).abs() < 1e-6);
    }
}
