// Copyright 2026 The coherent-qubits Authors
// SPDX-License-Identifier: Apache-2.0

//! Logical qubits in the `(−α, α)` and `(0, 2α)` encodings.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;

use crate::algebra::{CoherentDensity, CoherentKet, CoherentTerm};
use crate::error::{Error, Result};

/// Tolerance for membership in the logical span.
pub const SPAN_TOL: f64 = 1e-12;

/// Threshold on `N` below which a spec is rejected as null.
pub const DEGENERATE_NORM: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Encoding {
    /// `|0_L⟩ = |−α⟩`, `|1_L⟩ = |α⟩`.
    Pm,
    /// `|0_L⟩ = |0⟩`, `|1_L⟩ = |2α⟩`.
    ZeroAlpha,
}

impl Encoding {
    /// Coherent amplitudes of `|0_L⟩` and `|1_L⟩`.
    pub fn logical_amplitudes(self, alpha: f64) -> (C64, C64) {
        match self {
            Encoding::Pm => (C64::new(-alpha, 0.0), C64::new(alpha, 0.0)),
            Encoding::ZeroAlpha => (C64::new(0.0, 0.0), C64::new(2.0 * alpha, 0.0)),
        }
    }
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Encoding::Pm => "pm",
            Encoding::ZeroAlpha => "zeroalpha",
        })
    }
}

impl FromStr for Encoding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pm" => Ok(Encoding::Pm),
            "zeroalpha" => Ok(Encoding::ZeroAlpha),
            other => Err(Error::InvalidParameter(format!(
                "unknown encoding `{other}`"
            ))),
        }
    }
}

/// Logical content `(μ, ν)` of a qubit together with its amplitude and
/// encoding.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitSpec {
    pub mu: C64,
    pub nu: C64,
    pub alpha: f64,
    pub encoding: Encoding,
}

impl QubitSpec {
    /// Validates `|μ|² + |ν|² = 1` and `α > 0`.
    pub fn new(mu: C64, nu: C64, alpha: f64, encoding: Encoding) -> Result<Self> {
        let norm = mu.norm_sqr() + nu.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized(norm));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "alpha must be positive, got {alpha}"
            )));
        }
        Ok(Self {
            mu,
            nu,
            alpha,
            encoding,
        })
    }

    /// Like [`QubitSpec::new`] but rescales `(μ, ν)` to unit norm first.
    pub fn normalized(mu: C64, nu: C64, alpha: f64, encoding: Encoding) -> Result<Self> {
        let norm = (mu.norm_sqr() + nu.norm_sqr()).sqrt();
        if !(norm > 0.0) {
            return Err(Error::ZeroNorm);
        }
        Self::new(mu / norm, nu / norm, alpha, encoding)
    }

    /// `μ = ν = 1/√2`.
    pub fn plus(alpha: f64, encoding: Encoding) -> Self {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self {
            mu: h,
            nu: h,
            alpha,
            encoding,
        }
    }

    /// `|0_L⟩` (`bit = false`) or `|1_L⟩` (`bit = true`).
    pub fn basis(bit: bool, alpha: f64, encoding: Encoding) -> Self {
        let (one, zero) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
        let (mu, nu) = if bit { (zero, one) } else { (one, zero) };
        Self {
            mu,
            nu,
            alpha,
            encoding,
        }
    }

    pub fn with_alpha(self, alpha: f64) -> Self {
        Self { alpha, ..self }
    }

    pub fn with_encoding(self, encoding: Encoding) -> Self {
        Self { encoding, ..self }
    }

    pub fn norm_factor(&self) -> NormFactor {
        NormFactor::new(self.alpha, self.mu, self.nu)
    }

    pub fn logical_amplitudes(&self) -> (C64, C64) {
        self.encoding.logical_amplitudes(self.alpha)
    }

    /// `(μ, ν) → (ν, μ)`.
    pub fn x(self) -> Self {
        Self {
            mu: self.nu,
            nu: self.mu,
            ..self
        }
    }

    /// `(μ, ν) → (μ, −ν)`.
    pub fn z(self) -> Self {
        Self {
            nu: -self.nu,
            ..self
        }
    }

    /// Exact logical Hadamard `(μ, ν) → ((μ+ν), (μ−ν))/√2`.
    pub fn h(self) -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            mu: (self.mu + self.nu) * s,
            nu: (self.mu - self.nu) * s,
            ..self
        }
    }
}

impl fmt::Display for QubitSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{},{},{},{}",
            self.mu.re, self.mu.im, self.nu.re, self.nu.im, self.alpha, self.encoding
        )
    }
}

impl FromStr for QubitSpec {
    type Err = Error;

    /// `mu_re,mu_im,nu_re,nu_im,alpha,encoding`; `(μ, ν)` is rescaled to
    /// unit norm.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 6 {
            return Err(Error::InvalidParameter(format!(
                "expected mu_re,mu_im,nu_re,nu_im,alpha,encoding, got `{s}`"
            )));
        }
        let num = |i: usize| -> Result<f64> {
            parts[i]
                .parse::<f64>()
                .map_err(|e| Error::InvalidParameter(format!("`{}`: {e}", parts[i])))
        };
        let mu = C64::new(num(0)?, num(1)?);
        let nu = C64::new(num(2)?, num(3)?);
        Self::normalized(mu, nu, num(4)?, parts[5].parse()?)
    }
}

/// `N(α) = 1 + e^{−2α²}·2Re(μν̄)`, shared by both encodings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormFactor {
    pub value: f64,
}

impl NormFactor {
    pub fn new(alpha: f64, mu: C64, nu: C64) -> Self {
        Self {
            value: 1.0 + (-2.0 * alpha * alpha).exp() * 2.0 * (mu * nu.conj()).re,
        }
    }
}

/// Normalized single-mode state `(μ|0_L⟩ + ν|1_L⟩)/√N`.
pub fn make_qubit(spec: &QubitSpec) -> Result<CoherentKet> {
    let n = spec.norm_factor().value;
    if n <= DEGENERATE_NORM {
        return Err(Error::DegenerateQubit(n));
    }
    let (zero, one) = spec.logical_amplitudes();
    let s = 1.0 / n.sqrt();
    let terms = vec![
        CoherentTerm::new(spec.mu * s, vec![zero]),
        CoherentTerm::new(spec.nu * s, vec![one]),
    ];
    Ok(CoherentKet::from_terms(1, terms))
}

/// Moves `mode` between encodings with `D(±α)`.
pub fn convert_encoding(
    state: &CoherentKet,
    mode: usize,
    from: Encoding,
    to: Encoding,
    alpha: f64,
) -> CoherentKet {
    match (from, to) {
        (Encoding::Pm, Encoding::ZeroAlpha) => state.displace(mode, C64::new(alpha, 0.0)),
        (Encoding::ZeroAlpha, Encoding::Pm) => state.displace(mode, C64::new(-alpha, 0.0)),
        _ => state.clone(),
    }
}

/// Logical X: `U(π)` for PM, `U(π)D(−2α)` for ZeroAlpha.
pub fn logical_x(state: &CoherentKet, mode: usize, encoding: Encoding, alpha: f64) -> CoherentKet {
    match encoding {
        Encoding::Pm => state.phase_rotation(mode, PI),
        Encoding::ZeroAlpha => state
            .displace(mode, C64::new(-2.0 * alpha, 0.0))
            .phase_rotation(mode, PI),
    }
}

/// Logical Z as a relabeling of the spec.
pub fn logical_z(spec: &QubitSpec) -> QubitSpec {
    spec.z()
}

/// Negates every term whose amplitude on `mode` is the logical one. Every
/// amplitude on `mode` must lie in the logical span.
pub fn logical_z_physical(
    state: &CoherentKet,
    mode: usize,
    encoding: Encoding,
    alpha: f64,
) -> Result<CoherentKet> {
    let (zero, one) = encoding.logical_amplitudes(alpha);
    for a in state.distinct_amplitudes(mode) {
        if (a - zero).norm() > SPAN_TOL && (a - one).norm() > SPAN_TOL {
            return Err(Error::NotInLogicalSpan);
        }
    }
    Ok(z_nearest(state, mode, zero, one))
}

/// Negates every term whose amplitude on `mode` is closer to `one` than to
/// `zero`.
pub fn z_nearest(state: &CoherentKet, mode: usize, zero: C64, one: C64) -> CoherentKet {
    state.weight_by_mode(mode, |a| {
        if (a - one).norm() < (a - zero).norm() {
            C64::new(-1.0, 0.0)
        } else {
            C64::new(1.0, 0.0)
        }
    })
}

/// `|⟨Q_spec|ψ⟩|²` for a single-mode state, normalizing `ψ` first.
pub fn qubit_fidelity(state: &CoherentKet, spec: &QubitSpec) -> Result<f64> {
    let q = make_qubit(spec)?;
    let psi = state.normalize()?;
    Ok(q.inner(&psi).norm_sqr())
}

/// `⟨Q_spec|ρ|Q_spec⟩`.
pub fn qubit_fidelity_mixed(rho: &CoherentDensity, spec: &QubitSpec) -> Result<f64> {
    Ok(rho.fidelity_pure(&make_qubit(spec)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn basis_zero_is_minus_alpha() {
        let q = make_qubit(&QubitSpec::basis(false, 1.7, Encoding::Pm)).unwrap();
        assert_eq!(q.len(), 1);
        assert_eq!(q.terms()[0].amps, vec![c(-1.7)]);
    }

    #[test]
    fn norm_factor_matches_both_encodings() {
        for enc in [Encoding::Pm, Encoding::ZeroAlpha] {
            let spec = QubitSpec::plus(2.0, enc);
            assert!((spec.norm_factor().value - (1.0 + (-8.0f64).exp())).abs() < 1e-15);
            assert!((make_qubit(&spec).unwrap().norm_sqr() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn degenerate_spec_is_rejected() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let spec = QubitSpec::new(c(h), c(-h), 1e-9, Encoding::Pm).unwrap();
        assert!(matches!(make_qubit(&spec), Err(Error::DegenerateQubit(_))));
    }

    #[test]
    fn conversion_of_basis_state() {
        let q = make_qubit(&QubitSpec::basis(false, 2.0, Encoding::Pm)).unwrap();
        let z = convert_encoding(&q, 0, Encoding::Pm, Encoding::ZeroAlpha, 2.0);
        assert!((z.inner(&CoherentKet::vacuum(1)) - 1.0).norm() < 1e-15);
    }

    #[test]
    fn x_swaps_zero_alpha_basis() {
        let alpha = 1.5;
        let spec =
            QubitSpec::normalized(c(0.6), C64::new(0.0, 0.8), alpha, Encoding::ZeroAlpha).unwrap();
        let flipped = logical_x(&make_qubit(&spec).unwrap(), 0, Encoding::ZeroAlpha, alpha);
        assert!((qubit_fidelity(&flipped, &spec.x()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pm_x_negates_amplitudes() {
        let spec = QubitSpec::normalized(c(0.3), c(0.9), 2.0, Encoding::Pm).unwrap();
        let flipped = logical_x(&make_qubit(&spec).unwrap(), 0, Encoding::Pm, 2.0);
        assert!((qubit_fidelity(&flipped, &spec.x()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn physical_z_checks_span() {
        let spec = QubitSpec::plus(1.0, Encoding::Pm);
        let q = make_qubit(&spec).unwrap();
        let z = logical_z_physical(&q, 0, Encoding::Pm, 1.0).unwrap();
        assert!((qubit_fidelity(&z, &logical_z(&spec)).unwrap() - 1.0).abs() < 1e-12);
        let off = q.displace(0, c(0.1));
        assert!(matches!(
            logical_z_physical(&off, 0, Encoding::Pm, 1.0),
            Err(Error::NotInLogicalSpan)
        ));
        let zero = make_qubit(&QubitSpec::basis(false, 1.0, Encoding::Pm)).unwrap();
        assert_eq!(
            logical_z_physical(&zero, 0, Encoding::Pm, 1.0).unwrap(),
            zero
        );
    }

    #[test]
    fn spec_text_round_trip() {
        let spec: QubitSpec = "0.6,0,0,0.8,2,zeroalpha".parse().unwrap();
        assert_eq!(spec.encoding, Encoding::ZeroAlpha);
        assert_eq!(spec.to_string(), "0.6,0,0,0.8,2,zeroalpha");
        let unnormalized: QubitSpec = "1,0,1,0,1.5,pm".parse().unwrap();
        assert!((unnormalized.mu.re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!("1,0,1,0,1.5,foo".parse::<QubitSpec>().is_err());
        assert!("1,0,1,0".parse::<QubitSpec>().is_err());
        assert!("0,0,0,0,1,pm".parse::<QubitSpec>().is_err());
    }

    #[test]
    fn nearly_orthogonal_specs_at_three() {
        let a = QubitSpec::basis(false, 3.0, Encoding::Pm);
        let b = QubitSpec::plus(3.0, Encoding::Pm);
        let f = qubit_fidelity(&make_qubit(&a).unwrap(), &b).unwrap();
        let direct = (C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0) * (1.0 + (-18.0f64).exp()))
            .norm_sqr()
            / b.norm_factor().value;
        assert!((f - direct).abs() < 1e-14);
    }
}
