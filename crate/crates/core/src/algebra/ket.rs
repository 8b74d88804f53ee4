// Copyright 2026 The coherent-qubits Authors
// SPDX-License-Identifier: Apache-2.0

use std::collections::HashMap;
use std::fmt::Write as _;

use num_complex::Complex64 as C64;

use super::overlap;
use crate::error::{Error, Result};

/// Terms whose coefficient magnitude falls below this are dropped.
pub const PRUNE_TOL: f64 = 1e-15;
/// Two amplitude vectors closer than this (per component) are one term.
pub const MERGE_TOL: f64 = 1e-13;

/// One weighted product of coherent states.
#[derive(Clone, Debug, PartialEq)]
pub struct CoherentTerm {
    pub coeff: C64,
    pub amps: Vec<C64>,
}

impl CoherentTerm {
    pub fn new(coeff: C64, amps: Vec<C64>) -> Self {
        Self { coeff, amps }
    }
}

/// Pure state of `modes` optical modes, `Σ_k c_k |a_k⟩`.
///
/// Values are immutable: every operation returns a new state.
#[derive(Clone, Debug, PartialEq)]
pub struct CoherentKet {
    modes: usize,
    terms: Vec<CoherentTerm>,
}

impl CoherentKet {
    /// Builds a state from raw terms, merging duplicates and pruning
    /// negligible coefficients. The result is not normalized.
    ///
    /// Panics if a term's amplitude list does not have `modes` entries.
    pub fn from_terms(modes: usize, terms: Vec<CoherentTerm>) -> Self {
        for t in &terms {
            assert_eq!(t.amps.len(), modes, "term has the wrong number of modes");
        }
        Self { modes, terms }.canonical()
    }

    /// Shorthand for `from_terms` with `(coeff, amps)` pairs.
    pub fn from_pairs<I>(modes: usize, pairs: I) -> Self
    where
        I: IntoIterator<Item = (C64, Vec<C64>)>,
    {
        Self::from_terms(
            modes,
            pairs
                .into_iter()
                .map(|(c, a)| CoherentTerm::new(c, a))
                .collect(),
        )
    }

    /// The product state `|a_1⟩|a_2⟩…`.
    pub fn coherent(amps: &[C64]) -> Self {
        Self {
            modes: amps.len(),
            terms: vec![CoherentTerm::new(C64::new(1.0, 0.0), amps.to_vec())],
        }
    }

    pub fn vacuum(modes: usize) -> Self {
        Self::coherent(&vec![C64::new(0.0, 0.0); modes])
    }

    pub(crate) fn from_terms_unchecked(modes: usize, terms: Vec<CoherentTerm>) -> Self {
        Self { modes, terms }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn terms(&self) -> &[CoherentTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &CoherentKet) -> C64 {
        assert_eq!(self.modes, other.modes, "inner: mode count mismatch");
        let mut acc = C64::new(0.0, 0.0);
        for s in &self.terms {
            for o in &other.terms {
                acc += s.coeff.conj() * o.coeff * overlap(&s.amps, &o.amps);
            }
        }
        acc
    }

    /// Squared norm through the Gram matrix of term overlaps.
    pub fn norm_sqr(&self) -> f64 {
        let mut acc = 0.0;
        for (j, a) in self.terms.iter().enumerate() {
            acc += a.coeff.norm_sqr();
            for b in &self.terms[j + 1..] {
                acc += 2.0 * (a.coeff.conj() * b.coeff * overlap(&a.amps, &b.amps)).re;
            }
        }
        acc
    }

    /// Returns the state scaled to unit norm.
    pub fn normalize(&self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if !(n2 > 0.0) || !n2.is_finite() {
            return Err(Error::ZeroNorm);
        }
        Ok(self.scale(C64::new(1.0 / n2.sqrt(), 0.0)).canonical())
    }

    pub fn scale(&self, factor: C64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| CoherentTerm::new(t.coeff * factor, t.amps.clone()))
            .collect();
        Self::from_terms_unchecked(self.modes, terms)
    }

    /// `self + other` as an (unnormalized) superposition.
    pub fn add(&self, other: &CoherentKet) -> Self {
        assert_eq!(self.modes, other.modes, "add: mode count mismatch");
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self::from_terms(self.modes, terms)
    }

    /// Tensor product, `self` occupying the leading modes.
    pub fn tensor(&self, other: &CoherentKet) -> Self {
        let mut terms = Vec::with_capacity(self.len() * other.len());
        for a in &self.terms {
            for b in &other.terms {
                let mut amps = a.amps.clone();
                amps.extend_from_slice(&b.amps);
                terms.push(CoherentTerm::new(a.coeff * b.coeff, amps));
            }
        }
        Self::from_terms(self.modes + other.modes, terms)
    }

    /// Appends one vacuum mode; its index is the old mode count.
    pub fn with_vacuum_mode(&self) -> Self {
        self.with_coherent_mode(C64::new(0.0, 0.0))
    }

    /// Appends one mode in the coherent state `|a⟩`.
    pub fn with_coherent_mode(&self, a: C64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut amps = t.amps.clone();
                amps.push(a);
                CoherentTerm::new(t.coeff, amps)
            })
            .collect();
        Self::from_terms_unchecked(self.modes + 1, terms)
    }

    fn check_mode(&self, mode: usize) {
        assert!(
            mode < self.modes,
            "mode {mode} out of range for a {}-mode state",
            self.modes
        );
    }

    /// Displacement `D(γ)` on one mode: `|a⟩ → e^{(γā−γ̄a)/2}|a+γ⟩`.
    pub fn displace(&self, mode: usize, gamma: C64) -> Self {
        self.check_mode(mode);
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let a = t.amps[mode];
                let phase = ((gamma * a.conj() - gamma.conj() * a) * 0.5).exp();
                let mut amps = t.amps.clone();
                amps[mode] = a + gamma;
                CoherentTerm::new(t.coeff * phase, amps)
            })
            .collect();
        Self::from_terms(self.modes, terms)
    }

    /// Real beam splitter `exp θ(a_i a_j† − a_i† a_j)` with transmissivity
    /// `cos²θ`: `(a_i, a_j) → (cosθ a_i − sinθ a_j, cosθ a_j + sinθ a_i)`.
    pub fn beam_splitter(&self, i: usize, j: usize, theta: f64) -> Self {
        let (c, s) = (theta.cos(), theta.sin());
        self.two_mode_linear(i, j, |ai, aj| (c * ai - s * aj, c * aj + s * ai))
    }

    /// Imaginary beam splitter `exp iθ(a_i a_j† + a_i† a_j)`:
    /// `(a_i, a_j) → (cosθ a_i + i sinθ a_j, cosθ a_j + i sinθ a_i)`.
    pub fn ibeam_splitter(&self, i: usize, j: usize, theta: f64) -> Self {
        let (c, s) = (theta.cos(), C64::new(0.0, theta.sin()));
        self.two_mode_linear(i, j, |ai, aj| (c * ai + s * aj, c * aj + s * ai))
    }

    fn two_mode_linear<F>(&self, i: usize, j: usize, f: F) -> Self
    where
        F: Fn(C64, C64) -> (C64, C64),
    {
        self.check_mode(i);
        self.check_mode(j);
        assert_ne!(i, j, "beam splitter needs two distinct modes");
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut amps = t.amps.clone();
                let (ai, aj) = f(amps[i], amps[j]);
                amps[i] = ai;
                amps[j] = aj;
                CoherentTerm::new(t.coeff, amps)
            })
            .collect();
        Self::from_terms(self.modes, terms)
    }

    /// Free evolution `e^{iφ a†a}` on one mode: `|a⟩ → |e^{iφ}a⟩`.
    pub fn phase_rotation(&self, mode: usize, phi: f64) -> Self {
        self.check_mode(mode);
        let rot = C64::from_polar(1.0, phi);
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut amps = t.amps.clone();
                amps[mode] *= rot;
                CoherentTerm::new(t.coeff, amps)
            })
            .collect();
        Self::from_terms(self.modes, terms)
    }

    /// Moves mode `from` to position `to`, shifting the modes in between.
    pub fn move_mode(&self, from: usize, to: usize) -> Self {
        self.check_mode(from);
        self.check_mode(to);
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut amps = t.amps.clone();
                let a = amps.remove(from);
                amps.insert(to, a);
                CoherentTerm::new(t.coeff, amps)
            })
            .collect();
        Self::from_terms_unchecked(self.modes, terms)
    }

    /// Swaps two modes.
    pub fn swap_modes(&self, i: usize, j: usize) -> Self {
        self.check_mode(i);
        self.check_mode(j);
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut amps = t.amps.clone();
                amps.swap(i, j);
                CoherentTerm::new(t.coeff, amps)
            })
            .collect();
        Self::from_terms_unchecked(self.modes, terms)
    }

    /// Multiplies each coefficient by `f(amplitude on mode)`.
    pub fn weight_by_mode<F>(&self, mode: usize, f: F) -> Self
    where
        F: Fn(C64) -> C64,
    {
        self.check_mode(mode);
        let terms = self
            .terms
            .iter()
            .map(|t| CoherentTerm::new(t.coeff * f(t.amps[mode]), t.amps.clone()))
            .collect();
        Self::from_terms_unchecked(self.modes, terms)
    }

    /// Drops the amplitude of `mode` from every term without touching the
    /// coefficients. Only meaningful after the mode has been projected.
    pub(crate) fn drop_mode_raw(&self, mode: usize) -> Self {
        self.check_mode(mode);
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut amps = t.amps.clone();
                amps.remove(mode);
                CoherentTerm::new(t.coeff, amps)
            })
            .collect();
        Self::from_terms_unchecked(self.modes - 1, terms)
    }

    /// Amplitudes taken by `mode`, deduplicated within [`MERGE_TOL`].
    pub fn distinct_amplitudes(&self, mode: usize) -> Vec<C64> {
        self.check_mode(mode);
        let mut out: Vec<C64> = Vec::new();
        for t in &self.terms {
            let a = t.amps[mode];
            if !out.iter().any(|b| close(*b, a)) {
                out.push(a);
            }
        }
        out
    }

    /// Largest `|a|²` appearing on `mode`.
    pub fn max_intensity(&self, mode: usize) -> f64 {
        self.check_mode(mode);
        self.terms
            .iter()
            .map(|t| t.amps[mode].norm_sqr())
            .fold(0.0, f64::max)
    }

    /// `1 − |⟨self|other⟩|²` for normalized states; insensitive to global
    /// phase.
    pub fn infidelity(&self, other: &CoherentKet) -> f64 {
        1.0 - self.inner(other).norm_sqr()
    }

    /// Text dump, one term per line:
    /// `coeff_re coeff_im : a1_re a1_im ; a2_re a2_im ; ...`
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for t in &self.terms {
            write!(out, "{} {} :", t.coeff.re, t.coeff.im).unwrap();
            let amps: Vec<String> = t
                .amps
                .iter()
                .map(|a| format!(" {} {}", a.re, a.im))
                .collect();
            out.push_str(&amps.join(" ;"));
            out.push('\n');
        }
        out
    }

    /// Parses the format written by [`CoherentKet::dump`].
    pub fn parse_dump(text: &str) -> Result<Self> {
        let bad = |line: &str| Error::InvalidParameter(format!("bad dump line: {line:?}"));
        let mut terms = Vec::new();
        let mut modes = None;
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let (coeff, amps) = line.split_once(':').ok_or_else(|| bad(line))?;
            let coeff = parse_pair(coeff).ok_or_else(|| bad(line))?;
            let amps: Vec<C64> = amps
                .split(';')
                .map(parse_pair)
                .collect::<Option<_>>()
                .ok_or_else(|| bad(line))?;
            if *modes.get_or_insert(amps.len()) != amps.len() {
                return Err(bad(line));
            }
            terms.push(CoherentTerm::new(coeff, amps));
        }
        let modes = modes.ok_or_else(|| Error::InvalidParameter("empty dump".into()))?;
        Ok(Self::from_terms_unchecked(modes, terms))
    }

    /// Merges terms with matching amplitudes and prunes tiny coefficients.
    pub(crate) fn canonical(self) -> Self {
        let modes = self.modes;
        let mut merged: Vec<CoherentTerm> = Vec::with_capacity(self.terms.len());
        let mut buckets: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
        for t in self.terms {
            let key = bucket_key(&t.amps);
            let slot = buckets.entry(key).or_default();
            match slot.iter().copied().find(|&k| {
                merged[k]
                    .amps
                    .iter()
                    .zip(&t.amps)
                    .all(|(a, b)| close(*a, *b))
            }) {
                Some(k) => merged[k].coeff += t.coeff,
                None => {
                    slot.push(merged.len());
                    merged.push(t);
                }
            }
        }
        merged.retain(|t| t.coeff.norm() >= PRUNE_TOL);
        Self {
            modes,
            terms: merged,
        }
    }
}

fn close(a: C64, b: C64) -> bool {
    (a.re - b.re).abs() <= MERGE_TOL && (a.im - b.im).abs() <= MERGE_TOL
}

fn bucket_key(amps: &[C64]) -> Vec<i64> {
    amps.iter()
        .flat_map(|a| [(a.re * 1e10).round() as i64, (a.im * 1e10).round() as i64])
        .collect()
}

fn parse_pair(s: &str) -> Option<C64> {
    let mut it = s.split_whitespace().map(str::parse::<f64>);
    let re = it.next()?.ok()?;
    let im = it.next()?.ok()?;
    if it.next().is_some() {
        return None;
    }
    Some(C64::new(re, im))
}
