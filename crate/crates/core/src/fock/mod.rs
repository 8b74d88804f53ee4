// Copyright 2026 The coherent-qubits Authors
// SPDX-License-Identifier: Apache-2.0

//! Brute-force reference engine in a truncated photon-number basis.
//!
//! Everything here is dense and slow on purpose: it shares no code path with
//! [`crate::algebra`] beyond the coherent-state amplitudes, and exists to
//! cross-check it. The supported envelope is at most three modes with a
//! per-mode cutoff of 80 photons.

mod expm;

pub use expm::expm;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::algebra::{number_amplitude, CoherentKet};
use crate::error::{Error, Result};

pub const MAX_CUTOFF: usize = 80;
pub const MAX_MODES: usize = 3;

/// Chooses the per-mode photon cutoff from the largest coherent intensity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CutoffPolicy {
    pub tail_tolerance: f64,
}

impl Default for CutoffPolicy {
    fn default() -> Self {
        Self {
            tail_tolerance: 1e-12,
        }
    }
}

impl CutoffPolicy {
    /// `N = ⌈m + 10√m + 20⌉`, raised until the Poisson tail beyond `N` is
    /// below the tolerance.
    pub fn cutoff_for(&self, max_intensity: f64) -> usize {
        let m = max_intensity;
        let mut n = (m + 10.0 * m.sqrt() + 20.0).ceil() as usize;
        while coherent_tail(m, n) >= self.tail_tolerance {
            n += 1;
        }
        n
    }

    pub fn cutoff_for_ket(&self, state: &CoherentKet) -> usize {
        let m = (0..state.modes())
            .map(|k| state.max_intensity(k))
            .fold(0.0, f64::max);
        self.cutoff_for(m)
    }
}

/// `Σ_{n>N} e^{−m} mⁿ/n!`, summed directly from the top of the kept range.
pub fn coherent_tail(mean: f64, cutoff: usize) -> f64 {
    if mean == 0.0 {
        return 0.0;
    }
    // first omitted term, then ratio recursion
    let mut term = number_amplitude(C64::new(mean.sqrt(), 0.0), cutoff as u64 + 1).norm_sqr();
    let mut sum = 0.0;
    let mut k = cutoff + 1;
    while term > 1e-300 && (term > sum * 1e-18 || (k as f64) < mean) {
        sum += term;
        k += 1;
        term *= mean / k as f64;
    }
    sum
}

/// Dense state vector over `modes` modes with `cutoff + 1` levels each.
/// Mode 0 is the most significant index.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    cutoff: usize,
    modes: usize,
    data: Vec<C64>,
}

fn check_envelope(cutoff: usize, modes: usize) -> Result<()> {
    if cutoff > MAX_CUTOFF || modes > MAX_MODES {
        return Err(Error::CutoffTooLarge(cutoff));
    }
    Ok(())
}

/// Truncated coherent state with the tail mass it dropped; renormalized.
pub fn coherent_fock(alpha: C64, cutoff: usize) -> (FockVector, f64) {
    let data: Vec<C64> = (0..=cutoff as u64)
        .map(|n| number_amplitude(alpha, n))
        .collect();
    let kept: f64 = data.iter().map(|z| z.norm_sqr()).sum();
    let tail = coherent_tail(alpha.norm_sqr(), cutoff);
    let scale = 1.0 / kept.sqrt();
    let v = FockVector {
        cutoff,
        modes: 1,
        data: data.into_iter().map(|z| z * scale).collect(),
    };
    (v, tail)
}

impl FockVector {
    pub fn zeros(cutoff: usize, modes: usize) -> Self {
        Self {
            cutoff,
            modes,
            data: vec![C64::new(0.0, 0.0); (cutoff + 1).pow(modes as u32)],
        }
    }

    /// `|n_0, n_1, …⟩`.
    pub fn basis(cutoff: usize, counts: &[usize]) -> Self {
        let mut v = Self::zeros(cutoff, counts.len());
        let idx = v.index(counts);
        v.data[idx] = C64::new(1.0, 0.0);
        v
    }

    pub fn from_data(cutoff: usize, modes: usize, data: Vec<C64>) -> Self {
        assert_eq!(
            data.len(),
            (cutoff + 1).pow(modes as u32),
            "data length does not match shape"
        );
        Self {
            cutoff,
            modes,
            data,
        }
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    fn dim(&self) -> usize {
        self.cutoff + 1
    }

    fn stride(&self, mode: usize) -> usize {
        self.dim().pow((self.modes - 1 - mode) as u32)
    }

    fn index(&self, counts: &[usize]) -> usize {
        counts
            .iter()
            .enumerate()
            .map(|(m, &n)| {
                assert!(n <= self.cutoff);
                n * self.stride(m)
            })
            .sum()
    }

    pub fn amplitude(&self, counts: &[usize]) -> C64 {
        self.data[self.index(counts)]
    }

    pub fn tensor(&self, other: &FockVector) -> FockVector {
        assert_eq!(self.cutoff, other.cutoff, "tensor: cutoff mismatch");
        let mut data = Vec::with_capacity(self.data.len() * other.data.len());
        for a in &self.data {
            for b in &other.data {
                data.push(a * b);
            }
        }
        FockVector {
            cutoff: self.cutoff,
            modes: self.modes + other.modes,
            data,
        }
    }

    /// Expands a coherent-state superposition; returns the vector and the
    /// largest single-mode tail mass dropped by the truncation.
    pub fn from_coherent_ket(
        state: &CoherentKet,
        policy: &CutoffPolicy,
    ) -> Result<(FockVector, f64)> {
        let cutoff = policy.cutoff_for_ket(state);
        Self::from_coherent_ket_at(state, cutoff)
    }

    pub fn from_coherent_ket_at(state: &CoherentKet, cutoff: usize) -> Result<(FockVector, f64)> {
        check_envelope(cutoff, state.modes())?;
        let mut out = FockVector::zeros(cutoff, state.modes());
        let mut worst: f64 = 0.0;
        for t in state.terms() {
            let mut v = FockVector {
                cutoff,
                modes: 0,
                data: vec![t.coeff],
            };
            for a in &t.amps {
                let (f, tail) = coherent_fock(*a, cutoff);
                worst = worst.max(tail);
                v = v.tensor(&f);
            }
            for (o, x) in out.data.iter_mut().zip(&v.data) {
                *o += x;
            }
        }
        Ok((out, worst))
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &FockVector) -> C64 {
        assert_eq!(self.data.len(), other.data.len(), "inner: shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn normalize(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if !(n > 0.0) {
            return Err(Error::ZeroNorm);
        }
        let s = 1.0 / n.sqrt();
        Ok(Self {
            data: self.data.iter().map(|z| z * s).collect(),
            ..self.clone()
        })
    }

    /// Applies a single-mode operator given as a `(cutoff+1)²` matrix.
    pub fn apply_single(&self, mode: usize, op: &DMatrix<C64>) -> FockVector {
        assert!(mode < self.modes);
        assert_eq!(op.nrows(), self.dim());
        let d = self.dim();
        let stride = self.stride(mode);
        let outer = self.data.len() / (d * stride);
        let mut out = vec![C64::new(0.0, 0.0); self.data.len()];
        let mut col = vec![C64::new(0.0, 0.0); d];
        for o in 0..outer {
            for i in 0..stride {
                let base = o * d * stride + i;
                for (n, c) in col.iter_mut().enumerate() {
                    *c = self.data[base + n * stride];
                }
                for m in 0..d {
                    let mut acc = C64::new(0.0, 0.0);
                    for n in 0..d {
                        acc += op[(m, n)] * col[n];
                    }
                    out[base + m * stride] = acc;
                }
            }
        }
        FockVector {
            data: out,
            ..self.clone()
        }
    }

    /// Applies a two-mode number-conserving unitary to modes `(i, j)`.
    pub fn apply_beam_splitter(&self, i: usize, j: usize, bs: &BeamSplitterMatrix) -> FockVector {
        assert!(i < self.modes && j < self.modes && i != j);
        assert_eq!(bs.cutoff, self.cutoff);
        let others: Vec<usize> = (0..self.modes).filter(|&m| m != i && m != j).collect();
        let n_other = self.dim().pow(others.len() as u32);
        let mut out = vec![C64::new(0.0, 0.0); self.data.len()];
        let mut counts = vec![0usize; self.modes];
        for r in 0..n_other {
            let mut rem = r;
            for &m in others.iter().rev() {
                counts[m] = rem % self.dim();
                rem /= self.dim();
            }
            for (total, block) in bs.blocks.iter().enumerate() {
                let lo = total.saturating_sub(self.cutoff);
                let idx: Vec<usize> = (0..block.nrows())
                    .map(|k| {
                        counts[i] = lo + k;
                        counts[j] = total - lo - k;
                        self.index(&counts)
                    })
                    .collect();
                for (row, &dst) in idx.iter().enumerate() {
                    let mut acc = C64::new(0.0, 0.0);
                    for (col, &src) in idx.iter().enumerate() {
                        acc += block[(row, col)] * self.data[src];
                    }
                    out[dst] = acc;
                }
            }
        }
        FockVector {
            data: out,
            ..self.clone()
        }
    }

    /// Phase `e^{iφ n}` on one mode.
    pub fn phase_rotation(&self, mode: usize, phi: f64) -> FockVector {
        let d = DMatrix::from_fn(self.dim(), self.dim(), |m, n| {
            if m == n {
                C64::from_polar(1.0, phi * n as f64)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        self.apply_single(mode, &d)
    }

    /// Probability of `n` photons in `mode` and the normalized remainder.
    pub fn number_projection(&self, mode: usize, n: usize) -> (f64, Option<FockVector>) {
        assert!(mode < self.modes && n <= self.cutoff);
        let d = self.dim();
        let stride = self.stride(mode);
        let outer = self.data.len() / (d * stride);
        let mut rest = Vec::with_capacity(outer * stride);
        for o in 0..outer {
            for i in 0..stride {
                rest.push(self.data[o * d * stride + n * stride + i]);
            }
        }
        let total = self.norm_sqr();
        let v = FockVector {
            cutoff: self.cutoff,
            modes: self.modes - 1,
            data: rest,
        };
        let p = v.norm_sqr() / total;
        if p <= 0.0 {
            return (0.0, None);
        }
        (p, v.normalize().ok())
    }

    /// Reduced density matrix of the listed modes (at most two).
    pub fn reduced_density(&self, keep: &[usize]) -> Result<FockDensity> {
        if keep.len() > 2 {
            return Err(Error::InvalidParameter(
                "at most two modes may be kept".into(),
            ));
        }
        let d = self.dim();
        let dk = d.pow(keep.len() as u32);
        let rest: Vec<usize> = (0..self.modes).filter(|m| !keep.contains(m)).collect();
        let dr = d.pow(rest.len() as u32);
        let mut m = DMatrix::<C64>::zeros(dk, dr);
        let mut counts = vec![0usize; self.modes];
        for a in 0..dk {
            let mut rem = a;
            for &k in keep.iter().rev() {
                counts[k] = rem % d;
                rem /= d;
            }
            for b in 0..dr {
                let mut rem = b;
                for &k in rest.iter().rev() {
                    counts[k] = rem % d;
                    rem /= d;
                }
                m[(a, b)] = self.data[self.index(&counts)];
            }
        }
        Ok(FockDensity {
            cutoff: self.cutoff,
            modes: keep.len(),
            matrix: &m * m.adjoint(),
        })
    }
}

/// Displacement `exp(γa† − γ̄a)` on `cutoff + 1` levels.
///
/// The generator is exponentiated on a padded space and then cropped, so the
/// returned block agrees with the untruncated operator up to the coherent
/// tail beyond the padding.
pub fn displacement_matrix(gamma: C64, cutoff: usize) -> DMatrix<C64> {
    let reach = (cutoff as f64).sqrt() + gamma.norm();
    let padded = cutoff + (reach * reach + 10.0 * reach + 20.0).ceil() as usize;
    let d = padded + 1;
    let mut g = DMatrix::<C64>::zeros(d, d);
    for n in 0..padded {
        let s = ((n + 1) as f64).sqrt();
        g[(n + 1, n)] = gamma * s;
        g[(n, n + 1)] = -gamma.conj() * s;
    }
    expm(&g).view((0, 0), (cutoff + 1, cutoff + 1)).into_owned()
}

/// Which two-mode generator a beam splitter uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitterKind {
    /// `exp θ(a_1 a_2† − a_1† a_2)`
    Standard,
    /// `exp iθ(a_1 a_2† + a_1† a_2)`
    Imaginary,
}

/// Block-diagonal two-mode unitary, one block per total photon number.
#[derive(Clone, Debug)]
pub struct BeamSplitterMatrix {
    cutoff: usize,
    blocks: Vec<DMatrix<C64>>,
}

pub fn beam_splitter_matrix(theta: f64, cutoff: usize, kind: SplitterKind) -> BeamSplitterMatrix {
    let mut blocks = Vec::with_capacity(2 * cutoff + 1);
    for total in 0..=2 * cutoff {
        let lo = total.saturating_sub(cutoff);
        let hi = total.min(cutoff);
        let size = hi - lo + 1;
        let mut g = DMatrix::<C64>::zeros(size, size);
        for k in 0..size {
            let n1 = lo + k;
            let n2 = total - n1;
            // a1 a2† : (n1, n2) → (n1−1, n2+1)
            if n1 > lo {
                let amp = ((n1 * (n2 + 1)) as f64).sqrt();
                g[(k - 1, k)] += match kind {
                    SplitterKind::Standard => C64::new(amp, 0.0),
                    SplitterKind::Imaginary => C64::new(0.0, amp),
                };
            }
            // a1† a2 : (n1, n2) → (n1+1, n2−1)
            if n1 < hi {
                let amp = (((n1 + 1) * n2) as f64).sqrt();
                g[(k + 1, k)] += match kind {
                    SplitterKind::Standard => C64::new(-amp, 0.0),
                    SplitterKind::Imaginary => C64::new(0.0, amp),
                };
            }
        }
        blocks.push(expm(&(g * C64::new(theta, 0.0))));
    }
    BeamSplitterMatrix { cutoff, blocks }
}

impl BeamSplitterMatrix {
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Dense `(cutoff+1)² × (cutoff+1)²` form, mode 0 most significant.
    pub fn to_dense(&self) -> DMatrix<C64> {
        let d = self.cutoff + 1;
        let mut m = DMatrix::<C64>::zeros(d * d, d * d);
        for (total, block) in self.blocks.iter().enumerate() {
            let lo = total.saturating_sub(self.cutoff);
            for r in 0..block.nrows() {
                for c in 0..block.ncols() {
                    let (r1, c1) = (lo + r, lo + c);
                    let row = r1 * d + (total - r1);
                    let col = c1 * d + (total - c1);
                    m[(row, col)] = block[(r, c)];
                }
            }
        }
        m
    }
}

fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Dense density matrix over at most two truncated modes.
#[derive(Clone, Debug)]
pub struct FockDensity {
    cutoff: usize,
    modes: usize,
    matrix: DMatrix<C64>,
}

impl FockDensity {
    pub fn pure(v: &FockVector) -> Result<Self> {
        let keep: Vec<usize> = (0..v.modes).collect();
        v.reduced_density(&keep)
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn hermiticity_defect(&self) -> f64 {
        max_abs(&(&self.matrix - self.matrix.adjoint()))
    }

    /// Partial trace over one mode.
    pub fn partial_trace(&self, mode: usize) -> FockDensity {
        assert!(mode < self.modes);
        let d = self.cutoff + 1;
        if self.modes == 1 {
            return FockDensity {
                cutoff: self.cutoff,
                modes: 0,
                matrix: DMatrix::from_element(1, 1, self.matrix.trace()),
            };
        }
        let mut out = DMatrix::<C64>::zeros(d, d);
        for a in 0..d {
            for b in 0..d {
                let mut acc = C64::new(0.0, 0.0);
                for n in 0..d {
                    let (ra, rb) = if mode == 0 {
                        (n * d + a, n * d + b)
                    } else {
                        (a * d + n, b * d + n)
                    };
                    acc += self.matrix[(ra, rb)];
                }
                out[(a, b)] = acc;
            }
        }
        FockDensity {
            cutoff: self.cutoff,
            modes: 1,
            matrix: out,
        }
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.matrix + self.matrix.adjoint()) * C64::new(0.5, 0.0);
        let mut ev: Vec<f64> = SymmetricEigen::new(herm)
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn fidelity_pure(&self, psi: &FockVector) -> f64 {
        assert_eq!(psi.modes, self.modes);
        let v = nalgebra::DVector::from_column_slice(&psi.data);
        (v.adjoint() * &self.matrix * &v)[(0, 0)].re
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn vacuum_coherent_is_basis_vector() {
        let (v, tail) = coherent_fock(c(0.0), 10);
        assert_eq!(v, FockVector::basis(10, &[0]));
        assert_eq!(tail, 0.0);
    }

    #[test]
    fn coherent_tail_at_cutoff_forty() {
        // Poisson(4) mass beyond 40 by direct summation of the pmf
        let mut direct = 0.0;
        let mut p = (-4.0f64).exp();
        for n in 1..200 {
            p *= 4.0 / n as f64;
            if n > 40 {
                direct += p;
            }
        }
        let tail = coherent_tail(4.0, 40);
        assert!(tail < 1e-12);
        assert!((tail - direct).abs() < 1e-30 + 1e-10 * direct);
    }

    #[test]
    fn antipodal_overlap() {
        let (a, _) = coherent_fock(c(2.0), 40);
        let (b, _) = coherent_fock(c(-2.0), 40);
        assert!((b.inner(&a).re - (-8.0f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn displacement_of_vacuum_and_inverse() {
        let n = 40;
        assert!(
            max_abs(&(displacement_matrix(c(0.0), n) - DMatrix::identity(n + 1, n + 1))) < 1e-14
        );
        for g in [C64::new(1.0, 0.5), C64::new(-2.0, 2.0), c(3.0)] {
            let d = displacement_matrix(g, 60);
            let v = FockVector::basis(60, &[0]).apply_single(0, &d);
            let (want, _) = coherent_fock(g, 60);
            assert!((v.inner(&want).norm() - 1.0).abs() < 1e-10, "γ = {g}");
            let back = displacement_matrix(-g, 60) * &d;
            let low = back.view((0, 0), (8, 8)).into_owned();
            assert!(max_abs(&(low - DMatrix::identity(8, 8))) < 1e-10);
        }
    }

    #[test]
    fn beam_splitter_blocks_are_unitary() {
        for kind in [SplitterKind::Standard, SplitterKind::Imaginary] {
            let bs = beam_splitter_matrix(0.7, 6, kind);
            let u = bs.to_dense();
            let err = max_abs(&(u.adjoint() * &u - DMatrix::identity(49, 49)));
            assert!(err < 1e-12, "{kind:?}: {err}");
        }
        let id = beam_splitter_matrix(0.0, 5, SplitterKind::Standard).to_dense();
        assert!(max_abs(&(id - DMatrix::identity(36, 36))) < 1e-15);
    }

    #[test]
    fn beam_splitter_matches_coherent_rule() {
        let cutoff = 40;
        let (a, b) = (C64::new(1.0, 0.3), C64::new(-0.7, 0.4));
        let theta = 0.6;
        for kind in [SplitterKind::Standard, SplitterKind::Imaginary] {
            let bs = beam_splitter_matrix(theta, cutoff, kind);
            let input = CoherentKet::coherent(&[a, b]);
            let (fv, _) = FockVector::from_coherent_ket_at(&input, cutoff).unwrap();
            let out = fv.apply_beam_splitter(0, 1, &bs);
            let expected = match kind {
                SplitterKind::Standard => input.beam_splitter(0, 1, theta),
                SplitterKind::Imaginary => input.ibeam_splitter(0, 1, theta),
            };
            let (want, _) = FockVector::from_coherent_ket_at(&expected, cutoff).unwrap();
            assert!((out.inner(&want).norm() - 1.0).abs() < 1e-8, "{kind:?}");
            // phase too: coefficients are unchanged by a passive splitter
            assert!((out.inner(&want) - 1.0).norm() < 1e-8, "{kind:?}");
        }
    }

    #[test]
    fn partial_trace_of_product_recovers_factor() {
        let (a, _) = coherent_fock(C64::new(0.8, -0.2), 20);
        let (b, _) = coherent_fock(c(1.1), 20);
        let rho = FockDensity::pure(&a.tensor(&b)).unwrap();
        let ra = rho.partial_trace(1);
        assert!((ra.trace() - 1.0).abs() < 1e-12);
        assert!((ra.fidelity_pure(&a) - 1.0).abs() < 1e-12);
        let direct = a.tensor(&b).reduced_density(&[1]).unwrap();
        assert!(max_abs(&(direct.matrix() - rho.partial_trace(0).matrix())) < 1e-14);
    }

    #[test]
    fn projection_probabilities_sum_to_one() {
        let s = CoherentKet::from_pairs(
            2,
            [
                (c(1.0), vec![c(-1.0), c(0.5)]),
                (c(1.0), vec![c(1.0), c(-0.5)]),
            ],
        )
        .normalize()
        .unwrap();
        let (v, _) = FockVector::from_coherent_ket_at(&s, 30).unwrap();
        let total: f64 = (0..=30).map(|n| v.number_projection(0, n).0).sum();
        assert!((total - 1.0).abs() < 1e-10);
        let (p0, _) = FockVector::basis(5, &[0, 0]).number_projection(1, 0);
        assert_eq!(p0, 1.0);
    }

    #[test]
    fn fifty_fifty_conserves_photons() {
        let bs = beam_splitter_matrix(FRAC_PI_4, 8, SplitterKind::Standard);
        let v = FockVector::basis(8, &[3, 2]).apply_beam_splitter(0, 1, &bs);
        let mean: f64 = (0..=8)
            .flat_map(|a| (0..=8).map(move |b| (a, b)))
            .map(|(a, b)| (a + b) as f64 * v.amplitude(&[a, b]).norm_sqr())
            .sum();
        assert!((mean - 5.0).abs() < 1e-12);
    }

    #[test]
    fn envelope_is_enforced() {
        let s = CoherentKet::vacuum(4);
        assert!(FockVector::from_coherent_ket_at(&s, 3).is_err());
    }
}
