// Copyright 2026 The coherent-qubits Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors raised by the simulator.
///
/// Programmer errors (mode index out of range, mismatched amplitude list
/// lengths) panic instead; everything here depends on the data.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),
    #[error("degenerate qubit: normalization factor {0} is not positive")]
    DegenerateQubit(f64),
    #[error("photon-count truncation at n = {n_max} leaves tail mass {tail:e}")]
    Truncation { n_max: usize, tail: f64 },
    #[error("state is not in the logical span of the encoding")]
    NotInLogicalSpan,
    #[error("mode count mismatch: expected {expected}, found {found}")]
    ModeMismatch { expected: usize, found: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("cutoff {0} exceeds the supported envelope")]
    CutoffTooLarge(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
