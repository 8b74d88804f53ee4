// Copyright 2026 The coherent-qubits Authors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use num_complex::Complex64 as C64;

/// A correction applied to an output mode.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Correction {
    X,
    Z,
    Displace(C64),
}

impl fmt::Display for Correction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Correction::X => f.write_str("X"),
            Correction::Z => f.write_str("Z"),
            Correction::Displace(g) if g.im == 0.0 => write!(f, "D({:.2})", g.re),
            Correction::Displace(g) => write!(f, "D({:.2}{:+.2}i)", g.re, g.im),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailureReason {
    /// Both teleportation detectors saw vacuum.
    BothZero,
    /// Post-selection rejected the outcome.
    Rejected,
    /// The syndrome pattern cannot be corrected.
    Uncorrectable,
    /// The attempt budget ran out.
    AttemptsExhausted,
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FailureReason::BothZero => "both_zero",
            FailureReason::Rejected => "rejected",
            FailureReason::Uncorrectable => "uncorrectable",
            FailureReason::AttemptsExhausted => "attempts_exhausted",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success,
    Failure(FailureReason),
}

impl Status {
    pub fn is_success(&self) -> bool {
        matches!(self, Status::Success)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Success => f.write_str("success"),
            Status::Failure(r) => write!(f, "failure:{r}"),
        }
    }
}

/// A detector reading.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reading {
    Count(usize),
    Parity { odd: bool },
}

impl fmt::Display for Reading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reading::Count(n) => write!(f, "{n}"),
            Reading::Parity { odd: true } => f.write_str("odd"),
            Reading::Parity { odd: false } => f.write_str("even"),
        }
    }
}

/// Detector readings, the corrections applied (in order) and the outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeRecord {
    pub readings: Vec<(String, Reading)>,
    pub corrections: Vec<Correction>,
    pub status: Status,
    /// Set when the qubit amplitude did not match the resource it was
    /// interfered with.
    pub amplitude_mismatch: bool,
}

impl OutcomeRecord {
    pub fn new() -> Self {
        Self {
            readings: Vec::new(),
            corrections: Vec::new(),
            status: Status::Success,
            amplitude_mismatch: false,
        }
    }

    pub fn reading(&self, label: &str) -> Option<Reading> {
        self.readings
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, r)| *r)
    }

    pub fn count(&self, label: &str) -> Option<usize> {
        match self.reading(label)? {
            Reading::Count(n) => Some(n),
            Reading::Parity { .. } => None,
        }
    }

    pub(crate) fn push_count(&mut self, label: &str, n: usize) {
        self.readings.push((label.to_string(), Reading::Count(n)));
    }

    /// Compact token string such as `XZ` or `D(-2.83)Z`.
    pub fn correction_tokens(&self) -> String {
        self.corrections.iter().map(ToString::to_string).collect()
    }

    /// `status,n1,n2,corrections`; absent readings are empty fields.
    pub fn csv_row(&self) -> String {
        let field = |label: &str| {
            self.reading(label)
                .map(|r| r.to_string())
                .unwrap_or_default()
        };
        format!(
            "{},{},{},{}",
            self.status,
            field("n1"),
            field("n2"),
            self.correction_tokens()
        )
    }
}

impl Default for OutcomeRecord {
    fn default() -> Self {
        Self::new()
    }
}
