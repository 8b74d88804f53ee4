// Copyright 2026 The coherent-qubits Authors
// SPDX-License-Identifier: Apache-2.0

//! Exact simulation of qubits stored in optical coherent states.
//!
//! States stay superpositions of coherent product states under every
//! operation, so no number-basis truncation is involved. The [`fock`]
//! module recomputes the same quantities in a truncated number basis and
//! backs the comparisons in [`oracle`].

pub mod algebra;
pub mod code;
pub mod encoding;
pub mod error;
pub mod experiments;
pub mod fock;
pub mod invariants;
pub mod loss;
pub mod oracle;
pub mod protocols;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/algebra.md")]
    mod algebra {}
    #[doc = include_str!("../../../book/src/fock.md")]
    mod fock {}
    #[doc = include_str!("../../../book/src/encodings.md")]
    mod encodings {}
    #[doc = include_str!("../../../book/src/loss.md")]
    mod loss {}
    #[doc = include_str!("../../../book/src/teleportation.md")]
    mod teleportation {}
    #[doc = include_str!("../../../book/src/hadamard.md")]
    mod hadamard {}
    #[doc = include_str!("../../../book/src/code.md")]
    mod code {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/validation.md")]
    mod validation {}
}
