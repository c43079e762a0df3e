//! Numerical toolkit for split-step discrete-time quantum walks and the
//! photon-pair coupling they imprint.
//!
//! The split-step walk `U(θ₁, θ₂) = T R(θ₁) T R(θ₂)` is a two-parameter
//! family of band structures with distinct topological sectors. This crate
//! computes, from one consistent set of conventions:
//!
//! * [`walk`] — dispersion E(k), Bloch vector n(k), band eigenvectors and
//!   the planar phase φ(k) in momentum space;
//! * [`topology`] — Wilson-loop Zak phases, the winding number of φ(k) and
//!   sector maps over the coin-angle plane;
//! * [`spdc`] — the pair-coupling amplitude Γ(k_s, k_i) under constant or
//!   Gaussian pump envelopes, with phase matching inherited from the walk
//!   bands, plus the joint position-space correlation map;
//! * [`evolution`] — real-space state-vector evolution, ballistic/diffusive
//!   spreading statistics and bound-state weight at a sector boundary.
//!
//! The `examples/` directory holds one runnable program per capability; the
//! `splitstep` binary exposes the same computations as batch subcommands
//! with deterministic CSV/PGM outputs.

pub mod cli;
pub mod error;
pub mod evolution;
pub mod output;
pub mod spdc;
pub mod topology;
pub mod walk;

pub use error::{Error, Result};
