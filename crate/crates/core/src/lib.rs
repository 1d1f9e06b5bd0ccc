//! Construction, classification and counting of the finite subgroups of
//! `[0,1)^N` that model Gorenstein lattice simplices whose h*-polynomial is
//! `1 + t^k + t^(2k) + ... + t^((v-1)k)`.
//!
//! A lattice simplex corresponds, up to unimodular equivalence, to a finite
//! subgroup of the half-open torus `[0,1)^N` (addition mod 1, `N` = number of
//! vertices) in which every element has integer coordinate sum ("height").
//! The simplices of interest are exactly the groups of *type `(v,k)`*: order
//! `v` with heights `0, k, 2k, ..., (v-1)k`, each realized once.  This crate
//! builds those groups by one-step extensions along strict divisor chains of
//! `v`, recovers the construction data from a finished group through its
//! canonical quotient tower, counts equivalence classes purely from the
//! divisor lattice of `v`, and converts groups to explicit vertex models and
//! back for independent verification.
//!
//! All arithmetic is exact: coordinates are arbitrary-precision rationals and
//! every comparison is on canonical forms.  The crate is `no_std` (it
//! requires `alloc`); IO, serialization and the command-line front end live
//! in the companion crate.

#![no_std]
#![forbid(unsafe_code)]

#[cfg(test)]
extern crate std;

extern crate alloc;

pub mod builder;
pub mod classify;
pub mod divisor_lattice;
pub mod error;
pub mod extension;
pub mod group_core;
pub mod qz_arith;
pub mod simplex_bridge;
pub mod tower;

pub use builder::{ClassData, Marker, MarkerSet};
pub use classify::{BijectionReport, ClassRecord, ClassificationResult};
pub use divisor_lattice::ChainCensus;
pub use error::{Error, Result};
pub use group_core::{CanonicalKey, HeightedGroup, TypeProfile};
pub use qz_arith::{ModOneVector, Rational};
pub use simplex_bridge::{HStarVector, SimplexModel};
pub use tower::TowerStage;
