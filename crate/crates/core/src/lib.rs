//! Motivic infinite cyclic covers of punctured neighborhoods of simple normal
//! crossing divisors, computed exactly in a model of the equivariant
//! Grothendieck ring spanned by `L` and the classes `[mu_n]`.
//!
//! The main entry points are [`motive::motive`], [`blowup::blowup`] with
//! [`blowup::check_invariance`], the realizations in [`realization`], and the
//! resolution-graph frontend in [`milnor`].

pub mod blowup;
pub mod config;
pub mod error;
pub mod format;
pub mod milnor;
pub mod motive;
pub mod random;
pub mod realization;
pub mod ring;

pub use blowup::{blowup, check_invariance, Blowup, BlowupCenter, CenterStratum, InvarianceReport, Verdict};
pub use config::{
    cover_class, cover_component_count, gcd_multiplicity, validate, Component, ComponentId, ComponentSet,
    Configuration, Diagnostic, DiagnosticKind, Stratum,
};
pub use error::{Error, Result};
pub use milnor::{MilnorSelection, ResolutionGraph};
pub use motive::{motive, motive_expansion, motive_restricted, MotiveExpansion};
pub use realization::{euler, zeta, zeta_closed_form, CyclotomicRational};
pub use ring::{projective_class, RingElement};
