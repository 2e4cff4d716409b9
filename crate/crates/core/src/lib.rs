//! Trace-equivalent interface summaries of synchronised LTS products.
//!
//! A [`Product`] of labelled transition systems is unfolded into a finite
//! branching-process prefix ([`unfold`]) whose projection onto the interface
//! component, folded along cut-off equivalences, is an LTS with exactly the
//! projected traces of the whole product ([`summary`]). The [`oracle`] module
//! is an independent explicit-state reference used to check every summary.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod benchgen;
pub mod dsu;
pub mod model;
pub mod oracle;
pub mod summary;
pub mod unfold;

pub use model::{ActionId, GlobalTransition, Lts, LtsBuilder, ModelError, Product, StateId, Trace, Weight};
pub use summary::{InterfaceNet, Summary, SummaryError};
pub use unfold::{
    unfold, unfold_with, Deadline, EventStatus, Limits, NoDeadline, Prefix, Strategy, UnfoldConfig, UnfoldError,
};
