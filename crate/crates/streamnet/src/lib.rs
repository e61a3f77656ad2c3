//! Dataflow backbone for lockstep simulation of heterogeneous networks.
//!
//! A [`StreamNet`] is a directed graph of [`Element`]s with two ordered
//! sets of labeled input and output nodes per element. Each input node is
//! wired to exactly one source (indegree one); outputs fan out freely.
//! All elements advance at a common discrete time step and every edge —
//! including input-port injection — carries a one-step delay, which makes
//! execution order irrelevant and lets cycles run without deadlock. A net
//! is itself an element, so nets nest — and [`StreamNet::flattened`]
//! inlines the nesting without changing a single output bit.
//!
//! What each element computes internally is opaque to the net; anything
//! that honors the [`Element`] contract can be wired in.

mod element;
mod elements;
mod error;
mod net;
mod signal;

pub use element::{Element, NodeSpec};
pub use elements::{Identity, Sum};
pub use error::{Diagnostic, NetError, StepError};
pub use net::StreamNet;
pub use signal::Signal;
