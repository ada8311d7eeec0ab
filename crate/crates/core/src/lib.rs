//! Capacities of quantum networks with multiplicative edge dimensions: exact
//! min-cuts, tensor-network rank estimates, exhaustive classical coding search
//! and the network transformations that relate them.

mod bigser;
pub mod capreport;
pub mod codingsearch;
pub mod error;
pub mod exec;
pub mod fixtures;
pub mod gen;
pub mod netmodel;
pub mod reproduce;
pub mod tnrank;
pub mod transforms;

pub use error::{Error, Result};
pub use exec::Exec;
pub use netmodel::{min_cut, Cut, Edge, Network, Orientation};
pub use num_bigint::BigUint;
