//! Gated leaky integrate-and-fire (GLIF) spiking networks.
//!
//! The crate covers the neuron update and its simplex specializations
//! ([`neuron`]), dense spiking networks with channel-wise or layer-wise
//! parameter sharing ([`network`]), backpropagation through time with a
//! rectangular surrogate ([`bptt`]), an SGD trainer ([`trainer`]), synthetic
//! and file-backed datasets ([`datasets`]), single-neuron trace analysis
//! ([`dynamics`]), checkpoints ([`checkpoint`]) and the experiment runner used
//! by the command line ([`experiment`]).

pub mod bptt;
pub mod checkpoint;
pub mod datasets;
pub mod dynamics;
pub mod error;
pub mod experiment;
pub mod gradcheck;
pub mod network;
pub mod neuron;
pub mod trainer;

pub use error::{Error, Result};
