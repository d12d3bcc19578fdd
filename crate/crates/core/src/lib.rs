pub mod commands;
pub mod config;
pub mod data;
pub mod error;
pub mod experiment;
pub mod kernels;
pub mod qsim;
pub mod rng;
pub mod svm;
pub mod synth;

pub use error::{Error, Result};
