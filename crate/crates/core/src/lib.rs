//! Symbiotic artificial immune system (SAIS) for continuous black-box
//! minimization, with a sequential SOS baseline, a 26-function benchmark
//! catalog and a multi-trial experiment harness.
//!
//! ```
//! use sais::{benchmarks, sais::{run_sais_seeded, SaisConfig}};
//!
//! let matyas = benchmarks::make_problem("matyas").unwrap().problem;
//! let result = run_sais_seeded(&matyas, &SaisConfig::new(300, 500).with_seed(7)).unwrap();
//! assert!(result.converged);
//! ```

pub mod antibody;
pub mod benchmarks;
pub mod error;
pub mod harness;
pub mod problem;
pub mod rng;
pub mod sais;
pub mod sos;
mod trial;

pub use antibody::Antibody;
pub use error::{Error, Result};
pub use problem::{clamp_to_bounds, EvalCounter, Noise, Problem};
pub use rng::RngStream;
pub use trial::TrialResult;
