//! Facility location with linear facility costs under local differential
//! privacy.
//!
//! Each location reports its client count through a Laplace mechanism; the
//! solvers open facilities and provision capacities from those noisy counts.
//! [`solvers::solve_ldp_margin`] pads every capacity with a safety margin,
//! [`solvers::solve_ldp_reconnection`] first thins the facility set so fewer
//! margins are paid.
//!
//! ```
//! use flldp::{generate, GeneratorConfig, PrivacyParams, Process};
//! use flldp::harness::noise_rng;
//! use flldp::solvers::{solve_ldp_margin, solve_optimal};
//!
//! let cfg = GeneratorConfig { n: 200, seed: 7, ..GeneratorConfig::default() };
//! let inst = generate(Process::Matern, &cfg).unwrap();
//! let opt = solve_optimal(&inst);
//! let private = solve_ldp_margin(&inst, &PrivacyParams::new(1.0, 0.1).unwrap(), &mut noise_rng(7));
//! let a = flldp::total_cost(&inst, &opt).unwrap().total;
//! let b = flldp::total_cost(&inst, &private).unwrap().total;
//! assert!(b >= a);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod evaluation;
pub mod exec;
pub mod generators;
pub mod harness;
pub mod model;
pub mod privacy;
pub mod solvers;

pub use error::{Error, Result};
pub use evaluation::{check_capacities, normalized_cost, total_cost};
pub use exec::Exec;
pub use generators::{density_check, generate, ClientModel, CostRange, GeneratorConfig, Process};
pub use model::{CostBreakdown, Instance, MetricSpace, Solution};
pub use privacy::PrivacyParams;
pub use solvers::{Algorithm, SolveParams};
