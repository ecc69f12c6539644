//! Two-sided many-to-one matching under hereditary distributional constraints.
//!
//! Students hold strict preferences over colleges and colleges hold strict
//! preferences over students; feasibility of an outcome depends only on the
//! vector of per-college occupancy counts. The crate provides:
//!
//! - market and matching types with validated JSON documents ([`model`]),
//! - feasibility families and structural checks such as heredity and the
//!   exchange property ([`constraints`]),
//! - outcome properties: justified envy, the nonwastefulness hierarchy,
//!   stability, efficiency ([`properties`]),
//! - mechanisms: generalized deferred acceptance, serial dictatorship with
//!   master lists and reserved seats, and the sampling hybrid ([`mechanisms`]),
//! - brute-force oracles for small markets ([`oracle`]),
//! - generators and experiment runners with reproducible seeds ([`harness`]).

pub mod constraints;
pub mod harness;
pub mod mechanisms;
pub mod model;
pub mod oracle;
pub mod properties;

pub use constraints::{Feasibility, FeasibilitySpec};
pub use model::{AssignVec, CollegeId, Market, Matching, StudentId};
