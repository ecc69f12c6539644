//! Instance generators and experiment runners with reproducible seeds.

pub mod experiments;
pub mod gen;
pub mod mallows;
pub mod rng;
