pub mod catalog;
pub mod cli;
pub mod cohomology;
pub mod curves;
pub mod error;
pub mod fan;
pub mod fano;
pub mod lattice;
pub mod quantum;
pub mod ray_set;

pub use error::{Error, Result};
pub use fan::{CurveClass, Fan, FanFile, PrimitiveData};
pub use lattice::{Int, LatticeVector, Rational};
pub use ray_set::RaySet;
