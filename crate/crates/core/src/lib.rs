pub mod algebra;
pub mod coefficients;
pub mod derivation;
pub mod error;
pub mod grading;
pub mod report;
pub mod sampling;
pub mod rinehart;
pub mod geometry;
pub mod carroll;
pub mod builtins;
pub mod dsl;
