//! Classification of regular surfaces isogenous to a product of unmixed type
//! with χ = 2: type arithmetic, a finite-group kernel, a group catalog,
//! spherical-system search, orbit counting and the end-to-end pipeline.

pub mod catalog;
pub mod classify;
pub mod groups;
pub mod orbits;
pub mod snf;
pub mod spherical;
pub mod typesys;
