//! Exact symbolic computation for quantum toroidal algebras, affine Yangians and the
//! degeneration of the former to the latter.

pub mod cartan;
pub mod combo;
pub mod lie;
pub mod report;
pub mod scalar;
pub mod weyl;
pub mod yangian;
pub mod degeneration;
pub mod toroidal;
pub mod qtor;
