//! Exact symbolic engine for Beloshapka-type CR-models of type (1,4):
//! structure equations, equivalence and the moduli invariant.

pub mod algebra;
pub mod coordring;
pub mod linalg;
pub mod model;
pub mod vecfield;
pub mod exterior;
pub mod liealg;
pub mod cartan;
pub mod moduli;
pub mod cli;
