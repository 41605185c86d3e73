pub mod arakelov;
pub mod arith;
pub mod characters;
pub mod cli;
pub mod cyclo_field;
pub mod enumerate;
pub mod epstein;
pub mod error;
pub mod gamma;
pub mod hecke;
pub mod incgamma;
pub mod packing;
pub mod quadrature;
pub mod zeta;
