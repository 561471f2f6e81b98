pub mod checks;
pub mod circuitgen;
pub mod cli;
pub mod gates;
pub mod label;
pub mod quanta;
pub mod relalg;
pub mod vecmonad;
