pub mod classes;
pub mod cli;
pub mod enumerate;
pub mod error;
pub mod gaussian;
pub mod io;
pub mod lengths;
pub mod plane;
pub mod real;
pub mod simulate;
pub mod spectrum;
pub mod tail;
pub mod word;
