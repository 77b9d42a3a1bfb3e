pub mod forms;
pub mod groupoid;
pub mod poly;
pub mod representation;
pub mod weil;
pub mod operators;
pub mod harness;
pub mod io;
pub mod cli;
