//! Exact symbolic computation in Leavitt path algebras of finite directed
//! graphs, realized inside the partial skew group ring of the free group on
//! the edge set acting on the boundary-path space.

pub mod catalog;
pub mod checks;
pub mod cli;
pub mod diag;
pub mod front;
pub mod graph;
pub mod ideal;
pub mod sample;
pub mod scalar;
pub mod skew;
pub mod words;

pub use cli::run;
