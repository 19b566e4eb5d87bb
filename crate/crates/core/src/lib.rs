//! Exact point counts of smooth trigonal genus-5 curves over finite fields.

pub mod census;
pub mod combinat;
pub mod detcheck;
pub mod ff;
pub mod linalg;
pub mod par;
pub mod plane;
pub mod sieve;
pub mod symbolic;
pub mod typetables;
