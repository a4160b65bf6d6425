//! Intensional type theory with Moore paths over an exact ordered ring.

pub mod fib;
pub mod funext;
pub mod laws;
pub mod path;
pub mod ring;
pub mod surface;
pub mod universe;
