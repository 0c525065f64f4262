pub mod diffops;
pub mod geometry;
pub mod harness;
pub mod lattice;
pub mod model;
pub mod numcore;
pub mod specfun;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/spectrum.md")]
    mod spectrum {}
    #[doc = include_str!("../../../book/src/wavefunctions.md")]
    mod wavefunctions {}
    #[doc = include_str!("../../../book/src/ladders.md")]
    mod ladders {}
    #[doc = include_str!("../../../book/src/algebra.md")]
    mod algebra {}
    #[doc = include_str!("../../../book/src/geometry.md")]
    mod geometry {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
}
