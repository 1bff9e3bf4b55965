//! Exact coloured triply graded homology of braid closures.
//!
//! Braids are compiled to complexes of graded bimodules ([`braid`]), closed
//! up with a Koszul model of Hochschild homology ([`trace`]) and read off as
//! rational series ([`series`]). The guide in `book/` walks through it.

pub mod algebra;
pub mod bimodule;
pub mod braid;
pub mod complexes;
pub mod differential;
pub mod field;
pub mod homfly;
pub mod kernels;
pub mod linalg;
pub mod minimize;
pub mod modcore;
pub mod poly;
pub mod polymat;
pub mod projector;
pub mod series;
pub mod sparse;
pub mod trace;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/gradings.md")]
    struct Gradings;
    #[doc = include_str!("../../../book/src/kernels.md")]
    struct Kernels;
    #[doc = include_str!("../../../book/src/complexes.md")]
    struct Complexes;
    #[doc = include_str!("../../../book/src/traces.md")]
    struct Traces;
    #[doc = include_str!("../../../book/src/differentials.md")]
    struct Differentials;
    #[doc = include_str!("../../../book/src/oracle.md")]
    struct Oracle;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}
