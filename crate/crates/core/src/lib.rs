//! Conflict-free colorings of finite set systems: exact and heuristic solvers,
//! generators for the extremal constructions, and constructive colorers for
//! almost-disjoint systems.

pub mod cli;
pub mod colorers;
pub mod coloring;
pub mod error;
pub mod generators;
pub mod io;
pub mod solver;
pub mod system;

pub use coloring::{is_cf, is_proper, is_weak_cf, unique_color_set, CfReport, PartialColoring};
pub use error::{Error, Result};
pub use solver::{
    chi, chi_cf, feasible_cf, wchi_cf, Backend, Chromatic, EdgeRule, ExtensionProblem, Mode,
    SolveResult, SolverConfig, Verdict,
};
pub use system::{ADParams, SetSystem};
