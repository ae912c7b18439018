//! SAT back end: CNF formulas, a CDCL solver, model counting and the rule encodings.

pub mod cnf;
pub mod count;
pub mod encode;
pub mod solver;

pub use cnf::{CnfFormula, Lit, Model};
pub use count::{count_by_blocking, count_models, enumerate_models, Enumeration};
pub use encode::{decode_rule, encode, header_spec, Encoding};
pub use solver::{solve_cnf, solve_with, Branching, SatOutcome, Solver, SolverConfig, SolverStats};
