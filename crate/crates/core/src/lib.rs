pub mod axioms;
pub mod cli;
pub mod error;
pub mod prefcore;
pub mod rules;
pub mod sat;
pub mod search;
pub mod setrank;
pub mod theorems;
