pub mod algebra;
pub mod cli;
pub mod operators;
pub mod poly;
pub mod rational;
pub mod solver;
pub mod tables;

pub use rational::Rational;
