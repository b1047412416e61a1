pub mod distribution;
pub mod error;
pub mod family;
pub mod knapsack;
pub mod problem;
pub mod rational;
pub mod tickets;
pub mod solver;
pub mod oracle;
pub mod applications;
pub mod experiment;
