pub mod checks;
pub mod cli;
pub mod corpus;
pub mod flow;
pub mod hamilton;
pub mod lifts;
pub mod manifold;
pub mod symcore;
