pub mod fixtures;
pub mod graph;
pub mod matchmaker;
pub mod planner;
pub mod query;
pub mod schema;
pub mod syntax;
pub mod turtle;
