pub mod catalog;
pub mod cli;
pub mod dataflow;
pub mod diff;
pub mod learner;
pub mod miner;
pub mod pattern;
pub mod pipeline;
pub mod source;
pub mod migrator;
