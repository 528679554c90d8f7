pub mod graph;
pub mod kernels;
pub mod validator;
pub mod generator;
pub mod harness;
pub mod scoring;
pub mod report;
pub mod cli;
