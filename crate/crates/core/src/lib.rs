pub mod analysis;
pub mod cli;
pub mod expander;
pub mod fft;
pub mod field;
pub mod generator;
pub mod loadbalance;
pub mod poly;
