pub mod error;
pub mod exact;
pub mod group;
pub mod boundary;
pub mod cli;
pub mod complex;
pub mod config;
pub mod tree;
pub mod verify;
