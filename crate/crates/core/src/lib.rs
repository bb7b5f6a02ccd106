pub mod boundary;
pub mod cli;
pub mod config;
pub mod gas;
pub mod genmat;
pub mod geometry;
pub mod potential;
pub mod verify;
