#![no_std]
#![doc = include_str!("../README.md")]

extern crate alloc;

pub mod arith;
pub mod asymp;
pub mod error;
pub mod moments;
pub mod repr;
pub mod selberg;

pub use error::{Error, Result};
