//! Exact Chern character cocycles for perfect modules over curved dg
//! algebras, in the negative cyclic complex of the second kind.
//!
//! All arithmetic is over the rationals. Infinite u-series and unbounded bar
//! lengths are handled by explicit truncation caps with a ledger of what was
//! dropped, and every identity is checked stratum by stratum.

pub mod algebra;
pub mod chern;
pub mod cli;
pub mod fixtures;
pub mod free_modules;
pub mod hochschild;
pub mod linalg;
pub mod manifest;
pub mod nonunital;
pub mod report;
pub mod scalar;
pub mod suites;
