//! Shared helpers for the integration tests: brute-force oracles and seeded
//! random generators.

#![allow(dead_code)]

pub mod gen;
pub mod oracle;
