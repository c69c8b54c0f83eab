//! Independent oracles shared by the integration and acceptance tests.
//! Nothing here calls into the library's scoring or numeric code.

#![allow(dead_code)]

pub mod brute;
pub mod permutation;
pub mod quadrature;
