#![allow(dead_code)]

pub mod adaptive;
pub mod bessel;
pub mod galerkin_oracle;
