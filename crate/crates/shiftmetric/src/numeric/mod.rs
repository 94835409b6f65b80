//! Small numerical building blocks: Gauss–Legendre rules, bracketed root
//! finding and a Nelder–Mead minimizer.

pub mod minimize;
pub mod quadrature;
pub mod roots;
