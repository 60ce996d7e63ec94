//! Complex-matrix kernels, special functions, and quadrature shared by the
//! rate, receiver, and estimation code.
//!
//! Everything here is a pure function of its inputs.

mod bessel;
mod cmatrix;
mod linalg;
mod quadrature;

pub use bessel::bessel_i0_scaled;
pub(crate) use bessel::i0e_unchecked;
pub use cmatrix::{CMatrix, CVector, C64};
pub use linalg::{
    cholesky, gram_logdet_rate, hermitian_eigen, hermitian_eigenvalues, hpd_rate_bits, kronecker,
    ln_det_hpd, mmse_residual_sinr, solve_hpd, HermitianEigen, HERMITIAN_TOL,
    MAX_KRONECKER_ENTRIES,
};
pub use quadrature::{
    integrate, integrate_semi_infinite, integrate_with_cutoff, Integral, MAX_PANELS,
};
