//! Exact decategorified verification of two categorifications of the
//! sl2-action on `(C^2)^{⊗n}`.
//!
//! * [`blockcomb`]: weights of `sl_n` mod `p`, singular blocks, marked rows and
//!   translation functors acting on Weyl-module classes.
//! * [`tensorrep`]: the target representation and its `U_q(sl2)` deformation.
//! * [`zigzag`]: the eight-dimensional algebra controlling the `n = 2` block.
//! * [`kgrass`]: torus-fixed-point localization on `T*Gr(r, n)` and the
//!   Fourier–Mukai kernels relating the two pictures.
//! * [`exactalg`]: exact coefficient rings and finite linear algebra.
//!
//! Everything is exact: integers are arbitrary precision and no floating point
//! value is ever compared.

pub mod blockcomb;
pub mod exactalg;
pub mod kgrass;
pub mod report;
pub mod tensorrep;
pub mod zigzag;

pub use blockcomb::{BlockData, BlockError, CasimirValue, Weight};
pub use tensorrep::{RepMatrices, RepOperators, SubsetBasisVector};
pub use zigzag::{AlgebraA, BasisElt};
pub use kgrass::{FixedPoint, KernelSpec, LocalizedClass};
pub use exactalg::{
    quantum_integer, FormalSum, LaurentScalar, LinearOp, MultiLaurent, NotPolynomial, RationalFn,
    Ring,
};
