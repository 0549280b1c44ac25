//! Noncommutative `L_a`-spaces of finite-dimensional von Neumann algebras.
//!
//! An algebra is a direct sum of full matrix blocks ([`BlockAlgebra`]). An
//! element of `L_a(M)` for `a` in the closed right half-plane is stored in
//! tracial coordinates: the matrix `x` standing for `x·τ^a`, where `τ` is the
//! block trace ([`GradedElement`]). In these coordinates multiplication
//! `L_a × L_b → L_{a+b}` is matrix multiplication and the norm is
//! `(Σ s_i^{1/Re a})^{Re a}` over the singular values of `x`.
//!
//! The crate is organized as
//!
//! * [`matcore`]: block matrices, eigendecomposition, SVD, functional calculus;
//! * [`weights`]: density matrices, modular automorphisms, Connes cocycles,
//!   operator-valued weights;
//! * [`decomp`]: supports, polar decomposition, Douglas division, cyclic
//!   generators and rank-1 reduction;
//! * [`lpspace`]: graded elements, (quasi)norms, Hölder witnesses, the
//!   multiplication/comultiplication pair, the Turpin bound and internal hom.
//!
//! The `book/` directory next to the workspace explains the mathematics
//! chapter by chapter; its code listings are compiled as doctests of this crate.

pub mod decomp;
mod error;
pub mod lpspace;
pub mod matcore;
pub mod weights;

pub use error::{Error, Result};
pub use lpspace::{GradedElement, ModuleHom, TensorElement};
pub use matcore::{BlockAlgebra, Element, Tolerances};
pub use weights::{OperatorValuedWeight, Weight};

/// Complex number shorthand used throughout the API.
pub use num_complex::Complex64 as C64;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/algebras.md")]
    mod algebras {}
    #[doc = include_str!("../../../book/src/lp-spaces.md")]
    mod lp_spaces {}
    #[doc = include_str!("../../../book/src/weights.md")]
    mod weights {}
    #[doc = include_str!("../../../book/src/division.md")]
    mod division {}
    #[doc = include_str!("../../../book/src/tensor-and-hom.md")]
    mod tensor_and_hom {}
    #[doc = include_str!("../../../book/src/harness.md")]
    mod harness {}
}
