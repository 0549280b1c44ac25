//! Graded elements of `L_a(M)`, their (quasi)norms, Hölder witnesses, the
//! multiplication/comultiplication pair on `L_a ⊗_M L_b` and the internal hom.

mod graded;
mod hom;
mod tensor;

pub use graded::{holder_witness, holder_witness_imaginary, lnorm, GradedElement, GRADING_SLACK, NOISE_FLOOR};
pub use hom::{hom_from_element, hom_norm, hom_to_element, HomNorm, ModuleHom, LADDER_STEPS};
pub use tensor::{comultiply, comultiply_tensor, tensor_multiply, turpin_lower, turpin_upper, TensorElement};
