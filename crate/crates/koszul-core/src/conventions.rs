//! The pinned sign conventions, collected in one place.
//!
//! Every convention-sensitive operation has a `*_with` variant taking a
//! [`SignConventions`] value; the plain entry points use
//! [`SignConventions::default`]. The non-default settings exist so the
//! conformance suite can prove each pinned sign is load-bearing: flipping any
//! one of them must make at least one named identity fail.

/// Switches for the four pinned sign conventions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SignConventions {
    /// Flip the overall sign of the odd master Hamiltonian that generates
    /// derived brackets on antimomentum charts, and of the de Rham vector
    /// field (the two are images of one another, so they flip together).
    pub master_sign_flipped: bool,

    /// Flip the sign of the dual-fiber image in the even fiber/momentum
    /// exchange (breaks the symplectomorphism property).
    pub mx_fiber_sign_flipped: bool,

    /// Flip the sign of the interior product along a vector field.
    pub interior_sign_flipped: bool,

    /// Use right partial derivatives instead of left ones inside the
    /// canonical even bracket.
    pub right_derivative: bool,
}

impl SignConventions {
    /// The engine's pinned conventions.
    pub fn pinned() -> Self {
        SignConventions::default()
    }

    /// Sign of the derived-bracket master Hamiltonian and the de Rham field.
    pub fn master_sign(&self) -> i8 {
        if self.master_sign_flipped {
            -1
        } else {
            1
        }
    }

    /// Sign prefactor of the interior product.
    pub fn interior_sign(&self) -> i8 {
        if self.interior_sign_flipped {
            -1
        } else {
            1
        }
    }
}
