use crate::error::{check_non_negative, PtreError, Result};

/// Site energies ε₁, ε₂ of the excited states and their coupling J.
///
/// H₀ = ε₁|1⟩⟨1| + ε₂|2⟩⟨2| + (J/2)(|1⟩⟨2| + |2⟩⟨1|), ground state at zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub epsilon1: f64,
    pub epsilon2: f64,
    pub coupling: f64,
}

impl SystemParams {
    pub fn new(epsilon1: f64, epsilon2: f64, coupling: f64) -> Result<Self> {
        if !(epsilon1.is_finite() && epsilon2.is_finite()) {
            return Err(PtreError::Domain("site energies must be finite".into()));
        }
        check_non_negative("J", coupling)?;
        Ok(Self {
            epsilon1,
            epsilon2,
            coupling,
        })
    }

    /// ε = ε₁ − ε₂
    pub fn detuning(&self) -> f64 {
        self.epsilon1 - self.epsilon2
    }

    /// Strong-coupling efficiency limit η₀ = ε₂/ε₁.
    pub fn eta0(&self) -> f64 {
        self.epsilon2 / self.epsilon1
    }
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            epsilon1: 5.0,
            epsilon2: 4.5,
            coupling: 1.0,
        }
    }
}
