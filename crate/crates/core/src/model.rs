//! Hamiltonians, dissipator and Liouvillian of the system-plus-ancilla model.
//!
//! The generator is
//!
//! ```text
//! L(ρ) = −i[H, ρ] + γ D[σ₋⊗𝟙](ρ) + Γ D[σ₊⊗𝟙](ρ),
//! H = ω_S σ_z⊗𝟙 + ω_A 𝟙⊗σ_z + J_x σ_x⊗σ_x + J_y σ_y⊗σ_y + J_z σ_z⊗σ_z,
//! D[c](ρ) = c ρ c† − ½{c†c, ρ}.
//! ```

use crate::linalg::{kron, lowering, pauli, raising, CMatrix, Operator, Pauli, Superoperator, C64};
use crate::{math, DensityMatrix, Error, Result};

/// Physical constants of the model, in units with `ħ = k_B = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    pub omega_s: f64,
    pub omega_a: f64,
    pub j_x: f64,
    pub j_y: f64,
    pub j_z: f64,
    /// Decay rate of `S` (jump operator `σ₋⊗𝟙`).
    pub gamma: f64,
    /// Excitation rate of `S` (jump operator `σ₊⊗𝟙`).
    pub big_gamma: f64,
}

impl ModelParams {
    /// Validated constructor: all values finite, both rates strictly positive.
    pub fn new(
        omega_s: f64,
        omega_a: f64,
        j_x: f64,
        j_y: f64,
        j_z: f64,
        gamma: f64,
        big_gamma: f64,
    ) -> Result<Self> {
        let p = Self {
            omega_s,
            omega_a,
            j_x,
            j_y,
            j_z,
            gamma,
            big_gamma,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("omega_s", self.omega_s),
            ("omega_a", self.omega_a),
            ("j_x", self.j_x),
            ("j_y", self.j_y),
            ("j_z", self.j_z),
            ("gamma", self.gamma),
            ("big_gamma", self.big_gamma),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    reason: "must be finite",
                });
            }
        }
        if self.gamma <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "gamma",
                reason: "must be positive",
            });
        }
        if self.big_gamma <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "big_gamma",
                reason: "must be positive",
            });
        }
        Ok(())
    }

    /// Same parameters with all couplings switched off.
    pub fn uncoupled(&self) -> Self {
        Self {
            j_x: 0.0,
            j_y: 0.0,
            j_z: 0.0,
            ..*self
        }
    }

    /// Whether `J_x = J_y` within `1e-12`, the regime with a product steady state.
    pub fn is_excitation_preserving(&self) -> bool {
        math::abs(self.j_x - self.j_y) <= 1e-12
    }
}

/// `H_S = ω_S σ_z`.
pub fn hamiltonian_system(p: &ModelParams) -> Operator {
    &pauli(Pauli::Z) * p.omega_s
}

/// `H_A = ω_A σ_z`.
pub fn hamiltonian_ancilla(p: &ModelParams) -> Operator {
    &pauli(Pauli::Z) * p.omega_a
}

/// `H_I = J_x σ_x⊗σ_x + J_y σ_y⊗σ_y + J_z σ_z⊗σ_z`.
pub fn hamiltonian_interaction(p: &ModelParams) -> Operator {
    let xx = kron(&pauli(Pauli::X), &pauli(Pauli::X));
    let yy = kron(&pauli(Pauli::Y), &pauli(Pauli::Y));
    let zz = kron(&pauli(Pauli::Z), &pauli(Pauli::Z));
    &(&(&xx * p.j_x) + &(&yy * p.j_y)) + &(&zz * p.j_z)
}

/// `H_S⊗𝟙 + 𝟙⊗H_A + H_I`.
pub fn hamiltonian_total(p: &ModelParams) -> Operator {
    let id = Operator::identity(2);
    let local = &kron(&hamiltonian_system(p), &id) + &kron(&id, &hamiltonian_ancilla(p));
    &local + &hamiltonian_interaction(p)
}

/// Jump operators of the bath acting on `S`, paired with their rates.
pub fn jump_operators(p: &ModelParams) -> [(Operator, f64); 2] {
    let id = Operator::identity(2);
    [
        (kron(&lowering(), &id), p.gamma),
        (kron(&raising(), &id), p.big_gamma),
    ]
}

/// `D[c](ρ) = c ρ c† − ½{c†c, ρ}`.
pub fn lindblad_term(c: &Operator, rho: &Operator) -> Operator {
    let cd = c.adjoint();
    let cdc = &cd * c;
    &(&(c * rho) * &cd) - &(&cdc.anticommutator(rho) * 0.5)
}

/// Unitary part `−i[H, ρ]`.
pub fn hamiltonian_part(p: &ModelParams, rho: &Operator) -> Operator {
    hamiltonian_total(p).commutator(rho).scale(C64::new(0.0, -1.0))
}

/// Dissipative part `γ D[σ₋⊗𝟙](ρ) + Γ D[σ₊⊗𝟙](ρ)`.
pub fn dissipator(p: &ModelParams, rho: &Operator) -> Operator {
    let [(cm, g), (cp, gg)] = jump_operators(p);
    &(&lindblad_term(&cm, rho) * g) + &(&lindblad_term(&cp, rho) * gg)
}

/// `L(ρ)` for a two-qubit operator.
///
/// # Panics
/// If `rho` is not 4-dimensional.
pub fn apply_lindbladian(p: &ModelParams, rho: &Operator) -> Operator {
    assert_eq!(rho.dim(), 4, "the Liouvillian acts on two-qubit operators");
    &hamiltonian_part(p, rho) + &dissipator(p, rho)
}

/// Matrix of `L` on column-stacked operators, built from
/// `vec(A X B) = (Bᵀ ⊗ A) vec(X)`.
pub fn liouvillian_matrix(p: &ModelParams) -> Superoperator {
    let id = CMatrix::identity(4, 4);
    let h = hamiltonian_total(p).into_matrix();
    let minus_i = C64::new(0.0, -1.0);
    let mut m = (id.kronecker(&h) - h.transpose().kronecker(&id)) * minus_i;
    for (c, rate) in jump_operators(p) {
        let c = c.into_matrix();
        let cdc = c.adjoint() * &c;
        let half = C64::new(0.5, 0.0);
        let term = c.conjugate().kronecker(&c)
            - id.kronecker(&cdc) * half
            - cdc.transpose().kronecker(&id) * half;
        m += term * C64::new(rate, 0.0);
    }
    Superoperator::from_matrix(m).expect("16x16 by construction")
}

/// Bath inverse temperature `β = ln(γ/Γ) / (2 ω_S)`; negative when `Γ > γ`.
pub fn bath_beta(p: &ModelParams) -> Result<f64> {
    if p.omega_s == 0.0 {
        return Err(Error::ZeroFrequency);
    }
    Ok(math::ln(p.gamma / p.big_gamma) / (2.0 * p.omega_s))
}

/// `e^{−βh} / Tr e^{−βh}` for Hermitian `h`, shifted by the ground energy.
pub fn gibbs_state(h: &Operator, beta: f64) -> Result<DensityMatrix> {
    let dev = h.hermiticity_error();
    if dev > 1e-12 * h.max_abs().max(1.0) {
        return Err(Error::NotHermitian(dev));
    }
    let values = h.eigenvalues_hermitian();
    let e0 = if beta >= 0.0 {
        values[0]
    } else {
        values[values.len() - 1]
    };
    let unnorm = h.map_spectrum(|e| math::exp(-beta * (e - e0)));
    let z = unnorm.trace().re;
    DensityMatrix::from_hermitized(&unnorm, 1e-10).map_err(|_| Error::NotNormalized(z))
}
