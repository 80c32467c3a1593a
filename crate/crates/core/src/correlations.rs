//! Entanglement and correlation measures for two-qubit states.

use crate::linalg::{entropy_of_spectrum, kron, pauli, von_neumann_entropy, Pauli};
use crate::{math, DensityMatrix, Error, ModelParams, Result, Subsystem};

/// Off-diagonal magnitude above which a qubit state has no effective temperature.
pub const OFFDIAG_TOL: f64 = 1e-8;
/// Most negative mutual information accepted as rounding noise.
pub const MI_NEGATIVE_TOL: f64 = 1e-10;

/// Wootters concurrence.
///
/// Uses the eigenvalues of `√ρ ρ̃ √ρ`, `ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`, which
/// coincide with those of `ρ ρ̃`. Negative eigenvalues are clamped to zero.
pub fn concurrence(rho: &DensityMatrix) -> f64 {
    let yy = kron(&pauli(Pauli::Y), &pauli(Pauli::Y));
    let flipped = &(&yy * &rho.conjugate()) * &yy;
    let root = rho.map_spectrum(|x| math::sqrt(x.max(0.0)));
    let r = &(&root * &flipped) * &root;
    let mut l = r.eigenvalues_hermitian();
    l.iter_mut().for_each(|x| *x = math::sqrt(x.max(0.0)));
    // ascending order: l[3] is the largest
    (l[3] - l[2] - l[1] - l[0]).clamp(0.0, 1.0)
}

/// `h(x) = −x log₂ x − (1−x) log₂(1−x)`.
pub fn binary_entropy(x: f64) -> f64 {
    let term = |p: f64| if p > 0.0 { -p * libm::log2(p) } else { 0.0 };
    term(x) + term(1.0 - x)
}

/// Entanglement of formation in bits, `h((1 + √(1 − C²))/2)`.
pub fn eof_from_concurrence(c: f64) -> f64 {
    let c = c.clamp(0.0, 1.0);
    binary_entropy(0.5 * (1.0 + math::sqrt(1.0 - c * c)))
}

pub fn eof(rho: &DensityMatrix) -> f64 {
    eof_from_concurrence(concurrence(rho))
}

/// `S(ρ_S) + S(ρ_A) − S(ρ)` in nats, clamped to zero for rounding noise.
pub fn mutual_information(rho: &DensityMatrix) -> Result<f64> {
    let s = von_neumann_entropy(&rho.reduced(Subsystem::S));
    let a = von_neumann_entropy(&rho.reduced(Subsystem::A));
    let mi = s + a - entropy_of_spectrum(&rho.eigenvalues_hermitian());
    if mi < -MI_NEGATIVE_TOL {
        return Err(Error::NegativeMutualInformation(mi));
    }
    Ok(mi.max(0.0))
}

/// Inverse temperature making a diagonal qubit state Gibbs for `ω σ_z`:
/// `ln(p₀/p₁) / (2ω)`. Returns `+∞` for the ground state and `−∞` for the
/// excited state.
pub fn effective_beta(rho: &DensityMatrix, omega: f64) -> Result<f64> {
    if rho.dim() != 2 {
        return Err(Error::Dimension {
            expected: 2,
            found: rho.dim(),
        });
    }
    if omega == 0.0 {
        return Err(Error::ZeroFrequency);
    }
    let off = rho.get(0, 1).norm();
    if off > OFFDIAG_TOL {
        return Err(Error::NotDiagonal(off));
    }
    let p0 = rho.get(0, 0).re;
    let p1 = rho.get(1, 1).re;
    if p1 <= 0.0 {
        return Ok(if omega > 0.0 { f64::INFINITY } else { f64::NEG_INFINITY });
    }
    if p0 <= 0.0 {
        return Ok(if omega > 0.0 { f64::NEG_INFINITY } else { f64::INFINITY });
    }
    Ok(math::ln(p0 / p1) / (2.0 * omega))
}

/// Correlation quantifiers of a two-qubit state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorrelationRecord {
    pub concurrence: f64,
    /// Bits.
    pub eof: f64,
    /// Nats.
    pub mutual_info: f64,
    /// `None` where the reduced state is not diagonal.
    pub beta_eff_s: Option<f64>,
    pub beta_eff_a: Option<f64>,
}

pub fn correlation_record(rho: &DensityMatrix, p: &ModelParams) -> Result<CorrelationRecord> {
    let c = concurrence(rho);
    let beta = |keep, omega| match effective_beta(&rho.reduced(keep), omega) {
        Ok(b) => Ok(Some(b)),
        Err(Error::NotDiagonal(_)) => Ok(None),
        Err(e) => Err(e),
    };
    Ok(CorrelationRecord {
        concurrence: c,
        eof: eof_from_concurrence(c),
        mutual_info: mutual_information(rho)?,
        beta_eff_s: beta(Subsystem::S, p.omega_s)?,
        beta_eff_a: beta(Subsystem::A, p.omega_a)?,
    })
}
