//! Closed-form treatment of the resonant, excitation-preserving case
//! `J_x = J_y = J/8`, `J_z = 0`, `ω_S = ω_A = ω`.
//!
//! Element equations and the literal λ-functions use the *excited-first frame*,
//! where index `0` labels the excited level (`σ_z = diag(1, −1)`). The
//! physical frame of the rest of the crate is reached by conjugation with
//! `σ_x` on every qubit, see [`to_excited_first`].
//!
//! Two generators are provided for the reduced dynamics with `ρ_A(0) = 𝟙/2`:
//! [`literal`] evaluates the λ-functions, rates `γ₁..γ₄` and denominator `D`
//! in their literal closed form, while [`tcl_apply`] uses rates obtained from the
//! closed-form reduced solution ([`ReducedSolution`]) and reproduces the
//! exact reduced dynamics.

use alloc::vec::Vec;

use crate::linalg::{kron, pauli, Operator, Pauli};
use crate::ode::{integrate, Tolerances};
use crate::{math, DensityMatrix, Error, ModelParams, Result, C64};

/// `|Δ|` below which the closed forms are refused.
pub const DELTA_TOL: f64 = 1e-12;
/// Imaginary residue tolerated in λ-functions when `η > J`.
pub const REALITY_TOL: f64 = 1e-9;
/// `|D|` below which the literal generator is flagged singular.
pub const SINGULAR_TOL: f64 = 1e-12;
/// `λ₁` or `A` smaller than this fraction of the magnitude of their own
/// terms marks a non-invertible reduced map.
pub const CANCELLATION_RTOL: f64 = 1e-9;

const PARAM_TOL: f64 = 1e-12;

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Parameters of the solvable regime, with `J = 8 J_x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RestrictedParams {
    pub gamma: f64,
    pub big_gamma: f64,
    pub j: f64,
    pub omega: f64,
}

impl RestrictedParams {
    pub fn from_model(p: &ModelParams) -> Result<Self> {
        if math::abs(p.j_x - p.j_y) > PARAM_TOL {
            return Err(Error::OutsideRegime("requires J_x = J_y"));
        }
        if math::abs(p.j_z) > PARAM_TOL {
            return Err(Error::OutsideRegime("requires J_z = 0"));
        }
        if math::abs(p.omega_s - p.omega_a) > PARAM_TOL {
            return Err(Error::OutsideRegime("requires omega_S = omega_A"));
        }
        Ok(Self {
            gamma: p.gamma,
            big_gamma: p.big_gamma,
            j: 8.0 * p.j_x,
            omega: p.omega_s,
        })
    }

    pub fn to_model(&self) -> ModelParams {
        ModelParams {
            omega_s: self.omega,
            omega_a: self.omega,
            j_x: self.j / 8.0,
            j_y: self.j / 8.0,
            j_z: 0.0,
            gamma: self.gamma,
            big_gamma: self.big_gamma,
        }
    }

    /// `η = γ + Γ`.
    pub fn eta(&self) -> f64 {
        self.gamma + self.big_gamma
    }

    /// `Δ = η² − J²`.
    pub fn delta(&self) -> f64 {
        let eta = self.eta();
        eta * eta - self.j * self.j
    }
}

/// Conjugation by `σ_x` on each qubit; maps the physical frame to the
/// excited-first frame and back.
pub fn to_excited_first(op: &Operator) -> Operator {
    let x = pauli(Pauli::X);
    let flip = if op.dim() == 4 { kron(&x, &x) } else { x };
    &(&flip * op) * &flip
}

/// The independent joint elements `ρ^{ijkl} = ⟨ij|ρ|kl⟩` in the excited-first
/// frame; `ρ^{1111}` follows from normalisation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ElementState {
    pub e0000: f64,
    pub e0001: C64,
    pub e0010: C64,
    pub e0011: C64,
    pub e0101: f64,
    pub e0110: C64,
    pub e0111: C64,
    pub e1010: f64,
    pub e1011: C64,
}

impl ElementState {
    /// Elements of a physical-frame two-qubit operator.
    pub fn from_operator(op: &Operator) -> Self {
        let a = to_excited_first(op);
        let e = |i: usize, j: usize| a.get(i, j);
        Self {
            e0000: e(0, 0).re,
            e0001: e(0, 1),
            e0010: e(0, 2),
            e0011: e(0, 3),
            e0101: e(1, 1).re,
            e0110: e(1, 2),
            e0111: e(1, 3),
            e1010: e(2, 2).re,
            e1011: e(2, 3),
        }
    }

    /// Physical-frame operator with `ρ^{1111} = trace − (ρ^{0000} + ρ^{0101} + ρ^{1010})`.
    pub fn to_operator(&self, trace: f64) -> Operator {
        let z = c(0.0);
        let e1111 = trace - self.e0000 - self.e0101 - self.e1010;
        let upper = [
            [c(self.e0000), self.e0001, self.e0010, self.e0011],
            [z, c(self.e0101), self.e0110, self.e0111],
            [z, z, c(self.e1010), self.e1011],
            [z, z, z, c(e1111)],
        ];
        let mut rows = [z; 16];
        for i in 0..4 {
            for j in 0..4 {
                rows[4 * i + j] = if j >= i { upper[i][j] } else { upper[j][i].conj() };
            }
        }
        to_excited_first(&Operator::from_rows(4, &rows).expect("4x4"))
    }

    fn to_vec(self) -> [C64; 9] {
        [
            c(self.e0000),
            self.e0001,
            self.e0010,
            self.e0011,
            c(self.e0101),
            self.e0110,
            self.e0111,
            c(self.e1010),
            self.e1011,
        ]
    }

    fn from_slice(v: &[C64]) -> Self {
        Self {
            e0000: v[0].re,
            e0001: v[1],
            e0010: v[2],
            e0011: v[3],
            e0101: v[4].re,
            e0110: v[5],
            e0111: v[6],
            e1010: v[7].re,
            e1011: v[8],
        }
    }
}

/// Right-hand side of the element equations for a unit-trace state.
pub fn element_rhs(rp: &RestrictedParams, s: &ElementState) -> ElementState {
    let (g, gg, w) = (rp.gamma, rp.big_gamma, rp.omega);
    let eta = rp.eta();
    let ij4 = C64::new(0.0, rp.j / 4.0);
    let iw = C64::new(0.0, w);
    let coh = s.e0110;
    let exchange = (ij4 * (coh.conj() - coh)).re;
    ElementState {
        e0000: -g * s.e0000 + gg * s.e1010,
        e0001: ij4 * s.e0010 - (iw * 2.0 + g) * s.e0001 + s.e1011 * gg,
        e0010: -(iw * 2.0 + eta / 2.0) * s.e0010 + ij4 * s.e0001,
        e0011: -(iw * 8.0 + eta) * 0.5 * s.e0011,
        e0101: -eta * s.e0101 + gg * (1.0 - s.e0000 - s.e1010) - exchange,
        e0110: ij4 * (s.e0101 - s.e1010) - coh * (eta / 2.0),
        e0111: -(iw * 2.0 + eta / 2.0) * s.e0111 - ij4 * s.e1011,
        e1010: g * s.e0000 - gg * s.e1010 + exchange,
        e1011: -ij4 * s.e0111 - (iw * 2.0 + gg) * s.e1011 + s.e0001 * g,
    }
}

/// Reduced element equations: `(d/dt ρ_S^{00}, d/dt ρ_S^{01})` in the
/// excited-first frame, where `ρ_S^{00}` is the excited population.
pub fn reduced_rhs(rp: &RestrictedParams, s: &ElementState) -> (f64, C64) {
    let eta = rp.eta();
    let ij4 = C64::new(0.0, rp.j / 4.0);
    let pop = s.e0000 + s.e0101;
    let coh = s.e0010 + s.e0111;
    let d00 = rp.big_gamma - eta * pop - (ij4 * (s.e0110.conj() - s.e0110)).re;
    let d01 = -C64::new(eta, 4.0 * rp.omega) * 0.5 * coh + ij4 * (s.e0001 - s.e1011);
    (d00, d01)
}

/// Integrates the element equations on `times`.
pub fn integrate_elements(rp: &RestrictedParams, s0: &ElementState, times: &[f64]) -> Result<Vec<ElementState>> {
    let raw = integrate(
        |_, y, dy| {
            let d = element_rhs(rp, &ElementState::from_slice(y)).to_vec();
            dy.copy_from_slice(&d);
        },
        &s0.to_vec(),
        times,
        &Tolerances::default(),
    )?;
    Ok(raw.iter().map(|v| ElementState::from_slice(v)).collect())
}

/// Shared constants of the closed forms.
#[derive(Clone, Copy, Debug)]
struct Consts {
    gamma: f64,
    big_gamma: f64,
    j2: f64,
    eta: f64,
    delta: f64,
    /// Principal `√Δ`.
    s: C64,
    omega_plus: C64,
    omega_minus: C64,
}

impl Consts {
    fn new(gamma: f64, big_gamma: f64, j: f64) -> Result<Self> {
        let eta = gamma + big_gamma;
        let delta = eta * eta - j * j;
        if math::abs(delta) < DELTA_TOL {
            return Err(Error::DegenerateDelta(delta));
        }
        let s = c(delta).sqrt();
        let base = c(eta * eta - 0.5 * j * j);
        Ok(Self {
            gamma,
            big_gamma,
            j2: j * j,
            eta,
            delta,
            s,
            omega_plus: base + s * eta,
            omega_minus: base - s * eta,
        })
    }

    fn sigma_plus(&self) -> C64 {
        self.s + self.eta
    }

    fn sigma_minus(&self) -> C64 {
        -self.s + self.eta
    }

    /// `(λ₁, λ̇₁)`.
    fn lambda1(&self, t: f64) -> (C64, C64) {
        let (l, d, _) = self.lambda1_scaled(t);
        (l, d)
    }

    /// `(λ₁, λ̇₁, Σ|terms of λ₁|)`.
    ///
    /// Uses `√Ω± = Σ±/√2`, under which the growing modes of the sinh/cosh form
    /// cancel identically: `λ₁ = (Σ₊ e^{−r₋t} − Σ₋ e^{−r₊t}) / (2√Δ)` with
    /// `r± = η/2 + Σ±/4`.
    fn lambda1_scaled(&self, t: f64) -> (C64, C64, f64) {
        let (sp, sm) = (self.sigma_plus(), self.sigma_minus());
        let r_m = sm * 0.25 + 0.5 * self.eta;
        let r_p = sp * 0.25 + 0.5 * self.eta;
        let (em, ep) = ((-r_m * t).exp(), (-r_p * t).exp());
        let d = self.s * 2.0;
        let l = (sp * em - sm * ep) / d;
        let l_dot = (-sp * r_m * em + sm * r_p * ep) / d;
        let scale = ((sp * em).norm() + (sm * ep).norm()) / d.norm();
        (l, l_dot, scale)
    }

    /// `λ₁` as the sinh/cosh combination, for cross-checking.
    #[cfg(test)]
    fn lambda1_hyperbolic(&self, t: f64) -> C64 {
        let q = 2.0 * core::f64::consts::SQRT_2;
        let (ap, am) = (self.omega_plus.sqrt(), self.omega_minus.sqrt());
        let (xp, xm) = (ap * t / q, am * t / q);
        let f = (am * xp.sinh() - ap * xm.sinh()) / (self.s * core::f64::consts::SQRT_2)
            + (self.sigma_plus() * xm.cosh() - self.sigma_minus() * xp.cosh()) / (self.s * 2.0);
        f * math::exp(-0.5 * self.eta * t)
    }

    /// Literal `λ₂..λ₅` and their derivatives.
    fn literal_rest(&self, t: f64) -> ([C64; 4], [C64; 4]) {
        let (g, gg, eta, s) = (self.gamma, self.big_gamma, self.eta, self.s);
        let j2 = self.j2;
        let d = c(self.delta);
        let e = c(math::exp(-0.5 * eta * t));
        let ep = (-(s + eta) * (0.5 * t)).exp();
        let em = ((s - eta) * (0.5 * t)).exp();
        let (sp, sm) = (self.sigma_plus(), self.sigma_minus());

        let g2 = sp * ep - sm * em;
        let g2d = -sp * sp * 0.5 * ep + sm * sm * 0.5 * em;
        let l2 = (s * eta * (gg - g) + g2 * (g * eta)) / (d * s);
        let l2d = g2d * (g * eta) / (d * s);

        let sh = (s * (0.5 * t)).sinh();
        let ch = (s * (0.5 * t)).cosh();
        let l3 = (s * (g - gg) + e * (sh * eta - s) * (2.0 * g)) * j2 / (d * s * eta);
        let l3d = e * ((sh * eta - s) * (-0.5 * eta) + s * ch * (0.5 * eta)) * (2.0 * g * j2) / (d * s * eta);

        let g4 = em - e * 2.0 + ep;
        let g4d = -(-s + eta) * 0.5 * em + e * eta - (s + eta) * 0.5 * ep;
        let l4 = (g4 * (g - gg) / (d * 2.0) - l2 / eta) * (j2 / eta);
        let l4d = (g4d * (g - gg) / (d * 2.0) - l2d / eta) * (j2 / eta);

        let l5 = e * (2.0 * j2 * gg) / (d * eta) + c((gg - g) / eta) - (sp * ep + sm * em) * gg / d;
        let l5d = -e * (j2 * gg) / d + (sp * sp * ep + sm * sm * em) * gg / (d * 2.0);

        ([l2, l3, l4, l5], [l2d, l3d, l4d, l5d])
    }

    /// Closed-form population terms: `(A, Ȧ, I, K, K̇)`.
    fn population_terms(&self, t: f64) -> [C64; 5] {
        self.population_terms_scaled(t).0
    }

    fn population_terms_scaled(&self, t: f64) -> ([C64; 5], f64) {
        let (eta, s, d) = (self.eta, self.s, c(self.delta));
        let j2 = self.j2;
        let e = math::exp(-0.5 * eta * t);
        let em = (-s * (0.5 * t)).exp();
        let ep = (s * (0.5 * t)).exp();
        let bracket = self.omega_plus * em + self.omega_minus * ep - j2;
        let a = bracket * e / (d * 2.0);
        let a_dot = (bracket * (-0.5 * eta) + (-self.omega_plus * em + self.omega_minus * ep) * (s * 0.5)) * e / (d * 2.0);
        let rp = (s + eta) * 0.5;
        let rm = (-s + eta) * 0.5;
        let i = -c(j2 * (1.0 - e)) / (d * eta)
            + self.omega_plus / (d * 2.0) * phi(rp, t)
            + self.omega_minus / (d * 2.0) * phi(rm, t);
        let ch = (s * (0.5 * t)).cosh();
        let sh = (s * (0.5 * t)).sinh();
        let k = (ch - 1.0) * (j2 * e) / (d * 2.0);
        let k_dot = ((ch - 1.0) * (-0.5 * eta) + s * 0.5 * sh) * (j2 * e) / (d * 2.0);
        let a_scale = e * ((self.omega_plus * em).norm() + (self.omega_minus * ep).norm() + j2) / (2.0 * math::abs(self.delta));
        ([a, a_dot, i, k, k_dot], a_scale)
    }
}

/// `(1 − e^{−rt}) / r`, equal to `t` at `r = 0`.
fn phi(r: C64, t: f64) -> C64 {
    let x = r * t;
    if x.norm() < 1e-3 {
        // 1 − x/2 + x²/6 − x³/24 + x⁴/120
        let series = c(1.0) - x / 2.0 + x * x / 6.0 - x * x * x / 24.0 + x * x * x * x / 120.0;
        series * t
    } else {
        (c(1.0) - (-x).exp()) / r
    }
}

/// The closed-form coefficients at one time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnalyticCoefficients {
    pub eta: f64,
    pub delta: f64,
    pub omega_plus: C64,
    pub omega_minus: C64,
    pub sigma_plus: C64,
    pub sigma_minus: C64,
    /// Real parts of `λ₁..λ₅`.
    pub lambda: [f64; 5],
    /// Real parts of `λ̇₁..λ̇₅`.
    pub lambda_dot: [f64; 5],
    /// Largest imaginary part among `λ` and `λ̇`.
    pub imag_residue: f64,
    /// `γ₁ˢ..γ₄ˢ` in literal form.
    pub gamma_s: [f64; 4],
    /// `D = 4λ₁(λ₄ − λ₃)`.
    pub d_denom: f64,
    /// `|D| < SINGULAR_TOL`.
    pub singular: bool,
}

/// Literal λ-functions and their exact time derivatives.
///
/// Evaluated in complex arithmetic with the principal `√Δ`. When `η > J` an
/// imaginary residue above [`REALITY_TOL`] is an error.
pub fn lambda_functions(t: f64, gamma: f64, big_gamma: f64, j: f64) -> Result<([f64; 5], [f64; 5], f64)> {
    let k = Consts::new(gamma, big_gamma, j)?;
    let (l1, l1d) = k.lambda1(t);
    let (rest, rest_d) = k.literal_rest(t);
    let all = [l1, rest[0], rest[1], rest[2], rest[3]];
    let all_d = [l1d, rest_d[0], rest_d[1], rest_d[2], rest_d[3]];
    let imag = all.iter().chain(&all_d).fold(0.0_f64, |m, z| m.max(math::abs(z.im)));
    if k.eta > math::abs(j) && imag > REALITY_TOL * (1.0 + max_norm(&all).max(max_norm(&all_d))) {
        return Err(Error::ComplexRate(imag));
    }
    Ok((all.map(|z| z.re), all_d.map(|z| z.re), imag))
}

fn max_norm(v: &[C64]) -> f64 {
    v.iter().fold(0.0, |m, z| f64::max(m, z.norm()))
}

/// Literal TCL rates `γ₁ˢ..γ₄ˢ` and denominator `D` from λ and λ̇.
pub fn rates_from_lambdas(l: &[f64; 5], d: &[f64; 5]) -> ([f64; 4], f64) {
    let [l1, l2, l3, l4, l5] = *l;
    let [d1, d2, d3, d4, d5] = *d;
    let r2 = core::f64::consts::SQRT_2;
    let g1 = 4.0 * d1 * (l3 - l4) - 2.0 * l1 * (d3 - d4);
    let g2 = -2.0 * l1 * (l4 * (d2 + d3) + (l2 - 1.0) * (d3 - d4) - l3 * (d2 + d4));
    let g3 = 4.0 * l1 * (d3 - d4) - g2;
    let g4 = r2 * (l5 - l2) * (d3 - d4) - r2 * l4 * (d2 + d3 - d5) + r2 * l3 * (d2 + d4 - d5);
    ([g1, g2, g3, g4], 4.0 * l1 * (l4 - l3))
}

/// Full set of literal coefficients at time `t`.
pub fn tcl_rates(t: f64, gamma: f64, big_gamma: f64, j: f64) -> Result<AnalyticCoefficients> {
    let k = Consts::new(gamma, big_gamma, j)?;
    let (lambda, lambda_dot, imag_residue) = lambda_functions(t, gamma, big_gamma, j)?;
    let (gamma_s, d_denom) = rates_from_lambdas(&lambda, &lambda_dot);
    Ok(AnalyticCoefficients {
        eta: k.eta,
        delta: k.delta,
        omega_plus: k.omega_plus,
        omega_minus: k.omega_minus,
        sigma_plus: k.sigma_plus(),
        sigma_minus: k.sigma_minus(),
        lambda,
        lambda_dot,
        imag_residue,
        gamma_s,
        d_denom,
        singular: math::abs(d_denom) < SINGULAR_TOL,
    })
}

/// The generator in its literal closed form, on excited-first operators.
pub mod literal {
    use super::*;

    /// `A ρ B − ½{B A, ρ}`.
    fn term(a: &Operator, b: &Operator, rho: &Operator) -> Operator {
        &(&(a * rho) * b) - &(&(b * a).anticommutator(rho) * 0.5)
    }

    /// Literal `K_S(ρ)` in the excited-first frame (`σ_z = diag(1, −1)`,
    /// `σ₋ = |1⟩⟨0|`, `σ₊ = |0⟩⟨1|`).
    ///
    /// Returns the output together with the coefficients used; when the
    /// literal `D` is singular the dissipator is not evaluated and the
    /// coefficients carry `singular = true`.
    pub fn generator_apply(rho: &Operator, t: f64, rp: &RestrictedParams) -> Result<(Operator, AnalyticCoefficients)> {
        if rho.dim() != 2 {
            return Err(Error::Dimension {
                expected: 2,
                found: rho.dim(),
            });
        }
        let coeff = tcl_rates(t, rp.gamma, rp.big_gamma, rp.j)?;
        let sz = -pauli(Pauli::Z);
        let sm = crate::linalg::raising();
        let sp = crate::linalg::lowering();
        let h = &sz * rp.omega;
        let unitary = h.commutator(rho).scale(C64::new(0.0, -1.0));
        if coeff.singular {
            return Ok((unitary, coeff));
        }
        let [g1, g2, g3, g4] = coeff.gamma_s;
        let phase = C64::from_polar(1.0, -(2.0 * rp.omega * t + core::f64::consts::FRAC_PI_4));
        let mut acc = &(&(&(&sz * rho) * &sz) - rho) * g1;
        acc = &acc + &(&term(&sm, &sp, rho) * g2);
        acc = &acc + &(&term(&sp, &sm, rho) * g3);
        let cross_up = &term(&sz, &sp, rho) + &term(&sp, &sz, rho);
        let cross_down = &term(&sz, &sm, rho) + &term(&sm, &sz, rho);
        acc = &acc + &(&cross_up * (phase * g4));
        acc = &acc + &(&cross_down * (phase.conj() * g4));
        Ok((&unitary + &(&acc * (1.0 / coeff.d_denom)), coeff))
    }
}

/// Closed-form reduced dynamics of `S` for `ρ_A(0) = 𝟙/2`.
///
/// In the physical frame, with excited population `p` and coherence
/// `ρ₁₀ = ⟨1|ρ_S|0⟩`:
///
/// ```text
/// ⟨σ_z⟩(t) = A(t) ⟨σ_z⟩(0) + b(t),     ρ₁₀(t) = λ₁(t) e^{−2iωt} ρ₁₀(0).
/// ```
#[derive(Clone, Copy, Debug)]
pub struct ReducedSolution {
    rp: RestrictedParams,
    k: Consts,
    z0: f64,
    coherence0: C64,
}

/// Population map `z(t) = A z(0) + b` and its derivative at one time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PopulationMap {
    pub a: f64,
    pub a_dot: f64,
    pub b: f64,
    pub b_dot: f64,
}

impl ReducedSolution {
    pub fn new(rp: &RestrictedParams, rho_s0: &DensityMatrix) -> Result<Self> {
        if rho_s0.dim() != 2 {
            return Err(Error::Dimension {
                expected: 2,
                found: rho_s0.dim(),
            });
        }
        let k = Consts::new(rp.gamma, rp.big_gamma, rp.j)?;
        Ok(Self {
            rp: *rp,
            k,
            z0: rho_s0.trace_product(&pauli(Pauli::Z)).re,
            coherence0: rho_s0.get(1, 0),
        })
    }

    /// `λ₁(t)`, the coherence contraction factor.
    pub fn coherence_factor(&self, t: f64) -> f64 {
        self.k.lambda1(t).0.re
    }

    pub fn population_map(&self, t: f64) -> PopulationMap {
        population_map(&self.k, t)
    }

    /// Excited-state population at `t`.
    pub fn excited_population(&self, t: f64) -> f64 {
        let m = self.population_map(t);
        0.5 * (1.0 + m.a * self.z0 + m.b)
    }

    /// `ρ_S(t)` assembled from a population and a coherence factor.
    pub fn assemble(&self, t: f64, excited: f64, lambda1: f64) -> Result<DensityMatrix> {
        let coh = self.coherence0 * C64::from_polar(lambda1, -2.0 * self.rp.omega * t);
        let rows = [c(1.0 - excited), coh.conj(), coh, c(excited)];
        DensityMatrix::with_psd_tolerance(Operator::from_rows(2, &rows)?, 1e-8)
    }

    pub fn state_at(&self, t: f64) -> Result<DensityMatrix> {
        self.assemble(t, self.excited_population(t), self.coherence_factor(t))
    }
}

fn population_map(k: &Consts, t: f64) -> PopulationMap {
    let [a, a_dot, i, kk, k_dot] = k.population_terms(t);
    let two_g = 2.0 * k.big_gamma;
    let b = a - 1.0 + i * two_g + kk;
    // dI/dt = A
    let b_dot = a_dot + a * two_g + k_dot;
    PopulationMap {
        a: a.re,
        a_dot: a_dot.re,
        b: b.re,
        b_dot: b_dot.re,
    }
}

/// Rates of the exact time-local generator
/// `K(ρ) = −i[ω σ_z, ρ] + γ_φ (σ_z ρ σ_z − ρ) + r_d D[σ₋] + r_u D[σ₊]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TclGenerator {
    pub dephasing: f64,
    pub decay: f64,
    pub excitation: f64,
    /// `λ₁` or `A` vanishes to within [`CANCELLATION_RTOL`] of its own terms:
    /// the reduced map is not invertible here.
    pub singular: bool,
}

/// Rates of the exact TCL generator at `t`, from the closed-form solution.
pub fn tcl_generator(t: f64, rp: &RestrictedParams) -> Result<TclGenerator> {
    let k = Consts::new(rp.gamma, rp.big_gamma, rp.j)?;
    let (l1, l1d, l1_scale) = k.lambda1_scaled(t);
    let (l1, l1d) = (l1.re, l1d.re);
    let m = population_map(&k, t);
    let a_scale = k.population_terms_scaled(t).1;
    let singular = !(math::abs(l1) > CANCELLATION_RTOL * l1_scale && math::abs(m.a) > CANCELLATION_RTOL * a_scale);
    if singular {
        return Ok(TclGenerator {
            dephasing: f64::NAN,
            decay: f64::NAN,
            excitation: f64::NAN,
            singular,
        });
    }
    let total = -m.a_dot / m.a;
    let diff = m.b_dot - m.b * m.a_dot / m.a;
    Ok(TclGenerator {
        dephasing: -0.5 * l1d / l1 + m.a_dot / (4.0 * m.a),
        decay: 0.5 * (total - diff),
        excitation: 0.5 * (total + diff),
        singular,
    })
}

/// Exact time-local generator of the reduced dynamics applied to a
/// physical-frame qubit operator. Valid for trajectories started with
/// `ρ_A(0) = 𝟙/2`. Returns the rates so callers can see singular points.
pub fn tcl_apply(rho_s: &Operator, t: f64, rp: &RestrictedParams) -> Result<(Operator, TclGenerator)> {
    if rho_s.dim() != 2 {
        return Err(Error::Dimension {
            expected: 2,
            found: rho_s.dim(),
        });
    }
    let rates = tcl_generator(t, rp)?;
    let sz = pauli(Pauli::Z);
    let unitary = (&sz * rp.omega).commutator(rho_s).scale(C64::new(0.0, -1.0));
    if rates.singular {
        return Ok((unitary, rates));
    }
    let dephase = &(&(&(&sz * rho_s) * &sz) - rho_s) * rates.dephasing;
    let down = &crate::model::lindblad_term(&crate::linalg::lowering(), rho_s) * rates.decay;
    let up = &crate::model::lindblad_term(&crate::linalg::raising(), rho_s) * rates.excitation;
    Ok((&(&(&unitary + &dephase) + &down) + &up, rates))
}
