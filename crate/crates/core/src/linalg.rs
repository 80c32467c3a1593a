//! Dense complex linear algebra on one- and two-qubit Hilbert spaces.
//!
//! Operators are square complex matrices of dimension 2 (a single qubit) or
//! 4 (the `S ⊗ A` pair). Superoperators act on column-stacked operators.

use alloc::{string::ToString, vec::Vec};
use core::fmt;
use core::ops::{Add, Deref, Mul, Neg, Sub};
use core::str::FromStr;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::math;
use crate::{Error, Result};

pub use num_complex::Complex64 as C64;

/// Dense complex matrix backing every operator.
pub type CMatrix = DMatrix<C64>;

/// Eigenvalues below this floor are clamped before taking logarithms.
pub const LOG_FLOOR: f64 = 1e-14;
/// Entrywise tolerance on `ρ − ρ†` for a valid density matrix.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Tolerance on `|Tr ρ − 1|` for a valid density matrix.
pub const TRACE_TOL: f64 = 1e-10;
/// Smallest admissible eigenvalue of a valid density matrix.
pub const PSD_TOL: f64 = 1e-10;
/// Eigenvalues of a reference state below this are treated as outside its support.
pub const SUPPORT_TOL: f64 = 1e-12;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// One of the two subsystems of the joint space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Subsystem {
    /// The damped system qubit (first tensor factor).
    S,
    /// The ancilla qubit (second tensor factor).
    A,
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 4 {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(dim))
    }
}

/// A linear operator on a 2- or 4-dimensional Hilbert space.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator(CMatrix);

/// Spectral decomposition of a Hermitian operator, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl Operator {
    pub fn from_matrix(m: CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        check_dim(m.nrows())?;
        Ok(Self(m))
    }

    /// Builds an operator from row-major entries.
    pub fn from_rows(dim: usize, entries: &[C64]) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::Dimension {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Ok(Self(CMatrix::from_row_slice(dim, dim, entries)))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        check_dim(diag.len())?;
        let d: Vec<C64> = diag.iter().map(|&x| C64::new(x, 0.0)).collect();
        Ok(Self(CMatrix::from_diagonal(&DVector::from_vec(d))))
    }

    /// # Panics
    /// If `dim` is not 2 or 4.
    pub fn zeros(dim: usize) -> Self {
        assert!(check_dim(dim).is_ok(), "unsupported dimension {dim}");
        Self(CMatrix::zeros(dim, dim))
    }

    /// # Panics
    /// If `dim` is not 2 or 4.
    pub fn identity(dim: usize) -> Self {
        assert!(check_dim(dim).is_ok(), "unsupported dimension {dim}");
        Self(CMatrix::identity(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    /// `Tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &Operator) -> C64 {
        let n = self.dim();
        let mut acc = ZERO;
        for i in 0..n {
            for k in 0..n {
                acc += self.0[(i, k)] * other.0[(k, i)];
            }
        }
        acc
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, z| f64::max(m, z.norm()))
    }

    /// Largest entrywise modulus of `self − self†`.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                let d = (self.0[(i, j)] - self.0[(j, i)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()) * C64::new(0.5, 0.0))
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self(&self.0 * factor)
    }

    pub fn commutator(&self, other: &Operator) -> Self {
        Self(&self.0 * &other.0 - &other.0 * &self.0)
    }

    pub fn anticommutator(&self, other: &Operator) -> Self {
        Self(&self.0 * &other.0 + &other.0 * &self.0)
    }

    /// Entrywise complex conjugate in the fixed product basis.
    pub fn conjugate(&self) -> Self {
        Self(self.0.map(|z| z.conj()))
    }

    /// Eigendecomposition of the Hermitian part, eigenvalues ascending.
    pub fn eigh(&self) -> Eigen {
        let herm = self.hermitian_part();
        let eig = SymmetricEigen::new(herm.0);
        let n = eig.eigenvalues.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
        Eigen { values, vectors }
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues_hermitian(&self) -> Vec<f64> {
        self.eigh().values
    }

    /// Applies a scalar function through the spectral decomposition of the
    /// Hermitian part: `V f(D) V†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> Self {
        let Eigen { values, vectors } = self.eigh();
        let n = values.len();
        let mut scaled = vectors.clone();
        for (j, &v) in values.iter().enumerate() {
            let fv = C64::new(f(v), 0.0);
            for i in 0..n {
                scaled[(i, j)] *= fv;
            }
        }
        Self(scaled * vectors.adjoint())
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr<&Operator> for &Operator {
            type Output = Operator;
            fn $m(self, rhs: &Operator) -> Operator {
                Operator(&self.0 $op &rhs.0)
            }
        }
        impl $tr<Operator> for Operator {
            type Output = Operator;
            fn $m(self, rhs: Operator) -> Operator {
                Operator(self.0 $op rhs.0)
            }
        }
    };
}
binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Mul<f64> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: f64) -> Operator {
        Operator(&self.0 * C64::new(rhs, 0.0))
    }
}

impl Mul<C64> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: C64) -> Operator {
        Operator(&self.0 * rhs)
    }
}

impl Neg for Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        Operator(-self.0)
    }
}

/// Single-qubit Pauli basis element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl FromStr for Pauli {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" | "i" | "I" => Ok(Pauli::I),
            "x" | "X" => Ok(Pauli::X),
            "y" | "Y" => Ok(Pauli::Y),
            "z" | "Z" => Ok(Pauli::Z),
            other => Err(Error::UnknownPauli(other.to_string())),
        }
    }
}

/// Pauli matrix in the `{|0⟩, |1⟩}` = `{ground, excited}` basis.
///
/// `σ_z = diag(−1, +1)`, so `σ_z |1⟩ = |1⟩` and `[σ₊, σ₋] = σ_z`.
pub fn pauli(p: Pauli) -> Operator {
    let e = match p {
        Pauli::I => [ONE, ZERO, ZERO, ONE],
        Pauli::X => [ZERO, ONE, ONE, ZERO],
        Pauli::Y => [ZERO, -I, I, ZERO],
        Pauli::Z => [-ONE, ZERO, ZERO, ONE],
    };
    Operator(CMatrix::from_row_slice(2, 2, &e))
}

/// [`pauli`] looked up by name (`identity`, `x`, `y`, `z`).
pub fn pauli_by_name(name: &str) -> Result<Operator> {
    name.parse().map(pauli)
}

/// `σ₊ = |1⟩⟨0|`.
pub fn raising() -> Operator {
    Operator(CMatrix::from_row_slice(2, 2, &[ZERO, ZERO, ONE, ZERO]))
}

/// `σ₋ = |0⟩⟨1|`.
pub fn lowering() -> Operator {
    Operator(CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ZERO, ZERO]))
}

/// Tensor product `a ⊗ b` of two single-qubit operators; `a` acts on `S`.
///
/// # Panics
/// If either factor is not 2-dimensional.
pub fn kron(a: &Operator, b: &Operator) -> Operator {
    assert!(a.dim() == 2 && b.dim() == 2, "kron expects two qubit operators");
    Operator(a.0.kronecker(&b.0))
}

/// Partial trace of a two-qubit operator, keeping `keep`.
///
/// # Panics
/// If `op` is not 4-dimensional.
pub fn partial_trace(op: &Operator, keep: Subsystem) -> Operator {
    assert_eq!(op.dim(), 4, "partial trace expects a two-qubit operator");
    let m = &op.0;
    let entry = |i: usize, j: usize| match keep {
        Subsystem::S => m[(2 * i, 2 * j)] + m[(2 * i + 1, 2 * j + 1)],
        Subsystem::A => m[(i, j)] + m[(2 + i, 2 + j)],
    };
    Operator(CMatrix::from_fn(2, 2, entry))
}

/// Natural logarithm of a Hermitian operator with eigenvalues clamped to
/// [`LOG_FLOOR`].
pub fn matrix_log(op: &Operator) -> Operator {
    op.map_spectrum(|x| math::ln(x.max(LOG_FLOOR)))
}

/// Exponential of a Hermitian operator.
pub fn matrix_exp_hermitian(op: &Operator) -> Operator {
    op.map_spectrum(math::exp)
}

/// Trace norm `Σ|λᵢ|` of a Hermitian operator.
pub fn trace_norm(op: &Operator) -> Result<f64> {
    let dev = op.hermiticity_error();
    if dev > 1e-10 * op.max_abs().max(1.0) {
        return Err(Error::NotHermitian(dev));
    }
    Ok(op.eigenvalues_hermitian().iter().map(|x| x.abs()).sum())
}

/// `−Σ pᵢ ln pᵢ` with `0 ln 0 = 0`; non-positive eigenvalues contribute nothing.
pub fn entropy_of_spectrum(values: &[f64]) -> f64 {
    values
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * math::ln(p.max(LOG_FLOOR)))
        .sum()
}

/// Von Neumann entropy in nats.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    entropy_of_spectrum(&rho.eigenvalues_hermitian())
}

/// Converts an entropy in nats to bits.
pub fn nats_to_bits(x: f64) -> f64 {
    x / core::f64::consts::LN_2
}

/// Umegaki relative entropy `Tr ρ ln ρ − Tr ρ ln w` in nats.
///
/// Returns `f64::INFINITY` when `ρ` has weight outside the support of `w`.
pub fn relative_entropy(rho: &DensityMatrix, w: &DensityMatrix) -> Result<f64> {
    if rho.dim() != w.dim() {
        return Err(Error::Dimension {
            expected: w.dim(),
            found: rho.dim(),
        });
    }
    let neg_entropy = -von_neumann_entropy(rho);
    let Eigen { values, vectors } = w.eigh();
    let n = values.len();
    let mut cross = 0.0;
    for (k, &wk) in values.iter().enumerate() {
        let v = vectors.column(k);
        let mut weight = ZERO;
        for i in 0..n {
            for j in 0..n {
                weight += v[i].conj() * rho.0 .0[(i, j)] * v[j];
            }
        }
        let weight = weight.re;
        if wk <= SUPPORT_TOL {
            if weight > 1e-10 {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        cross += weight * math::ln(wk.max(LOG_FLOOR));
    }
    Ok(neg_entropy - cross)
}

/// A density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(Operator);

impl DensityMatrix {
    /// Validates `op` with the default tolerances.
    pub fn new(op: Operator) -> Result<Self> {
        Self::with_psd_tolerance(op, PSD_TOL)
    }

    /// Validates `op` allowing eigenvalues down to `-psd_tol`.
    pub fn with_psd_tolerance(op: Operator, psd_tol: f64) -> Result<Self> {
        let dev = op.hermiticity_error();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let tr = op.trace();
        if (tr - ONE).norm() > TRACE_TOL {
            return Err(Error::NotNormalized(tr.re));
        }
        let min = op.eigenvalues_hermitian()[0];
        if min < -psd_tol {
            return Err(Error::NotPositive(min));
        }
        Ok(Self(op))
    }

    /// Symmetrises and renormalises `op`, then validates positivity with `psd_tol`.
    pub fn from_hermitized(op: &Operator, psd_tol: f64) -> Result<Self> {
        let h = op.hermitian_part();
        let tr = h.trace().re;
        if !(tr.is_finite() && tr > 0.0) {
            return Err(Error::NotNormalized(tr));
        }
        Self::with_psd_tolerance(&h * (1.0 / tr), psd_tol)
    }

    pub(crate) fn new_unchecked(op: Operator) -> Self {
        Self(op)
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalised) ket.
    pub fn from_ket(ket: &[C64]) -> Result<Self> {
        check_dim(ket.len())?;
        let norm: f64 = ket.iter().map(|z| z.norm_sqr()).sum();
        if norm == 0.0 {
            return Err(Error::NotNormalized(0.0));
        }
        let v = DVector::from_column_slice(ket);
        let m = &v * v.adjoint() * C64::new(1.0 / norm, 0.0);
        Ok(Self(Operator(m)))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(&Operator::identity(dim) * (1.0 / dim as f64))
    }

    /// Qubit state `(𝟙 + x σ_x + y σ_y + z σ_z)/2`.
    pub fn from_bloch(x: f64, y: f64, z: f64) -> Result<Self> {
        let r2 = x * x + y * y + z * z;
        if r2 > 1.0 + 1e-12 {
            return Err(Error::NotPositive(0.5 * (1.0 - math::sqrt(r2))));
        }
        let op = &(&(&(&pauli(Pauli::I) + &(&pauli(Pauli::X) * x)) + &(&pauli(Pauli::Y) * y))
            + &(&pauli(Pauli::Z) * z))
            * 0.5;
        Ok(Self(op))
    }

    /// `|0⟩⟨0|`.
    pub fn ground() -> Self {
        Self(Operator::from_real_diagonal(&[1.0, 0.0]).unwrap())
    }

    /// `|1⟩⟨1|`.
    pub fn excited() -> Self {
        Self(Operator::from_real_diagonal(&[0.0, 1.0]).unwrap())
    }

    /// `|+⟩⟨+|` with `|±⟩ = (|0⟩ ± |1⟩)/√2`.
    pub fn plus() -> Self {
        Self::from_bloch(1.0, 0.0, 0.0).unwrap()
    }

    /// `|−⟩⟨−|`.
    pub fn minus() -> Self {
        Self::from_bloch(-1.0, 0.0, 0.0).unwrap()
    }

    /// `a ⊗ b` for two qubit states.
    pub fn product(a: &DensityMatrix, b: &DensityMatrix) -> Self {
        Self(kron(&a.0, &b.0))
    }

    /// Reduced state of a two-qubit density matrix.
    pub fn reduced(&self, keep: Subsystem) -> Self {
        Self(partial_trace(&self.0, keep))
    }

    pub fn as_operator(&self) -> &Operator {
        &self.0
    }

    pub fn into_operator(self) -> Operator {
        self.0
    }
}

impl Deref for DensityMatrix {
    type Target = Operator;
    fn deref(&self) -> &Operator {
        &self.0
    }
}

impl AsRef<Operator> for DensityMatrix {
    fn as_ref(&self) -> &Operator {
        &self.0
    }
}

/// A linear map on operators, stored as a matrix acting on column-stacked
/// operators: `vec(ρ)[i + d·j] = ρ[i, j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Superoperator {
    matrix: CMatrix,
    dim: usize,
}

impl Superoperator {
    pub fn from_matrix(matrix: CMatrix) -> Result<Self> {
        let dim = match matrix.nrows() {
            4 => 2,
            16 => 4,
            n => return Err(Error::UnsupportedDimension(n)),
        };
        if !matrix.is_square() {
            return Err(Error::Dimension {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        Ok(Self { matrix, dim })
    }

    /// Tabulates a linear map by applying it to the matrix units `|i⟩⟨j|`.
    pub fn from_fn(dim: usize, f: impl Fn(&Operator) -> Operator) -> Result<Self> {
        check_dim(dim)?;
        let n = dim * dim;
        let mut matrix = CMatrix::zeros(n, n);
        for j in 0..dim {
            for i in 0..dim {
                let mut unit = Operator::zeros(dim);
                unit.0[(i, j)] = ONE;
                let image = f(&unit);
                let col = i + dim * j;
                for (k, z) in image.0.iter().enumerate() {
                    matrix[(k, col)] = *z;
                }
            }
        }
        Ok(Self { matrix, dim })
    }

    /// Dimension of the underlying Hilbert space.
    pub fn hilbert_dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn apply(&self, op: &Operator) -> Operator {
        let v = &self.matrix * vectorize(op);
        unvectorize(&v)
    }

    /// Largest modulus of the trace functional applied after the map,
    /// `max_k |Σᵢ M[(i,i), k]|`; zero for a trace-annihilating generator.
    pub fn trace_defect(&self) -> f64 {
        let d = self.dim;
        (0..d * d)
            .map(|k| {
                (0..d)
                    .map(|i| self.matrix[(i + d * i, k)])
                    .fold(ZERO, |a, b| a + b)
                    .norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Column-stacked vector of an operator.
pub fn vectorize(op: &Operator) -> DVector<C64> {
    DVector::from_column_slice(op.0.as_slice())
}

/// Inverse of [`vectorize`].
///
/// # Panics
/// If the length is not 4 or 16.
pub fn unvectorize(v: &DVector<C64>) -> Operator {
    let dim = match v.len() {
        4 => 2,
        16 => 4,
        n => panic!("cannot reshape a vector of length {n}"),
    };
    Operator(CMatrix::from_column_slice(dim, dim, v.as_slice()))
}
