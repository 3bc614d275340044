//! Superoperators on `L(C^N)` and their matrix isomorphisms.
//!
//! A superoperator is stored through the row-major vectorization
//! `vec(A)[k·N + l] = A[k][l]`, so the entry at row `k·N + l` and column
//! `i·N + j` is the `(k, l)` entry of `𝓔(|i⟩⟨j|)`.

use num_complex::Complex64;

use crate::bases::{basis_change_unitary, standard_basis, BasisLabel, OperatorBasis};
use crate::linalg::{herm_eig, CMatrix, ZERO};
use crate::{Error, Result};

/// Kraus operators with a Hilbert–Schmidt norm below this are dropped.
pub const KRAUS_NORM_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SuperOp {
    dim: usize,
    matrix: CMatrix,
}

impl SuperOp {
    /// Wraps an `N²×N²` matrix.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let dim = operator_dim(&matrix)?;
        Ok(Self { dim, matrix })
    }

    /// Builds the superoperator of a linear `action` by evaluating it on every
    /// matrix unit.
    pub fn from_map(n: usize, action: impl Fn(&CMatrix) -> CMatrix) -> Self {
        Self::try_from_map(n, |a| Ok(action(a))).expect("infallible action")
    }

    /// As [`SuperOp::from_map`] for an action that can fail.
    pub fn try_from_map(n: usize, action: impl Fn(&CMatrix) -> Result<CMatrix>) -> Result<Self> {
        let d = n * n;
        let mut matrix = CMatrix::zeros(d, d);
        for i in 0..n {
            for j in 0..n {
                let out = action(&CMatrix::unit(n, i, j))?;
                if out.rows() != n || out.cols() != n {
                    return Err(Error::DimensionMismatch(format!(
                        "map sends {n}x{n} to {}x{}",
                        out.rows(),
                        out.cols()
                    )));
                }
                for (r, v) in out.vec().into_iter().enumerate() {
                    matrix[(r, i * n + j)] = v;
                }
            }
        }
        Ok(Self { dim: n, matrix })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            dim: n,
            matrix: CMatrix::identity(n * n),
        }
    }

    /// `A ↦ Aᵀ`.
    pub fn transposition(n: usize) -> Self {
        Self::from_map(n, CMatrix::transpose)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn apply(&self, a: &CMatrix) -> Result<CMatrix> {
        if a.rows() != self.dim || a.cols() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "superoperator acts on {0}x{0}, got {1}x{2}",
                self.dim,
                a.rows(),
                a.cols()
            )));
        }
        CMatrix::unvec(self.dim, self.matrix.mul_vec(&a.vec()))
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &SuperOp) -> Result<SuperOp> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!(
                "composing superoperators on dimensions {} and {}",
                self.dim, other.dim
            )));
        }
        Ok(SuperOp {
            dim: self.dim,
            matrix: &self.matrix * &other.matrix,
        })
    }

    pub fn max_abs_diff(&self, other: &SuperOp) -> f64 {
        (&self.matrix - &other.matrix).max_abs()
    }
}

fn operator_dim(matrix: &CMatrix) -> Result<usize> {
    let d = matrix.rows();
    let n = (d as f64).sqrt().round() as usize;
    if !matrix.is_square() || n * n != d || n == 0 {
        return Err(Error::DimensionMismatch(format!(
            "expected an N²xN² matrix, got {}x{}",
            matrix.rows(),
            matrix.cols()
        )));
    }
    Ok(n)
}

/// Coefficients `g^{αβ}` of `𝓔(A) = Σ g^{αβ} F_α A F_β*` in a fixed basis.
#[derive(Debug, Clone)]
pub struct GksMatrix {
    basis: OperatorBasis,
    g: CMatrix,
}

impl GksMatrix {
    pub fn new(g: CMatrix, basis: OperatorBasis) -> Result<Self> {
        let n = operator_dim(&g)?;
        if n != basis.dim() {
            return Err(Error::DimensionMismatch(format!(
                "coefficient matrix for dimension {n}, basis of dimension {}",
                basis.dim()
            )));
        }
        Ok(Self { basis, g })
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn basis(&self) -> &OperatorBasis {
        &self.basis
    }

    pub fn g(&self) -> &CMatrix {
        &self.g
    }

    pub fn into_matrix(self) -> CMatrix {
        self.g
    }

    /// `Σ g^{αβ} F_α a F_β*`, evaluated directly from the basis.
    pub fn apply(&self, a: &CMatrix) -> Result<CMatrix> {
        let n = self.dim();
        if a.rows() != n || a.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "expected {n}x{n}, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        let mut out = CMatrix::zeros(n, n);
        for (al, fa) in self.basis.elements().iter().enumerate() {
            let left = fa * a;
            for (be, fb) in self.basis.elements().iter().enumerate() {
                let c = self.g[(al, be)];
                if c != ZERO {
                    out.add_scaled(c, &(&left * &fb.adjoint()));
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone)]
pub struct KrausSet {
    dim: usize,
    operators: Vec<CMatrix>,
}

impl KrausSet {
    /// Drops negligible operators and checks that all share one square shape.
    pub fn new(operators: Vec<CMatrix>) -> Result<Self> {
        let dim = match operators.first() {
            Some(a) => a.rows(),
            None => return Err(Error::DimensionMismatch("empty Kraus set".into())),
        };
        if let Some(bad) = operators.iter().find(|a| a.rows() != dim || a.cols() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "Kraus operator is {}x{}, expected {dim}x{dim}",
                bad.rows(),
                bad.cols()
            )));
        }
        let operators = operators
            .into_iter()
            .filter(|a| a.frobenius_norm() >= KRAUS_NORM_FLOOR)
            .collect();
        Ok(Self { dim, operators })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }
}

/// The Choi matrix, with rows `i·N + k` and columns `j·N + l`.
pub fn choi(s: &SuperOp) -> GksMatrix {
    GksMatrix {
        basis: standard_basis(s.dim),
        g: reshuffle(s.dim, &s.matrix, false),
    }
}

pub fn choi_inverse(c: &GksMatrix) -> Result<SuperOp> {
    if c.basis.label() != BasisLabel::Standard {
        return Err(Error::WrongBasis);
    }
    Ok(SuperOp {
        dim: c.dim(),
        matrix: reshuffle(c.dim(), &c.g, true),
    })
}

/// Moves entry `((k,l),(i,j))` of a superoperator matrix to `((i,k),(j,l))`,
/// or back when `inverse` is set.
fn reshuffle(n: usize, x: &CMatrix, inverse: bool) -> CMatrix {
    let d = n * n;
    let mut out = CMatrix::zeros(d, d);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let sup = (k * n + l, i * n + j);
                    let cho = (i * n + k, j * n + l);
                    if inverse {
                        out[sup] = x[cho];
                    } else {
                        out[cho] = x[sup];
                    }
                }
            }
        }
    }
    out
}

/// GKS matrix of `s` in the basis `f`.
///
/// The operators `F_α ⊗ conj(F_β)` are the superoperator matrices of
/// `A ↦ F_α A F_β*` and form an orthonormal family, so each coefficient is a
/// Hilbert–Schmidt projection.
pub fn gks(s: &SuperOp, f: &OperatorBasis) -> Result<GksMatrix> {
    require_dim(s.dim, f)?;
    f.validate()?;
    let n = s.dim;
    let d = n * n;
    let els = f.elements();
    let mut g = CMatrix::zeros(d, d);
    for (al, fa) in els.iter().enumerate() {
        for (be, fb) in els.iter().enumerate() {
            let mut acc = ZERO;
            for k in 0..n {
                for i in 0..n {
                    let a = fa[(k, i)];
                    if a == ZERO {
                        continue;
                    }
                    let a = a.conj();
                    for l in 0..n {
                        for j in 0..n {
                            acc += a * fb[(l, j)] * s.matrix[(k * n + l, i * n + j)];
                        }
                    }
                }
            }
            g[(al, be)] = acc;
        }
    }
    Ok(GksMatrix {
        basis: f.clone(),
        g,
    })
}

/// The superoperator `A ↦ Σ g^{αβ} F_α A F_β*`.
pub fn gks_inverse(g: &GksMatrix) -> SuperOp {
    let n = g.dim();
    let d = n * n;
    let els = g.basis.elements();
    let mut matrix = CMatrix::zeros(d, d);
    for (al, fa) in els.iter().enumerate() {
        for (be, fb) in els.iter().enumerate() {
            let c = g.g[(al, be)];
            if c != ZERO {
                matrix.add_scaled(c, &fa.kron(&fb.conj()));
            }
        }
    }
    SuperOp { dim: n, matrix }
}

/// Re-expresses `g` in `target` via `ĝ = V g V*` with `V = Uᵀ`.
pub fn gks_change_basis(g: &GksMatrix, target: &OperatorBasis) -> Result<GksMatrix> {
    let u = basis_change_unitary(&g.basis, target)?;
    let v = u.transpose();
    Ok(GksMatrix {
        basis: target.clone(),
        g: &(&v * &g.g) * &v.adjoint(),
    })
}

/// `Σ_α F_α* ⊗ 𝓔(F_α)`.
pub fn dpj(s: &SuperOp, f: &OperatorBasis) -> Result<CMatrix> {
    basis_sum(s, f, CMatrix::adjoint)
}

/// `Σ_α F_α ⊗ 𝓔(F_α)`: the Choi sum with `|i⟩⟨j|` replaced by `F_α`, the
/// first factor entering unconjugated. Depends on the basis.
pub fn pskh(s: &SuperOp, f: &OperatorBasis) -> Result<CMatrix> {
    basis_sum(s, f, CMatrix::clone)
}

/// `Σ_α conj(F_α) ⊗ 𝓔(F_α)`, conjugating entrywise in the computational basis.
pub fn fc(s: &SuperOp, f: &OperatorBasis) -> Result<CMatrix> {
    basis_sum(s, f, CMatrix::conj)
}

fn basis_sum(s: &SuperOp, f: &OperatorBasis, first: impl Fn(&CMatrix) -> CMatrix) -> Result<CMatrix> {
    require_dim(s.dim, f)?;
    f.validate()?;
    let d = s.dim * s.dim;
    let mut out = CMatrix::zeros(d, d);
    for fa in f.elements() {
        out += &first(fa).kron(&s.apply(fa)?);
    }
    Ok(out)
}

fn require_dim(n: usize, f: &OperatorBasis) -> Result<()> {
    if f.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "superoperator on dimension {n}, basis of dimension {}",
            f.dim()
        )));
    }
    Ok(())
}

/// Structural verdict on a superoperator.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub hermiticity_preserving: bool,
    pub trace_preserving: bool,
    pub completely_positive: bool,
    /// Smallest eigenvalue of the Hermitian part of the GKS matrix.
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    /// Number of eigenvalues above `tol`, reported for CP maps only.
    pub kraus_rank: Option<usize>,
    pub trace_error: f64,
    pub hermiticity_error: f64,
}

pub fn check(s: &SuperOp, f: &OperatorBasis, tol: f64) -> Result<Verdict> {
    check_gks(&gks(s, f)?, tol)
}

pub fn check_gks(g: &GksMatrix, tol: f64) -> Result<Verdict> {
    let n = g.dim();
    let hermiticity_error = g.g.hermiticity_error();
    let hermiticity_preserving = hermiticity_error <= tol;

    let els = g.basis.elements();
    let mut sum = CMatrix::zeros(n, n);
    for (al, fa) in els.iter().enumerate() {
        for (be, fb) in els.iter().enumerate() {
            let c = g.g[(al, be)];
            if c != ZERO {
                sum.add_scaled(c, &(&fb.adjoint() * fa));
            }
        }
    }
    let trace_error = (&sum - &CMatrix::identity(n)).max_abs();
    let trace_preserving = trace_error <= tol;

    let eig = herm_eig(&g.g.hermitian_part())?;
    let min_eigenvalue = eig.min();
    let completely_positive = hermiticity_preserving && min_eigenvalue >= -tol;
    let kraus_rank =
        completely_positive.then(|| eig.eigenvalues.iter().filter(|&&l| l > tol).count());
    Ok(Verdict {
        hermiticity_preserving,
        trace_preserving,
        completely_positive,
        min_eigenvalue,
        max_eigenvalue: eig.max(),
        kraus_rank,
        trace_error,
        hermiticity_error,
    })
}

/// Kraus operators `Ã_γ = √g_γ Σ_α W[α][γ] F_α` from the spectral
/// decomposition of `g`. Eigenvalues within `tol` of zero are discarded.
pub fn kraus_from_gks(g: &GksMatrix, tol: f64) -> Result<KrausSet> {
    let eig = herm_eig(&g.g)?;
    let min = eig.min();
    if min < -tol {
        return Err(Error::NotCompletelyPositive(min));
    }
    let n = g.dim();
    let mut operators = Vec::new();
    for (gamma, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda <= tol {
            continue;
        }
        let mut a = CMatrix::zeros(n, n);
        for (al, fa) in g.basis.elements().iter().enumerate() {
            a.add_scaled(eig.vectors[(al, gamma)], fa);
        }
        operators.push(fix_phase(&a).scale_re(lambda.sqrt()));
    }
    if operators.is_empty() {
        return Ok(KrausSet {
            dim: n,
            operators,
        });
    }
    KrausSet::new(operators)
}

/// Rotates the global phase so the largest-modulus entry (first in row-major
/// order on ties) is real and positive.
fn fix_phase(a: &CMatrix) -> CMatrix {
    let mut best = ZERO;
    for &z in a.as_slice() {
        if z.norm() > best.norm() * (1.0 + 1e-12) {
            best = z;
        }
    }
    if best == ZERO {
        return a.clone();
    }
    a.scale(best.conj() / best.norm())
}

/// The superoperator `X ↦ Σ A X A*`.
pub fn superop_from_kraus(k: &KrausSet) -> SuperOp {
    let d = k.dim * k.dim;
    let mut matrix = CMatrix::zeros(d, d);
    for a in &k.operators {
        matrix += &a.kron(&a.conj());
    }
    SuperOp { dim: k.dim, matrix }
}

/// The Hilbert–Schmidt adjoint, `⟨X, 𝓔(Y)⟩ = ⟨𝓔*(X), Y⟩`.
pub fn adjoint(s: &SuperOp) -> SuperOp {
    SuperOp {
        dim: s.dim,
        matrix: s.matrix.adjoint(),
    }
}

/// The GKS matrix of the identity map in a basis with `F₀ = I/√N`: `N` at
/// `(0, 0)` and zero elsewhere.
pub fn identity_gks(f: &OperatorBasis) -> Result<GksMatrix> {
    f.require_unit_first()?;
    let d = f.len();
    let mut g = CMatrix::zeros(d, d);
    g[(0, 0)] = Complex64::new(f.dim() as f64, 0.0);
    Ok(GksMatrix {
        basis: f.clone(),
        g,
    })
}
