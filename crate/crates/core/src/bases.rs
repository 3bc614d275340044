//! Orthonormal operator bases of `L(C^N)` and their algebraic data.
//!
//! Index convention for the matrix-unit basis: `α = (i, j)` is flattened as
//! `α = i·N + j` and `E_α = |j⟩⟨i|` (row and column swapped relative to the
//! double index). With this convention the GKS matrix in the standard basis
//! is the Choi matrix entry for entry.

use num_complex::Complex64;

use crate::linalg::{hs_inner, CMatrix, ONE, ZERO};
use crate::{Error, Result};

/// Orthonormality tolerance for bases.
pub const ORTHONORMAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisLabel {
    Standard,
    GellMann,
    Custom,
}

impl BasisLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            BasisLabel::Standard => "standard",
            BasisLabel::GellMann => "gellmann",
            BasisLabel::Custom => "custom",
        }
    }
}

/// An ordered, Hilbert–Schmidt orthonormal family of `N²` operators `F_α`.
#[derive(Debug, Clone)]
pub struct OperatorBasis {
    dim: usize,
    elements: Vec<CMatrix>,
    label: BasisLabel,
}

impl OperatorBasis {
    /// Validates a user-supplied family. Nothing is orthonormalized.
    pub fn custom(elements: Vec<CMatrix>) -> Result<Self> {
        let dim = match elements.first() {
            Some(e) => e.rows(),
            None => return Err(Error::DimensionMismatch("empty basis".into())),
        };
        if elements.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "{} elements for operators of dimension {dim}",
                elements.len()
            )));
        }
        if let Some(bad) = elements.iter().find(|e| e.rows() != dim || e.cols() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "basis element is {}x{}, expected {dim}x{dim}",
                bad.rows(),
                bad.cols()
            )));
        }
        let basis = Self {
            dim,
            elements,
            label: BasisLabel::Custom,
        };
        basis.validate()?;
        Ok(basis)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of elements, `N²`.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    pub fn element(&self, alpha: usize) -> &CMatrix {
        &self.elements[alpha]
    }

    pub fn label(&self) -> BasisLabel {
        self.label
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_error(&self) -> f64 {
        let mut err = 0.0f64;
        for (a, fa) in self.elements.iter().enumerate() {
            for (b, fb) in self.elements.iter().enumerate().skip(a) {
                let target = if a == b { ONE } else { ZERO };
                let ip = hs_inner(fa, fb).expect("basis elements share a dimension");
                err = err.max((ip - target).norm());
            }
        }
        err
    }

    pub fn validate(&self) -> Result<()> {
        let err = self.orthonormality_error();
        if err > ORTHONORMAL_TOL {
            return Err(Error::NonOrthonormalBasis(err));
        }
        Ok(())
    }

    /// Deviation of `F₀` from `I/√N`.
    pub fn unit_first_error(&self) -> f64 {
        let target = CMatrix::identity(self.dim).scale_re(1.0 / (self.dim as f64).sqrt());
        (&self.elements[0] - &target).max_abs()
    }

    pub fn require_unit_first(&self) -> Result<()> {
        let err = self.unit_first_error();
        if err > ORTHONORMAL_TOL {
            return Err(Error::BasisNotUnitFirst(err));
        }
        Ok(())
    }

    pub fn is_hermitian(&self) -> bool {
        self.elements.iter().all(|f| f.is_hermitian(ORTHONORMAL_TOL))
    }

    /// Entrywise comparison of two bases.
    pub fn same_as(&self, other: &OperatorBasis, tol: f64) -> bool {
        self.dim == other.dim
            && self
                .elements
                .iter()
                .zip(&other.elements)
                .all(|(a, b)| (a - b).max_abs() <= tol)
    }

    /// The basis `F'_α = Σ_β u[α][β] F_β` for a unitary `u`.
    pub fn rotated(&self, u: &CMatrix) -> Result<Self> {
        if u.rows() != self.len() || u.cols() != self.len() {
            return Err(Error::DimensionMismatch(format!(
                "rotation is {}x{}, basis has {} elements",
                u.rows(),
                u.cols(),
                self.len()
            )));
        }
        let elements = (0..self.len())
            .map(|a| {
                let mut acc = CMatrix::zeros(self.dim, self.dim);
                for (b, fb) in self.elements.iter().enumerate() {
                    acc.add_scaled(u[(a, b)], fb);
                }
                acc
            })
            .collect();
        Self::custom(elements)
    }
}

/// The matrix units `E_{(i,j)} = |j⟩⟨i|`, flattened as `α = i·n + j`.
pub fn standard_basis(n: usize) -> OperatorBasis {
    assert!(n >= 1, "basis dimension must be positive");
    let elements = (0..n)
        .flat_map(|i| (0..n).map(move |j| CMatrix::unit(n, j, i)))
        .collect();
    OperatorBasis {
        dim: n,
        elements,
        label: BasisLabel::Standard,
    }
}

/// Hermitian orthonormal basis with `F₀ = I/√n`.
///
/// Order after `F₀`: symmetric pairs `(|i⟩⟨j| + |j⟩⟨i|)/√2`, then
/// antisymmetric pairs `(−i|i⟩⟨j| + i|j⟩⟨i|)/√2`, both over `i < j`
/// lexicographically, then the diagonal ladder
/// `(Σ_{k<l} |k⟩⟨k| − l|l⟩⟨l|)/√(l(l+1))` for `l = 1..n−1`.
/// For `n = 2` this is `(I, σx, σy, σz)/√2`.
pub fn gellmann_basis(n: usize) -> OperatorBasis {
    assert!(n >= 1, "basis dimension must be positive");
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let mut elements = vec![CMatrix::identity(n).scale_re(1.0 / (n as f64).sqrt())];

    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    for &(i, j) in &pairs {
        let mut m = CMatrix::zeros(n, n);
        m[(i, j)] = Complex64::new(inv_sqrt2, 0.0);
        m[(j, i)] = Complex64::new(inv_sqrt2, 0.0);
        elements.push(m);
    }
    for &(i, j) in &pairs {
        let mut m = CMatrix::zeros(n, n);
        m[(i, j)] = Complex64::new(0.0, -inv_sqrt2);
        m[(j, i)] = Complex64::new(0.0, inv_sqrt2);
        elements.push(m);
    }
    for l in 1..n {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let mut m = CMatrix::zeros(n, n);
        for k in 0..l {
            m[(k, k)] = Complex64::new(norm, 0.0);
        }
        m[(l, l)] = Complex64::new(-(l as f64) * norm, 0.0);
        elements.push(m);
    }
    OperatorBasis {
        dim: n,
        elements,
        label: BasisLabel::GellMann,
    }
}

/// The unitary `U` with `F_α = Σ_{α'} U[α][α'] G_{α'}`, i.e. `U[α][α'] = ⟨G_{α'}, F_α⟩`.
pub fn basis_change_unitary(f: &OperatorBasis, g: &OperatorBasis) -> Result<CMatrix> {
    if f.dim != g.dim {
        return Err(Error::DimensionMismatch(format!(
            "bases of dimension {} and {}",
            f.dim, g.dim
        )));
    }
    f.validate()?;
    g.validate()?;
    let d = f.len();
    let mut u = CMatrix::zeros(d, d);
    for (a, fa) in f.elements.iter().enumerate() {
        for (b, gb) in g.elements.iter().enumerate() {
            u[(a, b)] = hs_inner(gb, fa)?;
        }
    }
    Ok(u)
}

/// Multiplication table `F_γ F_α = Σ_λ Π^λ_{γα} F_λ`.
#[derive(Debug, Clone)]
pub struct StructureConstants {
    dim: usize,
    /// Flattened as `[(γ·D + α)·D + λ]` with `D = N²`.
    pi: Vec<Complex64>,
}

impl StructureConstants {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `Π^λ_{γα}`.
    pub fn get(&self, lambda: usize, gamma: usize, alpha: usize) -> Complex64 {
        let d = self.dim * self.dim;
        self.pi[(gamma * d + alpha) * d + lambda]
    }

    /// The matrix `M_γ` with `M_γ[λ][α] = Π^λ_{γα}`: left multiplication by
    /// `F_γ` in coordinates.
    pub fn left_multiplication(&self, gamma: usize) -> CMatrix {
        let d = self.dim * self.dim;
        let mut m = CMatrix::zeros(d, d);
        for alpha in 0..d {
            for lambda in 0..d {
                m[(lambda, alpha)] = self.get(lambda, gamma, alpha);
            }
        }
        m
    }
}

pub fn structure_constants(f: &OperatorBasis) -> Result<StructureConstants> {
    f.validate()?;
    let d = f.len();
    let mut pi = vec![ZERO; d * d * d];
    for (gamma, fg) in f.elements.iter().enumerate() {
        for (alpha, fa) in f.elements.iter().enumerate() {
            let prod = fg * fa;
            for (lambda, fl) in f.elements.iter().enumerate() {
                pi[(gamma * d + alpha) * d + lambda] = hs_inner(fl, &prod)?;
            }
        }
    }
    Ok(StructureConstants { dim: f.dim, pi })
}
