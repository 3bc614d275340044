//! Dense complex matrix kernels.
//!
//! Everything here works on small, dense, row-major matrices: the largest
//! objects in this crate are superoperators on `(N·M)²`-dimensional spaces
//! for single-digit `N` and `M`.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::{Error, Result};

/// Tolerance for Hermiticity and unitarity checks.
pub const HERMITICITY_TOL: f64 = 1e-9;
/// Eigenvalues above `-PSD_TOL` count as non-negative.
pub const PSD_TOL: f64 = 1e-9;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

/// A dense complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:>10.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    /// The matrix unit `|i⟩⟨j|` of size `n×n`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(i, j)] = ONE;
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows, rejecting ragged input.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let ncols = rows.first().map_or(0, Vec::len);
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * ncols);
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != ncols {
                return Err(Error::RaggedRows {
                    row: r,
                    expected: ncols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Self {
            rows: nrows,
            cols: ncols,
            data,
        })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn from_diag(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<Complex64>> {
        self.data.chunks(self.cols.max(1)).map(<[_]>::to_vec).collect()
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)];
            }
        }
        t
    }

    /// Entrywise complex conjugate (no transpose).
    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].conj();
            }
        }
        t
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> f64 {
        (0..self.cols)
            .map(|c| (0..self.rows).map(|r| self[(r, c)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `‖self − self*‖∞`, or infinity for non-square input.
    pub fn hermiticity_error(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut err = 0.0f64;
        for r in 0..self.rows {
            for c in r..self.cols {
                err = err.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        err
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    /// `(self + self*)/2`.
    pub fn hermitian_part(&self) -> Self {
        (self + &self.adjoint()).scale_re(0.5)
    }

    pub fn matmul(&self, rhs: &CMatrix) -> Result<CMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(self.mul_unchecked(rhs))
    }

    fn mul_unchecked(&self, rhs: &CMatrix) -> CMatrix {
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            let out_row = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let rhs_row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|r| {
                self.data[r * self.cols..(r + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// Kronecker product; `self` supplies the block (outer) index.
    pub fn kron(&self, rhs: &CMatrix) -> CMatrix {
        let (rr, rc) = (rhs.rows, rhs.cols);
        let mut out = Self::zeros(self.rows * rr, self.cols * rc);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a == ZERO {
                    continue;
                }
                for k in 0..rr {
                    for l in 0..rc {
                        out[(i * rr + k, j * rc + l)] = a * rhs[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Row-major vectorization, `vec(A)[k·N + l] = A[k][l]`.
    pub fn vec(&self) -> Vec<Complex64> {
        self.data.clone()
    }

    pub fn unvec(n: usize, v: Vec<Complex64>) -> Result<CMatrix> {
        Self::from_vec(n, n, v)
    }

    /// Inverse by Gauss–Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Result<CMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "cannot invert a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[(x, col)].norm().total_cmp(&a[(y, col)].norm()))
                .unwrap_or(col);
            let p = a[(pivot, col)];
            if p.norm() == 0.0 {
                return Err(Error::InvariantViolation("singular matrix".into()));
            }
            if pivot != col {
                for c in 0..n {
                    a.data.swap(pivot * n + c, col * n + c);
                    inv.data.swap(pivot * n + c, col * n + c);
                }
            }
            let pinv = ONE / p;
            for c in 0..n {
                a[(col, c)] *= pinv;
                inv[(col, c)] *= pinv;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[(r, col)];
                if f == ZERO {
                    continue;
                }
                for c in 0..n {
                    let (ac, ic) = (a[(col, c)], inv[(col, c)]);
                    a[(r, c)] -= f * ac;
                    inv[(r, c)] -= f * ic;
                }
            }
        }
        Ok(inv)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;

    fn neg(self) -> CMatrix {
        self.map(|z| -z)
    }
}

impl AddAssign<&CMatrix> for CMatrix {
    fn add_assign(&mut self, rhs: &CMatrix) {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

/// Panics on inner-dimension mismatch; use [`CMatrix::matmul`] for a checked product.
impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimension mismatch");
        self.mul_unchecked(rhs)
    }
}

impl CMatrix {
    /// `self += s · rhs`.
    pub fn add_scaled(&mut self, s: Complex64, rhs: &CMatrix) {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += s * b;
        }
    }
}

fn require_same_square(x: &CMatrix, y: &CMatrix) -> Result<()> {
    if !x.is_square() || !y.is_square() || x.rows != y.rows {
        return Err(Error::DimensionMismatch(format!(
            "expected equal square matrices, got {}x{} and {}x{}",
            x.rows, x.cols, y.rows, y.cols
        )));
    }
    Ok(())
}

/// Hilbert–Schmidt inner product `Tr(x* y)`, conjugate-linear in `x`.
pub fn hs_inner(x: &CMatrix, y: &CMatrix) -> Result<Complex64> {
    require_same_square(x, y)?;
    Ok(x.data.iter().zip(&y.data).map(|(a, b)| a.conj() * b).sum())
}

/// Which tensor factor a partial trace removes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Partial trace of `x` on `C^n ⊗ C^m` (block index = first factor).
///
/// `Subsystem::Second` returns the `n×n` reduced matrix, `Subsystem::First`
/// the `m×m` one.
pub fn partial_trace(x: &CMatrix, dims: (usize, usize), which: Subsystem) -> Result<CMatrix> {
    let (n, m) = dims;
    if !x.is_square() || x.rows != n * m {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix does not factor as {n}*{m}",
            x.rows, x.cols
        )));
    }
    Ok(match which {
        Subsystem::Second => {
            let mut out = CMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    out[(i, j)] = (0..m).map(|k| x[(i * m + k, j * m + k)]).sum();
                }
            }
            out
        }
        Subsystem::First => {
            let mut out = CMatrix::zeros(m, m);
            for a in 0..m {
                for b in 0..m {
                    out[(a, b)] = (0..n).map(|i| x[(i * m + a, i * m + b)]).sum();
                }
            }
            out
        }
    })
}

/// `true` iff `max |x − y| ≤ tol` entrywise.
pub fn approx_eq(x: &CMatrix, y: &CMatrix, tol: f64) -> Result<bool> {
    if (x.rows, x.cols) != (y.rows, y.cols) {
        return Err(Error::DimensionMismatch(format!(
            "cannot compare {}x{} with {}x{}",
            x.rows, x.cols, y.rows, y.cols
        )));
    }
    Ok((x - y).max_abs() <= tol)
}

/// Spectral decomposition `h = V · diag(λ) · V*` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermEig {
    /// Sorted descending.
    pub eigenvalues: Vec<f64>,
    /// Unitary; column `k` belongs to `eigenvalues[k]`.
    pub vectors: CMatrix,
}

impl HermEig {
    pub fn min(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn reconstruct(&self) -> CMatrix {
        let d: Vec<Complex64> = self.eigenvalues.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        &(&self.vectors * &CMatrix::from_diag(&d)) * &self.vectors.adjoint()
    }
}

const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Eigenvalues come out sorted descending. Each eigenvector is phase-fixed so
/// that its first significant component is real and positive, and runs of
/// (numerically) degenerate eigenvalues are ordered lexicographically by
/// their phase-fixed vectors. Identical input always gives identical output.
pub fn herm_eig(h: &CMatrix) -> Result<HermEig> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition of a {}x{} matrix",
            h.rows, h.cols
        )));
    }
    let herr = h.hermiticity_error();
    if herr > HERMITICITY_TOL * h.max_abs().max(1.0) {
        return Err(Error::NotHermitian(herr));
    }
    let n = h.rows;
    let mut a = h.hermitian_part();
    let mut v = CMatrix::identity(n);
    let scale = a.frobenius_norm();

    let off_norm = |a: &CMatrix| -> f64 {
        let mut acc = 0.0;
        for p in 0..n {
            for q in 0..n {
                if p != q {
                    acc += a[(p, q)].norm_sqr();
                }
            }
        }
        acc.sqrt()
    };
    let mut previous = f64::INFINITY;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off = off_norm(&a);
        // Converged, or stalled at roundoff level.
        if off == 0.0 || off <= 1e-15 * scale || (off >= previous && off <= 1e-12 * scale) {
            break;
        }
        previous = off;
        for p in 0..n {
            for q in p + 1..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut pairs: Vec<(f64, Vec<Complex64>)> = (0..n)
        .map(|k| (a[(k, k)].re, phase_fixed(v.column(k))))
        .collect();
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));

    // Order degenerate runs by their phase-fixed vectors.
    let tie = 1e-12 * scale.max(1.0);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && pairs[end - 1].0 - pairs[end].0 <= tie {
            end += 1;
        }
        pairs[start..end].sort_by(|x, y| lexicographic(&x.1, &y.1));
        start = end;
    }

    let mut vectors = CMatrix::zeros(n, n);
    for (k, (_, col)) in pairs.iter().enumerate() {
        for (r, &z) in col.iter().enumerate() {
            vectors[(r, k)] = z;
        }
    }
    Ok(HermEig {
        eigenvalues: pairs.into_iter().map(|(l, _)| l).collect(),
        vectors,
    })
}

/// Zeroes `a[p][q]` with the unitary `R = diag(1, e^{-iφ}) · G(θ)` acting on
/// the `(p, q)` plane, `a ← R* a R`, `v ← v R`.
fn jacobi_rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let n = a.rows;
    let phase = apq / mag;
    let (app, aqq) = (a[(p, p)].re, a[(q, q)].re);
    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let ph_conj = phase.conj();

    // Columns: a ← a R.
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * c - akq * ph_conj * s;
        a[(k, q)] = akp * s + akq * ph_conj * c;
    }
    // Rows: a ← R* a.
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = apk * c - aqk * phase * s;
        a[(q, k)] = apk * s + aqk * phase * c;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * c - vkq * ph_conj * s;
        v[(k, q)] = vkp * s + vkq * ph_conj * c;
    }
}

fn phase_fixed(mut col: Vec<Complex64>) -> Vec<Complex64> {
    let largest = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if let Some(lead) = col.iter().find(|z| z.norm() > 1e-8 * largest).copied() {
        let rot = lead.conj() / lead.norm();
        for z in &mut col {
            *z *= rot;
        }
    }
    col
}

fn lexicographic(x: &[Complex64], y: &[Complex64]) -> std::cmp::Ordering {
    const EPS: f64 = 1e-10;
    for (a, b) in x.iter().zip(y) {
        for (u, w) in [(a.re, b.re), (a.im, b.im)] {
            if (u - w).abs() > EPS {
                // Larger leading component first.
                return w.total_cmp(&u);
            }
        }
    }
    std::cmp::Ordering::Equal
}

const EXP_TAYLOR_TERMS: usize = 30;

/// Matrix exponential by scaling and squaring with a truncated Taylor series.
pub fn mat_exp(a: &CMatrix) -> Result<CMatrix> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "exponential of a {}x{} matrix",
            a.rows, a.cols
        )));
    }
    let n = a.rows;
    let norm = a.norm_1();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a.scale_re(0.5f64.powi(squarings));

    let mut result = CMatrix::identity(n);
    let mut term = CMatrix::identity(n);
    for k in 1..=EXP_TAYLOR_TERMS {
        term = (&term * &scaled).scale_re(1.0 / k as f64);
        let size = term.max_abs();
        result += &term;
        if size <= f64::EPSILON * 1e-3 {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    Ok(result)
}

/// Smallest singular value, via the eigenvalues of `a* a`.
pub fn min_singular_value(a: &CMatrix) -> Result<f64> {
    let gram = (&a.adjoint() * a).hermitian_part();
    Ok(herm_eig(&gram)?.min().max(0.0).sqrt())
}
