//! A finite system coupled to a finite environment in a pure state, and the
//! short-time expansion `g(t) = g₀ + g₁t + g₂t² + O(t³)` of the GKS matrix of
//! the reduced dynamics.
//!
//! The environment enters the coefficients only through the operators
//! `E_γ = |γ⟩⟨0|`, where `|0⟩` is the initial environment state and the
//! remaining `γ = 1..M−1` run over the other basis states in increasing order.
//! Whether `M` is odd or even plays no role.

use num_complex::Complex64;

use crate::bases::OperatorBasis;
use crate::channels::{gks, GksMatrix, SuperOp};
use crate::lindblad::GeneratorMatrix;
use crate::linalg::{herm_eig, hs_inner, mat_exp, min_singular_value, partial_trace, CMatrix, Subsystem, I};
use crate::{Error, Result};

/// Hermiticity tolerance for model Hamiltonians.
pub const MODEL_HERMITICITY_TOL: f64 = 1e-10;
/// Below this smallest singular value the propagator is treated as singular.
pub const SINGULAR_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct OpenSystemModel {
    n: usize,
    m: usize,
    h_s: CMatrix,
    h_e: CMatrix,
    h_se: CMatrix,
    env_state_index: usize,
}

impl OpenSystemModel {
    pub fn new(h_s: CMatrix, h_e: CMatrix, h_se: CMatrix, env_state_index: usize) -> Result<Self> {
        let (n, m) = (h_s.rows(), h_e.rows());
        for (name, x, d) in [("h_s", &h_s, n), ("h_e", &h_e, m), ("h_se", &h_se, n * m)] {
            if x.rows() != d || x.cols() != d {
                return Err(Error::DimensionMismatch(format!(
                    "{name} is {}x{}, expected {d}x{d}",
                    x.rows(),
                    x.cols()
                )));
            }
            let err = x.hermiticity_error();
            if err > MODEL_HERMITICITY_TOL {
                return Err(Error::NotHermitian(err));
            }
        }
        if env_state_index >= m {
            return Err(Error::InvalidState(format!(
                "environment state index {env_state_index} out of range for M = {m}"
            )));
        }
        Ok(Self {
            n,
            m,
            h_s,
            h_e,
            h_se,
            env_state_index,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn h_s(&self) -> &CMatrix {
        &self.h_s
    }

    pub fn h_e(&self) -> &CMatrix {
        &self.h_e
    }

    pub fn h_se(&self) -> &CMatrix {
        &self.h_se
    }

    pub fn env_state_index(&self) -> usize {
        self.env_state_index
    }

    /// The same model started from environment basis state `index`.
    pub fn with_env_state(&self, index: usize) -> Result<Self> {
        Self::new(self.h_s.clone(), self.h_e.clone(), self.h_se.clone(), index)
    }

    /// `K = H_S ⊗ 1 + 1 ⊗ H_E + H_SE`.
    pub fn total_hamiltonian(&self) -> CMatrix {
        let mut k = self.h_s.kron(&CMatrix::identity(self.m));
        k += &CMatrix::identity(self.n).kron(&self.h_e);
        k += &self.h_se;
        k
    }

    fn env_state(&self) -> CMatrix {
        CMatrix::unit(self.m, self.env_state_index, self.env_state_index)
    }

    /// Environment indices ordered so that position 0 is the initial state.
    fn env_order(&self) -> Vec<usize> {
        std::iter::once(self.env_state_index)
            .chain((0..self.m).filter(|&g| g != self.env_state_index))
            .collect()
    }
}

/// Expansion coefficients of the Hamiltonian in the product basis.
#[derive(Debug, Clone)]
pub struct Coefficients {
    /// `hᵅ = ⟨F_α, H_S⟩` for `α = 1..N²−1`.
    pub h: Vec<f64>,
    /// `v^{α0} = ⟨F_α ⊗ E₀, H_SE⟩`.
    pub v0: Vec<f64>,
    /// `v^{αγ}` for `α = 1..N²−1` (rows) and `γ = 1..M−1` (columns).
    pub vplus: CMatrix,
}

fn require_expansion_basis(f: &OperatorBasis) -> Result<()> {
    f.require_unit_first()?;
    let worst = f
        .elements()
        .iter()
        .fold(0.0f64, |m, x| m.max(x.hermiticity_error()));
    if worst > MODEL_HERMITICITY_TOL {
        return Err(Error::NotHermitian(worst));
    }
    Ok(())
}

pub fn extract_coefficients(model: &OpenSystemModel, f: &OperatorBasis) -> Result<Coefficients> {
    require_expansion_basis(f)?;
    if f.dim() != model.n {
        return Err(Error::DimensionMismatch(format!(
            "basis of dimension {}, system of dimension {}",
            f.dim(),
            model.n
        )));
    }
    let (d, m) = (f.len(), model.m);
    let order = model.env_order();
    let e0 = order[0];
    let mut h = Vec::with_capacity(d - 1);
    let mut v0 = Vec::with_capacity(d - 1);
    let mut vplus = CMatrix::zeros(d - 1, m - 1);
    for (a, fa) in f.elements().iter().enumerate().skip(1) {
        h.push(hs_inner(fa, &model.h_s)?.re);
        for (g, &idx) in order.iter().enumerate() {
            let op = fa.kron(&CMatrix::unit(m, idx, e0));
            let v = hs_inner(&op, &model.h_se)?;
            if g == 0 {
                let im = v.im.abs();
                if im > MODEL_HERMITICITY_TOL {
                    return Err(Error::NotHermitian(im));
                }
                v0.push(v.re);
            } else {
                vplus[(a - 1, g - 1)] = v;
            }
        }
    }
    Ok(Coefficients { h, v0, vplus })
}

fn require_state(rho: &CMatrix, n: usize) -> Result<()> {
    if rho.rows() != n || rho.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "state is {}x{}, system dimension is {n}",
            rho.rows(),
            rho.cols()
        )));
    }
    let tr = rho.trace();
    if (tr - 1.0).norm() > 1e-9 {
        return Err(Error::InvalidState(format!("trace is {tr}")));
    }
    let herm = rho.hermiticity_error();
    if herm > 1e-9 {
        return Err(Error::InvalidState(format!("not Hermitian ({herm:e})")));
    }
    let min = herm_eig(&rho.hermitian_part())?.min();
    if min < -1e-9 {
        return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
    }
    Ok(())
}

/// `Tr_E(U (ρ₀ ⊗ ρ_E) U*)` with `U = exp(−iKt)`.
pub fn evolve_reduced(model: &OpenSystemModel, rho0: &CMatrix, t: f64) -> Result<CMatrix> {
    require_state(rho0, model.n)?;
    if t == 0.0 {
        return Ok(rho0.clone());
    }
    let u = propagator(model, t)?;
    reduce(model, &u, rho0, &model.env_state())
}

fn propagator(model: &OpenSystemModel, t: f64) -> Result<CMatrix> {
    mat_exp(&model.total_hamiltonian().scale(-I * t))
}

fn reduce(model: &OpenSystemModel, u: &CMatrix, rho: &CMatrix, rho_e: &CMatrix) -> Result<CMatrix> {
    let joint = &(u * &rho.kron(rho_e)) * &u.adjoint();
    partial_trace(&joint, (model.n, model.m), Subsystem::Second)
}

/// The reduced dynamical map at time `t` for the model's pure environment state.
pub fn reduced_superop(model: &OpenSystemModel, t: f64) -> Result<SuperOp> {
    reduced_superop_with_env(model, &model.env_state(), t)
}

/// The reduced dynamical map for an arbitrary environment state `rho_e`.
pub fn reduced_superop_with_env(model: &OpenSystemModel, rho_e: &CMatrix, t: f64) -> Result<SuperOp> {
    require_state(rho_e, model.m)?;
    let u = propagator(model, t)?;
    SuperOp::try_from_map(model.n, |unit| reduce(model, &u, unit, rho_e))
}

/// `ρ ↦ −i Tr_E[K, ρ ⊗ ρ_E]`, the first time derivative of the reduced map at 0.
pub fn first_order_superop(model: &OpenSystemModel) -> Result<SuperOp> {
    let k = model.total_hamiltonian();
    let rho_e = model.env_state();
    SuperOp::try_from_map(model.n, |unit| {
        let x = unit.kron(&rho_e);
        let c = (&(&k * &x) - &(&x * &k)).scale(-I);
        partial_trace(&c, (model.n, model.m), Subsystem::Second)
    })
}

/// `ρ ↦ −½ Tr_E[K, [K, ρ ⊗ ρ_E]]`, half the second time derivative at 0.
pub fn second_order_superop(model: &OpenSystemModel) -> Result<SuperOp> {
    let k = model.total_hamiltonian();
    let rho_e = model.env_state();
    SuperOp::try_from_map(model.n, |unit| {
        let x = unit.kron(&rho_e);
        let c1 = &(&k * &x) - &(&x * &k);
        let c2 = (&(&k * &c1) - &(&c1 * &k)).scale_re(-0.5);
        partial_trace(&c2, (model.n, model.m), Subsystem::Second)
    })
}

/// Where an entry of the expansion came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Closed-form expression in the Hamiltonian coefficients.
    Analytic,
    /// Projection of the exact double commutator onto the basis.
    Derived,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Analytic => "analytic",
            Provenance::Derived => "derived",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Expansion {
    pub basis: OperatorBasis,
    pub coefficients: Coefficients,
    pub g0: CMatrix,
    pub g1: CMatrix,
    pub g2: CMatrix,
}

impl Expansion {
    /// `g0` and `g1` are closed-form throughout; `g2` is closed-form off
    /// row and column 0.
    pub fn g2_provenance(&self, alpha: usize, beta: usize) -> Provenance {
        if alpha == 0 || beta == 0 {
            Provenance::Derived
        } else {
            Provenance::Analytic
        }
    }

    /// `g₀ + g₁t + g₂t²`.
    pub fn truncated(&self, t: f64) -> CMatrix {
        let mut g = self.g0.clone();
        g.add_scaled(Complex64::new(t, 0.0), &self.g1);
        g.add_scaled(Complex64::new(t * t, 0.0), &self.g2);
        g
    }

    /// The `α, β ≥ 1` block of `g₂`.
    pub fn g2_sub(&self) -> CMatrix {
        lower_right(&self.g2)
    }

    /// `Σ_{γ≥1} v^{αγ} conj(v^{βγ})`: the part of `g2_sub` left after the
    /// coupling through `g₁` to the dominant eigenvector is removed.
    pub fn effective_second_order(&self) -> CMatrix {
        let v = &self.coefficients.vplus;
        v * &v.adjoint()
    }
}

fn lower_right(x: &CMatrix) -> CMatrix {
    let d = x.rows();
    let mut out = CMatrix::zeros(d - 1, d - 1);
    for a in 1..d {
        for b in 1..d {
            out[(a - 1, b - 1)] = x[(a, b)];
        }
    }
    out
}

pub fn expansion(model: &OpenSystemModel, f: &OperatorBasis) -> Result<Expansion> {
    let c = extract_coefficients(model, f)?;
    let (n, d) = (model.n, f.len());
    let sqrt_n = (n as f64).sqrt();

    let mut g0 = CMatrix::zeros(d, d);
    g0[(0, 0)] = Complex64::new(n as f64, 0.0);

    let u: Vec<f64> = c.h.iter().zip(&c.v0).map(|(h, v)| h + v).collect();
    let mut g1 = CMatrix::zeros(d, d);
    for (a, &ua) in u.iter().enumerate() {
        g1[(0, a + 1)] = I * (sqrt_n * ua);
        g1[(a + 1, 0)] = -I * (sqrt_n * ua);
    }

    let mut g2 = gks(&second_order_superop(model)?, f)?.into_matrix();
    let vv = &c.vplus * &c.vplus.adjoint();
    for a in 1..d {
        for b in 1..d {
            g2[(a, b)] = Complex64::new(u[a - 1] * u[b - 1], 0.0) + vv[(a - 1, b - 1)];
        }
    }
    Ok(Expansion {
        basis: f.clone(),
        coefficients: c,
        g0,
        g1,
        g2: g2.hermitian_part(),
    })
}

#[derive(Debug, Clone)]
pub struct SampleReport {
    pub t: f64,
    /// `‖g(t) − (g₀ + g₁t + g₂t²)‖∞` over the whole matrix.
    pub deviation: f64,
    /// The same restricted to `α, β ≥ 1`.
    pub deviation_sub: f64,
    /// `‖g(t) − (g₀ + g₁t)‖∞` on row and column 0, divided by `t²`.
    pub first_order_edge: f64,
    /// Smallest eigenvalue of the simulated `g(t)`.
    pub exact_min_eigenvalue: f64,
    /// Smallest eigenvalue of `g₀ + g₁t + g₂t²`.
    pub truncated_min_eigenvalue: f64,
}

#[derive(Debug, Clone)]
pub struct ExpansionReport {
    pub samples: Vec<SampleReport>,
    /// Slope of `log deviation` against `log t`.
    pub exponent: f64,
    /// `deviation / t³` per sample.
    pub cubic_constants: Vec<f64>,
    pub g2_sub_min_eigenvalue: f64,
    /// Largest difference between the closed-form `g₂` block and the
    /// projection of the exact double commutator.
    pub g2_sub_consistency: f64,
    /// `⟨φ|g₁|φ⟩` for the dominant eigenvector `e₀` of `g₀`.
    pub epsilon1_dominant: f64,
    /// `⟨φ|g₁|φ⟩` for each zero eigenvector of `g₀`.
    pub epsilon1: Vec<f64>,
    /// `⟨φ|g₂|φ⟩` for each zero eigenvector of `g₀`.
    pub epsilon2: Vec<f64>,
    /// Smallest eigenvalue of `Σ_{γ≥1} v vᴴ`.
    pub effective_min_eigenvalue: f64,
}

impl ExpansionReport {
    pub fn g2_sub_psd(&self) -> bool {
        self.g2_sub_min_eigenvalue >= -1e-10
    }

    pub fn perturbation_ok(&self) -> bool {
        self.epsilon1_dominant.abs() <= 1e-10
            && self.epsilon1.iter().all(|e| e.abs() <= 1e-10)
            && self.epsilon2.iter().all(|&e| e >= -1e-9)
    }

    pub fn exact_psd(&self, tol: f64) -> bool {
        self.samples.iter().all(|s| s.exact_min_eigenvalue >= -tol)
    }
}

pub fn verify_expansion(
    model: &OpenSystemModel,
    f: &OperatorBasis,
    t_samples: &[f64],
) -> Result<ExpansionReport> {
    let ex = expansion(model, f)?;
    let d = f.len();
    let exact_g2 = gks(&second_order_superop(model)?, f)?.into_matrix();
    let g2_sub_consistency = (&lower_right(&exact_g2) - &ex.g2_sub()).max_abs();

    let mut samples = Vec::with_capacity(t_samples.len());
    for &t in t_samples {
        let g = gks(&reduced_superop(model, t)?, f)?.into_matrix();
        let trunc = ex.truncated(t);
        let diff = &g - &trunc;
        let deviation = diff.max_abs();
        let deviation_sub = lower_right(&diff).max_abs();
        let mut lin = ex.g0.clone();
        lin.add_scaled(Complex64::new(t, 0.0), &ex.g1);
        let edge = &g - &lin;
        let mut first = 0.0f64;
        for a in 0..d {
            first = first.max(edge[(0, a)].norm()).max(edge[(a, 0)].norm());
        }
        samples.push(SampleReport {
            t,
            deviation,
            deviation_sub,
            first_order_edge: if t != 0.0 { first / (t * t) } else { 0.0 },
            exact_min_eigenvalue: herm_eig(&g.hermitian_part())?.min(),
            truncated_min_eigenvalue: herm_eig(&trunc)?.min(),
        });
    }
    let exponent = loglog_slope(&samples);
    let cubic_constants = samples.iter().map(|s| s.deviation / s.t.powi(3)).collect();

    let g2_sub_min_eigenvalue = if d > 1 { herm_eig(&ex.g2_sub())?.min() } else { 0.0 };
    let effective_min_eigenvalue =
        if d > 1 { herm_eig(&ex.effective_second_order().hermitian_part())?.min() } else { 0.0 };

    let eig0 = herm_eig(&ex.g0)?;
    let mut epsilon1 = Vec::new();
    let mut epsilon2 = Vec::new();
    let mut epsilon1_dominant = 0.0;
    for (c, &lambda) in eig0.eigenvalues.iter().enumerate() {
        let phi = eig0.vectors.column(c);
        let e1 = quad(&ex.g1, &phi);
        if lambda.abs() < 1e-12 {
            epsilon1.push(e1.norm());
            epsilon2.push(quad(&ex.g2, &phi).re);
        } else {
            epsilon1_dominant = e1.norm();
        }
    }
    Ok(ExpansionReport {
        samples,
        exponent,
        cubic_constants,
        g2_sub_min_eigenvalue,
        g2_sub_consistency,
        epsilon1_dominant,
        epsilon1,
        epsilon2,
        effective_min_eigenvalue,
    })
}

fn quad(x: &CMatrix, phi: &[Complex64]) -> Complex64 {
    let xp = x.mul_vec(phi);
    phi.iter().zip(&xp).map(|(a, b)| a.conj() * b).sum()
}

/// Least-squares slope of `ln deviation` against `ln t`; NaN with fewer than
/// two usable samples.
fn loglog_slope(samples: &[SampleReport]) -> f64 {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|s| s.t > 0.0 && s.deviation > 0.0)
        .map(|s| (s.t.ln(), s.deviation.ln()))
        .collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// `𝓚(t) = 𝓥'(t) 𝓥(t)⁻¹` by a central difference of width `dt`, projected
/// onto Hermitian trace-annihilating generators. Also returns the size of
/// the trace component removed by the projection.
pub fn extract_generator(
    model: &OpenSystemModel,
    f: &OperatorBasis,
    t: f64,
    dt: f64,
) -> Result<(GeneratorMatrix, f64)> {
    let v = reduced_superop(model, t)?;
    let sigma = min_singular_value(v.matrix())?;
    if sigma < SINGULAR_TOL {
        return Err(Error::SingularPropagator(sigma));
    }
    let plus = reduced_superop(model, t + dt)?;
    let minus = reduced_superop(model, t - dt)?;
    let deriv = (plus.matrix() - minus.matrix()).scale_re(0.5 / dt);
    let k = &deriv * &v.matrix().inverse()?;
    GeneratorMatrix::project(&SuperOp::new(k)?, f)
}

/// GKS matrix of the simulated reduced map, for convenience.
pub fn simulated_gks(model: &OpenSystemModel, f: &OperatorBasis, t: f64) -> Result<GksMatrix> {
    gks(&reduced_superop(model, t)?, f)
}

/// A model with `H_SE = 0` has the identity as its only environment-facing
/// part; used in tests and examples.
pub fn closed_model(h_s: CMatrix, m: usize) -> Result<OpenSystemModel> {
    let n = h_s.rows();
    OpenSystemModel::new(h_s, CMatrix::zeros(m, m), CMatrix::zeros(n * m, n * m), 0)
}
