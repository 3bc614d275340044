//! Generators of GKS form, `dρ/dt = Σ k^{αβ} F_α ρ F_β*`, their Lindblad
//! rewriting, and the flow of the GKS matrix of the accumulated evolution.

use num_complex::Complex64;

use crate::bases::{structure_constants, OperatorBasis, StructureConstants};
use crate::channels::{gks, gks_inverse, GksMatrix, SuperOp};
use crate::linalg::{herm_eig, hs_inner, CMatrix, I, ZERO};
use crate::{Error, Result};

/// Tolerance for the Hermiticity and trace-annihilation invariants.
pub const GENERATOR_TOL: f64 = 1e-9;

/// Hermitian, trace-annihilating coefficient matrix `k` in a basis.
#[derive(Debug, Clone)]
pub struct GeneratorMatrix {
    basis: OperatorBasis,
    k: CMatrix,
}

impl GeneratorMatrix {
    pub fn new(k: CMatrix, basis: OperatorBasis) -> Result<Self> {
        let d = basis.len();
        if k.rows() != d || k.cols() != d {
            return Err(Error::DimensionMismatch(format!(
                "generator is {}x{}, basis has {d} elements",
                k.rows(),
                k.cols()
            )));
        }
        let herm = k.hermiticity_error();
        if herm > GENERATOR_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let gen = Self { basis, k };
        let tr = gen.k.trace().norm();
        if tr > GENERATOR_TOL {
            return Err(Error::InvariantViolation(format!("Tr k = {tr:e}")));
        }
        let op = gen.trace_defect().max_abs();
        if op > GENERATOR_TOL {
            return Err(Error::InvariantViolation(format!(
                "Σ k^(αβ) F_β* F_α deviates from 0 by {op:e}"
            )));
        }
        Ok(gen)
    }

    /// The nearest generator to an arbitrary superoperator `l`: the
    /// Hermiticity-preserving part of `l`, followed by `ρ ↦ x − Tr(x)·I/N`.
    /// Returns it together with the size of the removed trace component.
    pub fn project(l: &SuperOp, basis: &OperatorBasis) -> Result<(Self, f64)> {
        let n = l.dim();
        let herm = gks(l, basis)?.g().hermitian_part();
        let h = gks_inverse(&GksMatrix::new(herm, basis.clone())?);
        let d = n * n;
        let id = CMatrix::identity(n).vec();
        let mut tr_row = vec![ZERO; d];
        for (c, t) in tr_row.iter_mut().enumerate() {
            for (r, e) in id.iter().enumerate() {
                *t += e * h.matrix()[(r, c)];
            }
        }
        let defect = tr_row.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        let mut m = h.into_matrix();
        let inv_n = 1.0 / n as f64;
        for (r, e) in id.iter().enumerate() {
            if *e == ZERO {
                continue;
            }
            for (c, t) in tr_row.iter().enumerate() {
                m[(r, c)] -= t * inv_n;
            }
        }
        let k = gks(&SuperOp::new(m)?, basis)?.into_matrix().hermitian_part();
        Ok((Self::new(k, basis.clone())?, defect))
    }

    pub fn zero(basis: &OperatorBasis) -> Self {
        let d = basis.len();
        Self {
            basis: basis.clone(),
            k: CMatrix::zeros(d, d),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn basis(&self) -> &OperatorBasis {
        &self.basis
    }

    pub fn k(&self) -> &CMatrix {
        &self.k
    }

    /// `Σ k^{αβ} F_β* F_α`, zero for a valid generator.
    pub fn trace_defect(&self) -> CMatrix {
        let n = self.dim();
        let els = self.basis.elements();
        let mut acc = CMatrix::zeros(n, n);
        for (a, fa) in els.iter().enumerate() {
            for (b, fb) in els.iter().enumerate() {
                let c = self.k[(a, b)];
                if c != ZERO {
                    acc.add_scaled(c, &(&fb.adjoint() * fa));
                }
            }
        }
        acc
    }

    pub fn superop(&self) -> SuperOp {
        gks_inverse(&self.as_gks())
    }

    fn as_gks(&self) -> GksMatrix {
        GksMatrix::new(self.k.clone(), self.basis.clone()).expect("shape checked at construction")
    }
}

/// `Σ k^{αβ} F_α ρ F_β*`.
pub fn generator_apply(k: &GeneratorMatrix, rho: &CMatrix) -> Result<CMatrix> {
    k.as_gks().apply(rho)
}

/// `−i[H, ρ] + Σ_α k_α (A_α ρ A_α* − ½{A_α* A_α, ρ})`.
#[derive(Debug, Clone)]
pub struct LindbladForm {
    hamiltonian: CMatrix,
    rates: Vec<f64>,
    ops: Vec<CMatrix>,
}

impl LindbladForm {
    /// Checks that `H` is Hermitian and that the `N²−1` operators are
    /// traceless and orthonormal.
    pub fn new(hamiltonian: CMatrix, rates: Vec<f64>, ops: Vec<CMatrix>) -> Result<Self> {
        let n = hamiltonian.rows();
        if !hamiltonian.is_square() {
            return Err(Error::DimensionMismatch("Hamiltonian is not square".into()));
        }
        let herm = hamiltonian.hermiticity_error();
        if herm > GENERATOR_TOL {
            return Err(Error::NotHermitian(herm));
        }
        if rates.len() != n * n - 1 || ops.len() != n * n - 1 {
            return Err(Error::DimensionMismatch(format!(
                "expected {} rates and operators, got {} and {}",
                n * n - 1,
                rates.len(),
                ops.len()
            )));
        }
        for (a, x) in ops.iter().enumerate() {
            if x.rows() != n || x.cols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "Lindblad operator {a} is {}x{}",
                    x.rows(),
                    x.cols()
                )));
            }
            let tr = x.trace().norm();
            if tr > GENERATOR_TOL {
                return Err(Error::InvariantViolation(format!(
                    "Lindblad operator {a} has trace {tr:e}"
                )));
            }
            for (b, y) in ops.iter().enumerate().skip(a) {
                let want = if a == b { 1.0 } else { 0.0 };
                let err = (hs_inner(x, y)? - want).norm();
                if err > GENERATOR_TOL {
                    return Err(Error::InvariantViolation(format!(
                        "Lindblad operators {a} and {b} are not orthonormal ({err:e})"
                    )));
                }
            }
        }
        Ok(Self {
            hamiltonian,
            rates,
            ops,
        })
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.rows()
    }

    pub fn hamiltonian(&self) -> &CMatrix {
        &self.hamiltonian
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn ops(&self) -> &[CMatrix] {
        &self.ops
    }

    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix> {
        let h = &self.hamiltonian;
        if rho.rows() != h.rows() || rho.cols() != h.cols() {
            return Err(Error::DimensionMismatch(format!(
                "state is {}x{}, generator acts on {}x{}",
                rho.rows(),
                rho.cols(),
                h.rows(),
                h.cols()
            )));
        }
        let mut out = (&(h * rho) - &(rho * h)).scale(-I);
        for (&rate, a) in self.rates.iter().zip(&self.ops) {
            if rate == 0.0 {
                continue;
            }
            let ad = a.adjoint();
            let ada = &ad * a;
            let jump = &(a * rho) * &ad;
            let anti = &(&ada * rho) + &(rho * &ada);
            out.add_scaled(Complex64::new(rate, 0.0), &jump);
            out.add_scaled(Complex64::new(-0.5 * rate, 0.0), &anti);
        }
        Ok(out)
    }
}

pub fn generator_to_lindblad(k: &GeneratorMatrix) -> Result<LindbladForm> {
    let f = &k.basis;
    f.require_unit_first()?;
    let n = f.dim();
    let d = f.len();
    let sqrt_n = (n as f64).sqrt();
    let els = f.elements();

    let mut big_f = CMatrix::zeros(n, n);
    for (a, fa) in els.iter().enumerate().skip(1) {
        big_f.add_scaled(k.k[(a, 0)] / sqrt_n, fa);
    }
    let fd = big_f.adjoint();
    let hamiltonian = (&big_f - &fd).scale(I * 0.5);
    let g_tilde = (&big_f + &fd).scale_re(0.5);
    let k00 = k.k[(0, 0)].re;
    let mut g = g_tilde;
    g.add_scaled(Complex64::new(k00 / (2.0 * n as f64), 0.0), &CMatrix::identity(n));

    let mut sub = CMatrix::zeros(d - 1, d - 1);
    for a in 1..d {
        for b in 1..d {
            sub[(a - 1, b - 1)] = k.k[(a, b)];
        }
    }
    let mut g_sub = CMatrix::zeros(n, n);
    for a in 1..d {
        for b in 1..d {
            g_sub.add_scaled(sub[(a - 1, b - 1)] * -0.5, &(&els[b].adjoint() * &els[a]));
        }
    }
    let mismatch = (&g - &g_sub).max_abs();
    if mismatch > GENERATOR_TOL {
        return Err(Error::InvariantViolation(format!(
            "anticommutator parts disagree by {mismatch:e}"
        )));
    }

    let (rates, ops) = if d > 1 {
        let eig = herm_eig(&sub)?;
        let ops = (0..d - 1)
            .map(|c| {
                let mut a = CMatrix::zeros(n, n);
                for (b, e) in els.iter().enumerate().skip(1) {
                    a.add_scaled(eig.vectors[(b - 1, c)], e);
                }
                a
            })
            .collect();
        (eig.eigenvalues, ops)
    } else {
        (Vec::new(), Vec::new())
    };
    LindbladForm::new(hamiltonian.hermitian_part(), rates, ops)
}

pub fn lindblad_to_generator(l: &LindbladForm, f: &OperatorBasis) -> Result<GeneratorMatrix> {
    f.require_unit_first()?;
    let n = f.dim();
    if l.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "Lindblad form on dimension {}, basis of dimension {n}",
            l.dim()
        )));
    }
    let d = f.len();
    let els = f.elements();

    let mut w = CMatrix::zeros(d - 1, d - 1);
    for b in 1..d {
        for (a, op) in l.ops.iter().enumerate() {
            w[(b - 1, a)] = hs_inner(&els[b], op)?;
        }
    }
    let delta: Vec<Complex64> = l.rates.iter().map(|&r| Complex64::new(r, 0.0)).collect();
    let sub = &(&w * &CMatrix::from_diag(&delta)) * &w.adjoint();

    let mut k = CMatrix::zeros(d, d);
    for a in 1..d {
        for b in 1..d {
            k[(a, b)] = sub[(a - 1, b - 1)];
        }
    }
    let k00 = -sub.trace().re;
    k[(0, 0)] = Complex64::new(k00, 0.0);

    let mut g = CMatrix::zeros(n, n);
    for (&rate, a) in l.rates.iter().zip(&l.ops) {
        g.add_scaled(Complex64::new(-0.5 * rate, 0.0), &(&a.adjoint() * a));
    }
    let mut big_f = g;
    big_f.add_scaled(Complex64::new(-k00 / (2.0 * n as f64), 0.0), &CMatrix::identity(n));
    let h = &l.hamiltonian;
    let mut h0 = h.clone();
    h0.add_scaled(-h.trace() / n as f64, &CMatrix::identity(n));
    big_f.add_scaled(-I, &h0);

    let sqrt_n = (n as f64).sqrt();
    for (a, fa) in els.iter().enumerate().skip(1) {
        let c = hs_inner(fa, &big_f)? * sqrt_n;
        k[(a, 0)] = c;
        k[(0, a)] = c.conj();
    }
    GeneratorMatrix::new(k, f.clone())
}

/// The linear map `g ↦ dg/dt = Σ_{γδ} k^{γδ} M_γ g M_δ*` with
/// `M_γ[λ][α] = Π^λ_{γα}`.
#[derive(Debug, Clone)]
pub struct OdeTensor {
    m: Vec<CMatrix>,
    /// `X_γ = Σ_δ k^{γδ} M_δ*`.
    x: Vec<CMatrix>,
}

impl OdeTensor {
    pub fn apply(&self, g: &CMatrix) -> CMatrix {
        let d = g.rows();
        let mut out = CMatrix::zeros(d, d);
        for (m, x) in self.m.iter().zip(&self.x) {
            out += &(&(m * g) * x);
        }
        out
    }

    /// `A^{λμ}_{αβ} = Σ_{γδ} k^{γδ} Π^λ_{γα} conj(Π^μ_{δβ})`.
    pub fn entry(&self, lambda: usize, mu: usize, alpha: usize, beta: usize) -> Complex64 {
        self.m
            .iter()
            .zip(&self.x)
            .map(|(m, x)| m[(lambda, alpha)] * x[(beta, mu)])
            .sum()
    }
}

pub fn gks_ode_tensor(k: &GeneratorMatrix, pi: &StructureConstants) -> Result<OdeTensor> {
    if pi.dim() != k.dim() {
        return Err(Error::DimensionMismatch(format!(
            "structure constants for dimension {}, generator on dimension {}",
            pi.dim(),
            k.dim()
        )));
    }
    let d = k.basis.len();
    let m: Vec<CMatrix> = (0..d).map(|g| pi.left_multiplication(g)).collect();
    let md: Vec<CMatrix> = m.iter().map(CMatrix::adjoint).collect();
    let x = (0..d)
        .map(|g| {
            let mut acc = CMatrix::zeros(d, d);
            for (dl, mdl) in md.iter().enumerate() {
                let c = k.k[(g, dl)];
                if c != ZERO {
                    acc.add_scaled(c, mdl);
                }
            }
            acc
        })
        .collect();
    Ok(OdeTensor { m, x })
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<GksMatrix>,
}

impl Trajectory {
    pub fn last(&self) -> &GksMatrix {
        self.states.last().expect("trajectory has at least one sample")
    }
}

/// Classical fixed-step RK4 for `dg/dt = A(t) g` from `g(0)` = the identity
/// map. Every step is recorded.
pub fn integrate_gks(
    k_of_t: impl Fn(f64) -> Result<GeneratorMatrix>,
    f: &OperatorBasis,
    t_end: f64,
    steps: usize,
) -> Result<Trajectory> {
    if steps == 0 {
        return Err(Error::InvariantViolation("at least one step is required".into()));
    }
    let pi = structure_constants(f)?;
    let tensor_at = |t: f64| -> Result<OdeTensor> {
        let k = k_of_t(t)?;
        if !k.basis.same_as(f, 1e-12) {
            return Err(Error::BasisMismatch);
        }
        gks_ode_tensor(&k, &pi)
    };
    let h = t_end / steps as f64;
    let mut g = gks(&SuperOp::identity(f.dim()), f)?.into_matrix();
    let mut times = vec![0.0];
    let mut states = vec![GksMatrix::new(g.clone(), f.clone())?];
    for s in 0..steps {
        let t = s as f64 * h;
        let a0 = tensor_at(t)?;
        let am = tensor_at(t + 0.5 * h)?;
        let a1 = tensor_at(t + h)?;
        let k1 = a0.apply(&g);
        let k2 = am.apply(&(&g + &k1.scale_re(0.5 * h)));
        let k3 = am.apply(&(&g + &k2.scale_re(0.5 * h)));
        let k4 = a1.apply(&(&g + &k3.scale_re(h)));
        let mut incr = &k1 + &k4;
        incr.add_scaled(Complex64::new(2.0, 0.0), &(&k2 + &k3));
        g.add_scaled(Complex64::new(h / 6.0, 0.0), &incr);
        times.push(t + h);
        states.push(GksMatrix::new(g.clone(), f.clone())?);
    }
    Ok(Trajectory { times, states })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bases::{gellmann_basis, standard_basis};
    use crate::channels::check;
    use crate::linalg::{mat_exp, ONE};
    use crate::testutil::{random_hermitian, random_matrix, rng};
    use rand::Rng;

    fn sz() -> CMatrix {
        CMatrix::from_real_rows(&[&[1., 0.], &[0., -1.]]).unwrap()
    }

    fn random_generator(r: &mut impl Rng, n: usize) -> GeneratorMatrix {
        let f = gellmann_basis(n);
        let k = random_hermitian(r, n * n);
        let l = gks_inverse(&GksMatrix::new(k, f.clone()).unwrap());
        GeneratorMatrix::project(&l, &f).unwrap().0
    }

    fn dephasing(rate: f64) -> LindbladForm {
        let f = gellmann_basis(2);
        LindbladForm::new(CMatrix::zeros(2, 2), vec![0.0, 0.0, rate], f.elements()[1..].to_vec())
            .unwrap()
    }

    #[test]
    fn zero_generator() {
        let f = gellmann_basis(2);
        let k = GeneratorMatrix::zero(&f);
        let rho = random_matrix(&mut rng(1), 2, 2);
        assert_eq!(generator_apply(&k, &rho).unwrap(), CMatrix::zeros(2, 2));
        let l = generator_to_lindblad(&k).unwrap();
        assert_eq!(l.hamiltonian().max_abs(), 0.0);
        assert!(l.rates().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn constructor_rejects_invalid_generators() {
        let f = gellmann_basis(2);
        let mut k = CMatrix::zeros(4, 4);
        k[(1, 1)] = ONE;
        assert!(matches!(GeneratorMatrix::new(k.clone(), f.clone()), Err(Error::InvariantViolation(_))));
        k[(0, 1)] = I;
        assert!(matches!(GeneratorMatrix::new(k, f), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn hamiltonian_generator_is_a_commutator() {
        let f = gellmann_basis(2);
        let zeros = vec![0.0; 3];
        let l = LindbladForm::new(sz(), zeros, f.elements()[1..].to_vec()).unwrap();
        let k = lindblad_to_generator(&l, &f).unwrap();
        for a in 1..4 {
            for b in 1..4 {
                assert!(k.k()[(a, b)].norm() < 1e-15);
            }
        }
        let rho = random_matrix(&mut rng(2), 2, 2);
        let want = (&(&sz() * &rho) - &(&rho * &sz())).scale(-I);
        assert!((&generator_apply(&k, &rho).unwrap() - &want).max_abs() < 1e-14);
        let back = generator_to_lindblad(&k).unwrap();
        assert!((back.hamiltonian() - &sz()).max_abs() < 1e-14);
        assert!(back.rates().iter().all(|x| x.abs() < 1e-14));
    }

    #[test]
    fn dephasing_generator_entries() {
        let f = gellmann_basis(2);
        let k = lindblad_to_generator(&dephasing(0.7), &f).unwrap();
        assert!((k.k()[(3, 3)] - 0.7).norm() < 1e-15);
        assert!((k.k()[(0, 0)] + 0.7).norm() < 1e-15);
        let back = generator_to_lindblad(&k).unwrap();
        assert!((back.rates()[0] - 0.7).abs() < 1e-14);
        let a = &back.ops()[0];
        assert!((hs_inner(a, &f.elements()[3]).unwrap().norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn amplitude_damping_matches_hand_expansion() {
        // A = σ₋ = |0⟩⟨1| is traceless with unit norm. For ρ = |1⟩⟨1|:
        // AρA* = |0⟩⟨0| and {A*A, ρ} = 2|1⟩⟨1|.
        let gamma = 0.4;
        let f = gellmann_basis(2);
        let sm = CMatrix::unit(2, 0, 1);
        let sp = CMatrix::unit(2, 1, 0);
        let z = sz().scale_re(std::f64::consts::FRAC_1_SQRT_2);
        let l = LindbladForm::new(CMatrix::zeros(2, 2), vec![gamma, 0.0, 0.0], vec![sm, sp, z]).unwrap();
        let k = lindblad_to_generator(&l, &f).unwrap();
        let out = generator_apply(&k, &CMatrix::unit(2, 1, 1)).unwrap();
        let want = CMatrix::from_real_rows(&[&[gamma, 0.], &[0., -gamma]]).unwrap();
        assert!((&out - &want).max_abs() < 1e-14);
    }

    #[test]
    fn random_generators_round_trip_at_action_level() {
        let mut r = rng(3);
        for n in [2, 3] {
            let f = gellmann_basis(n);
            for _ in 0..5 {
                let k = random_generator(&mut r, n);
                let rho = random_matrix(&mut r, n, n);
                assert!(generator_apply(&k, &rho).unwrap().trace().norm() < 1e-12);
                let l = generator_to_lindblad(&k).unwrap();
                let k2 = lindblad_to_generator(&l, &f).unwrap();
                for e in standard_basis(n).elements() {
                    let a = generator_apply(&k, e).unwrap();
                    assert!((&l.apply(e).unwrap() - &a).max_abs() < 1e-10);
                    assert!((&generator_apply(&k2, e).unwrap() - &a).max_abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn conversion_requires_unit_first_basis() {
        let f = standard_basis(2);
        let k = GeneratorMatrix::zero(&f);
        assert!(matches!(generator_to_lindblad(&k), Err(Error::BasisNotUnitFirst(_))));
    }

    #[test]
    fn ode_tensor_matches_composition() {
        let mut r = rng(4);
        for n in [2, 3] {
            let f = gellmann_basis(n);
            let pi = structure_constants(&f).unwrap();
            let k = random_generator(&mut r, n);
            let g = random_matrix(&mut r, n * n, n * n);
            let tensor = gks_ode_tensor(&k, &pi).unwrap();
            let v = gks_inverse(&GksMatrix::new(g.clone(), f.clone()).unwrap());
            let want = gks(&k.superop().compose(&v).unwrap(), &f).unwrap();
            assert!((&tensor.apply(&g) - want.g()).max_abs() < 1e-10);

            // The rank-4 view agrees with the direct sum.
            let d = n * n;
            let (l, m, a, b) = (1, d - 1, 2 % d, 0);
            let mut direct = ZERO;
            for ga in 0..d {
                for de in 0..d {
                    direct += k.k()[(ga, de)] * pi.get(l, ga, a) * pi.get(m, de, b).conj();
                }
            }
            assert!((tensor.entry(l, m, a, b) - direct).norm() < 1e-12);
        }
        let f = gellmann_basis(2);
        let zero = gks_ode_tensor(&GeneratorMatrix::zero(&f), &structure_constants(&f).unwrap()).unwrap();
        assert_eq!(zero.apply(&CMatrix::identity(4)).max_abs(), 0.0);
    }

    #[test]
    fn hamiltonian_flow_at_identity_touches_row_and_column_zero() {
        let f = gellmann_basis(2);
        let l = LindbladForm::new(sz(), vec![0.0; 3], f.elements()[1..].to_vec()).unwrap();
        let k = lindblad_to_generator(&l, &f).unwrap();
        let g0 = crate::channels::identity_gks(&f).unwrap();
        let dg = gks_ode_tensor(&k, &structure_constants(&f).unwrap()).unwrap().apply(g0.g());
        for a in 1..4 {
            for b in 1..4 {
                assert!(dg[(a, b)].norm() < 1e-14);
            }
        }
        // dg/dt = g1 with h³ = Tr(F₃ σz) = √2: g1^{03} = i√2·√2.
        assert!((dg[(0, 3)] - Complex64::new(0.0, 2.0)).norm() < 1e-14);
        assert!((dg[(3, 0)] - Complex64::new(0.0, -2.0)).norm() < 1e-14);
    }

    #[test]
    fn integration_with_zero_and_constant_generators() {
        let f = gellmann_basis(2);
        let zero = integrate_gks(|_| Ok(GeneratorMatrix::zero(&f)), &f, 1.0, 10).unwrap();
        let g0 = zero.states[0].g().clone();
        assert!(zero.states.iter().all(|g| g.g() == &g0));

        let k = lindblad_to_generator(&dephasing(0.7), &f).unwrap();
        let traj = integrate_gks(|_| Ok(k.clone()), &f, 0.5, 200).unwrap();
        let exact = SuperOp::new(mat_exp(&k.superop().matrix().scale_re(0.5)).unwrap()).unwrap();
        let want = gks(&exact, &f).unwrap();
        assert!((traj.last().g() - want.g()).max_abs() < 1e-10);
        for g in &traj.states {
            let v = check(&gks_inverse(g), &f, 1e-9).unwrap();
            assert!(v.trace_preserving && v.min_eigenvalue > -1e-7);
        }
    }

    #[test]
    fn time_dependent_generator_uses_basis_check() {
        let f = gellmann_basis(2);
        let other = standard_basis(2);
        let r = integrate_gks(|_| Ok(GeneratorMatrix::zero(&other)), &f, 1.0, 2);
        assert!(matches!(r, Err(Error::BasisMismatch)));
    }
}
