#![allow(dead_code)]

use cpkit::bases::{basis_change_unitary, gellmann_basis, standard_basis, OperatorBasis};
use cpkit::channels::{KrausSet, SuperOp};
use cpkit::lindblad::GeneratorMatrix;
use cpkit::linalg::{herm_eig, mat_exp, CMatrix};
use cpkit::opensys::OpenSystemModel;
use cpkit::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn real(rows: &[&[f64]]) -> CMatrix {
    CMatrix::from_real_rows(rows).unwrap()
}

/// The 4x4 swap: transposition superoperator and its Choi matrix.
pub fn swap4() -> CMatrix {
    real(&[&[1., 0., 0., 0.], &[0., 0., 1., 0.], &[0., 1., 0., 0.], &[0., 0., 0., 1.]])
}

/// `|Φ⟩⟨Φ|` for the unnormalized maximally entangled vector on two qubits.
pub fn phi_phi() -> CMatrix {
    real(&[&[1., 0., 0., 1.], &[0., 0., 0., 0.], &[0., 0., 0., 0.], &[1., 0., 0., 1.]])
}

pub fn random_matrix(r: &mut impl Rng, rows: usize, cols: usize) -> CMatrix {
    let data = (0..rows * cols)
        .map(|_| c(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)))
        .collect();
    CMatrix::from_vec(rows, cols, data).unwrap()
}

pub fn random_hermitian(r: &mut impl Rng, n: usize) -> CMatrix {
    random_matrix(r, n, n).hermitian_part()
}

pub fn random_unitary(r: &mut impl Rng, n: usize) -> CMatrix {
    mat_exp(&random_hermitian(r, n).scale(c(0.0, 3.0))).unwrap()
}

pub fn random_superop(r: &mut impl Rng, n: usize) -> SuperOp {
    SuperOp::new(random_matrix(r, n * n, n * n)).unwrap()
}

/// Random density matrix.
pub fn random_state(r: &mut impl Rng, n: usize) -> CMatrix {
    let a = random_matrix(r, n, n);
    let p = &a * &a.adjoint();
    let tr = p.trace();
    p.scale(c(1.0, 0.0) / tr)
}

/// `count` random Kraus operators, rescaled to `Σ A*A = I` when `tp` is set.
pub fn random_kraus(r: &mut impl Rng, n: usize, count: usize, tp: bool) -> KrausSet {
    let mut ops: Vec<CMatrix> = (0..count).map(|_| random_matrix(r, n, n)).collect();
    if tp {
        let mut s = CMatrix::zeros(n, n);
        for a in &ops {
            s += &(&a.adjoint() * a);
        }
        let eig = herm_eig(&s).unwrap();
        let inv_sqrt: Vec<Complex64> = eig.eigenvalues.iter().map(|&l| c(1.0 / l.sqrt(), 0.0)).collect();
        let w = &eig.vectors;
        let root = &(w * &CMatrix::from_diag(&inv_sqrt)) * &w.adjoint();
        ops = ops.iter().map(|a| a * &root).collect();
    }
    KrausSet::new(ops).unwrap()
}

/// The standard basis rotated by a random unitary on the `N²`-dim coefficient space.
pub fn random_basis(r: &mut impl Rng, n: usize) -> OperatorBasis {
    standard_basis(n).rotated(&random_unitary(r, n * n)).unwrap()
}

/// A random Hermitian trace-annihilating generator in the Gell-Mann basis.
pub fn random_generator(r: &mut impl Rng, n: usize) -> GeneratorMatrix {
    let f = gellmann_basis(n);
    let k = random_hermitian(r, n * n);
    let l = cpkit::channels::gks_inverse(&cpkit::channels::GksMatrix::new(k, f.clone()).unwrap());
    GeneratorMatrix::project(&l, &f).unwrap().0
}

pub fn random_model(r: &mut impl Rng, n: usize, m: usize) -> OpenSystemModel {
    let env = r.gen_range(0..m);
    OpenSystemModel::new(random_hermitian(r, n), random_hermitian(r, m), random_hermitian(r, n * m), env).unwrap()
}

pub fn examples_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("examples")
}

pub fn golden_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

/// Sorted (descending) eigenvalues of the Hermitian part.
pub fn eigenvalues(x: &CMatrix) -> Vec<f64> {
    herm_eig(&x.hermitian_part()).unwrap().eigenvalues
}

/// `‖U U* − I‖∞`.
pub fn unitary_check(u: &CMatrix) -> f64 {
    (&(u * &u.adjoint()) - &CMatrix::identity(u.rows())).max_abs()
}

pub fn change_unitary(f: &OperatorBasis, g: &OperatorBasis) -> CMatrix {
    basis_change_unitary(f, g).unwrap()
}
