//! Random inputs for unit tests.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channels::{KrausSet, SuperOp};
use crate::linalg::{herm_eig, CMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(r: &mut impl Rng, rows: usize, cols: usize) -> CMatrix {
    let data = (0..rows * cols)
        .map(|_| Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)))
        .collect();
    CMatrix::from_vec(rows, cols, data).unwrap()
}

pub fn random_hermitian(r: &mut impl Rng, n: usize) -> CMatrix {
    random_matrix(r, n, n).hermitian_part()
}


pub fn random_superop(r: &mut impl Rng, n: usize) -> SuperOp {
    SuperOp::new(random_matrix(r, n * n, n * n)).unwrap()
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
        let inv_sqrt: Vec<Complex64> =
            eig.eigenvalues.iter().map(|&l| Complex64::new(1.0 / l.sqrt(), 0.0)).collect();
        let w = &eig.vectors;
        let root = &(w * &CMatrix::from_diag(&inv_sqrt)) * &w.adjoint();
        ops = ops.iter().map(|a| a * &root).collect();
    }
    KrausSet::new(ops).unwrap()
}
