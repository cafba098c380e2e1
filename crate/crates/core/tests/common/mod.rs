#![allow(dead_code)]

use finite_triple::catalog::DiracParams;
use finite_triple::linalg::{c, Operator, C64};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_c(r: &mut impl Rng) -> C64 {
    // Box-Muller is overkill; uniform entries are enough for generic matrices.
    c(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
}

pub fn random_matrix(r: &mut impl Rng, n: usize) -> DMatrix<C64> {
    DMatrix::from_fn(n, n, |_, _| gaussian_c(r))
}

pub fn random_operator(r: &mut impl Rng, n: usize) -> Operator {
    Operator::new(random_matrix(r, n)).unwrap()
}

pub fn random_phase(r: &mut impl Rng) -> C64 {
    C64::from_polar(1.0, r.gen_range(0.0..std::f64::consts::TAU))
}

/// Haar-ish unitary from the QR of a random matrix.
pub fn random_unitary(r: &mut impl Rng, n: usize) -> DMatrix<C64> {
    random_matrix(r, n).qr().q()
}

pub fn random_special_unitary(r: &mut impl Rng, n: usize) -> DMatrix<C64> {
    let u = random_unitary(r, n);
    let d = u.determinant();
    let root = C64::from_polar(1.0, -d.arg() / n as f64);
    u * root
}

/// Nonzero complex coefficient bounded away from zero.
pub fn nonzero_c(r: &mut impl Rng) -> C64 {
    C64::from_polar(r.gen_range(0.5..2.0), r.gen_range(0.0..std::f64::consts::TAU))
}

/// A draw satisfying the hypotheses of both Morita theorems.
pub fn theorem_params(r: &mut impl Rng) -> DiracParams {
    loop {
        let p = DiracParams {
            ups_nu: nonzero_c(r),
            ups_e: nonzero_c(r),
            ups_u: nonzero_c(r),
            ups_d: nonzero_c(r),
            ups_r: nonzero_c(r),
            omega: nonzero_c(r),
            delta: r.gen_range(0.5..2.0) * if r.gen_bool(0.5) { 1.0 } else { -1.0 },
            gamma: r.gen_range(0.5..2.0) * if r.gen_bool(0.5) { 1.0 } else { -1.0 },
        };
        let far = |a: C64, b: C64| (a - b).norm() > 0.2 && (a + b).norm() > 0.2;
        if far(p.ups_nu, p.ups_u) {
            return p;
        }
    }
}

pub fn max_abs(o: &Operator) -> f64 {
    o.matrix().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// 3Y on each slot, written out by hand: particle block rows (uR, dR, uL, dL) x
/// columns (lepton, 3 colours), then the conjugate block.
pub fn hypercharge_oracle(row: usize, col: usize) -> i32 {
    let particle = |r: usize, col: usize| -> i32 {
        match (r, col) {
            (0, 0) => 0,
            (1, 0) => -6,
            (2 | 3, 0) => -3,
            (0, _) => 4,
            (1, _) => -2,
            _ => 1,
        }
    };
    if row < 4 {
        particle(row, col)
    } else {
        -particle(col, row - 4)
    }
}
