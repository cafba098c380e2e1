//! Representations of `A_F = C + H + M_3(C)`, `B_F = C + M_2(C) + M_3(C)` and
//! `A^ev = H + H + M_4(C)` on `H_F`, all of the form `a (x) 1_4`.

use nalgebra::DMatrix;

use crate::linalg::{block_diag, c, identity, kron_action, unit, AntilinearOperator, Operator, C64};

/// Quaternion `[alpha beta; -conj(beta) conj(alpha)]` as a 2x2 complex matrix.
pub fn quaternion(alpha: C64, beta: C64) -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[alpha, beta, -beta.conj(), alpha.conj()])
}

/// Real basis `{1, i s1, i s2, i s3}` of the quaternions.
pub fn quaternion_units() -> [DMatrix<C64>; 4] {
    [
        quaternion(c(1.0, 0.0), c(0.0, 0.0)),
        quaternion(c(0.0, 0.0), c(0.0, 1.0)),
        quaternion(c(0.0, 0.0), c(1.0, 0.0)),
        quaternion(c(0.0, 1.0), c(0.0, 0.0)),
    ]
}

fn scalar(z: C64) -> DMatrix<C64> {
    DMatrix::from_element(1, 1, z)
}

fn tensor_one(a: &DMatrix<C64>) -> Operator {
    kron_action(a, &identity(4)).expect("8x8 block")
}

/// Real basis of `M_k(C)`: `e_ij` and `i e_ij`.
fn complex_matrix_real_basis(k: usize) -> Vec<DMatrix<C64>> {
    let mut out = Vec::with_capacity(2 * k * k);
    for i in 1..=k {
        for j in 1..=k {
            out.push(unit(k, i, j));
            out.push(unit(k, i, j) * c(0.0, 1.0));
        }
    }
    out
}

/// `pi(lambda, q, m) = diag(lambda, conj(lambda), q, lambda, m) (x) 1`.
pub fn af_element(lambda: C64, q: &DMatrix<C64>, m: &DMatrix<C64>) -> Operator {
    tensor_one(&block_diag(&[&scalar(lambda), &scalar(lambda.conj()), q, &scalar(lambda), m]))
}

/// Real-linear basis of `pi(A_F)` (24 elements: 2 for `C`, 4 for `H`, 18 for `M_3(C)`).
///
/// The complex span is `(A_F)_C`, of complex dimension 15.
pub fn build_algebra_af() -> Vec<Operator> {
    let z2 = DMatrix::zeros(2, 2);
    let z3 = DMatrix::zeros(3, 3);
    let zero = c(0.0, 0.0);
    let mut out = vec![af_element(c(1.0, 0.0), &z2, &z3), af_element(c(0.0, 1.0), &z2, &z3)];
    out.extend(quaternion_units().iter().map(|q| af_element(zero, q, &z3)));
    out.extend(complex_matrix_real_basis(3).iter().map(|m| af_element(zero, &z2, m)));
    out
}

/// `pi(lambda, q, m) = diag(lambda, 0, q, lambda, m) (x) 1` on `H_F` (after the isometry).
pub fn bf_element(lambda: C64, q: &DMatrix<C64>, m: &DMatrix<C64>) -> Operator {
    tensor_one(&block_diag(&[&scalar(lambda), &scalar(c(0.0, 0.0)), q, &scalar(lambda), m]))
}

/// Complex basis of `pi(B_F)`: 1 + 4 + 9 = 14 elements.
pub fn build_algebra_bf() -> Vec<Operator> {
    let z2 = DMatrix::zeros(2, 2);
    let z3 = DMatrix::zeros(3, 3);
    let zero = c(0.0, 0.0);
    let mut out = vec![bf_element(c(1.0, 0.0), &z2, &z3)];
    for i in 1..=2 {
        for j in 1..=2 {
            out.push(bf_element(zero, &unit(2, i, j), &z3));
        }
    }
    for i in 1..=3 {
        for j in 1..=3 {
            out.push(bf_element(zero, &z2, &unit(3, i, j)));
        }
    }
    out
}

/// `diag(x, y, m) (x) 1` with `x, y` quaternions and `m in M_4(C)`.
pub fn aev_element(x: &DMatrix<C64>, y: &DMatrix<C64>, m: &DMatrix<C64>) -> Operator {
    tensor_one(&block_diag(&[x, y, m]))
}

/// Real-linear basis of `pi(A^ev)`: 4 + 4 + 32 = 40 elements.
pub fn build_algebra_aev() -> Vec<Operator> {
    let z2 = DMatrix::zeros(2, 2);
    let z4 = DMatrix::zeros(4, 4);
    let mut out = Vec::with_capacity(40);
    out.extend(quaternion_units().iter().map(|x| aev_element(x, &z2, &z4)));
    out.extend(quaternion_units().iter().map(|y| aev_element(&z2, y, &z4)));
    out.extend(complex_matrix_real_basis(4).iter().map(|m| aev_element(&z2, &z2, m)));
    out
}

/// Images `J a^* J^{-1}` of the generators: the right action of the opposite algebra.
pub fn opposite_gens(j: &AntilinearOperator, gens: &[Operator]) -> Vec<Operator> {
    gens.iter().map(|a| j.conjugate(&a.adjoint())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_element_is_identity() {
        let one = af_element(c(1.0, 0.0), &identity(2), &identity(3));
        assert_eq!(one, Operator::identity(32));
        let one = aev_element(&identity(2), &identity(2), &identity(4));
        assert_eq!(one, Operator::identity(32));
    }

    #[test]
    fn quaternion_units_have_quaternion_shape() {
        for q in quaternion_units() {
            assert_eq!(q[(1, 1)], q[(0, 0)].conj());
            assert_eq!(q[(1, 0)], -q[(0, 1)].conj());
        }
    }

    #[test]
    fn generator_counts() {
        assert_eq!(build_algebra_af().len(), 24);
        assert_eq!(build_algebra_bf().len(), 14);
        assert_eq!(build_algebra_aev().len(), 40);
    }

    #[test]
    fn bf_differs_from_af_only_in_slot_22() {
        let l = c(0.3, -1.2);
        let q = quaternion(c(0.5, 0.1), c(-0.2, 0.7));
        let m = DMatrix::from_fn(3, 3, |i, j| c(i as f64, j as f64));
        let diff = &af_element(l, &q, &m) - &bf_element(l, &q, &m);
        let expected = kron_action(&(unit(8, 2, 2) * l.conj()), &identity(4)).unwrap();
        assert_eq!(diff, expected);
    }
}
