//! The real structure `J_F` and the two gradings.

use nalgebra::DMatrix;

use crate::linalg::{c, kron_action, AntilinearOperator, Operator, C64, COLS, ROWS};

/// `J_F [v1; v2] = [v2^*; v1^*]` with `^*` the 4x4 Hermitian conjugate.
///
/// On flattened states this is `K conj(v)` with `K` the permutation sending
/// top entry `(i, j)` to bottom entry `(4 + j, i)` and back.
pub fn build_jf() -> AntilinearOperator {
    let idx = |r: usize, col: usize| r + ROWS * col;
    let mut k = DMatrix::<f64>::zeros(ROWS * COLS, ROWS * COLS);
    for i in 0..4 {
        for j in 0..4 {
            // out (i, j) <- in (4 + j, i)
            k[(idx(i, j), idx(4 + j, i))] = 1.0;
            // out (4 + i, j) <- in (j, i)
            k[(idx(4 + i, j), idx(j, i))] = 1.0;
        }
    }
    AntilinearOperator::new(k).expect("permutation matrix")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GradingKind {
    /// Chirality: `+1` on right-handed, `-1` on left-handed particles.
    Standard,
    /// Leptons as in `Standard`, quarks with the opposite sign.
    Nonstandard,
}

fn diag(entries: &[f64]) -> DMatrix<C64> {
    DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        entries.len(),
        entries.iter().map(|&x| c(x, 0.0)),
    ))
}

pub fn build_grading(kind: GradingKind) -> Operator {
    let top = diag(&[1.0, 1.0, -1.0, -1.0, 0.0, 0.0, 0.0, 0.0]);
    let chiral = diag(&[1.0, 1.0, -1.0, -1.0]);
    match kind {
        GradingKind::Standard => {
            kron_action(&top, &diag(&[1.0; 4])).unwrap()
                + kron_action(&diag(&[0.0, 0.0, 0.0, 0.0, -1.0, -1.0, -1.0, -1.0]), &chiral).unwrap()
        }
        GradingKind::Nonstandard => {
            kron_action(&top, &diag(&[1.0, -1.0, -1.0, -1.0])).unwrap()
                + kron_action(&diag(&[0.0, 0.0, 0.0, 0.0, -1.0, 1.0, 1.0, 1.0]), &chiral).unwrap()
        }
    }
}
