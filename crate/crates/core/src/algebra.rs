//! Finite-dimensional *-algebras of operators.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{orthonormal_extension, rank_threshold, sorted_hermitian_eigen, Operator, C64};
use crate::subspace::{commutant, Field, OperatorSubspace};

/// A complex *-subalgebra of `End(C^n)`.
#[derive(Clone, Debug)]
pub struct StarAlgebra {
    space: OperatorSubspace,
    unital: bool,
}

impl StarAlgebra {
    /// Wraps a subspace already known to be a *-algebra.
    pub fn from_space(space: OperatorSubspace) -> Result<Self> {
        if space.field() != Field::Complex {
            return Err(Error::FieldMismatch);
        }
        let unital = space.contains(&Operator::identity(space.ambient()));
        Ok(Self { space, unital })
    }

    pub fn space(&self) -> &OperatorSubspace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn is_unital(&self) -> bool {
        self.unital
    }

    pub fn contains(&self, x: &Operator) -> bool {
        self.space.contains(x)
    }

    pub fn basis(&self) -> Vec<Operator> {
        self.space.basis()
    }

    pub fn commutant(&self) -> OperatorSubspace {
        self.space.commutant()
    }

    /// Largest distance of `x y` (over orthonormal basis pairs) and `x*` from the space.
    ///
    /// Absolute, not relative: products of orthogonal blocks vanish up to roundoff and
    /// normalizing them would amplify noise.
    pub fn closure_defect(&self) -> f64 {
        let b = self.basis();
        let mut worst = 0.0f64;
        for x in &b {
            worst = worst.max(self.space.distance(&x.adjoint()));
            for y in &b {
                worst = worst.max(self.space.distance(&(x * y)));
            }
        }
        worst
    }
}

fn adjoint_closed_gens(gens: &[Operator]) -> Vec<Operator> {
    gens.iter().flat_map(|g| [g.clone(), g.adjoint()]).collect()
}

/// Projection onto the span of the ranges of `gens` (assumed closed under adjoints).
fn support_projection(n: usize, gens: &[Operator], tol: f64) -> DMatrix<C64> {
    let mut h = DMatrix::<C64>::zeros(n, n);
    for g in gens.iter().filter_map(Operator::normalized) {
        h += g.matrix() * g.matrix().adjoint();
    }
    let (values, vecs) = sorted_hermitian_eigen(&h);
    let top = values.last().copied().unwrap_or(0.0).max(0.0);
    let thr = rank_threshold(top, n, n, tol);
    let mut p = DMatrix::<C64>::zeros(n, n);
    for (k, &v) in values.iter().enumerate() {
        if v > thr {
            let c = vecs.column(k);
            p += c * c.adjoint();
        }
    }
    p
}

/// The *-algebra generated by `gens`.
///
/// With `p` the support projection of `gens ∪ gens*`, the generated algebra is
/// `p gens'' p`: the bicommutant is the unital algebra `B + C (1 - p)`, and the
/// compression by `p` removes the adjoined unit.
pub fn star_closure(n: usize, gens: &[Operator], tol: f64) -> Result<StarAlgebra> {
    let all = adjoint_closed_gens(gens);
    for g in &all {
        if g.dim() != n {
            return Err(Error::DimensionMismatch(n, g.dim()));
        }
    }
    if all.iter().all(|g| g.hs_norm() == 0.0) {
        return StarAlgebra::from_space(OperatorSubspace::zero(n, Field::Complex, tol));
    }
    let double = commutant(n, &commutant(n, &all, Field::Complex, tol)?.basis(), Field::Complex, tol)?;
    let p = support_projection(n, &all, tol);
    let space = if (p.clone() - DMatrix::<C64>::identity(n, n)).norm() <= tol {
        double
    } else {
        let p = Operator::new(p)?;
        let compressed: Vec<Operator> = double.basis().iter().map(|b| &(&p * b) * &p).collect();
        OperatorSubspace::span_of(n, &compressed, Field::Complex, tol)?
    };
    StarAlgebra::from_space(space)
}

/// The same closure by repeated multiplication: `S_0 = span(gens ∪ gens*)`, then
/// left-multiply the newly found directions by `S_0` until nothing new appears.
pub fn closure_by_products(n: usize, gens: &[Operator], tol: f64) -> Result<StarAlgebra> {
    let s0 = OperatorSubspace::span_of(n, &adjoint_closed_gens(gens), Field::Complex, tol)?;
    let g = s0.basis();
    let mut q = s0.complex_coords().expect("complex").clone();
    let mut frontier = g.clone();
    while !frontier.is_empty() && q.ncols() < n * n {
        let cands: Vec<_> = g
            .iter()
            .flat_map(|a| frontier.iter().map(move |f| (a * f).vectorize()))
            .collect();
        let fresh = orthonormal_extension(&q, &DMatrix::from_columns(&cands), tol);
        frontier = fresh.column_iter().map(|c| Operator::from_vectorized(n, c.as_slice())).collect();
        let mut next = DMatrix::zeros(n * n, q.ncols() + fresh.ncols());
        next.columns_mut(0, q.ncols()).copy_from(&q);
        next.columns_mut(q.ncols(), fresh.ncols()).copy_from(&fresh);
        q = next;
    }
    StarAlgebra::from_space(OperatorSubspace::span_of(
        n,
        &q.column_iter().map(|c| Operator::from_vectorized(n, c.as_slice())).collect::<Vec<_>>(),
        Field::Complex,
        tol,
    )?)
}

/// `Z(A) = A ∩ A'`.
pub fn center(a: &StarAlgebra) -> Result<OperatorSubspace> {
    a.space.intersect(&a.commutant())
}

/// `A + C 1`.
pub fn unitalize(a: &StarAlgebra) -> Result<StarAlgebra> {
    if a.unital {
        return Ok(a.clone());
    }
    let n = a.space.ambient();
    let one = OperatorSubspace::span_of(n, &[Operator::identity(n)], Field::Complex, a.space.tol())?;
    StarAlgebra::from_space(a.space.sum(&one)?)
}
