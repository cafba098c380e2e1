//! Operator subspaces of `End(C^n)` with Hilbert-Schmidt orthonormal bases.
//!
//! Complex subspaces keep coordinates in `C^{n^2}` (vectorized operators); real
//! subspaces keep realified coordinates `[Re; Im]` in `R^{2 n^2}`.

use nalgebra::{ComplexField, DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{
    eigen_clusters, gram_kernel_if_clear, null_space, orthonormal_extension, rank_threshold, realify, refinement_window,
    roundoff_band, small_kernel,
    sorted_hermitian_eigen, unrealify, upper_factor, Operator, C64,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Complex,
    Real,
}

#[derive(Clone, Debug)]
enum Coords {
    Complex(DMatrix<C64>),
    Real(DMatrix<f64>),
}

#[derive(Clone, Debug)]
pub struct OperatorSubspace {
    n: usize,
    coords: Coords,
    tol: f64,
}

fn project_onto<T: ComplexField<RealField = f64> + Copy>(q: &DMatrix<T>, v: &DVector<T>) -> DVector<T> {
    if q.ncols() == 0 {
        return DVector::from_element(v.len(), T::zero());
    }
    q * q.ad_mul(v)
}

fn intersect_coords<T: ComplexField<RealField = f64> + Copy>(a: &DMatrix<T>, b: &DMatrix<T>, tol: f64) -> DMatrix<T> {
    let big_n = a.nrows();
    let (k, l) = (a.ncols(), b.ncols());
    if k == 0 || l == 0 {
        return DMatrix::from_element(big_n, 0, T::zero());
    }
    let mut m = DMatrix::from_element(big_n, k + l, T::zero());
    m.columns_mut(0, k).copy_from(a);
    m.columns_mut(k, l).copy_from(&(-b));
    let ker = null_space(&m, tol);
    if ker.is_empty() {
        return DMatrix::from_element(big_n, 0, T::zero());
    }
    let cands = DMatrix::from_columns(&ker.iter().map(|v| a * v.rows(0, k)).collect::<Vec<_>>());
    orthonormal_extension(&DMatrix::from_element(big_n, 0, T::zero()), &cands, tol)
}

fn complement_coords<T: ComplexField<RealField = f64> + Copy>(q: &DMatrix<T>, tol: f64) -> DMatrix<T> {
    let big_n = q.nrows();
    orthonormal_extension(q, &DMatrix::identity(big_n, big_n), tol)
}

fn append<T: ComplexField<RealField = f64> + Copy>(q: &DMatrix<T>, extra: &DMatrix<T>) -> DMatrix<T> {
    let mut out = DMatrix::from_element(q.nrows(), q.ncols() + extra.ncols(), T::zero());
    out.columns_mut(0, q.ncols()).copy_from(q);
    out.columns_mut(q.ncols(), extra.ncols()).copy_from(extra);
    out
}

impl OperatorSubspace {
    /// Orthonormal basis of the linear span of `gens` over `field`.
    pub fn span_of(n: usize, gens: &[Operator], field: Field, tol: f64) -> Result<Self> {
        for g in gens {
            if g.dim() != n {
                return Err(Error::DimensionMismatch(n, g.dim()));
            }
        }
        let normalized: Vec<Operator> = gens.iter().filter_map(Operator::normalized).collect();
        let coords = match field {
            Field::Complex => {
                let empty = DMatrix::zeros(n * n, 0);
                if normalized.is_empty() {
                    Coords::Complex(empty)
                } else {
                    let cols: Vec<_> = normalized.iter().map(Operator::vectorize).collect();
                    Coords::Complex(orthonormal_extension(&empty, &DMatrix::from_columns(&cols), tol))
                }
            }
            Field::Real => {
                let empty = DMatrix::zeros(2 * n * n, 0);
                if normalized.is_empty() {
                    Coords::Real(empty)
                } else {
                    let cols: Vec<_> = normalized.iter().map(realify).collect();
                    Coords::Real(orthonormal_extension(&empty, &DMatrix::from_columns(&cols), tol))
                }
            }
        };
        Ok(Self { n, coords, tol })
    }

    pub fn zero(n: usize, field: Field, tol: f64) -> Self {
        let coords = match field {
            Field::Complex => Coords::Complex(DMatrix::zeros(n * n, 0)),
            Field::Real => Coords::Real(DMatrix::zeros(2 * n * n, 0)),
        };
        Self { n, coords, tol }
    }

    pub fn full(n: usize, field: Field, tol: f64) -> Self {
        let coords = match field {
            Field::Complex => Coords::Complex(DMatrix::identity(n * n, n * n)),
            Field::Real => Coords::Real(DMatrix::identity(2 * n * n, 2 * n * n)),
        };
        Self { n, coords, tol }
    }

    pub(crate) fn from_complex_coords(n: usize, q: DMatrix<C64>, tol: f64) -> Self {
        Self { n, coords: Coords::Complex(q), tol }
    }

    pub fn complex_coords(&self) -> Option<&DMatrix<C64>> {
        match &self.coords {
            Coords::Complex(q) => Some(q),
            Coords::Real(_) => None,
        }
    }

    pub fn dim(&self) -> usize {
        match &self.coords {
            Coords::Complex(q) => q.ncols(),
            Coords::Real(q) => q.ncols(),
        }
    }

    pub fn field(&self) -> Field {
        match self.coords {
            Coords::Complex(_) => Field::Complex,
            Coords::Real(_) => Field::Real,
        }
    }

    /// Size `n` of the operators (`End(C^n)`).
    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    /// The orthonormal basis as operators.
    pub fn basis(&self) -> Vec<Operator> {
        match &self.coords {
            Coords::Complex(q) => q
                .column_iter()
                .map(|c| Operator::from_vectorized(self.n, c.as_slice()))
                .collect(),
            Coords::Real(q) => q.column_iter().map(|c| unrealify(self.n, c.as_slice())).collect(),
        }
    }

    /// HS-orthogonal projection (real inner product `Re Tr(x^* y)` for real subspaces).
    pub fn project(&self, x: &Operator) -> Operator {
        assert_eq!(x.dim(), self.n, "ambient dimension mismatch");
        match &self.coords {
            Coords::Complex(q) => {
                Operator::from_vectorized(self.n, project_onto(q, &x.vectorize()).as_slice())
            }
            Coords::Real(q) => unrealify(self.n, project_onto(q, &realify(x)).as_slice()),
        }
    }

    /// `|X - P X|_HS`.
    pub fn distance(&self, x: &Operator) -> f64 {
        (x - &self.project(x)).hs_norm()
    }

    /// Distance of the unit-normalized `x` from the subspace.
    pub fn relative_distance(&self, x: &Operator) -> f64 {
        match x.normalized() {
            Some(u) => self.distance(&u),
            None => 0.0,
        }
    }

    pub fn contains(&self, x: &Operator) -> bool {
        self.relative_distance(x) <= self.tol
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        if self.field() != other.field() {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    /// `other ⊆ self`, basis vector by basis vector.
    pub fn contains_space(&self, other: &Self) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(other.basis().iter().all(|b| self.contains(b)))
    }

    /// Mutual containment; with the dimension check this is cheap to falsify.
    pub fn equals(&self, other: &Self) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self.dim() == other.dim() && self.contains_space(other)? && other.contains_space(self)?)
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coords = match (&self.coords, &other.coords) {
            (Coords::Complex(a), Coords::Complex(b)) => {
                Coords::Complex(append(a, &orthonormal_extension(a, b, self.tol)))
            }
            (Coords::Real(a), Coords::Real(b)) => Coords::Real(append(a, &orthonormal_extension(a, b, self.tol))),
            _ => unreachable!(),
        };
        Ok(Self { n: self.n, coords, tol: self.tol })
    }

    /// `S ∩ T`, from the kernel of `[Q_S | -Q_T]`.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coords = match (&self.coords, &other.coords) {
            (Coords::Complex(a), Coords::Complex(b)) => Coords::Complex(intersect_coords(a, b, self.tol)),
            (Coords::Real(a), Coords::Real(b)) => Coords::Real(intersect_coords(a, b, self.tol)),
            _ => unreachable!(),
        };
        Ok(Self { n: self.n, coords, tol: self.tol })
    }

    /// HS-orthogonal complement in `End(C^n)` over the same field.
    pub fn complement(&self) -> Self {
        let coords = match &self.coords {
            Coords::Complex(q) => Coords::Complex(complement_coords(q, self.tol)),
            Coords::Real(q) => Coords::Real(complement_coords(q, self.tol)),
        };
        Self { n: self.n, coords, tol: self.tol }
    }

    /// The same set viewed as a real vector space (basis `{w, i w}` for complex input).
    pub fn to_real(&self) -> Self {
        match &self.coords {
            Coords::Real(_) => self.clone(),
            Coords::Complex(q) => {
                let mut cols = Vec::with_capacity(2 * q.ncols());
                for c in q.column_iter() {
                    let w = Operator::from_vectorized(self.n, c.as_slice());
                    cols.push(realify(&w));
                    cols.push(realify(&w.scale(C64::new(0.0, 1.0))));
                }
                let m = if cols.is_empty() {
                    DMatrix::zeros(2 * self.n * self.n, 0)
                } else {
                    DMatrix::from_columns(&cols)
                };
                Self { n: self.n, coords: Coords::Real(m), tol: self.tol }
            }
        }
    }

    /// Complex span of a real subspace.
    pub fn complexify(&self) -> Self {
        match &self.coords {
            Coords::Complex(_) => self.clone(),
            Coords::Real(_) => Self::span_of(self.n, &self.basis(), Field::Complex, self.tol).expect("same ambient"),
        }
    }

    /// Closed under `X -> X^*`.
    pub fn is_adjoint_closed(&self) -> bool {
        self.basis().iter().all(|b| self.contains(&b.adjoint()))
    }

    /// Commutant of the subspace (equivalently of any spanning set), over the same field.
    pub fn commutant(&self) -> Self {
        commutant(self.n, &self.basis(), self.field(), self.tol).expect("basis has the ambient size")
    }

    /// The real subspace `{X in self : f(X) = 0}` for a real-linear map `f`.
    pub fn real_kernel(&self, f: impl Fn(&Operator) -> Operator) -> Self {
        let real = self.to_real();
        let basis = real.basis();
        let big_n = 2 * self.n * self.n;
        if basis.is_empty() {
            return Self::zero(self.n, Field::Real, self.tol);
        }
        let images = DMatrix::from_columns(&basis.iter().map(|b| realify(&f(b))).collect::<Vec<_>>());
        let ker = null_space(&images, self.tol);
        let q = match &real.coords {
            Coords::Real(q) => q,
            Coords::Complex(_) => unreachable!(),
        };
        if ker.is_empty() {
            return Self::zero(self.n, Field::Real, self.tol);
        }
        let cands = DMatrix::from_columns(&ker.iter().map(|c| q * c).collect::<Vec<_>>());
        let m = orthonormal_extension(&DMatrix::zeros(big_n, 0), &cands, self.tol);
        Self { n: self.n, coords: Coords::Real(m), tol: self.tol }
    }
}

/// Commutant `{X : [X, g] = 0 for all g}` of a generating set.
///
/// When `span(gens)` is closed under adjoints, the commutant lies inside the
/// commutant of one random Hermitian element `h` of that span, so the unknowns are
/// restricted to operators block-diagonal in the eigenbasis of `h` (eigenvalue
/// clusters are merged generously: a coarser block structure only enlarges the
/// search space). The remaining constraints are imposed through their Gram matrix,
/// assembled entrywise. Without adjoint closure the search space is all of `End(C^n)`.
pub fn commutant(n: usize, gens: &[Operator], field: Field, tol: f64) -> Result<OperatorSubspace> {
    for g in gens {
        if g.dim() != n {
            return Err(Error::DimensionMismatch(n, g.dim()));
        }
    }
    let q = complex_commutant(n, gens, tol);
    let s = OperatorSubspace::from_complex_coords(n, q, tol);
    Ok(match field {
        Field::Complex => s,
        Field::Real => s.to_real(),
    })
}

fn complex_commutant(n: usize, gens: &[Operator], tol: f64) -> DMatrix<C64> {
    let scalar = |g: &Operator| {
        let t = g.trace() / C64::new(n as f64, 0.0);
        (g - &Operator::identity(n).scale(t)).hs_norm() <= tol
    };
    let gens: Vec<Operator> = gens
        .iter()
        .filter_map(Operator::normalized)
        .filter(|g| !scalar(g))
        .collect();
    if gens.is_empty() {
        return DMatrix::identity(n * n, n * n);
    }

    let span = OperatorSubspace::span_of(n, &gens, Field::Complex, tol).expect("sizes checked");
    let (values, u) = if gens.iter().all(|g| span.contains(&g.adjoint())) {
        let mut rng = ChaCha8Rng::seed_from_u64(0x00c0_ffee);
        let mut h = DMatrix::<C64>::zeros(n, n);
        for g in &gens {
            let m = g.matrix();
            let a: f64 = rng.gen_range(-1.0..1.0);
            let b: f64 = rng.gen_range(-1.0..1.0);
            h += (m + m.adjoint()) * C64::new(a, 0.0) + (m - m.adjoint()) * C64::new(0.0, b);
        }
        sorted_hermitian_eigen(&h)
    } else {
        (vec![0.0; n], DMatrix::identity(n, n))
    };
    let spread = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let clusters = eigen_clusters(&values, 1e-6 * spread.max(f64::MIN_POSITIVE));

    let mut cand: Vec<(usize, usize)> = Vec::new();
    for r in &clusters {
        for j in r.clone() {
            for i in r.clone() {
                cand.push((i, j));
            }
        }
    }
    let k = cand.len();

    // Generators in the eigenbasis.
    let gt: Vec<DMatrix<C64>> = gens.iter().map(|g| u.adjoint() * g.matrix() * &u).collect();
    let mut s1 = DMatrix::<C64>::zeros(n, n); // sum g g^*
    let mut s2 = DMatrix::<C64>::zeros(n, n); // sum g^* g
    for g in &gt {
        s1 += g * g.adjoint();
        s2 += g.adjoint() * g;
    }
    // <[E_ij, g], [E_kl, g]> = d_ik (g g*)_lj - conj(g_jl) g_ik - conj(g_ki) g_lj + d_jl (g* g)_ik
    let mut gram = DMatrix::<C64>::zeros(k, k);
    for (a, &(i, j)) in cand.iter().enumerate() {
        for (b, &(kk, l)) in cand.iter().enumerate().skip(a) {
            let mut v = C64::new(0.0, 0.0);
            if i == kk {
                v += s1[(l, j)];
            }
            if j == l {
                v += s2[(i, kk)];
            }
            for g in &gt {
                v -= g[(j, l)].conj() * g[(i, kk)] + g[(kk, i)].conj() * g[(l, j)];
            }
            gram[(a, b)] = v;
            gram[(b, a)] = v.conj();
        }
    }

    let (values, vecs) = sorted_hermitian_eigen(&gram);
    // Generators are HS-normalized, so the constraint map has scale ~1; flooring at
    // 1 keeps an all-kernel system (sigma_max pure roundoff) from a noise-relative threshold.
    let sigma_max = values.last().copied().unwrap_or(0.0).max(0.0).sqrt().max(1.0);
    let thr = rank_threshold(sigma_max, n * n, k, tol);
    let fill = |c: &DVector<C64>| {
        let mut y = DMatrix::<C64>::zeros(n, n);
        for (a, &(i, j)) in cand.iter().enumerate() {
            y[(i, j)] = c[a];
        }
        y
    };
    let ker: Vec<DVector<C64>> = match gram_kernel_if_clear(&values, sigma_max, thr) {
        Some(idx) => idx.iter().map(|&a| vecs.column(a).into_owned()).collect(),
        None => certified_kernel(&values, &vecs, sigma_max, thr, &gt, &fill)
            .unwrap_or_else(|| refine_kernel(&values, &vecs, sigma_max, thr, &gt, &fill)),
    };
    if ker.is_empty() {
        return DMatrix::zeros(n * n, 0);
    }
    let cols: Vec<DVector<C64>> = ker
        .iter()
        .map(|c| {
            let x = &u * fill(c) * u.adjoint();
            DVector::from_column_slice(x.as_slice())
        })
        .collect();
    orthonormal_extension(&DMatrix::zeros(n * n, 0), &DMatrix::from_columns(&cols), tol)
}

/// Exact constraint images of Gram eigenvectors `picked`.
fn exact_images<'a>(
    vecs: &DMatrix<C64>,
    picked: &[usize],
    gt: &'a [DMatrix<C64>],
    fill: &dyn Fn(&DVector<C64>) -> DMatrix<C64>,
) -> (DMatrix<C64>, impl Iterator<Item = DMatrix<C64>> + 'a) {
    let w = DMatrix::from_fn(vecs.nrows(), picked.len(), |a, t| vecs[(a, picked[t])]);
    let ys: Vec<DMatrix<C64>> = w.column_iter().map(|c| fill(&c.into_owned())).collect();
    let images = gt.iter().map(move |g| {
        let cols: Vec<DVector<C64>> = ys
            .iter()
            .map(|y| {
                let comm = y * g - g * y;
                DVector::from_column_slice(comm.as_slice())
            })
            .collect();
        DMatrix::from_columns(&cols)
    });
    (w, images)
}

/// Directions whose Gram eigenvalue is above `thr` beyond roundoff are certainly outside
/// the kernel. If the exact images of all the others have Frobenius norm `<= thr`, their
/// span is kernel (the Frobenius norm bounds the operator norm), with no factorization.
fn certified_kernel(
    values: &[f64],
    vecs: &DMatrix<C64>,
    sigma_max: f64,
    thr: f64,
    gt: &[DMatrix<C64>],
    fill: &dyn Fn(&DVector<C64>) -> DMatrix<C64>,
) -> Option<Vec<DVector<C64>>> {
    let band = roundoff_band(values.len(), sigma_max);
    let low: Vec<usize> = (0..values.len()).filter(|&a| values[a].max(0.0).sqrt() < thr + band).collect();
    if low.is_empty() {
        return Some(Vec::new());
    }
    let (w, images) = exact_images(vecs, &low, gt, fill);
    let mut frob2 = 0.0;
    for b in images {
        frob2 += b.norm_squared();
        if frob2 > thr * thr {
            return None;
        }
    }
    Some(w.column_iter().map(|c| c.into_owned()).collect())
}

/// Re-decides the near-null Gram directions from exact constraint images.
fn refine_kernel(
    values: &[f64],
    vecs: &DMatrix<C64>,
    sigma_max: f64,
    thr: f64,
    gt: &[DMatrix<C64>],
    fill: &dyn Fn(&DVector<C64>) -> DMatrix<C64>,
) -> Vec<DVector<C64>> {
    let k = values.len();
    let loose = refinement_window(sigma_max, thr);
    let picked: Vec<usize> = (0..k).filter(|&a| values[a].max(0.0).sqrt() <= loose).collect();
    if picked.is_empty() {
        return Vec::new();
    }
    let (w, images) = exact_images(vecs, &picked, gt, fill);
    small_kernel(&upper_factor(images, picked.len()), thr).iter().map(|c| &w * c).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{unit, DEFAULT_TOL};

    fn op(m: DMatrix<C64>) -> Operator {
        Operator::new(m).unwrap()
    }

    #[test]
    fn span_collapses_multiples() {
        let e = op(unit(4, 1, 1));
        let s = OperatorSubspace::span_of(4, &[e.clone(), e.scale_real(2.0)], Field::Complex, DEFAULT_TOL).unwrap();
        assert_eq!(s.dim(), 1);
        assert!(s.contains(&e));
        assert!(s.contains(&Operator::zeros(4)));
    }

    #[test]
    fn real_span_distinguishes_i() {
        let e = op(unit(3, 1, 2));
        let ie = e.scale(C64::new(0.0, 1.0));
        let r = OperatorSubspace::span_of(3, std::slice::from_ref(&e), Field::Real, DEFAULT_TOL).unwrap();
        assert!(!r.contains(&ie));
        let c = OperatorSubspace::span_of(3, &[e], Field::Complex, DEFAULT_TOL).unwrap();
        assert!(c.contains(&ie));
        assert_eq!(c.to_real().dim(), 2);
    }

    #[test]
    fn full_matrix_algebra_has_scalar_commutant() {
        let n = 5;
        let gens: Vec<_> = (1..=n)
            .flat_map(|i| (1..=n).map(move |j| (i, j)))
            .map(|(i, j)| op(unit(n, i, j)))
            .collect();
        let c = commutant(n, &gens, Field::Complex, DEFAULT_TOL).unwrap();
        assert_eq!(c.dim(), 1);
        assert!(c.contains(&Operator::identity(n)));
    }

    #[test]
    fn commutant_of_nothing_is_everything() {
        assert_eq!(commutant(3, &[], Field::Complex, DEFAULT_TOL).unwrap().dim(), 9);
        assert_eq!(commutant(3, &[Operator::identity(3)], Field::Real, DEFAULT_TOL).unwrap().dim(), 18);
    }

    #[test]
    fn commutant_of_non_normal_generator() {
        // single Jordan block: commutant is polynomials in it
        let j = op(unit(3, 1, 2) + unit(3, 2, 3));
        let c = commutant(3, std::slice::from_ref(&j), Field::Complex, DEFAULT_TOL).unwrap();
        assert_eq!(c.dim(), 3);
        assert!(c.contains(&(&j * &j)));
    }

    #[test]
    fn intersection_and_sum_dimensions() {
        let n = 3;
        let a = OperatorSubspace::span_of(n, &[op(unit(n, 1, 1)), op(unit(n, 2, 2))], Field::Complex, DEFAULT_TOL).unwrap();
        let b = OperatorSubspace::span_of(n, &[op(unit(n, 2, 2)), op(unit(n, 3, 3))], Field::Complex, DEFAULT_TOL).unwrap();
        assert_eq!(a.sum(&b).unwrap().dim(), 3);
        let i = a.intersect(&b).unwrap();
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&op(unit(n, 2, 2))));
        assert_eq!(a.complement().dim(), 7);
        assert!(matches!(a.sum(&a.to_real()), Err(Error::FieldMismatch)));
    }
}
