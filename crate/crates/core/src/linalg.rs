//! Dense complex operator arithmetic and tolerance-controlled kernels.
//!
//! Vectors of `H_F = M_{8x4}(C)` are flattened column-major: entry `(i, j)` of
//! `V` (0-based) sits at index `i + 8 j`. With this convention the operator
//! `V -> a V b` is the Kronecker product `b^T (x) a`. Operators themselves are
//! vectorized the same way when they are treated as points of `End(H)`.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Relative rank / membership threshold used unless a caller overrides it.
pub const DEFAULT_TOL: f64 = 1e-9;

pub const ROWS: usize = 8;
pub const COLS: usize = 4;
/// Complex dimension of `H_F`.
pub const DIM: usize = ROWS * COLS;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Matrix unit `e_ij` of size `n`, 1-based as in the block displays.
pub fn unit(n: usize, i: usize, j: usize) -> DMatrix<C64> {
    assert!(i >= 1 && j >= 1 && i <= n && j <= n, "matrix unit out of range");
    let mut m = DMatrix::zeros(n, n);
    m[(i - 1, j - 1)] = C64::new(1.0, 0.0);
    m
}

pub fn identity(n: usize) -> DMatrix<C64> {
    DMatrix::identity(n, n)
}

/// Block-diagonal matrix from square blocks.
pub fn block_diag(blocks: &[&DMatrix<C64>]) -> DMatrix<C64> {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut m = DMatrix::zeros(n, n);
    let mut off = 0;
    for b in blocks {
        let k = b.nrows();
        m.view_mut((off, off), (k, k)).copy_from(b);
        off += k;
    }
    m
}

/// A linear operator on a finite-dimensional Hilbert space, stored densely.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    mat: DMatrix<C64>,
}

impl Operator {
    pub fn new(mat: DMatrix<C64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() || mat.nrows() == 0 {
            return Err(Error::Shape {
                expected: "non-empty square matrix".into(),
                got: format!("{}x{}", mat.nrows(), mat.ncols()),
            });
        }
        if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { mat })
    }

    pub(crate) fn from_matrix_unchecked(mat: DMatrix<C64>) -> Self {
        debug_assert_eq!(mat.nrows(), mat.ncols());
        Self { mat }
    }

    pub fn zeros(n: usize) -> Self {
        Self { mat: DMatrix::zeros(n, n) }
    }

    pub fn identity(n: usize) -> Self {
        Self { mat: identity(n) }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.mat
    }

    pub fn adjoint(&self) -> Self {
        Self { mat: self.mat.adjoint() }
    }

    pub fn conj(&self) -> Self {
        Self { mat: self.mat.map(|z| z.conj()) }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { mat: &self.mat * s }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self { mat: &self.mat * C64::new(s, 0.0) }
    }

    /// `[self, other] = self other - other self`.
    pub fn commutator(&self, other: &Operator) -> Self {
        Self { mat: &self.mat * &other.mat - &other.mat * &self.mat }
    }

    pub fn anticommutator(&self, other: &Operator) -> Self {
        Self { mat: &self.mat * &other.mat + &other.mat * &self.mat }
    }

    pub fn hs_norm(&self) -> f64 {
        self.mat.norm()
    }

    /// Largest singular value.
    pub fn op_norm(&self) -> f64 {
        if self.mat.iter().all(|z| *z == C64::new(0.0, 0.0)) {
            return 0.0;
        }
        self.mat
            .clone()
            .singular_values()
            .iter()
            .cloned()
            .fold(0.0, f64::max)
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    /// Unit HS-norm copy, or `None` for the zero operator.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.hs_norm();
        (n > 0.0).then(|| self.scale_real(1.0 / n))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (&self.mat - self.mat.adjoint()).norm() <= tol * self.hs_norm().max(1.0)
    }

    /// Column-major flattening, the coordinates of the operator in `End(H)`.
    pub fn vectorize(&self) -> DVector<C64> {
        DVector::from_column_slice(self.mat.as_slice())
    }

    pub fn from_vectorized(n: usize, v: &[C64]) -> Self {
        assert_eq!(v.len(), n * n);
        Self { mat: DMatrix::from_column_slice(n, n, v) }
    }

    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        &self.mat * v
    }
}

impl<'a> Add<&'a Operator> for &'a Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        Operator { mat: &self.mat + &rhs.mat }
    }
}

impl<'a> Sub<&'a Operator> for &'a Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        Operator { mat: &self.mat - &rhs.mat }
    }
}

impl<'a> Mul<&'a Operator> for &'a Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        Operator { mat: &self.mat * &rhs.mat }
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        Operator { mat: -&self.mat }
    }
}

impl Add for Operator {
    type Output = Operator;
    fn add(self, rhs: Operator) -> Operator {
        Operator { mat: self.mat + rhs.mat }
    }
}

impl Sub for Operator {
    type Output = Operator;
    fn sub(self, rhs: Operator) -> Operator {
        Operator { mat: self.mat - rhs.mat }
    }
}

/// `Tr(x^* y)`.
pub fn hs_inner(x: &Operator, y: &Operator) -> C64 {
    x.mat.dotc(&y.mat)
}

pub fn adjoint(o: &Operator) -> Operator {
    o.adjoint()
}

/// The operator `V -> a V b` on `M_{p x q}(C)`, for square `a` (p x p) and `b` (q x q).
pub fn left_right_action(a: &DMatrix<C64>, b: &DMatrix<C64>) -> Result<Operator> {
    if a.nrows() != a.ncols() || b.nrows() != b.ncols() {
        return Err(Error::Shape {
            expected: "square factors".into(),
            got: format!("{}x{} and {}x{}", a.nrows(), a.ncols(), b.nrows(), b.ncols()),
        });
    }
    Operator::new(b.transpose().kronecker(a))
}

/// `a (x) b` acting on `H_F`: `a` (8x8) multiplies from the left, `b` (4x4) from the right.
pub fn kron_action(a: &DMatrix<C64>, b: &DMatrix<C64>) -> Result<Operator> {
    if a.shape() != (ROWS, ROWS) || b.shape() != (COLS, COLS) {
        return Err(Error::Shape {
            expected: "8x8 and 4x4".into(),
            got: format!("{}x{} and {}x{}", a.nrows(), a.ncols(), b.nrows(), b.ncols()),
        });
    }
    left_right_action(a, b)
}

/// Shorthand for `e_ij (x) b` with an 8x8 matrix unit.
pub fn eu(i: usize, j: usize, b: &DMatrix<C64>) -> Operator {
    kron_action(&unit(ROWS, i, j), b).expect("fixed shapes")
}

/// Column-major flattening of a state `V` in `M_{8x4}(C)`.
pub fn vec_state(v: &DMatrix<C64>) -> DVector<C64> {
    DVector::from_column_slice(v.as_slice())
}

pub fn unvec_state(v: &DVector<C64>) -> DMatrix<C64> {
    DMatrix::from_column_slice(ROWS, COLS, v.as_slice())
}

/// Antilinear operator `v -> K conj(v)` with `K` real orthogonal.
#[derive(Clone, Debug, PartialEq)]
pub struct AntilinearOperator {
    k: DMatrix<f64>,
}

impl AntilinearOperator {
    pub fn new(k: DMatrix<f64>) -> Result<Self> {
        if k.nrows() != k.ncols() {
            return Err(Error::Shape {
                expected: "square".into(),
                got: format!("{}x{}", k.nrows(), k.ncols()),
            });
        }
        let n = k.nrows();
        let dev = (&k * k.transpose() - DMatrix::<f64>::identity(n, n)).norm();
        if dev > 1e-12 {
            return Err(Error::NotIsometry(dev));
        }
        Ok(Self { k })
    }

    /// Complex conjugation on `C^n`.
    pub fn conjugation(n: usize) -> Self {
        Self { k: DMatrix::identity(n, n) }
    }

    pub fn dim(&self) -> usize {
        self.k.nrows()
    }

    pub fn k(&self) -> &DMatrix<f64> {
        &self.k
    }

    pub(crate) fn k_complex(&self) -> DMatrix<C64> {
        self.k.map(|x| C64::new(x, 0.0))
    }

    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        self.k_complex() * v.map(|z| z.conj())
    }

    /// `J O J^{-1} = K conj(O) K^T`.
    pub fn conjugate(&self, o: &Operator) -> Operator {
        let k = self.k_complex();
        Operator::from_matrix_unchecked(&k * o.mat.map(|z| z.conj()) * k.transpose())
    }

    /// `J^2`, which is linear: `K K`.
    pub fn square(&self) -> Operator {
        Operator::from_matrix_unchecked((&self.k * &self.k).map(|x| C64::new(x, 0.0)))
    }

    /// `|J O - sign O J|_HS`, i.e. `|K conj(O) - sign O K|`.
    pub fn commutation_residual(&self, o: &Operator, sign: f64) -> f64 {
        let k = self.k_complex();
        (&k * o.mat.map(|z| z.conj()) - &o.mat * &k * C64::new(sign, 0.0)).norm()
    }
}

/// Singular values below `tol * max(m, n) * sigma_max` count as zero.
pub fn rank_threshold(sigma_max: f64, m: usize, n: usize, tol: f64) -> f64 {
    tol * m.max(n) as f64 * sigma_max
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra] = rb;
        }
    }
}

/// Orthonormal basis of `ker A`.
///
/// Unknowns that never share a constraint row are solved independently (the
/// catalog's constraint systems are extremely sparse); each coupled block goes
/// through the eigendecomposition of its Gram matrix. The rank decision uses the
/// global largest singular value, so it is identical to a dense solve.
pub fn null_space<T>(a: &DMatrix<T>, tol: f64) -> Vec<DVector<T>>
where
    T: ComplexField<RealField = f64> + Copy,
{
    let (m, n) = a.shape();
    let zero = T::zero();
    let mut uf = UnionFind((0..n).collect());
    let mut touched = vec![false; n];
    let mut row_first = vec![usize::MAX; m];
    for i in 0..m {
        let mut first = usize::MAX;
        for j in 0..n {
            if a[(i, j)] != zero {
                touched[j] = true;
                if first == usize::MAX {
                    first = j;
                } else {
                    uf.union(first, j);
                }
            }
        }
        row_first[i] = first;
    }

    let mut comp_cols: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for j in (0..n).filter(|&j| touched[j]) {
        let r = uf.find(j);
        comp_cols.entry(r).or_default().push(j);
    }
    let mut comp_rows: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for (i, &f) in row_first.iter().enumerate() {
        if f != usize::MAX {
            let r = uf.find(f);
            comp_rows.entry(r).or_default().push(i);
        }
    }

    let mut blocks = Vec::new();
    let mut mu_max = 0.0f64;
    for (root, cols) in &comp_cols {
        let rows = &comp_rows[root];
        let sub = DMatrix::from_fn(rows.len(), cols.len(), |r, s| a[(rows[r], cols[s])]);
        let gram = sub.ad_mul(&sub);
        let eig = gram.symmetric_eigen();
        mu_max = eig.eigenvalues.iter().cloned().fold(mu_max, f64::max);
        blocks.push((cols.clone(), eig));
    }

    let sigma_max = mu_max.max(0.0).sqrt();
    let thr = rank_threshold(sigma_max, m, n, tol);
    let loose = refinement_window(sigma_max, thr);
    let mut out = Vec::new();
    for ((cols, eig), rows) in blocks.into_iter().zip(comp_cols.keys().map(|r| &comp_rows[r])) {
        let values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        let local_kernel: Vec<DVector<T>> = match gram_kernel_if_clear(&values, sigma_max, thr) {
            Some(idx) => idx.iter().map(|&k| eig.eigenvectors.column(k).into_owned()).collect(),
            None => {
                let picked: Vec<usize> =
                    (0..values.len()).filter(|&k| values[k].max(0.0).sqrt() <= loose).collect();
                if picked.is_empty() {
                    continue;
                }
                let w = DMatrix::from_fn(cols.len(), picked.len(), |s, t| eig.eigenvectors[(s, picked[t])]);
                let sub = DMatrix::from_fn(rows.len(), cols.len(), |r, s| a[(rows[r], cols[s])]);
                small_kernel(&upper_factor(std::iter::once(sub * &w), picked.len()), thr)
                    .into_iter()
                    .map(|c| &w * c)
                    .collect()
            }
        };
        for local in local_kernel {
            let mut v = DVector::from_element(n, zero);
            for (s, &j) in cols.iter().enumerate() {
                v[j] = local[s];
            }
            out.push(v);
        }
    }
    for j in (0..n).filter(|&j| !touched[j]) {
        let mut v = DVector::from_element(n, zero);
        v[j] = T::one();
        out.push(v);
    }
    out
}

/// Gram eigenvalues carry absolute error ~ eps * sigma_max^2, so singular values
/// read off them are only good to ~sqrt(eps) * sigma_max. Directions below this
/// window are re-examined with an exact factorization before the rank rule applies.
pub(crate) fn refinement_window(sigma_max: f64, thr: f64) -> f64 {
    (2.0 * thr).max(1e-5 * sigma_max)
}

/// Uncertainty of `sqrt(mu)` for eigenvalues of a `k x k` Gram matrix with top `sigma_max^2`.
pub(crate) fn roundoff_band(k: usize, sigma_max: f64) -> f64 {
    4.0 * ((k.max(1) as f64) * f64::EPSILON).sqrt() * sigma_max
}

/// Kernel directions decided from Gram eigenvalues alone, when that is safe.
///
/// The eigenvalue error is `~ k eps sigma_max^2`, so `sqrt(mu)` is uncertain by
/// about `sqrt(k eps) sigma_max` near zero. If no eigenvalue falls in that band
/// around `thr`, the rank decision cannot change under refinement.
pub(crate) fn gram_kernel_if_clear(values: &[f64], sigma_max: f64, thr: f64) -> Option<Vec<usize>> {
    let band = roundoff_band(values.len(), sigma_max);
    if thr <= band {
        return None;
    }
    let s = |mu: f64| mu.max(0.0).sqrt();
    if values.iter().any(|&mu| (s(mu) - thr).abs() <= band) {
        return None;
    }
    Some((0..values.len()).filter(|&i| s(values[i]) < thr).collect())
}

/// Triangular factor `R` (w x w) with `R^* R = sum_b B_b^* B_b`, accumulated by
/// repeated QR so the stacked matrix is never formed.
pub(crate) fn upper_factor<T>(blocks: impl Iterator<Item = DMatrix<T>>, w: usize) -> DMatrix<T>
where
    T: ComplexField<RealField = f64> + Copy,
{
    let mut r = DMatrix::from_element(0, w, T::zero());
    for b in blocks {
        let mut stacked = DMatrix::from_element(r.nrows() + b.nrows(), w, T::zero());
        stacked.rows_mut(0, r.nrows()).copy_from(&r);
        stacked.rows_mut(r.nrows(), b.nrows()).copy_from(&b);
        r = stacked.qr().r();
    }
    if r.nrows() < w {
        let mut padded = DMatrix::from_element(w, w, T::zero());
        padded.rows_mut(0, r.nrows()).copy_from(&r);
        r = padded;
    }
    r
}

/// Right singular vectors of a square factor with singular value `<= thr`.
pub(crate) fn small_kernel<T>(r: &DMatrix<T>, thr: f64) -> Vec<DVector<T>>
where
    T: ComplexField<RealField = f64> + Copy,
{
    let svd = r.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested");
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= thr)
        .map(|(i, _)| v_t.row(i).adjoint())
        .collect()
}

/// Kernel of a real constraint matrix (e.g. a realified antilinear condition).
pub fn real_null_space(a: &DMatrix<f64>, tol: f64) -> Vec<DVector<f64>> {
    null_space(a, tol)
}

/// Matrix of a complex-linear map on `End(C^n)` in vectorized coordinates.
pub fn linear_map_matrix(n: usize, f: impl Fn(&Operator) -> Operator) -> DMatrix<C64> {
    let nn = n * n;
    let mut m = DMatrix::zeros(nn, nn);
    let mut basis = Operator::zeros(n);
    for col in 0..nn {
        basis.mat[(col % n, col / n)] = C64::new(1.0, 0.0);
        m.set_column(col, &f(&basis).vectorize());
        basis.mat[(col % n, col / n)] = C64::new(0.0, 0.0);
    }
    m
}

/// Realified coordinates `[Re vec X; Im vec X]`.
pub fn realify(o: &Operator) -> DVector<f64> {
    let v = o.mat.as_slice();
    let nn = v.len();
    DVector::from_fn(2 * nn, |k, _| if k < nn { v[k].re } else { v[k - nn].im })
}

pub fn unrealify(n: usize, v: &[f64]) -> Operator {
    let nn = n * n;
    assert_eq!(v.len(), 2 * nn);
    Operator::from_vectorized(n, &(0..nn).map(|k| C64::new(v[k], v[k + nn])).collect::<Vec<_>>())
}

/// Matrix of a real-linear map on `End(C^n)` seen as `R^{2 n^2}`.
pub fn realified_map_matrix(n: usize, f: impl Fn(&Operator) -> Operator) -> DMatrix<f64> {
    let nn = n * n;
    let mut m = DMatrix::zeros(2 * nn, 2 * nn);
    let mut basis = Operator::zeros(n);
    for col in 0..2 * nn {
        let k = col % nn;
        let z = if col < nn { C64::new(1.0, 0.0) } else { C64::new(0.0, 1.0) };
        basis.mat[(k % n, k / n)] = z;
        m.set_column(col, &realify(&f(&basis)));
        basis.mat[(k % n, k / n)] = C64::new(0.0, 0.0);
    }
    m
}

/// Extends the orthonormal columns of `existing` with an orthonormal basis for the
/// part of `span(candidates)` it does not yet cover.
///
/// Pivoted modified Gram-Schmidt with one re-orthogonalization pass. A pivot whose
/// residual norm is below `tol * max(N, m) * (largest candidate norm)` ends the sweep.
pub fn orthonormal_extension<T>(existing: &DMatrix<T>, candidates: &DMatrix<T>, tol: f64) -> DMatrix<T>
where
    T: ComplexField<RealField = f64> + Copy,
{
    let (big_n, m) = candidates.shape();
    let empty = DMatrix::from_element(big_n, 0, T::zero());
    if m == 0 {
        return empty;
    }
    let scale = candidates
        .column_iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return empty;
    }
    let mut cands = candidates.clone();
    if existing.ncols() > 0 {
        for _ in 0..2 {
            let coef = existing.ad_mul(&cands);
            cands -= existing * coef;
        }
    }
    let thr = rank_threshold(scale, big_n, m, tol);
    let mut norms: Vec<f64> = cands.column_iter().map(|c| c.norm()).collect();
    let mut alive: Vec<bool> = norms.iter().map(|&x| x > thr).collect();
    let mut accepted: Vec<DVector<T>> = Vec::new();

    loop {
        let pivot = (0..m)
            .filter(|&j| alive[j])
            .max_by(|&a, &b| norms[a].total_cmp(&norms[b]));
        let Some(p) = pivot else { break };
        if norms[p] <= thr {
            break;
        }
        alive[p] = false;
        let mut q: DVector<T> = cands.column(p).into_owned();
        // Second pass against everything accepted so far.
        if existing.ncols() > 0 {
            let coef = existing.ad_mul(&q);
            q -= existing * coef;
        }
        for prev in &accepted {
            let coef = prev.dotc(&q);
            q.axpy(-coef, prev, T::one());
        }
        let qn = q.norm();
        if qn <= thr {
            continue;
        }
        q.unscale_mut(qn);
        for j in 0..m {
            if alive[j] {
                let coef = q.dotc(&cands.column(j));
                let mut col = cands.column_mut(j);
                col.axpy(-coef, &q, T::one());
                norms[j] = col.norm();
                if norms[j] <= thr {
                    alive[j] = false;
                }
            }
        }
        accepted.push(q);
    }
    if accepted.is_empty() {
        return empty;
    }
    DMatrix::from_columns(&accepted)
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues ascending.
pub fn sorted_hermitian_eigen(m: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let herm = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_columns(
        &order.iter().map(|&k| eig.eigenvectors.column(k).into_owned()).collect::<Vec<_>>(),
    );
    (values, vectors)
}

/// Groups sorted eigenvalues into runs whose consecutive gaps are at most `gap`.
pub fn eigen_clusters(sorted: &[f64], gap: f64) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for k in 1..=sorted.len() {
        if k == sorted.len() || sorted[k] - sorted[k - 1] > gap {
            out.push(start..k);
            start = k;
        }
    }
    out
}
