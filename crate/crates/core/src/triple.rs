//! Finite real spectral triples `(A, H, D, J, gamma)` and their axioms.

use nalgebra::DMatrix;

use crate::catalog::algebras::opposite_gens;
use crate::error::{Error, Result};
use crate::linalg::{AntilinearOperator, Operator, C64};
use crate::subspace::{commutant, Field, OperatorSubspace};

#[derive(Clone, Debug)]
pub struct FiniteTriple {
    algebra: Vec<Operator>,
    opposite: Vec<Operator>,
    dirac: Operator,
    j: AntilinearOperator,
    gamma: Option<Operator>,
    d0: Option<Operator>,
    tol: f64,
}

fn check_dim(n: usize, o: &Operator) -> Result<()> {
    if o.dim() == n {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(n, o.dim()))
    }
}

fn rel(x: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        x / scale
    } else {
        x
    }
}

impl FiniteTriple {
    /// Builds the triple; the opposite generators are `J a* J`.
    ///
    /// `D` must be Hermitian and `gamma` (if any) a self-adjoint involution. Parity of
    /// `D` is *not* enforced: some catalog triples are deliberately incompatible.
    pub fn new(
        algebra: Vec<Operator>,
        dirac: Operator,
        j: AntilinearOperator,
        gamma: Option<Operator>,
        tol: f64,
    ) -> Result<Self> {
        for a in &algebra {
            check_dim(j.dim(), a)?;
        }
        let opposite = opposite_gens(&j, &algebra);
        Self::with_opposite(algebra, opposite, dirac, j, gamma, tol)
    }

    pub fn with_opposite(
        algebra: Vec<Operator>,
        opposite: Vec<Operator>,
        dirac: Operator,
        j: AntilinearOperator,
        gamma: Option<Operator>,
        tol: f64,
    ) -> Result<Self> {
        let n = j.dim();
        for o in algebra.iter().chain(&opposite).chain(std::iter::once(&dirac)).chain(gamma.iter()) {
            check_dim(n, o)?;
        }
        let herm = (&dirac - &dirac.adjoint()).hs_norm();
        if herm > tol * dirac.hs_norm().max(1.0) {
            return Err(Error::NotHermitian(herm));
        }
        if let Some(g) = &gamma {
            let sq = (&(g * g) - &Operator::identity(n)).hs_norm();
            let sa = (g - &g.adjoint()).hs_norm();
            if sq > tol * (n as f64).sqrt() || sa > tol * (n as f64).sqrt() {
                return Err(Error::InvalidGrading(format!("|g^2 - 1| = {sq:e}, |g - g*| = {sa:e}")));
            }
        }
        Ok(Self { algebra, opposite, dirac, j, gamma, d0: None, tol })
    }

    /// Records the `D0` the Dirac operator was assembled from (`D = D0 + J D0 J + ...`).
    pub fn with_d0(mut self, d0: Operator) -> Result<Self> {
        check_dim(self.dim(), &d0)?;
        self.d0 = Some(d0);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.j.dim()
    }

    pub fn algebra(&self) -> &[Operator] {
        &self.algebra
    }

    pub fn opposite(&self) -> &[Operator] {
        &self.opposite
    }

    pub fn dirac(&self) -> &Operator {
        &self.dirac
    }

    pub fn j(&self) -> &AntilinearOperator {
        &self.j
    }

    pub fn gamma(&self) -> Option<&Operator> {
        self.gamma.as_ref()
    }

    pub fn d0(&self) -> Option<&Operator> {
        self.d0.as_ref()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn is_even(&self) -> bool {
        self.gamma.is_some()
    }

    /// Same data with `D` replaced (`D0` is dropped).
    pub fn with_dirac(&self, dirac: Operator) -> Result<Self> {
        Self::with_opposite(
            self.algebra.clone(),
            self.opposite.clone(),
            dirac,
            self.j.clone(),
            self.gamma.clone(),
            self.tol,
        )
    }

    /// Same data with a different tolerance.
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    /// `max |[a, b°]|_HS / (|a| |b°|)` over generator pairs (operator norms).
    pub fn zeroth_order_violation(&self) -> f64 {
        let mut worst = 0.0f64;
        for a in &self.algebra {
            let na = a.op_norm();
            for b in &self.opposite {
                let nb = b.op_norm();
                if na > 0.0 && nb > 0.0 {
                    worst = worst.max(a.commutator(b).hs_norm() / (na * nb));
                }
            }
        }
        worst
    }

    /// `max |[[D, a], b°]|_HS / (|D| |a| |b°|)` over generator pairs (operator norms).
    pub fn first_order_violation(&self) -> f64 {
        let nd = self.dirac.op_norm();
        if nd == 0.0 {
            return 0.0;
        }
        let mut worst = 0.0f64;
        for a in &self.algebra {
            let na = a.op_norm();
            if na == 0.0 {
                continue;
            }
            let da = self.dirac.commutator(a);
            for b in &self.opposite {
                let nb = b.op_norm();
                if nb > 0.0 {
                    worst = worst.max(da.commutator(b).hs_norm() / (nd * na * nb));
                }
            }
        }
        worst
    }

    /// `max |[gamma, a]|` over generators, relative; `0` for odd triples.
    pub fn grading_even_violation(&self) -> f64 {
        match &self.gamma {
            None => 0.0,
            Some(g) => self
                .algebra
                .iter()
                .filter(|a| a.hs_norm() > 0.0)
                .map(|a| g.commutator(a).hs_norm() / (g.op_norm() * a.op_norm()))
                .fold(0.0, f64::max),
        }
    }

    /// `|{gamma, D}| / (|gamma| |D|)`; `0` for odd triples or `D = 0`.
    pub fn dirac_odd_violation(&self) -> f64 {
        match &self.gamma {
            None => 0.0,
            Some(g) => rel(g.anticommutator(&self.dirac).hs_norm(), 2.0 * self.dirac.hs_norm()),
        }
    }

    pub fn sign_table(&self) -> Result<SignTable> {
        let n = self.dim() as f64;
        let jsq = self.j.square();
        let id = Operator::identity(self.dim());
        let eps = pick_sign(
            "J^2 = eps",
            (&jsq - &id).hs_norm() / n.sqrt(),
            (&jsq + &id).hs_norm() / n.sqrt(),
            self.tol,
        )?;
        let dn = self.dirac.hs_norm();
        let eps_prime = if dn == 0.0 {
            Signed { sign: 1, residual: 0.0 }
        } else {
            pick_sign(
                "J D = eps' D J",
                self.j.commutation_residual(&self.dirac, 1.0) / dn,
                self.j.commutation_residual(&self.dirac, -1.0) / dn,
                self.tol,
            )?
        };
        let eps_dblprime = match &self.gamma {
            None => None,
            Some(g) => {
                let gn = g.hs_norm();
                Some(pick_sign(
                    "J gamma = eps'' gamma J",
                    self.j.commutation_residual(g, 1.0) / gn,
                    self.j.commutation_residual(g, -1.0) / gn,
                    self.tol,
                )?)
            }
        };
        let ko_dimension = ko_dimension(eps.sign, eps_prime.sign, eps_dblprime.map(|s| s.sign));
        Ok(SignTable {
            eps: eps.sign,
            eps_prime: eps_prime.sign,
            eps_dblprime: eps_dblprime.map(|s| s.sign),
            residuals: [eps.residual, eps_prime.residual, eps_dblprime.map_or(0.0, |s| s.residual)],
            ko_dimension,
        })
    }

    /// `A'`, `(A°)'` and their intersection, with a solver for the split of `D`.
    pub fn commutants(&self) -> Result<Commutants> {
        Commutants::new(self.dim(), &self.algebra, &self.opposite, self.tol)
    }

    /// Splits `D = D0 + D1` with `D0 in (A°)'`, `D1 in A'` by minimum-norm least squares.
    pub fn decompose_dirac(&self) -> Result<DiracDecomposition> {
        let v = self.first_order_violation();
        if v > self.tol {
            return Err(Error::NotFirstOrder(v));
        }
        self.decompose_dirac_with(&self.commutants()?)
    }

    /// As [`decompose_dirac`](Self::decompose_dirac) with precomputed commutants
    /// (the first-order precondition is left to the caller).
    pub fn decompose_dirac_with(&self, c: &Commutants) -> Result<DiracDecomposition> {
        let (d0, d1) = c.split(&self.dirac);
        let dn = self.dirac.hs_norm();
        let residual = rel((&self.dirac - &(&d0 + &d1)).hs_norm(), dn);

        let commutes_with_j = rel(self.j.commutation_residual(&self.dirac, 1.0), dn) <= self.tol;
        let symmetric = commutes_with_j.then(|| {
            // D' = D - D0 - J D0 J lies in A' ∩ (A°)'; half of it moves into D0.
            let jd0j = self.j.conjugate(&d0);
            let d_prime = &(&self.dirac - &d0) - &jd0j;
            let shifted = &d0 + &d_prime.scale_real(0.5);
            let s = (&shifted + &shifted.adjoint()).scale_real(0.5);
            let rebuilt = &s + &self.j.conjugate(&s);
            SymmetricSplit {
                residual: rel((&self.dirac - &rebuilt).hs_norm(), dn),
                in_opposite_commutant: c.opposite.contains(&s),
                s,
            }
        });
        Ok(DiracDecomposition { d0, d1, residual, ambiguity_dim: c.intersection.dim(), symmetric })
    }
}

/// The commutants entering the Dirac decomposition.
#[derive(Clone, Debug)]
pub struct Commutants {
    /// `A'`.
    pub algebra: OperatorSubspace,
    /// `(A°)'`.
    pub opposite: OperatorSubspace,
    pub intersection: OperatorSubspace,
    /// Pseudo-inverse of `[Q_(A°)' | Q_A']`.
    pinv: DMatrix<C64>,
}

impl Commutants {
    pub fn new(n: usize, algebra: &[Operator], opposite: &[Operator], tol: f64) -> Result<Self> {
        let comm_a = commutant(n, algebra, Field::Complex, tol)?;
        let comm_op = commutant(n, opposite, Field::Complex, tol)?;
        let intersection = comm_op.intersect(&comm_a)?;
        let q = stacked_coords(&comm_op, &comm_a);
        let pinv = if q.ncols() == 0 {
            DMatrix::zeros(0, n * n)
        } else {
            q.pseudo_inverse(1e-12).expect("non-negative epsilon")
        };
        Ok(Self { algebra: comm_a, opposite: comm_op, intersection, pinv })
    }

    /// Minimum-norm `(D0, D1)` with `D0 in (A°)'`, `D1 in A'`, `D0 + D1 ~ D`.
    pub fn split(&self, d: &Operator) -> (Operator, Operator) {
        let n = d.dim();
        let coeffs = &self.pinv * d.vectorize();
        let k = self.opposite.dim();
        let q0 = self.opposite.complex_coords().expect("complex");
        let q1 = self.algebra.complex_coords().expect("complex");
        let d0 = q0 * coeffs.rows(0, k);
        let d1 = q1 * coeffs.rows(k, coeffs.len() - k);
        (Operator::from_vectorized(n, d0.as_slice()), Operator::from_vectorized(n, d1.as_slice()))
    }
}

fn stacked_coords(s: &OperatorSubspace, t: &OperatorSubspace) -> DMatrix<C64> {
    let a = s.complex_coords().expect("complex");
    let b = t.complex_coords().expect("complex");
    let mut q = DMatrix::zeros(a.nrows(), a.ncols() + b.ncols());
    q.columns_mut(0, a.ncols()).copy_from(a);
    q.columns_mut(a.ncols(), b.ncols()).copy_from(b);
    q
}

#[derive(Clone, Copy, Debug)]
struct Signed {
    sign: i8,
    residual: f64,
}

fn pick_sign(relation: &'static str, plus: f64, minus: f64, tol: f64) -> Result<Signed> {
    if plus <= tol && minus >= 1.0 {
        Ok(Signed { sign: 1, residual: plus })
    } else if minus <= tol && plus >= 1.0 {
        Ok(Signed { sign: -1, residual: minus })
    } else {
        Err(Error::SignIndeterminate { relation, plus, minus })
    }
}

/// KO-dimension mod 8 from the signs; `None` if the combination is not in the table.
pub fn ko_dimension(eps: i8, eps_prime: i8, eps_dblprime: Option<i8>) -> Option<u8> {
    match (eps, eps_prime, eps_dblprime) {
        (1, 1, Some(1)) => Some(0),
        (-1, 1, Some(-1)) => Some(2),
        (-1, 1, Some(1)) => Some(4),
        (1, 1, Some(-1)) => Some(6),
        (1, -1, None) => Some(1),
        (-1, 1, None) => Some(3),
        (-1, -1, None) => Some(5),
        (1, 1, None) => Some(7),
        _ => None,
    }
}

/// `(eps, eps', eps'')` with the residual of each chosen relation (normalized).
#[derive(Clone, Debug, PartialEq)]
pub struct SignTable {
    pub eps: i8,
    pub eps_prime: i8,
    pub eps_dblprime: Option<i8>,
    pub residuals: [f64; 3],
    pub ko_dimension: Option<u8>,
}

#[derive(Clone, Debug)]
pub struct SymmetricSplit {
    /// Self-adjoint `S in (A°)'` with `D = S + J S J`.
    pub s: Operator,
    pub residual: f64,
    pub in_opposite_commutant: bool,
}

#[derive(Clone, Debug)]
pub struct DiracDecomposition {
    pub d0: Operator,
    pub d1: Operator,
    /// `|D - D0 - D1| / |D|`.
    pub residual: f64,
    /// `dim A' ∩ (A°)'`: the freedom in choosing the split.
    pub ambiguity_dim: usize,
    /// Present when `J D = D J`.
    pub symmetric: Option<SymmetricSplit>,
}

/// `{gamma, D0} = 0` up to `tol` (relative to `|D0|`).
pub fn grading_compatible(d0: &Operator, gamma: &Operator, tol: f64) -> bool {
    rel(gamma.anticommutator(d0).hs_norm(), d0.hs_norm()) <= tol
}
