//! Gauge group actions: `pi_SM` on `H_F`, the `Z_6` kernel, hypercharges, and the
//! representation `rho` of `U(1) x U(2) x U(3)` coming from the degenerate `B_F` picture.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::catalog::algebras::af_element;
use crate::catalog::layout::slots;
use crate::error::{Error, Result};
use crate::linalg::{block_diag, c, identity, kron_action, unit, AntilinearOperator, Operator, C64, DIM};

const UNITARY_TOL: f64 = 1e-12;

/// `(lambda, q, m)` with `lambda in U(1)`, `q in U(2)`, `m in U(3)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    lambda: C64,
    q: DMatrix<C64>,
    m: DMatrix<C64>,
}

fn unitarity_defect(u: &DMatrix<C64>) -> f64 {
    (u.adjoint() * u - identity(u.nrows())).norm()
}

impl GroupElement {
    pub fn new(lambda: C64, q: DMatrix<C64>, m: DMatrix<C64>) -> Result<Self> {
        if q.shape() != (2, 2) {
            return Err(Error::Shape { expected: "2x2".into(), got: format!("{:?}", q.shape()) });
        }
        if m.shape() != (3, 3) {
            return Err(Error::Shape { expected: "3x3".into(), got: format!("{:?}", m.shape()) });
        }
        if !lambda.is_finite() || q.iter().chain(m.iter()).any(|z| !z.is_finite()) {
            return Err(Error::NonFinite);
        }
        if (lambda.norm() - 1.0).abs() > UNITARY_TOL {
            return Err(Error::NonUnitary(format!("|lambda| = {}", lambda.norm())));
        }
        for (name, u) in [("q", &q), ("m", &m)] {
            let d = unitarity_defect(u);
            if d > UNITARY_TOL {
                return Err(Error::NonUnitary(format!("{name}: |u*u - 1| = {d:e}")));
            }
        }
        Ok(Self { lambda, q, m })
    }

    pub fn identity() -> Self {
        Self { lambda: c(1.0, 0.0), q: identity(2), m: identity(3) }
    }

    /// `(lambda, 1, 1)`.
    pub fn phase(lambda: C64) -> Result<Self> {
        Self::new(lambda, identity(2), identity(3))
    }

    pub fn lambda(&self) -> C64 {
        self.lambda
    }

    pub fn q(&self) -> &DMatrix<C64> {
        &self.q
    }

    pub fn m(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn inverse(&self) -> Self {
        Self { lambda: self.lambda.conj(), q: self.q.adjoint(), m: self.m.adjoint() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { lambda: self.lambda * other.lambda, q: &self.q * &other.q, m: &self.m * &other.m }
    }

    /// `det q = det m = 1`, i.e. an element of `U(1) x SU(2) x SU(3)`.
    pub fn is_special(&self, tol: f64) -> bool {
        (self.q.determinant() - c(1.0, 0.0)).norm() <= tol && (self.m.determinant() - c(1.0, 0.0)).norm() <= tol
    }
}

/// The `Z_6` element `(mu, mu^3 1_2, mu^4 1_3)` with `mu = exp(2 pi i k / 6)`.
pub fn z6_element(k: u32) -> GroupElement {
    let mu = C64::from_polar(1.0, 2.0 * PI * f64::from(k % 6) / 6.0);
    GroupElement { lambda: mu, q: identity(2) * mu.powu(3), m: identity(3) * mu.powu(4) }
}

fn scalar(z: C64) -> DMatrix<C64> {
    DMatrix::from_element(1, 1, z)
}

fn zeros(n: usize) -> DMatrix<C64> {
    DMatrix::zeros(n, n)
}

fn require_special(g: &GroupElement) -> Result<()> {
    if g.is_special(1e-10) {
        Ok(())
    } else {
        Err(Error::NonUnitary("pi_SM needs det q = det m = 1".into()))
    }
}

/// `pi_SM(lambda, q, m) = pi~ J pi~ J` with `pi~ = pi(lambda^3, q, conj(lambda) m)`.
pub fn pi_sm(g: &GroupElement, j: &AntilinearOperator) -> Result<Operator> {
    require_special(g)?;
    let tilde = af_element(g.lambda.powu(3), &g.q, &(&g.m * g.lambda.conj()));
    Ok(&tilde * &j.conjugate(&tilde))
}

/// The two-summand form: one term acting on particles (rows 1-4), one on antiparticles.
pub fn pi_sm_direct(g: &GroupElement) -> Result<Operator> {
    require_special(g)?;
    let l3 = g.lambda.powu(3);
    let particle_left = block_diag(&[&scalar(l3), &scalar(l3.conj()), &g.q, &zeros(4)]);
    let particle_right = block_diag(&[&scalar(l3.conj()), &(g.m.adjoint() * g.lambda)]);
    let anti_left = block_diag(&[&zeros(4), &scalar(l3), &(&g.m * g.lambda.conj())]);
    let anti_right = block_diag(&[&scalar(l3.conj()), &scalar(l3), &g.q.adjoint()]);
    Ok(kron_action(&particle_left, &particle_right)? + kron_action(&anti_left, &anti_right)?)
}

/// Recovers the integer `n` with `<e_k, U e_k> = lambda^n` for each flattened basis state,
/// searching `|n| <= 12`. `None` if `U` is not diagonal or no exponent fits.
pub fn phase_exponents(u: &Operator, lambda: C64, tol: f64) -> Option<Vec<i32>> {
    let mat = u.matrix();
    let n = u.dim();
    let off: f64 = (0..n)
        .flat_map(|i| (0..n).map(move |k| (i, k)))
        .filter(|(i, k)| i != k)
        .map(|(i, k)| mat[(i, k)].norm_sqr())
        .sum::<f64>()
        .sqrt();
    if off > tol {
        return None;
    }
    (0..n)
        .map(|k| {
            let z = mat[(k, k)];
            (-12..=12)
                .map(|e| (e, (lambda.powi(e) - z).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .filter(|(_, err)| *err <= tol)
                .map(|(e, _)| e)
        })
        .collect()
}

/// `3 Y_w` on every flattened slot, as predicted by the particle layout.
pub fn hypercharge_table() -> Vec<i32> {
    slots().iter().map(|s| s.hypercharge3()).collect()
}

/// `phi(lambda, q, m) = (lambda^6, lambda^3 q, lambda^2 m)`.
pub fn phi(g: &GroupElement) -> GroupElement {
    GroupElement { lambda: g.lambda.powu(6), q: &g.q * g.lambda.powu(3), m: &g.m * g.lambda.powu(2) }
}

/// `pi0bar(u)`: acts on the conjugate-lepton/quark column (rows 5-8, column 2).
fn pi0_bar(u: &GroupElement) -> Operator {
    let left = block_diag(&[&zeros(4), &scalar(u.lambda), &u.m]);
    kron_action(&left, &unit(4, 2, 2)).unwrap()
}

fn pi1(u: &GroupElement) -> Operator {
    let top = block_diag(&[&scalar(u.lambda), &scalar(c(0.0, 0.0)), &u.q, &zeros(4)]);
    let bottom = block_diag(&[&zeros(4), &scalar(u.lambda), &u.m]);
    kron_action(&top, &identity(4)).unwrap() + kron_action(&bottom, &(identity(4) - unit(4, 2, 2))).unwrap()
}

/// `rho(u) = pi0bar(u) + J pi0bar(u) J + pi1(u) J pi1(u) J`.
pub fn rho_degenerate(u: &GroupElement, j: &AntilinearOperator) -> Operator {
    let p0 = pi0_bar(u);
    let p1 = pi1(u);
    &(&p0 + &j.conjugate(&p0)) + &(&p1 * &j.conjugate(&p1))
}

/// `det pi0bar(u) = det pi1(u) = 1` on the displayed blocks `diag(lambda, m)` and
/// `diag(lambda, q, lambda, m)`.
pub fn unimodular(u: &GroupElement, tol: f64) -> bool {
    let dm = u.m.determinant();
    let dq = u.q.determinant();
    let one = c(1.0, 0.0);
    (u.lambda * dm - one).norm() <= tol && (u.lambda * u.lambda * dq * dm - one).norm() <= tol
}

/// Every element of the gauge group acts unitarily; a convenience for reports.
pub fn unitarity_residual(u: &Operator) -> f64 {
    (&(&u.adjoint() * u) - &Operator::identity(DIM)).hs_norm()
}
