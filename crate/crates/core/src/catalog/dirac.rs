//! The Dirac family: `D_F = D0 + J D0 J + D_R`, optionally with the `Gamma` term in `D0`.

use nalgebra::DMatrix;

use crate::linalg::{c, identity, kron_action, unit, AntilinearOperator, Operator, C64};

/// Coefficients of the finite Dirac operator. Yukawa-type couplings and `Omega`
/// are complex; `Delta` and `Gamma` are real.
#[derive(Clone, Debug, PartialEq)]
pub struct DiracParams {
    pub ups_nu: C64,
    pub ups_e: C64,
    pub ups_u: C64,
    pub ups_d: C64,
    pub ups_r: C64,
    pub omega: C64,
    pub delta: f64,
    pub gamma: f64,
}

impl Default for DiracParams {
    fn default() -> Self {
        let z = c(0.0, 0.0);
        Self { ups_nu: z, ups_e: z, ups_u: z, ups_d: z, ups_r: z, omega: z, delta: 0.0, gamma: 0.0 }
    }
}

impl DiracParams {
    /// The coefficient list used by the golden fixtures: `(1, 2, ..., 8)`.
    pub fn sequential() -> Self {
        Self {
            ups_nu: c(1.0, 0.0),
            ups_e: c(2.0, 0.0),
            ups_u: c(3.0, 0.0),
            ups_d: c(4.0, 0.0),
            ups_r: c(5.0, 0.0),
            omega: c(6.0, 0.0),
            delta: 7.0,
            gamma: 8.0,
        }
    }

    /// Hypotheses of the Morita theorems: `Ups_nu, Ups_e, Ups_u, Ups_d, Omega, Delta`
    /// (and `Gamma` if `with_gamma`) nonzero, and `Ups_nu != +-Ups_u` or `Ups_e != +-Ups_d`.
    pub fn theorem_hypotheses(&self, with_gamma: bool) -> bool {
        let nz = |z: C64| z.norm() > 0.0;
        let distinct = |a: C64, b: C64| nz(a - b) && nz(a + b);
        [self.ups_nu, self.ups_e, self.ups_u, self.ups_d, self.omega].iter().all(|&z| nz(z))
            && self.delta != 0.0
            && (!with_gamma || self.gamma != 0.0)
            && (distinct(self.ups_nu, self.ups_u) || distinct(self.ups_e, self.ups_d))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum DiracKind {
    Cc,
    CcPlusGamma,
    Zero,
    Custom(Operator),
}

fn e8(i: usize, j: usize, z: C64) -> DMatrix<C64> {
    unit(8, i, j) * z
}

/// Lepton block (acting on column 1) and quark block (columns 2-4) of `D0`.
fn blocks(p: &DiracParams) -> (DMatrix<C64>, DMatrix<C64>) {
    let d = c(p.delta, 0.0);
    let delta = e8(5, 6, d) + e8(6, 5, d);
    let lepton = e8(1, 3, p.ups_nu.conj())
        + e8(3, 1, p.ups_nu)
        + e8(2, 4, p.ups_e.conj())
        + e8(4, 2, p.ups_e)
        + e8(2, 5, p.omega.conj())
        + e8(5, 2, p.omega)
        + &delta;
    let quark = e8(1, 3, p.ups_u.conj())
        + e8(3, 1, p.ups_u)
        + e8(2, 4, p.ups_d.conj())
        + e8(4, 2, p.ups_d)
        + delta;
    (lepton, quark)
}

/// `D0 = M_l (x) e_11 + M_q (x) (1 - e_11)`, plus `Gamma (e_57 + e_75) (x) e_22` when asked.
pub fn build_d0(p: &DiracParams, with_gamma: bool) -> Operator {
    let (lepton, quark) = blocks(p);
    let e11 = unit(4, 1, 1);
    let mut d0 = kron_action(&lepton, &e11).unwrap() + kron_action(&quark, &(identity(4) - &e11)).unwrap();
    if with_gamma {
        let g = c(p.gamma, 0.0);
        d0 = d0 + kron_action(&(e8(5, 7, g) + e8(7, 5, g)), &unit(4, 2, 2)).unwrap();
    }
    d0
}

/// `D_R = (Ups_R e_51 + conj(Ups_R) e_15) (x) e_11`.
pub fn build_dr(ups_r: C64) -> Operator {
    kron_action(&(e8(5, 1, ups_r) + e8(1, 5, ups_r.conj())), &unit(4, 1, 1)).unwrap()
}

/// `D_F` together with the `D0` it was assembled from (absent for custom / zero).
pub fn build_dirac_parts(kind: &DiracKind, p: &DiracParams, j: &AntilinearOperator) -> (Operator, Option<Operator>) {
    match kind {
        DiracKind::Zero => (Operator::zeros(32), None),
        DiracKind::Custom(d) => (d.clone(), None),
        DiracKind::Cc | DiracKind::CcPlusGamma => {
            let d0 = build_d0(p, matches!(kind, DiracKind::CcPlusGamma));
            let d = &(&d0 + &j.conjugate(&d0)) + &build_dr(p.ups_r);
            (d, Some(d0))
        }
    }
}

pub fn build_dirac(kind: &DiracKind, p: &DiracParams, j: &AntilinearOperator) -> Operator {
    build_dirac_parts(kind, p, j).0
}
