//! Named operators used as counterexamples, obstructions and one-form generators.

use crate::catalog::dirac::DiracParams;
use crate::linalg::{eu, identity, kron_action, unit, Operator, C64};

fn e4(i: usize, j: usize) -> nalgebra::DMatrix<C64> {
    unit(4, i, j)
}

fn one_minus_e11() -> nalgebra::DMatrix<C64> {
    identity(4) - e4(1, 1)
}

/// `e_55 (x) (1 - e_11)`: breaks property (M) when `Omega` or `Delta` vanishes.
pub fn x_quark_antilepton() -> Operator {
    kron_action(&unit(8, 5, 5), &one_minus_e11()).unwrap()
}

/// `e_55 (x) e_23`: commutes with `A_F` and `D0`, anticommutes with the standard grading.
pub fn x_color_mixing() -> Operator {
    eu(5, 5, &e4(2, 3))
}

/// `e_15 (x) e_11`: in `A_F' cap (A_F°)'`, anticommutes with both gradings.
pub fn x_majorana() -> Operator {
    eu(1, 5, &e4(1, 1))
}

/// Projection onto the lepton sector: `(sum_{i<=4} e_ii) (x) e_11 + e_55 (x) 1`.
pub fn lepton_projection() -> Operator {
    let top: nalgebra::DMatrix<C64> = (1..=4).map(|i| unit(8, i, i)).fold(nalgebra::DMatrix::zeros(8, 8), |a, b| a + b);
    kron_action(&top, &e4(1, 1)).unwrap() + kron_action(&unit(8, 5, 5), &identity(4)).unwrap()
}

/// `omega_nu = e_31 (x) (Ups_nu e_11 + Ups_u (1 - e_11))`.
pub fn omega_nu(p: &DiracParams) -> Operator {
    kron_action(&unit(8, 3, 1), &(e4(1, 1) * p.ups_nu + one_minus_e11() * p.ups_u)).unwrap()
}

/// `omega_e = e_42 (x) (Ups_e e_11 + Ups_d (1 - e_11))`.
pub fn omega_e(p: &DiracParams) -> Operator {
    kron_action(&unit(8, 4, 2), &(e4(1, 1) * p.ups_e + one_minus_e11() * p.ups_d)).unwrap()
}

/// `xi = e_52 (x) e_11`.
pub fn xi() -> Operator {
    eu(5, 2, &e4(1, 1))
}

/// `eta = e_56 (x) 1`.
pub fn eta() -> Operator {
    eu(5, 6, &identity(4))
}

/// `zeta = e_57 (x) e_22`.
pub fn zeta() -> Operator {
    eu(5, 7, &e4(2, 2))
}

/// Generators of `Omega^1` as an `A`-bimodule (before adding adjoints).
pub fn one_form_generators(p: &DiracParams, with_gamma: bool) -> Vec<Operator> {
    let mut out = vec![omega_nu(p), omega_e(p), xi(), eta()];
    if with_gamma {
        out.push(zeta());
    }
    out
}

/// Every named operator, in a fixed order.
pub fn witness_catalog(p: &DiracParams) -> Vec<(&'static str, Operator)> {
    vec![
        ("x_quark_antilepton", x_quark_antilepton()),
        ("x_color_mixing", x_color_mixing()),
        ("x_majorana", x_majorana()),
        ("lepton_projection", lepton_projection()),
        ("omega_nu", omega_nu(p)),
        ("omega_e", omega_e(p)),
        ("xi", xi()),
        ("eta", eta()),
        ("zeta", zeta()),
    ]
}
