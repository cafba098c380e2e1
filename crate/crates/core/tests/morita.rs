mod common;

use common::*;
use finite_triple::catalog::*;
use finite_triple::linalg::{c, identity, kron_action, unit, Operator, C64, DEFAULT_TOL};
use finite_triple::morita::*;
use finite_triple::triple::FiniteTriple;
use finite_triple::Error;
use nalgebra::DMatrix;

fn af_triple(kind: DiracKind, grading: Option<GradingKind>, p: &DiracParams) -> FiniteTriple {
    let j = build_jf();
    let (d, d0) = build_dirac_parts(&kind, p, &j);
    let t = FiniteTriple::new(build_algebra_af(), d, j, grading.map(build_grading), DEFAULT_TOL).unwrap();
    match d0 {
        Some(d0) => t.with_d0(d0).unwrap(),
        None => t,
    }
}

fn draw(seed: u64) -> DiracParams {
    theorem_params(&mut rng(seed))
}

#[test]
fn one_form_dimensions() {
    let p = draw(1);
    assert_eq!(one_forms(&af_triple(DiracKind::Cc, None, &p)).dim(), 16);
    assert_eq!(one_forms(&af_triple(DiracKind::CcPlusGamma, None, &p)).dim(), 22);
    assert_eq!(one_forms(&af_triple(DiracKind::Zero, None, &p)).dim(), 0);
}

#[test]
fn one_forms_are_adjoint_closed_bimodule() {
    let t = af_triple(DiracKind::Cc, None, &draw(2));
    let omega = one_forms(&t);
    assert!(omega.is_adjoint_closed());
    for a in t.algebra().iter().take(6) {
        for w in omega.basis().iter().take(5) {
            assert!(omega.contains(&(a * w)));
            assert!(omega.contains(&(w * a)));
        }
    }
}

#[test]
fn clifford_dimensions_match_reference_runs() {
    let p = draw(3);
    let t1 = af_triple(DiracKind::Cc, Some(GradingKind::Nonstandard), &p);
    assert_eq!(clifford(&t1, false).unwrap().dim(), 96);
    assert_eq!(clifford(&t1, true).unwrap().dim(), 112);
    let t2 = af_triple(DiracKind::CcPlusGamma, Some(GradingKind::Nonstandard), &p);
    assert_eq!(clifford(&t2, false).unwrap().dim(), 112);
    // Cl_e is the commutant of (A°)_C, which is 112-dimensional
    let comm = clifford_commutant(&t2, true).unwrap();
    assert_eq!(comm.dim(), 15);
}

#[test]
fn property_m_preconditions() {
    let j = build_jf();
    let d = build_dirac(&DiracKind::Cc, &draw(4), &j);
    let ps = FiniteTriple::new(build_algebra_aev(), d, j, Some(build_grading(GradingKind::Standard)), DEFAULT_TOL).unwrap();
    assert!(matches!(property_m(&ps, false), Err(Error::OrderConditionsViolated { .. })));
    let odd = af_triple(DiracKind::Cc, None, &draw(4));
    assert_eq!(property_m(&odd, true).unwrap_err(), Error::GradingRequired);
    let v = property_m(&odd, false).unwrap();
    assert!(v.gamma_in_clifford_odd.is_none() && v.clifford_even_dim.is_none());
}

#[test]
fn original_data_fails_property_m_with_witness_outside_opposite() {
    let p = DiracParams { omega: c(0.0, 0.0), delta: 0.0, ..draw(5) };
    let t = af_triple(DiracKind::Cc, Some(GradingKind::Standard), &p);
    let v = property_m(&t, true).unwrap();
    assert_eq!(v.property_m_with_grading, Some(false));
    let w = v.witness.unwrap();
    let cl = clifford(&t, true).unwrap();
    assert!(cl.basis().iter().all(|b| w.commutator(b).hs_norm() < 1e-10));
    // the named counterexample also commutes with everything relevant
    let x = x_quark_antilepton();
    assert!(cl.basis().iter().all(|b| x.commutator(b).hs_norm() < 1e-10));
}

#[test]
fn standard_grading_obstruction_for_original_data() {
    let p = DiracParams { omega: c(0.0, 0.0), delta: 0.0, ..draw(6) };
    let t = af_triple(DiracKind::Cc, Some(GradingKind::Standard), &p);
    let ob = obstruction_check(&x_color_mixing(), &t, ObstructionMode::AlgebraD0).unwrap();
    assert!(ob.holds, "{ob:?}");
    // hence the standard grading is not in Cl_o
    assert!(!clifford(&t, false).unwrap().contains(t.gamma().unwrap()));
}

#[test]
fn majorana_obstruction_for_both_gradings() {
    let p = draw(7);
    for g in [GradingKind::Standard, GradingKind::Nonstandard] {
        let t = af_triple(DiracKind::CcPlusGamma, Some(g), &p);
        let ob = obstruction_check(&x_majorana(), &t, ObstructionMode::ZeroChain).unwrap();
        assert!(ob.holds, "{g:?}: {ob:?}");
        assert!(ob.anticommutator < 1e-12);
    }
}

#[test]
fn gamma_term_breaks_color_mixing_obstruction() {
    let t = af_triple(DiracKind::CcPlusGamma, Some(GradingKind::Nonstandard), &draw(8));
    let ob = obstruction_check(&x_color_mixing(), &t, ObstructionMode::AlgebraD0).unwrap();
    assert!(!ob.holds);
    assert!(ob.commutator > 0.01);
    let none = af_triple(DiracKind::Cc, None, &draw(8));
    assert_eq!(obstruction_check(&x_color_mixing(), &none, ObstructionMode::AlgebraD0).unwrap_err(), Error::GradingRequired);
}

#[test]
fn irreducibility_of_theorem_triples() {
    let p = draw(9);
    for kind in [DiracKind::Cc, DiracKind::CcPlusGamma] {
        let ir = irreducible(&af_triple(kind, Some(GradingKind::Nonstandard), &p)).unwrap();
        assert_eq!(ir.real_dim, 1);
        assert!(ir.irreducible && ir.witness.is_none());
    }
}

#[test]
fn zero_delta_splits_off_leptons() {
    let p = DiracParams { delta: 0.0, ..draw(10) };
    let ir = irreducible(&af_triple(DiracKind::Cc, Some(GradingKind::Nonstandard), &p)).unwrap();
    assert!(!ir.irreducible);
    let w = ir.witness.unwrap();
    assert!((&(&w * &w) - &w).hs_norm() < 1e-10);
    let lp = lepton_projection();
    let one = Operator::identity(32);
    let close = |x: &Operator| (&w - x).hs_norm() < 1e-9;
    assert!(close(&lp) || close(&(&one - &lp)), "witness is neither lepton projection nor its complement");
}

fn e8(i: usize, j: usize) -> DMatrix<C64> {
    unit(8, i, j)
}

/// `(e11 + e22) (x) 1 + (e55 + ... + e88) (x) diag(1, 1, 0, 0)`.
fn pati_salam_projection() -> Operator {
    let top = e8(1, 1) + e8(2, 2);
    let bottom = (5..=8).map(|i| e8(i, i)).fold(DMatrix::zeros(8, 8), |a, b| a + b);
    let d = unit(4, 1, 1) + unit(4, 2, 2);
    &kron_action(&top, &identity(4)).unwrap() + &kron_action(&bottom, &d).unwrap()
}

#[test]
fn pati_salam_algebra_and_j_admit_a_projection() {
    let p = pati_salam_projection();
    assert_eq!(&p * &p, p);
    assert_eq!(p.adjoint(), p);
    assert_eq!(p.trace(), c(16.0, 0.0));
    assert!(build_algebra_aev().iter().all(|a| a.commutator(&p).hs_norm() == 0.0));
    let j = build_jf();
    assert!(j.commutation_residual(&p, 1.0) == 0.0);
    assert!(build_grading(GradingKind::Standard).commutator(&p).hs_norm() == 0.0);

    let t = FiniteTriple::new(build_algebra_aev(), Operator::zeros(32), j, None, DEFAULT_TOL).unwrap();
    let ir = irreducible(&t).unwrap();
    assert!(!ir.irreducible);
    assert!(ir.hermitian_dim >= 2);
    assert!(ir.witness.is_some());
}

#[test]
fn weak_orientability() {
    let s = build_grading(GradingKind::Standard);
    assert!(weak_orientability_aev(&s, DEFAULT_TOL).unwrap());
    let j = build_jf();
    let n = build_grading(GradingKind::Nonstandard);
    for g in [&s, &n] {
        assert!(!in_algebra_plus_conjugate(&build_algebra_af(), &j, g, DEFAULT_TOL).unwrap());
    }
}

#[test]
fn bimodule_of_identity_is_the_unital_algebra_product() {
    let t = af_triple(DiracKind::Zero, None, &DiracParams::default());
    let b = bimodule_generated(&t, &[Operator::identity(32)]);
    assert_eq!(b.dim(), 15);
}
