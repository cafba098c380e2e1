mod common;

use common::*;
use finite_triple::algebra::{star_closure, unitalize};
use finite_triple::catalog::witnesses::{eta, omega_e, omega_nu, xi, zeta};
use finite_triple::catalog::*;
use finite_triple::linalg::{c, identity, kron_action, unit, Operator, C64, DEFAULT_TOL};
use finite_triple::subspace::{commutant, Field, OperatorSubspace};
use nalgebra::{DMatrix, DVector};
use serde_json::Value;

fn fixture(name: &str) -> Value {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn entries_matrix(v: &Value) -> DMatrix<C64> {
    let mut m = DMatrix::zeros(32, 32);
    for e in v["entries"].as_array().unwrap() {
        let e = e.as_array().unwrap();
        let (i, j) = (e[0].as_u64().unwrap() as usize - 1, e[1].as_u64().unwrap() as usize - 1);
        m[(i, j)] = c(e[2].as_f64().unwrap(), e[3].as_f64().unwrap());
    }
    m
}

fn diagonal(v: &Value) -> Vec<f64> {
    v["diagonal"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

fn span(gens: &[Operator]) -> OperatorSubspace {
    OperatorSubspace::span_of(32, gens, Field::Complex, DEFAULT_TOL).unwrap()
}

fn e8(i: usize, j: usize) -> DMatrix<C64> {
    unit(8, i, j)
}

fn e4(i: usize, j: usize) -> DMatrix<C64> {
    unit(4, i, j)
}

#[test]
fn jf_matches_golden_permutation() {
    let src: Vec<usize> = fixture("jf.json")["source"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap() as usize)
        .collect();
    let j = build_jf();
    for (out, &from) in src.iter().enumerate() {
        for col in 0..32 {
            assert_eq!(j.k()[(out, col)], if col == from { 1.0 } else { 0.0 }, "K[{out}, {col}]");
        }
    }
}

#[test]
fn gradings_match_golden_diagonals() {
    for (kind, name) in [(GradingKind::Standard, "grading_standard.json"), (GradingKind::Nonstandard, "grading_nonstandard.json")] {
        let g = build_grading(kind);
        let want = DMatrix::from_diagonal(&DVector::from_iterator(32, diagonal(&fixture(name)).into_iter().map(|x| c(x, 0.0))));
        assert_eq!(g.matrix(), &want, "{name}");
    }
}

#[test]
fn d0_matches_golden_at_sequential_parameters() {
    let p = DiracParams::sequential();
    assert_eq!(build_d0(&p, false).matrix(), &entries_matrix(&fixture("d0_sequential.json")));
    assert_eq!(build_d0(&p, true).matrix(), &entries_matrix(&fixture("d0_gamma_sequential.json")));
}

#[test]
fn jf_is_an_antiunitary_involution() {
    let j = build_jf();
    assert_eq!(j.square(), Operator::identity(32));
    let mut r = rng(3);
    for _ in 0..5 {
        let v = DVector::from_fn(32, |_, _| gaussian_c(&mut r));
        let w = DVector::from_fn(32, |_, _| gaussian_c(&mut r));
        let lhs = j.apply(&v).dotc(&j.apply(&w));
        assert!((lhs - w.dotc(&v)).norm() < 1e-12);
    }
}

#[test]
fn jf_sends_left_neutrino_to_its_conjugate_slot() {
    // e_31 (row 3, column 1) sits at 0-based vec index 2; J moves it to row 5, column 3.
    let j = build_jf();
    let mut v = DVector::zeros(32);
    v[2] = c(0.0, 1.0);
    let out = j.apply(&v);
    let target = 4 + 8 * 2;
    assert_eq!(out[target], c(0.0, -1.0));
    assert_eq!(out.iter().filter(|z| z.norm() > 0.0).count(), 1);
}

#[test]
fn gradings_are_traceless_even_and_agree_on_leptons() {
    let af = build_algebra_af();
    let s = build_grading(GradingKind::Standard);
    let n = build_grading(GradingKind::Nonstandard);
    let j = build_jf();
    for g in [&s, &n] {
        assert_eq!(g.trace(), c(0.0, 0.0));
        assert!(af.iter().all(|a| g.commutator(a).hs_norm() < 1e-14));
        assert_eq!(j.conjugate(g), g.scale_real(-1.0));
    }
    // vec index i + 8 j: leptons are column 0 of the particle block and row 4 (0-based) of the conjugate block
    for col in 0..4 {
        for row in 0..8 {
            let k = row + 8 * col;
            let lepton = if row < 4 { col == 0 } else { row == 4 };
            let (a, b) = (s.matrix()[(k, k)], n.matrix()[(k, k)]);
            if lepton {
                assert_eq!(a, b, "slot ({row}, {col})");
            } else {
                assert_eq!(a, -b, "slot ({row}, {col})");
            }
        }
    }
}

/// Block form of `C_F`: basis of the commutant of the 8x8 part of `A_F`.
fn cf_basis() -> Vec<DMatrix<C64>> {
    // slots 1 and 5 both carry lambda (free 2x2 block q), slot 2 carries conj(lambda),
    // 3-4 the quaternion and 6-8 the colour matrix
    let mut out = vec![e8(1, 1), e8(1, 5), e8(5, 1), e8(5, 5), e8(2, 2), e8(3, 3) + e8(4, 4)];
    out.push(e8(6, 6) + e8(7, 7) + e8(8, 8));
    out
}

#[test]
fn af_commutant_is_cf_tensor_m4() {
    let oracle: Vec<Operator> = cf_basis()
        .iter()
        .flat_map(|x| (1..=4).flat_map(move |i| (1..=4).map(move |j| kron_action(x, &e4(i, j)).unwrap())))
        .collect();
    let oracle = span(&oracle);
    assert_eq!(oracle.dim(), 7 * 16);
    let solver = commutant(32, &build_algebra_af(), Field::Complex, DEFAULT_TOL).unwrap();
    assert!(solver.equals(&oracle).unwrap());
}

#[test]
fn opposite_commutant_has_block_form() {
    let mut gens = Vec::new();
    let blocks = |top: bool| -> Vec<DMatrix<C64>> {
        let off = if top { 0 } else { 4 };
        (1..=4).flat_map(|i| (1..=4).map(move |j| e8(i + off, j + off))).collect()
    };
    for i in 1..=8 {
        for j in 1..=8 {
            gens.push(kron_action(&e8(i, j), &e4(1, 1)).unwrap());
        }
    }
    let rest = e4(3, 3) + e4(4, 4);
    for b in blocks(true) {
        gens.push(kron_action(&b, &e4(2, 2)).unwrap() + kron_action(&b, &rest).unwrap());
    }
    for c in blocks(false) {
        gens.push(kron_action(&c, &e4(2, 2)).unwrap());
        gens.push(kron_action(&c, &rest).unwrap());
    }
    let oracle = span(&gens);
    assert_eq!(oracle.dim(), 64 + 16 + 16 + 16);
    let opp = opposite_gens(&build_jf(), &build_algebra_af());
    let solver = commutant(32, &opp, Field::Complex, DEFAULT_TOL).unwrap();
    assert!(solver.equals(&oracle).unwrap());
}

#[test]
fn aev_commutant_has_three_free_m4_factors() {
    let blocks = [e8(1, 1) + e8(2, 2), e8(3, 3) + e8(4, 4), e8(5, 5) + e8(6, 6) + e8(7, 7) + e8(8, 8)];
    let oracle: Vec<Operator> = blocks
        .iter()
        .flat_map(|x| (1..=4).flat_map(move |i| (1..=4).map(move |j| kron_action(x, &e4(i, j)).unwrap())))
        .collect();
    let solver = commutant(32, &build_algebra_aev(), Field::Complex, DEFAULT_TOL).unwrap();
    assert_eq!(solver.dim(), 48);
    assert!(solver.equals(&span(&oracle)).unwrap());
}

#[test]
fn algebra_spans_and_memberships() {
    let af = span(&build_algebra_af());
    assert_eq!(af.dim(), 1 + 4 + 9 + 1); // lambda, conj(lambda) slots are independent over C
    assert_eq!(build_algebra_af().len(), 24);
    let bf = span(&build_algebra_bf());
    assert_eq!(bf.dim(), 1 + 4 + 9);
    assert!(!bf.contains(&Operator::identity(32)));
    let aev = span(&build_algebra_aev());
    assert!(aev.contains(&Operator::identity(32)));
    // the lambda-bar slot is the lower corner of the first quaternion block, so A_F embeds
    assert!(aev.contains_space(&af).unwrap());
    assert!(af.contains(&Operator::identity(32)));
}

#[test]
fn bf_unitalization_is_af() {
    let bf = star_closure(32, &build_algebra_bf(), DEFAULT_TOL).unwrap();
    assert_eq!(bf.dim(), 14);
    let u = unitalize(&bf).unwrap();
    assert_eq!(u.dim(), 15);
    assert!(u.space().equals(&span(&build_algebra_af())).unwrap());
    let j = build_jf();
    let bf_gens = build_algebra_bf();
    let opp = opposite_gens(&j, &bf_gens);
    let worst = bf_gens
        .iter()
        .flat_map(|a| opp.iter().map(move |b| a.commutator(b).hs_norm()))
        .fold(0.0, f64::max);
    assert!(worst < 1e-14);
}

#[test]
fn dirac_family_grading_behaviour() {
    let j = build_jf();
    let s = build_grading(GradingKind::Standard);
    let n = build_grading(GradingKind::Nonstandard);
    let mut r = rng(21);
    let mut p = theorem_params(&mut r);
    assert_eq!(build_dirac(&DiracKind::Zero, &p, &j), Operator::zeros(32));
    let d_tilde = build_dirac(&DiracKind::CcPlusGamma, &p, &j);
    assert!(d_tilde.anticommutator(&n).hs_norm() < 1e-12);
    assert!(d_tilde.anticommutator(&s).hs_norm() > 0.1);
    p.omega = c(0.0, 0.0);
    p.delta = 0.0;
    let d = build_dirac(&DiracKind::Cc, &p, &j);
    assert!(d.is_hermitian(1e-14));
    for g in [&s, &n] {
        assert!(d.anticommutator(g).hs_norm() < 1e-12);
    }
}

#[test]
fn dr_sits_in_both_commutants_and_commutes_with_j() {
    let j = build_jf();
    let dr = build_dr(c(0.4, -1.3));
    let af = build_algebra_af();
    let opp = opposite_gens(&j, &af);
    assert!(af.iter().chain(&opp).all(|a| dr.commutator(a).hs_norm() < 1e-14));
    assert!(j.commutation_residual(&dr, 1.0) < 1e-14);
}

fn x(i: usize, j: usize) -> Operator {
    kron_action(&e8(i, j), &identity(4)).unwrap()
}

#[test]
fn one_form_generators_come_from_commutators() {
    let j = build_jf();
    let mut r = rng(5);
    for _ in 0..3 {
        let p = theorem_params(&mut r);
        let d = build_dirac(&DiracKind::Cc, &p, &j);
        let close = |a: &Operator, b: &Operator| (a - b).hs_norm() < 1e-12;
        let x33 = x(3, 3);
        assert!(close(&(&x33 * &d.commutator(&x33)).scale_real(-1.0), &omega_nu(&p)));
        let x44 = x(4, 4);
        assert!(close(&(&x44 * &d.commutator(&x44)).scale_real(-1.0), &omega_e(&p)));
        let y = x(2, 2);
        assert!(close(&(&d.commutator(&y) * &y), &(&omega_e(&p) + &xi().scale(p.omega))));
        let z66 = x(6, 6);
        assert!(close(&(&d.commutator(&z66) * &z66), &eta().scale_real(p.delta)));
        let t = &x(1, 1) + &x(5, 5);
        let want = &(&omega_nu(&p).adjoint() + &xi().scale(p.omega)) + &eta().scale_real(p.delta);
        assert!(close(&(&t * &d.commutator(&t)).scale_real(-1.0), &want));

        let dg = build_dirac(&DiracKind::CcPlusGamma, &p, &j);
        let z77 = x(7, 7);
        assert!(close(&(&dg.commutator(&z77) * &z77), &zeta().scale_real(p.gamma)));
    }
}

#[test]
fn omega_nu_at_sample_values() {
    let p = DiracParams { ups_nu: c(1.0, 0.0), ups_u: c(2.0, 0.0), ..Default::default() };
    let want = kron_action(&e8(3, 1), &(e4(1, 1) + (identity(4) - e4(1, 1)) * c(2.0, 0.0))).unwrap();
    assert_eq!(omega_nu(&p), want);
}

#[test]
fn lepton_projection_commutes_with_original_data() {
    let j = build_jf();
    let mut r = rng(8);
    let mut p = theorem_params(&mut r);
    p.omega = c(0.0, 0.0);
    p.delta = 0.0;
    let d = build_dirac(&DiracKind::Cc, &p, &j);
    let lp = lepton_projection();
    assert_eq!(&lp * &lp, lp);
    assert!(d.commutator(&lp).hs_norm() < 1e-12);
    assert!(build_algebra_af().iter().all(|a| a.commutator(&lp).hs_norm() < 1e-14));
    assert!(j.commutation_residual(&lp, 1.0) < 1e-14);
}
