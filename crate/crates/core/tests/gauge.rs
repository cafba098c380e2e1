mod common;

use common::*;
use finite_triple::catalog::gauge::{phase_exponents, unimodular, unitarity_residual};
use finite_triple::catalog::{build_jf, phi, pi_sm, pi_sm_direct, rho_degenerate, z6_element, GroupElement};
use finite_triple::linalg::{c, Operator};

fn random_element(r: &mut rand_chacha::ChaCha8Rng) -> GroupElement {
    GroupElement::new(random_phase(r), random_special_unitary(r, 2), random_special_unitary(r, 3)).unwrap()
}

#[test]
fn factorized_pi_sm_matches_two_summand_form() {
    let j = build_jf();
    let mut r = rng(11);
    for _ in 0..20 {
        let g = random_element(&mut r);
        let a = pi_sm(&g, &j).unwrap();
        let b = pi_sm_direct(&g).unwrap();
        assert!((&a - &b).hs_norm() < 1e-12);
        assert!(unitarity_residual(&a) < 1e-12);
    }
}

#[test]
fn z6_lies_in_the_kernel() {
    let j = build_jf();
    for k in 0..6 {
        let u = pi_sm(&z6_element(k), &j).unwrap();
        assert!((&u - &Operator::identity(32)).hs_norm() < 1e-12, "mu^{k}");
    }
}

#[test]
fn hypercharges_from_eigenphases() {
    let j = build_jf();
    let mut r = rng(12);
    for _ in 0..10 {
        let lambda = random_phase(&mut r);
        let u = pi_sm(&GroupElement::phase(lambda).unwrap(), &j).unwrap();
        let exps = phase_exponents(&u, lambda, 1e-9).expect("diagonal with integer exponents");
        for col in 0..4 {
            for row in 0..8 {
                assert_eq!(exps[row + 8 * col], hypercharge_oracle(row, col), "slot ({row}, {col})");
            }
        }
    }
}

#[test]
fn layout_table_agrees_with_oracle() {
    let table = finite_triple::catalog::gauge::hypercharge_table();
    for col in 0..4 {
        for row in 0..8 {
            assert_eq!(table[row + 8 * col], hypercharge_oracle(row, col));
        }
    }
}

#[test]
fn rho_is_a_unitary_representation() {
    let j = build_jf();
    let mut r = rng(13);
    for _ in 0..20 {
        let u = GroupElement::new(random_phase(&mut r), random_unitary(&mut r, 2), random_unitary(&mut r, 3)).unwrap();
        let v = GroupElement::new(random_phase(&mut r), random_unitary(&mut r, 2), random_unitary(&mut r, 3)).unwrap();
        let ru = rho_degenerate(&u, &j);
        let rv = rho_degenerate(&v, &j);
        assert!((&(&ru * &rv) - &rho_degenerate(&u.mul(&v), &j)).hs_norm() < 1e-12);
        assert!((&(&ru * &rho_degenerate(&u.inverse(), &j)) - &Operator::identity(32)).hs_norm() < 1e-12);
        assert!(unitarity_residual(&ru) < 1e-12);
    }
}

#[test]
fn rho_after_phi_is_pi_sm() {
    let j = build_jf();
    let mut r = rng(14);
    for _ in 0..10 {
        let g = random_element(&mut r);
        let lhs = rho_degenerate(&phi(&g), &j);
        assert!((&lhs - &pi_sm(&g, &j).unwrap()).hs_norm() < 1e-12);
    }
    for k in 0..6 {
        let lhs = rho_degenerate(&phi(&z6_element(k)), &j);
        assert!((&lhs - &Operator::identity(32)).hs_norm() < 1e-12);
    }
}

#[test]
fn unimodular_subgroup_is_s_u2_u3() {
    let mut r = rng(15);
    for _ in 0..10 {
        let q = random_unitary(&mut r, 2);
        let lambda = q.determinant().conj();
        let mut m = random_unitary(&mut r, 3);
        // fix det m = conj(lambda)
        let d = m.determinant();
        m *= finite_triple::linalg::C64::from_polar(1.0, (lambda.conj().arg() - d.arg()) / 3.0);
        let u = GroupElement::new(lambda, q.clone(), m.clone()).unwrap();
        assert!(unimodular(&u, 1e-10));
        // [q, conj(m)] has unit determinant
        assert!((q.determinant() * m.determinant().conj() - c(1.0, 0.0)).norm() < 1e-10);
    }
    assert!(!unimodular(&GroupElement::phase(c(0.0, 1.0)).unwrap(), 1e-10));
}
