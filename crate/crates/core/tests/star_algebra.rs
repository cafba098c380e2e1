mod common;

use common::*;
use finite_triple::algebra::{center, closure_by_products, star_closure, unitalize, StarAlgebra};
use finite_triple::linalg::{c, identity, unit, Operator, C64};
use finite_triple::subspace::{Field, OperatorSubspace};
use finite_triple::Error;
use nalgebra::{DMatrix, DVector};

const TOL: f64 = 1e-9;

fn op(m: DMatrix<C64>) -> Operator {
    Operator::new(m).unwrap()
}

fn conj_by(u: &DMatrix<C64>, x: DMatrix<C64>) -> Operator {
    op(u * x * u.adjoint())
}

#[test]
fn normal_matrix_generates_its_spectral_projections() {
    let mut r = rng(1);
    let u = random_unitary(&mut r, 4);
    // eigenvalues 2, 2, -1, 0: two nonzero spectral projections
    let d = DMatrix::from_diagonal(&DVector::from_vec(vec![c(2.0, 0.0), c(2.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)]));
    let a = star_closure(4, &[conj_by(&u, d)], TOL).unwrap();
    assert_eq!(a.dim(), 2);
    assert!(!a.is_unital());
    let p = conj_by(&u, unit(4, 1, 1) + unit(4, 2, 2));
    assert!(a.contains(&p));
    assert_eq!(unitalize(&a).unwrap().dim(), 3);
}

#[test]
fn single_matrix_unit_generates_a_corner() {
    let a = star_closure(3, &[op(unit(3, 1, 2))], TOL).unwrap();
    assert_eq!(a.dim(), 4);
    assert!(a.contains(&op(unit(3, 2, 2))));
    assert!(!a.contains(&op(unit(3, 3, 3))));
    let products = closure_by_products(3, &[op(unit(3, 1, 2))], TOL).unwrap();
    assert!(products.space().equals(a.space()).unwrap());
    assert!(a.closure_defect() < 1e-12);
}

#[test]
fn two_generic_elements_generate_the_full_matrix_algebra() {
    let mut r = rng(2);
    let gens = [random_operator(&mut r, 4), random_operator(&mut r, 4)];
    let a = star_closure(4, &gens, TOL).unwrap();
    assert_eq!(a.dim(), 16);
    assert!(a.is_unital());
    assert_eq!(center(&a).unwrap().dim(), 1);
}

#[test]
fn block_algebra_center_counts_summands() {
    let mut r = rng(3);
    let u = random_unitary(&mut r, 5);
    // M_2 (x) 1_2 + M_1 on C^5
    let mut gens = Vec::new();
    for i in 1..=2 {
        for j in 1..=2 {
            let mut x = DMatrix::zeros(5, 5);
            x.view_mut((0, 0), (4, 4)).copy_from(&unit(2, i, j).kronecker(&identity(2)));
            gens.push(conj_by(&u, x));
        }
    }
    gens.push(conj_by(&u, unit(5, 5, 5)));
    let a = star_closure(5, &gens, TOL).unwrap();
    assert_eq!(a.dim(), 5);
    assert!(a.is_unital());
    assert_eq!(center(&a).unwrap().dim(), 2);
    assert_eq!(a.commutant().dim(), 4 + 1);
}

#[test]
fn from_space_requires_complex_field() {
    let real = OperatorSubspace::full(2, Field::Real, TOL);
    assert!(matches!(StarAlgebra::from_space(real), Err(Error::FieldMismatch)));
    let full = StarAlgebra::from_space(OperatorSubspace::full(2, Field::Complex, TOL)).unwrap();
    assert!(full.is_unital());
    assert_eq!(full.basis().len(), 4);
}

#[test]
fn zero_generators_give_zero_algebra() {
    let a = star_closure(3, &[Operator::zeros(3)], TOL).unwrap();
    assert_eq!(a.dim(), 0);
    assert_eq!(unitalize(&a).unwrap().dim(), 1);
}

#[test]
fn closure_contains_adjoints_and_products() {
    let mut r = rng(4);
    let n = 4;
    let nil = op(DMatrix::from_fn(n, n, |i, j| if j == i + 1 { gaussian_c(&mut r) } else { c(0.0, 0.0) }));
    let a = star_closure(n, std::slice::from_ref(&nil), TOL).unwrap();
    assert!(a.contains(&nil.adjoint()));
    assert!(a.contains(&(&nil * &nil.adjoint())));
    // a weighted shift with nonzero weights is irreducible
    assert_eq!(a.dim(), 16);
}
