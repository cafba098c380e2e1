//! Concrete Standard Model data: algebras, real structure, gradings, Dirac operators,
//! gauge actions and named witness operators.

pub mod algebras;
pub mod dirac;
pub mod gauge;
pub mod layout;
pub mod structures;
pub mod witnesses;

pub use algebras::{build_algebra_aev, build_algebra_af, build_algebra_bf, opposite_gens};
pub use dirac::{build_d0, build_dirac, build_dirac_parts, build_dr, DiracKind, DiracParams};
pub use gauge::{
    hypercharge_table, phase_exponents, phi, pi_sm, pi_sm_direct, rho_degenerate, unimodular, z6_element, GroupElement,
};
pub use structures::{build_grading, build_jf, GradingKind};
pub use witnesses::{
    lepton_projection, one_form_generators, witness_catalog, x_color_mixing, x_majorana, x_quark_antilepton,
};
