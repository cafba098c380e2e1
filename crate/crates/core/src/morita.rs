//! One-forms, Clifford algebras, property (M), orientability obstructions, irreducibility.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{star_closure, StarAlgebra};
use crate::catalog::{build_algebra_aev, build_jf};
use crate::error::{Error, Result};
use crate::linalg::{eigen_clusters, sorted_hermitian_eigen, AntilinearOperator, Operator, C64};
use crate::subspace::{commutant, Field, OperatorSubspace};
use crate::triple::FiniteTriple;

fn complex_span(n: usize, gens: &[Operator], tol: f64) -> OperatorSubspace {
    OperatorSubspace::span_of(n, gens, Field::Complex, tol).expect("generators live on the triple's space")
}

/// Complex basis of `A + C 1`.
fn unital_basis(t: &FiniteTriple) -> Vec<Operator> {
    let n = t.dim();
    let mut gens = t.algebra().to_vec();
    gens.push(Operator::identity(n));
    complex_span(n, &gens, t.tol()).basis()
}

/// `Omega^1 = span{a [D, b]}` over the complex span of the algebra.
pub fn one_forms(t: &FiniteTriple) -> OperatorSubspace {
    let n = t.dim();
    let basis = complex_span(n, t.algebra(), t.tol()).basis();
    let d = t.dirac();
    let mut forms = Vec::with_capacity(basis.len() * basis.len());
    for b in &basis {
        let db = d.commutator(b);
        if db.hs_norm() == 0.0 {
            continue;
        }
        for a in &basis {
            forms.push(a * &db);
        }
    }
    complex_span(n, &forms, t.tol())
}

/// The `A`-bimodule generated by `gens` and their adjoints: `span{a w b}`, `a, b in A + C 1`.
pub fn bimodule_generated(t: &FiniteTriple, gens: &[Operator]) -> OperatorSubspace {
    let basis = unital_basis(t);
    let mut out = Vec::new();
    for w in gens.iter().flat_map(|g| [g.clone(), g.adjoint()]) {
        for a in &basis {
            let aw = a * &w;
            for b in &basis {
                out.push(&aw * b);
            }
        }
    }
    complex_span(t.dim(), &out, t.tol())
}

fn clifford_generators(t: &FiniteTriple, even: bool) -> Result<Vec<Operator>> {
    let mut gens = t.algebra().to_vec();
    gens.extend(one_forms(t).basis());
    if even {
        gens.push(t.gamma().ok_or(Error::GradingRequired)?.clone());
    }
    Ok(gens)
}

/// `Cl(A)_o` (or `Cl(A)_e` with `even`): the *-algebra generated by `A`, `Omega^1` (and `gamma`).
pub fn clifford(t: &FiniteTriple, even: bool) -> Result<StarAlgebra> {
    star_closure(t.dim(), &clifford_generators(t, even)?, t.tol())
}

/// Commutant of the Clifford algebra, computed from its generators and their adjoints.
pub fn clifford_commutant(t: &FiniteTriple, even: bool) -> Result<OperatorSubspace> {
    let gens: Vec<Operator> = clifford_generators(t, even)?
        .into_iter()
        .flat_map(|g| [g.adjoint(), g])
        .collect();
    commutant(t.dim(), &gens, Field::Complex, t.tol())
}

#[derive(Clone, Debug)]
pub struct MoritaVerdict {
    pub clifford_odd_dim: usize,
    pub clifford_even_dim: Option<usize>,
    pub commutant_odd_dim: usize,
    pub commutant_even_dim: Option<usize>,
    /// `dim (A°)_C`.
    pub opposite_dim: usize,
    pub property_m: bool,
    pub property_m_with_grading: Option<bool>,
    /// `gamma in Cl(A)_o`, when a grading is present.
    pub gamma_in_clifford_odd: Option<bool>,
    /// Unit-norm element of the relevant commutant orthogonal to `(A°)_C`.
    pub witness: Option<Operator>,
}

/// Unit vector of `comm` orthogonal to `opp`, from the basis element farthest from `opp`.
fn witness_outside(comm: &OperatorSubspace, opp: &OperatorSubspace) -> Option<Operator> {
    comm.basis()
        .into_iter()
        .map(|x| &x - &opp.project(&x))
        .max_by(|a, b| a.hs_norm().total_cmp(&b.hs_norm()))
        .and_then(|r| r.normalized())
}

/// Property (M): the Clifford commutant equals `(A°)_C`. With `with_grading` the even
/// Clifford algebra is tested as well and supplies the witness.
pub fn property_m(t: &FiniteTriple, with_grading: bool) -> Result<MoritaVerdict> {
    let zeroth = t.zeroth_order_violation();
    let first = t.first_order_violation();
    if zeroth > t.tol() || first > t.tol() {
        return Err(Error::OrderConditionsViolated { zeroth, first });
    }
    if with_grading && t.gamma().is_none() {
        return Err(Error::GradingRequired);
    }
    let n = t.dim();
    let opp = complex_span(n, t.opposite(), t.tol());
    let odd = clifford(t, false)?;
    let comm_odd = clifford_commutant(t, false)?;
    let property_m = comm_odd.equals(&opp)?;
    let gamma_in_clifford_odd = t.gamma().map(|g| odd.contains(g));

    let (clifford_even_dim, commutant_even_dim, property_m_with_grading, witness) = if with_grading {
        let even = clifford(t, true)?;
        let comm_even = clifford_commutant(t, true)?;
        let ok = comm_even.equals(&opp)?;
        let w = if ok { None } else { witness_outside(&comm_even, &opp) };
        (Some(even.dim()), Some(comm_even.dim()), Some(ok), w)
    } else {
        let w = if property_m { None } else { witness_outside(&comm_odd, &opp) };
        (None, None, None, w)
    };
    Ok(MoritaVerdict {
        clifford_odd_dim: odd.dim(),
        clifford_even_dim,
        commutant_odd_dim: comm_odd.dim(),
        commutant_even_dim,
        opposite_dim: opp.dim(),
        property_m,
        property_m_with_grading,
        gamma_in_clifford_odd,
        witness,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ObstructionMode {
    /// `X` commutes with `A` and `D0`, hence with `Cl(A)_o`.
    AlgebraD0,
    /// `X` commutes with `A`, `A°` and `D0`, hence with the image of `pi_D`.
    WithOpposite,
    /// `X` lies in `A' ∩ (A°)'`, hence commutes with every 0-chain.
    ZeroChain,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Obstruction {
    /// Largest `|[X, Y]|` over the mode's operators (both HS-normalized).
    pub commutator: f64,
    /// `|{X, gamma}|` with both HS-normalized.
    pub anticommutator: f64,
    pub holds: bool,
}

fn normalized_bracket(x: &Operator, y: &Operator, anti: bool) -> f64 {
    match (x.normalized(), y.normalized()) {
        (Some(x), Some(y)) => {
            if anti {
                x.anticommutator(&y).hs_norm()
            } else {
                x.commutator(&y).hs_norm()
            }
        }
        _ => 0.0,
    }
}

/// Certifies `gamma` outside the algebra selected by `mode`: `X` commutes with all of
/// its generators yet anticommutes with `gamma`.
///
/// Without a recorded `D0` the operators `[D, a]` stand in for it.
pub fn obstruction_check(x: &Operator, t: &FiniteTriple, mode: ObstructionMode) -> Result<Obstruction> {
    let gamma = t.gamma().ok_or(Error::GradingRequired)?;
    let mut ops: Vec<Operator> = t.algebra().to_vec();
    if matches!(mode, ObstructionMode::WithOpposite | ObstructionMode::ZeroChain) {
        ops.extend(t.opposite().iter().cloned());
    }
    if matches!(mode, ObstructionMode::AlgebraD0 | ObstructionMode::WithOpposite) {
        match t.d0() {
            Some(d0) => ops.push(d0.clone()),
            None => ops.extend(t.algebra().iter().map(|a| t.dirac().commutator(a))),
        }
    }
    let commutator = ops.iter().map(|y| normalized_bracket(x, y, false)).fold(0.0, f64::max);
    let anticommutator = normalized_bracket(x, gamma, true);
    let holds = x.hs_norm() > 0.0 && commutator <= t.tol() && anticommutator <= t.tol();
    Ok(Obstruction { commutator, anticommutator, holds })
}

#[derive(Clone, Debug)]
pub struct Irreducibility {
    /// Real dimension of `{X : [X, A] = [X, D] = [X, gamma] = 0, J X = X J}`.
    pub real_dim: usize,
    /// Real dimension of its self-adjoint part.
    pub hermitian_dim: usize,
    /// No projection other than `0, 1` in the commutant.
    pub irreducible: bool,
    /// A nontrivial projection when reducible.
    pub witness: Option<Operator>,
}

/// Real commutant of `(A, D, gamma, J)` and, if it has one, a nontrivial projection.
pub fn irreducible(t: &FiniteTriple) -> Result<Irreducibility> {
    let n = t.dim();
    let mut gens = t.algebra().to_vec();
    gens.push(t.dirac().clone());
    gens.extend(t.gamma().cloned());
    let gens: Vec<Operator> = gens.into_iter().flat_map(|g| [g.adjoint(), g]).collect();
    let j = t.j().clone();
    let complex = commutant(n, &gens, Field::Complex, t.tol())?;
    let c = complex.real_kernel(|x| &j.conjugate(x) - x);
    let herm: Vec<Operator> = c
        .basis()
        .iter()
        .map(|x| (x + &x.adjoint()).scale_real(0.5))
        .collect();
    let herm = OperatorSubspace::span_of(n, &herm, Field::Real, t.tol())?;
    let irreducible = herm.dim() <= 1;
    let witness = if irreducible { None } else { cluster_projection(n, &herm.basis()) };
    Ok(Irreducibility { real_dim: c.dim(), hermitian_dim: herm.dim(), irreducible, witness })
}

/// Smallest-rank spectral projection of a generic self-adjoint combination of `herm`.
fn cluster_projection(n: usize, herm: &[Operator]) -> Option<Operator> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x005e_ed0f_1ead);
    let h = herm.iter().fold(DMatrix::<C64>::zeros(n, n), |acc, x| {
        acc + x.matrix() * C64::new(rng.gen_range(-1.0..1.0), 0.0)
    });
    let (values, vecs) = sorted_hermitian_eigen(&h);
    let spread = values.last()? - values.first()?;
    let clusters = eigen_clusters(&values, 1e-6 * spread.max(f64::MIN_POSITIVE));
    if clusters.len() < 2 {
        return None;
    }
    let smallest = clusters.iter().min_by_key(|r| r.len())?;
    let v = vecs.columns(smallest.start, smallest.len());
    Operator::new(v * v.adjoint()).ok()
}

/// `x in span(A) + span(J A J)` over the reals.
pub fn in_algebra_plus_conjugate(algebra: &[Operator], j: &AntilinearOperator, x: &Operator, tol: f64) -> Result<bool> {
    let n = j.dim();
    let mut gens = algebra.to_vec();
    gens.extend(algebra.iter().map(|a| j.conjugate(a)));
    Ok(OperatorSubspace::span_of(n, &gens, Field::Real, tol)?.contains(x))
}

/// Weak orientability of the Pati-Salam data: `x in A^ev + J_F A^ev J_F`.
pub fn weak_orientability_aev(x: &Operator, tol: f64) -> Result<bool> {
    in_algebra_plus_conjugate(&build_algebra_aev(), &build_jf(), x, tol)
}
