use std::collections::BTreeSet;
use std::sync::Arc;

use num_rational::Rational64;
use phipoisson_core::chevalley::StructureConstants;
use phipoisson_core::linalg::rank_bareiss;
use phipoisson_core::multivec::{cartan_involution, Monomial};
use phipoisson_core::poisson::phi_tilde;
use phipoisson_core::quasiroot::{InvariantBasis, MlaModel, ModelError};
use phipoisson_core::rootsys::{RootSystem, SimpleLieType};

fn model(t: &str, node: usize, l: usize) -> Result<MlaModel, ModelError> {
    let t: SimpleLieType = t.parse().unwrap();
    let sc = Arc::new(StructureConstants::build(Arc::new(RootSystem::build(t))));
    MlaModel::build(sc, node, l)
}

fn check_basis(m: &MlaModel, b: &InvariantBasis) {
    let monos: BTreeSet<Monomial> = b.vectors.iter().flat_map(|v| v.terms().map(|(m, _)| m.clone())).collect();
    let monos: Vec<Monomial> = monos.into_iter().collect();
    let rows: Vec<Vec<Rational64>> = b.vectors.iter().map(|v| monos.iter().map(|x| v.coefficient(x)).collect()).collect();
    assert_eq!(rank_bareiss(&rows), b.dim(), "independent");
    for v in &b.vectors {
        assert!(m.is_k_invariant(v));
        assert_eq!(cartan_involution(m.sc(), v), v.scale(&Rational64::from_integer(b.theta_sign)));
        assert!(v.terms().all(|(x, _)| x.factors().iter().all(|&f| m.in_m(f as usize))));
    }
}

#[test]
fn bases_are_invariant_eigen_and_independent() {
    for (t, node, l) in [("G2", 1, 2), ("G2", 0, 3), ("F4", 2, 4), ("B3", 1, 2)] {
        let Ok(m) = model(t, node, l) else { continue };
        for (p, sign) in [(2, -1), (3, 1), (3, -1), (4, -1)] {
            check_basis(&m, &m.invariant_subspace(p, sign).unwrap());
        }
    }
}

#[test]
fn phi_lies_in_the_invariant_trivectors() {
    for (t, node, l) in [("G2", 0, 3), ("F4", 2, 4)] {
        let m = model(t, node, l).unwrap();
        let phi = phi_tilde(&m).unwrap();
        assert!(m.is_k_invariant(&phi));
        assert_eq!(cartan_involution(m.sc(), &phi), phi);
        let b = m.invariant_subspace(3, 1).unwrap();
        assert_eq!(b.dim(), 1);
        let v = &b.vectors[0];
        let (mono, c) = phi.terms().next().unwrap();
        assert_eq!(v.scale(&(*c / v.coefficient(mono))), phi);
    }
}

#[test]
fn bivector_dimension_matches_class_pairs() {
    for (t, node, l) in [("G2", 1, 2), ("G2", 0, 3), ("F4", 2, 4), ("F4", 2, 3), ("E6", 3, 3)] {
        let m = model(t, node, l).unwrap();
        assert_eq!(m.invariant_subspace(2, -1).unwrap().dim(), (l - 1) / 2, "{t} l={l}");
    }
}

#[test]
fn precondition_errors() {
    assert!(matches!(model("G2", 5, 2), Err(ModelError::NodeOutOfRange { .. })));
    assert!(matches!(model("G2", 0, 4), Err(ModelError::LevelOutOfRange { .. })));
}
