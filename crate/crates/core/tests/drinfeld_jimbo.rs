use std::sync::Arc;

use num_rational::Rational64;
use phipoisson_core::chevalley::StructureConstants;
use phipoisson_core::multivec::schouten;
use phipoisson_core::poisson::{drinfeld_jimbo_r, invariant_trivector, is_g_invariant, verify_dj};
use phipoisson_core::rootsys::{RootSystem, SimpleLieType};

fn sc(t: &str) -> StructureConstants {
    let t: SimpleLieType = t.parse().unwrap();
    StructureConstants::build(Arc::new(RootSystem::build(t)))
}

fn roots_only(sc: &StructureConstants, v: &phipoisson_core::multivec::Multivector<Rational64>) -> bool {
    let n = sc.root_system().len();
    v.terms().all(|(m, _)| m.factors().iter().all(|&f| (f as usize) < n))
}

#[test]
fn bracket_of_r_is_invariant_and_proportional_to_phi() {
    for t in ["A2", "B2", "G2"] {
        let s = sc(t);
        let rep = verify_dj(&s);
        assert!(rep.invariant, "{t}");
        assert!(is_g_invariant(&s, &invariant_trivector(&s)), "{t}");
        assert!(rep.residual < 1e-9, "{t}: {}", rep.residual);
        assert!(rep.lambda.norm() > 1e-6, "{t}");
    }
}

#[test]
fn r_itself_has_no_cartan_part() {
    for t in ["A2", "B2", "G2"] {
        let s = sc(t);
        assert!(roots_only(&s, &drinfeld_jimbo_r(&s)), "{t}");
    }
}

#[test]
fn sl2_bracket_is_pure_cartan_triple() {
    // [[e∧f, e∧f]] = 2 h∧e∧f
    let s = sc("A1");
    let r = drinfeld_jimbo_r(&s);
    let w = schouten(&s, &r, &r);
    assert_eq!(w.len(), 1);
    assert!(!roots_only(&s, &w));
}

/// Strict form of the no-Cartan requirement on `[[r, r]]`. It cannot hold:
/// `[[r, r]]` is a nonzero multiple of the invariant trivector, whose
/// `h ∧ E_α ∧ E_{−α}` terms are forced by invariance. Run with `--ignored`.
#[test]
#[ignore = "unattainable: an invariant trivector always has Cartan monomials"]
fn bracket_of_r_has_no_cartan_monomials() {
    for t in ["A2", "B2", "G2"] {
        let rep = verify_dj(&sc(t));
        assert!(rep.cartan_free, "{t}: [[r,r]] has Cartan monomials");
    }
}
