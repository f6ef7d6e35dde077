use std::sync::{Arc, OnceLock};

use num_rational::Rational64;
use phipoisson_core::chevalley::StructureConstants;
use phipoisson_core::multivec::{cartan_involution, monomial_weight, schouten, Multivector};
use phipoisson_core::rootsys::{RootSystem, SimpleLieType};
use proptest::prelude::*;

type Q = Rational64;

fn algebras() -> &'static [Arc<StructureConstants>] {
    static CELL: OnceLock<Vec<Arc<StructureConstants>>> = OnceLock::new();
    CELL.get_or_init(|| {
        ["A2", "B2", "G2", "A3"]
            .iter()
            .map(|t| {
                let t: SimpleLieType = t.parse().unwrap();
                Arc::new(StructureConstants::build(Arc::new(RootSystem::build(t))))
            })
            .collect()
    })
}

/// A random homogeneous multivector of degree `p` with up to four terms.
fn multivector(dim: usize, p: usize) -> impl Strategy<Value = Multivector<Q>> {
    let mono = proptest::sample::subsequence((0..dim).collect::<Vec<_>>(), p);
    proptest::collection::vec((mono, -3i64..=3), 1..=4).prop_map(move |terms| {
        let mut v = Multivector::zero(p);
        for (f, c) in terms {
            v.add_assign(&Multivector::monomial(&f, Q::from_integer(c)));
        }
        v
    })
}

fn case() -> impl Strategy<Value = (usize, Multivector<Q>, Multivector<Q>, Multivector<Q>)> {
    (0..4usize, 1..=3usize, 1..=3usize, 1..=2usize).prop_flat_map(|(a, p, q, r)| {
        let dim = algebras()[a].dim();
        (Just(a), multivector(dim, p), multivector(dim, q), multivector(dim, r))
    })
}

fn sign(k: usize) -> Q {
    if k % 2 == 0 {
        Q::from_integer(1)
    } else {
        Q::from_integer(-1)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn graded_antisymmetry((a, u, v, _) in case()) {
        let sc = &algebras()[a];
        let (p, q) = (u.degree(), v.degree());
        let lhs = schouten(sc, &u, &v);
        let rhs = schouten(sc, &v, &u).scale(&-sign((p - 1) * (q - 1)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn leibniz_rule((a, u, v, w) in case()) {
        let sc = &algebras()[a];
        let (p, q) = (u.degree(), v.degree());
        let lhs = schouten(sc, &u, &v.wedge(&w));
        let rhs = schouten(sc, &u, &v)
            .wedge(&w)
            .add(&v.wedge(&schouten(sc, &u, &w)).scale(&sign((p - 1) * q)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn graded_jacobi((a, u, v, w) in case()) {
        let sc = &algebras()[a];
        let (p, q) = (u.degree() - 1, v.degree() - 1);
        let t1 = schouten(sc, &u, &schouten(sc, &v, &w));
        let t2 = schouten(sc, &schouten(sc, &u, &v), &w);
        let t3 = schouten(sc, &v, &schouten(sc, &u, &w)).scale(&sign(p * q));
        prop_assert_eq!(t1, t2.add(&t3));
    }

    #[test]
    fn involution_is_an_involutive_automorphism((a, u, v, _) in case()) {
        let sc = &algebras()[a];
        prop_assert_eq!(cartan_involution(sc, &cartan_involution(sc, &u)), u.clone());
        let lhs = cartan_involution(sc, &schouten(sc, &u, &v));
        let rhs = schouten(sc, &cartan_involution(sc, &u), &cartan_involution(sc, &v));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn bracket_respects_weights((a, u, v, _) in case()) {
        let sc = &algebras()[a];
        for (x, cx) in u.terms() {
            for (y, cy) in v.terms() {
                let mx = Multivector::monomial(&x.factors().iter().map(|&f| f as usize).collect::<Vec<_>>(), *cx);
                let my = Multivector::monomial(&y.factors().iter().map(|&f| f as usize).collect::<Vec<_>>(), *cy);
                let want: Vec<i32> = monomial_weight(sc, x).iter().zip(monomial_weight(sc, y)).map(|(s, t)| s + t).collect();
                for (z, _) in schouten(sc, &mx, &my).terms() {
                    prop_assert_eq!(monomial_weight(sc, z), want.clone());
                }
            }
        }
    }

    #[test]
    fn wedge_is_graded_commutative((_, u, v, _) in case()) {
        let (p, q) = (u.degree(), v.degree());
        prop_assert_eq!(u.wedge(&v), v.wedge(&u).scale(&sign(p * q)));
    }
}
