use phipoisson_core::hochschild::{
    alt, coboundary, cocycle_basis, is_polyderivation, parity_split, tau, Cochain, FiniteAlgebra,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn commutative_algebras() -> Vec<FiniteAlgebra> {
    vec![
        FiniteAlgebra::truncated_polynomial(3),
        FiniteAlgebra::truncated_polynomial(4),
        FiniteAlgebra::square_zero(2),
    ]
}

#[test]
fn parity_split_is_an_eigen_decomposition() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for a in commutative_algebras() {
        for p in 0..4 {
            let xi = Cochain::random(a.dim, p, &mut rng);
            let (even, odd) = parity_split(&xi);
            assert_eq!(even.add(&odd), xi);
            assert_eq!(tau(&even), even);
            assert_eq!(tau(&odd), Cochain::zero(a.dim, p).sub(&odd));
        }
    }
}

#[test]
fn coboundary_preserves_parity_on_commutative_algebras() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for a in commutative_algebras() {
        for p in 0..3 {
            let (even, odd) = parity_split(&Cochain::random(a.dim, p, &mut rng));
            let de = coboundary(&a, &even);
            let dodd = coboundary(&a, &odd);
            assert_eq!(tau(&de), de, "{}", a.name);
            assert_eq!(tau(&dodd), Cochain::zero(a.dim, p + 1).sub(&dodd), "{}", a.name);
        }
    }
}

#[test]
fn alt_is_a_projection() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for p in 0..4 {
        let xi = Cochain::random(3, p, &mut rng);
        assert_eq!(alt(&alt(&xi)), alt(&xi));
    }
}

#[test]
fn skew_cocycles_are_polyderivations() {
    for a in commutative_algebras() {
        for p in 1..=3 {
            let basis = cocycle_basis(&a, p, true).unwrap();
            for b in &basis {
                assert!(coboundary(&a, b).is_zero());
                assert_eq!(&alt(b), b);
                assert!(is_polyderivation(&a, b), "{} p={p}", a.name);
            }
        }
    }
}

#[test]
fn derivation_counts() {
    // Der(Q[x]/(x^n)) is spanned by x^k d/dx, k = 1..n-1
    for n in 2..=5 {
        let a = FiniteAlgebra::truncated_polynomial(n);
        assert_eq!(cocycle_basis(&a, 1, true).unwrap().len(), n - 1, "n={n}");
    }
    // square-zero extension: derivations are all maps sending 1 ↦ 0, ε_i ↦ span ε
    let a = FiniteAlgebra::square_zero(2);
    assert_eq!(cocycle_basis(&a, 1, true).unwrap().len(), 4);
}

#[test]
fn multiplication_is_a_cocycle_but_not_skew() {
    for a in commutative_algebras().into_iter().chain([FiniteAlgebra::upper_triangular()]) {
        let mu = a.multiplication();
        assert!(coboundary(&a, &mu).is_zero(), "{}", a.name);
        assert_ne!(alt(&mu), mu);
    }
}
