use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use num_integer::Integer;
use phipoisson_core::chevalley::StructureConstants;
use phipoisson_core::poisson::{
    self, invariant_bivector, recurrence_residual, solve_phi_poisson, verify_mcybe, CoefficientFamily, Tolerances,
};
use phipoisson_core::quasiroot::MlaModel;
use phipoisson_core::rootsys::{RootSystem, SimpleLieType};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `(type, 0-based node, l)` for the five models.
const MODELS: [(&str, usize, usize); 5] = [("G2", 1, 2), ("G2", 0, 3), ("F4", 2, 4), ("E8", 4, 5), ("E8", 3, 6)];

fn model(t: &str, node: usize, l: usize) -> MlaModel {
    let t: SimpleLieType = t.parse().unwrap();
    let sc = Arc::new(StructureConstants::build(Arc::new(RootSystem::build(t))));
    MlaModel::build(sc, node, l).unwrap()
}

/// `c_k = iκ cot(kπm/l)` with `gcd(m, l) = 1` — the trigonometric solutions
/// of `c_{i+j}(c_i + c_j) = c_i c_j + κ²`.
fn cot_family(l: usize, m: usize, kappa: f64) -> Vec<Complex64> {
    (0..l)
        .map(|k| {
            if k == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                let x = k as f64 * m as f64 * PI / l as f64;
                Complex64::new(0.0, kappa * x.cos() / x.sin())
            }
        })
        .collect()
}

fn oracle(l: usize, kappa: f64) -> Vec<Vec<Complex64>> {
    (1..l).filter(|m| m.gcd(&l) == 1).map(|m| cot_family(l, m, kappa)).collect()
}

fn distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[test]
fn solver_matches_cotangent_oracle() {
    for &(t, node, l) in &MODELS[1..] {
        let m = model(t, node, l);
        for kappa in [1.0, 2.5] {
            let sols = solve_phi_poisson(&m, kappa, Tolerances::default()).unwrap();
            let want = oracle(l, kappa);
            assert_eq!(sols.len(), want.len(), "{t} l={l}");
            for s in &sols {
                let best = want.iter().map(|w| distance(&s.family.c, w)).fold(f64::INFINITY, f64::min);
                assert!(best < 1e-9, "{t} l={l} κ={kappa}: {:?} off by {best:e}", s.family.c);
                assert!(s.residual < 1e-9 && s.recurrence_residual < 1e-9);
            }
            for w in &want {
                assert!(sols.iter().any(|s| distance(&s.family.c, w) < 1e-9), "{t} l={l}: missing {w:?}");
            }
        }
    }
}

#[test]
fn level_two_has_only_the_zero_family() {
    let m = model("G2", 1, 2);
    let sols = solve_phi_poisson(&m, 1.0, Tolerances::default()).unwrap();
    assert_eq!(sols.len(), 1);
    assert!(sols[0].family.c.iter().all(|c| c.norm() == 0.0));
    assert!(sols[0].residual < 1e-12);
}

#[test]
fn recurrence_and_mcybe_agree_on_random_families() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for &(t, node, l) in &MODELS[1..3] {
        let m = model(t, node, l);
        for _ in 0..25 {
            let free: Vec<Complex64> = (0..(l - 1) / 2)
                .map(|_| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
                .collect();
            let fam = CoefficientFamily::from_independent(l, &free, 1.0);
            let rec = recurrence_residual(l, &fam);
            let mcybe = verify_mcybe(&m, &invariant_bivector(&m, &fam).unwrap(), 1.0).unwrap();
            assert_eq!(rec < 1e-9, mcybe < 1e-9, "{t} l={l}: rec {rec:e} vs mCYBE {mcybe:e}");
            assert!(mcybe > 1e-6 && rec > 1e-6);
        }
        for w in oracle(l, 1.0) {
            let fam = CoefficientFamily::from_independent(l, &w[1..], 1.0);
            let mcybe = verify_mcybe(&m, &invariant_bivector(&m, &fam).unwrap(), 1.0).unwrap();
            assert!(mcybe < 1e-9 && recurrence_residual(l, &fam) < 1e-9);
        }
    }
}

#[test]
fn perturbed_solutions_are_rejected() {
    for &(t, node, l) in &MODELS[1..] {
        let m = model(t, node, l);
        for s in solve_phi_poisson(&m, 1.0, Tolerances::default()).unwrap() {
            let mut fam = s.family.clone();
            fam.c[1] += 0.1;
            fam.c[l - 1] -= 0.1;
            let mcybe = verify_mcybe(&m, &invariant_bivector(&m, &fam).unwrap(), 1.0).unwrap();
            assert!(mcybe > 1e-2, "{t} l={l}: {mcybe:e}");
        }
    }
}

#[test]
fn bad_family_is_rejected() {
    let m = model("G2", 0, 3);
    let fam = CoefficientFamily {
        c: vec![0.0.into(), 1.0.into(), 1.0.into()],
        kappa: 1.0,
    };
    assert!(matches!(
        invariant_bivector(&m, &fam),
        Err(poisson::PoissonError::NotAntisymmetric)
    ));
}
