//! End-to-end verification driver and its report.
//!
//! The driver runs the whole pipeline per instance — model, invariant
//! subspaces, coefficient solutions, mCYBE residuals, cohomology and, for
//! `E8` at the branch node with `l = 6`, the nonvanishing lemma — and
//! collects named pass/fail checks. Reports are deterministic: instances are
//! processed in parallel but collected in input order, and every map is
//! ordered.

use std::fmt::Write as _;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chevalley::{BasisElement, StructureConstants};
use crate::cohomology::{cohomology_dims, e8_lemma_check, ComplexSlice, E8LemmaReport, InvariantComplex};
use crate::hochschild::{self, Cochain, FiniteAlgebra};
use crate::poisson::{self, recurrence_residual, PoissonError, Tolerances};
use crate::quasiroot::MlaModel;
use crate::rootsys::{RootSystem, SimpleLieType};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("no instances configured")]
    NoInstances,
    #[error("bad instance `{0}`: expected TYPE:NODE:LEVEL, e.g. E8:4:6")]
    InstanceSyntax(String),
    #[error("instance {0}: {1}")]
    Instance(String, String),
    #[error("kappa must be positive and finite")]
    Kappa,
    #[error("tolerances must satisfy 0 < accept < reject")]
    Tolerances,
    #[error("thread pool: {0}")]
    Threads(String),
}

/// One `(algebra, node, l)` triple. `node` is the 1-based Bourbaki label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub algebra: String,
    pub node: usize,
    pub level: usize,
}

impl Instance {
    pub fn new(algebra: &str, node: usize, level: usize) -> Self {
        Self {
            algebra: algebra.to_string(),
            node,
            level,
        }
    }

    pub fn parse(s: &str) -> Result<Self, ConfigError> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || ConfigError::InstanceSyntax(s.to_string());
        if parts.len() != 3 {
            return Err(bad());
        }
        Ok(Self {
            algebra: parts[0].trim().to_string(),
            node: parts[1].trim().parse().map_err(|_| bad())?,
            level: parts[2].trim().parse().map_err(|_| bad())?,
        })
    }

    pub fn label(&self) -> String {
        format!("{}:{}:{}", self.algebra, self.node, self.level)
    }

    pub fn build(&self) -> Result<MlaModel, ConfigError> {
        let err = |m: String| ConfigError::Instance(self.label(), m);
        let t: SimpleLieType = self.algebra.parse().map_err(|e: crate::rootsys::RootSystemError| err(e.to_string()))?;
        if self.node == 0 {
            return Err(err("nodes are numbered from 1".into()));
        }
        let sc = Arc::new(StructureConstants::build(Arc::new(RootSystem::build(t))));
        MlaModel::build(sc, self.node - 1, self.level).map_err(|e| err(e.to_string()))
    }
}

/// The default models: G2 at l = 2 and 3, F4 at 4, E8 at 5 and 6.
pub fn default_instances() -> Vec<Instance> {
    vec![
        Instance::new("G2", 2, 2),
        Instance::new("G2", 1, 3),
        Instance::new("F4", 3, 4),
        Instance::new("E8", 5, 5),
        Instance::new("E8", 4, 6),
    ]
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Table,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub instances: Vec<Instance>,
    pub kappa: f64,
    pub tolerances: Tolerances,
    pub seed: u64,
    /// Worker threads; 0 picks the default.
    pub threads: usize,
    /// Adds this amount to `c_1` (and subtracts it from `c_{l−1}`) of every
    /// solution before it is verified. Negative control only.
    pub perturb: Option<f64>,
    pub format: OutputFormat,
    /// Report destination; standard output when absent.
    pub output: Option<std::path::PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            instances: default_instances(),
            kappa: 1.0,
            tolerances: Tolerances::default(),
            seed: 0,
            threads: 0,
            perturb: None,
            format: OutputFormat::Table,
            output: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.instances.is_empty() {
            return Err(ConfigError::NoInstances);
        }
        if !(self.kappa.is_finite() && self.kappa > 0.0) {
            return Err(ConfigError::Kappa);
        }
        Tolerances::new(self.tolerances.accept, self.tolerances.reject).map_err(|_| ConfigError::Tolerances)?;
        for i in &self.instances {
            i.build()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct C {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for C {
    fn from(z: Complex64) -> Self {
        // avoid printing −0
        Self {
            re: z.re + 0.0,
            im: z.im + 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionRow {
    pub branch: String,
    /// `c_1 … c_{l−1}`.
    pub coefficients: Vec<C>,
    pub recurrence_residual: f64,
    pub mcybe_residual: f64,
    pub closed_form_residual: Option<f64>,
    pub h2: Option<usize>,
    pub h3: Option<usize>,
    pub rank_d2: Option<usize>,
    pub rank_d3: Option<usize>,
    pub ds_square_residual: Option<f64>,
    pub ds_s_factor: Option<C>,
    pub e8_lemma: Option<E8LemmaReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceReport {
    pub instance: Instance,
    pub omega_p: usize,
    pub m: usize,
    pub class_sizes: Vec<usize>,
    pub dim_lambda2: usize,
    pub dim_lambda3: usize,
    pub dim_lambda4: usize,
    pub solutions: Vec<SolutionRow>,
    pub checks: Vec<Check>,
}

impl InstanceReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub version: String,
    pub config: RunConfig,
    pub instances: Vec<InstanceReport>,
    pub global_checks: Vec<Check>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn render(&self) -> String {
        match self.config.format {
            OutputFormat::Table => self.to_table(),
            OutputFormat::Json => self.to_json(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "phipoisson {}  kappa={}  seed={}", self.version, self.config.kappa, self.config.seed);
        let _ = writeln!(
            out,
            "{:<9} {:>3} {:>4} {:>4} {:>6} {:>6} {:>6}  {:<8} {:<40} {:>3} {:>3} {:>10} {:>10}",
            "instance", "l", "|Ωp|", "|m|", "dimΛ2", "dimΛ3", "dimΛ4", "branch", "c_1, c_2", "H2", "H3", "mCYBE", "ds∘ds"
        );
        for r in &self.instances {
            let head = format!(
                "{:<9} {:>3} {:>4} {:>4} {:>6} {:>6} {:>6}",
                r.instance.label(),
                r.instance.level,
                r.omega_p,
                r.m,
                r.dim_lambda2,
                r.dim_lambda3,
                r.dim_lambda4
            );
            for s in &r.solutions {
                let cs: Vec<String> = s.coefficients.iter().take(2).map(fmt_c).collect();
                let _ = writeln!(
                    out,
                    "{head}  {:<8} {:<40} {:>3} {:>3} {:>10} {:>10}",
                    s.branch,
                    cs.join(", "),
                    fmt_opt(s.h2),
                    fmt_opt(s.h3),
                    fmt_res(Some(s.mcybe_residual), self.config.tolerances.accept),
                    fmt_res(s.ds_square_residual, self.config.tolerances.accept),
                );
            }
            for c in r.checks.iter().filter(|c| !c.passed) {
                let _ = writeln!(out, "  FAIL {} — {}", c.name, c.detail);
            }
        }
        for c in &self.global_checks {
            let _ = writeln!(out, "{} {} — {}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail);
        }
        let _ = writeln!(
            out,
            "checks: {} passed, {} failed, {} total",
            self.summary.passed, self.summary.failed, self.summary.checks
        );
        out
    }
}

fn fmt_c(c: &C) -> String {
    let z = |x: f64| if x.abs() < 5e-7 { 0.0 } else { x };
    format!("{:+.6}{:+.6}i", z(c.re), z(c.im))
}

fn fmt_opt(x: Option<usize>) -> String {
    x.map_or("-".into(), |v| v.to_string())
}

fn fmt_res(x: Option<f64>, accept: f64) -> String {
    match x {
        None => "-".into(),
        Some(v) if v < accept => format!("<{accept:.0e}"),
        Some(v) => format!("{v:.3e}"),
    }
}

fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        passed,
        detail: detail.into(),
    }
}

/// Expected `dim (∧³m)^{k,θ}` for the default models, indexed by `l`.
pub fn expected_dim3(l: usize) -> Option<usize> {
    [None, None, Some(0), Some(1), Some(1), Some(2), Some(3)].get(l).copied().flatten()
}

/// Distance of a family from the known closed-form solutions.
pub fn closed_form_residual(l: usize, kappa: f64, c: &[Complex64]) -> Option<f64> {
    let i = Complex64::i();
    let s3 = 3f64.sqrt();
    let best = |cands: &[Vec<Complex64>]| -> f64 {
        cands
            .iter()
            .map(|want| {
                want.iter()
                    .enumerate()
                    .map(|(k, w)| (c[k + 1] - w * kappa).norm())
                    .fold(0.0, f64::max)
            })
            .fold(f64::INFINITY, f64::min)
    };
    Some(match l {
        2 => c[1].norm(),
        3 => best(&[vec![i / s3], vec![-i / s3]]),
        4 => best(&[vec![i, 0.0.into()], vec![-i, 0.0.into()]]),
        5 => {
            let x = c[1] / kappa;
            let quartic = (5.0 * x.powu(4) + 10.0 * x * x + 1.0).norm();
            let second = (c[2] / kappa - (x * x + 1.0) / (2.0 * x)).norm();
            quartic.max(second)
        }
        6 => best(&[vec![i * s3, i / s3, 0.0.into()], vec![-i * s3, -i / s3, 0.0.into()]]),
        _ => return None,
    })
}

fn classify(res: f64, tol: &Tolerances) -> (bool, &'static str) {
    if res < tol.accept {
        (true, "accepted")
    } else if res > tol.reject {
        (false, "rejected")
    } else {
        (false, "indeterminate")
    }
}

pub fn verify_instance(inst: &Instance, cfg: &RunConfig) -> Result<InstanceReport, ConfigError> {
    let model = inst.build()?;
    let tol = cfg.tolerances;
    let l = model.level();
    let mut checks = Vec::new();

    let connected: Vec<usize> = (1..l).filter(|&i| !model.connectivity_check(i).unwrap_or(false)).collect();
    checks.push(check("connectivity", connected.is_empty(), format!("disconnected classes: {connected:?}")));
    let mut bad_pairs = Vec::new();
    for i in 1..l {
        for j in 1..l {
            if (i + j) % l != 0 && !model.bracket_image_check(i, j).unwrap_or(false) {
                bad_pairs.push((i, j));
            }
        }
    }
    checks.push(check("bracket-image", bad_pairs.is_empty(), format!("failing pairs: {bad_pairs:?}")));

    let bases = match InvariantComplex::build(&model) {
        Ok(b) => b,
        Err(e) => {
            checks.push(check("invariant-subspaces", false, e.to_string()));
            return Ok(InstanceReport {
                instance: inst.clone(),
                omega_p: model.omega_p().len(),
                m: model.m_basis().len(),
                class_sizes: (1..l).map(|i| model.class(i).len()).collect(),
                dim_lambda2: 0,
                dim_lambda3: 0,
                dim_lambda4: 0,
                solutions: Vec::new(),
                checks,
            });
        }
    };
    let (d2, d3, d4) = (bases.basis2.dim(), bases.basis3.dim(), bases.basis4.dim());
    checks.push(check("dim-lambda2", d2 == (l - 1) / 2, format!("dim {d2}, expected {}", (l - 1) / 2)));
    if let Some(e) = expected_dim3(l) {
        checks.push(check("dim-lambda3", d3 == e, format!("dim {d3}, expected {e}")));
    }

    let mut rows = Vec::new();
    match poisson::solve_phi_poisson(&model, cfg.kappa, tol) {
        Err(e) => checks.push(check("solve", false, e.to_string())),
        Ok(sols) => {
            checks.push(check("solve", !sols.is_empty(), format!("{} branches", sols.len())));
            let firsts: Vec<Complex64> = sols.iter().map(|s| s.family.c.get(1).copied().unwrap_or_default()).collect();
            let closed = firsts.iter().all(|c| firsts.iter().any(|d| (c + d).norm() < tol.accept));
            checks.push(check("sign-closure", closed, "solutions closed under c ↦ −c"));
            for mut sol in sols {
                if let Some(delta) = cfg.perturb {
                    if l > 2 {
                        sol.family.c[1] += delta;
                        sol.family.c[l - 1] -= delta;
                        sol.recurrence_residual = recurrence_residual(l, &sol.family);
                        let s = poisson::invariant_bivector(&model, &sol.family).map_err(|e| ConfigError::Instance(inst.label(), e.to_string()))?;
                        sol.residual = poisson::verify_mcybe(&model, &s, cfg.kappa)
                            .map_err(|e| ConfigError::Instance(inst.label(), e.to_string()))?;
                    }
                }
                rows.push(solution_row(&model, &bases, &sol, cfg, &mut checks));
            }
        }
    }
    Ok(InstanceReport {
        instance: inst.clone(),
        omega_p: model.omega_p().len(),
        m: model.m_basis().len(),
        class_sizes: (1..l).map(|i| model.class(i).len()).collect(),
        dim_lambda2: d2,
        dim_lambda3: d3,
        dim_lambda4: d4,
        solutions: rows,
        checks,
    })
}

fn solution_row(
    model: &MlaModel,
    bases: &InvariantComplex,
    sol: &poisson::PhiPoissonSolution,
    cfg: &RunConfig,
    checks: &mut Vec<Check>,
) -> SolutionRow {
    let tol = cfg.tolerances;
    let l = model.level();
    let b = &sol.branch_label;
    let (ok, what) = classify(sol.recurrence_residual, &tol);
    checks.push(check(format!("{b}/recurrence"), ok, format!("{what}: {:e}", sol.recurrence_residual)));
    let (ok, what) = classify(sol.residual, &tol);
    checks.push(check(format!("{b}/mcybe"), ok, format!("{what}: {:e}", sol.residual)));
    let closed = closed_form_residual(l, cfg.kappa, &sol.family.c);
    if let Some(r) = closed {
        let (ok, what) = classify(r, &tol);
        checks.push(check(format!("{b}/closed-form"), ok, format!("{what}: {r:e}")));
    }
    let mut row = SolutionRow {
        branch: b.clone(),
        coefficients: sol.family.c.iter().skip(1).map(|&z| z.into()).collect(),
        recurrence_residual: sol.recurrence_residual,
        mcybe_residual: sol.residual,
        closed_form_residual: closed,
        h2: None,
        h3: None,
        rank_d2: None,
        rank_d3: None,
        ds_square_residual: None,
        ds_s_factor: None,
        e8_lemma: None,
    };
    let slice = match ComplexSlice::build(model, bases, sol) {
        Ok(s) => s,
        Err(e) => {
            checks.push(check(format!("{b}/complex"), false, e.to_string()));
            return row;
        }
    };
    match cohomology_dims(&slice) {
        Ok(d) => {
            row.h2 = Some(d.h2);
            row.h3 = Some(d.h3);
            row.rank_d2 = Some(d.rank_d2);
            row.rank_d3 = Some(d.rank_d3);
            checks.push(check(format!("{b}/cohomology"), d.h2 == 0 && d.h3 == 0, format!("H2={} H3={}", d.h2, d.h3)));
            checks.push(check(
                format!("{b}/injective"),
                d.rank_d2 == d.dim2,
                format!("rank d2 = {} of {}", d.rank_d2, d.dim2),
            ));
        }
        Err(e) => checks.push(check(format!("{b}/cohomology"), false, e.to_string())),
    }
    let dds = slice.ds_square_residual().max(slice.matrix_square_residual());
    row.ds_square_residual = Some(dds);
    let (ok, what) = classify(dds, &tol);
    checks.push(check(format!("{b}/ds-square"), ok, format!("{what}: {dds:e}")));
    match slice.ds_s_factor() {
        Ok(Some((f, res))) => {
            row.ds_s_factor = Some(f.into());
            let (ok, what) = classify(res, &tol);
            checks.push(check(format!("{b}/ds-s-proportional"), ok, format!("{what}: {res:e}")));
        }
        Ok(None) => {}
        Err(e) => checks.push(check(format!("{b}/ds-s-proportional"), false, e.to_string())),
    }
    if let Ok(rep) = e8_lemma_check(&slice) {
        checks.push(check(
            format!("{b}/e8-lemma"),
            rep.passed(),
            format!("coefficient {:+.6}{:+.6}i", rep.coefficient.0, rep.coefficient.1),
        ));
        row.e8_lemma = Some(rep);
    }
    row
}

pub fn run(cfg: &RunConfig) -> Result<VerificationReport, ConfigError> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| ConfigError::Threads(e.to_string()))?;
    let results: Vec<Result<InstanceReport, ConfigError>> =
        pool.install(|| cfg.instances.par_iter().map(|i| verify_instance(i, cfg)).collect());
    let instances = results.into_iter().collect::<Result<Vec<_>, _>>()?;

    let factors: Vec<C> = instances
        .iter()
        .flat_map(|r| r.solutions.iter().filter_map(|s| s.ds_s_factor))
        .collect();
    let consistent = factors.windows(2).all(|w| {
        (Complex64::new(w[0].re, w[0].im) - Complex64::new(w[1].re, w[1].im)).norm() < cfg.tolerances.accept
    });
    let detail = match factors.first() {
        Some(f) => format!("d_s(s) = {}·κ²φ across {} solutions", fmt_c(f), factors.len()),
        None => "no solutions with nonzero φ".into(),
    };
    let global_checks = vec![check("ds-s-factor-consistent", consistent, detail)];

    let all: Vec<&Check> = instances.iter().flat_map(|r| &r.checks).chain(&global_checks).collect();
    let passed = all.iter().filter(|c| c.passed).count();
    Ok(VerificationReport {
        version: VERSION.to_string(),
        config: cfg.clone(),
        summary: Summary {
            checks: all.len(),
            passed,
            failed: all.len() - passed,
        },
        instances,
        global_checks,
    })
}

// ---------------------------------------------------------------- self-test

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelftestConfig {
    pub seed: u64,
    /// Random cochains per test algebra.
    pub cochains: usize,
    /// Random Jacobi triples per Lie type.
    pub jacobi_triples: usize,
    /// Flip one structure constant of `A2` (mutation control).
    pub corrupt_signs: bool,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            cochains: 200,
            jacobi_triples: 1000,
            corrupt_signs: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub checks: Vec<Check>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn chevalley_checks(t: SimpleLieType, triples: usize, seed: u64, corrupt: bool) -> Vec<Check> {
    let mut sc = StructureConstants::build(Arc::new(RootSystem::build(t)));
    if corrupt {
        let rs = sc.root_system();
        let (a, b) = (0..rs.len())
            .flat_map(|a| (0..rs.len()).map(move |b| (a, b)))
            .find(|&(a, b)| sc.n(a, b) != 0)
            .expect("some bracket is nonzero");
        sc = sc.with_flipped_sign(a, b);
    }
    let props = sc.check_properties();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = sc.dim();
    let mut bad = 0usize;
    for _ in 0..triples {
        let (x, y, z) = (rng.gen_range(0..dim), rng.gen_range(0..dim), rng.gen_range(0..dim));
        let e = |o: usize| -> BasisElement { sc.element(o) };
        if !sc.jacobi_residual(e(x), e(y), e(z)).is_empty() {
            bad += 1;
        }
    }
    vec![
        check(format!("{t}/properties"), props.violations() == 0, format!("{} violations over {} pairs", props.violations(), props.pairs)),
        check(format!("{t}/jacobi"), bad == 0, format!("{bad} of {triples} random triples fail")),
    ]
}

pub fn hochschild_checks(alg: &FiniteAlgebra, n: usize, seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let commutative = alg.is_commutative();
    let (mut dd, mut td, mut altd) = (0usize, 0usize, 0usize);
    for k in 0..n {
        let xi = Cochain::random(alg.dim, k % 4, &mut rng);
        let d = hochschild::coboundary(alg, &xi);
        if !hochschild::coboundary(alg, &d).is_zero() {
            dd += 1;
        }
        if hochschild::tau(&d) != hochschild::coboundary(alg, &hochschild::tau(&xi)) {
            td += 1;
        }
        if !hochschild::alt(&d).is_zero() {
            altd += 1;
        }
    }
    let name = &alg.name;
    let mut out = vec![
        check(format!("{name}/d-squared"), dd == 0, format!("{dd} of {n} fail")),
    ];
    if commutative {
        out.push(check(format!("{name}/tau-commutes"), td == 0, format!("{td} of {n} fail")));
        out.push(check(format!("{name}/alt-d"), altd == 0, format!("{altd} of {n} fail")));
        let mut non_leibniz = 0usize;
        let mut found = 0usize;
        for p in 1..=3 {
            match hochschild::cocycle_basis(alg, p, true) {
                Ok(basis) => {
                    found += basis.len();
                    for _ in 0..n / 3 {
                        let mut xi = Cochain::zero(alg.dim, p);
                        for b in &basis {
                            let c = num_rational::Rational64::from_integer(rng.gen_range(-3..=3));
                            xi = xi.add(&Cochain {
                                data: b.data.iter().map(|x| x * c).collect(),
                                ..b.clone()
                            });
                        }
                        if !hochschild::skew_cocycle_is_polyderivation(alg, &xi) {
                            non_leibniz += 1;
                        }
                    }
                    non_leibniz += basis.iter().filter(|b| !hochschild::is_polyderivation(alg, b)).count();
                }
                Err(_) => non_leibniz += 1,
            }
        }
        out.push(check(
            format!("{name}/skew-cocycles-are-polyderivations"),
            non_leibniz == 0,
            format!("{found} basis cocycles, {non_leibniz} failures"),
        ));
    } else {
        out.push(check(
            format!("{name}/alt-d-fails (control)"),
            altd > 0,
            format!("{altd} of {n} cochains with Alt∘d ≠ 0"),
        ));
    }
    out
}

pub fn selftest(cfg: &SelftestConfig) -> SelftestReport {
    let mut checks = Vec::new();
    let algebras = [
        FiniteAlgebra::truncated_polynomial(3),
        FiniteAlgebra::square_zero(2),
        FiniteAlgebra::truncated_polynomial(4),
        FiniteAlgebra::upper_triangular(),
    ];
    let hs: Vec<Vec<Check>> = algebras
        .par_iter()
        .enumerate()
        .map(|(k, a)| hochschild_checks(a, cfg.cochains, cfg.seed.wrapping_add(k as u64)))
        .collect();
    checks.extend(hs.into_iter().flatten());
    let types = SimpleLieType::all_up_to_rank(crate::rootsys::MAX_RANK);
    let cs: Vec<Vec<Check>> = types
        .par_iter()
        .enumerate()
        .map(|(k, &t)| {
            let corrupt = cfg.corrupt_signs && t.to_string() == "A2";
            chevalley_checks(t, cfg.jacobi_triples, cfg.seed.wrapping_add(100 + k as u64), corrupt)
        })
        .collect();
    checks.extend(cs.into_iter().flatten());
    SelftestReport { checks }
}

impl From<PoissonError> for ConfigError {
    fn from(e: PoissonError) -> Self {
        ConfigError::Instance(String::new(), e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_syntax() {
        assert_eq!(Instance::parse("E8:4:6").unwrap(), Instance::new("E8", 4, 6));
        assert!(Instance::parse("E8:4").is_err());
        assert!(Instance::parse("E8:x:6").is_err());
    }

    #[test]
    fn invalid_configs() {
        let mut c = RunConfig::default();
        c.instances.clear();
        assert_eq!(c.validate(), Err(ConfigError::NoInstances));
        let mut c = RunConfig::default();
        c.instances = vec![Instance::new("A2", 1, 2)];
        assert!(matches!(c.validate(), Err(ConfigError::Instance(..))));
        let mut c = RunConfig::default();
        c.tolerances = Tolerances { accept: 1e-3, reject: 1e-6 };
        assert_eq!(c.validate(), Err(ConfigError::Tolerances));
    }

    #[test]
    fn closed_forms_reject_wrong_values() {
        let i = Complex64::i();
        let good = [0.0.into(), i / 3f64.sqrt(), -i / 3f64.sqrt()];
        assert!(closed_form_residual(3, 1.0, &good).unwrap() < 1e-15);
        let bad = [0.0.into(), i, -i];
        assert!(closed_form_residual(3, 1.0, &bad).unwrap() > 0.1);
    }

    #[test]
    fn small_run_passes() {
        let cfg = RunConfig {
            instances: vec![Instance::new("G2", 1, 3)],
            ..Default::default()
        };
        let rep = run(&cfg).unwrap();
        assert!(rep.passed(), "{}", rep.to_table());
    }
}
