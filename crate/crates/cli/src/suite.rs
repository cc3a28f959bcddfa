//! Check execution. Each check runs on every instance in a worker pool and
//! the records come back in configuration order.

use std::time::{SystemTime, UNIX_EPOCH};

use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use tlkp_core::bethe::{coarse_grid, solve_bethe};
use tlkp_core::chain::{default_order, family_det, f_eval, kernel, lambda_series};
use tlkp_core::diagrams::count_table;
use tlkp_core::instances::{instance_rng, random_instance, random_points, small_rationals};
use tlkp_core::schur::{cauchy_binet_coeffs, schur_product, slavnov_schur_coeffs};
use tlkp_core::tau::{andreev_residual, hirota_apply, pluecker_residual, tau_det, tau_residue, BilinearOperator, PointFn};
use tlkp_core::{
    BetheSolution, CFloat, ChainParams, Family, Field, Float, MiwaPolynomial, MiwaTimes, ParameterVector, QBranch,
    Quadratic, Rational, SchurCoeffMap,
};

use crate::config::{Branch, FieldChoice, SuiteConfig};
use crate::report::{CheckRecord, Report};

const FAMILIES: [Family; 2] = [Family::One, Family::Two];
/// Offset separating the auxiliary random streams from the instance streams.
const AUX_STREAM: u64 = 1 << 32;

/// Runs the configured checks, stamping the report with the current time.
pub fn run_suite(config: &SuiteConfig) -> Report {
    let now = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    run_suite_at(config, now)
}

pub fn run_suite_at(config: &SuiteConfig, generated_at: u64) -> Report {
    let records = match config.field_mode {
        FieldChoice::Rational => run_in::<Rational>(config),
        FieldChoice::Quadratic => run_in::<Quadratic>(config),
        FieldChoice::Float => run_in::<Float>(config),
    };
    Report::new(config.clone(), records, generated_at)
}

pub struct Instance<F> {
    pub index: usize,
    pub seed: Option<u64>,
    pub u: Vec<F>,
    pub v: Vec<F>,
}

impl<F: Field> Instance<F> {
    fn params_json(&self) -> Value {
        let s = |x: &[F]| x.iter().map(|y| y.to_string()).collect::<Vec<_>>();
        json!({ "u": s(&self.u), "v": s(&self.v) })
    }

    fn record(&self, check: &str) -> CheckRecord {
        CheckRecord {
            instance: Some(self.index),
            seed: self.seed,
            params: Some(self.params_json()),
            ..CheckRecord::new(check)
        }
    }

    fn aux_rng(&self, config: &SuiteConfig) -> rand_chacha::ChaCha8Rng {
        instance_rng(config.seed, AUX_STREAM + self.index as u64)
    }
}

fn branch(b: Branch) -> QBranch {
    match b {
        Branch::Large => QBranch::Large,
        Branch::Small => QBranch::Small,
    }
}

pub fn chain_params<F: Field>(config: &SuiteConfig) -> tlkp_core::Result<ChainParams<F>> {
    let big_q = F::parse(&config.big_q)?;
    ChainParams::from_boundary(config.n, config.m, config.spin_twice, big_q, branch(config.q_branch))
}

fn parse_all<F: Field>(xs: &[String]) -> tlkp_core::Result<Vec<F>> {
    xs.iter().map(|s| F::parse(s)).collect()
}

/// The explicit instance, or `instances` random draws.
pub fn build_instances<F: Field>(config: &SuiteConfig, p: &ChainParams<F>) -> Vec<Result<Instance<F>, String>> {
    if let (Some(u), Some(v)) = (&config.u, &config.v) {
        let built = (|| {
            let u = ParameterVector::bethe_roots(parse_all(u)?, p)?.into_values();
            let v = ParameterVector::free(parse_all(v)?, p, &u)?.into_values();
            Ok::<_, tlkp_core::Error>(Instance { index: 0, seed: None, u, v })
        })();
        return vec![built.map_err(|e| e.to_string())];
    }
    (0..config.instances)
        .map(|k| {
            let mut rng = instance_rng(config.seed, k as u64);
            random_instance(p, &mut rng)
                .map(|(u, v)| Instance { index: k, seed: Some(config.seed), u, v })
                .map_err(|e| e.to_string())
        })
        .collect()
}

enum Task {
    Diagrams,
    Bethe,
    PerInstance(&'static str, usize),
    Unavailable(&'static str, String),
}

fn run_in<F: Field>(config: &SuiteConfig) -> Vec<CheckRecord> {
    let params = chain_params::<F>(config);
    let instances = match &params {
        Ok(p) => build_instances(config, p),
        Err(_) => Vec::new(),
    };
    let mut tasks = Vec::new();
    for name in &config.checks {
        let name: &'static str = crate::config::CHECK_NAMES.iter().find(|c| **c == name.as_str()).copied().unwrap_or("unknown");
        match (name, &params) {
            ("diagram-counts", _) => tasks.push(Task::Diagrams),
            ("bethe", _) => tasks.push(Task::Bethe),
            (_, Err(e)) => tasks.push(Task::Unavailable(name, e.to_string())),
            (_, Ok(_)) => tasks.extend((0..instances.len()).map(|k| Task::PerInstance(name, k))),
        }
    }
    tasks
        .par_iter()
        .map(|task| match task {
            Task::Diagrams => diagram_counts(config),
            Task::Bethe => bethe(config),
            Task::Unavailable(name, e) => vec![CheckRecord::failed_with(name, e)],
            Task::PerInstance(name, k) => {
                let p = params.as_ref().expect("tasks only exist for valid parameters");
                match &instances[*k] {
                    Ok(inst) => per_instance(config, name, p, inst).unwrap_or_else(|e| {
                        vec![CheckRecord { error: Some(e.to_string()), ..inst.record(name) }]
                    }),
                    Err(e) => vec![CheckRecord { instance: Some(*k), ..CheckRecord::failed_with(name, e) }],
                }
            }
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

fn per_instance<F: Field>(
    config: &SuiteConfig,
    name: &str,
    p: &ChainParams<F>,
    inst: &Instance<F>,
) -> tlkp_core::Result<Vec<CheckRecord>> {
    match name {
        "theorem-quotient" => theorem_quotient(p, inst),
        "pluecker" => pluecker(config, p, inst),
        "integral-rep" => integral_rep(config, p, inst),
        "hirota" => hirota(config, p, inst),
        "schur-expansion" => schur_expansion(config, p, inst),
        "andreev" => andreev(config, p, inst),
        other => Err(tlkp_core::Error::Domain(format!("no per-instance check named {other}"))),
    }
}

/// Fills in `a − b` and whether the two agree (exactly, or to tolerance in float mode).
fn compare<F: Field>(mut rec: CheckRecord, a: &F, b: &F) -> CheckRecord {
    rec.residual = Some((a.clone() - b).to_string());
    rec.pass = a.approx_eq(b);
    rec
}

/// A residual that should vanish; `scale` sets the float-mode tolerance.
fn vanishing<F: Field>(mut rec: CheckRecord, residual: &F, scale: f64) -> CheckRecord {
    rec.residual = Some(residual.to_string());
    rec.pass = if F::is_exact() {
        residual.is_zero()
    } else {
        residual.is_negligible() || residual.magnitude() <= tlkp_core::field::FLOAT_TOLERANCE * scale.max(1.0)
    };
    rec
}

fn labelled(mut rec: CheckRecord, label: impl Into<String>) -> CheckRecord {
    rec.label = Some(label.into());
    rec
}

fn family_label(f: Family) -> String {
    format!("family {}", f.index())
}

fn theorem_quotient<F: Field>(p: &ChainParams<F>, inst: &Instance<F>) -> tlkp_core::Result<Vec<CheckRecord>> {
    let quotient = tau_det(p, Family::One, &inst.u, &inst.v)? / tau_det(p, Family::Two, &inst.u, &inst.v)?;
    Ok(vec![compare(inst.record("theorem-quotient"), &quotient, &kernel(p, &inst.u, &inst.v)?)])
}

fn pluecker<F: Field>(config: &SuiteConfig, p: &ChainParams<F>, inst: &Instance<F>) -> tlkp_core::Result<Vec<CheckRecord>> {
    let m = p.m();
    let pts = random_points(p, &inst.u, (2 * m).max(1), &mut inst.aux_rng(config))?;
    let (x, y) = pts.split_at(m + 1);
    FAMILIES
        .iter()
        .map(|&family| {
            let res = pluecker_residual(p, family, &inst.u, x, y)?;
            let scale = family_det(p, family, &inst.u, &x[1..])?.magnitude().powi(2);
            Ok(labelled(vanishing(inst.record("pluecker"), &res, scale), family_label(family)))
        })
        .collect()
}

fn integral_rep<F: Field>(config: &SuiteConfig, p: &ChainParams<F>, inst: &Instance<F>) -> tlkp_core::Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for family in FAMILIES {
        let res = tau_residue(p, family, &inst.u, &inst.v)?;
        let det = tau_det(p, family, &inst.u, &inst.v)?;
        out.push(labelled(compare(inst.record("integral-rep"), &res, &det), family_label(family)));
    }
    // The residues are read off this expansion: Λ is even with a pole of order 2N at infinity.
    let order = config.series_order.unwrap_or_else(|| default_order(p));
    let s = lambda_series(p, &inst.u, order)?;
    let odd = s.terms().filter(|(e, _)| e % 2 != 0).map(|(_, c)| c.clone()).next().unwrap_or_else(F::zero);
    let mut rec = vanishing(inst.record("integral-rep"), &odd, 1.0);
    let leading = s.leading().map(|(e, _)| e);
    rec.pass &= leading == Some(-2 * p.n() as i32);
    rec.detail = Some(json!({ "order": order, "leading_exponent": leading }));
    out.push(labelled(rec, "eigenvalue expansion"));
    Ok(out)
}

/// Largest-magnitude coefficient of a polynomial, zero when it is empty.
fn largest<F: Field>(poly: &MiwaPolynomial<F>) -> F {
    poly.terms()
        .map(|(_, c)| c.clone())
        .fold(F::zero(), |acc, c| if c.magnitude() > acc.magnitude() { c } else { acc })
}

fn hirota<F: Field>(config: &SuiteConfig, p: &ChainParams<F>, inst: &Instance<F>) -> tlkp_core::Result<Vec<CheckRecord>> {
    let cutoff = config.miwa_cutoff;
    let mut out = Vec::new();
    for family in FAMILIES {
        let tau = cauchy_binet_coeffs(p, family, &inst.u, cutoff)?.to_miwa(cutoff);
        let scale = largest(&tau).magnitude().powi(2);
        for (op_name, op) in BilinearOperator::<F>::listed() {
            let res = largest(&hirota_apply(&op, &tau, &tau));
            let mut rec = vanishing(inst.record("hirota"), &res, scale);
            rec.detail = Some(json!({ "operator": op_name, "checked_weight": cutoff.saturating_sub(op.weight()) }));
            out.push(labelled(rec, family_label(family)));
        }
    }
    Ok(out)
}

fn max_difference<F: Field>(a: &SchurCoeffMap<F>, b: &SchurCoeffMap<F>) -> (F, F) {
    let mut worst = F::zero();
    let mut scale = F::zero();
    for (l, x) in a.entries().chain(b.entries()) {
        let d = a.get(l) - b.get(l);
        if d.magnitude() > worst.magnitude() {
            worst = d;
        }
        if x.magnitude() > scale.magnitude() {
            scale = x.clone();
        }
    }
    (worst, scale)
}

fn schur_expansion<F: Field>(config: &SuiteConfig, p: &ChainParams<F>, inst: &Instance<F>) -> tlkp_core::Result<Vec<CheckRecord>> {
    let k = config.schur_cutoff;
    let c1 = cauchy_binet_coeffs(p, Family::One, &inst.u, k)?;
    let c2 = cauchy_binet_coeffs(p, Family::Two, &inst.u, k)?;
    let a = slavnov_schur_coeffs(p, &inst.u, k)?;
    let (worst, scale) = max_difference(&schur_product(&a, &c2, k)?, &c1);
    let mut rec = vanishing(inst.record("schur-expansion"), &worst, scale.magnitude());
    rec.detail = Some(json!({ "cutoff": k, "kernel_terms": a.len() }));
    let mut out = vec![labelled(rec, "kernel × tau 2 = tau 1")];
    // Schur sums at w = v² agree with their Miwa-time polynomials.
    let w: Vec<F> = inst.v.iter().map(|x| x.clone() * x).collect();
    let times = MiwaTimes::from_points(&w, k as usize);
    for (family, c) in FAMILIES.iter().zip([&c1, &c2]) {
        let direct = c.eval_points(&w)?;
        let via_times = c.to_miwa(k).eval(&times);
        out.push(labelled(compare(inst.record("schur-expansion"), &direct, &via_times), format!("Miwa, {}", family_label(*family))));
    }
    Ok(out)
}

fn andreev<F: Field>(config: &SuiteConfig, p: &ChainParams<F>, inst: &Instance<F>) -> tlkp_core::Result<Vec<CheckRecord>> {
    let m = p.m();
    let mut rng = inst.aux_rng(config);
    let size = rng.random_range(m.max(1) + 2..=m.max(1) + 4);
    let points = random_points(p, &inst.u, size, &mut rng)?;
    let weights: Vec<F> = small_rationals(&mut rng, size);
    let measure: Vec<(F, F)> = points.into_iter().zip(weights).collect();
    let make = |family: Family, i: usize| {
        let u = inst.u.clone();
        move |z: &F| f_eval(p, family, i, z, &u).expect("points avoid every pole")
    };
    let fs: Vec<_> = (0..m).map(|i| make(Family::One, i)).collect();
    let gs: Vec<_> = (0..m).map(|i| make(Family::Two, i)).collect();
    let fr: Vec<PointFn<'_, F>> = fs.iter().map(|f| f as PointFn<'_, F>).collect();
    let gr: Vec<PointFn<'_, F>> = gs.iter().map(|g| g as PointFn<'_, F>).collect();
    let res = andreev_residual(&measure, &fr, &gr)?;
    let scale = measure.iter().map(|(z, mu)| mu.magnitude() * (1.0 + z.magnitude())).sum::<f64>().powi(2 * m as i32);
    let mut rec = vanishing(inst.record("andreev"), &res, scale);
    rec.detail = Some(json!({ "measure_points": size }));
    Ok(vec![rec])
}

pub fn diagram_counts(config: &SuiteConfig) -> Vec<CheckRecord> {
    count_table(config.m, config.lambda1_max)
        .into_iter()
        .map(|row| {
            let closed = row.closed_form.unwrap_or_default();
            CheckRecord {
                label: Some(format!("M={} λ1max={}", row.m, row.lambda1_max)),
                residual: Some((closed as i128 - row.enumerated as i128).to_string()),
                pass: row.matches,
                detail: Some(serde_json::to_value(&row).expect("row serializes")),
                ..CheckRecord::new("diagram-counts")
            }
        })
        .collect()
}

/// Parameters of the chain in complex floating point, for the root finder.
pub fn complex_params(config: &SuiteConfig) -> tlkp_core::Result<ChainParams<CFloat>> {
    chain_params::<CFloat>(config)
}

/// Starting points from the configuration, or a spread-out subset of a polar grid.
pub fn bethe_guesses(config: &SuiteConfig) -> tlkp_core::Result<Vec<Vec<CFloat>>> {
    if let Some(g) = &config.guesses {
        return g.iter().map(|row| parse_all(row)).collect();
    }
    let grid = coarse_grid(config.m, &[0.5, 0.9, 1.3], 12);
    let stride = grid.len().div_ceil(64).max(1);
    Ok(grid.into_iter().step_by(stride).collect())
}

/// Solves from every guess in parallel, in guess order.
pub fn solve_all(p: &ChainParams<CFloat>, guesses: &[Vec<CFloat>]) -> Vec<tlkp_core::Result<BetheSolution>> {
    guesses.par_iter().map(|g| solve_bethe(p, g)).collect()
}

fn same_roots(a: &[CFloat], b: &[CFloat]) -> bool {
    let close = |x: &CFloat, y: &CFloat| {
        let (d1, d2) = ((x.clone() - y).magnitude(), (x.clone() + y).magnitude());
        d1.min(d2) < 1e-9
    };
    a.len() == b.len() && a.iter().all(|x| b.iter().any(|y| close(x, y)))
}

fn bethe(config: &SuiteConfig) -> Vec<CheckRecord> {
    let setup = complex_params(config).and_then(|p| Ok((bethe_guesses(config)?, p)));
    let (guesses, p) = match setup {
        Ok(x) => x,
        Err(e) => return vec![CheckRecord::failed_with("bethe", e)],
    };
    let results = solve_all(&p, &guesses);
    let solution_record = |s: &BetheSolution| CheckRecord {
        residual: Some(format!("{:e}", s.residual)),
        pass: s.converged,
        detail: Some(serde_json::to_value(s).expect("solution serializes")),
        ..CheckRecord::new("bethe")
    };
    if config.guesses.is_some() {
        return results
            .iter()
            .enumerate()
            .map(|(k, r)| {
                let rec = match r {
                    Ok(s) => solution_record(s),
                    Err(e) => CheckRecord::failed_with("bethe", e),
                };
                labelled(rec, format!("guess {k}"))
            })
            .collect();
    }
    let mut distinct: Vec<&BetheSolution> = Vec::new();
    for s in results.iter().flatten().filter(|s| s.converged) {
        if !distinct.iter().any(|d| same_roots(&d.roots, &s.roots)) {
            distinct.push(s);
        }
    }
    if distinct.is_empty() {
        let rec = CheckRecord::failed_with("bethe", format!("none of {} grid guesses converged", guesses.len()));
        return vec![rec];
    }
    distinct.into_iter().enumerate().map(|(k, s)| labelled(solution_record(s), format!("root set {k}"))).collect()
}
