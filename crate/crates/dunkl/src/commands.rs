//! One function per subcommand. Each returns the `result` part of the JSON
//! report plus optional text and CSV renderings and an exit code.

use serde_json::{json, Value};

use dunkl_core::dunkl::DunklContext;
use dunkl_core::field::{Field, Rational};
use dunkl_core::fundamentality::{
    check_with_lambda, lambda_kappa, CoeffMode, FundamentalityOptions, FundamentalityReport, Overall, Verdict,
    DEFAULT_N_MAX, DEFAULT_ZERO_THRESHOLD,
};
use dunkl_core::gegenbauer::{coefficients_exact, default_quad_order, CesaroParams, GegenbauerSeries};
use dunkl_core::harmonics::{kernel_identity_residual, orthonormal_basis};
use dunkl_core::intertwine::{IntertwineTable, DEFAULT_TABLE_DEGREE};
use dunkl_core::roots::{RootSystem, DEFAULT_GROUP_CAP};
use dunkl_core::sphere::{build_rule, z2_certificate, WeightSpec, DEFAULT_DEGREE_CIRCLE, DEFAULT_DEGREE_SPHERE};

use crate::config::Knobs;
use crate::error::{CliError, CliResult};
use crate::gspec::parse_g;
use crate::report::csv_table;
use crate::sampling::sphere_pairs;
use crate::system::{vector_strings, AnySystem, FamilySpec, SystemSpec};
use crate::text::{format_poly, lift, parse_poly};
use crate::verify;
use crate::with_system;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SAMPLES: usize = 200;
pub const DEFAULT_KERNEL_NMAX: usize = 6;
pub const KERNEL_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_EXPAND_NMAX: usize = 16;
pub const DEFAULT_CESARO_ORDER: usize = 64;
pub const DEFAULT_CESARO_GRID: usize = 2049;

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub result: Value,
    pub text: Option<String>,
    pub csv: Option<String>,
    pub exit: i32,
}

impl Outcome {
    fn ok(result: Value) -> Self {
        Self { result, text: None, csv: None, exit: 0 }
    }

    fn text(mut self, t: String) -> Self {
        self.text = Some(t);
        self
    }

    fn csv(mut self, c: String) -> Self {
        self.csv = Some(c);
        self
    }

    fn exit(mut self, code: i32) -> Self {
        self.exit = code;
        self
    }
}

pub fn run(command: &str, k: &Knobs) -> CliResult<Outcome> {
    match command {
        "validate-roots" => validate_roots(k),
        "dunkl-apply" => dunkl_apply(k),
        "intertwine" => intertwine(k),
        "rule" => rule(k),
        "harmonics" => harmonics(k),
        "kernel-check" => kernel_check(k),
        "expand" => expand(k),
        "cesaro" => cesaro(k),
        "check-fundamental" => check_fundamental(k),
        "verify-all" => verify_all(k),
        other => Err(CliError::Config(format!("unknown command {other:?}"))),
    }
}

fn exact_only(spec: &SystemSpec, what: &str) -> CliError {
    CliError::Core(dunkl_core::Error::Unsupported(format!(
        "{what} needs exact arithmetic; {} has roots outside Q and Q(sqrt3)",
        spec.name()
    )))
}

fn rational_text(q: &Rational) -> String {
    q.to_string()
}

fn lambda_value(q: &Rational) -> Value {
    json!({ "exact": rational_text(q), "value": Field::to_f64(q) })
}

fn validate_roots(k: &Knobs) -> CliResult<Outcome> {
    let spec = k.system()?;
    let sys = spec.build()?;
    with_system!(&sys, s => validate_generic(&spec, s))
}

fn validate_generic<F: Field>(spec: &SystemSpec, s: &RootSystem<F>) -> CliResult<Outcome> {
    let violations = s.validate();
    let valid = violations.is_empty();
    let vjson: Vec<Value> = violations
        .iter()
        .map(|v| json!({ "kind": v.kind(), "witnesses": v.witnesses().into_iter().map(vector_strings).collect::<Vec<_>>() }))
        .collect();
    let positive: Vec<Value> = s
        .positive_roots()
        .map(|(v, kappa)| json!({ "root": vector_strings(v), "kappa": rational_text(kappa) }))
        .collect();
    let mut result = json!({
        "system": spec.name(),
        "dim": s.dim(),
        "roots": s.roots().iter().map(|v| vector_strings(v)).collect::<Vec<_>>(),
        "positive_roots": positive,
        "violations": vjson,
        "valid": valid,
    });
    let mut text = format!("{}: {} roots in dimension {}\n", spec.name(), s.roots().len(), s.dim());
    if valid {
        match s.generate_group(DEFAULT_GROUP_CAP) {
            Ok(g) => {
                result["group_order"] = json!(g.order());
                result["reflections"] = json!(g.reflection_count());
                text.push_str(&format!("valid; group order {}, {} reflections\n", g.order(), g.reflection_count()));
            }
            Err(e) => {
                result["group_order"] = Value::Null;
                result["group_note"] = json!(e.to_string());
                text.push_str(&format!("valid; {e}\n"));
            }
        }
    } else {
        for v in &violations {
            let w: Vec<String> = v.witnesses().into_iter().map(|x| format!("({})", vector_strings(x).join(", "))).collect();
            text.push_str(&format!("violation {}: {}\n", v.kind(), w.join(" ")));
        }
    }
    Ok(Outcome::ok(result).text(text).exit(if valid { 0 } else { 2 }))
}

fn dunkl_apply(k: &Knobs) -> CliResult<Outcome> {
    let spec = k.system()?;
    let poly = k.poly.as_deref().ok_or_else(|| CliError::Config("dunkl-apply needs --poly".into()))?;
    match spec.build()? {
        AnySystem::Rational(s) => apply_generic(s, poly, k),
        AnySystem::Sqrt3(s) => apply_generic(s, poly, k),
        AnySystem::Float(_) => Err(exact_only(&spec, "dunkl-apply")),
    }
}

fn apply_generic<F: Field>(s: RootSystem<F>, poly: &str, k: &Knobs) -> CliResult<Outcome> {
    let ctx = DunklContext::new(s)?;
    let p: dunkl_core::poly::MPoly<F> = lift(&parse_poly(poly, ctx.dim())?);
    let mut rows = Vec::new();
    if k.laplacian.unwrap_or(false) {
        rows.push(("laplacian".to_string(), ctx.laplacian(&p)?));
    } else if let Some(axis) = k.axis {
        if axis == 0 || axis > ctx.dim() {
            return Err(CliError::Config(format!("--axis must be in 1..={}", ctx.dim())));
        }
        rows.push((format!("D{axis}"), ctx.apply(axis - 1, &p)?));
    } else {
        for (i, q) in ctx.apply_all(&p)?.into_iter().enumerate() {
            rows.push((format!("D{}", i + 1), q));
        }
    }
    let text: String = rows.iter().map(|(op, q)| format!("{op} p = {}\n", format_poly(q))).collect();
    let results: Vec<Value> = rows.iter().map(|(op, q)| json!({ "operator": op, "output": format_poly(q) })).collect();
    Ok(Outcome::ok(json!({ "input": format_poly(&p), "results": results })).text(text))
}

fn intertwine(k: &Knobs) -> CliResult<Outcome> {
    let spec = k.system()?;
    match spec.build()? {
        AnySystem::Rational(s) => intertwine_generic(s, k),
        AnySystem::Sqrt3(s) => intertwine_generic(s, k),
        AnySystem::Float(_) => Err(exact_only(&spec, "intertwine")),
    }
}

fn intertwine_generic<F: Field>(s: RootSystem<F>, k: &Knobs) -> CliResult<Outcome> {
    let n_max = k.nmax.unwrap_or(DEFAULT_TABLE_DEGREE);
    let ctx = DunklContext::new(s)?;
    let table = IntertwineTable::build(&ctx, n_max)?;
    let failure = table.find_relation_failure(&ctx, n_max)?;
    let mut degrees = Vec::new();
    let mut text = format!("lambda = {}\n", table.lambda());
    for n in 0..=n_max {
        let exps = table.exponents(n).unwrap_or(&[]);
        let m = table.matrix(n).ok_or(dunkl_core::Error::DegreeExceedsTable { degree: n, max: n_max })?;
        let names: Vec<String> = exps.iter().map(|e| format_poly(&dunkl_core::poly::MPoly::monomial(e.clone(), F::one()))).collect();
        let rows: Vec<Vec<String>> = (0..m.rows()).map(|i| m.row(i).iter().map(|c| c.to_string()).collect()).collect();
        text.push_str(&format!("degree {n}: {} x {}\n", m.rows(), m.cols()));
        degrees.push(json!({ "degree": n, "monomials": names, "matrix": rows }));
    }
    let mut result = json!({
        "lambda": lambda_value(table.lambda()),
        "n_max": n_max,
        "degrees": degrees,
        "relation_holds": failure.is_none(),
    });
    if let Some(p) = k.poly.as_deref() {
        let q: dunkl_core::poly::MPoly<F> = lift(&parse_poly(p, ctx.dim())?);
        let image = format_poly(&table.apply(&q)?);
        text.push_str(&format!("V p = {image}\n"));
        result["image"] = json!({ "input": format_poly(&q), "output": image });
    }
    text.push_str(&format!("D_i V = V d_i: {}\n", if failure.is_none() { "holds" } else { "FAILS" }));
    let exit = if failure.is_none() { 0 } else { 2 };
    Ok(Outcome::ok(result).text(text).exit(exit))
}

fn weight_of(sys: &AnySystem) -> WeightSpec {
    with_system!(sys, s => WeightSpec::from_system(s))
}

fn z2_kappas(spec: &SystemSpec) -> Option<Vec<f64>> {
    match spec.family {
        FamilySpec::Z2 { .. } => Some(spec.kappa.iter().map(Field::to_f64).collect()),
        _ => None,
    }
}

fn rule(k: &Knobs) -> CliResult<Outcome> {
    let spec = k.system()?;
    let sys = spec.build()?;
    let d = sys.dim();
    let degree = k.degree.unwrap_or(if d == 2 { DEFAULT_DEGREE_CIRCLE } else { DEFAULT_DEGREE_SPHERE });
    let rule = build_rule(&weight_of(&sys), degree)?;
    let header: Vec<String> = (1..=d).map(|i| format!("x{i}")).chain(["weight".to_string()]).collect();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows: Vec<Vec<String>> = rule
        .nodes()
        .iter()
        .zip(rule.weights())
        .map(|(x, w)| x.iter().chain([w]).map(|c| c.to_string()).collect())
        .collect();
    let csv = csv_table(&header, &rows);
    let mut result = json!({
        "system": spec.name(),
        "requested_degree": degree,
        "exactness_degree": rule.exactness_degree(),
        "nodes": rule.len(),
        "sigma": rule.sigma(),
        "weight_sum": rule.weights().iter().sum::<f64>(),
    });
    if let Some(kap) = z2_kappas(&spec) {
        result["certificate_max_error"] = json!(z2_certificate(&rule, &kap)?);
    }
    if let Some(path) = k.export.as_deref() {
        std::fs::write(path, &csv).map_err(|source| CliError::Io { path: path.into(), source })?;
        result["exported"] = json!(path);
    }
    let text = format!(
        "{}: {} nodes, exact to degree {}, sigma = {}\n",
        spec.name(),
        rule.len(),
        rule.exactness_degree(),
        rule.sigma()
    );
    Ok(Outcome::ok(result).text(text).csv(csv))
}

fn harmonics(k: &Knobs) -> CliResult<Outcome> {
    let spec = k.system()?;
    let sys = spec.build()?;
    let n = k.degree.ok_or_else(|| CliError::Config("harmonics needs --degree".into()))?;
    let rule = build_rule(&weight_of(&sys), 2 * n)?;
    with_system!(sys, s => {
        let ctx = DunklContext::new(s)?;
        let basis = orthonormal_basis(&ctx, &rule, n)?;
        let exact: Vec<String> = basis.exact().iter().map(format_poly).collect();
        let ortho: Vec<String> = basis.orthonormal().iter().map(format_poly).collect();
        let mut text = String::new();
        for p in &exact {
            text.push_str(p);
            text.push('\n');
        }
        text.push_str(&format!("gram_residual = {:e}\n", basis.gram_residual()));
        let result = json!({
            "system": spec.name(),
            "degree": n,
            "dimension": basis.len(),
            "basis": exact,
            "orthonormal": ortho,
            "gram_residual": basis.gram_residual(),
            "condition": basis.condition(),
        });
        Ok(Outcome::ok(result).text(text))
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelRow {
    pub degree: usize,
    pub dimension: usize,
    pub residual: f64,
    pub gram_residual: f64,
}

/// Largest kernel-identity residual per degree, with `lambda_kappa`.
pub fn kernel_rows(sys: &AnySystem, n_max: usize, samples: usize, seed: u64) -> CliResult<(Rational, Vec<KernelRow>)> {
    let rule = build_rule(&weight_of(sys), 2 * n_max)?;
    let pairs = sphere_pairs(sys.dim(), samples, seed);
    with_system!(sys, s => {
        let lambda = lambda_kappa(s)?;
        let ctx = DunklContext::new(s.clone())?;
        let table = IntertwineTable::build(&ctx, n_max)?;
        let mut rows = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let basis = orthonormal_basis(&ctx, &rule, n)?;
            let r = kernel_identity_residual(&table, &basis, &lambda, &pairs)?;
            rows.push(KernelRow { degree: n, dimension: basis.len(), residual: r, gram_residual: basis.gram_residual() });
        }
        Ok((lambda, rows))
    })
}

fn kernel_check(k: &Knobs) -> CliResult<Outcome> {
    let spec = k.system()?;
    let sys = spec.build()?;
    let n_max = k.nmax.unwrap_or(DEFAULT_KERNEL_NMAX);
    let samples = k.samples.unwrap_or(DEFAULT_SAMPLES);
    let seed = k.seed.unwrap_or(DEFAULT_SEED);
    let tol = k.tol.unwrap_or(KERNEL_TOLERANCE);
    let (lambda, rows) = kernel_rows(&sys, n_max, samples, seed)?;
    let worst = rows.iter().map(|r| r.residual).fold(0.0f64, f64::max);
    let pass = rows.iter().all(|r| r.residual <= tol);
    let table: Vec<Value> = rows
        .iter()
        .map(|r| json!({ "degree": r.degree, "dimension": r.dimension, "residual": r.residual, "gram_residual": r.gram_residual }))
        .collect();
    let csv = csv_table(
        &["degree", "dimension", "residual", "gram_residual"],
        &rows
            .iter()
            .map(|r| vec![r.degree.to_string(), r.dimension.to_string(), r.residual.to_string(), r.gram_residual.to_string()])
            .collect::<Vec<_>>(),
    );
    let text: String = rows
        .iter()
        .map(|r| format!("n = {:2}  dim = {:3}  residual = {:.3e}\n", r.degree, r.dimension, r.residual))
        .collect();
    let result = json!({
        "system": spec.name(),
        "lambda": lambda_value(&lambda),
        "samples": samples,
        "seed": seed,
        "tolerance": tol,
        "rows": table,
        "max_residual": worst,
        "pass": pass,
    });
    Ok(Outcome::ok(result).text(text).csv(csv).exit(if pass { 0 } else { 2 }))
}

/// `lambda` from `--lambda`, or `lambda_kappa` of the configured system.
fn resolve_lambda(k: &Knobs) -> CliResult<Rational> {
    if let Some(l) = k.lambda()? {
        return Ok(l);
    }
    if k.has_system() {
        let sys = k.system()?.build()?;
        return Ok(with_system!(&sys, s => lambda_kappa(s))?);
    }
    Err(CliError::Config("give --lambda or a root system".into()))
}

fn mode(k: &Knobs) -> CliResult<CoeffMode> {
    match k.mode.as_deref().unwrap_or("auto") {
        "auto" => Ok(CoeffMode::Auto),
        "quadrature" => Ok(CoeffMode::Quadrature),
        other => Err(CliError::Config(format!("unknown mode {other:?} (expected auto or quadrature)"))),
    }
}

fn expand(k: &Knobs) -> CliResult<Outcome> {
    let lambda = resolve_lambda(k)?;
    let g = parse_g(k.g.as_deref().ok_or_else(|| CliError::Config("expand needs --g".into()))?, Some(&lambda))?;
    let n_max = k.nmax.unwrap_or(DEFAULT_EXPAND_NMAX);
    let (coeffs, exact, order): (Vec<f64>, Option<Vec<Rational>>, Option<usize>) = match (mode(k)?, g.exact()) {
        (CoeffMode::Auto, Some(poly)) => {
            let e = coefficients_exact(poly, &lambda, n_max)?;
            (e.iter().map(Field::to_f64).collect(), Some(e), None)
        }
        _ => {
            let order = k.quad_order.unwrap_or_else(|| default_quad_order(&g, n_max));
            let s = GegenbauerSeries::expand(&g, Field::to_f64(&lambda), n_max, Some(order))?;
            (s.coeffs().to_vec(), None, Some(order))
        }
    };
    let rows: Vec<Value> = coeffs
        .iter()
        .enumerate()
        .map(|(n, b)| match &exact {
            Some(e) => json!({ "n": n, "b": b, "exact": rational_text(&e[n]) }),
            None => json!({ "n": n, "b": b }),
        })
        .collect();
    let csv_rows: Vec<Vec<String>> = coeffs
        .iter()
        .enumerate()
        .map(|(n, b)| {
            let mut r = vec![n.to_string(), b.to_string()];
            if let Some(e) = &exact {
                r.push(rational_text(&e[n]));
            }
            r
        })
        .collect();
    let header: &[&str] = if exact.is_some() { &["n", "b_n", "exact"] } else { &["n", "b_n"] };
    let text: String = coeffs.iter().enumerate().map(|(n, b)| format!("b_{n} = {b:e}\n")).collect();
    let result = json!({
        "g": g.label(),
        "lambda": lambda_value(&lambda),
        "n_max": n_max,
        "route": if exact.is_some() { "exact" } else { "quadrature" },
        "quad_order": order,
        "coefficients": rows,
    });
    Ok(Outcome::ok(result).text(text).csv(csv_table(header, &csv_rows)))
}

fn cesaro(k: &Knobs) -> CliResult<Outcome> {
    let lambda = resolve_lambda(k)?;
    let lf = Field::to_f64(&lambda);
    let g = parse_g(k.g.as_deref().ok_or_else(|| CliError::Config("cesaro needs --g".into()))?, Some(&lambda))?;
    let order = k.nmax.unwrap_or(DEFAULT_CESARO_ORDER);
    let delta = match k.delta()? {
        Some(d) => Field::to_f64(&d),
        None => lf + 1.0,
    };
    let grid = k.grid.unwrap_or(DEFAULT_CESARO_GRID);
    let series = GegenbauerSeries::expand(&g, lf, order, k.quad_order)?;
    let err = series.uniform_error(&g, CesaroParams { delta, order }, grid)?;
    let sup = g.sup_on_grid(grid);
    let result = json!({
        "g": g.label(),
        "lambda": lambda_value(&lambda),
        "delta": delta,
        "order": order,
        "grid": grid,
        "uniform_error": err,
        "sup_g": sup,
    });
    let text = format!("N = {order}, delta = {delta}: max |g - sigma_N g| = {err:e} (sup |g| = {sup})\n");
    Ok(Outcome::ok(result).text(text))
}

fn report_json(r: &FundamentalityReport) -> Value {
    let rows: Vec<Value> = r
        .coefficients
        .iter()
        .enumerate()
        .map(|(n, b)| {
            let verdict = match r.verdicts[n] {
                Verdict::Nonzero => "nonzero",
                Verdict::NumericallyZero => "numerically-zero",
            };
            let mut row = json!({ "n": n, "b": b, "verdict": verdict });
            if let Some(e) = &r.exact_coefficients {
                row["exact"] = json!(rational_text(&e[n]));
            }
            row
        })
        .collect();
    let overall = match &r.overall {
        Overall::FundamentalUpTo(n) => format!("fundamental-up-to-{n}"),
        Overall::NotFundamental { .. } => "not-fundamental".to_string(),
    };
    json!({
        "lambda": lambda_value(&r.lambda),
        "n_max": r.n_max,
        "zero_threshold": r.zero_threshold,
        "scale": r.scale,
        "route": if r.exact_coefficients.is_some() { "exact" } else { "quadrature" },
        "quad_order": r.quad_order,
        "coefficients": rows,
        "overall": overall,
        "witnesses": r.witnesses(),
    })
}

fn check_fundamental(k: &Knobs) -> CliResult<Outcome> {
    let lambda = resolve_lambda(k)?;
    let g = parse_g(k.g.as_deref().ok_or_else(|| CliError::Config("check-fundamental needs --g".into()))?, Some(&lambda))?;
    let opts = FundamentalityOptions {
        n_max: k.nmax.unwrap_or(DEFAULT_N_MAX),
        zero_threshold: k.zero_threshold.unwrap_or(DEFAULT_ZERO_THRESHOLD),
        quad_order: k.quad_order,
        mode: mode(k)?,
    };
    let r = check_with_lambda(&g, &lambda, &opts)?;
    let mut result = report_json(&r);
    result["g"] = json!(g.label());
    let text = match &r.overall {
        Overall::FundamentalUpTo(n) => format!("fundamental up to n = {n}\n"),
        Overall::NotFundamental { witnesses } => format!("not fundamental; b_n numerically zero for n in {witnesses:?}\n"),
    };
    Ok(Outcome::ok(result).text(text).exit(if r.is_fundamental() { 0 } else { 2 }))
}

fn verify_all(k: &Knobs) -> CliResult<Outcome> {
    let seed = k.seed.unwrap_or(DEFAULT_SEED);
    let criteria = verify::run_all(seed);
    let passed = criteria.iter().filter(|c| c.pass).count();
    let text: String = criteria.iter().map(|c| format!("{} {:2} {}\n", if c.pass { "PASS" } else { "FAIL" }, c.id, c.title)).collect();
    let all = passed == criteria.len();
    let result = json!({
        "seed": seed,
        "criteria": criteria.iter().map(verify::Criterion::to_json).collect::<Vec<_>>(),
        "passed": passed,
        "failed": criteria.len() - passed,
    });
    Ok(Outcome::ok(result).text(text).exit(if all { 0 } else { 2 }))
}
