//! The acceptance checks behind `verify-all`, numbered 1 to 10. Number 11
//! (byte-identical reruns) is about the command itself and is checked from
//! outside by running it twice.
//!
//! Nothing here records wall-clock time, so reports are reproducible.

use serde_json::{json, Value};

use dunkl_core::dunkl::DunklContext;
use dunkl_core::field::{rational, Field, QSqrt3, Rational};
use dunkl_core::fundamentality::{check_with_lambda, summability_limits, FundamentalityOptions, Ladder, Verdict};
use dunkl_core::gegenbauer::{
    c_lambda, cesaro_ratio, gegenbauer, gegenbauer_at_one, CesaroParams, GegenbauerSeries, UnivariateFn,
};
use dunkl_core::harmonics::{cross_degree_residual, orthonormal_basis};
use dunkl_core::intertwine::IntertwineTable;
use dunkl_core::poly::{exponents_of_degree, MPoly};
use dunkl_core::quadrature::GaussJacobi;
use dunkl_core::roots::RootSystem;
use dunkl_core::sphere::{build_rule, z2_certificate, WeightSpec, DEFAULT_DEGREE_CIRCLE, DEFAULT_DEGREE_SPHERE};

use crate::commands::kernel_rows;
use crate::error::CliResult;
use crate::system::AnySystem;

pub const KERNEL_TOL: f64 = 1e-9;
pub const SAMPLE_PAIRS: usize = 200;
pub const ORTHOGONALITY_TOL: f64 = 1e-10;
pub const NORMALIZATION_TOL: f64 = 1e-12;
pub const DIAGONAL_TOL: f64 = 1e-12;
pub const OFF_DIAGONAL_TOL: f64 = 1e-13;
pub const CESARO_RATIO: f64 = 0.25;
pub const CESARO_ABS_TOL: f64 = 5e-2;
pub const CESARO_POLY_REL_TOL: f64 = 1e-2;
pub const CESARO_GRID: usize = 2049;
pub const CERTIFICATE_TOL: f64 = 1e-12;
pub const SIGMA_TOL: f64 = 1e-13;
pub const SUMMABILITY_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
    pub pass: bool,
    pub details: Value,
}

impl Criterion {
    pub fn to_json(&self) -> Value {
        json!({ "id": self.id, "title": self.title, "pass": self.pass, "details": self.details })
    }
}

fn settle(id: u8, title: &'static str, r: CliResult<(bool, Value)>) -> Criterion {
    match r {
        Ok((pass, details)) => Criterion { id, title, pass, details },
        Err(e) => Criterion { id, title, pass: false, details: json!({ "error": e.to_string() }) },
    }
}

pub fn run_all(seed: u64) -> Vec<Criterion> {
    (1..=10).map(|id| run(id, seed)).collect()
}

pub fn run(id: u8, seed: u64) -> Criterion {
    match id {
        1 => settle(1, "intertwining relation, exact", intertwining()),
        2 => settle(2, "kernel identity on sampled pairs", kernel_identity(seed)),
        3 => settle(3, "orthogonality across degrees", orthogonality()),
        4 => settle(4, "Dunkl operator algebra, exact", operator_algebra()),
        5 => settle(5, "Gegenbauer normalization", normalization()),
        6 => settle(6, "Gegenbauer coefficient oracle", coefficient_oracle()),
        7 => settle(7, "Cesaro uniform convergence", cesaro_convergence()),
        8 => settle(8, "fundamentality verdicts", verdicts()),
        9 => settle(9, "sphere quadrature certificates", certificates()),
        10 => settle(10, "summability column limits", summability()),
        _ => Criterion { id, title: "unknown", pass: false, details: json!({ "error": "no such criterion" }) },
    }
}

fn q(n: i64, d: i64) -> Rational {
    rational(n, d)
}

fn relation_holds<F: Field>(s: RootSystem<F>, n_max: usize) -> CliResult<bool> {
    let ctx = DunklContext::new(s)?;
    let table = IntertwineTable::build(&ctx, n_max)?;
    Ok(table.find_relation_failure(&ctx, n_max)?.is_none())
}

fn intertwining() -> CliResult<(bool, Value)> {
    let mut rows = Vec::new();
    let mut all = true;
    let mut record = |name: &str, n: usize, ok: bool| {
        all &= ok;
        rows.push(json!({ "system": name, "n_max": n, "holds": ok }));
    };
    record("Z2^2 kappa=(1/2,1/2)", 12, relation_holds(RootSystem::<Rational>::z2(&[q(1, 2), q(1, 2)])?, 12)?);
    record("Z2^2 kappa=(1/3,2)", 12, relation_holds(RootSystem::<Rational>::z2(&[q(1, 3), q(2, 1)])?, 12)?);
    record("Z2^3 kappa=(1,1,1)", 8, relation_holds(RootSystem::<Rational>::z2(&[q(1, 1), q(1, 1), q(1, 1)])?, 8)?);
    record("I2(3) kappa=1/2", 12, relation_holds(RootSystem::<QSqrt3>::dihedral(3, &[q(1, 2)])?, 12)?);
    record("I2(4) kappa=(1/2,1)", 12, relation_holds(RootSystem::<Rational>::dihedral(4, &[q(1, 2), q(1, 1)])?, 12)?);
    Ok((all, json!({ "systems": rows })))
}

fn kernel_identity(seed: u64) -> CliResult<(bool, Value)> {
    let systems = [
        ("Z2^2 kappa=(1/2,1/2)", AnySystem::Rational(RootSystem::z2(&[q(1, 2), q(1, 2)])?)),
        ("Z2^3 kappa=(1,1,1)", AnySystem::Rational(RootSystem::z2(&[q(1, 1), q(1, 1), q(1, 1)])?)),
        ("Z2^3 kappa=0", AnySystem::Rational(RootSystem::z2(&[q(0, 1), q(0, 1), q(0, 1)])?)),
    ];
    let mut rows = Vec::new();
    let mut all = true;
    for (name, sys) in &systems {
        let (lambda, table) = kernel_rows(sys, 6, SAMPLE_PAIRS, seed)?;
        let worst = table.iter().map(|r| r.residual).fold(0.0f64, f64::max);
        all &= worst <= KERNEL_TOL;
        rows.push(json!({
            "system": name,
            "lambda": lambda.to_string(),
            "residuals": table.iter().map(|r| r.residual).collect::<Vec<_>>(),
            "max_residual": worst,
        }));
    }
    Ok((all, json!({ "tolerance": KERNEL_TOL, "samples": SAMPLE_PAIRS, "seed": seed, "systems": rows })))
}

fn orthogonality_of<F: Field>(s: RootSystem<F>, top: usize) -> CliResult<(f64, f64)> {
    let rule = build_rule(&WeightSpec::from_system(&s), 2 * top)?;
    let ctx = DunklContext::new(s)?;
    let bases = (0..=top).map(|n| orthonormal_basis(&ctx, &rule, n)).collect::<Result<Vec<_>, _>>()?;
    let within = bases.iter().map(|b| b.gram_residual()).fold(0.0f64, f64::max);
    Ok((cross_degree_residual(&bases, &rule)?, within))
}

fn orthogonality() -> CliResult<(bool, Value)> {
    let top = 6;
    let cases: Vec<(&str, CliResult<(f64, f64)>)> = vec![
        ("Z2^2 kappa=(1/2,1/2)", orthogonality_of(RootSystem::<Rational>::z2(&[q(1, 2), q(1, 2)])?, top)),
        ("Z2^2 kappa=(1/3,2)", orthogonality_of(RootSystem::<Rational>::z2(&[q(1, 3), q(2, 1)])?, top)),
        ("Z2^3 kappa=(1,1/2,2)", orthogonality_of(RootSystem::<Rational>::z2(&[q(1, 1), q(1, 2), q(2, 1)])?, top)),
        ("I2(3) kappa=1/2", orthogonality_of(RootSystem::<QSqrt3>::dihedral(3, &[q(1, 2)])?, top)),
        ("I2(3) kappa=2", orthogonality_of(RootSystem::<QSqrt3>::dihedral(3, &[q(2, 1)])?, top)),
        ("I2(4) kappa=(1/2,1)", orthogonality_of(RootSystem::<Rational>::dihedral(4, &[q(1, 2), q(1, 1)])?, top)),
    ];
    let mut rows = Vec::new();
    let mut all = true;
    for (name, r) in cases {
        let (cross, within) = r?;
        all &= cross <= ORTHOGONALITY_TOL;
        rows.push(json!({ "system": name, "cross_degree_residual": cross, "within_degree_residual": within }));
    }
    Ok((all, json!({ "tolerance": ORTHOGONALITY_TOL, "degrees": top, "systems": rows })))
}

fn monomials<F: Field>(d: usize, top: usize) -> Vec<MPoly<F>> {
    (0..=top).flat_map(|n| exponents_of_degree(n, d)).map(|e| MPoly::monomial(e, F::one())).collect()
}

fn commute<F: Field>(s: RootSystem<F>, top: usize) -> CliResult<bool> {
    let ctx = DunklContext::new(s)?;
    let d = ctx.dim();
    for p in monomials::<F>(d, top) {
        let first = ctx.apply_all(&p)?;
        for i in 0..d {
            for j in i + 1..d {
                if ctx.apply(i, &first[j])? != ctx.apply(j, &first[i])? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn degenerates<F: Field>(s: RootSystem<F>, top: usize) -> CliResult<bool> {
    let ctx = DunklContext::new(s)?;
    for p in monomials::<F>(ctx.dim(), top) {
        for i in 0..ctx.dim() {
            if ctx.apply(i, &p)? != p.partial(i)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn positive_choice_immaterial<F: Field>(s: RootSystem<F>, top: usize) -> CliResult<bool> {
    let other = DunklContext::new(s.with_negated_positive())?;
    let ctx = DunklContext::new(s)?;
    for p in monomials::<F>(ctx.dim(), top) {
        if ctx.apply_all(&p)? != other.apply_all(&p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn operator_algebra() -> CliResult<(bool, Value)> {
    let top = 8;
    let z3 = || RootSystem::<Rational>::z2(&[q(1, 2), q(1, 1), q(3, 2)]);
    let i3 = || RootSystem::<QSqrt3>::dihedral(3, &[q(1, 2)]);
    let i4 = || RootSystem::<Rational>::dihedral(4, &[q(1, 2), q(1, 1)]);
    let i6 = || RootSystem::<QSqrt3>::dihedral(6, &[q(1, 3), q(2, 1)]);
    let checks = vec![
        ("commute Z2^3 kappa=(1/2,1,3/2)", commute(z3()?, top)?),
        ("commute I2(3) kappa=1/2", commute(i3()?, top)?),
        ("commute I2(4) kappa=(1/2,1)", commute(i4()?, top)?),
        ("commute I2(6) kappa=(1/3,2)", commute(i6()?, top)?),
        ("kappa=0 gives partials on Z2^3", degenerates(RootSystem::<Rational>::z2(&[q(0, 1), q(0, 1), q(0, 1)])?, top)?),
        ("kappa=0 gives partials on I2(3)", degenerates(RootSystem::<QSqrt3>::dihedral(3, &[q(0, 1)])?, top)?),
        ("positive system choice on Z2^3", positive_choice_immaterial(z3()?, top)?),
        ("positive system choice on I2(3)", positive_choice_immaterial(i3()?, top)?),
        ("positive system choice on I2(4)", positive_choice_immaterial(i4()?, top)?),
    ];
    let all = checks.iter().all(|c| c.1);
    let rows: Vec<Value> = checks.iter().map(|(name, ok)| json!({ "check": name, "holds": ok })).collect();
    Ok((all, json!({ "max_degree": top, "checks": rows })))
}

fn normalization() -> CliResult<(bool, Value)> {
    let mut rows = Vec::new();
    let mut worst_all = 0.0f64;
    for lambda in [0.5, 1.0, 1.5, 3.5] {
        let c = c_lambda(lambda)?;
        let rule = GaussJacobi::new(48, lambda - 0.5, lambda - 0.5)?;
        let mut worst = 0.0f64;
        for n in 0..=40 {
            let lhs = c * rule.integrate(|t| gegenbauer(n, lambda, t).powi(2));
            let rhs = lambda / (n as f64 + lambda) * gegenbauer_at_one(n, lambda);
            worst = worst.max(((lhs - rhs) / rhs).abs());
        }
        worst_all = worst_all.max(worst);
        rows.push(json!({ "lambda": lambda, "max_relative_error": worst }));
    }
    Ok((worst_all <= NORMALIZATION_TOL, json!({ "tolerance": NORMALIZATION_TOL, "n_max": 40, "cases": rows })))
}

fn coefficient_oracle() -> CliResult<(bool, Value)> {
    let n_max = 12;
    let mut rows = Vec::new();
    let mut all = true;
    for (lq, label) in [(q(1, 2), "1/2"), (q(1, 1), "1"), (q(3, 2), "3/2")] {
        let lambda = Field::to_f64(&lq);
        let (mut diag, mut off) = (0.0f64, 0.0f64);
        for k in 0..=10 {
            let g = UnivariateFn::gegenbauer(k, &lq);
            let b = GegenbauerSeries::expand(&g, lambda, n_max, None)?;
            for (n, bn) in b.coeffs().iter().enumerate() {
                if n == k {
                    diag = diag.max((bn - lambda / (k as f64 + lambda)).abs());
                } else {
                    off = off.max(bn.abs());
                }
            }
        }
        all &= diag <= DIAGONAL_TOL && off <= OFF_DIAGONAL_TOL;
        rows.push(json!({ "lambda": label, "diagonal_error": diag, "off_diagonal_max": off }));
    }
    Ok((all, json!({ "diagonal_tolerance": DIAGONAL_TOL, "off_diagonal_tolerance": OFF_DIAGONAL_TOL, "cases": rows })))
}

fn cesaro_error(g: &UnivariateFn, order: usize) -> CliResult<f64> {
    let s = GegenbauerSeries::expand(g, 1.0, order, None)?;
    Ok(s.uniform_error(g, CesaroParams { delta: 2.0, order }, CESARO_GRID)?)
}

fn cesaro_convergence() -> CliResult<(bool, Value)> {
    let abs = UnivariateFn::abs();
    let e16 = cesaro_error(&abs, 16)?;
    let e256 = cesaro_error(&abs, 256)?;
    let abs_ok = e256 < CESARO_RATIO * e16 && e256 <= CESARO_ABS_TOL;
    let mut polys = Vec::new();
    let mut poly_ok = true;
    for k in 0..=8 {
        let g = UnivariateFn::monomial(k);
        let e = cesaro_error(&g, 256)?;
        let sup = g.sup_on_grid(CESARO_GRID);
        let ok = e <= CESARO_POLY_REL_TOL * sup;
        poly_ok &= ok;
        polys.push(json!({ "g": format!("t^{k}"), "error_256": e, "sup_g": sup, "ok": ok }));
    }
    let details = json!({
        "lambda": 1,
        "delta": 2,
        "abs": { "error_16": e16, "error_256": e256, "ratio": e256 / e16, "ok": abs_ok },
        "polynomials": polys,
    });
    Ok((abs_ok && poly_ok, details))
}

fn verdict_list(g: &UnivariateFn, lambda: &Rational) -> CliResult<(Vec<Verdict>, Vec<usize>)> {
    let r = check_with_lambda(g, lambda, &FundamentalityOptions::default())?;
    Ok((r.verdicts.clone(), r.witnesses().to_vec()))
}

fn verdicts() -> CliResult<(bool, Value)> {
    let lambda = q(1, 1);
    let n_max = FundamentalityOptions::default().n_max;
    let c3 = || UnivariateFn::gegenbauer(3, &lambda);
    let zero = || UnivariateFn::polynomial(vec![q(0, 1)]);
    type Maker<'a> = Box<dyn Fn() -> UnivariateFn + 'a>;
    let cases: Vec<(&str, Maker, Vec<usize>)> = vec![
        ("C_3", Box::new(c3), (0..=n_max).filter(|n| *n != 3).collect()),
        ("zero", Box::new(zero), (0..=n_max).collect()),
        ("exp", Box::new(UnivariateFn::exp), Vec::new()),
    ];
    let mut rows = Vec::new();
    let mut all = true;
    for (name, make, want) in cases {
        let (base, witnesses) = verdict_list(&make(), &lambda)?;
        let mut invariant = true;
        for c in [q(1000, 1), q(1, 1000)] {
            invariant &= verdict_list(&make().scaled(&c), &lambda)?.0 == base;
        }
        let ok = witnesses == want && invariant;
        all &= ok;
        rows.push(json!({ "g": name, "witnesses": witnesses, "expected": want, "scale_invariant": invariant, "ok": ok }));
    }
    Ok((all, json!({ "lambda": 1, "n_max": n_max, "cases": rows })))
}

fn certificates() -> CliResult<(bool, Value)> {
    let cases: Vec<(&str, Vec<Rational>, usize)> = vec![
        ("Z2^2 kappa=(1/2,1/2)", vec![q(1, 2), q(1, 2)], DEFAULT_DEGREE_CIRCLE),
        ("Z2^2 kappa=(1/3,2)", vec![q(1, 3), q(2, 1)], DEFAULT_DEGREE_CIRCLE),
        ("Z2^3 kappa=(1,1,1)", vec![q(1, 1), q(1, 1), q(1, 1)], DEFAULT_DEGREE_SPHERE),
    ];
    let mut rows = Vec::new();
    let mut all = true;
    let mut sigma_err = f64::NAN;
    for (i, (name, kappa, degree)) in cases.into_iter().enumerate() {
        let s = RootSystem::<Rational>::z2(&kappa)?;
        let rule = build_rule(&WeightSpec::from_system(&s), degree)?;
        let kf: Vec<f64> = kappa.iter().map(Field::to_f64).collect();
        let err = z2_certificate(&rule, &kf)?;
        all &= err <= CERTIFICATE_TOL;
        if i == 0 {
            sigma_err = (rule.sigma() - 2.0).abs();
        }
        rows.push(json!({
            "system": name,
            "exactness_degree": rule.exactness_degree(),
            "max_error": err,
            "sigma": rule.sigma(),
        }));
    }
    all &= sigma_err <= SIGMA_TOL;
    let details = json!({
        "tolerance": CERTIFICATE_TOL,
        "sigma_tolerance": SIGMA_TOL,
        "sigma_error_kappa_half": sigma_err,
        "systems": rows,
    });
    Ok((all, details))
}

fn summability() -> CliResult<(bool, Value)> {
    let m_max = 5;
    let exp_series = GegenbauerSeries::expand(&UnivariateFn::exp(), 1.0, m_max, None)?;
    let abs_series = GegenbauerSeries::expand(&UnivariateFn::abs(), 0.5, m_max, None)?;
    let cases: [(&str, f64, Vec<f64>); 2] = [
        ("exp, lambda=1, delta=2", 2.0, exp_series.coeffs().to_vec()),
        ("abs, lambda=1/2, delta=3/2", 1.5, abs_series.coeffs().to_vec()),
    ];
    let mut rows = Vec::new();
    let mut all = true;
    for (name, delta, b) in cases {
        let cols = summability_limits(|n, m| cesaro_ratio(n as usize, m, delta) * b[m], m_max, Ladder::default(), SUMMABILITY_TOL)?;
        let errs: Vec<f64> = cols.iter().map(|c| (c.limit - b[c.m]).abs()).collect();
        let ok = cols.iter().all(|c| c.converged) && errs.iter().all(|e| *e <= SUMMABILITY_TOL);
        all &= ok;
        rows.push(json!({
            "series": name,
            "b": b,
            "limits": cols.iter().map(|c| c.limit).collect::<Vec<_>>(),
            "errors": errs,
            "ok": ok,
        }));
    }
    Ok((all, json!({ "tolerance": SUMMABILITY_TOL, "m_max": m_max, "series": rows })))
}
