//! Fundamentality of `{g(<x, y>) : y in S^{d-1}}` in `C(S^{d-1})`.
//!
//! The set is fundamental exactly when every Gegenbauer coefficient of `g`
//! at `lambda_kappa` is nonzero. A finite computation can only see
//! `b_0..b_{n_max}`, and floating point cannot certify that a number is not
//! zero, so the report keeps the magnitudes and the (relative) threshold
//! next to the verdicts and never claims more than "up to `n_max`".
//!
//! [`summability_limits`] estimates the column limits `lim_n A_nm` of a
//! row-finite summability matrix by Richardson extrapolation on a doubling
//! ladder of `n`.

use alloc::vec::Vec;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::field::{Field, Rational};
use crate::gegenbauer::{coefficients, coefficients_exact, default_quad_order, UnivariateFn};
use crate::roots::RootSystem;

pub const DEFAULT_N_MAX: usize = 32;
pub const DEFAULT_ZERO_THRESHOLD: f64 = 1e-10;
const SCALE_GRID: usize = 1001;

/// `lambda_kappa = sum_{v in R_+} kappa(v) + (d - 2)/2`.
pub fn lambda_kappa<F: Field>(system: &RootSystem<F>) -> Result<Rational> {
    let d = system.dim();
    if d == 2 && system.kappa_is_zero() {
        return Err(Error::Degenerate("d = 2 requires a nonzero multiplicity function".into()));
    }
    let lambda = system.kappa_sum() + Rational::new((d as i64 - 2).into(), 2.into());
    if !lambda.is_positive() {
        return Err(Error::Degenerate(alloc::format!("lambda_kappa = {lambda} is not positive")));
    }
    Ok(lambda)
}

/// How the coefficients are computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoeffMode {
    /// Exact rational moments when `g` is a polynomial, quadrature otherwise.
    Auto,
    Quadrature,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FundamentalityOptions {
    pub n_max: usize,
    pub zero_threshold: f64,
    pub quad_order: Option<usize>,
    pub mode: CoeffMode,
}

impl Default for FundamentalityOptions {
    fn default() -> Self {
        Self { n_max: DEFAULT_N_MAX, zero_threshold: DEFAULT_ZERO_THRESHOLD, quad_order: None, mode: CoeffMode::Auto }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Nonzero,
    NumericallyZero,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Overall {
    FundamentalUpTo(usize),
    NotFundamental { witnesses: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct FundamentalityReport {
    pub lambda: Rational,
    pub n_max: usize,
    pub coefficients: Vec<f64>,
    /// Present when the exact route was taken.
    pub exact_coefficients: Option<Vec<Rational>>,
    pub zero_threshold: f64,
    /// `sup |g|` over a Chebyshev grid (1 when that is zero); the threshold
    /// is relative to it.
    pub scale: f64,
    pub verdicts: Vec<Verdict>,
    pub overall: Overall,
    /// Nodes per panel, `None` on the exact route.
    pub quad_order: Option<usize>,
}

impl FundamentalityReport {
    pub fn is_fundamental(&self) -> bool {
        matches!(self.overall, Overall::FundamentalUpTo(_))
    }

    pub fn witnesses(&self) -> &[usize] {
        match &self.overall {
            Overall::FundamentalUpTo(_) => &[],
            Overall::NotFundamental { witnesses } => witnesses,
        }
    }
}

pub fn check_fundamentality<F: Field>(
    g: &UnivariateFn,
    system: &RootSystem<F>,
    opts: &FundamentalityOptions,
) -> Result<FundamentalityReport> {
    check_with_lambda(g, &lambda_kappa(system)?, opts)
}

/// The same test for an explicit `lambda > 0`.
pub fn check_with_lambda(g: &UnivariateFn, lambda: &Rational, opts: &FundamentalityOptions) -> Result<FundamentalityReport> {
    if !lambda.is_positive() {
        return Err(Error::Degenerate("lambda must be positive".into()));
    }
    if opts.zero_threshold.is_nan() || opts.zero_threshold < 0.0 {
        return Err(Error::InvalidParameters("zero threshold must be non-negative".into()));
    }
    let sup = g.sup_on_grid(SCALE_GRID);
    let scale = if sup > 0.0 { sup } else { 1.0 };
    let cut = opts.zero_threshold * scale;
    let (coeffs, exact, quad_order) = match (opts.mode, g.exact()) {
        (CoeffMode::Auto, Some(poly)) => {
            let e = coefficients_exact(poly, lambda, opts.n_max)?;
            (e.iter().map(Field::to_f64).collect(), Some(e), None)
        }
        _ => {
            let order = opts.quad_order.unwrap_or_else(|| default_quad_order(g, opts.n_max));
            (coefficients(g, Field::to_f64(lambda), opts.n_max, order)?, None, Some(order))
        }
    };
    let verdicts: Vec<Verdict> = coeffs
        .iter()
        .map(|b| if libm::fabs(*b) <= cut { Verdict::NumericallyZero } else { Verdict::Nonzero })
        .collect();
    let witnesses: Vec<usize> = verdicts
        .iter()
        .enumerate()
        .filter(|(_, v)| **v == Verdict::NumericallyZero)
        .map(|(i, _)| i)
        .collect();
    let overall = if witnesses.is_empty() {
        Overall::FundamentalUpTo(opts.n_max)
    } else {
        Overall::NotFundamental { witnesses }
    };
    Ok(FundamentalityReport {
        lambda: lambda.clone(),
        n_max: opts.n_max,
        coefficients: coeffs,
        exact_coefficients: exact,
        zero_threshold: opts.zero_threshold,
        scale,
        verdicts,
        overall,
        quad_order,
    })
}

/// The rows `n = start, 2 start, 4 start, ...` at which a column is sampled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ladder {
    pub start: u64,
    pub levels: usize,
}

impl Default for Ladder {
    fn default() -> Self {
        Self { start: 16, levels: 12 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ColumnLimit {
    pub m: usize,
    pub limit: f64,
    /// Smallest change between successive diagonal extrapolants.
    pub change: f64,
    pub converged: bool,
    /// Raw entry at the last rung of the ladder.
    pub last_entry: f64,
}

/// Estimates `lim_{n -> inf} A(n, m)` for `m = 0..=m_max`.
///
/// The Richardson table assumes an expansion in powers of `1/n`. A column is
/// flagged as not converged when the best pair of successive extrapolants
/// differs by more than `tol * max(1, |limit|)` or when entries are not finite.
pub fn summability_limits<A: Fn(u64, usize) -> f64>(a: A, m_max: usize, ladder: Ladder, tol: f64) -> Result<Vec<ColumnLimit>> {
    if ladder.levels < 2 {
        return Err(Error::InvalidParameters("the ladder needs at least two rungs".into()));
    }
    if ladder.start <= m_max as u64 {
        return Err(Error::InvalidParameters("the ladder must start beyond m_max".into()));
    }
    let ns: Vec<u64> = (0..ladder.levels).map(|k| ladder.start << k).collect();
    let mut out = Vec::with_capacity(m_max + 1);
    for m in 0..=m_max {
        let raw: Vec<f64> = ns.iter().map(|&n| a(n, m)).collect();
        let last_entry = *raw.last().unwrap_or(&f64::NAN);
        if raw.iter().any(|v| !v.is_finite()) {
            out.push(ColumnLimit { m, limit: f64::NAN, change: f64::INFINITY, converged: false, last_entry });
            continue;
        }
        // t[k][j]: j-th extrapolant using rungs k-j..=k
        let mut t: Vec<Vec<f64>> = Vec::with_capacity(raw.len());
        for (k, v) in raw.iter().enumerate() {
            let mut row = alloc::vec![*v];
            for j in 1..=k {
                let f = (1u64 << j) as f64;
                let prev = row[j - 1];
                row.push(prev + (prev - t[k - 1][j - 1]) / (f - 1.0));
            }
            t.push(row);
        }
        let mut best = (f64::INFINITY, t[0][0]);
        for k in 1..t.len() {
            let diff = (t[k][k] - t[k - 1][k - 1]).abs();
            if diff < best.0 {
                best = (diff, t[k][k]);
            }
        }
        let (change, limit) = best;
        let converged = change <= tol * limit.abs().max(1.0);
        out.push(ColumnLimit { m, limit, change, converged, last_entry });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rational;
    use crate::gegenbauer::cesaro_ratio;

    #[test]
    fn lambda_values() {
        let s = RootSystem::<Rational>::z2(&alloc::vec![rational(1, 1); 3]).unwrap();
        assert_eq!(lambda_kappa(&s).unwrap(), rational(7, 2));
        let s = RootSystem::<Rational>::z2(&[rational(1, 2), rational(1, 2)]).unwrap();
        assert_eq!(lambda_kappa(&s).unwrap(), rational(1, 1));
        let s = RootSystem::<Rational>::z2(&alloc::vec![rational(0, 1); 3]).unwrap();
        assert_eq!(lambda_kappa(&s).unwrap(), rational(1, 2));
        let s = RootSystem::<Rational>::z2(&[rational(0, 1), rational(0, 1)]).unwrap();
        assert!(matches!(lambda_kappa(&s), Err(Error::Degenerate(_))));
    }

    #[test]
    fn gegenbauer_three_is_not_fundamental() {
        let l = rational(1, 1);
        let g = UnivariateFn::gegenbauer(3, &l);
        let r = check_with_lambda(&g, &l, &FundamentalityOptions { n_max: 8, ..Default::default() }).unwrap();
        assert_eq!(r.witnesses(), &[0, 1, 2, 4, 5, 6, 7, 8]);
        assert_eq!(r.exact_coefficients.as_ref().unwrap()[3], rational(1, 4));
        let q = check_with_lambda(
            &g,
            &l,
            &FundamentalityOptions { n_max: 8, mode: CoeffMode::Quadrature, ..Default::default() },
        )
        .unwrap();
        assert_eq!(q.verdicts, r.verdicts);
    }

    #[test]
    fn zero_function_has_all_witnesses() {
        let g = UnivariateFn::polynomial(Vec::new());
        let r = check_with_lambda(&g, &rational(1, 1), &FundamentalityOptions { n_max: 5, ..Default::default() }).unwrap();
        assert_eq!(r.witnesses(), &[0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn exp_is_fundamental_up_to_ten() {
        // b_10 is about 2.5e-11, below the default cut of 1e-10 * e
        let opts = FundamentalityOptions { n_max: 10, zero_threshold: 1e-12, ..Default::default() };
        let r = check_with_lambda(&UnivariateFn::exp(), &rational(1, 1), &opts).unwrap();
        assert_eq!(r.overall, Overall::FundamentalUpTo(10));
        assert!(r.coefficients.iter().all(|b| *b > 0.0));
    }

    #[test]
    fn limits_of_simple_columns() {
        let b = [0.5, -1.25, 3.0];
        let lim = summability_limits(|n, m| b[m] * n as f64 / (n as f64 + 1.0), 2, Ladder::default(), 1e-10).unwrap();
        for (c, want) in lim.iter().zip(b) {
            assert!(c.converged);
            assert!((c.limit - want).abs() < 1e-8);
        }
        let lim = summability_limits(|n, m| b[m] * cesaro_ratio(n as usize, m, 2.0), 2, Ladder::default(), 1e-10).unwrap();
        for (c, want) in lim.iter().zip(b) {
            assert!((c.limit - want).abs() < 1e-8);
        }
        let lim = summability_limits(|_, _| 7.0, 0, Ladder::default(), 1e-12).unwrap();
        assert_eq!(lim[0].limit, 7.0);
    }

    #[test]
    fn divergent_columns_are_flagged() {
        let lim = summability_limits(|n, _| n as f64, 1, Ladder::default(), 1e-10).unwrap();
        assert!(lim.iter().all(|c| !c.converged));
        let lim = summability_limits(|n, _| if (n / 16).trailing_zeros() % 2 == 0 { 1.0 } else { -1.0 }, 0, Ladder::default(), 1e-10)
            .unwrap();
        assert!(!lim[0].converged);
        assert!(summability_limits(|_, _| 1.0, 20, Ladder::default(), 1e-10).is_err());
    }
}
