//! Gegenbauer polynomials, Gegenbauer expansions and Cesaro means.
//!
//! Coefficients are normalised as
//! `b_n = c_lambda / C_n^lambda(1) * ∫ g(t) C_n^lambda(t) (1 - t^2)^(lambda - 1/2) dt`
//! with `c_lambda = 1 / B(1/2, lambda + 1/2)`, so that
//! `g = sum_n b_n (n + lambda)/lambda C_n^lambda` formally.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::Rational;
use crate::quadrature::{beta, compensated_sum, gamma, GaussJacobi};

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameters(alloc::format!("lambda must be positive, got {lambda}")))
    }
}

/// `C_0(t), ..., C_{n_max}(t)` by the three-term recurrence.
pub fn gegenbauer_all(n_max: usize, lambda: f64, t: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(1.0);
    if n_max >= 1 {
        out.push(2.0 * lambda * t);
    }
    for n in 2..=n_max {
        let nf = n as f64;
        let v = (2.0 * t * (nf + lambda - 1.0) * out[n - 1] - (nf + 2.0 * lambda - 2.0) * out[n - 2]) / nf;
        out.push(v);
    }
    out
}

pub fn gegenbauer(n: usize, lambda: f64, t: f64) -> f64 {
    gegenbauer_all(n, lambda, t)[n]
}

/// `C_n^lambda(1) = (2 lambda)_n / n!`.
pub fn gegenbauer_at_one(n: usize, lambda: f64) -> f64 {
    (1..=n).fold(1.0, |acc, j| acc * (j as f64 + 2.0 * lambda - 1.0) / j as f64)
}

pub fn gegenbauer_at_one_exact(n: usize, lambda: &Rational) -> Rational {
    let two_l = lambda * Rational::from_integer(2.into());
    (1..=n).fold(Rational::one(), |acc, j| {
        let jr = Rational::from_integer((j as i64).into());
        acc * (&jr + &two_l - Rational::one()) / jr
    })
}

/// Monomial coefficients (ascending powers) of `C_n^lambda` over the rationals.
pub fn gegenbauer_coeffs_exact(n: usize, lambda: &Rational) -> Vec<Rational> {
    let int = |k: usize| Rational::from_integer((k as i64).into());
    let mut prev = vec![Rational::one()];
    if n == 0 {
        return prev;
    }
    let mut cur = vec![Rational::zero(), lambda * int(2)];
    for k in 2..=n {
        let a = int(2) * (int(k) + lambda - Rational::one()) / int(k);
        let b = (int(k) + lambda * int(2) - int(2)) / int(k);
        let mut next = vec![Rational::zero(); k + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += &a * c;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= &b * c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// Monomial coefficients of `C_0, ..., C_{n_max}` in floating point.
pub fn gegenbauer_monomial_table(n_max: usize, lambda: f64) -> Vec<Vec<f64>> {
    let mut table: Vec<Vec<f64>> = vec![vec![1.0]];
    if n_max >= 1 {
        table.push(vec![0.0, 2.0 * lambda]);
    }
    for k in 2..=n_max {
        let kf = k as f64;
        let a = 2.0 * (kf + lambda - 1.0) / kf;
        let b = (kf + 2.0 * lambda - 2.0) / kf;
        let mut next = vec![0.0; k + 1];
        for (i, c) in table[k - 1].iter().enumerate() {
            next[i + 1] += a * c;
        }
        for (i, c) in table[k - 2].iter().enumerate() {
            next[i] -= b * c;
        }
        table.push(next);
    }
    table
}

/// `c_lambda = 1 / B(1/2, lambda + 1/2)`.
pub fn c_lambda(lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(1.0 / beta(0.5, lambda + 0.5))
}

/// `c_lambda` as the reciprocal of the Gauss-Jacobi mass of
/// `(1 - t^2)^(lambda - 1/2)`, which goes through the Jacobi mass formula
/// rather than the Beta form.
pub fn c_lambda_quadrature(lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    let a = lambda - 0.5;
    let mass = libm::pow(2.0, 2.0 * lambda) * gamma(a + 1.0) * gamma(a + 1.0) / gamma(2.0 * lambda + 1.0);
    let rule = GaussJacobi::new(4, a, a)?;
    let ratio = rule.mass() / mass;
    if (ratio - 1.0).abs() > 1e-12 {
        return Err(Error::Quadrature(alloc::format!("rule mass off by {}", ratio - 1.0)));
    }
    Ok(1.0 / mass)
}

/// Normalised moments `c_lambda ∫ t^k (1 - t^2)^(lambda - 1/2) dt`, `k = 0..=k_max`.
pub fn moments_exact(k_max: usize, lambda: &Rational) -> Vec<Rational> {
    let half = Rational::new(1.into(), 2.into());
    let mut out = Vec::with_capacity(k_max + 1);
    let mut even = Rational::one();
    for k in 0..=k_max {
        if k % 2 == 1 {
            out.push(Rational::zero());
        } else {
            out.push(even.clone());
            let i = Rational::from_integer(((k / 2) as i64).into());
            even = even * (&half + &i) / (lambda + Rational::one() + i);
        }
    }
    out
}

/// A real function on `[-1, 1]` together with what is known about it.
pub struct UnivariateFn {
    label: String,
    eval: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    kinks: Vec<f64>,
    exact: Option<Vec<Rational>>,
}

impl fmt::Debug for UnivariateFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UnivariateFn")
            .field("label", &self.label)
            .field("kinks", &self.kinks)
            .field("exact", &self.exact)
            .finish()
    }
}

impl UnivariateFn {
    pub fn new<G: Fn(f64) -> f64 + Send + Sync + 'static>(label: impl Into<String>, g: G) -> Self {
        Self { label: label.into(), eval: Box::new(g), kinks: Vec::new(), exact: None }
    }

    /// Marks interior points where the function is not smooth; quadrature
    /// panels split there.
    pub fn with_kinks(mut self, kinks: Vec<f64>) -> Self {
        let mut k: Vec<f64> = kinks.into_iter().filter(|t| *t > -1.0 && *t < 1.0).collect();
        k.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
        k.dedup();
        self.kinks = k;
        self
    }

    /// Polynomial with rational coefficients in ascending powers.
    pub fn polynomial(coeffs: Vec<Rational>) -> Self {
        let float: Vec<f64> = coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
        let label = alloc::format!("poly(deg {})", coeffs.len().saturating_sub(1));
        let mut f = Self::new(label, move |t| float.iter().rev().fold(0.0, |acc, c| acc * t + c));
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        f.exact = Some(coeffs);
        f
    }

    pub fn monomial(k: usize) -> Self {
        let mut c = vec![Rational::zero(); k + 1];
        c[k] = Rational::one();
        Self::polynomial(c).labelled(alloc::format!("t^{k}"))
    }

    pub fn exp() -> Self {
        Self::new("exp", libm::exp)
    }

    pub fn abs() -> Self {
        Self::new("abs", libm::fabs).with_kinks(vec![0.0])
    }

    pub fn gegenbauer(k: usize, lambda: &Rational) -> Self {
        Self::polynomial(gegenbauer_coeffs_exact(k, lambda)).labelled(alloc::format!("C_{k}"))
    }

    /// `1 / (1 + (a t)^2)`.
    pub fn runge(a: f64) -> Self {
        Self::new(alloc::format!("runge({a})"), move |t| 1.0 / (1.0 + a * a * t * t))
    }

    /// `c * g`.
    pub fn scaled(self, c: &Rational) -> Self {
        let cf = c.to_f64().unwrap_or(f64::NAN);
        let exact = self.exact.map(|v| v.into_iter().map(|x| x * c).collect());
        let inner = self.eval;
        Self {
            label: alloc::format!("{cf}*{}", self.label),
            eval: Box::new(move |t| cf * inner(t)),
            kinks: self.kinks,
            exact,
        }
    }

    pub fn labelled(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    pub fn kinks(&self) -> &[f64] {
        &self.kinks
    }

    pub fn is_smooth(&self) -> bool {
        self.kinks.is_empty()
    }

    pub fn exact(&self) -> Option<&[Rational]> {
        self.exact.as_deref()
    }

    pub fn exact_degree(&self) -> Option<usize> {
        self.exact.as_ref().map(|c| c.len().saturating_sub(1))
    }

    /// `max |g|` on a Chebyshev grid of `points` points.
    pub fn sup_on_grid(&self, points: usize) -> f64 {
        chebyshev_grid(points).into_iter().map(|t| libm::fabs(self.eval(t))).fold(0.0, f64::max)
    }
}

/// `cos(pi j / (points - 1))`, `j = 0..points`.
pub fn chebyshev_grid(points: usize) -> Vec<f64> {
    if points <= 1 {
        return vec![0.0];
    }
    (0..points)
        .map(|j| libm::cos(core::f64::consts::PI * j as f64 / (points - 1) as f64))
        .collect()
}

/// Weighted nodes for `∫ F(t) (1 - t^2)^(lambda - 1/2) dt`, panelled at the
/// function's kinks with the endpoint singularities absorbed into Jacobi rules.
pub fn weighted_nodes(lambda: f64, kinks: &[f64], per_panel: usize) -> Result<Vec<(f64, f64)>> {
    check_lambda(lambda)?;
    let a = lambda - 0.5;
    let mut breaks = vec![-1.0];
    breaks.extend(kinks.iter().copied().filter(|t| *t > -1.0 && *t < 1.0));
    breaks.push(1.0);
    let mut out = Vec::new();
    for w in breaks.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let half = (hi - lo) / 2.0;
        let mid = (hi + lo) / 2.0;
        let (left, right) = (lo == -1.0, hi == 1.0);
        match (left, right) {
            (true, true) => {
                let r = GaussJacobi::new(per_panel, a, a)?;
                out.extend(r.nodes().iter().copied().zip(r.weights().iter().copied()));
            }
            (false, true) => {
                let r = GaussJacobi::new(per_panel, a, 0.0)?;
                let scale = libm::pow(half, a + 1.0);
                for (&u, &w) in r.nodes().iter().zip(r.weights()) {
                    let t = mid + half * u;
                    out.push((t, w * scale * libm::pow(1.0 + t, a)));
                }
            }
            (true, false) => {
                let r = GaussJacobi::new(per_panel, 0.0, a)?;
                let scale = libm::pow(half, a + 1.0);
                for (&u, &w) in r.nodes().iter().zip(r.weights()) {
                    let t = mid + half * u;
                    out.push((t, w * scale * libm::pow(1.0 - t, a)));
                }
            }
            (false, false) => {
                let r = GaussJacobi::legendre(per_panel)?;
                for (&u, &w) in r.nodes().iter().zip(r.weights()) {
                    let t = mid + half * u;
                    out.push((t, w * half * libm::pow(1.0 - t * t, a)));
                }
            }
        }
    }
    Ok(out)
}

/// Default nodes per panel for expanding `g` up to degree `n_max`:
/// `2 (n_max + k) + 16`, with `k = deg g` for polynomials and 64 otherwise.
pub fn default_quad_order(g: &UnivariateFn, n_max: usize) -> usize {
    2 * (n_max + g.exact_degree().unwrap_or(64)) + 16
}

/// `b_0, ..., b_{n_max}` by quadrature with `per_panel` nodes per panel.
pub fn coefficients(g: &UnivariateFn, lambda: f64, n_max: usize, per_panel: usize) -> Result<Vec<f64>> {
    let c = c_lambda(lambda)?;
    let nodes = weighted_nodes(lambda, g.kinks(), per_panel)?;
    let evaluated: Vec<(f64, Vec<f64>)> = nodes
        .iter()
        .map(|&(t, w)| (w * g.eval(t), gegenbauer_all(n_max, lambda, t)))
        .collect();
    (0..=n_max)
        .map(|n| {
            let integral = compensated_sum(evaluated.iter().map(|(wg, cn)| wg * cn[n]));
            let b = c * integral / gegenbauer_at_one(n, lambda);
            if b.is_finite() {
                Ok(b)
            } else {
                Err(Error::Quadrature(alloc::format!("coefficient b_{n} is not finite")))
            }
        })
        .collect()
}

/// `b_0, ..., b_{n_max}` exactly, for a polynomial `g` and rational `lambda`.
pub fn coefficients_exact(g: &[Rational], lambda: &Rational, n_max: usize) -> Result<Vec<Rational>> {
    if *lambda <= Rational::zero() {
        return Err(Error::InvalidParameters("lambda must be positive".into()));
    }
    let deg_g = g.len().saturating_sub(1);
    let mom = moments_exact(deg_g + n_max, lambda);
    Ok((0..=n_max)
        .map(|n| {
            if n > deg_g {
                return Rational::zero();
            }
            let cn = gegenbauer_coeffs_exact(n, lambda);
            let mut acc = Rational::zero();
            for (i, gi) in g.iter().enumerate() {
                if gi.is_zero() {
                    continue;
                }
                for (j, cj) in cn.iter().enumerate() {
                    if (i + j) % 2 == 0 && !cj.is_zero() {
                        acc += gi * cj * &mom[i + j];
                    }
                }
            }
            acc / gegenbauer_at_one_exact(n, lambda)
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CesaroParams {
    pub delta: f64,
    pub order: usize,
}

/// `A_n^delta = binom(n + delta, n)`.
pub fn cesaro_number(n: usize, delta: f64) -> f64 {
    (1..=n).fold(1.0, |acc, j| acc * (j as f64 + delta) / j as f64)
}

/// `A_{n-m}^delta / A_n^delta` for `m <= n`, zero otherwise.
pub fn cesaro_ratio(n: usize, m: usize, delta: f64) -> f64 {
    if m > n {
        return 0.0;
    }
    (n - m + 1..=n).fold(1.0, |acc, j| acc * j as f64 / (j as f64 + delta))
}

/// A truncated Gegenbauer expansion `b_0..b_N` for one `lambda`.
#[derive(Clone, Debug, PartialEq)]
pub struct GegenbauerSeries {
    lambda: f64,
    coeffs: Vec<f64>,
}

impl GegenbauerSeries {
    pub fn expand(g: &UnivariateFn, lambda: f64, n_max: usize, per_panel: Option<usize>) -> Result<Self> {
        let order = per_panel.unwrap_or_else(|| default_quad_order(g, n_max));
        Ok(Self { lambda, coeffs: coefficients(g, lambda, n_max, order)? })
    }

    pub fn from_coeffs(lambda: f64, coeffs: Vec<f64>) -> Result<Self> {
        check_lambda(lambda)?;
        Ok(Self { lambda, coeffs })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn max_degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn weights(&self, p: CesaroParams) -> Result<Vec<f64>> {
        if p.order > self.max_degree() {
            return Err(Error::DegreeExceedsTable { degree: p.order, max: self.max_degree() });
        }
        if p.delta.is_nan() || p.delta < 0.0 {
            return Err(Error::InvalidParameters("Cesaro delta must be non-negative".into()));
        }
        let l = self.lambda;
        Ok((0..=p.order)
            .map(|m| cesaro_ratio(p.order, m, p.delta) * self.coeffs[m] * (m as f64 + l) / l)
            .collect())
    }

    /// `sigma_N^delta g(t) = sum_m A_{N-m}/A_N b_m (m+lambda)/lambda C_m(t)`.
    pub fn cesaro_mean(&self, p: CesaroParams, t: f64) -> Result<f64> {
        let w = self.weights(p)?;
        let c = gegenbauer_all(p.order, self.lambda, t);
        Ok(compensated_sum(w.iter().zip(&c).map(|(a, b)| a * b)))
    }

    /// Partial sum of the series (the `delta = 0` mean).
    pub fn partial_sum(&self, order: usize, t: f64) -> Result<f64> {
        self.cesaro_mean(CesaroParams { delta: 0.0, order }, t)
    }

    /// Monomial coefficients (ascending powers) of the Cesaro mean.
    pub fn cesaro_monomial_coeffs(&self, p: CesaroParams) -> Result<Vec<f64>> {
        let w = self.weights(p)?;
        let table = gegenbauer_monomial_table(p.order, self.lambda);
        let mut out = vec![0.0; p.order + 1];
        for (wm, row) in w.iter().zip(&table) {
            for (k, c) in row.iter().enumerate() {
                out[k] += wm * c;
            }
        }
        Ok(out)
    }

    /// `max_t |g(t) - sigma_N^delta g(t)|` over a Chebyshev grid.
    pub fn uniform_error(&self, g: &UnivariateFn, p: CesaroParams, points: usize) -> Result<f64> {
        let w = self.weights(p)?;
        let mut worst = 0.0f64;
        for t in chebyshev_grid(points) {
            let c = gegenbauer_all(p.order, self.lambda, t);
            let s = compensated_sum(w.iter().zip(&c).map(|(a, b)| a * b));
            worst = worst.max(libm::fabs(g.eval(t) - s));
        }
        Ok(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rational;

    #[test]
    fn recurrence_matches_closed_forms() {
        // lambda = 1: Chebyshev U_n(cos th) = sin((n+1)th)/sin th
        let th: f64 = 0.7;
        let c = gegenbauer_all(10, 1.0, libm::cos(th));
        for (n, v) in c.iter().enumerate() {
            let u = libm::sin((n as f64 + 1.0) * th) / libm::sin(th);
            assert!((v - u).abs() < 1e-13);
        }
        assert!((gegenbauer(2, 1.5, 0.3) - (1.5 * (2.0 * 2.5 * 0.09 - 1.0))).abs() < 1e-15);
    }

    #[test]
    fn value_at_one() {
        for n in 0..12 {
            let l = 0.75;
            assert!((gegenbauer(n, l, 1.0) - gegenbauer_at_one(n, l)).abs() < 1e-12 * gegenbauer_at_one(n, l));
        }
        assert_eq!(gegenbauer_at_one_exact(3, &rational(1, 1)), rational(4, 1));
    }

    #[test]
    fn exact_coeffs_agree_with_float_table() {
        let l = rational(3, 4);
        let table = gegenbauer_monomial_table(9, 0.75);
        for (n, row) in table.iter().enumerate() {
            let e = gegenbauer_coeffs_exact(n, &l);
            for (a, b) in e.iter().zip(row) {
                assert!((a.to_f64().unwrap() - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn c_lambda_routes_agree() {
        for &l in &[0.25, 0.5, 1.0, 1.5, 2.5, 3.75, 7.0] {
            let a = c_lambda(l).unwrap();
            let b = c_lambda_quadrature(l).unwrap();
            assert!(((a - b) / a).abs() < 1e-13, "lambda={l}");
        }
        assert!((c_lambda(1.0).unwrap() - 2.0 / core::f64::consts::PI).abs() < 1e-15);
        assert!(c_lambda(0.0).is_err());
    }

    #[test]
    fn gegenbauer_self_coefficient() {
        // b_n(C_n) = lambda/(n + lambda), b_m(C_n) = 0 otherwise
        let l = rational(3, 2);
        for n in 0..7 {
            let b = coefficients_exact(&gegenbauer_coeffs_exact(n, &l), &l, 8).unwrap();
            for (m, bm) in b.iter().enumerate() {
                let want = if m == n { &l / (rational(n as i64, 1) + &l) } else { rational(0, 1) };
                assert_eq!(*bm, want);
            }
        }
    }

    #[test]
    fn quadrature_matches_exact_coefficients() {
        let coeffs = vec![rational(1, 3), rational(-2, 1), rational(0, 1), rational(5, 7), rational(1, 1)];
        let g = UnivariateFn::polynomial(coeffs.clone());
        for l in [rational(1, 2), rational(5, 4), rational(3, 1)] {
            let lf = l.to_f64().unwrap();
            let e = coefficients_exact(&coeffs, &l, 6).unwrap();
            let n = coefficients(&g, lf, 6, default_quad_order(&g, 6)).unwrap();
            for (a, b) in e.iter().zip(&n) {
                assert!((a.to_f64().unwrap() - b).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn kink_panels_resolve_abs() {
        // b_0(|t|) at lambda = 1/2 is the mean of |t| over [-1,1]
        let g = UnivariateFn::abs();
        let b = coefficients(&g, 0.5, 4, 20).unwrap();
        assert!((b[0] - 0.5).abs() < 1e-15);
        assert!(b[1].abs() < 1e-15);
        // b_2 = (1/C_2(1)) * 1/2 ∫ |t| P_2 = 1/8
        assert!((b[2] - 0.125).abs() < 1e-15);
    }

    #[test]
    fn cesaro_ratio_values() {
        assert!((cesaro_ratio(9, 1, 1.0) - 0.9).abs() < 1e-15);
        assert_eq!(cesaro_ratio(3, 4, 1.0), 0.0);
        assert!((cesaro_number(4, 2.0) - 15.0).abs() < 1e-15);
    }

    #[test]
    fn cesaro_mean_reproduces_low_degree() {
        // sigma_N^0 of a polynomial of degree <= N is the polynomial itself
        let g = UnivariateFn::polynomial(vec![rational(1, 1), rational(0, 1), rational(-3, 2), rational(1, 4)]);
        let s = GegenbauerSeries::expand(&g, 1.25, 6, None).unwrap();
        for t in [-0.9, -0.2, 0.4, 1.0] {
            assert!((s.partial_sum(6, t).unwrap() - g.eval(t)).abs() < 1e-13);
        }
        let p = CesaroParams { delta: 2.0, order: 6 };
        let mono = s.cesaro_monomial_coeffs(p).unwrap();
        for t in [-0.7, 0.1, 0.95] {
            let direct = s.cesaro_mean(p, t).unwrap();
            let via = mono.iter().rev().fold(0.0, |acc, c| acc * t + c);
            assert!((direct - via).abs() < 1e-13);
        }
        assert!(s.cesaro_mean(CesaroParams { delta: 1.0, order: 7 }, 0.0).is_err());
    }
}
