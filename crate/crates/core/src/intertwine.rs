//! The intertwining operator `V_kappa`.
//!
//! `V` preserves degree, fixes constants and satisfies `D_i V = V ∂_i`. On
//! `P_n` it is found from `P_{n-1}` by solving the stacked system
//! `D_i q = V(∂_i p)`, `i = 1..d`, for every monomial `p`; the system is
//! overdetermined and its consistency is checked by the elimination.
//!
//! The truncated operator `V(xi; g, x) = V[g(<xi, .>)](x)` is evaluated
//! exactly for polynomial `g` and through a Cesaro mean of `g` otherwise.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::dunkl::DunklContext;
use crate::error::{Error, Result};
use crate::field::{Field, Rational};
use crate::gegenbauer::{CesaroParams, GegenbauerSeries, UnivariateFn};
use crate::linalg::{solve, Matrix};
use crate::poly::{exponent_index, exponents_of_degree, Exponent, MPoly};

pub const DEFAULT_TABLE_DEGREE: usize = 16;

/// Grid size used to certify the sup-norm error of a Cesaro approximant.
const CERTIFY_GRID: usize = 2049;

/// Matrices of `V_kappa` on `P_0, ..., P_{n_max}` in monomial order.
/// Column `j` of the degree-`n` matrix holds the coordinates of `V x^{alpha_j}`.
#[derive(Clone, Debug)]
pub struct IntertwineTable<F> {
    dim: usize,
    lambda: Rational,
    exponents: Vec<Vec<Exponent>>,
    matrices: Vec<Matrix<F>>,
    float: Vec<Matrix<f64>>,
}

impl<F: Field> IntertwineTable<F> {
    pub fn build(ctx: &DunklContext<F>, n_max: usize) -> Result<Self> {
        let d = ctx.dim();
        let lambda = ctx.system().kappa_sum()
            + Rational::new((d as i64 - 2).into(), 2.into());
        let mut exponents = vec![exponents_of_degree(0, d)];
        let mut matrices = vec![Matrix::identity(1)];
        for n in 1..=n_max {
            let exps = exponents_of_degree(n, d);
            let prev_exps = &exponents[n - 1];
            let prev_index = exponent_index(n - 1, d);
            let prev = &matrices[n - 1];
            let block = prev_exps.len();
            let mut a = Matrix::zeros(d * block, exps.len());
            let mut b = Matrix::zeros(d * block, exps.len());
            for (j, e) in exps.iter().enumerate() {
                let images = ctx.apply_all(&MPoly::monomial(e.clone(), F::one()))?;
                for (i, img) in images.iter().enumerate() {
                    for (r, c) in img.coords_in_degree(n - 1, &prev_index).into_iter().enumerate() {
                        if !c.is_zero() {
                            a.set(i * block + r, j, c);
                        }
                    }
                    let k = e.0[i];
                    if k == 0 {
                        continue;
                    }
                    let mut lowered = e.clone();
                    lowered.0[i] -= 1;
                    let col = prev_index[&lowered];
                    let kf = F::from_int(k as i64);
                    for r in 0..block {
                        let v: &F = prev.get(r, col);
                        if !v.is_zero() {
                            b.set(i * block + r, j, v.clone() * &kf);
                        }
                    }
                }
            }
            matrices.push(solve(&a, &b)?);
            exponents.push(exps);
        }
        let float = matrices.iter().map(Matrix::to_f64).collect();
        Ok(Self { dim: d, lambda, exponents, matrices, float })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_degree(&self) -> usize {
        self.matrices.len() - 1
    }

    /// `lambda_kappa = sum kappa + (d - 2)/2` for the underlying system.
    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    pub fn matrix(&self, n: usize) -> Option<&Matrix<F>> {
        self.matrices.get(n)
    }

    pub fn exponents(&self, n: usize) -> Option<&[Exponent]> {
        self.exponents.get(n).map(Vec::as_slice)
    }

    fn check_degree(&self, n: usize) -> Result<()> {
        if n > self.max_degree() {
            return Err(Error::DegreeExceedsTable { degree: n, max: self.max_degree() });
        }
        Ok(())
    }

    /// `V_kappa p`, homogeneous part by homogeneous part.
    pub fn apply(&self, p: &MPoly<F>) -> Result<MPoly<F>> {
        if p.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: p.dim() });
        }
        if let Some(deg) = p.degree() {
            self.check_degree(deg as usize)?;
        }
        let mut index_cache: BTreeMap<usize, BTreeMap<Exponent, usize>> = BTreeMap::new();
        let mut out = MPoly::zero(self.dim);
        for (e, c) in p.terms() {
            let n = e.degree() as usize;
            let idx = index_cache.entry(n).or_insert_with(|| exponent_index(n, self.dim));
            let col = self.matrices[n].column(idx[e]);
            let image = MPoly::from_coords(&self.exponents[n], &col);
            out = &out + &image.scale(c);
        }
        Ok(out)
    }

    /// Checks `D_i V x^alpha = V ∂_i x^alpha` for every monomial of degree
    /// `1..=n_max` and axis `i`; returns the first failure as
    /// `(degree, axis, exponent)`.
    pub fn find_relation_failure(
        &self,
        ctx: &DunklContext<F>,
        n_max: usize,
    ) -> Result<Option<(usize, usize, Exponent)>> {
        self.check_degree(n_max)?;
        for n in 1..=n_max {
            for e in &self.exponents[n] {
                let mono = MPoly::monomial(e.clone(), F::one());
                let lhs = ctx.apply_all(&self.apply(&mono)?)?;
                for (i, l) in lhs.iter().enumerate() {
                    if *l != self.apply(&mono.partial(i)?)? {
                        return Ok(Some((n, i, e.clone())));
                    }
                }
            }
        }
        Ok(None)
    }

    /// `V[ sum_k c_k <xi, .>^k ](x)` in floating point, `c_k` ascending.
    pub fn ridge_value(&self, coeffs: &[f64], xi: &[f64], x: &[f64]) -> Result<f64> {
        let d = self.dim;
        if xi.len() != d || x.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: if xi.len() != d { xi.len() } else { x.len() } });
        }
        let top = coeffs.iter().rposition(|c| *c != 0.0).unwrap_or(0);
        self.check_degree(top)?;
        let mut total = 0.0;
        for (k, ck) in coeffs.iter().enumerate().take(top + 1) {
            if *ck == 0.0 {
                continue;
            }
            let exps = &self.exponents[k];
            // coordinates of <xi, z>^k: multinomial(alpha) xi^alpha
            let u: Vec<f64> = exps.iter().map(|e| multinomial(e) * power(xi, e)).collect();
            let xs: Vec<f64> = exps.iter().map(|e| power(x, e)).collect();
            let m = &self.float[k];
            let mut acc = 0.0;
            for (r, xr) in xs.iter().enumerate() {
                let row = m.row(r);
                let dotp: f64 = row.iter().zip(&u).map(|(a, b)| a * b).sum();
                acc += xr * dotp;
            }
            total += ck * acc;
        }
        Ok(total)
    }

    /// The truncated operator `V(xi; g, x)` to absolute accuracy `tol`.
    ///
    /// Polynomials of degree within the table take the exact path. Other
    /// `g` are replaced by the first Cesaro mean (`delta = lambda + 1`) whose
    /// sup-error on a dense Chebyshev grid is at most `tol`; positivity of
    /// the representing measure turns that into the same bound on the result.
    pub fn truncated(&self, xi: &[f64], g: &UnivariateFn, x: &[f64], tol: f64) -> Result<TruncatedValue> {
        for v in [xi, x] {
            let norm: f64 = libm::sqrt(v.iter().map(|a| a * a).sum());
            if (norm - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidArgument(alloc::format!("expected a unit vector, norm is {norm}")));
            }
        }
        if let Some(exact) = g.exact() {
            if exact.len() <= self.max_degree() + 1 {
                let c: Vec<f64> = exact.iter().map(Field::to_f64).collect();
                return Ok(TruncatedValue { value: self.ridge_value(&c, xi, x)?, degree: exact.len().saturating_sub(1), sup_error: 0.0 });
            }
        }
        let lambda = Field::to_f64(&self.lambda);
        if lambda.is_nan() || lambda <= 0.0 {
            return Err(Error::Degenerate("lambda_kappa must be positive for Cesaro approximation".into()));
        }
        let n_max = self.max_degree();
        let series = GegenbauerSeries::expand(g, lambda, n_max, None)?;
        let mut best = (f64::INFINITY, 0);
        for order in 0..=n_max {
            let p = CesaroParams { delta: lambda + 1.0, order };
            let err = series.uniform_error(g, p, CERTIFY_GRID)?;
            if err < best.0 {
                best = (err, order);
            }
            if err <= tol {
                let c = series.cesaro_monomial_coeffs(p)?;
                return Ok(TruncatedValue { value: self.ridge_value(&c, xi, x)?, degree: order, sup_error: err });
            }
        }
        Err(Error::ToleranceUnreachable { tol, achieved: best.0, degree: best.1 })
    }
}

/// Result of a truncated-operator evaluation with its certificate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncatedValue {
    pub value: f64,
    /// Degree of the polynomial used in place of `g`.
    pub degree: usize,
    /// Sup-norm distance between `g` and that polynomial (0 on the exact path).
    pub sup_error: f64,
}

/// Exact `V[g(<xi, .>)]` for polynomial `g` (ascending coefficients).
pub fn ridge_polynomial<F: Field>(table: &IntertwineTable<F>, g: &[F], xi: &[F]) -> Result<MPoly<F>> {
    if xi.len() != table.dim() {
        return Err(Error::DimensionMismatch { expected: table.dim(), found: xi.len() });
    }
    table.apply(&crate::poly::substitute_linear_form(g, xi))
}

fn multinomial(e: &Exponent) -> f64 {
    let mut acc = 1.0;
    let mut total = 0u32;
    for &a in e.as_slice() {
        for j in 1..=a {
            total += 1;
            acc = acc * total as f64 / j as f64;
        }
    }
    acc
}

fn power(x: &[f64], e: &Exponent) -> f64 {
    x.iter().zip(e.as_slice()).map(|(v, &a)| libm::pow(*v, a as f64)).product()
}
