//! kappa-harmonic polynomials.
//!
//! `A_n` is the kernel of `Delta_kappa: P_n -> P_{n-2}`, computed exactly;
//! real orthonormal bases come from modified Gram-Schmidt (with one
//! reorthogonalisation pass) against a sphere rule.

use alloc::vec::Vec;

use crate::dunkl::DunklContext;
use crate::error::{Error, Result};
use crate::field::{Field, Rational};
use crate::gegenbauer::{gegenbauer_coeffs_exact, gegenbauer_all};
use crate::intertwine::IntertwineTable;
use crate::linalg::{nullspace, rank, symmetric_eigenvalues, Matrix};
use crate::poly::{exponent_index, exponents_of_degree, homogeneous_dim, MPoly};
use crate::sphere::SphereRule;

pub const DEFAULT_GRAM_TOLERANCE: f64 = 1e-10;

/// `N(n, d) = dim P_n - dim P_{n-2}`.
pub fn harmonic_dimension(n: usize, d: usize) -> usize {
    let low = if n >= 2 { homogeneous_dim(n - 2, d) } else { 0 };
    homogeneous_dim(n, d) - low
}

/// Matrix of `Delta_kappa: P_n -> P_{n-2}` in monomial coordinates.
pub fn laplacian_matrix<F: Field>(ctx: &DunklContext<F>, n: usize) -> Result<Matrix<F>> {
    let d = ctx.dim();
    let cols = exponents_of_degree(n, d);
    if n < 2 {
        return Ok(Matrix::zeros(0, cols.len()));
    }
    let index = exponent_index(n - 2, d);
    let mut m = Matrix::zeros(index.len(), cols.len());
    for (j, e) in cols.iter().enumerate() {
        let img = ctx.laplacian(&MPoly::monomial(e.clone(), F::one()))?;
        if img.degree().is_some_and(|k| k as usize != n - 2) {
            return Err(Error::Inconsistent);
        }
        for (i, c) in img.coords_in_degree(n - 2, &index).into_iter().enumerate() {
            if !c.is_zero() {
                m.set(i, j, c);
            }
        }
    }
    Ok(m)
}

/// Exact basis of `ker(Delta_kappa) ∩ P_n`.
pub fn harmonic_kernel<F: Field>(ctx: &DunklContext<F>, n: usize) -> Result<Vec<MPoly<F>>> {
    let d = ctx.dim();
    let exps = exponents_of_degree(n, d);
    if n < 2 {
        return Ok(exps.into_iter().map(|e| MPoly::monomial(e, F::one())).collect());
    }
    let m = laplacian_matrix(ctx, n)?;
    Ok(nullspace(&m).into_iter().map(|v| MPoly::from_coords(&exps, &v)).collect())
}

/// `dim P_n - rank(Delta_kappa)` from exact elimination.
pub fn kernel_dimension_by_rank<F: Field>(ctx: &DunklContext<F>, n: usize) -> Result<usize> {
    let m = laplacian_matrix(ctx, n)?;
    Ok(m.cols() - rank(&m))
}

#[derive(Clone, Debug)]
pub struct HarmonicBasis<F> {
    degree: usize,
    exact: Vec<MPoly<F>>,
    orthonormal: Vec<MPoly<f64>>,
    gram_residual: f64,
    condition: f64,
}

impl<F: Field> HarmonicBasis<F> {
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// The exact kernel basis the orthonormal one was built from.
    pub fn exact(&self) -> &[MPoly<F>] {
        &self.exact
    }

    pub fn orthonormal(&self) -> &[MPoly<f64>] {
        &self.orthonormal
    }

    /// `max |<S_i, S_j> - delta_ij|` under the rule used to build the basis.
    pub fn gram_residual(&self) -> f64 {
        self.gram_residual
    }

    /// Condition number of the change of basis from the exact kernel.
    pub fn condition(&self) -> f64 {
        self.condition
    }

    pub fn len(&self) -> usize {
        self.orthonormal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orthonormal.is_empty()
    }

    /// `sum_j S_j(x) S_j(y)`.
    pub fn reproducing_sum(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        let mut acc = 0.0;
        for s in &self.orthonormal {
            acc += s.eval_f64(x)? * s.eval_f64(y)?;
        }
        Ok(acc)
    }
}

fn values_at_nodes(p: &MPoly<f64>, rule: &SphereRule) -> Result<Vec<f64>> {
    rule.nodes().iter().map(|x| p.eval_f64(x)).collect()
}

fn rule_dot(rule: &SphereRule, a: &[f64], b: &[f64]) -> f64 {
    crate::quadrature::compensated_sum(rule.weights().iter().zip(a.iter().zip(b)).map(|(w, (p, q))| w * p * q))
}

fn check_exactness(rule: &SphereRule, needed: usize) -> Result<()> {
    if rule.exactness_degree() < needed {
        return Err(Error::InvalidParameters(alloc::format!(
            "rule is exact to degree {}, need {needed}",
            rule.exactness_degree()
        )));
    }
    Ok(())
}

/// Orthonormal basis of `A_n` under `<., .>_kappa`.
pub fn orthonormal_basis<F: Field>(ctx: &DunklContext<F>, rule: &SphereRule, n: usize) -> Result<HarmonicBasis<F>> {
    if rule.dim() != ctx.dim() {
        return Err(Error::DimensionMismatch { expected: ctx.dim(), found: rule.dim() });
    }
    check_exactness(rule, 2 * n)?;
    let exact = harmonic_kernel(ctx, n)?;
    let float: Vec<MPoly<f64>> = exact.iter().map(MPoly::to_f64_poly).collect();
    let k = float.len();
    let values: Vec<Vec<f64>> = float.iter().map(|p| values_at_nodes(p, rule)).collect::<Result<_>>()?;

    // coeffs[j] expresses the j-th orthonormal vector in the exact basis
    let mut coeffs: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut ortho_vals: Vec<Vec<f64>> = Vec::with_capacity(k);
    for j in 0..k {
        let mut c = alloc::vec![0.0; k];
        c[j] = 1.0;
        let mut v = values[j].clone();
        let start = libm::sqrt(rule_dot(rule, &v, &v));
        for _pass in 0..2 {
            for (q, qc) in ortho_vals.iter().zip(&coeffs) {
                let r = rule_dot(rule, q, &v);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= r * qi;
                }
                for (ci, qci) in c.iter_mut().zip(qc) {
                    *ci -= r * qci;
                }
            }
        }
        let norm = libm::sqrt(rule_dot(rule, &v, &v));
        if norm.is_nan() || norm <= 1e-10 * start {
            return Err(Error::RankDeficient(norm / start));
        }
        v.iter_mut().for_each(|a| *a /= norm);
        c.iter_mut().for_each(|a| *a /= norm);
        ortho_vals.push(v);
        coeffs.push(c);
    }

    let orthonormal: Vec<MPoly<f64>> = coeffs
        .iter()
        .map(|c| {
            float.iter().zip(c).fold(MPoly::zero(ctx.dim()), |acc, (p, a)| &acc + &p.scale(a))
        })
        .collect();
    let final_vals: Vec<Vec<f64>> = orthonormal.iter().map(|p| values_at_nodes(p, rule)).collect::<Result<_>>()?;
    let mut gram_residual = 0.0f64;
    for i in 0..k {
        for j in 0..=i {
            let g = rule_dot(rule, &final_vals[i], &final_vals[j]);
            let target = if i == j { 1.0 } else { 0.0 };
            gram_residual = gram_residual.max((g - target).abs());
        }
    }
    let condition = if k == 0 {
        1.0
    } else {
        let ctc: Vec<Vec<f64>> = (0..k)
            .map(|a| (0..k).map(|b| (0..k).map(|r| coeffs[r][a] * coeffs[r][b]).sum()).collect())
            .collect();
        let ev = symmetric_eigenvalues(&ctc);
        let (lo, hi) = ev.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), e| (lo.min(*e), hi.max(*e)));
        libm::sqrt(hi / lo)
    };
    Ok(HarmonicBasis { degree: n, exact, orthonormal, gram_residual, condition })
}

/// `max |<P, Q>_kappa|` over members of bases of different degrees.
pub fn cross_degree_residual<F: Field>(bases: &[HarmonicBasis<F>], rule: &SphereRule) -> Result<f64> {
    let vals: Vec<Vec<Vec<f64>>> = bases
        .iter()
        .map(|b| b.orthonormal.iter().map(|p| values_at_nodes(p, rule)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let mut worst = 0.0f64;
    for (i, bi) in bases.iter().enumerate() {
        for (j, bj) in bases.iter().enumerate().skip(i + 1) {
            if bi.degree == bj.degree {
                continue;
            }
            check_exactness(rule, bi.degree + bj.degree)?;
            for p in &vals[i] {
                for q in &vals[j] {
                    worst = worst.max(rule_dot(rule, p, q).abs());
                }
            }
        }
    }
    Ok(worst)
}

/// `max |V(x; C_n^lambda, y) - lambda/(n + lambda) sum_j S_j(x) S_j(y)|` over
/// the sample pairs; the left side takes the exact polynomial path.
pub fn kernel_identity_residual<F: Field>(
    table: &IntertwineTable<F>,
    basis: &HarmonicBasis<F>,
    lambda: &Rational,
    pairs: &[(Vec<f64>, Vec<f64>)],
) -> Result<f64> {
    use num_traits::Zero;
    if *lambda <= Rational::zero() {
        return Err(Error::Degenerate("lambda must be positive".into()));
    }
    let n = basis.degree;
    let lf = Field::to_f64(lambda);
    let cn: Vec<f64> = gegenbauer_coeffs_exact(n, lambda).iter().map(Field::to_f64).collect();
    let factor = lf / (n as f64 + lf);
    let mut worst = 0.0f64;
    for (x, y) in pairs {
        let lhs = table.ridge_value(&cn, x, y)?;
        let rhs = factor * basis.reproducing_sum(x, y)?;
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

/// Classical check value: `C_n^lambda(<x, y>)`, which equals the left side
/// of the kernel identity when `kappa = 0`.
pub fn classical_kernel(n: usize, lambda: f64, x: &[f64], y: &[f64]) -> f64 {
    let t: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    gegenbauer_all(n, lambda, t)[n]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rational;
    use crate::roots::RootSystem;
    use crate::sphere::{build_rule, WeightSpec};

    fn z2(k: &[Rational]) -> DunklContext<Rational> {
        DunklContext::new(RootSystem::z2(k).unwrap()).unwrap()
    }

    #[test]
    fn low_degrees_are_all_harmonic() {
        let ctx = z2(&[rational(1, 2), rational(1, 3), rational(2, 1)]);
        assert_eq!(harmonic_kernel(&ctx, 0).unwrap(), alloc::vec![MPoly::one(3)]);
        assert_eq!(harmonic_kernel(&ctx, 1).unwrap().len(), 3);
    }

    #[test]
    fn degree_two_on_equal_kappa() {
        let ctx = z2(&[rational(1, 2), rational(1, 2)]);
        let ker = harmonic_kernel(&ctx, 2).unwrap();
        assert_eq!(ker.len(), 2);
        let x1 = MPoly::<Rational>::var(2, 0);
        let x2 = MPoly::<Rational>::var(2, 1);
        for target in [&x1.pow(2) - &x2.pow(2), &x1 * &x2] {
            // target lies in the span: appending it keeps the rank at 2
            let idx = exponent_index(2, 2);
            let mut rows: Vec<Vec<Rational>> = ker.iter().map(|p| p.coords_in_degree(2, &idx)).collect();
            rows.push(target.coords_in_degree(2, &idx));
            assert_eq!(rank(&Matrix::from_rows(rows)), 2);
        }
        for p in &ker {
            assert!(ctx.laplacian(p).unwrap().is_zero());
        }
    }

    #[test]
    fn dimension_formula() {
        assert_eq!(harmonic_dimension(2, 2), 2);
        assert_eq!(harmonic_dimension(3, 3), 7);
        let ctx = z2(&[rational(1, 2), rational(3, 2), rational(1, 1)]);
        for n in 0..=5 {
            assert_eq!(kernel_dimension_by_rank(&ctx, n).unwrap(), harmonic_dimension(n, 3));
        }
    }

    #[test]
    fn orthonormal_and_kernel_identity() {
        let k = [rational(1, 2), rational(1, 2)];
        let ctx = z2(&k);
        let sys = RootSystem::<Rational>::z2(&k).unwrap();
        let rule = build_rule(&WeightSpec::from_system(&sys), 16).unwrap();
        let table = IntertwineTable::build(&ctx, 6).unwrap();
        let lambda = table.lambda().clone();
        assert_eq!(lambda, rational(1, 1));
        let pairs: Vec<(Vec<f64>, Vec<f64>)> = (0..12)
            .map(|i| {
                let (a, b) = (0.37 * i as f64, 1.3 - 0.71 * i as f64);
                (alloc::vec![libm::cos(a), libm::sin(a)], alloc::vec![libm::cos(b), libm::sin(b)])
            })
            .collect();
        let mut bases = Vec::new();
        for n in 0..=6 {
            let b = orthonormal_basis(&ctx, &rule, n).unwrap();
            assert!(b.gram_residual() < 1e-12);
            assert!(b.condition() < 1e6);
            assert!(kernel_identity_residual(&table, &b, &lambda, &pairs).unwrap() < 1e-11);
            bases.push(b);
        }
        assert!(cross_degree_residual(&bases, &rule).unwrap() < 1e-13);
        assert!(kernel_identity_residual(&table, &bases[1], &rational(0, 1), &pairs).is_err());
    }

    #[test]
    fn rule_too_weak_is_rejected() {
        let ctx = z2(&[rational(1, 2), rational(1, 2)]);
        let sys = RootSystem::<Rational>::z2(&[rational(1, 2), rational(1, 2)]).unwrap();
        let rule = build_rule(&WeightSpec::from_system(&sys), 3).unwrap();
        assert!(orthonormal_basis(&ctx, &rule, 4).is_err());
    }
}
