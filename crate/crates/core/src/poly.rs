//! Sparse multivariate polynomials with coefficients in a [`Field`].
//!
//! Terms live in a `BTreeMap` keyed by [`Exponent`], whose order is graded
//! lexicographic: lower total degree first, and within a degree `x1` before
//! `x2` before ... (so `x1^2 < x1*x2 < x2^2`). Zero coefficients are never
//! stored, which makes structural equality coincide with polynomial equality.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::Field;

/// Exponent multi-index of a monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Exponent(pub Vec<u32>);

impl Exponent {
    pub fn zero(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut e = vec![0; dim];
        e[axis] = 1;
        Self(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    fn plus(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All exponents of total degree `n` in `d` variables, in graded-lex order.
pub fn exponents_of_degree(n: usize, d: usize) -> Vec<Exponent> {
    fn fill(rest: u32, pos: usize, cur: &mut Vec<u32>, out: &mut Vec<Exponent>) {
        let d = cur.len();
        if pos == d - 1 {
            cur[pos] = rest;
            out.push(Exponent(cur.clone()));
            return;
        }
        for k in (0..=rest).rev() {
            cur[pos] = k;
            fill(rest - k, pos + 1, cur, out);
        }
        cur[pos] = 0;
    }
    if d == 0 {
        return if n == 0 { vec![Exponent(Vec::new())] } else { Vec::new() };
    }
    let mut out = Vec::new();
    fill(n as u32, 0, &mut vec![0; d], &mut out);
    out
}

/// Number of monomials of degree `n` in `d` variables, `C(n+d-1, d-1)`.
pub fn homogeneous_dim(n: usize, d: usize) -> usize {
    if d == 0 {
        return usize::from(n == 0);
    }
    let mut acc: u128 = 1;
    for k in 1..d {
        acc = acc * (n + k) as u128 / k as u128;
    }
    acc as usize
}

/// Index of each exponent within [`exponents_of_degree`].
pub fn exponent_index(n: usize, d: usize) -> BTreeMap<Exponent, usize> {
    exponents_of_degree(n, d)
        .into_iter()
        .enumerate()
        .map(|(i, e)| (e, i))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct MPoly<F> {
    dim: usize,
    terms: BTreeMap<Exponent, F>,
}

impl<F: Field> MPoly<F> {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: F) -> Self {
        Self::monomial(Exponent::zero(dim), c)
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, F::one())
    }

    /// The coordinate function `x_{axis+1}` (axes are zero-based).
    pub fn var(dim: usize, axis: usize) -> Self {
        Self::monomial(Exponent::unit(dim, axis), F::one())
    }

    pub fn monomial(exp: Exponent, c: F) -> Self {
        let dim = exp.dim();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Self { dim, terms }
    }

    /// Build from arbitrary terms; repeated exponents are summed and zeros
    /// dropped.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, F)>,
    {
        let mut p = Self::zero(dim);
        for (e, c) in terms {
            if e.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: e.dim() });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// Linear form `sum_i coeffs[i] * x_i`.
    pub fn linear(coeffs: &[F]) -> Self {
        let dim = coeffs.len();
        let mut p = Self::zero(dim);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Exponent::unit(dim, i), c.clone());
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &F)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Exponent) -> F {
        self.terms.get(e).cloned().unwrap_or_else(F::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Exponent::degree)
    }

    pub fn is_homogeneous(&self) -> bool {
        match (self.terms.keys().next(), self.terms.keys().next_back()) {
            (Some(a), Some(b)) => a.degree() == b.degree(),
            _ => true,
        }
    }

    pub fn homogeneous_part(&self, n: u32) -> Self {
        Self {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.degree() == n)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Homogeneous components indexed by degree, `0..=deg`.
    pub fn homogeneous_parts(&self) -> Vec<Self> {
        let top = self.degree().unwrap_or(0) as usize;
        let mut parts = vec![Self::zero(self.dim); top + 1];
        for (e, c) in &self.terms {
            parts[e.degree() as usize].terms.insert(e.clone(), c.clone());
        }
        parts
    }

    pub(crate) fn add_term(&mut self, e: Exponent, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.dim);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.plus(eb), ca.clone() * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        Self {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(e, a)| (e.clone(), a.clone() * c))
                .filter(|(_, a)| !a.is_zero())
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.dim);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative along a zero-based axis.
    pub fn partial(&self, axis: usize) -> Result<Self> {
        if axis >= self.dim {
            return Err(Error::AxisOutOfRange { axis, dim: self.dim });
        }
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            let k = e.0[axis];
            if k == 0 {
                continue;
            }
            let mut de = e.clone();
            de.0[axis] -= 1;
            out.add_term(de, c.clone() * &F::from_int(k as i64));
        }
        Ok(out)
    }

    pub fn evaluate(&self, x: &[F]) -> Result<F> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: x.len() });
        }
        let mut acc = F::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(&e.0) {
                for _ in 0..k {
                    t = t * xi;
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Floating-point evaluation at a real point.
    pub fn eval_f64(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: x.len() });
        }
        let mut acc = 0.0;
        for (e, c) in &self.terms {
            let mut t = c.to_f64();
            for (xi, &k) in x.iter().zip(&e.0) {
                t *= libm::pow(*xi, k as f64);
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn to_f64_poly(&self) -> MPoly<f64> {
        MPoly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.to_f64()))
                .filter(|(_, c)| *c != 0.0)
                .collect(),
        }
    }

    /// Coordinates in the monomial basis of degree `n` (graded-lex order).
    /// Terms of other degrees are ignored.
    pub fn coords_in_degree(&self, n: usize, index: &BTreeMap<Exponent, usize>) -> Vec<F> {
        let mut v = vec![F::zero(); index.len()];
        for (e, c) in &self.terms {
            if e.degree() as usize == n {
                if let Some(&i) = index.get(e) {
                    v[i] = c.clone();
                }
            }
        }
        v
    }

    /// Inverse of [`MPoly::coords_in_degree`].
    pub fn from_coords(exps: &[Exponent], coords: &[F]) -> Self {
        let dim = exps.first().map_or(0, Exponent::dim);
        let mut p = Self::zero(dim);
        for (e, c) in exps.iter().zip(coords) {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    /// Substitute `x_k -> sum_j rows[k][j] * x_j`, i.e. compute `p(Ax)`.
    pub fn compose_linear(&self, rows: &[Vec<F>]) -> Result<Self> {
        if rows.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: rows.len() });
        }
        let images: Vec<Self> = rows.iter().map(|r| Self::linear(r)).collect();
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            let mut t = Self::constant(self.dim, c.clone());
            for (img, &k) in images.iter().zip(&e.0) {
                for _ in 0..k {
                    t = &t * img;
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Exact quotient by the linear form `sum_i form[i] x_i`. Fails with
    /// [`Error::NotDivisible`] when the remainder is nonzero.
    pub fn div_linear(&self, form: &[F]) -> Result<Self> {
        if form.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: form.len() });
        }
        // Eliminate along the axis with the largest coefficient magnitude.
        let axis = form
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_negligible())
            .max_by(|a, b| {
                libm::fabs(a.1.to_f64())
                    .partial_cmp(&libm::fabs(b.1.to_f64()))
                    .unwrap_or(Ordering::Equal)
            })
            .map(|(i, _)| i)
            .ok_or(Error::ZeroVector)?;
        let lead = form[axis].clone();
        let divisor = Self::linear(form);
        let mut rem = self.clone();
        let mut quot = Self::zero(self.dim);
        loop {
            // term with the highest power of x_axis (ties: graded-lex last)
            let pick = rem
                .terms
                .iter()
                .max_by(|a, b| a.0 .0[axis].cmp(&b.0 .0[axis]).then_with(|| a.0.cmp(b.0)))
                .map(|(e, c)| (e.clone(), c.clone()));
            let Some((e, c)) = pick else { break };
            if e.0[axis] == 0 {
                if F::EXACT || !c.is_negligible() {
                    return Err(Error::NotDivisible);
                }
                rem.terms.remove(&e);
                continue;
            }
            let mut qe = e.clone();
            qe.0[axis] -= 1;
            let q = Self::monomial(qe, c / &lead);
            rem = &rem - &(&q * &divisor);
            if !F::EXACT {
                rem.terms.remove(&e);
            }
            quot = &quot + &q;
        }
        Ok(quot)
    }
}

/// All degree-`n` monomials in `d` variables, graded-lex order.
pub fn monomial_basis<F: Field>(n: usize, d: usize) -> Vec<MPoly<F>> {
    exponents_of_degree(n, d)
        .into_iter()
        .map(|e| MPoly::monomial(e, F::one()))
        .collect()
}

/// The polynomial `x -> g(<xi, x>)` for a univariate `g` given by its
/// coefficients `g_coeffs[k]` of `t^k`.
pub fn substitute_linear_form<F: Field>(g_coeffs: &[F], xi: &[F]) -> MPoly<F> {
    let d = xi.len();
    let form = MPoly::linear(xi);
    // Horner in the linear form
    let mut acc = MPoly::zero(d);
    for c in g_coeffs.iter().rev() {
        acc = &(&acc * &form) + &MPoly::constant(d, c.clone());
    }
    acc
}

/// Univariate polynomial evaluation, coefficients in increasing degree.
pub fn eval_univariate<F: Field>(coeffs: &[F], t: &F) -> F {
    coeffs.iter().rev().fold(F::zero(), |acc, c| acc * t + c)
}

impl<F: Field> Add for &MPoly<F> {
    type Output = MPoly<F>;
    fn add(self, o: &MPoly<F>) -> MPoly<F> {
        self.checked_add(o).expect("polynomial dimension mismatch")
    }
}

impl<F: Field> Sub for &MPoly<F> {
    type Output = MPoly<F>;
    fn sub(self, o: &MPoly<F>) -> MPoly<F> {
        self.checked_sub(o).expect("polynomial dimension mismatch")
    }
}

impl<F: Field> Mul for &MPoly<F> {
    type Output = MPoly<F>;
    fn mul(self, o: &MPoly<F>) -> MPoly<F> {
        self.checked_mul(o).expect("polynomial dimension mismatch")
    }
}

impl<F: Field> Neg for &MPoly<F> {
    type Output = MPoly<F>;
    fn neg(self) -> MPoly<F> {
        self.scale(&-F::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rational, Rational};

    type P = MPoly<Rational>;

    fn x(d: usize, i: usize) -> P {
        P::var(d, i)
    }

    #[test]
    fn additive_inverse_is_empty() {
        let p = &x(2, 0) - &x(2, 0);
        assert!(p.is_zero());
        assert_eq!(p.len(), 0);
    }

    #[test]
    fn difference_of_squares() {
        let a = &x(2, 0) + &x(2, 1);
        let b = &x(2, 0) - &x(2, 1);
        let expect = &x(2, 0).pow(2) - &x(2, 1).pow(2);
        assert_eq!(&a * &b, expect);
    }

    #[test]
    fn scale_by_third() {
        let p = &x(2, 0) * &x(2, 1);
        let s = p.scale(&rational(1, 3));
        assert_eq!(s.coeff(&Exponent(vec![1, 1])), rational(1, 3));
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        assert_eq!(
            x(2, 0).checked_add(&x(3, 0)),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        );
        assert!(x(2, 0).evaluate(&[rational(1, 1)]).is_err());
    }

    #[test]
    fn partial_derivatives() {
        let p = &x(2, 0).pow(2) * &x(2, 1);
        assert_eq!(p.partial(0).unwrap(), (&x(2, 0) * &x(2, 1)).scale(&rational(2, 1)));
        assert!(x(2, 0).pow(2).partial(1).unwrap().is_zero());
        let q = &x(1, 0).pow(3) + &x(1, 0).scale(&rational(1, 2));
        let dq = &x(1, 0).pow(2).scale(&rational(3, 1)) + &P::constant(1, rational(1, 2));
        assert_eq!(q.partial(0).unwrap(), dq);
        assert_eq!(p.partial(2), Err(Error::AxisOutOfRange { axis: 2, dim: 2 }));
    }

    #[test]
    fn evaluation() {
        let p = &x(2, 0).pow(2) + &x(2, 1);
        assert_eq!(p.evaluate(&[rational(1, 1), rational(2, 1)]).unwrap(), rational(3, 1));
        let one = P::one(4);
        assert_eq!(one.evaluate(&vec![rational(7, 3); 4]).unwrap(), rational(1, 1));
        let xyz = &(&x(3, 0) * &x(3, 1)) * &x(3, 2);
        assert_eq!(xyz.eval_f64(&[1.0, 2.0, 3.0]).unwrap(), 6.0);
    }

    #[test]
    fn monomial_basis_order_and_size() {
        let b: Vec<P> = monomial_basis(2, 2);
        assert_eq!(
            b,
            vec![x(2, 0).pow(2), &x(2, 0) * &x(2, 1), x(2, 1).pow(2)]
        );
        assert_eq!(monomial_basis::<Rational>(0, 5), vec![P::one(5)]);
        // multi-indices of length 3 summing to 3, counted by brute force
        let brute = (0..=3u32)
            .flat_map(|a| (0..=3u32).flat_map(move |b| (0..=3u32).map(move |c| (a, b, c))))
            .filter(|(a, b, c)| a + b + c == 3)
            .count();
        assert_eq!(monomial_basis::<Rational>(3, 3).len(), brute);
        assert_eq!(brute, 10);
        for n in 0..7 {
            for d in 1..5 {
                assert_eq!(exponents_of_degree(n, d).len(), homogeneous_dim(n, d));
            }
        }
    }

    #[test]
    fn substitution_of_linear_forms() {
        let sq = [rational(0, 1), rational(0, 1), rational(1, 1)];
        assert_eq!(substitute_linear_form(&sq, &[rational(1, 1), rational(0, 1)]), x(2, 0).pow(2));
        let id = [rational(0, 1), rational(1, 1)];
        let ones = [rational(1, 1), rational(1, 1)];
        assert_eq!(substitute_linear_form(&id, &ones), &x(2, 0) + &x(2, 1));
        let expect = &(&x(2, 0).pow(2) + &(&x(2, 0) * &x(2, 1)).scale(&rational(2, 1))) + &x(2, 1).pow(2);
        assert_eq!(substitute_linear_form(&sq, &ones), expect);
    }

    #[test]
    fn exact_linear_division() {
        let form = [rational(1, 1), rational(-1, 1)];
        let l = P::linear(&form);
        let q = &(&x(2, 0).pow(3) + &x(2, 1)) * &x(2, 0);
        let p = &q * &l;
        assert_eq!(p.div_linear(&form).unwrap(), q);
        assert_eq!(x(2, 0).div_linear(&form), Err(Error::NotDivisible));
    }

    #[test]
    fn homogeneous_parts_reconstruct() {
        let p = &(&x(2, 0).pow(3) + &x(2, 1)) + &P::constant(2, rational(5, 1));
        let parts = p.homogeneous_parts();
        assert_eq!(parts.len(), 4);
        let sum = parts.iter().fold(P::zero(2), |a, b| &a + b);
        assert_eq!(sum, p);
        assert!(parts.iter().all(MPoly::is_homogeneous));
    }
}
