//! Dunkl operators
//!
//! `D_i f = ∂_i f + sum_{v in R_+} kappa(v) <v, e_i> (f - f∘sigma_v) / <x, v>`
//!
//! and the Dunkl Laplacian `sum_i D_i^2`, computed exactly on polynomials.
//! The difference quotient is an exact division by the linear form `<x, v>`;
//! a nonzero remainder is reported as [`Error::NotDivisible`].

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cell::RefCell;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{Exponent, MPoly};
use crate::roots::{reflection_matrix, RootSystem};

struct Reflector<F> {
    root: Vec<F>,
    kappa: F,
    matrix: Vec<Vec<F>>,
}

/// Dunkl operators for one root system and multiplicity function.
///
/// Difference quotients of monomials are memoized per context in a
/// `RefCell`, so a context is meant to be used from one thread; build one
/// per thread when parallelising.
pub struct DunklContext<F> {
    system: RootSystem<F>,
    reflectors: Vec<Reflector<F>>,
    memo: RefCell<BTreeMap<(usize, Exponent), MPoly<F>>>,
}

impl<F: Field> DunklContext<F> {
    pub fn new(system: RootSystem<F>) -> Result<Self> {
        let violations = system.validate();
        if !violations.is_empty() {
            return Err(Error::InvalidRootSystem(violations.len()));
        }
        let reflectors = system
            .positive_roots()
            .filter(|(_, k)| !num_traits::Zero::is_zero(*k))
            .map(|(v, k)| {
                Ok(Reflector {
                    root: v.to_vec(),
                    kappa: F::from_rational(k),
                    matrix: reflection_matrix(v)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { system, reflectors, memo: RefCell::new(BTreeMap::new()) })
    }

    pub fn system(&self) -> &RootSystem<F> {
        &self.system
    }

    pub fn dim(&self) -> usize {
        self.system.dim()
    }

    /// `(x^e - (sigma_v x)^e) / <x, v>` for reflector `r`.
    fn monomial_quotient(&self, r: usize, e: &Exponent) -> Result<MPoly<F>> {
        let key = (r, e.clone());
        if let Some(q) = self.memo.borrow().get(&key) {
            return Ok(q.clone());
        }
        let refl = &self.reflectors[r];
        let mono = MPoly::monomial(e.clone(), F::one());
        let image = mono.compose_linear(&refl.matrix)?;
        let q = (&mono - &image).div_linear(&refl.root)?;
        self.memo.borrow_mut().insert(key, q.clone());
        Ok(q)
    }

    /// `sum_{v} kappa(v) <v,e_i> (p - p∘sigma_v)/<x,v>` for every axis `i`,
    /// sharing one quotient per root across axes.
    fn reflection_terms(&self, p: &MPoly<F>) -> Result<Vec<MPoly<F>>> {
        let d = self.dim();
        let mut out = alloc::vec![MPoly::zero(d); d];
        for (r, refl) in self.reflectors.iter().enumerate() {
            let mut quotient = MPoly::zero(d);
            for (e, c) in p.terms() {
                if e.degree() == 0 {
                    continue;
                }
                quotient = &quotient + &self.monomial_quotient(r, e)?.scale(c);
            }
            if quotient.is_zero() {
                continue;
            }
            for (i, slot) in out.iter_mut().enumerate() {
                let w = refl.kappa.clone() * &refl.root[i];
                if !w.is_zero() {
                    *slot = &*slot + &quotient.scale(&w);
                }
            }
        }
        Ok(out)
    }

    fn check_poly(&self, p: &MPoly<F>) -> Result<()> {
        if p.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: p.dim() });
        }
        Ok(())
    }

    /// `D_{axis}` applied to `p` (zero-based axis).
    pub fn apply(&self, axis: usize, p: &MPoly<F>) -> Result<MPoly<F>> {
        self.check_poly(p)?;
        let d = p.partial(axis)?;
        let refl = self.reflection_terms(p)?;
        Ok(&d + &refl[axis])
    }

    /// `[D_1 p, ..., D_d p]`.
    pub fn apply_all(&self, p: &MPoly<F>) -> Result<Vec<MPoly<F>>> {
        self.check_poly(p)?;
        let refl = self.reflection_terms(p)?;
        refl.into_iter()
            .enumerate()
            .map(|(i, r)| Ok(&p.partial(i)? + &r))
            .collect()
    }

    pub fn laplacian(&self, p: &MPoly<F>) -> Result<MPoly<F>> {
        let first = self.apply_all(p)?;
        let mut acc = MPoly::zero(self.dim());
        for (i, q) in first.iter().enumerate() {
            acc = &acc + &self.apply(i, q)?;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rational, QSqrt3, Rational};
    use crate::poly::monomial_basis;

    fn q(a: i64, b: i64) -> Rational {
        rational(a, b)
    }

    fn z2(k1: Rational, k2: Rational) -> DunklContext<Rational> {
        DunklContext::new(RootSystem::z2(&[k1, k2]).unwrap()).unwrap()
    }

    #[test]
    fn d1_of_x1_on_z2() {
        let ctx = z2(q(1, 2), q(1, 3));
        let x1 = MPoly::var(2, 0);
        assert_eq!(ctx.apply(0, &x1).unwrap(), MPoly::constant(2, q(2, 1)));
        let ctx = z2(q(5, 7), q(1, 3));
        assert_eq!(ctx.apply(0, &x1).unwrap(), MPoly::constant(2, q(17, 7)));
    }

    #[test]
    fn d1_of_x2_vanishes() {
        let ctx = z2(q(1, 2), q(3, 2));
        assert!(ctx.apply(0, &MPoly::var(2, 1)).unwrap().is_zero());
    }

    #[test]
    fn zero_kappa_gives_partials() {
        let ctx = z2(q(0, 1), q(0, 1));
        for n in 0..6 {
            for p in monomial_basis::<Rational>(n, 2) {
                for i in 0..2 {
                    assert_eq!(ctx.apply(i, &p).unwrap(), p.partial(i).unwrap());
                }
            }
        }
    }

    #[test]
    fn laplacian_of_x1sq_minus_x2sq() {
        let p = &MPoly::var(2, 0).pow(2) - &MPoly::var(2, 1).pow(2);
        let ctx = z2(q(1, 2), q(1, 2));
        assert!(ctx.laplacian(&p).unwrap().is_zero());
        let (k1, k2) = (q(1, 3), q(2, 1));
        let ctx = z2(k1.clone(), k2.clone());
        let expect = MPoly::constant(2, q(4, 1) * (k1 - k2));
        assert_eq!(ctx.laplacian(&p).unwrap(), expect);
    }

    #[test]
    fn laplacian_kills_low_degree() {
        let ctx = DunklContext::new(RootSystem::<QSqrt3>::dihedral(3, &[q(1, 2)]).unwrap()).unwrap();
        assert!(ctx.laplacian(&MPoly::one(2)).unwrap().is_zero());
        for i in 0..2 {
            assert!(ctx.laplacian(&MPoly::var(2, i)).unwrap().is_zero());
        }
    }

    #[test]
    fn invalid_system_is_rejected() {
        let r = RootSystem::custom(2, alloc::vec![alloc::vec![q(1, 1), q(0, 1)]], alloc::vec![q(1, 1)]).unwrap();
        assert!(matches!(DunklContext::new(r), Err(Error::InvalidRootSystem(_))));
    }

    #[test]
    fn axis_out_of_range() {
        let ctx = z2(q(1, 2), q(1, 2));
        assert!(ctx.apply(2, &MPoly::var(2, 0)).is_err());
        assert!(ctx.apply(0, &MPoly::var(3, 0)).is_err());
    }
}
