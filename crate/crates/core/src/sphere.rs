//! Weighted quadrature on the unit sphere for `w(x) = prod_{v in R_+} |<v, x>|^{2 kappa(v)}`.
//!
//! Rules are exact by construction on polynomials up to a requested degree:
//!
//! - `Z2^d`: write `x = (sqrt(1 - t^2) y, t)` with `y` on the lower sphere;
//!   the `t` factor `|t|^{2k} (1 - t^2)^nu` becomes a Jacobi weight in
//!   `s = 2t^2 - 1`, and the rule is the iterated product.
//! - `I2(m)`: on one arc between adjacent mirrors, `s = cos(m psi)` turns the
//!   weight into a Jacobi weight; group-averaged trigonometric polynomials are
//!   polynomials in `s`, so the orbit of a Gauss-Jacobi rule is exact.
//!
//! Weights are normalised to sum to one; the unnormalised mass is `sigma`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::quadrature::{compensated_sum, gamma, GaussJacobi};
use crate::roots::{Family, RootSystem};

pub const DEFAULT_DEGREE_CIRCLE: usize = 64;
pub const DEFAULT_DEGREE_SPHERE: usize = 40;
/// Largest node count a rule may have.
pub const NODE_BUDGET: usize = 2_000_000;

/// The weight function of a root system, with unit roots.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightSpec {
    dim: usize,
    roots: Vec<Vec<f64>>,
    kappas: Vec<f64>,
    family: Family,
}

impl WeightSpec {
    pub fn from_system<F: Field>(system: &RootSystem<F>) -> Self {
        let mut roots = Vec::new();
        let mut kappas = Vec::new();
        for (v, k) in system.positive_roots() {
            let vf: Vec<f64> = v.iter().map(F::to_f64).collect();
            let norm = libm::sqrt(vf.iter().map(|a| a * a).sum());
            roots.push(vf.iter().map(|a| a / norm).collect());
            kappas.push(Field::to_f64(k));
        }
        Self { dim: system.dim(), roots, kappas, family: system.family().clone() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn roots(&self) -> &[Vec<f64>] {
        &self.roots
    }

    pub fn kappas(&self) -> &[f64] {
        &self.kappas
    }

    fn raw(&self, x: &[f64]) -> f64 {
        self.roots
            .iter()
            .zip(&self.kappas)
            .filter(|(_, k)| **k != 0.0)
            .map(|(v, k)| {
                let p: f64 = v.iter().zip(x).map(|(a, b)| a * b).sum();
                libm::pow(libm::fabs(p), 2.0 * k)
            })
            .product()
    }

    /// `w(x)` for a unit vector `x`.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: x.len() });
        }
        let norm = libm::sqrt(x.iter().map(|a| a * a).sum());
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(alloc::format!("expected a unit vector, norm is {norm}")));
        }
        Ok(self.raw(x))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SphereRule {
    dim: usize,
    nodes: Vec<Vec<f64>>,
    weights: Vec<f64>,
    sigma: f64,
    exactness: usize,
}

impl SphereRule {
    fn from_raw(dim: usize, nodes: Vec<Vec<f64>>, raw: Vec<f64>, exactness: usize) -> Result<Self> {
        let sigma = compensated_sum(raw.iter().copied());
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::Quadrature("rule has no mass".into()));
        }
        let weights = raw.iter().map(|w| w / sigma).collect();
        Ok(Self { dim, nodes, weights, sigma, exactness })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Vec<f64>] {
        &self.nodes
    }

    /// Normalised weights (they sum to one).
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `sigma_d^kappa = ∫ w dω`, the unnormalised mass.
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn exactness_degree(&self) -> usize {
        self.exactness
    }

    /// `(1/sigma) ∫ f w dω`.
    pub fn integrate<G: Fn(&[f64]) -> f64>(&self, f: G) -> f64 {
        compensated_sum(self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(x)))
    }

    /// `<f, h>_kappa` for real-valued `f`, `h`.
    pub fn inner_product<G, H>(&self, f: G, h: H) -> f64
    where
        G: Fn(&[f64]) -> f64,
        H: Fn(&[f64]) -> f64,
    {
        self.integrate(|x| f(x) * h(x))
    }
}

/// Exact rule of degree at least `degree` for the weight of `w`.
pub fn build_rule(w: &WeightSpec, degree: usize) -> Result<SphereRule> {
    match w.family {
        Family::Z2 { d } => {
            // kappa of e_i is stored in coordinate order by the Z2 constructor;
            // read it off the roots to be safe.
            let mut kappas = vec![0.0; d];
            for (v, k) in w.roots.iter().zip(&w.kappas) {
                let axis = v.iter().position(|a| a.abs() > 0.5).unwrap_or(0);
                kappas[axis] = *k;
            }
            z2_rule(&kappas, degree)
        }
        Family::Dihedral { m } => dihedral_rule(w, m, degree),
        Family::Custom => Err(Error::Unsupported("sphere rules exist for Z2^d and I2(m) only".into())),
    }
}

/// Symmetric rule for `|t|^{2mu} (1 - t^2)^nu` on `[-1, 1]`, exact to `4n - 1`.
fn even_weight_rule(n: usize, mu: f64, nu: f64) -> Result<Vec<(f64, f64)>> {
    let r = GaussJacobi::new(n, nu, mu - 0.5)?;
    let scale = 0.25 * libm::pow(2.0, -(mu - 0.5) - nu);
    let mut out = Vec::with_capacity(2 * n);
    for (&s, &w) in r.nodes().iter().zip(r.weights()) {
        let t = libm::sqrt((1.0 + s) / 2.0);
        out.push((t, w * scale));
        out.push((-t, w * scale));
    }
    Ok(out)
}

fn z2_rule(kappas: &[f64], degree: usize) -> Result<SphereRule> {
    let d = kappas.len();
    if d < 2 {
        return Err(Error::Unsupported("spheres of dimension at least 1 (d >= 2)".into()));
    }
    let n = degree / 4 + 1;
    let total = (2 * n).checked_pow(d as u32 - 1).map(|c| c * 2);
    if total.is_none_or(|c| c > NODE_BUDGET) {
        return Err(Error::Quadrature(alloc::format!("degree {degree} in dimension {d} exceeds the node budget")));
    }
    // S^0 = {-1, 1}
    let mut nodes: Vec<Vec<f64>> = vec![vec![-1.0], vec![1.0]];
    let mut raw = vec![1.0, 1.0];
    let mut kappa_below = kappas[0];
    for k in 2..=d {
        let nu = (k as f64 - 3.0) / 2.0 + kappa_below;
        let line = even_weight_rule(n, kappas[k - 1], nu)?;
        let mut next_nodes = Vec::with_capacity(nodes.len() * line.len());
        let mut next_raw = Vec::with_capacity(nodes.len() * line.len());
        for (y, wy) in nodes.iter().zip(&raw) {
            for &(t, wt) in &line {
                let r = libm::sqrt((1.0 - t * t).max(0.0));
                let mut x: Vec<f64> = y.iter().map(|c| c * r).collect();
                x.push(t);
                next_nodes.push(x);
                next_raw.push(wy * wt);
            }
        }
        nodes = next_nodes;
        raw = next_raw;
        kappa_below += kappas[k - 1];
    }
    SphereRule::from_raw(d, nodes, raw, 4 * n - 1)
}

fn dihedral_rule(w: &WeightSpec, m: usize, degree: usize) -> Result<SphereRule> {
    use core::f64::consts::PI;
    if w.dim != 2 || m < 2 || w.roots.len() != m {
        return Err(Error::Unsupported("dihedral rules need I2(m), m >= 2".into()));
    }
    // mirror angles in [0, pi), each tagged with the kappa of its root
    let mut mirrors: Vec<(f64, f64)> = w
        .roots
        .iter()
        .zip(&w.kappas)
        .map(|(v, k)| {
            let a = libm::atan2(v[1], v[0]) + PI / 2.0;
            (a.rem_euclid(PI), *k)
        })
        .collect();
    mirrors.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(core::cmp::Ordering::Equal));
    let (theta0, a) = mirrors[0];
    let b = mirrors[1].1;
    let n = degree / (2 * m) + 1;
    if 2 * m * n > NODE_BUDGET {
        return Err(Error::Quadrature(alloc::format!("degree {degree} exceeds the node budget")));
    }
    let rule = GaussJacobi::new(n, a - 0.5, b - 0.5)?;
    let mid = theta0 + PI / (2.0 * m as f64);
    // w = K (1 - s)^a (1 + s)^b on the arc; at the midpoint s = 0
    let k = w.raw(&[libm::cos(mid), libm::sin(mid)]);
    let mut nodes = Vec::with_capacity(2 * m * n);
    let mut raw = Vec::with_capacity(2 * m * n);
    for (&s, &wt) in rule.nodes().iter().zip(rule.weights()) {
        let psi = libm::acos(s) / m as f64;
        let weight = k * wt / m as f64;
        for j in 0..m {
            let rot = 2.0 * PI * j as f64 / m as f64;
            for theta in [theta0 + psi + rot, theta0 - psi + rot] {
                nodes.push(vec![libm::cos(theta), libm::sin(theta)]);
                raw.push(weight);
            }
        }
    }
    SphereRule::from_raw(2, nodes, raw, m * (2 * n - 1))
}

/// `∫_{S^{d-1}} prod |x_i|^{2 kappa_i} x^alpha dω` in closed form.
pub fn z2_moment(kappas: &[f64], alpha: &[u32]) -> f64 {
    if alpha.iter().any(|a| a % 2 == 1) {
        return 0.0;
    }
    let parts: Vec<f64> = kappas.iter().zip(alpha).map(|(k, a)| k + (*a as f64 + 1.0) / 2.0).collect();
    let total: f64 = parts.iter().sum();
    2.0 * parts.iter().map(|p| gamma(*p)).product::<f64>() / gamma(total)
}

/// Largest absolute deviation between the unnormalised rule moments and the
/// closed form, over all monomials of degree up to the rule's exactness.
pub fn z2_certificate(rule: &SphereRule, kappas: &[f64]) -> Result<f64> {
    let d = rule.dim();
    if kappas.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: kappas.len() });
    }
    let top = rule.exactness_degree();
    // powers[node][axis][k] = x_axis^k
    let powers: Vec<Vec<Vec<f64>>> = rule
        .nodes()
        .iter()
        .map(|x| {
            x.iter()
                .map(|&c| {
                    let mut p = Vec::with_capacity(top + 1);
                    let mut acc = 1.0;
                    for _ in 0..=top {
                        p.push(acc);
                        acc *= c;
                    }
                    p
                })
                .collect()
        })
        .collect();
    let mut worst = 0.0f64;
    for n in 0..=top {
        for e in crate::poly::exponents_of_degree(n, d) {
            let alpha = e.as_slice();
            let q = rule.sigma()
                * compensated_sum(powers.iter().zip(rule.weights()).map(|(p, w)| {
                    w * alpha.iter().enumerate().map(|(i, &a)| p[i][a as usize]).product::<f64>()
                }));
            worst = worst.max((q - z2_moment(kappas, alpha)).abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rational, QSqrt3, Rational};

    fn z2(k: &[Rational]) -> WeightSpec {
        WeightSpec::from_system(&RootSystem::<Rational>::z2(k).unwrap())
    }

    #[test]
    fn weight_values() {
        let w = z2(&[rational(1, 2), rational(1, 2)]);
        let s = libm::sqrt(0.5);
        assert!((w.eval(&[s, s]).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(w.eval(&[1.0, 0.0]).unwrap(), 0.0);
        let w0 = z2(&[rational(0, 1), rational(0, 1), rational(0, 1)]);
        assert_eq!(w0.eval(&[0.0, 0.6, 0.8]).unwrap(), 1.0);
        assert!(w.eval(&[1.0, 1.0]).is_err());
    }

    #[test]
    fn z2_sigma_and_moments() {
        let w = z2(&[rational(1, 2), rational(1, 2)]);
        let r = build_rule(&w, 20).unwrap();
        assert!((r.sigma() - 2.0).abs() < 1e-13);
        assert!((r.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(z2_certificate(&r, &[0.5, 0.5]).unwrap() < 1e-13);
        for x in r.nodes() {
            assert!((x[0] * x[0] + x[1] * x[1] - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn classical_sphere_second_moment() {
        let w = z2(&[rational(0, 1), rational(0, 1), rational(0, 1)]);
        let r = build_rule(&w, 8).unwrap();
        assert!((r.sigma() - 4.0 * core::f64::consts::PI).abs() < 1e-12);
        assert!((r.inner_product(|x| x[0], |x| x[0]) - 1.0 / 3.0).abs() < 1e-15);
        assert!(r.inner_product(|x| x[0], |x| x[1]).abs() < 1e-16);
    }

    #[test]
    fn dihedral_rule_matches_dense_trapezoid() {
        // the trapezoid rule is spectrally accurate for smooth periodic
        // integrands; |sin|^{2k} with k = 1 and 2 keeps them smooth
        let sys = RootSystem::<QSqrt3>::dihedral(6, &[rational(1, 1), rational(2, 1)]).unwrap();
        let w = WeightSpec::from_system(&sys);
        let r = build_rule(&w, 30).unwrap();
        assert!(r.exactness_degree() >= 30);
        let big = 20000;
        let f = |x: &[f64]| libm::pow(x[0], 5.0) * x[1] * x[1] + x[0] * x[0] * x[0] * x[0];
        let (mut mass, mut acc) = (0.0, 0.0);
        for j in 0..big {
            let th = 2.0 * core::f64::consts::PI * j as f64 / big as f64;
            let x = [libm::cos(th), libm::sin(th)];
            let wx = w.eval(&x).unwrap();
            mass += wx;
            acc += wx * f(&x);
        }
        let scale = 2.0 * core::f64::consts::PI / big as f64;
        assert!((r.sigma() - mass * scale).abs() < 1e-12 * r.sigma());
        assert!((r.integrate(f) - acc / mass).abs() < 1e-13);
    }

    #[test]
    fn custom_family_is_unsupported() {
        let sys = RootSystem::<Rational>::custom(
            1,
            vec![vec![rational(1, 1)], vec![rational(-1, 1)]],
            vec![rational(1, 1), rational(1, 1)],
        )
        .unwrap();
        assert!(matches!(build_rule(&WeightSpec::from_system(&sys), 4), Err(Error::Unsupported(_))));
    }
}
