//! Gauss-Jacobi quadrature on `[-1, 1]` for the weight
//! `(1 - t)^alpha (1 + t)^beta`.
//!
//! Nodes are eigenvalues of the symmetric Jacobi matrix, polished by Newton
//! steps on the orthonormal recurrence; weights are Christoffel numbers
//! `1 / sum_k p_k(t_i)^2`.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::tridiagonal_eigenvalues;

/// Deterministic compensated (Neumaier) summation.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if libm::fabs(sum) >= libm::fabs(v) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `B(a, b) = Γ(a)Γ(b)/Γ(a+b)`.
pub fn beta(a: f64, b: f64) -> f64 {
    if a + b < 150.0 {
        gamma(a) * gamma(b) / gamma(a + b)
    } else {
        libm::exp(ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b))
    }
}

/// `∫_{-1}^{1} (1-t)^alpha (1+t)^beta dt`.
pub fn jacobi_mass(alpha: f64, beta_: f64) -> f64 {
    libm::pow(2.0, alpha + beta_ + 1.0) * beta(alpha + 1.0, beta_ + 1.0)
}

/// Recurrence coefficients of the monic Jacobi polynomials:
/// `p_{k+1} = (t - a_k) p_k - b_k p_{k-1}`; returns `(a_0..a_{n-1}, b_1..b_n)`.
fn jacobi_recurrence(n: usize, alpha: f64, beta_: f64) -> (Vec<f64>, Vec<f64>) {
    let ab = alpha + beta_;
    let a = (0..n)
        .map(|k| {
            if k == 0 {
                (beta_ - alpha) / (ab + 2.0)
            } else {
                let s = 2.0 * k as f64 + ab;
                (beta_ * beta_ - alpha * alpha) / (s * (s + 2.0))
            }
        })
        .collect();
    let b = (1..=n)
        .map(|k| {
            let kf = k as f64;
            if k == 1 {
                4.0 * (1.0 + alpha) * (1.0 + beta_) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab))
            } else {
                let s = 2.0 * kf + ab;
                4.0 * kf * (kf + alpha) * (kf + beta_) * (kf + ab) / (s * s * (s + 1.0) * (s - 1.0))
            }
        })
        .collect();
    (a, b)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaussJacobi {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    alpha: f64,
    beta: f64,
}

impl GaussJacobi {
    /// `n`-point rule, exact for polynomials of degree `2n - 1` against the
    /// Jacobi weight.
    pub fn new(n: usize, alpha: f64, beta_: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Quadrature("a rule needs at least one node".into()));
        }
        if !(alpha > -1.0 && beta_ > -1.0 && alpha.is_finite() && beta_.is_finite()) {
            return Err(Error::Quadrature(format!(
                "Jacobi exponents must exceed -1 (alpha={alpha}, beta={beta_})"
            )));
        }
        let (a, b) = jacobi_recurrence(n, alpha, beta_);
        let off: Vec<f64> = b[..n - 1].iter().map(|x| libm::sqrt(*x)).collect();
        let mut nodes = tridiagonal_eigenvalues(&a, &off)?;
        let s: Vec<f64> = b.iter().map(|x| libm::sqrt(*x)).collect();
        let p0 = 1.0 / libm::sqrt(jacobi_mass(alpha, beta_));

        // orthonormal values p_0..p_n and p_n' at t
        let eval = |t: f64| -> (f64, f64, f64) {
            let (mut pm, mut p) = (0.0, p0);
            let (mut dpm, mut dp) = (0.0, 0.0);
            let mut sumsq = p * p;
            for k in 0..n {
                let sk = if k == 0 { 0.0 } else { s[k - 1] };
                let pn = ((t - a[k]) * p - sk * pm) / s[k];
                let dpn = (p + (t - a[k]) * dp - sk * dpm) / s[k];
                pm = p;
                p = pn;
                dpm = dp;
                dp = dpn;
                if k + 1 < n {
                    sumsq += p * p;
                }
            }
            (p, dp, sumsq)
        };

        for t in nodes.iter_mut() {
            for _ in 0..3 {
                let (p, dp, _) = eval(*t);
                if dp == 0.0 || !dp.is_finite() {
                    break;
                }
                let step = p / dp;
                if !step.is_finite() || libm::fabs(step) > 1e-6 {
                    break;
                }
                *t -= step;
                if libm::fabs(step) <= 4.0 * f64::EPSILON * libm::fabs(*t).max(1e-300) {
                    break;
                }
            }
        }
        let weights: Vec<f64> = nodes.iter().map(|&t| 1.0 / eval(t).2).collect();
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::Quadrature(format!("non-positive weight for n={n}")));
        }
        Ok(Self { nodes, weights, alpha, beta: beta_ })
    }

    pub fn legendre(n: usize) -> Result<Self> {
        Self::new(n, 0.0, 0.0)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `∫ f(t) (1-t)^alpha (1+t)^beta dt` over `[-1, 1]`.
    pub fn integrate<G: Fn(f64) -> f64>(&self, f: G) -> f64 {
        compensated_sum(self.nodes.iter().zip(&self.weights).map(|(&t, &w)| w * f(t)))
    }

    /// Total mass of the rule.
    pub fn mass(&self) -> f64 {
        compensated_sum(self.weights.iter().copied())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_matches_known_rule() {
        let r = GaussJacobi::legendre(3).unwrap();
        let x = libm::sqrt(3.0 / 5.0);
        let expect = [(-x, 5.0 / 9.0), (0.0, 8.0 / 9.0), (x, 5.0 / 9.0)];
        for ((t, w), (et, ew)) in r.nodes().iter().zip(r.weights()).zip(expect) {
            assert!((t - et).abs() < 1e-15);
            assert!((w - ew).abs() < 1e-15);
        }
    }

    #[test]
    fn chebyshev_nodes_and_weights() {
        // alpha = beta = -1/2: nodes cos((2i-1)pi/2n), weights pi/n
        let n = 9;
        let r = GaussJacobi::new(n, -0.5, -0.5).unwrap();
        for (i, (t, w)) in r.nodes().iter().zip(r.weights()).enumerate() {
            let k = n - i;
            let et = libm::cos((2 * k - 1) as f64 * core::f64::consts::PI / (2 * n) as f64);
            assert!((t - et).abs() < 1e-15, "{t} vs {et}");
            assert!((w - core::f64::consts::PI / n as f64).abs() < 1e-14);
        }
    }

    #[test]
    fn exact_on_jacobi_moments() {
        // ∫ (1+t)^k (1-t)^a (1+t)^b = mass(a, b + k)
        for &(a, b) in &[(0.5, -0.5), (2.5, 2.5), (0.0, 1.5), (-0.5, 3.0)] {
            let r = GaussJacobi::new(12, a, b).unwrap();
            for k in 0..24 {
                let got = r.integrate(|t| libm::pow(1.0 + t, k as f64));
                let want = jacobi_mass(a, b + k as f64);
                assert!(((got - want) / want).abs() < 1e-13, "a={a} b={b} k={k}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn large_rules_stay_accurate() {
        let r = GaussJacobi::new(600, 0.5, 0.5).unwrap();
        assert!((r.mass() - core::f64::consts::PI / 2.0).abs() < 1e-14);
        let second = r.integrate(|t| t * t);
        assert!((second - core::f64::consts::PI / 8.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_exponents() {
        assert!(GaussJacobi::new(4, -1.0, 0.0).is_err());
        assert!(GaussJacobi::new(0, 0.0, 0.0).is_err());
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let v = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(compensated_sum(v), 2.0);
    }
}
