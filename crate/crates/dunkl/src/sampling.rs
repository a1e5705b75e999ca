//! Seeded sample points on the unit sphere.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn unit_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
        let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if n > 1e-8 {
            return v.into_iter().map(|a| a / n).collect();
        }
    }
}

/// `count` independent uniform pairs `(x, y)` on `S^{dim-1}`.
pub fn sphere_pairs(dim: usize, count: usize, seed: u64) -> Vec<(Vec<f64>, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let x = unit_vector(&mut rng, dim);
            (x, unit_vector(&mut rng, dim))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_and_unit() {
        let a = sphere_pairs(3, 10, 7);
        assert_eq!(a, sphere_pairs(3, 10, 7));
        assert_ne!(a, sphere_pairs(3, 10, 8));
        for (x, y) in &a {
            assert!((x.iter().map(|t| t * t).sum::<f64>() - 1.0).abs() < 1e-14);
            assert!((y.iter().map(|t| t * t).sum::<f64>() - 1.0).abs() < 1e-14);
        }
    }
}
