//! Point sets on the unit sphere `S^{n-1}` used to sample hole boundaries.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// `count` unit vectors in `ℝⁿ`: uniform angles on the circle, a Fibonacci
/// lattice on `S²`, normalised Gaussian samples (one per orthant first) above.
pub fn sample_unit_sphere(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    match n {
        2 => (0..count)
            .map(|k| {
                let theta = 2.0 * PI * k as f64 / count as f64;
                vec![theta.cos(), theta.sin()]
            })
            .collect(),
        3 => fibonacci_sphere(count),
        _ => random_orthants(n, count, seed),
    }
}

fn fibonacci_sphere(count: usize) -> Vec<Vec<f64>> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|k| {
            let z = 1.0 - 2.0 * (k as f64 + 0.5) / count as f64;
            let rho = (1.0 - z * z).sqrt();
            let phi = golden * k as f64;
            vec![rho * phi.cos(), rho * phi.sin(), z]
        })
        .collect()
}

fn random_orthants(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let orthants = 1usize << n.min(20);
    (0..count)
        .map(|k| {
            let mut v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
            if k < orthants {
                for (axis, c) in v.iter_mut().enumerate() {
                    let sign = if (k >> axis) & 1 == 1 { -1.0 } else { 1.0 };
                    *c = sign * c.abs();
                }
            }
            let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
            v.iter_mut().for_each(|c| *c /= norm);
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_unit_vectors() {
        for n in 2..=6 {
            let pts = sample_unit_sphere(n, 40, 7);
            assert_eq!(pts.len(), 40);
            for p in &pts {
                assert_eq!(p.len(), n);
                let r: f64 = p.iter().map(|c| c * c).sum::<f64>().sqrt();
                assert!((r - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn orthant_samples_cover_all_sign_patterns() {
        let pts = sample_unit_sphere(4, 16, 1);
        let mut seen = [false; 16];
        for p in &pts {
            let code = p.iter().enumerate().fold(0, |acc, (i, c)| acc | (((*c < 0.0) as usize) << i));
            seen[code] = true;
        }
        assert!(seen.iter().all(|s| *s));
    }
}
