#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_coeffs<R: Rng>(rng: &mut R, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.gen::<f64>()).collect()
}

/// An atomic measure on `[0, max_node]` with an optional top mass.
#[derive(Debug, Clone)]
pub struct RandomMeasure {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub top_mass: f64,
}

impl RandomMeasure {
    pub fn sample<R: Rng>(rng: &mut R, max_atoms: usize, max_node: f64, top: bool) -> Self {
        let r = rng.gen_range(1..=max_atoms);
        let nodes = (0..r)
            .map(|_| {
                if rng.gen_bool(0.1) {
                    0.0
                } else {
                    rng.gen_range(0.0..max_node)
                }
            })
            .collect();
        let weights = (0..r).map(|_| rng.gen_range(0.1..1.0)).collect();
        let top_mass = if top && rng.gen_bool(0.5) {
            rng.gen_range(0.0..1.0)
        } else {
            0.0
        };
        Self {
            nodes,
            weights,
            top_mass,
        }
    }

    pub fn moments(&self, order: usize) -> Vec<f64> {
        let mut p: Vec<f64> = (0..=order)
            .map(|k| {
                self.nodes
                    .iter()
                    .zip(&self.weights)
                    .map(|(t, w)| w * t.powi(k as i32))
                    .sum()
            })
            .collect();
        p[order] += self.top_mass;
        p
    }

    pub fn distinct_atoms(&self) -> usize {
        let mut n = self.nodes.clone();
        n.sort_by(f64::total_cmp);
        n.dedup();
        n.len()
    }
}

/// Moments of a few-atom measure, sometimes nudged by a small relative amount
/// so that sequences sit on both sides of the feasibility boundary.
pub fn boundary_coeffs<R: Rng>(rng: &mut R, len: usize) -> Vec<f64> {
    let max_atoms = (len / 2).max(1);
    let mut p = RandomMeasure::sample(rng, max_atoms, 2.0, true).moments(len - 1);
    if rng.gen_bool(0.5) {
        let scale = p.iter().cloned().fold(0.0, f64::max);
        let k = rng.gen_range(0..len);
        let delta = rng.gen_range(-1e-3..1e-3) * scale;
        p[k] = (p[k] + delta).max(0.0);
    }
    p
}
