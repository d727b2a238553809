//! Seeded inputs shared by the benchmarks.

use orbitrep::little_group::random_orbit_point;
use orbitrep::minkowski::random_lorentz_with;
use orbitrep::{LorentzMatrix, OrbitPoint};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn samples(count: usize, seed: u64) -> Vec<(LorentzMatrix, OrbitPoint)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| (random_lorentz_with(&mut rng, 1.0), random_orbit_point(&mut rng, 1.5))).collect()
}
