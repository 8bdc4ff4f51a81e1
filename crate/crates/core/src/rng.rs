//! Reproducible random-number plumbing for ensemble runs.
//!
//! Child seeds are derived from `(master_seed, index)` with the splitmix64
//! output function, so replicate `i` sees the same stream no matter how the
//! work is distributed across threads or runs.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// splitmix64 increment (golden-ratio constant).
const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Finalizer of splitmix64 applied to `master + (index + 1) * gamma`.
///
/// This is exactly the i-th output of a splitmix64 stream seeded with
/// `master`, evaluated by random access instead of sequentially.
pub fn child_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Simulation RNG: a small-state ChaCha stream seeded from a child seed.
pub type SimRng = ChaCha8Rng;

pub fn rng_for(master: u64, index: u64) -> SimRng {
    SimRng::seed_from_u64(child_seed(master, index))
}

/// Exponential holding time with the given total rate.
///
/// Uses inversion on a uniform in [0, 1); the complement log keeps the
/// sample finite for u = 0.
pub fn exp_time(rate: f64, rng: &mut impl Rng) -> f64 {
    debug_assert!(rate > 0.0);
    let u: f64 = rng.random();
    -(-u).ln_1p() / rate
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn child_seeds_are_random_access() {
        // Random access must agree with itself and differ across indices.
        let a: Vec<u64> = (0..100).map(|i| child_seed(42, i)).collect();
        let b: Vec<u64> = (0..100).map(|i| child_seed(42, i)).collect();
        assert_eq!(a, b);
        let mut sorted = a.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), a.len(), "collision among child seeds");
    }

    #[test]
    fn child_seeds_differ_across_masters() {
        assert_ne!(child_seed(1, 0), child_seed(2, 0));
    }

    #[test]
    fn exp_time_mean_matches_rate() {
        let mut rng = rng_for(7, 0);
        let n = 200_000;
        let mean: f64 = (0..n).map(|_| exp_time(2.0, &mut rng)).sum::<f64>() / n as f64;
        assert!(
            (mean - 0.5).abs() < 0.01,
            "mean {mean} too far from 1/rate = 0.5"
        );
    }

    #[test]
    fn exp_time_is_positive_and_finite() {
        let mut rng = rng_for(9, 3);
        for _ in 0..10_000 {
            let v = exp_time(1e-6, &mut rng);
            assert!(v > 0.0 && v.is_finite());
        }
    }
}
