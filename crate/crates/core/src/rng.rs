//! Deterministic, splittable sampling.
//!
//! Every sampled case draws from its own ChaCha stream keyed by the run seed
//! and a case label, so results are identical whatever the execution order.

use crate::exact::Rational;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedTree {
    seed: u64,
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl SeedTree {
    pub fn new(seed: u64) -> Self {
        SeedTree { seed }
    }

    pub fn child(&self, label: u64) -> SeedTree {
        SeedTree { seed: mix(self.seed ^ mix(label)) }
    }

    pub fn child_str(&self, label: &str) -> SeedTree {
        let h = label
            .bytes()
            .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
        self.child(h)
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// Nonzero rational `a/b` with `0 < |a| <= num_bound`, `1 <= b <= den_bound`.
pub fn nonzero_rational<R: Rng>(rng: &mut R, num_bound: i64, den_bound: i64) -> Rational {
    let mut a = 0;
    while a == 0 {
        a = rng.gen_range(-num_bound..=num_bound);
    }
    let b = rng.gen_range(1..=den_bound);
    Rational::new(BigInt::from(a), BigInt::from(b))
}

pub fn small_int<R: Rng>(rng: &mut R, bound: i64) -> Rational {
    Rational::from_integer(BigInt::from(rng.gen_range(-bound..=bound)))
}
