//! Seed derivation. Every random choice in the crate flows from a root seed
//! through [`derive`], so results do not depend on evaluation order.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::Rat;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed for branch `tag` of `seed`.
pub fn derive(seed: u64, tag: u64) -> u64 {
    splitmix64(seed ^ splitmix64(tag.wrapping_add(0x5851_F42D_4C95_7F2D)))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform integer in `[-bound, bound]`.
pub fn int_in(rng: &mut impl Rng, bound: i64) -> Rat {
    Rat::from_integer(BigInt::from(rng.gen_range(-bound..=bound)))
}

/// Random rational `p/q` with `|p| <= num_bound`, `1 <= q <= den_bound`.
pub fn small_rat(rng: &mut impl Rng, num_bound: i64, den_bound: i64) -> Rat {
    let p = rng.gen_range(-num_bound..=num_bound);
    let q = rng.gen_range(1..=den_bound.max(1));
    Rat::new(p.into(), q.into())
}
