//! Small deterministic generator (splitmix64). Used for seeded sampling and
//! for offsetting candidate streams; identical seeds give identical runs on
//! every platform.

use crate::algebra::scalar::{frac, Scalar};

#[derive(Debug, Clone)]
pub struct DetRng {
    state: u64,
}

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

impl DetRng {
    pub fn new(seed: u64) -> Self {
        DetRng {
            state: splitmix64(seed ^ 0x5ca1ab1e),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        splitmix64(self.state)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        self.next_u64() % n
    }

    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        debug_assert!(lo < hi);
        lo + self.below((hi - lo) as u64) as i64
    }

    /// Small exact rational with numerator in [-bound, bound] and
    /// denominator in [1, den_bound].
    pub fn rational(&mut self, bound: i64, den_bound: i64) -> Scalar {
        let n = self.int_in(-bound, bound + 1);
        let d = self.int_in(1, den_bound + 1);
        frac(n, d)
    }
}

/// Integer spiral 0, 1, -1, 2, -2, ... covering all integers.
pub fn spiral(i: u64) -> i64 {
    if i == 0 {
        0
    } else if i % 2 == 1 {
        ((i + 1) / 2) as i64
    } else {
        -((i / 2) as i64)
    }
}
