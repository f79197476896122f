//! Counter-based SplitMix64 ("splitmix64-counter v1").
//!
//! Draw `i` (starting at 0) of stream `seed` is
//! `mix64(seed + (i + 1) * 0x9E3779B97F4A7C15)` with wrapping arithmetic,
//! where `mix64` is the SplitMix64 finalizer. Unit floats use the top 53
//! bits, offset by half an ulp so they lie strictly inside `(0, 1)`.

pub const NAME: &str = "splitmix64-counter v1";

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct CounterRng {
    seed: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        Self { seed, counter: 0 }
    }

    /// Draw with an explicit index, independent of the stream position.
    pub fn at(seed: u64, i: u64) -> u64 {
        mix64(seed.wrapping_add(i.wrapping_add(1).wrapping_mul(GAMMA)))
    }

    pub fn next_u64(&mut self) -> u64 {
        let v = Self::at(self.seed, self.counter);
        self.counter += 1;
        v
    }

    /// Uniform in the open interval `(0, 1)`.
    pub fn next_unit(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in the open interval `(-a, a)`.
    pub fn next_symmetric(&mut self, a: f64) -> f64 {
        a * (2.0 * self.next_unit() - 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_reference_splitmix_sequence() {
        // the counter form equals the classic state-update SplitMix64
        let mut state = 42u64;
        let mut rng = CounterRng::new(42);
        for _ in 0..100 {
            state = state.wrapping_add(GAMMA);
            assert_eq!(rng.next_u64(), mix64(state));
        }
    }

    #[test]
    fn known_first_value() {
        // SplitMix64 seeded with 0 starts with 0xE220A8397B1DCDAF
        assert_eq!(CounterRng::new(0).next_u64(), 0xE220_A839_7B1D_CDAF);
    }

    #[test]
    fn units_are_open_interval() {
        let mut rng = CounterRng::new(7);
        for _ in 0..10_000 {
            let u = rng.next_unit();
            assert!(u > 0.0 && u < 1.0);
        }
    }
}
