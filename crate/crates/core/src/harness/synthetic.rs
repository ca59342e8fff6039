use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::motif::{Construct, MotifId};

/// Seeded constructs whose label is fixed by the first-slot motif: `M3` or
/// `M5` in slot 1 gives high cytotoxicity (survival 0.3), anything else low
/// (survival 0.9).
pub fn synthetic_constructs(n: usize, seed: u64) -> Result<Vec<Construct>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let len = rng.random_range(1..=3);
            let mut motifs: Vec<MotifId> = (0..len)
                .map(|_| MotifId::new(rng.random_range(1..=13)).expect("id in range"))
                .collect();
            // alternate classes so both labels are well represented
            if i % 2 == 0 {
                motifs[0] = MotifId::new(if rng.random_bool(0.5) { 3 } else { 5 }).expect("id in range");
            } else if synthetic_is_high(motifs[0]) {
                motifs[0] = MotifId::new(1).expect("id in range");
            }
            let survival = if synthetic_is_high(motifs[0]) { 0.3 } else { 0.9 };
            Construct::new(motifs, survival)
        })
        .collect()
}

pub fn synthetic_is_high(first: MotifId) -> bool {
    matches!(first.number(), 3 | 5)
}
