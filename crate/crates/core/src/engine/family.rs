//! Seeded random parameter families for the identity checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Rational;

use crate::exact_numbers::Kind;
use crate::poles::{classify_case, Params};

/// `count` parameter sets with `r ∈ {2,3,4}`, `a_l ≤ 6`, `m_l ≤ 3`,
/// shifts `k/d` with `d ≤ 8`, and a random split between the blocks.
///
/// Members alternate between Case I and Case II targets (redrawing until
/// the target is met), so both cases are always represented.
pub fn random_family(seed: u64, count: usize) -> Vec<Params> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let want = if out.len() % 2 == 0 { Kind::Cot } else { Kind::Csc };
        let p = draw(&mut rng);
        if classify_case(&p) == want {
            out.push(p);
        }
    }
    out
}

fn draw(rng: &mut ChaCha8Rng) -> Params {
    let r = rng.random_range(2..=4usize);
    let a = (0..r).map(|_| rng.random_range(1..=6u32)).collect();
    let m = (0..r).map(|_| rng.random_range(1..=3u32)).collect();
    let w = (0..r)
        .map(|_| {
            let d = rng.random_range(1..=8u32);
            let k = rng.random_range(0..d);
            Rational::from((k, d))
        })
        .collect();
    let j_cot = rng.random_range(0..=r);
    Params::new(a, m, w, (j_cot, r - j_cot)).expect("drawn within bounds")
}
