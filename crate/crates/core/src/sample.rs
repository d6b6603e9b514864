//! Seeded random rationals, vectors and words for property checks.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::exact::{ratio, Q};
use crate::symplectic::{GenId, Registry, SpaceKind, SymVector};
use crate::weyl::WeylElement;

pub use rand::SeedableRng;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p/q` with `p ∈ [−3, 3]` and `q ∈ {1, 2, 3, 4}`.
pub fn random_q(rng: &mut SampleRng) -> Q {
    ratio(rng.gen_range(-3..=3), rng.gen_range(1..=4))
}

pub fn random_nonzero_q(rng: &mut SampleRng) -> Q {
    loop {
        let x = random_q(rng);
        if x != ratio(0, 1) {
            return x;
        }
    }
}

/// Combination of up to `max_terms` distinct generators from `pool`.
pub fn random_combination(rng: &mut SampleRng, pool: &[GenId], max_terms: usize) -> SymVector {
    let k = rng.gen_range(1..=max_terms.min(pool.len()).max(1));
    let mut v = SymVector::zero();
    for id in pool.choose_multiple(rng, k) {
        v.add_term(*id, &random_nonzero_q(rng));
    }
    v
}

/// Generators of the registry belonging to `kind`.
pub fn pool(reg: &Registry, kind: SpaceKind) -> Result<Vec<GenId>> {
    let mut out = Vec::new();
    for id in reg.ids() {
        if reg.member(kind, &SymVector::gen(id))? {
            out.push(id);
        }
    }
    Ok(out)
}

/// A random nonzero element of `kind` built from its generators.
pub fn random_member(rng: &mut SampleRng, reg: &Registry, kind: SpaceKind, max_terms: usize) -> Result<SymVector> {
    let p = pool(reg, kind)?;
    loop {
        let v = random_combination(rng, &p, max_terms);
        if !v.is_zero() {
            return Ok(v);
        }
    }
}

pub fn random_phase(rng: &mut SampleRng) -> Complex64 {
    Complex64::from_polar(1.0, rng.gen_range(-3.0..3.0))
}

/// A word with `terms` keys drawn from `keys` and unit-modulus coefficients.
pub fn random_word(rng: &mut SampleRng, keys: &[SymVector], terms: usize) -> WeylElement {
    let mut w = WeylElement::zero();
    for _ in 0..terms {
        let k = keys.choose(rng).expect("nonempty key set").clone();
        let amp = rng.gen_range(0.5..1.5);
        w = w.add(&WeylElement::term(k, random_phase(rng) * amp));
    }
    w
}
