//! Random instances for property checks. Callers supply the RNG, so runs are
//! reproducible from a seed.

use rand::Rng;

use crate::poset::FinitePoset;
use crate::reduce::{random_monotone_map_in, SelfMap};
use crate::subset::SubsetMask;

/// A labelled poset on `n` elements: each pair `i < j` (by index) is a cover
/// candidate with probability `p`, then closed transitively.
pub fn random_poset<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64) -> FinitePoset {
    let labels = (0..n).map(|i| format!("e{i}")).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                edges.push((i, j));
            }
        }
    }
    FinitePoset::from_index_edges(labels, &edges).expect("forward edges are acyclic")
}

pub fn random_subset<R: Rng + ?Sized>(rng: &mut R, space: &FinitePoset) -> SubsetMask {
    SubsetMask::from_bits(space, rng.gen::<u64>())
}

pub fn random_monotone_map<R: Rng + ?Sized>(rng: &mut R, space: &FinitePoset) -> SelfMap {
    let domains = vec![space.full_bits(); space.len()];
    let image = random_monotone_map_in(space, &domains, rng).expect("constant maps always exist");
    SelfMap::new(space, image).expect("image in range")
}

/// A random retract `y` with a retraction onto it. The whole space with the
/// identity is always available as a fallback after `tries` misses.
pub fn random_retraction<R: Rng + ?Sized>(
    rng: &mut R,
    space: &FinitePoset,
    tries: usize,
) -> (SubsetMask, SelfMap) {
    for _ in 0..tries {
        let y = random_subset(rng, space);
        if y.is_empty() {
            continue;
        }
        let domains: Vec<u64> = (0..space.len())
            .map(|x| if y.contains(x) { 1u64 << x } else { y.bits() })
            .collect();
        if let Some(image) = random_monotone_map_in(space, &domains, rng) {
            return (y, SelfMap::new(space, image).expect("image in range"));
        }
    }
    (SubsetMask::full(space), SelfMap::identity(space))
}
