//! Shared test helpers: a seeded generator of random valid networks.

// compiled once per test binary; not every binary uses every helper
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use crn_mono::{Network, Reaction, Species};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random valid network. Reactant, product, and promoter sets of each
/// reaction are pairwise disjoint, which satisfies every structural
/// invariant by construction.
pub fn random_network(rng: &mut ChaCha8Rng) -> Network {
    let s = rng.gen_range(2..=6usize);
    let r = rng.gen_range(1..=8usize);
    let species: Vec<Species> = (0..s)
        .map(|id| Species {
            id,
            name: format!("X{id}"),
        })
        .collect();
    let mut reactions = Vec::new();
    for id in 0..r {
        let mut ids: Vec<usize> = (0..s).collect();
        ids.shuffle(rng);
        let n_react = rng.gen_range(1..=2.min(s - 1));
        let n_prod = rng.gen_range(1..=2.min(s - n_react));
        let mut pool = ids.into_iter();
        let reactants: BTreeMap<usize, u32> = (&mut pool)
            .take(n_react)
            .map(|j| (j, rng.gen_range(1..=2)))
            .collect();
        let products: BTreeMap<usize, u32> = (&mut pool)
            .take(n_prod)
            .map(|j| (j, rng.gen_range(1..=2)))
            .collect();
        let mut promoters = BTreeSet::new();
        if rng.gen_bool(0.3) {
            if let Some(j) = pool.next() {
                promoters.insert(j);
            }
        }
        let reversible = rng.gen_bool(0.4);
        reactions.push(Reaction {
            id,
            name: format!("R{}", id + 1),
            reactants,
            products,
            promoters,
            reversible,
            k_fwd: rng.gen_range(0.1..10.0),
            k_bwd: if reversible {
                Some(rng.gen_range(0.1..10.0))
            } else {
                None
            },
        });
    }
    let initial = (0..s).map(|_| rng.gen_range(0.0..5.0)).collect();
    Network::new(species, reactions, initial).unwrap()
}

/// Path of a checked-in fixture file.
pub fn fixture(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn load_fixture(name: &str) -> crn_mono::NetworkDocument {
    let text = std::fs::read_to_string(fixture(name)).unwrap();
    crn_mono::parser::parse(&text).unwrap()
}
