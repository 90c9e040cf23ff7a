//! Fleet replication with perturbed energy use.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::{StationSite, TruckProfile};

pub const DEFAULT_FACTOR_RANGE: (f64, f64) = (0.95, 1.05);

/// Id of copy `k` of a truck; copy 0 keeps the original id.
pub fn copy_id(id: &str, k: usize) -> String {
    if k == 0 {
        id.to_string()
    } else {
        format!("{id}~{k}")
    }
}

/// `copies` passes over the fleet; in each, every profile's consumption is
/// scaled by its own factor drawn uniformly from `factor_range`. Output is
/// copy-major, so the first `profiles.len()` entries are copy 0.
pub fn replicate_fleet(
    profiles: &[TruckProfile],
    copies: usize,
    factor_range: (f64, f64),
    seed: u64,
) -> Vec<TruckProfile> {
    assert!(copies >= 1, "copies must be at least 1");
    let (lo, hi) = factor_range;
    assert!(lo <= hi, "factor range is reversed");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(profiles.len() * copies);
    for k in 0..copies {
        for p in profiles {
            let f = if lo == hi { lo } else { rng.gen_range(lo..=hi) };
            let mut c = p.clone();
            c.id = copy_id(&p.id, k);
            for e in &mut c.consumption {
                *e *= f;
            }
            out.push(c);
        }
    }
    out
}

/// Extends depot owner sets so every copy of an owner also owns the depot.
pub fn replicate_owners(sites: &[StationSite], copies: usize) -> Vec<StationSite> {
    sites
        .iter()
        .map(|s| {
            let mut s = s.clone();
            let owners: BTreeSet<String> = s
                .owner_truck_ids
                .iter()
                .flat_map(|o| (0..copies).map(move |k| copy_id(o, k)))
                .collect();
            s.owner_truck_ids = owners;
            s
        })
        .collect()
}
