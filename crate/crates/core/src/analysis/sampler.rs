use crate::coins::{Coins, CounterCoins, DrawKey, DrawKind};
use crate::colorsets::ColorSets;
use crate::instances::EdgeSet;

/// The vertices holding color `ell`.
pub fn color_class(sets: &ColorSets, ell: u32) -> Vec<usize> {
    (0..sets.sets.len())
        .filter(|&v| sets.contains(v, ell))
        .collect()
}

/// Draws `ℓ ∈ [q]` uniformly and returns `(ℓ, {v : ℓ ∈ S(v)})`.
pub fn sample_independent_set(sets: &ColorSets, seed: u64) -> (u32, Vec<usize>) {
    let mut coins = CounterCoins::new(seed);
    let ell = coins.class(sets.q, DrawKey::new(0, 0, DrawKind::Class, 0)) as u32;
    (ell, color_class(sets, ell))
}

/// No edge lies entirely inside `vertices`.
pub fn is_independent<E: EdgeSet + ?Sized>(instance: &E, vertices: &[usize]) -> bool {
    let mut inside = vec![false; instance.vertex_count()];
    for &v in vertices {
        inside[v] = true;
    }
    (0..instance.edge_count()).all(|idx| !instance.edge(idx).iter().all(|&u| inside[u]))
}
