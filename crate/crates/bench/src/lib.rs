//! Seeded instance generators for benchmarks.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use restruct_core::restructure::ChangeCosts;
use restruct_core::solvers::{
    Alternative, AssignmentInstance, Compatibility, Component, Edge, Item, KnapsackInstance, McGroup, MorphSystem,
    MultipleChoiceInstance, WeightedGraph,
};
use restruct_core::{Id, Money};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn money(r: &mut ChaCha8Rng, lo: i64, hi: i64) -> Money {
    Money::from_tenths(r.gen_range(lo..=hi))
}

/// `n` items with profits and weights in 0.1..=10.0; capacity is half the
/// total weight.
pub fn knapsack(n: usize, seed: u64) -> KnapsackInstance {
    let mut r = rng(seed);
    let items: Vec<Item> =
        (1..=n as u32).map(|i| Item::new(i, money(&mut r, 1, 100), money(&mut r, 1, 100))).collect();
    let total: Money = items.iter().map(|i| i.weight).sum();
    KnapsackInstance { items, capacity: Money::from_tenths(total.tenths() / 2) }
}

/// The same items with perturbed profits and a tighter capacity, as the
/// next stage of [`knapsack`].
pub fn knapsack_next(prev: &KnapsackInstance, seed: u64) -> KnapsackInstance {
    let mut r = rng(seed);
    let items = prev
        .items
        .iter()
        .map(|i| {
            let p = (i.profit.tenths() + r.gen_range(-20..=20)).max(1);
            Item::new(i.id.clone(), Money::from_tenths(p), i.weight)
        })
        .collect();
    KnapsackInstance { items, capacity: Money::from_tenths(prev.capacity.tenths() * 9 / 10) }
}

/// Deletion and addition costs in 0.1..=2.0 for every item.
pub fn change_costs(ids: impl IntoIterator<Item = Id>, seed: u64) -> ChangeCosts {
    let mut r = rng(seed);
    let mut c = ChangeCosts::default();
    for id in ids {
        c.delete.insert(id.clone(), money(&mut r, 1, 20));
        c.add.insert(id, money(&mut r, 1, 20));
    }
    c
}

pub fn multiple_choice(groups: usize, per_group: usize, seed: u64) -> MultipleChoiceInstance {
    let mut r = rng(seed);
    let mut total = 0;
    let groups = (0..groups)
        .map(|g| {
            let items: Vec<Item> = (0..per_group)
                .map(|k| Item::new(format!("g{g}i{k}"), money(&mut r, 1, 100), money(&mut r, 1, 100)))
                .collect();
            total += items.iter().map(|i| i.weight.tenths()).max().unwrap_or(0);
            McGroup { id: Id::new(format!("g{g}")), items }
        })
        .collect();
    MultipleChoiceInstance { groups, capacity: Money::from_tenths(total * 6 / 10) }
}

pub fn assignment(n: usize, seed: u64) -> AssignmentInstance {
    let mut r = rng(seed);
    AssignmentInstance { profit: (0..n).map(|_| (0..n).map(|_| money(&mut r, 0, 100)).collect()).collect() }
}

/// Connected graph: a random spanning path plus each other pair with
/// probability `density`.
pub fn graph(n: usize, density: f64, seed: u64) -> WeightedGraph {
    let mut r = rng(seed);
    let mut edges = Vec::new();
    let mut seen = BTreeSet::new();
    for v in 2..=n as u32 {
        let u = r.gen_range(1..v);
        seen.insert((u, v));
        edges.push(Edge::new(u, v, money(&mut r, 1, 100)));
    }
    for u in 1..=n as u32 {
        for v in u + 1..=n as u32 {
            if !seen.contains(&(u, v)) && r.gen_bool(density) {
                edges.push(Edge::new(u, v, money(&mut r, 1, 100)));
            }
        }
    }
    WeightedGraph { vertices: (1..=n as u32).map(Id::from).collect(), steiner: BTreeSet::new(), edges }
}

/// `m` components with `alts` alternatives each, priorities in 1..=3 and
/// compatibilities in 1..=3 for every cross-component pair.
pub fn morph_system(m: usize, alts: usize, seed: u64) -> MorphSystem {
    let mut r = rng(seed);
    let components: Vec<Component> = (0..m)
        .map(|c| Component {
            id: Id::new(format!("C{c}")),
            alternatives: (0..alts)
                .map(|a| Alternative { id: Id::new(format!("C{c}a{a}")), priority: r.gen_range(1..=3) })
                .collect(),
        })
        .collect();
    let mut compatibility = Vec::new();
    for (i, ci) in components.iter().enumerate() {
        for cj in &components[i + 1..] {
            for a in &ci.alternatives {
                for b in &cj.alternatives {
                    compatibility.push(Compatibility { a: a.id.clone(), b: b.id.clone(), w: r.gen_range(1..=3) });
                }
            }
        }
    }
    MorphSystem { levels: 3, compat_max: 3, components, compatibility }
}
