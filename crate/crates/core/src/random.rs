//! Deterministic random configurations and blow-up centers, and the sweep
//! that runs the invariance check over them.
//!
//! Case `i` of a sweep with seed `s` uses ChaCha8 seeded with `s` on stream
//! `i`, so results do not depend on scheduling.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::blowup::{check_invariance, BlowupCenter, CenterStratum, Verdict};
use crate::config::{gcd_over, Component, ComponentId, ComponentSet, Configuration, Stratum};
use crate::error::Result;
use crate::ring::RingElement;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_ambient_dim: u32,
    pub max_components: usize,
    pub max_multiplicity: i64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_ambient_dim: 5, max_components: 6, max_multiplicity: 6 }
    }
}

#[derive(Clone, Debug)]
pub struct Case {
    pub config: Configuration,
    pub center: BlowupCenter,
    pub selection: ComponentSet,
}

fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn id(i: usize) -> ComponentId {
    ComponentId::new((i + 1).to_string())
}

fn multiplicity(rng: &mut ChaCha8Rng, bound: i64) -> i64 {
    let m = rng.gen_range(1..=bound);
    if rng.gen_bool(0.5) {
        m
    } else {
        -m
    }
}

fn l_poly(rng: &mut ChaCha8Rng, max_deg: i64) -> RingElement {
    if max_deg < 0 {
        return RingElement::zero();
    }
    RingElement::l_poly((0..=max_deg as u32).map(|d| (d, rng.gen_range(-2i64..=2))))
}

/// A class of Euler characteristic zero within the degree bound.
fn euler_free(rng: &mut ChaCha8Rng, max_deg: i64) -> RingElement {
    &l_poly(rng, max_deg - 1) * &RingElement::torus(1)
}

fn equivariant(rng: &mut ChaCha8Rng, max_deg: i64) -> RingElement {
    let mut x = RingElement::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let order = rng.gen_range(1..=6u64);
        let lpow = rng.gen_range(0..=max_deg.max(0) as u32);
        x += RingElement::monomial(rng.gen_range(-2i64..=2), order, lpow);
    }
    x
}

struct Data {
    class: Option<RingElement>,
    euler: i64,
    torus_cell: bool,
    cover_class: Option<RingElement>,
}

/// Class and cover data for a stratum with the given degree bound;
/// `recipe_ok` tells whether a computed cover may have nonzero Euler
/// characteristic.
fn stratum_data(rng: &mut ChaCha8Rng, max_deg: i64, recipe_ok: bool, torus_only: bool) -> Data {
    if !torus_only && rng.gen_bool(0.15) {
        let cover = equivariant(rng, max_deg);
        let torus_cell = rng.gen_bool(0.5);
        if !torus_cell && rng.gen_bool(0.3) {
            let euler = rng.gen_range(-3..=3);
            return Data { class: None, euler, torus_cell, cover_class: Some(cover) };
        }
        let class = l_poly(rng, max_deg);
        let euler = crate::config::eval_euler(&class);
        return Data { class: Some(class), euler, torus_cell, cover_class: Some(cover) };
    }
    let class = if recipe_ok { l_poly(rng, max_deg) } else { euler_free(rng, max_deg) };
    let euler = crate::config::eval_euler(&class);
    Data { class: Some(class), euler, torus_cell: true, cover_class: None }
}

/// One random valid configuration with an admissible center and selection.
pub fn random_case(seed: u64, index: u64, bounds: &Bounds, torus_only: bool) -> Case {
    let mut rng = rng_for(seed, index);
    let n = rng.gen_range(2..=bounds.max_ambient_dim.max(2));
    let full = rng.gen_bool(0.5);
    let (k, codim) = if full {
        let k = rng.gen_range(2..=n.min(3));
        (k, k)
    } else {
        let k = rng.gen_range(1..=(n - 1).min(3));
        (k, rng.gen_range((k + 1).max(2)..=n))
    };
    let k = k as usize;
    let max_t = 2.min(bounds.max_components.saturating_sub(k));
    let t = rng.gen_range(0..=max_t);
    let extra = rng.gen_range(0..=bounds.max_components.saturating_sub(k + t).min(2));
    let total = k + t + extra;

    let mut mults: Vec<i64> = (0..total).map(|_| multiplicity(&mut rng, bounds.max_multiplicity)).collect();
    if k >= 2 && rng.gen_bool(0.25) {
        let rest: i64 = mults[..k - 1].iter().sum();
        if rest != 0 && rest.abs() <= bounds.max_multiplicity {
            mults[k - 1] = -rest;
        }
    }

    let ids: Vec<ComponentId> = (0..total).map(id).collect();
    let i_set: ComponentSet = ids[..k].iter().cloned().collect();
    let t_set: ComponentSet = ids[k..k + t].iter().cloned().collect();

    // Downward-closed family of strata, sizes up to n.
    let mut family: BTreeSet<ComponentSet> = BTreeSet::new();
    let mut masks: Vec<u32> = (1..(1u32 << total)).collect();
    masks.sort_by_key(|m| m.count_ones());
    for mask in masks {
        let s: ComponentSet = (0..total).filter(|j| mask & (1 << j) != 0).map(id).collect();
        if s.len() > n as usize {
            continue;
        }
        let closed = s.len() == 1
            || s.iter().all(|x| {
                let mut sub = s.clone();
                sub.remove(x);
                family.contains(&sub)
            });
        if !closed {
            continue;
        }
        let forced = s.is_subset(&i_set) || s.len() == 1;
        let contains_i = i_set.is_subset(&s);
        if full && contains_i && !s.difference(&i_set).all(|x| t_set.contains(x)) {
            continue;
        }
        if forced || rng.gen_bool(0.5) {
            family.insert(s);
        }
    }

    let mult = |x: &ComponentId| Some(mults[x.as_str().parse::<usize>().unwrap() - 1]);
    let mut strata = Vec::new();
    let mut adjacency_of = std::collections::BTreeMap::new();
    for s in &family {
        let mut adj = s.clone();
        for x in &ids {
            if rng.gen_bool(0.3) {
                adj.insert(x.clone());
            }
        }
        let recipe_ok = gcd_over(&adj, mult).unwrap() == gcd_over(s, mult).unwrap();
        let d = stratum_data(&mut rng, n as i64 - s.len() as i64, recipe_ok, torus_only);
        adjacency_of.insert(s.clone(), adj.clone());
        strata.push(Stratum {
            components: s.clone(),
            class: d.class,
            euler: d.euler,
            adjacency: adj,
            torus_cell: d.torus_cell,
            cover_class: d.cover_class,
        });
    }
    let components: Vec<Component> = ids.iter().zip(&mults).map(|(i, m)| Component::new(i.clone(), *m)).collect();
    let config = Configuration::new(n, components, strata).expect("generated ids are unique");

    let center = if full {
        BlowupCenter::full(i_set.clone(), t_set.clone())
    } else {
        let t_vec: Vec<ComponentId> = t_set.iter().cloned().collect();
        let mut ks: BTreeSet<ComponentSet> = BTreeSet::new();
        for mask in 0..(1u32 << t_vec.len()) {
            let kk: ComponentSet = (0..t_vec.len()).filter(|j| mask & (1 << j) != 0).map(|j| t_vec[j].clone()).collect();
            let room = n as i64 - codim as i64 - kk.len() as i64;
            let full_set: ComponentSet = i_set.union(&kk).cloned().collect();
            let closed = kk.iter().all(|x| {
                let mut sub = kk.clone();
                sub.remove(x);
                ks.contains(&sub)
            });
            if room >= 0 && closed && family.contains(&full_set) && (kk.is_empty() || rng.gen_bool(0.7)) {
                ks.insert(kk);
            }
        }
        let mut center_strata = Vec::new();
        for kk in ks {
            let full_set: ComponentSet = i_set.union(&kk).cloned().collect();
            let mut adj = full_set.clone();
            for x in &adjacency_of[&full_set] {
                if rng.gen_bool(0.7) {
                    adj.insert(x.clone());
                }
            }
            let room = n as i64 - codim as i64 - kk.len() as i64;
            let recipe_ok = gcd_over(&adj, mult).unwrap() == gcd_over(&full_set, mult).unwrap();
            let d = stratum_data(&mut rng, room, recipe_ok, torus_only);
            center_strata.push(CenterStratum {
                transversal: kk,
                class: d.class,
                euler: d.euler,
                adjacency: adj,
                torus_cell: d.torus_cell,
                cover_class: d.cover_class,
            });
        }
        BlowupCenter::strict(i_set.clone(), t_set.clone(), codim, center_strata)
    };

    let mut selection = ComponentSet::new();
    while selection.is_empty() {
        for x in &ids {
            if rng.gen_bool(0.4) {
                selection.insert(x.clone());
            }
        }
    }
    if rng.gen_bool(0.3) {
        selection = config.component_ids();
    }
    if rng.gen_bool(0.2) {
        selection.insert(ids.choose(&mut rng).unwrap().clone());
    }
    Case { config, center, selection }
}

/// A random configuration in which every stratum is a torus cell with a
/// computed cover, together with a selection.
pub fn random_torus_config(seed: u64, index: u64, bounds: &Bounds) -> (Configuration, ComponentSet) {
    let c = random_case(seed, index, bounds, true);
    (c.config, c.selection)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub index: u64,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SweepSummary {
    pub seed: u64,
    pub count: u64,
    pub passed: u64,
    pub failed: u64,
    pub full_centers: u64,
    pub strict_centers: u64,
    pub zero_exceptional: u64,
    pub first_counterexample: Option<Counterexample>,
}

impl SweepSummary {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

impl std::fmt::Display for SweepSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "seed {} count {}", self.seed, self.count)?;
        writeln!(f, "passed {} failed {}", self.passed, self.failed)?;
        writeln!(
            f,
            "centers: {} full intersection, {} strict, {} with zero exceptional multiplicity",
            self.full_centers, self.strict_centers, self.zero_exceptional
        )?;
        if let Some(c) = &self.first_counterexample {
            writeln!(f, "first counterexample: case {}", c.index)?;
            write!(f, "{}", c.message)?;
        }
        Ok(())
    }
}

fn run_case(seed: u64, index: u64, bounds: &Bounds) -> (bool, bool, bool, Option<String>) {
    let case = random_case(seed, index, bounds, false);
    let zero: i64 = case.center.containing.iter().map(|x| case.config.multiplicity(x).unwrap()).sum();
    let outcome: Result<_> = check_invariance(&case.config, &case.center, &case.selection);
    let failure = match outcome {
        Ok(rep) if rep.verdict == Verdict::Pass => None,
        Ok(rep) => Some(rep.to_string()),
        Err(e) => Some(format!("error: {e}")),
    };
    let message = failure.map(|m| {
        let cfg = crate::format::config_to_json(&case.config).unwrap_or_default();
        let ctr = crate::format::center_to_json(&case.center).unwrap_or_default();
        format!("{m}\nconfiguration:\n{cfg}\ncenter:\n{ctr}\n")
    });
    (message.is_none(), case.center.is_full_intersection, zero == 0, message)
}

/// Runs `count` random invariance checks in parallel.
pub fn sweep(seed: u64, count: u64, bounds: &Bounds) -> SweepSummary {
    let results: Vec<_> = (0..count).into_par_iter().map(|i| (i, run_case(seed, i, bounds))).collect();
    let mut s = SweepSummary { seed, count, ..Default::default() };
    for (i, (ok, full, zero, msg)) in results {
        if ok {
            s.passed += 1;
        } else {
            s.failed += 1;
            if s.first_counterexample.is_none() {
                s.first_counterexample = Some(Counterexample { index: i, message: msg.unwrap_or_default() });
            }
        }
        if full {
            s.full_centers += 1;
        } else {
            s.strict_centers += 1;
        }
        if zero {
            s.zero_exceptional += 1;
        }
    }
    s
}
