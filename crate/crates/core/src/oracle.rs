//! Exhaustive search over hub subsets, used as ground truth.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};

use itertools::Itertools;
use rayon::prelude::*;

use crate::distance::DistanceOracle;
use crate::error::{Error, Result};
use crate::instance::{Instance, Vertex};

pub const DEFAULT_CAP: u128 = 5_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub opt: u64,
    /// Lexicographically least optimal hub set.
    pub optimal_hubs: Vec<Vertex>,
    pub feasible_at: BTreeMap<u64, bool>,
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

/// `cost[demand][hub_index]`.
fn cost_matrix(instance: &Instance, hubs: &[Vertex], oracle: &DistanceOracle) -> Vec<Vec<u64>> {
    instance
        .demands()
        .iter()
        .map(|&(a, b)| hubs.iter().map(|&h| oracle.via(a, h, b)).collect())
        .collect()
}

fn check_cap(hubs: usize, k: usize, cap: u128) -> Result<usize> {
    let k = k.min(hubs);
    let subsets = binomial(hubs, k);
    if subsets > cap {
        return Err(Error::CapExceeded { subsets, hubs, k, cap });
    }
    Ok(k)
}

/// Objective of a subset, abandoning once the running maximum exceeds `limit`.
fn subset_value(cost: &[Vec<u64>], subset: &[usize], limit: u64) -> Option<u64> {
    let mut worst = 0;
    for row in cost {
        let best = subset.iter().map(|&i| row[i]).min().unwrap();
        worst = worst.max(best);
        if worst > limit {
            return None;
        }
    }
    Some(worst)
}

/// Optimal objective over all hub sets of size `k`, by enumeration in
/// lexicographic order. Work is split by the smallest hub of each subset.
pub fn brute_force_opt(instance: &Instance, oracle: &DistanceOracle, cap: u128) -> Result<OracleResult> {
    let hubs = instance.hub_locations();
    let k = check_cap(hubs.len(), instance.k(), cap)?;
    let cost = cost_matrix(instance, &hubs, oracle);
    let incumbent = AtomicU64::new(u64::MAX);

    let best = (0..=hubs.len() - k)
        .into_par_iter()
        .filter_map(|first| {
            let mut local: Option<(u64, Vec<usize>)> = None;
            for rest in (first + 1..hubs.len()).combinations(k - 1) {
                let mut subset = Vec::with_capacity(k);
                subset.push(first);
                subset.extend(rest);
                // strict bound against the shared incumbent keeps lexicographically
                // smaller ties found by other workers
                let global = incumbent.load(Ordering::Relaxed);
                let limit = match &local {
                    Some((v, _)) => global.min(v.saturating_sub(1)),
                    None => global,
                };
                if let Some(v) = subset_value(&cost, &subset, limit) {
                    incumbent.fetch_min(v, Ordering::Relaxed);
                    local = Some((v, subset));
                }
            }
            local
        })
        .min()
        .expect("at least one subset");

    let (opt, idx) = best;
    let mut feasible_at = BTreeMap::new();
    feasible_at.insert(opt, true);
    if opt > 0 {
        feasible_at.insert(opt - 1, false);
    }
    Ok(OracleResult {
        opt,
        optimal_hubs: idx.into_iter().map(|i| hubs[i]).collect(),
        feasible_at,
    })
}

/// Whether some `k` hubs serve every demand within `r`.
pub fn feasible_at(instance: &Instance, r: u64, oracle: &DistanceOracle, cap: u128) -> Result<bool> {
    let hubs = instance.hub_locations();
    let k = check_cap(hubs.len(), instance.k(), cap)?;
    let cost = cost_matrix(instance, &hubs, oracle);
    Ok((0..=hubs.len() - k).into_par_iter().any(|first| {
        (first + 1..hubs.len()).combinations(k - 1).any(|rest| {
            let mut subset = Vec::with_capacity(k);
            subset.push(first);
            subset.extend(rest);
            subset_value(&cost, &subset, r).is_some()
        })
    }))
}

/// Optimal k-center radius of the graph (every vertex a client and a center).
pub fn brute_force_kcenter(n: usize, k: usize, oracle: &DistanceOracle, cap: u128) -> Result<u64> {
    let k = check_cap(n, k, cap)?;
    Ok((0..n)
        .combinations(k)
        .map(|centers| {
            (0..n)
                .map(|v| centers.iter().map(|&c| oracle.get(v, c)).min().unwrap())
                .max()
                .unwrap()
        })
        .min()
        .unwrap())
}
