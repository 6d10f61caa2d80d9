//! WebAssembly bindings for the static demo page in `www/`. Each export takes
//! plain arguments and returns a JSON string; the same logic is available
//! natively through the `*_json` functions.

use makhc::arith::{choose_delta, parse_rational, AdditionTree, PowerTable, Value};
use makhc::oracle::brute_force_opt;
use makhc::reductions::{gen_grid, planar_bounds, GridDemands};
use makhc::{all_pairs_distances, greedy_three_approx, solve, Rational, SolveOptions};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Hub sets enumerated before the demo gives up on the exact optimum.
const DEMO_CAP: u128 = 200_000;

#[derive(Serialize)]
struct GridResult {
    rows: usize,
    cols: usize,
    demands: Vec<(usize, usize)>,
    hubs: Vec<usize>,
    value: u64,
    r_used: u64,
    delta: Option<String>,
    greedy_hubs: Vec<usize>,
    greedy_value: u64,
    opt: Option<u64>,
    colorings_expanded: u64,
}

/// Solves a unit grid with the dynamic program; vertex `(i, j)` is `i * cols + j`
/// and all ids in the result are 0-based.
pub fn solve_grid_json(
    rows: usize,
    cols: usize,
    pattern: &str,
    k: usize,
    epsilon: &str,
    exact: bool,
) -> Result<String, String> {
    // the table size grows with the shorter side, which is the treewidth
    if rows == 0 || cols == 0 || rows.min(cols) > 4 || rows * cols > 20 {
        return Err("use at most 20 vertices with one side at most 4".into());
    }
    let pattern: GridDemands = pattern.parse().map_err(|e: makhc::Error| e.to_string())?;
    let eps = parse_rational(epsilon).map_err(|e| e.to_string())?;
    let inst = gen_grid(rows, cols, pattern, k).map_err(|e| e.to_string())?;
    let d = all_pairs_distances(&inst).map_err(|e| e.to_string())?;
    let greedy = greedy_three_approx(&inst, &d).map_err(|e| e.to_string())?;
    let mut opts = SolveOptions::new(eps);
    if exact {
        opts = opts.exact();
    }
    let report = solve(&inst, None, &opts).map_err(|e| e.to_string())?;
    let opt = brute_force_opt(&inst, &d, DEMO_CAP).ok().map(|o| o.opt);
    let out = GridResult {
        rows,
        cols,
        demands: inst.demands().to_vec(),
        hubs: report.solution.hubs.clone(),
        value: report.value_original_weights,
        r_used: report.r_used,
        delta: report.delta.clone(),
        greedy_hubs: greedy.hubs,
        greedy_value: greedy.value,
        opt,
        colorings_expanded: report.colorings_expanded,
    };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct TreeNode {
    exact: u64,
    approx: f64,
    /// `z / y`, or 1 when both are zero.
    ratio: f64,
}

#[derive(Serialize)]
struct TreeResult {
    delta: String,
    height: usize,
    nodes: Vec<TreeNode>,
    worst_ratio: f64,
    bound: f64,
}

fn build_tree(leaves: &[u64], shape: &str) -> Result<AdditionTree, String> {
    let mut it = leaves.iter().map(|&x| AdditionTree::Leaf(x));
    match shape {
        "chain" => {
            let first = it.next().ok_or("no leaves")?;
            Ok(it.fold(first, AdditionTree::node))
        }
        "balanced" => {
            let mut level: Vec<AdditionTree> = it.collect();
            if level.is_empty() {
                return Err("no leaves".into());
            }
            while level.len() > 1 {
                let mut next = Vec::with_capacity(level.len().div_ceil(2));
                let mut pairs = level.into_iter();
                while let Some(a) = pairs.next() {
                    next.push(match pairs.next() {
                        Some(b) => AdditionTree::node(a, b),
                        None => a,
                    });
                }
                level = next;
            }
            Ok(level.pop().unwrap())
        }
        other => Err(format!("unknown shape '{other}' (use chain or balanced)")),
    }
}

/// Sums comma-separated integer leaves with rounded addition, choosing
/// `delta = eps / (2 height + 1)`, and reports every node in postorder.
pub fn addition_tree_json(leaves: &str, epsilon: &str, shape: &str) -> Result<String, String> {
    let leaves: Vec<u64> = leaves
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| format!("leaf '{t}' is not a non-negative integer"))
        })
        .collect::<Result<_, _>>()?;
    if leaves.len() > 64 {
        return Err("at most 64 leaves".into());
    }
    let eps = parse_rational(epsilon).map_err(|e| e.to_string())?;
    let tree = build_tree(&leaves, shape)?;
    let height = tree.height();
    let delta = choose_delta(eps, height as u64, true);
    let table = PowerTable::new(delta);
    let nodes: Vec<TreeNode> = tree
        .evaluate_all(&table)
        .into_iter()
        .map(|(y, z)| {
            let approx = table.to_f64(z);
            let ratio = match (y, z) {
                (0, _) => 1.0,
                (_, Value::Int(x)) => x as f64 / y as f64,
                _ => approx / y as f64,
            };
            TreeNode {
                exact: y,
                approx,
                ratio,
            }
        })
        .collect();
    let worst_ratio = nodes.iter().map(|n| n.ratio).fold(1.0, f64::max);
    let out = TreeResult {
        delta: format!("{}/{}", delta.numer(), delta.denom()),
        height,
        nodes,
        worst_ratio,
        bound: 1.0 + to_f64(eps),
    };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

fn to_f64(q: Rational) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

pub fn planar_bounds_json(k: u32, r: u32) -> String {
    serde_json::to_string(&planar_bounds(k as u64, r as u64)).expect("plain struct serializes")
}

#[wasm_bindgen]
pub fn solve_grid(
    rows: usize,
    cols: usize,
    pattern: &str,
    k: usize,
    epsilon: &str,
    exact: bool,
) -> Result<String, JsError> {
    solve_grid_json(rows, cols, pattern, k, epsilon, exact).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn addition_tree(leaves: &str, epsilon: &str, shape: &str) -> Result<String, JsError> {
    addition_tree_json(leaves, epsilon, shape).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn bounds(k: u32, r: u32) -> String {
    planar_bounds_json(k, r)
}
