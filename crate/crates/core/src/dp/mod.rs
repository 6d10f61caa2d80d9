//! The dynamic program over nice tree decompositions and the outer loop over
//! the radius.
//!
//! For a fixed radius `r`, every bag vertex is colored with its (rounded)
//! distance to the nearest open hub and an orientation telling whether the
//! witnessing path stays inside the current subgraph. `A_t(c)` is the fewest
//! hubs inside `G_t` that realize coloring `c` and serve every demand the
//! subproblem is responsible for within `(1 + eps) 2r`. If the root value is at
//! most `k` the reconstructed hubs serve all demands within that bound;
//! otherwise no `k` hubs serve all demands within `r`.

mod color;
mod context;
mod table;
mod verify;

use web_time::Instant;

use log::{debug, info};
use serde::Serialize;

pub use color::{Color, Coloring};
pub use context::{DemandSet, DpContext};
pub use table::{Back, DpStats, DpTables, Entry, NodeTable, RunOptions};
pub use verify::{verify_conditions, ConditionViolation};

use crate::arith::{choose_delta, ColorAlphabet, Rational};
use crate::decomposition::{
    complete_bags, heuristic_decomposition, make_nice, validate, NiceTreeDecomposition, TreeDecomposition,
};
use crate::distance::{all_pairs_distances, DistanceOracle};
use crate::error::{Error, Result};
use crate::evaluate::Solution;
use crate::greedy::greedy_three_approx;
use crate::instance::{Instance, Vertex};
use crate::preprocess::{preprocess_remove, rescale, Reduced};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ColorMode {
    /// Colors are powers of `1 + delta`; factor `2 + eps`.
    Approximate,
    /// Colors are exact integer distances; factor 2.
    Exact,
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// [`solve`] returns a value of at most `(2 + epsilon) OPT`;
    /// [`solve_fixed_r`] serves within `(1 + epsilon) 2r`.
    pub epsilon: Rational,
    pub mode: ColorMode,
    /// Use `eps / (2 height + 1)` instead of the default `eps / (4 height + 2)`.
    pub literal_delta: bool,
    pub max_r: Option<u64>,
    pub rescale: bool,
}

impl SolveOptions {
    pub fn new(epsilon: Rational) -> Self {
        SolveOptions {
            epsilon,
            mode: ColorMode::Approximate,
            literal_delta: false,
            max_r: None,
            rescale: false,
        }
    }

    pub fn exact(mut self) -> Self {
        self.mode = ColorMode::Exact;
        self
    }
}

/// Everything the dynamic program needs at one radius: the preprocessed and
/// bag-completed instance, its distances, the nice decomposition and the
/// alphabet.
pub struct Prepared {
    pub reduced: Reduced,
    pub completed: Instance,
    pub oracle: DistanceOracle,
    pub ntd: NiceTreeDecomposition,
    pub alphabet: ColorAlphabet,
    pub r: u64,
}

impl Prepared {
    /// Preprocesses `instance` at radius `r`. Returns `Ok(None)` when
    /// preprocessing already shows that the radius is infeasible.
    pub fn new(
        instance: &Instance,
        oracle: &DistanceOracle,
        td: &TreeDecomposition,
        r: u64,
        opts: &SolveOptions,
    ) -> Result<Option<Prepared>> {
        if r == 0 {
            return Err(Error::InvalidParameter("the dynamic program needs r >= 1".into()));
        }
        let reduced = match preprocess_remove(instance, r, oracle) {
            Ok(red) => red,
            Err(Error::RadiusInfeasible(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        let mut new_id = vec![usize::MAX; instance.n()];
        for (i, &v) in reduced.original.iter().enumerate() {
            new_id[v] = i;
        }
        let td_red = td.restrict(&new_id);
        validate(&td_red, &reduced.instance).map_err(Error::InvalidDecomposition)?;
        let ntd = make_nice(&td_red);
        let red_oracle = all_pairs_distances(&reduced.instance)?;
        let completed = complete_bags(&reduced.instance, &ntd, &red_oracle)?;
        let alphabet = match opts.mode {
            ColorMode::Exact => ColorAlphabet::exact(r),
            ColorMode::Approximate => {
                let delta = choose_delta(opts.epsilon, ntd.height() as u64, opts.literal_delta);
                ColorAlphabet::approximate(opts.epsilon, delta, r)
            }
        };
        Ok(Some(Prepared {
            reduced,
            completed,
            oracle: red_oracle,
            ntd,
            alphabet,
            r,
        }))
    }

    pub fn k(&self) -> usize {
        self.reduced.instance.k()
    }

    pub fn context(&self) -> DpContext<'_> {
        DpContext::new(&self.completed, &self.oracle, &self.ntd, &self.alphabet)
    }

    /// Runs the dynamic program. With `prune` set, entries needing more than
    /// `k` hubs are dropped as soon as they appear.
    pub fn run(&self, prune: bool) -> DpTables {
        let ctx = self.context();
        table::run(
            &ctx,
            RunOptions {
                budget: prune.then_some(self.k() as u32),
            },
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FixedOutcome {
    /// Hubs (ids of the input instance) serving every demand within the bound.
    Found(Vec<Vertex>),
    Fail,
}

#[derive(Clone, Debug)]
pub struct FixedRadiusReport {
    pub outcome: FixedOutcome,
    pub stats: DpStats,
    pub ntd_height: usize,
    pub nodes: usize,
    pub delta: Option<Rational>,
    pub alphabet_len: usize,
}

/// One run of the dynamic program at radius `r` on `instance`.
pub fn solve_fixed_r(
    instance: &Instance,
    oracle: &DistanceOracle,
    td: &TreeDecomposition,
    r: u64,
    opts: &SolveOptions,
) -> Result<FixedRadiusReport> {
    let Some(prep) = Prepared::new(instance, oracle, td, r, opts)? else {
        debug!("r = {r}: infeasible after preprocessing");
        return Ok(FixedRadiusReport {
            outcome: FixedOutcome::Fail,
            stats: DpStats::default(),
            ntd_height: 0,
            nodes: 0,
            delta: None,
            alphabet_len: 0,
        });
    };
    let tables = prep.run(true);
    let outcome = match tables.root_hubs() {
        Some(a) if a as usize <= prep.k() => {
            let hubs = tables
                .reconstruct(&prep.ntd, prep.ntd.root(), &Coloring::new())
                .expect("root entry exists");
            FixedOutcome::Found(hubs.into_iter().map(|h| prep.reduced.to_original(h)).collect())
        }
        _ => FixedOutcome::Fail,
    };
    debug!(
        "r = {r}: {} nodes, height {}, |alphabet| {}, {} colorings, outcome {:?}",
        prep.ntd.len(),
        prep.ntd.height(),
        prep.alphabet.len(),
        tables.stats.colorings_expanded,
        outcome
    );
    Ok(FixedRadiusReport {
        outcome,
        stats: tables.stats,
        ntd_height: prep.ntd.height(),
        nodes: prep.ntd.len(),
        delta: prep.alphabet.delta(),
        alphabet_len: prep.alphabet.len(),
    })
}

/// Machine-readable result of [`solve`]. Vertex ids are 1-based.
#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub opt_mode: ColorMode,
    pub epsilon: String,
    /// Accuracy used by the radius test, derived from `epsilon`.
    pub epsilon_dp: String,
    pub delta: Option<String>,
    pub r_used: u64,
    pub value_original_weights: u64,
    pub hubs: Vec<usize>,
    pub k: usize,
    pub tw: usize,
    pub ntd_height: usize,
    pub nodes: usize,
    pub colorings_expanded: u64,
    pub greedy_value: u64,
    pub radii_tried: u64,
    pub runtime_ms: u64,
    #[serde(skip)]
    pub solution: Solution,
}

pub fn format_rational(q: Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Full pipeline: greedy bound, then the dynamic program for increasing `r`
/// starting at `ceil(A / 3)`, returning the first success measured in the
/// original weights.
pub fn solve(instance: &Instance, td: Option<&TreeDecomposition>, opts: &SolveOptions) -> Result<SolveReport> {
    let start = Instant::now();
    if *opts.epsilon.numer() == 0 {
        return Err(Error::InvalidParameter("epsilon must be positive".into()));
    }
    let oracle = all_pairs_distances(instance)?;
    let td = match td {
        Some(td) => {
            validate(td, instance).map_err(Error::InvalidDecomposition)?;
            td.clone()
        }
        None => heuristic_decomposition(instance),
    };
    let greedy = greedy_three_approx(instance, &oracle)?;
    info!("greedy value {} with {} hubs", greedy.value, greedy.hubs.len());

    let mut report = SolveReport {
        opt_mode: opts.mode,
        epsilon: format_rational(opts.epsilon),
        epsilon_dp: String::new(),
        delta: None,
        r_used: 0,
        value_original_weights: greedy.value,
        hubs: greedy.hubs.iter().map(|h| h + 1).collect(),
        k: instance.k(),
        tw: td.width(),
        ntd_height: 0,
        nodes: 0,
        colorings_expanded: 0,
        greedy_value: greedy.value,
        radii_tried: 0,
        runtime_ms: 0,
        solution: greedy.clone(),
    };
    if greedy.value == 0 {
        // zero cost is optimal
        report.solution.r_used = Some(0);
        report.runtime_ms = start.elapsed().as_millis() as u64;
        return Ok(report);
    }

    // The radius test serves demands within (1 + eps') 2r, so eps' = eps / 2
    // gives the factor 2 + eps. Rescaling adds a second error of at most
    // 2 eps_s OPT, and the split eps' = eps / 4, eps_s = eps / (8 + 2 eps)
    // keeps the product of both below 1 + eps / 2.
    let mut dp_opts = opts.clone();
    dp_opts.epsilon = opts.epsilon / 2;
    let (work, work_oracle, a) = if opts.rescale {
        let scale_eps = opts.epsilon / (Rational::from_integer(8) + opts.epsilon * 2);
        let scaled = rescale(instance, scale_eps, greedy.value)?;
        if scaled == *instance {
            (instance.clone(), oracle.clone(), greedy.value)
        } else {
            let so = all_pairs_distances(&scaled)?;
            let ga = greedy_three_approx(&scaled, &so)?.value;
            info!("rescaled weights; greedy value on scaled instance {ga}");
            dp_opts.epsilon = opts.epsilon / 4;
            (scaled, so, ga)
        }
    } else {
        (instance.clone(), oracle.clone(), greedy.value)
    };

    let first = a.div_ceil(3).max(1);
    let last = opts.max_r.unwrap_or(a).max(first);
    for r in first..=last {
        report.radii_tried += 1;
        let fixed = solve_fixed_r(&work, &work_oracle, &td, r, &dp_opts)?;
        report.colorings_expanded += fixed.stats.colorings_expanded;
        if let FixedOutcome::Found(hubs) = fixed.outcome {
            let solution = Solution::measured(instance, hubs, Some(r), &oracle)?;
            info!("accepted r = {r} with value {}", solution.value);
            report.epsilon_dp = format_rational(dp_opts.epsilon);
            report.delta = fixed.delta.map(format_rational);
            report.r_used = r;
            report.value_original_weights = solution.value;
            report.hubs = solution.hubs.iter().map(|h| h + 1).collect();
            report.ntd_height = fixed.ntd_height;
            report.nodes = fixed.nodes;
            report.solution = solution;
            report.runtime_ms = start.elapsed().as_millis() as u64;
            return Ok(report);
        }
    }
    Err(Error::Infeasible(format!("no radius in {first}..={last} was accepted")))
}
