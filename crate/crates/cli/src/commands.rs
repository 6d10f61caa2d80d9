use std::fs;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use log::info;
use serde::Serialize;

use makhc::format::{parse_graph, parse_instance, parse_set_system, parse_td, write_instance, write_td};
use makhc::oracle::brute_force_opt;
use makhc::reductions::{
    gen_from_hitting_set, gen_from_kcenter, gen_from_vertex_cover, gen_grid, gen_random, planar_bounds, GridDemands,
    RandomSpec,
};
use makhc::{
    all_pairs_distances, evaluate_solution, greedy_three_approx, solve, Edge, Instance, Rational, SolveOptions,
};

use crate::{Command, GenFamily, SolveArgs};

/// Maps an error to the process exit code: 2 infeasible, 3 parse error,
/// 4 enumeration cap exceeded, 1 anything else.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    match err.chain().find_map(|c| c.downcast_ref::<makhc::Error>()) {
        Some(makhc::Error::Infeasible(_) | makhc::Error::RadiusInfeasible(_)) => 2,
        Some(makhc::Error::Parse { .. }) => 3,
        Some(makhc::Error::CapExceeded { .. }) => 4,
        _ => 1,
    }
}

pub fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Solve(args) => with_threads(args.threads, || solve_cmd(&args)),
        Command::Exact { instance, cap, threads } => with_threads(threads, || exact_cmd(&instance, cap)),
        Command::Greedy { instance } => greedy_cmd(&instance),
        Command::Check {
            instance,
            hubs,
            r,
            epsilon,
        } => check_cmd(&instance, &hubs, r.zip(epsilon)),
        Command::Bound { k, r } => {
            let b = planar_bounds(k, r);
            if b.exact {
                println!("rho <= {}", b.rho_ceil);
                println!("tw <= {}", b.tw_ceil);
            } else {
                println!("rho <= {:.4} (integer bound {})", b.rho, b.rho_ceil);
                println!("tw <= {:.4} (integer bound {})", b.tw, b.tw_ceil);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Gen { family, out } => {
            let instance = generate(family)?;
            emit(out.as_deref(), &write_instance(&instance))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Convert { instance, td, out } => convert(instance.as_deref(), td.as_deref(), out.as_deref()),
    }
}

fn with_threads(threads: Option<usize>, f: impl FnOnce() -> Result<ExitCode> + Send) -> Result<ExitCode> {
    match threads {
        None => f(),
        Some(0) => bail!("--threads must be at least 1"),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .context("cannot start worker threads")?
            .install(f),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_instance(path: &Path) -> Result<Instance> {
    parse_instance(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn solve_cmd(args: &SolveArgs) -> Result<ExitCode> {
    let instance = load_instance(&args.instance)?;
    let td = match &args.td {
        Some(path) => Some(parse_td(&read(path)?).with_context(|| format!("in {}", path.display()))?),
        None => None,
    };
    let mut opts = SolveOptions::new(args.epsilon);
    if args.exact_colors {
        opts = opts.exact();
    }
    opts.literal_delta = args.paper_delta;
    opts.max_r = args.max_r;
    opts.rescale = args.rescale;

    let report = solve(&instance, td.as_ref(), &opts)?;
    info!(
        "value {} at r = {} with {} hubs",
        report.value_original_weights,
        report.r_used,
        report.hubs.len()
    );
    emit(args.json.as_deref(), &json(&report)?)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ExactReport {
    opt: u64,
    hubs: Vec<usize>,
    k: usize,
}

fn exact_cmd(path: &Path, cap: u128) -> Result<ExitCode> {
    let instance = load_instance(path)?;
    let d = all_pairs_distances(&instance)?;
    let res = brute_force_opt(&instance, &d, cap)?;
    let report = ExactReport {
        opt: res.opt,
        hubs: res.optimal_hubs.iter().map(|h| h + 1).collect(),
        k: instance.k(),
    };
    print!("{}", json(&report)?);
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct GreedyReport {
    value: u64,
    hubs: Vec<usize>,
    r_used: Option<u64>,
}

fn greedy_cmd(path: &Path) -> Result<ExitCode> {
    let instance = load_instance(path)?;
    let d = all_pairs_distances(&instance)?;
    let sol = greedy_three_approx(&instance, &d)?;
    let report = GreedyReport {
        value: sol.value,
        hubs: sol.hubs.iter().map(|h| h + 1).collect(),
        r_used: sol.r_used,
    };
    print!("{}", json(&report)?);
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct DemandCost {
    demand: (usize, usize),
    hub: usize,
    cost: u64,
}

#[derive(Serialize)]
struct CheckReport {
    value: u64,
    hubs: Vec<usize>,
    demands: Vec<DemandCost>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bound: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    within_bound: Option<bool>,
}

fn parse_hubs(text: &str, n: usize) -> Result<Vec<usize>> {
    let mut hubs = Vec::new();
    for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let id: usize = tok.parse().with_context(|| format!("hub id '{tok}' is not a number"))?;
        if id == 0 || id > n {
            bail!("hub id {id} is outside 1..={n}");
        }
        hubs.push(id - 1);
    }
    hubs.sort_unstable();
    hubs.dedup();
    Ok(hubs)
}

fn check_cmd(path: &Path, hubs: &str, radius: Option<(u64, Rational)>) -> Result<ExitCode> {
    let instance = load_instance(path)?;
    let hubs = parse_hubs(hubs, instance.n())?;
    if let Some(&h) = hubs.iter().find(|&&h| !instance.is_hub(h)) {
        bail!("vertex {} is not a hub location", h + 1);
    }
    if hubs.len() > instance.k() {
        log::warn!("{} hubs exceed the budget k = {}", hubs.len(), instance.k());
    }
    let d = all_pairs_distances(&instance)?;
    let eval = evaluate_solution(&instance, &hubs, &d)?;
    let demands = eval
        .per_demand_hub
        .iter()
        .map(|&((a, b), h)| DemandCost {
            demand: (a + 1, b + 1),
            hub: h + 1,
            cost: d.via(a, h, b),
        })
        .collect();

    // every demand within (1 + eps) 2r
    let limit = radius.map(|(r, eps)| (Rational::from_integer(1) + eps) * (2 * r));
    let within = limit.map(|q| Rational::from_integer(eval.value) <= q);
    let report = CheckReport {
        value: eval.value,
        hubs: hubs.iter().map(|h| h + 1).collect(),
        demands,
        bound: limit.map(|q| format!("{}/{}", q.numer(), q.denom())),
        within_bound: within,
    };
    print!("{}", json(&report)?);
    Ok(if within == Some(false) {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    })
}

fn generate(family: GenFamily) -> Result<Instance> {
    let instance = match family {
        GenFamily::Vc { graph, k, subdivide } => {
            let g = parse_graph(&read(&graph)?).with_context(|| format!("in {}", graph.display()))?;
            gen_from_vertex_cover(&g, k, subdivide)?
        }
        GenFamily::Hs { sets, k } => {
            let (universe, family) =
                parse_set_system(&read(&sets)?).with_context(|| format!("in {}", sets.display()))?;
            gen_from_hitting_set(&universe, &family, k)?.0
        }
        GenFamily::Kcenter { graph, k } => {
            let g = parse_graph(&read(&graph)?).with_context(|| format!("in {}", graph.display()))?;
            let edges: Vec<Edge> = g.edges.iter().map(|&(u, v)| Edge::new(u, v, 1)).collect();
            gen_from_kcenter(g.n, &edges, k)?
        }
        GenFamily::Grid { rows, cols, demands, k } => gen_grid(rows, cols, demands.parse::<GridDemands>()?, k)?,
        GenFamily::Random {
            n,
            density,
            weight_max,
            demands,
            k,
            hub_fraction,
            seed,
        } => gen_random(&RandomSpec {
            n,
            density,
            weight_max,
            num_demands: demands,
            k,
            hub_fraction,
            seed,
        })?,
    };
    Ok(instance)
}

fn convert(instance: Option<&Path>, td: Option<&Path>, out: Option<&Path>) -> Result<ExitCode> {
    let inst = instance.map(load_instance).transpose()?;
    let Some(td_path) = td else {
        let inst = inst.expect("clap requires --instance or --td");
        emit(out, &write_instance(&inst))?;
        return Ok(ExitCode::SUCCESS);
    };
    let td = parse_td(&read(td_path)?).with_context(|| format!("in {}", td_path.display()))?;
    let n = match &inst {
        Some(inst) => {
            makhc::decomposition::validate(&td, inst)
                .map_err(makhc::Error::InvalidDecomposition)
                .with_context(|| format!("{} against {}", td_path.display(), instance.unwrap().display()))?;
            inst.n()
        }
        None => td.bags.iter().flatten().map(|&v| v + 1).max().unwrap_or(0),
    };
    emit(out, &write_td(&td, n))?;
    Ok(ExitCode::SUCCESS)
}
