//! Text formats: instances, PACE `.td` tree decompositions, and the plain
//! graph and set-system inputs of the generators. All ids in files are
//! 1-based.

use std::fmt::Write as _;

use crate::decomposition::TreeDecomposition;
use crate::error::{Error, Result};
use crate::instance::{Edge, Instance, Role};
use crate::reductions::SimpleGraph;

fn tokens(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.first() {
            None => None,
            Some(t) if t.starts_with('c') && t.len() == 1 => None,
            Some(t) if t.starts_with('#') => None,
            _ => Some((i + 1, toks)),
        }
    })
}

fn num<T: std::str::FromStr>(line: usize, tok: Option<&&str>, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| Error::parse(line, format!("{what} '{tok}' is not a valid number")))
}

fn vertex(line: usize, tok: Option<&&str>, n: usize) -> Result<usize> {
    let v: usize = num(line, tok, "vertex id")?;
    if v == 0 || v > n {
        return Err(Error::parse(line, format!("vertex id {v} is outside 1..={n}")));
    }
    Ok(v - 1)
}

fn expect_len(line: usize, toks: &[&str], len: usize) -> Result<()> {
    if toks.len() != len {
        return Err(Error::parse(
            line,
            format!("expected {len} fields, found {}", toks.len()),
        ));
    }
    Ok(())
}

/// Parses the instance format:
///
/// ```text
/// p makhc <n> <m> <numDemands> <k>
/// e <u> <v> <w>
/// v <id> <C|H|B>
/// d <a> <b>
/// ```
///
/// Vertices without a `v` line are both client and hub location.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut header: Option<(usize, usize, usize, usize, usize)> = None;
    let mut edges = Vec::new();
    let mut roles: Vec<Option<Role>> = Vec::new();
    let mut demands = Vec::new();
    for (line, toks) in tokens(text) {
        match toks[0] {
            "p" => {
                if header.is_some() {
                    return Err(Error::parse(line, "duplicate problem line"));
                }
                expect_len(line, &toks, 6)?;
                if toks[1] != "makhc" {
                    return Err(Error::parse(line, format!("unknown problem type '{}'", toks[1])));
                }
                let n = num(line, toks.get(2), "vertex count")?;
                let m = num(line, toks.get(3), "edge count")?;
                let nd = num(line, toks.get(4), "demand count")?;
                let k = num(line, toks.get(5), "k")?;
                roles = vec![None; n];
                header = Some((line, n, m, nd, k));
            }
            kind => {
                let Some((_, n, ..)) = header else {
                    return Err(Error::parse(line, "data before the problem line"));
                };
                match kind {
                    "e" => {
                        expect_len(line, &toks, 4)?;
                        let u = vertex(line, toks.get(1), n)?;
                        let v = vertex(line, toks.get(2), n)?;
                        let w: u64 = num(line, toks.get(3), "weight")?;
                        if w == 0 {
                            return Err(Error::parse(line, "edge weights must be positive"));
                        }
                        if u == v {
                            return Err(Error::parse(line, "self-loop"));
                        }
                        edges.push(Edge::new(u, v, w));
                    }
                    "v" => {
                        expect_len(line, &toks, 3)?;
                        let v = vertex(line, toks.get(1), n)?;
                        let role = match toks[2] {
                            "C" => Role::Client,
                            "H" => Role::Hub,
                            "B" => Role::Both,
                            other => return Err(Error::parse(line, format!("unknown role '{other}'"))),
                        };
                        if roles[v].replace(role).is_some() {
                            return Err(Error::parse(line, format!("role of vertex {} given twice", v + 1)));
                        }
                    }
                    "d" => {
                        expect_len(line, &toks, 3)?;
                        let a = vertex(line, toks.get(1), n)?;
                        let b = vertex(line, toks.get(2), n)?;
                        demands.push((a, b));
                    }
                    other => return Err(Error::parse(line, format!("unknown line type '{other}'"))),
                }
            }
        }
    }
    let Some((hline, n, m, nd, k)) = header else {
        return Err(Error::parse(0, "missing problem line"));
    };
    if edges.len() != m {
        return Err(Error::parse(
            hline,
            format!("header declares {m} edges, found {}", edges.len()),
        ));
    }
    if demands.len() != nd {
        return Err(Error::parse(
            hline,
            format!("header declares {nd} demands, found {}", demands.len()),
        ));
    }
    let roles = roles.into_iter().map(|r| r.unwrap_or(Role::Both)).collect();
    Instance::new(n, edges, roles, demands, k)
}

/// Normalized instance text: sorted edges and demands, a `v` line only for
/// vertices that are not both client and hub.
pub fn write_instance(instance: &Instance) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "p makhc {} {} {} {}",
        instance.n(),
        instance.edges().len(),
        instance.demands().len(),
        instance.k()
    )
    .unwrap();
    for (v, role) in instance.roles().iter().enumerate() {
        let tag = match role {
            Role::Client => "C",
            Role::Hub => "H",
            Role::Both => continue,
        };
        writeln!(out, "v {} {tag}", v + 1).unwrap();
    }
    for e in instance.edges() {
        writeln!(out, "e {} {} {}", e.u + 1, e.v + 1, e.w).unwrap();
    }
    for &(a, b) in instance.demands() {
        writeln!(out, "d {} {}", a + 1, b + 1).unwrap();
    }
    out
}

/// Parses a PACE `.td` file. Bag ids must be `1..=numBags`.
pub fn parse_td(text: &str) -> Result<TreeDecomposition> {
    let mut header: Option<(usize, usize, usize, usize)> = None;
    let mut bags: Vec<Option<Vec<usize>>> = Vec::new();
    let mut edges = Vec::new();
    for (line, toks) in tokens(text) {
        if toks[0] == "s" {
            if header.is_some() {
                return Err(Error::parse(line, "duplicate solution line"));
            }
            expect_len(line, &toks, 5)?;
            if toks[1] != "td" {
                return Err(Error::parse(line, format!("expected 's td', found 's {}'", toks[1])));
            }
            let nb: usize = num(line, toks.get(2), "bag count")?;
            let width: usize = num(line, toks.get(3), "maximum bag size")?;
            let n: usize = num(line, toks.get(4), "vertex count")?;
            bags = vec![None; nb];
            header = Some((line, nb, width, n));
            continue;
        }
        let Some((_, nb, _, n)) = header else {
            return Err(Error::parse(line, "data before the 's td' line"));
        };
        if toks[0] == "b" {
            let id: usize = num(line, toks.get(1), "bag id")?;
            if id == 0 || id > nb {
                return Err(Error::parse(line, format!("bag id {id} is outside 1..={nb}")));
            }
            let mut bag = toks[2..]
                .iter()
                .map(|t| vertex(line, Some(t), n))
                .collect::<Result<Vec<_>>>()?;
            bag.sort_unstable();
            bag.dedup();
            if bags[id - 1].replace(bag).is_some() {
                return Err(Error::parse(line, format!("bag {id} given twice")));
            }
        } else {
            expect_len(line, &toks, 2)?;
            let a: usize = num(line, toks.first(), "bag id")?;
            let b: usize = num(line, toks.get(1), "bag id")?;
            for x in [a, b] {
                if x == 0 || x > nb {
                    return Err(Error::parse(line, format!("bag id {x} is outside 1..={nb}")));
                }
            }
            edges.push((a - 1, b - 1));
        }
    }
    let Some((hline, _, width, _)) = header else {
        return Err(Error::parse(0, "missing 's td' line"));
    };
    let bags = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| Error::parse(hline, format!("bag {} is missing", i + 1))))
        .collect::<Result<Vec<_>>>()?;
    let largest = bags.iter().map(Vec::len).max().unwrap_or(0);
    if largest > width {
        return Err(Error::parse(
            hline,
            format!("header declares bags of size at most {width}, found {largest}"),
        ));
    }
    Ok(TreeDecomposition { bags, edges })
}

pub fn write_td(td: &TreeDecomposition, n: usize) -> String {
    let mut out = String::new();
    let largest = td.bags.iter().map(Vec::len).max().unwrap_or(0);
    writeln!(out, "s td {} {} {}", td.bags.len(), largest, n).unwrap();
    for (i, bag) in td.bags.iter().enumerate() {
        write!(out, "b {}", i + 1).unwrap();
        for v in bag {
            write!(out, " {}", v + 1).unwrap();
        }
        out.push('\n');
    }
    for &(a, b) in &td.edges {
        writeln!(out, "{} {}", a + 1, b + 1).unwrap();
    }
    out
}

/// Plain graph in DIMACS style: `p edge <n> <m>` followed by `e <u> <v>` lines.
pub fn parse_graph(text: &str) -> Result<SimpleGraph> {
    let mut n = None;
    let mut edges = Vec::new();
    for (line, toks) in tokens(text) {
        match toks[0] {
            "p" => {
                expect_len(line, &toks, 4)?;
                n = Some(num::<usize>(line, toks.get(2), "vertex count")?);
            }
            "e" => {
                expect_len(line, &toks, 3)?;
                let n = n.ok_or_else(|| Error::parse(line, "edge before the problem line"))?;
                let u = vertex(line, toks.get(1), n)?;
                let v = vertex(line, toks.get(2), n)?;
                if u == v {
                    return Err(Error::parse(line, "self-loop"));
                }
                edges.push((u, v));
            }
            other => return Err(Error::parse(line, format!("unknown line type '{other}'"))),
        }
    }
    let n = n.ok_or_else(|| Error::parse(0, "missing problem line"))?;
    Ok(SimpleGraph::new(n, edges))
}

pub fn write_graph(g: &SimpleGraph) -> String {
    let mut out = format!("p edge {} {}\n", g.n, g.edges.len());
    for &(u, v) in &g.edges {
        writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
    }
    out
}

/// Set system: one `u <e1> <e2> ...` universe line and one `s <e1> ...` line
/// per set. Elements are arbitrary non-negative integers.
pub fn parse_set_system(text: &str) -> Result<(Vec<u64>, Vec<Vec<u64>>)> {
    let mut universe = None;
    let mut family = Vec::new();
    for (line, toks) in tokens(text) {
        let elems = toks[1..]
            .iter()
            .map(|t| num::<u64>(line, Some(t), "element"))
            .collect::<Result<Vec<_>>>()?;
        match toks[0] {
            "u" => {
                if universe.replace(elems).is_some() {
                    return Err(Error::parse(line, "duplicate universe line"));
                }
            }
            "s" => family.push(elems),
            other => return Err(Error::parse(line, format!("unknown line type '{other}'"))),
        }
    }
    let universe = universe.ok_or_else(|| Error::parse(0, "missing universe line"))?;
    Ok((universe, family))
}
