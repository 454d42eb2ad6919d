use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use butterfly_core::butterfly::generate_with_cap;
use butterfly_core::certificates::{assemble_book, base_book, recursive_adjacency, rule_for, CertificateBook, Rule};
use butterfly_core::forcing::{brute_force_z, closure, construct_s, size_formula};
use butterfly_core::linalg::corank_lower_bound;
use butterfly_core::power::{brute_force_pd, pd_lower_bound};
use butterfly_core::{
    theorem_formulas, BookMemo, Budget, Butterfly, Error, ExactMatrix, FieldTag, Graph, Ordering, VerifyOptions,
    VertexSet,
};
use serde_json::{json, Map, Value};

use crate::output::Emitter;
use crate::{limits, CertCommand, Command, GenArgs, GenFormat, PdCommand, RankArgs, VerifyArgs, ZfCommand};

/// Process exit status for an error: 3 for resource limits, 1 for failed
/// internal checks, 2 for everything the caller got wrong.
pub fn exit_code(e: &anyhow::Error) -> i32 {
    for cause in e.chain() {
        if let Some(err) = cause.downcast_ref::<Error>() {
            return match err {
                Error::Resource(_) => 3,
                Error::Invariant(_) => 1,
                _ => 2,
            };
        }
    }
    2
}

#[derive(Clone, Debug)]
pub struct RSpec(pub Vec<u32>);

/// `4`, `1..8` (inclusive), `1..=8`, `2,4,6`.
pub fn parse_r_spec(s: &str) -> Result<RSpec, String> {
    let num = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("{t:?}: {e}"));
    let mut out = Vec::new();
    for part in s.split(',') {
        if let Some((a, b)) = part.split_once("..") {
            let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
            if a > b {
                return Err(format!("empty range {part}"));
            }
            out.extend(a..=b);
        } else {
            out.push(num(part)?);
        }
    }
    if out.is_empty() {
        return Err("no r given".into());
    }
    Ok(RSpec(out))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_graph(path: &Path) -> Result<Graph> {
    Graph::from_edge_list(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn butterfly(r: u32) -> Result<Butterfly> {
    limits::require(limits::butterfly_bytes(r), &format!("BF({r})"))?;
    Ok(generate_with_cap(r, limits::max_vertices()?)?)
}

fn budget(seconds: Option<f64>) -> Result<Budget> {
    match seconds {
        Some(s) if !(s.is_finite() && s > 0.0) => {
            Err(Error::Domain(format!("budget must be positive, got {s}")).into())
        }
        Some(s) => Ok(Budget::seconds(s)),
        None => Ok(Budget::unlimited()),
    }
}

fn graph_in(bf: &Butterfly, order: Ordering) -> Graph {
    match order {
        Ordering::Layer => bf.graph.clone(),
        Ordering::Recursive => bf.recursive_graph(),
    }
}

pub fn run(cmd: Command, out: &Emitter) -> Result<i32> {
    match cmd {
        Command::Gen(args) => gen(args).map(|_| 0),
        Command::Zf(zf) => zero_forcing(zf, out),
        Command::Rank(args) => rank(args, out),
        Command::Cert(c) => cert(c, out),
        Command::Pd(p) => power(p, out),
        Command::Verify(args) => verify(args, out),
        Command::Bench(args) => bench(args.r, out).map(|_| 0),
    }
}

fn gen(args: GenArgs) -> Result<()> {
    let bf = butterfly(args.r)?;
    let order: Ordering = args.order.into();
    let g = graph_in(&bf, order);
    let mut w: Box<dyn Write> = match &args.out {
        Some(p) => Box::new(BufWriter::new(fs::File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    };
    // Vertex k of `g` is layer id k, or recursive label k + 1.
    let layer_id = |k: usize| match order {
        Ordering::Layer => k,
        Ordering::Recursive => bf.labeling.layer_of_label(k + 1),
    };
    match args.format {
        GenFormat::Edgelist => {
            match order {
                Ordering::Layer => writeln!(w, "# BF({}) layer order: vertex i*2^r + x is (x,i)", args.r)?,
                Ordering::Recursive => writeln!(w, "# BF({}) recursive order: vertex k has label k+1", args.r)?,
            }
            w.write_all(g.to_edge_list().as_bytes())?;
        }
        GenFormat::Dot => {
            let dot = g.to_dot(|k| {
                let v = bf.labeling.layer_vertex(layer_id(k));
                Some(match order {
                    Ordering::Layer => v.to_string(),
                    Ordering::Recursive => format!("{} {v}", k + 1),
                })
            });
            w.write_all(dot.as_bytes())?;
        }
        GenFormat::Matrix => {
            let m = ExactMatrix::from_graph(&g, FieldTag::Rationals);
            let mut line = String::with_capacity(2 * m.n());
            for i in 0..m.n() {
                line.clear();
                let mut cols = m.row(i).iter().peekable();
                for j in 0..m.n() {
                    if j > 0 {
                        line.push(' ');
                    }
                    if cols.peek() == Some(&&j) {
                        cols.next();
                        line.push('1');
                    } else {
                        line.push('0');
                    }
                }
                writeln!(w, "{line}")?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn zero_forcing(cmd: ZfCommand, out: &Emitter) -> Result<i32> {
    match cmd {
        ZfCommand::Closure { graph, set, trace } => {
            let g = read_graph(&graph)?;
            let ids = butterfly_core::graph::parse_vertex_list(&read(&set)?)
                .with_context(|| format!("in {}", set.display()))?;
            let s = VertexSet::from_ids(g.n(), ids)?;
            let t = closure(&g, &s)?;
            if let Some(path) = &trace {
                let text = serde_json::to_string_pretty(&t.to_json())?;
                fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
            }
            let uncolored: Vec<usize> = (0..g.n()).filter(|&v| !t.final_set().contains(v)).collect();
            out.emit(&json!({
                "n": g.n(),
                "initial": s.len(),
                "colored": t.final_set().len(),
                "forcing": t.is_forcing(),
                "rounds": t.rounds.len(),
                "pt": t.propagation_time(),
                "uncolored": uncolored,
            }))?;
            Ok(0)
        }
        ZfCommand::Check { r, order } => {
            let bf = butterfly(r)?;
            let order: Ordering = order.into();
            let s = construct_s(r, order)?;
            let t = closure(&graph_in(&bf, order), &s)?;
            let formula = size_formula(r)?;
            let pt = t.propagation_time();
            let ok = s.len() as u64 == formula && pt.is_some_and(|p| p <= 2 * r as usize);
            out.emit(&json!({
                "r": r,
                "n": bf.n(),
                "order": order,
                "size": s.len(),
                "formula": formula,
                "forcing": t.is_forcing(),
                "pt": pt,
                "pt_bound": 2 * r,
                "ok": ok,
            }))?;
            Ok(if ok { 0 } else { 1 })
        }
        ZfCommand::Min { graph, budget: secs } => {
            let g = read_graph(&graph)?;
            let min = brute_force_z(&g, budget(secs)?)?;
            out.emit(&json!({
                "n": g.n(),
                "z": min.size,
                "witness": min.witness,
                "lower_bound": min.lower_bound,
            }))?;
            Ok(0)
        }
    }
}

fn rank(args: RankArgs, out: &Emitter) -> Result<i32> {
    let (g, r) = match (&args.graph, args.r) {
        (Some(path), _) => (read_graph(path)?, None),
        (None, Some(r)) => (butterfly(r)?.graph, Some(r)),
        (None, None) => unreachable!("clap requires one input"),
    };
    if args.field == FieldTag::GF2 {
        limits::require(limits::dense_gf2_bytes(g.n()), "bit-packed elimination")?;
    }
    let rank = ExactMatrix::from_graph(&g, args.field).rank();
    let mut report = json!({ "n": g.n(), "field": args.field, "rank": rank, "nullity": g.n() - rank });
    let mut status = 0;
    if let Some(r) = r {
        let (mr, _) = theorem_formulas(r)?;
        report["r"] = json!(r);
        report["formula"] = json!(mr);
        report["match"] = json!(rank as u64 == mr);
        if rank as u64 != mr {
            status = 1;
        }
    }
    out.emit(&report)?;
    Ok(status)
}

/// Unverified chain of books up to `r`; only the structure of the last one is checked.
fn assemble_chain(r: u32) -> Result<CertificateBook> {
    let (mut prev2, mut prev) = (base_book(1)?, base_book(2)?);
    if r == 1 {
        return Ok(prev2);
    }
    for k in 3..=r {
        let next = assemble_book(k, &prev, &prev2)?;
        prev2 = std::mem::replace(&mut prev, next);
    }
    prev.check_structure()?;
    Ok(prev)
}

fn cert(cmd: CertCommand, out: &Emitter) -> Result<i32> {
    match cmd {
        CertCommand::Build { r, verify, out: path } => {
            limits::require(limits::butterfly_bytes(r), "certificate book")?;
            let start = Instant::now();
            let book = if verify { BookMemo::new().get(r)?.clone() } else { assemble_chain(r)? };
            let z = size_formula(r)?;
            if let Some(p) = &path {
                book.save(p).with_context(|| format!("writing {}", p.display()))?;
            }
            let ok = book.len() as u64 == z;
            out.emit(&json!({
                "r": r,
                "certificates": book.len(),
                "s_size": z,
                "verified": verify,
                "seconds": start.elapsed().as_secs_f64(),
                "out": path.map(|p| p.display().to_string()),
            }))?;
            Ok(if ok { 0 } else { 1 })
        }
        CertCommand::Show { r, target } => {
            let rule = rule_for(r, target)?;
            limits::require(limits::butterfly_bytes(r), "certificate book")?;
            let mut memo = BookMemo::new();
            let cert = memo
                .get(r)?
                .get(target)
                .cloned()
                .ok_or_else(|| Error::Domain(format!("row {target} is not in S^({r})")))?;
            let holds = cert.verify(&recursive_adjacency(r)?)?;
            let mut report = json!({
                "r": r,
                "target": target,
                "rule": rule,
                "kplus": cert.kplus,
                "kminus": cert.kminus,
                "verified": holds,
            });
            if let Rule::TwoLevel { i, .. } = rule {
                let lift = memo.two_level(r, i)?;
                report["two_level"] = json!({
                    "source": lift.source,
                    "kminus_prime": lift.kminus_prime,
                    "k1plus": lift.k1plus,
                    "k1minus": lift.k1minus,
                    "k2plus": lift.k2plus,
                    "k2minus": lift.k2minus,
                });
            }
            out.emit(&report)?;
            Ok(if holds { 0 } else { 1 })
        }
    }
}

fn power(cmd: PdCommand, out: &Emitter) -> Result<i32> {
    match cmd {
        PdCommand::Bound { r } => {
            let bf = butterfly(r)?;
            out.emit(&json!({
                "r": r,
                "z_formula": size_formula(r)?,
                "max_degree": bf.graph.max_degree()?,
                "lower_bound": pd_lower_bound(r)?,
            }))?;
            Ok(0)
        }
        PdCommand::Min { graph, budget: secs } => {
            let g = read_graph(&graph)?;
            // Z(G) <= Δ γ_P(G), and the GF(2) corank is a lower bound on Z(G).
            let delta = g.max_degree().unwrap_or(0).max(1);
            let lower_bound = corank_lower_bound(&g, FieldTag::GF2).div_ceil(delta);
            match brute_force_pd(&g, budget(secs)?) {
                Ok(m) => {
                    out.emit(&json!({
                        "lower_bound": lower_bound,
                        "exact": m.size,
                        "witness": m.witness,
                        "minimum_sets": m.minimum_sets,
                        "ppt": m.ppt,
                        "ppt_witness": m.ppt_witness,
                    }))?;
                    Ok(0)
                }
                Err(e @ Error::Resource(_)) => {
                    out.emit(&json!({
                        "lower_bound": lower_bound,
                        "exact": null,
                        "witness": null,
                        "ppt": null,
                        "stopped": e.to_string(),
                    }))?;
                    Ok(3)
                }
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn verify(args: VerifyArgs, out: &Emitter) -> Result<i32> {
    let mut opts = VerifyOptions {
        fields: args.fields.clone(),
        certificates: !args.no_certs,
        brute_force: !args.no_brute_force,
        max_r_rational: args.max_r_rational,
        max_vertices: limits::max_vertices()?,
        ..VerifyOptions::default()
    };
    // Past the memory cap the GF(2) column is skipped rather than failing the run.
    let cap = limits::cap_bytes()?;
    while opts.max_r_gf2 > 0
        && butterfly_core::butterfly::vertex_count(opts.max_r_gf2).is_none_or(|n| limits::dense_gf2_bytes(n) > cap)
    {
        opts.max_r_gf2 -= 1;
    }
    let mut memo = BookMemo::new();
    let mut reports = Vec::new();
    for &r in &args.r.0 {
        reports.push(butterfly_core::verify_pipeline(r, &opts, &mut memo)?);
    }
    let all_ok = reports.iter().all(|rep| rep.all_ok());
    out.emit_with(&reports, |_| {
        Value::Array(
            reports
                .iter()
                .map(|rep| {
                    let mut row = Map::new();
                    row.insert("r".into(), json!(rep.r));
                    row.insert("n".into(), json!(rep.n));
                    row.insert("|S|".into(), json!(rep.s_size));
                    row.insert("Z formula".into(), json!(rep.z_formula));
                    row.insert("pt".into(), json!(rep.pt_observed));
                    for f in &rep.rank_per_field {
                        row.insert(format!("rank {}", f.field), json!(f.rank));
                    }
                    row.insert("mr formula".into(), json!(rep.mr_formula));
                    row.insert("certs".into(), json!(rep.cert_count));
                    if rep.z_brute_force.is_some() {
                        row.insert("Z exact".into(), json!(rep.z_brute_force));
                    }
                    row.insert("match".into(), json!(rep.all_ok()));
                    Value::Object(row)
                })
                .collect(),
        )
    })?;
    Ok(if all_ok { 0 } else { 1 })
}

fn bench(r: u32, out: &Emitter) -> Result<()> {
    fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, f64)> {
        let start = Instant::now();
        let v = f()?;
        Ok((v, start.elapsed().as_secs_f64() * 1e3))
    }
    let (bf, gen_ms) = timed(|| butterfly(r))?;
    limits::require(limits::dense_gf2_bytes(bf.n()), "bit-packed elimination")?;
    let s = construct_s(r, Ordering::Layer)?;
    let (trace, closure_ms) = timed(|| Ok(closure(&bf.graph, &s)?))?;
    let (rank, rank_ms) = timed(|| Ok(bf.adjacency_matrix(Ordering::Layer, FieldTag::GF2).rank()))?;
    let (certs, cert_ms) = timed(|| Ok(BookMemo::new().get(r)?.len()))?;
    out.emit(&json!({
        "r": r,
        "n": bf.n(),
        "generate_ms": gen_ms,
        "closure_ms": closure_ms,
        "pt": trace.propagation_time(),
        "rank_gf2_ms": rank_ms,
        "rank_gf2": rank,
        "certificates_ms": cert_ms,
        "certificates": certs,
    }))?;
    Ok(())
}
