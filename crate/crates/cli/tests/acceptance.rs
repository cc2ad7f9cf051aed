//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails. Run with `cargo test --test acceptance`.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semnet::affinity::{best_common_friend, best_friend, machiavelli, mixed_affinity, AffinityMatrix};
use semnet::centrality::{betweenness, eigenvector, EigenOptions};
use semnet::corpus::{cooccurrence_network, filter_nouns, DocumentStream, TaggedToken};
use semnet::graph::{fuse, Graph, NodeId};
use semnet::pipe::{efficient_path, fill_path, pipe_comparison, CapacityState, PipeOptions};
use semnet::semantics::{extrinsic, semantic_value, FrequencyTable};

use common::*;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let took = start.elapsed();
    if took > limit {
        return Err(format!("took {took:.2?}, limit {limit:?}"));
    }
    Ok(took)
}

fn extrinsic_oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let start = Instant::now();
    let mut worst = 0.0f64;
    for round in 0..200 {
        let n = rng.gen_range(1..=12);
        let p = rng.gen_range(0.1..0.7);
        let g = random_graph(&mut rng, n, p);
        let freq = random_frequencies(&mut rng, &g, 100);
        let f = match round % 4 {
            0 => best_friend(&g),
            1 => best_common_friend(&g),
            2 => machiavelli(&g),
            _ => mixed_affinity(&g),
        };
        let got = extrinsic(&g, &f, &freq).map_err(|e| e.to_string())?;
        let intrinsic: Vec<f64> = g.labels().iter().map(|l| freq.count(l) as f64).collect();
        let want = extrinsic_oracle(&f.to_dense(), &intrinsic);
        for (i, (a, b)) in got.iter().zip(&want).enumerate() {
            let d = (a - b).abs();
            worst = worst.max(d);
            ensure!(d <= 1e-9, "graph {round}, node {i}: {a} vs oracle {b}");
        }
    }
    let took = within(Duration::from_secs(5), start)?;
    Ok(format!("200 graphs, max |diff| {worst:.1e}, {took:.2?}"))
}

fn affinity_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut worst_row = 0.0f64;
    for round in 0..100 {
        let n = rng.gen_range(1..=20);
        let p = rng.gen_range(0.05..0.6);
        let g = random_graph(&mut rng, n, p);
        let bf = best_friend(&g);
        for x in g.nodes() {
            if g.out_weight(x) > 0.0 {
                let s: f64 = bf.row(x).map(|(_, v)| v).sum();
                worst_row = worst_row.max((s - 1.0).abs());
                ensure!((s - 1.0).abs() <= 1e-9, "graph {round}: BF row {x} sums to {s}");
            }
        }
        let mach = machiavelli(&g);
        for x in g.nodes() {
            for y in g.nodes() {
                ensure!(
                    mach.get(x, y) == mach.get(y, x),
                    "graph {round}: Machiavelli not symmetric at ({x}, {y})"
                );
            }
        }
        for (name, m) in [
            ("bf", bf),
            ("bcf", best_common_friend(&g)),
            ("mach", mach),
            ("mix", mixed_affinity(&g)),
        ] {
            for row in m.to_dense() {
                ensure!(
                    row.iter().all(|v| (0.0..=1.0).contains(v)),
                    "graph {round}: {name} entry outside [0, 1]"
                );
            }
        }
    }
    Ok(format!("100 graphs, max |row sum - 1| {worst_row:.1e}"))
}

fn pipe_fixture() -> Outcome {
    let g = Graph::<f64>::from_edges([("x", "y", 1.0)]).map_err(|e| e.to_string())?;
    let freq: FrequencyTable = [("x", 10), ("y", 10)].into_iter().collect();
    let f = mixed_affinity(&g);
    let s = semantic_value(&g, &f, &freq).map_err(|e| e.to_string())?;
    let (x, y) = (g.node("x").unwrap(), g.node("y").unwrap());
    ensure!((s.semantic(x) - 10.0).abs() <= 1e-9, "S(x) = {}", s.semantic(x));
    ensure!((s.semantic(y) - 19.0).abs() <= 1e-9, "S(y) = {}", s.semantic(y));
    let r = pipe_comparison(&g, &f, &s, x, y, PipeOptions::default()).map_err(|e| e.to_string())?;
    ensure!((r.delivered - 9.0).abs() <= 1e-9, "delivered = {}", r.delivered);
    ensure!(
        (r.affinity_value - 10.0 / 19.0).abs() <= 1e-9,
        "A(x, y) = {}",
        r.affinity_value
    );

    let g = Graph::<f64>::from_edges([("x", "y", 1.0), ("y", "x", 1.0)]).map_err(|e| e.to_string())?;
    let f = mixed_affinity(&g);
    let s = semantic_value(&g, &f, &freq).map_err(|e| e.to_string())?;
    let (x, y) = (g.node("x").unwrap(), g.node("y").unwrap());
    let sym = pipe_comparison(&g, &f, &s, x, y, PipeOptions::default()).map_err(|e| e.to_string())?;
    ensure!((sym.affinity_value - 1.0).abs() <= 1e-9, "symmetric A = {}", sym.affinity_value);
    Ok(format!(
        "delivered {}, A = {:.12}, symmetric A = {}",
        r.delivered, r.affinity_value, sym.affinity_value
    ))
}

/// Replays the pipe loop step by step, checking capacities after every fill.
fn replay(
    f: &AffinityMatrix<f64>,
    s: &semnet::SemanticScores,
    x: NodeId,
    y: NodeId,
    cap: usize,
) -> Result<(), String> {
    let opts = PipeOptions::default();
    let mut state = CapacityState::new(s, x, opts.epsilon).map_err(|e| e.to_string())?;
    let mut steps = 0;
    while state.liquid() > opts.epsilon && state.capacity(y) > opts.epsilon && steps < cap {
        let Some(path) = efficient_path(f, &state, x, y) else { break };
        fill_path(f, &mut state, &path).map_err(|e| e.to_string())?;
        steps += 1;
        ensure!(state.liquid() >= 0.0, "liquid went negative");
        ensure!(
            state.capacities().iter().all(|&m| m >= 0.0),
            "capacity went negative after step {steps}"
        );
    }
    Ok(())
}

fn pipe_safety() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let start = Instant::now();
    let (mut runs, mut capped, mut max_iter) = (0usize, 0usize, 0usize);
    for round in 0..100 {
        let n = rng.gen_range(2..=30);
        let p = rng.gen_range(0.05..0.4);
        let g = random_count_graph(&mut rng, n, p);
        let freq = random_frequencies(&mut rng, &g, 60);
        let f = mixed_affinity(&g);
        let s = semantic_value(&g, &f, &freq).map_err(|e| e.to_string())?;
        let cap = 10 * n;
        for _ in 0..20 {
            let x = NodeId(rng.gen_range(0..n));
            let y = NodeId(rng.gen_range(0..n));
            if x == y {
                continue;
            }
            let r = pipe_comparison(&g, &f, &s, x, y, PipeOptions::default()).map_err(|e| e.to_string())?;
            runs += 1;
            max_iter = max_iter.max(r.iterations);
            capped += usize::from(r.hit_iteration_cap);
            ensure!(r.iterations <= cap, "graph {round}: {} iterations > cap {cap}", r.iterations);
            ensure!(
                r.remaining_capacity.iter().all(|&m| m >= 0.0),
                "graph {round}: negative capacity"
            );
            let bound = s.semantic(x).min(s.semantic(y));
            ensure!(
                r.delivered <= bound + 1e-9,
                "graph {round}: delivered {} > min(S(x), S(y)) = {bound}",
                r.delivered
            );
            ensure!(
                r.affinity_value.is_finite() && r.affinity_value >= 0.0,
                "graph {round}: A = {}",
                r.affinity_value
            );
            replay(&f, &s, x, y, cap).map_err(|e| format!("graph {round}: {e}"))?;
        }
    }
    let took = within(Duration::from_secs(30), start)?;
    Ok(format!(
        "{runs} runs on 100 graphs, max {max_iter} iterations, {capped} stopped by the cap, {took:.2?}"
    ))
}

/// Distance in units in the last place between two non-negative floats.
fn ulps(a: f64, b: f64) -> u64 {
    a.to_bits().abs_diff(b.to_bits())
}

fn centrality_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut worst_ulps = 0;
    for round in 0..50 {
        let n = rng.gen_range(1..=10);
        let p = rng.gen_range(0.1..0.6);
        let g = random_graph(&mut rng, n, p);
        let got = betweenness(&g).values;
        let want = betweenness_oracle(&g);
        for (i, (a, b)) in got.iter().zip(&want).enumerate() {
            // same value up to summation order: zeros agree exactly, the rest within 4 ulps
            ensure!(
                (*a == 0.0) == (*b == 0.0) && ulps(*a, *b) <= 4,
                "graph {round}, node {i}: betweenness {a:e} vs oracle {b:e}"
            );
            worst_ulps = worst_ulps.max(ulps(*a, *b));
        }
    }
    let mut worst = 0.0f64;
    let mut checked = 0;
    while checked < 50 {
        let n = rng.gen_range(2..=15);
        let g = random_graph(&mut rng, n, 0.35);
        if g.edge_count() == 0 || !is_weakly_connected(&g) {
            continue;
        }
        let e = eigenvector(&g, EigenOptions::default()).map_err(|e| e.to_string())?;
        let r = eigen_residual(&dense_symmetric(&g), &e.values);
        worst = worst.max(r);
        ensure!(r < 1e-8, "eigen residual {r:e}");
        checked += 1;
    }
    let path = Graph::<f64>::from_edges([("a", "b", 1.0), ("b", "c", 1.0)]).map_err(|e| e.to_string())?;
    let e = eigenvector(&path, EigenOptions::default()).map_err(|e| e.to_string())?;
    let ratio = e.get(path.node("b").unwrap()) / e.get(path.node("a").unwrap());
    ensure!((ratio - 2f64.sqrt()).abs() <= 1e-6, "path ratio {ratio}");
    Ok(format!(
        "betweenness on 50 graphs within {worst_ulps} ulp, max residual {worst:.1e}, path ratio {ratio:.9}"
    ))
}

fn cooccurrence_oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    for round in 0..50 {
        let len = rng.gen_range(0..=200);
        let vocab = rng.gen_range(1..=25);
        let k = rng.gen_range(1..=12);
        let raw = random_stream(&mut rng, len, vocab);
        let g: Graph<f64> = cooccurrence_network(&filter_nouns(&raw), k).map_err(|e| e.to_string())?;
        ensure!(
            g.edges_by_label() == cooccurrence_oracle(&raw, k),
            "stream {round} (len {len}, k {k}) differs from pair scan"
        );
    }
    let doc = DocumentStream {
        id: "abac#0".into(),
        tokens: ["a", "b", "a", "c"]
            .iter()
            .enumerate()
            .map(|(position, l)| TaggedToken {
                surface: l.to_uppercase(),
                pos: "NN".into(),
                lemma: (*l).into(),
                position,
            })
            .collect(),
    };
    let g: Graph<f64> = cooccurrence_network(&doc, 2).map_err(|e| e.to_string())?;
    let got: Vec<(String, String, f64)> = g
        .edges_by_label()
        .into_iter()
        .map(|((s, t), w)| (s, t, w))
        .collect();
    let want: Vec<(String, String, f64)> = [("a", "b"), ("a", "c"), ("b", "a"), ("b", "c")]
        .iter()
        .map(|(s, t)| (s.to_string(), t.to_string(), 1.0))
        .collect();
    ensure!(got == want, "A,B,A,C with k = 2 gave {got:?}");
    Ok("50 streams and the A,B,A,C fixture".into())
}

fn fusion_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    for round in 0..50 {
        let gs: Vec<Graph<f64>> = (0..3)
            .map(|_| {
                let n = rng.gen_range(1..=10);
                random_count_graph(&mut rng, n, 0.3)
            })
            .collect();
        let err = |e: semnet::Error| e.to_string();
        for g in &gs {
            ensure!(fuse(&[g.clone(), g.clone()]).map_err(err)? == *g, "triple {round}: not idempotent");
        }
        let base = fuse(&gs).map_err(err)?;
        for perm in [[0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            let shuffled: Vec<Graph<f64>> = perm.iter().map(|&i| gs[i].clone()).collect();
            ensure!(fuse(&shuffled).map_err(err)? == base, "triple {round}: order {perm:?} differs");
        }
        for ((s, t), w) in base.edges_by_label() {
            let max = gs
                .iter()
                .filter_map(|g| g.weight(g.node(&s)?, g.node(&t)?))
                .fold(f64::NEG_INFINITY, f64::max);
            ensure!(w == max, "triple {round}: {s} -> {t} has {w}, max is {max}");
        }
    }
    Ok("50 triples, all 6 orders".into())
}

fn run_cli(dir: &Path, threads: &str, args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_semnet"))
        .env("RAYON_NUM_THREADS", threads)
        .arg("--out-dir")
        .arg(dir)
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(
        out.status.success(),
        "semnet {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    Ok(())
}

fn determinism() -> Outcome {
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let books = ["theogony", "voyage"];
    let outputs = |threads: &str| -> Result<Vec<(String, Vec<u8>)>, String> {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let d = dir.path();
        let mut args = vec!["build".to_owned()];
        args.extend(books.iter().map(|b| fixtures.join(format!("{b}.tok.tsv")).display().to_string()));
        run_cli(d, threads, &args.iter().map(String::as_str).collect::<Vec<_>>())?;
        let edges: Vec<String> = books.iter().map(|b| d.join(format!("{b}.edges.tsv")).display().to_string()).collect();
        run_cli(d, threads, &["fuse", &edges[0], &edges[1], "--name", "myth"])?;
        let myth = d.join("myth.edges.tsv").display().to_string();
        for e in edges.iter().chain([&myth]) {
            run_cli(d, threads, &["--top", "25", "scores", e])?;
            run_cli(d, threads, &["--top", "25", "semaffinity", e])?;
        }
        let mut files = Vec::new();
        for stem in books.iter().copied().chain(["myth"]) {
            for suffix in ["scores.csv", "semaffinity.csv"] {
                let name = format!("{stem}.{suffix}");
                let bytes = fs::read(d.join(&name)).map_err(|e| format!("{name}: {e}"))?;
                ensure!(!bytes.is_empty(), "{name} is empty");
                files.push((name, bytes));
            }
        }
        Ok(files)
    };
    let first = outputs("0")?;
    let second = outputs("0")?;
    let single = outputs("1")?;
    for ((name, a), ((_, b), (_, c))) in first.iter().zip(second.iter().zip(&single)) {
        ensure!(a == b, "{name} differs between two runs");
        ensure!(a == c, "{name} differs between one and many threads");
    }
    Ok(format!("{} files byte-identical across 3 runs", first.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("extrinsic-value oracle equivalence", extrinsic_oracle_equivalence),
        ("affinity row sums, symmetry and bounds", affinity_properties),
        ("pipe hand-trace fixture", pipe_fixture),
        ("pipe safety properties", pipe_safety),
        ("centrality oracles", centrality_oracles),
        ("co-occurrence oracle", cooccurrence_oracle_equivalence),
        ("fusion laws", fusion_laws),
        ("determinism of scores and semaffinity", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
