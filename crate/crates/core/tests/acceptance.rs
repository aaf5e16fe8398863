//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zerotalk::bounds::{chain_bound, lamination_bound, singleton_partition};
use zerotalk::cli::cmd_jgk;
use zerotalk::crosscheck::permutations;
use zerotalk::mcf::{gk_finite_linear, gk_hypergraphical, gk_oracle, jgk, WitnessPayload};
use zerotalk::random::{random_finite_linear, random_matrix};
use zerotalk::sim;
use zerotalk::sources::examples::{three_user_hypergraph, two_user_linear, xor_triangle};
use zerotalk::sources::{Edge, EdgeDistribution, HypergraphicalSource};
use zerotalk::{FieldOrder, FiniteMatrix, Limits, Source};

const TOL: f64 = 1e-9;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_secs: u64) -> Result<(), String> {
    ensure(elapsed < Duration::from_secs(limit_secs), || format!("took {elapsed:?}, limit {limit_secs}s"))
}

fn gf2(rows: &[Vec<i64>]) -> FiniteMatrix {
    FiniteMatrix::from_rows(FieldOrder::new(2).unwrap(), rows.len(), rows).unwrap()
}

fn three_user_hypergraph_golden() -> Outcome {
    let t = Instant::now();
    let limits = Limits::default();
    let s: Source = three_user_hypergraph().into();
    let text = cmd_jgk(&s, &limits).map_err(|e| e.to_string())?.to_text();
    let first = text.lines().next().unwrap_or_default();
    ensure(first == "J_GK = 1.000000 bits; witness edges: {c}", || format!("got {first:?}"))?;
    let w = gk_hypergraphical(&three_user_hypergraph());
    ensure(w.payload == WitnessPayload::Edges(vec!["c".into()]), || format!("witness {:?}", w.payload))?;
    ensure(w.entropy_bits == 1.0, || format!("H(G) = {}", w.entropy_bits))?;
    within(t.elapsed(), 1)?;
    Ok("J_GK = 1.000000 bits, witness {c}".into())
}

fn xor_triangle_golden() -> Outcome {
    let t = Instant::now();
    let f = xor_triangle();
    let w = gk_finite_linear(&f).map_err(|e| e.to_string())?;
    match &w.payload {
        WitnessPayload::Subspace(b) => ensure(b.cols() == 0, || format!("basis has {} columns", b.cols()))?,
        other => return Err(format!("unexpected witness {other:?}")),
    }
    ensure(w.entropy_bits == 0.0, || format!("H(G) = {}", w.entropy_bits))?;
    let joint = Source::from(f).expand(&Limits::default()).map_err(|e| e.to_string())?;
    ensure(joint.support().len() == 4, || format!("support {}", joint.support().len()))?;
    let o = gk_oracle(&joint);
    ensure(o.entropy_bits.abs() <= TOL, || format!("oracle {}", o.entropy_bits))?;
    within(t.elapsed(), 1)?;
    Ok("empty basis, 0 bits, oracle agrees on 4 points".into())
}

fn two_user_linear_golden() -> Outcome {
    let t = Instant::now();
    let limits = Limits::default();
    let f = two_user_linear();
    let w = gk_finite_linear(&f).map_err(|e| e.to_string())?;
    let WitnessPayload::Subspace(b) = &w.payload else { return Err("not a subspace witness".into()) };
    let expected = gf2(&[vec![1], vec![1], vec![0]]);
    ensure(b.span_eq(&expected).unwrap_or(false), || format!("basis {:?}", b.to_rows()))?;
    ensure(w.entropy_bits == 1.0, || format!("H(G) = {}", w.entropy_bits))?;
    let text = cmd_jgk(&f.clone().into(), &limits).map_err(|e| e.to_string())?.to_text();
    ensure(text.starts_with("J_GK = 1.000000 bits"), || text.clone())?;

    let h = f.to_hypergraphical().map_err(|e| e.to_string())?;
    let mut subsets: Vec<(Vec<usize>, f64)> =
        h.edges().iter().map(|e| (e.users.clone(), e.distribution.entropy_bits())).collect();
    subsets.sort_by(|a, b| a.0.cmp(&b.0));
    ensure(
        subsets == vec![(vec![0], 1.0), (vec![0, 1], 1.0), (vec![1], 1.0)],
        || format!("edges {subsets:?}"),
    )?;
    let p_in = Source::from(f).entropy_profile(&limits).map_err(|e| e.to_string())?;
    let p_out = Source::from(h).entropy_profile(&limits).map_err(|e| e.to_string())?;
    let diff = p_in.max_abs_diff(&p_out).unwrap_or(f64::INFINITY);
    ensure(diff <= TOL, || format!("profile difference {diff}"))?;
    within(t.elapsed(), 1)?;
    Ok("basis [1,1,0]^T, 1 bit, three 1-bit edges {1,2},{1},{2}".into())
}

/// Every hypergraphical source with `m` users and `k` binary uniform edges,
/// one per assignment of nonempty user sets to the edges.
fn hypergraph_sweep() -> Vec<HypergraphicalSource> {
    let mut out = Vec::new();
    for m in 2..=3usize {
        let subsets = (1u64 << m) - 1;
        for k in 1..=4u32 {
            for code in 0..subsets.pow(k) {
                let mut c = code;
                let edges = (0..k)
                    .map(|i| {
                        let mask = c % subsets + 1;
                        c /= subsets;
                        let users: Vec<usize> = (0..m).filter(|u| mask >> u & 1 == 1).collect();
                        Edge::new(format!("e{i}"), &users, EdgeDistribution::Uniform(2))
                    })
                    .collect();
                out.push(HypergraphicalSource::new(m, edges).expect("valid sweep instance"));
            }
        }
    }
    out
}

fn linear_sweep() -> Vec<Source> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (0..600).map(|_| random_finite_linear(&mut rng, 4).into()).collect()
}

struct Suite {
    hyper: Vec<HypergraphicalSource>,
    linear: Vec<Source>,
}

impl Suite {
    fn all(&self) -> impl Iterator<Item = Source> + '_ {
        self.hyper.iter().cloned().map(Source::from).chain(self.linear.iter().cloned())
    }
}

fn oracle_equivalence(suite: &Suite) -> Outcome {
    let t = Instant::now();
    let limits = Limits::default();
    let mut count = 0;
    for s in suite.all() {
        let closed = jgk(&s, &limits).map_err(|e| e.to_string())?.bits();
        let oracle = gk_oracle(&s.expand(&limits).map_err(|e| e.to_string())?).entropy_bits;
        ensure((closed - oracle).abs() <= TOL, || format!("{s:?}: closed {closed} vs oracle {oracle}"))?;
        count += 1;
    }
    within(t.elapsed(), 60)?;
    Ok(format!(
        "{count} instances ({} hypergraphical, {} finite linear) in {:.2?}",
        suite.hyper.len(),
        suite.linear.len(),
        t.elapsed()
    ))
}

fn lamination_consistency(suite: &Suite) -> Outcome {
    let mut informative = 0;
    for h in &suite.hyper {
        let m = h.user_count() as u64;
        let b = lamination_bound(h, &singleton_partition(h.user_count()).unwrap()).map_err(|e| e.to_string())?;
        ensure(b.alpha.numer() * (m - 1) <= (m - 2) * b.alpha.denom(), || {
            format!("{h:?}: alpha {} exceeds (m-2)/(m-1)", b.alpha)
        })?;
        if !b.is_vacuous() {
            let j = gk_hypergraphical(h).entropy_bits;
            let at_zero = b.bound_at(0.0).ok_or("missing bound at zero")?;
            ensure((at_zero - j).abs() <= TOL, || format!("{h:?}: bound {at_zero} vs J_GK {j}"))?;
            informative += 1;
        }
    }
    Ok(format!("{} instances, {informative} with alpha < 1", suite.hyper.len()))
}

fn chain_consistency(suite: &Suite) -> Outcome {
    let limits = Limits::default();
    let mut orderings_checked = 0;
    for s in suite.all() {
        let m = s.user_count();
        let j = jgk(&s, &limits).map_err(|e| e.to_string())?.bits();
        let identity: Vec<usize> = (0..m).collect();
        let c = chain_bound(&s, &identity).map_err(|e| e.to_string())?;
        ensure((c - j).abs() <= TOL, || format!("{s:?}: chain {c} vs J_GK {j}"))?;
        if m == 3 {
            for o in permutations(3) {
                let v = chain_bound(&s, &o).map_err(|e| e.to_string())?;
                ensure((v - c).abs() <= TOL, || format!("{s:?}: ordering {o:?} gives {v}, identity {c}"))?;
                orderings_checked += 1;
            }
        }
    }
    Ok(format!("all instances equal J_GK; {orderings_checked} three-user orderings invariant"))
}

fn dimension_formula() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let pairs = 1500;
    for _ in 0..pairs {
        let q = FieldOrder::new([2u64, 3, 5, 7][rng.gen_range(0..4)]).unwrap();
        let d = rng.gen_range(1..=6);
        let (ca, cb) = (rng.gen_range(0..=5), rng.gen_range(0..=5));
        let a = random_matrix(&mut rng, q, d, ca);
        let b = random_matrix(&mut rng, q, d, cb);
        let i = FiniteMatrix::column_space_intersection(&a, &b).map_err(|e| e.to_string())?;
        let joint = a.hcat(&b).map_err(|e| e.to_string())?.rank();
        ensure(i.cols() + joint == a.rank() + b.rank(), || {
            format!("q={} a={:?} b={:?}: dim {} rank(a)={} rank(b)={} rank([a|b])={joint}",
                q.get(), a.to_rows(), b.to_rows(), i.cols(), a.rank(), b.rank())
        })?;
    }
    within(t.elapsed(), 10)?;
    Ok(format!("{pairs} pairs over GF(2,3,5,7)"))
}

fn achievability() -> Outcome {
    let t = Instant::now();
    let limits = Limits::default();
    let mut parts = Vec::new();
    for (name, s) in [("three-user hypergraph", Source::from(three_user_hypergraph())), ("two-user linear", two_user_linear().into())] {
        let r = sim::run(&s, 1000, 7, &limits).map_err(|e| e.to_string())?;
        ensure(r.agreement, || format!("{name}: users disagree"))?;
        ensure((r.empirical_rate_bits - 1.0).abs() <= 0.1, || format!("{name}: rate {}", r.empirical_rate_bits))?;
        ensure(r.discussion_bits == 0, || format!("{name}: {} discussion bits", r.discussion_bits))?;
        parts.push(format!("{name} rate {:.6}", r.empirical_rate_bits));
    }
    within(t.elapsed(), 5)?;
    Ok(parts.join(", "))
}

fn determinism() -> Outcome {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data");
    let spec = |n: &str| data.join(format!("{n}.json")).to_str().unwrap().to_string();
    let (e1, e2, e3) = (spec("three_user"), spec("xor_triangle"), spec("two_user_linear"));
    let mixed = spec("mixed");
    let runs: Vec<Vec<&str>> = vec![
        vec!["jgk", &e1],
        vec!["jgk", &e3],
        vec!["jgk", &mixed],
        vec!["bound", &e1, "--search", "--rate", "0.5"],
        vec!["bound", &e3, "--partition", "1|2"],
        vec!["oracle", &e2],
        vec!["oracle", &mixed],
        vec!["convert", &e3, "--to", "hypergraphical"],
        vec!["verify", &e1],
        vec!["verify", "--random", "10", "--seed", "5"],
        vec!["simulate", &e1, "--n", "500", "--seed", "3"],
        vec!["simulate", &mixed, "--n", "500", "--seed", "3"],
    ];
    for args in &runs {
        let once = || {
            Command::new(env!("CARGO_BIN_EXE_zerotalk"))
                .arg("--json")
                .args(args)
                .env_remove("ZEROTALK_EXPANSION_LIMIT")
                .output()
                .map_err(|e| e.to_string())
        };
        let (a, b) = (once()?, once()?);
        ensure(a.status.success(), || format!("{args:?} exited {:?}", a.status.code()))?;
        ensure(!a.stdout.is_empty() && a.stdout == b.stdout, || format!("{args:?}: outputs differ"))?;
    }
    Ok(format!("{} commands, byte-identical across two runs", runs.len()))
}

fn main() {
    let suite = Suite { hyper: hypergraph_sweep(), linear: linear_sweep() };
    let criteria: Vec<Criterion> = vec![
        ("three-user hypergraph golden", Box::new(three_user_hypergraph_golden)),
        ("XOR triangle golden", Box::new(xor_triangle_golden)),
        ("two-user linear golden", Box::new(two_user_linear_golden)),
        ("oracle equivalence", Box::new(|| oracle_equivalence(&suite))),
        ("lamination consistency", Box::new(|| lamination_consistency(&suite))),
        ("chain bound consistency", Box::new(|| chain_consistency(&suite))),
        ("dimension formula", Box::new(dimension_formula)),
        ("achievability simulation", Box::new(achievability)),
        ("CLI determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
