//! Acceptance criteria 1-10, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines are always printed; the
//! process exits non-zero when any criterion fails.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use serde_json::Value;

use verma_ext_core::coxeter::{CoxeterSystem, DescentPolicy, WeylGroup, DEFAULT_ORACLE_BUDGET};
use verma_ext_core::reflection::{basis_vector, matrix_order, pairing, reflect};
use verma_ext_core::rpoly::{check_invariants, gj_coefficient, DirectCoefficients, RTable};
use verma_ext_core::subspace::Rational;
use verma_ext_core::vtable::{SingularSpec, VTable};

const PRESETS: [&str; 11] = ["A1", "A2", "A3", "A4", "B2", "B3", "C3", "D4", "G2", "A1xA1", "A1xA2"];

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn group(d: &str) -> WeylGroup {
    group_with(d, DescentPolicy::Smallest)
}

fn group_with(d: &str, policy: DescentPolicy) -> WeylGroup {
    WeylGroup::with_policy(CoxeterSystem::build(&d.parse().unwrap()).unwrap(), policy).unwrap()
}

/// Filled tables for one preset.
struct Filled {
    name: &'static str,
    group: WeylGroup,
    v: VTable,
    r: RTable,
}

fn fill_presets() -> Vec<Filled> {
    PRESETS
        .iter()
        .map(|&name| {
            let group = group(name);
            let v = VTable::compute_all(&group).unwrap();
            let mut r = RTable::new(&group);
            r.fill_all(&group).unwrap();
            Filled { name, group, v, r }
        })
        .collect()
}

fn theorem_equality(presets: &mut [Filled], elapsed: Duration) -> Outcome {
    let mut parts = Vec::new();
    let mut bad_total = 0;
    let mut first = None;
    for p in presets.iter_mut() {
        let g = &p.group;
        let pairs = g.comparable_pairs();
        let mut bad = 0;
        for &(x, y) in &pairs {
            let dim = p.v.get(x, y).unwrap().dim() as u64;
            let gj = gj_coefficient(&mut p.r, g, x, y).unwrap();
            if dim != gj {
                bad += 1;
                first.get_or_insert_with(|| {
                    format!("{} x=[{}] y=[{}] dim {dim} vs {gj}", p.name, g.word_string(x), g.word_string(y))
                });
            }
        }
        bad_total += bad;
        parts.push(format!("{} {bad}/{}", p.name, pairs.len()));
    }
    let in_time = elapsed < Duration::from_secs(60);
    let mut detail = format!("mismatches {}; fill {:.1} s", parts.join(", "), elapsed.as_secs_f64());
    if let Some(f) = first {
        detail.push_str(&format!("; first {f}"));
    }
    outcome(bad_total == 0 && in_time, detail)
}

fn triple_agreement(presets: &mut [Filled]) -> Outcome {
    let (mut pairs, mut route_bad, mut dim_bad) = (0, 0, 0);
    for p in presets.iter_mut() {
        let g = &p.group;
        let mut direct = DirectCoefficients::new();
        for (x, y) in g.comparable_pairs() {
            pairs += 1;
            let gj = gj_coefficient(&mut p.r, g, x, y).unwrap();
            let rc = direct.r_coeff_direct(g, x, y).unwrap();
            route_bad += usize::from(gj != rc);
            dim_bad += usize::from(p.v.get(x, y).unwrap().dim() as u64 != gj);
        }
    }
    outcome(
        route_bad == 0 && dim_bad == 0,
        format!("{pairs} pairs; gj != direct on {route_bad}; dim V != gj on {dim_bad}"),
    )
}

fn top_dimension(presets: &mut [Filled]) -> Outcome {
    let mut bad = Vec::new();
    for p in presets.iter() {
        let g = &p.group;
        if p.v.get(g.longest(), g.identity()).unwrap().dim() != g.rank() {
            bad.push(format!("{} regular", p.name));
        }
    }
    let mut subsets = 0;
    for p in presets.iter_mut().filter(|p| ["A2", "B2", "A1xA2"].contains(&p.name)) {
        let g = &p.group;
        for mask in 0..(1u64 << g.rank()) {
            subsets += 1;
            let spec = SingularSpec::from_mask(mask);
            let dim = p.v.singular_v(g, &spec, g.longest(), g.identity()).unwrap().dim();
            if dim != g.rank() - spec.len() {
                bad.push(format!("{} {:?}", p.name, spec.indices()));
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("{} presets, {subsets} singular subsets; failures {bad:?}", presets.len()),
    )
}

fn reflection_suite() -> Outcome {
    let (mut checks, mut bad, mut saw_six) = (0, Vec::new(), false);
    let two = Rational::from_integer(2.into());
    for name in PRESETS {
        let sys = CoxeterSystem::build(&name.parse().unwrap()).unwrap();
        for s in 0..sys.rank() {
            let sq = sys.generator_matrix(s).mul(sys.generator_matrix(s));
            let vs = basis_vector(&sys, s).unwrap();
            for ok in [
                sq.is_identity(),
                pairing(&sys, s, &vs).unwrap() == two,
                reflect(&sys, s, &vs).unwrap() == -&vs,
            ] {
                checks += 1;
                if !ok {
                    bad.push(format!("{name} s{s}"));
                }
            }
            for t in (0..sys.rank()).filter(|&t| t != s) {
                let m = sys.coxeter_m()[s][t] as usize;
                saw_six |= m == 6;
                checks += 1;
                let prod = sys.generator_matrix(s).mul(sys.generator_matrix(t));
                if matrix_order(&prod, 12) != Some(m) {
                    bad.push(format!("{name} order s{s}s{t}"));
                }
            }
        }
    }
    outcome(
        bad.is_empty() && saw_six,
        format!("{checks} checks, m = 6 exercised: {saw_six}; failures {bad:?}"),
    )
}

fn bruhat_oracle() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for name in ["A3", "B2"] {
        let g = group(name);
        let sys = g.system();
        let mut bad = 0;
        for x in 0..g.len() {
            for y in 0..g.len() {
                let oracle = sys
                    .bruhat_leq_oracle(g.element(x), g.element(y), DEFAULT_ORACLE_BUDGET)
                    .unwrap();
                bad += usize::from(oracle != g.bruhat_leq(x, y));
            }
        }
        ok &= bad == 0;
        parts.push(format!("{name} {} pairs, {bad} disagree", g.len() * g.len()));
    }
    outcome(ok, parts.join("; "))
}

fn rpoly_invariants(presets: &mut [Filled]) -> Outcome {
    let (mut checked, mut bad) = (0, Vec::new());
    for p in presets.iter_mut() {
        for (x, y) in p.group.comparable_pairs() {
            checked += 1;
            let poly = p.r.r_polynomial(&p.group, y, x);
            let at_one = y == x || poly.eval(1) == 0;
            if let Err(e) = check_invariants(&p.group, y, x, &poly).and(at_one.then_some(()).ok_or_else(|| "R(1) != 0".to_string())) {
                bad.push(format!("{} {e}", p.name));
            }
        }
    }
    outcome(bad.is_empty(), format!("{checked} pairs; failures {bad:?}"))
}

fn top_row() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for name in ["A3", "B3"] {
        let g = group(name);
        let mut t = VTable::new(&g);
        let w0 = g.longest();
        let mut bad = 0;
        for x in 0..g.len() {
            let count = (0..g.rank()).filter(|&s| g.bruhat_leq(x, g.mul_simple(w0, s))).count();
            bad += usize::from(t.compute_v(&g, w0, x).unwrap().dim() != count);
        }
        ok &= bad == 0;
        parts.push(format!("{name} {} elements, {bad} wrong", g.len()));
    }
    outcome(ok, parts.join("; "))
}

fn policy_robustness() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for name in ["A3", "B2"] {
        let a = VTable::compute_all(&group_with(name, DescentPolicy::Smallest)).unwrap();
        let b = VTable::compute_all(&group_with(name, DescentPolicy::Largest)).unwrap();
        let (ea, eb) = (a.sorted_entries(), b.sorted_entries());
        let same = ea == eb;
        ok &= same;
        parts.push(format!("{name} {} subspaces identical: {same}", ea.len()));
    }
    outcome(ok, parts.join("; "))
}

fn rank_two_membership() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for name in ["A2", "B2", "G2"] {
        let g = group(name);
        let mut t = VTable::new(&g);
        let rows = t.membership_report(&g).unwrap();
        let flagged: Vec<_> = rows.iter().filter(|r| r.rank2).collect();
        let bad = flagged.iter().filter(|r| r.member != r.x_geq_ys).count();
        ok &= bad == 0 && !flagged.is_empty();
        parts.push(format!("{name} {} rows, {bad} exceptions", flagged.len()));
    }
    outcome(ok, parts.join("; "))
}

fn cli(args: &[&str], cache: &Path) -> (Option<i32>, Value) {
    let o = Command::new(env!("CARGO_BIN_EXE_verma-ext"))
        .args(args)
        .args(["--format", "json", "--cache-dir"])
        .arg(cache)
        .env_remove("VERMA_EXT_CACHE")
        .output()
        .expect("binary runs");
    (o.status.code(), serde_json::from_slice(&o.stdout).unwrap_or(Value::Null))
}

fn suite_counts(report: &Value) -> BTreeMap<String, (u64, u64, u64)> {
    report["suites"]
        .as_array()
        .map(|suites| {
            suites
                .iter()
                .map(|s| {
                    let n = |k: &str| s[k].as_u64().unwrap_or(u64::MAX);
                    (s["name"].as_str().unwrap_or("?").to_string(), (n("checked"), n("failed"), n("skipped")))
                })
                .collect()
        })
        .unwrap_or_default()
}

fn strip_timestamp(text: &str) -> String {
    text.lines()
        .filter(|l| !l.contains("generated"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn determinism_and_cache() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for name in ["A2", "B3"] {
        let dir = tempfile::tempdir().unwrap();
        let (code_cold, cold) = cli(&["verify", "--type", name], dir.path());
        let (code_warm, warm) = cli(&["verify", "--type", name], dir.path());
        let same = code_cold == code_warm && !suite_counts(&cold).is_empty() && suite_counts(&cold) == suite_counts(&warm);
        ok &= same;
        notes.push(format!("{name} verify cold == warm: {same}"));
    }
    let dir = tempfile::tempdir().unwrap();
    let (_, first) = cli(&["report", "--type", "B2"], dir.path());
    let files: Vec<String> = first["files"]
        .as_array()
        .map(|f| f.iter().filter_map(|p| p.as_str().map(String::from)).collect())
        .unwrap_or_default();
    let before: Vec<String> = files.iter().map(|f| fs::read_to_string(f).unwrap_or_default()).collect();
    let (_, second) = cli(&["report", "--type", "B2"], dir.path());
    let identical = !files.is_empty()
        && files
            .iter()
            .zip(&before)
            .all(|(f, b)| strip_timestamp(&fs::read_to_string(f).unwrap_or_default()) == strip_timestamp(b));
    let warm_ops = second["rpoly_computed"].as_u64();
    ok &= identical && warm_ops == Some(0);
    notes.push(format!(
        "B2 report {} files identical modulo timestamp: {identical}; warm rpoly_computed {warm_ops:?}",
        files.len()
    ));
    outcome(ok, notes.join("; "))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut presets = fill_presets();
    let fill_time = start.elapsed();

    let results = [
        ("theorem equality dim V = gj on all presets", theorem_equality(&mut presets, fill_time)),
        ("triple-oracle agreement", triple_agreement(&mut presets)),
        ("top dimension and singular quotients", top_dimension(&mut presets)),
        ("reflection representation", reflection_suite()),
        ("Bruhat order vs subword oracle", bruhat_oracle()),
        ("R-polynomial invariants", rpoly_invariants(&mut presets)),
        ("top-row identity", top_row()),
        ("descent-policy robustness", policy_robustness()),
        ("rank-2 membership", rank_two_membership()),
        ("determinism and cache", determinism_and_cache()),
    ];

    let mut failed = 0;
    for (i, (title, o)) in results.iter().enumerate() {
        let status = if o.ok { "PASS" } else { "FAIL" };
        failed += usize::from(!o.ok);
        println!("criterion {:>2} {status} {title}: {}", i + 1, o.detail);
    }
    println!(
        "acceptance: {} passed, {failed} failed ({:.1} s)",
        results.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
