//! Acceptance suite. Prints one PASS/FAIL line per criterion:
//!
//! ```text
//! cargo test -p steiner-cli --test acceptance -- --nocapture
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use steiner_core::{
    all_fixtures, develop, difference_census, format_design, format_family, pair_coverage,
    parse_design, parse_family, point_replication, verify_lambda1, DifferenceFamily, FixtureEntry,
    GroupSpec,
};

const VERIFY_BUDGET: Duration = Duration::from_millis(50);
const DEVELOP_BUDGET: Duration = Duration::from_secs(1);
const SEARCH_BUDGET: Duration = Duration::from_secs(5);

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ac1_fixture_certification(fixtures: &[FixtureEntry]) -> Check {
    let mut slowest = Duration::ZERO;
    for fx in fixtures {
        let t = Instant::now();
        let report = verify_lambda1(&fx.family);
        let census = difference_census(&fx.family);
        let dt = t.elapsed();
        slowest = slowest.max(dt);
        let v = fx.group.order();
        ensure(report.is_family, || format!("{} is not λ=1", fx.name))?;
        ensure(report.covered_once == v - 1, || format!("{} covers {}", fx.name, report.covered_once))?;
        ensure(census.counts()[1..].iter().all(|&c| c == 1), || format!("{} census", fx.name))?;
        ensure(dt < VERIFY_BUDGET, || format!("{} took {dt:?}", fx.name))?;
    }
    Ok(format!("10/10 families λ=1, slowest {slowest:?}"))
}

fn ac2_development(fixtures: &[FixtureEntry]) -> Check {
    let mut slowest = Duration::ZERO;
    for fx in fixtures {
        let t = Instant::now();
        let design = develop(&fx.family).map_err(|e| e.to_string())?;
        let report = pair_coverage(&design).map_err(|e| e.to_string())?;
        let replication = point_replication(&design);
        let dt = t.elapsed();
        slowest = slowest.max(dt);
        let (blocks, k, r, pairs) = match fx.group.order() {
            225 => (900, 8, 32, 25_200u64),
            289 => (1156, 9, 36, 41_616u64),
            v => return Err(format!("unexpected v = {v}")),
        };
        ensure(design.num_blocks() == blocks, || format!("{}: {} blocks", fx.name, design.num_blocks()))?;
        ensure(design.k() == k, || format!("{}: k = {}", fx.name, design.k()))?;
        ensure(replication.iter().all(|&x| x == r), || format!("{}: replication", fx.name))?;
        ensure(report.histogram == BTreeMap::from([(1, pairs)]), || {
            format!("{}: histogram {:?}", fx.name, report.histogram)
        })?;
        ensure(report.is_steiner, || format!("{} not Steiner", fx.name))?;
        ensure(dt < DEVELOP_BUDGET, || format!("{} took {dt:?}", fx.name))?;
    }
    Ok(format!("10/10 designs Steiner, slowest {slowest:?}"))
}

fn mutate(f: &DifferenceFamily, block: usize, pos: usize, to: u32) -> Option<DifferenceFamily> {
    if f.blocks()[block].points().contains(&to) {
        // Not a set any more; no valid family to check.
        return None;
    }
    Some(f.with_replaced_element(block, pos, to).expect("distinct replacement"))
}

fn ac3_equivalence(fixtures: &[FixtureEntry]) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut cases: Vec<DifferenceFamily> = fixtures.iter().map(|f| f.family.clone()).collect();
    while cases.len() < fixtures.len() + 250 {
        let f = &fixtures[rng.gen_range(0..fixtures.len())].family;
        let (b, p) = (rng.gen_range(0..f.num_blocks()), rng.gen_range(0..f.k()));
        if let Some(m) = mutate(f, b, p, rng.gen_range(0..f.spec().order())) {
            cases.push(m);
        }
    }
    for f in &cases {
        let lambda = verify_lambda1(f).is_family;
        let design = develop(f).map_err(|e| e.to_string())?;
        let steiner = pair_coverage(&design).map_err(|e| e.to_string())?.is_steiner;
        ensure(lambda == steiner, || format!("disagreement on\n{}", format_family(f)))?;
    }
    Ok(format!("{} cases agree (10 fixtures + {} mutations)", cases.len(), cases.len() - 10))
}

fn ac4_mutation_sensitivity(fixtures: &[FixtureEntry]) -> Check {
    let exhaustive = ["s2-8-225-g3355-1", "s2-8-225-g559-1", "s2-9-289-1717-1"];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut total = 0u64;
    for fx in fixtures {
        let f = &fx.family;
        let v = f.spec().order();
        let mut check = |b: usize, p: usize, to: u32| -> Result<(), String> {
            if to == f.blocks()[b].points()[p] {
                return Ok(());
            }
            let is_family = mutate(f, b, p, to).is_some_and(|m| verify_lambda1(&m).is_family);
            total += 1;
            ensure(!is_family, || format!("{}: block {b} pos {p} -> {to} still λ=1", fx.name))
        };
        if exhaustive.contains(&fx.name) {
            for b in 0..f.num_blocks() {
                for p in 0..f.k() {
                    for to in 0..v {
                        check(b, p, to)?;
                    }
                }
            }
        } else {
            for _ in 0..1000 {
                let (b, p) = (rng.gen_range(0..f.num_blocks()), rng.gen_range(0..f.k()));
                let mut to = rng.gen_range(0..v);
                while to == f.blocks()[b].points()[p] {
                    to = rng.gen_range(0..v);
                }
                check(b, p, to)?;
            }
        }
    }
    Ok(format!("{total} mutations all rejected"))
}

fn run_cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_steiner"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ac5_search_recovery() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut lines = Vec::new();
    for (group, k, b) in [("Z7", 3, 1), ("Z13", 3, 2), ("Z13", 4, 1), ("Z21", 5, 1)] {
        let out = dir.path().join(format!("{group}-{k}-{b}.df"));
        let t = Instant::now();
        let o = run_cli(&[
            "search", "--group", group, "--k", &k.to_string(), "--blocks", &b.to_string(),
            "--seed", "7", "--out", out.to_str().unwrap(),
        ]);
        let dt = t.elapsed();
        ensure(o.status.code() == Some(0), || format!("{group} k={k} b={b}: exit {:?}", o.status))?;
        ensure(dt < SEARCH_BUDGET, || format!("{group} k={k} took {dt:?}"))?;
        // Re-verify through the census path, in process and in a fresh process.
        let text = fs::read_to_string(&out).map_err(|e| e.to_string())?;
        let f = parse_family(&text).map_err(|e| e.to_string())?;
        ensure(verify_lambda1(&f).is_family, || format!("{group}: census rejects output"))?;
        let o = run_cli(&["verify-family", out.to_str().unwrap()]);
        ensure(o.status.code() == Some(0), || format!("{group}: verify-family exit {:?}", o.status))?;
        lines.push(format!("({},{k},1) in {dt:?}", GroupSpec::parse(group).unwrap().order()));
    }
    Ok(lines.join(", "))
}

fn ac6_determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut runs = Vec::new();
    for i in 0..2 {
        let fam = dir.path().join(format!("f{i}.df"));
        let stats = dir.path().join(format!("s{i}.txt"));
        let o = run_cli(&[
            "search", "--group", "Z5xZ5", "--k", "4", "--blocks", "2", "--seed", "11",
            "--workers", "1", "--out", fam.to_str().unwrap(), "--stats-out", stats.to_str().unwrap(),
        ]);
        ensure(o.status.code() == Some(0), || format!("run {i}: exit {:?}", o.status))?;
        runs.push((
            fs::read(&fam).map_err(|e| e.to_string())?,
            fs::read(&stats).map_err(|e| e.to_string())?,
            o.stdout,
        ));
    }
    ensure(runs[0] == runs[1], || "runs differ".into())?;
    Ok("family file, stats file and stdout byte-identical".into())
}

fn ac7_round_trips(fixtures: &[FixtureEntry]) -> Check {
    for fx in fixtures {
        let parsed = parse_family(fx.text).map_err(|e| e.to_string())?;
        ensure(format_family(&parsed) == fx.text, || format!("{} family text", fx.name))?;
        let design = develop(&parsed).map_err(|e| e.to_string())?;
        let text = format_design(&design);
        let back = parse_design(&text).map_err(|e| e.to_string())?;
        ensure(back == design && format_design(&back) == text, || {
            format!("{} design text", fx.name)
        })?;
    }
    let mut labels = 0;
    for g in ["Z3xZ3xZ5xZ5", "Z5xZ5xZ9", "Z17xZ17"] {
        let spec = GroupSpec::parse(g).unwrap();
        for i in 0..spec.order() {
            let e = spec.element_from_index(i as u64).unwrap();
            let label = e.to_label().map_err(|e| e.to_string())?;
            let back = spec.element_from_label(&label).map_err(|e| e.to_string())?;
            ensure(back == e && back.index() == i, || format!("{g}: label {label}"))?;
            labels += 1;
        }
    }
    Ok(format!("10 families, 10 designs, {labels} labels"))
}

#[test]
fn acceptance() {
    let fixtures = all_fixtures();
    let results: Vec<(&str, Check)> = vec![
        ("AC1 fixture certification", ac1_fixture_certification(&fixtures)),
        ("AC2 end-to-end development", ac2_development(&fixtures)),
        ("AC3 equivalence property", ac3_equivalence(&fixtures)),
        ("AC4 mutation sensitivity", ac4_mutation_sensitivity(&fixtures)),
        ("AC5 search soundness and recovery", ac5_search_recovery()),
        ("AC6 determinism", ac6_determinism()),
        ("AC7 round-trips", ac7_round_trips(&fixtures)),
    ];
    let mut failed = 0;
    for (name, r) in &results {
        match r {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
