//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use schubert_core::harness::{cmd_analyze, cmd_table, cmd_verify, replay, RunConfig, Suite, VerificationReport};
use schubert_core::{
    table_elements, verify_almostmax_lemmas, Coxeter, Engine, GenSet, IndexedGroup, Polynomial, Side, WeylGroup,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn poly(c: &[u64]) -> Polynomial {
    Polynomial::new(c.to_vec())
}

fn cfg(systems: &[&str]) -> RunConfig {
    RunConfig {
        systems: systems.iter().map(|s| s.to_string()).collect(),
        ..RunConfig::default()
    }
}

fn run_suite(suite: Suite, c: &RunConfig) -> Result<VerificationReport, String> {
    let r = cmd_verify(suite, c).map_err(|e| format!("{suite}: {e}"))?;
    if !r.passed() {
        let first = &r.payload.failures[0];
        return Err(format!(
            "{suite}: {} failures, first {} w={} J={{{}}} K={{{}}} {}: {}",
            r.payload.failures.len(),
            first.system,
            first.w,
            first.j,
            first.k,
            first.check,
            first.detail
        ));
    }
    ensure(r.payload.complete, format!("{suite}: sweep incomplete"))?;
    Ok(r)
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, format!("{what} took {t:.1?}, limit {limit:?}"))
}

/// Worked A3 example: the BP split and the non-BP split of s1s3s2s3s1.
fn criterion_1() -> Outcome {
    let start = Instant::now();
    let g = IndexedGroup::parse("A3").map_err(|e| e.to_string())?;
    let e = Engine::new(&g);
    let k = g.system().parse_set("1,3").unwrap();
    let w = g.element("1,3,2,3,1").unwrap();
    let (v, u) = g.parabolic_decompose(&w, k, Side::Right);
    let pw = e.poincare(&w, GenSet::EMPTY).unwrap();
    let pv = e.poincare(&v, k).unwrap();
    let pu = e.poincare(&u, GenSet::EMPTY).unwrap();
    ensure(pw == poly(&[1, 3, 5, 6, 4, 1]), format!("P_w = {pw}"))?;
    ensure(pv == poly(&[1, 1, 2, 1]), format!("P_v^J = {pv}"))?;
    ensure(pu == poly(&[1, 2, 1]), format!("P_u = {pu}"))?;
    ensure(pw == &pv * &pu, "product equality fails")?;

    let w2 = g.element("1,3,2,1").unwrap();
    let (v2, u2) = g.parabolic_decompose(&w2, k, Side::Right);
    ensure(g.format(v2) == "1,3,2" && g.format(u2) == "1", "unexpected split of s1s3s2s1")?;
    let pw2 = e.poincare(&w2, GenSet::EMPTY).unwrap();
    ensure(pw2 == poly(&[1, 3, 4, 3, 1]), format!("P_w' = {pw2}"))?;
    let prod = &e.poincare(&v2, k).unwrap() * &poly(&[1, 1]);
    ensure(pw2 != prod, "non-BP split factors")?;
    within(start, Duration::from_secs(1), "criterion 1")?;
    Ok(format!("P_w = {pw} = ({pv})({pu}); {pw2} != {prod}"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let r = run_suite(Suite::BpEquiv, &RunConfig::default())?;
    for s in &r.payload.per_system {
        match s.system.as_str() {
            "B4" | "D4" | "F4" => ensure(
                !s.exhaustive && s.counts.cases >= 10_000,
                format!("{} sampled {} triples", s.system, s.counts.cases),
            )?,
            _ => ensure(s.exhaustive, format!("{} not exhaustive", s.system))?,
        }
    }
    let systems: BTreeSet<_> = r.payload.systems.iter().map(String::as_str).collect();
    for want in ["A1", "A2", "A3", "B3", "C3", "G2", "B4", "D4", "F4"] {
        ensure(systems.contains(want), format!("{want} missing"))?;
    }
    within(start, Duration::from_secs(300), "criterion 2")?;
    Ok(format!("{} triples, 0 mismatches", r.payload.counts.cases))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let r = run_suite(Suite::Bp2, &RunConfig::default())?;
    within(start, Duration::from_secs(900), "criterion 3")?;
    Ok(format!(
        "{} (w, J) pairs over {} systems, {} rationally smooth",
        r.payload.counts.cases,
        r.payload.systems.len(),
        r.payload.counts.rationally_smooth
    ))
}

/// Table reproduction: the suite, plus an independent recount on the
/// matrix model compared as sets of words, plus the smooth column.
fn criterion_4() -> Outcome {
    let systems = ["B3", "B4", "C3", "C4", "F4", "G2"];
    let r = run_suite(Suite::Ratgrass, &cfg(&systems))?;
    let mut total = 0;
    for name in systems {
        let g = WeylGroup::parse(name).unwrap();
        let e = Engine::new(&g);
        let all = g.all_generators();
        let elems = g.enumerate(None).unwrap();
        for s in all.iter() {
            let j = all.without(s);
            let found: BTreeSet<String> = elems
                .iter()
                .filter(|w| g.is_min_rep(w, j) && g.support(w) == all)
                .filter(|w| e.is_rationally_smooth(w, j).unwrap() && !e.is_maximal(w, j).unwrap())
                .map(|w| e.format(w))
                .collect();
            let table: BTreeSet<String> = table_elements(&g, s).unwrap().iter().map(|w| e.format(w)).collect();
            ensure(found == table, format!("{name} s{}: found {found:?}, table {table:?}", s + 1))?;
            total += found.len();
        }
    }
    let per_s = |name: &str| -> Vec<usize> {
        let g = WeylGroup::parse(name).unwrap();
        (0..g.rank()).map(|s| table_elements(&g, s).unwrap().len()).collect()
    };
    ensure(per_s("F4") == [1, 1, 1, 1], "F4 row counts")?;
    ensure(per_s("G2") == [3, 3], "G2 row counts")?;

    // smooth column: B/C swap the s_n row against the others; F4 no,no,yes,yes;
    // G2 only s1s2
    let smooth_of = |name: &str| -> Vec<(u32, String, bool)> {
        cmd_table(name)
            .unwrap()
            .into_iter()
            .filter(|r| r.kind == "table_row")
            .map(|r| (r.s, r.word, r.smooth))
            .collect()
    };
    for (name, is_c) in [("B3", false), ("B4", false), ("C3", true), ("C4", true)] {
        let n = name[1..].parse::<u32>().unwrap();
        for (s, word, smooth) in smooth_of(name) {
            let expect = if s == n { !is_c } else { is_c };
            ensure(smooth == expect, format!("{name} row {word} smooth={smooth}"))?;
        }
    }
    let f4: Vec<bool> = smooth_of("F4").into_iter().map(|r| r.2).collect();
    ensure(f4 == [false, false, true, true], format!("F4 smooth column {f4:?}"))?;
    for (_, word, smooth) in smooth_of("G2") {
        ensure(smooth == (word == "1,2"), format!("G2 row {word} smooth={smooth}"))?;
    }
    Ok(format!(
        "{total} non-maximal rows match across {} systems ({} cases swept)",
        systems.len(),
        r.payload.counts.cases
    ))
}

fn criterion_5() -> Outcome {
    let r = run_suite(Suite::Peterson, &cfg(&["A3", "A4", "D4"]))?;
    let mut notes = Vec::new();
    for s in &r.payload.per_system {
        if s.system.starts_with('A') {
            let pal = s.tallies.get("J=∅/palindromic").copied().unwrap_or(0);
            let avoid = s.tallies.get("J=∅/pattern_avoiding").copied().unwrap_or(0);
            ensure(pal == avoid && pal > 0, format!("{}: {pal} palindromic vs {avoid} avoiding", s.system))?;
            notes.push(format!("{} J=∅: {pal} = {avoid}", s.system));
        }
        ensure(
            s.counts.rationally_smooth == s.counts.smooth,
            format!("{} counts differ", s.system),
        )?;
    }
    Ok(format!("{} (w, J) pairs; {}", r.payload.counts.cases, notes.join(", ")))
}

fn criterion_6() -> Outcome {
    let r = run_suite(Suite::Fibres, &cfg(&["A3", "B3"]))?;
    Ok(format!("{} (w, J, K) triples", r.payload.counts.cases))
}

fn criterion_7() -> Outcome {
    let mut cases = 0;
    for suite in [Suite::Assoc, Suite::Factor, Suite::Paradescent] {
        cases += run_suite(suite, &cfg(&["A3", "B3", "C3"]))?.payload.counts.cases;
    }
    let lemma_systems = ["B2", "B3", "B4", "C3", "C4", "F4"];
    let r = run_suite(Suite::AlmostmaxLemmas, &cfg(&lemma_systems))?;
    cases += r.payload.counts.cases;
    let mut stated = BTreeSet::new();
    for name in lemma_systems {
        for c in verify_almostmax_lemmas(&WeylGroup::parse(name).unwrap()).unwrap() {
            ensure(c.pass, format!("{name} {}", c.case))?;
            let kind = match c.case.as_str() {
                "s_n" => "s_n",
                "4321" | "1234" => "F4",
                _ => "k",
            };
            stated.insert(kind);
        }
    }
    ensure(stated.len() == 3, format!("stated representative families covered: {stated:?}"))?;
    Ok(format!("{cases} cases"))
}

fn criterion_8() -> Outcome {
    let a = run_suite(Suite::Onesided, &RunConfig::default())?;
    let b = run_suite(Suite::Leafbp, &RunConfig::default())?;
    Ok(format!(
        "{} rationally smooth elements (right-sided), {} with |S(w)| >= 2 (leaf)",
        a.payload.counts.rationally_smooth, b.payload.counts.rationally_smooth
    ))
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    for (sys, len) in [("affA2", 10), ("affA3", 8)] {
        let mut c = cfg(&[sys]);
        c.max_length = Some(len);
        let r = run_suite(Suite::BilleyCrites, &c)?;
        let s = &r.payload.per_system[0];
        let get = |k: &str| s.tallies.get(k).copied().unwrap_or(0);
        ensure(
            get("palindromic") == get("pattern_avoiding") + get("twisted_spiral"),
            format!("{sys}: palindromic count is not avoiding + twisted"),
        )?;
        parts.push(format!(
            "{sys} l<={len}: {} elements, {} palindromic, {} avoiding, {} twisted spirals",
            s.counts.elements,
            get("palindromic"),
            get("pattern_avoiding"),
            get("twisted_spiral")
        ));
    }
    within(start, Duration::from_secs(600), "criterion 9")?;
    Ok(parts.join("; "))
}

/// Determinism across job counts and cache states, and replay of every
/// emitted failure record.
fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut base = cfg(&["F4"]);
    base.cache_dir = Some(dir.path().to_path_buf());
    base.jobs = 1;
    let cold = run_suite(Suite::Ratgrass, &base)?;
    base.jobs = 4;
    let warm = run_suite(Suite::Ratgrass, &base)?;
    ensure(cold.payload_json() == warm.payload_json(), "cold and warm reports differ")?;
    let entry = std::fs::read_dir(dir.path())
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .find(|p| p.extension().is_some_and(|x| x == "tables"))
        .ok_or("no cache entry written")?;
    let mut bytes = std::fs::read(&entry).map_err(|e| e.to_string())?;
    let mid = bytes.len() / 2;
    bytes[mid] ^= 0x20;
    std::fs::write(&entry, bytes).map_err(|e| e.to_string())?;
    let poisoned = run_suite(Suite::Ratgrass, &base)?;
    ensure(cold.payload_json() == poisoned.payload_json(), "poisoned-cache report differs")?;

    let mut replayed = 0;
    let mut reports = 0;
    for suite in Suite::ALL {
        let mut c = RunConfig::default();
        c.jobs = 2;
        let a = cmd_verify(suite, &c).map_err(|e| e.to_string())?;
        c.jobs = 3;
        let b = cmd_verify(suite, &c).map_err(|e| e.to_string())?;
        ensure(a.payload_json() == b.payload_json(), format!("{suite}: payloads differ"))?;
        reports += 1;
        for f in &a.payload.failures {
            ensure(replay(f).map_err(|e| e.to_string())?, format!("{suite}: failure does not replay"))?;
            cmd_analyze(&f.system, &f.w, &f.j, (!f.k.is_empty()).then_some(f.k.as_str()))
                .map_err(|e| format!("{suite}: analyze on failure: {e}"))?;
            replayed += 1;
        }
    }
    Ok(format!(
        "{reports} suites reproduced byte-identically; cache cold/warm/poisoned identical; {replayed} counterexamples replayed"
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("worked A3 example", criterion_1),
        ("BP criteria equivalence", criterion_2),
        ("Grassmannian BP existence", criterion_3),
        ("classification table", criterion_4),
        ("rational smoothness = smoothness (simply laced)", criterion_5),
        ("fibre criterion", criterion_6),
        ("associativity, factor and descent lemmas", criterion_7),
        ("one-sided and leaf BP decompositions", criterion_8),
        ("affine A pattern characterization", criterion_9),
        ("determinism and replay", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS criterion {}: {name} ({secs:.2}s): {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {}: {name} ({secs:.2}s): {msg}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
