//! Per-suite case enumeration and case checks. Each check is a pure
//! function of its case, which is what makes failures replayable.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{Counts, Failure, GroupCache, RunConfig, Suite, SystemSummary};
use crate::affine::{one_line, perm_contains, AffineGroup, AffinePermutation, PATTERN_3412, PATTERN_4231};
use crate::bp::Mode;
use crate::bruhat::Engine;
use crate::classify::{table_rows, verify_almostmax_lemmas, GrassStatus};
use crate::error::{Error, Result};
use crate::gens::{GenSet, Side};
use crate::group::Coxeter;
use crate::indexed::IndexedGroup;
use crate::system::{SystemKey, TypeLabel};
use crate::weyl::WeylGroup;

pub(super) struct Outcome {
    pub summary: SystemSummary,
    pub failures: Vec<Failure>,
}

/// A case over a finite group: element and up to three nested generator
/// sets (unused ones stay empty).
#[derive(Debug, Clone, Copy)]
struct Case {
    w: u32,
    i: GenSet,
    j: GenSet,
    k: GenSet,
}

impl Case {
    fn new(w: u32, i: GenSet, j: GenSet, k: GenSet) -> Self {
        Case { w, i, j, k }
    }
}

#[derive(Debug, Default)]
struct Checked {
    counts: Counts,
    tallies: Vec<(String, u64)>,
    failure: Option<(String, String)>,
}

impl Checked {
    fn fail(&mut self, check: &str, detail: impl Into<String>) {
        if self.failure.is_none() {
            self.failure = Some((check.to_string(), detail.into()));
        }
    }

    fn tally(&mut self, key: impl Into<String>) {
        self.tallies.push((key.into(), 1));
    }
}

pub(super) fn run(suite: Suite, key: SystemKey, cfg: &RunConfig, cache: &GroupCache) -> Result<Outcome> {
    match suite {
        Suite::BilleyCrites => run_affine(key, cfg),
        Suite::AlmostmaxLemmas => run_lemmas(key),
        _ => run_finite(suite, key, cfg, cache),
    }
}

fn elements_within(g: &IndexedGroup, cap: Option<usize>) -> Vec<u32> {
    g.elements()
        .filter(|w| cap.map_or(true, |c| g.length(w) <= c))
        .collect()
}

fn run_finite(suite: Suite, key: SystemKey, cfg: &RunConfig, cache: &GroupCache) -> Result<Outcome> {
    let g = cache.group(key)?;
    let g = g.as_ref();
    let engine = Engine::new(g);
    let cap = cfg.length_cap(key);
    let elems = elements_within(g, cap);
    let complete = elems.len() == g.size();
    let all = g.all_generators();
    let sampled = suite == Suite::BpEquiv && g.size() > cfg.exhaustive_max_order;

    let mut cases = Vec::new();
    match suite {
        Suite::BpEquiv | Suite::Factor | Suite::Fibres if !sampled => {
            for k in all.subsets() {
                for j in k.subsets() {
                    for &w in &elems {
                        if g.is_min_rep(&w, j) {
                            cases.push(Case::new(w, GenSet::EMPTY, j, k));
                        }
                    }
                }
            }
        }
        Suite::BpEquiv | Suite::Factor | Suite::Fibres => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ system_salt(key));
            for _ in 0..cfg.samples {
                let w = elems[rng.gen_range(0..elems.len())];
                let k = GenSet::from_bits(rng.gen::<u32>() & all.bits());
                let j = GenSet::from_bits(rng.gen::<u32>() & k.bits());
                cases.push(Case::new(g.min_coset_rep(&w, j), GenSet::EMPTY, j, k));
            }
        }
        Suite::Assoc => {
            for k in all.subsets() {
                for j in k.subsets() {
                    for i in j.subsets() {
                        for &w in &elems {
                            if g.is_min_rep(&w, i) {
                                cases.push(Case::new(w, i, j, k));
                            }
                        }
                    }
                }
            }
        }
        Suite::Paradescent => {
            for k in all.subsets() {
                for &w in &elems {
                    cases.push(Case::new(w, GenSet::EMPTY, GenSet::EMPTY, k));
                }
            }
        }
        Suite::Bp2 | Suite::Peterson => {
            for j in all.subsets() {
                for &w in &elems {
                    if g.is_min_rep(&w, j) {
                        cases.push(Case::new(w, GenSet::EMPTY, j, GenSet::EMPTY));
                    }
                }
            }
        }
        Suite::Ratgrass => {
            for s in all.iter() {
                let j = all.without(s);
                for &w in &elems {
                    if g.is_min_rep(&w, j) && g.support(&w) == all {
                        cases.push(Case::new(w, GenSet::EMPTY, j, GenSet::EMPTY));
                    }
                }
            }
        }
        Suite::Onesided | Suite::Leafbp => {
            for &w in &elems {
                cases.push(Case::new(w, GenSet::EMPTY, GenSet::EMPTY, GenSet::EMPTY));
            }
        }
        Suite::AlmostmaxLemmas | Suite::BilleyCrites => unreachable!("handled separately"),
    }

    let results: Vec<Checked> = cases
        .par_iter()
        .map(|c| match check_finite(suite, &engine, c) {
            Ok(r) => r,
            Err(e) => {
                let mut r = Checked::default();
                r.fail("error", e.to_string());
                r
            }
        })
        .collect();

    let mut failures = Vec::new();
    if suite == Suite::Ratgrass {
        failures.extend(table_membership_failures(&engine, key)?);
    }
    let mut counts = Counts {
        elements: elems.len() as u64,
        ..Counts::default()
    };
    let mut tallies = BTreeMap::new();
    for (c, r) in cases.iter().zip(results) {
        counts.cases += 1;
        counts.bp_found += r.counts.bp_found;
        counts.rationally_smooth += r.counts.rationally_smooth;
        counts.smooth += r.counts.smooth;
        for (k, v) in r.tallies {
            *tallies.entry(k).or_insert(0) += v;
        }
        if let Some((check, detail)) = r.failure {
            failures.push(failure_record(suite, &engine, c, check, detail));
        }
    }
    if suite == Suite::Ratgrass {
        for s in all.iter() {
            let label = g.system().generator_label(s);
            let rows = table_rows(g.system(), s)?.len() as u64;
            tallies.insert(format!("s{label}/table_rows"), rows);
            tallies.entry(format!("s{label}/non_maximal")).or_insert(0);
        }
    }
    Ok(Outcome {
        summary: SystemSummary {
            system: key.to_string(),
            length_cap: cap,
            exhaustive: !sampled,
            complete,
            counts,
            tallies,
        },
        failures,
    })
}

fn system_salt(key: SystemKey) -> u64 {
    key.to_string()
        .bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}

fn failure_record(suite: Suite, e: &Engine<IndexedGroup>, c: &Case, check: String, detail: String) -> Failure {
    let sys = e.group().system();
    Failure {
        suite: suite.name().to_string(),
        system: sys.name(),
        w: e.format(&c.w),
        i: sys.format_set(c.i),
        j: sys.format_set(c.j),
        k: sys.format_set(c.k),
        check,
        detail,
    }
}

fn check_finite(suite: Suite, e: &Engine<IndexedGroup>, c: &Case) -> Result<Checked> {
    let mut r = Checked::default();
    let g = e.group();
    let sys = g.system();
    let w = &c.w;
    match suite {
        Suite::BpEquiv => {
            match e.is_bp(w, c.j, c.k, Mode::Full) {
                Ok(wit) => {
                    r.counts.bp_found += wit.is_bp as u64;
                    // the fast route must agree with the full evaluation
                    let fast = e.is_bp(w, c.j, c.k, Mode::Fast)?;
                    if fast.is_bp != wit.is_bp || wit.verdicts.poly_factor.is_none() {
                        r.fail("criteria", format!("{:?}", wit.verdicts));
                    }
                    if sys.parabolic_is_finite(c.j) && wit.verdicts.lifted.is_none() {
                        r.fail("criteria", "lifted criterion not evaluated");
                    }
                }
                Err(Error::Invariant(msg)) => r.fail("criteria", msg),
                Err(other) => return Err(other),
            }
        }
        Suite::Bp2 => {
            let rs = e.is_rationally_smooth(w, c.j)?;
            r.counts.rationally_smooth += rs as u64;
            if rs && g.support(w).difference(c.j).len() >= 2 {
                let found = e.find_grassmannian_bp(w, c.j, Mode::Fast)?;
                r.counts.bp_found += found.len() as u64;
                if found.is_empty() {
                    r.fail("grassmannian-bp", "no Grassmannian BP decomposition");
                }
            }
        }
        Suite::Ratgrass => {
            let rs = e.is_rationally_smooth(w, c.j)?;
            r.counts.rationally_smooth += rs as u64;
            let s = g.all_generators().difference(c.j).first().expect("J = S minus one");
            let rows = table_rows(sys, s)?;
            let row = rows.iter().find(|row| g.from_word(&row.word) == *w);
            if row.is_some() && !rs {
                r.fail("table", "table element is not rationally smooth");
            }
            if rs {
                let maximal = e.is_maximal(w, c.j)?;
                let almost = e.is_almost_maximal(w, c.j)?;
                if !maximal {
                    r.tally(format!("s{}/non_maximal", sys.generator_label(s)));
                }
                if !maximal != almost || almost != row.is_some() {
                    r.fail(
                        "table",
                        format!("maximal={maximal} almost_maximal={almost} in_table={}", row.is_some()),
                    );
                }
                let class = e.classify_grassmannian(w, c.j)?;
                r.counts.smooth += class.smooth as u64;
                if let Some(row) = row {
                    if class.status != (GrassStatus::TableRow { row: row.id() }) || class.smooth != row.smooth {
                        r.fail(
                            "smooth-column",
                            format!("status {:?} smooth {} vs row {} smooth {}", class.status, class.smooth, row.id(), row.smooth),
                        );
                    }
                } else if class.status != GrassStatus::Maximal || !class.smooth {
                    r.fail("table", format!("maximal element classified as {:?}", class.status));
                }
            }
        }
        Suite::Peterson => {
            let v = e.decide_smoothness(w, c.j)?;
            e.check_tower(&v.tower)?;
            r.counts.rationally_smooth += v.rationally_smooth as u64;
            r.counts.smooth += v.smooth as u64;
            if v.rationally_smooth != v.smooth {
                r.fail("peterson", format!("rationally_smooth={} smooth={}", v.rationally_smooth, v.smooth));
            }
            if c.j.is_empty() && sys.label() == TypeLabel::A {
                let perm = one_line(sys.rank() + 1, &g.canonical_word(w));
                let avoids = !perm_contains(&perm, &PATTERN_3412) && !perm_contains(&perm, &PATTERN_4231);
                if v.rationally_smooth {
                    r.tally("J=∅/palindromic");
                }
                if avoids {
                    r.tally("J=∅/pattern_avoiding");
                }
                if avoids != v.rationally_smooth {
                    r.fail("patterns", format!("avoids={avoids} rationally_smooth={}", v.rationally_smooth));
                }
            }
        }
        Suite::Onesided => {
            if e.is_rationally_smooth(w, GenSet::EMPTY)? {
                r.counts.rationally_smooth += 1;
                let sw = g.support(w);
                let top = e.longest(sw)?;
                if *w != top {
                    let mut found = false;
                    for s in sw.difference(g.right_descents(w)).iter() {
                        let k = g.all_generators().without(s);
                        let wit = e.is_bp(w, GenSet::EMPTY, k, Mode::Fast)?;
                        if wit.is_bp && outer_factor_ok(e, &wit.v, k)? {
                            found = true;
                            break;
                        }
                    }
                    r.counts.bp_found += found as u64;
                    if !found {
                        r.fail("one-sided", "not maximal and no right BP decomposition with (almost-)maximal outer factor");
                    }
                }
            }
        }
        Suite::Leafbp => {
            let sw = g.support(w);
            if sw.len() >= 2 && e.is_rationally_smooth(w, GenSet::EMPTY)? {
                r.counts.rationally_smooth += 1;
                let leaves: Vec<usize> = sw.iter().filter(|&s| sys.neighbours(s, sw).len() <= 1).collect();
                let mut found = false;
                'search: for x in [*w, g.inverse(w)] {
                    for &s in &leaves {
                        let k = g.all_generators().without(s);
                        let wit = e.is_bp(&x, GenSet::EMPTY, k, Mode::Fast)?;
                        if wit.is_bp && outer_factor_ok(e, &wit.v, k)? {
                            found = true;
                            break 'search;
                        }
                    }
                }
                r.counts.bp_found += found as u64;
                if !found {
                    r.fail("leaf-bp", "neither w nor its inverse has a leaf BP decomposition with (almost-)maximal outer factor");
                }
            }
        }
        Suite::Factor => {
            let wit = e.is_bp(w, c.j, c.k, Mode::Fast)?;
            let pw = e.poincare(w, c.j)?;
            if c.j == c.k && !pw.is_bottom_heavy() {
                r.fail("bottom-heavy", format!("P = {pw}"));
            }
            if wit.is_bp {
                r.counts.bp_found += 1;
                let pv = e.poincare(&wit.v, c.k)?;
                let pu = e.poincare(&wit.u, c.j)?;
                let lhs = pw.is_palindromic();
                r.counts.rationally_smooth += lhs as u64;
                if lhs != (pv.is_palindromic() && pu.is_palindromic()) {
                    r.fail("palindromic-factors", format!("P_w = {pw}, P_v = {pv}, P_u = {pu}"));
                }
            }
        }
        Suite::Fibres => {
            let wit = e.is_bp(w, c.j, c.k, Mode::Fast)?;
            r.counts.bp_found += wit.is_bp as u64;
            let dims = e.fibre_dimensions(w, c.j, c.k)?;
            let constant = dims.windows(2).all(|p| p[0].1 == p[1].1);
            if constant != wit.is_bp {
                let d: Vec<usize> = dims.iter().map(|x| x.1).collect();
                r.fail("fibres", format!("is_bp={} dimensions={d:?}", wit.is_bp));
            }
        }
        Suite::Assoc => {
            if !e.check_bp_associativity(w, c.i, c.j, c.k, Mode::Fast)? {
                r.fail("associativity", "the two groupings disagree");
            }
        }
        Suite::Paradescent => {
            for side in [Side::Right, Side::Left] {
                let (v, _) = g.parabolic_decompose(w, c.k, side);
                let sv = g.support(&v);
                let far = match side {
                    Side::Right => g.left_descents(w),
                    Side::Left => g.right_descents(w),
                };
                for s in g.all_generators().difference(sv).iter() {
                    if !sys.neighbours(s, sv).is_empty() && far.contains(s) {
                        r.fail(
                            "para-descent",
                            format!("{side:?} decomposition: s{} adjacent to S(v) is a descent", sys.generator_label(s)),
                        );
                    }
                }
            }
        }
        Suite::AlmostmaxLemmas | Suite::BilleyCrites => unreachable!("handled separately"),
    }
    Ok(r)
}

/// `v` maximal or almost-maximal in `W^{S(v)∩K}_{S(v)}`.
fn outer_factor_ok<G: Coxeter>(e: &Engine<G>, v: &G::Elem, k: GenSet) -> Result<bool> {
    Ok(e.is_maximal(v, k)? || e.is_almost_maximal(v, k)?)
}

/// Every table entry must lie in `W^{S∖{s}}` with full support.
fn table_membership_failures(e: &Engine<IndexedGroup>, key: SystemKey) -> Result<Vec<Failure>> {
    let g = e.group();
    let sys = g.system();
    let all = g.all_generators();
    let mut out = Vec::new();
    for s in all.iter() {
        let j = all.without(s);
        for row in table_rows(sys, s)? {
            let w = g.from_word(&row.word);
            if g.length(&w) != row.word.len() || !g.is_min_rep(&w, j) || g.support(&w) != all {
                out.push(Failure {
                    suite: Suite::Ratgrass.name().to_string(),
                    system: key.to_string(),
                    w: sys.format_word(&row.word),
                    i: String::new(),
                    j: sys.format_set(j),
                    k: String::new(),
                    check: "table-entry".into(),
                    detail: format!("row {} is not a reduced full-support element of W^J", row.id()),
                });
            }
        }
    }
    Ok(out)
}

fn run_lemmas(key: SystemKey) -> Result<Outcome> {
    let g = WeylGroup::build(key.label, key.rank as usize)?;
    let cases = verify_almostmax_lemmas(&g)?;
    let failures = cases
        .iter()
        .filter(|c| !c.pass)
        .map(|c| Failure {
            suite: Suite::AlmostmaxLemmas.name().to_string(),
            system: key.to_string(),
            w: c.v.clone(),
            i: String::new(),
            j: String::new(),
            k: String::new(),
            check: c.case.clone(),
            detail: format!(
                "left descents {} (expected {}), representative {} (expected {})",
                c.left_descents, c.expected_left_descents, c.rep, c.expected_rep
            ),
        })
        .collect();
    let mut tallies = BTreeMap::new();
    tallies.insert("lemma_cases".to_string(), cases.len() as u64);
    Ok(Outcome {
        summary: SystemSummary {
            system: key.to_string(),
            length_cap: None,
            exhaustive: true,
            complete: true,
            counts: Counts {
                cases: cases.len() as u64,
                ..Counts::default()
            },
            tallies,
        },
        failures,
    })
}

fn run_affine(key: SystemKey, cfg: &RunConfig) -> Result<Outcome> {
    let g = AffineGroup::new(key.rank as usize)?;
    let engine = Engine::new(&g);
    let cap = cfg.length_cap(key);
    let elems = g.enumerate(cap)?;
    let results: Vec<Checked> = elems
        .par_iter()
        .map(|w| check_affine(&engine, w).unwrap_or_else(|e| {
            let mut r = Checked::default();
            r.fail("error", e.to_string());
            r
        }))
        .collect();
    let mut counts = Counts {
        elements: elems.len() as u64,
        ..Counts::default()
    };
    let mut tallies = BTreeMap::new();
    let mut failures = Vec::new();
    for (w, r) in elems.iter().zip(results) {
        counts.cases += 1;
        counts.bp_found += r.counts.bp_found;
        counts.rationally_smooth += r.counts.rationally_smooth;
        counts.smooth += r.counts.smooth;
        for (k, v) in r.tallies {
            *tallies.entry(k).or_insert(0) += v;
        }
        if let Some((check, detail)) = r.failure {
            failures.push(Failure {
                suite: Suite::BilleyCrites.name().to_string(),
                system: key.to_string(),
                w: engine.format(w),
                i: String::new(),
                j: String::new(),
                k: String::new(),
                check,
                detail,
            });
        }
    }
    Ok(Outcome {
        summary: SystemSummary {
            system: key.to_string(),
            length_cap: cap,
            exhaustive: true,
            // affine groups are infinite; the cap is the sweep's domain
            complete: true,
            counts,
            tallies,
        },
        failures,
    })
}

fn check_affine(e: &Engine<AffineGroup>, w: &AffinePermutation) -> Result<Checked> {
    let mut r = Checked::default();
    let v = e.affine_decide(w)?;
    e.check_tower(&v.tower)?;
    r.counts.rationally_smooth += v.rationally_smooth as u64;
    r.counts.smooth += v.smooth as u64;
    r.counts.bp_found += v.tower.factors.len().saturating_sub(1) as u64;
    if v.rationally_smooth {
        r.tally("palindromic");
    }
    if v.avoids_patterns {
        r.tally("pattern_avoiding");
    }
    if v.twisted_spiral_operational {
        r.tally("twisted_spiral");
    }
    if !v.contains_3412.certified || !v.contains_4231.certified {
        r.fail("pattern-horizon", "pattern search horizon not certified");
    }
    if v.avoids_patterns && !v.rationally_smooth {
        r.fail("avoiding-not-palindromic", "avoids 3412 and 4231 but P_w is not palindromic");
    }
    if v.twisted_spiral_operational && v.almost_maximal != Some(true) {
        r.fail("twisted-spiral", "rationally smooth pattern-containing element is not almost-maximal");
    }
    if v.tower_smooth != v.avoids_patterns {
        r.fail(
            "smooth-vs-patterns",
            format!("tower smooth = {} but avoids patterns = {}", v.tower_smooth, v.avoids_patterns),
        );
    }
    Ok(r)
}

/// Recomputes a failure record and reports whether it fails again with the
/// same check and detail.
pub fn replay(f: &Failure) -> Result<bool> {
    let suite: Suite = f.suite.parse()?;
    let key: SystemKey = f.system.parse()?;
    let again: Option<(String, String)> = match suite {
        Suite::BilleyCrites => {
            let g = AffineGroup::new(key.rank as usize)?;
            let e = Engine::new(&g);
            let w = g.try_from_word(&g.system().parse_word(&f.w)?)?;
            check_affine(&e, &w)
                .unwrap_or_else(|err| {
                    let mut r = Checked::default();
                    r.fail("error", err.to_string());
                    r
                })
                .failure
        }
        Suite::AlmostmaxLemmas => {
            let g = WeylGroup::build(key.label, key.rank as usize)?;
            verify_almostmax_lemmas(&g)?
                .into_iter()
                .find(|c| c.case == f.check && !c.pass)
                .map(|c| {
                    (
                        c.case.clone(),
                        format!(
                            "left descents {} (expected {}), representative {} (expected {})",
                            c.left_descents, c.expected_left_descents, c.rep, c.expected_rep
                        ),
                    )
                })
        }
        _ => {
            let g = IndexedGroup::from_weyl(&WeylGroup::build(key.label, key.rank as usize)?)?;
            let e = Engine::new(&g);
            let sys = g.system();
            if f.check == "table-entry" {
                let fails = table_membership_failures(&e, key)?;
                return Ok(fails.iter().any(|x| x == f));
            }
            let case = Case::new(
                g.element(&f.w)?,
                sys.parse_set(&f.i)?,
                sys.parse_set(&f.j)?,
                sys.parse_set(&f.k)?,
            );
            check_finite(suite, &e, &case)
                .unwrap_or_else(|err| {
                    let mut r = Checked::default();
                    r.fail("error", err.to_string());
                    r
                })
                .failure
        }
    };
    Ok(again == Some((f.check.clone(), f.detail.clone())))
}

#[cfg(test)]
mod tests {
    use super::super::{cmd_verify, RunConfig};
    use super::*;

    fn cfg(systems: &[&str]) -> RunConfig {
        RunConfig {
            systems: systems.iter().map(|s| s.to_string()).collect(),
            jobs: 2,
            ..RunConfig::default()
        }
    }

    #[test]
    fn small_suites_pass() {
        for suite in [
            Suite::BpEquiv,
            Suite::Bp2,
            Suite::Ratgrass,
            Suite::Onesided,
            Suite::Leafbp,
            Suite::Factor,
            Suite::Fibres,
            Suite::Assoc,
            Suite::Paradescent,
        ] {
            let r = cmd_verify(suite, &cfg(&["A2", "B2", "G2"])).unwrap();
            assert!(r.passed(), "{}", r.to_text());
            assert!(r.payload.counts.cases > 0);
        }
        let r = cmd_verify(Suite::Peterson, &cfg(&["A3"])).unwrap();
        assert!(r.passed(), "{}", r.to_text());
        let t = &r.payload.per_system[0].tallies;
        assert_eq!(t["J=∅/palindromic"], t["J=∅/pattern_avoiding"]);
    }

    #[test]
    fn g2_table_counts() {
        let r = cmd_verify(Suite::Ratgrass, &cfg(&["G2"])).unwrap();
        assert!(r.passed());
        let t = &r.payload.per_system[0].tallies;
        assert_eq!(t["s2/non_maximal"], 3);
        assert_eq!(t["s1/non_maximal"], 3);
    }

    #[test]
    fn affine_small_suite_passes() {
        let mut c = cfg(&["affA1", "affA2"]);
        c.max_length = Some(6);
        let r = cmd_verify(Suite::BilleyCrites, &c).unwrap();
        assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn payload_is_independent_of_jobs() {
        let mut a = cfg(&["B3"]);
        a.jobs = 1;
        let mut b = cfg(&["B3"]);
        b.jobs = 3;
        let ra = cmd_verify(Suite::Bp2, &a).unwrap();
        let rb = cmd_verify(Suite::Bp2, &b).unwrap();
        assert_eq!(ra.payload_json(), rb.payload_json());
    }

    #[test]
    fn replay_reproduces_a_failing_case() {
        // peterson on a non-simply-laced case fails; the record must replay
        let g = IndexedGroup::parse("B3").unwrap();
        let e = Engine::new(&g);
        let w = g.element("2,3,2,1").unwrap();
        let j = g.system().parse_set("2,3").unwrap();
        let c = Case::new(w, GenSet::EMPTY, j, GenSet::EMPTY);
        let r = check_finite(Suite::Peterson, &e, &c).unwrap();
        let (check, detail) = r.failure.expect("B3 has rationally smooth singular elements");
        let f = failure_record(Suite::Peterson, &e, &c, check, detail);
        assert!(replay(&f).unwrap());
        let mut altered = f.clone();
        altered.detail.push('!');
        assert!(!replay(&altered).unwrap());
    }
}
