//! Single-element analysis and the classification table export.

use serde::{Deserialize, Serialize};

use crate::affine::{AffineGroup, AffineRecord};
use crate::bp::{BPRecord, Mode};
use crate::bruhat::Engine;
use crate::classify::{table_rows, ClassificationRecord, TowerRecord};
use crate::error::{Error, Result};
use crate::gens::GenSet;
use crate::group::Coxeter;
use crate::system::{SystemKey, TypeLabel};
use crate::weyl::WeylGroup;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyzeRecord {
    pub system: String,
    /// Canonical (lex-minimal) reduced word.
    pub w: String,
    /// Window notation, affine systems only.
    pub window: Option<String>,
    pub length: usize,
    #[serde(rename = "J")]
    pub j: String,
    pub support: String,
    pub left_descents: String,
    pub right_descents: String,
    pub poincare: String,
    pub poincare_coefficients: Vec<u64>,
    pub rationally_smooth: bool,
    /// Verdict for the requested `K`, when one was given.
    pub is_bp: Option<bool>,
    /// The requested `K`, or every `K = S ∖ {s}` with `s ∉ J`.
    pub decompositions: Vec<BPRecord>,
    /// Present when `|S(w) ∖ J| = 1`.
    pub grassmannian: Option<ClassificationRecord>,
    pub tower: TowerRecord,
    pub smooth: bool,
    pub affine: Option<AffineRecord>,
}

/// Full report for one element. `word` is in label notation (an affine
/// window such as `[2,1,3]` is also accepted); `w` must lie in `W^J`.
pub fn cmd_analyze(system: &str, word: &str, j: &str, k: Option<&str>) -> Result<AnalyzeRecord> {
    let key: SystemKey = system.parse()?;
    if key.label.is_affine() {
        let g = AffineGroup::new(key.rank as usize)?;
        let w = if word.trim_start().starts_with('[') {
            g.parse_window(word)?
        } else {
            g.from_word_checked(&g.system().parse_word(word)?)?
        };
        let e = Engine::new(&g);
        let mut rec = analyze_with(&e, &w, j, k)?;
        rec.window = Some(w.to_string());
        if j.trim().is_empty() {
            let v = e.affine_decide(&w)?;
            rec.smooth = v.smooth;
            rec.affine = Some(e.affine_record(&w, &v));
        }
        Ok(rec)
    } else {
        let g = WeylGroup::build(key.label, key.rank as usize)?;
        let w = g.try_from_word(&g.system().parse_word(word)?)?;
        analyze_with(&Engine::new(&g), &w, j, k)
    }
}

fn analyze_with<G: Coxeter>(e: &Engine<G>, w: &G::Elem, j: &str, k: Option<&str>) -> Result<AnalyzeRecord> {
    let g = e.group();
    let sys = g.system();
    let j = sys.parse_set(j)?;
    let pw = e.poincare(w, j)?;
    let ks: Vec<GenSet> = match k {
        Some(k) => vec![sys.parse_set(k)?],
        None => g
            .all_generators()
            .difference(j)
            .iter()
            .map(|s| g.all_generators().without(s))
            .collect(),
    };
    let mut decompositions = Vec::new();
    let mut is_bp = None;
    for kk in ks {
        let mode = if sys.parabolic_is_finite(kk) { Mode::Full } else { Mode::Fast };
        let wit = e.is_bp(w, j, kk, mode)?;
        if k.is_some() {
            is_bp = Some(wit.is_bp);
        }
        decompositions.push(e.record(&wit));
    }
    let grassmannian = if g.support(w).difference(j).len() == 1 {
        Some(e.classification_record(&e.classify_grassmannian(w, j)?))
    } else {
        None
    };
    let verdict = e.decide_smoothness(w, j)?;
    e.check_tower(&verdict.tower)?;
    Ok(AnalyzeRecord {
        system: sys.name(),
        w: e.format(w),
        window: None,
        length: g.length(w),
        j: sys.format_set(j),
        support: sys.format_set(g.support(w)),
        left_descents: sys.format_set(g.left_descents(w)),
        right_descents: sys.format_set(g.right_descents(w)),
        poincare: pw.to_string(),
        poincare_coefficients: pw.coeffs().to_vec(),
        rationally_smooth: verdict.rationally_smooth,
        is_bp,
        decompositions,
        grassmannian,
        tower: e.tower_record(&verdict.tower),
        smooth: verdict.smooth,
        affine: None,
    })
}

/// One line of the classification table for `J = S ∖ {s}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub system: String,
    pub s: u32,
    /// `maximal` or `table_row`.
    pub kind: String,
    pub row: String,
    /// The row's closed form with its indices instantiated.
    pub formula: String,
    pub word: String,
    pub length: usize,
    pub smooth: bool,
}

/// The maximal element of `W^{S∖{s}}` for every `s`, followed by that
/// generator's non-maximal rationally smooth rows.
pub fn cmd_table(system: &str) -> Result<Vec<TableEntry>> {
    let key: SystemKey = system.parse()?;
    if key.label.is_affine() {
        return Err(Error::NotFiniteType(key.to_string()));
    }
    let g = WeylGroup::build(key.label, key.rank as usize)?;
    let sys = g.system();
    let n = sys.rank();
    let all = g.all_generators();
    let w0 = g.longest_element(all)?;
    let mut out = Vec::new();
    for s in all.iter() {
        let label = sys.generator_label(s);
        let top = g.multiply(&w0, &g.longest_element(all.without(s))?);
        let word = g.canonical_word(&top);
        out.push(TableEntry {
            system: sys.name(),
            s: label,
            kind: "maximal".into(),
            row: format!("{}:s{label}:max", sys.name()),
            formula: format!("w0·w0(S∖{{s{label}}})"),
            word: sys.format_word(&word),
            length: word.len(),
            smooth: true,
        });
        for row in table_rows(sys, s)? {
            let formula = match (key.label, row.k) {
                (TypeLabel::B | TypeLabel::C, Some(k)) if s == 0 && k + 1 == n => {
                    format!("s{n}⋯s1")
                }
                (TypeLabel::B | TypeLabel::C, Some(k)) if s == 0 => {
                    format!("s{}⋯s{n}⋯s1", k + 1)
                }
                (TypeLabel::B | TypeLabel::C, Some(k)) => {
                    format!("u_{{{n},{}}}·s1⋯s{}", k + 2, k + 1)
                }
                (TypeLabel::B | TypeLabel::C, None) => format!("s1⋯s{n}"),
                _ => sys.format_word(&row.word).replace(',', ""),
            };
            out.push(TableEntry {
                system: sys.name(),
                s: label,
                kind: "table_row".into(),
                row: row.id(),
                formula,
                word: sys.format_word(&row.word),
                length: row.word.len(),
                smooth: row.smooth,
            });
        }
    }
    Ok(out)
}
