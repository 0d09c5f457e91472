//! Deterministic JSON and CSV renderings.
//!
//! JSON objects are built on `serde_json`'s sorted maps, so keys come out
//! in a fixed order and repeated runs give identical bytes.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use crate::analysis::{AnalysisReport, KaplanskyCheck};
use crate::blockmonoid::{AtomTable, ClassSubset, FactorizationVector, ZeroSumSequence};
use crate::group::FiniteAbelianGroup;
use crate::localization::{InsertionSearch, LocalizationSetup, NagataCheck};
use crate::quadratic::EqualityCheck;
use crate::relation::{AtomClassification, Relation, Verdict};

pub const SCHEMA: u32 = 1;

pub fn group_json(g: &FiniteAbelianGroup) -> Value {
    json!({ "moduli": g.moduli() })
}

pub fn classes_json(cs: &ClassSubset) -> Value {
    Value::Array(cs.classes().iter().map(|c| Value::String(c.key())).collect())
}

pub fn sequence_json(cs: &ClassSubset, s: &ZeroSumSequence) -> Value {
    json!({ "seq": cs.sequence_map(s) })
}

fn factorization_json(f: &FactorizationVector) -> Value {
    let map: Map<String, Value> = f.as_map().into_iter().map(|(i, k)| (i.to_string(), json!(k))).collect();
    Value::Object(map)
}

pub fn relation_json(t: &AtomTable, rel: &Relation) -> Value {
    let (n, m) = rel.lengths();
    json!({
        "lhs": factorization_json(rel.lhs()),
        "rhs": factorization_json(rel.rhs()),
        "lengths": [n, m],
        "irredundant": rel.is_irredundant(),
        "text": rel.render(t),
    })
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Good => "good",
        Verdict::Bad => "bad",
    }
}

pub fn atoms_json(t: &AtomTable, c: &AtomClassification) -> Value {
    let rows = (0..t.len())
        .map(|i| {
            let modular: Map<String, Value> = c
                .moduli()
                .map(|r| (r.to_string(), json!(verdict_str(c.modulo(r).expect("listed modulus").verdict(i)))))
                .collect();
            json!({
                "index": i,
                "literal": t.render(i),
                "seq": sequence_json(t.classes(), t.atom(i))["seq"],
                "length": t.atom(i).total_length(),
                "verdict": verdict_str(c.verdict(i)),
                "witness": c.witness(i).map(|w| relation_json(t, w)),
                "verdict_mod": modular,
            })
        })
        .collect();
    Value::Array(rows)
}

fn kaplansky_json(t: &AtomTable, k: &KaplanskyCheck) -> Value {
    let render = |ps: &[usize]| -> Vec<String> { ps.iter().map(|&p| t.classes().classes()[p].key()).collect() };
    json!({
        "covered": render(&k.covered),
        "uncovered": render(&k.uncovered),
        "hfd": k.is_hfd,
        "equivalence_holds": k.equivalence_holds,
    })
}

pub fn analysis_json(t: &AtomTable, a: &AnalysisReport) -> Value {
    let r_chfd: Map<String, Value> = a.r_chfd.iter().map(|(r, v)| (r.to_string(), json!(v))).collect();
    let kaplansky_r: Map<String, Value> =
        a.kaplansky_r.iter().map(|(r, k)| (r.to_string(), kaplansky_json(t, k))).collect();
    json!({
        "hfd": a.is_hfd,
        "r_chfd": r_chfd,
        "distances": a.distance_witnesses,
        "kaplansky": kaplansky_json(t, &a.kaplansky),
        "kaplansky_mod": kaplansky_r,
        "factorial": a.is_factorial,
        "ohfd": a.ohfd.as_ref().map(|o| json!({ "bound": o.bound, "verified": o.verified })),
    })
}

/// Insertion search outcome for one split atom.
pub struct InsertionResult {
    pub atom: usize,
    pub search: InsertionSearch,
}

pub struct LocalizationReport<'a> {
    pub setup: &'a LocalizationSetup,
    pub nagata: NagataCheck,
    pub insertions: Vec<InsertionResult>,
}

pub fn localization_json(t: &AtomTable, l: &LocalizationReport<'_>) -> Value {
    let literals = |xs: &[usize]| -> Vec<String> { xs.iter().map(|&i| t.render(i)).collect() };
    let insertions: Vec<Value> = l
        .insertions
        .iter()
        .map(|ins| match &ins.search {
            InsertionSearch::Found(w) => json!({
                "atom": t.render(ins.atom),
                "found": true,
                "witness": w.render(t),
                "verified": w.verify(t, l.setup),
            }),
            InsertionSearch::Exhausted { bound } => json!({
                "atom": t.render(ins.atom),
                "found": false,
                "bound": bound,
            }),
        })
        .collect();
    json!({
        "s_generators": literals(l.setup.generators()),
        "saturation_check": "exact",
        "b": literals(l.setup.b()),
        "c": literals(l.setup.c()),
        "split": literals(&l.setup.split_atoms(t)),
        "nagata": serde_json::to_value(&l.nagata).expect("plain data"),
        "insertions": insertions,
    })
}

/// Everything `analyze` reports for one class subset.
pub struct InstanceReport<'a> {
    pub table: &'a AtomTable,
    pub classification: &'a AtomClassification,
    pub relations: Option<&'a [Relation]>,
    pub analysis: &'a AnalysisReport,
    pub localization: Option<LocalizationReport<'a>>,
}

pub fn instance_json(r: &InstanceReport<'_>) -> Value {
    let t = r.table;
    let good: Vec<String> = r.classification.good_atoms().iter().map(|&i| t.render(i)).collect();
    let bad: Vec<String> = r.classification.bad_atoms().iter().map(|&i| t.render(i)).collect();
    let relations = r.relations.map(|rels| rels.iter().map(|rel| relation_json(t, rel)).collect::<Vec<_>>());
    json!({
        "schema": SCHEMA,
        "kind": "analysis",
        "group": group_json(t.classes().group()),
        "classes": classes_json(t.classes()),
        "atoms": atoms_json(t, r.classification),
        "relations": relations,
        "good": good,
        "bad": bad,
        "analysis": analysis_json(t, r.analysis),
        "localization": r.localization.as_ref().map(|l| localization_json(t, l)),
    })
}

pub fn equality_json(lhs: &[String], rhs: &[String], check: &EqualityCheck) -> Value {
    json!({
        "schema": SCHEMA,
        "kind": "equality",
        "lhs": lhs,
        "rhs": rhs,
        "equal": check.equal,
        "all_atoms": check.all_atoms,
        "lengths": [check.lengths.0, check.lengths.1],
        "balanced": check.balanced(),
        "irredundant": check.irredundant,
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// One row per atom: index, literal, length, verdict, a verdict column per
/// modulus, and the witness relation if bad.
pub fn atoms_csv(t: &AtomTable, c: &AtomClassification) -> String {
    let moduli: Vec<u32> = c.moduli().collect();
    let mut out = String::from("index,literal,length,verdict");
    for r in &moduli {
        write!(out, ",verdict_mod_{r}").unwrap();
    }
    out.push_str(",witness\n");
    for i in 0..t.len() {
        write!(out, "{i},{},{},{}", csv_field(&t.render(i)), t.atom(i).total_length(), verdict_str(c.verdict(i))).unwrap();
        for &r in &moduli {
            write!(out, ",{}", verdict_str(c.modulo(r).expect("listed modulus").verdict(i))).unwrap();
        }
        let witness = c.witness(i).map(|w| w.render(t)).unwrap_or_default();
        writeln!(out, ",{}", csv_field(&witness)).unwrap();
    }
    out
}
