//! Exhaustive scans over all class subsets of small groups.
//!
//! Instances are processed in parallel; results are collected in instance
//! order, so the aggregate report does not depend on scheduling.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::analysis::{is_factorial_table, is_hfd, kaplansky_equivalence, kaplansky_equivalence_mod, ohfd_violation};
use crate::blockmonoid::{enumerate_atoms, AtomTable, ClassSubset};
use crate::certify::{classify_exact, CertifyOptions};
use crate::group::FiniteAbelianGroup;
use crate::localization::{divisor_closed_generator_sets, nagata_instance_check, LocalizationSetup};
use crate::relation::AtomClassification;
use crate::report::{classes_json, group_json, relation_json, SCHEMA};
use crate::{Error, Result};

pub const DEFAULT_CEILING: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SurveyCheck {
    /// HFD iff every class carries a good atom.
    Kaplansky,
    /// The same modulo each `r`.
    RChfd,
    /// Groups of order at most 2 are HFD; for `G0 = G` with `|G| ≥ 3` every
    /// atom except `(0)` is bad.
    SmallGroups,
    /// Localization HFD implies base HFD, plain and modulo each `r`.
    Nagata,
    /// Bounded OHFD implies factorial.
    OhfdUfd,
}

impl SurveyCheck {
    pub const ALL: [SurveyCheck; 5] =
        [SurveyCheck::Kaplansky, SurveyCheck::RChfd, SurveyCheck::SmallGroups, SurveyCheck::Nagata, SurveyCheck::OhfdUfd];

    pub fn name(self) -> &'static str {
        match self {
            SurveyCheck::Kaplansky => "kaplansky",
            SurveyCheck::RChfd => "r-chfd",
            SurveyCheck::SmallGroups => "prop4",
            SurveyCheck::Nagata => "nagata",
            SurveyCheck::OhfdUfd => "ohfd-ufd",
        }
    }
}

impl fmt::Display for SurveyCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SurveyCheck {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SurveyCheck::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown check {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurveyConfig {
    pub max_order: u32,
    pub moduli: Vec<u32>,
    pub checks: Vec<SurveyCheck>,
    /// OHFD scan bound; `None` uses `max(8, 2·longest atom)` per instance.
    pub ohfd_bound: Option<usize>,
    pub ceiling: u32,
    pub cap: usize,
}

impl Default for SurveyConfig {
    fn default() -> Self {
        SurveyConfig {
            max_order: 6,
            moduli: vec![2, 3, 4],
            checks: SurveyCheck::ALL.to_vec(),
            ohfd_bound: None,
            ceiling: DEFAULT_CEILING,
            cap: crate::DEFAULT_CAP,
        }
    }
}

/// Cyclic groups of order `1..=max_order`, then `Z/2 × Z/2` when it fits.
pub fn survey_groups(max_order: u32) -> Vec<FiniteAbelianGroup> {
    let mut out: Vec<FiniteAbelianGroup> =
        (1..=max_order).map(|n| FiniteAbelianGroup::cyclic(n).expect("positive order")).collect();
    if max_order >= 4 {
        out.push(FiniteAbelianGroup::new(vec![2, 2]).expect("valid moduli"));
    }
    out
}

/// Every class subset of every survey group, empty subsets included.
pub fn survey_instances(max_order: u32) -> Vec<ClassSubset> {
    let mut out = Vec::new();
    for g in survey_groups(max_order) {
        let n = g.order();
        for mask in 0u64..(1u64 << n) {
            let idx: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            out.push(ClassSubset::from_indices(&g, &idx).expect("indices in range"));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub check: SurveyCheck,
    pub group: FiniteAbelianGroup,
    pub classes: Value,
    pub detail: Value,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckSummary {
    pub check: SurveyCheck,
    /// Instances (or, for the localization check, generator sets) examined.
    pub cases: usize,
    pub counterexamples: Vec<Counterexample>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurveyReport {
    pub config: SurveyConfig,
    pub instances: usize,
    pub summaries: Vec<CheckSummary>,
}

impl SurveyReport {
    pub fn total_counterexamples(&self) -> usize {
        self.summaries.iter().map(|s| s.counterexamples.len()).sum()
    }

    pub fn summary(&self, check: SurveyCheck) -> Option<&CheckSummary> {
        self.summaries.iter().find(|s| s.check == check)
    }

    pub fn to_json(&self) -> Value {
        let groups: Vec<Value> = survey_groups(self.config.max_order).iter().map(group_json).collect();
        let checks: Vec<Value> = self
            .summaries
            .iter()
            .map(|s| {
                let cex: Vec<Value> = s
                    .counterexamples
                    .iter()
                    .map(|c| json!({ "group": group_json(&c.group), "classes": c.classes, "detail": c.detail }))
                    .collect();
                json!({
                    "check": s.check.name(),
                    "cases": s.cases,
                    "counterexample_count": s.counterexamples.len(),
                    "counterexamples": cex,
                })
            })
            .collect();
        json!({
            "schema": SCHEMA,
            "kind": "survey",
            "max_order": self.config.max_order,
            "moduli": self.config.moduli,
            "ohfd_bound": self.config.ohfd_bound.map_or(json!("max(8, 2*longest atom)"), |b| json!(b)),
            "groups": groups,
            "instances": self.instances,
            "checks": checks,
        })
    }
}

// per-instance outcome: (check, cases, counterexample details)
type Outcome = Vec<(SurveyCheck, usize, Vec<Value>)>;

pub fn run_survey(cfg: &SurveyConfig) -> Result<SurveyReport> {
    if cfg.max_order == 0 || cfg.max_order > cfg.ceiling {
        return Err(Error::InvalidParameter(format!(
            "max order {} outside 1..={}",
            cfg.max_order, cfg.ceiling
        )));
    }
    crate::relation::check_moduli(&cfg.moduli)?;
    let mut checks = cfg.checks.clone();
    checks.sort();
    checks.dedup();
    let instances = survey_instances(cfg.max_order);
    let outcomes: Vec<Result<Outcome>> = instances.par_iter().map(|cs| survey_instance(cs, cfg, &checks)).collect();

    let mut summaries: Vec<CheckSummary> =
        checks.iter().map(|&check| CheckSummary { check, cases: 0, counterexamples: Vec::new() }).collect();
    for (cs, outcome) in instances.iter().zip(outcomes) {
        for (check, cases, details) in outcome? {
            let s = summaries.iter_mut().find(|s| s.check == check).expect("check listed");
            s.cases += cases;
            for detail in details {
                s.counterexamples.push(Counterexample {
                    check,
                    group: cs.group().clone(),
                    classes: classes_json(cs),
                    detail,
                });
            }
        }
    }
    Ok(SurveyReport { config: SurveyConfig { checks, ..cfg.clone() }, instances: instances.len(), summaries })
}

fn survey_instance(cs: &ClassSubset, cfg: &SurveyConfig, checks: &[SurveyCheck]) -> Result<Outcome> {
    let t = enumerate_atoms(cs);
    let opts = CertifyOptions { witness_bound: None, cap: cfg.cap };
    let c = classify_exact(&t, &cfg.moduli, &opts)?;
    checks.iter().map(|&check| run_check(check, &t, &c, cfg)).collect()
}

fn run_check(
    check: SurveyCheck,
    t: &AtomTable,
    c: &AtomClassification,
    cfg: &SurveyConfig,
) -> Result<(SurveyCheck, usize, Vec<Value>)> {
    let mut found = Vec::new();
    let mut cases = 1;
    match check {
        SurveyCheck::Kaplansky => {
            let k = kaplansky_equivalence(t, c);
            if !k.equivalence_holds {
                found.push(json!({ "hfd": k.is_hfd, "uncovered": k.uncovered.len() }));
            }
        }
        SurveyCheck::RChfd => {
            for &r in &cfg.moduli {
                let k = kaplansky_equivalence_mod(t, c, r)?;
                if !k.equivalence_holds {
                    found.push(json!({ "r": r, "r_chfd": k.is_hfd, "uncovered": k.uncovered.len() }));
                }
            }
        }
        SurveyCheck::SmallGroups => {
            let g = t.classes().group();
            if g.order() <= 2 && !is_hfd(c) {
                found.push(json!({ "claim": "order at most 2 is hfd" }));
            }
            if g.order() >= 3 && t.classes().len() == g.order() {
                let zero = g.zero();
                for i in c.good_atoms() {
                    let s = t.atom(i);
                    let only_zero = s.total_length() == 1 && t.classes().classes()[s.support().next().unwrap()] == zero;
                    if !only_zero {
                        found.push(json!({ "claim": "every nonzero atom is bad", "good_atom": t.render(i) }));
                    }
                }
            }
            if g.order() > 2 && t.classes().len() != g.order() {
                cases = 0;
            }
        }
        SurveyCheck::Nagata => {
            cases = 0;
            for gens in divisor_closed_generator_sets(t, c) {
                if gens.is_empty() {
                    continue;
                }
                cases += 1;
                let setup = LocalizationSetup::new(t, c, &gens)?;
                let check = nagata_instance_check(t, &setup, &cfg.moduli)?;
                if !check.consistent() {
                    let literals: Vec<String> = gens.iter().map(|&i| t.render(i)).collect();
                    found.push(json!({ "s_generators": literals, "nagata": serde_json::to_value(&check).unwrap() }));
                }
            }
        }
        SurveyCheck::OhfdUfd => {
            let bound = cfg.ohfd_bound.unwrap_or_else(|| default_ohfd_bound(t));
            if !t.is_empty() && ohfd_violation(t, bound)?.is_none() && !is_factorial_table(t) {
                found.push(json!({ "bound": bound, "nonfactorial_by": nonfactorial_witness(t) }));
            }
        }
    }
    Ok((check, cases, found))
}

/// `max(8, 2·longest atom)`, the smallest bound the OHFD scan accepts that
/// is at least 8.
pub fn default_ohfd_bound(t: &AtomTable) -> usize {
    8.max(2 * t.max_atom_length())
}

fn nonfactorial_witness(t: &AtomTable) -> Value {
    let all: Vec<usize> = (0..t.len()).collect();
    match crate::relation::relations_among(t, &all, crate::DEFAULT_CAP) {
        Ok(rels) => rels.first().map_or(Value::Null, |r| relation_json(t, r)),
        Err(_) => Value::Null,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_counts() {
        // 2 + 4 + 8 + 16 subsets of the cyclic groups, 16 of Z/2 x Z/2
        assert_eq!(survey_instances(4).len(), 2 + 4 + 8 + 16 + 16);
        assert_eq!(survey_groups(3).len(), 3);
    }

    #[test]
    fn ceiling_is_enforced() {
        let cfg = SurveyConfig { max_order: 9, ..SurveyConfig::default() };
        assert!(matches!(run_survey(&cfg), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn check_names_round_trip() {
        for c in SurveyCheck::ALL {
            assert_eq!(c.name().parse::<SurveyCheck>().unwrap(), c);
        }
        assert!("nope".parse::<SurveyCheck>().is_err());
    }

    #[test]
    fn small_survey_is_deterministic() {
        let cfg = SurveyConfig { max_order: 4, ..SurveyConfig::default() };
        let a = run_survey(&cfg).unwrap().to_json();
        let b = run_survey(&cfg).unwrap().to_json();
        assert_eq!(a, b);
        let report = run_survey(&cfg).unwrap();
        assert!(report.summary(SurveyCheck::Kaplansky).unwrap().counterexamples.is_empty());
    }
}
