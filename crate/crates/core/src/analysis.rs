//! Half-factoriality predicates over a classified atom table.
//!
//! Prime divisors of class `g` divide an element exactly when `g` occurs in
//! its content, so "every prime contains a good atom" becomes "every class
//! of `G0` lies in the support of some good atom".

use std::collections::{BTreeMap, BTreeSet};

use crate::blockmonoid::{AtomTable, FactorizationVector, Factorizer, ZeroSumSequence};
use crate::certify::KernelLattice;
use crate::relation::{AtomClassification, Relation, Verdicts};
use crate::{Error, Result};

pub fn is_hfd(c: &AtomClassification) -> bool {
    c.bad_atoms().is_empty()
}

/// Every atom `r`-good. The classification must have been computed with `r`.
pub fn is_r_chfd(c: &AtomClassification, r: u32) -> Result<bool> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!("modulus r = {r} must be at least 2")));
    }
    c.modulo(r)
        .map(|v| v.bad().is_empty())
        .ok_or_else(|| Error::InvalidParameter(format!("classification was not computed modulo {r}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HfElementCheck {
    /// All factorizations have the same length.
    pub is_hf: bool,
    /// Every class in the support lies in the support of a good atom.
    pub corollary_applies: bool,
}

pub fn hf_element_check(s: &ZeroSumSequence, t: &AtomTable, c: &AtomClassification) -> Result<HfElementCheck> {
    if s.is_empty() {
        return Err(Error::InvalidSequence("the empty sequence is a unit".into()));
    }
    let lengths = crate::blockmonoid::length_set(s, t)?;
    let covered = covered_classes(t, &c.good_atoms());
    Ok(HfElementCheck { is_hf: lengths.len() == 1, corollary_applies: s.support().all(|p| covered[p]) })
}

fn covered_classes(t: &AtomTable, atoms: &[usize]) -> Vec<bool> {
    let mut covered = vec![false; t.classes().len()];
    for &a in atoms {
        for p in t.atom(a).support() {
            covered[p] = true;
        }
    }
    covered
}

/// Both sides of "half-factorial iff every class is covered by a good atom".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KaplanskyCheck {
    /// Class positions in the support of some good atom.
    pub covered: Vec<usize>,
    pub uncovered: Vec<usize>,
    pub is_hfd: bool,
    pub equivalence_holds: bool,
}

impl KaplanskyCheck {
    fn from_verdicts(t: &AtomTable, v: &Verdicts) -> Self {
        let covered = covered_classes(t, &v.good());
        let (inside, outside): (Vec<usize>, Vec<usize>) = (0..covered.len()).partition(|&p| covered[p]);
        let is_hfd = v.bad().is_empty();
        KaplanskyCheck { equivalence_holds: is_hfd == outside.is_empty(), covered: inside, uncovered: outside, is_hfd }
    }
}

pub fn kaplansky_equivalence(t: &AtomTable, c: &AtomClassification) -> KaplanskyCheck {
    KaplanskyCheck::from_verdicts(t, c.plain())
}

/// The same check with `r`-good atoms and `r`-CHFD in place of HFD.
pub fn kaplansky_equivalence_mod(t: &AtomTable, c: &AtomClassification, r: u32) -> Result<KaplanskyCheck> {
    is_r_chfd(c, r)?;
    Ok(KaplanskyCheck::from_verdicts(t, c.modulo(r).expect("checked above")))
}

/// No nontrivial irredundant relation, given the complete list.
pub fn is_factorial(rels: &[Relation]) -> bool {
    rels.is_empty()
}

/// Factoriality read off the integer kernel of the content matrix.
pub fn is_factorial_table(t: &AtomTable) -> bool {
    let all: Vec<usize> = (0..t.len()).collect();
    KernelLattice::new(t, &all).is_trivial()
}

/// Two distinct factorizations of one element with the same length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqualLengthPair {
    pub element: ZeroSumSequence,
    pub first: FactorizationVector,
    pub second: FactorizationVector,
}

fn check_ohfd_bound(t: &AtomTable, bound: usize) -> Result<()> {
    let need = 2 * t.max_atom_length();
    if bound < need {
        return Err(Error::Precondition(format!("bound {bound} is below twice the longest atom ({need})")));
    }
    Ok(())
}

/// First element of total length `<= bound` with two distinct factorizations
/// of equal length, in the order of [`crate::ClassSubset::zero_sum_sequences`].
pub fn ohfd_violation(t: &AtomTable, bound: usize) -> Result<Option<EqualLengthPair>> {
    check_ohfd_bound(t, bound)?;
    let factorizer = Factorizer::new(t, None);
    for s in t.classes().zero_sum_sequences(bound) {
        let mut by_length: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
        let mut hit = None;
        factorizer.for_each(s.counts(), &mut |f| {
            let len = f.iter().sum::<u32>() as usize;
            match by_length.get(&len) {
                Some(prev) => {
                    hit = Some((prev.clone(), f.to_vec()));
                    false
                }
                None => {
                    by_length.insert(len, f.to_vec());
                    true
                }
            }
        });
        if let Some((a, b)) = hit {
            let (first, second) = if a <= b { (a, b) } else { (b, a) };
            return Ok(Some(EqualLengthPair {
                element: s,
                first: FactorizationVector::new(first),
                second: FactorizationVector::new(second),
            }));
        }
    }
    Ok(None)
}

/// Distinct factorizations have distinct lengths for every element of total
/// length `<= bound`. A bounded verification, not a proof.
pub fn is_ohfd(t: &AtomTable, bound: usize) -> Result<bool> {
    Ok(ohfd_violation(t, bound)?.is_none())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OhfdScan {
    pub bound: usize,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisReport {
    pub is_hfd: bool,
    pub r_chfd: BTreeMap<u32, bool>,
    /// `|n - m|` over the known irredundant unbalanced relations: all of them
    /// when the complete list was supplied, the witnesses otherwise.
    pub distance_witnesses: BTreeSet<usize>,
    pub kaplansky: KaplanskyCheck,
    pub kaplansky_r: BTreeMap<u32, KaplanskyCheck>,
    pub is_factorial: bool,
    pub ohfd: Option<OhfdScan>,
}

/// Runs every predicate. `relations`, when given, must be the complete list
/// of irredundant relations; `ohfd_bound` enables the bounded OHFD scan.
pub fn analyze(
    t: &AtomTable,
    c: &AtomClassification,
    relations: Option<&[Relation]>,
    ohfd_bound: Option<usize>,
) -> Result<AnalysisReport> {
    let distance_witnesses = match relations {
        Some(rels) => rels.iter().map(Relation::distance).filter(|&d| d > 0).collect(),
        None => c.bad_atoms().iter().filter_map(|&a| c.witness(a)).map(Relation::distance).collect(),
    };
    let mut r_chfd = BTreeMap::new();
    let mut kaplansky_r = BTreeMap::new();
    for r in c.moduli() {
        r_chfd.insert(r, is_r_chfd(c, r)?);
        kaplansky_r.insert(r, kaplansky_equivalence_mod(t, c, r)?);
    }
    let is_factorial = match relations {
        Some(rels) => is_factorial(rels),
        None => is_factorial_table(t),
    };
    let ohfd = match ohfd_bound {
        Some(bound) => Some(OhfdScan { bound, verified: is_ohfd(t, bound)? }),
        None => None,
    };
    Ok(AnalysisReport {
        is_hfd: is_hfd(c),
        r_chfd,
        distance_witnesses,
        kaplansky: kaplansky_equivalence(t, c),
        kaplansky_r,
        is_factorial,
        ohfd,
    })
}
