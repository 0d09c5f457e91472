//! Brute-force oracles, independent of the completion engine.
//!
//! Everything here works from the definitions: all factorization vectors up
//! to a content-length bound are listed, grouped by content, and every pair
//! of factorizations of the same element is tested for irredundance by
//! trying all sub-pairs.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use hfdlab::AtomTable;

/// Factorization vectors of every element of content length `<= bound`,
/// grouped by content.
pub fn factorizations_by_content(t: &AtomTable, bound: usize) -> HashMap<Vec<u32>, Vec<Vec<u32>>> {
    let atoms: Vec<Vec<u32>> = t.atoms().iter().map(|a| a.counts().to_vec()).collect();
    let lens: Vec<usize> = t.atoms().iter().map(|a| a.total_length()).collect();
    let classes = t.classes().len();
    let mut out: HashMap<Vec<u32>, Vec<Vec<u32>>> = HashMap::new();
    let mut counts = vec![0u32; atoms.len()];
    let mut content = vec![0u32; classes];
    fn rec(
        i: usize,
        budget: usize,
        atoms: &[Vec<u32>],
        lens: &[usize],
        counts: &mut Vec<u32>,
        content: &mut Vec<u32>,
        out: &mut HashMap<Vec<u32>, Vec<Vec<u32>>>,
    ) {
        if i == atoms.len() {
            out.entry(content.clone()).or_default().push(counts.clone());
            return;
        }
        rec(i + 1, budget, atoms, lens, counts, content, out);
        let mut used = 0;
        while used + lens[i] <= budget {
            used += lens[i];
            counts[i] += 1;
            for (c, a) in content.iter_mut().zip(&atoms[i]) {
                *c += a;
            }
            rec(i + 1, budget - used, atoms, lens, counts, content, out);
        }
        for (c, a) in content.iter_mut().zip(&atoms[i]) {
            *c -= a * counts[i];
        }
        counts[i] = 0;
    }
    rec(0, bound, &atoms, &lens, &mut counts, &mut content, &mut out);
    out
}

fn content_of(t: &AtomTable, f: &[u32]) -> Vec<u32> {
    let mut c = vec![0u32; t.classes().len()];
    for (a, &k) in f.iter().enumerate() {
        for (slot, &m) in c.iter_mut().zip(t.atom(a).counts()) {
            *slot += k * m;
        }
    }
    c
}

fn sub_vectors(f: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &c in f {
        let mut next = Vec::new();
        for p in &out {
            for k in 0..=c {
                let mut q = p.clone();
                q.push(k);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// An unordered irredundant atomic equality found by search, shorter side
/// first (ties broken lexicographically).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OracleRelation {
    pub lhs: Vec<u32>,
    pub rhs: Vec<u32>,
}

impl OracleRelation {
    pub fn new(a: Vec<u32>, b: Vec<u32>) -> Self {
        let la: u32 = a.iter().sum();
        let lb: u32 = b.iter().sum();
        if (la, &a) <= (lb, &b) {
            OracleRelation { lhs: a, rhs: b }
        } else {
            OracleRelation { lhs: b, rhs: a }
        }
    }

    pub fn lengths(&self) -> (u32, u32) {
        (self.lhs.iter().sum(), self.rhs.iter().sum())
    }

    pub fn atoms(&self) -> BTreeSet<usize> {
        (0..self.lhs.len()).filter(|&i| self.lhs[i] > 0 || self.rhs[i] > 0).collect()
    }
}

/// Irredundance straight from the definition: no nonzero `x' <= x`,
/// `y' <= y` with equal content other than `(x, y)` itself.
pub fn irredundant(t: &AtomTable, by_content: &HashMap<Vec<u32>, Vec<Vec<u32>>>, x: &[u32], y: &[u32]) -> bool {
    for xs in sub_vectors(x) {
        if xs.iter().all(|&k| k == 0) {
            continue;
        }
        let c = content_of(t, &xs);
        if let Some(ys) = by_content.get(&c) {
            for ysub in ys {
                if ysub.iter().all(|&k| k == 0) {
                    continue;
                }
                let below = ysub.iter().zip(y).all(|(a, b)| a <= b);
                if below && !(xs.as_slice() == x && ysub.as_slice() == y) {
                    return false;
                }
            }
        }
    }
    true
}

/// Every irredundant relation whose common element has content length
/// `<= bound`.
pub fn irredundant_relations(t: &AtomTable, bound: usize) -> BTreeSet<OracleRelation> {
    let by_content = factorizations_by_content(t, bound);
    let mut out = BTreeSet::new();
    for fs in by_content.values() {
        for (i, x) in fs.iter().enumerate() {
            for y in &fs[i + 1..] {
                if irredundant(t, &by_content, x, y) {
                    out.insert(OracleRelation::new(x.clone(), y.clone()));
                }
            }
        }
    }
    out
}

/// Atoms occurring in an irredundant relation whose lengths differ modulo
/// `r` (`r = 0` meaning plain inequality).
pub fn bad_atoms(rels: &BTreeSet<OracleRelation>, r: u32) -> BTreeSet<usize> {
    let mut bad = BTreeSet::new();
    for rel in rels {
        let (n, m) = rel.lengths();
        let unbalanced = if r == 0 { n != m } else { (m - n) % r != 0 };
        if unbalanced {
            bad.extend(rel.atoms());
        }
    }
    bad
}

/// Length sets of every element with content length `<= bound`.
pub fn length_sets(t: &AtomTable, bound: usize) -> HashMap<Vec<u32>, BTreeSet<u32>> {
    factorizations_by_content(t, bound)
        .into_iter()
        .map(|(c, fs)| (c, fs.iter().map(|f| f.iter().sum()).collect()))
        .collect()
}
