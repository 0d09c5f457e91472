//! Block monoids: zero-sum sequences over a class subset, their atoms and
//! their factorizations.
//!
//! Sequences are multisets, stored as multiplicity vectors indexed by the
//! position of each class in its [`ClassSubset`]. The block monoid is reduced,
//! so two elements are associated exactly when they are equal.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::group::{FiniteAbelianGroup, GroupElement};
use crate::{Error, Result};

/// The classes `G0 ⊆ G` that contain prime divisors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassSubset {
    group: FiniteAbelianGroup,
    classes: Vec<GroupElement>,
    // group index of each class, parallel to `classes`
    indices: Vec<usize>,
}

impl ClassSubset {
    pub fn new(group: FiniteAbelianGroup, classes: Vec<GroupElement>) -> Result<Self> {
        let mut indices = classes
            .iter()
            .map(|g| group.index_of(g))
            .collect::<Result<Vec<_>>>()?;
        indices.sort_unstable();
        indices.dedup();
        Ok(Self::from_sorted_indices(group, indices))
    }

    /// Classes given by their position in [`FiniteAbelianGroup::elements`].
    pub fn from_indices(group: &FiniteAbelianGroup, indices: &[usize]) -> Result<Self> {
        if let Some(&i) = indices.iter().find(|&&i| i >= group.order()) {
            return Err(Error::IncompatibleElement(format!(
                "class index {i} outside a group of order {}",
                group.order()
            )));
        }
        let mut indices = indices.to_vec();
        indices.sort_unstable();
        indices.dedup();
        Ok(Self::from_sorted_indices(group.clone(), indices))
    }

    /// Convenience constructor for cyclic groups: classes given as residues.
    pub fn from_residues(group: &FiniteAbelianGroup, residues: &[i64]) -> Result<Self> {
        let classes = residues
            .iter()
            .map(|&r| group.element(&[r]))
            .collect::<Result<Vec<_>>>()?;
        Self::new(group.clone(), classes)
    }

    /// `G0 = G`.
    pub fn full(group: &FiniteAbelianGroup) -> Self {
        Self::from_sorted_indices(group.clone(), (0..group.order()).collect())
    }

    fn from_sorted_indices(group: FiniteAbelianGroup, indices: Vec<usize>) -> Self {
        let classes = indices.iter().map(|&i| group.element_at(i)).collect();
        ClassSubset { group, classes, indices }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn classes(&self) -> &[GroupElement] {
        &self.classes
    }

    pub(crate) fn group_indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn position(&self, g: &GroupElement) -> Option<usize> {
        self.classes.iter().position(|c| c == g)
    }

    /// Group index of `Σ counts[p]·class[p]`.
    pub(crate) fn sum_index(&self, counts: &[u32]) -> usize {
        let mut acc = 0;
        for (&c, &g) in counts.iter().zip(&self.indices) {
            for _ in 0..c % self.group.order() as u32 {
                acc = self.group.add_index(acc, g);
            }
        }
        acc
    }

    /// Builds the sequence with the given terms (repetition allowed).
    pub fn sequence(&self, terms: &[GroupElement]) -> Result<ZeroSumSequence> {
        let mut counts = vec![0u32; self.len()];
        for g in terms {
            let p = self.position(g).ok_or_else(|| {
                Error::InvalidSequence(format!("term {g} is not one of the classes"))
            })?;
            counts[p] += 1;
        }
        self.sequence_from_counts(counts)
    }

    pub fn sequence_from_counts(&self, counts: Vec<u32>) -> Result<ZeroSumSequence> {
        let s = ZeroSumSequence { counts };
        self.validate(&s)?;
        Ok(s)
    }

    fn validate(&self, s: &ZeroSumSequence) -> Result<()> {
        if s.counts.len() != self.len() {
            return Err(Error::InvalidSequence(format!(
                "multiplicity vector of length {} over {} classes",
                s.counts.len(),
                self.len()
            )));
        }
        if self.sum_index(&s.counts) != 0 {
            return Err(Error::InvalidSequence(format!(
                "{} does not sum to zero",
                self.render(s)
            )));
        }
        Ok(())
    }

    /// Literal form, e.g. `(2,2,4)`; higher-rank classes render as tuples.
    pub fn render(&self, s: &ZeroSumSequence) -> String {
        let mut terms = Vec::with_capacity(s.total_length());
        for (c, &k) in self.classes.iter().zip(&s.counts) {
            for _ in 0..k {
                terms.push(c.to_string());
            }
        }
        format!("({})", terms.join(","))
    }

    /// Inverse of [`render`](Self::render).
    pub fn parse_sequence(&self, literal: &str) -> Result<ZeroSumSequence> {
        let body = literal
            .trim()
            .strip_prefix('(')
            .and_then(|b| b.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("sequence literal {literal:?} lacks parentheses")))?;
        let mut terms = Vec::new();
        if self.group.rank() <= 1 {
            for part in body.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                terms.push(self.group.parse_element(part)?);
            }
        } else {
            let mut rest = body.trim();
            while !rest.is_empty() {
                let open = rest
                    .strip_prefix('(')
                    .ok_or_else(|| Error::Parse(format!("expected tuple in {literal:?}")))?;
                let close = open
                    .find(')')
                    .ok_or_else(|| Error::Parse(format!("unclosed tuple in {literal:?}")))?;
                terms.push(self.group.parse_element(&open[..close])?);
                rest = open[close + 1..].trim_start().trim_start_matches(',').trim_start();
            }
        }
        self.sequence(&terms)
    }

    /// JSON form `{"2": 2, "4": 1}` keyed by comma-separated residues.
    pub fn sequence_map(&self, s: &ZeroSumSequence) -> BTreeMap<String, u32> {
        self.classes
            .iter()
            .zip(&s.counts)
            .filter(|(_, &k)| k > 0)
            .map(|(c, &k)| (c.key(), k))
            .collect()
    }

    /// Every zero-sum sequence of total length at most `max_len`, the empty
    /// sequence included, in lexicographic order of multiplicity vectors.
    pub fn zero_sum_sequences(&self, max_len: usize) -> Vec<ZeroSumSequence> {
        let mut out = Vec::new();
        let mut counts = vec![0u32; self.len()];
        self.sequences_rec(0, max_len, 0, &mut counts, &mut out);
        out.sort();
        out
    }

    fn sequences_rec(
        &self,
        pos: usize,
        budget: usize,
        sum: usize,
        counts: &mut Vec<u32>,
        out: &mut Vec<ZeroSumSequence>,
    ) {
        if pos == self.len() {
            if sum == 0 {
                out.push(ZeroSumSequence { counts: counts.clone() });
            }
            return;
        }
        let g = self.indices[pos];
        let mut s = sum;
        for k in 0..=budget {
            counts[pos] = k as u32;
            self.sequences_rec(pos + 1, budget - k, s, counts, out);
            s = self.group.add_index(s, g);
        }
        counts[pos] = 0;
    }
}

/// A zero-sum multiset over a class subset, as multiplicities per class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZeroSumSequence {
    counts: Vec<u32>,
}

impl ZeroSumSequence {
    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn total_length(&self) -> usize {
        self.counts.iter().map(|&c| c as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    /// Class positions with nonzero multiplicity.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(p, _)| p)
    }

    pub fn divides(&self, other: &ZeroSumSequence) -> bool {
        self.counts.len() == other.counts.len()
            && self.counts.iter().zip(&other.counts).all(|(a, b)| a <= b)
    }

    /// Multiset union (the monoid operation).
    pub fn product(&self, other: &ZeroSumSequence) -> ZeroSumSequence {
        ZeroSumSequence {
            counts: self.counts.iter().zip(&other.counts).map(|(a, b)| a + b).collect(),
        }
    }
}

/// A factorization as multiplicities per atom index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FactorizationVector {
    counts: Vec<u32>,
}

impl FactorizationVector {
    pub fn new(counts: Vec<u32>) -> Self {
        FactorizationVector { counts }
    }

    pub fn zero(atoms: usize) -> Self {
        FactorizationVector { counts: vec![0; atoms] }
    }

    pub fn unit(atoms: usize, index: usize) -> Self {
        let mut f = Self::zero(atoms);
        f.counts[index] = 1;
        f
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn length(&self) -> usize {
        self.counts.iter().map(|&c| c as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(p, _)| p)
    }

    pub fn le(&self, other: &FactorizationVector) -> bool {
        self.counts.iter().zip(&other.counts).all(|(a, b)| a <= b)
    }

    pub fn sum(&self, other: &FactorizationVector) -> FactorizationVector {
        FactorizationVector {
            counts: self.counts.iter().zip(&other.counts).map(|(a, b)| a + b).collect(),
        }
    }

    /// `{atom_index: count}` with zero entries omitted.
    pub fn as_map(&self) -> BTreeMap<usize, u32> {
        self.support().map(|i| (i, self.counts[i])).collect()
    }
}

/// True iff `s` is a minimal zero-sum sequence.
pub fn is_atom(cs: &ClassSubset, s: &ZeroSumSequence) -> Result<bool> {
    cs.validate(s)?;
    let len = s.total_length();
    if len == 0 {
        return Err(Error::InvalidSequence("the empty sequence is the unit".into()));
    }
    let order = cs.group().order();
    // reach[k * order + g]: some sub-multiset of size k sums to g
    let mut reach = vec![false; (len + 1) * order];
    reach[0] = true;
    let mut used = 0;
    for (&mult, &g) in s.counts.iter().zip(cs.group_indices()) {
        if mult == 0 {
            continue;
        }
        let mut next = reach.clone();
        for k in 0..=used {
            for sum in 0..order {
                if !reach[k * order + sum] {
                    continue;
                }
                let mut acc = sum;
                for t in 1..=mult as usize {
                    acc = cs.group().add_index(acc, g);
                    next[(k + t) * order + acc] = true;
                }
            }
        }
        used += mult as usize;
        reach = next;
    }
    Ok(!(1..len).any(|k| reach[k * order]))
}

/// The atoms of `B(G0)` with a stable index.
#[derive(Debug, Clone)]
pub struct AtomTable {
    classes: ClassSubset,
    atoms: Vec<ZeroSumSequence>,
    index: HashMap<ZeroSumSequence, usize>,
}

impl AtomTable {
    pub fn classes(&self) -> &ClassSubset {
        &self.classes
    }

    pub fn atoms(&self) -> &[ZeroSumSequence] {
        &self.atoms
    }

    pub fn atom(&self, i: usize) -> &ZeroSumSequence {
        &self.atoms[i]
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn position(&self, s: &ZeroSumSequence) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn max_atom_length(&self) -> usize {
        self.atoms.iter().map(ZeroSumSequence::total_length).max().unwrap_or(0)
    }

    pub fn render(&self, i: usize) -> String {
        self.classes.render(&self.atoms[i])
    }

    /// Content `Σ counts[a]·atom[a]` of a factorization vector.
    pub fn content(&self, f: &FactorizationVector) -> ZeroSumSequence {
        let mut counts = vec![0u32; self.classes.len()];
        for (a, &k) in f.counts.iter().enumerate() {
            for (slot, &m) in counts.iter_mut().zip(&self.atoms[a].counts) {
                *slot += k * m;
            }
        }
        ZeroSumSequence { counts }
    }

    /// `product(f)` rendered as `(2,2,2)(4,4,4)`, or `1` for the empty product.
    pub fn render_factorization(&self, f: &FactorizationVector) -> String {
        let mut out = String::new();
        for a in f.support() {
            let lit = self.render(a);
            match f.counts[a] {
                1 => out.push_str(&lit),
                k => out.push_str(&format!("{lit}^{k}")),
            }
        }
        if out.is_empty() {
            out.push('1');
        }
        out
    }

    /// Atom multiplicity vectors, one per atom.
    pub fn columns(&self) -> Vec<Vec<u32>> {
        self.atoms.iter().map(|a| a.counts.clone()).collect()
    }
}

/// Lists every minimal zero-sum sequence over `cs`.
///
/// Depth-first search over non-decreasing class positions that keeps the set
/// of subsequence sums of the current prefix; a prefix with a nonempty
/// zero-sum subsequence has no minimal extension. A sequence of length `|G|`
/// always contains such a subsequence, which bounds the depth.
pub fn enumerate_atoms(cs: &ClassSubset) -> AtomTable {
    let order = cs.group().order();
    let mut found = Vec::new();
    let mut counts = vec![0u32; cs.len()];
    let subsums = vec![false; order];
    atoms_rec(cs, 0, 0, 0, &subsums, &mut counts, &mut found);
    found.sort_by(|a: &ZeroSumSequence, b: &ZeroSumSequence| {
        a.total_length().cmp(&b.total_length()).then_with(|| a.counts.cmp(&b.counts))
    });
    let index = found.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    AtomTable { classes: cs.clone(), atoms: found, index }
}

fn atoms_rec(
    cs: &ClassSubset,
    start: usize,
    depth: usize,
    sum: usize,
    subsums: &[bool],
    counts: &mut Vec<u32>,
    found: &mut Vec<ZeroSumSequence>,
) {
    let group = cs.group();
    if depth >= group.order() {
        return;
    }
    for pos in start..cs.len() {
        let g = cs.group_indices()[pos];
        let total = group.add_index(sum, g);
        counts[pos] += 1;
        if total == 0 {
            // subsums excludes the full prefix only when it has no zero-sum part
            if !subsums[0] {
                found.push(ZeroSumSequence { counts: counts.clone() });
            }
        } else {
            let mut next = subsums.to_vec();
            next[g] = true;
            for (s, &hit) in subsums.iter().enumerate() {
                if hit {
                    next[group.add_index(s, g)] = true;
                }
            }
            if !next[0] {
                atoms_rec(cs, pos, depth + 1, total, &next, counts, found);
            }
        }
        counts[pos] -= 1;
    }
}

/// Depth-first enumeration of factorizations of a content vector into a
/// subset of atoms, with content-dominance and coverage pruning.
pub(crate) struct Factorizer<'a> {
    atoms: &'a [ZeroSumSequence],
    allowed: Vec<usize>,
    // covered[i][p]: some allowed atom at list position >= i contains class p
    covered: Vec<Vec<bool>>,
}

impl<'a> Factorizer<'a> {
    pub(crate) fn new(table: &'a AtomTable, allowed: Option<&[usize]>) -> Self {
        let allowed: Vec<usize> = match allowed {
            Some(list) => list.to_vec(),
            None => (0..table.len()).collect(),
        };
        let classes = table.classes.len();
        let mut covered = vec![vec![false; classes]; allowed.len() + 1];
        for i in (0..allowed.len()).rev() {
            let mut row = covered[i + 1].clone();
            for p in table.atoms[allowed[i]].support() {
                row[p] = true;
            }
            covered[i] = row;
        }
        Factorizer { atoms: &table.atoms, allowed, covered }
    }

    /// Calls `visit` on each factorization; stops early when it returns false.
    pub(crate) fn for_each(&self, target: &[u32], visit: &mut dyn FnMut(&[u32]) -> bool) {
        let mut remaining = target.to_vec();
        let mut counts = vec![0u32; self.atoms.len()];
        self.rec(0, &mut remaining, &mut counts, visit);
    }

    fn rec(
        &self,
        i: usize,
        remaining: &mut Vec<u32>,
        counts: &mut Vec<u32>,
        visit: &mut dyn FnMut(&[u32]) -> bool,
    ) -> bool {
        if remaining.iter().all(|&r| r == 0) {
            return visit(counts);
        }
        if i == self.allowed.len() {
            return true;
        }
        if remaining.iter().zip(&self.covered[i]).any(|(&r, &c)| r > 0 && !c) {
            return true;
        }
        let atom = &self.atoms[self.allowed[i]];
        let max = atom
            .support()
            .map(|p| remaining[p] / atom.counts[p])
            .min()
            .unwrap_or(0);
        for k in (0..=max).rev() {
            for p in atom.support() {
                remaining[p] -= k * atom.counts[p];
            }
            counts[self.allowed[i]] = k;
            let keep_going = self.rec(i + 1, remaining, counts, visit);
            counts[self.allowed[i]] = 0;
            for p in atom.support() {
                remaining[p] += k * atom.counts[p];
            }
            if !keep_going {
                return false;
            }
        }
        true
    }
}

/// All factorizations of `s`, sorted. The empty sequence has exactly the
/// empty factorization.
pub fn enumerate_factorizations(
    s: &ZeroSumSequence,
    t: &AtomTable,
) -> Result<Vec<FactorizationVector>> {
    t.classes.validate(s)?;
    let mut out = Vec::new();
    Factorizer::new(t, None).for_each(&s.counts, &mut |c| {
        out.push(FactorizationVector { counts: c.to_vec() });
        true
    });
    out.sort();
    Ok(out)
}

/// Lengths of all factorizations of `s`.
pub fn length_set(s: &ZeroSumSequence, t: &AtomTable) -> Result<BTreeSet<usize>> {
    Ok(enumerate_factorizations(s, t)?.iter().map(FactorizationVector::length).collect())
}
