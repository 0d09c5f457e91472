//! Atomic equalities and the good/bad classification of atoms.
//!
//! An atomic equality `a_1⋯a_n = b_1⋯b_m` in `B(G0)` is a pair of factorization
//! vectors `(x, y)` with `M x = M y`, where `M` is the content matrix (classes
//! by atoms). Such a pair is irredundant exactly when it is an indecomposable
//! element of the monoid `{(x, y) ∈ ℕ^A × ℕ^A : M x = M y}`: a proper
//! sub-equality `(x', y') ≤ (x, y)` leaves the complement `(x - x', y - y')`
//! as another solution, and conversely. The trivial generators `(e_a, e_a)`
//! force indecomposable nontrivial pairs to have disjoint supports. Computing
//! the Hilbert basis therefore yields every irredundant equality, exactly.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::blockmonoid::{enumerate_atoms, AtomTable, ClassSubset, FactorizationVector};
use crate::hilbert::{hilbert_basis, LinearSystem};
use crate::{Error, Result};

/// Multiplicity of each class (row) in each atom (column).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContentMatrix {
    rows: usize,
    columns: Vec<Vec<u32>>,
}

impl ContentMatrix {
    pub fn from_table(t: &AtomTable) -> Self {
        ContentMatrix { rows: t.classes().len(), columns: t.columns() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn atoms(&self) -> usize {
        self.columns.len()
    }

    pub fn entry(&self, class: usize, atom: usize) -> u32 {
        self.columns[atom][class]
    }

    pub fn content(&self, f: &FactorizationVector) -> Vec<u32> {
        let mut out = vec![0u32; self.rows];
        for (col, &k) in self.columns.iter().zip(f.counts()) {
            for (o, &m) in out.iter_mut().zip(col) {
                *o += k * m;
            }
        }
        out
    }

    /// The columns of the listed atoms only.
    pub fn restricted(t: &AtomTable, atoms: &[usize]) -> Self {
        let all = t.columns();
        ContentMatrix { rows: t.classes().len(), columns: atoms.iter().map(|&a| all[a].clone()).collect() }
    }

    /// The system `[M | -M] (x, y) = 0`.
    fn pair_system(&self) -> LinearSystem {
        let mut columns: Vec<Vec<i64>> =
            self.columns.iter().map(|c| c.iter().map(|&m| m as i64).collect()).collect();
        columns.extend(self.columns.iter().map(|c| c.iter().map(|&m| -(m as i64)).collect()));
        LinearSystem::new(self.rows, columns).expect("columns share the row count")
    }
}

/// An unordered atomic equality, stored shorter side first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    lhs: FactorizationVector,
    rhs: FactorizationVector,
    irredundant: bool,
}

impl Relation {
    /// Orients the pair so that `(|lhs|, lhs) ≤ (|rhs|, rhs)`.
    pub fn new(a: FactorizationVector, b: FactorizationVector) -> Self {
        let key_a = (a.length(), a.counts().to_vec());
        let key_b = (b.length(), b.counts().to_vec());
        let (lhs, rhs) = if key_a <= key_b { (a, b) } else { (b, a) };
        Relation { lhs, rhs, irredundant: false }
    }

    pub fn lhs(&self) -> &FactorizationVector {
        &self.lhs
    }

    pub fn rhs(&self) -> &FactorizationVector {
        &self.rhs
    }

    pub fn lengths(&self) -> (usize, usize) {
        (self.lhs.length(), self.rhs.length())
    }

    pub fn is_balanced(&self) -> bool {
        self.lhs.length() == self.rhs.length()
    }

    /// Lengths congruent modulo `r`.
    pub fn is_r_balanced(&self, r: u32) -> bool {
        let (n, m) = self.lengths();
        (m - n) % r as usize == 0
    }

    pub fn distance(&self) -> usize {
        let (n, m) = self.lengths();
        m - n
    }

    pub fn is_irredundant(&self) -> bool {
        self.irredundant
    }

    pub(crate) fn mark_irredundant(mut self, flag: bool) -> Self {
        self.irredundant = flag;
        self
    }

    /// Atoms occurring on either side.
    pub fn atoms(&self) -> BTreeSet<usize> {
        self.lhs.support().chain(self.rhs.support()).collect()
    }

    /// Total content length of the common element.
    pub fn content_length(&self, t: &AtomTable) -> usize {
        t.content(&self.lhs).total_length()
    }

    pub fn render(&self, t: &AtomTable) -> String {
        format!("{} = {}", t.render_factorization(&self.lhs), t.render_factorization(&self.rhs))
    }
}

/// The nontrivial part of the Hilbert basis of `{M x = M y}`, one entry per
/// unordered pair, sorted by total length and then by sides.
pub fn hilbert_basis_pairs(m: &ContentMatrix, cap: usize) -> Result<Vec<Relation>> {
    if m.atoms() == 0 {
        return Err(Error::Precondition("the atom table is empty".into()));
    }
    let k = m.atoms();
    let basis = hilbert_basis(&m.pair_system(), cap)?;
    let mut out: Vec<Relation> = basis
        .into_iter()
        .filter_map(|z| {
            let x = FactorizationVector::new(z[..k].to_vec());
            let y = FactorizationVector::new(z[k..].to_vec());
            if x == y {
                return None;
            }
            let rel = Relation::new(x.clone(), y.clone());
            // keep one orientation of each unordered pair
            (rel.lhs == x).then_some(rel)
        })
        .collect();
    sort_relations(&mut out);
    Ok(out)
}

/// Irredundant relations among the listed atoms, as vectors over the whole
/// table.
pub fn relations_among(t: &AtomTable, atoms: &[usize], cap: usize) -> Result<Vec<Relation>> {
    let m = ContentMatrix::restricted(t, atoms);
    let lift = |f: &FactorizationVector| {
        let mut counts = vec![0u32; t.len()];
        for (&a, &k) in atoms.iter().zip(f.counts()) {
            counts[a] = k;
        }
        FactorizationVector::new(counts)
    };
    let mut out: Vec<Relation> = hilbert_basis_pairs(&m, cap)?
        .iter()
        .map(|r| Relation::new(lift(r.lhs()), lift(r.rhs())).mark_irredundant(true))
        .collect();
    sort_relations(&mut out);
    Ok(out)
}

pub(crate) fn sort_relations(rels: &mut [Relation]) {
    rels.sort_by(|a, b| {
        let ka = (a.lhs.length() + a.rhs.length(), &a.lhs, &a.rhs);
        let kb = (b.lhs.length() + b.rhs.length(), &b.lhs, &b.rhs);
        ka.cmp(&kb)
    });
}

/// Flags every nontrivial Hilbert-basis pair as irredundant; indecomposable
/// and irredundant coincide.
pub fn irredundant_relations(hb: Vec<Relation>) -> Vec<Relation> {
    hb.into_iter().map(|r| r.mark_irredundant(true)).collect()
}

/// Direct irredundance test: no `0 ≠ x' ≤ lhs`, `0 ≠ y' ≤ rhs` with equal
/// content other than the full pair. Exponential in the side lengths.
pub fn is_irredundant_by_search(t: &AtomTable, lhs: &FactorizationVector, rhs: &FactorizationVector) -> bool {
    let m = ContentMatrix::from_table(t);
    let mut left: HashMap<Vec<u32>, Vec<FactorizationVector>> = HashMap::new();
    for x in sub_vectors(lhs) {
        if !x.is_zero() {
            left.entry(m.content(&x)).or_default().push(x);
        }
    }
    for y in sub_vectors(rhs) {
        if y.is_zero() {
            continue;
        }
        if let Some(xs) = left.get(&m.content(&y)) {
            if xs.iter().any(|x| !(x == lhs && &y == rhs)) {
                return false;
            }
        }
    }
    true
}

fn sub_vectors(f: &FactorizationVector) -> Vec<FactorizationVector> {
    let mut out = vec![Vec::with_capacity(f.counts().len())];
    for &c in f.counts() {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<u32>| {
                (0..=c).map(move |k| {
                    let mut p = prefix.clone();
                    p.push(k);
                    p
                })
            })
            .collect();
    }
    out.into_iter().map(FactorizationVector::new).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Good,
    Bad,
}

/// Verdicts under one length predicate, with one witness per bad atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdicts {
    verdicts: Vec<Verdict>,
    witnesses: Vec<Option<Relation>>,
}

impl Verdicts {
    pub(crate) fn all_good(n: usize) -> Self {
        Verdicts { verdicts: vec![Verdict::Good; n], witnesses: vec![None; n] }
    }

    pub(crate) fn mark_bad(&mut self, atom: usize, witness: &Relation) {
        if self.witnesses[atom].is_none() {
            self.verdicts[atom] = Verdict::Bad;
            self.witnesses[atom] = Some(witness.clone());
        }
    }

    pub fn verdicts(&self) -> &[Verdict] {
        &self.verdicts
    }

    pub fn verdict(&self, atom: usize) -> Verdict {
        self.verdicts[atom]
    }

    /// An irredundant relation containing `atom` that violates the length
    /// condition, present exactly when the atom is bad.
    pub fn witness(&self, atom: usize) -> Option<&Relation> {
        self.witnesses[atom].as_ref()
    }

    pub fn good(&self) -> Vec<usize> {
        (0..self.verdicts.len()).filter(|&a| self.verdicts[a] == Verdict::Good).collect()
    }

    pub fn bad(&self) -> Vec<usize> {
        (0..self.verdicts.len()).filter(|&a| self.verdicts[a] == Verdict::Bad).collect()
    }
}

/// Per-atom good/bad verdicts with witnessing relations.
///
/// Bad means: the atom occurs in some irredundant unbalanced relation. For
/// each requested modulus `r` the `r`-verdict compares lengths modulo `r`
/// and is computed independently of the plain verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomClassification {
    plain: Verdicts,
    modular: BTreeMap<u32, Verdicts>,
}

impl AtomClassification {
    pub(crate) fn from_parts(plain: Verdicts, modular: BTreeMap<u32, Verdicts>) -> Self {
        AtomClassification { plain, modular }
    }

    pub fn plain(&self) -> &Verdicts {
        &self.plain
    }

    pub fn verdicts(&self) -> &[Verdict] {
        self.plain.verdicts()
    }

    pub fn verdict(&self, atom: usize) -> Verdict {
        self.plain.verdict(atom)
    }

    pub fn is_good(&self, atom: usize) -> bool {
        self.plain.verdict(atom) == Verdict::Good
    }

    pub fn witness(&self, atom: usize) -> Option<&Relation> {
        self.plain.witness(atom)
    }

    pub fn good_atoms(&self) -> Vec<usize> {
        self.plain.good()
    }

    pub fn bad_atoms(&self) -> Vec<usize> {
        self.plain.bad()
    }

    pub fn atom_count(&self) -> usize {
        self.plain.verdicts.len()
    }

    pub fn moduli(&self) -> impl Iterator<Item = u32> + '_ {
        self.modular.keys().copied()
    }

    /// Verdicts modulo `r`, if `r` was requested.
    pub fn modulo(&self, r: u32) -> Option<&Verdicts> {
        self.modular.get(&r)
    }

    pub fn r_good_atoms(&self, r: u32) -> Option<Vec<usize>> {
        self.modulo(r).map(Verdicts::good)
    }
}

pub(crate) fn check_moduli(moduli: &[u32]) -> Result<()> {
    match moduli.iter().find(|&&r| r < 2) {
        Some(r) => Err(Error::InvalidParameter(format!("modulus r = {r} must be at least 2"))),
        None => Ok(()),
    }
}

/// Classifies the atoms of `t` from the complete list of irredundant
/// relations `rels`, optionally also modulo `r`.
pub fn classify_atoms(t: &AtomTable, rels: &[Relation], r: Option<u32>) -> Result<AtomClassification> {
    let moduli: Vec<u32> = r.into_iter().collect();
    classify_atoms_mod(t, rels, &moduli)
}

/// [`classify_atoms`] for several moduli at once.
pub fn classify_atoms_mod(t: &AtomTable, rels: &[Relation], moduli: &[u32]) -> Result<AtomClassification> {
    check_moduli(moduli)?;
    let n = t.len();
    let mut plain = Verdicts::all_good(n);
    let mut modular: BTreeMap<u32, Verdicts> = moduli.iter().map(|&r| (r, Verdicts::all_good(n))).collect();
    for rel in rels {
        for a in rel.atoms() {
            if !rel.is_balanced() {
                plain.mark_bad(a, rel);
            }
            for (&r, v) in modular.iter_mut() {
                if !rel.is_r_balanced(r) {
                    v.mark_bad(a, rel);
                }
            }
        }
    }
    Ok(AtomClassification { plain, modular })
}

/// A class subset together with its atoms and all irredundant relations.
#[derive(Debug, Clone)]
pub struct Instance {
    pub classes: ClassSubset,
    pub atoms: AtomTable,
    pub relations: Vec<Relation>,
}

impl Instance {
    pub fn build(classes: ClassSubset, cap: usize) -> Result<Self> {
        let atoms = enumerate_atoms(&classes);
        let relations = if atoms.is_empty() {
            Vec::new()
        } else {
            irredundant_relations(hilbert_basis_pairs(&ContentMatrix::from_table(&atoms), cap)?)
        };
        Ok(Instance { classes, atoms, relations })
    }

    pub fn classify(&self, r: Option<u32>) -> AtomClassification {
        classify_atoms(&self.atoms, &self.relations, r).expect("modulus validated by caller")
    }

    pub fn try_classify(&self, r: Option<u32>) -> Result<AtomClassification> {
        classify_atoms(&self.atoms, &self.relations, r)
    }

    pub fn atom_index(&self, literal: &str) -> Result<usize> {
        let s = self.classes.parse_sequence(literal)?;
        self.atoms
            .position(&s)
            .ok_or_else(|| Error::InvalidSequence(format!("{literal} is not an atom")))
    }
}
