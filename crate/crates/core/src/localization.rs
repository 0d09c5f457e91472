//! Inverting a divisor-closed set of good atoms.
//!
//! The multiplicative set `S` is the submonoid generated by a set of good
//! atoms that contains every atom supported on the classes `G1` those atoms
//! cover, so `S = B(G1)`. In the localization the generators become units,
//! the surviving atoms (`C`) are the remaining atoms that do not split modulo
//! `S`, and every other atom factors into at least two of them.
//!
//! Two routes decide each question. The direct route works with the part of
//! an atom lying outside `G1`: an atom splits modulo `S` exactly when that
//! part divides into two nonempty pieces whose sums lie in the subgroup
//! generated by `G1`, and two products of `C`-atoms are equal modulo units
//! exactly when their contents agree outside `G1`. The second route solves
//! the corresponding homogeneous systems with the Hilbert-basis engine.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::blockmonoid::{AtomTable, FactorizationVector, Factorizer};
use crate::certify::{Condition, KernelLattice};
use crate::hilbert::{hilbert_basis, LinearSystem};
use crate::relation::{check_moduli, sort_relations, AtomClassification, Relation};
use crate::{Error, Result};

/// The base atom table data needed to localize, with `B` and `C` filled in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalizationSetup {
    generators: Vec<usize>,
    support: Vec<usize>,
    b: Vec<usize>,
    c: Vec<usize>,
}

impl LocalizationSetup {
    /// Validates the generators and computes `B` and `C`.
    pub fn new(t: &AtomTable, verdicts: &AtomClassification, generators: &[usize]) -> Result<Self> {
        compute_b_c(t, verdicts, generators)
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// Class positions covered by the generators.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// Atoms that become units.
    pub fn b(&self) -> &[usize] {
        &self.b
    }

    /// Atoms that stay atoms.
    pub fn c(&self) -> &[usize] {
        &self.c
    }

    /// Atoms that neither become units nor stay atoms.
    pub fn split_atoms(&self, t: &AtomTable) -> Vec<usize> {
        (0..t.len()).filter(|a| !self.b.contains(a) && !self.c.contains(a)).collect()
    }

    fn outside_rows(&self, t: &AtomTable) -> Vec<usize> {
        (0..t.classes().len()).filter(|p| !self.support.contains(p)).collect()
    }
}

/// Builds `B` and `C` for the set generated by `generators`.
///
/// The generators must be good atoms and must include every atom supported
/// on the classes they cover; otherwise the generated set is not saturated.
pub fn compute_b_c(t: &AtomTable, verdicts: &AtomClassification, generators: &[usize]) -> Result<LocalizationSetup> {
    let mut gens: Vec<usize> = generators.to_vec();
    gens.sort_unstable();
    gens.dedup();
    if let Some(&a) = gens.iter().find(|&&a| a >= t.len()) {
        return Err(Error::InvalidParameter(format!("atom index {a} out of range")));
    }
    if let Some(&a) = gens.iter().find(|&&a| !verdicts.is_good(a)) {
        return Err(Error::Precondition(format!("generator {} is a bad atom", t.render(a))));
    }
    let support: Vec<usize> = gens
        .iter()
        .flat_map(|&a| t.atom(a).support())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if let Some(a) = (0..t.len()).find(|a| !gens.contains(a) && t.atom(*a).support().all(|p| support.contains(&p))) {
        return Err(Error::Precondition(format!(
            "generators are not divisor-closed: {} divides a product of generators",
            t.render(a)
        )));
    }
    let mut setup = LocalizationSetup { generators: gens.clone(), support, b: gens, c: Vec::new() };
    let subgroup = generated_subgroup(t, &setup.support);
    setup.c = (0..t.len())
        .filter(|a| !setup.b.contains(a) && !splits_outside(t, &setup.support, &subgroup, *a))
        .collect();
    Ok(setup)
}

// membership table of the subgroup generated by the classes at `positions`
fn generated_subgroup(t: &AtomTable, positions: &[usize]) -> Vec<bool> {
    let cs = t.classes();
    let group = cs.group();
    let mut member = vec![false; group.order()];
    member[0] = true;
    let mut stack = vec![0usize];
    while let Some(x) = stack.pop() {
        for &p in positions {
            let y = group.add_index(x, cs.group_indices()[p]);
            if !member[y] {
                member[y] = true;
                stack.push(y);
            }
        }
    }
    member
}

// whether the part of `atom` outside `support` has a nonempty proper
// sub-multiset whose sum lies in the subgroup
fn splits_outside(t: &AtomTable, support: &[usize], subgroup: &[bool], atom: usize) -> bool {
    let cs = t.classes();
    let mut outside = t.atom(atom).counts().to_vec();
    for &p in support {
        outside[p] = 0;
    }
    let total: u32 = outside.iter().sum();
    let mut part = vec![0u32; outside.len()];
    fn rec(i: usize, outside: &[u32], part: &mut Vec<u32>, found: &mut dyn FnMut(&[u32], u32) -> bool) -> bool {
        if i == outside.len() {
            let size: u32 = part.iter().sum();
            return found(part, size);
        }
        for k in 0..=outside[i] {
            part[i] = k;
            if rec(i + 1, outside, part, found) {
                part[i] = 0;
                return true;
            }
        }
        part[i] = 0;
        false
    }
    rec(0, &outside, &mut part, &mut |p, size| {
        size > 0 && size < total && subgroup[cs.sum_index(p)]
    })
}

/// Decides whether `atom` splits modulo the generated set by solving
/// `t·content(atom) + M_B u = M_N v + M_B w` over the naturals, where `N`
/// is every atom outside `B`: it splits when some Hilbert-basis solution has
/// `t = 1` and `|v| ≥ 2`.
pub fn splits_by_hilbert_basis(t: &AtomTable, setup: &LocalizationSetup, atom: usize, cap: usize) -> Result<bool> {
    let columns = t.columns();
    let rows = t.classes().len();
    let col = |a: usize, sign: i64| -> Vec<i64> { columns[a].iter().map(|&m| sign * i64::from(m)).collect() };
    let others: Vec<usize> = (0..t.len()).filter(|a| !setup.b.contains(a)).collect();
    let mut system = vec![col(atom, 1)];
    system.extend(setup.b.iter().map(|&a| col(a, 1)));
    system.extend(others.iter().map(|&a| col(a, -1)));
    system.extend(setup.b.iter().map(|&a| col(a, -1)));
    let basis = hilbert_basis(&LinearSystem::new(rows, system)?, cap)?;
    let nb = setup.b.len();
    Ok(basis.iter().any(|z| {
        let v: u32 = z[1 + nb..1 + nb + others.len()].iter().sum();
        z[0] == 1 && v >= 2
    }))
}

/// Nontrivial relations among `C`-atoms modulo units: the projections of the
/// Hilbert basis of `M_C x + M_B u = M_C y + M_B v` onto `(x, y)`, keeping
/// the pairs that are irredundant in the localization.
pub fn localized_relations(t: &AtomTable, setup: &LocalizationSetup, cap: usize) -> Result<Vec<Relation>> {
    if setup.c.is_empty() {
        return Ok(Vec::new());
    }
    let columns = t.columns();
    let rows = t.classes().len();
    let col = |a: usize, sign: i64| -> Vec<i64> { columns[a].iter().map(|&m| sign * i64::from(m)).collect() };
    let (nc, nb) = (setup.c.len(), setup.b.len());
    let mut system: Vec<Vec<i64>> = setup.c.iter().map(|&a| col(a, 1)).collect();
    system.extend(setup.b.iter().map(|&a| col(a, 1)));
    system.extend(setup.c.iter().map(|&a| col(a, -1)));
    system.extend(setup.b.iter().map(|&a| col(a, -1)));
    let basis = hilbert_basis(&LinearSystem::new(rows, system)?, cap)?;
    let lift = |part: &[u32]| {
        let mut counts = vec![0u32; t.len()];
        for (&a, &k) in setup.c.iter().zip(part) {
            counts[a] = k;
        }
        FactorizationVector::new(counts)
    };
    let outside = setup.outside_rows(t);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for z in &basis {
        let (x, y) = (&z[..nc], &z[nc + nb..2 * nc + nb]);
        if x == y {
            continue;
        }
        let rel = Relation::new(lift(x), lift(y));
        if seen.insert(rel.clone()) && irredundant_modulo_units(t, &outside, rel.lhs(), rel.rhs()) {
            out.push(rel.mark_irredundant(true));
        }
    }
    sort_relations(&mut out);
    Ok(out)
}

// two products of C-atoms are associated in the localization iff their
// contents agree outside the generators' classes
fn irredundant_modulo_units(t: &AtomTable, outside: &[usize], lhs: &FactorizationVector, rhs: &FactorizationVector) -> bool {
    let key = |f: &FactorizationVector| -> Vec<u32> {
        let c = t.content(f);
        outside.iter().map(|&p| c.counts()[p]).collect()
    };
    let mut left: BTreeMap<Vec<u32>, Vec<FactorizationVector>> = BTreeMap::new();
    for x in sub_vectors(lhs) {
        if !x.is_zero() {
            left.entry(key(&x)).or_default().push(x);
        }
    }
    for y in sub_vectors(rhs) {
        if y.is_zero() {
            continue;
        }
        if let Some(xs) = left.get(&key(&y)) {
            if xs.iter().any(|x| !(x == lhs && &y == rhs)) {
                return false;
            }
        }
    }
    true
}

fn sub_vectors(f: &FactorizationVector) -> Vec<FactorizationVector> {
    let mut out = vec![Vec::new()];
    for &c in f.counts() {
        out = out
            .into_iter()
            .flat_map(|p: Vec<u32>| {
                (0..=c).map(move |k| {
                    let mut q = p.clone();
                    q.push(k);
                    q
                })
            })
            .collect();
    }
    out.into_iter().map(FactorizationVector::new).collect()
}

/// Lattice of relations among `C`-atoms modulo units.
pub fn localized_lattice(t: &AtomTable, setup: &LocalizationSetup) -> KernelLattice {
    KernelLattice::on_rows(t, &setup.c, &setup.outside_rows(t))
}

/// `g·a_1⋯a_n = f_1⋯f_{n+1}` with every `a_i ∈ B` and every `f_j ∈ B ∪ C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InsertionWitness {
    pub atom: usize,
    pub units: FactorizationVector,
    pub factors: FactorizationVector,
}

impl InsertionWitness {
    /// Recomputes both contents and the factor count.
    pub fn verify(&self, t: &AtomTable, setup: &LocalizationSetup) -> bool {
        let left = t.content(&self.units.sum(&FactorizationVector::unit(t.len(), self.atom)));
        let right = t.content(&self.factors);
        let units_in_b = self.units.support().all(|a| setup.b.contains(&a));
        let factors_in_bc = self.factors.support().all(|a| setup.b.contains(&a) || setup.c.contains(&a));
        left == right && units_in_b && factors_in_bc && self.factors.length() == self.units.length() + 1
    }

    pub fn render(&self, t: &AtomTable) -> String {
        let left = self.units.sum(&FactorizationVector::unit(t.len(), self.atom));
        format!("{} = {}", t.render_factorization(&left), t.render_factorization(&self.factors))
    }
}

/// Outcome of the bounded search for an insertion witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InsertionSearch {
    Found(InsertionWitness),
    /// No witness with content length up to the bound.
    Exhausted { bound: usize },
}

/// Bounded search for a balanced equality that absorbs the atom `g ∉ B ∪ C`
/// into `B ∪ C` with one extra factor. Requires a half-factorial
/// localization.
pub fn claim_star_witness(t: &AtomTable, setup: &LocalizationSetup, g: usize, bound: usize) -> Result<InsertionSearch> {
    if g >= t.len() {
        return Err(Error::InvalidParameter(format!("atom index {g} out of range")));
    }
    if setup.b.contains(&g) || setup.c.contains(&g) {
        return Err(Error::Precondition(format!("{} lies in B ∪ C", t.render(g))));
    }
    if !localized_lattice(t, setup).preserves_length() {
        return Err(Error::Precondition("the localization is not half-factorial".into()));
    }
    let columns = t.columns();
    let allowed: Vec<usize> = (0..t.len()).filter(|a| setup.b.contains(a) || setup.c.contains(a)).collect();
    let factorizer = Factorizer::new(t, Some(&allowed));
    let base = t.atom(g).total_length();
    for extra in 0..=bound.saturating_sub(base) {
        let mut units = vec![0u32; t.len()];
        let mut content = columns[g].clone();
        let mut found = None;
        insertion_rec(t, setup, &columns, &factorizer, 0, extra, &mut units, &mut content, g, &mut found);
        if let Some(w) = found {
            return Ok(InsertionSearch::Found(w));
        }
    }
    Ok(InsertionSearch::Exhausted { bound })
}

#[allow(clippy::too_many_arguments)]
fn insertion_rec(
    t: &AtomTable,
    setup: &LocalizationSetup,
    columns: &[Vec<u32>],
    factorizer: &Factorizer<'_>,
    i: usize,
    left: usize,
    units: &mut Vec<u32>,
    content: &mut Vec<u32>,
    g: usize,
    found: &mut Option<InsertionWitness>,
) {
    if found.is_some() {
        return;
    }
    if left == 0 {
        let n: u32 = units.iter().sum();
        factorizer.for_each(content, &mut |f| {
            if f.iter().sum::<u32>() == n + 1 {
                *found = Some(InsertionWitness {
                    atom: g,
                    units: FactorizationVector::new(units.clone()),
                    factors: FactorizationVector::new(f.to_vec()),
                });
                return false;
            }
            true
        });
        return;
    }
    for j in i..setup.b.len() {
        let a = setup.b[j];
        let len = t.atom(a).total_length();
        if len > left {
            continue;
        }
        units[a] += 1;
        for (c, &m) in content.iter_mut().zip(&columns[a]) {
            *c += m;
        }
        insertion_rec(t, setup, columns, factorizer, j, left - len, units, content, g, found);
        units[a] -= 1;
        for (c, &m) in content.iter_mut().zip(&columns[a]) {
            *c -= m;
        }
        if found.is_some() {
            return;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NagataVerdict {
    pub localized_hfd: bool,
    pub base_hfd: bool,
    pub theorem_consistent: bool,
}

impl NagataVerdict {
    fn new(localized_hfd: bool, base_hfd: bool) -> Self {
        NagataVerdict { localized_hfd, base_hfd, theorem_consistent: !localized_hfd || base_hfd }
    }
}

/// Half-factoriality of the localization against that of the base, plain
/// and modulo each `r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NagataCheck {
    #[serde(flatten)]
    pub plain: NagataVerdict,
    pub modular: BTreeMap<u32, NagataVerdict>,
}

impl NagataCheck {
    pub fn consistent(&self) -> bool {
        self.plain.theorem_consistent && self.modular.values().all(|v| v.theorem_consistent)
    }
}

pub fn nagata_instance_check(t: &AtomTable, setup: &LocalizationSetup, moduli: &[u32]) -> Result<NagataCheck> {
    check_moduli(moduli)?;
    let all: Vec<usize> = (0..t.len()).collect();
    let base = KernelLattice::new(t, &all);
    let local = localized_lattice(t, setup);
    let plain = NagataVerdict::new(local.preserves_length(), base.preserves_length());
    let modular = moduli
        .iter()
        .map(|&r| {
            let cond = Condition::Modulo(r);
            (r, NagataVerdict::new(local.satisfies(cond), base.satisfies(cond)))
        })
        .collect();
    Ok(NagataCheck { plain, modular })
}

/// Every admissible generator set: for each class set `G1` whose atoms are
/// all good and cover `G1`, the atoms supported on `G1`. Includes the empty
/// set.
pub fn divisor_closed_generator_sets(t: &AtomTable, verdicts: &AtomClassification) -> Vec<Vec<usize>> {
    let n = t.classes().len();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << n) {
        let inside = |p: usize| mask >> p & 1 == 1;
        let atoms: Vec<usize> = (0..t.len()).filter(|&a| t.atom(a).support().all(inside)).collect();
        let covered: u64 = atoms.iter().flat_map(|&a| t.atom(a).support()).fold(0, |m, p| m | 1 << p);
        if covered == mask && atoms.iter().all(|&a| verdicts.is_good(a)) {
            out.push(atoms);
        }
    }
    out.sort();
    out
}
