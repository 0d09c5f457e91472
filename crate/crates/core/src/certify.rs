//! Exact classification without the complete relation list.
//!
//! Irredundant relations never mix atoms from different components of the
//! atom-support hypergraph: restricting a relation to one component's classes
//! gives a sub-relation. Each component is therefore classified on its own.
//! When every integer kernel vector of a component's content matrix has zero
//! coordinate sum, all relations there are balanced and its atoms are good.
//! Otherwise atoms are resolved by a bounded search for explicit irredundant
//! witnesses, and whatever the search leaves open is decided from the
//! complete Hilbert basis of that component.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};

use crate::blockmonoid::{AtomTable, FactorizationVector, Factorizer};
use crate::lattice::integer_kernel_basis;
use crate::relation::{
    check_moduli, is_irredundant_by_search, relations_among, AtomClassification, Relation, Verdicts,
};
use crate::Result;

/// A block of classes and the atoms supported on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub classes: Vec<usize>,
    pub atoms: Vec<usize>,
}

/// Connected components of the hypergraph on class positions whose edges are
/// atom supports, ordered by their first atom.
pub fn components(t: &AtomTable) -> Vec<Component> {
    let n = t.classes().len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for atom in t.atoms() {
        let mut support = atom.support();
        if let Some(first) = support.next() {
            for p in support {
                let (a, b) = (find(&mut parent, first), find(&mut parent, p));
                parent[a] = b;
            }
        }
    }
    let mut by_root: BTreeMap<usize, usize> = BTreeMap::new();
    let mut out: Vec<Component> = Vec::new();
    for (i, atom) in t.atoms().iter().enumerate() {
        let p = atom.support().next().expect("atoms are nonempty");
        let root = find(&mut parent, p);
        let id = *by_root.entry(root).or_insert_with(|| {
            out.push(Component { classes: Vec::new(), atoms: Vec::new() });
            out.len() - 1
        });
        out[id].atoms.push(i);
    }
    for c in &mut out {
        let root = find(&mut parent, t.atom(c.atoms[0]).support().next().unwrap());
        c.classes = (0..n).filter(|&p| find(&mut parent, p) == root).collect();
    }
    out
}

/// The integer kernel of the content matrix restricted to some atoms.
#[derive(Debug, Clone)]
pub struct KernelLattice {
    basis: Vec<Vec<i64>>,
}

impl KernelLattice {
    pub fn new(t: &AtomTable, atoms: &[usize]) -> Self {
        let rows: Vec<usize> = (0..t.classes().len()).collect();
        Self::on_rows(t, atoms, &rows)
    }

    /// Kernel of the submatrix with the given class rows and atom columns.
    pub fn on_rows(t: &AtomTable, atoms: &[usize], rows: &[usize]) -> Self {
        let columns = t.columns();
        let cols: Vec<Vec<i64>> = atoms
            .iter()
            .map(|&a| rows.iter().map(|&p| i64::from(columns[a][p])).collect())
            .collect();
        KernelLattice { basis: integer_kernel_basis(rows.len(), &cols) }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    /// No nontrivial relation at all.
    pub fn is_trivial(&self) -> bool {
        self.basis.is_empty()
    }

    /// Every relation is balanced.
    pub fn preserves_length(&self) -> bool {
        self.basis.iter().all(|b| b.iter().sum::<i64>() == 0)
    }

    /// Every relation has lengths congruent modulo `r`.
    pub fn preserves_length_mod(&self, r: u32) -> bool {
        self.basis.iter().all(|b| b.iter().sum::<i64>().rem_euclid(i64::from(r)) == 0)
    }

    pub fn satisfies(&self, cond: Condition) -> bool {
        match cond {
            Condition::Balanced => self.preserves_length(),
            Condition::Modulo(r) => self.preserves_length_mod(r),
        }
    }
}

/// The length condition an atom's relations are tested against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    Balanced,
    Modulo(u32),
}

impl Condition {
    pub fn violated_by(self, n: usize, m: usize) -> bool {
        match self {
            Condition::Balanced => n != m,
            Condition::Modulo(r) => !n.abs_diff(m).is_multiple_of(r as usize),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CertifyOptions {
    /// Largest content length tried by the witness search; `None` means twice
    /// the longest atom of the component.
    pub witness_bound: Option<usize>,
    /// Resource cap for the Hilbert-basis fallback.
    pub cap: usize,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { witness_bound: None, cap: crate::DEFAULT_CAP }
    }
}

/// Exact good/bad classification, plain and for each modulus in `moduli`.
pub fn classify_exact(t: &AtomTable, moduli: &[u32], opts: &CertifyOptions) -> Result<AtomClassification> {
    check_moduli(moduli)?;
    let comps = components(t);
    let lattices: Vec<KernelLattice> = comps.iter().map(|c| KernelLattice::new(t, &c.atoms)).collect();
    let mut complete: HashMap<usize, Vec<Relation>> = HashMap::new();
    let plain = verdicts_for(t, &comps, &lattices, Condition::Balanced, opts, &mut complete)?;
    let mut modular = BTreeMap::new();
    for &r in moduli {
        let v = verdicts_for(t, &comps, &lattices, Condition::Modulo(r), opts, &mut complete)?;
        modular.insert(r, v);
    }
    Ok(AtomClassification::from_parts(plain, modular))
}

fn verdicts_for(
    t: &AtomTable,
    comps: &[Component],
    lattices: &[KernelLattice],
    cond: Condition,
    opts: &CertifyOptions,
    complete: &mut HashMap<usize, Vec<Relation>>,
) -> Result<Verdicts> {
    let mut out = Verdicts::all_good(t.len());
    for (id, (comp, lattice)) in comps.iter().zip(lattices).enumerate() {
        if lattice.satisfies(cond) {
            continue;
        }
        let longest = comp.atoms.iter().map(|&a| t.atom(a).total_length()).max().unwrap_or(0);
        let bound = opts.witness_bound.unwrap_or(2 * longest);
        for &u in &comp.atoms {
            if out.witness(u).is_some() {
                continue;
            }
            if let Some(w) = find_witness(t, &comp.atoms, u, bound, cond) {
                for a in w.atoms() {
                    out.mark_bad(a, &w);
                }
            }
        }
        if comp.atoms.iter().all(|&a| out.witness(a).is_some()) {
            continue;
        }
        if let Entry::Vacant(e) = complete.entry(id) {
            e.insert(relations_among(t, &comp.atoms, opts.cap)?);
        }
        for rel in &complete[&id] {
            let (n, m) = rel.lengths();
            if cond.violated_by(n, m) {
                for a in rel.atoms() {
                    out.mark_bad(a, rel);
                }
            }
        }
    }
    Ok(out)
}

/// Searches for an irredundant relation containing `atom`, built from `pool`,
/// whose lengths violate `cond`, trying common contents of total length up
/// to `bound` in increasing order.
pub fn find_witness(t: &AtomTable, pool: &[usize], atom: usize, bound: usize, cond: Condition) -> Option<Relation> {
    let columns = t.columns();
    let first = t.atom(atom).total_length();
    for total in first..=bound {
        let mut counts = vec![0u32; t.len()];
        counts[atom] = 1;
        let mut content = columns[atom].clone();
        let mut search = WitnessSearch { t, pool, columns: &columns, cond, found: None };
        search.extend(0, total - first, &mut counts, &mut content);
        if search.found.is_some() {
            return search.found;
        }
    }
    None
}

struct WitnessSearch<'a> {
    t: &'a AtomTable,
    pool: &'a [usize],
    columns: &'a [Vec<u32>],
    cond: Condition,
    found: Option<Relation>,
}

impl WitnessSearch<'_> {
    // adds atoms from pool[i..] with total length exactly `left`
    fn extend(&mut self, i: usize, left: usize, counts: &mut Vec<u32>, content: &mut Vec<u32>) {
        if self.found.is_some() {
            return;
        }
        if left == 0 {
            self.try_side(counts, content);
            return;
        }
        for j in i..self.pool.len() {
            let a = self.pool[j];
            let len = self.t.atom(a).total_length();
            if len > left {
                continue;
            }
            counts[a] += 1;
            for (c, &m) in content.iter_mut().zip(&self.columns[a]) {
                *c += m;
            }
            self.extend(j, left - len, counts, content);
            counts[a] -= 1;
            for (c, &m) in content.iter_mut().zip(&self.columns[a]) {
                *c -= m;
            }
            if self.found.is_some() {
                return;
            }
        }
    }

    fn try_side(&mut self, counts: &[u32], content: &[u32]) {
        let allowed: Vec<usize> = self.pool.iter().copied().filter(|&a| counts[a] == 0).collect();
        let lhs = FactorizationVector::new(counts.to_vec());
        let n = lhs.length();
        let (t, cond) = (self.t, self.cond);
        let mut found = None;
        Factorizer::new(t, Some(&allowed)).for_each(content, &mut |y| {
            let m: usize = y.iter().map(|&k| k as usize).sum();
            if !cond.violated_by(n, m) {
                return true;
            }
            let rhs = FactorizationVector::new(y.to_vec());
            if is_irredundant_by_search(t, &lhs, &rhs) {
                found = Some(Relation::new(lhs.clone(), rhs).mark_irredundant(true));
                return false;
            }
            true
        });
        self.found = found;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blockmonoid::{enumerate_atoms, ClassSubset};
    use crate::group::FiniteAbelianGroup;
    use crate::relation::{classify_atoms_mod, Instance};
    use crate::DEFAULT_CAP;

    fn table(n: u32, classes: &[i64]) -> AtomTable {
        let g = FiniteAbelianGroup::cyclic(n).unwrap();
        enumerate_atoms(&ClassSubset::from_residues(&g, classes).unwrap())
    }

    #[test]
    fn components_split_separated_classes() {
        let t = table(6, &[2, 3, 4]);
        let comps = components(&t);
        assert_eq!(comps.len(), 2);
        let three = t.classes().parse_sequence("(3,3)").unwrap();
        let lone = comps.iter().find(|c| c.atoms.len() == 1).unwrap();
        assert_eq!(lone.atoms, [t.position(&three).unwrap()]);
        assert_eq!(lone.classes, [1]);
    }

    #[test]
    fn lattice_certificates() {
        let t = table(4, &[1, 2]);
        let all: Vec<usize> = (0..t.len()).collect();
        let k = KernelLattice::new(&t, &all);
        assert_eq!(k.rank(), 1);
        assert!(k.preserves_length());

        let t = table(4, &[1, 3]);
        let all: Vec<usize> = (0..t.len()).collect();
        let k = KernelLattice::new(&t, &all);
        assert!(!k.preserves_length());
        assert!(k.preserves_length_mod(2));
        assert!(!k.preserves_length_mod(3));

        let t = table(2, &[0, 1]);
        assert!(KernelLattice::new(&t, &[0, 1]).is_trivial());
    }

    #[test]
    fn witness_for_grams_atoms() {
        let t = table(6, &[2, 3, 4]);
        let pool: Vec<usize> = (0..t.len()).collect();
        let a = t.position(&t.classes().parse_sequence("(2,4)").unwrap()).unwrap();
        let w = find_witness(&t, &pool, a, 12, Condition::Balanced).unwrap();
        assert_eq!(w.render(&t), "(4,4,4)(2,2,2) = (2,4)^3");
        assert!(find_witness(&t, &pool, a, 5, Condition::Balanced).is_none());
        assert!(find_witness(&t, &pool, a, 12, Condition::Modulo(2)).is_some());
    }

    #[test]
    fn agrees_with_complete_relations_on_small_instances() {
        for n in 1..=4u32 {
            let g = FiniteAbelianGroup::cyclic(n).unwrap();
            for mask in 0u32..(1 << n) {
                let idx: Vec<usize> = (0..n as usize).filter(|&i| mask >> i & 1 == 1).collect();
                let cs = ClassSubset::from_indices(&g, &idx).unwrap();
                let inst = Instance::build(cs, DEFAULT_CAP).unwrap();
                let moduli = [2, 3, 4];
                let full = classify_atoms_mod(&inst.atoms, &inst.relations, &moduli).unwrap();
                let exact = classify_exact(&inst.atoms, &moduli, &CertifyOptions::default()).unwrap();
                assert_eq!(full.verdicts(), exact.verdicts(), "Z/{n} {idx:?}");
                for r in moduli {
                    assert_eq!(full.modulo(r).unwrap().verdicts(), exact.modulo(r).unwrap().verdicts());
                }
            }
        }
    }

    #[test]
    fn fallback_resolves_without_witness_search() {
        let t = table(6, &[2, 3, 4]);
        let opts = CertifyOptions { witness_bound: Some(0), cap: DEFAULT_CAP };
        let c = classify_exact(&t, &[], &opts).unwrap();
        assert_eq!(c.good_atoms().len(), 1);
        assert_eq!(c.bad_atoms().len(), 3);
    }
}
