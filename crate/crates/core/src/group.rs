//! Finite abelian groups given as direct products of cyclic factors.
//!
//! Elements are residue tuples. The presentation is kept exactly as
//! configured: `Z/2 × Z/3` and `Z/6` are different presentations of
//! isomorphic groups and are not identified.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GroupConfig", into = "GroupConfig")]
pub struct FiniteAbelianGroup {
    moduli: Vec<u32>,
    order: usize,
}

#[derive(Serialize, Deserialize)]
struct GroupConfig {
    moduli: Vec<u32>,
}

impl TryFrom<GroupConfig> for FiniteAbelianGroup {
    type Error = Error;

    fn try_from(cfg: GroupConfig) -> Result<Self> {
        Self::new(cfg.moduli)
    }
}

impl From<FiniteAbelianGroup> for GroupConfig {
    fn from(g: FiniteAbelianGroup) -> Self {
        GroupConfig { moduli: g.moduli }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    coords: Vec<u32>,
}

impl GroupElement {
    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    /// Comma-separated residues, e.g. `"1,0"`. Used as a JSON key.
    pub fn key(&self) -> String {
        let parts: Vec<String> = self.coords.iter().map(u32::to_string).collect();
        parts.join(",")
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.len() == 1 {
            write!(f, "{}", self.coords[0])
        } else {
            write!(f, "({})", self.key())
        }
    }
}

impl FiniteAbelianGroup {
    pub fn new(moduli: Vec<u32>) -> Result<Self> {
        if let Some(m) = moduli.iter().find(|&&m| m < 2) {
            return Err(Error::InvalidGroup(format!("modulus {m} is not at least 2")));
        }
        let order = moduli
            .iter()
            .try_fold(1usize, |acc, &m| acc.checked_mul(m as usize))
            .ok_or_else(|| Error::InvalidGroup("group order overflows".into()))?;
        Ok(FiniteAbelianGroup { moduli, order })
    }

    /// `Z/n`, with `n = 1` giving the trivial group.
    pub fn cyclic(n: u32) -> Result<Self> {
        match n {
            0 => Err(Error::InvalidGroup("cyclic group of order 0".into())),
            1 => Self::new(vec![]),
            n => Self::new(vec![n]),
        }
    }

    pub fn moduli(&self) -> &[u32] {
        &self.moduli
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement { coords: vec![0; self.moduli.len()] }
    }

    /// Builds an element, reducing each coordinate modulo its factor.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.moduli.len() {
            return Err(Error::IncompatibleElement(format!(
                "expected {} coordinates, got {}",
                self.moduli.len(),
                coords.len()
            )));
        }
        let coords = coords
            .iter()
            .zip(&self.moduli)
            .map(|(&c, &m)| c.rem_euclid(m as i64) as u32)
            .collect();
        Ok(GroupElement { coords })
    }

    fn check(&self, g: &GroupElement) -> Result<()> {
        if g.coords.len() != self.moduli.len() {
            return Err(Error::IncompatibleElement(format!(
                "element {g} has {} coordinates, group has rank {}",
                g.coords.len(),
                self.moduli.len()
            )));
        }
        if g.coords.iter().zip(&self.moduli).any(|(&c, &m)| c >= m) {
            return Err(Error::IncompatibleElement(format!(
                "element {g} is not reduced for moduli {:?}",
                self.moduli
            )));
        }
        Ok(())
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.check(g).is_ok()
    }

    pub fn add(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        self.check(h)?;
        let coords = g
            .coords
            .iter()
            .zip(&h.coords)
            .zip(&self.moduli)
            .map(|((&a, &b), &m)| (a + b) % m)
            .collect();
        Ok(GroupElement { coords })
    }

    pub fn negate(&self, g: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        let coords = g
            .coords
            .iter()
            .zip(&self.moduli)
            .map(|(&a, &m)| (m - a) % m)
            .collect();
        Ok(GroupElement { coords })
    }

    pub fn scale(&self, g: &GroupElement, k: u64) -> Result<GroupElement> {
        self.check(g)?;
        let coords = g
            .coords
            .iter()
            .zip(&self.moduli)
            .map(|(&a, &m)| ((a as u64 * (k % m as u64)) % m as u64) as u32)
            .collect();
        Ok(GroupElement { coords })
    }

    /// Least `k ≥ 1` with `k·g = 0`.
    pub fn element_order(&self, g: &GroupElement) -> Result<u64> {
        self.check(g)?;
        Ok(g.coords
            .iter()
            .zip(&self.moduli)
            .map(|(&a, &m)| m as u64 / gcd(a as u64, m as u64))
            .fold(1, lcm))
    }

    /// All elements in lexicographic coordinate order.
    pub fn elements(&self) -> Vec<GroupElement> {
        (0..self.order).map(|i| self.element_at(i)).collect()
    }

    /// Position of `g` in [`elements`](Self::elements).
    pub fn index_of(&self, g: &GroupElement) -> Result<usize> {
        self.check(g)?;
        Ok(g.coords
            .iter()
            .zip(&self.moduli)
            .fold(0usize, |acc, (&c, &m)| acc * m as usize + c as usize))
    }

    pub fn element_at(&self, index: usize) -> GroupElement {
        assert!(index < self.order, "element index {index} out of range");
        let mut coords = vec![0; self.moduli.len()];
        let mut rest = index;
        for (slot, &m) in coords.iter_mut().zip(&self.moduli).rev() {
            *slot = (rest % m as usize) as u32;
            rest /= m as usize;
        }
        GroupElement { coords }
    }

    /// Sum of two elements given by index. Hot path for zero-sum searches.
    pub(crate) fn add_index(&self, i: usize, j: usize) -> usize {
        let mut a = i;
        let mut b = j;
        let mut out = 0;
        let mut place = 1;
        for &m in self.moduli.iter().rev() {
            let m = m as usize;
            out += ((a % m + b % m) % m) * place;
            place *= m;
            a /= m;
            b /= m;
        }
        out
    }

    /// Parses `"3"` for rank one and `"1:0"` (or `"1,0"`) for higher rank.
    pub fn parse_element(&self, s: &str) -> Result<GroupElement> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        let coords: Vec<i64> = if s.is_empty() {
            vec![]
        } else {
            s.split([':', ','])
                .map(|p| {
                    p.trim()
                        .parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad residue {p:?} in element {s:?}")))
                })
                .collect::<Result<_>>()?
        };
        self.element(&coords)
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.moduli.is_empty() {
            return write!(f, "trivial");
        }
        let parts: Vec<String> = self.moduli.iter().map(|m| format!("Z/{m}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn make_group_examples() {
        assert_eq!(FiniteAbelianGroup::new(vec![6]).unwrap().order(), 6);
        let trivial = FiniteAbelianGroup::new(vec![]).unwrap();
        assert_eq!(trivial.order(), 1);
        assert_eq!(trivial.elements(), vec![trivial.zero()]);
        assert_eq!(FiniteAbelianGroup::new(vec![2, 2]).unwrap().order(), 4);
    }

    #[test]
    fn make_group_rejects_small_moduli() {
        assert!(matches!(FiniteAbelianGroup::new(vec![1]), Err(Error::InvalidGroup(_))));
        assert!(matches!(FiniteAbelianGroup::new(vec![3, 0]), Err(Error::InvalidGroup(_))));
    }

    #[test]
    fn add_examples() {
        let z6 = FiniteAbelianGroup::new(vec![6]).unwrap();
        let e = |k| z6.element(&[k]).unwrap();
        assert_eq!(z6.add(&e(2), &e(4)).unwrap(), z6.zero());
        assert_eq!(z6.add(&e(3), &e(3)).unwrap(), z6.zero());
        let v4 = FiniteAbelianGroup::new(vec![2, 2]).unwrap();
        let sum = v4
            .add(&v4.element(&[1, 0]).unwrap(), &v4.element(&[0, 1]).unwrap())
            .unwrap();
        assert_eq!(sum, v4.element(&[1, 1]).unwrap());
    }

    #[test]
    fn add_rejects_mismatched_rank() {
        let z6 = FiniteAbelianGroup::new(vec![6]).unwrap();
        let v4 = FiniteAbelianGroup::new(vec![2, 2]).unwrap();
        let err = z6.add(&z6.zero(), &v4.zero()).unwrap_err();
        assert!(matches!(err, Error::IncompatibleElement(_)));
    }

    #[test]
    fn enumerate_examples() {
        let z3 = FiniteAbelianGroup::new(vec![3]).unwrap();
        let keys: Vec<String> = z3.elements().iter().map(GroupElement::key).collect();
        assert_eq!(keys, ["0", "1", "2"]);
        let v4 = FiniteAbelianGroup::new(vec![2, 2]).unwrap();
        let keys: Vec<String> = v4.elements().iter().map(GroupElement::key).collect();
        assert_eq!(keys, ["0,0", "0,1", "1,0", "1,1"]);
    }

    #[test]
    fn display_and_parse() {
        let g = FiniteAbelianGroup::new(vec![2, 4]).unwrap();
        assert_eq!(g.to_string(), "Z/2xZ/4");
        let e = g.parse_element("1:3").unwrap();
        assert_eq!(e.to_string(), "(1,3)");
        assert_eq!(g.parse_element("(1,3)").unwrap(), e);
        assert!(g.parse_element("1").is_err());
    }

    fn group_strategy() -> impl Strategy<Value = FiniteAbelianGroup> {
        prop::collection::vec(2u32..7, 0..3).prop_map(|m| FiniteAbelianGroup::new(m).unwrap())
    }

    proptest! {
        #[test]
        fn element_axioms(g in group_strategy(), a in any::<u16>(), b in any::<u16>(), c in any::<u16>()) {
            let n = g.order();
            let (x, y, z) = (
                g.element_at(a as usize % n),
                g.element_at(b as usize % n),
                g.element_at(c as usize % n),
            );
            prop_assert_eq!(g.add(&x, &g.negate(&x).unwrap()).unwrap(), g.zero());
            prop_assert_eq!(g.add(&x, &y).unwrap(), g.add(&y, &x).unwrap());
            prop_assert_eq!(
                g.add(&g.add(&x, &y).unwrap(), &z).unwrap(),
                g.add(&x, &g.add(&y, &z).unwrap()).unwrap()
            );
            prop_assert_eq!(g.add(&x, &g.zero()).unwrap(), x.clone());
            let ord = g.element_order(&x).unwrap();
            prop_assert_eq!(n as u64 % ord, 0);
            prop_assert_eq!(g.scale(&x, ord).unwrap(), g.zero());
            for k in 1..ord {
                prop_assert_ne!(g.scale(&x, k).unwrap(), g.zero());
            }
            let ix = g.index_of(&x).unwrap();
            let iy = g.index_of(&y).unwrap();
            prop_assert_eq!(g.element_at(g.add_index(ix, iy)), g.add(&x, &y).unwrap());
        }

        #[test]
        fn enumeration_is_complete_and_distinct(g in group_strategy()) {
            let elems = g.elements();
            prop_assert_eq!(elems.len(), g.order());
            let mut sorted = elems.clone();
            sorted.sort();
            sorted.dedup();
            prop_assert_eq!(&sorted, &elems);
        }
    }
}
