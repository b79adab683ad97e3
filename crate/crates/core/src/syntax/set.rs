use crate::bitset::BitSet;

use super::FormulaId;

/// A set of interned formulas. Iteration is in ascending id order, which is
/// also creation order.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormulaSet {
    bits: BitSet,
}

impl FormulaSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(&self, f: FormulaId) -> bool {
        self.bits.contains(f.index())
    }

    pub fn insert(&mut self, f: FormulaId) -> bool {
        self.bits.insert(f.index())
    }

    pub fn remove(&mut self, f: FormulaId) -> bool {
        self.bits.remove(f.index())
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = FormulaId> + '_ {
        self.bits.iter().map(|i| FormulaId(i as u32))
    }

    pub fn union_with(&mut self, other: &FormulaSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn difference_with(&mut self, other: &FormulaSet) {
        self.bits.difference_with(&other.bits);
    }

    pub fn is_subset(&self, other: &FormulaSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn intersects(&self, other: &FormulaSet) -> bool {
        self.bits.intersects(&other.bits)
    }

    pub fn with(&self, f: FormulaId) -> FormulaSet {
        let mut s = self.clone();
        s.insert(f);
        s
    }

    pub fn union(&self, other: &FormulaSet) -> FormulaSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }
}

impl FromIterator<FormulaId> for FormulaSet {
    fn from_iter<T: IntoIterator<Item = FormulaId>>(iter: T) -> Self {
        let mut s = FormulaSet::new();
        for f in iter {
            s.insert(f);
        }
        s
    }
}

impl Extend<FormulaId> for FormulaSet {
    fn extend<T: IntoIterator<Item = FormulaId>>(&mut self, iter: T) {
        for f in iter {
            self.insert(f);
        }
    }
}

impl std::fmt::Debug for FormulaSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter().map(|x| x.0)).finish()
    }
}
