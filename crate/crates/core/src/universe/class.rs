use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

/// A class of modules over a universe, represented by its indecomposable
/// members (indices into the universe). The class itself is the additive
/// closure of these members; the zero module belongs to every class.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjectClass(BTreeSet<usize>);

impl ObjectClass {
    pub fn new(members: impl IntoIterator<Item = usize>) -> ObjectClass {
        ObjectClass(members.into_iter().collect())
    }

    pub fn empty() -> ObjectClass {
        ObjectClass::default()
    }

    pub fn all(size: usize) -> ObjectClass {
        ObjectClass((0..size).collect())
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(&i)
    }

    pub fn insert(&mut self, i: usize) {
        self.0.insert(i);
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn members(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn intersect(&self, other: &ObjectClass) -> ObjectClass {
        ObjectClass(self.0.intersection(&other.0).copied().collect())
    }

    pub fn union(&self, other: &ObjectClass) -> ObjectClass {
        ObjectClass(self.0.union(&other.0).copied().collect())
    }

    pub fn minus(&self, other: &ObjectClass) -> ObjectClass {
        ObjectClass(self.0.difference(&other.0).copied().collect())
    }

    pub fn is_subset(&self, other: &ObjectClass) -> bool {
        self.0.is_subset(&other.0)
    }
}

impl FromIterator<usize> for ObjectClass {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        ObjectClass::new(iter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_operations() {
        let a = ObjectClass::new([0, 1, 2]);
        let b = ObjectClass::new([1, 3]);
        assert_eq!(a.intersect(&b), ObjectClass::new([1]));
        assert_eq!(a.union(&b).len(), 4);
        assert_eq!(a.minus(&b), ObjectClass::new([0, 2]));
        assert!(ObjectClass::new([1]).is_subset(&a));
        assert!(ObjectClass::empty().is_subset(&b));
        assert_eq!(serde_json::to_string(&a).unwrap(), "[0,1,2]");
    }
}
