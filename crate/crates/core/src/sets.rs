//! Deduplicated, canonically ordered collections and multiplicity tables.

use std::collections::HashMap;
use std::hash::BuildHasherDefault;

use rustc_hash::FxHasher;
use serde::{Serialize, Serializer};

use crate::geom::Point;
use crate::scalar::Scalar;

pub type FxMap<K, V> = HashMap<K, V, BuildHasherDefault<FxHasher>>;
pub type FxSet<K> = std::collections::HashSet<K, BuildHasherDefault<FxHasher>>;

macro_rules! sorted_set {
    ($(#[$meta:meta])* $name:ident, $elem:ty) => {
        $(#[$meta])*
        #[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
        pub struct $name(Vec<$elem>);

        impl $name {
            pub fn new() -> Self {
                $name(Vec::new())
            }

            /// Sorts and deduplicates.
            pub fn from_vec(mut v: Vec<$elem>) -> Self {
                v.sort_unstable();
                v.dedup();
                $name(v)
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn as_slice(&self) -> &[$elem] {
                &self.0
            }

            pub fn iter(&self) -> std::slice::Iter<'_, $elem> {
                self.0.iter()
            }

            pub fn contains(&self, x: &$elem) -> bool {
                self.0.binary_search(x).is_ok()
            }

            pub fn into_vec(self) -> Vec<$elem> {
                self.0
            }
        }

        impl FromIterator<$elem> for $name {
            fn from_iter<I: IntoIterator<Item = $elem>>(it: I) -> Self {
                Self::from_vec(it.into_iter().collect())
            }
        }

        impl<'a> IntoIterator for &'a $name {
            type Item = &'a $elem;
            type IntoIter = std::slice::Iter<'a, $elem>;
            fn into_iter(self) -> Self::IntoIter {
                self.0.iter()
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                self.0.serialize(s)
            }
        }
    };
}

sorted_set!(
    /// Finite set of scalars in ascending order.
    ScalarSet,
    Scalar
);
sorted_set!(
    /// Finite set of points in lexicographic `(x, y)` order.
    PointSet,
    Point
);

impl ScalarSet {
    pub fn from_ints(v: impl IntoIterator<Item = i64>) -> Self {
        v.into_iter().map(Scalar::from_int).collect()
    }

    pub fn min(&self) -> Option<&Scalar> {
        self.0.first()
    }

    pub fn max(&self) -> Option<&Scalar> {
        self.0.last()
    }

    /// All elements as machine integers, when every element is one.
    pub fn as_small_ints(&self) -> Option<Vec<i64>> {
        self.0.iter().map(Scalar::as_small_int).collect()
    }
}

impl PointSet {
    pub fn from_int_pairs(v: impl IntoIterator<Item = (i64, i64)>) -> Self {
        v.into_iter().map(|(x, y)| Point::new(x, y)).collect()
    }
}

/// Value -> positive multiplicity.
#[derive(Clone, Debug, Default)]
pub struct CountTable {
    counts: FxMap<Scalar, u64>,
}

impl CountTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, key: Scalar, by: u64) {
        if by > 0 {
            *self.counts.entry(key).or_insert(0) += by;
        }
    }

    pub fn get(&self, key: &Scalar) -> u64 {
        self.counts.get(key).copied().unwrap_or(0)
    }

    /// Number of distinct keys.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn mass(&self) -> u64 {
        self.counts.values().sum()
    }

    /// `sum m(t)^2`.
    pub fn second_moment(&self) -> u128 {
        self.counts.values().map(|&m| m as u128 * m as u128).sum()
    }

    pub fn max_multiplicity(&self) -> u64 {
        self.counts.values().copied().max().unwrap_or(0)
    }

    pub fn merge(&mut self, other: CountTable) {
        if self.counts.len() < other.counts.len() {
            let small = std::mem::replace(&mut self.counts, other.counts);
            for (k, v) in small {
                *self.counts.entry(k).or_insert(0) += v;
            }
        } else {
            for (k, v) in other.counts {
                *self.counts.entry(k).or_insert(0) += v;
            }
        }
    }

    pub fn keys(&self) -> impl Iterator<Item = &Scalar> {
        self.counts.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Scalar, u64)> {
        self.counts.iter().map(|(k, &v)| (k, v))
    }

    /// Entries in ascending key order.
    pub fn sorted(&self) -> Vec<(Scalar, u64)> {
        let mut v: Vec<_> = self.counts.iter().map(|(k, &c)| (k.clone(), c)).collect();
        v.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        v
    }

    pub fn key_set(&self) -> ScalarSet {
        ScalarSet::from_vec(self.counts.keys().cloned().collect())
    }
}

impl PartialEq for CountTable {
    fn eq(&self, other: &Self) -> bool {
        self.counts == other.counts
    }
}

impl Eq for CountTable {}

impl FromIterator<(Scalar, u64)> for CountTable {
    fn from_iter<I: IntoIterator<Item = (Scalar, u64)>>(it: I) -> Self {
        let mut t = CountTable::new();
        for (k, v) in it {
            t.add(k, v);
        }
        t
    }
}

impl Serialize for CountTable {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let rows = self.sorted();
        let mut seq = s.serialize_seq(Some(rows.len()))?;
        for (k, v) in rows {
            seq.serialize_element(&(k, v))?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sets_are_sorted_and_deduplicated() {
        let s = ScalarSet::from_ints([3, 1, 2, 3, 1]);
        assert_eq!(s.as_slice(), ScalarSet::from_ints([1, 2, 3]).as_slice());
        assert!(s.contains(&Scalar::from(2)));
        assert!(!s.contains(&Scalar::from(4)));
        let p = PointSet::from_int_pairs([(1, 0), (0, 1), (1, 0)]);
        assert_eq!(p.len(), 2);
        assert_eq!(p.as_slice()[0], Point::new(0, 1));
    }

    #[test]
    fn table_moments() {
        let t: CountTable =
            [(Scalar::from(1), 3), (Scalar::from(-1), 3), (Scalar::from(5), 0)].into_iter().collect();
        assert_eq!(t.len(), 2);
        assert_eq!(t.mass(), 6);
        assert_eq!(t.second_moment(), 18);
        assert_eq!(t.max_multiplicity(), 3);
        let mut u = t.clone();
        u.merge(t.clone());
        assert_eq!(u.get(&Scalar::from(1)), 6);
    }
}
