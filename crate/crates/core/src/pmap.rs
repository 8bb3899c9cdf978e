//! Injective partial self-maps of a finite set.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;

/// An injective partial map `K ⇢ K` with its inverse kept alongside.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialMap<K: Ord + Clone> {
    fwd: BTreeMap<K, K>,
    inv: BTreeMap<K, K>,
}

impl<K: Ord + Clone> Default for PartialMap<K> {
    fn default() -> Self {
        PartialMap { fwd: BTreeMap::new(), inv: BTreeMap::new() }
    }
}

/// The pair that broke injectivity or functionality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotInjective<K>(pub K, pub K);

impl<K: Ord + Clone + Debug> PartialMap<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (K, K)>>(pairs: I) -> Result<Self, NotInjective<K>> {
        let mut m = Self::new();
        for (k, v) in pairs {
            m.insert(k, v)?;
        }
        Ok(m)
    }

    pub fn insert(&mut self, k: K, v: K) -> Result<(), NotInjective<K>> {
        if let Some(prev) = self.inv.get(&v) {
            if *prev != k {
                return Err(NotInjective(prev.clone(), k));
            }
        }
        if self.fwd.contains_key(&k) {
            return Err(NotInjective(k.clone(), k));
        }
        self.fwd.insert(k.clone(), v.clone());
        self.inv.insert(v, k);
        Ok(())
    }

    pub fn get(&self, k: &K) -> Option<&K> {
        self.fwd.get(k)
    }

    pub fn preimage(&self, v: &K) -> Option<&K> {
        self.inv.get(v)
    }

    pub fn in_domain(&self, k: &K) -> bool {
        self.fwd.contains_key(k)
    }

    pub fn in_image(&self, v: &K) -> bool {
        self.inv.contains_key(v)
    }

    pub fn domain(&self) -> BTreeSet<K> {
        self.fwd.keys().cloned().collect()
    }

    pub fn image(&self) -> BTreeSet<K> {
        self.inv.keys().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.fwd.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fwd.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &K)> {
        self.fwd.iter()
    }

    pub fn inverse(&self) -> PartialMap<K> {
        PartialMap { fwd: self.inv.clone(), inv: self.fwd.clone() }
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &PartialMap<K>) -> PartialMap<K> {
        let mut out = PartialMap::new();
        for (k, mid) in first.iter() {
            if let Some(v) = self.get(mid) {
                out.insert(k.clone(), v.clone()).expect("composition of injective maps is injective");
            }
        }
        out
    }

    pub fn restrict(&self, keep: impl Fn(&K) -> bool) -> PartialMap<K> {
        let mut out = PartialMap::new();
        for (k, v) in self.iter().filter(|(k, _)| keep(k)) {
            out.insert(k.clone(), v.clone()).expect("restriction stays injective");
        }
        out
    }

    /// `f^n(x)` if defined.
    pub fn iterate(&self, x: &K, n: usize) -> Option<K> {
        let mut cur = x.clone();
        for _ in 0..n {
            cur = self.get(&cur)?.clone();
        }
        Some(cur)
    }

    /// Maximal `n` such that `f^n(x)` is defined, capped at `cap` (cycles).
    pub fn depth(&self, x: &K, cap: usize) -> usize {
        let mut cur = x.clone();
        let mut n = 0;
        while n < cap {
            match self.get(&cur) {
                Some(next) => {
                    cur = next.clone();
                    n += 1;
                }
                None => break,
            }
        }
        n
    }

    /// Renames every key and value.
    pub fn map_keys<L: Ord + Clone + Debug>(&self, f: impl Fn(&K) -> L) -> PartialMap<L> {
        PartialMap::from_pairs(self.iter().map(|(k, v)| (f(k), f(v)))).expect("renaming must be injective")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_injective() {
        assert_eq!(PartialMap::from_pairs([(1, 3), (2, 3)]), Err(NotInjective(1, 2)));
        assert!(PartialMap::from_pairs([(1, 3), (1, 4)]).is_err());
    }

    #[test]
    fn compose_and_inverse() {
        let f = PartialMap::from_pairs([(1, 2), (2, 3)]).unwrap();
        let g = PartialMap::from_pairs([(3, 10), (2, 20)]).unwrap();
        let gf = g.after(&f);
        assert_eq!(gf.get(&1), Some(&20));
        assert_eq!(gf.get(&2), Some(&10));
        assert_eq!(f.inverse().get(&3), Some(&2));
        assert_eq!(f.iterate(&1, 2), Some(3));
        assert_eq!(f.iterate(&1, 3), None);
        assert_eq!(f.depth(&1, 10), 2);
    }
}
