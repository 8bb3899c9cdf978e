//! Normal forms for the bound path algebra.
//!
//! Paths are words of arrow ids in traversal order. The relations are turned
//! into rewriting rules (zero rules, and the all-α side of each commutativity
//! relation rewriting to the other side), then completed until every critical
//! pair resolves. Irreducible words form a basis of the algebra.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::quiver::{Arrow, BoundQuiver, Path, Relation, Vertex};
use crate::system::DefiningSystem;

pub type Word = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Word,
    /// `None` means the left side is zero.
    pub rhs: Option<Word>,
}

/// A normal-form path from a fixed source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalPath {
    pub word: Word,
    pub target: usize,
}

#[derive(Clone, Debug)]
pub struct Algebra {
    quiver: BoundQuiver,
    src: Vec<usize>,
    tgt: Vec<usize>,
    alpha: Vec<bool>,
    rules: Vec<Rule>,
    lhs: HashMap<Word, usize>,
    max_lhs: usize,
    initial_rules: usize,
    /// Normal forms grouped by source vertex id.
    from: Vec<Vec<NormalPath>>,
    index: Vec<HashMap<Word, usize>>,
}

impl Algebra {
    pub fn new(ds: &DefiningSystem) -> Result<Algebra> {
        Algebra::from_quiver(BoundQuiver::build(ds))
    }

    pub fn from_quiver(quiver: BoundQuiver) -> Result<Algebra> {
        let arrows = quiver.arrows();
        let src = arrows.iter().map(|a| quiver.vertex_id(a.source).expect("vertex")).collect();
        let tgt = arrows.iter().map(|a| quiver.vertex_id(a.target).expect("vertex")).collect();
        let alpha = arrows.iter().map(|a| a.arrow.is_first_kind()).collect();
        let mut alg = Algebra {
            quiver,
            src,
            tgt,
            alpha,
            rules: Vec::new(),
            lhs: HashMap::new(),
            max_lhs: 0,
            initial_rules: 0,
            from: Vec::new(),
            index: Vec::new(),
        };
        let relations: Vec<Relation> = alg.quiver.relations().to_vec();
        for rel in &relations {
            let rule = match rel {
                Relation::ZeroPath(_, p) => Rule { lhs: alg.word(p), rhs: None },
                Relation::Commutativity(short, chain) => {
                    let (a, b) = (alg.word(chain), alg.word(short));
                    match alg.cmp_words(&a, &b) {
                        Ordering::Greater => Rule { lhs: a, rhs: Some(b) },
                        Ordering::Less => Rule { lhs: b, rhs: Some(a) },
                        Ordering::Equal => return Err(Error::Internal(format!("degenerate relation {rel}"))),
                    }
                }
            };
            alg.add_rule(rule);
        }
        alg.initial_rules = alg.rules.len();
        alg.complete()?;
        alg.build_basis();
        Ok(alg)
    }

    pub fn quiver(&self) -> &BoundQuiver {
        &self.quiver
    }

    pub fn system(&self) -> &DefiningSystem {
        self.quiver.system()
    }

    pub fn vertex_count(&self) -> usize {
        self.quiver.vertices().len()
    }

    pub fn arrow_count(&self) -> usize {
        self.src.len()
    }

    pub fn arrow_source(&self, a: usize) -> usize {
        self.src[a]
    }

    pub fn arrow_target(&self, a: usize) -> usize {
        self.tgt[a]
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Rules added by completion on top of the oriented relations.
    pub fn completion_rules(&self) -> usize {
        self.rules.len() - self.initial_rules
    }

    pub fn word(&self, p: &Path) -> Word {
        p.arrows.iter().map(|a| self.quiver.arrow_id(*a).expect("arrow of this quiver") as u32).collect()
    }

    pub fn path_of(&self, source: usize, w: &[u32]) -> Path {
        let arrows: Vec<Arrow> = w.iter().map(|&a| self.quiver.arrows()[a as usize].arrow).collect();
        self.quiver.path(self.quiver.vertices()[source], &arrows).expect("word is a path")
    }

    pub fn vertex_id(&self, v: Vertex) -> Option<usize> {
        self.quiver.vertex_id(v)
    }

    /// Target vertex id of `w` read from `source`.
    pub fn word_target(&self, source: usize, w: &[u32]) -> usize {
        w.last().map_or(source, |&a| self.tgt[a as usize])
    }

    fn alpha_count(&self, w: &[u32]) -> usize {
        w.iter().filter(|&&a| self.alpha[a as usize]).count()
    }

    /// Well-order compatible with concatenation: α-count, then length, then lexicographic.
    pub fn cmp_words(&self, a: &[u32], b: &[u32]) -> Ordering {
        (self.alpha_count(a), a.len(), a).cmp(&(self.alpha_count(b), b.len(), b))
    }

    fn add_rule(&mut self, rule: Rule) {
        self.max_lhs = self.max_lhs.max(rule.lhs.len());
        self.lhs.insert(rule.lhs.clone(), self.rules.len());
        self.rules.push(rule);
    }

    /// Normal form of `w`, or `None` when it vanishes.
    pub fn reduce(&self, w: &[u32]) -> Option<Word> {
        let mut cur: Word = w.to_vec();
        'outer: loop {
            for start in 0..cur.len() {
                let max = self.max_lhs.min(cur.len() - start);
                for len in 1..=max {
                    if let Some(&r) = self.lhs.get(&cur[start..start + len]) {
                        let rule = &self.rules[r];
                        let rhs = rule.rhs.as_ref()?;
                        let mut next = cur[..start].to_vec();
                        next.extend_from_slice(rhs);
                        next.extend_from_slice(&cur[start + len..]);
                        cur = next;
                        continue 'outer;
                    }
                }
            }
            return Some(cur);
        }
    }

    fn critical_pairs(&self, a: &Rule, b: &Rule, same: bool) -> Vec<(Option<Word>, Option<Word>)> {
        let mut out = Vec::new();
        let (la, lb) = (&a.lhs, &b.lhs);
        for k in 1..la.len().min(lb.len()) {
            if la[la.len() - k..] == lb[..k] {
                let left = a.rhs.as_ref().map(|r| [r.as_slice(), &lb[k..]].concat());
                let right = b.rhs.as_ref().map(|r| [&la[..la.len() - k], r.as_slice()].concat());
                out.push((left, right));
            }
        }
        if !same && lb.len() <= la.len() {
            for pos in 0..=la.len() - lb.len() {
                if la[pos..pos + lb.len()] == lb[..] {
                    let left = a.rhs.clone();
                    let right = b.rhs.as_ref().map(|r| [&la[..pos], r.as_slice(), &la[pos + lb.len()..]].concat());
                    out.push((left, right));
                }
            }
        }
        out
    }

    fn complete(&mut self) -> Result<()> {
        // generous cap: every new rule has a distinct irreducible left side, and there are finitely many paths
        let cap = 100_000;
        loop {
            let mut added = false;
            let mut i = 0;
            while i < self.rules.len() {
                let mut j = 0;
                while j < self.rules.len() {
                    let pairs = self.critical_pairs(&self.rules[i], &self.rules[j], i == j);
                    for (left, right) in pairs {
                        let l = left.and_then(|w| self.reduce(&w));
                        let r = right.and_then(|w| self.reduce(&w));
                        let rule = match (l, r) {
                            (None, None) => continue,
                            (Some(w), None) | (None, Some(w)) => Rule { lhs: w, rhs: None },
                            (Some(a), Some(b)) => match self.cmp_words(&a, &b) {
                                Ordering::Equal => continue,
                                Ordering::Greater => Rule { lhs: a, rhs: Some(b) },
                                Ordering::Less => Rule { lhs: b, rhs: Some(a) },
                            },
                        };
                        if rule.lhs.is_empty() {
                            return Err(Error::Internal("completion produced a vanishing idempotent".into()));
                        }
                        self.add_rule(rule);
                        added = true;
                        if self.rules.len() > cap {
                            return Err(Error::Internal("rewriting completion did not terminate".into()));
                        }
                    }
                    j += 1;
                }
                i += 1;
            }
            if !added {
                return Ok(());
            }
        }
    }

    fn build_basis(&mut self) {
        let n = self.vertex_count();
        let mut out_arrows: Vec<Vec<u32>> = vec![Vec::new(); n];
        for a in 0..self.arrow_count() {
            out_arrows[self.src[a]].push(a as u32);
        }
        self.from = vec![Vec::new(); n];
        self.index = vec![HashMap::new(); n];
        for v in 0..n {
            let mut stack: Vec<Word> = vec![Vec::new()];
            let mut found: Vec<NormalPath> = Vec::new();
            while let Some(w) = stack.pop() {
                let t = self.word_target(v, &w);
                for &a in &out_arrows[t] {
                    let mut next = w.clone();
                    next.push(a);
                    let irreducible = (1..=self.max_lhs.min(next.len()))
                        .all(|len| !self.lhs.contains_key(&next[next.len() - len..]));
                    if irreducible {
                        stack.push(next);
                    }
                }
                found.push(NormalPath { target: t, word: w });
            }
            found.sort_by(|a, b| (a.target, a.word.len(), &a.word).cmp(&(b.target, b.word.len(), &b.word)));
            for (k, p) in found.iter().enumerate() {
                self.index[v].insert(p.word.clone(), k);
            }
            self.from[v] = found;
        }
    }

    pub fn dim(&self) -> usize {
        self.from.iter().map(Vec::len).sum()
    }

    /// Normal forms starting at `v`, sorted by target.
    pub fn paths_from(&self, v: usize) -> &[NormalPath] {
        &self.from[v]
    }

    /// Positions in `paths_from(v)` of normal forms ending at `w` (a contiguous block).
    pub fn between(&self, v: usize, w: usize) -> std::ops::Range<usize> {
        let paths = &self.from[v];
        let start = paths.partition_point(|p| p.target < w);
        let end = paths.partition_point(|p| p.target <= w);
        start..end
    }

    pub fn index_of(&self, source: usize, w: &[u32]) -> Option<usize> {
        self.index[source].get(w).copied()
    }

    /// Normal form of `first` followed by `second` (both read from their sources).
    pub fn product(&self, first: &[u32], second: &[u32]) -> Option<Word> {
        self.reduce(&[first, second].concat())
    }

    /// Checks that every rule's critical pairs resolve (the completed system is confluent).
    pub fn is_confluent(&self) -> bool {
        for a in &self.rules {
            for b in &self.rules {
                for (l, r) in self.critical_pairs(a, b, std::ptr::eq(a, b)) {
                    if l.and_then(|w| self.reduce(&w)) != r.and_then(|w| self.reduce(&w)) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::example_e1;

    #[test]
    fn fundamental_path_count() {
        let ds = DefiningSystem::fundamental(vec![2, 1], vec![1, 1]).unwrap();
        let a = Algebra::new(&ds).unwrap();
        assert_eq!(a.vertex_count(), 5);
        assert_eq!(a.arrow_count(), 5);
        // 5 idempotents, 5 arrows, and α_{1,1}α_{1,2}; the sources x_{1,2}, x_{2,1} and sinks x_{1,0}, x_{2,0} allow nothing else
        assert_eq!(a.dim(), 11);
        assert!(a.rules().is_empty());
    }

    #[test]
    fn e1_basis_contains_idempotents() {
        let a = Algebra::new(&example_e1()).unwrap();
        for v in 0..a.vertex_count() {
            assert!(a.index_of(v, &[]).is_some());
        }
        assert!(a.is_confluent());
    }

    #[test]
    fn single_orientation_needs_completion() {
        // α_{1,2} γ_{1,2} ξ_{1,1} γ_{1,4} vanishes but is not a multiple of any relation word
        let ds = DefiningSystem::new_valid(vec![3], vec![1], vec![vec![2, 4]], vec![vec![2]]).unwrap();
        let a = Algebra::new(&ds).unwrap();
        assert!(a.completion_rules() > 0);
        let bq = a.quiver();
        let w = a.word(
            &bq.path(Vertex::Z(1, 4), &[Arrow::Gamma(1, 4), Arrow::Xi(1, 1), Arrow::Gamma(1, 2), Arrow::Alpha(1, 2)])
                .unwrap(),
        );
        assert_eq!(a.reduce(&w), None);
    }
}
