//! Defining systems `(p, q, S, T)`: validation, canonical JSON and bounded enumeration.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A defining system. Branch indices are 1-based in every accessor.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DefiningSystem {
    pub p: Vec<u32>,
    pub q: Vec<u32>,
    #[serde(rename = "S")]
    pub s: Vec<Vec<u32>>,
    #[serde(rename = "T")]
    pub t: Vec<Vec<u32>>,
}

/// Stable constraint identifiers used in [`ValidationReport`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Constraint {
    /// `p_i` and `q_i` are positive.
    DS1,
    /// `sum p_i >= 2`.
    DS2,
    /// `T_i ⊆ S_i`.
    DS3,
    /// `S_i ⊆ [2, p_i + |T_i|]`.
    DS4,
    /// `p_i + |T_i| ∉ T_i`.
    DS5,
    /// `j ∈ S_i` implies `j + 1 ∉ S_i`.
    DS6,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub constraint: Constraint,
    /// Branch index, `None` for whole-system constraints.
    pub i: Option<usize>,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok {
            return write!(f, "ok");
        }
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            match v.i {
                Some(i) => write!(f, "{} i={}: {}", v.constraint, i, v.message)?,
                None => write!(f, "{}: {}", v.constraint, v.message)?,
            }
        }
        Ok(())
    }
}

fn strictly_increasing(xs: &[u32]) -> bool {
    xs.windows(2).all(|w| w[0] < w[1])
}

impl DefiningSystem {
    /// Builds a system after structural checks (equal lengths, strictly
    /// increasing sets). Validity constraints are not checked here.
    pub fn new(p: Vec<u32>, q: Vec<u32>, s: Vec<Vec<u32>>, t: Vec<Vec<u32>>) -> Result<Self> {
        let ds = DefiningSystem { p, q, s, t };
        ds.check_shape()?;
        Ok(ds)
    }

    /// Like [`DefiningSystem::new`] but also requires a valid system.
    pub fn new_valid(p: Vec<u32>, q: Vec<u32>, s: Vec<Vec<u32>>, t: Vec<Vec<u32>>) -> Result<Self> {
        let ds = Self::new(p, q, s, t)?;
        let report = ds.validate();
        if !report.ok {
            return Err(Error::Invalid(report));
        }
        Ok(ds)
    }

    /// The fundamental system `(p, q, ∅, ∅)`.
    pub fn fundamental(p: Vec<u32>, q: Vec<u32>) -> Result<Self> {
        let n = p.len();
        Self::new_valid(p, q, vec![Vec::new(); n], vec![Vec::new(); n])
    }

    fn check_shape(&self) -> Result<()> {
        let n = self.p.len();
        for (name, len) in [("q", self.q.len()), ("S", self.s.len()), ("T", self.t.len())] {
            if len != n {
                return Err(Error::Shape(format!(
                    "length mismatch: |p| = {n} but |{name}| = {len}"
                )));
            }
        }
        for i in 0..n {
            if !strictly_increasing(&self.s[i]) {
                return Err(Error::Shape(format!("S_{} is not strictly increasing", i + 1)));
            }
            if !strictly_increasing(&self.t[i]) {
                return Err(Error::Shape(format!("T_{} is not strictly increasing", i + 1)));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    /// Wraps any integer branch index into `[1, n]`.
    pub fn wrap(&self, i: i64) -> usize {
        let n = self.n() as i64;
        ((i - 1).rem_euclid(n) + 1) as usize
    }

    pub fn p_at(&self, i: usize) -> u32 {
        self.p[i - 1]
    }

    pub fn q_at(&self, i: usize) -> u32 {
        self.q[i - 1]
    }

    pub fn s_of(&self, i: usize) -> &[u32] {
        &self.s[i - 1]
    }

    pub fn t_of(&self, i: usize) -> &[u32] {
        &self.t[i - 1]
    }

    /// `T_{i,j}`, both indices 1-based.
    pub fn t_ij(&self, i: usize, j: usize) -> u32 {
        self.t[i - 1][j - 1]
    }

    /// `p_i + |T_i|`, the top index of the `x`-chain of branch `i`.
    pub fn top(&self, i: usize) -> u32 {
        self.p_at(i) + self.t_of(i).len() as u32
    }

    pub fn in_s(&self, i: usize, j: u32) -> bool {
        self.s_of(i).binary_search(&j).is_ok()
    }

    pub fn in_t(&self, i: usize, j: u32) -> bool {
        self.t_of(i).binary_search(&j).is_ok()
    }

    pub fn total_s(&self) -> usize {
        self.s.iter().map(Vec::len).sum()
    }

    pub fn total_t(&self) -> usize {
        self.t.iter().map(Vec::len).sum()
    }

    /// Reports every violated constraint.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let mut push = |constraint, i, message: String| {
            violations.push(Violation { constraint, i, message });
        };
        for i in 1..=self.n() {
            if self.p_at(i) == 0 {
                push(Constraint::DS1, Some(i), format!("p_{i} must be positive"));
            }
            if self.q_at(i) == 0 {
                push(Constraint::DS1, Some(i), format!("q_{i} must be positive"));
            }
        }
        let sum_p: u64 = self.p.iter().map(|&x| x as u64).sum();
        if sum_p < 2 {
            push(Constraint::DS2, None, format!("sum of p is {sum_p}, must be at least 2"));
        }
        for i in 1..=self.n() {
            let s = self.s_of(i);
            let t = self.t_of(i);
            let top = self.top(i);
            let missing: Vec<u32> = t.iter().copied().filter(|j| !self.in_s(i, *j)).collect();
            if !missing.is_empty() {
                push(Constraint::DS3, Some(i), format!("T_{i} ⊄ S_{i}: {missing:?} not in S_{i}"));
            }
            let out: Vec<u32> = s.iter().copied().filter(|&j| j < 2 || j > top).collect();
            if !out.is_empty() {
                push(
                    Constraint::DS4,
                    Some(i),
                    format!("S_{i} ⊄ [2, {top}]: {out:?} out of range"),
                );
            }
            if self.in_t(i, top) {
                push(Constraint::DS5, Some(i), format!("p_{i} + |T_{i}| = {top} lies in T_{i}"));
            }
            let consecutive: Vec<u32> = s.windows(2).filter(|w| w[1] == w[0] + 1).map(|w| w[0]).collect();
            if !consecutive.is_empty() {
                push(
                    Constraint::DS6,
                    Some(i),
                    format!("j+1 ∉ S_{i} fails for j in {consecutive:?}"),
                );
            }
        }
        ValidationReport { ok: violations.is_empty(), violations }
    }

    pub fn is_fundamental(&self) -> bool {
        self.s.iter().all(Vec::is_empty) && self.t.iter().all(Vec::is_empty)
    }

    /// `(p, q, ∅, ∅)`.
    pub fn fundamental_of(&self) -> DefiningSystem {
        let n = self.n();
        DefiningSystem {
            p: self.p.clone(),
            q: self.q.clone(),
            s: vec![Vec::new(); n],
            t: vec![Vec::new(); n],
        }
    }

    /// Canonical JSON: no whitespace, keys in the order `p, q, S, T`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("defining system serializes")
    }

    /// Parses and validates.
    pub fn from_json(text: &str) -> Result<Self> {
        let ds = Self::from_json_unchecked(text)?;
        let report = ds.validate();
        if !report.ok {
            return Err(Error::Invalid(report));
        }
        Ok(ds)
    }

    /// Parses with structural checks only.
    pub fn from_json_unchecked(text: &str) -> Result<Self> {
        let ds: DefiningSystem = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        ds.check_shape()?;
        Ok(ds)
    }
}

impl fmt::Display for DefiningSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

/// Bounds for [`enumerate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub max_n: usize,
    pub max_p: u32,
    pub max_q: u32,
    pub max_t: usize,
}

impl Bounds {
    pub fn new(max_n: usize, max_p: u32, max_q: u32, max_t: usize) -> Self {
        Bounds { max_n, max_p, max_q, max_t }
    }
}

/// Non-consecutive subsets of `[lo, hi]`, each as an increasing vector.
fn sparse_subsets(lo: u32, hi: u32) -> Vec<Vec<u32>> {
    fn go(next: u32, hi: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        out.push(cur.clone());
        for j in next..=hi {
            cur.push(j);
            go(j + 2, hi, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if lo <= hi {
        go(lo, hi, &mut Vec::new(), &mut out);
    } else {
        out.push(Vec::new());
    }
    out
}

fn subsets_of_size(items: &[u32], k: usize) -> Vec<Vec<u32>> {
    fn go(items: &[u32], k: usize, start: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for idx in start..items.len() {
            cur.push(items[idx]);
            go(items, k, idx + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, k, 0, &mut Vec::new(), &mut out);
    out
}

/// All valid `(S_i, T_i)` for one branch with the given `p_i` and `|T_i| <= max_t`.
pub fn branch_options(p: u32, max_t: usize) -> Vec<(Vec<u32>, Vec<u32>)> {
    let mut out = Vec::new();
    // |T_i| <= p_i follows from the constraints; no separate cap on S is needed.
    for size in 0..=max_t.min(p as usize) {
        let top = p + size as u32;
        for s in sparse_subsets(2, top) {
            let candidates: Vec<u32> = s.iter().copied().filter(|&j| j != top).collect();
            for t in subsets_of_size(&candidates, size) {
                out.push((s.clone(), t));
            }
        }
    }
    out
}

fn sequences(len: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (1..=max).map(move |v| {
                    let mut next = prefix.clone();
                    next.push(v);
                    next
                })
            })
            .collect();
    }
    out
}

/// Every valid defining system within `bounds`, once each, ordered
/// lexicographically on `(n, p, q, S, T)`.
pub fn enumerate(bounds: Bounds) -> impl Iterator<Item = DefiningSystem> {
    (1..=bounds.max_n).flat_map(move |n| {
        sequences(n, bounds.max_p).into_iter().flat_map(move |p| {
            let sum_p: u32 = p.iter().sum();
            let qs = if sum_p >= 2 { sequences(n, bounds.max_q) } else { Vec::new() };
            qs.into_iter().flat_map(move |q| block(&p, &q, bounds.max_t))
        })
    })
}

fn block(p: &[u32], q: &[u32], max_t: usize) -> Vec<DefiningSystem> {
    let options: Vec<Vec<(Vec<u32>, Vec<u32>)>> = p.iter().map(|&pi| branch_options(pi, max_t)).collect();
    let mut combos: Vec<(Vec<Vec<u32>>, Vec<Vec<u32>>)> = vec![(Vec::new(), Vec::new())];
    for branch in &options {
        let mut next = Vec::with_capacity(combos.len() * branch.len());
        for (s, t) in &combos {
            for (si, ti) in branch {
                let mut s2 = s.clone();
                let mut t2 = t.clone();
                s2.push(si.clone());
                t2.push(ti.clone());
                next.push((s2, t2));
            }
        }
        combos = next;
    }
    combos.sort();
    combos
        .into_iter()
        .map(|(s, t)| DefiningSystem { p: p.to_vec(), q: q.to_vec(), s, t })
        .collect()
}

/// The running example `p = (6,3), q = (2,2), S = ({2,4,6,8},{2}), T = ({4,6},∅)`.
pub fn example_e1() -> DefiningSystem {
    DefiningSystem {
        p: vec![6, 3],
        q: vec![2, 2],
        s: vec![vec![2, 4, 6, 8], vec![2]],
        t: vec![vec![4, 6], vec![]],
    }
}
