//! Combinatorial structures for two-ray modules over an arbitrary ordered index type.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Debug, Display};

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::pmap::PartialMap;

/// What an index type must provide.
pub trait Index: Ord + Clone + Debug + Display {}
impl<K: Ord + Clone + Debug + Display> Index for K {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombStructure<K: Index> {
    pub indices: BTreeSet<K>,
    pub phi: PartialMap<K>,
    pub rho: PartialMap<K>,
    pub psi: PartialMap<K>,
    /// Defined exactly on `(Dom φ ∪ Dom ρ) ∖ Dom ψ`.
    pub l: BTreeMap<K, i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
    C8,
    C9,
    C10,
    C11,
    C12,
    C13,
    C14,
}

impl Axiom {
    pub const ALL: [Axiom; 14] = [
        Axiom::C1,
        Axiom::C2,
        Axiom::C3,
        Axiom::C4,
        Axiom::C5,
        Axiom::C6,
        Axiom::C7,
        Axiom::C8,
        Axiom::C9,
        Axiom::C10,
        Axiom::C11,
        Axiom::C12,
        Axiom::C13,
        Axiom::C14,
    ];
}

impl Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status<K> {
    Pass,
    /// Failing indices (never empty).
    Fail(Vec<K>),
    /// Not evaluated because an earlier axiom failed.
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport<K> {
    pub results: Vec<(Axiom, Status<K>)>,
}

impl<K: Index> AxiomReport<K> {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|(_, s)| *s == Status::Pass)
    }

    pub fn status(&self, axiom: Axiom) -> &Status<K> {
        &self.results.iter().find(|(a, _)| *a == axiom).expect("every axiom reported").1
    }

    pub fn failures(&self) -> Vec<(Axiom, &[K])> {
        self.results
            .iter()
            .filter_map(|(a, s)| match s {
                Status::Fail(w) => Some((*a, w.as_slice())),
                _ => None,
            })
            .collect()
    }

    pub fn to_json_value(&self) -> Value {
        let mut m = Map::new();
        for (a, s) in &self.results {
            let v = match s {
                Status::Pass => json!("pass"),
                Status::Skipped => json!("skipped"),
                Status::Fail(w) => json!({ "fail": w.iter().map(ToString::to_string).collect::<Vec<_>>() }),
            };
            m.insert(a.to_string(), v);
        }
        Value::Object(m)
    }
}

impl<K: Index> Display for AxiomReport<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, s) in &self.results {
            match s {
                Status::Pass => writeln!(f, "{a}: pass")?,
                Status::Skipped => writeln!(f, "{a}: skipped")?,
                Status::Fail(w) => {
                    let names: Vec<String> = w.iter().map(ToString::to_string).collect();
                    writeln!(f, "{a}: FAIL at {}", names.join(", "))?
                }
            }
        }
        Ok(())
    }
}

fn status<K: Index>(witnesses: impl IntoIterator<Item = K>) -> Status<K> {
    let w: Vec<K> = witnesses.into_iter().collect();
    if w.is_empty() {
        Status::Pass
    } else {
        Status::Fail(w)
    }
}

impl<K: Index> CombStructure<K> {
    /// Checks that the maps live on `indices` and that `l` has the right domain and sign.
    pub fn new(
        indices: BTreeSet<K>,
        phi: PartialMap<K>,
        rho: PartialMap<K>,
        psi: PartialMap<K>,
        l: BTreeMap<K, i64>,
    ) -> Result<Self> {
        for (name, m) in [("phi", &phi), ("rho", &rho), ("psi", &psi)] {
            for (a, b) in m.iter() {
                if !indices.contains(a) || !indices.contains(b) {
                    return Err(Error::Structure(format!("{name} maps {a} to {b} outside the index set")));
                }
            }
        }
        let cs = CombStructure { indices, phi, rho, psi, l };
        let expected = cs.l_domain();
        let actual: BTreeSet<K> = cs.l.keys().cloned().collect();
        if expected != actual {
            let missing: Vec<String> = expected.difference(&actual).map(ToString::to_string).collect();
            let extra: Vec<String> = actual.difference(&expected).map(ToString::to_string).collect();
            return Err(Error::Structure(format!(
                "l must be defined exactly on (Dom phi ∪ Dom rho) ∖ Dom psi; missing [{}], extra [{}]",
                missing.join(", "),
                extra.join(", ")
            )));
        }
        if let Some((k, v)) = cs.l.iter().find(|(_, &v)| v > 0) {
            return Err(Error::Structure(format!("l_{k} = {v} is positive")));
        }
        Ok(cs)
    }

    pub fn l_domain(&self) -> BTreeSet<K> {
        self.phi
            .domain()
            .into_iter()
            .chain(self.rho.domain())
            .filter(|x| !self.psi.in_domain(x))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    fn domain_err(&self, x: &K, what: &'static str) -> Error {
        Error::Domain(x.to_string(), what)
    }

    /// Maximal `v` with `ψ^v x` defined.
    pub fn v(&self, x: &K) -> usize {
        self.psi.depth(x, self.indices.len() + 1)
    }

    /// `ψ^{v_x} x`.
    pub fn psi_top(&self, x: &K) -> K {
        self.psi.iterate(x, self.v(x)).expect("depth is defined")
    }

    pub fn sigma(&self, x: &K) -> Result<K> {
        let fx = self.phi.get(x).ok_or_else(|| self.domain_err(x, "Dom phi"))?;
        Ok(self.psi_top(fx))
    }

    pub fn eta(&self, x: &K) -> Result<K> {
        if self.phi.in_domain(x) {
            self.sigma(x)
        } else if let Some(r) = self.rho.get(x) {
            Ok(r.clone())
        } else {
            Err(self.domain_err(x, "Dom phi ∪ Dom rho"))
        }
    }

    pub fn eta_pow(&self, x: &K, n: usize) -> Result<K> {
        let mut cur = x.clone();
        for _ in 0..n {
            cur = self.eta(&cur)?;
        }
        Ok(cur)
    }

    fn in_rho_image_not_phi(&self, x: &K) -> bool {
        self.rho.in_image(x) && !self.phi.in_domain(x)
    }

    /// Minimal `u` with `η^u x ∈ Im ρ ∖ Dom φ`, if any.
    fn first_exit(&self, x: &K) -> Option<usize> {
        let mut cur = x.clone();
        for u in 0..=self.indices.len() {
            if self.in_rho_image_not_phi(&cur) {
                return Some(u);
            }
            cur = self.eta(&cur).ok()?;
        }
        None
    }

    /// First `k >= 1` with `l_{η^k x} < 0`, provided all earlier terms are defined.
    fn first_negative(&self, x: &K) -> Option<usize> {
        let mut cur = x.clone();
        for k in 1..=self.indices.len() + 1 {
            cur = self.eta(&cur).ok()?;
            match self.l.get(&cur) {
                Some(&v) if v < 0 => return Some(k),
                Some(_) => {}
                None => return None,
            }
        }
        None
    }

    /// `u_x`; `None` when neither alternative of C14 holds at `x`.
    pub fn u(&self, x: &K) -> Option<usize> {
        match self.first_negative(x) {
            // partial sums are nonincreasing, so the last zero sum is just before the first negative term
            Some(k) => Some(k - 1),
            None => self.first_exit(x),
        }
    }

    pub fn u_checked(&self, x: &K) -> Result<usize> {
        if !self.indices.contains(x) {
            return Err(self.domain_err(x, "I"));
        }
        self.u(x).ok_or_else(|| Error::Precondition(format!("C14 fails at {x}")))
    }

    pub fn check_axioms(&self) -> AxiomReport<K> {
        let i = &self.indices;
        let (dphi, iphi) = (self.phi.domain(), self.phi.image());
        let (drho, irho) = (self.rho.domain(), self.rho.image());
        let (dpsi, ipsi) = (self.psi.domain(), self.psi.image());
        let dphi_or_drho: BTreeSet<K> = dphi.union(&drho).cloned().collect();
        let inter = |a: &BTreeSet<K>, b: &BTreeSet<K>| status(a.intersection(b).cloned());
        let minus = |a: &BTreeSet<K>, b: &BTreeSet<K>| status(a.difference(b).cloned());

        let mut results = vec![
            (
                Axiom::C1,
                status(i.iter().filter(|x| !iphi.contains(x) && !irho.contains(x) && !ipsi.contains(x)).cloned()),
            ),
            (Axiom::C2, inter(&iphi, &irho)),
            (Axiom::C3, inter(&iphi, &ipsi)),
            (Axiom::C4, inter(&irho, &ipsi)),
            (Axiom::C5, inter(&dphi, &drho)),
            (Axiom::C6, inter(&drho, &irho)),
            (Axiom::C7, minus(&iphi, &dphi_or_drho)),
            (Axiom::C8, minus(&dpsi, &dphi)),
            (Axiom::C9, inter(&irho, &dpsi)),
            (Axiom::C10, minus(&ipsi, &dphi_or_drho)),
            (Axiom::C11, status(dpsi.iter().filter(|x| self.psi.depth(x, i.len()) >= i.len()).cloned())),
        ];
        if results.iter().any(|(_, s)| *s != Status::Pass) {
            results.extend([Axiom::C12, Axiom::C13, Axiom::C14].map(|a| (a, Status::Skipped)));
            return AxiomReport { results };
        }

        let l_sigma = |x: &K| self.sigma(x).ok().and_then(|s| self.l.get(&s).copied());
        let c12 = dpsi.iter().filter(|x| !matches!(l_sigma(x), Some(v) if v < 0)).cloned();
        results.push((Axiom::C12, status(c12)));
        let c13 = dphi
            .iter()
            .filter(|x| irho.contains(x))
            .filter(|x| self.l.get(x) != Some(&0) || l_sigma(x) != Some(0))
            .cloned();
        results.push((Axiom::C13, status(c13)));
        let c14 = i.iter().filter(|x| self.first_exit(x).is_none() && self.first_negative(x).is_none()).cloned();
        results.push((Axiom::C14, status(c14)));
        AxiomReport { results }
    }

    fn require_axioms(&self) -> Result<()> {
        let report = self.check_axioms();
        if report.all_pass() {
            Ok(())
        } else {
            Err(Error::Precondition(format!("structure fails its axioms:\n{report}")))
        }
    }

    /// A1–A5 at `y`; assumes the axioms hold.
    pub fn admissible_unchecked(&self, y: &K) -> bool {
        self.admissibility_failure(y).is_none()
    }

    /// The first of A1–A5 that fails at `y`.
    pub fn admissibility_failure(&self, y: &K) -> Option<&'static str> {
        if !self.phi.in_domain(y) {
            return Some("A1: y ∉ Dom phi");
        }
        let sy = self.sigma(y).expect("y ∈ Dom phi");
        if !self.phi.in_domain(&sy) {
            return Some("A2: sigma y ∉ Dom phi");
        }
        if self.l.get(&sy) != Some(&0) {
            return Some("A3: l_{sigma y} ≠ 0");
        }
        if self.rho.in_image(y) {
            let ok = self
                .u(y)
                .and_then(|u| self.eta_pow(y, u).ok())
                .is_some_and(|z| self.phi.in_domain(&z));
            if !ok {
                return Some("A4: eta^{u_y} y ∉ Dom phi");
            }
        }
        let hit = self.rho.image().iter().any(|w| self.sigma(w).ok().as_ref() == Some(y));
        if hit {
            return Some("A5: y ∈ sigma(Im rho)");
        }
        None
    }

    pub fn admissible(&self, y: &K) -> Result<bool> {
        self.require_axioms()?;
        Ok(self.admissible_unchecked(y))
    }

    pub fn admissible_set(&self) -> Result<BTreeSet<K>> {
        self.require_axioms()?;
        Ok(self.indices.iter().filter(|y| self.admissible_unchecked(y)).cloned().collect())
    }

    /// Extension by the admissible index `y`, with `y_new` the added index.
    pub fn extend(&self, y: &K, y_new: K) -> Result<CombStructure<K>> {
        self.require_axioms()?;
        if let Some(why) = self.admissibility_failure(y) {
            return Err(Error::Inadmissible { index: y.to_string(), reason: why.to_string() });
        }
        if self.indices.contains(&y_new) {
            return Err(Error::Precondition(format!("new index {y_new} already belongs to the structure")));
        }
        let mut indices = self.indices.clone();
        indices.insert(y_new.clone());
        let phi_y = self.phi.get(y).expect("A1").clone();
        let mut phi = self.phi.restrict(|x| x != y);
        phi.insert(y_new.clone(), phi_y).expect("phi' stays injective");

        let mut rho = self.rho.clone();
        let mut psi = self.psi.clone();
        let mut l = self.l.clone();
        if !self.rho.in_image(y) {
            rho.insert(y.clone(), y_new.clone()).expect("rho' stays injective");
            l.insert(y_new, 0);
        } else {
            let u = self.u(y).expect("C14");
            let z = self.eta_pow(y, u)?;
            if z == *y || !self.phi.in_domain(&z) || self.psi.in_domain(&z) {
                return Err(Error::Internal(format!(
                    "extension target {z} for {y} must differ from y and lie in Dom phi ∖ Dom psi"
                )));
            }
            psi.insert(z.clone(), y_new.clone()).expect("psi' stays injective");
            let s1 = self.sigma(y)?;
            let s2 = self.sigma(&s1)?;
            l.remove(y);
            l.remove(&z);
            if z != s1 {
                if let Some(v) = l.get_mut(&s2) {
                    *v = -2;
                }
            }
            let new_l = if z == s1 || z == s2 { -2 } else { 0 };
            l.insert(y_new, new_l);
        }
        CombStructure::new(indices, phi, rho, psi, l)
    }

    /// Renames every index.
    pub fn map_indices<L: Index>(&self, f: impl Fn(&K) -> L) -> CombStructure<L> {
        CombStructure {
            indices: self.indices.iter().map(&f).collect(),
            phi: self.phi.map_keys(&f),
            rho: self.rho.map_keys(&f),
            psi: self.psi.map_keys(&f),
            l: self.l.iter().map(|(k, v)| (f(k), *v)).collect(),
        }
    }

    /// `{"I": [...], "phi": {...}, "rho": {...}, "psi": {...}, "l": {...}}`.
    pub fn to_json_value(&self) -> Value {
        let map = |m: &PartialMap<K>| {
            Value::Object(m.iter().map(|(a, b)| (a.to_string(), json!(b.to_string()))).collect())
        };
        json!({
            "I": self.indices.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "phi": map(&self.phi),
            "rho": map(&self.rho),
            "psi": map(&self.psi),
            "l": Value::Object(self.l.iter().map(|(k, v)| (k.to_string(), json!(v))).collect()),
        })
    }

    /// Human-readable difference against another structure (empty when equal).
    pub fn diff(&self, other: &CombStructure<K>) -> Vec<String> {
        let mut out = Vec::new();
        let set_diff = |name: &str, a: &BTreeSet<K>, b: &BTreeSet<K>, out: &mut Vec<String>| {
            for x in a.difference(b) {
                out.push(format!("{name}: {x} only on the left"));
            }
            for x in b.difference(a) {
                out.push(format!("{name}: {x} only on the right"));
            }
        };
        set_diff("I", &self.indices, &other.indices, &mut out);
        for (name, a, b) in [("phi", &self.phi, &other.phi), ("rho", &self.rho, &other.rho), ("psi", &self.psi, &other.psi)] {
            let keys: BTreeSet<K> = a.domain().union(&b.domain()).cloned().collect();
            for k in keys {
                if a.get(&k) != b.get(&k) {
                    out.push(format!("{name}({k}): {:?} vs {:?}", a.get(&k).map(|v| v.to_string()), b.get(&k).map(|v| v.to_string())));
                }
            }
        }
        let keys: BTreeSet<K> = self.l.keys().chain(other.l.keys()).cloned().collect();
        for k in keys {
            if self.l.get(&k) != other.l.get(&k) {
                out.push(format!("l({k}): {:?} vs {:?}", self.l.get(&k), other.l.get(&k)));
            }
        }
        out
    }
}
