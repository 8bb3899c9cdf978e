//! Vertex classes, the maps 𝔓, ℜ, 𝔖, 𝔗 and the distinguished paths ω, μ, ν.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::pmap::PartialMap;
use crate::quiver::{Arrow, BoundQuiver, Path, Vertex};
use crate::system::DefiningSystem;

/// The sets 𝔵, 𝔵₀, …, 𝔵₄ and 𝔷. These overlap (𝔵₂ ∩ 𝔵₄ on branches with `T_i = ∅`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexClasses {
    pub x: BTreeSet<Vertex>,
    pub x0: BTreeSet<Vertex>,
    pub x1: BTreeSet<Vertex>,
    pub x2: BTreeSet<Vertex>,
    pub x3: BTreeSet<Vertex>,
    pub x4: BTreeSet<Vertex>,
    pub z: BTreeSet<Vertex>,
}

pub fn classify(ds: &DefiningSystem) -> VertexClasses {
    let mut c = VertexClasses {
        x: BTreeSet::new(),
        x0: BTreeSet::new(),
        x1: BTreeSet::new(),
        x2: BTreeSet::new(),
        x3: BTreeSet::new(),
        x4: BTreeSet::new(),
        z: BTreeSet::new(),
    };
    for i in 1..=ds.n() {
        let p = ds.p_at(i);
        let top = ds.top(i);
        for j in 0..=top {
            c.x.insert(Vertex::X(i, j));
        }
        c.x0.insert(Vertex::X(i, 0));
        for j in 1..p {
            c.x1.insert(Vertex::X(i, j));
        }
        c.x2.insert(Vertex::X(i, p));
        for j in p + 1..top {
            c.x3.insert(Vertex::X(i, j));
        }
        c.x4.insert(Vertex::X(i, top));
        for &j in ds.s_of(i) {
            c.z.insert(Vertex::Z(i, j));
        }
    }
    c
}

/// 𝔓, ℜ, 𝔖, 𝔗 (inverses via [`PartialMap::inverse`] / [`PartialMap::preimage`]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrakturMaps {
    pub p: PartialMap<Vertex>,
    pub r: PartialMap<Vertex>,
    pub s: PartialMap<Vertex>,
    pub t: PartialMap<Vertex>,
}

pub fn fraktur(ds: &DefiningSystem) -> FrakturMaps {
    let mut p = PartialMap::new();
    let mut r = PartialMap::new();
    let mut s = PartialMap::new();
    let mut t = PartialMap::new();
    for i in 1..=ds.n() {
        let pi = ds.p_at(i);
        for j in 1..=ds.top(i) {
            p.insert(Vertex::X(i, j), Vertex::X(i, j - 1)).expect("𝔓 injective");
        }
        r.insert(Vertex::X(i, pi), Vertex::X(ds.wrap(i as i64 + 1), 0)).expect("ℜ injective");
        for (k, &tj) in ds.t_of(i).iter().enumerate() {
            let j = k as u32 + 1;
            r.insert(Vertex::X(i, pi + j), Vertex::X(i, tj)).expect("ℜ injective");
            t.insert(Vertex::X(i, pi + j), Vertex::Z(i, tj)).expect("𝔗 injective");
        }
        for &j in ds.s_of(i) {
            s.insert(Vertex::Z(i, j), Vertex::X(i, j)).expect("𝔖 injective");
        }
    }
    FrakturMaps { p, r, s, t }
}

/// `h_x = p_i + |{k : T_{i,k} <= j}|` for `x = x_{i,j}`.
pub fn h(ds: &DefiningSystem, x: Vertex) -> Result<u32> {
    match x {
        Vertex::X(i, j) if i >= 1 && i <= ds.n() && j <= ds.top(i) => {
            Ok(ds.p_at(i) + ds.t_of(i).iter().filter(|&&t| t <= j).count() as u32)
        }
        _ => Err(Error::Domain(x.to_string(), "𝔵")),
    }
}

/// Navigation data of one defining system; μ and ν are precomputed for all of 𝔵.
#[derive(Clone, Debug)]
pub struct Navigator {
    pub quiver: BoundQuiver,
    pub classes: VertexClasses,
    pub maps: FrakturMaps,
    mu: BTreeMap<Vertex, Path>,
    nu: BTreeMap<Vertex, Path>,
}

impl Navigator {
    pub fn new(ds: &DefiningSystem) -> Navigator {
        let quiver = BoundQuiver::build(ds);
        let classes = classify(ds);
        let maps = fraktur(ds);
        let mut nav = Navigator { quiver, classes, maps, mu: BTreeMap::new(), nu: BTreeMap::new() };
        let xs: Vec<Vertex> = nav.classes.x.iter().copied().collect();
        let mut mu = BTreeMap::new();
        for &x in &xs {
            nav.mu_rec(x, &mut mu);
        }
        nav.mu = mu;
        let mut nu = BTreeMap::new();
        for &x in &xs {
            nav.nu_rec(x, &mut nu);
        }
        nav.nu = nu;
        nav
    }

    pub fn system(&self) -> &DefiningSystem {
        self.quiver.system()
    }

    fn arrow(&self, a: Arrow) -> Path {
        self.quiver.arrow_path(a).expect("arrow exists")
    }

    fn join(&self, parts: &[&Path]) -> Path {
        let mut acc = parts[0].clone();
        for p in &parts[1..] {
            acc = self.quiver.compose(&acc, p).expect("paths compose");
        }
        acc
    }

    fn mu_rec(&self, x: Vertex, memo: &mut BTreeMap<Vertex, Path>) -> Path {
        if let Some(p) = memo.get(&x) {
            return p.clone();
        }
        let ds = self.system();
        let path = if self.classes.x0.contains(&x) || self.classes.x1.contains(&x) {
            Path::trivial(x)
        } else if self.classes.x2.contains(&x) {
            let i = x.branch();
            let betas: Vec<Arrow> = (1..=ds.q_at(i)).rev().map(|j| Arrow::Beta(i, j)).collect();
            self.quiver.path(x, &betas).expect("β chain composes")
        } else {
            // (𝔵₃ ∪ 𝔵₄) ∖ 𝔵₂
            let rx = *self.maps.r.get(&x).expect("ℜ defined on 𝔵₃ ∪ 𝔵₄");
            let xi = self.arrow(self.xi_of(x));
            let gamma = self.arrow(Arrow::Gamma(rx.branch(), rx.level()));
            let rest = self.mu_rec(rx, memo);
            self.join(&[&xi, &gamma, &rest])
        };
        memo.insert(x, path.clone());
        path
    }

    fn nu_rec(&self, x: Vertex, memo: &mut BTreeMap<Vertex, Path>) -> Path {
        if let Some(p) = memo.get(&x) {
            return p.clone();
        }
        let st = self.maps.s.after(&self.maps.t);
        let path = if self.classes.x0.contains(&x) {
            let back = *self.maps.r.preimage(&x).expect("𝔵₀ ⊆ Im ℜ");
            let head = self.nu_rec(back, memo);
            let tail = self.mu[&back].clone();
            self.join(&[&head, &tail])
        } else if st.in_image(&x) {
            let back = *self.maps.r.preimage(&x).expect("Im 𝔖𝔗 ⊆ Im ℜ");
            let head = self.nu_rec(back, memo);
            let xi = self.arrow(self.xi_of(back));
            let gamma = self.arrow(Arrow::Gamma(x.branch(), x.level()));
            self.join(&[&head, &xi, &gamma])
        } else if self.maps.s.in_image(&x) {
            self.arrow(Arrow::Gamma(x.branch(), x.level()))
        } else {
            Path::trivial(x)
        };
        memo.insert(x, path.clone());
        path
    }

    /// `ξ_x` for `x = x_{i, p_i + j}`.
    fn xi_of(&self, x: Vertex) -> Arrow {
        let i = x.branch();
        Arrow::Xi(i, x.level() - self.system().p_at(i))
    }

    fn require_x(&self, x: Vertex) -> Result<()> {
        if self.classes.x.contains(&x) {
            Ok(())
        } else {
            Err(Error::Domain(x.to_string(), "𝔵"))
        }
    }

    pub fn h(&self, x: Vertex) -> Result<u32> {
        h(self.system(), x)
    }

    /// `ω_x = α_{i,j+1} ⋯ α_{i,h_x}`, a path `x_{i,h_x} → x`.
    pub fn omega(&self, x: Vertex) -> Result<Path> {
        let hx = self.h(x)?;
        let (i, j) = (x.branch(), x.level());
        let arrows: Vec<Arrow> = (j + 1..=hx).rev().map(|m| Arrow::Alpha(i, m)).collect();
        self.quiver.path(Vertex::X(i, hx), &arrows)
    }

    /// Maximal path of the second kind starting at `x`.
    pub fn mu(&self, x: Vertex) -> Result<&Path> {
        self.require_x(x)?;
        Ok(&self.mu[&x])
    }

    /// Maximal path of the second kind terminating at `x`.
    pub fn nu(&self, x: Vertex) -> Result<&Path> {
        self.require_x(x)?;
        Ok(&self.nu[&x])
    }

    /// `ℜ^j x` for the maximal `j` (closed form of `t μ_x`).
    pub fn mu_target_closed_form(&self, x: Vertex) -> Vertex {
        let j = self.maps.r.depth(&x, self.classes.x.len() + 1);
        self.maps.r.iterate(&x, j).expect("depth is defined")
    }

    /// Closed form of `s ν_x`.
    pub fn nu_source_closed_form(&self, x: Vertex) -> Vertex {
        let rinv = self.maps.r.inverse();
        let j = rinv.depth(&x, self.classes.x.len() + 1);
        let y = rinv.iterate(&x, j).expect("depth is defined");
        match self.maps.s.preimage(&y) {
            Some(z) => *z,
            None => y,
        }
    }

    pub fn st(&self) -> PartialMap<Vertex> {
        self.maps.s.after(&self.maps.t)
    }

    pub fn ps(&self) -> PartialMap<Vertex> {
        self.maps.p.after(&self.maps.s)
    }

    /// `γ_x` for `x ∈ Im 𝔖`.
    pub fn gamma_of(&self, x: Vertex) -> Option<Arrow> {
        self.maps.s.in_image(&x).then(|| Arrow::Gamma(x.branch(), x.level()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{enumerate, example_e1, Bounds};

    fn xs(v: &[(usize, u32)]) -> BTreeSet<Vertex> {
        v.iter().map(|&(i, j)| Vertex::X(i, j)).collect()
    }

    fn arrows(p: &Path) -> Vec<String> {
        p.arrows.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn e1_classes() {
        let c = classify(&example_e1());
        assert_eq!(c.x2, xs(&[(1, 6), (2, 3)]));
        assert_eq!(c.x3, xs(&[(1, 7)]));
        assert_eq!(c.x4, xs(&[(1, 8), (2, 3)]));
        assert_eq!(c.z.len(), 5);
        assert_eq!(c.x0.len(), 2);
    }

    #[test]
    fn fundamental_classes_collapse() {
        for ds in enumerate(Bounds::new(2, 3, 2, 0)).filter(|d| d.is_fundamental()) {
            let c = classify(&ds);
            assert!(c.x3.is_empty());
            assert_eq!(c.x4, c.x2);
            assert_eq!(c.x0.len(), ds.n());
        }
    }

    #[test]
    fn e1_maps() {
        let m = fraktur(&example_e1());
        let r: Vec<(Vertex, Vertex)> = m.r.iter().map(|(a, b)| (*a, *b)).collect();
        let mut expected = vec![
            (Vertex::X(1, 6), Vertex::X(2, 0)),
            (Vertex::X(2, 3), Vertex::X(1, 0)),
            (Vertex::X(1, 7), Vertex::X(1, 4)),
            (Vertex::X(1, 8), Vertex::X(1, 6)),
        ];
        expected.sort();
        assert_eq!(r, expected);
        let t: Vec<(Vertex, Vertex)> = m.t.iter().map(|(a, b)| (*a, *b)).collect();
        assert_eq!(t, vec![(Vertex::X(1, 7), Vertex::Z(1, 4)), (Vertex::X(1, 8), Vertex::Z(1, 6))]);
    }

    #[test]
    fn e1_h_and_omega() {
        let nav = Navigator::new(&example_e1());
        assert_eq!(nav.h(Vertex::X(1, 7)).unwrap(), 8);
        assert_eq!(arrows(&nav.omega(Vertex::X(1, 7)).unwrap()), ["alpha_1_8"]);
        assert_eq!(nav.h(Vertex::X(1, 8)).unwrap(), 8);
        assert!(nav.omega(Vertex::X(1, 8)).unwrap().is_trivial());
        assert_eq!(nav.h(Vertex::X(2, 1)).unwrap(), 3);
        let w = nav.omega(Vertex::X(2, 1)).unwrap();
        assert_eq!((w.source, w.target, w.len()), (Vertex::X(2, 3), Vertex::X(2, 1), 2));
        assert!(nav.h(Vertex::Z(1, 2)).is_err());
        assert!(nav.mu(Vertex::Y(1, 1)).is_err());
    }

    #[test]
    fn e1_mu_nu() {
        let nav = Navigator::new(&example_e1());
        let m = nav.mu(Vertex::X(1, 6)).unwrap();
        assert_eq!(arrows(m), ["beta_1_2", "beta_1_1"]);
        assert_eq!(m.target, Vertex::X(2, 0));
        let m = nav.mu(Vertex::X(1, 7)).unwrap();
        assert_eq!(arrows(m), ["xi_1_1", "gamma_1_4"]);
        assert_eq!(m.target, Vertex::X(1, 4));
        let v = nav.nu(Vertex::X(1, 6)).unwrap();
        assert_eq!(arrows(v), ["gamma_1_8", "xi_1_2", "gamma_1_6"]);
        assert_eq!(v.source, Vertex::Z(1, 8));
    }

    /// Follows the unique outgoing (resp. incoming) second-kind arrow.
    fn walk_second_kind(bq: &BoundQuiver, x: Vertex, forward: bool) -> Path {
        let mut arrows_seen = Vec::new();
        let mut at = x;
        loop {
            let next: Vec<_> = bq
                .arrows()
                .iter()
                .filter(|a| !a.arrow.is_first_kind() && if forward { a.source == at } else { a.target == at })
                .collect();
            assert!(next.len() <= 1, "second-kind arrows are unique at {at}");
            match next.first() {
                Some(a) => {
                    arrows_seen.push(a.arrow);
                    at = if forward { a.target } else { a.source };
                }
                None => break,
            }
        }
        if forward {
            bq.path(x, &arrows_seen).unwrap()
        } else {
            arrows_seen.reverse();
            bq.path(at, &arrows_seen).unwrap()
        }
    }

    /// Terminal vertex of the minimal nontrivial path of the given kind from `x`,
    /// optionally requiring the terminal vertex to be an `x` vertex.
    fn minimal_step(bq: &BoundQuiver, x: Vertex, first_kind: bool, want_x: bool) -> Option<Vertex> {
        let mut at = x;
        loop {
            let a = bq.arrows().iter().find(|a| a.source == at && a.arrow.is_first_kind() == first_kind)?;
            at = a.target;
            if !want_x || at.is_x() {
                return Some(at);
            }
        }
    }

    #[test]
    fn paths_and_maps_match_walk_oracles() {
        for ds in enumerate(Bounds::new(2, 4, 2, 2)) {
            let nav = Navigator::new(&ds);
            let bq = &nav.quiver;
            let st = nav.st();
            for &x in &nav.classes.x {
                assert_eq!(nav.mu(x).unwrap(), &walk_second_kind(bq, x, true), "μ {x} in {ds}");
                assert_eq!(nav.nu(x).unwrap(), &walk_second_kind(bq, x, false), "ν {x} in {ds}");
                assert_eq!(nav.mu(x).unwrap().target, nav.mu_target_closed_form(x));
                assert_eq!(nav.nu(x).unwrap().source, nav.nu_source_closed_form(x));
                let c = &nav.classes;
                assert_eq!(nav.mu(x).unwrap().is_trivial(), c.x0.contains(&x) || c.x1.contains(&x));
                assert_eq!(nav.nu(x).unwrap().is_trivial(), !c.x0.contains(&x) && !nav.maps.s.in_image(&x));
                assert_eq!(nav.omega(x).unwrap().is_trivial(), c.x4.contains(&x));
                assert_eq!(nav.maps.p.get(&x).copied(), minimal_step(bq, x, true, false));
                if nav.maps.r.in_domain(&x) {
                    assert_eq!(nav.maps.r.get(&x).copied(), minimal_step(bq, x, false, true));
                }
                if nav.maps.t.in_domain(&x) {
                    assert_eq!(nav.maps.t.get(&x).copied(), minimal_step(bq, x, false, false));
                }
            }
            for &z in &nav.classes.z {
                assert_eq!(nav.maps.s.get(&z).copied(), minimal_step(bq, z, false, false));
            }
            // 𝔖𝔗 = ℜ on (𝔵₃ ∪ 𝔵₄) ∖ 𝔵₂
            let c = &nav.classes;
            let r_restricted = nav.maps.r.restrict(|x| (c.x3.contains(x) || c.x4.contains(x)) && !c.x2.contains(x));
            assert_eq!(st, r_restricted, "{ds}");
            // domains
            let x_minus_x0: BTreeSet<_> = c.x.difference(&c.x0).copied().collect();
            assert_eq!(nav.maps.p.domain(), x_minus_x0);
            let dom_r: BTreeSet<_> = c.x2.iter().chain(&c.x3).chain(&c.x4).copied().collect();
            assert_eq!(nav.maps.r.domain(), dom_r);
            assert_eq!(nav.maps.s.domain(), c.z);
            let dom_t: BTreeSet<_> = c.x3.iter().chain(&c.x4).filter(|x| !c.x2.contains(x)).copied().collect();
            assert_eq!(nav.maps.t.domain(), dom_t);
        }
    }
}
