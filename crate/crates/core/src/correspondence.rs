//! The combinatorial structure of a defining system, admissible indices,
//! extensions of defining systems and ancestry chains.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::comb::CombStructure;
use crate::error::{Error, Result};
use crate::navigation::Navigator;
use crate::pmap::PartialMap;
use crate::quiver::Vertex;
use crate::system::DefiningSystem;

#[derive(Clone, Debug)]
pub struct DerivedStructure {
    pub nav: Navigator,
    pub cs: CombStructure<Vertex>,
}

impl DerivedStructure {
    pub fn system(&self) -> &DefiningSystem {
        self.nav.system()
    }
}

/// The five-case label `l_x` (defined on all of `I`).
fn label(ds: &DefiningSystem, nav: &Navigator, x: Vertex) -> i64 {
    let maps = &nav.maps;
    if let Vertex::X(i, j) = x {
        let prev = ds.wrap(i as i64 - 1);
        if j == 1 && ds.p_at(i) > 1 {
            return -(ds.q_at(prev) as i64);
        }
        if j == 0 && ds.p_at(prev) == 1 {
            return -(ds.q_at(ds.wrap(i as i64 - 2)) as i64);
        }
        if let Some(px) = maps.p.get(&x) {
            if nav.st().in_image(px) {
                return -2;
            }
        }
        if let (Some(a), Some(b)) = (maps.p.preimage(&x), maps.r.preimage(&x)) {
            if a == b {
                return -2;
            }
        }
    }
    0
}

pub fn derive_structure(ds: &DefiningSystem) -> DerivedStructure {
    let nav = Navigator::new(ds);
    let c = &nav.classes;
    let maps = &nav.maps;
    let ps = nav.ps();
    let indices: BTreeSet<Vertex> = c.x.difference(&c.x4).chain(&c.z).copied().collect();

    let mut phi = PartialMap::new();
    for &x in &indices {
        if ps.in_image(&x) || maps.t.in_image(&x) {
            continue;
        }
        let base = if x.is_x() { *maps.p.preimage(&x).expect("x ∉ 𝔵₄") } else { *maps.s.get(&x).expect("z ∈ Dom 𝔖") };
        phi.insert(x, nav.mu_target_closed_form(base)).expect("phi injective");
    }
    let rho = ps.inverse();
    let psi = maps.r.restrict(|x| !c.x4.contains(x)).inverse();
    let mut cs = CombStructure { indices, phi, rho, psi, l: BTreeMap::new() };
    cs.l = cs.l_domain().into_iter().map(|x| (x, label(ds, &nav, x))).collect();
    let cs = CombStructure::new(cs.indices, cs.phi, cs.rho, cs.psi, cs.l).expect("derived structure is well formed");
    DerivedStructure { nav, cs }
}

impl DerivedStructure {
    fn require_dom_phi(&self, x: Vertex) -> Result<()> {
        if self.cs.phi.in_domain(&x) {
            Ok(())
        } else {
            Err(Error::Domain(x.to_string(), "Dom phi"))
        }
    }

    /// `ψ^{v_x} x` via `s ν_x`.
    pub fn psi_top_closed_form(&self, x: Vertex) -> Result<Vertex> {
        if !self.cs.indices.contains(&x) {
            return Err(Error::Domain(x.to_string(), "I"));
        }
        if x.is_z() {
            return Ok(x);
        }
        let c = &self.nav.classes;
        let maps = &self.nav.maps;
        let s = self.nav.nu(x)?.source;
        let base = if s.is_z() { *maps.s.get(&s).expect("z ∈ Dom 𝔖") } else { s };
        Ok(if c.x4.contains(&base) { *maps.r.get(&base).expect("𝔵₄ ⊆ Dom ℜ") } else { base })
    }

    /// Closed form of `σ` on `Dom φ`.
    pub fn sigma_closed_form(&self, x: Vertex) -> Result<Vertex> {
        self.require_dom_phi(x)?;
        let maps = &self.nav.maps;
        let base = if x.is_x() { *maps.p.preimage(&x).expect("x ∉ 𝔵₄") } else { *maps.s.get(&x).expect("z ∈ Dom 𝔖") };
        Ok(if self.nav.classes.x4.contains(&base) { *maps.r.get(&base).expect("𝔵₄ ⊆ Dom ℜ") } else { base })
    }

    /// Closed form of `η` on `Dom φ ∪ Dom ρ`.
    pub fn eta_closed_form(&self, x: Vertex) -> Result<Vertex> {
        if self.nav.ps().in_image(&x) {
            let maps = &self.nav.maps;
            let up = maps.p.preimage(&x).expect("Im 𝔓𝔖 ⊆ Im 𝔓");
            return Ok(*maps.s.preimage(up).expect("𝔓⁻x ∈ Im 𝔖"));
        }
        self.sigma_closed_form(x).map_err(|_| Error::Domain(x.to_string(), "Dom phi ∪ Dom rho"))
    }

    /// `s ν_{φ x}` via its closed form.
    pub fn s_nu_phi_closed_form(&self, x: Vertex) -> Result<Vertex> {
        self.require_dom_phi(x)?;
        Ok(if x.is_x() { *self.nav.maps.p.preimage(&x).expect("x ∉ 𝔵₄") } else { x })
    }
}

/// The admissible indices predicted by the vertex-level characterization.
pub fn admissible_lemma(ds: &DefiningSystem) -> BTreeSet<Vertex> {
    admissible_lemma_nav(&Navigator::new(ds))
}

pub fn admissible_lemma_nav(nav: &Navigator) -> BTreeSet<Vertex> {
    nav.classes
        .x
        .iter()
        .chain(&nav.classes.z)
        .copied()
        .filter(|&y| lemma_failure(nav, y).is_none())
        .collect()
}

/// Why `y` is excluded by the characterization, if it is.
pub fn lemma_failure(nav: &Navigator, y: Vertex) -> Option<&'static str> {
    let c = &nav.classes;
    let maps = &nav.maps;
    let ds = nav.system();
    match y {
        Vertex::X(..) => {
            if !c.x.contains(&y) {
                return Some("not a vertex of the quiver");
            }
            let ps = nav.ps();
            let pps = maps.p.after(&ps);
            if c.x0.contains(&y) {
                Some("y ∈ 𝔵₀")
            } else if c.x4.contains(&y) {
                Some("y ∈ 𝔵₄")
            } else if maps.s.in_image(&y) {
                Some("y ∈ Im 𝔖")
            } else if ps.in_image(&y) {
                Some("y ∈ Im 𝔓𝔖")
            } else if pps.in_image(&y) {
                Some("y ∈ Im 𝔓²𝔖")
            } else {
                None
            }
        }
        Vertex::Z(i, j) => {
            if !c.z.contains(&y) {
                Some("not a vertex of the quiver")
            } else if maps.t.in_image(&y) {
                Some("y ∈ Im 𝔗")
            } else if ds.t_of(i).last().is_some_and(|&m| j <= m) {
                Some("j ≤ max T_i")
            } else {
                None
            }
        }
        Vertex::Y(..) => Some("y-vertices are never indices"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionStep {
    pub index: Vertex,
    pub system: DefiningSystem,
    pub new_index: Vertex,
}

pub fn extend_ds(ds: &DefiningSystem, y: Vertex) -> Result<ExtensionStep> {
    let nav = Navigator::new(ds);
    if let Some(why) = lemma_failure(&nav, y) {
        return Err(Error::Inadmissible { index: y.cli_name(), reason: why.to_string() });
    }
    let mut s = ds.s.clone();
    let mut t = ds.t.clone();
    let (system, new_index) = match y {
        Vertex::X(i, j) => {
            s[i - 1].push(j + 1);
            s[i - 1].sort_unstable();
            (DefiningSystem::new_valid(ds.p.clone(), ds.q.clone(), s, t)?, Vertex::Z(i, j + 1))
        }
        Vertex::Z(i, j) => {
            let top = ds.top(i);
            t[i - 1].push(j);
            t[i - 1].sort_unstable();
            (DefiningSystem::new_valid(ds.p.clone(), ds.q.clone(), s, t)?, Vertex::X(i, top))
        }
        Vertex::Y(..) => unreachable!("rejected by lemma_failure"),
    };
    Ok(ExtensionStep { index: y, system, new_index })
}

/// Compares the derived structure of the extended system with the abstract extension.
/// Returns the list of differences (empty on agreement).
pub fn cross_check_extension(ds: &DefiningSystem, y: Vertex) -> Result<Vec<String>> {
    let step = extend_ds(ds, y)?;
    let abstract_ext = derive_structure(ds).cs.extend(&y, step.new_index)?;
    let concrete = derive_structure(&step.system).cs;
    Ok(concrete.diff(&abstract_ext))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ancestry {
    pub start: DefiningSystem,
    pub steps: Vec<ExtensionStep>,
}

impl Ancestry {
    pub fn end(&self) -> &DefiningSystem {
        self.steps.last().map_or(&self.start, |s| &s.system)
    }
}

/// A chain of admissible extensions from the fundamental system to `ds`.
///
/// Pending targets are scheduled greedily by `(branch, value, S before T)`;
/// every step goes through [`extend_ds`], so its admissibility is re-checked.
pub fn ancestry(ds: &DefiningSystem) -> Result<Ancestry> {
    let report = ds.validate();
    if !report.ok {
        return Err(Error::Invalid(report));
    }
    let start = ds.fundamental_of();
    let mut cur = start.clone();
    let mut steps = Vec::new();
    let total = ds.total_s() + ds.total_t();
    let consider = |best: &mut Option<(usize, u32, u8)>, cand| {
        if best.is_none_or(|b| cand < b) {
            *best = Some(cand);
        }
    };
    while steps.len() < total {
        let mut best: Option<(usize, u32, u8)> = None;
        for i in 1..=ds.n() {
            let top = cur.top(i);
            for &s in ds.s_of(i).iter().filter(|&&s| !cur.in_s(i, s)) {
                let free = !cur.in_s(i, s - 1) && !cur.in_s(i, s + 1);
                if s <= top && free {
                    consider(&mut best, (i, s, 0));
                }
            }
            let max_t = cur.t_of(i).last().copied().unwrap_or(0);
            for &t in ds.t_of(i).iter().filter(|&&t| !cur.in_t(i, t)) {
                if cur.in_s(i, t) && t > max_t {
                    consider(&mut best, (i, t, 1));
                }
            }
        }
        let Some((i, value, kind)) = best else {
            return Err(Error::Unreachable(format!(
                "no applicable extension from {cur} towards {ds} after {} steps",
                steps.len()
            )));
        };
        let y = if kind == 0 { Vertex::X(i, value - 1) } else { Vertex::Z(i, value) };
        let step = extend_ds(&cur, y).map_err(|e| Error::Unreachable(format!("scheduled {y} from {cur}: {e}")))?;
        cur = step.system.clone();
        steps.push(step);
    }
    if cur != *ds {
        return Err(Error::Unreachable(format!("chain ended at {cur}, expected {ds}")));
    }
    Ok(Ancestry { start, steps })
}
