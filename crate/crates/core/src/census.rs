//! σ-cycles and the component census of the Auslander–Reiten quiver.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use crate::comb::CombStructure;
use crate::correspondence::derive_structure;
use crate::error::{Error, Result};
use crate::quiver::Vertex;
use crate::system::DefiningSystem;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaCycle {
    pub branch: usize,
    pub vertices: Vec<Vertex>,
}

/// One cycle per `j ∈ T_i` with no element of `S_i` in `[j+1, p_i+|T_i|]`.
pub fn sigma_cycles(ds: &DefiningSystem) -> Vec<SigmaCycle> {
    let mut out = Vec::new();
    for i in 1..=ds.n() {
        let top = ds.top(i);
        for &j in ds.t_of(i) {
            if (j + 1..=top).all(|l| !ds.in_s(i, l)) {
                out.push(SigmaCycle { branch: i, vertices: (j..top).map(|m| Vertex::X(i, m)).collect() });
            }
        }
    }
    out
}

/// The periodic orbits of σ on `Dom φ`, each sorted.
pub fn sigma_orbits(cs: &CombStructure<Vertex>) -> Vec<BTreeSet<Vertex>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for x in cs.phi.domain() {
        if seen.contains(&x) {
            continue;
        }
        let mut orbit = BTreeSet::new();
        let mut cur = x;
        while cs.phi.in_domain(&cur) && orbit.insert(cur) {
            cur = cs.sigma(&cur).expect("σ on Dom φ");
        }
        if cur == x {
            seen.extend(orbit.iter().copied());
            out.push(orbit);
        }
    }
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    /// `(Σ p_i, Σ q_i)` of the preprojective component.
    pub preprojective_type: (u32, u32),
    pub coray_tube_families: usize,
    pub first_type: usize,
    pub second_type: usize,
    pub preinjective_types: Vec<(u32, u32)>,
    pub has_zd_infinity: bool,
    pub has_za_infinity_infinity: bool,
    pub m: usize,
    pub n: usize,
    pub l: usize,
    pub sigma_cycles: Vec<SigmaCycle>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Census {
    Components(CensusReport),
    /// All `S_i` empty: the algebra is hereditary and the census does not apply.
    PreconditionUnmet { reason: String },
}

/// The census, with `M`, `N` and `L` cross-checked against the derived structure.
pub fn census(ds: &DefiningSystem) -> Result<Census> {
    let report = ds.validate();
    if !report.ok {
        return Err(Error::Invalid(report));
    }
    if ds.total_s() == 0 {
        return Ok(Census::PreconditionUnmet {
            reason: "fundamental system: the algebra is hereditary and the census needs some S_i nonempty".into(),
        });
    }
    let m = ds.total_s();
    let n = ds.total_t();
    let mut preinjective_types = Vec::new();
    for i in 1..=ds.n() {
        if let Some(&max_s) = ds.s_of(i).last() {
            if ds.in_t(i, max_s) {
                preinjective_types.push((2, ds.top(i) - max_s));
            }
        }
    }
    let l = preinjective_types.len();
    let cycles = sigma_cycles(ds);

    let d = derive_structure(ds);
    let mismatch = |what: &str, a: usize, b: usize| {
        Err(Error::Internal(format!("{what}: counted {a}, derived structure gives {b} for {ds}")))
    };
    if d.cs.rho.len() != m {
        return mismatch("M", m, d.cs.rho.len());
    }
    if d.cs.psi.len() != n {
        return mismatch("N", n, d.cs.psi.len());
    }
    if cycles.len() != l {
        return mismatch("L", l, cycles.len());
    }
    let orbits = sigma_orbits(&d.cs);
    let mut listed: Vec<BTreeSet<Vertex>> = cycles.iter().map(|c| c.vertices.iter().copied().collect()).collect();
    listed.sort();
    if orbits != listed {
        return Err(Error::Internal(format!("σ-cycles {listed:?} differ from σ orbits {orbits:?} for {ds}")));
    }
    for c in &cycles {
        let j = c.vertices[0].level();
        if ds.s_of(c.branch).last() != Some(&j) {
            return Err(Error::Internal(format!("σ-cycle on branch {} starts at {j}, not max S for {ds}", c.branch)));
        }
    }

    Ok(Census::Components(CensusReport {
        preprojective_type: (ds.p.iter().sum(), ds.q.iter().sum()),
        coray_tube_families: n + 1,
        first_type: m - n,
        second_type: n,
        preinjective_types,
        has_zd_infinity: n > 0,
        has_za_infinity_infinity: n > l,
        m,
        n,
        l,
        sigma_cycles: cycles,
    }))
}

impl Census {
    /// JSON mirroring [`CensusReport`], with the component flags spelled out.
    pub fn to_json_value(&self) -> Value {
        match self {
            Census::PreconditionUnmet { reason } => json!({"status": "precondition_unmet", "reason": reason}),
            Census::Components(r) => json!({
                "status": "components",
                "preprojective_type": [r.preprojective_type.0, r.preprojective_type.1],
                "coray_tube_families": r.coray_tube_families,
                "first_type": r.first_type,
                "second_type": r.second_type,
                "preinjective_types": r.preinjective_types.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
                "has_ZD_infinity": r.has_zd_infinity,
                "has_ZA_infinity_infinity": r.has_za_infinity_infinity,
                "M": r.m,
                "N": r.n,
                "L": r.l,
                "sigma_cycles": r.sigma_cycles.iter().map(|c| json!({
                    "branch": c.branch,
                    "vertices": c.vertices.iter().map(Vertex::cli_name).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
            }),
        }
    }
}

impl fmt::Display for Census {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = match self {
            Census::PreconditionUnmet { reason } => return writeln!(f, "precondition unmet: {reason}"),
            Census::Components(r) => r,
        };
        let yes_no = |b: bool| if b { "yes" } else { "no" };
        writeln!(f, "preprojective component: type A~({},{})", r.preprojective_type.0, r.preprojective_type.1)?;
        writeln!(f, "coray tube families: {}", r.coray_tube_families)?;
        writeln!(f, "first-type components: {}", r.first_type)?;
        writeln!(f, "second-type components: {}", r.second_type)?;
        if r.preinjective_types.is_empty() {
            writeln!(f, "preinjective components: none")?;
        }
        for (a, b) in &r.preinjective_types {
            writeln!(f, "preinjective component: type A~({a},{b})")?;
        }
        writeln!(f, "ZD_inf components: {}", yes_no(r.has_zd_infinity))?;
        writeln!(f, "ZA_inf^inf components: {}", yes_no(r.has_za_infinity_infinity))?;
        writeln!(f, "M = {}, N = {}, L = {}", r.m, r.n, r.l)?;
        for c in &r.sigma_cycles {
            let names: Vec<String> = c.vertices.iter().map(Vertex::cli_name).collect();
            writeln!(f, "sigma-cycle on branch {}: {{{}}}", c.branch, names.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{enumerate, example_e1, Bounds};

    fn components(ds: &DefiningSystem) -> CensusReport {
        match census(ds).unwrap() {
            Census::Components(r) => r,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn e1_census() {
        let r = components(&example_e1());
        assert_eq!(r.preprojective_type, (9, 4));
        assert_eq!((r.coray_tube_families, r.first_type, r.second_type), (3, 3, 2));
        assert!(r.preinjective_types.is_empty() && r.sigma_cycles.is_empty());
        assert!(r.has_zd_infinity && r.has_za_infinity_infinity);
        assert_eq!((r.m, r.n, r.l), (5, 2, 0));
    }

    #[test]
    fn single_cycle() {
        let ds = DefiningSystem::new_valid(vec![2, 1], vec![1, 1], vec![vec![2], vec![]], vec![vec![2], vec![]]).unwrap();
        let r = components(&ds);
        assert_eq!(r.sigma_cycles, vec![SigmaCycle { branch: 1, vertices: vec![Vertex::X(1, 2)] }]);
        assert_eq!(r.preinjective_types, vec![(2, 1)]);
        assert_eq!(r.l, 1);
        assert!(r.has_zd_infinity && !r.has_za_infinity_infinity);
    }

    #[test]
    fn fundamental_is_precondition_unmet() {
        let ds = DefiningSystem::fundamental(vec![2, 1], vec![1, 1]).unwrap();
        assert!(matches!(census(&ds).unwrap(), Census::PreconditionUnmet { .. }));
        assert!(sigma_cycles(&ds).is_empty());
    }

    #[test]
    fn sweep_is_consistent() {
        for ds in enumerate(Bounds::new(2, 4, 2, 2)) {
            match census(&ds).unwrap() {
                Census::Components(r) => {
                    assert_eq!(r.l, r.sigma_cycles.len());
                    assert_eq!(r.has_za_infinity_infinity, r.n > r.l);
                    for c in &r.sigma_cycles {
                        assert_eq!(c.vertices.len() as u32, ds.top(c.branch) - ds.s_of(c.branch).last().unwrap());
                    }
                }
                Census::PreconditionUnmet { .. } => assert!(ds.is_fundamental()),
            }
        }
    }
}
