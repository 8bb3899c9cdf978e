//! Batch verification over every defining system within given bounds.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::lemmas::{verify_lemmas, LemmaId, Tally};
use crate::algebra::{algebra_dim_oracle, total_path_count, Algebra};
use crate::census::census;
use crate::correspondence::{admissible_lemma, ancestry, cross_check_extension, derive_structure, extend_ds, DerivedStructure};
use crate::quiver::Vertex;
use crate::system::{enumerate, Bounds, DefiningSystem};

/// Systems with more paths than this skip the dimension oracle.
pub const ORACLE_PATH_CAP: u128 = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckId {
    Axioms,
    ClosedForms,
    Lemma1,
    Lemma2,
    Ancestry,
    Census,
    AlgebraDim,
    Lemmas,
}

impl CheckId {
    pub fn name(self) -> &'static str {
        match self {
            CheckId::Axioms => "axioms",
            CheckId::ClosedForms => "closed_forms",
            CheckId::Lemma1 => "lemma1",
            CheckId::Lemma2 => "lemma2",
            CheckId::Ancestry => "ancestry",
            CheckId::Census => "census",
            CheckId::AlgebraDim => "algebra_dim",
            CheckId::Lemmas => "lemmas",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    /// Canonical JSON of the system.
    pub system: String,
    pub check: CheckId,
    pub witness: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SystemOutcome {
    /// Checks that ran (a check skipped for size is absent).
    pub ran: BTreeSet<CheckId>,
    pub failures: Vec<Failure>,
    pub lemma_tallies: BTreeMap<LemmaId, Tally>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOptions {
    pub bounds: Bounds,
    pub budget: usize,
    pub lemmas: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub options: CheckOptions,
    pub systems: usize,
    pub checks: BTreeMap<CheckId, Tally>,
    pub lemma_tallies: BTreeMap<LemmaId, Tally>,
    pub failures: Vec<Failure>,
}

impl CheckReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_text(&self) -> String {
        let b = self.options.bounds;
        let mut out = format!(
            "bounds n<={} p<={} q<={} |T|<={}; lemma budget {}\nsystems {}\n",
            b.max_n, b.max_p, b.max_q, b.max_t, self.options.budget, self.systems
        );
        for (id, t) in &self.checks {
            out.push_str(&format!("{:<13} {}/{} systems passed\n", id.name(), t.passed, t.checked));
        }
        for (id, t) in &self.lemma_tallies {
            out.push_str(&format!("  {:<11} {}/{} instances passed\n", id.name(), t.passed, t.checked));
        }
        for f in &self.failures {
            out.push_str(&format!("FAIL {} {}: {}\n", f.check.name(), f.system, f.witness));
        }
        out.push_str(if self.ok() { "result: ok\n" } else { "result: FAILED\n" });
        out
    }
}

struct Run<'a> {
    ds: &'a DefiningSystem,
    out: SystemOutcome,
}

impl Run<'_> {
    fn fail(&mut self, check: CheckId, witness: String) {
        self.out.failures.push(Failure { system: self.ds.to_json(), check, witness });
    }

    fn check(&mut self, check: CheckId, witnesses: Vec<String>) {
        self.out.ran.insert(check);
        for w in witnesses {
            self.fail(check, w);
        }
    }
}

/// Disagreements between the closed forms and the generic recomputation.
pub fn closed_form_failures(d: &DerivedStructure) -> Vec<String> {
    let cs = &d.cs;
    let mut out = Vec::new();
    for v in &cs.indices {
        match d.psi_top_closed_form(*v) {
            Ok(w) if w == cs.psi_top(v) => {}
            other => out.push(format!("ψ^v {}: {:?} vs {}", v.cli_name(), other, cs.psi_top(v))),
        }
        if cs.phi.in_domain(v) {
            let generic = cs.sigma(v).ok();
            let closed = d.sigma_closed_form(*v).ok();
            if generic != closed {
                out.push(format!("σ {}: {generic:?} vs {closed:?}", v.cli_name()));
            }
            let phi_v = cs.phi.get(v).expect("in domain");
            let s_nu = d.nav.nu(*phi_v).map(|p| p.source).ok();
            if s_nu != d.s_nu_phi_closed_form(*v).ok() {
                out.push(format!("s ν_φ {}", v.cli_name()));
            }
        }
        if let Ok(e) = cs.eta(v) {
            if d.eta_closed_form(*v).ok() != Some(e) {
                out.push(format!("η {}", v.cli_name()));
            }
        }
    }
    out
}

/// All checks on one system.
pub fn check_system(ds: &DefiningSystem, budget: usize, lemmas: bool) -> SystemOutcome {
    let mut run = Run { ds, out: SystemOutcome::default() };
    let d = derive_structure(ds);

    let axioms = d.cs.check_axioms();
    let axiom_failures =
        axioms.failures().into_iter().map(|(a, w)| format!("{a:?} at {w:?}")).collect::<Vec<_>>();
    run.check(CheckId::Axioms, axiom_failures);
    run.check(CheckId::ClosedForms, closed_form_failures(&d));

    let adm = match d.cs.admissible_set() {
        Ok(a) => a,
        Err(e) => {
            run.fail(CheckId::Lemma1, e.to_string());
            BTreeSet::new()
        }
    };
    let lemma = admissible_lemma(ds);
    let mut w1 = Vec::new();
    if adm != lemma {
        let names = |s: &BTreeSet<Vertex>| s.iter().map(Vertex::cli_name).collect::<Vec<_>>().join(",");
        w1.push(format!("structure {{{}}} vs characterization {{{}}}", names(&adm), names(&lemma)));
    }
    run.check(CheckId::Lemma1, w1);

    let mut w2 = Vec::new();
    for y in &adm {
        match cross_check_extension(ds, *y) {
            Ok(diff) if diff.is_empty() => {}
            Ok(diff) => w2.push(format!("extension by {}: {}", y.cli_name(), diff.join("; "))),
            Err(e) => w2.push(format!("extension by {}: {e}", y.cli_name())),
        }
    }
    run.check(CheckId::Lemma2, w2);

    let mut w3 = Vec::new();
    match ancestry(ds) {
        Ok(a) => {
            if a.steps.len() != ds.total_s() + ds.total_t() {
                w3.push(format!("chain length {}", a.steps.len()));
            }
            let mut cur = a.start.clone();
            for step in &a.steps {
                if !admissible_lemma(&cur).contains(&step.index) {
                    w3.push(format!("{} not admissible in {cur}", step.index.cli_name()));
                    break;
                }
                match extend_ds(&cur, step.index) {
                    Ok(s) => cur = s.system,
                    Err(e) => {
                        w3.push(e.to_string());
                        break;
                    }
                }
            }
            if cur.to_json() != ds.to_json() {
                w3.push(format!("fold ends at {cur}"));
            }
        }
        Err(e) => w3.push(e.to_string()),
    }
    run.check(CheckId::Ancestry, w3);

    let w4 = match census(ds) {
        Ok(_) => Vec::new(),
        Err(e) => vec![e.to_string()],
    };
    run.check(CheckId::Census, w4);

    let bq = &d.nav.quiver;
    if total_path_count(bq) <= ORACLE_PATH_CAP {
        let w5 = match Algebra::from_quiver(bq.clone()) {
            Ok(alg) => {
                let oracle = algebra_dim_oracle(bq);
                if alg.dim() == oracle {
                    Vec::new()
                } else {
                    vec![format!("normal forms {} vs oracle {oracle}", alg.dim())]
                }
            }
            Err(e) => vec![e.to_string()],
        };
        run.check(CheckId::AlgebraDim, w5);
    }

    if lemmas {
        match verify_lemmas(ds, &LemmaId::ALL, budget) {
            Ok(r) if r.skipped => {}
            Ok(r) => {
                let w = r
                    .mismatches
                    .iter()
                    .map(|m| format!("{} {}: expected {}, got {}", m.lemma, m.witness, m.expected, m.actual))
                    .collect();
                run.check(CheckId::Lemmas, w);
                run.out.lemma_tallies = r.tallies;
            }
            Err(e) => run.check(CheckId::Lemmas, vec![e.to_string()]),
        }
    }
    run.out
}

/// Runs [`check_system`] over the enumeration in parallel; the report follows enumeration order.
pub fn check_all(options: CheckOptions) -> CheckReport {
    let systems: Vec<DefiningSystem> = enumerate(options.bounds).collect();
    let outcomes: Vec<SystemOutcome> =
        systems.par_iter().map(|ds| check_system(ds, options.budget, options.lemmas)).collect();
    let mut report = CheckReport {
        options,
        systems: systems.len(),
        checks: BTreeMap::new(),
        lemma_tallies: BTreeMap::new(),
        failures: Vec::new(),
    };
    for o in outcomes {
        for id in &o.ran {
            let t = report.checks.entry(*id).or_default();
            t.checked += 1;
            if o.failures.iter().all(|f| f.check != *id) {
                t.passed += 1;
            }
        }
        for (id, t) in &o.lemma_tallies {
            let acc = report.lemma_tallies.entry(*id).or_default();
            acc.checked += t.checked;
            acc.passed += t.passed;
        }
        report.failures.extend(o.failures);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::example_e1;

    #[test]
    fn e1_passes_everything() {
        let out = check_system(&example_e1(), 1000, true);
        assert!(out.failures.is_empty(), "{:?}", out.failures);
        assert!(out.ran.contains(&CheckId::Lemmas));
        assert!(out.ran.contains(&CheckId::AlgebraDim));
    }

    #[test]
    fn small_sweep_is_clean_and_ordered() {
        let options = CheckOptions { bounds: Bounds::new(1, 3, 2, 1), budget: 60, lemmas: true };
        let a = check_all(options);
        assert!(a.ok(), "{}", a.to_text());
        assert_eq!(a.to_text(), check_all(options).to_text());
        assert_eq!(a.checks[&CheckId::Axioms].checked, a.systems);
    }
}
