//! The modules `X_x`, `R_x` and exhaustive checks of the homological lemmas
//! (translates, Hom tables, Ext, the one-point extension identity).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::basis::Algebra;
use super::module::{
    ext1_dim, hom_dim, is_homomorphism, is_isomorphic, min_proj_presentation, nonsplit_extension, projective, restrict,
    splits, string_module, tau, Extension, Iso, Rep,
};
use crate::correspondence::{admissible_lemma_nav, derive_structure, extend_ds, DerivedStructure};
use crate::error::{Error, Result};
use crate::quiver::{Path, Vertex};
use crate::system::DefiningSystem;

/// Default cap on the algebra dimension for [`verify_lemmas`].
pub const DEFAULT_BUDGET: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LemmaId {
    /// `τ X_{φx} ≅ X_x` and the shape of the minimal presentation.
    Tau,
    /// `End(X_x) = k` for all `x ∈ I`.
    End,
    /// `dim Ext¹(X_{φx}, X_x) = 1` and `R_x` is a nonsplit extension.
    Ext,
    HomX,
    HomRX,
    HomR,
    /// `l_x = 1 - dim τ X_x` on fundamental systems.
    LFund,
    /// Hom between string modules against the segment criterion.
    Paths,
    /// `rad P'(y')` restricted to the old quiver is `R_y`.
    OnePoint,
}

impl LemmaId {
    pub const ALL: [LemmaId; 9] = [
        LemmaId::Tau,
        LemmaId::End,
        LemmaId::Ext,
        LemmaId::HomX,
        LemmaId::HomRX,
        LemmaId::HomR,
        LemmaId::LFund,
        LemmaId::Paths,
        LemmaId::OnePoint,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LemmaId::Tau => "tau",
            LemmaId::End => "end",
            LemmaId::Ext => "ext",
            LemmaId::HomX => "homx",
            LemmaId::HomRX => "homrx",
            LemmaId::HomR => "homr",
            LemmaId::LFund => "lfund",
            LemmaId::Paths => "paths",
            LemmaId::OnePoint => "onepoint",
        }
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LemmaId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LemmaId::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown lemma id {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub lemma: LemmaId,
    pub witness: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub checked: usize,
    pub passed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub system: DefiningSystem,
    pub algebra_dim: usize,
    pub budget: usize,
    /// Set when the algebra exceeds the budget; nothing was checked.
    pub skipped: bool,
    pub tallies: BTreeMap<LemmaId, Tally>,
    pub mismatches: Vec<Mismatch>,
}

impl LemmaReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }

    fn record(&mut self, lemma: LemmaId, witness: impl FnOnce() -> String, expected: String, actual: String) {
        let t = self.tallies.entry(lemma).or_default();
        t.checked += 1;
        if expected == actual {
            t.passed += 1;
        } else {
            self.mismatches.push(Mismatch { lemma, witness: witness(), expected, actual });
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("system {}\nalgebra dimension {}", self.system.to_json(), self.algebra_dim);
        if self.skipped {
            out.push_str(&format!(" exceeds budget {}; skipped\n", self.budget));
            return out;
        }
        out.push('\n');
        for (id, t) in &self.tallies {
            out.push_str(&format!("{:<9} {}/{} passed\n", id.name(), t.passed, t.checked));
        }
        for m in &self.mismatches {
            out.push_str(&format!(
                "MISMATCH {} at {}: expected {}, got {}\n",
                m.lemma, m.witness, m.expected, m.actual
            ));
        }
        out
    }
}

/// The string modules `X_x` and the extensions `R_x` of one defining system.
pub struct FormalModules {
    pub alg: Algebra,
    pub derived: DerivedStructure,
}

impl FormalModules {
    pub fn new(ds: &DefiningSystem) -> Result<FormalModules> {
        Ok(FormalModules { alg: Algebra::new(ds)?, derived: derive_structure(ds) })
    }

    pub fn from_parts(alg: Algebra, derived: DerivedStructure) -> FormalModules {
        FormalModules { alg, derived }
    }

    /// The path whose string module is `X_x`.
    pub fn x_path(&self, x: Vertex) -> Result<Path> {
        let nav = &self.derived.nav;
        if !self.derived.cs.indices.contains(&x) {
            return Err(Error::Domain(x.cli_name(), "I"));
        }
        if x.is_x() {
            Ok(nav.nu(x)?.clone())
        } else {
            let base = *nav.ps().get(&x).expect("z ∈ Dom 𝔓𝔖");
            nav.omega(base)
        }
    }

    pub fn x_module(&self, x: Vertex) -> Result<Rep> {
        string_module(&self.alg, &self.x_path(x)?)
    }

    /// `0 → X_x → R_x → X_{φx} → 0`, nonsplit.
    pub fn r_extension(&self, x: Vertex) -> Result<Extension> {
        let phi_x = *self.derived.cs.phi.get(&x).ok_or_else(|| Error::Domain(x.cli_name(), "Dom phi"))?;
        let top = self.x_module(phi_x)?;
        let bottom = self.x_module(x)?;
        let e = ext1_dim(&self.alg, &top, &bottom);
        if e != 1 {
            return Err(Error::Internal(format!("dim Ext¹(X_φx, X_x) = {e} at x = {}", x.cli_name())));
        }
        Ok(nonsplit_extension(&self.alg, &top, &bottom).expect("Ext¹ ≠ 0"))
    }

    pub fn r_module(&self, x: Vertex) -> Result<Rep> {
        Ok(self.r_extension(x)?.middle)
    }
}

/// `1` iff a source-end segment of `first` equals a target-end segment of `second`.
pub fn hom_dim_paths(first: &Path, second: &Path) -> usize {
    if first.source == second.target {
        return 1;
    }
    let (a, b) = (&first.arrows, &second.arrows);
    usize::from((1..=a.len().min(b.len())).any(|k| a[..k] == b[b.len() - k..]))
}

fn iso_text(i: Iso) -> String {
    match i {
        Iso::Yes => "isomorphic".into(),
        Iso::No => "not isomorphic".into(),
        Iso::NotFound => "no isomorphism found".into(),
    }
}

fn names(vs: &[Vertex]) -> String {
    let v: Vec<String> = vs.iter().map(Vertex::cli_name).collect();
    format!("[{}]", v.join(","))
}

/// Runs the selected checks on `ds` if its algebra dimension is within `budget`.
pub fn verify_lemmas(ds: &DefiningSystem, lemmas: &[LemmaId], budget: usize) -> Result<LemmaReport> {
    let alg = Algebra::new(ds)?;
    let mut report = LemmaReport {
        system: ds.clone(),
        algebra_dim: alg.dim(),
        budget,
        skipped: alg.dim() > budget,
        tallies: BTreeMap::new(),
        mismatches: Vec::new(),
    };
    if report.skipped {
        return Ok(report);
    }
    let fm = FormalModules::from_parts(alg, derive_structure(ds));
    let mut x_modules = BTreeMap::new();
    for &x in &fm.derived.cs.indices {
        match fm.x_module(x) {
            Ok(m) => {
                x_modules.insert(x, m);
            }
            Err(e) => report.mismatches.push(Mismatch {
                lemma: LemmaId::End,
                witness: x.cli_name(),
                expected: "X_x is a module".into(),
                actual: e.to_string(),
            }),
        }
    }
    if !report.mismatches.is_empty() {
        return Ok(report);
    }
    let ctx = Ctx { fm: &fm, xm: &x_modules };
    for &lemma in lemmas {
        match lemma {
            LemmaId::Tau => ctx.check_tau(&mut report),
            LemmaId::End => ctx.check_end(&mut report),
            LemmaId::Ext => ctx.check_ext(&mut report),
            LemmaId::HomX => ctx.check_homx(&mut report),
            LemmaId::HomRX => ctx.check_homrx(&mut report)?,
            LemmaId::HomR => ctx.check_homr(&mut report)?,
            LemmaId::LFund => ctx.check_lfund(&mut report),
            LemmaId::Paths => ctx.check_paths(&mut report)?,
            LemmaId::OnePoint => ctx.check_onepoint(&mut report)?,
        }
    }
    Ok(report)
}

struct Ctx<'a> {
    fm: &'a FormalModules,
    xm: &'a BTreeMap<Vertex, Rep>,
}

impl Ctx<'_> {
    fn alg(&self) -> &Algebra {
        &self.fm.alg
    }

    fn ds(&self) -> &DefiningSystem {
        self.fm.derived.system()
    }

    fn phi_pairs(&self) -> Vec<(Vertex, Vertex)> {
        self.fm.derived.cs.phi.iter().map(|(a, b)| (*a, *b)).collect()
    }

    fn check_tau(&self, report: &mut LemmaReport) {
        let nav = &self.fm.derived.nav;
        let alg = self.alg();
        let ids = |vs: Vec<usize>| -> Vec<Vertex> { vs.into_iter().map(|v| alg.quiver().vertices()[v]).collect() };
        for (x, fx) in self.phi_pairs() {
            let w = || x.cli_name();
            let pres = min_proj_presentation(alg, &self.xm[&fx]);
            let (p0, p1) = (ids(pres.p0_tops()), ids(pres.p1_tops()));
            let expected = if x.is_x() {
                (vec![*nav.maps.p.preimage(&x).expect("x ∉ 𝔵₄")], vec![x])
            } else {
                (vec![x], vec![*nav.ps().get(&x).expect("z ∈ Dom 𝔓𝔖")])
            };
            report.record(
                LemmaId::Tau,
                || format!("{} presentation", x.cli_name()),
                format!("P1 {} -> P0 {}", names(&expected.1), names(&expected.0)),
                format!("P1 {} -> P0 {}", names(&p1), names(&p0)),
            );
            let (t, _) = tau(alg, &self.xm[&fx]);
            report.record(LemmaId::Tau, w, iso_text(Iso::Yes), iso_text(is_isomorphic(alg, &t, &self.xm[&x])));
        }
    }

    fn check_end(&self, report: &mut LemmaReport) {
        for (x, m) in self.xm {
            report.record(LemmaId::End, || x.cli_name(), "1".into(), hom_dim(self.alg(), m, m).to_string());
        }
    }

    fn check_ext(&self, report: &mut LemmaReport) {
        let alg = self.alg();
        for (x, fx) in self.phi_pairs() {
            let (top, bottom) = (&self.xm[&fx], &self.xm[&x]);
            let e = ext1_dim(alg, top, bottom);
            report.record(LemmaId::Ext, || x.cli_name(), "1".into(), e.to_string());
            if e == 0 {
                continue;
            }
            let ext = nonsplit_extension(alg, top, bottom).expect("Ext¹ ≠ 0");
            let dims: Vec<usize> = top.dims.iter().zip(&bottom.dims).map(|(a, b)| a + b).collect();
            let fine = ext.middle.dims == dims
                && ext.middle.violated_relation(alg).is_none()
                && is_homomorphism(alg, bottom, &ext.middle, &ext.inclusion)
                && is_homomorphism(alg, &ext.middle, top, &ext.projection)
                && !splits(alg, top, &ext);
            report.record(
                LemmaId::Ext,
                || format!("{} extension", x.cli_name()),
                "nonsplit".into(),
                if fine { "nonsplit" } else { "malformed or split" }.into(),
            );
        }
    }

    fn homx_expected(&self, y: Vertex, x: Vertex) -> Option<usize> {
        let nav = &self.fm.derived.nav;
        let ds = self.ds();
        let ps = nav.ps();
        if y.is_x() {
            let s_nu = nav.nu(y).ok()?.source;
            if ps.in_image(&s_nu) {
                return None;
            }
            let hit = x.is_x() && (0..=nav.classes.x.len()).any(|k| nav.maps.r.iterate(&x, k) == Some(y));
            Some(usize::from(hit))
        } else {
            let (i0, j0) = (y.branch(), y.level());
            if nav.maps.t.in_image(&y) || nav.h(Vertex::X(i0, j0)).ok()? != ds.top(i0) {
                return None;
            }
            // Hom(X_y, X_y) = k, so j0 itself belongs to the range
            let hit = matches!(x, Vertex::Z(i, j) if i == i0 && j >= j0 && j <= ds.top(i0));
            Some(usize::from(hit))
        }
    }

    fn check_homx(&self, report: &mut LemmaReport) {
        for (&y, my) in self.xm {
            for (&x, mx) in self.xm {
                if let Some(expected) = self.homx_expected(y, x) {
                    let actual = hom_dim(self.alg(), my, mx);
                    report.record(
                        LemmaId::HomX,
                        || format!("Hom(X_{}, X_{})", y.cli_name(), x.cli_name()),
                        expected.to_string(),
                        actual.to_string(),
                    );
                }
            }
        }
    }

    fn admissible_in_dom_phi(&self) -> Vec<Vertex> {
        admissible_lemma_nav(&self.fm.derived.nav)
            .into_iter()
            .filter(|y| self.fm.derived.cs.phi.in_domain(y))
            .collect()
    }

    fn homrx_expected(&self, y: Vertex, x: Vertex) -> usize {
        let nav = &self.fm.derived.nav;
        let ds = self.ds();
        let s_nu = |v: Vertex| nav.nu(v).map(|p| p.source).ok();
        let hit = match y {
            Vertex::X(i0, j0) => x.is_x() && s_nu(x) == Some(Vertex::X(i0, j0 + 1)),
            Vertex::Z(i0, j0) => {
                (x.is_x() && s_nu(x) == Some(y))
                    || matches!(x, Vertex::Z(i, j) if i == i0 && j > j0 && j <= ds.top(i0))
            }
            Vertex::Y(..) => false,
        };
        usize::from(hit)
    }

    fn check_homrx(&self, report: &mut LemmaReport) -> Result<()> {
        for y in self.admissible_in_dom_phi() {
            let r = self.fm.r_module(y)?;
            for (&x, mx) in self.xm {
                report.record(
                    LemmaId::HomRX,
                    || format!("Hom(R_{}, X_{})", y.cli_name(), x.cli_name()),
                    self.homrx_expected(y, x).to_string(),
                    hom_dim(self.alg(), &r, mx).to_string(),
                );
            }
        }
        Ok(())
    }

    fn check_homr(&self, report: &mut LemmaReport) -> Result<()> {
        for y in self.admissible_in_dom_phi() {
            let r = self.fm.r_module(y)?;
            for (x, fx) in self.phi_pairs() {
                if x == y {
                    continue;
                }
                report.record(
                    LemmaId::HomR,
                    || format!("Hom(R_{}, X_φ{})", y.cli_name(), x.cli_name()),
                    "0".into(),
                    hom_dim(self.alg(), &r, &self.xm[&fx]).to_string(),
                );
            }
        }
        Ok(())
    }

    fn check_lfund(&self, report: &mut LemmaReport) {
        if !self.ds().is_fundamental() {
            return;
        }
        for (x, &l) in &self.fm.derived.cs.l {
            let (t, _) = tau(self.alg(), &self.xm[x]);
            report.record(
                LemmaId::LFund,
                || format!("l_{}", x.cli_name()),
                l.to_string(),
                (1 - t.total_dim() as i64).to_string(),
            );
        }
    }

    fn path_family(&self) -> Vec<(String, Path)> {
        let nav = &self.fm.derived.nav;
        let bq = &nav.quiver;
        let mut out = Vec::new();
        for &x in &nav.classes.x {
            out.push((format!("ν_{}", x.cli_name()), nav.nu(x).expect("x ∈ 𝔵").clone()));
            out.push((format!("μ_{}", x.cli_name()), nav.mu(x).expect("x ∈ 𝔵").clone()));
            out.push((format!("ω_{}", x.cli_name()), nav.omega(x).expect("x ∈ 𝔵")));
        }
        for a in bq.arrows() {
            out.push((a.arrow.to_string(), bq.arrow_path(a.arrow).expect("arrow")));
        }
        for &v in bq.vertices() {
            out.push((format!("e_{}", v.cli_name()), Path::trivial(v)));
        }
        out
    }

    fn check_paths(&self, report: &mut LemmaReport) -> Result<()> {
        let alg = self.alg();
        let mut modules = Vec::new();
        for (name, p) in self.path_family() {
            match string_module(alg, &p) {
                Ok(m) => modules.push((name, p, m)),
                Err(e) => report.record(LemmaId::Paths, || name.clone(), "module".into(), e.to_string()),
            }
        }
        for (n1, p1, m1) in &modules {
            for (n2, p2, m2) in &modules {
                report.record(
                    LemmaId::Paths,
                    || format!("Hom(M({n1}), M({n2}))"),
                    hom_dim_paths(p1, p2).to_string(),
                    hom_dim(alg, m1, m2).to_string(),
                );
            }
        }
        Ok(())
    }

    fn check_onepoint(&self, report: &mut LemmaReport) -> Result<()> {
        let alg = self.alg();
        for y in self.admissible_in_dom_phi() {
            let step = extend_ds(self.ds(), y)?;
            let added = match y {
                Vertex::X(i, j) => Vertex::Z(i, j + 1),
                _ => Vertex::X(y.branch(), step.system.top(y.branch())),
            };
            let big = Algebra::new(&step.system)?;
            let v = big.vertex_id(added).expect("new vertex");
            let rad = restrict(&big, &projective(&big, v), alg)?;
            let r = self.fm.r_module(y)?;
            let actual = if rad.violated_relation(alg).is_some() {
                "not a module over the old algebra".to_string()
            } else {
                iso_text(is_isomorphic(alg, &rad, &r))
            };
            report.record(
                LemmaId::OnePoint,
                || format!("rad P'({}) vs R_{}", added.cli_name(), y.cli_name()),
                iso_text(Iso::Yes),
                actual,
            );
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Arrow;
    use crate::system::example_e1;

    #[test]
    fn e1_formal_modules() {
        let fm = FormalModules::new(&example_e1()).unwrap();
        let x16 = fm.x_module(Vertex::X(1, 6)).unwrap();
        assert_eq!(x16.total_dim(), 4);
        for v in [Vertex::Z(1, 8), Vertex::X(1, 8), Vertex::Z(1, 6), Vertex::X(1, 6)] {
            assert_eq!(x16.dims[fm.alg.vertex_id(v).unwrap()], 1);
        }
        let z18 = fm.x_module(Vertex::Z(1, 8)).unwrap();
        assert_eq!(z18.total_dim(), 2);
        for v in [Vertex::X(1, 8), Vertex::X(1, 7)] {
            assert_eq!(z18.dims[fm.alg.vertex_id(v).unwrap()], 1);
        }
        for (x, fx) in fm.derived.cs.phi.iter() {
            let r = fm.r_module(*x).unwrap();
            let (a, b) = (fm.x_module(*x).unwrap(), fm.x_module(*fx).unwrap());
            let dims: Vec<usize> = a.dims.iter().zip(&b.dims).map(|(p, q)| p + q).collect();
            assert_eq!(r.dims, dims);
        }
    }

    #[test]
    fn segment_criterion_examples() {
        let ds = example_e1();
        let bq = crate::quiver::BoundQuiver::build(&ds);
        let a11 = bq.arrow_path(Arrow::Alpha(1, 1)).unwrap();
        let a12 = bq.arrow_path(Arrow::Alpha(1, 2)).unwrap();
        assert_eq!(hom_dim_paths(&a11, &a11), 1);
        assert_eq!(hom_dim_paths(&a11, &a12), 1);
        assert_eq!(hom_dim_paths(&a12, &a11), 0);
        let long = bq.path(Vertex::X(1, 3), &[Arrow::Alpha(1, 3), Arrow::Alpha(1, 2)]).unwrap();
        assert_eq!(hom_dim_paths(&long, &a12), 0);
        assert_eq!(hom_dim_paths(&a12, &long), 1);
    }

    #[test]
    fn e1_lemmas_hold() {
        let report = verify_lemmas(&example_e1(), &LemmaId::ALL, 1000).unwrap();
        assert!(!report.skipped);
        assert!(report.ok(), "{}", report.to_text());
        for id in [LemmaId::Tau, LemmaId::Ext, LemmaId::HomX, LemmaId::HomRX, LemmaId::HomR, LemmaId::OnePoint] {
            assert!(report.tallies[&id].checked > 0, "{id} checked nothing");
        }
    }

    #[test]
    fn fundamental_lemmas_hold() {
        let ds = DefiningSystem::fundamental(vec![2, 1], vec![1, 1]).unwrap();
        let report = verify_lemmas(&ds, &LemmaId::ALL, 1000).unwrap();
        assert!(report.ok(), "{}", report.to_text());
        let fm = FormalModules::new(&ds).unwrap();
        let l: Vec<(Vertex, i64)> = fm.derived.cs.l.iter().map(|(a, b)| (*a, *b)).collect();
        assert_eq!(l, vec![(Vertex::X(1, 0), -1), (Vertex::X(1, 1), -1), (Vertex::X(2, 0), 0)]);
        assert_eq!(report.tallies[&LemmaId::LFund], Tally { checked: 3, passed: 3 });
    }

    #[test]
    fn budget_skips() {
        let report = verify_lemmas(&example_e1(), &LemmaId::ALL, 5).unwrap();
        assert!(report.skipped && report.tallies.is_empty());
    }
}
