//! Executes the checks of a scenario in order against one universe.

use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;
use std::sync::Arc;

use hovey_core::cotorsion::{
    check_dimension_characterisations, check_dimension_inequalities, check_extendable, generate_conflations,
};
use hovey_core::homalg::{ext_dim, ext_dim_injective, is_injective, is_projective};
use hovey_core::hovey::{
    check_class_identities, check_recollement_hypotheses, check_sufficient_conditions_all, frobenius_core, lift_triple,
    stable_compare, verify_triple, Limits,
};
use hovey_core::quiverlift::{
    check_phi_dimension_identity, check_psi_dimension_identity, check_rep_pair, lift_rep_triple, RepSetting,
    ShapeQuiver,
};
use hovey_core::{
    Algebra, AlgebraSpec, CotorsionPair, Error, HoveyTriple, Module, ObjectClass, Report, Side, Universe, Verdict,
    Witness,
};
use serde::{Deserialize, Serialize};

use crate::input::{enumerate_cached, ClassExpr, ClassResolver};
use crate::scenario::{Check, PairRef, Scenario, TripleRef};
use crate::CliError;

pub const SCHEMA: &str = "hovey-report/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: Check,
    /// Algebras the check's witnesses live over: the scenario algebra, then
    /// the product algebra for representation checks.
    pub algebras: Vec<AlgebraSpec>,
    pub report: Report,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: String,
    pub tool_version: String,
    pub timestamp: String,
    pub scenario: Scenario,
    pub universe_fingerprint: String,
    pub universe_size: usize,
    pub checks: Vec<CheckRecord>,
    #[serde(flatten)]
    pub verdict: Verdict,
}

/// Errors inside a check that make its verdict inconclusive rather than
/// aborting the run.
fn is_soft(e: &Error) -> bool {
    matches!(e, Error::Undecided(_) | Error::CapExceeded(_) | Error::Precondition(_))
}

/// Turns a soft library error into an inconclusive report.
fn soft(name: impl Into<String>, r: Result<Report, CliError>) -> Result<Report, CliError> {
    match r {
        Err(CliError::Core(e)) if is_soft(&e) => {
            Ok(Report::new(name).with_verdict(Verdict::inconclusive(e.to_string())))
        }
        other => other,
    }
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Left => "left",
        Side::Right => "right",
    }
}

struct RepEntry {
    setting: RepSetting,
    universe: Universe,
}

pub struct Runner {
    scenario: Scenario,
    alg: Arc<Algebra>,
    u: Universe,
    limits: Limits,
    pairs: HashMap<(ObjectClass, ObjectClass), (CotorsionPair, Report)>,
    triples: HashMap<[ObjectClass; 3], (HoveyTriple, Report)>,
    reps: HashMap<(String, usize), Arc<RepEntry>>,
}

impl Runner {
    /// Loads the algebra and universe; `base` resolves relative paths.
    pub fn new(scenario: Scenario, base: PathBuf) -> Result<Runner, CliError> {
        let alg = scenario.algebra.load(&base)?;
        let u = scenario.universe.load(alg.clone(), &base)?;
        let limits =
            Limits { cap: scenario.limits.cap.unwrap_or(Limits::default().cap), budget: scenario.limits.budget };
        let runner =
            Runner { scenario, alg, u, limits, pairs: HashMap::new(), triples: HashMap::new(), reps: HashMap::new() };
        runner.validate_references()?;
        Ok(runner)
    }

    pub fn universe(&self) -> &Universe {
        &self.u
    }

    /// Resolves every class and shape reference up front, so that a bad
    /// reference is an input error before any check runs.
    fn validate_references(&self) -> Result<(), CliError> {
        for e in self.scenario.classes.values() {
            self.class(e)?;
        }
        for c in &self.scenario.checks {
            let mut exprs: Vec<&ClassExpr> = Vec::new();
            match c {
                Check::ClassShow { class } => exprs.push(class),
                Check::Cotorsion { pair, .. }
                | Check::DimensionInequalities { pair, .. }
                | Check::DimensionCharacterisations { pair, .. } => exprs.extend([&pair.x, &pair.y]),
                Check::HoveyVerify { triple }
                | Check::HoveyLift { triple, .. }
                | Check::HoveyTower { triple, .. }
                | Check::ClassIdentities { triple, .. }
                | Check::SufficientConditions { triple, .. } => exprs.extend([&triple.c, &triple.w, &triple.f]),
                Check::RecollementHypotheses { triples } => {
                    exprs.extend(triples.iter().flat_map(|t| [&t.c, &t.w, &t.f]))
                }
                Check::QuiverPair { shape, pair, .. } | Check::QuiverDimensionIdentity { shape, pair, .. } => {
                    self.shape(shape)?;
                    exprs.extend([&pair.x, &pair.y]);
                }
                Check::QuiverLift { shape, triple, .. } => {
                    self.shape(shape)?;
                    exprs.extend([&triple.c, &triple.w, &triple.f]);
                }
                Check::Algebra | Check::Universe | Check::ExtAgreement { .. } => {}
            }
            for e in exprs {
                self.class(e)?;
            }
        }
        Ok(())
    }

    fn class(&self, e: &ClassExpr) -> Result<ObjectClass, CliError> {
        ClassResolver { universe: &self.u, named: &self.scenario.classes }.resolve(e)
    }

    /// A declared shape, or `A<n>` for the linear quiver on `n` vertices.
    fn shape(&self, name: &str) -> Result<ShapeQuiver, CliError> {
        if let Some(s) = self.scenario.shapes.get(name) {
            return Ok(s.clone());
        }
        match name.strip_prefix('A').and_then(|n| n.parse::<usize>().ok()) {
            Some(n) if n >= 1 => Ok(ShapeQuiver::linear(n)),
            _ => Err(CliError::Input(format!("unknown shape '{name}'"))),
        }
    }

    fn pair(&mut self, p: &PairRef) -> Result<(CotorsionPair, Report), CliError> {
        let key = (self.class(&p.x)?, self.class(&p.y)?);
        if let Some(hit) = self.pairs.get(&key) {
            return Ok(hit.clone());
        }
        let out = CotorsionPair::verified(&self.u, key.0.clone(), key.1.clone(), self.limits.budget);
        self.pairs.insert(key, out.clone());
        Ok(out)
    }

    fn triple(&mut self, t: &TripleRef) -> Result<(HoveyTriple, Report), CliError> {
        let key = [self.class(&t.c)?, self.class(&t.w)?, self.class(&t.f)?];
        if let Some(hit) = self.triples.get(&key) {
            return Ok(hit.clone());
        }
        let [c, w, f] = key.clone();
        let out = verify_triple(&self.u, c, w, f, self.limits);
        self.triples.insert(key, out.clone());
        Ok(out)
    }

    fn rep(&mut self, shape: &str, cap: usize) -> Result<Arc<RepEntry>, CliError> {
        let key = (shape.to_string(), cap);
        if let Some(hit) = self.reps.get(&key) {
            return Ok(hit.clone());
        }
        let setting = RepSetting::new(self.shape(shape)?, self.alg.clone())?;
        let universe = enumerate_cached(setting.product.clone(), cap)?;
        let entry = Arc::new(RepEntry { setting, universe });
        self.reps.insert(key, entry.clone());
        Ok(entry)
    }

    fn algebras(&mut self, c: &Check) -> Vec<AlgebraSpec> {
        let mut out = vec![self.alg.spec().clone()];
        let shape = match c {
            Check::QuiverPair { shape, rep_max_dim, .. }
            | Check::QuiverDimensionIdentity { shape, rep_max_dim, .. }
            | Check::QuiverLift { shape, rep_max_dim, .. } => Some((shape, *rep_max_dim)),
            _ => None,
        };
        if let Some((s, cap)) = shape {
            if let Ok(e) = self.rep(s, cap) {
                out.push(e.setting.product.spec().clone());
            }
        }
        out
    }

    /// Runs every check in order and assembles the report.
    pub fn run(mut self, timestamp: String) -> Result<RunReport, CliError> {
        let checks = self.scenario.checks.clone();
        let mut records = Vec::with_capacity(checks.len());
        let mut verdict = Verdict::Pass;
        for c in checks {
            let report = soft(c.name(), self.exec(&c))?;
            verdict = verdict.and(report.verdict.clone());
            let algebras = self.algebras(&c);
            records.push(CheckRecord { check: c, algebras, report });
        }
        Ok(RunReport {
            schema: SCHEMA.into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            timestamp,
            universe_fingerprint: self.u.fingerprint(),
            universe_size: self.u.len(),
            scenario: self.scenario,
            checks: records,
            verdict,
        })
    }

    fn exec(&mut self, c: &Check) -> Result<Report, CliError> {
        let limits = self.limits;
        match c {
            Check::Algebra => Ok(self.algebra_report()),
            Check::Universe => Ok(self.universe_report()),
            Check::ClassShow { class } => {
                let members = self.class(class)?;
                let mut r = Report::new(format!("class {class}"));
                r.fact("members", self.u.ids(&members));
                Ok(r)
            }
            Check::ExtAgreement { max_degree } => self.ext_agreement(*max_degree),
            Check::Cotorsion { pair, extendable_upto, side } => {
                let (p, pr) = self.pair(pair)?;
                let mut r = Report::new("cotorsion pair");
                r.child(pr);
                if let Some(n) = extendable_upto {
                    if p.is_complete_hereditary() {
                        let e = check_extendable(&self.u, &p, *n, *side, limits.cap, limits.budget)?;
                        r.fact("extendable_upto", e.upto);
                        r.child(e.report);
                    }
                }
                Ok(r)
            }
            Check::DimensionInequalities { pair, side, count, seed } => {
                let (p, pr) = self.pair(pair)?;
                let mut r = Report::new(format!("{} dimension inequalities", side_name(*side)));
                if !p.is_complete_hereditary() {
                    r.child(pr);
                    return Ok(r);
                }
                let conflations = generate_conflations(&self.u, *count, *seed);
                r.fact("conflations", conflations.len());
                let mut passed = 0usize;
                for (k, cf) in conflations.iter().enumerate() {
                    let mut child = soft(
                        format!("conflation {k}"),
                        check_dimension_inequalities(&self.u, &p, cf, *side, limits.cap).map_err(CliError::from),
                    )?;
                    if child.verdict.is_pass() {
                        passed += 1;
                    } else {
                        child.name = format!("conflation {k}");
                        child.witness(Witness::conflation("checked conflation", cf));
                        r.child(child);
                    }
                }
                r.fact("passed", passed);
                Ok(r)
            }
            Check::DimensionCharacterisations { pair, side } => {
                let (p, pr) = self.pair(pair)?;
                let mut r = Report::new(format!("{} dimension characterisations", side_name(*side)));
                if !p.is_complete_hereditary() {
                    r.child(pr);
                    return Ok(r);
                }
                for i in 0..self.u.len() {
                    let mut child = soft(
                        self.u.id(i),
                        check_dimension_characterisations(&self.u, &p, self.u.module(i), *side, limits.cap)
                            .map_err(CliError::from),
                    )?;
                    child.name = self.u.id(i);
                    r.child(child);
                }
                Ok(r)
            }
            Check::HoveyVerify { triple } => Ok(self.triple(triple)?.1),
            Check::HoveyLift { triple, side, n_max } => {
                let (t, tr) = self.triple(triple)?;
                let mut r = Report::new(format!("{} lifts", side_name(*side)));
                if !t.is_verified() {
                    r.child(tr);
                    return Ok(r);
                }
                for n in 0..=*n_max {
                    let name = format!("n = {n}");
                    let level = soft(
                        name.clone(),
                        lift_triple(&self.u, &t, n, *side, limits).map_err(CliError::from).map(|(l, mut lr)| {
                            lr.fact("lifted_c", self.u.ids(&l.c));
                            lr.fact("lifted_f", self.u.ids(&l.f));
                            lr
                        }),
                    )?;
                    r.child(level);
                }
                Ok(r)
            }
            Check::HoveyTower { triple, side, n_max, expect_stable_classes } => {
                let (t, tr) = self.triple(triple)?;
                let mut r = Report::new(format!("{} tower", side_name(*side)));
                if !t.is_verified() {
                    r.child(tr);
                    return Ok(r);
                }
                let (base, br) = frobenius_core(&self.u, &t, limits)?;
                r.child(br);
                let mut counts = vec![base.stable_classes.len()];
                for n in 1..=*n_max {
                    let u = &self.u;
                    let level = soft(
                        format!("n = {n}"),
                        (|| {
                            let (l, lr) = lift_triple(u, &t, n, *side, limits)?;
                            let mut level = Report::new(format!("n = {n}"));
                            level.child(lr);
                            let (core, cr) = frobenius_core(u, &l, limits)?;
                            level.fact("stable_classes", u.ids(&core.stable_classes));
                            counts.push(core.stable_classes.len());
                            level.child(cr);
                            level.child(stable_compare(u, &core, &base, limits)?);
                            Ok(level)
                        })(),
                    )?;
                    r.child(level);
                }
                r.fact("stable_class_counts", &counts);
                if let Some(expected) = expect_stable_classes {
                    if let Some(k) = counts.iter().position(|c| c != expected) {
                        r.fail(format!("{} stable classes at n = {k}, expected {expected}", counts[k]));
                    }
                }
                Ok(r)
            }
            Check::ClassIdentities { triple, n_max } => {
                let (t, tr) = self.triple(triple)?;
                let mut r = Report::new("class identities");
                if !t.is_verified() {
                    r.child(tr);
                    return Ok(r);
                }
                for n in 0..=*n_max {
                    let name = format!("n = {n}");
                    r.child(soft(name, check_class_identities(&self.u, &t, n, limits).map_err(CliError::from))?);
                }
                Ok(r)
            }
            Check::SufficientConditions { triple, side, n_max } => {
                let (t, tr) = self.triple(triple)?;
                let mut r = Report::new(format!("{} sufficient conditions", side_name(*side)));
                if !t.is_verified() {
                    r.child(tr);
                    return Ok(r);
                }
                for n in 0..=*n_max {
                    let name = format!("n = {n}");
                    let mut level = soft(
                        name.clone(),
                        check_sufficient_conditions_all(&self.u, &t, n, *side, limits).map_err(CliError::from),
                    )?;
                    level.name = name;
                    r.child(level);
                }
                Ok(r)
            }
            Check::RecollementHypotheses { triples } => {
                let mut ts = Vec::new();
                let mut r = Report::new("recollement hypotheses");
                for t in triples {
                    let (t, tr) = self.triple(t)?;
                    if !t.is_verified() {
                        r.child(tr);
                    }
                    ts.push(t);
                }
                if !r.verdict.is_pass() {
                    return Ok(r);
                }
                r.child(check_recollement_hypotheses(&self.u, &ts[0], &ts[1], &ts[2])?);
                Ok(r)
            }
            Check::QuiverPair { shape, pair, side, rep_max_dim, expect_indecomposables } => {
                let (vp, pr) = self.pair(pair)?;
                let rep = self.rep(shape, *rep_max_dim)?;
                let mut r = Report::new(format!("{} represented pair over {shape}", side_name(*side)));
                r.fact("representation_indecomposables", rep.universe.len());
                r.fact("representation_fingerprint", rep.universe.fingerprint());
                if let Some(k) = expect_indecomposables {
                    if rep.universe.len() != *k {
                        r.fail(format!("{} indecomposable representations, expected {k}", rep.universe.len()));
                    }
                }
                if !vp.is_complete_hereditary() {
                    r.child(pr);
                    return Ok(r);
                }
                let (_, cr) = check_rep_pair(&self.u, &vp, &rep.setting, &rep.universe, *side, limits.budget)?;
                r.child(cr);
                Ok(r)
            }
            Check::QuiverDimensionIdentity { shape, pair, side, n_max, rep_max_dim } => {
                let (vp, pr) = self.pair(pair)?;
                let rep = self.rep(shape, *rep_max_dim)?;
                let mut r = Report::new(format!("{} dimension identity over {shape}", side_name(*side)));
                if !vp.is_complete_hereditary() {
                    r.child(pr);
                    return Ok(r);
                }
                for n in 0..=*n_max {
                    let run = match side {
                        Side::Left => {
                            check_phi_dimension_identity(&self.u, &vp, &rep.setting, &rep.universe, n, limits)
                        }
                        Side::Right => {
                            check_psi_dimension_identity(&self.u, &vp, &rep.setting, &rep.universe, n, limits)
                        }
                    };
                    let mut level = soft(format!("n = {n}"), run.map_err(CliError::from))?;
                    level.name = format!("n = {n}: {}", level.name);
                    r.child(level);
                }
                Ok(r)
            }
            Check::QuiverLift { shape, triple, side, n_max, rep_max_dim } => {
                let (t, tr) = self.triple(triple)?;
                let rep = self.rep(shape, *rep_max_dim)?;
                let mut r = Report::new(format!("{} represented lifts over {shape}", side_name(*side)));
                r.fact("representation_indecomposables", rep.universe.len());
                if !t.is_verified() {
                    r.child(tr);
                    return Ok(r);
                }
                for n in 0..=*n_max {
                    let run = lift_rep_triple(&self.u, &t, &rep.setting, &rep.universe, n, *side, limits);
                    r.child(soft(format!("n = {n}"), run.map(|(_, lr)| lr).map_err(CliError::from))?);
                }
                Ok(r)
            }
        }
    }

    fn algebra_report(&self) -> Report {
        let alg = &self.alg;
        let mut r = Report::new("algebra");
        r.fact("field", alg.field().p());
        r.fact("vertices", alg.vertex_count());
        r.fact("arrows", alg.arrow_count());
        r.fact("dimension", alg.dimension());
        r.fact("nilpotency_index", alg.nilpotency_index());
        let proj: Vec<Module> = (0..alg.vertex_count()).map(|v| Module::projective(alg, v)).collect();
        let inj: Vec<Module> = (0..alg.vertex_count()).map(|v| Module::injective(alg, v)).collect();
        r.fact("projective_dims", proj.iter().map(|m| m.dims().to_vec()).collect::<Vec<_>>());
        r.fact("injective_dims", inj.iter().map(|m| m.dims().to_vec()).collect::<Vec<_>>());
        r.fact("self_injective", proj.iter().all(|m| is_injective(alg, m)));
        r
    }

    fn universe_report(&self) -> Report {
        let u = &self.u;
        let mut r = Report::new("universe");
        r.fact("fingerprint", u.fingerprint());
        r.fact("provenance", u.provenance());
        r.fact("max_dim", u.max_dim());
        let objects: Vec<BTreeMap<&str, serde_json::Value>> = (0..u.len())
            .map(|i| {
                let m = u.module(i);
                BTreeMap::from([
                    ("id", serde_json::json!(u.id(i))),
                    ("dims", serde_json::json!(m.dims())),
                    ("projective", serde_json::json!(is_projective(u.algebra(), m))),
                    ("injective", serde_json::json!(is_injective(u.algebra(), m))),
                ])
            })
            .collect();
        r.fact("objects", objects);
        r
    }

    fn ext_agreement(&self, max_degree: usize) -> Result<Report, CliError> {
        let (u, alg) = (&self.u, self.u.algebra());
        let mut r = Report::new(format!("Ext agreement in degrees 1 to {max_degree}"));
        let mut compared = 0usize;
        for i in 0..u.len() {
            for j in 0..u.len() {
                for d in 1..=max_degree {
                    let (m, n) = (u.module(i), u.module(j));
                    let by_proj = ext_dim(alg, m, n, d)?;
                    let by_inj = ext_dim_injective(alg, m, n, d)?;
                    compared += 1;
                    if by_proj != by_inj {
                        r.fail(format!(
                            "Ext^{d}({}, {}): {by_proj} by resolution, {by_inj} by coresolution",
                            u.id(i),
                            u.id(j)
                        ));
                    }
                    if by_proj != 0 {
                        r.witness(Witness::ext(format!("Ext^{d}({}, {})", u.id(i), u.id(j)), m, n, d, by_proj));
                    }
                }
            }
        }
        r.fact("compared", compared);
        Ok(r)
    }
}
