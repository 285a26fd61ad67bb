//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so that the lines always print. The
//! process fails if any criterion fails, except for the represented
//! dimension identity and route agreement (criterion 8), which are false as
//! stated; there the suite requires the failure to be exactly the known
//! counterexample pattern and fails if it changes in either direction.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use hovey_core::cotorsion::{
    check_dimension_characterisations, check_dimension_inequalities, generate_conflations, rel_dim, RelDim,
};
use hovey_core::homalg::{ext_dim, ext_dim_injective};
use hovey_core::hovey::{
    check_class_identities, check_sufficient_conditions_all, frobenius_core, lift_triple, stable_compare,
    verify_triple, Limits,
};
use hovey_core::quiverlift::{
    check_phi_dimension_identity, check_psi_dimension_identity, check_rep_pair, lift_rep_triple, RepSetting,
    ShapeQuiver, DEFAULT_REP_CAP,
};
use hovey_core::report::Witness;
use hovey_core::{fixtures, CotorsionPair, HoveyTriple, Report, Side, Universe, Verdict};

/// Wall-clock limits for the timed criteria.
const EXT_AGREEMENT_LIMIT: Duration = Duration::from_secs(5);
const FOUR_WAY_LIMIT: Duration = Duration::from_secs(60);
const CONFLATIONS_PER_FIXTURE: usize = 200;
const FUZZ_SEED: u64 = 0xacce;
const N_MAX: usize = 3;
const REP_N_MAX: usize = 2;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Outcome {
        Outcome { pass, detail: detail.into() }
    }
}

fn fixtures_universes() -> Vec<(&'static str, Universe)> {
    vec![
        ("F2[x]/(x^2)", Universe::enumerate(Arc::new(fixtures::dual_numbers(2)), 2).unwrap()),
        ("kA2", Universe::enumerate(Arc::new(fixtures::a2(2)), 2).unwrap()),
    ]
}

/// The complete hereditary pairs among `(P, all)`, `(all, I)` and
/// `(all, P)`.
fn fixture_pairs(u: &Universe) -> Vec<(String, CotorsionPair)> {
    [
        ("(P, all)", u.projectives(), u.all()),
        ("(all, I)", u.all(), u.injectives()),
        ("(all, P)", u.all(), u.projectives()),
    ]
    .into_iter()
    .map(|(name, x, y)| (name.to_string(), CotorsionPair::verified(u, x, y, None).0))
    .filter(|(_, p)| p.is_complete_hereditary())
    .collect()
}

/// The verified triples among `(all, P, all)`, `(all, all, I)` and
/// `(P, all, all)`.
fn fixture_triples(u: &Universe) -> Vec<(String, HoveyTriple)> {
    [
        ("(all, P, all)", u.all(), u.projectives(), u.all()),
        ("(all, all, I)", u.all(), u.all(), u.injectives()),
        ("(P, all, all)", u.projectives(), u.all(), u.all()),
    ]
    .into_iter()
    .map(|(name, c, w, f)| (name.to_string(), verify_triple(u, c, w, f, Limits::default()).0))
    .filter(|(_, t)| t.is_verified())
    .collect()
}

fn sides() -> [Side; 2] {
    [Side::Left, Side::Right]
}

fn verify_all(r: &Report, u: &Universe) -> Result<usize, String> {
    let ws = r.all_witnesses();
    for w in &ws {
        w.verify(u.algebra()).map_err(|e| format!("witness '{}' does not re-check: {e}", w.label()))?;
    }
    Ok(ws.len())
}

fn ext_agreement() -> Outcome {
    let start = Instant::now();
    let mut compared = 0;
    for (name, u) in fixtures_universes() {
        let alg = u.algebra();
        for m in u.modules() {
            for n in u.modules() {
                for d in 1..=3 {
                    let (a, b) = (ext_dim(alg, m, n, d).unwrap(), ext_dim_injective(alg, m, n, d).unwrap());
                    if a != b {
                        return Outcome::new(
                            false,
                            format!("{name}: Ext^{d} is {a} by resolution, {b} by coresolution"),
                        );
                    }
                    compared += 1;
                }
            }
        }
    }
    let took = start.elapsed();
    Outcome::new(
        took < EXT_AGREEMENT_LIMIT,
        format!("{compared} values agree in {took:.2?} (limit {EXT_AGREEMENT_LIMIT:?})"),
    )
}

fn characterisations() -> Outcome {
    let mut checked = 0;
    for (name, u) in fixtures_universes() {
        for (pname, p) in fixture_pairs(&u) {
            for side in sides() {
                for (i, m) in u.modules().iter().enumerate() {
                    let Ok((RelDim::Finite { value }, _)) = rel_dim(&u, &p, m, side, 8) else { continue };
                    if value > N_MAX {
                        continue;
                    }
                    let r = check_dimension_characterisations(&u, &p, m, side, 8).unwrap();
                    if !r.verdict.is_pass() {
                        return Outcome::new(false, format!("{name} {pname} {side:?} {}: {:?}", u.id(i), r.verdict));
                    }
                    let resolutions =
                        r.all_witnesses().iter().filter(|w| matches!(w, Witness::Resolution { .. })).count();
                    if resolutions == 0 {
                        return Outcome::new(false, format!("{name} {pname} {}: no resolution witness", u.id(i)));
                    }
                    if let Err(e) = verify_all(&r, &u) {
                        return Outcome::new(false, e);
                    }
                    checked += 1;
                }
            }
        }
    }
    Outcome::new(checked > 0, format!("{checked} objects agree on all characterisations with witnesses"))
}

fn inequality_fuzz() -> Outcome {
    let mut total = 0;
    for (name, u) in fixtures_universes() {
        let conflations = generate_conflations(&u, CONFLATIONS_PER_FIXTURE, FUZZ_SEED);
        if conflations.len() < CONFLATIONS_PER_FIXTURE {
            return Outcome::new(false, format!("{name}: only {} conflations generated", conflations.len()));
        }
        for (pname, p) in fixture_pairs(&u) {
            for side in sides() {
                for c in &conflations {
                    let r = check_dimension_inequalities(&u, &p, c, side, 8).unwrap();
                    if !r.verdict.is_pass() {
                        return Outcome::new(false, format!("{name} {pname} {side:?}: {:?}", r.verdict));
                    }
                }
            }
        }
        total += conflations.len();
    }
    Outcome::new(true, format!("{total} conflations satisfy every inequality and equality clause"))
}

fn four_way() -> Outcome {
    let start = Instant::now();
    let (mut agreed, mut budget_misses) = (0, 0);
    for (name, u) in fixtures_universes() {
        for (tname, t) in fixture_triples(&u) {
            for side in sides() {
                for n in 0..=N_MAX {
                    let r = check_sufficient_conditions_all(&u, &t, n, side, Limits::default()).unwrap();
                    for obj in &r.children {
                        match &obj.verdict {
                            Verdict::Pass => agreed += 1,
                            Verdict::Inconclusive { reason }
                                if reason.starts_with("(2)") || reason.starts_with("(4)") =>
                            {
                                budget_misses += 1
                            }
                            v => {
                                return Outcome::new(
                                    false,
                                    format!("{name} {tname} {side:?} n = {n} {}: {v:?}", obj.name),
                                )
                            }
                        }
                    }
                    if let Err(e) = verify_all(&r, &u) {
                        return Outcome::new(false, e);
                    }
                }
            }
        }
    }
    let took = start.elapsed();
    Outcome::new(
        took < FOUR_WAY_LIMIT,
        format!("{agreed} agree, {budget_misses} search-budget misses, in {took:.2?} (limit {FOUR_WAY_LIMIT:?})"),
    )
}

fn class_identities() -> Outcome {
    let mut checked = 0;
    for (name, u) in fixtures_universes() {
        for (tname, t) in fixture_triples(&u) {
            for n in 0..=N_MAX {
                let r = check_class_identities(&u, &t, n, Limits::default()).unwrap();
                if !r.verdict.is_pass() {
                    return Outcome::new(false, format!("{name} {tname} n = {n}: {:?}", r.verdict));
                }
                checked += 1;
            }
        }
    }
    Outcome::new(true, format!("{checked} triple levels satisfy both identities"))
}

fn lifting() -> Outcome {
    let mut checked = 0;
    for (name, u) in fixtures_universes() {
        for (tname, t) in fixture_triples(&u) {
            for side in sides() {
                for n in 0..=N_MAX {
                    let (l, r) = match lift_triple(&u, &t, n, side, Limits::default()) {
                        Ok(x) => x,
                        Err(e) => return Outcome::new(false, format!("{name} {tname} {side:?} n = {n}: {e}")),
                    };
                    if !r.verdict.is_pass() || !l.is_verified() {
                        return Outcome::new(false, format!("{name} {tname} {side:?} n = {n}: {:?}", r.verdict));
                    }
                    if let Err(e) = verify_all(&r, &u) {
                        return Outcome::new(false, e);
                    }
                    checked += 1;
                }
            }
        }
    }
    Outcome::new(true, format!("{checked} lifts verified with orthogonal and kernel identities"))
}

fn tower() -> Outcome {
    let mut compared = 0;
    for (name, u) in fixtures_universes() {
        for (tname, t) in fixture_triples(&u) {
            let (base, _) = frobenius_core(&u, &t, Limits::default()).unwrap();
            for side in sides() {
                for n in 0..=N_MAX {
                    let (l, _) = lift_triple(&u, &t, n, side, Limits::default()).unwrap();
                    let (core, _) = frobenius_core(&u, &l, Limits::default()).unwrap();
                    let r = stable_compare(&u, &core, &base, Limits::default()).unwrap();
                    if !r.verdict.is_pass() {
                        return Outcome::new(false, format!("{name} {tname} {side:?} n = {n}: {:?}", r.verdict));
                    }
                    compared += 1;
                }
            }
        }
    }
    let u = Universe::enumerate(Arc::new(fixtures::truncated_polynomial(2, 3)), 3).unwrap();
    let (t, _) = verify_triple(&u, u.all(), u.projectives(), u.all(), Limits::default());
    if !t.is_verified() {
        return Outcome::new(false, "F2[x]/(x^3): (all, P, all) does not verify");
    }
    let mut counts = Vec::new();
    for side in sides() {
        for n in 0..=N_MAX {
            let (l, _) = lift_triple(&u, &t, n, side, Limits::default()).unwrap();
            counts.push(frobenius_core(&u, &l, Limits::default()).unwrap().0.stable_classes.len());
        }
    }
    let ok = counts.iter().all(|&c| c == 2);
    Outcome::new(ok, format!("{compared} level comparisons match; F2[x]/(x^3) stable class counts {counts:?}"))
}

/// Criterion 8 in four parts. Returns the outcome and whether the failure
/// is exactly the known counterexample pattern.
fn quiver_lift() -> (Outcome, bool) {
    let shape = ShapeQuiver::linear(2);
    let mut notes = Vec::new();
    let (mut pairs_ok, mut inclusion_ok, mut level0_ok) = (true, true, true);
    let (mut identity_fail, mut routes_fail, mut identity_total, mut routes_total) = (0, 0, 0, 0);
    for (name, vu) in fixtures_universes() {
        let s = RepSetting::new(shape.clone(), vu.algebra().clone()).unwrap();
        let ru = s.universe(DEFAULT_REP_CAP).unwrap();
        for (pname, vp) in fixture_pairs(&vu) {
            for side in sides() {
                let (_, r) = check_rep_pair(&vu, &vp, &s, &ru, side, None).unwrap();
                if !r.verdict.is_pass() {
                    pairs_ok = false;
                    notes.push(format!("{name} {pname} {side:?} lifted pair: {:?}", r.verdict));
                }
                for n in 0..=REP_N_MAX {
                    let run = match side {
                        Side::Left => check_phi_dimension_identity(&vu, &vp, &s, &ru, n, Limits::default()),
                        Side::Right => check_psi_dimension_identity(&vu, &vp, &s, &ru, n, Limits::default()),
                    };
                    let Ok(r) = run else { continue };
                    identity_total += 1;
                    inclusion_ok &= r.facts.get("inclusion_holds").and_then(|v| v.as_bool()) != Some(false);
                    if !r.verdict.is_pass() {
                        identity_fail += 1;
                        level0_ok &= n > 0;
                    }
                }
            }
        }
        for (tname, t) in fixture_triples(&vu) {
            for side in sides() {
                for n in 0..=REP_N_MAX {
                    let Ok((_, r)) = lift_rep_triple(&vu, &t, &s, &ru, n, side, Limits::default()) else { continue };
                    routes_total += 1;
                    if r.facts.get("routes_agree").and_then(|v| v.as_bool()) == Some(false) {
                        routes_fail += 1;
                        level0_ok &= n > 0;
                        if notes.len() < 3 {
                            notes.push(format!("{name} {tname} {side:?} n = {n}: routes differ"));
                        }
                    }
                }
            }
        }
    }
    let point = RepSetting::new(shape, Arc::new(fixtures::point(2))).unwrap();
    let indecs = point.universe(DEFAULT_REP_CAP).unwrap().len();
    let pass = pairs_ok && identity_fail == 0 && routes_fail == 0 && indecs == 3;
    let detail = format!(
        "lifted pairs {}; dimension identity fails {identity_fail}/{identity_total} (inclusion always holds: \
         {inclusion_ok}); route equality fails {routes_fail}/{routes_total}; A2 over F2 has {indecs} indecomposables. \
         Only the inclusion Φ(X_n) ⊆ Φ(X)_n holds: over a field with X = all, the representation (k -> 0) has \
         projective dimension 1 but a non-injective structure map{}",
        if pairs_ok { "complete" } else { "NOT complete" },
        if notes.is_empty() { String::new() } else { format!("; {}", notes.join("; ")) }
    );
    let known = pairs_ok && inclusion_ok && level0_ok && indecs == 3 && identity_fail > 0 && routes_fail > 0;
    (Outcome::new(pass, detail), known)
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_hovey")
}

fn scenarios_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios")
}

fn strip_timestamp(text: &str) -> String {
    text.lines().filter(|l| !l.trim_start().starts_with("\"timestamp\"")).collect::<Vec<_>>().join("\n")
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut witnesses = 0;
    for (file, expected_exit) in
        [("dualnumbers.json", 0), ("a2-injective.json", 0), ("counterexamples/quiver-routes.json", 1)]
    {
        let mut texts = Vec::new();
        for k in 0..2 {
            let out = dir.path().join(format!("{}.{k}.json", file.replace('/', "_")));
            let status = Command::new(bin())
                .args(["scenario", "run"])
                .arg(scenarios_dir().join(file))
                .arg("--out")
                .arg(&out)
                .output()
                .unwrap();
            if status.status.code() != Some(expected_exit) {
                return Outcome::new(
                    false,
                    format!("{file}: exit {:?}, expected {expected_exit}", status.status.code()),
                );
            }
            let check = Command::new(bin()).arg("verify-witness").arg(&out).output().unwrap();
            if !check.status.success() {
                return Outcome::new(false, format!("{file}: {}", String::from_utf8_lossy(&check.stdout)));
            }
            let line = String::from_utf8_lossy(&check.stdout).to_string();
            witnesses += line.split_whitespace().next().and_then(|n| n.parse::<usize>().ok()).unwrap_or(0);
            texts.push(strip_timestamp(&std::fs::read_to_string(&out).unwrap()));
        }
        if texts[0] != texts[1] {
            return Outcome::new(false, format!("{file}: reports differ between runs"));
        }
    }
    Outcome::new(true, format!("bundled scenarios exit as expected, re-runs identical, {witnesses} witnesses re-check"))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("Ext oracle agreement", ext_agreement),
        ("dimension characterisations coherent", characterisations),
        ("dimension inequality fuzz", inequality_fuzz),
        ("sufficient conditions four-way agreement", four_way),
        ("class identities", class_identities),
        ("lifted triples verify", lifting),
        ("tower stable equivalence", tower),
    ];
    let mut failed = Vec::new();
    for (k, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        println!("criterion {} {name}: {} ({})", k + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed.push(k + 1);
        }
    }
    let (o, known) = quiver_lift();
    println!("criterion 8 quiver lift: {} ({})", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    if !o.pass && !known {
        failed.push(8);
    }
    let o = determinism();
    println!(
        "criterion 9 determinism and witness re-verification: {} ({})",
        if o.pass { "PASS" } else { "FAIL" },
        o.detail
    );
    if !o.pass {
        failed.push(9);
    }
    if o.pass && known {
        println!("criterion 8 fails with the known counterexample to the stated equalities; all other criteria pass");
    }
    if !failed.is_empty() {
        eprintln!("unexpected acceptance failures: {failed:?}");
        std::process::exit(1);
    }
}
