//! Hovey triples over a universe: verification, lifted triples, Frobenius
//! cores of bifibrant objects and comparisons of their stable categories.

pub mod frobenius;
pub mod sufficient;

use serde::{Deserialize, Serialize};

use crate::cotorsion::{
    check_extendable, generate_conflations, lift_class, CotorsionPair, PairFlags, Status, CLOSURE_SAMPLE, DEFAULT_CAP,
};
use crate::error::{Error, Result};
use crate::report::{Report, Verdict, Witness};
use crate::universe::{Membership, ObjectClass, Side, Universe};

pub use frobenius::{frobenius_core, stable_compare, stable_hom_dim, FrobeniusCore};
pub use sufficient::{check_sufficient_conditions, check_sufficient_conditions_all};

const THICKNESS_SEED: u64 = 0x7417;

/// Search and recursion limits shared by the triple-level checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Maximal (co)syzygy steps for relative dimensions.
    pub cap: usize,
    /// Dimension budget for approximation searches; `None` means three
    /// times the dimension of the object approximated.
    pub budget: Option<usize>,
}

impl Default for Limits {
    fn default() -> Limits {
        Limits { cap: DEFAULT_CAP, budget: None }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleStatus {
    pub verified: Status,
    /// Flags of `(c ∩ w, f)`.
    pub trivial_pair: PairFlags,
    /// Flags of `(c, w ∩ f)`.
    pub pair: PairFlags,
    pub thick: Status,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HoveyTriple {
    pub c: ObjectClass,
    pub w: ObjectClass,
    pub f: ObjectClass,
    #[serde(default)]
    pub status: TripleStatus,
}

impl HoveyTriple {
    pub fn new(c: ObjectClass, w: ObjectClass, f: ObjectClass) -> HoveyTriple {
        HoveyTriple { c, w, f, status: TripleStatus::default() }
    }

    pub fn cw(&self) -> ObjectClass {
        self.c.intersect(&self.w)
    }

    pub fn wf(&self) -> ObjectClass {
        self.w.intersect(&self.f)
    }

    pub fn cf(&self) -> ObjectClass {
        self.c.intersect(&self.f)
    }

    /// `(c ∩ w, f)` with its recorded flags.
    pub fn trivial_pair(&self) -> CotorsionPair {
        CotorsionPair { x: self.cw(), y: self.f.clone(), flags: self.status.trivial_pair.clone() }
    }

    /// `(c, w ∩ f)` with its recorded flags.
    pub fn pair(&self) -> CotorsionPair {
        CotorsionPair { x: self.c.clone(), y: self.wf(), flags: self.status.pair.clone() }
    }

    pub fn is_verified(&self) -> bool {
        self.status.verified == Status::Pass
    }

    /// The triple `(f, w, c)` of duals over the dual universe. Its pairs are
    /// the duals of this triple's pairs, exchanged.
    pub fn dual(&self) -> HoveyTriple {
        let status = TripleStatus {
            verified: self.status.verified,
            trivial_pair: self.pair().dual().flags,
            pair: self.trivial_pair().dual().flags,
            thick: self.status.thick,
        };
        HoveyTriple { c: self.f.clone(), w: self.w.clone(), f: self.c.clone(), status }
    }

    pub(crate) fn require_verified(&self) -> Result<()> {
        if self.is_verified() {
            Ok(())
        } else {
            Err(Error::Precondition("the triple must be verified first".into()))
        }
    }
}

/// Verifies that `(c ∩ w, f)` and `(c, w ∩ f)` are complete hereditary
/// cotorsion pairs and that `w` is thick.
pub fn verify_triple(
    u: &Universe,
    c: ObjectClass,
    w: ObjectClass,
    f: ObjectClass,
    limits: Limits,
) -> (HoveyTriple, Report) {
    let mut t = HoveyTriple::new(c, w, f);
    let mut report = Report::new("hovey triple");
    report.fact("c", u.ids(&t.c));
    report.fact("w", u.ids(&t.w));
    report.fact("f", u.ids(&t.f));
    let (p1, mut r1) = CotorsionPair::verified(u, t.cw(), t.f.clone(), limits.budget);
    r1.name = "(c ∩ w, f)".into();
    let (p2, mut r2) = CotorsionPair::verified(u, t.c.clone(), t.wf(), limits.budget);
    r2.name = "(c, w ∩ f)".into();
    t.status.trivial_pair = p1.flags;
    t.status.pair = p2.flags;
    report.child(r1);
    report.child(r2);
    let thick = check_thick(u, &t.w);
    t.status.thick = Status::from(&thick.verdict);
    report.child(thick);
    t.status.verified = Status::from(&report.verdict);
    (t, report)
}

/// Thickness of `w` over generated conflations: summand closure holds by
/// construction of classes as additive closures; two-out-of-three is
/// checked on every generated conflation whose terms decompose over the
/// universe.
pub fn check_thick(u: &Universe, w: &ObjectClass) -> Report {
    let mut report = Report::new("thick");
    report.fact("summand_closed", "by construction");
    let conflations = generate_conflations(u, CLOSURE_SAMPLE, THICKNESS_SEED);
    let (mut tested, mut skipped) = (0usize, 0usize);
    for c in &conflations {
        let terms = [&c.left, &c.mid, &c.right];
        let mut member = [false; 3];
        let mut unknown = false;
        for (k, m) in terms.iter().enumerate() {
            match u.contains(w, m) {
                Ok(Membership::Member) => member[k] = true,
                Ok(Membership::NotMember(_)) => {}
                _ => unknown = true,
            }
        }
        if unknown {
            skipped += 1;
            continue;
        }
        tested += 1;
        if member.iter().filter(|&&b| b).count() == 2 {
            let out = ["left", "middle", "right"][member.iter().position(|&b| !b).expect("one missing")];
            report.fail(format!("two terms of a conflation lie in w but the {out} term does not"));
            report.witness(Witness::conflation("two-out-of-three counterexample", c));
            break;
        }
    }
    report.fact("conflations_tested", tested);
    report.fact("conflations_skipped", skipped);
    report
}

pub(crate) fn require_extendable(u: &Universe, p: &CotorsionPair, n: usize, side: Side, limits: Limits) -> Result<()> {
    let recorded = match side {
        Side::Left => p.flags.left_extendable_upto,
        Side::Right => p.flags.right_extendable_upto,
    };
    if recorded.is_some_and(|k| k >= n) {
        return Ok(());
    }
    let e = check_extendable(u, p, n, side, limits.cap, limits.budget)?;
    match e.upto {
        Some(k) if k >= n => Ok(()),
        _ => Err(Error::Precondition(format!(
            "the pair is {} extendable {}, not up to {n}",
            if side == Side::Left { "left" } else { "right" },
            e.upto.map_or("at no level".to_string(), |k| format!("only up to {k}"))
        ))),
    }
}

pub(crate) fn class_equality(report: &mut Report, u: &Universe, name: &str, a: &ObjectClass, b: &ObjectClass) {
    report.fact(name, (u.ids(a), u.ids(b)));
    if let Some(k) = a.minus(b).iter().chain(b.minus(a).iter()).next() {
        report.fail(format!("{name}: the classes differ at {}", u.id(k)));
    }
}

/// `C_n ∩ W = (C ∩ W)_n` and `W ∩ F_n = (W ∩ F)_n`.
pub fn check_class_identities(u: &Universe, t: &HoveyTriple, n: usize, limits: Limits) -> Result<Report> {
    t.require_verified()?;
    let mut report = Report::new(format!("class identities at n = {n}"));
    let (pc, pcw) = (t.pair(), t.trivial_pair());
    let c_n = lift_class(u, &pc, n, Side::Left, limits.cap)?;
    let cw_n = lift_class(u, &pcw, n, Side::Left, limits.cap)?;
    class_equality(&mut report, u, "C_n ∩ W = (C ∩ W)_n", &c_n.intersect(&t.w), &cw_n);
    let f_n = lift_class(u, &pcw, n, Side::Right, limits.cap)?;
    let wf_n = lift_class(u, &pc, n, Side::Right, limits.cap)?;
    class_equality(&mut report, u, "W ∩ F_n = (W ∩ F)_n", &t.w.intersect(&f_n), &wf_n);
    Ok(report)
}

/// The lifted triple `(C_n, W, (C ∩ W)_n^⊥)` (left) or
/// `(^⊥(W ∩ F)_n, W, F_n)` (right), verified, together with the orthogonal
/// and kernel identities that accompany it.
pub fn lift_triple(
    u: &Universe,
    t: &HoveyTriple,
    n: usize,
    side: Side,
    limits: Limits,
) -> Result<(HoveyTriple, Report)> {
    t.require_verified()?;
    let (pc, pcw) = (t.pair(), t.trivial_pair());
    let mut report = Report::new(format!("{} lift at n = {n}", if side == Side::Left { "left" } else { "right" }));
    let (c, f, identity, kernel_expected) = match side {
        Side::Left => {
            require_extendable(u, &pcw, n, Side::Left, limits)?;
            let c_n = lift_class(u, &pc, n, Side::Left, limits.cap)?;
            let cw_n = lift_class(u, &pcw, n, Side::Left, limits.cap)?;
            let cw_n_perp = u.orthogonal(&cw_n, Side::Right);
            let c_n_perp = u.orthogonal(&c_n, Side::Right);
            let identity = (c_n_perp, t.w.intersect(&cw_n_perp));
            let kernel = cw_n.intersect(&cw_n_perp);
            (c_n, cw_n_perp, identity, kernel)
        }
        Side::Right => {
            require_extendable(u, &pc, n, Side::Right, limits)?;
            let f_n = lift_class(u, &pcw, n, Side::Right, limits.cap)?;
            let wf_n = lift_class(u, &pc, n, Side::Right, limits.cap)?;
            let perp_wf_n = u.orthogonal(&wf_n, Side::Left);
            let perp_f_n = u.orthogonal(&f_n, Side::Left);
            let identity = (perp_f_n, perp_wf_n.intersect(&t.w));
            let kernel = perp_wf_n.intersect(&wf_n);
            (perp_wf_n, f_n, identity, kernel)
        }
    };
    let (lifted, r) = verify_triple(u, c, t.w.clone(), f, limits);
    report.child(r);
    let orth_name =
        if side == Side::Left { "C_n^⊥ = W ∩ (C ∩ W)_n^⊥" } else { "^⊥F_n = ^⊥(W ∩ F)_n ∩ W" };
    class_equality(&mut report, u, orth_name, &identity.0, &identity.1);
    let k1 = lifted.c.intersect(&lifted.wf());
    let k2 = lifted.cw().intersect(&lifted.f);
    class_equality(&mut report, u, "kernel of (c_n, w ∩ f_n)", &k1, &kernel_expected);
    class_equality(&mut report, u, "kernel of (c_n ∩ w, f_n)", &k2, &kernel_expected);
    if n == 0 && (lifted.c != t.c || lifted.f != t.f) {
        report.fail("the lift at n = 0 differs from the triple");
    }
    Ok((lifted, report))
}

/// The two stated forms of the hypothesis on three triples `(A, W_i, F_i)`:
/// `W3 ∩ F1 = F2` and `F3 ⊆ F1`, or `W2 ∩ W3 = W1` and `F2 ⊆ W3`. Fails
/// only if the forms disagree.
pub fn check_recollement_hypotheses(
    u: &Universe,
    t1: &HoveyTriple,
    t2: &HoveyTriple,
    t3: &HoveyTriple,
) -> Result<Report> {
    let all = u.all();
    for t in [t1, t2, t3] {
        t.require_verified()?;
        if t.c != all {
            return Err(Error::Precondition("each triple must have the whole universe as cofibrant class".into()));
        }
    }
    let form_a = t3.w.intersect(&t1.f) == t2.f && t3.f.is_subset(&t1.f);
    let form_b = t2.w.intersect(&t3.w) == t1.w && t2.f.is_subset(&t3.w);
    let mut report = Report::new("recollement hypotheses");
    report.fact("fibrant_form", form_a);
    report.fact("weak_form", form_b);
    report.fact("holds", form_a && form_b);
    report.require(Verdict::from_bool(
        form_a == form_b,
        format!("the two stated forms disagree: fibrant form {form_a}, weak form {form_b}"),
    ));
    Ok(report)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::fixtures;
    use std::sync::Arc;

    pub fn dual_numbers_universe() -> Universe {
        Universe::enumerate(Arc::new(fixtures::dual_numbers(2)), 2).unwrap()
    }

    pub fn a2_universe() -> Universe {
        Universe::enumerate(Arc::new(fixtures::a2(2)), 2).unwrap()
    }

    pub fn verified(u: &Universe, c: ObjectClass, w: ObjectClass, f: ObjectClass) -> HoveyTriple {
        let (t, r) = verify_triple(u, c, w, f, Limits::default());
        assert!(r.verdict.is_pass(), "{r:?}");
        t
    }

    #[test]
    fn stable_module_triple_over_dual_numbers() {
        let u = dual_numbers_universe();
        let t = verified(&u, u.all(), u.projectives(), u.all());
        assert_eq!(t.status.thick, Status::Pass);
    }

    #[test]
    fn injective_triple_is_verified() {
        for u in [dual_numbers_universe(), a2_universe()] {
            verified(&u, u.all(), u.all(), u.injectives());
        }
    }

    #[test]
    fn simple_alone_is_not_thick() {
        let u = dual_numbers_universe();
        let r = check_thick(&u, &ObjectClass::new([0]));
        assert!(r.verdict.is_fail(), "{r:?}");
        for w in &r.witnesses {
            w.verify(u.algebra()).unwrap();
        }
    }

    #[test]
    fn class_identities_hold() {
        for u in [dual_numbers_universe(), a2_universe()] {
            let triples =
                [verified(&u, u.all(), u.all(), u.injectives()), verified(&u, u.projectives(), u.all(), u.all())];
            for t in &triples {
                for n in 0..=3 {
                    let r = check_class_identities(&u, t, n, Limits::default()).unwrap();
                    assert!(r.verdict.is_pass(), "{r:?}");
                }
            }
        }
        let u = dual_numbers_universe();
        let t = verified(&u, u.all(), u.projectives(), u.all());
        let r = check_class_identities(&u, &t, 2, Limits::default()).unwrap();
        assert!(r.verdict.is_pass());
        assert_eq!(r.facts["C_n ∩ W = (C ∩ W)_n"], serde_json::json!([["U1"], ["U1"]]));
    }

    #[test]
    fn lifts_of_small_triples() {
        let u = dual_numbers_universe();
        let t = verified(&u, u.all(), u.projectives(), u.all());
        for n in 0..=2 {
            let (l, r) = lift_triple(&u, &t, n, Side::Left, Limits::default()).unwrap();
            assert!(r.verdict.is_pass(), "{r:?}");
            assert_eq!((&l.c, &l.w, &l.f), (&t.c, &t.w, &t.f));
        }
        let u = a2_universe();
        let t = verified(&u, u.all(), u.all(), u.injectives());
        let (l, r) = lift_triple(&u, &t, 1, Side::Right, Limits::default()).unwrap();
        assert!(r.verdict.is_pass(), "{r:?}");
        assert_eq!((l.c.clone(), l.f.clone()), (u.projectives(), u.all()));
        let (l0, _) = lift_triple(&u, &t, 0, Side::Right, Limits::default()).unwrap();
        assert_eq!((&l0.c, &l0.w, &l0.f), (&t.c, &t.w, &t.f));
    }

    #[test]
    fn unverified_triple_is_rejected() {
        let u = a2_universe();
        let t = HoveyTriple::new(u.all(), u.all(), u.injectives());
        assert!(matches!(lift_triple(&u, &t, 1, Side::Left, Limits::default()), Err(Error::Precondition(_))));
    }

    #[test]
    fn recollement_hypotheses_on_degenerate_triples() {
        let u = a2_universe();
        let t = verified(&u, u.all(), u.all(), u.injectives());
        let r = check_recollement_hypotheses(&u, &t, &t, &t).unwrap();
        assert!(r.verdict.is_pass());
        assert_eq!(r.facts["holds"], serde_json::json!(true));
        let u = dual_numbers_universe();
        let t = verified(&u, u.all(), u.all(), u.injectives());
        let s = verified(&u, u.all(), u.projectives(), u.all());
        let r = check_recollement_hypotheses(&u, &t, &t, &s).unwrap();
        assert!(r.verdict.is_pass());
        assert_eq!(r.facts["holds"], serde_json::json!(false));
        let p = verified(&u, u.projectives(), u.all(), u.all());
        assert!(matches!(check_recollement_hypotheses(&u, &p, &t, &t), Err(Error::Precondition(_))));
    }

    #[test]
    fn dual_triple_has_dual_pairs() {
        let u = a2_universe();
        let t = verified(&u, u.all(), u.all(), u.injectives());
        let d = t.dual();
        let du = u.dual().unwrap();
        let (dv, r) = verify_triple(&du, d.c.clone(), d.w.clone(), d.f.clone(), Limits::default());
        assert!(r.verdict.is_pass());
        assert_eq!(dv.status.pair.is_pair, d.status.pair.is_pair);
        assert_eq!(d.f, u.all());
    }
}
