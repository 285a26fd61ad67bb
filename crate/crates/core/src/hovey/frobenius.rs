//! Frobenius cores `C ∩ F` of Hovey triples and comparison of their stable
//! categories.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bqa::{hom_dim, hom_space, span_rank, Module, ModuleMap};
use crate::cotorsion::{approx::search, default_budget, Direction, Sides};
use crate::error::{Error, Result};
use crate::report::{Report, Witness};
use crate::universe::{Membership, ObjectClass, Universe};

use super::{HoveyTriple, Limits};

/// The bifibrant objects `c ∩ f` of a triple with their projective-injective
/// objects `c ∩ w ∩ f`, and the triple's classes for replacements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusCore {
    pub objects: ObjectClass,
    pub projinj: ObjectClass,
    /// Indecomposable objects outside `projinj`: one per nonzero stable
    /// isomorphism class.
    pub stable_classes: ObjectClass,
    pub c: ObjectClass,
    pub w: ObjectClass,
    pub f: ObjectClass,
}

fn in_add(u: &Universe, class: &ObjectClass, m: &Module) -> bool {
    matches!(u.contains(class, m), Ok(Membership::Member))
}

/// Builds the core and checks the Frobenius property: every object admits
/// an inflation into and a deflation from a sum of projective-injectives
/// with the other end inside the core, and projective-injectives have no
/// extensions with core objects on either side.
pub fn frobenius_core(u: &Universe, t: &HoveyTriple, limits: Limits) -> Result<(FrobeniusCore, Report)> {
    t.require_verified()?;
    let objects = t.cf();
    let projinj = objects.intersect(&t.w);
    let core = FrobeniusCore {
        stable_classes: objects.minus(&projinj),
        objects,
        projinj,
        c: t.c.clone(),
        w: t.w.clone(),
        f: t.f.clone(),
    };
    let mut report = Report::new("frobenius core");
    report.fact("objects", u.ids(&core.objects));
    report.fact("projinj", u.ids(&core.projinj));
    report.fact("stable_classes", u.ids(&core.stable_classes));
    for x in core.objects.iter() {
        for p in core.projinj.iter() {
            for (a, b) in [(x, p), (p, x)] {
                let d = u.ext1(a, b);
                if d != 0 {
                    report.fail(format!("Ext^1({}, {}) = {d} inside the core", u.id(a), u.id(b)));
                    report.witness(Witness::ext(
                        "extension against a projective-injective",
                        u.module(a),
                        u.module(b),
                        1,
                        d,
                    ));
                }
            }
        }
    }
    let children: Vec<Report> = core
        .stable_classes
        .members()
        .into_par_iter()
        .map(|i| {
            let m = u.module(i);
            let b = limits.budget.unwrap_or_else(|| default_budget(u, m));
            let mut r = Report::new(u.id(i));
            let into = search(u, &core.projinj, m, b, Direction::Preenvelope, &|c| in_add(u, &core.objects, &c.right));
            let onto = search(u, &core.projinj, m, b, Direction::Precover, &|c| in_add(u, &core.objects, &c.left));
            match into {
                Some(c) => r.witness(Witness::conflation(format!("inflation of {} into projinj", u.id(i)), &c)),
                None => r.inconclusive(format!("no inflation into projinj within budget {b}")),
            }
            match onto {
                Some(c) => r.witness(Witness::conflation(format!("deflation onto {} from projinj", u.id(i)), &c)),
                None => r.inconclusive(format!("no deflation from projinj within budget {b}")),
            }
            r
        })
        .collect();
    for c in children {
        report.child(c);
    }
    Ok((core, report))
}

/// `dim Hom(x, y)` modulo maps factoring through sums of `projinj` members.
pub fn stable_hom_dim(u: &Universe, projinj: &ObjectClass, x: &Module, y: &Module) -> usize {
    let alg = u.algebra();
    let total = hom_dim(alg, x, y);
    if total == 0 {
        return 0;
    }
    let mut through: Vec<ModuleMap> = Vec::new();
    for p in projinj.iter() {
        let pm = u.module(p);
        let to = hom_space(alg, x, pm).expect("universe modules");
        let from = hom_space(alg, pm, y).expect("universe modules");
        for f in &to {
            for g in &from {
                through.push(g.compose(f));
            }
        }
    }
    total - span_rank(&through)
}

/// Fibrant then cofibrant replacement of `m` in the triple of `core`, which
/// lands in `c ∩ f`.
fn replace(u: &Universe, core: &FrobeniusCore, m: &Module, limits: Limits) -> Option<Module> {
    let cw = core.c.intersect(&core.w);
    let wf = core.w.intersect(&core.f);
    let fibrant = Sides { u, x: &cw, y: &core.f };
    let cofibrant = Sides { u, x: &core.c, y: &wf };
    let budget = |m: &Module| limits.budget.unwrap_or_else(|| default_budget(u, m));
    let r = if fibrant.in_y(m) { m.clone() } else { fibrant.special_preenvelope(m, budget(m))?.conflation.mid };
    let q = if cofibrant.in_x(&r) { r } else { cofibrant.special_precover(&r, budget(&r))?.conflation.mid };
    Some(q)
}

/// The stable class of `m` in `core`: its summands outside `projinj`, which
/// must form a single universe object.
fn stable_class(u: &Universe, core: &FrobeniusCore, m: &Module) -> std::result::Result<usize, String> {
    let pieces = u.pieces(m).map_err(|e| e.to_string())?;
    let mut rest = Vec::new();
    for p in pieces {
        match p {
            Ok(i) if core.projinj.contains(i) => {}
            Ok(i) => rest.push(i),
            Err(_) => return Err("a summand lies outside the universe".into()),
        }
    }
    match rest.as_slice() {
        [i] if core.stable_classes.contains(*i) => Ok(*i),
        [i] => Err(format!("{} is not a stable class of the core", u.id(*i))),
        [] => Err("stably zero".into()),
        _ => Err(format!("{} non-projective-injective summands", rest.len())),
    }
}

/// Sends each stable class of `a` through replacement in `b`'s triple and
/// checks that this is a bijection onto `b`'s stable classes preserving
/// stable Hom dimensions.
pub fn stable_compare(u: &Universe, a: &FrobeniusCore, b: &FrobeniusCore, limits: Limits) -> Result<Report> {
    if !a.projinj.is_subset(&a.objects) || !b.projinj.is_subset(&b.objects) {
        return Err(Error::Precondition("projective-injectives must lie in the core".into()));
    }
    let mut report = Report::new("stable comparison");
    let mut matching: Vec<(usize, usize)> = Vec::new();
    for i in a.stable_classes.iter() {
        let image = replace(u, b, u.module(i), limits)
            .ok_or_else(|| "replacement not found within budget".to_string())
            .and_then(|m| stable_class(u, b, &m));
        match image {
            Ok(j) => matching.push((i, j)),
            Err(why) => report.fail(format!("{} has no image: {why}", u.id(i))),
        }
    }
    let images: ObjectClass = matching.iter().map(|&(_, j)| j).collect();
    if images.len() != matching.len() {
        report.fail("two stable classes have the same image");
    }
    if let Some(orphan) = b.stable_classes.minus(&images).iter().next() {
        report.fail(format!("{} is not hit by any stable class", u.id(orphan)));
    }
    report.fact("matching", matching.iter().map(|&(i, j)| (u.id(i), u.id(j))).collect::<Vec<_>>());
    let mut hom_pairs = Vec::new();
    for &(i, i2) in &matching {
        for &(j, j2) in &matching {
            let da = stable_hom_dim(u, &a.projinj, u.module(i), u.module(j));
            let db = stable_hom_dim(u, &b.projinj, u.module(i2), u.module(j2));
            if da != db {
                report.fail(format!("stable Hom({}, {}) has dimension {da} but its image has {db}", u.id(i), u.id(j)));
            }
            hom_pairs.push((u.id(i), u.id(j), da, db));
        }
    }
    report.fact("stable_hom", hom_pairs);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::super::tests::{a2_universe, dual_numbers_universe, verified};
    use super::super::{lift_triple, verify_triple};
    use super::*;
    use crate::fixtures;
    use crate::universe::Side;
    use std::sync::Arc;

    #[test]
    fn injective_triple_core_has_no_stable_classes() {
        let u = a2_universe();
        let t = verified(&u, u.all(), u.all(), u.injectives());
        let (core, r) = frobenius_core(&u, &t, Limits::default()).unwrap();
        assert!(r.verdict.is_pass());
        assert_eq!(core.objects, u.injectives());
        assert_eq!(core.projinj, u.injectives());
        assert!(core.stable_classes.is_empty());
    }

    #[test]
    fn dual_numbers_core() {
        let u = dual_numbers_universe();
        let t = verified(&u, u.all(), u.projectives(), u.all());
        let (core, r) = frobenius_core(&u, &t, Limits::default()).unwrap();
        assert!(r.verdict.is_pass(), "{r:?}");
        assert_eq!(core.objects, u.all());
        assert_eq!(core.projinj, ObjectClass::new([1]));
        assert_eq!(core.stable_classes, ObjectClass::new([0]));
        for w in r.all_witnesses() {
            w.verify(u.algebra()).unwrap();
        }
        let s = u.module(0);
        assert_eq!(hom_dim(u.algebra(), s, s), 1);
        assert_eq!(stable_hom_dim(&u, &core.projinj, s, s), 1);
        let r = stable_compare(&u, &core, &core, Limits::default()).unwrap();
        assert!(r.verdict.is_pass());
        assert_eq!(r.facts["matching"], serde_json::json!([["U0", "U0"]]));
    }

    #[test]
    fn truncated_cubic_core_has_two_stable_classes() {
        let u = Universe::enumerate(Arc::new(fixtures::truncated_polynomial(2, 3)), 3).unwrap();
        let (t, r) = verify_triple(&u, u.all(), u.projectives(), u.all(), Limits::default());
        assert!(r.verdict.is_pass(), "{r:?}");
        let (core, r) = frobenius_core(&u, &t, Limits::default()).unwrap();
        assert!(r.verdict.is_pass(), "{r:?}");
        assert_eq!(core.stable_classes.len(), 2);
    }

    #[test]
    fn projinj_has_zero_stable_hom() {
        let u = dual_numbers_universe();
        let t = verified(&u, u.all(), u.projectives(), u.all());
        let (core, _) = frobenius_core(&u, &t, Limits::default()).unwrap();
        for p in core.projinj.iter() {
            for x in core.objects.iter() {
                assert_eq!(stable_hom_dim(&u, &core.projinj, u.module(p), u.module(x)), 0);
                assert_eq!(stable_hom_dim(&u, &core.projinj, u.module(x), u.module(p)), 0);
            }
        }
    }

    #[test]
    fn towers_have_equivalent_stable_cores() {
        for u in [dual_numbers_universe(), a2_universe()] {
            let candidates = [
                (u.all(), u.projectives(), u.all()),
                (u.all(), u.all(), u.injectives()),
                (u.projectives(), u.all(), u.all()),
            ];
            let triples: Vec<HoveyTriple> =
                candidates.into_iter().map(|(c, w, f)| verify_triple(&u, c, w, f, Limits::default()).0).collect();
            assert!(triples.iter().filter(|t| t.is_verified()).count() >= 2);
            for t in triples.iter().filter(|t| t.is_verified()) {
                let (base, _) = frobenius_core(&u, t, Limits::default()).unwrap();
                for n in 0..=3 {
                    for side in [Side::Left, Side::Right] {
                        let Ok((l, r)) = lift_triple(&u, t, n, side, Limits::default()) else { continue };
                        assert!(r.verdict.is_pass(), "{r:?}");
                        let (core, _) = frobenius_core(&u, &l, Limits::default()).unwrap();
                        let cmp = stable_compare(&u, &core, &base, Limits::default()).unwrap();
                        assert!(cmp.verdict.is_pass(), "n = {n}: {cmp:?}");
                    }
                }
            }
        }
    }
}
