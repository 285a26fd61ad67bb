//! Relative projective and injective dimensions with respect to a complete
//! hereditary cotorsion pair, the lifted classes they cut out, and
//! consistency checks between their characterisations.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bqa::Module;
use crate::error::{Error, Result};
use crate::homalg::{
    cosyzygy, is_isomorphic, syzygy, truncated_coresolution, truncated_resolution, Conflation, IsoOutcome,
};
use crate::report::{Report, Verdict, Witness};
use crate::universe::{Membership, ObjectClass, Side, Universe};

use super::{default_budget, CotorsionPair};

/// Default number of (co)syzygy steps examined before giving up.
pub const DEFAULT_CAP: usize = 8;
/// Levels at which the characterisations of relative dimension are compared.
const COHERENCE_LEVELS: usize = 3;

/// Natural numbers extended by infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtNat {
    Fin(usize),
    Inf,
}

impl ExtNat {
    fn succ(self) -> ExtNat {
        match self {
            ExtNat::Fin(n) => ExtNat::Fin(n + 1),
            ExtNat::Inf => ExtNat::Inf,
        }
    }

    /// `n - 1`, read as `0` at `n = 0`.
    fn pred(self) -> ExtNat {
        match self {
            ExtNat::Fin(n) => ExtNat::Fin(n.saturating_sub(1)),
            ExtNat::Inf => ExtNat::Inf,
        }
    }
}

impl std::fmt::Display for ExtNat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtNat::Fin(n) => write!(f, "{n}"),
            ExtNat::Inf => write!(f, "∞"),
        }
    }
}

/// A relative dimension as far as it could be determined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RelDim {
    Finite {
        value: usize,
    },
    /// Infinite, certified by `Ω^from ≅ Ω^to` (or cosyzygies).
    Infinite {
        from: usize,
        to: usize,
    },
    /// Not determined: at least `value`.
    AtLeast {
        value: usize,
    },
}

impl RelDim {
    pub fn value(&self) -> Option<ExtNat> {
        match *self {
            RelDim::Finite { value } => Some(ExtNat::Fin(value)),
            RelDim::Infinite { .. } => Some(ExtNat::Inf),
            RelDim::AtLeast { .. } => None,
        }
    }

    /// Whether the dimension is at most `n`, when that is decided.
    pub fn at_most(&self, n: usize) -> Option<bool> {
        match *self {
            RelDim::Finite { value } => Some(value <= n),
            RelDim::Infinite { .. } => Some(false),
            RelDim::AtLeast { value } => (n < value).then_some(false),
        }
    }
}

impl std::fmt::Display for RelDim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RelDim::Finite { value } => write!(f, "{value}"),
            RelDim::Infinite { .. } => write!(f, "∞"),
            RelDim::AtLeast { value } => write!(f, "≥{value}"),
        }
    }
}

/// Relative projective dimension with respect to `x` (`Side::Left`) or
/// relative injective dimension with respect to `y` (`Side::Right`): the
/// least `n ≤ cap` with `Ext^{n+1}(M, y) = 0` (resp. `Ext^{n+1}(x, M) = 0`).
/// Infinity is reported only with a (co)syzygy periodicity witness.
pub fn rel_dim(
    u: &Universe,
    p: &CotorsionPair,
    m: &Module,
    side: Side,
    cap: usize,
) -> Result<(RelDim, Option<Witness>)> {
    p.require_complete_hereditary()?;
    let alg = u.algebra();
    m.validate(alg)?;
    for n in 0..=cap {
        let vanishes = match side {
            Side::Left => p.y.iter().all(|j| u.ext(m, u.module(j), n + 1) == 0),
            Side::Right => p.x.iter().all(|i| u.ext(u.module(i), m, n + 1) == 0),
        };
        if vanishes {
            return Ok((RelDim::Finite { value: n }, None));
        }
    }
    let co = side == Side::Right;
    let shifts: Vec<Module> = (0..=cap).map(|k| if co { cosyzygy(alg, m, k) } else { syzygy(alg, m, k) }).collect();
    for to in 1..=cap {
        if shifts[to].is_zero() {
            break;
        }
        for from in 0..to {
            if shifts[from].dims() != shifts[to].dims() {
                continue;
            }
            if let IsoOutcome::Iso(f) = is_isomorphic(alg, &shifts[from], &shifts[to])? {
                let w = Witness::Periodicity {
                    label: format!("{} periodicity", if co { "cosyzygy" } else { "syzygy" }),
                    module: m.to_spec(),
                    from,
                    to,
                    cosyzygy: co,
                    map: f.to_spec(),
                };
                return Ok((RelDim::Infinite { from, to }, Some(w)));
            }
        }
    }
    Ok((RelDim::AtLeast { value: cap + 1 }, None))
}

/// [`rel_dim`] of every universe object, in index order.
pub fn rel_dims(u: &Universe, p: &CotorsionPair, side: Side, cap: usize) -> Result<Vec<(RelDim, Option<Witness>)>> {
    p.require_complete_hereditary()?;
    (0..u.len()).into_par_iter().map(|i| rel_dim(u, p, u.module(i), side, cap)).collect()
}

fn class_from_dims(u: &Universe, dims: &[(RelDim, Option<Witness>)], n: usize) -> Result<ObjectClass> {
    let undecided: Vec<String> =
        dims.iter().enumerate().filter(|(_, (d, _))| d.at_most(n).is_none()).map(|(i, _)| u.id(i)).collect();
    if !undecided.is_empty() {
        return Err(Error::Undecided(format!("relative dimension undetermined for {}", undecided.join(", "))));
    }
    Ok(dims.iter().enumerate().filter(|(_, (d, _))| d.at_most(n) == Some(true)).map(|(i, _)| i).collect())
}

/// `X_n` (objects of relative projective dimension at most `n`) for
/// `Side::Left`, or `Y_n` for `Side::Right`.
pub fn lift_class(u: &Universe, p: &CotorsionPair, n: usize, side: Side, cap: usize) -> Result<ObjectClass> {
    class_from_dims(u, &rel_dims(u, p, side, cap)?, n)
}

fn dims_of(u: &Universe, p: &CotorsionPair, c: &Conflation, side: Side, cap: usize) -> Result<[RelDim; 3]> {
    Ok([
        rel_dim(u, p, &c.left, side, cap)?.0,
        rel_dim(u, p, &c.mid, side, cap)?.0,
        rel_dim(u, p, &c.right, side, cap)?.0,
    ])
}

/// Checks the three inequalities relating relative dimensions along a
/// conflation `A ↣ B ↠ C`, and the equalities they carry under their side
/// conditions. For `Side::Right` the dual statements for injective
/// dimensions are checked, with the roles of `A` and `C` exchanged.
pub fn check_dimension_inequalities(
    u: &Universe,
    p: &CotorsionPair,
    c: &Conflation,
    side: Side,
    cap: usize,
) -> Result<Report> {
    let mut report = Report::new("dimension inequalities");
    let dims = dims_of(u, p, c, side, cap)?;
    report.fact("dims", dims.iter().map(ToString::to_string).collect::<Vec<_>>());
    let [Some(a), Some(b), Some(cc)] = dims.map(|d| d.value()) else {
        report.inconclusive("a relative dimension is undetermined");
        return Ok(report);
    };
    let (a, c_) = if side == Side::Left { (a, cc) } else { (cc, a) };
    report.require(inequality("(1)", a, b.max(c_.pred()), b != c_));
    report.require(inequality("(2)", b, a.max(c_), c_ != a.succ()));
    report.require(inequality("(3)", c_, b.max(a.succ()), b != a));
    if !report.verdict.is_pass() {
        report.witness(Witness::conflation("conflation", c));
    }
    Ok(report)
}

fn inequality(name: &str, lhs: ExtNat, rhs: ExtNat, equality_forced: bool) -> Verdict {
    if lhs > rhs {
        Verdict::fail(format!("{name}: {lhs} > {rhs}"))
    } else if equality_forced && lhs != rhs {
        Verdict::fail(format!("{name}: {lhs} < {rhs} although equality is forced"))
    } else {
        Verdict::Pass
    }
}

/// Membership in a side of the pair: by decomposition when every summand is
/// in the universe, by Ext vanishing otherwise.
fn member(u: &Universe, p: &CotorsionPair, m: &Module, side: Side) -> Result<bool> {
    let class = if side == Side::Left { &p.x } else { &p.y };
    Ok(match u.contains(class, m)? {
        Membership::Member => true,
        Membership::NotMember(_) => false,
        Membership::Unknown(_) => {
            if side == Side::Left {
                p.in_x(u, m)
            } else {
                p.in_y(u, m)
            }
        }
    })
}

/// Compares, at each level `k ≤ 3`, three characterisations of "relative
/// dimension at most `k`": Ext vanishing; the `k`-th (co)syzygy along the
/// minimal (co)resolution and along iterated special approximations lying
/// in the class; and the existence of an explicit length-`k` (co)resolution
/// by class members, emitted as a witness.
pub fn check_dimension_characterisations(
    u: &Universe,
    p: &CotorsionPair,
    m: &Module,
    side: Side,
    cap: usize,
) -> Result<Report> {
    let alg = u.algebra();
    let (dim, periodic) = rel_dim(u, p, m, side, cap)?;
    let mut report = Report::new("dimension characterisations");
    report.fact("rel_dim", dim);
    if let Some(w) = periodic {
        report.witness(w);
    }
    let sides = p.sides(u);
    let mut approx_kernel = Some(m.clone());
    for k in 0..=COHERENCE_LEVELS.min(cap) {
        let by_ext = dim.at_most(k);
        let res = if side == Side::Left { truncated_resolution(alg, m, k) } else { truncated_coresolution(alg, m, k) };
        let last = res.terms.last().expect("nonempty").clone();
        let minimal = member(u, p, &last, side)?;
        let along_approx = match &approx_kernel {
            Some(kern) => Some(member(u, p, kern, side)?),
            None => None,
        };
        let mut level = Report::new(format!("level {k}"));
        level.fact("ext", by_ext);
        level.fact("minimal", minimal);
        level.fact("approximations", along_approx);
        if let Some(e) = by_ext {
            level.require(Verdict::from_bool(e == minimal, "Ext criterion and minimal (co)syzygy disagree"));
        }
        if let Some(a) = along_approx {
            level.require(Verdict::from_bool(a == minimal, "minimal and approximation (co)syzygies disagree"));
        }
        if minimal {
            res.validate(alg)?;
            let terms_ok = res.terms.iter().map(|t| member(u, p, t, side)).collect::<Result<Vec<_>>>()?;
            level.require(Verdict::from_bool(terms_ok.iter().all(|&b| b), "a resolution term lies outside the class"));
            if by_ext == Some(true) && dim.at_most(k.saturating_sub(1)) != Some(true) || k == 0 {
                level.witness(Witness::resolution(format!("length-{k} resolution by class members"), &res));
            }
        }
        report.child(level);
        approx_kernel = approx_kernel.and_then(|kern| {
            let b = default_budget(u, &kern).max(default_budget(u, m));
            if side == Side::Left {
                sides.special_precover(&kern, b).map(|w| w.conflation.left)
            } else {
                sides.special_preenvelope(&kern, b).map(|w| w.conflation.right)
            }
        });
    }
    Ok(report)
}

/// Result of [`check_extendable`]: the per-`n` table and the lifted pairs.
#[derive(Clone, Debug)]
pub struct Extendability {
    pub report: Report,
    pub pairs: Vec<CotorsionPair>,
    /// Largest `n` such that the lifted pairs at `0..=n` all verified.
    pub upto: Option<usize>,
}

/// For `n ≤ n_max`, builds `(X_n, X_n^⊥)` (left) or `(^⊥Y_n, Y_n)` (right)
/// and checks that it is a complete cotorsion pair, and hereditary as well.
pub fn check_extendable(
    u: &Universe,
    p: &CotorsionPair,
    n_max: usize,
    side: Side,
    cap: usize,
    budget: Option<usize>,
) -> Result<Extendability> {
    let dims = rel_dims(u, p, side, cap)?;
    let mut report = Report::new(format!("{} extendable", if side == Side::Left { "left" } else { "right" }));
    report.fact("rel_dims", dims.iter().map(|(d, _)| d.to_string()).collect::<Vec<_>>());
    let mut pairs = Vec::new();
    let mut upto = None;
    let mut unbroken = true;
    for n in 0..=n_max {
        let mut level = Report::new(format!("n = {n}"));
        match class_from_dims(u, &dims, n) {
            Err(e) => level.inconclusive(e.to_string()),
            Ok(class) => {
                let (x, y) = match side {
                    Side::Left => (class.clone(), u.orthogonal(&class, Side::Right)),
                    Side::Right => (u.orthogonal(&class, Side::Left), class.clone()),
                };
                let (mut lifted, r) = CotorsionPair::verified(u, x, y, budget);
                level.fact("x", u.ids(&lifted.x));
                level.fact("y", u.ids(&lifted.y));
                level.child(r);
                if level.verdict.is_pass() {
                    match side {
                        Side::Left => lifted.flags.left_extendable_upto = Some(0),
                        Side::Right => lifted.flags.right_extendable_upto = Some(0),
                    }
                }
                pairs.push(lifted);
            }
        }
        let pass = level.verdict.is_pass();
        unbroken &= pass;
        if unbroken {
            upto = Some(n);
        }
        report.child(level);
    }
    report.fact("extendable_upto", upto);
    Ok(Extendability { report, pairs, upto })
}

/// Updates the flags of `p` from an extendability check.
pub fn record_extendability(p: &mut CotorsionPair, side: Side, e: &Extendability) {
    match side {
        Side::Left => p.flags.left_extendable_upto = e.upto,
        Side::Right => p.flags.right_extendable_upto = e.upto,
    }
}

#[cfg(test)]
mod tests {
    use super::super::generate_conflations;
    use super::*;
    use crate::fixtures;
    use std::sync::Arc;

    fn verified(u: &Universe, x: ObjectClass, y: ObjectClass) -> CotorsionPair {
        let (p, r) = CotorsionPair::verified(u, x, y, None);
        assert!(r.verdict.is_pass(), "{r:?}");
        p
    }

    fn universes() -> Vec<Universe> {
        vec![
            Universe::enumerate(Arc::new(fixtures::dual_numbers(2)), 2).unwrap(),
            Universe::enumerate(Arc::new(fixtures::a2(2)), 2).unwrap(),
            Universe::enumerate(Arc::new(fixtures::linear(2, 3)), 3).unwrap(),
        ]
    }

    #[test]
    fn requires_verified_pair() {
        let u = &universes()[1];
        let p = CotorsionPair::new(u.projectives(), u.all());
        assert!(matches!(rel_dim(u, &p, u.module(0), Side::Left, 4), Err(Error::Precondition(_))));
    }

    #[test]
    fn projective_dimension_of_simple_over_a2() {
        let u = &universes()[1];
        let p = verified(u, u.projectives(), u.all());
        let s1 = Module::simple(u.algebra(), 0);
        assert_eq!(rel_dim(u, &p, &s1, Side::Left, DEFAULT_CAP).unwrap().0, RelDim::Finite { value: 1 });
        assert_eq!(lift_class(u, &p, 1, Side::Left, DEFAULT_CAP).unwrap(), u.all());
        assert_eq!(lift_class(u, &p, 0, Side::Left, DEFAULT_CAP).unwrap(), u.projectives());
    }

    #[test]
    fn simple_over_dual_numbers_is_periodic() {
        let u = &universes()[0];
        let p = verified(u, u.projectives(), u.all());
        let (d, w) = rel_dim(u, &p, u.module(0), Side::Left, DEFAULT_CAP).unwrap();
        assert_eq!(d, RelDim::Infinite { from: 0, to: 1 });
        w.unwrap().verify(u.algebra()).unwrap();
        for n in 0..4 {
            assert_eq!(lift_class(u, &p, n, Side::Left, DEFAULT_CAP).unwrap(), ObjectClass::new([1]));
        }
        let q = verified(u, u.all(), u.injectives());
        let (d, w) = rel_dim(u, &q, u.module(0), Side::Right, DEFAULT_CAP).unwrap();
        assert!(matches!(d, RelDim::Infinite { .. }));
        w.unwrap().verify(u.algebra()).unwrap();
    }

    #[test]
    fn lifted_classes_grow() {
        for u in universes() {
            for (x, y, side) in [(u.projectives(), u.all(), Side::Left), (u.all(), u.injectives(), Side::Right)] {
                let p = verified(&u, x, y);
                let base = if side == Side::Left { p.x.clone() } else { p.y.clone() };
                let mut prev = lift_class(&u, &p, 0, side, DEFAULT_CAP).unwrap();
                assert_eq!(prev, base);
                for n in 1..4 {
                    let next = lift_class(&u, &p, n, side, DEFAULT_CAP).unwrap();
                    assert!(prev.is_subset(&next));
                    prev = next;
                }
            }
        }
    }

    #[test]
    fn dimension_inequalities_on_examples() {
        let u = &universes()[1];
        let alg = u.algebra();
        let p = verified(u, u.projectives(), u.all());
        let s1 = Module::simple(alg, 0);
        let step = crate::homalg::approx::cover(alg, &s1);
        let c = Conflation::from_deflation(alg, &step.module, &s1, &step.map).unwrap();
        let r = check_dimension_inequalities(u, &p, &c, Side::Left, DEFAULT_CAP).unwrap();
        assert!(r.verdict.is_pass());
        assert_eq!(r.facts["dims"], serde_json::json!(["0", "0", "1"]));
        let split = Conflation::split(alg, &Module::simple(alg, 1), &s1);
        assert!(check_dimension_inequalities(u, &p, &split, Side::Left, DEFAULT_CAP).unwrap().verdict.is_pass());
    }

    #[test]
    fn inequality_violations_are_caught() {
        let f = ExtNat::Fin;
        assert!(inequality("x", f(2), f(1), false).is_fail());
        assert!(inequality("x", f(1), f(2), true).is_fail());
        assert!(inequality("x", f(1), f(2), false).is_pass());
        assert!(inequality("x", ExtNat::Inf, ExtNat::Inf, true).is_pass());
        assert_eq!(f(0).pred(), f(0));
        assert!(f(7) < ExtNat::Inf);
    }

    #[test]
    fn dimension_inequalities_on_generated_conflations() {
        for u in universes() {
            let left = verified(&u, u.projectives(), u.all());
            let right = verified(&u, u.all(), u.injectives());
            for c in generate_conflations(&u, 60, 3) {
                let r = check_dimension_inequalities(&u, &left, &c, Side::Left, DEFAULT_CAP).unwrap();
                assert!(!r.verdict.is_fail(), "{r:?}");
                let r = check_dimension_inequalities(&u, &right, &c, Side::Right, DEFAULT_CAP).unwrap();
                assert!(!r.verdict.is_fail(), "{r:?}");
            }
        }
    }

    #[test]
    fn characterisations_agree() {
        for u in universes() {
            for (x, y, side) in [(u.projectives(), u.all(), Side::Left), (u.all(), u.injectives(), Side::Right)] {
                let p = verified(&u, x, y);
                for i in 0..u.len() {
                    let r = check_dimension_characterisations(&u, &p, u.module(i), side, DEFAULT_CAP).unwrap();
                    assert!(r.verdict.is_pass(), "{}: {r:?}", u.id(i));
                    for w in r.all_witnesses() {
                        w.verify(u.algebra()).unwrap();
                    }
                }
            }
        }
    }

    #[test]
    fn extendability_of_trivial_pairs() {
        for u in universes() {
            let p = verified(&u, u.projectives(), u.all());
            let e = check_extendable(&u, &p, 3, Side::Left, DEFAULT_CAP, None).unwrap();
            assert_eq!(e.upto, Some(3), "{:?}", e.report);
            let q = verified(&u, u.all(), u.injectives());
            let e = check_extendable(&u, &q, 3, Side::Right, DEFAULT_CAP, None).unwrap();
            assert_eq!(e.upto, Some(3));
            let zero = check_extendable(&u, &q, 0, Side::Right, DEFAULT_CAP, None).unwrap();
            assert_eq!(zero.pairs.len(), 1);
            assert_eq!((zero.pairs[0].x.clone(), zero.pairs[0].y.clone()), (q.x.clone(), q.y.clone()));
        }
    }
}
