//! Cotorsion pairs over a universe: orthogonality, completeness with
//! explicit approximations, heredity, relative dimensions and lifted
//! classes.

pub mod approx;
pub mod dims;
pub mod generate;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bqa::Module;
use crate::error::{Error, Result};
use crate::homalg::Conflation;
use crate::report::{Report, Verdict, Witness};
use crate::universe::{Membership, ObjectClass, Side, Universe};

pub use approx::{ApproximationWitness, Direction, Method, Sides};
pub use dims::{
    check_dimension_characterisations, check_dimension_inequalities, check_extendable, lift_class,
    record_extendability, rel_dim, rel_dims, ExtNat, Extendability, RelDim, DEFAULT_CAP,
};
pub use generate::{extension_from, generate_conflations};

/// Number of generated conflations used by closure checks.
pub const CLOSURE_SAMPLE: usize = 200;
const CLOSURE_SEED: u64 = 0x5eed;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    #[default]
    Unchecked,
    Pass,
    Fail,
    Inconclusive,
}

impl From<&Verdict> for Status {
    fn from(v: &Verdict) -> Status {
        match v {
            Verdict::Pass => Status::Pass,
            Verdict::Fail { .. } => Status::Fail,
            Verdict::Inconclusive { .. } => Status::Inconclusive,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairFlags {
    pub is_pair: Status,
    pub complete: Status,
    pub hereditary: Status,
    pub left_extendable_upto: Option<usize>,
    pub right_extendable_upto: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CotorsionPair {
    pub x: ObjectClass,
    pub y: ObjectClass,
    #[serde(default)]
    pub flags: PairFlags,
}

impl CotorsionPair {
    /// An unchecked pair of classes.
    pub fn new(x: ObjectClass, y: ObjectClass) -> CotorsionPair {
        CotorsionPair { x, y, flags: PairFlags::default() }
    }

    /// Runs [`check_pair`], then [`check_complete`] and [`check_hereditary`]
    /// when the classes form a pair, recording the outcomes in the flags.
    pub fn verified(u: &Universe, x: ObjectClass, y: ObjectClass, budget: Option<usize>) -> (CotorsionPair, Report) {
        let mut p = CotorsionPair::new(x, y);
        let mut report = Report::new("cotorsion pair");
        let pair = check_pair(u, &p.x, &p.y);
        p.flags.is_pair = Status::from(&pair.verdict);
        report.child(pair);
        if p.flags.is_pair == Status::Pass {
            let complete = check_complete(u, &p, budget).expect("pair verified");
            p.flags.complete = Status::from(&complete.verdict);
            report.child(complete);
            let hereditary = check_hereditary(u, &p).expect("pair verified");
            p.flags.hereditary = Status::from(&hereditary.verdict);
            report.child(hereditary);
        }
        report.fact("x", u.ids(&p.x));
        report.fact("y", u.ids(&p.y));
        report.fact("flags", &p.flags);
        (p, report)
    }

    pub fn sides<'a>(&'a self, u: &'a Universe) -> Sides<'a> {
        Sides { u, x: &self.x, y: &self.y }
    }

    pub fn in_x(&self, u: &Universe, m: &Module) -> bool {
        self.sides(u).in_x(m)
    }

    pub fn in_y(&self, u: &Universe, n: &Module) -> bool {
        self.sides(u).in_y(n)
    }

    /// The pair `(y, x)` of duals over the dual universe, which keeps the
    /// same indexing. Flags carry over with the two sides exchanged.
    pub fn dual(&self) -> CotorsionPair {
        let flags = PairFlags {
            left_extendable_upto: self.flags.right_extendable_upto,
            right_extendable_upto: self.flags.left_extendable_upto,
            ..self.flags.clone()
        };
        CotorsionPair { x: self.y.clone(), y: self.x.clone(), flags }
    }

    /// Whether completeness and heredity have both been verified.
    pub fn is_complete_hereditary(&self) -> bool {
        self.flags.complete == Status::Pass && self.flags.hereditary == Status::Pass
    }

    pub(crate) fn require_complete_hereditary(&self) -> Result<()> {
        if self.is_complete_hereditary() {
            Ok(())
        } else {
            Err(Error::Precondition("the pair must be verified complete and hereditary first".into()))
        }
    }
}

/// Checks `x^⊥ = y` and `^⊥y = x` over the universe, reporting the first
/// counterexample found.
pub fn check_pair(u: &Universe, x: &ObjectClass, y: &ObjectClass) -> Report {
    let mut report = Report::new("is pair");
    let right = u.orthogonal(x, Side::Right);
    let left = u.orthogonal(y, Side::Left);
    report.fact("x_right_orthogonal", u.ids(&right));
    report.fact("y_left_orthogonal", u.ids(&left));
    'outer: for i in x.iter() {
        for j in y.iter() {
            let d = u.ext1(i, j);
            if d != 0 {
                report.fail(format!("Ext^1({}, {}) = {d}", u.id(i), u.id(j)));
                report.fact("counterexample", (u.id(i), u.id(j), d));
                report.witness(Witness::ext("nonvanishing Ext", u.module(i), u.module(j), 1, d));
                break 'outer;
            }
        }
    }
    if let Some(k) = right.minus(y).iter().next() {
        report.fail(format!("{} lies in the right orthogonal of x but not in y", u.id(k)));
        for i in x.iter() {
            report.witness(Witness::ext(format!("Ext^1({}, {})", u.id(i), u.id(k)), u.module(i), u.module(k), 1, 0));
        }
    }
    if let Some(k) = left.minus(x).iter().next() {
        report.fail(format!("{} lies in the left orthogonal of y but not in x", u.id(k)));
        for j in y.iter() {
            report.witness(Witness::ext(format!("Ext^1({}, {})", u.id(k), u.id(j)), u.module(k), u.module(j), 1, 0));
        }
    }
    report
}

fn require_pair(u: &Universe, p: &CotorsionPair) -> Result<()> {
    if p.flags.is_pair == Status::Pass || check_pair(u, &p.x, &p.y).verdict.is_pass() {
        Ok(())
    } else {
        Err(Error::Precondition("the classes do not form a cotorsion pair".into()))
    }
}

/// Default dimension budget for approximation searches: three times the
/// dimension of `m`, and at least room for `m` plus one universe object.
pub fn default_budget(u: &Universe, m: &Module) -> usize {
    (3 * m.total_dim()).max(m.total_dim() + u.max_dim())
}

/// Finds a special precover and a special preenvelope for every universe
/// object. Objects whose approximations are not found within the budget
/// make the verdict inconclusive.
pub fn check_complete(u: &Universe, p: &CotorsionPair, budget: Option<usize>) -> Result<Report> {
    require_pair(u, p)?;
    let sides = p.sides(u);
    let children: Vec<Report> = (0..u.len())
        .into_par_iter()
        .map(|i| {
            let m = u.module(i);
            let b = budget.unwrap_or_else(|| default_budget(u, m));
            let mut r = Report::new(u.id(i));
            r.fact("budget", b);
            for (dir, found) in [
                (Direction::Precover, sides.special_precover(m, b)),
                (Direction::Preenvelope, sides.special_preenvelope(m, b)),
            ] {
                let name = serde_json::to_value(dir).expect("serialisable");
                match found {
                    Some(w) => {
                        r.fact(&format!("{}_method", name.as_str().expect("string")), w.method);
                        r.witness(w.to_witness(format!("special {} of {}", name.as_str().expect("string"), u.id(i))));
                    }
                    None => r.inconclusive(format!(
                        "no special {} found within dimension budget {b}",
                        name.as_str().expect("string")
                    )),
                }
            }
            r
        })
        .collect();
    let mut report = Report::new("complete");
    for c in children {
        report.child(c);
    }
    Ok(report)
}

/// Checks `Ext^d(X, Y) = 0` for `d ∈ {1, 2, 3}` and the closure of `x`
/// under kernels of deflations (and `y` under cokernels of inflations) on
/// generated conflations.
pub fn check_hereditary(u: &Universe, p: &CotorsionPair) -> Result<Report> {
    require_pair(u, p)?;
    let mut report = Report::new("hereditary");
    let higher: Vec<(usize, usize, usize, usize)> =
        p.x.members()
            .into_par_iter()
            .flat_map_iter(|i| {
                let ys = p.y.members();
                ys.into_iter().flat_map(move |j| (2..=3).map(move |d| (i, j, d, u.ext(u.module(i), u.module(j), d))))
            })
            .filter(|t| t.3 != 0)
            .collect();
    if let Some(&(i, j, d, dim)) = higher.first() {
        report.fail(format!("Ext^{d}({}, {}) = {dim}", u.id(i), u.id(j)));
        report.witness(Witness::ext("nonvanishing higher Ext", u.module(i), u.module(j), d, dim));
    }
    let conflations = generate_conflations(u, CLOSURE_SAMPLE, CLOSURE_SEED);
    report.child(check_resolving_closure(u, &p.x, &p.y, &conflations)?);
    Ok(report)
}

/// On the given conflations `A ↣ B ↠ C`: `B, C ∈ x` forces `A ∈ x` and
/// `A, B ∈ y` forces `C ∈ y`. Membership is decided by decomposition over
/// the universe; conflations with terms outside it are skipped.
pub fn check_resolving_closure(
    u: &Universe,
    x: &ObjectClass,
    y: &ObjectClass,
    conflations: &[Conflation],
) -> Result<Report> {
    let mut report = Report::new("closure");
    let mut tested = 0usize;
    let mut skipped = 0usize;
    for (k, c) in conflations.iter().enumerate() {
        let mem = |cls: &ObjectClass, m: &Module| u.contains(cls, m);
        let (lx, mx, rx) = (mem(x, &c.left)?, mem(x, &c.mid)?, mem(x, &c.right)?);
        let (ly, my, ry) = (mem(y, &c.left)?, mem(y, &c.mid)?, mem(y, &c.right)?);
        let all = [&lx, &mx, &rx, &ly, &my, &ry];
        if all.iter().any(|m| matches!(m, Membership::Unknown(_))) {
            skipped += 1;
            continue;
        }
        tested += 1;
        let is = |m: &Membership| matches!(m, Membership::Member);
        if is(&mx) && is(&rx) && !is(&lx) {
            report.fail(format!("conflation {k}: kernel of a deflation between members of x is not in x"));
            report.witness(Witness::conflation("x not closed under kernels of deflations", c));
            break;
        }
        if is(&ly) && is(&my) && !is(&ry) {
            report.fail(format!("conflation {k}: cokernel of an inflation between members of y is not in y"));
            report.witness(Witness::conflation("y not closed under cokernels of inflations", c));
            break;
        }
    }
    report.fact("tested", tested);
    report.fact("skipped", skipped);
    Ok(report)
}
