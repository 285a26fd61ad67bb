//! Representations of a finite shape quiver with values in modules over an
//! algebra, the classes `Φ(X)`, `Ψ(Y)` and `Rep(Q, X)`, and lifts of
//! cotorsion pairs and Hovey triples to representations.
//!
//! A representation is kept as functor data. For universes, Ext and
//! approximations it is converted to a module over the product algebra
//! `kQ ⊗ A`, whose quiver has vertices `q|v`, arrows `q|a` for value arrows
//! and `α@v` for shape arrows, and commutativity relations.

use std::sync::Arc;

use petgraph::graph::DiGraph;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bqa::{Algebra, AlgebraSpec, ArrowSpec, Module, ModuleMap, TermSpec};
use crate::cotorsion::{lift_class, rel_dim, CotorsionPair, Status};
use crate::error::{Error, Result};
use crate::homalg::{cokernel, kernel};
use crate::hovey::{
    class_equality, frobenius_core, lift_triple, require_extendable, stable_compare, verify_triple, HoveyTriple, Limits,
};
use crate::report::Report;
use crate::universe::{Membership, ObjectClass, Side, Universe};

/// Default cap on the total dimension of representations.
pub const DEFAULT_REP_CAP: usize = 4;

const ROOTEDNESS_CRITERION: &str = "finite quiver: rooted iff no directed cycle";

/// A finite quiver without relations, used as the shape of representations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeQuiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowSpec>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rootedness {
    pub left: bool,
    pub right: bool,
}

impl ShapeQuiver {
    /// `1 -> 2 -> ... -> n`.
    pub fn linear(n: usize) -> ShapeQuiver {
        ShapeQuiver {
            vertices: (1..=n).map(|i| i.to_string()).collect(),
            arrows: (1..n)
                .map(|i| ArrowSpec { id: format!("s{i}"), src: i.to_string(), tgt: (i + 1).to_string() })
                .collect(),
        }
    }

    /// Source and target indices of every arrow.
    pub fn ends(&self) -> Result<Vec<(usize, usize)>> {
        for (i, v) in self.vertices.iter().enumerate() {
            if self.vertices[..i].contains(v) {
                return Err(Error::Malformed(format!("duplicate shape vertex '{v}'")));
            }
        }
        let index = |id: &str| {
            self.vertices
                .iter()
                .position(|v| v == id)
                .ok_or_else(|| Error::Malformed(format!("shape arrow endpoint '{id}' is not a vertex")))
        };
        self.arrows.iter().map(|a| Ok((index(&a.src)?, index(&a.tgt)?))).collect()
    }

    fn incoming(&self, ends: &[(usize, usize)], i: usize) -> Vec<usize> {
        (0..ends.len()).filter(|&a| ends[a].1 == i).collect()
    }

    fn outgoing(&self, ends: &[(usize, usize)], i: usize) -> Vec<usize> {
        (0..ends.len()).filter(|&a| ends[a].0 == i).collect()
    }
}

/// Left rooted means no infinite chain `⋯ → • → •`, right rooted no
/// infinite chain `• → • → ⋯`; for a finite quiver both hold exactly when
/// there is no directed cycle.
pub fn check_rooted(q: &ShapeQuiver) -> Result<Rootedness> {
    let ends = q.ends()?;
    let mut g = DiGraph::<(), ()>::new();
    let nodes: Vec<_> = q.vertices.iter().map(|_| g.add_node(())).collect();
    for &(s, t) in &ends {
        g.add_edge(nodes[s], nodes[t], ());
    }
    let acyclic = !petgraph::algo::is_cyclic_directed(&g);
    Ok(Rootedness { left: acyclic, right: acyclic })
}

/// A representation: a value module per shape vertex and a module map per
/// shape arrow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    pub vertex: Vec<Module>,
    pub arrows: Vec<ModuleMap>,
}

/// `φ_i: ⊕ X(s(a)) → X(i)` over arrows into `i` with cokernel `C_i(X)`, and
/// `ψ_i: X(i) → ∏ X(t(a))` over arrows out of `i` with kernel `K_i(X)`.
#[derive(Clone, Debug)]
pub struct VertexData {
    pub vertex: String,
    pub phi_domain: Module,
    pub phi: ModuleMap,
    pub coker_phi: Module,
    pub psi_codomain: Module,
    pub psi: ModuleMap,
    pub ker_psi: Module,
}

/// A shape quiver and a value algebra with their product algebra.
#[derive(Clone, Debug)]
pub struct RepSetting {
    pub shape: ShapeQuiver,
    pub value: Arc<Algebra>,
    pub product: Arc<Algebra>,
    ends: Vec<(usize, usize)>,
}

fn product_spec(shape: &ShapeQuiver, ends: &[(usize, usize)], value: &AlgebraSpec) -> AlgebraSpec {
    let vid = |q: &str, v: &str| format!("{q}|{v}");
    let mut vertices = Vec::new();
    for q in &shape.vertices {
        for v in &value.vertices {
            vertices.push(vid(q, v));
        }
    }
    let mut arrows = Vec::new();
    let mut relations = Vec::new();
    for q in &shape.vertices {
        for a in &value.arrows {
            arrows.push(ArrowSpec { id: format!("{q}|{}", a.id), src: vid(q, &a.src), tgt: vid(q, &a.tgt) });
        }
        for rel in &value.relations {
            relations.push(
                rel.iter()
                    .map(|t| TermSpec { coeff: t.coeff, path: t.path.iter().map(|a| format!("{q}|{a}")).collect() })
                    .collect(),
            );
        }
    }
    for (alpha, &(s, t)) in shape.arrows.iter().zip(ends) {
        for v in &value.vertices {
            arrows.push(ArrowSpec {
                id: format!("{}@{v}", alpha.id),
                src: vid(&shape.vertices[s], v),
                tgt: vid(&shape.vertices[t], v),
            });
        }
    }
    for (alpha, &(s, t)) in shape.arrows.iter().zip(ends) {
        let (qs, qt) = (&shape.vertices[s], &shape.vertices[t]);
        for a in &value.arrows {
            relations.push(vec![
                TermSpec { coeff: 1, path: vec![format!("{}@{}", alpha.id, a.src), format!("{qt}|{}", a.id)] },
                TermSpec { coeff: -1, path: vec![format!("{qs}|{}", a.id), format!("{}@{}", alpha.id, a.tgt)] },
            ]);
        }
    }
    AlgebraSpec { field: value.field, vertices, arrows, relations }
}

impl RepSetting {
    /// Requires a rooted shape; the product algebra is then finite
    /// dimensional.
    pub fn new(shape: ShapeQuiver, value: Arc<Algebra>) -> Result<RepSetting> {
        let r = check_rooted(&shape)?;
        if !(r.left && r.right) {
            return Err(Error::Precondition(format!("the shape quiver is not rooted ({ROOTEDNESS_CRITERION})")));
        }
        let ends = shape.ends()?;
        let product = Arc::new(Algebra::from_spec(&product_spec(&shape, &ends, value.spec()))?);
        Ok(RepSetting { shape, value, product, ends })
    }

    fn nv(&self) -> usize {
        self.value.vertex_count()
    }

    fn na(&self) -> usize {
        self.value.arrow_count()
    }

    /// Every indecomposable representation of total dimension at most `cap`.
    pub fn universe(&self, cap: usize) -> Result<Universe> {
        Universe::enumerate(self.product.clone(), cap)
    }

    pub fn to_module(&self, x: &Representation) -> Result<Module> {
        x.validate(self)?;
        let mut dims = Vec::new();
        let mut maps = Vec::new();
        for m in &x.vertex {
            dims.extend_from_slice(m.dims());
            maps.extend(m.maps().iter().cloned());
        }
        for f in &x.arrows {
            maps.extend(f.blocks().iter().cloned());
        }
        Module::new(&self.product, dims, maps)
    }

    pub fn representation(&self, m: &Module) -> Representation {
        let (nv, na, nq) = (self.nv(), self.na(), self.shape.vertices.len());
        let vertex = (0..nq)
            .map(|q| {
                Module::from_parts(m.dims()[q * nv..(q + 1) * nv].to_vec(), m.maps()[q * na..(q + 1) * na].to_vec())
            })
            .collect();
        let arrows = (0..self.ends.len())
            .map(|alpha| {
                let base = nq * na + alpha * nv;
                ModuleMap::new(m.maps()[base..base + nv].to_vec())
            })
            .collect();
        Representation { vertex, arrows }
    }

    pub fn vertex_data(&self, x: &Representation) -> Vec<VertexData> {
        let alg = &*self.value;
        (0..self.shape.vertices.len())
            .map(|i| {
                let xi = &x.vertex[i];
                let inc = self.shape.incoming(&self.ends, i);
                let sum = Module::direct_sum(alg, &inc.iter().map(|&a| &x.vertex[self.ends[a].0]).collect::<Vec<_>>());
                let mut phi = ModuleMap::zero(alg, &sum.module, xi);
                for (k, &a) in inc.iter().enumerate() {
                    phi = phi.add(&x.arrows[a].compose(&sum.projs[k]));
                }
                let (coker_phi, _) = cokernel(alg, &phi, xi);
                let out = self.shape.outgoing(&self.ends, i);
                let prod = Module::direct_sum(alg, &out.iter().map(|&a| &x.vertex[self.ends[a].1]).collect::<Vec<_>>());
                let mut psi = ModuleMap::zero(alg, xi, &prod.module);
                for (k, &a) in out.iter().enumerate() {
                    psi = psi.add(&prod.incls[k].compose(&x.arrows[a]));
                }
                let (ker_psi, _) = kernel(alg, &psi, xi);
                VertexData {
                    vertex: self.shape.vertices[i].clone(),
                    phi_domain: sum.module,
                    phi,
                    coker_phi,
                    psi_codomain: prod.module,
                    psi,
                    ker_psi,
                }
            })
            .collect()
    }
}

impl Representation {
    pub fn validate(&self, s: &RepSetting) -> Result<()> {
        if self.vertex.len() != s.shape.vertices.len() || self.arrows.len() != s.ends.len() {
            return Err(Error::Malformed("representation does not match the shape quiver".into()));
        }
        for m in &self.vertex {
            m.validate(&s.value)?;
        }
        for (f, &(a, b)) in self.arrows.iter().zip(&s.ends) {
            f.validate(&s.value, &self.vertex[a], &self.vertex[b])?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LiftKind {
    /// Every `φ_i` injective with `C_i(X)` in the class.
    Phi,
    /// Every `ψ_i` surjective with `K_i(X)` in the class.
    Psi,
    /// Every `X(i)` in the class.
    Pointwise,
}

fn member(vu: &Universe, class: &ObjectClass, m: &Module) -> Result<bool> {
    match vu.contains(class, m)? {
        Membership::Member => Ok(true),
        Membership::NotMember(_) => Ok(false),
        Membership::Unknown(_) => {
            Err(Error::Undecided("a vertex module has a summand outside the value universe; raise its cap".into()))
        }
    }
}

/// Whether a single representation lies in the lifted class.
pub fn lifted_member(
    vu: &Universe,
    xc: &ObjectClass,
    s: &RepSetting,
    x: &Representation,
    kind: LiftKind,
) -> Result<bool> {
    match kind {
        LiftKind::Pointwise => {
            for m in &x.vertex {
                if !member(vu, xc, m)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        LiftKind::Phi | LiftKind::Psi => {
            for d in s.vertex_data(x) {
                let (mono_or_epi, end) = if kind == LiftKind::Phi {
                    (d.phi.is_injective(), &d.coker_phi)
                } else {
                    (d.psi.is_surjective(), &d.ker_psi)
                };
                if !mono_or_epi || !member(vu, xc, end)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// The lifted class of `xc` (over the value universe `vu`) inside the
/// representation universe `ru`.
pub fn class_lift(
    vu: &Universe,
    xc: &ObjectClass,
    s: &RepSetting,
    ru: &Universe,
    kind: LiftKind,
) -> Result<ObjectClass> {
    let flags: Vec<bool> =
        ru.modules().par_iter().map(|m| lifted_member(vu, xc, s, &s.representation(m), kind)).collect::<Result<_>>()?;
    Ok(flags.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect())
}

/// `(Φ(X), Rep(Q, Y))` for `Side::Left`, `(Rep(Q, X), Ψ(Y))` for
/// `Side::Right`, as unchecked classes.
pub fn rep_pair_classes(
    vu: &Universe,
    vp: &CotorsionPair,
    s: &RepSetting,
    ru: &Universe,
    side: Side,
) -> Result<(ObjectClass, ObjectClass)> {
    let (kx, ky) = match side {
        Side::Left => (LiftKind::Phi, LiftKind::Pointwise),
        Side::Right => (LiftKind::Pointwise, LiftKind::Psi),
    };
    Ok((class_lift(vu, &vp.x, s, ru, kx)?, class_lift(vu, &vp.y, s, ru, ky)?))
}

/// Builds the lifted pair over `ru` and verifies it is a complete
/// (hereditary) cotorsion pair.
pub fn check_rep_pair(
    vu: &Universe,
    vp: &CotorsionPair,
    s: &RepSetting,
    ru: &Universe,
    side: Side,
    budget: Option<usize>,
) -> Result<(CotorsionPair, Report)> {
    if vp.flags.complete != Status::Pass {
        return Err(Error::Precondition("the value pair must be verified complete first".into()));
    }
    let (x, y) = rep_pair_classes(vu, vp, s, ru, side)?;
    let (p, r) = CotorsionPair::verified(ru, x, y, budget);
    let mut report = Report::new(match side {
        Side::Left => "(Φ(X), Rep(Q, Y))",
        Side::Right => "(Rep(Q, X), Ψ(Y))",
    });
    report.fact("rootedness", ROOTEDNESS_CRITERION);
    report.require(r.verdict.clone());
    report.child(r);
    Ok((p, report))
}

fn check_dimension_identity(
    vu: &Universe,
    vp: &CotorsionPair,
    s: &RepSetting,
    ru: &Universe,
    n: usize,
    side: Side,
    limits: Limits,
) -> Result<Report> {
    vp.require_complete_hereditary()?;
    require_extendable(vu, vp, n, side, limits)?;
    let kind = if side == Side::Left { LiftKind::Phi } else { LiftKind::Psi };
    let lifted_first = class_lift(vu, &lift_class(vu, vp, n, side, limits.cap)?, s, ru, kind)?;
    let (rp, r) = check_rep_pair(vu, vp, s, ru, side, limits.budget)?;
    let name = if side == Side::Left { "Φ(X_n) = Φ(X)_n" } else { "Ψ(Y_n) = Ψ(Y)_n" };
    let mut report = Report::new(name);
    report.require(r.verdict.clone());
    report.child(r);
    if !rp.is_complete_hereditary() {
        return Ok(report);
    }
    let represented_first = lift_class(ru, &rp, n, side, limits.cap)?;
    report.fact("lifted_first", ru.ids(&lifted_first));
    report.fact("represented_first", ru.ids(&represented_first));
    let inclusion = lifted_first.is_subset(&represented_first);
    report.fact("inclusion_holds", inclusion);
    if !inclusion {
        report.fail("the lift of the value class is not contained in the lift inside representations");
    }
    let extra = represented_first.minus(&lifted_first);
    report.fact("discrepancy", ru.ids(&extra));
    for i in extra.iter() {
        let vertices: Vec<String> = s
            .vertex_data(&s.representation(ru.module(i)))
            .into_iter()
            .filter(|d| if side == Side::Left { !d.phi.is_injective() } else { !d.psi.is_surjective() })
            .map(|d| d.vertex)
            .collect();
        report.fact(&format!("{}: structure map fails at", ru.id(i)), vertices);
        if let (_, Some(w)) = rel_dim(ru, &rp, ru.module(i), side, limits.cap)? {
            report.witness(w);
        }
    }
    class_equality(&mut report, ru, name, &lifted_first, &represented_first);
    Ok(report)
}

/// `Φ(X_n) = Φ(X)_n`, each side computed independently.
pub fn check_phi_dimension_identity(
    vu: &Universe,
    vp: &CotorsionPair,
    s: &RepSetting,
    ru: &Universe,
    n: usize,
    limits: Limits,
) -> Result<Report> {
    check_dimension_identity(vu, vp, s, ru, n, Side::Left, limits)
}

/// `Ψ(Y_n) = Ψ(Y)_n`, each side computed independently.
pub fn check_psi_dimension_identity(
    vu: &Universe,
    vp: &CotorsionPair,
    s: &RepSetting,
    ru: &Universe,
    n: usize,
    limits: Limits,
) -> Result<Report> {
    check_dimension_identity(vu, vp, s, ru, n, Side::Right, limits)
}

/// The kinds used to represent `(c, w, f)`: `(Φ, Rep, Rep)` on the left,
/// `(Rep, Rep, Ψ)` on the right.
fn represent(vu: &Universe, t: &HoveyTriple, s: &RepSetting, ru: &Universe, side: Side) -> Result<HoveyTriple> {
    let (kc, kf) = match side {
        Side::Left => (LiftKind::Phi, LiftKind::Pointwise),
        Side::Right => (LiftKind::Pointwise, LiftKind::Psi),
    };
    Ok(HoveyTriple::new(
        class_lift(vu, &t.c, s, ru, kc)?,
        class_lift(vu, &t.w, s, ru, LiftKind::Pointwise)?,
        class_lift(vu, &t.f, s, ru, kf)?,
    ))
}

/// Lifts `t` to level `n` and represents it, and independently represents
/// `t` and lifts the represented triple; the two triples must coincide.
/// Also compares the stable categories of the level-0 and level-`n`
/// Frobenius cores of the represented triples.
pub fn lift_rep_triple(
    vu: &Universe,
    t: &HoveyTriple,
    s: &RepSetting,
    ru: &Universe,
    n: usize,
    side: Side,
    limits: Limits,
) -> Result<(HoveyTriple, Report)> {
    t.require_verified()?;
    let mut report =
        Report::new(format!("represented {} lift at n = {n}", if side == Side::Left { "left" } else { "right" }));
    report.fact("rootedness", ROOTEDNESS_CRITERION);
    let (value_lift, r) = lift_triple(vu, t, n, side, limits)?;
    report.child(r.clone());
    report.require(r.verdict);
    let lift_then_represent = represent(vu, &value_lift, s, ru, side)?;
    let (lift_then_represent, r) =
        verify_triple(ru, lift_then_represent.c, lift_then_represent.w, lift_then_represent.f, limits);
    report.fact("lift_then_represent_verified", lift_then_represent.is_verified());
    report.require(r.verdict.clone());
    report.child(r);

    let base = represent(vu, t, s, ru, side)?;
    let (base, r) = verify_triple(ru, base.c, base.w, base.f, limits);
    report.require(r.verdict.clone());
    report.child(r);
    if !base.is_verified() {
        report.fail("the represented triple is not a Hovey triple");
        return Ok((lift_then_represent, report));
    }
    let (represent_then_lift, r) = lift_triple(ru, &base, n, side, limits)?;
    report.require(r.verdict.clone());
    report.child(r);
    for (name, a, b) in [
        ("c", &lift_then_represent.c, &represent_then_lift.c),
        ("w", &lift_then_represent.w, &represent_then_lift.w),
        ("f", &lift_then_represent.f, &represent_then_lift.f),
    ] {
        class_equality(&mut report, ru, name, a, b);
    }
    let agree = lift_then_represent.c == represent_then_lift.c
        && lift_then_represent.w == represent_then_lift.w
        && lift_then_represent.f == represent_then_lift.f;
    report.fact("routes_agree", agree);
    if represent_then_lift.is_verified() {
        let (core0, r0) = frobenius_core(ru, &base, limits)?;
        let (core_n, rn) = frobenius_core(ru, &represent_then_lift, limits)?;
        report.require(r0.verdict.clone());
        report.require(rn.verdict.clone());
        report.child(r0);
        report.child(rn);
        let cmp = stable_compare(ru, &core_n, &core0, limits)?;
        report.require(cmp.verdict.clone());
        report.child(cmp);
    }
    Ok((represent_then_lift, report))
}
