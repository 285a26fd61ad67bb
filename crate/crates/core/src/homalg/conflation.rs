//! Short exact sequences and (co)resolutions, with independent validity
//! checks so that they can serve as certificates.

use serde::{Deserialize, Serialize};

use crate::bqa::{Algebra, Module, ModuleMap};
use crate::error::{Error, Result};
use crate::homalg::approx::{is_injective, is_projective};
use crate::homalg::maps::{cokernel, kernel};

/// `0 -> left -> mid -> right -> 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conflation {
    pub left: Module,
    pub mid: Module,
    pub right: Module,
    pub incl: ModuleMap,
    pub proj: ModuleMap,
}

impl Conflation {
    pub fn split(alg: &Algebra, left: &Module, right: &Module) -> Conflation {
        let sum = Module::direct_sum(alg, &[left, right]);
        Conflation {
            left: left.clone(),
            right: right.clone(),
            mid: sum.module,
            incl: sum.incls[0].clone(),
            proj: sum.projs[1].clone(),
        }
    }

    /// The conflation determined by an injective map.
    pub fn from_inflation(alg: &Algebra, left: &Module, mid: &Module, incl: &ModuleMap) -> Result<Conflation> {
        if !incl.is_injective() {
            return Err(Error::Precondition("map is not injective".into()));
        }
        let (right, proj) = cokernel(alg, incl, mid);
        Ok(Conflation { left: left.clone(), mid: mid.clone(), right, incl: incl.clone(), proj })
    }

    /// The conflation determined by a surjective map.
    pub fn from_deflation(alg: &Algebra, mid: &Module, right: &Module, proj: &ModuleMap) -> Result<Conflation> {
        if !proj.is_surjective() {
            return Err(Error::Precondition("map is not surjective".into()));
        }
        let (left, incl) = kernel(alg, proj, mid);
        Ok(Conflation { left, mid: mid.clone(), right: right.clone(), incl, proj: proj.clone() })
    }

    /// Checks that all data are well-formed module maps and that the
    /// sequence is exact at every position.
    pub fn validate(&self, alg: &Algebra) -> Result<()> {
        for m in [&self.left, &self.mid, &self.right] {
            m.validate(alg)?;
        }
        self.incl.validate(alg, &self.left, &self.mid)?;
        self.proj.validate(alg, &self.mid, &self.right)?;
        if !self.incl.is_injective() {
            return Err(Error::Precondition("conflation: first map is not injective".into()));
        }
        if !self.proj.is_surjective() {
            return Err(Error::Precondition("conflation: second map is not surjective".into()));
        }
        if !self.proj.compose(&self.incl).is_zero() {
            return Err(Error::Precondition("conflation: composite is not zero".into()));
        }
        for v in 0..alg.vertex_count() {
            if self.left.dim(v) + self.right.dim(v) != self.mid.dim(v) {
                return Err(Error::Precondition(format!("conflation: not exact in the middle at vertex {v}")));
            }
        }
        Ok(())
    }

    /// The dual conflation `D(right) ↣ D(mid) ↠ D(left)` over the opposite
    /// algebra.
    pub fn dual(&self) -> Conflation {
        Conflation {
            left: self.right.dual(),
            mid: self.mid.dual(),
            right: self.left.dual(),
            incl: self.proj.dual(),
            proj: self.incl.dual(),
        }
    }

    pub fn to_spec(&self) -> ConflationSpec {
        ConflationSpec {
            left: self.left.to_spec(),
            mid: self.mid.to_spec(),
            right: self.right.to_spec(),
            incl: self.incl.to_spec(),
            proj: self.proj.to_spec(),
        }
    }

    pub fn from_spec(alg: &Algebra, spec: &ConflationSpec) -> Result<Conflation> {
        let left = Module::from_spec(alg, &spec.left)?;
        let mid = Module::from_spec(alg, &spec.mid)?;
        let right = Module::from_spec(alg, &spec.right)?;
        let incl = ModuleMap::from_spec(alg, &left, &mid, &spec.incl)?;
        let proj = ModuleMap::from_spec(alg, &mid, &right, &spec.proj)?;
        Ok(Conflation { left, mid, right, incl, proj })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConflationSpec {
    pub left: crate::bqa::ModuleSpec,
    pub mid: crate::bqa::ModuleSpec,
    pub right: crate::bqa::ModuleSpec,
    pub incl: crate::bqa::MapSpec,
    pub proj: crate::bqa::MapSpec,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResolutionKind {
    /// `0 -> X_n -> ... -> X_0 -> M -> 0` with projective terms.
    Projective,
    /// `0 -> M -> X_0 -> ... -> X_n -> 0` with injective terms.
    Injective,
    /// `0 -> X_n -> ... -> X_0 -> M -> 0` with terms in some class, checked
    /// separately by the caller.
    Relative,
    /// `0 -> M -> X_0 -> ... -> X_n -> 0` with terms in some class.
    Corelative,
}

/// A finite exact sequence ending (or starting) at `target`.
///
/// For `Projective` and `Relative` kinds, `maps[i]` is `X_{i+1} -> X_i` and
/// `augmentation` is `X_0 -> target`. For `Injective` and `Corelative`,
/// `maps[i]` is `X_i -> X_{i+1}` and `augmentation` is `target -> X_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolution {
    pub kind: ResolutionKind,
    pub target: Module,
    pub terms: Vec<Module>,
    pub augmentation: ModuleMap,
    pub maps: Vec<ModuleMap>,
}

fn exact_at(incoming: &ModuleMap, outgoing: &ModuleMap) -> bool {
    outgoing.compose(incoming).is_zero()
        && (0..incoming.blocks().len()).all(|v| {
            let out = outgoing.block(v);
            out.cols() - out.rank() == incoming.block(v).rank()
        })
}

impl Resolution {
    pub fn length(&self) -> usize {
        self.maps.len()
    }

    pub fn validate(&self, alg: &Algebra) -> Result<()> {
        let fail = |msg: String| Err(Error::Precondition(format!("resolution: {msg}")));
        if self.terms.len() != self.maps.len() + 1 {
            return fail("term and map counts disagree".into());
        }
        self.target.validate(alg)?;
        for t in &self.terms {
            t.validate(alg)?;
        }
        let forward = matches!(self.kind, ResolutionKind::Injective | ResolutionKind::Corelative);
        if forward {
            self.augmentation.validate(alg, &self.target, &self.terms[0])?;
            for (i, d) in self.maps.iter().enumerate() {
                d.validate(alg, &self.terms[i], &self.terms[i + 1])?;
            }
            if !self.augmentation.is_injective() {
                return fail("augmentation is not injective".into());
            }
            let mut prev = &self.augmentation;
            for (i, d) in self.maps.iter().enumerate() {
                if !exact_at(prev, d) {
                    return fail(format!("not exact at term {i}"));
                }
                prev = d;
            }
            if !prev.is_surjective() {
                return fail("last map is not surjective".into());
            }
        } else {
            self.augmentation.validate(alg, &self.terms[0], &self.target)?;
            for (i, d) in self.maps.iter().enumerate() {
                d.validate(alg, &self.terms[i + 1], &self.terms[i])?;
            }
            if !self.augmentation.is_surjective() {
                return fail("augmentation is not surjective".into());
            }
            let mut next = &self.augmentation;
            for (i, d) in self.maps.iter().enumerate() {
                if !exact_at(d, next) {
                    return fail(format!("not exact at term {i}"));
                }
                next = d;
            }
            if !next.is_injective() {
                return fail("first map is not injective".into());
            }
        }
        match self.kind {
            ResolutionKind::Projective if !self.terms.iter().all(|t| is_projective(alg, t)) => {
                fail("a term is not projective".into())
            }
            ResolutionKind::Injective if !self.terms.iter().all(|t| is_injective(alg, t)) => {
                fail("a term is not injective".into())
            }
            _ => Ok(()),
        }
    }
}

/// The minimal projective resolution of `M`, if `pd M <= cap`.
pub fn projective_resolution(alg: &Algebra, m: &Module, cap: usize) -> Option<Resolution> {
    let first = crate::homalg::approx::cover(alg, m);
    let mut terms = vec![first.module.clone()];
    let mut maps = Vec::new();
    let mut kernel_incl = first.remainder_map.clone();
    let mut kernel = first.remainder.clone();
    for _ in 0..cap {
        if kernel.is_zero() {
            break;
        }
        let step = crate::homalg::approx::cover(alg, &kernel);
        maps.push(kernel_incl.compose(&step.map));
        terms.push(step.module.clone());
        kernel_incl = step.remainder_map.clone();
        kernel = step.remainder.clone();
    }
    if !kernel.is_zero() {
        return None;
    }
    Some(Resolution {
        kind: ResolutionKind::Projective,
        target: m.clone(),
        terms,
        augmentation: first.map.clone(),
        maps,
    })
}

/// `0 -> Ω^k M -> P_{k-1} -> ... -> P_0 -> M -> 0` along the minimal
/// projective resolution, as a relative resolution of length `k`.
pub fn truncated_resolution(alg: &Algebra, m: &Module, k: usize) -> Resolution {
    if k == 0 {
        let id = ModuleMap::identity(alg, m);
        return Resolution {
            kind: ResolutionKind::Relative,
            target: m.clone(),
            terms: vec![m.clone()],
            augmentation: id,
            maps: vec![],
        };
    }
    let first = crate::homalg::approx::cover(alg, m);
    let mut terms = vec![first.module.clone()];
    let mut maps = Vec::new();
    let mut kernel_incl = first.remainder_map.clone();
    let mut kernel = first.remainder.clone();
    for _ in 1..k {
        let step = crate::homalg::approx::cover(alg, &kernel);
        maps.push(kernel_incl.compose(&step.map));
        terms.push(step.module.clone());
        kernel_incl = step.remainder_map.clone();
        kernel = step.remainder.clone();
    }
    maps.push(kernel_incl);
    terms.push(kernel);
    Resolution { kind: ResolutionKind::Relative, target: m.clone(), terms, augmentation: first.map.clone(), maps }
}

/// `0 -> M -> I_0 -> ... -> I_{k-1} -> Σ^k M -> 0` along the minimal
/// injective coresolution.
pub fn truncated_coresolution(alg: &Algebra, m: &Module, k: usize) -> Resolution {
    if k == 0 {
        let id = ModuleMap::identity(alg, m);
        return Resolution {
            kind: ResolutionKind::Corelative,
            target: m.clone(),
            terms: vec![m.clone()],
            augmentation: id,
            maps: vec![],
        };
    }
    let first = crate::homalg::approx::envelope(alg, m);
    let mut terms = vec![first.module.clone()];
    let mut maps = Vec::new();
    let mut coker_proj = first.remainder_map.clone();
    let mut coker = first.remainder.clone();
    for _ in 1..k {
        let step = crate::homalg::approx::envelope(alg, &coker);
        maps.push(step.map.compose(&coker_proj));
        terms.push(step.module.clone());
        coker_proj = step.remainder_map.clone();
        coker = step.remainder.clone();
    }
    maps.push(coker_proj);
    terms.push(coker);
    Resolution { kind: ResolutionKind::Corelative, target: m.clone(), terms, augmentation: first.map.clone(), maps }
}
