//! Verdicts, verification trees and machine-checkable witnesses.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bqa::{Algebra, MapSpec, Module, ModuleMap, ModuleSpec};
use crate::error::{Error, Result};
use crate::homalg::{
    ext_dim_injective, is_isomorphic, syzygy, Conflation, ConflationSpec, IsoOutcome, Resolution, ResolutionKind,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail { reason: String },
    Inconclusive { reason: String },
}

impl Verdict {
    pub fn fail(reason: impl Into<String>) -> Verdict {
        Verdict::Fail { reason: reason.into() }
    }

    pub fn inconclusive(reason: impl Into<String>) -> Verdict {
        Verdict::Inconclusive { reason: reason.into() }
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail { .. })
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Verdict::Inconclusive { .. })
    }

    /// Conjunction: any failure wins, then any inconclusive.
    pub fn and(self, other: Verdict) -> Verdict {
        match (&self, &other) {
            (Verdict::Fail { .. }, _) => self,
            (_, Verdict::Fail { .. }) => other,
            (Verdict::Inconclusive { .. }, _) => self,
            (_, Verdict::Inconclusive { .. }) => other,
            _ => Verdict::Pass,
        }
    }

    pub fn from_bool(ok: bool, reason: impl Into<String>) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::fail(reason)
        }
    }
}

/// A node of a verification tree. The verdict of a node is the conjunction
/// of its own findings and its children's verdicts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub name: String,
    #[serde(flatten)]
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub facts: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Witness>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<Report>,
}

impl Report {
    pub fn new(name: impl Into<String>) -> Report {
        Report {
            name: name.into(),
            verdict: Verdict::Pass,
            facts: BTreeMap::new(),
            witnesses: Vec::new(),
            children: Vec::new(),
        }
    }

    pub fn with_verdict(mut self, v: Verdict) -> Report {
        self.require(v);
        self
    }

    /// Folds a finding into this node's verdict.
    pub fn require(&mut self, v: Verdict) {
        let current = std::mem::replace(&mut self.verdict, Verdict::Pass);
        self.verdict = current.and(v);
    }

    pub fn fail(&mut self, reason: impl Into<String>) {
        self.require(Verdict::fail(reason));
    }

    pub fn inconclusive(&mut self, reason: impl Into<String>) {
        self.require(Verdict::inconclusive(reason));
    }

    pub fn fact(&mut self, key: &str, value: impl Serialize) {
        self.facts.insert(key.to_string(), serde_json::to_value(value).expect("serialisable fact"));
    }

    pub fn witness(&mut self, w: Witness) {
        self.witnesses.push(w);
    }

    pub fn child(&mut self, child: Report) {
        let v = match &child.verdict {
            Verdict::Pass => Verdict::Pass,
            Verdict::Fail { reason } => Verdict::fail(format!("{}: {reason}", child.name)),
            Verdict::Inconclusive { reason } => Verdict::inconclusive(format!("{}: {reason}", child.name)),
        };
        self.require(v);
        self.children.push(child);
    }

    /// Every witness in the tree, depth first.
    pub fn all_witnesses(&self) -> Vec<&Witness> {
        let mut out: Vec<&Witness> = self.witnesses.iter().collect();
        for c in &self.children {
            out.extend(c.all_witnesses());
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolutionSpec {
    pub kind: ResolutionKind,
    pub target: ModuleSpec,
    pub terms: Vec<ModuleSpec>,
    pub augmentation: MapSpec,
    pub maps: Vec<MapSpec>,
}

impl ResolutionSpec {
    pub fn from_resolution(r: &Resolution) -> ResolutionSpec {
        ResolutionSpec {
            kind: r.kind,
            target: r.target.to_spec(),
            terms: r.terms.iter().map(Module::to_spec).collect(),
            augmentation: r.augmentation.to_spec(),
            maps: r.maps.iter().map(ModuleMap::to_spec).collect(),
        }
    }

    pub fn to_resolution(&self, alg: &Algebra) -> Result<Resolution> {
        let target = Module::from_spec(alg, &self.target)?;
        let terms = self.terms.iter().map(|t| Module::from_spec(alg, t)).collect::<Result<Vec<_>>>()?;
        if terms.is_empty() || terms.len() != self.maps.len() + 1 {
            return Err(Error::Malformed("resolution needs one more term than maps".into()));
        }
        let forward = matches!(self.kind, ResolutionKind::Injective | ResolutionKind::Corelative);
        let augmentation = if forward {
            ModuleMap::from_spec(alg, &target, &terms[0], &self.augmentation)?
        } else {
            ModuleMap::from_spec(alg, &terms[0], &target, &self.augmentation)?
        };
        let maps = self
            .maps
            .iter()
            .enumerate()
            .map(|(i, m)| {
                if forward {
                    ModuleMap::from_spec(alg, &terms[i], &terms[i + 1], m)
                } else {
                    ModuleMap::from_spec(alg, &terms[i + 1], &terms[i], m)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Resolution { kind: self.kind, target, terms, augmentation, maps })
    }
}

/// Evidence attached to a verdict. Each kind can be re-checked from its
/// explicit matrices alone by [`Witness::verify`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// An exact sequence `left ↣ mid ↠ right`.
    Conflation { label: String, conflation: ConflationSpec },
    /// `dim Ext^degree(left, right) = dim`.
    Ext { label: String, left: ModuleSpec, right: ModuleSpec, degree: usize, dim: usize },
    /// A finite exact resolution or coresolution.
    Resolution { label: String, resolution: ResolutionSpec },
    /// An isomorphism `left -> right`.
    Isomorphism { label: String, left: ModuleSpec, right: ModuleSpec, map: MapSpec },
    /// `Ω^from M ≅ Ω^to M` (or cosyzygies when `cosyzygy` is set), certifying
    /// eventual periodicity of the minimal (co)resolution.
    Periodicity { label: String, module: ModuleSpec, from: usize, to: usize, cosyzygy: bool, map: MapSpec },
}

impl Witness {
    pub fn label(&self) -> &str {
        match self {
            Witness::Conflation { label, .. }
            | Witness::Ext { label, .. }
            | Witness::Resolution { label, .. }
            | Witness::Isomorphism { label, .. }
            | Witness::Periodicity { label, .. } => label,
        }
    }

    pub fn conflation(label: impl Into<String>, c: &Conflation) -> Witness {
        Witness::Conflation { label: label.into(), conflation: c.to_spec() }
    }

    pub fn ext(label: impl Into<String>, m: &Module, n: &Module, degree: usize, dim: usize) -> Witness {
        Witness::Ext { label: label.into(), left: m.to_spec(), right: n.to_spec(), degree, dim }
    }

    pub fn resolution(label: impl Into<String>, r: &Resolution) -> Witness {
        Witness::Resolution { label: label.into(), resolution: ResolutionSpec::from_resolution(r) }
    }

    pub fn isomorphism(label: impl Into<String>, m: &Module, n: &Module, f: &ModuleMap) -> Witness {
        Witness::Isomorphism { label: label.into(), left: m.to_spec(), right: n.to_spec(), map: f.to_spec() }
    }

    /// Re-checks the witness against the algebra. Ext claims are recomputed
    /// through injective coresolutions, independently of the projective
    /// route used to produce them.
    pub fn verify(&self, alg: &Algebra) -> Result<()> {
        match self {
            Witness::Conflation { conflation, .. } => Conflation::from_spec(alg, conflation)?.validate(alg),
            Witness::Ext { left, right, degree, dim, .. } => {
                let m = Module::from_spec(alg, left)?;
                let n = Module::from_spec(alg, right)?;
                let got = ext_dim_injective(alg, &m, &n, *degree)?;
                if got == *dim {
                    Ok(())
                } else {
                    Err(Error::Precondition(format!("Ext^{degree} recomputes to {got}, witness claims {dim}")))
                }
            }
            Witness::Resolution { resolution, .. } => resolution.to_resolution(alg)?.validate(alg),
            Witness::Isomorphism { left, right, map, .. } => {
                let m = Module::from_spec(alg, left)?;
                let n = Module::from_spec(alg, right)?;
                let f = ModuleMap::from_spec(alg, &m, &n, map)?;
                if f.is_iso() {
                    Ok(())
                } else {
                    Err(Error::Precondition("claimed isomorphism is not invertible".into()))
                }
            }
            Witness::Periodicity { module, from, to, cosyzygy, map, .. } => {
                let m = Module::from_spec(alg, module)?;
                if from >= to {
                    return Err(Error::Malformed("periodicity needs from < to".into()));
                }
                let shift = |k: usize| {
                    if *cosyzygy {
                        crate::homalg::cosyzygy(alg, &m, k)
                    } else {
                        syzygy(alg, &m, k)
                    }
                };
                let (a, b) = (shift(*from), shift(*to));
                if a.is_zero() {
                    return Err(Error::Precondition("periodic term is zero".into()));
                }
                let f = ModuleMap::from_spec(alg, &a, &b, map)?;
                if f.is_iso() {
                    Ok(())
                } else {
                    Err(Error::Precondition("claimed periodicity map is not invertible".into()))
                }
            }
        }
    }
}

/// An isomorphism witness if `m ≅ n`, for attaching to reports.
pub fn iso_witness(alg: &Algebra, label: &str, m: &Module, n: &Module) -> Result<Option<Witness>> {
    Ok(match is_isomorphic(alg, m, n)? {
        IsoOutcome::Iso(f) => Some(Witness::isomorphism(label, m, n, &f)),
        IsoOutcome::NotIso => None,
    })
}
