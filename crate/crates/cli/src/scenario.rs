//! Scenario documents: an algebra, a universe, named classes and an ordered
//! list of checks.

use std::collections::BTreeMap;

use hovey_core::quiverlift::{ShapeQuiver, DEFAULT_REP_CAP};
use hovey_core::Side;
use serde::{Deserialize, Serialize};

use crate::input::{AlgebraRef, ClassExpr, UniverseRef};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub algebra: AlgebraRef,
    #[serde(default)]
    pub universe: UniverseRef,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub classes: BTreeMap<String, ClassExpr>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub shapes: BTreeMap<String, ShapeQuiver>,
    #[serde(default)]
    pub limits: ScenarioLimits,
    pub checks: Vec<Check>,
    /// Report path, relative to the scenario file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioLimits {
    /// Maximal (co)syzygy steps for relative dimensions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    /// Dimension budget for approximation searches.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairRef {
    pub x: ClassExpr,
    pub y: ClassExpr,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleRef {
    pub c: ClassExpr,
    pub w: ClassExpr,
    pub f: ClassExpr,
}

fn left() -> Side {
    Side::Left
}

fn three() -> usize {
    3
}

fn sample() -> usize {
    hovey_core::cotorsion::CLOSURE_SAMPLE
}

fn seed() -> u64 {
    0x5eed
}

fn rep_cap() -> usize {
    DEFAULT_REP_CAP
}

/// The fixed registry of checks. Unknown names are rejected when the
/// scenario is parsed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Check {
    /// Admissibility and basic invariants of the algebra.
    Algebra,
    /// The universe objects with their dimension vectors.
    Universe,
    /// Members of a class expression.
    ClassShow {
        class: ClassExpr,
    },
    /// Ext computed by projective resolutions against injective
    /// coresolutions, for every pair of universe objects.
    ExtAgreement {
        #[serde(default = "three")]
        max_degree: usize,
    },
    Cotorsion {
        pair: PairRef,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        extendable_upto: Option<usize>,
        #[serde(default = "left")]
        side: Side,
    },
    DimensionInequalities {
        pair: PairRef,
        #[serde(default = "left")]
        side: Side,
        #[serde(default = "sample")]
        count: usize,
        #[serde(default = "seed")]
        seed: u64,
    },
    DimensionCharacterisations {
        pair: PairRef,
        #[serde(default = "left")]
        side: Side,
    },
    HoveyVerify {
        triple: TripleRef,
    },
    HoveyLift {
        triple: TripleRef,
        #[serde(default = "left")]
        side: Side,
        n_max: usize,
    },
    HoveyTower {
        triple: TripleRef,
        #[serde(default = "left")]
        side: Side,
        n_max: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect_stable_classes: Option<usize>,
    },
    ClassIdentities {
        triple: TripleRef,
        n_max: usize,
    },
    SufficientConditions {
        triple: TripleRef,
        #[serde(default = "left")]
        side: Side,
        n_max: usize,
    },
    RecollementHypotheses {
        triples: [TripleRef; 3],
    },
    QuiverPair {
        shape: String,
        pair: PairRef,
        #[serde(default = "left")]
        side: Side,
        #[serde(default = "rep_cap")]
        rep_max_dim: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect_indecomposables: Option<usize>,
    },
    QuiverDimensionIdentity {
        shape: String,
        pair: PairRef,
        #[serde(default = "left")]
        side: Side,
        n_max: usize,
        #[serde(default = "rep_cap")]
        rep_max_dim: usize,
    },
    QuiverLift {
        shape: String,
        triple: TripleRef,
        #[serde(default = "left")]
        side: Side,
        n_max: usize,
        #[serde(default = "rep_cap")]
        rep_max_dim: usize,
    },
}

impl Check {
    pub fn name(&self) -> &'static str {
        match self {
            Check::Algebra => "algebra",
            Check::Universe => "universe",
            Check::ClassShow { .. } => "class-show",
            Check::ExtAgreement { .. } => "ext-agreement",
            Check::Cotorsion { .. } => "cotorsion",
            Check::DimensionInequalities { .. } => "dimension-inequalities",
            Check::DimensionCharacterisations { .. } => "dimension-characterisations",
            Check::HoveyVerify { .. } => "hovey-verify",
            Check::HoveyLift { .. } => "hovey-lift",
            Check::HoveyTower { .. } => "hovey-tower",
            Check::ClassIdentities { .. } => "class-identities",
            Check::SufficientConditions { .. } => "sufficient-conditions",
            Check::RecollementHypotheses { .. } => "recollement-hypotheses",
            Check::QuiverPair { .. } => "quiver-pair",
            Check::QuiverDimensionIdentity { .. } => "quiver-dimension-identity",
            Check::QuiverLift { .. } => "quiver-lift",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_defaults() {
        let s: Scenario = serde_json::from_str(
            r#"{
                "name": "t",
                "algebra": "fixture:dual-numbers",
                "universe": {"max_dim": 2},
                "checks": [
                    {"check": "hovey-lift", "triple": {"c": "all", "w": "projectives", "f": "all"}, "n_max": 2},
                    {"check": "ext-agreement"}
                ]
            }"#,
        )
        .unwrap();
        assert_eq!(s.checks[1], Check::ExtAgreement { max_degree: 3 });
        match &s.checks[0] {
            Check::HoveyLift { side, n_max, .. } => assert_eq!((*side, *n_max), (Side::Left, 2)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_unknown_check() {
        let r: Result<Scenario, _> =
            serde_json::from_str(r#"{"name": "t", "algebra": "fixture:a2", "checks": [{"check": "frobnicate"}]}"#);
        assert!(r.is_err());
    }

    #[test]
    fn round_trips() {
        let s = Scenario {
            name: "r".into(),
            algebra: AlgebraRef::Named("fixture:a2".into()),
            universe: UniverseRef { max_dim: Some(2), declared: None },
            classes: BTreeMap::new(),
            shapes: BTreeMap::new(),
            limits: ScenarioLimits::default(),
            checks: vec![Check::QuiverPair {
                shape: "A2".into(),
                pair: PairRef { x: "all".into(), y: "injectives".into() },
                side: Side::Right,
                rep_max_dim: 4,
                expect_indecomposables: None,
            }],
            output: None,
        };
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(serde_json::from_str::<Scenario>(&text).unwrap(), s);
    }
}
