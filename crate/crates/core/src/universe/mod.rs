//! Finite universes of indecomposable modules and classes over them.
//!
//! A universe lists, up to isomorphism, every indecomposable module of total
//! dimension at most a cap (or a declared list). Class-level statements are
//! evaluated relative to it: positive verdicts hold over the universe,
//! negative verdicts come with explicit counterexamples.

mod class;
mod enumerate;

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bqa::{Algebra, AlgebraSpec, Module, ModuleSpec};
use crate::error::{Error, Result};
use crate::homalg::{decompose_summands, ext_dim, is_indecomposable, iso_between_indecomposables};

pub use class::ObjectClass;

/// Candidate module structures beyond which enumeration refuses to run.
pub const CANDIDATE_LIMIT: u128 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Enumerated,
    Declared,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// Outcome of testing an arbitrary module against a class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Member,
    /// Some indecomposable summand is a universe object outside the class.
    NotMember(usize),
    /// Some indecomposable summand is not in the universe at all.
    Unknown(Module),
}

pub struct Universe {
    algebra: Arc<Algebra>,
    max_dim: usize,
    indecs: Vec<Module>,
    provenance: Provenance,
    ext1: OnceLock<Vec<Vec<usize>>>,
    located: RwLock<HashMap<Module, Option<usize>>>,
}

impl std::fmt::Debug for Universe {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Universe")
            .field("max_dim", &self.max_dim)
            .field("size", &self.indecs.len())
            .field("provenance", &self.provenance)
            .finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniverseEntry {
    pub id: String,
    pub module: ModuleSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniverseSpec {
    pub algebra: AlgebraSpec,
    pub max_dim: usize,
    pub provenance: Provenance,
    pub modules: Vec<UniverseEntry>,
}

fn largest_projective_or_injective(alg: &Algebra) -> usize {
    (0..alg.vertex_count())
        .flat_map(|v| [Module::projective(alg, v).total_dim(), Module::injective(alg, v).total_dim()])
        .max()
        .unwrap_or(0)
}

impl Universe {
    /// Every indecomposable of total dimension at most `max_dim`, up to
    /// isomorphism, by exhaustive enumeration of module structures.
    pub fn enumerate(algebra: Arc<Algebra>, max_dim: usize) -> Result<Universe> {
        let needed = largest_projective_or_injective(&algebra);
        if max_dim < needed {
            return Err(Error::Precondition(format!(
                "max_dim {max_dim} is below the largest indecomposable projective or injective (dimension {needed}); raise the cap"
            )));
        }
        let vectors = enumerate::dimension_vectors(algebra.vertex_count(), max_dim);
        let estimate: u128 =
            vectors.iter().map(|d| enumerate::candidate_count(&algebra, d)).fold(0u128, |a, b| a.saturating_add(b));
        if estimate > CANDIDATE_LIMIT {
            return Err(Error::CapExceeded(format!(
                "about {estimate} candidate module structures up to dimension {max_dim}; lower --max-dim or declare the universe"
            )));
        }
        let per_vector: Vec<Vec<Module>> =
            vectors.par_iter().map(|d| enumerate::indecomposables_with_dims(&algebra, d)).collect::<Result<_>>()?;
        let indecs: Vec<Module> = per_vector.into_iter().flatten().collect();
        let u = Universe::from_parts(algebra, max_dim, indecs, Provenance::Enumerated);
        u.check_contains_projectives_and_injectives()?;
        Ok(u)
    }

    /// A user-supplied universe. Members must be indecomposable and pairwise
    /// non-isomorphic; missing indecomposable projectives and injectives are
    /// appended.
    pub fn declared(algebra: Arc<Algebra>, modules: Vec<Module>) -> Result<Universe> {
        let alg = &*algebra;
        for (i, m) in modules.iter().enumerate() {
            if !is_indecomposable(alg, m)? {
                return Err(Error::Precondition(format!("declared module {i} is not indecomposable")));
            }
            for (j, n) in modules.iter().enumerate().take(i) {
                if iso_between_indecomposables(alg, n, m).is_some() {
                    return Err(Error::Precondition(format!("declared modules {j} and {i} are isomorphic")));
                }
            }
        }
        let mut all = modules;
        for v in 0..alg.vertex_count() {
            for m in [Module::projective(alg, v), Module::injective(alg, v)] {
                if !all.iter().any(|n| iso_between_indecomposables(alg, n, &m).is_some()) {
                    all.push(m);
                }
            }
        }
        let max_dim = all.iter().map(Module::total_dim).max().unwrap_or(0);
        Ok(Universe::from_parts(algebra, max_dim, all, Provenance::Declared))
    }

    fn from_parts(algebra: Arc<Algebra>, max_dim: usize, indecs: Vec<Module>, provenance: Provenance) -> Universe {
        Universe { algebra, max_dim, indecs, provenance, ext1: OnceLock::new(), located: RwLock::new(HashMap::new()) }
    }

    fn check_contains_projectives_and_injectives(&self) -> Result<()> {
        for v in 0..self.algebra.vertex_count() {
            for m in [Module::projective(&self.algebra, v), Module::injective(&self.algebra, v)] {
                if self.locate(&m)?.is_none() {
                    return Err(Error::Precondition(format!("universe misses an indecomposable at vertex {v}")));
                }
            }
        }
        Ok(())
    }

    pub fn from_spec(spec: &UniverseSpec) -> Result<Universe> {
        let algebra = Arc::new(Algebra::from_spec(&spec.algebra)?);
        let modules =
            spec.modules.iter().map(|e| Module::from_spec(&algebra, &e.module)).collect::<Result<Vec<_>>>()?;
        Universe::declared(algebra, modules)
    }

    /// Rebuilds a universe saved with [`Universe::to_spec`] without
    /// re-running enumeration or indecomposability checks; the fingerprint
    /// of the result must equal `fingerprint`.
    pub fn restore(spec: &UniverseSpec, fingerprint: &str) -> Result<Universe> {
        let algebra = Arc::new(Algebra::from_spec(&spec.algebra)?);
        let modules =
            spec.modules.iter().map(|e| Module::from_spec(&algebra, &e.module)).collect::<Result<Vec<_>>>()?;
        let u = Universe::from_parts(algebra, spec.max_dim, modules, spec.provenance);
        if u.fingerprint() != fingerprint {
            return Err(Error::Malformed("saved universe does not match its fingerprint".into()));
        }
        Ok(u)
    }

    pub fn to_spec(&self) -> UniverseSpec {
        UniverseSpec {
            algebra: self.algebra.spec().clone(),
            max_dim: self.max_dim,
            provenance: self.provenance,
            modules: self
                .indecs
                .iter()
                .enumerate()
                .map(|(i, m)| UniverseEntry { id: self.id(i), module: m.to_spec() })
                .collect(),
        }
    }

    /// Hex SHA-256 of the canonical JSON of the algebra and module list.
    pub fn fingerprint(&self) -> String {
        let specs: Vec<ModuleSpec> = self.indecs.iter().map(Module::to_spec).collect();
        let canonical = serde_json::to_string(&(self.algebra.spec(), &specs)).expect("serialisable");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn len(&self) -> usize {
        self.indecs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indecs.is_empty()
    }

    pub fn module(&self, i: usize) -> &Module {
        &self.indecs[i]
    }

    pub fn modules(&self) -> &[Module] {
        &self.indecs
    }

    pub fn id(&self, i: usize) -> String {
        format!("U{i}")
    }

    pub fn ids(&self, c: &ObjectClass) -> Vec<String> {
        c.iter().map(|i| self.id(i)).collect()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        let i: usize = id.strip_prefix('U')?.parse().ok()?;
        (i < self.len()).then_some(i)
    }

    pub fn all(&self) -> ObjectClass {
        ObjectClass::all(self.len())
    }

    pub fn projectives(&self) -> ObjectClass {
        self.class_of(|v| Module::projective(&self.algebra, v))
    }

    pub fn injectives(&self) -> ObjectClass {
        self.class_of(|v| Module::injective(&self.algebra, v))
    }

    fn class_of(&self, make: impl Fn(usize) -> Module) -> ObjectClass {
        (0..self.algebra.vertex_count())
            .map(|v| self.locate(&make(v)).ok().flatten().expect("universe contains projectives and injectives"))
            .collect()
    }

    /// `dim Ext^1(U_i, U_j)`, from a table computed once.
    pub fn ext1(&self, i: usize, j: usize) -> usize {
        self.ext1_table()[i][j]
    }

    fn ext1_table(&self) -> &Vec<Vec<usize>> {
        self.ext1.get_or_init(|| {
            (0..self.len())
                .into_par_iter()
                .map(|i| (0..self.len()).map(|j| self.ext(&self.indecs[i], &self.indecs[j], 1)).collect())
                .collect()
        })
    }

    /// `dim Ext^d(M, N)` over the universe's algebra.
    pub fn ext(&self, m: &Module, n: &Module, d: usize) -> usize {
        ext_dim(&self.algebra, m, n, d).expect("modules over the universe algebra")
    }

    /// The universe index of an indecomposable module, if present.
    pub fn locate(&self, m: &Module) -> Result<Option<usize>> {
        if let Some(hit) = self.located.read().expect("lock").get(m) {
            return Ok(*hit);
        }
        m.validate(&self.algebra)?;
        let found = self
            .indecs
            .iter()
            .position(|u| u.dims() == m.dims() && iso_between_indecomposables(&self.algebra, u, m).is_some());
        self.located.write().expect("lock").insert(m.clone(), found);
        Ok(found)
    }

    /// Universe indices of the indecomposable summands of `m` (with
    /// repetition); `None` for summands outside the universe.
    pub fn pieces(&self, m: &Module) -> Result<Vec<std::result::Result<usize, Module>>> {
        decompose_summands(&self.algebra, m)?.into_iter().map(|s| Ok(self.locate(&s.module)?.ok_or(s.module))).collect()
    }

    /// Whether `m` lies in the additive closure of `c`.
    pub fn contains(&self, c: &ObjectClass, m: &Module) -> Result<Membership> {
        for piece in self.pieces(m)? {
            match piece {
                Ok(i) if c.contains(i) => {}
                Ok(i) => return Ok(Membership::NotMember(i)),
                Err(outside) => return Ok(Membership::Unknown(outside)),
            }
        }
        Ok(Membership::Member)
    }

    /// Right orthogonal `c^⊥ = {N : Ext^1(c, N) = 0}` or left orthogonal
    /// `^⊥c = {M : Ext^1(M, c) = 0}` within the universe.
    pub fn orthogonal(&self, c: &ObjectClass, side: Side) -> ObjectClass {
        (0..self.len())
            .filter(|&k| match side {
                Side::Right => c.iter().all(|x| self.ext1(x, k) == 0),
                Side::Left => c.iter().all(|y| self.ext1(k, y) == 0),
            })
            .collect()
    }

    /// Modules `N` with `Ext^1(X, N) = 0` for every member `X` of `c`,
    /// tested directly for a module that need not be in the universe.
    pub fn in_right_orthogonal(&self, c: &ObjectClass, n: &Module) -> bool {
        c.iter().all(|x| self.ext(&self.indecs[x], n, 1) == 0)
    }

    /// Modules `M` with `Ext^1(M, Y) = 0` for every member `Y` of `c`.
    pub fn in_left_orthogonal(&self, c: &ObjectClass, m: &Module) -> bool {
        c.iter().all(|y| self.ext(m, &self.indecs[y], 1) == 0)
    }

    /// The dual universe over the opposite algebra, with the same indexing:
    /// `D(U_i)` is the `i`-th member.
    pub fn dual(&self) -> Result<Universe> {
        let alg = Arc::new(self.algebra.opposite()?);
        let indecs = self.indecs.iter().map(Module::dual).collect();
        Ok(Universe::from_parts(alg, self.max_dim, indecs, self.provenance))
    }
}
