//! Loading algebras, universes and class expressions from scenario input.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use hovey_core::universe::UniverseSpec;
use hovey_core::{fixtures, Algebra, AlgebraSpec, ObjectClass, Side, Universe};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

/// Environment variable naming a directory for cached universe
/// enumerations.
pub const CACHE_ENV: &str = "HOVEY_CACHE_DIR";

/// An algebra given inline, as a `fixture:<name>[@p]` reference, or as a
/// path to an algebra JSON document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraRef {
    Inline(AlgebraSpec),
    Named(String),
}

fn fixture(name: &str) -> Result<AlgebraSpec, CliError> {
    let (name, p) = match name.split_once('@') {
        Some((n, p)) => (n, p.parse::<u32>().map_err(|_| CliError::Input(format!("bad field in '{name}'")))?),
        None => (name, 2),
    };
    let numbered = |prefix: &str| name.strip_prefix(prefix).and_then(|n| n.parse::<usize>().ok());
    let spec = match name {
        "point" => fixtures::point_spec(p),
        "dual-numbers" => fixtures::dual_numbers_spec(p),
        "a2" => fixtures::linear_spec(p, 2),
        "a3-rad2" => fixtures::a3_radical_square_zero_spec(p),
        "commutative-square" => fixtures::commutative_square_spec(p),
        _ => match (numbered("linear-"), numbered("truncated-")) {
            (Some(n), _) if n >= 1 => fixtures::linear_spec(p, n),
            (_, Some(n)) if n >= 2 => fixtures::truncated_polynomial_spec(p, n),
            _ => return Err(CliError::Input(format!("unknown fixture '{name}'"))),
        },
    };
    Ok(spec)
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn resolve_path(base: &Path, p: &str) -> PathBuf {
    let path = Path::new(p);
    if path.is_absolute() {
        path.to_path_buf()
    } else {
        base.join(path)
    }
}

impl AlgebraRef {
    pub fn spec(&self, base: &Path) -> Result<AlgebraSpec, CliError> {
        match self {
            AlgebraRef::Inline(s) => Ok(s.clone()),
            AlgebraRef::Named(s) => match s.strip_prefix("fixture:") {
                Some(name) => fixture(name),
                None => read_json(&resolve_path(base, s)),
            },
        }
    }

    pub fn load(&self, base: &Path) -> Result<Arc<Algebra>, CliError> {
        Ok(Arc::new(Algebra::from_spec(&self.spec(base)?)?))
    }
}

/// Either an enumeration cap or a declared universe file.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniverseRef {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct CachedUniverse {
    fingerprint: String,
    universe: UniverseSpec,
}

fn cache_file(alg: &Algebra, max_dim: usize) -> Option<PathBuf> {
    let dir = std::env::var_os(CACHE_ENV)?;
    let key = serde_json::to_string(&(alg.spec(), max_dim)).expect("serialisable");
    let digest = hex::encode(Sha256::digest(key.as_bytes()));
    Some(PathBuf::from(dir).join(format!("universe-{}.json", &digest[..24])))
}

/// Enumerates all indecomposables up to `max_dim`, going through the cache
/// directory when one is configured. Unreadable cache entries are ignored.
pub fn enumerate_cached(alg: Arc<Algebra>, max_dim: usize) -> Result<Universe, CliError> {
    let file = cache_file(&alg, max_dim);
    if let Some(f) = &file {
        if let Ok(c) = read_json::<CachedUniverse>(f) {
            if let Ok(u) = Universe::restore(&c.universe, &c.fingerprint) {
                return Ok(u);
            }
        }
    }
    let u = Universe::enumerate(alg, max_dim)?;
    if let Some(f) = file {
        let entry = CachedUniverse { fingerprint: u.fingerprint(), universe: u.to_spec() };
        let written = f
            .parent()
            .map_or(Ok(()), fs::create_dir_all)
            .and_then(|_| fs::write(&f, serde_json::to_string(&entry).expect("serialisable")));
        if let Err(e) = written {
            eprintln!("warning: could not write universe cache {}: {e}", f.display());
        }
    }
    Ok(u)
}

impl UniverseRef {
    pub fn load(&self, alg: Arc<Algebra>, base: &Path) -> Result<Universe, CliError> {
        match (self.max_dim, &self.declared) {
            (Some(_), Some(_)) => Err(CliError::Input("give either universe.max_dim or universe.declared".into())),
            (_, Some(path)) => {
                let spec: UniverseSpec = read_json(&resolve_path(base, path))?;
                if spec.algebra != *alg.spec() {
                    return Err(CliError::Input("the declared universe is over a different algebra".into()));
                }
                Ok(Universe::from_spec(&spec)?)
            }
            (max_dim, None) => enumerate_cached(alg, max_dim.unwrap_or(2)),
        }
    }
}

/// A class of universe objects: a predicate string or a list of object ids.
///
/// Predicates are `all`, `none`, `projectives`, `injectives`,
/// `ext-orthogonal-of:<class>` (right Ext¹-orthogonal),
/// `left-ext-orthogonal-of:<class>`, `<a> & <b>`, `<a> | <b>`, or the name of
/// a class declared in the scenario.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ClassExpr {
    Predicate(String),
    Members(Vec<String>),
}

impl From<&str> for ClassExpr {
    fn from(s: &str) -> ClassExpr {
        ClassExpr::Predicate(s.to_string())
    }
}

impl std::fmt::Display for ClassExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ClassExpr::Predicate(s) => f.write_str(s),
            ClassExpr::Members(ids) => write!(f, "[{}]", ids.join(", ")),
        }
    }
}

const MAX_NESTING: usize = 32;

pub struct ClassResolver<'a> {
    pub universe: &'a Universe,
    pub named: &'a BTreeMap<String, ClassExpr>,
}

impl ClassResolver<'_> {
    pub fn resolve(&self, e: &ClassExpr) -> Result<ObjectClass, CliError> {
        self.resolve_at(e, 0)
    }

    fn resolve_at(&self, e: &ClassExpr, depth: usize) -> Result<ObjectClass, CliError> {
        if depth > MAX_NESTING {
            return Err(CliError::Input(format!("class expression '{e}' nests too deeply or is circular")));
        }
        let u = self.universe;
        match e {
            ClassExpr::Members(ids) => ids
                .iter()
                .map(|id| u.index_of(id).ok_or_else(|| CliError::Input(format!("unknown universe object '{id}'"))))
                .collect(),
            ClassExpr::Predicate(p) => {
                let p = p.trim();
                let sub = |s: &str| self.resolve_at(&ClassExpr::Predicate(s.to_string()), depth + 1);
                if let Some((a, b)) = p.split_once('|') {
                    return Ok(sub(a)?.union(&sub(b)?));
                }
                if let Some((a, b)) = p.split_once('&') {
                    return Ok(sub(a)?.intersect(&sub(b)?));
                }
                if let Some(rest) = p.strip_prefix("left-ext-orthogonal-of:") {
                    return Ok(u.orthogonal(&sub(rest)?, Side::Left));
                }
                if let Some(rest) = p.strip_prefix("ext-orthogonal-of:") {
                    return Ok(u.orthogonal(&sub(rest)?, Side::Right));
                }
                match p {
                    "all" => Ok(u.all()),
                    "none" => Ok(ObjectClass::empty()),
                    "projectives" => Ok(u.projectives()),
                    "injectives" => Ok(u.injectives()),
                    name => match self.named.get(name) {
                        Some(inner) => self.resolve_at(inner, depth + 1),
                        None => match u.index_of(name) {
                            Some(i) => Ok(ObjectClass::new([i])),
                            None => Err(CliError::Input(format!("unknown class '{name}'"))),
                        },
                    },
                }
            }
        }
    }
}
