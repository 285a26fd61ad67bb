//! Krull-Schmidt decomposition and isomorphism testing.
//!
//! Splitting uses Fitting's lemma: a non-nilpotent, non-invertible
//! endomorphism `φ` gives `M = im φ^N ⊕ ker φ^N`. Endomorphisms are drawn
//! from seeded random combinations of a basis of `End(M)`, then from all
//! combinations when the space is small enough to enumerate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bqa::{hom_space, Algebra, Module, ModuleMap};
use crate::error::{Error, Result};
use crate::homalg::maps::split_by;

const RANDOM_TRIALS: usize = 64;
const EXHAUSTIVE_LIMIT: u64 = 1 << 16;
const SEED: u64 = 0x5eed_f177;

/// An indecomposable summand together with its inclusion and projection.
#[derive(Clone, Debug)]
pub struct Summand {
    pub module: Module,
    pub incl: ModuleMap,
    pub proj: ModuleMap,
}

#[derive(Clone, Debug)]
pub enum IsoOutcome {
    Iso(ModuleMap),
    NotIso,
}

enum Kind {
    Nilpotent,
    Invertible,
    Splitting(ModuleMap),
}

fn classify(phi: &ModuleMap, total: usize) -> Kind {
    if phi.is_iso() {
        return Kind::Invertible;
    }
    let power = ModuleMap::new(phi.blocks().iter().map(|b| b.pow(total as u32)).collect());
    if power.is_zero() {
        Kind::Nilpotent
    } else {
        Kind::Splitting(power)
    }
}

fn combination(basis: &[ModuleMap], coeffs: &[u8]) -> ModuleMap {
    let mut acc = basis[0].scale(coeffs[0]);
    for (b, &c) in basis.iter().zip(coeffs).skip(1) {
        if c != 0 {
            acc.add_scaled(c, b);
        }
    }
    acc
}

/// Searches `End(M)` for an endomorphism splitting off a proper summand.
/// `Ok(None)` means `End(M)` is local, i.e. `M` is indecomposable.
fn find_splitting(alg: &Algebra, m: &Module) -> Result<Option<ModuleMap>> {
    let total = m.total_dim();
    let basis = hom_space(alg, m, m)?;
    if basis.len() <= 1 {
        return Ok(None);
    }
    for phi in &basis {
        if let Kind::Splitting(e) = classify(phi, total) {
            return Ok(Some(e));
        }
    }
    let p = alg.field().p();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ total as u64);
    for _ in 0..RANDOM_TRIALS {
        let coeffs: Vec<u8> = (0..basis.len()).map(|_| rng.random_range(0..p)).collect();
        if let Kind::Splitting(e) = classify(&combination(&basis, &coeffs), total) {
            return Ok(Some(e));
        }
    }
    let space = (p as u64).checked_pow(basis.len() as u32).unwrap_or(u64::MAX);
    if space > EXHAUSTIVE_LIMIT {
        return Err(Error::Undecided(format!(
            "endomorphism space of dimension {} over F_{p} too large to search exhaustively",
            basis.len()
        )));
    }
    let mut coeffs = vec![0u8; basis.len()];
    loop {
        let mut i = 0;
        while i < coeffs.len() {
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
        if i == coeffs.len() {
            return Ok(None);
        }
        if let Kind::Splitting(e) = classify(&combination(&basis, &coeffs), total) {
            return Ok(Some(e));
        }
    }
}

/// Decomposes `M` into indecomposable summands with their inclusions and
/// projections: `Σ incl_i ∘ proj_i = id` and `proj_i ∘ incl_j = δ_ij`.
pub fn decompose_summands(alg: &Algebra, m: &Module) -> Result<Vec<Summand>> {
    m.validate(alg)?;
    let mut done = Vec::new();
    let mut todo =
        vec![Summand { module: m.clone(), incl: ModuleMap::identity(alg, m), proj: ModuleMap::identity(alg, m) }];
    while let Some(s) = todo.pop() {
        if s.module.is_zero() {
            continue;
        }
        match find_splitting(alg, &s.module)? {
            None => done.push(s),
            Some(e) => {
                for (part, incl, proj) in split_by(alg, &s.module, &e) {
                    todo.push(Summand { module: part, incl: s.incl.compose(&incl), proj: proj.compose(&s.proj) });
                }
            }
        }
    }
    done.sort_by(|a, b| a.module.dims().cmp(b.module.dims()).then_with(|| a.module.cmp(&b.module)));
    Ok(done)
}

pub fn is_indecomposable(alg: &Algebra, m: &Module) -> Result<bool> {
    m.validate(alg)?;
    Ok(!m.is_zero() && find_splitting(alg, m)?.is_none())
}

/// An isomorphism between indecomposables, if one exists. For `A`
/// indecomposable, `End(A)` is local, so if some iso exists then some
/// product `g_j ∘ f_i` of basis maps `f_i: A -> B`, `g_j: B -> A` is a unit.
pub fn iso_between_indecomposables(alg: &Algebra, a: &Module, b: &Module) -> Option<ModuleMap> {
    if a.dims() != b.dims() {
        return None;
    }
    if a == b {
        return Some(ModuleMap::identity(alg, a));
    }
    let fs = hom_space(alg, a, b).ok()?;
    for f in &fs {
        if f.is_iso() {
            return Some(f.clone());
        }
    }
    let gs = hom_space(alg, b, a).ok()?;
    for f in &fs {
        for g in &gs {
            if g.compose(f).is_iso() {
                return Some(f.clone());
            }
        }
    }
    None
}

/// Multiplicity-grouped decomposition: one representative per
/// isomorphism class of indecomposable summand.
pub fn decompose(alg: &Algebra, m: &Module) -> Result<Vec<(Module, usize)>> {
    let mut groups: Vec<(Module, usize)> = Vec::new();
    for s in decompose_summands(alg, m)? {
        match groups.iter_mut().find(|(rep, _)| iso_between_indecomposables(alg, rep, &s.module).is_some()) {
            Some(g) => g.1 += 1,
            None => groups.push((s.module, 1)),
        }
    }
    Ok(groups)
}

/// Decides `M ≅ N`, returning an explicit isomorphism when it holds.
/// Fails with [`Error::Undecided`] only when a summand's endomorphism ring is
/// too large to search.
pub fn is_isomorphic(alg: &Algebra, m: &Module, n: &Module) -> Result<IsoOutcome> {
    m.validate(alg)?;
    n.validate(alg)?;
    if m.dims() != n.dims() {
        return Ok(IsoOutcome::NotIso);
    }
    if m == n {
        return Ok(IsoOutcome::Iso(ModuleMap::identity(alg, m)));
    }
    let hom = hom_space(alg, m, n)?;
    if let Some(f) = hom.iter().find(|f| f.is_iso()) {
        return Ok(IsoOutcome::Iso(f.clone()));
    }
    if hom.is_empty() {
        return Ok(IsoOutcome::NotIso);
    }
    let ms = decompose_summands(alg, m)?;
    let ns = decompose_summands(alg, n)?;
    if ms.len() != ns.len() {
        return Ok(IsoOutcome::NotIso);
    }
    let mut used = vec![false; ns.len()];
    let mut total = ModuleMap::zero(alg, m, n);
    for s in &ms {
        let found = ns.iter().enumerate().find_map(|(j, t)| {
            if used[j] {
                return None;
            }
            iso_between_indecomposables(alg, &s.module, &t.module).map(|f| (j, f))
        });
        let Some((j, f)) = found else {
            return Ok(IsoOutcome::NotIso);
        };
        used[j] = true;
        total = total.add(&ns[j].incl.compose(&f).compose(&s.proj));
    }
    debug_assert!(total.is_iso());
    Ok(IsoOutcome::Iso(total))
}
