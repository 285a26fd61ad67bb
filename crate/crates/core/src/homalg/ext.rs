//! Ext dimensions, computed through projective covers or, independently,
//! through injective envelopes.

use crate::bqa::{hom_space, span_rank, Algebra, Module};
use crate::error::{Error, Result};
use crate::homalg::approx::{cosyzygy, cover, envelope, syzygy};

fn check(alg: &Algebra, m: &Module, n: &Module) -> Result<()> {
    m.validate(alg).map_err(|e| Error::Incompatible(format!("first argument: {e}")))?;
    n.validate(alg).map_err(|e| Error::Incompatible(format!("second argument: {e}")))?;
    Ok(())
}

/// `dim Ext^1(M, N)` from `0 -> ΩM -> P -> M -> 0`: maps `ΩM -> N` modulo
/// those extending over `P`.
pub fn ext1_projective(alg: &Algebra, m: &Module, n: &Module) -> usize {
    if m.is_zero() || n.is_zero() {
        return 0;
    }
    alg.cache.ext1(m, n, || {
        let step = cover(alg, m);
        let hom_k = hom_space(alg, &step.remainder, n).expect("validated");
        if hom_k.is_empty() {
            return 0;
        }
        let restricted: Vec<_> = hom_space(alg, &step.module, n)
            .expect("validated")
            .iter()
            .map(|h| h.compose(&step.remainder_map))
            .collect();
        hom_k.len() - span_rank(&restricted)
    })
}

/// `dim Ext^1(M, N)` from `0 -> N -> I -> ΣN -> 0`: maps `M -> ΣN` modulo
/// those lifting to `I`.
pub fn ext1_injective(alg: &Algebra, m: &Module, n: &Module) -> usize {
    if m.is_zero() || n.is_zero() {
        return 0;
    }
    let step = envelope(alg, n);
    let hom_c = hom_space(alg, m, &step.remainder).expect("validated");
    if hom_c.is_empty() {
        return 0;
    }
    let pushed: Vec<_> =
        hom_space(alg, m, &step.module).expect("validated").iter().map(|h| step.remainder_map.compose(h)).collect();
    hom_c.len() - span_rank(&pushed)
}

/// `dim Ext^d(M, N)` for `d >= 1`, by dimension shifting on the first
/// argument.
pub fn ext_dim(alg: &Algebra, m: &Module, n: &Module, d: usize) -> Result<usize> {
    check(alg, m, n)?;
    if d == 0 {
        return Err(Error::Precondition("Ext degree must be at least 1".into()));
    }
    Ok(ext1_projective(alg, &syzygy(alg, m, d - 1), n))
}

/// `dim Ext^d(M, N)` by dimension shifting on the second argument through
/// injective envelopes. Shares no code path with [`ext_dim`] beyond Hom
/// spaces and is used to cross-check it.
pub fn ext_dim_injective(alg: &Algebra, m: &Module, n: &Module, d: usize) -> Result<usize> {
    check(alg, m, n)?;
    if d == 0 {
        return Err(Error::Precondition("Ext degree must be at least 1".into()));
    }
    Ok(ext1_injective(alg, m, &cosyzygy(alg, n, d - 1)))
}
