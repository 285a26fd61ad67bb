//! Random conflations between sums of universe objects, for closure checks
//! and fuzzing.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bqa::{hom_space, Module};
use crate::homalg::approx::cover;
use crate::homalg::{factor_through_surjection, pushout, Conflation};
use crate::universe::Universe;

const MAX_PARTS: usize = 3;

fn random_sum(u: &Universe, rng: &mut ChaCha8Rng) -> Module {
    let idx: Vec<usize> = (0..u.len()).collect();
    let count = rng.random_range(1..=MAX_PARTS);
    let parts: Vec<&Module> = (0..count).map(|_| u.module(*idx.choose(rng).expect("nonempty universe"))).collect();
    Module::direct_sum(u.algebra(), &parts).module
}

/// Pushout of `ΩC ↣ P(C) ↠ C` along `h: ΩC -> A`, which realises the
/// extension class of `h` as `A ↣ D ↠ C`.
pub fn extension_from(u: &Universe, c: &Module, a: &Module, h: &crate::bqa::ModuleMap) -> Option<Conflation> {
    let alg = u.algebra();
    let step = cover(alg, c);
    let (d, from_p, from_a) = pushout(alg, &step.remainder_map, h, &step.module, a).ok()?;
    let sum = Module::direct_sum(alg, &[&step.module, a]);
    let onto_d = from_p.compose(&sum.projs[0]).add(&from_a.compose(&sum.projs[1]));
    let to_c = factor_through_surjection(&step.map.compose(&sum.projs[0]), &onto_d)?;
    Some(Conflation { left: a.clone(), mid: d, right: c.clone(), incl: from_a, proj: to_c })
}

/// Up to `count` distinct conflations `A ↣ B ↠ C` with `A` and `C` sums of
/// at most three universe objects: every split one between single objects,
/// then pushouts of projective presentations along seeded random maps.
pub fn generate_conflations(u: &Universe, count: usize, seed: u64) -> Vec<Conflation> {
    let alg = u.algebra();
    let p = alg.field().p();
    let mut out: Vec<Conflation> = Vec::new();
    for i in 0..u.len() {
        for j in 0..u.len() {
            if out.len() < count {
                out.push(Conflation::split(alg, u.module(i), u.module(j)));
            }
        }
    }
    if u.is_empty() {
        return out;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut attempts = 0;
    while out.len() < count && attempts < 50 * count {
        attempts += 1;
        let c = random_sum(u, &mut rng);
        let a = random_sum(u, &mut rng);
        let omega = cover(alg, &c).remainder.clone();
        let Ok(basis) = hom_space(alg, &omega, &a) else { continue };
        if basis.is_empty() {
            continue;
        }
        let mut h = basis[0].scale(rng.random_range(0..p));
        for b in &basis[1..] {
            h.add_scaled(rng.random_range(0..p), b);
        }
        if let Some(conf) = extension_from(u, &c, &a, &h) {
            if !out.contains(&conf) {
                out.push(conf);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use std::sync::Arc;

    #[test]
    fn generated_conflations_are_exact_and_distinct() {
        let u = Universe::enumerate(Arc::new(fixtures::dual_numbers(2)), 2).unwrap();
        let cs = generate_conflations(&u, 200, 7);
        assert!(cs.len() >= 200, "only {} conflations", cs.len());
        for c in &cs {
            c.validate(u.algebra()).unwrap();
        }
        for (i, c) in cs.iter().enumerate() {
            assert!(!cs[..i].contains(c));
        }
    }

    #[test]
    fn nonsplit_extension_of_simples() {
        let u = Universe::enumerate(Arc::new(fixtures::dual_numbers(2)), 2).unwrap();
        let s = u.module(0).clone();
        let omega = cover(u.algebra(), &s).remainder.clone();
        let h = hom_space(u.algebra(), &omega, &s).unwrap()[0].clone();
        let c = extension_from(&u, &s, &s, &h).unwrap();
        c.validate(u.algebra()).unwrap();
        assert_eq!(u.locate(&c.mid).unwrap(), Some(1));
    }
}
