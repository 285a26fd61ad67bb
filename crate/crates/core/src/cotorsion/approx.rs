//! Special precovers and preenvelopes with respect to a pair of classes,
//! found by direct construction or bounded search.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bqa::{hom_space, Module, ModuleMap};
use crate::homalg::approx::{cover, envelope};
use crate::homalg::{factor_through_injection, factor_through_surjection, pullback, pushout, Conflation};
use crate::report::Witness;
use crate::universe::{ObjectClass, Universe};

/// Upper bound on the number of indecomposable summands of a searched
/// middle term.
pub const MAX_SUMMANDS: usize = 4;
const EXHAUSTIVE_MAPS: u64 = 256;
const RANDOM_MAPS: usize = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// `Y ↣ X ↠ M` with `X ∈ x`, `Y ∈ y`.
    Precover,
    /// `M ↣ Y′ ↠ X′` with `Y′ ∈ y`, `X′ ∈ x`.
    Preenvelope,
}

/// How an approximation was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// `M` already lies in the relevant class.
    Identity,
    /// Minimal projective cover or injective envelope.
    Minimal,
    /// Bounded search over sums of class members.
    Search,
    /// Pushout or pullback of an approximation on the other side.
    Salce,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproximationWitness {
    pub target: Module,
    pub conflation: Conflation,
    pub direction: Direction,
    pub method: Method,
}

impl ApproximationWitness {
    pub fn to_witness(&self, label: impl Into<String>) -> Witness {
        Witness::conflation(label, &self.conflation)
    }
}

/// The two classes of a (candidate) cotorsion pair, with Ext-based
/// membership valid for arbitrary modules.
#[derive(Clone, Copy)]
pub struct Sides<'a> {
    pub u: &'a Universe,
    pub x: &'a ObjectClass,
    pub y: &'a ObjectClass,
}

impl Sides<'_> {
    pub fn in_x(&self, m: &Module) -> bool {
        m.is_zero() || self.u.in_left_orthogonal(self.y, m)
    }

    pub fn in_y(&self, n: &Module) -> bool {
        n.is_zero() || self.u.in_right_orthogonal(self.x, n)
    }

    /// A special `x`-precover `Y ↣ X ↠ M`, trying in turn the identity, the
    /// projective cover, a bounded search and the pushout of a special
    /// preenvelope of the syzygy.
    pub fn special_precover(&self, m: &Module, budget: usize) -> Option<ApproximationWitness> {
        self.precover_direct(m, budget).or_else(|| self.precover_salce(m, budget))
    }

    /// A special `y`-preenvelope `M ↣ Y′ ↠ X′`, trying in turn the identity,
    /// the injective envelope, a bounded search and the pullback of a
    /// special precover of the cosyzygy.
    pub fn special_preenvelope(&self, m: &Module, budget: usize) -> Option<ApproximationWitness> {
        self.preenvelope_direct(m, budget).or_else(|| self.preenvelope_salce(m, budget))
    }

    fn alg(&self) -> &crate::bqa::Algebra {
        self.u.algebra()
    }

    fn precover_direct(&self, m: &Module, budget: usize) -> Option<ApproximationWitness> {
        let alg = self.alg();
        let make = |conflation, method| {
            Some(ApproximationWitness { target: m.clone(), conflation, direction: Direction::Precover, method })
        };
        if self.in_x(m) {
            return make(Conflation::split(alg, &Module::zero(alg), m), Method::Identity);
        }
        let step = cover(alg, m);
        if self.in_y(&step.remainder) {
            let c = Conflation {
                left: step.remainder.clone(),
                mid: step.module.clone(),
                right: m.clone(),
                incl: step.remainder_map.clone(),
                proj: step.map.clone(),
            };
            return make(c, Method::Minimal);
        }
        let found = search(self.u, self.x, m, budget, Direction::Precover, &|c| self.in_y(&c.left))?;
        make(found, Method::Search)
    }

    fn preenvelope_direct(&self, m: &Module, budget: usize) -> Option<ApproximationWitness> {
        let alg = self.alg();
        let make = |conflation, method| {
            Some(ApproximationWitness { target: m.clone(), conflation, direction: Direction::Preenvelope, method })
        };
        if self.in_y(m) {
            return make(Conflation::split(alg, m, &Module::zero(alg)), Method::Identity);
        }
        let step = envelope(alg, m);
        if self.in_x(&step.remainder) {
            let c = Conflation {
                left: m.clone(),
                mid: step.module.clone(),
                right: step.remainder.clone(),
                incl: step.map.clone(),
                proj: step.remainder_map.clone(),
            };
            return make(c, Method::Minimal);
        }
        let found = search(self.u, self.y, m, budget, Direction::Preenvelope, &|c| self.in_x(&c.right))?;
        make(found, Method::Search)
    }

    /// Pushout of `ΩM ↣ P ↠ M` along a special preenvelope `ΩM ↣ Y′`.
    fn precover_salce(&self, m: &Module, budget: usize) -> Option<ApproximationWitness> {
        let alg = self.alg();
        let step = cover(alg, m);
        let pre = self.preenvelope_direct(&step.remainder, budget)?.conflation;
        let (d, from_p, from_y) = pushout(alg, &step.remainder_map, &pre.incl, &step.module, &pre.mid).ok()?;
        let sum = Module::direct_sum(alg, &[&step.module, &pre.mid]);
        let onto_d = from_p.compose(&sum.projs[0]).add(&from_y.compose(&sum.projs[1]));
        let to_m = factor_through_surjection(&step.map.compose(&sum.projs[0]), &onto_d)?;
        let c = Conflation { left: pre.mid, mid: d, right: m.clone(), incl: from_y, proj: to_m };
        (c.validate(alg).is_ok() && self.in_x(&c.mid) && self.in_y(&c.left)).then(|| ApproximationWitness {
            target: m.clone(),
            conflation: c,
            direction: Direction::Precover,
            method: Method::Salce,
        })
    }

    /// Pullback of `M ↣ I ↠ ΣM` along a special precover `X ↠ ΣM`.
    fn preenvelope_salce(&self, m: &Module, budget: usize) -> Option<ApproximationWitness> {
        let alg = self.alg();
        let step = envelope(alg, m);
        let pre = self.precover_direct(&step.remainder, budget)?.conflation;
        let (e, to_i, to_x) = pullback(alg, &step.remainder_map, &pre.proj, &step.module, &pre.mid);
        let sum = Module::direct_sum(alg, &[&step.module, &pre.mid]);
        let into_sum = sum.incls[0].compose(&to_i).add(&sum.incls[1].compose(&to_x));
        let from_m = factor_through_injection(&sum.incls[0].compose(&step.map), &into_sum)?;
        let c = Conflation { left: m.clone(), mid: e, right: pre.mid, incl: from_m, proj: to_x };
        (c.validate(alg).is_ok() && self.in_y(&c.mid) && self.in_x(&c.right)).then(|| ApproximationWitness {
            target: m.clone(),
            conflation: c,
            direction: Direction::Preenvelope,
            method: Method::Salce,
        })
    }
}

/// Multisets (as nondecreasing index lists into `dims`) of at most
/// [`MAX_SUMMANDS`] entries with total dimension at most `budget`, ordered
/// by total dimension.
fn multisets(dims: &[usize], budget: usize) -> Vec<Vec<usize>> {
    fn rec(dims: &[usize], start: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == MAX_SUMMANDS {
            return;
        }
        for i in start..dims.len() {
            if dims[i] <= left {
                cur.push(i);
                rec(dims, i, left - dims[i], cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(dims, 0, budget, &mut Vec::new(), &mut out);
    out.sort_by_key(|s| s.iter().map(|&i| dims[i]).sum::<usize>());
    out
}

/// Coefficient vectors over `F_p` of length `groups.iter().sum()` in which
/// every group of consecutive coordinates is nonzero: all of them when few,
/// otherwise a seeded random sample.
fn coefficient_vectors(p: u8, groups: &[usize], seed: u64) -> Vec<Vec<u8>> {
    let h: usize = groups.iter().sum();
    let nonzero_groups = |v: &[u8]| {
        let mut at = 0;
        groups.iter().all(|&g| {
            let ok = v[at..at + g].iter().any(|&c| c != 0);
            at += g;
            ok
        })
    };
    let total = (p as u64).checked_pow(h as u32);
    if matches!(total, Some(t) if t <= EXHAUSTIVE_MAPS) {
        let total = total.expect("checked");
        return (0..total)
            .map(|mut code| {
                (0..h)
                    .map(|_| {
                        let c = (code % p as u64) as u8;
                        code /= p as u64;
                        c
                    })
                    .collect::<Vec<u8>>()
            })
            .filter(|v| nonzero_groups(v))
            .collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..RANDOM_MAPS)
        .map(|_| (0..h).map(|_| rng.random_range(0..p)).collect::<Vec<u8>>())
        .filter(|v| nonzero_groups(v))
        .collect()
}

/// Searches sums `X` of members of `class` with total dimension at most
/// `budget` for a conflation `K ↣ X ↠ M` (precover) or `M ↣ X ↠ K`
/// (preenvelope) accepted by `accept`.
pub fn search(
    u: &Universe,
    class: &ObjectClass,
    m: &Module,
    budget: usize,
    direction: Direction,
    accept: &dyn Fn(&Conflation) -> bool,
) -> Option<Conflation> {
    let alg = u.algebra();
    let p = alg.field().p();
    // Members admitting no nonzero map contribute split summands only.
    let cands: Vec<(usize, Vec<ModuleMap>)> = class
        .iter()
        .filter_map(|i| {
            let basis = match direction {
                Direction::Precover => hom_space(alg, u.module(i), m),
                Direction::Preenvelope => hom_space(alg, m, u.module(i)),
            }
            .ok()?;
            (!basis.is_empty()).then_some((i, basis))
        })
        .collect();
    let dims: Vec<usize> = cands.iter().map(|(i, _)| u.module(*i).total_dim()).collect();
    for (n, set) in multisets(&dims, budget).into_iter().enumerate() {
        let parts: Vec<&Module> = set.iter().map(|&c| u.module(cands[c].0)).collect();
        let covers_dims = (0..alg.vertex_count()).all(|v| parts.iter().map(|x| x.dim(v)).sum::<usize>() >= m.dim(v));
        if !covers_dims {
            continue;
        }
        let sum = Module::direct_sum(alg, &parts);
        let mut basis = Vec::new();
        let mut groups = Vec::new();
        for (pos, &c) in set.iter().enumerate() {
            groups.push(cands[c].1.len());
            for f in &cands[c].1 {
                basis.push(match direction {
                    Direction::Precover => f.compose(&sum.projs[pos]),
                    Direction::Preenvelope => sum.incls[pos].compose(f),
                });
            }
        }
        for coeffs in coefficient_vectors(p, &groups, n as u64) {
            let mut map = basis[0].scale(coeffs[0]);
            for (c, b) in coeffs.iter().zip(&basis).skip(1) {
                if *c != 0 {
                    map.add_scaled(*c, b);
                }
            }
            let conflation = match direction {
                Direction::Precover if map.is_surjective() => Conflation::from_deflation(alg, &sum.module, m, &map),
                Direction::Preenvelope if map.is_injective() => Conflation::from_inflation(alg, m, &sum.module, &map),
                _ => continue,
            };
            if let Ok(c) = conflation {
                if accept(&c) {
                    return Some(c);
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::universe::Universe;
    use std::sync::Arc;

    fn dual_numbers_universe() -> Universe {
        Universe::enumerate(Arc::new(fixtures::dual_numbers(2)), 2).unwrap()
    }

    #[test]
    fn multisets_respect_budget_and_order() {
        let sets = multisets(&[1, 2], 3);
        assert_eq!(sets, vec![vec![0], vec![0, 0], vec![1], vec![0, 0, 0], vec![0, 1]]);
        assert!(multisets(&[1], 10).iter().all(|s| s.len() <= MAX_SUMMANDS));
    }

    #[test]
    fn coefficient_groups_are_nonzero() {
        let v = coefficient_vectors(2, &[1, 2], 0);
        assert_eq!(v.len(), 3);
        assert!(coefficient_vectors(3, &[6], 1).len() <= RANDOM_MAPS);
    }

    #[test]
    fn preenvelope_of_simple_wrt_injectives_is_socle_sequence() {
        let u = dual_numbers_universe();
        let (all, inj) = (u.all(), u.injectives());
        let sides = Sides { u: &u, x: &all, y: &inj };
        let s = u.module(0).clone();
        let w = sides.special_preenvelope(&s, 6).unwrap();
        w.conflation.validate(u.algebra()).unwrap();
        assert_eq!(w.conflation.mid.dims(), &[2]);
        assert_eq!(w.conflation.right.dims(), &[1]);
        assert_eq!(w.method, Method::Minimal);
    }

    #[test]
    fn precover_wrt_projectives_is_projective_cover() {
        let u = dual_numbers_universe();
        let (proj, all) = (u.projectives(), u.all());
        let sides = Sides { u: &u, x: &proj, y: &all };
        let w = sides.special_precover(u.module(0), 6).unwrap();
        assert_eq!(w.method, Method::Minimal);
        assert_eq!(w.conflation.mid.dims(), &[2]);
    }

    #[test]
    fn search_and_salce_agree_on_membership() {
        let u = Universe::enumerate(Arc::new(fixtures::a2(2)), 2).unwrap();
        let (all, inj) = (u.all(), u.injectives());
        let sides = Sides { u: &u, x: &all, y: &inj };
        for i in 0..u.len() {
            let m = u.module(i);
            let found = search(&u, &inj, m, 3 * m.total_dim(), Direction::Preenvelope, &|c| sides.in_x(&c.right));
            let c = found.expect("injective preenvelope exists");
            c.validate(u.algebra()).unwrap();
            let salce = sides.preenvelope_salce(m, 3 * m.total_dim()).unwrap();
            salce.conflation.validate(u.algebra()).unwrap();
            assert!(sides.in_y(&salce.conflation.mid));
        }
    }
}
