//! Brute-force enumeration of module structures on a fixed dimension vector.

use crate::bqa::{Algebra, Module};
use crate::error::Result;
use crate::homalg::{is_indecomposable, iso_between_indecomposables};
use crate::linfield::Mat;

/// Nonzero dimension vectors of total at most `max`, ordered by total and
/// then lexicographically.
pub(super) fn dimension_vectors(n: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; n];
    fn rec(i: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            if cur.iter().any(|&d| d > 0) {
                out.push(cur.clone());
            }
            return;
        }
        for d in 0..=left {
            cur[i] = d;
            rec(i + 1, left - d, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, max, &mut cur, &mut out);
    out.sort_by(|a, b| a.iter().sum::<usize>().cmp(&b.iter().sum::<usize>()).then_with(|| a.cmp(b)));
    out
}

/// Number of arrow-matrix assignments before relations are imposed.
pub(super) fn candidate_count(alg: &Algebra, dims: &[usize]) -> u128 {
    let p = alg.field().p() as u128;
    alg.quiver().arrows.iter().fold(1u128, |acc, a| {
        let entries = (dims[a.source] * dims[a.target]) as u32;
        acc.saturating_mul(p.checked_pow(entries).unwrap_or(u128::MAX))
    })
}

fn decode(alg: &Algebra, rows: usize, cols: usize, mut code: u64) -> Mat {
    let p = alg.field().p() as u64;
    let mut data = vec![0u8; rows * cols];
    for x in data.iter_mut() {
        *x = (code % p) as u8;
        code /= p;
    }
    Mat::from_vec(alg.field(), rows, cols, data).expect("shape")
}

/// Rank profile of every nontrivial basis path: cheap isomorphism invariant.
fn invariant(alg: &Algebra, m: &Module) -> Vec<usize> {
    alg.basis().iter().filter(|p| !p.is_trivial()).map(|p| m.path_action(alg, p).rank()).collect()
}

struct Search<'a> {
    alg: &'a Algebra,
    dims: &'a [usize],
    order: Vec<usize>,
    /// Relations to test once the arrow at each position is assigned.
    ready: Vec<Vec<usize>>,
    maps: Vec<Option<Mat>>,
    found: Vec<(Vec<usize>, Module)>,
}

impl Search<'_> {
    fn relation_holds(&self, r: usize) -> bool {
        let k = self.alg.field();
        let rel = &self.alg.quiver().relations[r];
        let (s, t) = {
            let p = &rel.terms[0].1;
            (p.source, p.target(self.alg.quiver()))
        };
        let mut acc = Mat::zeros(k, self.dims[t], self.dims[s]);
        for (c, path) in &rel.terms {
            let mut m = Mat::identity(k, self.dims[s]);
            for &a in &path.arrows {
                m = self.maps[a].as_ref().expect("assigned").mul(&m);
            }
            acc.add_scaled(*c, &m);
        }
        acc.is_zero()
    }

    fn run(&mut self, pos: usize) -> Result<()> {
        if pos == self.order.len() {
            let maps = self.maps.iter().map(|m| m.clone().expect("assigned")).collect();
            return self.consider(Module::from_parts(self.dims.to_vec(), maps));
        }
        let a = self.order[pos];
        let arrow = &self.alg.quiver().arrows[a];
        let (rows, cols) = (self.dims[arrow.target], self.dims[arrow.source]);
        let count = (self.alg.field().p() as u64).pow((rows * cols) as u32);
        for code in 0..count {
            self.maps[a] = Some(decode(self.alg, rows, cols, code));
            if self.ready[pos].iter().all(|&r| self.relation_holds(r)) {
                self.run(pos + 1)?;
            }
        }
        self.maps[a] = None;
        Ok(())
    }

    fn consider(&mut self, m: Module) -> Result<()> {
        let inv = invariant(self.alg, &m);
        for (known_inv, known) in &self.found {
            if *known_inv == inv && iso_between_indecomposables(self.alg, known, &m).is_some() {
                return Ok(());
            }
        }
        if is_indecomposable(self.alg, &m)? {
            self.found.push((inv, m));
        }
        Ok(())
    }
}

/// Representatives of the isomorphism classes of indecomposables with the
/// given dimension vector, in enumeration order.
pub(super) fn indecomposables_with_dims(alg: &Algebra, dims: &[usize]) -> Result<Vec<Module>> {
    let q = alg.quiver();
    let mut order: Vec<usize> = (0..q.arrow_count()).collect();
    order.sort_by_key(|&a| (q.arrows[a].source != q.arrows[a].target, a));
    let position: Vec<usize> = {
        let mut pos = vec![0; order.len()];
        for (i, &a) in order.iter().enumerate() {
            pos[a] = i;
        }
        pos
    };
    let mut ready = vec![Vec::new(); order.len()];
    for (r, rel) in q.relations.iter().enumerate() {
        let last = rel.terms.iter().flat_map(|(_, p)| p.arrows.iter().map(|&a| position[a])).max();
        if let Some(last) = last {
            ready[last].push(r);
        }
    }
    let mut search = Search { alg, dims, order, ready, maps: vec![None; q.arrow_count()], found: Vec::new() };
    search.run(0)?;
    Ok(search.found.into_iter().map(|(_, m)| m).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn dimension_vectors_ordered() {
        let v = dimension_vectors(2, 2);
        assert_eq!(v, vec![vec![0, 1], vec![1, 0], vec![0, 2], vec![1, 1], vec![2, 0]]);
    }

    #[test]
    fn truncated_polynomial_indecomposables_are_jordan_blocks() {
        let alg = fixtures::truncated_polynomial(2, 3);
        for n in 1..=4 {
            let found = indecomposables_with_dims(&alg, &[n]).unwrap();
            assert_eq!(found.len(), usize::from(n <= 3), "dimension {n}");
        }
    }

    #[test]
    fn kronecker_dimension_one_one() {
        let spec = crate::bqa::AlgebraSpec {
            field: 2,
            vertices: vec!["1".into(), "2".into()],
            arrows: vec![
                crate::bqa::ArrowSpec { id: "a".into(), src: "1".into(), tgt: "2".into() },
                crate::bqa::ArrowSpec { id: "b".into(), src: "1".into(), tgt: "2".into() },
            ],
            relations: vec![],
        };
        let alg = Algebra::from_spec(&spec).unwrap();
        // Points of the projective line over F_2.
        assert_eq!(indecomposables_with_dims(&alg, &[1, 1]).unwrap().len(), 3);
    }
}
