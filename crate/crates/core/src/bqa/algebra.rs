//! Bound quiver algebras `kQ/I` over `F_p`.
//!
//! Paths are written in traversal order: `[a, b]` means "first `a`, then
//! `b`", so `target(a) == source(b)`. The product of two basis paths is
//! their concatenation in that order. Representations (vector spaces on
//! vertices, matrices on arrows) are modules over this algebra, with a path
//! acting as the composite of its arrow matrices.

use std::collections::HashMap;

use crate::bqa::spec::{AlgebraSpec, ArrowSpec, TermSpec};
use crate::error::{Error, Result};
use crate::homalg::cache::HomCache;
use crate::linfield::{Mat, PrimeField};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub id: String,
    pub source: usize,
    pub target: usize,
}

/// A path in the quiver: a start vertex and a (possibly empty) arrow list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub source: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Path {
        Path { source: v, arrows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.is_empty()
    }

    pub fn target(&self, quiver: &BoundQuiver) -> usize {
        self.arrows.last().map_or(self.source, |&a| quiver.arrows[a].target)
    }

    /// `self` followed by `other`, if composable.
    pub fn concat(&self, other: &Path, quiver: &BoundQuiver) -> Option<Path> {
        if self.target(quiver) != other.source {
            return None;
        }
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&other.arrows);
        Some(Path { source: self.source, arrows })
    }
}

/// A linear combination of parallel paths of length at least two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub terms: Vec<(u8, Path)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundQuiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
    pub relations: Vec<Relation>,
}

impl BoundQuiver {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == id)
    }

    pub fn arrow_index(&self, id: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.id == id)
    }

    /// All paths of exactly `len` arrows.
    pub fn paths_of_length(&self, len: usize) -> Vec<Path> {
        let mut layer: Vec<Path> = (0..self.vertex_count()).map(Path::trivial).collect();
        for _ in 0..len {
            let mut next = Vec::new();
            for p in &layer {
                let t = p.target(self);
                for (ai, a) in self.arrows.iter().enumerate() {
                    if a.source == t {
                        let mut arrows = p.arrows.clone();
                        arrows.push(ai);
                        next.push(Path { source: p.source, arrows });
                    }
                }
            }
            layer = next;
        }
        layer
    }
}

/// A finite-dimensional bound quiver algebra with a path basis, normal forms
/// for every path and structure constants.
pub struct Algebra {
    field: PrimeField,
    quiver: BoundQuiver,
    spec: AlgebraSpec,
    /// Every path with at least this many arrows lies in the ideal.
    nilpotency: usize,
    basis: Vec<Path>,
    normal_forms: HashMap<Path, Vec<(usize, u8)>>,
    mult: Vec<Vec<Vec<(usize, u8)>>>,
    pub(crate) cache: HomCache,
}

impl std::fmt::Debug for Algebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Algebra")
            .field("field", &self.field.p())
            .field("vertices", &self.quiver.vertices)
            .field("dimension", &self.basis.len())
            .finish()
    }
}

/// Builds a quiver and relation list from a spec, validating references and
/// path composability.
fn build_quiver(spec: &AlgebraSpec, field: PrimeField) -> Result<BoundQuiver> {
    if spec.vertices.is_empty() {
        return Err(Error::Malformed("quiver has no vertices; the algebra must be nonzero".into()));
    }
    let mut vertices = Vec::new();
    for v in &spec.vertices {
        if vertices.contains(v) {
            return Err(Error::Malformed(format!("duplicate vertex '{v}'")));
        }
        vertices.push(v.clone());
    }
    let vidx = |id: &str| -> Result<usize> {
        vertices.iter().position(|v| v == id).ok_or_else(|| Error::Malformed(format!("unknown vertex '{id}'")))
    };
    let mut arrows: Vec<Arrow> = Vec::new();
    for ArrowSpec { id, src, tgt } in &spec.arrows {
        if arrows.iter().any(|a| &a.id == id) {
            return Err(Error::Malformed(format!("duplicate arrow '{id}'")));
        }
        arrows.push(Arrow { id: id.clone(), source: vidx(src)?, target: vidx(tgt)? });
    }
    let mut quiver = BoundQuiver { vertices, arrows, relations: Vec::new() };
    for (ri, rel) in spec.relations.iter().enumerate() {
        let mut combined: Vec<(u8, Path)> = Vec::new();
        let mut endpoints: Option<(usize, usize)> = None;
        for TermSpec { coeff, path } in rel {
            if path.len() < 2 {
                return Err(Error::Parse(format!(
                    "relation {ri}: path {path:?} has length < 2; relations must lie in the square of the arrow ideal"
                )));
            }
            let mut arrows = Vec::new();
            for id in path {
                arrows.push(
                    quiver
                        .arrow_index(id)
                        .ok_or_else(|| Error::Parse(format!("relation {ri}: unknown arrow '{id}'")))?,
                );
            }
            for w in arrows.windows(2) {
                if quiver.arrows[w[0]].target != quiver.arrows[w[1]].source {
                    return Err(Error::Parse(format!("relation {ri}: path {path:?} is not composable")));
                }
            }
            let p = Path { source: quiver.arrows[arrows[0]].source, arrows };
            let ends = (p.source, p.target(&quiver));
            match endpoints {
                None => endpoints = Some(ends),
                Some(e) if e != ends => {
                    return Err(Error::Parse(format!("relation {ri}: paths are not parallel")));
                }
                _ => {}
            }
            let c = field.reduce(*coeff);
            match combined.iter_mut().find(|(_, q)| *q == p) {
                Some((existing, _)) => *existing = field.add(*existing, c),
                None => combined.push((c, p)),
            }
        }
        combined.retain(|(c, _)| *c != 0);
        if combined.is_empty() {
            return Err(Error::Parse(format!("relation {ri} is zero")));
        }
        quiver.relations.push(Relation { terms: combined });
    }
    Ok(quiver)
}

/// Elements `u * r * v` of the ideal, as sparse vectors over paths. Terms
/// with `max_len` or more arrows are dropped when `truncate` is set; without
/// it, only products whose every term stays below `max_len` are produced.
fn ideal_elements(quiver: &BoundQuiver, max_len: usize, truncate: bool) -> Vec<Vec<(u8, Path)>> {
    let mut by_len: Vec<Vec<Path>> = Vec::new();
    for l in 0..max_len.max(1) {
        by_len.push(quiver.paths_of_length(l));
    }
    let mut out = Vec::new();
    for rel in &quiver.relations {
        let rmin = rel.terms.iter().map(|(_, p)| p.len()).min().unwrap_or(0);
        let rmax = rel.terms.iter().map(|(_, p)| p.len()).max().unwrap_or(0);
        let bound = if truncate { rmin } else { rmax };
        if bound >= max_len {
            continue;
        }
        let (s, t) = (rel.terms[0].1.source, rel.terms[0].1.target(quiver));
        let spare = max_len - 1 - bound;
        for lu in 0..=spare {
            for u in by_len[lu].iter().filter(|u| u.target(quiver) == s) {
                for paths in &by_len[..=(spare - lu)] {
                    for v in paths.iter().filter(|v| v.source == t) {
                        let mut elem = Vec::new();
                        for (c, p) in &rel.terms {
                            let Some(up) = u.concat(p, quiver) else { continue };
                            let Some(upv) = up.concat(v, quiver) else { continue };
                            if upv.len() < max_len {
                                elem.push((*c, upv));
                            }
                        }
                        if !elem.is_empty() {
                            out.push(elem);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Reduced echelon form of a set of sparse path vectors with columns indexed
/// by `columns`.
fn echelon_over(field: PrimeField, columns: &[Path], elems: &[Vec<(u8, Path)>]) -> (Mat, Vec<usize>) {
    let index: HashMap<&Path, usize> = columns.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut m = Mat::zeros(field, elems.len(), columns.len());
    for (r, e) in elems.iter().enumerate() {
        for (c, p) in e {
            let col = index[p];
            let v = field.add(m.get(r, col), *c);
            m.set(r, col, v);
        }
    }
    let ech = m.echelon();
    let rank = ech.pivots.len();
    (ech.rref.row_range(0, rank), ech.pivots)
}

impl Algebra {
    pub fn from_spec(spec: &AlgebraSpec) -> Result<Algebra> {
        let field = PrimeField::new(spec.field)?;
        let quiver = build_quiver(spec, field)?;

        let rel_len: usize = quiver.relations.iter().flat_map(|r| r.terms.iter()).map(|(_, p)| p.len()).sum();
        let cap = (2 * (rel_len + quiver.arrow_count())).max(2);
        let nilpotency = Self::certify_nilpotency(field, &quiver, cap)?;

        // Quotient of kQ/J^N by the image of the ideal. Longer paths come first
        // so that they are eliminated in favour of shorter basis paths.
        let mut columns: Vec<Path> = (0..nilpotency).flat_map(|l| quiver.paths_of_length(l)).collect();
        columns.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        let elems = ideal_elements(&quiver, nilpotency, true);
        let (rows, pivots) = echelon_over(field, &columns, &elems);

        let mut basis: Vec<Path> =
            columns.iter().enumerate().filter(|(i, _)| !pivots.contains(i)).map(|(_, p)| p.clone()).collect();
        basis.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let basis_index: HashMap<Path, usize> = basis.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();

        let mut normal_forms = HashMap::new();
        for (ci, path) in columns.iter().enumerate() {
            let mut vec = vec![0u8; columns.len()];
            vec[ci] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                let factor = vec[pc];
                if factor != 0 {
                    for (k, slot) in vec.iter_mut().enumerate() {
                        *slot = field.sub(*slot, field.mul(factor, rows.get(r, k)));
                    }
                }
            }
            let mut nf: Vec<(usize, u8)> =
                vec.iter().enumerate().filter(|(_, &v)| v != 0).map(|(k, &v)| (basis_index[&columns[k]], v)).collect();
            nf.sort();
            normal_forms.insert(path.clone(), nf);
        }

        let mut alg = Algebra {
            field,
            quiver,
            spec: spec.clone(),
            nilpotency,
            basis,
            normal_forms,
            mult: Vec::new(),
            cache: HomCache::default(),
        };
        let n = alg.basis.len();
        let mut mult = vec![vec![Vec::new(); n]; n];
        for (i, row) in mult.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                if let Some(c) = alg.basis[i].concat(&alg.basis[j], &alg.quiver) {
                    *slot = alg.normal_form(&c);
                }
            }
        }
        alg.mult = mult;
        Ok(alg)
    }

    /// Finds `N` with every path of length `N` inside the ideal, using only
    /// honest ideal elements (no truncation), with path lengths up to `cap`.
    fn certify_nilpotency(field: PrimeField, quiver: &BoundQuiver, cap: usize) -> Result<usize> {
        for max_len in 1..=cap + 1 {
            let columns: Vec<Path> = (0..max_len).flat_map(|l| quiver.paths_of_length(l)).collect();
            let elems = ideal_elements(quiver, max_len, false);
            let (rows, _) = echelon_over(field, &columns, &elems);
            let base_rank = rows.rows();
            for n in 1..max_len {
                let paths = quiver.paths_of_length(n);
                let in_ideal = paths.iter().all(|p| {
                    let idx = columns.iter().position(|c| c == p).expect("path column");
                    let mut e = Mat::zeros(field, 1, columns.len());
                    e.set(0, idx, 1);
                    rows.vstack(&e).rank() == base_rank
                });
                if in_ideal {
                    return Ok(n);
                }
            }
        }
        Err(Error::NonAdmissible(format!(
            "no power of the arrow ideal is contained in the relations up to path length {cap}"
        )))
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn quiver(&self) -> &BoundQuiver {
        &self.quiver
    }

    pub fn spec(&self) -> &AlgebraSpec {
        &self.spec
    }

    pub fn vertex_count(&self) -> usize {
        self.quiver.vertex_count()
    }

    pub fn arrow_count(&self) -> usize {
        self.quiver.arrow_count()
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Path] {
        &self.basis
    }

    pub fn nilpotency_index(&self) -> usize {
        self.nilpotency
    }

    /// Coordinates of a path in the basis (empty for paths in the ideal).
    pub fn normal_form(&self, path: &Path) -> Vec<(usize, u8)> {
        if path.len() >= self.nilpotency {
            return Vec::new();
        }
        self.normal_forms.get(path).cloned().unwrap_or_default()
    }

    /// Structure constants: `basis[i] * basis[j]` in basis coordinates.
    pub fn multiply(&self, i: usize, j: usize) -> &[(usize, u8)] {
        &self.mult[i][j]
    }

    /// Indices of basis paths from `from` to `to`.
    pub fn paths_between(&self, from: usize, to: usize) -> Vec<usize> {
        self.basis
            .iter()
            .enumerate()
            .filter(|(_, p)| p.source == from && p.target(&self.quiver) == to)
            .map(|(i, _)| i)
            .collect()
    }

    /// The opposite algebra: arrows reversed, relation paths read backwards.
    /// Duality `Hom_k(-, k)` identifies its modules with opposites of ours.
    pub fn opposite(&self) -> Result<Algebra> {
        let spec = &self.spec;
        Algebra::from_spec(&AlgebraSpec {
            field: spec.field,
            vertices: spec.vertices.clone(),
            arrows: spec
                .arrows
                .iter()
                .map(|a| ArrowSpec { id: a.id.clone(), src: a.tgt.clone(), tgt: a.src.clone() })
                .collect(),
            relations: spec
                .relations
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|t| TermSpec { coeff: t.coeff, path: t.path.iter().rev().cloned().collect() })
                        .collect()
                })
                .collect(),
        })
    }

    /// Whether two algebras are the same presentation (used to reject mixing
    /// modules over different algebras).
    pub fn same_as(&self, other: &Algebra) -> bool {
        std::ptr::eq(self, other) || self.spec == other.spec
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bqa::spec::ArrowSpec;

    pub(crate) fn dual_numbers() -> AlgebraSpec {
        AlgebraSpec {
            field: 2,
            vertices: vec!["1".into()],
            arrows: vec![ArrowSpec { id: "x".into(), src: "1".into(), tgt: "1".into() }],
            relations: vec![vec![TermSpec { coeff: 1, path: vec!["x".into(), "x".into()] }]],
        }
    }

    fn a2() -> AlgebraSpec {
        AlgebraSpec {
            field: 2,
            vertices: vec!["1".into(), "2".into()],
            arrows: vec![ArrowSpec { id: "a".into(), src: "1".into(), tgt: "2".into() }],
            relations: vec![],
        }
    }

    #[test]
    fn dual_numbers_have_basis_e_x() {
        let alg = Algebra::from_spec(&dual_numbers()).unwrap();
        assert_eq!(alg.dimension(), 2);
        assert_eq!(alg.basis()[0], Path::trivial(0));
        assert_eq!(alg.basis()[1], Path { source: 0, arrows: vec![0] });
        assert_eq!(alg.nilpotency_index(), 2);
    }

    #[test]
    fn a2_has_three_paths() {
        let alg = Algebra::from_spec(&a2()).unwrap();
        assert_eq!(alg.dimension(), 3);
        assert_eq!(alg.paths_between(0, 1).len(), 1);
        assert_eq!(alg.paths_between(1, 0).len(), 0);
    }

    #[test]
    fn empty_quiver_rejected() {
        let spec = AlgebraSpec { field: 2, vertices: vec![], arrows: vec![], relations: vec![] };
        assert!(matches!(Algebra::from_spec(&spec), Err(Error::Malformed(_))));
    }

    #[test]
    fn free_loop_is_not_admissible() {
        let mut spec = dual_numbers();
        spec.relations.clear();
        assert!(matches!(Algebra::from_spec(&spec), Err(Error::NonAdmissible(_))));
    }

    #[test]
    fn non_homogeneous_ideal_without_nilpotent_power_rejected() {
        // (x^2 - x^3) contains no power of x in k[x].
        let mut spec = dual_numbers();
        spec.relations = vec![vec![
            TermSpec { coeff: 1, path: vec!["x".into(), "x".into()] },
            TermSpec { coeff: -1, path: vec!["x".into(), "x".into(), "x".into()] },
        ]];
        assert!(matches!(Algebra::from_spec(&spec), Err(Error::NonAdmissible(_))));
    }

    #[test]
    fn relation_validation() {
        let mut spec = dual_numbers();
        spec.relations = vec![vec![TermSpec { coeff: 1, path: vec!["x".into()] }]];
        assert!(matches!(Algebra::from_spec(&spec), Err(Error::Parse(_))));
        spec.relations = vec![vec![TermSpec { coeff: 1, path: vec!["y".into(), "x".into()] }]];
        assert!(matches!(Algebra::from_spec(&spec), Err(Error::Parse(_))));
        let mut spec = a2();
        spec.relations = vec![vec![TermSpec { coeff: 1, path: vec!["a".into(), "a".into()] }]];
        assert!(matches!(Algebra::from_spec(&spec), Err(Error::Parse(_))));
    }

    #[test]
    fn commutative_square_dimension() {
        // 1 -a-> 2 -b-> 4, 1 -c-> 3 -d-> 4 with ab = cd: paths e1..e4, a, b, c, d, ab.
        let spec = AlgebraSpec {
            field: 3,
            vertices: vec!["1".into(), "2".into(), "3".into(), "4".into()],
            arrows: vec![
                ArrowSpec { id: "a".into(), src: "1".into(), tgt: "2".into() },
                ArrowSpec { id: "b".into(), src: "2".into(), tgt: "4".into() },
                ArrowSpec { id: "c".into(), src: "1".into(), tgt: "3".into() },
                ArrowSpec { id: "d".into(), src: "3".into(), tgt: "4".into() },
            ],
            relations: vec![vec![
                TermSpec { coeff: 1, path: vec!["a".into(), "b".into()] },
                TermSpec { coeff: -1, path: vec!["c".into(), "d".into()] },
            ]],
        };
        let alg = Algebra::from_spec(&spec).unwrap();
        assert_eq!(alg.dimension(), 9);
        let ab = Path { source: 0, arrows: vec![0, 1] };
        let cd = Path { source: 0, arrows: vec![2, 3] };
        assert_eq!(alg.normal_form(&ab), alg.normal_form(&cd));
    }

    #[test]
    fn multiplication_is_associative_with_unit() {
        let spec = AlgebraSpec {
            field: 3,
            vertices: vec!["1".into()],
            arrows: vec![ArrowSpec { id: "x".into(), src: "1".into(), tgt: "1".into() }],
            relations: vec![vec![TermSpec { coeff: 1, path: vec!["x".into(); 3] }]],
        };
        let alg = Algebra::from_spec(&spec).unwrap();
        assert_eq!(alg.dimension(), 3);
        let k = alg.field();
        let n = alg.dimension();
        let times = |a: &[(usize, u8)], b: &[(usize, u8)]| -> Vec<u8> {
            let mut out = vec![0u8; n];
            for &(i, ci) in a {
                for &(j, cj) in b {
                    for &(l, cl) in alg.multiply(i, j) {
                        out[l] = k.add(out[l], k.mul(k.mul(ci, cj), cl));
                    }
                }
            }
            out
        };
        let sparse = |v: Vec<u8>| -> Vec<(usize, u8)> { v.into_iter().enumerate().filter(|(_, c)| *c != 0).collect() };
        let unit: Vec<(usize, u8)> = (0..alg.vertex_count())
            .map(|v| (alg.basis().iter().position(|p| *p == Path::trivial(v)).unwrap(), 1))
            .collect();
        for i in 0..n {
            assert_eq!(sparse(times(&unit, &[(i, 1)])), vec![(i, 1)]);
            assert_eq!(sparse(times(&[(i, 1)], &unit)), vec![(i, 1)]);
            for j in 0..n {
                for l in 0..n {
                    let left = times(&sparse(times(&[(i, 1)], &[(j, 1)])), &[(l, 1)]);
                    let right = times(&[(i, 1)], &sparse(times(&[(j, 1)], &[(l, 1)])));
                    assert_eq!(left, right);
                }
            }
        }
    }
}
