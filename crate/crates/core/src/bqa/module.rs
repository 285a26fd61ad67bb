//! Finite-dimensional modules as quiver representations, module maps and
//! Hom spaces.

use crate::bqa::algebra::{Algebra, Path};
use crate::bqa::spec::{mat_from_rows, mat_to_rows, MapSpec, ModuleSpec};
use crate::error::{Error, Result};
use crate::linfield::{Mat, PrimeField};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Module {
    dims: Vec<usize>,
    maps: Vec<Mat>,
}

/// A direct sum with its canonical inclusions and projections.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub module: Module,
    pub incls: Vec<ModuleMap>,
    pub projs: Vec<ModuleMap>,
}

impl Module {
    /// Validates shapes, field and relations.
    pub fn new(alg: &Algebra, dims: Vec<usize>, maps: Vec<Mat>) -> Result<Module> {
        let m = Module { dims, maps };
        m.validate(alg)?;
        Ok(m)
    }

    pub(crate) fn from_parts(dims: Vec<usize>, maps: Vec<Mat>) -> Module {
        Module { dims, maps }
    }

    pub fn zero(alg: &Algebra) -> Module {
        let dims = vec![0; alg.vertex_count()];
        let maps = alg.quiver().arrows.iter().map(|_| Mat::zeros(alg.field(), 0, 0)).collect();
        Module { dims, maps }
    }

    pub fn validate(&self, alg: &Algebra) -> Result<()> {
        let q = alg.quiver();
        if self.dims.len() != q.vertex_count() || self.maps.len() != q.arrow_count() {
            return Err(Error::Incompatible(format!(
                "module has {} spaces and {} maps; algebra has {} vertices and {} arrows",
                self.dims.len(),
                self.maps.len(),
                q.vertex_count(),
                q.arrow_count()
            )));
        }
        for (a, m) in q.arrows.iter().zip(&self.maps) {
            if m.field() != alg.field() {
                return Err(Error::Incompatible(format!("arrow '{}' matrix over the wrong field", a.id)));
            }
            if m.rows() != self.dims[a.target] || m.cols() != self.dims[a.source] {
                return Err(Error::Malformed(format!(
                    "arrow '{}' matrix is {}x{}, expected {}x{}",
                    a.id,
                    m.rows(),
                    m.cols(),
                    self.dims[a.target],
                    self.dims[a.source]
                )));
            }
        }
        for (ri, rel) in q.relations.iter().enumerate() {
            let (s, t) = (rel.terms[0].1.source, rel.terms[0].1.target(q));
            let mut acc = Mat::zeros(alg.field(), self.dims[t], self.dims[s]);
            for (c, p) in &rel.terms {
                acc.add_scaled(*c, &self.path_action(alg, p));
            }
            if !acc.is_zero() {
                return Err(Error::Malformed(format!("relation {ri} does not vanish on the module")));
            }
        }
        Ok(())
    }

    pub fn from_spec(alg: &Algebra, spec: &ModuleSpec) -> Result<Module> {
        let q = alg.quiver();
        if spec.dims.len() != q.vertex_count() || spec.maps.len() != q.arrow_count() {
            return Err(Error::Malformed(format!(
                "module spec has {} dims and {} maps; algebra has {} vertices and {} arrows",
                spec.dims.len(),
                spec.maps.len(),
                q.vertex_count(),
                q.arrow_count()
            )));
        }
        let maps = q
            .arrows
            .iter()
            .zip(&spec.maps)
            .map(|(a, rows)| mat_from_rows(alg.field(), spec.dims[a.target], spec.dims[a.source], rows))
            .collect::<Result<Vec<_>>>()?;
        Module::new(alg, spec.dims.clone(), maps)
    }

    pub fn to_spec(&self) -> ModuleSpec {
        ModuleSpec { dims: self.dims.clone(), maps: self.maps.iter().map(mat_to_rows).collect() }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, v: usize) -> usize {
        self.dims[v]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn arrow_map(&self, a: usize) -> &Mat {
        &self.maps[a]
    }

    pub fn maps(&self) -> &[Mat] {
        &self.maps
    }

    /// The matrix by which a path acts, from its source space to its target
    /// space.
    pub fn path_action(&self, alg: &Algebra, path: &Path) -> Mat {
        let mut acc = Mat::identity(alg.field(), self.dims[path.source]);
        for &a in &path.arrows {
            acc = self.maps[a].mul(&acc);
        }
        acc
    }

    pub fn direct_sum(alg: &Algebra, parts: &[&Module]) -> DirectSum {
        let k = alg.field();
        let nv = alg.vertex_count();
        let dims: Vec<usize> = (0..nv).map(|v| parts.iter().map(|m| m.dims[v]).sum()).collect();
        let maps = (0..alg.arrow_count())
            .map(|a| Mat::block_diag(k, &parts.iter().map(|m| m.maps[a].clone()).collect::<Vec<_>>()))
            .collect();
        let module = Module { dims: dims.clone(), maps };
        let mut offsets = vec![0usize; nv];
        let mut incls = Vec::new();
        let mut projs = Vec::new();
        for m in parts {
            let mut iblocks = Vec::new();
            let mut pblocks = Vec::new();
            for v in 0..nv {
                let mut i = Mat::zeros(k, dims[v], m.dims[v]);
                i.paste(offsets[v], 0, &Mat::identity(k, m.dims[v]));
                pblocks.push(i.transpose());
                iblocks.push(i);
                offsets[v] += m.dims[v];
            }
            incls.push(ModuleMap { blocks: iblocks });
            projs.push(ModuleMap { blocks: pblocks });
        }
        DirectSum { module, incls, projs }
    }

    /// `m^{⊕ count}`
    pub fn power(alg: &Algebra, m: &Module, count: usize) -> Module {
        let parts: Vec<&Module> = std::iter::repeat_n(m, count).collect();
        Module::direct_sum(alg, &parts).module
    }

    /// Indecomposable projective at a vertex: paths starting there.
    pub fn projective(alg: &Algebra, v: usize) -> Module {
        let q = alg.quiver();
        let k = alg.field();
        let at: Vec<Vec<usize>> = (0..q.vertex_count()).map(|l| alg.paths_between(v, l)).collect();
        let dims = at.iter().map(Vec::len).collect();
        let arrow_path = |a: usize| Path { source: q.arrows[a].source, arrows: vec![a] };
        let maps = (0..q.arrow_count())
            .map(|a| {
                let (s, t) = (q.arrows[a].source, q.arrows[a].target);
                let mut m = Mat::zeros(k, at[t].len(), at[s].len());
                for (col, &pi) in at[s].iter().enumerate() {
                    let ext = alg.basis()[pi].concat(&arrow_path(a), q).expect("composable");
                    for (bi, c) in alg.normal_form(&ext) {
                        let row = at[t].iter().position(|&x| x == bi).expect("parallel basis path");
                        m.set(row, col, c);
                    }
                }
                m
            })
            .collect();
        Module { dims, maps }
    }

    /// Indecomposable injective at a vertex: dual of paths ending there.
    pub fn injective(alg: &Algebra, v: usize) -> Module {
        let q = alg.quiver();
        let k = alg.field();
        let at: Vec<Vec<usize>> = (0..q.vertex_count()).map(|l| alg.paths_between(l, v)).collect();
        let dims = at.iter().map(Vec::len).collect();
        let maps = (0..q.arrow_count())
            .map(|a| {
                let (s, t) = (q.arrows[a].source, q.arrows[a].target);
                let arrow = Path { source: s, arrows: vec![a] };
                let mut m = Mat::zeros(k, at[t].len(), at[s].len());
                for (row, &qi) in at[t].iter().enumerate() {
                    let ext = arrow.concat(&alg.basis()[qi], q).expect("composable");
                    for (bi, c) in alg.normal_form(&ext) {
                        let col = at[s].iter().position(|&x| x == bi).expect("parallel basis path");
                        m.set(row, col, c);
                    }
                }
                m
            })
            .collect();
        Module { dims, maps }
    }

    pub fn simple(alg: &Algebra, v: usize) -> Module {
        let mut dims = vec![0; alg.vertex_count()];
        dims[v] = 1;
        let maps =
            alg.quiver().arrows.iter().map(|a| Mat::zeros(alg.field(), dims[a.target], dims[a.source])).collect();
        Module { dims, maps }
    }

    /// The vector space dual, a module over the opposite algebra.
    pub fn dual(&self) -> Module {
        Module { dims: self.dims.clone(), maps: self.maps.iter().map(Mat::transpose).collect() }
    }

    /// The regular module `A` as a representation: the sum of the
    /// indecomposable projectives.
    pub fn regular(alg: &Algebra) -> Module {
        let ps: Vec<Module> = (0..alg.vertex_count()).map(|v| Module::projective(alg, v)).collect();
        Module::direct_sum(alg, &ps.iter().collect::<Vec<_>>()).module
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModuleMap {
    blocks: Vec<Mat>,
}

impl ModuleMap {
    pub fn new(blocks: Vec<Mat>) -> ModuleMap {
        ModuleMap { blocks }
    }

    pub fn blocks(&self) -> &[Mat] {
        &self.blocks
    }

    pub fn block(&self, v: usize) -> &Mat {
        &self.blocks[v]
    }

    pub fn identity(alg: &Algebra, m: &Module) -> ModuleMap {
        ModuleMap { blocks: m.dims.iter().map(|&d| Mat::identity(alg.field(), d)).collect() }
    }

    pub fn zero(alg: &Algebra, dom: &Module, cod: &Module) -> ModuleMap {
        ModuleMap { blocks: dom.dims.iter().zip(&cod.dims).map(|(&d, &c)| Mat::zeros(alg.field(), c, d)).collect() }
    }

    /// `self ∘ inner`
    pub fn compose(&self, inner: &ModuleMap) -> ModuleMap {
        ModuleMap { blocks: self.blocks.iter().zip(&inner.blocks).map(|(a, b)| a.mul(b)).collect() }
    }

    pub fn add(&self, other: &ModuleMap) -> ModuleMap {
        ModuleMap { blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, other: &ModuleMap) -> ModuleMap {
        ModuleMap { blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn scale(&self, s: u8) -> ModuleMap {
        ModuleMap { blocks: self.blocks.iter().map(|b| b.scale(s)).collect() }
    }

    pub fn add_scaled(&mut self, s: u8, other: &ModuleMap) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            a.add_scaled(s, b);
        }
    }

    /// The dual map `D(cod) -> D(dom)`.
    pub fn dual(&self) -> ModuleMap {
        ModuleMap { blocks: self.blocks.iter().map(Mat::transpose).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(Mat::is_zero)
    }

    pub fn is_injective(&self) -> bool {
        self.blocks.iter().all(Mat::is_injective)
    }

    pub fn is_surjective(&self) -> bool {
        self.blocks.iter().all(Mat::is_surjective)
    }

    pub fn is_iso(&self) -> bool {
        self.blocks.iter().all(Mat::is_invertible)
    }

    pub fn inverse(&self) -> Option<ModuleMap> {
        Some(ModuleMap { blocks: self.blocks.iter().map(Mat::inverse).collect::<Option<Vec<_>>>()? })
    }

    pub fn rank(&self) -> usize {
        self.blocks.iter().map(Mat::rank).sum()
    }

    /// Concatenated block entries, for linear algebra on Hom spaces.
    pub fn flatten(&self) -> Vec<u8> {
        self.blocks.iter().flat_map(|b| b.data().iter().copied()).collect()
    }

    /// Checks block shapes and that every arrow square commutes.
    pub fn validate(&self, alg: &Algebra, dom: &Module, cod: &Module) -> Result<()> {
        if self.blocks.len() != alg.vertex_count() {
            return Err(Error::Incompatible("map has the wrong number of blocks".into()));
        }
        for (v, b) in self.blocks.iter().enumerate() {
            if b.rows() != cod.dims[v] || b.cols() != dom.dims[v] {
                return Err(Error::Malformed(format!(
                    "block {v} is {}x{}, expected {}x{}",
                    b.rows(),
                    b.cols(),
                    cod.dims[v],
                    dom.dims[v]
                )));
            }
        }
        for (ai, a) in alg.quiver().arrows.iter().enumerate() {
            let lhs = cod.maps[ai].mul(&self.blocks[a.source]);
            let rhs = self.blocks[a.target].mul(&dom.maps[ai]);
            if lhs != rhs {
                return Err(Error::Malformed(format!("square for arrow '{}' does not commute", a.id)));
            }
        }
        Ok(())
    }

    pub fn to_spec(&self) -> MapSpec {
        MapSpec { blocks: self.blocks.iter().map(mat_to_rows).collect() }
    }

    pub fn from_spec(alg: &Algebra, dom: &Module, cod: &Module, spec: &MapSpec) -> Result<ModuleMap> {
        if spec.blocks.len() != alg.vertex_count() {
            return Err(Error::Malformed("map spec has the wrong number of blocks".into()));
        }
        let blocks = spec
            .blocks
            .iter()
            .enumerate()
            .map(|(v, rows)| mat_from_rows(alg.field(), cod.dims[v], dom.dims[v], rows))
            .collect::<Result<Vec<_>>>()?;
        let m = ModuleMap { blocks };
        m.validate(alg, dom, cod)?;
        Ok(m)
    }
}

fn check_compatible(alg: &Algebra, m: &Module) -> Result<()> {
    if m.dims.len() != alg.vertex_count() || m.maps.len() != alg.arrow_count() {
        return Err(Error::Incompatible("module does not belong to this algebra".into()));
    }
    Ok(())
}

/// Coefficient matrix of the commutation constraints for maps `m -> n`;
/// unknowns are the block entries, vertex by vertex, row-major.
fn hom_system(alg: &Algebra, m: &Module, n: &Module) -> (Mat, Vec<usize>) {
    let k = alg.field();
    let nv = alg.vertex_count();
    let mut offsets = Vec::with_capacity(nv + 1);
    let mut total = 0;
    for v in 0..nv {
        offsets.push(total);
        total += m.dims[v] * n.dims[v];
    }
    offsets.push(total);
    let q = alg.quiver();
    let eq_count: usize = q.arrows.iter().map(|a| n.dims[a.target] * m.dims[a.source]).sum();
    let mut sys = Mat::zeros(k, eq_count, total);
    let mut row = 0;
    for (ai, a) in q.arrows.iter().enumerate() {
        let (s, t) = (a.source, a.target);
        let (ms, mt, nt) = (m.dims[s], m.dims[t], n.dims[t]);
        let na = &n.maps[ai];
        let ma = &m.maps[ai];
        for r in 0..nt {
            for c in 0..ms {
                // (N_a f_s)[r][c] = sum_j N_a[r][j] f_s[j][c]
                for j in 0..n.dims[s] {
                    let coeff = na.get(r, j);
                    if coeff != 0 {
                        let var = offsets[s] + j * ms + c;
                        let v = k.add(sys.get(row, var), coeff);
                        sys.set(row, var, v);
                    }
                }
                // - (f_t M_a)[r][c] = - sum_j f_t[r][j] M_a[j][c]
                for j in 0..mt {
                    let coeff = ma.get(j, c);
                    if coeff != 0 {
                        let var = offsets[t] + r * mt + j;
                        let v = k.sub(sys.get(row, var), coeff);
                        sys.set(row, var, v);
                    }
                }
                row += 1;
            }
        }
    }
    (sys, offsets)
}

fn map_from_vector(field: PrimeField, m: &Module, n: &Module, offsets: &[usize], vec: &[u8]) -> ModuleMap {
    let blocks = (0..m.dims.len())
        .map(|v| {
            Mat::from_vec(field, n.dims[v], m.dims[v], vec[offsets[v]..offsets[v + 1]].to_vec()).expect("block shape")
        })
        .collect();
    ModuleMap { blocks }
}

/// A basis of `Hom(m, n)`.
pub fn hom_space(alg: &Algebra, m: &Module, n: &Module) -> Result<Vec<ModuleMap>> {
    check_compatible(alg, m)?;
    check_compatible(alg, n)?;
    let (sys, offsets) = hom_system(alg, m, n);
    let ker = sys.kernel();
    Ok((0..ker.cols()).map(|j| map_from_vector(alg.field(), m, n, &offsets, &ker.col(j))).collect())
}

/// `dim Hom(m, n)` without materialising the basis.
pub fn hom_dim(alg: &Algebra, m: &Module, n: &Module) -> usize {
    let (sys, offsets) = hom_system(alg, m, n);
    offsets[offsets.len() - 1] - sys.rank()
}

/// Rank of a family of maps between fixed modules, as vectors in the space
/// of block matrices.
pub fn span_rank(maps: &[ModuleMap]) -> usize {
    let Some(first) = maps.first() else { return 0 };
    let len = first.flatten().len();
    if len == 0 {
        return 0;
    }
    let field = first.blocks.first().map(Mat::field).expect("nonempty blocks");
    let data: Vec<u8> = maps.iter().flat_map(ModuleMap::flatten).collect();
    Mat::from_vec(field, maps.len(), len, data).expect("flattened maps").rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bqa::spec::{AlgebraSpec, ArrowSpec, TermSpec};

    fn dual() -> Algebra {
        Algebra::from_spec(&AlgebraSpec {
            field: 2,
            vertices: vec!["1".into()],
            arrows: vec![ArrowSpec { id: "x".into(), src: "1".into(), tgt: "1".into() }],
            relations: vec![vec![TermSpec { coeff: 1, path: vec!["x".into(), "x".into()] }]],
        })
        .unwrap()
    }

    fn a2() -> Algebra {
        Algebra::from_spec(&AlgebraSpec {
            field: 2,
            vertices: vec!["1".into(), "2".into()],
            arrows: vec![ArrowSpec { id: "a".into(), src: "1".into(), tgt: "2".into() }],
            relations: vec![],
        })
        .unwrap()
    }

    #[test]
    fn relations_enforced() {
        let alg = dual();
        let k = alg.field();
        let bad = Mat::identity(k, 1);
        assert!(Module::new(&alg, vec![1], vec![bad]).is_err());
        let ok = Mat::from_rows(k, 2, &[vec![0, 0], vec![1, 0]]).unwrap();
        assert!(Module::new(&alg, vec![2], vec![ok]).is_ok());
    }

    #[test]
    fn projectives_and_injectives() {
        let alg = dual();
        let p = Module::projective(&alg, 0);
        let i = Module::injective(&alg, 0);
        assert_eq!(p.dims(), &[2]);
        assert_eq!(i.dims(), &[2]);
        p.validate(&alg).unwrap();
        i.validate(&alg).unwrap();
        let alg = a2();
        assert_eq!(Module::projective(&alg, 0).dims(), &[1, 1]);
        assert_eq!(Module::projective(&alg, 1).dims(), &[0, 1]);
        assert_eq!(Module::injective(&alg, 0).dims(), &[1, 0]);
        assert_eq!(Module::injective(&alg, 1).dims(), &[1, 1]);
    }

    #[test]
    fn hom_dims_over_dual_numbers() {
        // Exhaustive oracle over F_2: count maps commuting with x.
        let alg = dual();
        let s = Module::simple(&alg, 0);
        let a = Module::projective(&alg, 0);
        let brute = |m: &Module, n: &Module| -> usize {
            let (dm, dn) = (m.dims()[0], n.dims()[0]);
            let mut count = 0usize;
            for bits in 0u32..(1 << (dm * dn)) {
                let data: Vec<u8> = (0..dm * dn).map(|i| ((bits >> i) & 1) as u8).collect();
                let f = Mat::from_vec(alg.field(), dn, dm, data).unwrap();
                if n.arrow_map(0).mul(&f) == f.mul(m.arrow_map(0)) {
                    count += 1;
                }
            }
            count.trailing_zeros() as usize
        };
        for (m, n, expect) in [(&s, &s, 1), (&a, &s, 1), (&s, &a, 1), (&a, &a, 2)] {
            assert_eq!(brute(m, n), expect);
            assert_eq!(hom_space(&alg, m, n).unwrap().len(), expect);
            assert_eq!(hom_dim(&alg, m, n), expect);
        }
        let zero = Module::zero(&alg);
        assert!(hom_space(&alg, &a, &zero).unwrap().is_empty());
    }

    #[test]
    fn hom_basis_elements_are_module_maps() {
        let alg = a2();
        let p1 = Module::projective(&alg, 0);
        let i2 = Module::injective(&alg, 1);
        for f in hom_space(&alg, &p1, &i2).unwrap() {
            f.validate(&alg, &p1, &i2).unwrap();
        }
        let id = ModuleMap::identity(&alg, &p1);
        id.validate(&alg, &p1, &p1).unwrap();
    }

    #[test]
    fn hom_additive_in_first_argument() {
        let alg = dual();
        let s = Module::simple(&alg, 0);
        let a = Module::projective(&alg, 0);
        let sum = Module::direct_sum(&alg, &[&s, &a]).module;
        for n in [&s, &a] {
            assert_eq!(hom_dim(&alg, &sum, n), hom_dim(&alg, &s, n) + hom_dim(&alg, &a, n));
        }
    }

    #[test]
    fn incompatible_module_rejected() {
        let alg = dual();
        let other = a2();
        let m = Module::simple(&other, 0);
        assert!(matches!(hom_space(&alg, &m, &m), Err(Error::Incompatible(_))));
    }

    #[test]
    fn spec_round_trip_is_exact() {
        let alg = a2();
        let p = Module::projective(&alg, 0);
        let spec = p.to_spec();
        let text = serde_json::to_string(&spec).unwrap();
        let back: ModuleSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
        assert_eq!(Module::from_spec(&alg, &back).unwrap(), p);
    }
}
