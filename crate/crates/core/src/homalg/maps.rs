//! Kernels, cokernels, images, pushouts and pullbacks of module maps.

use crate::bqa::{Algebra, Module, ModuleMap};
use crate::error::{Error, Result};
use crate::linfield::Mat;

/// The submodule spanned at each vertex by the given independent columns.
/// The subspaces must be closed under the arrow maps.
pub fn submodule(alg: &Algebra, m: &Module, bases: &[Mat]) -> (Module, ModuleMap) {
    let dims: Vec<usize> = bases.iter().map(Mat::cols).collect();
    let maps = alg
        .quiver()
        .arrows
        .iter()
        .enumerate()
        .map(|(ai, a)| {
            let image = m.arrow_map(ai).mul(&bases[a.source]);
            bases[a.target].solve(&image).expect("subspace is closed under arrows")
        })
        .collect();
    (Module::from_parts(dims, maps), ModuleMap::new(bases.to_vec()))
}

/// Kernel of `f: dom -> cod`, with its inclusion into `dom`.
pub fn kernel(alg: &Algebra, f: &ModuleMap, dom: &Module) -> (Module, ModuleMap) {
    let bases: Vec<Mat> = f.blocks().iter().map(Mat::kernel).collect();
    submodule(alg, dom, &bases)
}

/// Image of `f: dom -> cod`, with its inclusion into `cod`.
pub fn image(alg: &Algebra, f: &ModuleMap, cod: &Module) -> (Module, ModuleMap) {
    let bases: Vec<Mat> = f.blocks().iter().map(Mat::column_basis).collect();
    submodule(alg, cod, &bases)
}

/// Cokernel of `f: dom -> cod`, with the projection from `cod`.
pub fn cokernel(alg: &Algebra, f: &ModuleMap, cod: &Module) -> (Module, ModuleMap) {
    let k = alg.field();
    let projections: Vec<Mat> = f.blocks().iter().map(Mat::left_kernel).collect();
    let sections: Vec<Mat> = projections
        .iter()
        .map(|q| q.solve(&Mat::identity(k, q.rows())).expect("projection has full row rank"))
        .collect();
    let dims = projections.iter().map(Mat::rows).collect();
    let maps = alg
        .quiver()
        .arrows
        .iter()
        .enumerate()
        .map(|(ai, a)| projections[a.target].mul(cod.arrow_map(ai)).mul(&sections[a.source]))
        .collect();
    (Module::from_parts(dims, maps), ModuleMap::new(projections))
}

/// Pushout of an inflation `f: k -> b` along `g: k -> l`:
/// returns `D = (B ⊕ L) / {(f(x), -g(x))}` with the maps `B -> D`, `L -> D`.
pub fn pushout(
    alg: &Algebra,
    f: &ModuleMap,
    g: &ModuleMap,
    b: &Module,
    l: &Module,
) -> Result<(Module, ModuleMap, ModuleMap)> {
    if !f.is_injective() {
        return Err(Error::Precondition("pushouts are taken along inflations; f is not injective".into()));
    }
    let sum = Module::direct_sum(alg, &[b, l]);
    let diag = sum.incls[0].compose(f).sub(&sum.incls[1].compose(g));
    let (d, q) = cokernel(alg, &diag, &sum.module);
    let to_d_from_b = q.compose(&sum.incls[0]);
    let to_d_from_l = q.compose(&sum.incls[1]);
    Ok((d, to_d_from_b, to_d_from_l))
}

/// Pullback of `f: b -> d` and `g: l -> d`: returns
/// `E = {(x, y) : f(x) = g(y)}` with the maps `E -> B`, `E -> L`.
pub fn pullback(alg: &Algebra, f: &ModuleMap, g: &ModuleMap, b: &Module, l: &Module) -> (Module, ModuleMap, ModuleMap) {
    let sum = Module::direct_sum(alg, &[b, l]);
    let diff = f.compose(&sum.projs[0]).sub(&g.compose(&sum.projs[1]));
    let (e, incl) = kernel(alg, &diff, &sum.module);
    (e, sum.projs[0].compose(&incl), sum.projs[1].compose(&incl))
}

/// Splits `m` as `im(e) ⊕ ker(e)` for an endomorphism `e` whose image and
/// kernel are complementary (a high enough power of any endomorphism).
/// Returns each part with its inclusion and projection.
pub fn split_by(alg: &Algebra, m: &Module, e: &ModuleMap) -> [(Module, ModuleMap, ModuleMap); 2] {
    let (im, im_incl) = image(alg, e, m);
    let (ker, ker_incl) = kernel(alg, e, m);
    let mut im_proj = Vec::new();
    let mut ker_proj = Vec::new();
    for v in 0..alg.vertex_count() {
        let basis = im_incl.block(v).hstack(ker_incl.block(v));
        let inv = basis.inverse().expect("image and kernel are complementary");
        let r = im.dim(v);
        im_proj.push(inv.row_range(0, r));
        ker_proj.push(inv.row_range(r, basis.rows()));
    }
    [(im, im_incl, ModuleMap::new(im_proj)), (ker, ker_incl, ModuleMap::new(ker_proj))]
}

/// The map `z` with `e ∘ z = g`, for `e` injective, if `g` lands in the
/// image of `e`.
pub fn factor_through_injection(g: &ModuleMap, e: &ModuleMap) -> Option<ModuleMap> {
    let blocks = g.blocks().iter().zip(e.blocks()).map(|(gv, ev)| ev.solve(gv)).collect::<Option<Vec<_>>>()?;
    Some(ModuleMap::new(blocks))
}

/// The map `z` with `z ∘ q = g`, for `q` surjective, if `g` vanishes on the
/// kernel of `q`.
pub fn factor_through_surjection(g: &ModuleMap, q: &ModuleMap) -> Option<ModuleMap> {
    let mut blocks = Vec::new();
    for (gv, qv) in g.blocks().iter().zip(q.blocks()) {
        let section = qv.solve(&Mat::identity(qv.field(), qv.rows()))?;
        let z = gv.mul(&section);
        if z.mul(qv) != *gv {
            return None;
        }
        blocks.push(z);
    }
    Some(ModuleMap::new(blocks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit::*;

    #[test]
    fn kernel_and_cokernel_of_socle_inclusion() {
        let alg = dual_numbers();
        let s = Module::simple(&alg, 0);
        let a = Module::projective(&alg, 0);
        let soc = socle_inclusion(&alg);
        soc.validate(&alg, &s, &a).unwrap();
        let (c, q) = cokernel(&alg, &soc, &a);
        assert_eq!(c.dims(), &[1]);
        assert!(q.compose(&soc).is_zero());
        let (k, i) = kernel(&alg, &q, &a);
        assert_eq!(k.dims(), &[1]);
        i.validate(&alg, &k, &a).unwrap();
    }

    #[test]
    fn pushout_along_identity_is_codomain() {
        let alg = dual_numbers();
        let s = Module::simple(&alg, 0);
        let a = Module::projective(&alg, 0);
        let f = socle_inclusion(&alg);
        let id = ModuleMap::identity(&alg, &s);
        let (d, from_b, from_l) = pushout(&alg, &f, &id, &a, &s).unwrap();
        assert_eq!(d.total_dim(), 2);
        assert!(from_b.is_iso());
        assert_eq!(from_l.compose(&id), from_b.compose(&f));
    }

    #[test]
    fn pushout_from_zero_is_direct_sum() {
        let alg = a2();
        let z = Module::zero(&alg);
        let p1 = Module::projective(&alg, 0);
        let s1 = Module::simple(&alg, 0);
        let f = ModuleMap::zero(&alg, &z, &p1);
        let g = ModuleMap::zero(&alg, &z, &s1);
        let (d, _, from_l) = pushout(&alg, &f, &g, &p1, &s1).unwrap();
        assert_eq!(d.dims(), &[2, 1]);
        assert!(from_l.is_injective());
    }

    #[test]
    fn pushout_requires_inflation() {
        let alg = dual_numbers();
        let a = Module::projective(&alg, 0);
        let s = Module::simple(&alg, 0);
        let top = top_projection(&alg);
        let g = ModuleMap::zero(&alg, &a, &s);
        assert!(matches!(pushout(&alg, &top, &g, &s, &s), Err(Error::Precondition(_))));
    }
}
