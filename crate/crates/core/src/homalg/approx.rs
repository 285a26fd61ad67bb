//! Projective covers, injective envelopes, syzygies and cosyzygies.

use crate::bqa::{Algebra, Module, ModuleMap};
use crate::homalg::cache::Step;
use crate::homalg::maps::{cokernel, kernel};
use crate::linfield::Mat;

/// Multiplicity of each indecomposable projective in the projective cover,
/// i.e. the dimension vector of `top M = M / rad M`.
pub fn top_dims(alg: &Algebra, m: &Module) -> Vec<usize> {
    (0..alg.vertex_count()).map(|v| m.dim(v) - radical_basis(alg, m, v).cols()).collect()
}

/// Dimension vector of the socle: vectors killed by every outgoing arrow.
pub fn socle_dims(alg: &Algebra, m: &Module) -> Vec<usize> {
    (0..alg.vertex_count()).map(|v| socle_basis(alg, m, v).cols()).collect()
}

fn radical_basis(alg: &Algebra, m: &Module, v: usize) -> Mat {
    let k = alg.field();
    let incoming: Vec<Mat> = alg
        .quiver()
        .arrows
        .iter()
        .enumerate()
        .filter(|(_, a)| a.target == v)
        .map(|(ai, _)| m.arrow_map(ai).clone())
        .collect();
    Mat::hcat(k, m.dim(v), &incoming).column_basis()
}

fn socle_basis(alg: &Algebra, m: &Module, v: usize) -> Mat {
    let k = alg.field();
    let outgoing: Vec<Mat> = alg
        .quiver()
        .arrows
        .iter()
        .enumerate()
        .filter(|(_, a)| a.source == v)
        .map(|(ai, _)| m.arrow_map(ai).clone())
        .collect();
    Mat::vcat(k, m.dim(v), &outgoing).kernel()
}

fn compute_cover(alg: &Algebra, m: &Module) -> Step {
    let k = alg.field();
    let nv = alg.vertex_count();
    let mut summands = Vec::new();
    let mut columns: Vec<Vec<Mat>> = vec![Vec::new(); nv];
    for j in 0..nv {
        let top = radical_basis(alg, m, j).complement_basis();
        for t in 0..top.cols() {
            let gen = top.col_range(t, t + 1);
            summands.push(Module::projective(alg, j));
            for (l, cols) in columns.iter_mut().enumerate() {
                let paths = alg.paths_between(j, l);
                let mut block = Mat::zeros(k, m.dim(l), paths.len());
                for (c, &pi) in paths.iter().enumerate() {
                    block.paste(0, c, &m.path_action(alg, &alg.basis()[pi]).mul(&gen));
                }
                cols.push(block);
            }
        }
    }
    let p = Module::direct_sum(alg, &summands.iter().collect::<Vec<_>>()).module;
    let map = ModuleMap::new((0..nv).map(|l| Mat::hcat(k, m.dim(l), &columns[l])).collect());
    let (omega, incl) = kernel(alg, &map, &p);
    Step { module: p, map, remainder: omega, remainder_map: incl }
}

fn compute_envelope(alg: &Algebra, m: &Module) -> Step {
    let k = alg.field();
    let nv = alg.vertex_count();
    let mut summands = Vec::new();
    let mut rows: Vec<Vec<Mat>> = vec![Vec::new(); nv];
    for j in 0..nv {
        let soc = socle_basis(alg, m, j);
        let full = soc.hstack(&soc.complement_basis());
        let dual = full.inverse().expect("socle extended to a basis");
        for s in 0..soc.cols() {
            let functional = dual.row_range(s, s + 1);
            summands.push(Module::injective(alg, j));
            for (l, rs) in rows.iter_mut().enumerate() {
                let paths = alg.paths_between(l, j);
                let mut block = Mat::zeros(k, paths.len(), m.dim(l));
                for (r, &qi) in paths.iter().enumerate() {
                    block.paste(r, 0, &functional.mul(&m.path_action(alg, &alg.basis()[qi])));
                }
                rs.push(block);
            }
        }
    }
    let i = Module::direct_sum(alg, &summands.iter().collect::<Vec<_>>()).module;
    let map = ModuleMap::new((0..nv).map(|l| Mat::vcat(k, m.dim(l), &rows[l])).collect());
    let (sigma, proj) = cokernel(alg, &map, &i);
    Step { module: i, map, remainder: sigma, remainder_map: proj }
}

/// Minimal projective cover `P -> M`, together with the syzygy `ΩM ↣ P`.
pub fn cover(alg: &Algebra, m: &Module) -> std::sync::Arc<Step> {
    alg.cache.cover(m, || compute_cover(alg, m))
}

/// Minimal injective envelope `M -> I`, together with the cosyzygy `I ↠ ΣM`.
pub fn envelope(alg: &Algebra, m: &Module) -> std::sync::Arc<Step> {
    alg.cache.envelope(m, || compute_envelope(alg, m))
}

pub fn projective_cover(alg: &Algebra, m: &Module) -> (Module, ModuleMap) {
    let s = cover(alg, m);
    (s.module.clone(), s.map.clone())
}

pub fn injective_envelope(alg: &Algebra, m: &Module) -> (Module, ModuleMap) {
    let s = envelope(alg, m);
    (s.module.clone(), s.map.clone())
}

/// `Ω^k M`: iterated kernels of minimal projective covers.
pub fn syzygy(alg: &Algebra, m: &Module, k: usize) -> Module {
    let mut cur = m.clone();
    for _ in 0..k {
        if cur.is_zero() {
            break;
        }
        cur = cover(alg, &cur).remainder.clone();
    }
    cur
}

/// `Σ^k M`: iterated cokernels of minimal injective envelopes.
pub fn cosyzygy(alg: &Algebra, m: &Module, k: usize) -> Module {
    let mut cur = m.clone();
    for _ in 0..k {
        if cur.is_zero() {
            break;
        }
        cur = envelope(alg, &cur).remainder.clone();
    }
    cur
}

pub fn is_projective(alg: &Algebra, m: &Module) -> bool {
    cover(alg, m).remainder.is_zero()
}

pub fn is_injective(alg: &Algebra, m: &Module) -> bool {
    envelope(alg, m).remainder.is_zero()
}

/// Projective dimension, if it is at most `cap`.
pub fn projective_dimension(alg: &Algebra, m: &Module, cap: usize) -> Option<usize> {
    let mut cur = m.clone();
    for d in 0..=cap {
        if is_projective(alg, &cur) {
            return Some(d);
        }
        cur = cover(alg, &cur).remainder.clone();
    }
    None
}
