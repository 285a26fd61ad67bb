use crate::bqa::{hom_space, Algebra, Module, ModuleMap};
use crate::fixtures;

pub fn dual_numbers() -> Algebra {
    fixtures::dual_numbers(2)
}

pub fn a2() -> Algebra {
    fixtures::a2(2)
}

/// The nonzero map `S -> A` over the dual numbers.
pub fn socle_inclusion(alg: &Algebra) -> ModuleMap {
    let hom = hom_space(alg, &Module::simple(alg, 0), &Module::projective(alg, 0)).unwrap();
    assert_eq!(hom.len(), 1);
    hom[0].clone()
}

/// The nonzero map `A -> S` over the dual numbers.
pub fn top_projection(alg: &Algebra) -> ModuleMap {
    let hom = hom_space(alg, &Module::projective(alg, 0), &Module::simple(alg, 0)).unwrap();
    assert_eq!(hom.len(), 1);
    hom[0].clone()
}
