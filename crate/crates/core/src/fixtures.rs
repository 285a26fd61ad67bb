//! Small algebras used throughout the tests, benches and bundled scenarios.

use crate::bqa::{Algebra, AlgebraSpec, ArrowSpec, TermSpec};

fn arrow(id: &str, src: &str, tgt: &str) -> ArrowSpec {
    ArrowSpec { id: id.into(), src: src.into(), tgt: tgt.into() }
}

fn monomial(path: &[&str]) -> Vec<TermSpec> {
    vec![TermSpec { coeff: 1, path: path.iter().map(|s| s.to_string()).collect() }]
}

/// The ground field itself: one vertex, no arrows.
pub fn point_spec(p: u32) -> AlgebraSpec {
    AlgebraSpec { field: p, vertices: vec!["1".into()], arrows: vec![], relations: vec![] }
}

/// `k[x]/(x^n)` as a one-loop quiver.
pub fn truncated_polynomial_spec(p: u32, n: usize) -> AlgebraSpec {
    AlgebraSpec {
        field: p,
        vertices: vec!["1".into()],
        arrows: vec![arrow("x", "1", "1")],
        relations: vec![monomial(&vec!["x"; n])],
    }
}

/// Dual numbers `k[x]/(x^2)`.
pub fn dual_numbers_spec(p: u32) -> AlgebraSpec {
    truncated_polynomial_spec(p, 2)
}

/// Linear quiver `1 -> 2 -> ... -> n` without relations.
pub fn linear_spec(p: u32, n: usize) -> AlgebraSpec {
    let vertices: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let arrows = (1..n).map(|i| arrow(&format!("a{i}"), &i.to_string(), &(i + 1).to_string())).collect();
    AlgebraSpec { field: p, vertices, arrows, relations: vec![] }
}

/// `1 -> 2 -> 3` with the composite killed.
pub fn a3_radical_square_zero_spec(p: u32) -> AlgebraSpec {
    let mut spec = linear_spec(p, 3);
    spec.relations = vec![monomial(&["a1", "a2"])];
    spec
}

/// Commutative square `1 -> 2 -> 4`, `1 -> 3 -> 4`.
pub fn commutative_square_spec(p: u32) -> AlgebraSpec {
    AlgebraSpec {
        field: p,
        vertices: ["1", "2", "3", "4"].iter().map(|s| s.to_string()).collect(),
        arrows: vec![arrow("a", "1", "2"), arrow("b", "2", "4"), arrow("c", "1", "3"), arrow("d", "3", "4")],
        relations: vec![vec![
            TermSpec { coeff: 1, path: vec!["a".into(), "b".into()] },
            TermSpec { coeff: -1, path: vec!["c".into(), "d".into()] },
        ]],
    }
}

pub fn point(p: u32) -> Algebra {
    Algebra::from_spec(&point_spec(p)).expect("a field is admissible")
}

pub fn dual_numbers(p: u32) -> Algebra {
    Algebra::from_spec(&dual_numbers_spec(p)).expect("dual numbers are admissible")
}

pub fn truncated_polynomial(p: u32, n: usize) -> Algebra {
    Algebra::from_spec(&truncated_polynomial_spec(p, n)).expect("truncated polynomial ring is admissible")
}

pub fn linear(p: u32, n: usize) -> Algebra {
    Algebra::from_spec(&linear_spec(p, n)).expect("linear quiver is admissible")
}

pub fn a2(p: u32) -> Algebra {
    linear(p, 2)
}

pub fn a3_radical_square_zero(p: u32) -> Algebra {
    Algebra::from_spec(&a3_radical_square_zero_spec(p)).expect("admissible")
}

pub fn commutative_square(p: u32) -> Algebra {
    Algebra::from_spec(&commutative_square_spec(p)).expect("admissible")
}
