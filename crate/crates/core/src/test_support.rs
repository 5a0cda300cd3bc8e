//! Golden coordinates and generators shared by unit tests.

use crate::jet::JetSpace;
use crate::prolong::VectorField;
use crate::symbolic::Poly;

pub fn space() -> JetSpace {
    JetSpace::new(&["x", "y"], &["u", "v", "p"], 2).unwrap()
}

/// The five published generators in base-coordinate order `x, y, u, v, p`.
pub fn fields(space: &JetSpace) -> Vec<VectorField> {
    let z: Vec<Poly> = space.base_coordinates().iter().map(Poly::symbol).collect();
    let c = Poly::int;
    let zero = Poly::zero;
    vec![
        VectorField::new(vec![c(1), zero(), zero(), zero(), zero()]),
        VectorField::new(vec![zero(), c(1), zero(), zero(), zero()]),
        VectorField::new(vec![zero(), zero(), zero(), zero(), c(1)]),
        VectorField::new(vec![
            z[0].clone(),
            zero(),
            z[2].clone(),
            zero(),
            &c(2) * &z[4],
        ]),
        VectorField::new(vec![
            zero(),
            z[1].clone(),
            &c(-2) * &z[2],
            -&z[3],
            &c(-4) * &z[4],
        ]),
    ]
}
