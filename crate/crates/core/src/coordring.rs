//! Functions of the coordinates with parameter-valued coefficients.
//!
//! Coordinates are ordinary registry variables, so a coordinate function is
//! a [`RatFn`] whose variables include coordinates. A [`CoordSpace`] fixes
//! which variables count as coordinates (and their order) for a given
//! computation.

use std::fmt;

use crate::algebra::{AlgebraError, Gaussian, Poly, RatFn, Var};

pub type CoordPoly = Poly;
pub type CoordRat = RatFn;

#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct CoordSpace {
    coords: Vec<Var>,
}

impl CoordSpace {
    pub fn new(coords: Vec<Var>) -> Self {
        CoordSpace { coords }
    }

    pub fn coords(&self) -> &[Var] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn index_of(&self, v: Var) -> Option<usize> {
        self.coords.iter().position(|&c| c == v)
    }

    pub fn contains(&self, v: Var) -> bool {
        self.coords.contains(&v)
    }

    /// Concatenation, e.g. the product of a manifold with group parameters.
    pub fn product(&self, other: &CoordSpace) -> CoordSpace {
        let mut coords = self.coords.clone();
        coords.extend(other.coords.iter().copied().filter(|c| !self.coords.contains(c)));
        CoordSpace { coords }
    }

    /// Gradient with respect to the coordinates.
    pub fn gradient(&self, f: &CoordRat) -> Vec<CoordRat> {
        self.coords.iter().map(|&c| if f.contains_var(c) { f.derivative(c) } else { RatFn::zero() }).collect()
    }

    /// True when `f` depends on no coordinate of this space.
    pub fn is_coordinate_free(&self, f: &CoordRat) -> bool {
        self.coords.iter().all(|&c| !f.contains_var(c))
    }
}

impl fmt::Display for CoordSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.coords.iter().map(|c| c.name()).collect();
        write!(f, "({})", names.join(", "))
    }
}

/// Partial derivative.
pub fn partial(f: &CoordRat, v: Var) -> CoordRat {
    f.derivative(v)
}

/// Evaluates a coordinate function at a point given by coordinate values;
/// the result still depends on the parameters.
pub fn eval_at(f: &CoordRat, point: &[(Var, Gaussian)]) -> Result<CoordRat, AlgebraError> {
    f.substitute(&|v| point.iter().find(|(w, _)| *w == v).map(|(_, c)| RatFn::constant(c.clone())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::var::{A, U1, Z, Z_BAR};

    #[test]
    fn gradient_and_freeness() {
        let space = CoordSpace::new(vec![Z, Z_BAR, U1]);
        let f = &(&RatFn::var(A) * &RatFn::var(Z).pow(2).unwrap()) + &RatFn::var(U1);
        let g = space.gradient(&f);
        assert_eq!(g[0], &RatFn::var(A) * &RatFn::var(Z).scale(&Gaussian::int(2)));
        assert!(g[1].is_zero());
        assert!(g[2].is_one());
        assert!(!space.is_coordinate_free(&f));
        assert!(space.is_coordinate_free(&RatFn::var(A)));
        assert_eq!(eval_at(&f, &[(Z, Gaussian::int(1)), (U1, Gaussian::int(0))]).unwrap(), RatFn::var(A));
    }
}
