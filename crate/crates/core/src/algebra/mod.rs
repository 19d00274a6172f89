//! Exact scalar arithmetic: Gaussian rationals, polynomials and rational
//! functions in named parameters and coordinates, with conjugation.

pub mod gauss;
pub mod gcd;
pub mod latex;
pub mod parse;
pub mod poly;
pub mod ratfn;
pub mod var;

use thiserror::Error;

pub use gauss::Gaussian;
pub use parse::{parse_number, parse_scalar, parse_with};
pub use poly::{Monomial, Poly};
pub use ratfn::RatFn;
pub use var::{Reality, Var, VarKind};

/// Element of the scalar field: a rational function over Q(i) in the
/// declared parameters.
pub type Scalar = RatFn;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("substitution hits a pole")]
    SubstitutionPole,
    #[error("no value for variable {0}")]
    UnboundVariable(String),
    #[error("invalid name '{0}'")]
    InvalidName(String),
    #[error("'{0}' already declared with a different reality or kind")]
    ConflictingDeclaration(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Structural zero test on canonical forms.
pub fn is_zero(s: &Scalar) -> bool {
    s.is_zero()
}

/// Real part `(f + conj f)/2`.
pub fn real_part(s: &Scalar) -> Scalar {
    (s + &s.conj()).scale(&Gaussian::ratio(1, 2))
}

/// True when the scalar is fixed by conjugation.
pub fn is_real(s: &Scalar) -> bool {
    &s.conj() == s
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn small_poly() -> impl Strategy<Value = Poly> {
        let vars = [var::A, var::A_BAR, var::B, var::Z];
        proptest::collection::vec((-3i64..4, -2i64..3, 0usize..4, 0u32..3, 0usize..4, 0u32..2), 0..4).prop_map(move |ts| {
            Poly::from_terms(ts.into_iter().map(|(re, im, v1, e1, v2, e2)| {
                (Monomial::var(vars[v1], e1).mul(&Monomial::var(vars[v2], e2)), Gaussian::complex(re, im))
            }))
        })
    }

    fn small_ratfn() -> impl Strategy<Value = RatFn> {
        (small_poly(), small_poly()).prop_filter_map("nonzero denominator", |(n, d)| RatFn::new(n, d).ok())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn conj_is_involution(f in small_ratfn()) {
            prop_assert_eq!(f.conj().conj(), f);
        }

        #[test]
        fn field_axioms(f in small_ratfn(), g in small_ratfn(), h in small_ratfn()) {
            prop_assert_eq!(&(&f + &g) * &h, &(&f * &h) + &(&g * &h));
            prop_assert_eq!(&f * &g, &g * &f);
            prop_assert!((&f - &f).is_zero());
            if !g.is_zero() {
                prop_assert_eq!(&(&f / &g) * &g, f.clone());
            }
        }

        #[test]
        fn conj_is_a_ring_morphism(f in small_ratfn(), g in small_ratfn()) {
            prop_assert_eq!((&f * &g).conj(), &f.conj() * &g.conj());
            prop_assert_eq!((&f + &g).conj(), &f.conj() + &g.conj());
        }

        #[test]
        fn canonical_form_is_unique(f in small_ratfn(), p in small_poly()) {
            prop_assume!(!p.is_zero());
            let scaled = RatFn::new(f.num() * &p, f.den() * &p).unwrap();
            prop_assert_eq!(scaled, f);
        }

        #[test]
        fn gcd_divides_both(p in small_poly(), q in small_poly(), r in small_poly()) {
            prop_assume!(!r.is_zero());
            let a = &p * &r;
            let b = &q * &r;
            let g = gcd::gcd(&a, &b);
            if !g.is_zero() {
                prop_assert!(a.div_exact(&g).is_some());
                prop_assert!(b.div_exact(&g).is_some());
                prop_assert!(g.div_exact(&r.monic()).is_some() || a.is_zero() && b.is_zero());
            }
        }

        #[test]
        fn render_parse_roundtrip(f in small_ratfn()) {
            let s = f.to_string();
            prop_assert_eq!(parse_scalar(&s).unwrap(), f);
        }
    }
}
