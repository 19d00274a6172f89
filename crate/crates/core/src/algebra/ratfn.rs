//! Rational functions in canonical form: numerator and denominator coprime,
//! denominator monic in the lexicographic order.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::gauss::Gaussian;
use super::gcd::gcd;
use super::poly::{Monomial, Poly};
use super::var::Var;
use super::AlgebraError;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

impl Default for RatFn {
    fn default() -> Self {
        RatFn::zero()
    }
}

impl RatFn {
    pub fn zero() -> Self {
        RatFn { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        RatFn { num: Poly::one(), den: Poly::one() }
    }

    pub fn int(n: i64) -> Self {
        RatFn::from_poly(Poly::int(n))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        RatFn::constant(Gaussian::ratio(p, q))
    }

    pub fn i() -> Self {
        RatFn::constant(Gaussian::i())
    }

    pub fn constant(c: Gaussian) -> Self {
        RatFn::from_poly(Poly::constant(c))
    }

    pub fn var(v: Var) -> Self {
        RatFn::from_poly(Poly::var(v))
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFn { num: p, den: Poly::one() }
    }

    /// Canonicalises `num / den`. Fails on a zero denominator.
    pub fn new(num: Poly, den: Poly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFn::zero());
        }
        if let Some(c) = den.as_constant() {
            let inv = c.inv().expect("nonzero constant");
            return Ok(RatFn { num: num.scale(&inv), den: Poly::one() });
        }
        let g = gcd(&num, &den);
        let (n, d) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let lc = d.leading_coeff();
        let inv = lc.inv().expect("nonzero leading coefficient");
        Ok(RatFn { num: n.scale(&inv), den: d.scale(&inv) })
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Gaussian> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut s = self.num.vars();
        s.extend(self.den.vars());
        s
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.num.contains_var(v) || self.den.contains_var(v)
    }

    pub fn conj(&self) -> RatFn {
        RatFn::new(self.num.conj(), self.den.conj()).expect("conjugate of nonzero denominator")
    }

    pub fn inv(&self) -> Result<RatFn, AlgebraError> {
        RatFn::new(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, c: &Gaussian) -> RatFn {
        RatFn { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn pow(&self, e: i32) -> Result<RatFn, AlgebraError> {
        if e >= 0 {
            let e = e as u32;
            Ok(RatFn { num: self.num.pow(e), den: self.den.pow(e) })
        } else {
            self.inv()?.pow(-e)
        }
    }

    pub fn checked_div(&self, o: &RatFn) -> Result<RatFn, AlgebraError> {
        if o.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if o.is_one() {
            return Ok(self.clone());
        }
        if let Some(c) = o.as_constant() {
            return Ok(self.scale(&c.inv().expect("nonzero")));
        }
        RatFn::new(&self.num * &o.den, &self.den * &o.num)
    }

    pub fn derivative(&self, v: Var) -> RatFn {
        if !self.contains_var(v) {
            return RatFn::zero();
        }
        if self.den.is_one() {
            return RatFn::from_poly(self.num.derivative(v));
        }
        let n = &(&self.num.derivative(v) * &self.den) - &(&self.num * &self.den.derivative(v));
        RatFn::new(n, self.den.pow(2)).expect("nonzero denominator")
    }

    /// Substitutes rational functions for variables.
    pub fn substitute(&self, map: &dyn Fn(Var) -> Option<RatFn>) -> Result<RatFn, AlgebraError> {
        let n = subst_poly(&self.num, map);
        let d = subst_poly(&self.den, map);
        n.checked_div(&d).map_err(|_| AlgebraError::SubstitutionPole)
    }

    pub fn substitute_var(&self, v: Var, value: &RatFn) -> Result<RatFn, AlgebraError> {
        if !self.contains_var(v) {
            return Ok(self.clone());
        }
        self.substitute(&|w| (w == v).then(|| value.clone()))
    }

    /// Rewrites with the relation `v^2 = q` (with `q` free of `v`), leaving
    /// at most a linear dependence on `v` in the numerator and none in the
    /// denominator.
    pub fn reduce_square(&self, v: Var, q: &RatFn) -> RatFn {
        if !self.contains_var(v) {
            return self.clone();
        }
        let q = q.clone();
        // Split into even and odd parts in v: p = p0(v^2) + v p1(v^2).
        let lin = |p: &Poly| -> (RatFn, RatFn) {
            let coeffs = p.coeffs_in(v);
            let mut even = RatFn::zero();
            let mut odd = RatFn::zero();
            let mut qpow = RatFn::one();
            for (k, c) in coeffs.iter().enumerate() {
                if k > 0 && k % 2 == 0 {
                    qpow = &qpow * &q;
                }
                let term = &RatFn::from_poly(c.clone()) * &qpow;
                if k % 2 == 0 {
                    even = &even + &term;
                } else {
                    odd = &odd + &term;
                }
            }
            (even, odd)
        };
        let (n0, n1) = lin(&self.num);
        let (d0, d1) = lin(&self.den);
        let vv = RatFn::var(v);
        if d1.is_zero() {
            return (&n0 + &(&vv * &n1)).checked_div(&d0).expect("nonzero denominator");
        }
        // (n0 + v n1)(d0 - v d1) / (d0^2 - q d1^2)
        let num_even = &(&n0 * &d0) - &(&(&n1 * &d1) * &q);
        let num_odd = &(&n1 * &d0) - &(&n0 * &d1);
        let den = &(&d0 * &d0) - &(&(&d1 * &d1) * &q);
        (&num_even + &(&vv * &num_odd)).checked_div(&den).expect("relation leaves nonzero denominator")
    }

    /// Evaluates with every variable replaced by a Gaussian rational.
    pub fn eval(&self, values: &dyn Fn(Var) -> Option<Gaussian>) -> Result<Gaussian, AlgebraError> {
        let f = |p: &Poly| -> Result<Gaussian, AlgebraError> {
            let mut acc = Gaussian::zero();
            for (m, c) in p.terms() {
                let mut t = c.clone();
                for &(v, e) in m.exponents() {
                    let x = values(v).ok_or_else(|| AlgebraError::UnboundVariable(v.name()))?;
                    t = &t * &x.pow(e);
                }
                acc += &t;
            }
            Ok(acc)
        };
        let d = f(&self.den)?;
        if d.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(&f(&self.num)? / &d)
    }

    /// Splits off the Gaussian-rational content: `self = c * rest` where the
    /// numerator of `rest` has leading coefficient one.
    pub fn split_content(&self) -> (Gaussian, RatFn) {
        if self.is_zero() {
            return (Gaussian::zero(), RatFn::zero());
        }
        let c = self.num.leading_coeff();
        let inv = c.inv().expect("nonzero");
        (c, RatFn { num: self.num.scale(&inv), den: self.den.clone() })
    }

    /// Numerator content-free and sign-normalised, for set-style comparison of
    /// invariants up to a constant factor.
    pub fn normalized_up_to_constant(&self) -> RatFn {
        self.split_content().1
    }

    pub fn leading_monomial(&self) -> Option<Monomial> {
        self.num.leading().map(|t| t.0.clone())
    }
}

fn subst_poly(p: &Poly, map: &dyn Fn(Var) -> Option<RatFn>) -> RatFn {
    let vars = p.vars();
    let subs: Vec<(Var, RatFn)> = vars.iter().filter_map(|&v| map(v).map(|r| (v, r))).collect();
    if subs.is_empty() {
        return RatFn::from_poly(p.clone());
    }
    if subs.iter().all(|(_, r)| r.is_polynomial()) {
        let q = p.substitute(&|v| subs.iter().find(|(w, _)| *w == v).map(|(_, r)| r.num.clone()));
        return RatFn::from_poly(q);
    }
    // Horner-free accumulation with a common denominator per term.
    let mut acc = RatFn::zero();
    for (m, c) in p.terms() {
        let mut t = RatFn::constant(c.clone());
        let mut kept = Monomial::one();
        for &(v, e) in m.exponents() {
            match subs.iter().find(|(w, _)| *w == v) {
                Some((_, r)) => t = &t * &r.pow(e as i32).expect("nonnegative power"),
                None => kept = kept.mul(&Monomial::var(v, e)),
            }
        }
        t = &t * &RatFn::from_poly(Poly::term(Gaussian::one(), kept));
        acc = &acc + &t;
    }
    acc
}

impl<'a> Add<&'a RatFn> for &'a RatFn {
    type Output = RatFn;
    fn add(self, o: &RatFn) -> RatFn {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RatFn::new(&self.num + &o.num, self.den.clone()).expect("nonzero denominator");
        }
        if self.den.is_one() {
            return RatFn { num: &(&self.num * &o.den) + &o.num, den: o.den.clone() };
        }
        if o.den.is_one() {
            return RatFn { num: &self.num + &(&o.num * &self.den), den: self.den.clone() };
        }
        let g = gcd(&self.den, &o.den);
        let sd = self.den.div_exact(&g).expect("gcd divides");
        let od = o.den.div_exact(&g).expect("gcd divides");
        let n = &(&self.num * &od) + &(&o.num * &sd);
        RatFn::new(n, &sd * &o.den).expect("nonzero denominator")
    }
}

impl<'a> Sub<&'a RatFn> for &'a RatFn {
    type Output = RatFn;
    fn sub(self, o: &RatFn) -> RatFn {
        self + &(-o)
    }
}

impl<'a> Mul<&'a RatFn> for &'a RatFn {
    type Output = RatFn;
    fn mul(self, o: &RatFn) -> RatFn {
        if self.is_zero() || o.is_zero() {
            return RatFn::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFn { num: &self.num * &o.num, den: Poly::one() };
        }
        if let Some(c) = self.as_constant() {
            return o.scale(&c);
        }
        if let Some(c) = o.as_constant() {
            return self.scale(&c);
        }
        // Cross-cancel before multiplying.
        let g1 = gcd(&self.num, &o.den);
        let g2 = gcd(&o.num, &self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = o.den.div_exact(&g1).expect("gcd divides");
        let n2 = o.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        let num = &n1 * &n2;
        let den = &d1 * &d2;
        let lc = den.leading_coeff().inv().expect("nonzero");
        RatFn { num: num.scale(&lc), den: den.scale(&lc) }
    }
}

impl<'a> Div<&'a RatFn> for &'a RatFn {
    type Output = RatFn;
    fn div(self, o: &RatFn) -> RatFn {
        self.checked_div(o).expect("division by zero rational function")
    }
}

impl Neg for &RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        RatFn { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        -&self
    }
}

macro_rules! forward_owned_rat {
    ($tr:ident, $m:ident) => {
        impl $tr<RatFn> for RatFn {
            type Output = RatFn;
            fn $m(self, o: RatFn) -> RatFn {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned_rat!(Add, add);
forward_owned_rat!(Sub, sub);
forward_owned_rat!(Mul, mul);
forward_owned_rat!(Div, div);

impl From<Poly> for RatFn {
    fn from(p: Poly) -> Self {
        RatFn::from_poly(p)
    }
}

impl From<Var> for RatFn {
    fn from(v: Var) -> Self {
        RatFn::var(v)
    }
}

impl From<i64> for RatFn {
    fn from(n: i64) -> Self {
        RatFn::int(n)
    }
}

impl From<Gaussian> for RatFn {
    fn from(c: Gaussian) -> Self {
        RatFn::constant(c)
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let num = if self.num.len() > 1 { format!("({})", self.num) } else { self.num.to_string() };
        let simple_den = self.den.is_monomial()
            && self.den.terms()[0].1.is_one()
            && self.den.terms()[0].0.exponents().len() == 1;
        let den = if simple_den { self.den.to_string() } else { format!("({})", self.den) };
        write!(f, "{num}/{den}")
    }
}

#[cfg(test)]
mod tests {
    use super::super::var::{A, A_BAR, B, EPS, R};
    use super::*;

    fn v(x: Var) -> RatFn {
        RatFn::var(x)
    }

    #[test]
    fn canonical_form_cancels() {
        let f = &(&v(A) * &v(B)) / &(&v(A) * &v(B).pow(2).unwrap());
        assert_eq!(f, &RatFn::one() / &v(B));
        let g = &(&v(A) + &v(B)) / &(&v(A) + &v(B));
        assert!(g.is_one());
        let h = &(&v(A).scale(&Gaussian::int(2)) + &RatFn::int(2)) / &(&v(A).scale(&Gaussian::int(4)) + &RatFn::int(4));
        assert_eq!(h, RatFn::ratio(1, 2));
    }

    #[test]
    fn reduce_square_is_idempotent() {
        let eps = v(EPS);
        let f = &(&eps.pow(3).unwrap() + &v(A)) / &(&eps + &RatFn::int(2));
        let g = f.reduce_square(EPS, &RatFn::one());
        assert!(g.den().degree_in(EPS) == 0);
        assert!(g.num().degree_in(EPS) <= 1);
        assert_eq!(g.reduce_square(EPS, &RatFn::one()), g);
        // Check at eps = 1 and eps = -1.
        for s in [1, -1] {
            let val = |x: Var| (x == EPS).then(|| RatFn::int(s));
            assert_eq!(f.substitute(&val).unwrap(), g.substitute(&val).unwrap());
        }
        let r2 = v(R).pow(2).unwrap();
        let q = &v(A) * &v(A_BAR);
        assert_eq!((&r2 / &v(B).pow(2).unwrap()).reduce_square(R, &q), &q / &v(B).pow(2).unwrap());
    }

    #[test]
    fn derivative_quotient_rule() {
        let f = &RatFn::one() / &v(A);
        assert_eq!(f.derivative(A), -(&RatFn::one() / &v(A).pow(2).unwrap()));
    }
}
