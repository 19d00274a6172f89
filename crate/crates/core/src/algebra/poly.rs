//! Sparse multivariate polynomials over the Gaussian rationals.
//!
//! Monomials are ordered lexicographically by variable index: the variable
//! with the smallest index is the most significant. Terms are stored in
//! descending order, so the first term is the leading term.

use std::collections::{BTreeMap, BTreeSet};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use smallvec::SmallVec;

use super::gauss::Gaussian;
use super::var::Var;

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(pub(crate) SmallVec<[(Var, u32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: Var, e: u32) -> Self {
        if e == 0 {
            return Monomial::one();
        }
        let mut s = SmallVec::new();
        s.push((v, e));
        Monomial(s)
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut m = Monomial::one();
        for (v, e) in pairs {
            m = m.mul(&Monomial::var(v, e));
        }
        m
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponents(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.0.iter().find(|(w, _)| *w == v).map(|(_, e)| *e).unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &o.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / o` when `o` divides `self`.
    pub fn div(&self, o: &Monomial) -> Option<Monomial> {
        let mut out: SmallVec<[(Var, u32); 4]> = SmallVec::new();
        let mut j = 0;
        for &(v, e) in &self.0 {
            if j < o.0.len() && o.0[j].0 == v {
                let f = o.0[j].1;
                if f > e {
                    return None;
                }
                if e > f {
                    out.push((v, e - f));
                }
                j += 1;
            } else if j < o.0.len() && o.0[j].0 < v {
                return None;
            } else {
                out.push((v, e));
            }
        }
        if j < o.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Componentwise minimum of exponents.
    pub fn gcd(&self, o: &Monomial) -> Monomial {
        let mut out = SmallVec::new();
        for &(v, e) in &self.0 {
            let f = o.degree_in(v);
            if f > 0 {
                out.push((v, e.min(f)));
            }
        }
        Monomial(out)
    }

    pub fn without(&self, v: Var) -> Monomial {
        Monomial(self.0.iter().copied().filter(|(w, _)| *w != v).collect())
    }

    pub fn conj(&self) -> Monomial {
        Monomial::from_pairs(self.0.iter().map(|&(v, e)| (v.conj(), e)))
    }

    pub fn weight(&self) -> i32 {
        self.0.iter().map(|&(v, e)| v.weight() * e as i32).sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        let (a, b) = (&self.0, &o.0);
        let mut i = 0;
        loop {
            match (a.get(i), b.get(i)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => {
                    if va != vb {
                        // The one containing the more significant variable wins.
                        return if va < vb { Ordering::Greater } else { Ordering::Less };
                    }
                    if ea != eb {
                        return ea.cmp(&eb);
                    }
                }
            }
            i += 1;
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&(v, e)| if e == 1 { v.name() } else { format!("{}^{}", v.name(), e) })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    terms: Vec<(Monomial, Gaussian)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Gaussian::one())
    }

    pub fn constant(c: Gaussian) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(Monomial::one(), c)] }
        }
    }

    pub fn int(n: i64) -> Self {
        Poly::constant(Gaussian::int(n))
    }

    pub fn var(v: Var) -> Self {
        Poly { terms: vec![(Monomial::var(v, 1), Gaussian::one())] }
    }

    pub fn term(c: Gaussian, m: Monomial) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    /// Builds a polynomial from arbitrary (possibly repeated) terms.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Gaussian)>) -> Self {
        let mut map: BTreeMap<Monomial, Gaussian> = BTreeMap::new();
        for (m, c) in terms {
            match map.get_mut(&m) {
                Some(acc) => *acc += &c,
                None => {
                    map.insert(m, c);
                }
            }
        }
        Poly { terms: map.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn terms(&self) -> &[(Monomial, Gaussian)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn as_constant(&self) -> Option<Gaussian> {
        if self.terms.is_empty() {
            Some(Gaussian::zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&(Monomial, Gaussian)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> Gaussian {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_else(Gaussian::zero)
    }

    /// Coefficient of an exact monomial.
    pub fn coeff(&self, m: &Monomial) -> Gaussian {
        self.terms.iter().find(|(n, _)| n == m).map(|t| t.1.clone()).unwrap_or_else(Gaussian::zero)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut s = BTreeSet::new();
        for (m, _) in &self.terms {
            for &(v, _) in m.exponents() {
                s.insert(v);
            }
        }
        s
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.iter().any(|(m, _)| m.degree_in(v) > 0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree_in(v)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.total_degree()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Gaussian) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        Poly { terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Gaussian) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(n, d)| (n.mul(m), d * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Poly {
        if e == 0 {
            return Poly::one();
        }
        if self.is_monomial() {
            let (m, c) = &self.terms[0];
            let mm = Monomial(m.0.iter().map(|&(v, f)| (v, f * e)).collect());
            return Poly::term(c.pow(e), mm);
        }
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self, v: Var) -> Poly {
        let mut out = Vec::new();
        for (m, c) in &self.terms {
            let e = m.degree_in(v);
            if e == 0 {
                continue;
            }
            let nm = Monomial(
                m.0.iter().filter_map(|&(w, f)| if w == v { (f > 1).then_some((w, f - 1)) } else { Some((w, f)) }).collect(),
            );
            out.push((nm, c * &Gaussian::int(e as i64)));
        }
        // Differentiation can reorder monomials, so rebuild.
        Poly::from_terms(out)
    }

    pub fn conj(&self) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.conj(), c.conj())))
    }

    /// Coefficients with respect to `v`: entry `k` is the coefficient of `v^k`.
    pub fn coeffs_in(&self, v: Var) -> Vec<Poly> {
        let d = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Monomial, Gaussian)>> = vec![Vec::new(); d + 1];
        for (m, c) in &self.terms {
            buckets[m.degree_in(v) as usize].push((m.without(v), c.clone()));
        }
        // Removing a variable keeps the relative order within a bucket.
        buckets.into_iter().map(|terms| Poly { terms }).collect()
    }

    pub fn from_coeffs_in(coeffs: &[Poly], v: Var) -> Poly {
        let mut terms = Vec::new();
        for (k, c) in coeffs.iter().enumerate() {
            let vm = Monomial::var(v, k as u32);
            for (m, g) in &c.terms {
                terms.push((m.mul(&vm), g.clone()));
            }
        }
        Poly::from_terms(terms)
    }

    /// Monomial dividing every term (componentwise minimum exponent).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        let Some((first, _)) = it.next() else { return Monomial::one() };
        let mut g = first.clone();
        for (m, _) in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        g
    }

    pub fn div_monomial(&self, m: &Monomial) -> Option<Poly> {
        if m.is_one() {
            return Some(self.clone());
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (n, c) in &self.terms {
            terms.push((n.div(m)?, c.clone()));
        }
        Some(Poly { terms })
    }

    /// Scales so that the leading coefficient is one.
    pub fn monic(&self) -> Poly {
        match self.terms.first() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if d.is_monomial() {
            let (m, c) = &d.terms[0];
            let inv = c.inv()?;
            let mut terms = Vec::with_capacity(self.terms.len());
            for (n, g) in &self.terms {
                terms.push((n.div(m)?, g * &inv));
            }
            return Some(Poly { terms });
        }
        let (dm, dc) = &d.terms[0];
        let dinv = dc.inv()?;
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((lm, lc)) = rem.terms.first().cloned() {
            let qm = lm.div(dm)?;
            let qc = &lc * &dinv;
            rem = &rem - &d.mul_monomial(&qm, &qc);
            quot.push((qm, qc));
        }
        // Quotient terms are produced in descending order.
        Some(Poly { terms: quot })
    }

    /// Substitutes polynomials for variables.
    pub fn substitute(&self, map: &dyn Fn(Var) -> Option<Poly>) -> Poly {
        let mut cache: BTreeMap<(Var, u32), Poly> = BTreeMap::new();
        let mut acc: Vec<(Monomial, Gaussian)> = Vec::new();
        let mut touched = false;
        let mut partial = Poly::zero();
        for (m, c) in &self.terms {
            let mut kept = Monomial::one();
            let mut factor: Option<Poly> = None;
            for &(v, e) in m.exponents() {
                match map(v) {
                    None => kept = kept.mul(&Monomial::var(v, e)),
                    Some(p) => {
                        let pe = cache.entry((v, e)).or_insert_with(|| p.pow(e)).clone();
                        factor = Some(match factor {
                            None => pe,
                            Some(f) => &f * &pe,
                        });
                    }
                }
            }
            match factor {
                None => acc.push((kept, c.clone())),
                Some(f) => {
                    touched = true;
                    partial = &partial + &f.mul_monomial(&kept, c);
                }
            }
        }
        if !touched {
            return self.clone();
        }
        &Poly::from_terms(acc) + &partial
    }

    pub fn eval_partial(&self, v: Var, value: &Gaussian) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| {
            let e = m.degree_in(v);
            (m.without(v), c * &value.pow(e))
        }))
    }

    /// Sum of the weights of the variables; `Some(w)` when homogeneous.
    pub fn homogeneous_weight(&self) -> Option<i32> {
        let mut w = None;
        for (m, _) in &self.terms {
            let mw = m.weight();
            match w {
                None => w = Some(mw),
                Some(x) if x != mw => return None,
                _ => {}
            }
        }
        w
    }
}

fn merge(a: &[(Monomial, Gaussian)], b: &[(Monomial, Gaussian)], negate_b: bool) -> Vec<(Monomial, Gaussian)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let nb = |c: &Gaussian| if negate_b { -c } else { c.clone() };
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push((b[j].0.clone(), nb(&b[j].1)));
                j += 1;
            }
            Ordering::Equal => {
                let c = if negate_b { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                if !c.is_zero() {
                    out.push((a[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    out.extend(b[j..].iter().map(|(m, c)| (m.clone(), nb(c))));
    out
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        Poly { terms: merge(&self.terms, &o.terms, false) }
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        Poly { terms: merge(&self.terms, &o.terms, true) }
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if o.is_monomial() {
            return self.mul_monomial(&o.terms[0].0, &o.terms[0].1);
        }
        if self.is_monomial() {
            return o.mul_monomial(&self.terms[0].0, &self.terms[0].1);
        }
        let mut map: BTreeMap<Monomial, Gaussian> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let m = m1.mul(m2);
                let c = c1 * c2;
                match map.get_mut(&m) {
                    Some(acc) => *acc += &c,
                    None => {
                        map.insert(m, c);
                    }
                }
            }
        }
        Poly { terms: map.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect() }
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

macro_rules! forward_owned_poly {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, o: Poly) -> Poly {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned_poly!(Add, add);
forward_owned_poly!(Sub, sub);
forward_owned_poly!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl From<Var> for Poly {
    fn from(v: Var) -> Self {
        Poly::var(v)
    }
}

impl From<Gaussian> for Poly {
    fn from(c: Gaussian) -> Self {
        Poly::constant(c)
    }
}

/// Splits a coefficient into a sign and a rendering of its magnitude.
/// The magnitude is empty when it equals one and a monomial follows.
pub(crate) fn split_coeff(c: &Gaussian) -> (bool, String) {
    use num_traits::Signed;
    if c.is_real() {
        let neg = c.re.is_negative();
        let mag = Gaussian::real(c.re.abs());
        return (neg, mag.to_string());
    }
    if c.re == num_rational::BigRational::from_integer(0.into()) {
        let neg = c.im.is_negative();
        let mag = Gaussian::new(c.re.clone(), c.im.abs());
        return (neg, mag.to_string());
    }
    (false, c.to_string())
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let (neg, mag) = split_coeff(c);
            let body = if m.is_one() {
                mag
            } else if mag == "1" {
                m.to_string()
            } else {
                format!("{mag}*{m}")
            };
            match (first, neg) {
                (true, false) => f.write_str(&body)?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::var::{A, B, Z, Z_BAR};
    use super::*;

    #[test]
    fn lex_order_prefers_smaller_index() {
        let a = Monomial::var(A, 1);
        let b3 = Monomial::var(B, 3);
        assert!(a > b3);
        assert!(Monomial::var(A, 2) > a.mul(&b3));
        assert!(Monomial::one() < b3);
    }

    #[test]
    fn ring_identities() {
        let z = Poly::var(Z);
        let zb = Poly::var(Z_BAR);
        let p = &(&z + &zb) * &(&z - &zb);
        let q = &z.pow(2) - &zb.pow(2);
        assert_eq!(p, q);
        assert_eq!(p.div_exact(&(&z + &zb)).unwrap(), &z - &zb);
        assert!(p.div_exact(&(&z + &Poly::int(1))).is_none());
        assert_eq!(z.pow(3).derivative(Z), z.pow(2).scale(&Gaussian::int(3)));
    }

    #[test]
    fn conj_maps_partners() {
        let p = &Poly::var(A).scale(&Gaussian::i()) * &Poly::var(Z).pow(2);
        let q = p.conj();
        assert_eq!(q.to_string(), "-i*conj(a)*conj(z)^2");
        assert_eq!(q.conj(), p);
    }

    #[test]
    fn univariate_view_roundtrip() {
        let p = &(&Poly::var(A) * &Poly::var(Z).pow(2)) + &Poly::var(B);
        let c = p.coeffs_in(Z);
        assert_eq!(c.len(), 3);
        assert_eq!(Poly::from_coeffs_in(&c, Z), p);
    }
}
