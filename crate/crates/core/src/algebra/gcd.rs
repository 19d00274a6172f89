//! Multivariate polynomial gcd.
//!
//! Monomial and constant cases are handled directly. The general case
//! recurses on one variable: contents are computed recursively, primitive
//! parts go through a primitive pseudo-remainder sequence.

use super::gauss::Gaussian;
use super::poly::{Monomial, Poly};
use super::var::Var;

/// Monic gcd of two polynomials (`gcd(0, 0) = 0`).
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let m = ma.gcd(&mb);
    let a1 = a.div_monomial(&ma).expect("monomial content divides");
    let b1 = b.div_monomial(&mb).expect("monomial content divides");
    let g = gcd_no_monomial(&a1, &b1);
    g.mul_monomial(&m, &Gaussian::one()).monic()
}

/// Gcd of polynomials without a common monomial factor left to extract.
fn gcd_no_monomial(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() || a.is_monomial() || b.is_monomial() {
        // A monomial with no monomial factor shared by the other operand is
        // coprime to it once the monomial content has been separated; a
        // monomial can only share a monomial factor.
        let m = a.monomial_content().gcd(&b.monomial_content());
        return Poly::term(Gaussian::one(), m);
    }
    if a == b {
        return a.monic();
    }
    let va = a.vars();
    let vb = b.vars();
    // A variable present in only one operand: the gcd divides its content.
    if let Some(&x) = va.difference(&vb).next() {
        let c = content_in(a, x);
        return gcd(&c, b);
    }
    if let Some(&x) = vb.difference(&va).next() {
        let c = content_in(b, x);
        return gcd(a, &c);
    }
    // Recurse on the common variable of least combined degree.
    let x = *va
        .iter()
        .min_by_key(|v| (a.degree_in(**v) + b.degree_in(**v), v.index()))
        .expect("nonconstant polynomial has a variable");
    let ca = content_in(a, x);
    let cb = content_in(b, x);
    let c = gcd(&ca, &cb);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let g = match specialized_degree(&pa, &pb, x) {
        Some(0) => Poly::one(),
        Some(d) if d == pb.degree_in(x) && pa.div_exact(&pb).is_some() => pb.monic(),
        Some(d) if d == pa.degree_in(x) && pb.div_exact(&pa).is_some() => pa.monic(),
        _ => primitive_prs(pa, pb, x),
    };
    (&c * &g).monic()
}

/// Degree in `x` of the gcd after specialising every other variable at a
/// fixed point where neither leading coefficient vanishes. This bounds the
/// true gcd degree from above, so `Some(0)` proves coprimality of primitive
/// operands.
fn specialized_degree(a: &Poly, b: &Poly, x: Var) -> Option<u32> {
    let (da, db) = (a.degree_in(x), b.degree_in(x));
    for seed in 0..3i64 {
        let pt = |v: Var| {
            let k = v.index() as i64;
            Gaussian::complex((7 * k + 3 + 11 * seed) % 23 + 2, (5 * k + 1 + 3 * seed) % 13 - 6)
        };
        let ua = specialize(a, x, &pt);
        let ub = specialize(b, x, &pt);
        if ua.degree_in(x) != da || ub.degree_in(x) != db {
            continue;
        }
        return Some(univariate_gcd(ua, ub, x).degree_in(x));
    }
    None
}

fn specialize(p: &Poly, x: Var, pt: &dyn Fn(Var) -> Gaussian) -> Poly {
    Poly::from_terms(p.terms().iter().map(|(m, c)| {
        let mut k = c.clone();
        for &(v, e) in m.exponents() {
            if v != x {
                k = &k * &pt(v).pow(e);
            }
        }
        (Monomial::var(x, m.degree_in(x)), k)
    }))
}

/// Euclid over Q(i) for polynomials in the single variable `x`.
fn univariate_gcd(a: Poly, b: Poly, x: Var) -> Poly {
    let (mut f, mut g) = (a.monic(), b.monic());
    while !g.is_zero() {
        let mut r = f.clone();
        let dg = g.degree_in(x);
        let lg = g.leading_coeff().inv().expect("nonzero");
        while !r.is_zero() && r.degree_in(x) >= dg {
            let shift = r.degree_in(x) - dg;
            let q = &r.leading_coeff() * &lg;
            r = &r - &g.mul_monomial(&Monomial::var(x, shift), &q);
        }
        f = g;
        g = r.monic();
    }
    f
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `x`.
pub fn content_in(p: &Poly, x: Var) -> Poly {
    let coeffs = p.coeffs_in(x);
    let mut nonzero: Vec<&Poly> = coeffs.iter().filter(|c| !c.is_zero()).collect();
    // Start from the smallest coefficients: cheaper and often reaches 1 fast.
    nonzero.sort_by_key(|c| c.len());
    let mut g = Poly::zero();
    for c in nonzero {
        g = gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

pub fn primitive_part_in(p: &Poly, x: Var) -> Poly {
    if p.is_zero() {
        return Poly::zero();
    }
    let c = content_in(p, x);
    p.div_exact(&c).expect("content divides")
}

/// Pseudo-remainder of `a` by `b` in the variable `x`, both given as
/// coefficient vectors (index = degree). Returns the remainder.
fn prem(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r: Vec<Poly> = a.to_vec();
    trim(&mut r);
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = &*c * lb;
        }
        for (k, bk) in b.iter().enumerate() {
            let t = &lr * bk;
            r[k + shift] = &r[k + shift] - &t;
        }
        trim(&mut r);
    }
    r
}

fn trim(v: &mut Vec<Poly>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

/// Gcd of two polynomials primitive in `x`, via a primitive PRS.
fn primitive_prs(a: Poly, b: Poly, x: Var) -> Poly {
    let (mut f, mut g) = if a.degree_in(x) >= b.degree_in(x) { (a, b) } else { (b, a) };
    loop {
        if g.degree_in(x) == 0 {
            // g is primitive and free of x, hence a unit.
            return Poly::one();
        }
        let fc = f.coeffs_in(x);
        let gc = g.coeffs_in(x);
        let mut r = prem(&fc, &gc);
        trim(&mut r);
        if r.is_empty() {
            return g.monic();
        }
        if r.len() == 1 {
            return Poly::one();
        }
        let rp = Poly::from_coeffs_in(&r, x);
        f = g;
        g = primitive_part_in(&rp, x);
    }
}

/// Least common multiple, monic.
pub fn lcm(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let g = gcd(a, b);
    (&a.div_exact(&g).expect("gcd divides") * b).monic()
}

#[cfg(test)]
mod tests {
    use super::super::var::{A, A_BAR, B, Z};
    use super::*;

    fn v(x: Var) -> Poly {
        Poly::var(x)
    }

    #[test]
    fn gcd_of_products() {
        let f = &(&v(A) + &v(B)) * &(&v(Z) - &Poly::int(2));
        let g = &(&v(A) + &v(B)) * &(&v(A_BAR) + &v(Z));
        assert_eq!(gcd(&f, &g), (&v(A) + &v(B)).monic());
        let h = &f * &f;
        assert_eq!(gcd(&h, &f), f.monic());
    }

    #[test]
    fn gcd_with_gaussian_coefficients() {
        let i = Poly::constant(Gaussian::i());
        let f = &(&v(A) + &i) * &(&v(A) - &i);
        let g = &(&v(A) + &i) * &v(B);
        assert_eq!(gcd(&f, &g), &v(A) + &i);
    }

    #[test]
    fn coprime_gives_one() {
        let f = &v(A) + &Poly::int(1);
        let g = &v(A) + &Poly::int(2);
        assert!(gcd(&f, &g).is_one());
        assert_eq!(gcd(&v(A).pow(3), &v(A).pow(2)), v(A).pow(2));
    }
}
