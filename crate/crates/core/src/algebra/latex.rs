//! LaTeX rendering of scalars.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::gauss::Gaussian;
use super::poly::{Monomial, Poly};
use super::ratfn::RatFn;
use super::var::Var;

fn base_latex(name: &str) -> String {
    let greek = [("eps", "\\varepsilon"), ("rho", "\\rho"), ("lambda", "\\lambda")];
    if let Some((_, g)) = greek.iter().find(|(n, _)| *n == name) {
        return g.to_string();
    }
    let split = name.find(|c: char| c.is_ascii_digit());
    match split {
        Some(k) if k > 0 && name[k..].chars().all(|c| c.is_ascii_digit()) => {
            format!("{}_{{{}}}", &name[..k], &name[k..])
        }
        _ if name.len() > 1 => format!("\\mathrm{{{name}}}"),
        _ => name.to_string(),
    }
}

pub fn var_latex(v: Var) -> String {
    let base = base_latex(&v.base_name());
    if v.is_conjugate_name() {
        // Put the bar on the letter, not on the subscript.
        match base.find('_') {
            Some(k) => format!("\\bar{{{}}}{}", &base[..k], &base[k..]),
            None => format!("\\bar{{{base}}}"),
        }
    } else {
        base
    }
}

fn rat_latex(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", r.numer(), r.denom())
    }
}

/// (negative, magnitude) where the magnitude is empty for a unit.
fn coeff_latex(c: &Gaussian) -> (bool, String) {
    if c.im.is_zero() {
        let neg = c.re.is_negative();
        let m = c.re.abs();
        return (neg, if m.is_one() { String::new() } else { rat_latex(&m) });
    }
    if c.re.is_zero() {
        let neg = c.im.is_negative();
        let m = c.im.abs();
        return (neg, if m.is_one() { "i".into() } else { format!("{}i", rat_latex(&m)) });
    }
    let sign = if c.im.is_negative() { "-" } else { "+" };
    let im = c.im.abs();
    let imstr = if im.is_one() { "i".to_string() } else { format!("{}i", rat_latex(&im)) };
    (false, format!("\\left({}{}{}\\right)", rat_latex(&c.re), sign, imstr))
}

fn monomial_latex(m: &Monomial) -> String {
    m.exponents()
        .iter()
        .map(|&(v, e)| if e == 1 { var_latex(v) } else { format!("{}^{{{}}}", var_latex(v), e) })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn poly_latex(p: &Poly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().iter().enumerate() {
        let (neg, mag) = coeff_latex(c);
        let body = match (m.is_one(), mag.is_empty()) {
            (true, true) => "1".to_string(),
            (true, false) => mag,
            (false, true) => monomial_latex(m),
            (false, false) => format!("{} {}", mag, monomial_latex(m)),
        };
        match (k == 0, neg) {
            (true, false) => out.push_str(&body),
            (true, true) => {
                out.push('-');
                out.push_str(&body)
            }
            (false, false) => {
                out.push_str(" + ");
                out.push_str(&body)
            }
            (false, true) => {
                out.push_str(" - ");
                out.push_str(&body)
            }
        }
    }
    out
}

pub fn ratfn_latex(f: &RatFn) -> String {
    if f.is_polynomial() {
        return poly_latex(f.num());
    }
    format!("\\frac{{{}}}{{{}}}", poly_latex(f.num()), poly_latex(f.den()))
}

#[cfg(test)]
mod tests {
    use super::super::parse::parse_scalar;
    use super::*;

    #[test]
    fn renders_fractions_and_bars() {
        let f = parse_scalar("conj(a1)*a/b^2").unwrap();
        assert_eq!(ratfn_latex(&f), "\\frac{a \\bar{a}_{1}}{b^{2}}");
        assert_eq!(ratfn_latex(&parse_scalar("-3/4*i*eps").unwrap()), "-\\frac{3}{4}i \\varepsilon");
    }
}
