//! Gaussian rationals `p + q i` with `p, q` arbitrary-precision rationals.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Gaussian {
    pub re: BigRational,
    pub im: BigRational,
}

impl Gaussian {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Gaussian { re, im }
    }

    pub fn zero() -> Self {
        Gaussian { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        Gaussian::int(1)
    }

    pub fn i() -> Self {
        Gaussian { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn int(n: i64) -> Self {
        Gaussian { re: BigRational::from_integer(n.into()), im: BigRational::zero() }
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        Gaussian { re: BigRational::new(p.into(), q.into()), im: BigRational::zero() }
    }

    pub fn complex(p: i64, q: i64) -> Self {
        Gaussian { re: BigRational::from_integer(p.into()), im: BigRational::from_integer(q.into()) }
    }

    pub fn real(re: BigRational) -> Self {
        Gaussian { re, im: BigRational::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Gaussian { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `|z|^2`, a non-negative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Gaussian { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Gaussian::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// A canonical "unit-like" factor used for content normalisation: the
    /// number is split as `content * primitive` with a positive rational
    /// content. Returned value is the content.
    pub fn rational_content(&self) -> BigRational {
        let g_num = self.re.numer().gcd(self.im.numer());
        let l_den = self.re.denom().lcm(self.im.denom());
        BigRational::new(g_num, l_den)
    }

    /// Sign-sensitive comparison key used to pick a deterministic
    /// representative; returns true when the number is "positive" in the
    /// sense re > 0, or re == 0 and im > 0.
    pub fn is_positive_like(&self) -> bool {
        self.re.is_positive() || (self.re.is_zero() && self.im.is_positive())
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        (self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }

    /// Integer representation when both parts are integers.
    pub fn as_integer_pair(&self) -> Option<(BigInt, BigInt)> {
        if self.re.is_integer() && self.im.is_integer() {
            Some((self.re.to_integer(), self.im.to_integer()))
        } else {
            None
        }
    }
}

impl From<i64> for Gaussian {
    fn from(n: i64) -> Self {
        Gaussian::int(n)
    }
}

impl From<BigRational> for Gaussian {
    fn from(r: BigRational) -> Self {
        Gaussian::real(r)
    }
}

impl<'a> Add<&'a Gaussian> for &'a Gaussian {
    type Output = Gaussian;
    fn add(self, o: &Gaussian) -> Gaussian {
        Gaussian { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl<'a> Sub<&'a Gaussian> for &'a Gaussian {
    type Output = Gaussian;
    fn sub(self, o: &Gaussian) -> Gaussian {
        Gaussian { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl<'a> Mul<&'a Gaussian> for &'a Gaussian {
    type Output = Gaussian;
    fn mul(self, o: &Gaussian) -> Gaussian {
        if self.im.is_zero() && o.im.is_zero() {
            return Gaussian::real(&self.re * &o.re);
        }
        Gaussian {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl<'a> Div<&'a Gaussian> for &'a Gaussian {
    type Output = Gaussian;
    fn div(self, o: &Gaussian) -> Gaussian {
        if o.im.is_zero() {
            return Gaussian { re: &self.re / &o.re, im: &self.im / &o.re };
        }
        self * &o.inv().expect("division by zero Gaussian rational")
    }
}

impl Neg for &Gaussian {
    type Output = Gaussian;
    fn neg(self) -> Gaussian {
        Gaussian { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl Neg for Gaussian {
    type Output = Gaussian;
    fn neg(self) -> Gaussian {
        Gaussian { re: -self.re, im: -self.im }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Gaussian> for Gaussian {
            type Output = Gaussian;
            fn $m(self, o: Gaussian) -> Gaussian {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&Gaussian> for Gaussian {
    fn add_assign(&mut self, o: &Gaussian) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&Gaussian> for Gaussian {
    fn sub_assign(&mut self, o: &Gaussian) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Gaussian {
    /// Renders as `p`, `q*i`, `i`, `-i` or `(p+q*i)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return f.write_str(&fmt_rat(&self.re));
        }
        let im = if self.im.is_one() {
            "i".to_string()
        } else if (-self.im.clone()).is_one() {
            "-i".to_string()
        } else {
            format!("{}*i", fmt_rat(&self.im))
        };
        if self.re.is_zero() {
            return f.write_str(&im);
        }
        let sep = if im.starts_with('-') { "" } else { "+" };
        write!(f, "({}{}{})", fmt_rat(&self.re), sep, im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_operations() {
        let a = Gaussian::complex(1, 2);
        let b = Gaussian::complex(3, -1);
        assert_eq!(&a * &b, Gaussian::complex(5, 5));
        assert_eq!(&(&a / &b) * &b, a);
        assert_eq!(&Gaussian::i() * &Gaussian::i(), Gaussian::int(-1));
        assert_eq!(a.conj().conj(), a);
        assert_eq!(Gaussian::complex(0, 2).pow(3), Gaussian::complex(0, -8));
    }

    #[test]
    fn display_forms() {
        assert_eq!(Gaussian::ratio(-3, 4).to_string(), "-3/4");
        assert_eq!(Gaussian::i().to_string(), "i");
        assert_eq!(Gaussian::complex(1, -1).to_string(), "(1-i)");
        assert_eq!(Gaussian::complex(0, 2).to_string(), "2*i");
    }
}
