//! Exact numbers in the biquadratic field ℚ(√3, √5).
//!
//! Every element is stored on the rational basis {1, √3, √5, √15}. The
//! multiplication table closes because √3·√5 = √15, √3·√15 = 3√5,
//! √5·√15 = 5√3 and √15² = 15.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use super::TaylorError;

/// Shorthand for a rational built from two machine integers.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Element `a + b√3 + c√5 + d√15` with rational components.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Qf {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
    pub d: BigRational,
}

impl Qf {
    pub fn new(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Self {
        Self { a, b, c, d }
    }

    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_rational(a: BigRational) -> Self {
        Self {
            a,
            b: BigRational::zero(),
            c: BigRational::zero(),
            d: BigRational::zero(),
        }
    }

    pub fn int(n: i64) -> Self {
        Self::from_rational(rat(n, 1))
    }

    pub fn frac(num: i64, den: i64) -> Self {
        Self::from_rational(rat(num, den))
    }

    /// `q·√3`
    pub fn sqrt3(q: BigRational) -> Self {
        Self { b: q, ..Self::zero() }
    }

    /// `q·√5`
    pub fn sqrt5(q: BigRational) -> Self {
        Self { c: q, ..Self::zero() }
    }

    /// `q·√15`
    pub fn sqrt15(q: BigRational) -> Self {
        Self { d: q, ..Self::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    /// True when all surd components vanish.
    pub fn is_rational(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Self {
            a: &self.a * q,
            b: &self.b * q,
            c: &self.c * q,
            d: &self.d * q,
        }
    }

    /// Division by a nonzero rational scalar.
    pub fn div_rational(&self, q: &BigRational) -> Result<Self, TaylorError> {
        if q.is_zero() {
            return Err(TaylorError::DivisionByZero);
        }
        Ok(self.scale(&q.recip()))
    }

    /// Reciprocal of a single-term element `q`, `q√3`, `q√5` or `q√15`.
    ///
    /// General inversion needs conjugates over two quadratic extensions and is
    /// not required anywhere in the Taylor-table algebra.
    pub fn recip_monomial(&self) -> Result<Self, TaylorError> {
        let terms = [&self.a, &self.b, &self.c, &self.d]
            .iter()
            .filter(|q| !q.is_zero())
            .count();
        if terms == 0 {
            return Err(TaylorError::DivisionByZero);
        }
        if terms > 1 {
            return Err(TaylorError::NotMonomial(self.to_string()));
        }
        // 1/(q√s) = √s/(s·q)
        Ok(if !self.a.is_zero() {
            Self::from_rational(self.a.recip())
        } else if !self.b.is_zero() {
            Self::sqrt3((&self.b * rat(3, 1)).recip())
        } else if !self.c.is_zero() {
            Self::sqrt5((&self.c * rat(5, 1)).recip())
        } else {
            Self::sqrt15((&self.d * rat(15, 1)).recip())
        })
    }

    /// Division by a single-term element.
    pub fn div_monomial(&self, divisor: &Qf) -> Result<Self, TaylorError> {
        Ok(self * &divisor.recip_monomial()?)
    }

    /// Nearest f64. Each component is rounded once and the surds are the
    /// correctly rounded library square roots.
    pub fn to_f64(&self) -> f64 {
        let f = |q: &BigRational| q.to_f64().unwrap_or(f64::NAN);
        let mut acc = f(&self.a);
        if !self.b.is_zero() {
            acc += f(&self.b) * 3f64.sqrt();
        }
        if !self.c.is_zero() {
            acc += f(&self.c) * 5f64.sqrt();
        }
        if !self.d.is_zero() {
            acc += f(&self.d) * 15f64.sqrt();
        }
        acc
    }
}

impl fmt::Display for Qf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = [
            (&self.a, ""),
            (&self.b, "√3"),
            (&self.c, "√5"),
            (&self.d, "√15"),
        ]
        .iter()
        .filter(|(q, _)| !q.is_zero())
        .map(|(q, s)| {
            if s.is_empty() {
                q.to_string()
            } else if q.is_one() {
                s.to_string()
            } else if (-*q).is_one() {
                format!("-{s}")
            } else {
                format!("{q}{s}")
            }
        })
        .collect();
        if parts.is_empty() {
            return write!(f, "0");
        }
        let mut out = parts[0].clone();
        for p in &parts[1..] {
            if let Some(rest) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
        write!(f, "{out}")
    }
}

/// Formats a rational the way the `taylor` report prints coefficients:
/// negatives parenthesised, integers without a denominator.
pub fn format_rational(q: &BigRational) -> String {
    let body = if q.denom().is_one() {
        q.numer().abs().to_string()
    } else {
        format!("{}/{}", q.numer().abs(), q.denom())
    };
    if q.is_negative() {
        format!("(-{body})")
    } else {
        body
    }
}

impl Add for &Qf {
    type Output = Qf;
    fn add(self, rhs: &Qf) -> Qf {
        Qf {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
            c: &self.c + &rhs.c,
            d: &self.d + &rhs.d,
        }
    }
}

impl Add for Qf {
    type Output = Qf;
    fn add(self, rhs: Qf) -> Qf {
        &self + &rhs
    }
}

impl AddAssign<&Qf> for Qf {
    fn add_assign(&mut self, rhs: &Qf) {
        self.a += &rhs.a;
        self.b += &rhs.b;
        self.c += &rhs.c;
        self.d += &rhs.d;
    }
}

impl Sub for &Qf {
    type Output = Qf;
    fn sub(self, rhs: &Qf) -> Qf {
        Qf {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
            c: &self.c - &rhs.c,
            d: &self.d - &rhs.d,
        }
    }
}

impl Sub for Qf {
    type Output = Qf;
    fn sub(self, rhs: Qf) -> Qf {
        &self - &rhs
    }
}

impl Neg for &Qf {
    type Output = Qf;
    fn neg(self) -> Qf {
        Qf {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }
}

impl Neg for Qf {
    type Output = Qf;
    fn neg(self) -> Qf {
        -&self
    }
}

impl Mul for &Qf {
    type Output = Qf;
    fn mul(self, rhs: &Qf) -> Qf {
        let (a1, b1, c1, d1) = (&self.a, &self.b, &self.c, &self.d);
        let (a2, b2, c2, d2) = (&rhs.a, &rhs.b, &rhs.c, &rhs.d);
        let three = rat(3, 1);
        let five = rat(5, 1);
        let fifteen = rat(15, 1);
        Qf {
            a: a1 * a2 + &three * (b1 * b2) + &five * (c1 * c2) + &fifteen * (d1 * d2),
            b: a1 * b2 + b1 * a2 + &five * (c1 * d2 + d1 * c2),
            c: a1 * c2 + c1 * a2 + &three * (b1 * d2 + d1 * b2),
            d: a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2,
        }
    }
}

impl Mul for Qf {
    type Output = Qf;
    fn mul(self, rhs: Qf) -> Qf {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s3() -> Qf {
        Qf::sqrt3(rat(1, 1))
    }
    fn s5() -> Qf {
        Qf::sqrt5(rat(1, 1))
    }
    fn s15() -> Qf {
        Qf::sqrt15(rat(1, 1))
    }

    #[test]
    fn multiplication_table() {
        assert_eq!(&s3() * &s3(), Qf::int(3));
        assert_eq!(&s5() * &s5(), Qf::int(5));
        assert_eq!(&s15() * &s15(), Qf::int(15));
        assert_eq!(&s3() * &s5(), s15());
        assert_eq!(&s3() * &s15(), Qf::sqrt5(rat(3, 1)));
        assert_eq!(&s5() * &s15(), Qf::sqrt3(rat(5, 1)));
    }

    #[test]
    fn monomial_reciprocals() {
        for x in [
            Qf::frac(-7, 3),
            Qf::sqrt3(rat(2, 1)),
            Qf::sqrt5(rat(1, 12)),
            Qf::sqrt15(rat(-4, 9)),
        ] {
            assert_eq!(&x * &x.recip_monomial().unwrap(), Qf::one());
        }
        // 1/(2√3) = √3/6
        assert_eq!(
            Qf::sqrt3(rat(2, 1)).recip_monomial().unwrap(),
            Qf::sqrt3(rat(1, 6))
        );
        assert!(matches!(
            (Qf::one() + s3()).recip_monomial(),
            Err(TaylorError::NotMonomial(_))
        ));
        assert!(matches!(
            Qf::zero().recip_monomial(),
            Err(TaylorError::DivisionByZero)
        ));
    }

    #[test]
    fn demotion() {
        let x = Qf::new(rat(1, 2), rat(1, 1), rat(-1, 1), rat(2, 1));
        let want = 0.5 + 3f64.sqrt() - 5f64.sqrt() + 2.0 * 15f64.sqrt();
        assert!((x.to_f64() - want).abs() < 1e-15);
        assert_eq!(Qf::sqrt5(rat(1, 1)).to_f64(), 5f64.sqrt());
    }

    #[test]
    fn display_forms() {
        assert_eq!(Qf::zero().to_string(), "0");
        assert_eq!((Qf::one() - s15()).to_string(), "1 - √15");
        assert_eq!(Qf::sqrt3(rat(1, 6)).to_string(), "1/6√3");
        assert_eq!(format_rational(&rat(-2, 5)), "(-2/5)");
        assert_eq!(format_rational(&rat(0, 1)), "0");
        assert_eq!(format_rational(&rat(-1, 1)), "(-1)");
        assert_eq!(format_rational(&rat(1, 96)), "1/96");
    }

    fn arb_qf() -> impl Strategy<Value = Qf> {
        let r = (-50i64..50, 1i64..20).prop_map(|(n, d)| rat(n, d));
        (r.clone(), r.clone(), r.clone(), r).prop_map(|(a, b, c, d)| Qf::new(a, b, c, d))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn field_axioms(x in arb_qf(), y in arb_qf(), z in arb_qf()) {
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&x + &y, &y + &x);
            prop_assert_eq!(&(&x - &x), &Qf::zero());
        }

        #[test]
        fn demotion_is_a_ring_map(x in arb_qf(), y in arb_qf()) {
            let lhs = (&x * &y).to_f64();
            let rhs = x.to_f64() * y.to_f64();
            prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs()));
        }
    }
}
