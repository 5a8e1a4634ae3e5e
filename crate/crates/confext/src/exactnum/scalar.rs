use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{ArithError, Rational};

/// An element `a + b·√d` of ℚ or of a real quadratic field ℚ(√d).
///
/// `d` is squarefree and `d = 0` exactly when `b = 0`, so equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    a: Rational,
    b: Rational,
    d: u64,
}

/// Splits `n > 0` as `s²·d` with `d` squarefree. Trial division, fine for the
/// discriminants that occur here.
pub fn squarefree_decompose(n: &BigInt) -> (BigInt, BigInt) {
    assert!(n.is_positive());
    let mut rest = n.clone();
    let mut square = BigInt::one();
    let mut free = BigInt::one();
    let mut p = BigInt::from(2u32);
    while &p * &p <= rest {
        let mut e = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        for _ in 0..e / 2 {
            square *= &p;
        }
        if e % 2 == 1 {
            free *= &p;
        }
        p += 1u32;
    }
    free *= rest;
    (square, free)
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from(Rational::one())
    }

    pub fn int(n: i64) -> Self {
        Scalar::from(Rational::from_int(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Scalar::from(Rational::new(n, d))
    }

    /// `a + b√d` with `d` reduced to its squarefree part first.
    pub fn quadratic(a: Rational, b: Rational, d: u64) -> Self {
        if d == 0 || b.is_zero() {
            return Scalar::from(a);
        }
        let (s, free) = squarefree_decompose(&BigInt::from(d));
        let b = &b * &Rational::from_bigint(s);
        let free = free.to_u64().expect("radicand fits u64");
        if free == 1 {
            return Scalar::from(&a + &b);
        }
        Scalar { a, b, d: free }
    }

    /// Square root of a non-negative rational, normalized (√76 = 2√19).
    pub fn sqrt_of(r: &Rational) -> Result<Self, ArithError> {
        if r.is_negative() {
            return Err(ArithError::NegativeRadicand(r.to_string()));
        }
        if r.is_zero() {
            return Ok(Scalar::zero());
        }
        let n = r.numer() * r.denom();
        let (s, free) = squarefree_decompose(&n);
        let coeff = Rational::from_bigints(s, r.denom());
        let d = free
            .to_u64()
            .ok_or_else(|| ArithError::Parse(format!("radicand too large: {free}")))?;
        if d == 1 {
            return Ok(Scalar::from(coeff));
        }
        Ok(Scalar { a: Rational::zero(), b: coeff, d })
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn radical_part(&self) -> &Rational {
        &self.b
    }

    /// The squarefree tag, 0 for rationals.
    pub fn ext(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.d == 0
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        if self.d == 0 {
            Some(&self.a)
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.d == 0 && self.a.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.d == 0 && self.a.is_one()
    }

    fn tag(x: &Scalar, y: &Scalar) -> Result<u64, ArithError> {
        match (x.d, y.d) {
            (0, e) | (e, 0) => Ok(e),
            (e, f) if e == f => Ok(e),
            (e, f) => Err(ArithError::MixedExtension(e, f)),
        }
    }

    fn make(a: Rational, b: Rational, d: u64) -> Scalar {
        if b.is_zero() {
            Scalar { a, b, d: 0 }
        } else {
            Scalar { a, b, d }
        }
    }

    pub fn try_add(&self, o: &Scalar) -> Result<Scalar, ArithError> {
        let d = Self::tag(self, o)?;
        if d == 0 {
            return Ok(Scalar::from(&self.a + &o.a));
        }
        Ok(Self::make(&self.a + &o.a, &self.b + &o.b, d))
    }

    pub fn try_sub(&self, o: &Scalar) -> Result<Scalar, ArithError> {
        let d = Self::tag(self, o)?;
        if d == 0 {
            return Ok(Scalar::from(&self.a - &o.a));
        }
        Ok(Self::make(&self.a - &o.a, &self.b - &o.b, d))
    }

    pub fn try_mul(&self, o: &Scalar) -> Result<Scalar, ArithError> {
        let d = Self::tag(self, o)?;
        if d == 0 {
            return Ok(Scalar::from(&self.a * &o.a));
        }
        let dr = Rational::from_int(d as i64);
        let a = &(&self.a * &o.a) + &(&(&self.b * &o.b) * &dr);
        let b = &(&self.a * &o.b) + &(&self.b * &o.a);
        Ok(Self::make(a, b, d))
    }

    /// Field norm `a² − d·b²` (equals `a²` for rationals).
    pub fn norm(&self) -> Rational {
        let dr = Rational::from_int(self.d as i64);
        &(&self.a * &self.a) - &(&(&self.b * &self.b) * &dr)
    }

    pub fn conj(&self) -> Scalar {
        Self::make(self.a.clone(), -&self.b, self.d)
    }

    pub fn try_inv(&self) -> Result<Scalar, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        if self.d == 0 {
            return Ok(Scalar::from(self.a.recip()?));
        }
        let n = self.norm().recip()?;
        Ok(Self::make(&self.a * &n, -&(&self.b * &n), self.d))
    }

    pub fn try_div(&self, o: &Scalar) -> Result<Scalar, ArithError> {
        Self::tag(self, o)?;
        self.try_mul(&o.try_inv()?)
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact sign, for ordering real quadratic numbers.
    pub fn signum(&self) -> i32 {
        if self.d == 0 {
            return self.a.signum();
        }
        let sa = self.a.signum();
        let sb = self.b.signum();
        if sa == 0 || sa == sb {
            return if sa == 0 { sb } else { sa };
        }
        // a and b√d have opposite signs: compare a² with d·b².
        let dr = Rational::from_int(self.d as i64);
        let lhs = &self.a * &self.a;
        let rhs = &(&self.b * &self.b) * &dr;
        match lhs.cmp(&rhs) {
            std::cmp::Ordering::Greater => sa,
            std::cmp::Ordering::Less => sb,
            std::cmp::Ordering::Equal => 0,
        }
    }
}

impl From<Rational> for Scalar {
    fn from(a: Rational) -> Self {
        Scalar { a, b: Rational::zero(), d: 0 }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

macro_rules! scalar_op {
    ($tr:ident, $m:ident, $try:ident) => {
        impl<'a> $tr<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            /// Panics on mixed extensions or division by zero; the `try_*`
            /// methods return errors instead.
            fn $m(self, rhs: &Scalar) -> Scalar {
                match self.$try(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("scalar arithmetic: {e}"),
                }
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}
scalar_op!(Add, add, try_add);
scalar_op!(Sub, sub, try_sub);
scalar_op!(Mul, mul, try_mul);
scalar_op!(Div, div, try_div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::make(-&self.a, -&self.b, self.d)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d == 0 {
            return write!(f, "{}", self.a);
        }
        if !self.a.is_zero() {
            write!(f, "{}", self.a)?;
            if !self.b.is_negative() {
                write!(f, "+")?;
            }
        }
        write!(f, "{}*sqrt({})", self.b, self.d)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Scalar {
    type Err = ArithError;

    /// Accepts a signed sum of terms, each a rational `p/q`, `sqrt(d)`,
    /// or `p/q*sqrt(d)`; e.g. `-5/2+1/2*sqrt(19)`.
    fn from_str(s: &str) -> Result<Self, ArithError> {
        let src: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if src.is_empty() {
            return Err(ArithError::Parse(s.to_string()));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = src.as_bytes();
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'(' && bytes[i - 1] != b'/' && bytes[i - 1] != b'*' {
                terms.push(&src[start..i]);
                start = i;
            }
        }
        terms.push(&src[start..]);
        let mut acc = Scalar::zero();
        for t in terms {
            acc = acc.try_add(&parse_term(t).map_err(|_| ArithError::Parse(s.to_string()))?)?;
        }
        Ok(acc)
    }
}

fn parse_term(t: &str) -> Result<Scalar, ArithError> {
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let v = if let Some(pos) = body.find("sqrt(") {
        let coeff = match body[..pos].strip_suffix('*') {
            Some(c) => c.parse::<Rational>()?,
            None if pos == 0 => Rational::one(),
            None => return Err(ArithError::Parse(t.to_string())),
        };
        let inner = body[pos + 5..]
            .strip_suffix(')')
            .ok_or_else(|| ArithError::Parse(t.to_string()))?;
        let r: Rational = inner.parse()?;
        Scalar::sqrt_of(&r)?.try_mul(&Scalar::from(coeff))?
    } else {
        Scalar::from(body.parse::<Rational>()?)
    };
    Ok(if neg { -v } else { v })
}

/// Least common multiple of the denominators of a list of rationals.
pub fn denominator_lcm<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(&x.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Scalar {
        x.parse().unwrap()
    }

    #[test]
    fn componentwise_addition() {
        assert_eq!(s("1/2") + s("1/2+sqrt(19)"), s("1+sqrt(19)"));
    }

    #[test]
    fn conjugate_product_is_norm() {
        assert_eq!(s("-5/2+1/2*sqrt(19)") * s("-5/2-1/2*sqrt(19)"), s("3/2"));
    }

    #[test]
    fn inverse_of_radical() {
        assert_eq!(s("sqrt(19)").try_inv().unwrap(), s("1/19*sqrt(19)"));
    }

    #[test]
    fn radicands_normalize() {
        assert_eq!(s("sqrt(76)"), s("2*sqrt(19)"));
        assert_eq!(s("sqrt(9/4)"), s("3/2"));
        assert_eq!(s("sqrt(1/2)").to_string(), "1/2*sqrt(2)");
    }

    #[test]
    fn mixed_extensions_are_rejected() {
        assert_eq!(
            s("sqrt(2)").try_add(&s("sqrt(3)")),
            Err(ArithError::MixedExtension(2, 3))
        );
        assert_eq!(Scalar::zero().try_inv(), Err(ArithError::DivisionByZero));
    }

    #[test]
    fn display_round_trips() {
        for x in ["3/2", "-5/2-1/2*sqrt(19)", "7/2+1/2*sqrt(19)", "1/19*sqrt(19)"] {
            assert_eq!(s(x).to_string(), x);
        }
    }

    #[test]
    fn sign_of_quadratic_numbers() {
        assert_eq!(s("-5/2+1/2*sqrt(19)").signum(), -1);
        assert_eq!(s("-4+sqrt(19)").signum(), 1);
        assert_eq!(s("5-sqrt(19)").signum(), 1);
    }
}
