use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::scalar::denominator_lcm;
use super::{ArithError, Rational, Scalar};

/// Dense univariate polynomial over ℚ, coefficients in ascending degree.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| Rational::from_int(c)).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: vec![] }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    /// `x − r`.
    pub fn linear_root(r: &Rational) -> Self {
        Self::new(vec![-r, Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn add(&self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| &self.coeff(i) - &o.coeff(i)).collect())
    }

    pub fn scale(&self, c: &Rational) -> UniPoly {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::new(out)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn eval_scalar(&self, x: &Scalar) -> Result<Scalar, ArithError> {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.try_mul(x)?.try_add(&Scalar::from(c.clone()))?;
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> UniPoly {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &Rational::from_int(i as i64))
                .collect(),
        )
    }

    pub fn div_rem(&self, d: &UniPoly) -> Result<(UniPoly, UniPoly), ArithError> {
        let dd = d.degree().ok_or(ArithError::DivisionByZero)?;
        let lead_inv = d.lead().recip()?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1;
            let c = &rem[k] * &lead_inv;
            if !c.is_zero() {
                for (i, dc) in d.coeffs.iter().enumerate() {
                    let idx = k - dd + i;
                    rem[idx] = &rem[idx] - &(&c * dc);
                }
                quot[k - dd] = c;
            }
            rem.pop();
        }
        Ok((Self::new(quot), Self::new(rem)))
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().recip().expect("nonzero lead"))
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, o: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).expect("nonzero divisor").1;
            a = b;
            b = r.primitive_rational();
        }
        a.monic()
    }

    /// Rescaling to a primitive integer polynomial with positive leading
    /// coefficient; keeps Euclid's coefficients from blowing up.
    pub fn primitive_rational(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let ints = self.integer_coeffs();
        Self::new(ints.into_iter().map(Rational::from_bigint).collect())
    }

    /// Primitive integer coefficients (content removed, leading coefficient positive).
    pub fn integer_coeffs(&self) -> Vec<BigInt> {
        let l = denominator_lcm(self.coeffs.iter());
        let mut ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&l / c.denom()))
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if !g.is_zero() && !g.is_one() {
            for x in ints.iter_mut() {
                *x /= &g;
            }
        }
        if ints.last().is_some_and(|x| x.is_negative()) {
            for x in ints.iter_mut() {
                *x = -x.clone();
            }
        }
        ints
    }

    /// `p / gcd(p, p')`, monic.
    pub fn squarefree_part(&self) -> UniPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).expect("nonzero gcd").0.monic()
    }
}

/// Result of [`extract_roots`]. Multiplicities are recorded so that
/// `deg(residual) + Σ rational multiplicities + 2·Σ quadratic multiplicities = deg(p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSplit {
    pub rational_roots: Vec<(Rational, usize)>,
    /// Irreducible real quadratic factors (monic) with multiplicity and their two roots.
    pub quadratic_factors: Vec<(UniPoly, usize, [Scalar; 2])>,
    /// Irreducible quadratics with negative discriminant; their roots are not real.
    pub complex_quadratics: Vec<(UniPoly, usize)>,
    /// Product of the remaining factors (none of degree ≤ 2), unfactored.
    pub residual: UniPoly,
}

impl RootSplit {
    pub fn quadratic_roots(&self) -> Vec<Scalar> {
        self.quadratic_factors
            .iter()
            .flat_map(|(_, _, r)| r.iter().cloned())
            .collect()
    }

    pub fn rational_root_set(&self) -> Vec<Rational> {
        self.rational_roots.iter().map(|(r, _)| r.clone()).collect()
    }
}

fn strip_factor(p: &mut UniPoly, f: &UniPoly) -> usize {
    let mut m = 0;
    loop {
        let (q, r) = p.div_rem(f).expect("nonzero factor");
        if !r.is_zero() {
            return m;
        }
        *p = q;
        m += 1;
    }
}

/// Sturm sequence of a squarefree polynomial.
fn sturm_chain(p: &UniPoly) -> Vec<UniPoly> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let r = chain[n - 2].div_rem(&chain[n - 1]).expect("nonzero").1;
        if r.is_zero() {
            break;
        }
        chain.push(r.scale(&Rational::from_int(-1)).primitive_rational_keep_sign());
    }
    chain
}

impl UniPoly {
    /// Positive rescaling to integer coefficients; preserves signs (needed for Sturm chains).
    fn primitive_rational_keep_sign(&self) -> UniPoly {
        let neg = self.lead().is_negative();
        let p = self.primitive_rational();
        if neg {
            p.scale(&Rational::from_int(-1))
        } else {
            p
        }
    }
}

fn sign_changes(chain: &[UniPoly], x: &Rational) -> usize {
    let mut last = 0;
    let mut n = 0;
    for q in chain {
        let s = q.eval(x).signum();
        if s != 0 {
            if last != 0 && s != last {
                n += 1;
            }
            last = s;
        }
    }
    n
}

/// Integer roots of a squarefree integer polynomial, by Sturm-guided bisection
/// over integer intervals inside the Cauchy bound.
fn integer_roots(p: &UniPoly) -> Vec<BigInt> {
    let Some(deg) = p.degree() else { return vec![] };
    if deg == 0 {
        return vec![];
    }
    let lead = p.lead().abs();
    let bound = p.coeffs[..deg]
        .iter()
        .map(|c| (c / &lead).abs())
        .max()
        .unwrap_or_default();
    let b = bound.numer() / bound.denom() + BigInt::from(2);
    let chain = sturm_chain(p);
    let mut out = Vec::new();
    // Roots in (lo, hi], integer endpoints.
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let lr = Rational::from_bigint(lo.clone());
        let hr = Rational::from_bigint(hi.clone());
        let count = sign_changes(&chain, &lr) as i64 - sign_changes(&chain, &hr) as i64;
        if count <= 0 {
            continue;
        }
        if &hi - &lo == BigInt::one() {
            if p.eval(&hr).is_zero() {
                out.push(hi);
            }
            continue;
        }
        let mid: BigInt = (&lo + &hi).div_floor(&BigInt::from(2));
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    out.sort();
    out
}

/// Rational roots of a nonzero polynomial (each verified by substitution).
/// Uses the monic transform `y = a_n·x`, whose rational roots are integers.
fn rational_roots(p: &UniPoly) -> Vec<Rational> {
    let sf = p.squarefree_part();
    let Some(n) = sf.degree() else { return vec![] };
    if n == 0 {
        return vec![];
    }
    let ints = sf.integer_coeffs();
    let an = ints[n].clone();
    // Q(y) = a_n^{n-1} P(y / a_n) = Σ c_i a_n^{n-1-i} y^i.
    let mut q = Vec::with_capacity(n + 1);
    let mut pw = BigInt::one();
    let mut pows = vec![BigInt::one(); n + 1];
    for i in (0..n).rev() {
        pows[i] = pw.clone();
        pw *= &an;
    }
    for i in 0..=n {
        let c = if i == n { BigInt::one() } else { &ints[i] * &pows[i] };
        q.push(Rational::from_bigint(c));
    }
    let qpoly = UniPoly::new(q);
    let mut roots: Vec<Rational> = integer_roots(&qpoly)
        .into_iter()
        .map(|y| Rational::from_bigints(y, an.clone()))
        .filter(|r| p.eval(r).is_zero())
        .collect();
    roots.sort();
    roots
}

fn small_divisors(n: &BigInt, limit: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs();
    if n.is_zero() || &n > limit {
        return None;
    }
    let mut out = Vec::new();
    let mut i = BigInt::one();
    while &i * &i <= n {
        if (&n % &i).is_zero() {
            out.push(i.clone());
            let j = &n / &i;
            if j != i {
                out.push(j);
            }
        }
        i += 1u32;
    }
    Some(out)
}

/// Searches for a quadratic factor of a primitive integer polynomial without
/// rational roots via values at 0, 1, −1 (Kronecker). Gives up (returns None)
/// when those values are too large to factor by trial division.
fn find_quadratic_factor(p: &UniPoly) -> Option<UniPoly> {
    let limit = BigInt::from(10u64.pow(12));
    let ints = p.integer_coeffs();
    let an = ints.last()?.clone();
    let v0 = ints[0].clone();
    let pp = UniPoly::new(ints.iter().cloned().map(Rational::from_bigint).collect());
    let v1 = pp.eval(&Rational::one()).numer();
    let vm1 = pp.eval(&Rational::from_int(-1)).numer();
    let da = small_divisors(&an, &limit)?;
    let d0 = small_divisors(&v0, &limit)?;
    let d1 = small_divisors(&v1, &limit)?;
    let dm1 = small_divisors(&vm1, &limit)?;
    // Candidate c x² + e x + f with c | a_n (c > 0), f | v0, c+e+f | v1, c−e+f | v(−1).
    for c in &da {
        for f0 in &d0 {
            for f in [f0.clone(), -f0.clone()] {
                for s1 in &d1 {
                    for v in [s1.clone(), -s1.clone()] {
                        let e = &v - c - &f;
                        let w = c - &e + &f;
                        if w.is_zero() || !dm1.iter().any(|d| d == &w.abs()) {
                            continue;
                        }
                        let cand = UniPoly::new(vec![
                            Rational::from_bigint(f.clone()),
                            Rational::from_bigint(e.clone()),
                            Rational::from_bigint(c.clone()),
                        ]);
                        if pp.div_rem(&cand).ok()?.1.is_zero() {
                            return Some(cand.monic());
                        }
                    }
                }
            }
        }
    }
    None
}

fn quadratic_roots_of(q: &UniPoly) -> Option<[Scalar; 2]> {
    // q monic: x² + e x + f, roots (−e ± √(e² − 4f)) / 2.
    let e = q.coeff(1);
    let f = q.coeff(0);
    let disc = &(&e * &e) - &(&f * &Rational::from_int(4));
    if disc.is_negative() {
        return None;
    }
    let r = Scalar::sqrt_of(&disc).ok()?;
    let half = Scalar::frac(1, 2);
    let me = Scalar::from(-&e);
    Some([(&me + &r) * &half, (&me - &r) * &half])
}

/// Splits off all rational roots and all irreducible quadratic factors of `p`.
pub fn extract_roots(p: &UniPoly) -> Result<RootSplit, ArithError> {
    if p.is_zero() {
        return Err(ArithError::ZeroPolynomial);
    }
    let mut rest = p.monic();
    let mut rational = Vec::new();
    for r in rational_roots(&rest) {
        let m = strip_factor(&mut rest, &UniPoly::linear_root(&r));
        rational.push((r, m));
    }
    let mut quads = Vec::new();
    let mut complex = Vec::new();
    let mut residual = UniPoly::constant(Rational::one());
    // Work on squarefree pieces so each quadratic is found once, then strip multiplicity.
    let mut work = rest.clone();
    while work.degree().unwrap_or(0) >= 2 {
        let sf = work.squarefree_part();
        let found = if sf.degree() == Some(2) {
            Some(sf.clone())
        } else {
            find_quadratic_factor(&sf)
        };
        match found {
            Some(q) => {
                let m = strip_factor(&mut work, &q);
                match quadratic_roots_of(&q) {
                    Some(rs) => quads.push((q, m, rs)),
                    None => complex.push((q, m)),
                }
            }
            None => {
                residual = work.clone();
                work = UniPoly::constant(Rational::one());
            }
        }
    }
    if residual.degree() == Some(0) {
        residual = UniPoly::constant(Rational::one());
    }
    Ok(RootSplit {
        rational_roots: rational,
        quadratic_factors: quads,
        complex_quadratics: complex,
        residual,
    })
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            match (first, sign) {
                (true, "-") => write!(f, "-")?,
                (true, _) => {}
                (false, s) => write!(f, " {s} ")?,
            }
            first = false;
            let a = c.abs();
            let x = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            match (a.is_one(), x.is_empty()) {
                (true, true) => write!(f, "1")?,
                (true, false) => write!(f, "{x}")?,
                (false, true) => write!(f, "{a}")?,
                (false, false) => write!(f, "{a}*{x}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Scalar {
        x.parse().unwrap()
    }

    #[test]
    fn quadratic_with_sqrt19_roots() {
        let split = extract_roots(&UniPoly::from_ints(&[3, 10, 2])).unwrap();
        assert!(split.rational_roots.is_empty());
        let mut roots = split.quadratic_roots();
        roots.sort_by_key(|r| r.to_string());
        assert_eq!(roots, vec![s("-5/2+1/2*sqrt(19)"), s("-5/2-1/2*sqrt(19)")]);
    }

    #[test]
    fn two_rational_roots() {
        let split = extract_roots(&UniPoly::from_ints(&[0, 4, 1])).unwrap();
        assert_eq!(
            split.rational_root_set(),
            vec![Rational::from_int(-4), Rational::zero()]
        );
        assert_eq!(split.residual, UniPoly::constant(Rational::one()));
    }

    #[test]
    fn irreducible_cubic_is_residual() {
        let p = UniPoly::from_ints(&[-2, 0, 0, 1]);
        let split = extract_roots(&p).unwrap();
        assert!(split.rational_roots.is_empty() && split.quadratic_factors.is_empty());
        assert_eq!(split.residual, p);
    }

    #[test]
    fn zero_polynomial_errors() {
        assert_eq!(extract_roots(&UniPoly::zero()), Err(ArithError::ZeroPolynomial));
    }

    #[test]
    fn products_of_quadratics_split() {
        // (x² − 19)(x² + 1)(2x − 3)² (x³ − 2)
        let p = UniPoly::from_ints(&[-19, 0, 1])
            .mul(&UniPoly::from_ints(&[1, 0, 1]))
            .mul(&UniPoly::from_ints(&[-3, 2]))
            .mul(&UniPoly::from_ints(&[-3, 2]))
            .mul(&UniPoly::from_ints(&[-2, 0, 0, 1]));
        let split = extract_roots(&p).unwrap();
        assert_eq!(split.rational_roots, vec![(Rational::new(3, 2), 2)]);
        assert_eq!(split.quadratic_factors.len(), 1);
        assert_eq!(split.complex_quadratics.len(), 1);
        assert_eq!(split.residual.degree(), Some(3));
    }

    #[test]
    fn gcd_and_division() {
        let a = UniPoly::from_ints(&[0, 4, 1]).mul(&UniPoly::from_ints(&[1, 1]));
        let b = UniPoly::from_ints(&[0, 4, 1]).mul(&UniPoly::from_ints(&[5, 0, 1]));
        assert_eq!(a.gcd(&b), UniPoly::from_ints(&[0, 4, 1]));
    }
}
