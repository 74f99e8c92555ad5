//! Truncated formal power series in `b` with exact rational coefficients.
//!
//! A [`Series`] of truncation `N` stands for a class modulo `b^N`: the
//! coefficients `c_0 .. c_{N-1}` are known and everything beyond is not.
//! Binary operations return the minimum of the operand truncations, the
//! derivative loses one order, and multiplication by `b^k` gains `k`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{AbError, Result};

/// Exact scalar field.
pub type Rational = BigRational;

/// Shorthand for the rational `num/den`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for an integer-valued rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Series {
    coeffs: Vec<Rational>,
}

impl Series {
    pub fn zero(trunc: usize) -> Self {
        Series {
            coeffs: vec![Rational::zero(); trunc],
        }
    }

    pub fn one(trunc: usize) -> Self {
        Self::constant(Rational::one(), trunc)
    }

    pub fn constant(c: Rational, trunc: usize) -> Self {
        Self::monomial(c, 0, trunc)
    }

    /// `c * b^degree` at the given truncation (zero when `degree >= trunc`).
    pub fn monomial(c: Rational, degree: usize, trunc: usize) -> Self {
        let mut s = Self::zero(trunc);
        if degree < trunc {
            s.coeffs[degree] = c;
        }
        s
    }

    /// The series whose truncation is the number of coefficients given.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        Series { coeffs }
    }

    /// Polynomial given by its low coefficients, zero-padded to `trunc`.
    pub fn from_poly(coeffs: &[Rational], trunc: usize) -> Self {
        let mut s = Self::zero(trunc);
        for (i, c) in coeffs.iter().enumerate().take(trunc) {
            s.coeffs[i] = c.clone();
        }
        s
    }

    pub fn from_ints(coeffs: &[i64], trunc: usize) -> Self {
        let c: Vec<Rational> = coeffs.iter().map(|&x| int(x)).collect();
        Self::from_poly(&c, trunc)
    }

    pub fn trunc(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `b^i`; zero beyond the truncation.
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeff_ref(&self, i: usize) -> Option<&Rational> {
        self.coeffs.get(i)
    }

    /// Zero at working precision.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Index of the first nonzero coefficient, or `None` when the series is
    /// zero at working precision.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_unit(&self) -> bool {
        self.coeffs.first().is_some_and(|c| !c.is_zero())
    }

    /// Drop coefficients beyond `n`. Panics if `n` exceeds the truncation.
    pub fn truncate(&self, n: usize) -> Series {
        assert!(n <= self.trunc(), "cannot raise precision by truncation");
        Series {
            coeffs: self.coeffs[..n].to_vec(),
        }
    }

    /// Zero-pad to truncation `n`. Only meaningful when the series is a
    /// polynomial known exactly.
    pub fn extend(&self, n: usize) -> Series {
        let mut coeffs = self.coeffs.clone();
        if n > coeffs.len() {
            coeffs.resize(n, Rational::zero());
        } else {
            coeffs.truncate(n);
        }
        Series { coeffs }
    }

    /// Truncate or zero-pad, whichever applies.
    pub(crate) fn with_trunc(&self, n: usize) -> Series {
        self.extend(n)
    }

    pub fn scale(&self, c: &Rational) -> Series {
        if c.is_zero() {
            return Series::zero(self.trunc());
        }
        Series {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Multiply by `b^k`; the result is known to `k` more orders.
    pub fn mul_b_pow(&self, k: usize) -> Series {
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Series { coeffs }
    }

    /// Divide by `b^k`, losing `k` orders of precision. Returns `None` when
    /// one of the first `k` coefficients is nonzero.
    pub fn div_b_pow(&self, k: usize) -> Option<Series> {
        if k > self.trunc() {
            return if self.is_zero() {
                Some(Series::zero(0))
            } else {
                None
            };
        }
        if self.coeffs[..k].iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Series {
            coeffs: self.coeffs[k..].to_vec(),
        })
    }

    /// Coefficients from `b^k` on, shifted down: `(s - low part) / b^k`.
    pub(crate) fn tail(&self, k: usize) -> Series {
        Series {
            coeffs: self.coeffs.get(k..).map(<[_]>::to_vec).unwrap_or_default(),
        }
    }

    /// Lift a series known mod `b^n` to a longer truncation by zero padding,
    /// the canonical representative used inside ring computations.
    pub(crate) fn lift(&self, n: usize) -> Series {
        self.extend(n)
    }

    /// Formal derivative `d/db`, known to one order less.
    pub fn derivative(&self) -> Series {
        if self.coeffs.is_empty() {
            return Series::zero(0);
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(i, c)| c * int(i as i64 + 1))
            .collect();
        Series { coeffs }
    }

    /// Substitute `b -> -b`.
    pub fn negate_variable(&self) -> Series {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
            .collect();
        Series { coeffs }
    }

    /// Inverse of a unit, at the same truncation.
    pub fn invert_unit(&self) -> Result<Series> {
        let n = self.trunc();
        let c0 = match self.coeffs.first() {
            Some(c) if !c.is_zero() => c.clone(),
            _ => return Err(AbError::NotAUnit),
        };
        let inv0 = c0.recip();
        let mut out = vec![Rational::zero(); n];
        out[0] = inv0.clone();
        for m in 1..n {
            let mut acc = Rational::zero();
            for k in 1..=m {
                let c = &self.coeffs[k];
                if !c.is_zero() && !out[m - k].is_zero() {
                    acc += c * &out[m - k];
                }
            }
            out[m] = -(acc * &inv0);
        }
        Ok(Series { coeffs: out })
    }

    /// Parse the text form `c0 + c1*b + c2*b^2 + ...` at truncation `trunc`.
    ///
    /// Terms of degree `>= trunc` are rejected so that a parsed series is
    /// always an exact polynomial.
    pub fn parse(text: &str, trunc: usize) -> Result<Series> {
        let terms = parse_terms(text)?;
        let mut s = Series::zero(trunc);
        for (pos, c, d) in terms {
            if d >= trunc {
                return Err(AbError::Parse {
                    line: 1,
                    column: pos + 1,
                    message: format!("term of degree {d} is beyond truncation {trunc}"),
                });
            }
            s.coeffs[d] += c;
        }
        Ok(s)
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            match (d, abs.is_one()) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => f.write_str("b")?,
                (1, false) => write!(f, "{abs}*b")?,
                (_, true) => write!(f, "b^{d}")?,
                (_, false) => write!(f, "{abs}*b^{d}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(b^{})", self, self.trunc())
    }
}

/// Common denominator `d` and integers `x_i = c_i d`.
fn add_coeff(a: &Rational, b: &Rational) -> Rational {
    if a.is_zero() {
        b.clone()
    } else if b.is_zero() {
        a.clone()
    } else {
        a + b
    }
}

fn scaled_numerators(coeffs: &[Rational]) -> (BigInt, Vec<BigInt>) {
    let mut d = BigInt::one();
    for c in coeffs {
        if !c.is_zero() && !c.denom().is_one() {
            d = d.lcm(c.denom());
        }
    }
    let xs = coeffs
        .iter()
        .map(|c| {
            if c.is_zero() {
                BigInt::zero()
            } else {
                c.numer() * (&d / c.denom())
            }
        })
        .collect();
    (d, xs)
}

fn parse_error(pos: usize, message: impl Into<String>) -> AbError {
    AbError::Parse {
        line: 1,
        column: pos + 1,
        message: message.into(),
    }
}

/// Tokenise a series expression into `(position, coefficient, degree)` terms.
fn parse_terms(text: &str) -> Result<Vec<(usize, Rational, usize)>> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let read_uint = |pos: &mut usize| -> Option<BigInt> {
        let start = *pos;
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            *pos += 1;
        }
        if start == *pos {
            None
        } else {
            text[start..*pos].parse().ok()
        }
    };

    let mut terms = Vec::new();
    skip_ws(&mut pos);
    if pos == bytes.len() {
        return Err(parse_error(pos, "empty series"));
    }
    let mut first = true;
    while pos < bytes.len() {
        let start = pos;
        let mut negative = false;
        if pos < bytes.len() && (bytes[pos] == b'+' || bytes[pos] == b'-') {
            negative = bytes[pos] == b'-';
            pos += 1;
            skip_ws(&mut pos);
        } else if !first {
            return Err(parse_error(pos, "expected '+' or '-' between terms"));
        }
        first = false;

        let mut coeff = Rational::one();
        let mut has_coeff = false;
        if let Some(num) = read_uint(&mut pos) {
            has_coeff = true;
            let mut c = Rational::from_integer(num);
            skip_ws(&mut pos);
            if pos < bytes.len() && bytes[pos] == b'/' {
                pos += 1;
                skip_ws(&mut pos);
                let den =
                    read_uint(&mut pos).ok_or_else(|| parse_error(pos, "expected denominator"))?;
                if den.is_zero() {
                    return Err(parse_error(pos, "zero denominator"));
                }
                c /= Rational::from_integer(den);
            }
            coeff = c;
            skip_ws(&mut pos);
            if pos < bytes.len() && bytes[pos] == b'*' {
                pos += 1;
                skip_ws(&mut pos);
                if pos >= bytes.len() || bytes[pos] != b'b' {
                    return Err(parse_error(pos, "expected 'b' after '*'"));
                }
            }
        }

        let mut degree = 0usize;
        if pos < bytes.len() && bytes[pos] == b'b' {
            pos += 1;
            degree = 1;
            skip_ws(&mut pos);
            if pos < bytes.len() && bytes[pos] == b'^' {
                pos += 1;
                skip_ws(&mut pos);
                let e = read_uint(&mut pos)
                    .ok_or_else(|| parse_error(pos, "expected exponent after '^'"))?;
                degree = usize::try_from(&e).map_err(|_| parse_error(pos, "exponent too large"))?;
            }
        } else if !has_coeff {
            return Err(parse_error(pos, "expected a coefficient or 'b'"));
        }
        skip_ws(&mut pos);
        if negative {
            coeff = -coeff;
        }
        terms.push((start, coeff, degree));
    }
    Ok(terms)
}

impl<'a> Add<&'a Series> for &'a Series {
    type Output = Series;
    fn add(self, rhs: &'a Series) -> Series {
        let n = self.trunc().min(rhs.trunc());
        Series {
            coeffs: (0..n)
                .map(|i| add_coeff(&self.coeffs[i], &rhs.coeffs[i]))
                .collect(),
        }
    }
}

impl<'a> Sub<&'a Series> for &'a Series {
    type Output = Series;
    fn sub(self, rhs: &'a Series) -> Series {
        let n = self.trunc().min(rhs.trunc());
        Series {
            coeffs: (0..n)
                .map(|i| {
                    if rhs.coeffs[i].is_zero() {
                        self.coeffs[i].clone()
                    } else {
                        &self.coeffs[i] - &rhs.coeffs[i]
                    }
                })
                .collect(),
        }
    }
}

impl<'a> Mul<&'a Series> for &'a Series {
    type Output = Series;
    fn mul(self, rhs: &'a Series) -> Series {
        let n = self.trunc().min(rhs.trunc());
        // Integer convolution over a common denominator, reduced once per
        // coefficient.
        let (da, xa) = scaled_numerators(&self.coeffs[..n]);
        let (db, xb) = scaled_numerators(&rhs.coeffs[..n]);
        let mut acc = vec![BigInt::zero(); n];
        for (i, a) in xa.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, c) in xb.iter().enumerate().take(n - i) {
                if !c.is_zero() {
                    acc[i + j] += a * c;
                }
            }
        }
        let den = da * db;
        Series {
            coeffs: acc
                .into_iter()
                .map(|x| {
                    if x.is_zero() {
                        Rational::zero()
                    } else if den.is_one() {
                        Rational::from_integer(x)
                    } else {
                        Rational::new(x, den.clone())
                    }
                })
                .collect(),
        }
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Series> for Series {
            type Output = Series;
            fn $m(self, rhs: Series) -> Series {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Series> for Series {
            type Output = Series;
            fn $m(self, rhs: &'a Series) -> Series {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Series {
    type Output = Series;
    fn neg(self) -> Series {
        -&self
    }
}
