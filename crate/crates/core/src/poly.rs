//! Univariate polynomials over the rationals: minimal and characteristic
//! polynomials of rational matrices, square-free decomposition, exact
//! rational root isolation and factorization into irreducibles.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::matrix::QMatrix;
use crate::series::{int, Rational};

/// Dense polynomial `c_0 + c_1 z + ... + c_r z^r`, stored without trailing
/// zeros (the zero polynomial has no coefficients).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalPolynomial {
    coeffs: Vec<Rational>,
}

impl RationalPolynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RationalPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        RationalPolynomial { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `z - root`.
    pub fn linear(root: &Rational) -> Self {
        Self::new(vec![-root.clone(), Rational::one()])
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    /// Monic product of `(z - r)^m`.
    pub fn from_roots(roots: &[(Rational, usize)]) -> Self {
        let mut p = Self::one();
        for (r, m) in roots {
            for _ in 0..*m {
                p = p.mul(&Self::linear(r));
            }
        }
        p
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        Self::new(self.coeffs.iter().map(|c| c / &lc).collect())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Euclidean division, panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let mut rem = self.coeffs.clone();
        let dd = divisor.degree();
        let lc = divisor.leading();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = &rem[i] / &lc;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i - dd + j] -= &c * d;
            }
            quot[i - dd] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.div_rem(self).1.is_zero()
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    pub fn eval(&self, z: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * z + c)
    }

    /// `p(T)` for a square rational matrix.
    pub fn eval_matrix(&self, t: &QMatrix) -> QMatrix {
        let n = t.rows();
        let mut acc = QMatrix::zero(n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(t).add_scalar(c);
        }
        acc
    }

    /// `p(a*z + c)`.
    pub fn compose_affine(&self, a: &Rational, c: &Rational) -> Self {
        let lin = Self::new(vec![c.clone(), a.clone()]);
        self.coeffs.iter().rev().fold(Self::zero(), |acc, coeff| {
            acc.mul(&lin).add(&Self::constant(coeff.clone()))
        })
    }

    /// `p(z - m)`: the polynomial whose roots are those of `p` shifted by `m`.
    pub fn shift_roots(&self, m: &Rational) -> Self {
        self.compose_affine(&Rational::one(), &-m.clone())
    }

    /// Primitive integer polynomial with positive leading coefficient and
    /// the same roots.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let den_lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(den_lcm.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if !g.is_zero() {
            for c in &mut ints {
                *c /= &g;
            }
        }
        if ints.last().is_some_and(Signed::is_negative) {
            for c in &mut ints {
                *c = -c.clone();
            }
        }
        ints
    }

    /// Yun square-free decomposition of a monic polynomial: pairs
    /// `(f_i, i)` with `self = prod f_i^i`, each `f_i` square-free, monic and
    /// non-constant.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, usize)> {
        let f = self.monic();
        if f.degree() == 0 {
            return vec![];
        }
        let mut out = Vec::new();
        let fp = f.derivative();
        let mut a = f.gcd(&fp);
        let mut b = f.div_rem(&a).0;
        let mut c = fp.div_rem(&a).0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while b.degree() > 0 {
            a = b.gcd(&d);
            if a.degree() > 0 {
                out.push((a.monic(), i));
            }
            b = b.div_rem(&a).0;
            c = d.div_rem(&a).0;
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    /// Pretty product form, e.g. `(z + 2/3)(z + 1)^2(z^2 - z - 1)`.
    pub fn display_factored(factors: &[(Self, usize)]) -> String {
        if factors.is_empty() {
            return "1".into();
        }
        factors
            .iter()
            .map(|(f, m)| {
                if *m == 1 {
                    format!("({f})")
                } else {
                    format!("({f})^{m}")
                }
            })
            .collect()
    }
}

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate().rev() {
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
                (1, true) => f.write_str("z")?,
                (1, false) => write!(f, "{abs}*z")?,
                (_, true) => write!(f, "z^{d}")?,
                (_, false) => write!(f, "{abs}*z^{d}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Monic minimal polynomial of a square rational matrix, found as the first
/// linear dependency among `I, T, T^2, ...` and checked by evaluation.
pub fn minimal_polynomial(t: &QMatrix) -> RationalPolynomial {
    assert_eq!(
        t.rows(),
        t.cols(),
        "minimal polynomial of a non-square matrix"
    );
    let n = t.rows();
    if n == 0 {
        return RationalPolynomial::one();
    }
    // Each stored row: (pivot index, reduced vector, combination of powers).
    let mut basis: Vec<(usize, Vec<Rational>, Vec<Rational>)> = Vec::new();
    let mut power = QMatrix::identity(n);
    for d in 0..=n {
        let mut v = power.data().to_vec();
        let mut combo = vec![Rational::zero(); d + 1];
        combo[d] = Rational::one();
        for (p, r, rc) in &basis {
            if v[*p].is_zero() {
                continue;
            }
            let f = &v[*p] / &r[*p];
            for (x, y) in v.iter_mut().zip(r) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            for (x, y) in combo.iter_mut().zip(rc) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        match v.iter().position(|x| !x.is_zero()) {
            None => {
                let p = RationalPolynomial::new(combo);
                assert!(
                    p.eval_matrix(t).is_zero(),
                    "minimal polynomial check failed"
                );
                return p;
            }
            Some(p) => basis.push((p, v, combo)),
        }
        power = power.mul(t);
    }
    unreachable!("Cayley-Hamilton bounds the minimal polynomial degree")
}

/// Characteristic polynomial `det(zI - T)` by the Faddeev-LeVerrier recursion.
pub fn characteristic_polynomial(t: &QMatrix) -> RationalPolynomial {
    let n = t.rows();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut m = QMatrix::zero(n, n);
    for k in 1..=n {
        m = t.mul(&m).add_scalar(&coeffs[n - k + 1]);
        let tm = t.mul(&m);
        coeffs[n - k] = -tm.trace() / int(k as i64);
    }
    RationalPolynomial::new(coeffs)
}

/// Integer coefficients of a positive multiple of `p`.
fn positive_integer_multiple(p: &RationalPolynomial) -> Vec<BigInt> {
    let d = p
        .coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut ints: Vec<BigInt> = p
        .coeffs
        .iter()
        .map(|c| c.numer() * (&d / c.denom()))
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for c in &mut ints {
            *c /= &g;
        }
    }
    ints
}

/// Sign of the integer polynomial `c` at `z`, via `q^deg c(p/q)` with `q > 0`.
fn sign_at(c: &[BigInt], z: &Rational) -> Ordering {
    let (num, den) = (z.numer(), z.denom());
    let mut acc = BigInt::zero();
    let mut qpow = BigInt::one();
    for coef in c.iter().rev() {
        acc = acc * num + coef * &qpow;
        qpow *= den;
    }
    acc.cmp(&BigInt::zero())
}

fn sturm_chain(p: &RationalPolynomial) -> Vec<Vec<BigInt>> {
    let normalize = |q: &RationalPolynomial| {
        RationalPolynomial::new(
            positive_integer_multiple(q)
                .into_iter()
                .map(Rational::from_integer)
                .collect(),
        )
    };
    let mut chain = vec![normalize(p), normalize(&p.derivative())];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let r = chain[n - 2].div_rem(&chain[n - 1]).1;
        if r.is_zero() {
            break;
        }
        chain.push(normalize(&r.scale(&int(-1))));
    }
    chain.iter().map(positive_integer_multiple).collect()
}

fn sign_changes(chain: &[Vec<BigInt>], z: &Rational) -> usize {
    let signs: Vec<Ordering> = chain
        .iter()
        .map(|c| sign_at(c, z))
        .filter(|s| *s != Ordering::Equal)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Rational number with the smallest denominator in the closed interval
/// `[lo, hi]` (Stern-Brocot descent).
fn simplest_in(lo: &Rational, hi: &Rational) -> Rational {
    let fl = lo.floor();
    if fl == *lo {
        return fl;
    }
    if fl.clone() + int(1) <= *hi {
        return fl + int(1);
    }
    // Both in (fl, fl + 1): recurse on reciprocals of the fractional parts.
    let a = (lo - &fl).recip();
    let b = (hi - &fl).recip();
    fl + simplest_in(&b, &a).recip()
}

/// Rational roots of a square-free polynomial, ascending.
///
/// Roots are isolated by Sturm sequences and bisection with exact rational
/// endpoints until each interval is narrower than `1 / lc^2`, where `lc` is
/// the leading coefficient of the primitive integer form; a rational root
/// `p/q` has `q | lc`, so it must then be the simplest rational in its
/// interval. Each isolating interval is also probed early with its
/// simplest rational.
pub fn rational_roots_squarefree(p: &RationalPolynomial) -> Vec<Rational> {
    if p.degree() == 0 {
        return vec![];
    }
    let ints = p.primitive_integer();
    let lc = ints.last().unwrap().clone();
    let width = Rational::new(BigInt::one(), &lc * &lc * BigInt::from(2));
    let chain = sturm_chain(p);
    let at_infinity = |negative: bool| {
        let signs: Vec<bool> = chain
            .iter()
            .map(|c| c.last().unwrap().is_positive() != (negative && (c.len() - 1) % 2 == 1))
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    };
    let total = at_infinity(true) - at_infinity(false);
    // Double the bound until (-B, B] holds every real root.
    let mut bound = Rational::one();
    let (v_lo, v_hi) = loop {
        let (lo, hi) = (
            sign_changes(&chain, &-bound.clone()),
            sign_changes(&chain, &bound),
        );
        if lo.saturating_sub(hi) == total {
            break (lo, hi);
        }
        bound *= int(2);
    };
    let mut roots = Vec::new();
    // Count of distinct real roots in (a, b] is V(a) - V(b).
    let mut stack = vec![(-bound.clone(), v_lo, bound, v_hi)];
    while let Some((a, va, b, vb)) = stack.pop() {
        let count = va.saturating_sub(vb);
        if count == 0 {
            continue;
        }
        if count == 1 {
            // The root p/q is the simplest rational once the interval is
            // narrower than about 1/q^2, usually long before `width`.
            let cand = if sign_at(&chain[0], &b) == Ordering::Equal {
                b.clone()
            } else {
                simplest_in(&a, &b)
            };
            if cand != a && sign_at(&chain[0], &cand) == Ordering::Equal {
                roots.push(cand);
                continue;
            }
            if &b - &a < width {
                continue;
            }
        }
        let mid = (&a + &b) / int(2);
        let vm = sign_changes(&chain, &mid);
        stack.push((a, va, mid.clone(), vm));
        stack.push((mid, vm, b, vb));
    }
    roots.sort();
    roots.dedup();
    roots
}

/// Irreducible factorization of a monic polynomial over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    /// Monic irreducible factors with multiplicities: linear factors first by
    /// ascending root, then higher-degree factors by degree and coefficients.
    pub factors: Vec<(RationalPolynomial, usize)>,
    /// False when a factor of degree >= 4 could not be proven irreducible
    /// within the search budget.
    pub irreducibility_certified: bool,
}

impl Factorization {
    pub fn rational_roots(&self) -> Vec<(Rational, usize)> {
        self.factors
            .iter()
            .filter(|(f, _)| f.degree() == 1)
            .map(|(f, m)| (-f.coeff(0), *m))
            .collect()
    }

    pub fn product(&self) -> RationalPolynomial {
        self.factors
            .iter()
            .fold(RationalPolynomial::one(), |acc, (f, m)| acc.mul(&f.pow(*m)))
    }
}

pub fn factor(p: &RationalPolynomial) -> Factorization {
    let mut factors = Vec::new();
    let mut certified = true;
    for (part, mult) in p.squarefree_decomposition() {
        let roots = rational_roots_squarefree(&part);
        let mut rest = part.clone();
        for r in &roots {
            factors.push((RationalPolynomial::linear(r), mult));
            rest = rest.div_rem(&RationalPolynomial::linear(r)).0;
        }
        if rest.degree() > 0 {
            let (pieces, ok) = split_irreducible(&rest.monic());
            certified &= ok;
            factors.extend(pieces.into_iter().map(|f| (f, mult)));
        }
    }
    factors.sort_by(|(a, _), (b, _)| factor_order(a, b));
    Factorization {
        factors,
        irreducibility_certified: certified,
    }
}

fn factor_order(a: &RationalPolynomial, b: &RationalPolynomial) -> Ordering {
    a.degree().cmp(&b.degree()).then_with(|| {
        if a.degree() == 1 {
            (-a.coeff(0)).cmp(&-b.coeff(0))
        } else {
            a.coeffs().iter().rev().cmp(b.coeffs().iter().rev())
        }
    })
}

const KRONECKER_BUDGET: usize = 200_000;

/// Split a square-free polynomial without rational roots into irreducible
/// factors. Degrees 2 and 3 are irreducible outright; larger degrees run
/// Kronecker's method on the primitive integer form.
fn split_irreducible(p: &RationalPolynomial) -> (Vec<RationalPolynomial>, bool) {
    if p.degree() <= 3 {
        return (vec![p.clone()], true);
    }
    let ints: Vec<Rational> = p
        .primitive_integer()
        .into_iter()
        .map(Rational::from_integer)
        .collect();
    let f = RationalPolynomial::new(ints);
    let mut budget = KRONECKER_BUDGET;
    for d in 2..=f.degree() / 2 {
        match kronecker_factor(&f, d, &mut budget) {
            Some(g) => {
                let h = f.div_rem(&g).0;
                let (mut a, ok1) = split_irreducible(&g.monic());
                let (b, ok2) = split_irreducible(&h.monic());
                a.extend(b);
                return (a, ok1 && ok2);
            }
            None if budget == 0 => return (vec![p.clone()], false),
            None => {}
        }
    }
    (vec![p.clone()], true)
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
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
        i += 1;
    }
    out
}

/// Look for an integer factor of exact degree `d` of the integer
/// polynomial `f` by interpolation through divisors of `f` at `d + 1`
/// integer points.
fn kronecker_factor(
    f: &RationalPolynomial,
    d: usize,
    budget: &mut usize,
) -> Option<RationalPolynomial> {
    let mut points = Vec::new();
    let mut x = 0i64;
    while points.len() < d + 1 {
        let v = f.eval(&int(x));
        debug_assert!(!v.is_zero(), "no rational roots expected");
        points.push((int(x), v.to_integer()));
        x = if x <= 0 { 1 - x } else { -x };
    }
    let choices: Vec<Vec<BigInt>> = points
        .iter()
        .map(|(_, v)| {
            divisors(v)
                .into_iter()
                .flat_map(|q| [q.clone(), -q])
                .collect()
        })
        .collect();
    let mut idx = vec![0usize; d + 1];
    loop {
        if *budget == 0 {
            return None;
        }
        *budget -= 1;
        let values: Vec<(Rational, Rational)> = points
            .iter()
            .zip(&idx)
            .enumerate()
            .map(|(k, ((x, _), &i))| (x.clone(), Rational::from_integer(choices[k][i].clone())))
            .collect();
        let g = lagrange(&values);
        if g.degree() == d && g.coeffs().iter().all(|c| c.is_integer()) && g.divides(f) {
            return Some(g);
        }
        // odometer
        let mut k = 0;
        loop {
            if k == idx.len() {
                return None;
            }
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn lagrange(points: &[(Rational, Rational)]) -> RationalPolynomial {
    let mut acc = RationalPolynomial::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        let mut term = RationalPolynomial::constant(yi.clone());
        for (j, (xj, _)) in points.iter().enumerate() {
            if i != j {
                term = term
                    .mul(&RationalPolynomial::linear(xj))
                    .scale(&(xi - xj).recip());
            }
        }
        acc = acc.add(&term);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;

    #[test]
    fn minimal_polynomial_examples() {
        assert_eq!(
            minimal_polynomial(&QMatrix::identity(3)),
            RationalPolynomial::from_ints(&[-1, 1])
        );
        let d = QMatrix::diagonal(&[rat(2, 3), int(1), int(1), rat(4, 3)]);
        assert_eq!(
            minimal_polynomial(&d),
            RationalPolynomial::from_roots(&[(rat(2, 3), 1), (int(1), 1), (rat(4, 3), 1)])
        );
        let j = QMatrix::from_rows(vec![vec![rat(1, 2), int(1)], vec![int(0), rat(1, 2)]]);
        assert_eq!(
            minimal_polynomial(&j),
            RationalPolynomial::from_roots(&[(rat(1, 2), 2)])
        );
    }

    #[test]
    fn minimal_polynomial_annihilates() {
        let t = QMatrix::from_rows(vec![
            vec![int(1), int(2), int(0), rat(1, 3)],
            vec![int(0), int(1), int(0), int(0)],
            vec![int(-1), int(0), int(2), int(5)],
            vec![int(0), int(0), int(0), int(1)],
        ]);
        let m = minimal_polynomial(&t);
        assert!(m.eval_matrix(&t).is_zero());
        assert!(m.divides(&characteristic_polynomial(&t)));
    }

    #[test]
    fn roots_on_dyadic_points() {
        let roots = [
            int(-4),
            int(-2),
            int(-1),
            rat(-1, 2),
            int(0),
            rat(1, 4),
            rat(1, 3),
            int(1),
            int(8),
        ];
        let p = RationalPolynomial::from_roots(
            &roots.iter().map(|r| (r.clone(), 1)).collect::<Vec<_>>(),
        );
        assert_eq!(rational_roots_squarefree(&p), roots);
    }

    #[test]
    fn characteristic_polynomial_of_companion() {
        let t = QMatrix::from_rows(vec![vec![int(0), int(1)], vec![int(1), int(-1)]]);
        assert_eq!(
            characteristic_polynomial(&t),
            RationalPolynomial::from_ints(&[-1, 1, 1])
        );
    }

    #[test]
    fn squarefree_parts() {
        let p = RationalPolynomial::from_roots(&[(int(1), 2), (rat(-1, 2), 3), (int(3), 1)]);
        let parts = p.squarefree_decomposition();
        assert_eq!(parts.len(), 3);
        assert_eq!(parts[0], (RationalPolynomial::linear(&int(3)), 1));
        assert_eq!(parts[1], (RationalPolynomial::linear(&int(1)), 2));
        assert_eq!(parts[2], (RationalPolynomial::linear(&rat(-1, 2)), 3));
    }

    #[test]
    fn rational_roots_with_large_denominators() {
        let roots: Vec<(Rational, usize)> = (1..=12).map(|j| (rat(-j, 13), 1)).collect();
        let p = RationalPolynomial::from_roots(&roots);
        let found = rational_roots_squarefree(&p);
        assert_eq!(
            found,
            roots
                .iter()
                .rev()
                .map(|(r, _)| r.clone())
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn factor_mixed() {
        let quad = RationalPolynomial::from_ints(&[-1, -1, 1]);
        let p = quad.mul(&RationalPolynomial::from_roots(&[(rat(1, 2), 2)]));
        let f = factor(&p);
        assert!(f.irreducibility_certified);
        assert_eq!(f.factors.len(), 2);
        assert_eq!(f.factors[0], (RationalPolynomial::linear(&rat(1, 2)), 2));
        assert_eq!(f.factors[1], (quad, 1));
        assert_eq!(f.product(), p);
    }

    #[test]
    fn kronecker_splits_quartic() {
        // (z^2 - 2)(z^2 - 3)
        let p = RationalPolynomial::from_ints(&[-2, 0, 1])
            .mul(&RationalPolynomial::from_ints(&[-3, 0, 1]));
        let f = factor(&p);
        assert_eq!(f.factors.len(), 2);
        assert!(f.irreducibility_certified);
        assert_eq!(f.product(), p);
        // z^4 + 1 is irreducible over Q.
        let g = factor(&RationalPolynomial::from_ints(&[1, 0, 0, 0, 1]));
        assert_eq!(g.factors.len(), 1);
    }

    #[test]
    fn simplest_rational() {
        assert_eq!(simplest_in(&rat(1, 3), &rat(1, 2)), rat(1, 2));
        assert_eq!(simplest_in(&rat(3, 10), &rat(34, 100)), rat(1, 3));
        assert_eq!(simplest_in(&rat(-7, 5), &rat(-6, 5)), rat(-4, 3));
    }

    #[test]
    fn display_descending() {
        assert_eq!(
            RationalPolynomial::from_ints(&[-1, -1, 1]).to_string(),
            "z^2 - z - 1"
        );
        assert_eq!(
            RationalPolynomial::linear(&rat(-2, 3)).to_string(),
            "z + 2/3"
        );
    }
}
