//! Bernstein and dual Bernstein polynomials, spectral classes modulo the
//! integers, and pole predictions.

use crate::error::Result;
use crate::fixpoint::{biggest_simple_pole_sub, saturate, FixedPointConfig};
use crate::module::AbModule;
use crate::poly::{factor, minimal_polynomial, RationalPolynomial};
use crate::series::{int, Rational};

/// A monic polynomial with its irreducible factorization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BernsteinPoly {
    pub poly: RationalPolynomial,
    /// Monic irreducible factors with multiplicities.
    pub factorization: Vec<(RationalPolynomial, usize)>,
    /// Roots of the linear factors, ascending.
    pub rational_roots: Vec<(Rational, usize)>,
    pub irreducibility_certified: bool,
}

impl BernsteinPoly {
    pub fn from_poly(p: &RationalPolynomial) -> Self {
        let poly = p.monic();
        let f = factor(&poly);
        BernsteinPoly {
            rational_roots: f.rational_roots(),
            poly,
            factorization: f.factors,
            irreducibility_certified: f.irreducibility_certified,
        }
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }
}

/// Minimal polynomial of `-b^{-1} a` on `E / bE` for a simple-pole module.
pub fn residue_minimal_polynomial(m: &AbModule) -> Result<BernsteinPoly> {
    let t = m.residue_endomorphism()?;
    Ok(BernsteinPoly::from_poly(&minimal_polynomial(&t.neg())))
}

/// `b_E`: computed on the saturation.
pub fn bernstein(e: &AbModule, cfg: &FixedPointConfig) -> Result<BernsteinPoly> {
    residue_minimal_polynomial(&saturate(e, cfg)?.module)
}

/// `b*_E`: computed on the biggest simple-pole submodule.
pub fn dual_bernstein(e: &AbModule, cfg: &FixedPointConfig) -> Result<BernsteinPoly> {
    residue_minimal_polynomial(&biggest_simple_pole_sub(e, cfg)?.module)
}

/// Fractional part in `[0, 1)`.
pub fn fractional_part(q: &Rational) -> Rational {
    q - q.floor()
}

/// Roots (or irreducible factors) identified up to integer shifts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpectralClass {
    Rational {
        /// Representative in `[0, 1)`.
        representative: Rational,
        /// Roots with multiplicities, ascending.
        roots: Vec<(Rational, usize)>,
    },
    /// Irreducible factors of degree > 1 that are integer translates of
    /// each other. `members[i] = (q, mult, m)` with `q(z) = q_0(z - m)`, so
    /// the roots of `q` are those of `q_0` shifted by the integer `m`.
    Symbolic {
        members: Vec<(RationalPolynomial, usize, i64)>,
    },
}

impl SpectralClass {
    pub fn smallest(&self) -> Option<&(Rational, usize)> {
        match self {
            SpectralClass::Rational { roots, .. } => roots.first(),
            SpectralClass::Symbolic { .. } => None,
        }
    }

    pub fn biggest(&self) -> Option<&(Rational, usize)> {
        match self {
            SpectralClass::Rational { roots, .. } => roots.last(),
            SpectralClass::Symbolic { .. } => None,
        }
    }
}

/// The integer `m` with `p(z) = q(z - m)`, if any. Both must be monic.
pub fn integer_shift(q: &RationalPolynomial, p: &RationalPolynomial) -> Option<i64> {
    let d = q.degree();
    if d == 0 || p.degree() != d {
        return None;
    }
    let m = (q.coeff(d - 1) - p.coeff(d - 1)) / int(d as i64);
    if !m.is_integer() {
        return None;
    }
    if q.shift_roots(&m) != *p {
        return None;
    }
    i64::try_from(m.to_integer()).ok()
}

pub fn spectral_classes(p: &BernsteinPoly) -> Vec<SpectralClass> {
    let mut rational: Vec<(Rational, Vec<(Rational, usize)>)> = Vec::new();
    for (root, mult) in &p.rational_roots {
        let rep = fractional_part(root);
        match rational.iter_mut().find(|(r, _)| *r == rep) {
            Some((_, roots)) => roots.push((root.clone(), *mult)),
            None => rational.push((rep, vec![(root.clone(), *mult)])),
        }
    }
    rational.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out: Vec<SpectralClass> = rational
        .into_iter()
        .map(|(representative, mut roots)| {
            roots.sort();
            SpectralClass::Rational {
                representative,
                roots,
            }
        })
        .collect();

    let mut symbolic: Vec<Vec<(RationalPolynomial, usize, i64)>> = Vec::new();
    for (f, mult) in p.factorization.iter().filter(|(f, _)| f.degree() > 1) {
        let home = symbolic
            .iter_mut()
            .find_map(|members| integer_shift(&members[0].0, f).map(|m| (members, m)));
        match home {
            Some((members, m)) => members.push((f.clone(), *mult, m)),
            None => symbolic.push(vec![(f.clone(), *mult, 0)]),
        }
    }
    out.extend(symbolic.into_iter().map(|mut members| {
        members.sort_by_key(|m| m.2);
        SpectralClass::Symbolic { members }
    }));
    out
}

/// Predicted pole from the smallest root of a rational class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolePrediction {
    /// Class of `alpha` modulo the integers, in `[0, 1)`.
    pub class_rep: Rational,
    /// The smallest (most negative) root in the class.
    pub alpha: Rational,
    /// Multiplicity of `alpha` as a root of the minimal polynomial.
    pub d: usize,
    /// `-n - alpha`.
    pub pole_location: Rational,
    pub pole_order_lower_bound: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleReport {
    pub predictions: Vec<PolePrediction>,
    /// Classes of irrational roots, for which no numeric pole is given.
    pub symbolic_classes: Vec<SpectralClass>,
}

pub fn predict_poles(p: &BernsteinPoly, n: u32) -> PoleReport {
    let mut predictions = Vec::new();
    let mut symbolic_classes = Vec::new();
    for class in spectral_classes(p) {
        match &class {
            SpectralClass::Rational {
                representative,
                roots,
            } => {
                let (alpha, d) = roots[0].clone();
                predictions.push(PolePrediction {
                    class_rep: representative.clone(),
                    pole_location: -int(n as i64) - &alpha,
                    alpha,
                    d,
                    pole_order_lower_bound: d,
                });
            }
            SpectralClass::Symbolic { .. } => symbolic_classes.push(class),
        }
    }
    PoleReport {
        predictions,
        symbolic_classes,
    }
}

/// Pole predictions from `b_E`.
pub fn pole_prediction(e: &AbModule, n: u32, cfg: &FixedPointConfig) -> Result<PoleReport> {
    Ok(predict_poles(&bernstein(e, cfg)?, n))
}

/// All rational roots lie strictly between `lo` and `hi`.
pub fn roots_within(p: &BernsteinPoly, lo: &Rational, hi: &Rational) -> bool {
    p.rational_roots.iter().all(|(r, _)| lo < r && r < hi)
}

/// `a` and `b` differ by an integer.
pub fn same_class(a: &Rational, b: &Rational) -> bool {
    (a - b).is_integer()
}
