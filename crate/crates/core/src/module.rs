//! The (a,b)-module type and the a-action.

use std::fmt;

use crate::error::{AbError, Result};
use crate::lattice::{Lattice, LaurentVector};
use crate::matrix::{QMatrix, SeriesMatrix};
use crate::series::{int, Series};

/// Default working truncation for a module of rank `k`.
pub fn default_trunc(rank: usize) -> usize {
    4 * rank + 10
}

/// A free `Q[[b]]`-module of rank `k` with `a(x) = A x + b^2 x'`, where
/// column `j` of `A` is `a(e_j)`.
///
/// `exact` marks a module whose a-matrix is polynomial and known exactly,
/// so that it may be re-read at any higher truncation by zero padding.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AbModule {
    a: SeriesMatrix,
    trunc: usize,
    exact: bool,
}

impl AbModule {
    /// A module whose a-matrix is exact at any truncation.
    pub fn new(a: SeriesMatrix) -> Result<Self> {
        Self::build(a, true)
    }

    /// A module known only modulo `b^trunc`.
    pub fn truncated(a: SeriesMatrix) -> Result<Self> {
        Self::build(a, false)
    }

    fn build(a: SeriesMatrix, exact: bool) -> Result<Self> {
        if !a.is_square() {
            return Err(AbError::DimensionMismatch(format!(
                "a-matrix is {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        let trunc = a.trunc();
        Ok(AbModule { a, trunc, exact })
    }

    /// The rank-zero module, kept at a nominal truncation.
    pub fn empty(trunc: usize) -> Self {
        AbModule {
            a: SeriesMatrix::zero(0, 0, trunc),
            trunc,
            exact: true,
        }
    }

    pub fn rank(&self) -> usize {
        self.a.rows()
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn a_matrix(&self) -> &SeriesMatrix {
        &self.a
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// The same module read at truncation `n`. Raising the truncation is
    /// only possible for exact modules.
    pub fn at_trunc(&self, n: usize) -> Result<AbModule> {
        if n > self.trunc && !self.exact {
            return Err(AbError::precision(
                "module is only known at its stored truncation",
                self.trunc,
            ));
        }
        Ok(AbModule {
            a: self.a.with_trunc(n),
            trunc: n,
            exact: self.exact,
        })
    }

    /// `a(x) = A x + b^2 x'`.
    pub fn apply_a(&self, x: &[Series]) -> Vec<Series> {
        assert_eq!(x.len(), self.rank(), "vector has wrong rank");
        let ax = self.a.mul_vec(x);
        ax.into_iter()
            .zip(x)
            .map(|(s, xi)| &s + &xi.derivative().mul_b_pow(2))
            .collect()
    }

    /// `a(b^s y) = b^s (A y + b^2 y' + s b y)`.
    pub fn apply_a_laurent(&self, x: &LaurentVector) -> LaurentVector {
        let mut out = self.apply_a(&x.entries);
        if x.shift != 0 {
            let s = int(x.shift);
            for (o, y) in out.iter_mut().zip(&x.entries) {
                *o = &*o + &y.mul_b_pow(1).scale(&s);
            }
        }
        LaurentVector::new(x.shift, out)
    }

    /// `A(0) = 0`.
    pub fn is_simple_pole(&self) -> bool {
        self.a.at_zero().is_zero()
    }

    /// The matrix of `b^{-1} a` on `E / bE`.
    pub fn residue_endomorphism(&self) -> Result<QMatrix> {
        if !self.is_simple_pole() {
            return Err(AbError::NotSimplePole);
        }
        if self.rank() > 0 && self.trunc < 2 {
            return Err(AbError::precision(
                "residue needs the b^1 coefficient",
                self.trunc,
            ));
        }
        Ok(self.a.coefficient(1))
    }

    /// `A(b) -> -A(-b)`.
    pub fn twist(&self) -> AbModule {
        AbModule {
            a: self.a.negate_variable().neg(),
            trunc: self.trunc,
            exact: self.exact,
        }
    }

    pub fn direct_sum(&self, other: &AbModule) -> AbModule {
        let trunc = self.trunc.min(other.trunc);
        AbModule {
            a: self
                .a
                .with_trunc(trunc)
                .direct_sum(&other.a.with_trunc(trunc)),
            trunc,
            exact: self.exact && other.exact,
        }
    }

    /// The a-matrix of the sub-lattice `L` (which must be a-stable) in its
    /// canonical generators.
    pub fn restrict_to(&self, lattice: &Lattice) -> Result<AbModule> {
        lattice.certify_full_rank()?;
        if lattice.is_standard() {
            return Ok(AbModule {
                a: self.a.with_trunc(lattice.trunc().min(self.trunc)),
                trunc: lattice.trunc().min(self.trunc),
                exact: false,
            });
        }
        let mut cols = Vec::with_capacity(lattice.gens().len());
        for g in lattice.laurent_gens() {
            let image = self.apply_a_laurent(&g);
            cols.push(
                lattice.coordinates(&image).map_err(|_| {
                    AbError::DimensionMismatch("lattice is not stable under a".into())
                })?,
            );
        }
        let n = cols
            .iter()
            .flat_map(|c| c.iter().map(Series::trunc))
            .min()
            .unwrap_or(self.trunc);
        let cols: Vec<Vec<Series>> = cols
            .into_iter()
            .map(|c| c.into_iter().map(|s| s.truncate(n)).collect())
            .collect();
        let a = SeriesMatrix::from_cols(lattice.rank(), &cols);
        Ok(AbModule {
            a,
            trunc: n,
            exact: false,
        })
    }
}

impl fmt::Debug for AbModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "AbModule rank {} trunc {}{} {:?}",
            self.rank(),
            self.trunc,
            if self.exact { " exact" } else { "" },
            self.a
        )
    }
}
