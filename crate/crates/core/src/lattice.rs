//! Lattices over the truncated ring `Q[[b]] / b^N`.
//!
//! A [`Lattice`] is a finitely generated `Q[[b]]`-submodule of `E[1/b]`,
//! stored as `b^shift * span(gens)` where the generators are column vectors
//! of series known modulo `b^trunc`. The absolute precision is
//! `shift + trunc`: the lattice is determined by its image modulo
//! `b^(shift + trunc) * std` as long as it contains that submodule, which
//! [`Lattice::certify_full_rank`] checks.
//!
//! Generators are kept in a canonical column echelon form:
//!
//! * pivots are chosen greedily by minimal valuation, ties broken by the
//!   lowest row index, then the lowest column;
//! * each pivot entry is exactly `b^v`;
//! * every generator vanishes in the rows pivoted before it and has
//!   valuation `>= v` everywhere else;
//! * entries of a generator in rows pivoted after it are reduced to
//!   polynomials of degree `< v` of that row's pivot;
//! * the shift is normalised so that some pivot is a unit.
//!
//! Two lattices at the same precision are equal iff their canonical forms
//! are identical.

use std::fmt;

use crate::error::{AbError, Result};
use crate::matrix::SeriesMatrix;
use crate::series::{Rational, Series};

/// A vector `b^shift * entries` of `E[1/b]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentVector {
    pub shift: i64,
    pub entries: Vec<Series>,
}

impl LaurentVector {
    pub fn new(shift: i64, entries: Vec<Series>) -> Self {
        LaurentVector { shift, entries }
    }

    /// A vector of `E` itself (shift zero).
    pub fn from_series(entries: Vec<Series>) -> Self {
        Self::new(0, entries)
    }

    /// `b^shift * e_i` with relative truncation `trunc`.
    pub fn basis(rank: usize, i: usize, shift: i64, trunc: usize) -> Self {
        let mut entries = vec![Series::zero(trunc); rank];
        entries[i] = Series::one(trunc);
        Self::new(shift, entries)
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn rel_trunc(&self) -> usize {
        self.entries.iter().map(Series::trunc).min().unwrap_or(0)
    }

    /// The vector is known modulo `b^abs_precision * std`.
    pub fn abs_precision(&self) -> i64 {
        self.shift + self.rel_trunc() as i64
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Series::is_zero)
    }

    /// Minimal valuation of an entry relative to the shift.
    pub fn valuation(&self) -> Option<usize> {
        self.entries.iter().filter_map(Series::valuation).min()
    }

    /// Entries expressed relative to `b^shift`, known modulo `b^(prec - shift)`.
    /// Returns `None` when `shift` exceeds the vector's shift and the
    /// vector is not divisible accordingly.
    pub fn at(&self, shift: i64, prec: i64) -> Option<Vec<Series>> {
        assert!(prec <= self.abs_precision(), "cannot raise precision");
        let n = usize::try_from(prec - shift).unwrap_or(0);
        if shift <= self.shift {
            let up = (self.shift - shift) as usize;
            Some(
                self.entries
                    .iter()
                    .map(|s| s.mul_b_pow(up).with_trunc(n))
                    .collect(),
            )
        } else {
            let down = (shift - self.shift) as usize;
            self.entries
                .iter()
                .map(|s| s.div_b_pow(down).map(|d| d.with_trunc(n)))
                .collect()
        }
    }

    pub fn scale_b(&self, k: i64) -> LaurentVector {
        LaurentVector::new(self.shift + k, self.entries.clone())
    }
}

impl fmt::Debug for LaurentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e: Vec<String> = self.entries.iter().map(ToString::to_string).collect();
        write!(
            f,
            "b^{} * ({}) [rel trunc {}]",
            self.shift,
            e.join(", "),
            self.rel_trunc()
        )
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    rank: usize,
    shift: i64,
    trunc: usize,
    /// Canonical generators sorted by pivot row.
    gens: Vec<Vec<Series>>,
    /// `(row, valuation)` of each generator's pivot.
    pivots: Vec<(usize, usize)>,
    /// Indices into `gens` in pivot selection order.
    order: Vec<usize>,
}

fn lin_comb_sub(target: &mut [Series], coeff: &Series, col: &[Series]) {
    for (t, c) in target.iter_mut().zip(col) {
        if !c.is_zero() {
            *t = &*t - &(coeff * c);
        }
    }
}

impl Lattice {
    /// The standard lattice `E` itself.
    pub fn standard(rank: usize, trunc: usize) -> Self {
        let gens = (0..rank)
            .map(|i| LaurentVector::basis(rank, i, 0, trunc).entries)
            .collect();
        Self::from_columns(rank, 0, trunc, gens)
    }

    /// Canonical form of `b^shift * span(cols)` with every entry taken
    /// modulo `b^trunc`.
    pub fn from_columns(rank: usize, shift: i64, trunc: usize, cols: Vec<Vec<Series>>) -> Self {
        let cols: Vec<Vec<Series>> = cols
            .into_iter()
            .map(|c| {
                assert_eq!(c.len(), rank, "generator has wrong rank");
                c.iter().map(|s| s.with_trunc(trunc)).collect()
            })
            .collect();
        canonicalize(rank, shift, trunc, cols)
    }

    /// Span of Laurent vectors at their common shift and precision.
    pub fn span(rank: usize, vectors: &[LaurentVector]) -> Self {
        assert!(
            !vectors.is_empty(),
            "span of no vectors needs an explicit precision"
        );
        let shift = vectors.iter().map(|v| v.shift).min().unwrap();
        let prec = vectors
            .iter()
            .map(LaurentVector::abs_precision)
            .min()
            .unwrap();
        Self::span_at(rank, shift, prec, vectors)
    }

    /// Span at an explicit shift and absolute precision.
    pub fn span_at(rank: usize, shift: i64, prec: i64, vectors: &[LaurentVector]) -> Self {
        let trunc = usize::try_from(prec - shift).unwrap_or(0);
        let cols = vectors
            .iter()
            .map(|v| v.at(shift, prec).expect("vector below the requested shift"))
            .collect();
        Self::from_columns(rank, shift, trunc, cols)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// Relative truncation of the generators.
    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn abs_precision(&self) -> i64 {
        self.shift + self.trunc as i64
    }

    pub fn gens(&self) -> &[Vec<Series>] {
        &self.gens
    }

    pub fn pivots(&self) -> &[(usize, usize)] {
        &self.pivots
    }

    pub fn laurent_gens(&self) -> Vec<LaurentVector> {
        self.gens
            .iter()
            .map(|g| LaurentVector::new(self.shift, g.clone()))
            .collect()
    }

    /// Generator matrix (columns are the canonical generators, relative to
    /// `b^shift`).
    pub fn generator_matrix(&self) -> SeriesMatrix {
        SeriesMatrix::from_cols(self.rank, &self.gens)
    }

    /// Sum of pivot valuations: the valuation of the generator determinant.
    pub fn index_valuation(&self) -> usize {
        self.pivots.iter().map(|p| p.1).sum()
    }

    pub fn is_full_rank(&self) -> bool {
        self.pivots.len() == self.rank
    }

    /// Check that the lattice has full rank and contains
    /// `b^abs_precision * std`, so that the truncated canonical form
    /// describes it exactly.
    pub fn certify_full_rank(&self) -> Result<()> {
        if !self.is_full_rank() {
            return Err(AbError::precision(
                format!(
                    "lattice has only {} certified pivots in rank {}",
                    self.pivots.len(),
                    self.rank
                ),
                self.trunc,
            ));
        }
        if self.rank > 0 && self.index_valuation() >= self.trunc {
            return Err(AbError::precision(
                format!(
                    "lattice index valuation {} not below truncation",
                    self.index_valuation()
                ),
                self.trunc,
            ));
        }
        Ok(())
    }

    /// `b^k * L`, an O(1) change of shift.
    pub fn scale_b(&self, k: i64) -> Lattice {
        let mut l = self.clone();
        l.shift += k;
        l
    }

    /// Canonical form re-computed at a lower absolute precision.
    pub fn at_precision(&self, prec: i64) -> Lattice {
        if prec == self.abs_precision() {
            return self.clone();
        }
        assert!(
            prec < self.abs_precision(),
            "cannot raise lattice precision"
        );
        if self.gens.is_empty() {
            let mut l = self.clone();
            l.trunc = usize::try_from(prec - self.shift).unwrap_or(0);
            return l;
        }
        Self::span_at(self.rank, self.shift, prec, &self.laurent_gens())
    }

    /// Equality at the common absolute precision of both lattices.
    pub fn same_as(&self, other: &Lattice) -> bool {
        let p = self.abs_precision().min(other.abs_precision());
        let a = self.at_precision(p);
        let b = other.at_precision(p);
        a.shift == b.shift && a.gens == b.gens
    }

    /// Membership of `x` at the common precision, by reduction against the
    /// canonical generators.
    pub fn member(&self, x: &LaurentVector) -> bool {
        assert_eq!(x.rank(), self.rank, "ambient rank mismatch");
        let prec = self.abs_precision().min(x.abs_precision());
        let n = usize::try_from(prec - self.shift).unwrap_or(0);
        if n == 0 {
            return true;
        }
        let Some(mut y) = x.at(self.shift, prec) else {
            return false;
        };
        for &j in &self.order {
            let (row, v) = self.pivots[j];
            let Some(val) = y[row].valuation() else {
                continue;
            };
            if val < v {
                return false;
            }
            let q = y[row].tail(v).lift(n);
            let g: Vec<Series> = self.gens[j].iter().map(|s| s.with_trunc(n)).collect();
            lin_comb_sub(&mut y, &q, &g);
        }
        y.iter().all(Series::is_zero)
    }

    pub fn member_series(&self, x: &[Series]) -> bool {
        self.member(&LaurentVector::from_series(x.to_vec()))
    }

    /// `self ⊇ other`, generator by generator.
    pub fn contains(&self, other: &Lattice) -> bool {
        other.laurent_gens().iter().all(|g| self.member(g))
    }

    /// `L1 + L2`.
    pub fn sum(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.rank, other.rank, "ambient rank mismatch");
        let shift = self.shift.min(other.shift);
        let prec = self.abs_precision().min(other.abs_precision());
        let mut vecs = self.laurent_gens();
        vecs.extend(other.laurent_gens());
        if vecs.is_empty() {
            let mut l = self.clone();
            l.shift = shift;
            l.trunc = usize::try_from(prec - shift).unwrap_or(0);
            return l;
        }
        Self::span_at(self.rank, shift, prec, &vecs)
    }

    /// `L + span(vectors)`.
    pub fn extend(&self, vectors: &[LaurentVector]) -> Lattice {
        if vectors.is_empty() {
            return self.clone();
        }
        let shift = vectors
            .iter()
            .map(|v| v.shift)
            .min()
            .unwrap()
            .min(self.shift);
        let prec = vectors
            .iter()
            .map(LaurentVector::abs_precision)
            .min()
            .unwrap()
            .min(self.abs_precision());
        let mut all = self.laurent_gens();
        all.extend_from_slice(vectors);
        Self::span_at(self.rank, shift, prec, &all)
    }

    /// Coordinates of `y` with respect to the canonical generators (in the
    /// stored order). Each coordinate loses the valuation of its pivot.
    pub fn coordinates(&self, y: &LaurentVector) -> Result<Vec<Series>> {
        let prec = self.abs_precision().min(y.abs_precision());
        let n = usize::try_from(prec - self.shift).unwrap_or(0);
        let not_member = || AbError::DimensionMismatch("vector is not in the lattice".into());
        let mut rest = y.at(self.shift, prec).ok_or_else(not_member)?;
        let mut coords = vec![Series::zero(n); self.gens.len()];
        for &j in &self.order {
            let (row, v) = self.pivots[j];
            let z = rest[row].div_b_pow(v).ok_or_else(not_member)?;
            let g: Vec<Series> = self.gens[j].iter().map(|s| s.with_trunc(n)).collect();
            lin_comb_sub(&mut rest, &z.lift(n), &g);
            coords[j] = z;
        }
        if !rest.iter().all(Series::is_zero) {
            return Err(not_member());
        }
        let m = coords.iter().map(Series::trunc).min().unwrap_or(n);
        Ok(coords.into_iter().map(|c| c.truncate(m)).collect())
    }

    /// `{ x in L : sum_j y_j images[j] in target }` where `x = sum_j y_j g_j`
    /// over the canonical generators `g_j` of `L`. `images[j]` is the image
    /// of `g_j` under an arbitrary `Q[[b]]`-linear map.
    pub fn preimage_of_images(
        &self,
        images: &[LaurentVector],
        target: &Lattice,
    ) -> Result<Lattice> {
        assert_eq!(images.len(), self.gens.len(), "one image per generator");
        let k = target.rank;
        let r = self.gens.len();
        let top_shift = images
            .iter()
            .map(|v| v.shift)
            .min()
            .unwrap_or(target.shift)
            .min(target.shift);
        let top_prec = images
            .iter()
            .map(LaurentVector::abs_precision)
            .min()
            .unwrap_or(i64::MAX)
            .min(target.abs_precision());
        let n = usize::try_from(top_prec - top_shift).unwrap_or(0);
        if n == 0 {
            return Err(AbError::precision(
                "preimage target has no precision left",
                0,
            ));
        }

        // Columns are (top: image in the target's ambient | bottom: coefficient vector).
        let mut cols: Vec<Vec<Series>> = Vec::with_capacity(r + target.gens.len());
        for (j, img) in images.iter().enumerate() {
            let mut c = img
                .at(top_shift, top_prec)
                .expect("image below its own shift");
            c.extend((0..r).map(|i| {
                if i == j {
                    Series::one(n)
                } else {
                    Series::zero(n)
                }
            }));
            cols.push(c);
        }
        for g in target.laurent_gens() {
            let mut c = g
                .at(top_shift, top_prec)
                .expect("generator below its own shift");
            c.extend((0..r).map(|_| Series::zero(n)));
            cols.push(c);
        }

        let (pivoted, rest) = eliminate(&mut cols, k, n);
        let mut kernel: Vec<Vec<Series>> = rest.into_iter().map(|c| c[k..].to_vec()).collect();
        for (_, v, c) in pivoted {
            let fill: Vec<Series> = c[k..]
                .iter()
                .map(|s| s.mul_b_pow(n - v).with_trunc(n))
                .collect();
            kernel.push(fill);
        }

        let out_trunc = n.min(self.trunc);
        let xs: Vec<Vec<Series>> = kernel
            .iter()
            .map(|y| {
                let mut x = vec![Series::zero(out_trunc); k];
                for (yj, g) in y.iter().zip(&self.gens) {
                    if yj.is_zero() {
                        continue;
                    }
                    let yj = yj.with_trunc(out_trunc);
                    for (xi, gi) in x.iter_mut().zip(g) {
                        *xi = &*xi + &(&yj * &gi.with_trunc(out_trunc));
                    }
                }
                x
            })
            .collect();
        Ok(Self::from_columns(self.rank, self.shift, out_trunc, xs))
    }

    /// `{ x in L : M x in L' }` for a `Q[[b]]`-linear map given by `M`.
    pub fn preimage(&self, m: &SeriesMatrix, target: &Lattice) -> Result<Lattice> {
        let images: Vec<LaurentVector> = self
            .gens
            .iter()
            .map(|g| LaurentVector::new(self.shift, m.mul_vec(g)))
            .collect();
        self.preimage_of_images(&images, target)
    }

    /// Representatives of a basis of the finite-dimensional space `L / bL`:
    /// the images of the canonical generators.
    pub fn quotient_mod_b(&self) -> Result<Vec<LaurentVector>> {
        self.certify_full_rank()?;
        Ok(self.laurent_gens())
    }

    /// The lattice is the standard one `E` (shift 0, identity generators).
    pub fn is_standard(&self) -> bool {
        self.shift == 0
            && self.is_full_rank()
            && self.pivots.iter().all(|&(_, v)| v == 0)
            && self.gens.iter().enumerate().all(|(j, g)| {
                g.iter().enumerate().all(|(i, s)| {
                    if i == j {
                        s.coeffs()[0] == Rational::from_integer(1.into()) && s.tail(1).is_zero()
                    } else {
                        s.is_zero()
                    }
                })
            })
    }
}

/// A pivot column: `(row, valuation, column)`.
type Pivot = (usize, usize, Vec<Series>);

/// Greedy valuation-pivot elimination restricted to rows `0..rows` of the
/// given columns (which may be longer). Returns the pivot columns as
/// `(row, valuation, column)` in selection order, and the remaining
/// columns, which vanish on those rows.
fn eliminate(cols: &mut Vec<Vec<Series>>, rows: usize, n: usize) -> (Vec<Pivot>, Vec<Vec<Series>>) {
    let mut active: Vec<Vec<Series>> = std::mem::take(cols)
        .into_iter()
        .filter(|c| c.iter().any(|s| !s.is_zero()))
        .collect();
    let mut assigned = vec![false; rows];
    let mut pivoted = Vec::new();
    loop {
        let mut best: Option<(usize, usize, usize)> = None;
        for (ci, c) in active.iter().enumerate() {
            for (row, done) in assigned.iter().enumerate() {
                if *done {
                    continue;
                }
                if let Some(v) = c[row].valuation() {
                    let cand = (v, row, ci);
                    if best.is_none_or(|b| cand < b) {
                        best = Some(cand);
                    }
                }
            }
        }
        let Some((v, row, ci)) = best else { break };
        let mut p = active.remove(ci);
        let unit = p[row].tail(v).lift(n);
        let inv = unit.invert_unit().expect("pivot unit part is invertible");
        for s in p.iter_mut() {
            if !s.is_zero() {
                *s = &*s * &inv;
            }
        }
        p[row] = Series::monomial(Rational::from_integer(1.into()), v, n);
        for c in active.iter_mut() {
            if c[row].is_zero() {
                continue;
            }
            debug_assert!(c[row].valuation().unwrap() >= v);
            let q = c[row].tail(v).lift(n);
            lin_comb_sub(c, &q, &p);
            c[row] = Series::zero(n);
        }
        active.retain(|c| c.iter().any(|s| !s.is_zero()));
        assigned[row] = true;
        pivoted.push((row, v, p));
    }
    (pivoted, active)
}

fn canonicalize(rank: usize, shift: i64, trunc: usize, cols: Vec<Vec<Series>>) -> Lattice {
    let mut cols = cols;
    let (mut pivoted, rest) = eliminate(&mut cols, rank, trunc);
    debug_assert!(
        rest.is_empty(),
        "columns vanishing on all rows must be zero"
    );

    // Reduce entries in later pivot rows modulo that row's pivot.
    for j in 0..pivoted.len() {
        for l in j + 1..pivoted.len() {
            let (row_l, v_l) = (pivoted[l].0, pivoted[l].1);
            let x = &pivoted[j].2[row_l];
            if x.valuation().is_none_or(|val| val >= trunc) {
                continue;
            }
            let q = x.tail(v_l).lift(trunc);
            if q.is_zero() {
                continue;
            }
            let pl = pivoted[l].2.clone();
            lin_comb_sub(&mut pivoted[j].2, &q, &pl);
        }
    }

    let (mut shift, mut trunc) = (shift, trunc);
    let vmin = pivoted.iter().map(|p| p.1).min().unwrap_or(0);
    if vmin > 0 {
        for (_, v, c) in pivoted.iter_mut() {
            *v -= vmin;
            for s in c.iter_mut() {
                *s = s
                    .div_b_pow(vmin)
                    .expect("all entries divisible by the minimal pivot");
            }
        }
        shift += vmin as i64;
        trunc -= vmin;
    }

    let mut idx: Vec<usize> = (0..pivoted.len()).collect();
    idx.sort_by_key(|&i| pivoted[i].0);
    // order[k] = position in sorted gens of the k-th selected pivot
    let mut pos = vec![0; pivoted.len()];
    for (sorted_pos, &sel) in idx.iter().enumerate() {
        pos[sel] = sorted_pos;
    }
    let gens = idx.iter().map(|&i| pivoted[i].2.clone()).collect();
    let pivots = idx.iter().map(|&i| (pivoted[i].0, pivoted[i].1)).collect();
    Lattice {
        rank,
        shift,
        trunc,
        gens,
        pivots,
        order: pos,
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "Lattice rank {} shift {} trunc {} pivots {:?} [",
            self.rank, self.shift, self.trunc, self.pivots
        )?;
        for g in &self.gens {
            let e: Vec<String> = g.iter().map(ToString::to_string).collect();
            writeln!(f, "  ({})", e.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Canonical form of a lattice (re-derived from its generators).
pub fn canonical_form(l: &Lattice) -> Lattice {
    Lattice::from_columns(l.rank, l.shift, l.trunc, l.gens.clone())
}
