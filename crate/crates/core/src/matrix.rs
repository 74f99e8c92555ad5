//! Dense matrices over the truncated series ring and over the rationals.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{AbError, Result};
use crate::series::{int, Rational, Series};

/// A `rows x cols` matrix of series. Entries are stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SeriesMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Series>,
}

impl SeriesMatrix {
    pub fn zero(rows: usize, cols: usize, trunc: usize) -> Self {
        SeriesMatrix {
            rows,
            cols,
            entries: vec![Series::zero(trunc); rows * cols],
        }
    }

    pub fn identity(n: usize, trunc: usize) -> Self {
        let mut m = Self::zero(n, n, trunc);
        for i in 0..n {
            m.set(i, i, Series::one(trunc));
        }
        m
    }

    /// Build from row vectors. All rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<Series>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        SeriesMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    /// Build from column vectors of equal length `rows`.
    pub fn from_cols(rows: usize, cols: &[Vec<Series>]) -> Self {
        let c = cols.len();
        let mut entries = Vec::with_capacity(rows * c);
        for i in 0..rows {
            for col in cols {
                entries.push(col[i].clone());
            }
        }
        SeriesMatrix {
            rows,
            cols: c,
            entries,
        }
    }

    /// Diagonal matrix with the given entries.
    pub fn diagonal(diag: &[Series]) -> Self {
        let n = diag.len();
        let trunc = diag.iter().map(Series::trunc).min().unwrap_or(0);
        let mut m = Self::zero(n, n, trunc);
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, d.with_trunc(trunc));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Minimum truncation over the entries (0 for an empty matrix).
    pub fn trunc(&self) -> usize {
        self.entries.iter().map(Series::trunc).min().unwrap_or(0)
    }

    pub fn get(&self, i: usize, j: usize) -> &Series {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, s: Series) {
        self.entries[i * self.cols + j] = s;
    }

    pub fn col(&self, j: usize) -> Vec<Series> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Series>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn row(&self, i: usize) -> &[Series] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Series] {
        &self.entries
    }

    pub fn map(&self, f: impl Fn(&Series) -> Series) -> SeriesMatrix {
        SeriesMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    /// Bring every entry to truncation `n` (truncating or zero-padding).
    pub fn with_trunc(&self, n: usize) -> SeriesMatrix {
        self.map(|s| s.with_trunc(n))
    }

    pub fn transpose(&self) -> SeriesMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        SeriesMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn add(&self, other: &SeriesMatrix) -> SeriesMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        SeriesMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &SeriesMatrix) -> SeriesMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        SeriesMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> SeriesMatrix {
        self.map(|s| -s)
    }

    pub fn scale(&self, c: &Rational) -> SeriesMatrix {
        self.map(|s| s.scale(c))
    }

    pub fn mul(&self, other: &SeriesMatrix) -> SeriesMatrix {
        assert_eq!(self.cols, other.rows, "matrix shapes do not compose");
        let n = self.trunc().min(other.trunc());
        let mut out = SeriesMatrix::zero(self.rows, other.cols, n);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.entries[idx] = &out.entries[idx] + &(a * b);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[Series]) -> Vec<Series> {
        assert_eq!(self.cols, x.len());
        let n = self
            .trunc()
            .min(x.iter().map(Series::trunc).min().unwrap_or(usize::MAX));
        (0..self.rows)
            .map(|i| {
                let mut acc = Series::zero(n);
                for (k, xk) in x.iter().enumerate() {
                    let a = self.get(i, k);
                    if !a.is_zero() && !xk.is_zero() {
                        acc = &acc + &(a * xk);
                    }
                }
                acc
            })
            .collect()
    }

    /// Kronecker product, row-major block layout.
    pub fn kron(&self, other: &SeriesMatrix) -> SeriesMatrix {
        let n = self.trunc().min(other.trunc());
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = SeriesMatrix::zero(rows, cols, n);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for p in 0..other.rows {
                    for q in 0..other.cols {
                        let b = other.get(p, q);
                        if !b.is_zero() {
                            out.set(i * other.rows + p, j * other.cols + q, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    /// Entrywise derivative.
    pub fn derivative(&self) -> SeriesMatrix {
        self.map(Series::derivative)
    }

    pub fn mul_b_pow(&self, k: usize) -> SeriesMatrix {
        self.map(|s| s.mul_b_pow(k))
    }

    /// Entrywise substitution `b -> -b`.
    pub fn negate_variable(&self) -> SeriesMatrix {
        self.map(Series::negate_variable)
    }

    /// Rational matrix of the coefficients of `b^m`.
    pub fn coefficient(&self, m: usize) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.entries.iter().map(|s| s.coeff(m)).collect(),
        }
    }

    /// Constant term `M(0)`.
    pub fn at_zero(&self) -> QMatrix {
        self.coefficient(0)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Series::is_zero)
    }

    /// Minimum valuation over all entries, `None` if zero at precision.
    pub fn valuation(&self) -> Option<usize> {
        self.entries.iter().filter_map(Series::valuation).min()
    }

    /// `det M(0)`. The matrix is invertible over `Q[[b]]` iff this is nonzero.
    pub fn det_at_zero(&self) -> Rational {
        self.at_zero().det()
    }

    /// Embed a rational matrix as constant series.
    pub fn from_constant(m: &QMatrix, trunc: usize) -> SeriesMatrix {
        SeriesMatrix {
            rows: m.rows,
            cols: m.cols,
            entries: m
                .data
                .iter()
                .map(|c| Series::constant(c.clone(), trunc))
                .collect(),
        }
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, other: &SeriesMatrix) -> SeriesMatrix {
        let n = self.trunc().min(other.trunc());
        let mut out = SeriesMatrix::zero(self.rows + other.rows, self.cols + other.cols, n);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).with_trunc(n));
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).with_trunc(n));
            }
        }
        out
    }
}

impl fmt::Debug for SeriesMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "SeriesMatrix {}x{} (trunc {}) [",
            self.rows,
            self.cols,
            self.trunc()
        )?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Dense rational matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        QMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn diagonal(diag: &[Rational]) -> Self {
        let n = diag.len();
        let mut m = Self::zero(n, n);
        for (i, d) in diag.iter().enumerate() {
            m.data[i * n + i] = d.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn data(&self) -> &[Rational] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn col(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn neg(&self) -> QMatrix {
        self.scale(&int(-1))
    }

    /// `self + c * I`.
    pub fn add_scalar(&self, c: &Rational) -> QMatrix {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        for i in 0..self.rows {
            let v = m.get(i, i) + c;
            m.set(i, i, v);
        }
        m
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = QMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, x.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Rational::zero();
                for (k, xk) in x.iter().enumerate() {
                    let a = self.get(i, k);
                    if !a.is_zero() && !xk.is_zero() {
                        acc += a * xk;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, e: usize) -> QMatrix {
        let mut out = QMatrix::identity(self.rows);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .sum()
    }

    pub fn transpose(&self) -> QMatrix {
        let mut out = QMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Reduced row echelon form and the list of pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = m.get(i, j) - &f * m.get(r, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space, one vector per free column, in
    /// increasing order of the free column.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r.get(row, f).clone();
                }
                v
            })
            .collect()
    }

    pub fn det(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                m.swap_rows(c, p);
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det *= &piv;
            let inv = piv.recip();
            for i in c + 1..n {
                let f = m.get(i, c) * &inv;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m.get(i, j) - &f * m.get(c, j);
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    /// Solve `self * x = rhs` for an invertible square matrix.
    pub fn solve(&self, rhs: &[Rational]) -> Result<Vec<Rational>> {
        let n = self.rows;
        if self.cols != n || rhs.len() != n {
            return Err(AbError::DimensionMismatch(
                "solve needs a square system".into(),
            ));
        }
        let mut aug = QMatrix::zero(n, n + 1);
        for (i, r) in rhs.iter().enumerate() {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n, r.clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[..n] != (0..n).collect::<Vec<_>>()[..] {
            return Err(AbError::DimensionMismatch("singular system".into()));
        }
        Ok((0..n).map(|i| r.get(i, n).clone()).collect())
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;

    fn q(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| int(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn det_and_solve() {
        let m = q(&[&[2, 1], &[1, 1]]);
        assert_eq!(m.det(), int(1));
        assert_eq!(m.solve(&[int(3), int(2)]).unwrap(), vec![int(1), int(1)]);
        assert_eq!(q(&[&[1, 2], &[2, 4]]).det(), int(0));
    }

    #[test]
    fn nullspace_basis() {
        let m = q(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn kronecker_layout() {
        let t = 3;
        let a = SeriesMatrix::from_rows(vec![
            vec![Series::from_ints(&[1], t), Series::from_ints(&[2], t)],
            vec![Series::from_ints(&[0], t), Series::from_ints(&[3], t)],
        ]);
        let i = SeriesMatrix::identity(2, t);
        let k = a.kron(&i);
        assert_eq!(k.get(0, 2), &Series::from_ints(&[2], t));
        assert_eq!(k.get(1, 3), &Series::from_ints(&[2], t));
        assert!(k.get(0, 3).is_zero());
    }

    #[test]
    fn trace_of_diagonal() {
        let d = QMatrix::diagonal(&[rat(1, 2), rat(1, 3)]);
        assert_eq!(d.trace(), rat(5, 6));
    }
}
