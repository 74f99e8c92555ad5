//! Brute-force oracles over finite-dimensional rational vector spaces.
//!
//! A Laurent vector is a dense coordinate vector over the monomials
//! `b^t e_i` for `lo <= t < hi`, index `(t - lo) * k + i`. Everything
//! of degree `>= hi` is dropped. None of this uses the lattice code.

#![allow(dead_code)]

use abmod_core::{AbModule, Rational, Series};
use num_traits::{One, Zero};

pub type QVec = Vec<Rational>;

/// Polynomial coefficients `A_m` of an exact a-matrix.
pub fn a_coefficients(m: &AbModule) -> Vec<Vec<Vec<Rational>>> {
    let a = m.a_matrix();
    let k = m.rank();
    (0..m.trunc())
        .map(|d| {
            (0..k)
                .map(|i| (0..k).map(|j| a.get(i, j).coeff(d)).collect())
                .collect()
        })
        .collect()
}

#[derive(Clone)]
pub struct Space {
    pub k: usize,
    pub lo: i64,
    pub hi: i64,
}

impl Space {
    pub fn dim(&self) -> usize {
        self.k * (self.hi - self.lo) as usize
    }

    pub fn idx(&self, t: i64, i: usize) -> Option<usize> {
        (self.lo <= t && t < self.hi).then(|| (t - self.lo) as usize * self.k + i)
    }

    pub fn unit(&self, t: i64, i: usize) -> QVec {
        let mut v = vec![Rational::zero(); self.dim()];
        v[self.idx(t, i).unwrap()] = Rational::one();
        v
    }

    fn monomials(&self, v: &QVec) -> impl Iterator<Item = (i64, usize, Rational)> + '_ {
        let k = self.k;
        let lo = self.lo;
        v.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(p, c)| (lo + (p / k) as i64, p % k, c.clone()))
            .collect::<Vec<_>>()
            .into_iter()
    }

    /// `b^s v`, dropping what leaves the window.
    pub fn shift(&self, v: &QVec, s: i64) -> QVec {
        let mut out = vec![Rational::zero(); self.dim()];
        for (t, i, c) in self.monomials(v) {
            if let Some(p) = self.idx(t + s, i) {
                out[p] += c;
            }
        }
        out
    }

    /// `a(b^t e_i) = b^t sum_m b^m A_m e_i + t b^{t+1} e_i`.
    pub fn apply_a(&self, a: &[Vec<Vec<Rational>>], v: &QVec) -> QVec {
        let mut out = vec![Rational::zero(); self.dim()];
        for (t, i, c) in self.monomials(v) {
            for (m, am) in a.iter().enumerate() {
                for (r, row) in am.iter().enumerate() {
                    if row[i].is_zero() {
                        continue;
                    }
                    if let Some(p) = self.idx(t + m as i64, r) {
                        out[p] += &c * &row[i];
                    }
                }
            }
            if let Some(p) = self.idx(t + 1, i) {
                out[p] += &c * Rational::from_integer(t.into());
            }
        }
        out
    }

    /// All monomials of degree `>= from`.
    pub fn tail(&self, from: i64) -> Vec<QVec> {
        (from.max(self.lo)..self.hi)
            .flat_map(|t| (0..self.k).map(move |i| (t, i)))
            .map(|(t, i)| self.unit(t, i))
            .collect()
    }
}

/// Row-reduced basis of a subspace.
#[derive(Clone, Default)]
pub struct Basis {
    rows: Vec<(usize, QVec)>,
}

impl Basis {
    pub fn from_vectors(vs: impl IntoIterator<Item = QVec>) -> Self {
        let mut b = Basis::default();
        for v in vs {
            b.insert(v);
        }
        b
    }

    pub fn reduce(&self, v: &QVec) -> QVec {
        let mut v = v.clone();
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let c = v[*p].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    *x -= &c * r;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &QVec) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Returns true when the space grew.
    pub fn insert(&mut self, v: QVec) -> bool {
        let mut v = self.reduce(&v);
        let Some(p) = v.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let lead = v[p].clone();
        for x in v.iter_mut() {
            *x /= &lead;
        }
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let c = row[p].clone();
                for (x, r) in row.iter_mut().zip(&v) {
                    *x -= &c * r;
                }
            }
        }
        self.rows.push((p, v));
        true
    }

    pub fn vectors(&self) -> Vec<QVec> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }
}

/// Coordinates of `v` in the family `gens`, if it lies in their span.
pub fn solve(gens: &[QVec], v: &QVec) -> Option<Vec<Rational>> {
    let n = gens.len();
    let dim = v.len();
    // Augmented columns: [gens | v], reduce rows.
    let mut m: Vec<Vec<Rational>> = (0..dim)
        .map(|r| {
            let mut row: Vec<Rational> = gens.iter().map(|g| g[r].clone()).collect();
            row.push(v[r].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..dim).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let lead = m[row][col].clone();
        for x in m[row].iter_mut() {
            *x /= &lead;
        }
        for r in 0..dim {
            if r != row && !m[r][col].is_zero() {
                let c = m[r][col].clone();
                let pivot_row = m[row].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot_row) {
                    *x -= &c * y;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if (row..dim).any(|r| !m[r][n].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][n].clone();
    }
    Some(x)
}

/// Monic minimal polynomial (ascending coefficients) by finding the first
/// power of `t` in the span of the lower ones.
pub fn min_poly(t: &[Vec<Rational>]) -> Vec<Rational> {
    let k = t.len();
    let mul = |a: &[Vec<Rational>], b: &[Vec<Rational>]| -> Vec<Vec<Rational>> {
        (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| (0..k).map(|l| &a[i][l] * &b[l][j]).sum())
                    .collect()
            })
            .collect()
    };
    let flat = |m: &[Vec<Rational>]| -> QVec { m.iter().flatten().cloned().collect() };
    let identity: Vec<Vec<Rational>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mut powers = vec![flat(&identity)];
    let mut current = identity;
    loop {
        current = mul(&current, t);
        let f = flat(&current);
        if let Some(c) = solve(&powers, &f) {
            let mut p: Vec<Rational> = c.into_iter().map(|x| -x).collect();
            p.push(Rational::one());
            return p;
        }
        powers.push(f);
    }
}

/// Residue data of a simple-pole Q-space `W` (closed under `b` and with
/// `a W ⊆ b W`): the matrix of `b^{-1} a` on `W / bW`.
pub struct ResidueOracle {
    pub residue: Vec<Vec<Rational>>,
    /// Minimal polynomial of `-residue`, ascending, monic.
    pub neg_min_poly: Vec<Rational>,
    /// Lowest degree of a monomial appearing in `W`.
    pub lowest_degree: i64,
}

fn residue_of(space: &Space, a: &[Vec<Vec<Rational>>], w: &Basis) -> ResidueOracle {
    // bW, plus the top degree whose b-multiple left the window.
    let mut bw = Basis::from_vectors(w.vectors().iter().map(|v| space.shift(v, 1)));
    for v in space.tail(space.hi - 1) {
        bw.insert(v);
    }
    let mut reps: Vec<QVec> = Vec::new();
    let mut span = bw.clone();
    for v in w.vectors() {
        if span.insert(v.clone()) {
            reps.push(v);
        }
    }
    let k = reps.len();
    let bw_vecs = bw.vectors();
    let mut family = reps.clone();
    family.extend(bw_vecs);
    let mut residue = vec![vec![Rational::zero(); k]; k];
    for (j, r) in reps.iter().enumerate() {
        let img = space.shift(&space.apply_a(a, r), -1);
        let c = solve(&family, &img).expect("b^{-1} a maps W into itself");
        for i in 0..k {
            residue[i][j] = c[i].clone();
        }
    }
    let neg: Vec<Vec<Rational>> = residue
        .iter()
        .map(|r| r.iter().map(|x| -x.clone()).collect())
        .collect();
    let lowest_degree = w
        .vectors()
        .iter()
        .flat_map(|v| v.iter().position(|c| !c.is_zero()))
        .min()
        .map(|p| space.lo + (p / space.k) as i64)
        .unwrap_or(space.lo);
    ResidueOracle {
        neg_min_poly: min_poly(&neg),
        residue,
        lowest_degree,
    }
}

/// Saturation as a Q-space: close `span{b^t e_i : t >= 0}` under `b^{-1} a`.
pub fn saturation_oracle(m: &AbModule, hi: i64) -> ResidueOracle {
    let a = a_coefficients(m);
    let k = m.rank();
    let space = Space {
        k,
        lo: -(2 * k as i64 + 6),
        hi,
    };
    let mut w = Basis::from_vectors(space.tail(0));
    loop {
        let mut grew = false;
        for v in w.vectors() {
            let img = space.shift(&space.apply_a(&a, &v), -1);
            grew |= w.insert(img);
        }
        if !grew {
            break;
        }
    }
    residue_of(&space, &a, &w)
}

/// Biggest simple-pole subspace: shrink `W <- { x in W : a x in bW }`.
pub fn simple_pole_sub_oracle(m: &AbModule, hi: i64) -> ResidueOracle {
    let a = a_coefficients(m);
    let k = m.rank();
    let space = Space { k, lo: 0, hi };
    let mut w = Basis::from_vectors(space.tail(0));
    loop {
        let gens = w.vectors();
        let mut target: Vec<QVec> = gens.iter().map(|v| space.shift(v, 1)).collect();
        target.extend(space.tail(hi - 1));
        let target_basis = Basis::from_vectors(target);
        // Kernel of x -> a(x) mod target, over coordinates in `gens`.
        let images: Vec<QVec> = gens
            .iter()
            .map(|v| target_basis.reduce(&space.apply_a(&a, v)))
            .collect();
        let kernel = kernel_of(&images);
        let next = Basis::from_vectors(kernel.iter().map(|c| {
            let mut v = vec![Rational::zero(); space.dim()];
            for (ci, g) in c.iter().zip(&gens) {
                for (x, y) in v.iter_mut().zip(g) {
                    *x += ci * y;
                }
            }
            v
        }));
        if next.dim() == w.dim() {
            break;
        }
        w = next;
    }
    residue_of(&space, &a, &w)
}

/// Basis of `{ c : sum c_j images[j] = 0 }`.
fn kernel_of(images: &[QVec]) -> Vec<Vec<Rational>> {
    let n = images.len();
    // Reduce the rows [image_j | unit_j]; rows whose image part vanishes
    // give kernel vectors.
    let dim = images.first().map_or(0, Vec::len);
    let aug: Vec<QVec> = images
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let mut r = v.clone();
            r.extend((0..n).map(|l| {
                if l == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            r
        })
        .collect();
    let basis = Basis::from_vectors(aug);
    basis
        .vectors()
        .into_iter()
        .filter(|r| r[..dim].iter().all(Zero::is_zero))
        .map(|r| r[dim..].to_vec())
        .collect()
}

/// Membership of `x` in `span_{Q[[b]]}(gens)` modulo `b^n`, by a linear
/// solve over the generators times `b^t`.
pub fn member_brute(gens: &[Vec<Series>], x: &[Series], n: usize) -> bool {
    let k = x.len();
    let space = Space {
        k,
        lo: 0,
        hi: n as i64,
    };
    let to_vec = |v: &[Series]| -> QVec {
        let mut out = vec![Rational::zero(); space.dim()];
        for (i, s) in v.iter().enumerate() {
            for t in 0..n.min(s.trunc()) {
                out[space.idx(t as i64, i).unwrap()] = s.coeff(t);
            }
        }
        out
    };
    let mut family = Vec::new();
    for g in gens {
        let g = to_vec(g);
        for t in 0..n as i64 {
            family.push(space.shift(&g, t));
        }
    }
    solve(&family, &to_vec(x)).is_some()
}

/// Ascending coefficients of a core polynomial.
pub fn coeffs(p: &abmod_core::RationalPolynomial) -> Vec<Rational> {
    p.coeffs().to_vec()
}
