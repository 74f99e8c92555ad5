//! Hom modules, morphism spaces, the bidual map and self-duality
//! certificates.
//!
//! The basis of `Hom(E, F)` is the row-major family of matrix units:
//! `phi_{ij}` (sending `e_j` to `f_i`) has index `i * rank(E) + j`.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bernstein::{bernstein, BernsteinPoly};
use crate::constructors::e_lambda;
use crate::error::Result;
use crate::fixpoint::{biggest_simple_pole_sub, saturate, FixedPointConfig};
use crate::matrix::{QMatrix, SeriesMatrix};
use crate::module::AbModule;
use crate::series::{int, Rational, Series};

/// `E_delta`: rank one, `a e = delta b e`.
pub fn e_delta(delta: &Rational, trunc: usize) -> AbModule {
    e_lambda(delta, trunc)
}

pub fn twist(e: &AbModule) -> AbModule {
    e.twist()
}

/// `Hom_{a,b}(E, F)` with `(a phi)(x) = a_F phi(x) - phi(a_E x)`, whose
/// a-matrix is `A_F (x) I - I (x) A_E^T`.
pub fn hom_ab(e: &AbModule, f: &AbModule) -> AbModule {
    let n = e.trunc().min(f.trunc());
    let ae = e.a_matrix().with_trunc(n);
    let af = f.a_matrix().with_trunc(n);
    let a = af
        .kron(&SeriesMatrix::identity(e.rank(), n))
        .sub(&SeriesMatrix::identity(f.rank(), n).kron(&ae.transpose()));
    let m = AbModule::new(a).expect("Kronecker product is square");
    if e.is_exact() && f.is_exact() {
        m
    } else {
        AbModule::truncated(m.a_matrix().clone()).expect("square")
    }
}

/// The matrix of `phi` from its coordinates in the matrix-unit basis.
pub fn hom_element(coords: &[Series], e_rank: usize, f_rank: usize) -> SeriesMatrix {
    assert_eq!(coords.len(), e_rank * f_rank);
    let rows = (0..f_rank)
        .map(|i| coords[i * e_rank..(i + 1) * e_rank].to_vec())
        .collect();
    SeriesMatrix::from_rows(rows)
}

/// `A_F Phi + b^2 Phi' - Phi A_E`.
pub fn linearity_residual(phi: &SeriesMatrix, e: &AbModule, f: &AbModule) -> SeriesMatrix {
    let n = phi.trunc().min(e.trunc()).min(f.trunc());
    let phi = phi.with_trunc(n);
    let lhs = f.a_matrix().with_trunc(n).mul(&phi);
    let der = phi.derivative().mul_b_pow(2).with_trunc(n);
    lhs.add(&der).sub(&phi.mul(&e.a_matrix().with_trunc(n)))
}

/// Rational basis of the (a,b)-linear maps `E -> F` modulo `b^N`.
#[derive(Clone, Debug)]
pub struct MorphismSpace {
    pub basis: Vec<SeriesMatrix>,
    pub certified_dim: usize,
    /// Truncation at which the space was computed.
    pub trunc: usize,
    /// New constraints on low-order coefficients were still appearing in
    /// the last quarter of the orders.
    pub precision_caveat: bool,
}

/// Incremental echelon form with the pivot of each row at its highest
/// variable.
#[derive(Default)]
struct Echelon {
    rows: BTreeMap<usize, BTreeMap<usize, Rational>>,
}

impl Echelon {
    fn insert(&mut self, mut row: BTreeMap<usize, Rational>) {
        while let Some((&var, _)) = row.iter().next_back() {
            let Some(pivot_row) = self.rows.get(&var) else {
                let lead = row[&var].clone();
                for v in row.values_mut() {
                    *v /= &lead;
                }
                self.rows.insert(var, row);
                return;
            };
            let factor = row[&var].clone();
            for (v, c) in pivot_row {
                let entry = row.entry(*v).or_insert_with(Rational::zero);
                *entry -= &factor * c;
                if entry.is_zero() {
                    row.remove(v);
                }
            }
        }
    }

    fn is_pivot(&self, var: usize) -> bool {
        self.rows.contains_key(&var)
    }

    /// Solution with the given free variable set to one and all other
    /// free variables zero.
    fn solve_unit(&self, free: usize, vars: usize) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); vars];
        x[free] = Rational::one();
        for var in 0..vars {
            if let Some(row) = self.rows.get(&var) {
                let mut val = Rational::zero();
                for (v, c) in row.range(..var) {
                    val -= c * &x[*v];
                }
                x[var] = val;
            }
        }
        x
    }
}

pub fn morphism_space(e: &AbModule, f: &AbModule) -> Result<MorphismSpace> {
    let h = hom_ab(e, f);
    let p = h.rank();
    let n = h.trunc();
    let coeff: Vec<QMatrix> = (0..n).map(|m| h.a_matrix().coefficient(m)).collect();
    let certified_orders = n / 2;
    let var = |order: usize, i: usize| order * p + i;

    let mut ech = Echelon::default();
    let count_free = |ech: &Echelon| {
        (0..certified_orders * p)
            .filter(|&v| !ech.is_pivot(v))
            .count()
    };
    let checkpoint = (3 * n).div_ceil(4);
    let mut free_at_checkpoint = None;
    // Order t: sum_{m <= t} H_{t-m} x_m + (t - 1) x_{t-1} = 0.
    for t in 0..n {
        for i in 0..p {
            let mut row: BTreeMap<usize, Rational> = BTreeMap::new();
            for m in 0..=t {
                let hm = &coeff[t - m];
                for j in 0..p {
                    let c = hm.get(i, j);
                    if !c.is_zero() {
                        *row.entry(var(m, j)).or_insert_with(Rational::zero) += c;
                    }
                }
            }
            if t >= 2 {
                *row.entry(var(t - 1, i)).or_insert_with(Rational::zero) += int(t as i64 - 1);
            }
            row.retain(|_, c| !c.is_zero());
            if !row.is_empty() {
                ech.insert(row);
            }
        }
        if t + 1 == checkpoint {
            free_at_checkpoint = Some(count_free(&ech));
        }
    }
    let free_now = count_free(&ech);
    let precision_caveat = free_at_checkpoint.is_some_and(|c| c != free_now);

    let vars = n * p;
    let basis: Vec<SeriesMatrix> = (0..certified_orders * p)
        .filter(|&v| !ech.is_pivot(v))
        .map(|v| {
            let x = ech.solve_unit(v, vars);
            let coords: Vec<Series> = (0..p)
                .map(|i| Series::from_coeffs((0..n).map(|m| x[var(m, i)].clone()).collect()))
                .collect();
            hom_element(&coords, e.rank(), f.rank())
        })
        .collect();
    Ok(MorphismSpace {
        certified_dim: basis.len(),
        basis,
        trunc: n,
        precision_caveat,
    })
}

/// Outcome of checking that `phi: E -> F` is an isomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoCheck {
    pub a_linear: bool,
    /// `A_F Phi + b^2 Phi' - Phi A_E` when it is nonzero.
    pub residual: Option<SeriesMatrix>,
    pub det_unit: bool,
    pub trunc: usize,
}

impl IsoCheck {
    pub fn passed(&self) -> bool {
        self.a_linear && self.det_unit
    }
}

pub fn verify_isomorphism(phi: &SeriesMatrix, e: &AbModule, f: &AbModule) -> IsoCheck {
    let square = phi.rows() == f.rank() && phi.cols() == e.rank() && e.rank() == f.rank();
    let residual = linearity_residual(phi, e, f);
    let a_linear = residual.is_zero();
    let det_unit = square && !phi.det_at_zero().is_zero();
    IsoCheck {
        a_linear,
        trunc: residual.trunc(),
        residual: (!a_linear).then_some(residual),
        det_unit,
    }
}

/// `tau: E -> Hom(Hom(E, E_delta), E_delta)`, `tau(x)[phi] = phi(x)`.
pub fn bidual_map(e: &AbModule) -> SeriesMatrix {
    let k = e.rank();
    let n = e.trunc();
    // phi_j in Hom(E, E_delta) is the 1 x k matrix unit at column j; the
    // double dual has basis psi_j dual to phi_j.
    let phi: Vec<SeriesMatrix> = (0..k)
        .map(|j| {
            let mut m = SeriesMatrix::zero(1, k, n);
            m.set(0, j, Series::one(n));
            m
        })
        .collect();
    let mut tau = SeriesMatrix::zero(k, k, n);
    for i in 0..k {
        let mut x = vec![Series::zero(n); k];
        x[i] = Series::one(n);
        for (j, p) in phi.iter().enumerate() {
            tau.set(j, i, p.mul_vec(&x)[0].clone());
        }
    }
    tau
}

#[derive(Clone, Debug)]
pub struct BidualReport {
    pub tau: SeriesMatrix,
    pub iso: IsoCheck,
    pub bernstein_invariant: bool,
}

impl BidualReport {
    pub fn passed(&self) -> bool {
        self.iso.passed() && self.bernstein_invariant
    }
}

pub fn verify_bidual(
    e: &AbModule,
    delta: &Rational,
    cfg: &FixedPointConfig,
) -> Result<BidualReport> {
    let ed = e_delta(delta, e.trunc());
    let double = hom_ab(&hom_ab(e, &ed), &ed);
    let tau = bidual_map(e);
    let iso = verify_isomorphism(&tau, e, &double);
    let bernstein_invariant = bernstein(&double, cfg)? == bernstein(e, cfg)?;
    Ok(BidualReport {
        tau,
        iso,
        bernstein_invariant,
    })
}

/// `twist(Hom(E, F))` and `Hom(twist E, twist F)` have the same a-matrix.
pub fn verify_twist_hom(e: &AbModule, f: &AbModule) -> bool {
    twist(&hom_ab(e, f)).a_matrix() == hom_ab(&twist(e), &twist(f)).a_matrix()
}

/// An isomorphism `kappa: twist(E) -> Hom(E, E_delta)`.
#[derive(Clone, Debug)]
pub struct DualityCertificate {
    pub delta: Rational,
    pub kappa: SeriesMatrix,
    pub check: IsoCheck,
}

/// Result of a certificate search; `certificate` is `None` when nothing
/// was found at this precision.
#[derive(Clone, Debug)]
pub struct IsoSearch {
    pub certificate: Option<SeriesMatrix>,
    pub check: Option<IsoCheck>,
    pub space_dim: usize,
    pub trunc: usize,
    pub precision_caveat: bool,
}

/// Combination coefficients tried in order: `(1, 2, ..., p)`, all ones,
/// a sweep over `{-2..2}^p`, then seeded random vectors.
fn candidate_coefficients(p: usize, seed: u64) -> impl Iterator<Item = Vec<i64>> {
    const SWEEP_CAP: usize = 3125;
    const RANDOM_TRIES: usize = 64;
    let first = (1..=p as i64).collect::<Vec<_>>();
    let ones = vec![1; p];
    let sweep = (0..5usize.saturating_pow(p as u32).min(SWEEP_CAP)).map(move |mut idx| {
        (0..p)
            .map(|_| {
                let d = (idx % 5) as i64 - 2;
                idx /= 5;
                d
            })
            .collect::<Vec<_>>()
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random = (0..RANDOM_TRIES).map(move |_| {
        (0..p)
            .map(|_| rng.random_range(-9..=9i64))
            .collect::<Vec<_>>()
    });
    [first, ones].into_iter().chain(sweep).chain(random)
}

/// Residues `lambda_i` when `A = diag(lambda_i b)`.
fn diagonal_residues(m: &AbModule) -> Option<Vec<Rational>> {
    let a = m.a_matrix();
    let k = m.rank();
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        for j in 0..k {
            let s = a.get(i, j);
            let ok = if i == j {
                s.coeffs()
                    .iter()
                    .enumerate()
                    .all(|(d, c)| d == 1 || c.is_zero())
            } else {
                s.is_zero()
            };
            if !ok {
                return None;
            }
        }
        out.push(a.get(i, i).coeff(1));
    }
    Some(out)
}

/// Between diagonal modules the morphisms are spanned by `e_j -> b^m f_i`
/// with `lambda_j = mu_i + m`, so an isomorphism exists iff the residues
/// agree as multisets, and then a permutation matrix is one.
fn diagonal_isomorphism(e: &AbModule, f: &AbModule) -> Option<IsoSearch> {
    let (le, lf) = (diagonal_residues(e)?, diagonal_residues(f)?);
    let n = e.trunc().min(f.trunc());
    let space_dim = lf
        .iter()
        .flat_map(|mu| le.iter().map(move |l| l - mu))
        .filter(|m| m.is_integer() && !m.is_negative() && m.to_integer() < n.into())
        .count();
    let mut used = vec![false; lf.len()];
    let mut phi = SeriesMatrix::zero(lf.len(), le.len(), n);
    let mut complete = le.len() == lf.len();
    for (j, l) in le.iter().enumerate() {
        match (0..lf.len()).find(|&i| !used[i] && lf[i] == *l) {
            Some(i) if complete => {
                used[i] = true;
                phi.set(i, j, Series::one(n));
            }
            _ => complete = false,
        }
    }
    let certificate = complete.then_some(phi);
    let check = certificate
        .as_ref()
        .map(|phi| verify_isomorphism(phi, e, f));
    Some(IsoSearch {
        certificate,
        check,
        space_dim,
        trunc: n,
        precision_caveat: false,
    })
}

/// Search the morphisms `E -> F` for one with unit determinant.
pub fn find_isomorphism(e: &AbModule, f: &AbModule, seed: u64) -> Result<IsoSearch> {
    if let Some(search) = diagonal_isomorphism(e, f) {
        return Ok(search);
    }
    let space = morphism_space(e, f)?;
    let p = space.basis.len();
    let mut found = None;
    if p > 0 && e.rank() == f.rank() {
        let at_zero: Vec<QMatrix> = space.basis.iter().map(SeriesMatrix::at_zero).collect();
        for c in candidate_coefficients(p, seed) {
            if c.iter().all(|&x| x == 0) {
                continue;
            }
            let mut m0 = QMatrix::zero(f.rank(), e.rank());
            for (ci, b) in c.iter().zip(&at_zero) {
                m0 = m0.add(&b.scale(&int(*ci)));
            }
            if m0.det().is_zero() {
                continue;
            }
            let mut phi = SeriesMatrix::zero(f.rank(), e.rank(), space.trunc);
            for (ci, b) in c.iter().zip(&space.basis) {
                phi = phi.add(&b.scale(&int(*ci)));
            }
            found = Some(phi);
            break;
        }
    } else if e.rank() == 0 && f.rank() == 0 {
        found = Some(SeriesMatrix::zero(0, 0, space.trunc));
    }
    let check = found.as_ref().map(|phi| verify_isomorphism(phi, e, f));
    Ok(IsoSearch {
        certificate: found,
        check,
        space_dim: p,
        trunc: space.trunc,
        precision_caveat: space.precision_caveat,
    })
}

/// Default seed of the randomized fallback search.
pub const DEFAULT_SEED: u64 = 0x5eed;

/// Search for `kappa: twist(E) -> Hom(E, E_delta)`.
pub fn find_self_duality(
    e: &AbModule,
    delta: &Rational,
    seed: u64,
) -> Result<(Option<DualityCertificate>, IsoSearch)> {
    let target = hom_ab(e, &e_delta(delta, e.trunc()));
    let search = find_isomorphism(&twist(e), &target, seed)?;
    let cert = match (&search.certificate, &search.check) {
        (Some(kappa), Some(check)) if check.passed() => Some(DualityCertificate {
            delta: delta.clone(),
            kappa: kappa.clone(),
            check: check.clone(),
        }),
        _ => None,
    };
    Ok((cert, search))
}

/// The shift `delta` for which `b*(z) = +-b(-delta - z)` can hold, read off
/// from the sums of roots.
pub fn candidate_delta(b: &BernsteinPoly, b_star: &BernsteinPoly) -> Option<Rational> {
    let r = b.degree();
    if r == 0 || b_star.degree() != r {
        return None;
    }
    Some((b.poly.coeff(r - 1) + b_star.poly.coeff(r - 1)) / int(r as i64))
}

/// `b*(z) = (-1)^r b(-delta - z)`, compared after monic normalisation.
pub fn reflection_check(b: &BernsteinPoly, b_star: &BernsteinPoly, delta: &Rational) -> bool {
    let reflected = b.poly.compose_affine(&-Rational::one(), &-delta.clone());
    reflected.degree() == b_star.poly.degree() && reflected.monic() == b_star.poly.monic()
}

#[derive(Clone, Debug)]
pub struct PropDualReport {
    /// `twist(Ẽ) -> Hom(F, E_delta)`.
    pub kappa_prime: IsoSearch,
    /// `twist(F) -> Hom(Ẽ, E_delta)`.
    pub kappa_second: IsoSearch,
    pub bernstein: BernsteinPoly,
    pub dual_bernstein: BernsteinPoly,
    pub reflection: bool,
}

impl PropDualReport {
    pub fn found_both(&self) -> bool {
        let ok = |s: &IsoSearch| s.check.as_ref().is_some_and(IsoCheck::passed);
        ok(&self.kappa_prime) && ok(&self.kappa_second)
    }
}

/// Search for the isomorphisms exchanging the saturation and the biggest
/// simple-pole submodule under duality, and cross-check the reflection of
/// the two Bernstein polynomials.
pub fn verify_prop_dual(
    e: &AbModule,
    delta: &Rational,
    cfg: &FixedPointConfig,
    seed: u64,
) -> Result<PropDualReport> {
    let sat = saturate(e, cfg)?.module;
    let f = biggest_simple_pole_sub(e, cfg)?.module;
    let n = sat.trunc().min(f.trunc());
    let sat = sat.at_trunc(n)?;
    let f = f.at_trunc(n)?;
    let ed = e_delta(delta, n);
    let kappa_prime = find_isomorphism(&twist(&sat), &hom_ab(&f, &ed), seed)?;
    let kappa_second = find_isomorphism(&twist(&f), &hom_ab(&sat, &ed), seed)?;
    let b = crate::bernstein::residue_minimal_polynomial(&sat)?;
    let b_star = crate::bernstein::residue_minimal_polynomial(&f)?;
    let reflection = reflection_check(&b, &b_star, delta);
    Ok(PropDualReport {
        kappa_prime,
        kappa_second,
        bernstein: b,
        dual_bernstein: b_star,
        reflection,
    })
}
