//! Lifting Jordan chains of the residue to chains of the module:
//! `a e_j = beta b e_j + b e_{j-1}`, `e_0 = 0`.

use num_traits::{One, Zero};

use crate::error::{AbError, Result};
use crate::matrix::QMatrix;
use crate::module::AbModule;
use crate::poly::{characteristic_polynomial, factor};
use crate::series::{Rational, Series};

/// Size of the largest Jordan block of `t` at `beta` (0 if `beta` is not
/// an eigenvalue).
pub fn largest_block(t: &QMatrix, beta: &Rational) -> usize {
    let n = t.rows();
    let shifted = t.add_scalar(&-beta.clone());
    let mut power = QMatrix::identity(n);
    let mut prev_rank = n;
    for size in 0..=n {
        power = power.mul(&shifted);
        let r = power.rank();
        if r == prev_rank {
            return size;
        }
        prev_rank = r;
    }
    n
}

/// Vectors `e_1, ..., e_d` with `a e_j = beta b e_j + b e_{j-1}`, found
/// order by order: at order `m` the correction solves
/// `(T + m - beta) u = obstruction`, where `T` is the residue.
///
/// The chain is known modulo `b^(N-1)` for a module of truncation `N`.
pub fn jordan_chain_lift(f: &AbModule, beta: &Rational, d: usize) -> Result<Vec<Vec<Series>>> {
    if d == 0 {
        return Err(AbError::DimensionMismatch(
            "chain length must be positive".into(),
        ));
    }
    let t = f.residue_endomorphism()?;
    let k = f.rank();

    let roots = factor(&characteristic_polynomial(&t)).rational_roots();
    if let Some((r, _)) = roots.iter().find(|(r, _)| {
        let diff = beta - r;
        diff.is_integer() && diff >= Rational::one()
    }) {
        return Err(AbError::NotMinimalInClass {
            beta: Box::new(beta.clone()),
            eigenvalue: Box::new(r.clone()),
        });
    }

    let available = largest_block(&t, beta);
    if available < d {
        return Err(AbError::NoSuchBlock {
            beta: Box::new(beta.clone()),
            requested: d,
            available,
        });
    }

    let n = f.trunc();
    if n < 2 {
        return Err(AbError::precision("Jordan lift needs the residue", n));
    }
    let orders = n - 1;

    let shifted = t.add_scalar(&-beta.clone());
    let top = shifted
        .pow(d)
        .nullspace()
        .into_iter()
        .find(|v| !shifted.pow(d - 1).mul_vec(v).iter().all(Zero::is_zero))
        .expect("block of size d has a vector of height d");

    // u[j][m]: coefficient of b^m in e_{j+1}.
    let mut u: Vec<Vec<Vec<Rational>>> = vec![Vec::with_capacity(orders); d];
    for (j, chain) in u.iter_mut().enumerate() {
        chain.push(shifted.pow(d - 1 - j).mul_vec(&top));
    }

    let a = f.a_matrix();
    let coeff: Vec<QMatrix> = (0..orders).map(|m| a.coefficient(m + 1)).collect();
    for m in 1..orders {
        let lhs = t.add_scalar(&(Rational::from_integer(m.into()) - beta));
        for j in 0..d {
            let mut rhs = if j == 0 {
                vec![Rational::zero(); k]
            } else {
                u[j - 1][m].clone()
            };
            for l in 0..m {
                let c = coeff[m - l].mul_vec(&u[j][l]);
                for (r, x) in rhs.iter_mut().zip(c) {
                    *r -= x;
                }
            }
            let sol = lhs.solve(&rhs)?;
            u[j].push(sol);
        }
    }

    Ok(u.into_iter()
        .map(|chain| {
            (0..k)
                .map(|i| Series::from_coeffs(chain.iter().map(|v| v[i].clone()).collect()))
                .collect()
        })
        .collect())
}

/// `a e_j - beta b e_j - b e_{j-1}` for each vector of the chain.
pub fn chain_residuals(f: &AbModule, beta: &Rational, chain: &[Vec<Series>]) -> Vec<Vec<Series>> {
    chain
        .iter()
        .enumerate()
        .map(|(j, e)| {
            let ae = f.apply_a(e);
            ae.iter()
                .enumerate()
                .map(|(i, s)| {
                    let mut r = s - &e[i].mul_b_pow(1).scale(beta);
                    if j > 0 {
                        r = &r - &chain[j - 1][i].mul_b_pow(1);
                    }
                    r
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::SeriesMatrix;
    use crate::series::rat;

    fn module(rows: &[&[&str]], n: usize) -> AbModule {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|t| Series::parse(t, n).unwrap()).collect())
            .collect();
        AbModule::new(SeriesMatrix::from_rows(rows)).unwrap()
    }

    fn vecs(rows: &[&[&str]], n: usize) -> Vec<Vec<Series>> {
        rows.iter()
            .map(|r| r.iter().map(|t| Series::parse(t, n).unwrap()).collect())
            .collect()
    }

    #[test]
    fn jordan_module_chain_is_its_basis() {
        let j = module(&[&["1/2*b", "b"], &["0", "1/2*b"]], 10);
        let chain = jordan_chain_lift(&j, &rat(1, 2), 2).unwrap();
        assert_eq!(chain, vecs(&[&["1", "0"], &["0", "1"]], 9));
        assert!(chain_residuals(&j, &rat(1, 2), &chain)
            .iter()
            .flatten()
            .all(Series::is_zero));
    }

    #[test]
    fn perturbed_chain() {
        let p = module(&[&["1/2*b", "b + b^2"], &["0", "1/2*b"]], 10);
        let chain = jordan_chain_lift(&p, &rat(1, 2), 2).unwrap();
        assert_eq!(chain, vecs(&[&["1", "0"], &["-b", "1"]], 9));
        assert!(chain_residuals(&p, &rat(1, 2), &chain)
            .iter()
            .flatten()
            .all(Series::is_zero));
    }

    #[test]
    fn errors() {
        let j = module(&[&["1/2*b", "b"], &["0", "1/2*b"]], 10);
        assert_eq!(
            jordan_chain_lift(&j, &rat(1, 2), 3),
            Err(AbError::NoSuchBlock {
                beta: Box::new(rat(1, 2)),
                requested: 3,
                available: 2
            })
        );
        let m = module(&[&["1/2*b", "0"], &["0", "-1/2*b"]], 10);
        assert!(matches!(
            jordan_chain_lift(&m, &rat(1, 2), 1),
            Err(AbError::NotMinimalInClass { .. })
        ));
        assert!(jordan_chain_lift(&m, &rat(-1, 2), 1).is_ok());
        let e2 = module(&[&["0", "b^2"], &["1", "0"]], 10);
        assert_eq!(
            jordan_chain_lift(&e2, &rat(0, 1), 1),
            Err(AbError::NotSimplePole)
        );
    }

    #[test]
    fn block_sizes() {
        let t = QMatrix::from_rows(vec![
            vec![rat(1, 2), rat(1, 1), rat(0, 1)],
            vec![rat(0, 1), rat(1, 2), rat(0, 1)],
            vec![rat(0, 1), rat(0, 1), rat(1, 2)],
        ]);
        assert_eq!(largest_block(&t, &rat(1, 2)), 2);
        assert_eq!(largest_block(&t, &rat(1, 3)), 0);
    }
}
