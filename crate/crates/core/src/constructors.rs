//! Test modules: rank-one modules, Jordan modules, diagonal models of
//! quasi-homogeneous singularities, and seeded random regular modules.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{AbError, Result};
use crate::fixpoint::{submodule_closure, FixedPointConfig};
use crate::lattice::LaurentVector;
use crate::matrix::SeriesMatrix;
use crate::module::AbModule;
use crate::series::{int, Rational, Series};

/// `E_lambda`: rank one, `a e = lambda b e`.
pub fn e_lambda(lambda: &Rational, trunc: usize) -> AbModule {
    let a = SeriesMatrix::from_rows(vec![vec![Series::monomial(lambda.clone(), 1, trunc)]]);
    AbModule::new(a).expect("1x1 is square")
}

/// `J(beta, d)`: `a e_j = beta b e_j + b e_{j-1}`.
pub fn jordan_module(beta: &Rational, d: usize, trunc: usize) -> AbModule {
    let mut a = SeriesMatrix::zero(d, d, trunc);
    for j in 0..d {
        a.set(j, j, Series::monomial(beta.clone(), 1, trunc));
        if j > 0 {
            a.set(j - 1, j, Series::monomial(int(1), 1, trunc));
        }
    }
    AbModule::new(a).expect("square")
}

/// Exponents of the Pham polynomial `x_1^{a_1} + ... + x_n^{a_n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PhamSpec {
    pub exponents: Vec<u32>,
}

impl PhamSpec {
    pub fn new(exponents: Vec<u32>) -> Result<Self> {
        if exponents.is_empty() || exponents.iter().any(|&a| a < 2) {
            return Err(AbError::DimensionMismatch(format!(
                "Pham exponents must be >= 2, got {exponents:?}"
            )));
        }
        Ok(PhamSpec { exponents })
    }

    pub fn n(&self) -> usize {
        self.exponents.len()
    }

    pub fn milnor_number(&self) -> usize {
        self.exponents.iter().map(|&a| a as usize - 1).product()
    }

    /// Monomials `alpha` with `0 <= alpha_i <= a_i - 2`, lexicographic.
    pub fn monomials(&self) -> Vec<Vec<u32>> {
        let mut out = vec![vec![]];
        for &a in &self.exponents {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..a - 1).map(move |i| {
                        let mut m = prefix.clone();
                        m.push(i);
                        m
                    })
                })
                .collect();
        }
        out
    }

    /// `sigma(alpha) = sum (alpha_i + 1) / a_i`.
    pub fn spectral_value(&self, alpha: &[u32]) -> Rational {
        alpha
            .iter()
            .zip(&self.exponents)
            .map(|(&x, &a)| Rational::new((x as i64 + 1).into(), (a as i64).into()))
            .sum()
    }

    pub fn spectrum(&self) -> Vec<Rational> {
        self.monomials()
            .iter()
            .map(|m| self.spectral_value(m))
            .collect()
    }
}

/// Diagonal model: one generator per monomial of the Milnor algebra,
/// `a e_alpha = sigma(alpha) b e_alpha`.
pub fn pham(spec: &PhamSpec, trunc: usize) -> AbModule {
    let diag: Vec<Series> = spec
        .spectrum()
        .into_iter()
        .map(|s| Series::monomial(s, 1, trunc))
        .collect();
    AbModule::new(SeriesMatrix::diagonal(&diag)).expect("square")
}

/// Permutation `alpha -> alpha*` with `alpha*_i = a_i - 2 - alpha_i`, as
/// indices into [`PhamSpec::monomials`]. It satisfies
/// `sigma(alpha*) = n - sigma(alpha)`.
pub fn pham_dual_permutation(spec: &PhamSpec) -> Vec<usize> {
    let mons = spec.monomials();
    mons.iter()
        .map(|m| {
            let star: Vec<u32> = m
                .iter()
                .zip(&spec.exponents)
                .map(|(&x, &a)| a - 2 - x)
                .collect();
            mons.iter()
                .position(|o| *o == star)
                .expect("dual monomial exists")
        })
        .collect()
}

/// Knobs for [`random_regular`].
#[derive(Clone, Debug)]
pub struct RandomProfile {
    /// Bound on numerators and denominators of random rationals.
    pub height: i64,
    /// Degree bound of random polynomial entries.
    pub degree: usize,
    /// Generation attempts before giving up.
    pub attempts: usize,
}

impl Default for RandomProfile {
    fn default() -> Self {
        RandomProfile {
            height: 5,
            degree: 2,
            attempts: 20,
        }
    }
}

pub fn random_rational(rng: &mut impl Rng, height: i64) -> Rational {
    let num = rng.random_range(-height..=height);
    let den = rng.random_range(1..=height.max(1));
    Rational::new(num.into(), den.into())
}

fn random_poly(rng: &mut impl Rng, height: i64, low: usize, degree: usize, trunc: usize) -> Series {
    let mut coeffs = vec![Rational::from_integer(0.into()); trunc];
    for c in coeffs.iter_mut().take((degree + 1).min(trunc)).skip(low) {
        if rng.random_bool(0.6) {
            *c = Rational::from_integer(rng.random_range(-height..=height).into());
        }
    }
    Series::from_coeffs(coeffs)
}

/// A random simple-pole module: rational diagonal residue plus a random
/// strictly upper triangular part divisible by `b`.
pub fn random_simple_pole(
    rng: &mut impl Rng,
    k: usize,
    trunc: usize,
    profile: &RandomProfile,
) -> AbModule {
    let mut a = SeriesMatrix::zero(k, k, trunc);
    for i in 0..k {
        a.set(
            i,
            i,
            Series::monomial(random_rational(rng, profile.height), 1, trunc),
        );
        for j in i + 1..k {
            a.set(
                i,
                j,
                random_poly(rng, profile.height, 1, profile.degree + 1, trunc),
            );
        }
    }
    AbModule::new(a).expect("square")
}

/// A seeded regular module of rank `k` known modulo `b^trunc`: the
/// a-stable closure of a few random elements of a random simple-pole
/// module.
pub fn random_regular(
    k: usize,
    seed: u64,
    trunc: usize,
    profile: &RandomProfile,
) -> Result<AbModule> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inner = 2 * trunc;
    for _ in 0..profile.attempts {
        let s = random_simple_pole(&mut rng, k, inner, profile);
        let count = rng.random_range(1..=k.max(1));
        let gens: Vec<LaurentVector> = (0..count)
            .map(|_| {
                let m = rng.random_range(0..=1usize);
                let entries = (0..k)
                    .map(|_| {
                        random_poly(&mut rng, profile.height, 0, profile.degree, inner)
                            .mul_b_pow(m)
                            .truncate(inner)
                    })
                    .collect();
                LaurentVector::from_series(entries)
            })
            .collect();
        if gens.iter().all(LaurentVector::is_zero) {
            continue;
        }
        match submodule_closure(&s, &gens, &FixedPointConfig::default()) {
            Ok(res) if res.module.trunc() >= trunc => {
                return AbModule::truncated(res.module.a_matrix().with_trunc(trunc));
            }
            Ok(_) | Err(AbError::NotFullRank { .. }) | Err(AbError::PrecisionExhausted { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Err(AbError::GenerationFailed {
        attempts: profile.attempts,
    })
}

/// `A + b^2 R(b)` for a random polynomial matrix `R`: the residue is
/// unchanged.
pub fn perturb(e: &AbModule, rng: &mut impl Rng, height: i64) -> AbModule {
    let n = e.trunc();
    let k = e.rank();
    let mut a = e.a_matrix().clone();
    for i in 0..k {
        for j in 0..k {
            let r = random_poly(rng, height, 0, 2, n).mul_b_pow(2).truncate(n);
            a.set(i, j, a.get(i, j) + &r);
        }
    }
    if e.is_exact() {
        AbModule::new(a).expect("square")
    } else {
        AbModule::truncated(a).expect("square")
    }
}

/// A seeded perturbation of `J(beta, d)`. With `inject`, an extra
/// generator with residue eigenvalue `beta - 1` is coupled to the chain.
pub fn perturbed_jordan(
    beta: &Rational,
    d: usize,
    seed: u64,
    inject: bool,
    trunc: usize,
) -> AbModule {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let j = jordan_module(beta, d, trunc);
    let base = if inject {
        let extra = e_lambda(&(beta - int(1)), trunc);
        let mut a = j.direct_sum(&extra).a_matrix().clone();
        let c = Rational::from_integer(rng.random_range(1..=3i64).into());
        a.set(0, d, Series::monomial(c, 1, trunc));
        AbModule::new(a).expect("square")
    } else {
        j
    };
    perturb(&base, &mut rng, 3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;

    #[test]
    fn pham_spectra() {
        let s = PhamSpec::new(vec![3, 3]).unwrap();
        assert_eq!(s.milnor_number(), 4);
        assert_eq!(
            s.spectrum(),
            vec![rat(2, 3), rat(1, 1), rat(1, 1), rat(4, 3)]
        );
        let s = PhamSpec::new(vec![2, 3]).unwrap();
        assert_eq!(s.spectrum(), vec![rat(5, 6), rat(7, 6)]);
        assert_eq!(
            PhamSpec::new(vec![2, 2]).unwrap().spectrum(),
            vec![rat(1, 1)]
        );
        assert!(PhamSpec::new(vec![1, 3]).is_err());
    }

    #[test]
    fn dual_permutation() {
        let s = PhamSpec::new(vec![3, 4, 5]).unwrap();
        let sp = s.spectrum();
        for (i, j) in pham_dual_permutation(&s).into_iter().enumerate() {
            assert_eq!(&sp[i] + &sp[j], int(3));
        }
    }

    #[test]
    fn jordan_transcription() {
        let j = jordan_module(&rat(1, 2), 2, 6);
        let s = |t: &str| Series::parse(t, 6).unwrap();
        assert_eq!(
            j.a_matrix(),
            &SeriesMatrix::from_rows(vec![vec![s("1/2*b"), s("b")], vec![s("0"), s("1/2*b")]])
        );
        assert_eq!(jordan_module(&rat(1, 2), 1, 6), e_lambda(&rat(1, 2), 6));
    }

    #[test]
    fn random_is_deterministic() {
        let p = RandomProfile::default();
        let a = random_regular(2, 42, 18, &p).unwrap();
        let b = random_regular(2, 42, 18, &p).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.trunc(), 18);
    }

    #[test]
    fn perturbation_keeps_residue() {
        let j = perturbed_jordan(&rat(-3, 4), 3, 5, false, 12);
        assert_eq!(
            j.residue_endomorphism().unwrap(),
            jordan_module(&rat(-3, 4), 3, 12)
                .residue_endomorphism()
                .unwrap()
        );
    }
}
