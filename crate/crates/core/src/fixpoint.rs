//! Fixed-point iterations on lattices: the saturation by `b^{-1} a`, the
//! biggest simple-pole submodule, and a-stable closures.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use crate::error::{AbError, Result};
use crate::lattice::{Lattice, LaurentVector};
use crate::matrix::SeriesMatrix;
use crate::module::AbModule;

/// Caps and cancellation for the fixed-point iterations.
#[derive(Clone, Debug, Default)]
pub struct FixedPointConfig {
    /// Growth steps allowed before giving up; `None` means `2k + 4`.
    pub max_iter: Option<usize>,
    /// Doublings of an exact module's truncation tried on
    /// `PrecisionExhausted`.
    pub max_doublings: usize,
    pub cancel: Option<Arc<AtomicBool>>,
}

impl FixedPointConfig {
    pub fn with_max_iter(max_iter: usize) -> Self {
        FixedPointConfig {
            max_iter: Some(max_iter),
            ..Self::default()
        }
    }

    fn cap(&self, rank: usize) -> usize {
        self.max_iter.unwrap_or(2 * rank + 4)
    }

    fn check_cancel(&self) -> Result<()> {
        match &self.cancel {
            Some(flag) if flag.load(Ordering::Relaxed) => Err(AbError::Cancelled),
            _ => Ok(()),
        }
    }
}

/// A sub- or over-lattice of a module together with its own a-matrix.
#[derive(Clone, Debug)]
pub struct SubModuleResult {
    /// The module in the canonical generators of `lattice`.
    pub module: AbModule,
    /// The lattice inside `E[1/b]`, in the ambient basis.
    pub lattice: Lattice,
    /// Growth (or shrinking) steps before the fixed point was certified.
    pub iterations: usize,
}

impl SubModuleResult {
    /// Generator matrix and shift: the new basis is `b^shift` times the
    /// columns in the ambient basis.
    pub fn inclusion(&self) -> (i64, SeriesMatrix) {
        (self.lattice.shift(), self.lattice.generator_matrix())
    }

    pub fn is_identity(&self) -> bool {
        self.lattice.is_standard()
    }
}

/// Run `f` on `e`, doubling the truncation of exact modules on
/// `PrecisionExhausted`.
pub fn with_precision_retry<T>(
    e: &AbModule,
    doublings: usize,
    mut f: impl FnMut(&AbModule) -> Result<T>,
) -> Result<T> {
    let mut current = e.clone();
    let mut left = doublings;
    loop {
        match f(&current) {
            Err(err) if err.is_precision_exhausted() && current.is_exact() && left > 0 => {
                left -= 1;
                current = current.at_trunc(2 * current.trunc().max(1))?;
            }
            other => return other,
        }
    }
}

/// `Ẽ`: the smallest simple-pole module containing `E`, the fixed point of
/// `L <- L + b^{-1} a(L)` from the standard lattice.
pub fn saturate(e: &AbModule, cfg: &FixedPointConfig) -> Result<SubModuleResult> {
    with_precision_retry(e, cfg.max_doublings, |m| saturate_once(m, cfg))
}

fn saturate_once(e: &AbModule, cfg: &FixedPointConfig) -> Result<SubModuleResult> {
    let k = e.rank();
    let cap = cfg.cap(k);
    let mut lattice = Lattice::standard(k, e.trunc());
    let mut iterations = 0;
    loop {
        cfg.check_cancel()?;
        lattice.certify_full_rank()?;
        let images: Vec<LaurentVector> = lattice
            .laurent_gens()
            .iter()
            .map(|g| e.apply_a_laurent(g).scale_b(-1))
            .collect();
        if images.iter().all(|x| lattice.member(x)) {
            break;
        }
        iterations += 1;
        if iterations > cap {
            return Err(AbError::NotRegular { iterations: cap });
        }
        lattice = lattice.extend(&images);
    }
    let module = e.restrict_to(&lattice)?;
    debug_assert!(module.is_simple_pole());
    Ok(SubModuleResult {
        module,
        lattice,
        iterations,
    })
}

/// `F`: the biggest simple-pole submodule, the fixed point of
/// `F <- { x in F : a x in bF }` from the standard lattice.
pub fn biggest_simple_pole_sub(e: &AbModule, cfg: &FixedPointConfig) -> Result<SubModuleResult> {
    with_precision_retry(e, cfg.max_doublings, |m| simple_pole_sub_once(m, cfg))
}

fn simple_pole_sub_once(e: &AbModule, cfg: &FixedPointConfig) -> Result<SubModuleResult> {
    let k = e.rank();
    let cap = cfg.cap(k);
    let mut lattice = Lattice::standard(k, e.trunc());
    let mut iterations = 0;
    loop {
        cfg.check_cancel()?;
        lattice.certify_full_rank()?;
        let images: Vec<LaurentVector> = lattice
            .laurent_gens()
            .iter()
            .map(|g| e.apply_a_laurent(g))
            .collect();
        let next = lattice.preimage_of_images(&images, &lattice.scale_b(1))?;
        next.certify_full_rank()?;
        if lattice.laurent_gens().iter().all(|g| next.member(g)) {
            break;
        }
        iterations += 1;
        if iterations > cap {
            return Err(AbError::IterationCap { iterations: cap });
        }
        lattice = next;
    }
    let module = e.restrict_to(&lattice)?;
    debug_assert!(module.is_simple_pole());
    Ok(SubModuleResult {
        module,
        lattice,
        iterations,
    })
}

/// The smallest a-stable lattice containing `gens`, the fixed point of
/// `L <- L + a(L)`. Fails with `NotFullRank` when the closure has rank
/// below that of `E`.
pub fn submodule_closure(
    e: &AbModule,
    gens: &[LaurentVector],
    cfg: &FixedPointConfig,
) -> Result<SubModuleResult> {
    let k = e.rank();
    if gens.is_empty() {
        return Err(AbError::DimensionMismatch(
            "closure of no generators".into(),
        ));
    }
    let cap = cfg.max_iter.unwrap_or(e.trunc().max(2 * k + 4));
    let mut lattice = Lattice::span(k, gens);
    let mut iterations = 0;
    loop {
        cfg.check_cancel()?;
        let images: Vec<LaurentVector> = lattice
            .laurent_gens()
            .iter()
            .map(|g| e.apply_a_laurent(g))
            .collect();
        if images.iter().all(|x| lattice.member(x)) {
            break;
        }
        iterations += 1;
        if iterations > cap {
            return Err(AbError::IterationCap { iterations: cap });
        }
        lattice = lattice.extend(&images);
    }
    if !lattice.is_full_rank() {
        return Err(AbError::NotFullRank {
            rank: lattice.gens().len(),
            ambient: k,
        });
    }
    let module = e.restrict_to(&lattice)?;
    Ok(SubModuleResult {
        module,
        lattice,
        iterations,
    })
}

/// Whether the saturation stabilises within the cap. Running out of
/// precision is an error, not a verdict.
pub fn is_regular(e: &AbModule, cfg: &FixedPointConfig) -> Result<bool> {
    match saturate(e, cfg) {
        Ok(_) => Ok(true),
        Err(AbError::NotRegular { .. }) => Ok(false),
        Err(err) => Err(err),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Series;

    fn module(rows: &[&[&str]], n: usize) -> AbModule {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|t| Series::parse(t, n).unwrap()).collect())
            .collect();
        AbModule::new(SeriesMatrix::from_rows(rows)).unwrap()
    }

    fn cfg() -> FixedPointConfig {
        FixedPointConfig::default()
    }

    #[test]
    fn saturation_of_e2() {
        let e2 = module(&[&["0", "b^2"], &["1", "0"]], 18);
        let sat = saturate(&e2, &cfg()).unwrap();
        assert_eq!(sat.iterations, 1);
        assert_eq!(sat.lattice.shift(), -1);
        let n = sat.module.trunc();
        assert!(n >= 10);
        let expected = module(&[&["0", "b"], &["b", "-b"]], n);
        assert_eq!(sat.module.a_matrix(), expected.a_matrix());
    }

    #[test]
    fn simple_pole_sub_of_e2() {
        let e2 = module(&[&["0", "b^2"], &["1", "0"]], 18);
        let f = biggest_simple_pole_sub(&e2, &cfg()).unwrap();
        assert_eq!(f.iterations, 1);
        let n = f.module.trunc();
        let expected = module(&[&["b", "b"], &["b", "0"]], n);
        assert_eq!(f.module.a_matrix(), expected.a_matrix());
        assert!(f
            .lattice
            .member_series(&[Series::parse("b", 18).unwrap(), Series::zero(18)]));
        assert!(!f
            .lattice
            .member_series(&[Series::one(18), Series::zero(18)]));
    }

    #[test]
    fn simple_pole_is_fixed() {
        let j = module(&[&["1/2*b", "b"], &["0", "1/2*b"]], 10);
        let sat = saturate(&j, &cfg()).unwrap();
        assert_eq!(sat.iterations, 0);
        assert!(sat.is_identity());
        let f = biggest_simple_pole_sub(&j, &cfg()).unwrap();
        assert_eq!(f.iterations, 0);
        assert!(f.is_identity());
    }

    #[test]
    fn irregular_module_hits_cap() {
        let m = module(&[&["1"]], 10);
        assert!(matches!(
            saturate(&m, &cfg()),
            Err(AbError::NotRegular { .. })
        ));
        assert_eq!(is_regular(&m, &cfg()), Ok(false));
        let e2 = module(&[&["0", "b^2"], &["1", "0"]], 18);
        assert_eq!(is_regular(&e2, &cfg()), Ok(true));
    }

    #[test]
    fn closure_examples() {
        let n = 12;
        let e1 = module(&[&["b"]], n);
        let c = submodule_closure(&e1, &[LaurentVector::basis(1, 0, 0, n)], &cfg()).unwrap();
        assert!(c.is_identity());

        let e2 = module(&[&["0", "b^2"], &["1", "0"]], n);
        let c = submodule_closure(&e2, &[LaurentVector::basis(2, 0, 0, n)], &cfg()).unwrap();
        assert!(c.is_identity());
        assert_eq!(c.iterations, 1);
    }

    #[test]
    fn cancellation() {
        let flag = Arc::new(AtomicBool::new(true));
        let cfg = FixedPointConfig {
            cancel: Some(flag),
            ..Default::default()
        };
        let e2 = module(&[&["0", "b^2"], &["1", "0"]], 18);
        assert_eq!(saturate(&e2, &cfg).unwrap_err(), AbError::Cancelled);
    }
}
