//! Fixtures shared by the benchmarks.

use abmod_core::{int, rat, AbModule, Series, SeriesMatrix};

/// `E2`: `a(e1) = e2`, `a(e2) = b^2 e1`.
pub fn e2(trunc: usize) -> AbModule {
    let mut a = SeriesMatrix::zero(2, 2, trunc);
    a.set(1, 0, Series::one(trunc));
    a.set(0, 1, Series::monomial(int(1), 2, trunc));
    AbModule::new(a).expect("square")
}

/// A dense-ish series with small rational coefficients.
pub fn sample_series(trunc: usize) -> Series {
    let coeffs = (0..trunc)
        .map(|i| rat(i as i64 % 7 - 3, (i as i64 % 5) + 1))
        .collect();
    Series::from_coeffs(coeffs)
}
