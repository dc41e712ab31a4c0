//! Exterior conformal map recovery from the complex tensors.
//!
//! The exterior Riemann map from {|ζ|>1} onto the complement of a simply
//! connected domain has the Laurent form
//!
//! ```text
//! Φ(ζ) = c ζ + μ₀ + μ₁/ζ + μ₂/ζ² + ⋯ ,   c = μ₋₁ > 0 ,
//! ```
//!
//! and its coefficients are determined by the first column of the complex
//! tensors: `c² = −γ²₁₁`, `μ₀ = −γ²₂₁/c²`, and for ℓ ≥ 1 the coefficient
//! `μ_ℓ` equals the ζ^{−ℓ} coefficient of `Σ_m γ¹_{m1} Φ(ζ)^{−m}`. The
//! reciprocal expansion `1/Φ = Σ B_k ζ^{−k}` obeys the convolution recursion
//! `B₁ = 1/c`, `B_k = −(1/c) Σ_{j≤k−2} μ_j B_{k−1−j}`, so `B_k` depends on
//! `μ_ℓ` only for `ℓ ≤ k−2` and the whole construction is inductive.
//!
//! All coefficient extractions run through truncated Laurent-series
//! arithmetic; the equivalent finite multinomial sums are kept in the test
//! suite as an independent route.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gpt::GammaTable;

/// Laurent polynomial with exponents in `[min_exp, max_exp]`, stored dense,
/// highest exponent first. Arithmetic never reports coefficients below the
/// truncation floor of its operands.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentSeries {
    max_exp: i32,
    min_exp: i32,
    /// coeffs[i] multiplies ζ^(max_exp − i)
    coeffs: Vec<Complex64>,
}

impl LaurentSeries {
    pub fn zero(max_exp: i32, min_exp: i32) -> LaurentSeries {
        assert!(max_exp >= min_exp);
        LaurentSeries {
            max_exp,
            min_exp,
            coeffs: vec![Complex64::new(0.0, 0.0); (max_exp - min_exp + 1) as usize],
        }
    }

    /// Single term `a·ζ^e`, truncated at `min_exp`.
    pub fn monomial(a: Complex64, e: i32, min_exp: i32) -> LaurentSeries {
        let mut s = LaurentSeries::zero(e.max(0), min_exp.min(e));
        s.set(e, a);
        s
    }

    pub fn max_exp(&self) -> i32 {
        self.max_exp
    }

    pub fn min_exp(&self) -> i32 {
        self.min_exp
    }

    /// Coefficient of ζ^e (zero outside the stored range).
    pub fn coeff(&self, e: i32) -> Complex64 {
        if e > self.max_exp || e < self.min_exp {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(self.max_exp - e) as usize]
        }
    }

    pub fn set(&mut self, e: i32, value: Complex64) {
        assert!(e <= self.max_exp && e >= self.min_exp, "exponent {e} out of range");
        self.coeffs[(self.max_exp - e) as usize] = value;
    }

    /// Drop coefficients below `min_exp`.
    pub fn truncated(&self, min_exp: i32) -> LaurentSeries {
        let mut out = LaurentSeries::zero(self.max_exp, min_exp.max(self.min_exp).min(self.max_exp));
        for e in out.min_exp..=out.max_exp {
            out.set(e, self.coeff(e));
        }
        out
    }

    pub fn scaled(&self, a: Complex64) -> LaurentSeries {
        LaurentSeries {
            max_exp: self.max_exp,
            min_exp: self.min_exp,
            coeffs: self.coeffs.iter().map(|c| c * a).collect(),
        }
    }

    pub fn add(&self, other: &LaurentSeries) -> LaurentSeries {
        let max_exp = self.max_exp.max(other.max_exp);
        let min_exp = self.min_exp.max(other.min_exp);
        let mut out = LaurentSeries::zero(max_exp, min_exp.min(max_exp));
        for e in out.min_exp..=out.max_exp {
            out.set(e, self.coeff(e) + other.coeff(e));
        }
        out
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Cauchy product truncated at the coarser of the two operand floors.
pub fn series_multiply(a: &LaurentSeries, b: &LaurentSeries) -> LaurentSeries {
    let max_exp = a.max_exp + b.max_exp;
    let min_exp = (a.min_exp + b.max_exp).max(b.min_exp + a.max_exp).min(max_exp);
    let mut out = LaurentSeries::zero(max_exp, min_exp);
    for ea in a.min_exp..=a.max_exp {
        let ca = a.coeff(ea);
        if ca.norm_sqr() == 0.0 {
            continue;
        }
        for eb in b.min_exp..=b.max_exp {
            let e = ea + eb;
            if e < min_exp {
                continue;
            }
            let v = out.coeff(e) + ca * b.coeff(eb);
            out.set(e, v);
        }
    }
    out
}

/// Recovered coefficients of the exterior map, together with the reciprocal
/// expansion used to build them.
#[derive(Debug, Clone)]
pub struct ConformalCoefficients {
    /// leading coefficient μ₋₁, positive by normalization
    pub c: f64,
    /// μ₀ ..= μ_N
    pub mu: Vec<Complex64>,
    /// B₁ ..= B_{N+1} of `1/Φ = Σ B_k ζ^{−k}`
    pub b: Vec<Complex64>,
    /// truncation order N
    pub order: usize,
}

/// Reciprocal data: the `B` coefficients and the truncated powers `Φ^{−m}`.
#[derive(Debug, Clone)]
pub struct ReciprocalPowers {
    /// B₁ ..= B_n
    pub b: Vec<Complex64>,
    /// `powers[m-1]` is the series of `Φ^{−m}`, truncated at ζ^{−n}
    pub powers: Vec<LaurentSeries>,
}

/// Extend a `B₁..B_k` prefix to length `n` via the convolution recursion.
/// Needs `mu[j] = μ_j` for `j ≤ n−2`.
fn extend_b(b: &mut Vec<Complex64>, mu: &[Complex64], c: f64, n: usize) {
    if b.is_empty() {
        b.push(Complex64::new(1.0 / c, 0.0));
    }
    while b.len() < n {
        let k = b.len() + 1; // computing B_k
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..=(k - 2) {
            acc += mu[j] * b[k - 2 - j];
        }
        b.push(-acc / c);
    }
}

/// Series `Σ_{k=1..n} B_k ζ^{−k}` from a `B` prefix.
fn reciprocal_series(b: &[Complex64], n: usize) -> LaurentSeries {
    let mut s = LaurentSeries::zero(-1, -(n as i32));
    for (k, bk) in b.iter().take(n).enumerate() {
        s.set(-(k as i32 + 1), *bk);
    }
    s
}

/// Compute `B₁..B_n` and the truncated powers `Φ^{−m}`, `m = 1..n`, from the
/// leading coefficient and `μ₀..μ_{n−1}`.
pub fn reciprocal_powers(c: f64, mu: &[Complex64], n: usize) -> Result<ReciprocalPowers> {
    if c <= 0.0 {
        return Err(Error::Normalization(format!(
            "leading coefficient must be positive, got {c}"
        )));
    }
    if mu.len() + 1 < n {
        return Err(Error::InvalidParameter(format!(
            "need μ up to index {} for B_{n}, got {} coefficients",
            n as i32 - 2,
            mu.len()
        )));
    }
    let mut b = Vec::new();
    extend_b(&mut b, mu, c, n);
    let inv = reciprocal_series(&b, n);
    let mut powers = Vec::with_capacity(n);
    powers.push(inv.clone());
    for _ in 1..n {
        let next = series_multiply(powers.last().unwrap(), &inv).truncated(-(n as i32));
        powers.push(next);
    }
    Ok(ReciprocalPowers { b, powers })
}

impl ConformalCoefficients {
    /// Assemble from a leading coefficient and `μ₀..μ_N`, computing the `B`
    /// table and verifying the reciprocal identity `Φ·(1/Φ) = 1` to 1e−10.
    pub fn from_parts(c: f64, mu: Vec<Complex64>) -> Result<ConformalCoefficients> {
        if c <= 0.0 || !c.is_finite() {
            return Err(Error::Normalization(format!(
                "leading coefficient must be positive, got {c}"
            )));
        }
        if mu.is_empty() {
            return Err(Error::InvalidParameter(
                "coefficient list must contain at least μ₀".into(),
            ));
        }
        let order = mu.len() - 1;
        let n = order + 1;
        let mut b = Vec::new();
        extend_b(&mut b, &mu, c, n + 1);
        let coeffs = ConformalCoefficients { c, mu, b, order };
        let residual = coeffs.reciprocal_residual();
        if residual > 1e-10 {
            return Err(Error::NumericalFailure(format!(
                "reciprocal identity residual {residual:.3e} exceeds 1e-10"
            )));
        }
        Ok(coeffs)
    }

    /// Series of `Φ` truncated at ζ^{−N}.
    pub fn phi_series(&self) -> LaurentSeries {
        let mut s = LaurentSeries::zero(1, -(self.order as i32));
        s.set(1, Complex64::new(self.c, 0.0));
        for (j, m) in self.mu.iter().enumerate() {
            s.set(-(j as i32), *m);
        }
        s
    }

    /// Max coefficient magnitude of `Φ·(1/Φ) − 1` over the exponent window
    /// where the truncated product is exact.
    pub fn reciprocal_residual(&self) -> f64 {
        let n = self.order as i32;
        let inv = reciprocal_series(&self.b, self.order + 1);
        let prod = series_multiply(&self.phi_series(), &inv);
        let mut worst: f64 = 0.0;
        for e in (-(n - 1).max(0))..=1 {
            let target = if e == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            worst = worst.max((prod.coeff(e) - target).norm());
        }
        worst
    }

    /// Evaluate `Φ_N` at points with |ζ| ≥ 1 (Horner in 1/ζ).
    pub fn evaluate_map(&self, zeta: &[Complex64]) -> Result<Vec<Complex64>> {
        zeta.iter()
            .map(|&z| {
                if z.norm() < 1.0 - 1e-12 {
                    return Err(Error::MapDomain(format!(
                        "|ζ| = {} < 1 is inside the unit disc",
                        z.norm()
                    )));
                }
                let inv = 1.0 / z;
                let mut acc = Complex64::new(0.0, 0.0);
                for m in self.mu.iter().rev() {
                    acc = (acc + m) * inv;
                }
                // acc now equals Σ μ_j ζ^{−j−1}; undo one power for μ₀ + Σ μ_j/ζ^j
                Ok(self.c * z + acc * z)
            })
            .collect()
    }

    /// Image of the unit circle under `Φ_N`, sampled at `points` angles.
    pub fn boundary_image(&self, points: usize) -> Vec<Complex64> {
        let zeta: Vec<Complex64> = (0..points)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / points as f64;
                Complex64::new(t.cos(), t.sin())
            })
            .collect();
        self.evaluate_map(&zeta).expect("|ζ|=1 is admissible")
    }

    /// Truncate to a lower order (drops μ and B tail).
    pub fn truncated(&self, order: usize) -> ConformalCoefficients {
        let order = order.min(self.order);
        ConformalCoefficients {
            c: self.c,
            mu: self.mu[..=order].to_vec(),
            b: self.b[..(order + 2).min(self.b.len())].to_vec(),
            order,
        }
    }
}

fn check_gamma11(gamma: &GammaTable) -> Result<Complex64> {
    let g11 = gamma.g2(1, 1);
    if g11.norm() == 0.0 {
        return Err(Error::NotSimplyConnected(
            "γ²₁₁ vanishes; degenerate domain".into(),
        ));
    }
    if g11.im.abs() > 1e-6 * g11.norm() {
        return Err(Error::NotSimplyConnected(format!(
            "γ²₁₁ = {g11} has a significant imaginary part"
        )));
    }
    if g11.re >= 0.0 {
        return Err(Error::NotSimplyConnected(format!(
            "Re γ²₁₁ = {} is not negative",
            g11.re
        )));
    }
    Ok(g11)
}

/// Recover `c, μ₀, …, μ_N` from the complex tensors of a simply connected
/// single-component shape.
pub fn recover_coefficients(gamma: &GammaTable, order: usize) -> Result<ConformalCoefficients> {
    if gamma.components != 1 {
        return Err(Error::UnsupportedGeometry(format!(
            "map recovery needs a single-component boundary, got {} components",
            gamma.components
        )));
    }
    recover_coefficients_diagnostic(gamma, order)
}

/// Same recursion without the component-count gate. Used for negative
/// controls where the vanishing identities are expected to fail.
pub fn recover_coefficients_diagnostic(
    gamma: &GammaTable,
    order: usize,
) -> Result<ConformalCoefficients> {
    if gamma.order < order.max(2) {
        return Err(Error::InvalidParameter(format!(
            "tensor order {} too small for truncation order {order}",
            gamma.order
        )));
    }
    let g11 = check_gamma11(gamma)?;
    let c = (-g11.re).sqrt();
    let mu0 = -gamma.g2(2, 1) / (c * c);

    let mut mu = vec![mu0];
    let mut b: Vec<Complex64> = Vec::new();
    for ell in 1..=order {
        extend_b(&mut b, &mu, c, ell);
        let inv = reciprocal_series(&b, ell);
        // Σ_{m=1..ℓ} γ¹_{m1} Φ^{−m}, truncated at ζ^{−ℓ}
        let floor = -(ell as i32);
        let mut sum = LaurentSeries::zero(-1, floor);
        let mut power = inv.clone();
        for m in 1..=ell {
            if m > 1 {
                power = series_multiply(&power, &inv).truncated(floor);
            }
            sum = sum.add(&power.scaled(gamma.g1(m, 1)));
        }
        mu.push(sum.coeff(floor));
    }

    let coeffs = ConformalCoefficients::from_parts(c, mu)?;
    // cross-check the two lowest orders against their closed forms
    if order >= 1 {
        let direct = gamma.g1(1, 1) * coeffs.b[0];
        debug_assert!((coeffs.mu[1] - direct).norm() <= 1e-12 * (1.0 + direct.norm()));
        if (coeffs.mu[1] - direct).norm() > 1e-10 * (1.0 + direct.norm()) {
            return Err(Error::NumericalFailure(
                "first-order coefficient disagrees with its closed form".into(),
            ));
        }
    }
    if order >= 2 {
        let direct = gamma.g1(2, 1) * coeffs.b[0] * coeffs.b[0] + gamma.g1(1, 1) * coeffs.b[1];
        if (coeffs.mu[2] - direct).norm() > 1e-10 * (1.0 + direct.norm()) {
            return Err(Error::NumericalFailure(
                "second-order coefficient disagrees with its closed form".into(),
            ));
        }
    }
    Ok(coeffs)
}

/// Residual magnitudes of the vanishing identities for ℓ = 2..=l_max:
/// the ζ^{−ℓ} coefficients of `Σ_m γ²_{m1} Φ(ζ)^{−m}` must vanish on simply
/// connected domains.
pub fn vanishing_residuals(
    coeffs: &ConformalCoefficients,
    gamma: &GammaTable,
    l_max: usize,
) -> Vec<f64> {
    if l_max < 2 {
        return Vec::new();
    }
    let n = l_max.min(gamma.order).min(coeffs.order + 2);
    let floor = -(n as i32);
    let mut b = coeffs.b.clone();
    extend_b(&mut b, &coeffs.mu, coeffs.c, n);
    let inv = reciprocal_series(&b, n);
    let mut sum = LaurentSeries::zero(-1, floor);
    let mut power = inv.clone();
    for m in 1..=n {
        if m > 1 {
            power = series_multiply(&power, &inv).truncated(floor);
        }
        sum = sum.add(&power.scaled(gamma.g2(m, 1)));
    }
    (2..=n).map(|ell| sum.coeff(-(ell as i32)).norm()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::make_shape;
    use crate::gpt::{compute_gpt, gamma_tables};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn gamma_for(spec: &str, m: usize, order: usize) -> GammaTable {
        let sb = make_shape(&spec.parse().unwrap())
            .unwrap()
            .sample(m)
            .unwrap();
        gamma_tables(&compute_gpt(&sb, 0.0, order).unwrap())
    }

    #[test]
    fn monomial_products() {
        let zeta = LaurentSeries::monomial(c64(1.0, 0.0), 1, -4);
        let inv = LaurentSeries::monomial(c64(1.0, 0.0), -1, -4);
        let prod = series_multiply(&zeta, &inv);
        assert_eq!(prod.coeff(0), c64(1.0, 0.0));
        assert_eq!(prod.coeff(-1), c64(0.0, 0.0));

        // (1 + 1/ζ)² = 1 + 2/ζ + 1/ζ²
        let s = LaurentSeries::monomial(c64(1.0, 0.0), 0, -4)
            .add(&LaurentSeries::monomial(c64(1.0, 0.0), -1, -4));
        let sq = series_multiply(&s, &s);
        assert_eq!(sq.coeff(0), c64(1.0, 0.0));
        assert_eq!(sq.coeff(-1), c64(2.0, 0.0));
        assert_eq!(sq.coeff(-2), c64(1.0, 0.0));
    }

    #[test]
    fn reciprocal_identity_random_coefficients() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let n = 12usize;
            let mu: Vec<Complex64> = (0..=n)
                .map(|_| c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let coeffs = ConformalCoefficients::from_parts(2.0, mu).unwrap();
            assert!(coeffs.reciprocal_residual() < 1e-14);
        }
    }

    #[test]
    fn b_low_orders_match_closed_forms() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let c: f64 = rng.random_range(0.5..3.0);
            let mu: Vec<Complex64> = (0..4)
                .map(|_| c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let rp = reciprocal_powers(c, &mu, 4).unwrap();
            let (m0, m1, m2) = (mu[0], mu[1], mu[2]);
            let c2 = c * c;
            let c3 = c2 * c;
            let c4 = c3 * c;
            assert!((rp.b[0] - c64(1.0 / c, 0.0)).norm() < 1e-15);
            assert!((rp.b[1] - (-m0 / c2)).norm() < 1e-14);
            assert!((rp.b[2] - (-m1 / c2 + m0 * m0 / c3)).norm() < 1e-14);
            let b4 = -m2 / c2 + 2.0 * m0 * m1 / c3 - m0 * m0 * m0 / c4;
            assert!((rp.b[3] - b4).norm() < 1e-14);
        }
    }

    #[test]
    fn b3_worked_example() {
        // c=2, μ₀=1, μ₁=i  →  B₃ = −i/4 + 1/8
        let rp = reciprocal_powers(2.0, &[c64(1.0, 0.0), c64(0.0, 1.0)], 3).unwrap();
        assert!((rp.b[2] - c64(0.125, -0.25)).norm() < 1e-15);
    }

    #[test]
    fn reciprocal_powers_trivial_map() {
        let zeros = [c64(0.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)];
        let rp = reciprocal_powers(1.0, &zeros, 4).unwrap();
        assert!((rp.b[0] - c64(1.0, 0.0)).norm() < 1e-15);
        for bk in &rp.b[1..] {
            assert_eq!(*bk, c64(0.0, 0.0));
        }
        // Φ = ζ so Φ^{-m} = ζ^{-m} exactly
        for (m, p) in rp.powers.iter().enumerate() {
            assert_eq!(p.coeff(-(m as i32 + 1)), c64(1.0, 0.0));
        }
        assert!(matches!(
            reciprocal_powers(-1.0, &[], 2),
            Err(Error::Normalization(_))
        ));
    }

    #[test]
    fn recover_ellipse_map() {
        let gamma = gamma_for("ellipse:2,1", 1024, 8);
        let coeffs = recover_coefficients(&gamma, 6).unwrap();
        assert_relative_eq!(coeffs.c, 1.5, epsilon = 1e-6);
        assert!(coeffs.mu[0].norm() < 1e-8);
        assert!((coeffs.mu[1] - c64(0.5, 0.0)).norm() < 1e-6);
        for m in &coeffs.mu[2..] {
            assert!(m.norm() < 1e-6, "high-order coefficient {m}");
        }
    }

    #[test]
    fn recover_translated_disk() {
        let gamma = gamma_for("disk:0.75,0.4,-0.3", 512, 6);
        let coeffs = recover_coefficients(&gamma, 5).unwrap();
        assert_relative_eq!(coeffs.c, 0.75, epsilon = 1e-10);
        assert!((coeffs.mu[0] - c64(0.4, -0.3)).norm() < 1e-10);
        for m in &coeffs.mu[1..] {
            assert!(m.norm() < 1e-9);
        }
    }

    #[test]
    fn evaluate_map_examples() {
        let identity = ConformalCoefficients::from_parts(1.0, vec![c64(0.0, 0.0)]).unwrap();
        let img = identity.boundary_image(8);
        for (i, z) in img.iter().enumerate() {
            let t = 2.0 * PI * i as f64 / 8.0;
            assert!((z - c64(t.cos(), t.sin())).norm() < 1e-15);
        }

        let ellipse =
            ConformalCoefficients::from_parts(1.5, vec![c64(0.0, 0.0), c64(0.5, 0.0)]).unwrap();
        let vals = ellipse
            .evaluate_map(&[c64(1.0, 0.0), c64(0.0, 1.0)])
            .unwrap();
        assert!((vals[0] - c64(2.0, 0.0)).norm() < 1e-15);
        assert!((vals[1] - c64(0.0, 1.0)).norm() < 1e-15);

        assert!(matches!(
            ellipse.evaluate_map(&[c64(0.5, 0.0)]),
            Err(Error::MapDomain(_))
        ));
    }

    #[test]
    fn vanishing_residuals_disk_and_ellipse() {
        let gamma = gamma_for("disk:1", 256, 6);
        let coeffs = recover_coefficients(&gamma, 6).unwrap();
        for r in vanishing_residuals(&coeffs, &gamma, 6) {
            assert!(r < 1e-10, "disk residual {r}");
        }

        let gamma = gamma_for("ellipse:2,1", 1024, 8);
        let coeffs = recover_coefficients(&gamma, 6).unwrap();
        for r in vanishing_residuals(&coeffs, &gamma, 6) {
            assert!(r < 1e-6, "ellipse residual {r}");
        }
    }

    #[test]
    fn two_disk_union_violates_vanishing_identities() {
        let sb = make_shape(&"union-disks:2".parse().unwrap())
            .unwrap()
            .sample(512)
            .unwrap();
        let gamma = gamma_tables(&compute_gpt(&sb, 0.0, 6).unwrap());
        assert!(matches!(
            recover_coefficients(&gamma, 4),
            Err(Error::UnsupportedGeometry(_))
        ));
        let coeffs = recover_coefficients_diagnostic(&gamma, 4).unwrap();
        let residuals = vanishing_residuals(&coeffs, &gamma, 4);
        assert!(
            residuals.iter().cloned().fold(0.0, f64::max) > 1e-2,
            "negative control failed: residuals {residuals:?}"
        );
    }

    #[test]
    fn scaling_covariance_of_coefficients() {
        let base = gamma_for("ellipse:2,1", 512, 6);
        let scaled = gamma_for("ellipse:3,1.5", 512, 6);
        let c0 = recover_coefficients(&base, 4).unwrap();
        let c1 = recover_coefficients(&scaled, 4).unwrap();
        assert_relative_eq!(c1.c, 1.5 * c0.c, epsilon = 1e-8);
        for (a, b) in c0.mu.iter().zip(&c1.mu) {
            assert!((b - a * 1.5).norm() < 1e-8);
        }
    }

    #[test]
    fn rotation_covariance_of_boundary_image() {
        let theta = 0.6;
        let curve = make_shape(&"star:2,0.4,3".parse().unwrap()).unwrap();
        let g0 = gamma_tables(&compute_gpt(&curve.sample(512).unwrap(), 0.0, 8).unwrap());
        let g1 = gamma_tables(
            &compute_gpt(&curve.rotated(theta).sample(512).unwrap(), 0.0, 8).unwrap(),
        );
        let c0 = recover_coefficients(&g0, 6).unwrap();
        let c1 = recover_coefficients(&g1, 6).unwrap();
        let rot = Complex64::new(0.0, theta).exp();
        let img_rotated: Vec<Complex64> =
            c0.boundary_image(512).iter().map(|z| z * rot).collect();
        let img_of_rotated = c1.boundary_image(512);
        let d = crate::validate::hausdorff_distance(&img_rotated, &img_of_rotated);
        assert!(d < 1e-6, "rotated-image mismatch {d}");
    }

    proptest! {
        #[test]
        fn series_multiplication_commutes(
            a_re in proptest::collection::vec(-1.0f64..1.0, 6),
            b_re in proptest::collection::vec(-1.0f64..1.0, 6),
        ) {
            let mut a = LaurentSeries::zero(1, -4);
            let mut b = LaurentSeries::zero(0, -4);
            for (i, v) in a_re.iter().enumerate() {
                a.set(1 - i as i32, c64(*v, -v * 0.5));
            }
            for (i, v) in b_re.iter().enumerate() {
                b.set(-(i as i32), c64(*v, v * 0.25));
            }
            let ab = series_multiply(&a, &b);
            let ba = series_multiply(&b, &a);
            prop_assert_eq!(ab.max_exp(), ba.max_exp());
            for e in ab.min_exp()..=ab.max_exp() {
                prop_assert!((ab.coeff(e) - ba.coeff(e)).norm() < 1e-12);
            }
        }

        #[test]
        fn reciprocal_identity_holds_for_random_maps(
            parts in proptest::collection::vec((-0.8f64..0.8, -0.8f64..0.8), 7),
            c in 0.6f64..2.5,
        ) {
            let mu: Vec<Complex64> = parts.iter().map(|&(r, i)| c64(r, i)).collect();
            let coeffs = ConformalCoefficients::from_parts(c, mu).unwrap();
            prop_assert!(coeffs.reciprocal_residual() < 1e-12);
        }
    }
}
