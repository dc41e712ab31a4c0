//! Contracted generalized polarization tensors and the complex tensors
//! derived from them.
//!
//! For the harmonic polynomials `P_n^c = Re zⁿ`, `P_n^s = Im zⁿ` and the
//! material parameter `λ = (k+1)/(2(k−1))`, the tensor entry with source
//! `(n,α)` and projection `(m,β)` is
//!
//! ```text
//! M[βα]_{mn} = ∫ P_m^β · (λI − K*)⁻¹[ν·∇P_n^α] dσ .
//! ```
//!
//! The first superscript names the projection polynomial (the row kind) and
//! the second the source (the column kind), matching their roles in the
//! far-field expansion: the `cos mθ` row of the perturbation pairs
//! `M^{cc}a_n^c + M^{cs}a_n^s`, the `sin mθ` row `M^{sc}a_n^c + M^{ss}a_n^s`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::SampledBoundary;
use crate::potential::{assemble_np, DensitySolver, NpMatrix};

/// Harmonic polynomial family member: `Re zⁿ` or `Im zⁿ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HarmonicKind {
    Cosine,
    Sine,
}

/// Value of `P_n^α` at a point (n ≥ 1; `r^n cos nθ` or `r^n sin nθ`).
pub fn harmonic_poly(n: u32, kind: HarmonicKind, point: Complex64) -> f64 {
    let zn = point.powu(n);
    match kind {
        HarmonicKind::Cosine => zn.re,
        HarmonicKind::Sine => zn.im,
    }
}

/// Nodal vector of `ν·∇P_n^α` on a sampled boundary.
///
/// Both kinds come from the complex combination `g = n z^{n−1} ν`:
/// `ν·∇P_n^c = Re g`, `ν·∇P_n^s = Im g`. For `n = 0` the gradient vanishes.
pub fn harmonic_normal_gradient(
    sb: &SampledBoundary,
    n: u32,
    kind: HarmonicKind,
) -> DVector<f64> {
    if n == 0 {
        return DVector::zeros(sb.len());
    }
    DVector::from_iterator(
        sb.len(),
        sb.nodes.iter().zip(&sb.normals).map(|(&z, &nu)| {
            let g = n as f64 * z.powu(n - 1) * nu;
            match kind {
                HarmonicKind::Cosine => g.re,
                HarmonicKind::Sine => g.im,
            }
        }),
    )
}

/// Contracted polarization tensors up to a given order, with the four
/// row-kind/column-kind blocks stored separately.
#[derive(Debug, Clone)]
pub struct GptTable {
    pub order: usize,
    pub conductivity: f64,
    pub lambda: f64,
    /// row kind = projection, column kind = source; entry (m-1, n-1)
    pub cc: DMatrix<f64>,
    pub cs: DMatrix<f64>,
    pub sc: DMatrix<f64>,
    pub ss: DMatrix<f64>,
    pub components: usize,
    pub nodes: usize,
}

impl GptTable {
    pub fn block(&self, row: HarmonicKind, col: HarmonicKind) -> &DMatrix<f64> {
        match (row, col) {
            (HarmonicKind::Cosine, HarmonicKind::Cosine) => &self.cc,
            (HarmonicKind::Cosine, HarmonicKind::Sine) => &self.cs,
            (HarmonicKind::Sine, HarmonicKind::Cosine) => &self.sc,
            (HarmonicKind::Sine, HarmonicKind::Sine) => &self.ss,
        }
    }

    /// Largest relative asymmetry of the full 2N×2N block matrix under the
    /// simultaneous swap of source and projection indices.
    pub fn block_asymmetry(&self) -> f64 {
        let n = self.order;
        let scale = self
            .cc
            .amax()
            .max(self.ss.amax())
            .max(self.cs.amax())
            .max(1e-300);
        let mut worst: f64 = 0.0;
        for m in 0..n {
            for k in 0..n {
                worst = worst.max((self.cc[(m, k)] - self.cc[(k, m)]).abs());
                worst = worst.max((self.ss[(m, k)] - self.ss[(k, m)]).abs());
                worst = worst.max((self.cs[(m, k)] - self.sc[(k, m)]).abs());
            }
        }
        worst / scale
    }
}

/// Complex tensors combining the four blocks; the first column drives the
/// conformal-map recursion.
#[derive(Debug, Clone)]
pub struct GammaTable {
    pub order: usize,
    pub gamma1: DMatrix<Complex64>,
    pub gamma2: DMatrix<Complex64>,
    pub components: usize,
}

impl GammaTable {
    pub fn g1(&self, m: usize, n: usize) -> Complex64 {
        self.gamma1[(m - 1, n - 1)]
    }
    pub fn g2(&self, m: usize, n: usize) -> Complex64 {
        self.gamma2[(m - 1, n - 1)]
    }
}

/// Material parameter of a conductivity contrast `k ≥ 0`, `k ≠ 1`.
pub fn lambda_of_conductivity(k: f64) -> Result<f64> {
    if !(k >= 0.0) || (k - 1.0).abs() < 1e-14 {
        return Err(Error::InvalidParameter(format!(
            "conductivity must be >= 0 and != 1, got {k}"
        )));
    }
    Ok((k + 1.0) / (2.0 * (k - 1.0)))
}

/// Compute the contracted tensors of order `n_max` on `sb`.
///
/// One LU factorization of the deflated operator is shared by all `2·n_max`
/// right-hand sides.
pub fn compute_gpt(sb: &SampledBoundary, k: f64, n_max: usize) -> Result<GptTable> {
    let lambda = lambda_of_conductivity(k)?;
    if n_max == 0 || n_max > 24 {
        return Err(Error::InvalidParameter(format!(
            "tensor order must be in 1..=24, got {n_max}"
        )));
    }
    if n_max > sb.nodes_per_component / 8 {
        return Err(Error::ResolutionInsufficient(format!(
            "order {n_max} needs at least {} nodes per component, got {}",
            8 * n_max,
            sb.nodes_per_component
        )));
    }
    let np = assemble_np(sb)?;
    compute_gpt_with(&np, k, lambda, n_max)
}

fn compute_gpt_with(np: &NpMatrix, k: f64, lambda: f64, n_max: usize) -> Result<GptTable> {
    let sb = &np.boundary;
    let solver = DensitySolver::new(np, lambda)?;
    let kinds = [HarmonicKind::Cosine, HarmonicKind::Sine];

    // projection vectors P_m^β weighted by quadrature
    let mut proj = vec![DVector::zeros(sb.len()); 2 * n_max];
    for m in 1..=n_max {
        for (bi, &beta) in kinds.iter().enumerate() {
            proj[2 * (m - 1) + bi] = DVector::from_iterator(
                sb.len(),
                sb.nodes
                    .iter()
                    .zip(&sb.weights)
                    .map(|(&z, &w)| harmonic_poly(m as u32, beta, z) * w),
            );
        }
    }

    let mut cc = DMatrix::zeros(n_max, n_max);
    let mut cs = DMatrix::zeros(n_max, n_max);
    let mut sc = DMatrix::zeros(n_max, n_max);
    let mut ss = DMatrix::zeros(n_max, n_max);
    for n in 1..=n_max {
        for &alpha in &kinds {
            let rhs = harmonic_normal_gradient(sb, n as u32, alpha);
            let phi = solver.solve(&rhs)?;
            for m in 1..=n_max {
                for (bi, &beta) in kinds.iter().enumerate() {
                    let value = proj[2 * (m - 1) + bi].dot(&phi);
                    match (beta, alpha) {
                        (HarmonicKind::Cosine, HarmonicKind::Cosine) => cc[(m - 1, n - 1)] = value,
                        (HarmonicKind::Cosine, HarmonicKind::Sine) => cs[(m - 1, n - 1)] = value,
                        (HarmonicKind::Sine, HarmonicKind::Cosine) => sc[(m - 1, n - 1)] = value,
                        (HarmonicKind::Sine, HarmonicKind::Sine) => ss[(m - 1, n - 1)] = value,
                    }
                }
            }
        }
    }
    Ok(GptTable {
        order: n_max,
        conductivity: k,
        lambda,
        cc,
        cs,
        sc,
        ss,
        components: sb.components,
        nodes: sb.len(),
    })
}

/// Combine the real blocks into the complex tensors
/// `γ¹ = (cc − ss + i(cs + sc)) / 4πm` and `γ² = (cc + ss − i(cs − sc)) / 4πm`.
pub fn gamma_tables(gpt: &GptTable) -> GammaTable {
    let n = gpt.order;
    let mut gamma1 = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    let mut gamma2 = gamma1.clone();
    for m in 0..n {
        let pref = 1.0 / (4.0 * PI * (m + 1) as f64);
        for j in 0..n {
            gamma1[(m, j)] = pref
                * Complex64::new(
                    gpt.cc[(m, j)] - gpt.ss[(m, j)],
                    gpt.cs[(m, j)] + gpt.sc[(m, j)],
                );
            gamma2[(m, j)] = pref
                * Complex64::new(
                    gpt.cc[(m, j)] + gpt.ss[(m, j)],
                    -(gpt.cs[(m, j)] - gpt.sc[(m, j)]),
                );
        }
    }
    GammaTable {
        order: n,
        gamma1,
        gamma2,
        components: gpt.components,
    }
}

/// Harmonic source `a₀ + Σ rⁿ(aₙ^c cos nθ + aₙ^s sin nθ)` of finite degree.
#[derive(Debug, Clone, Default)]
pub struct HarmonicSource {
    pub constant: f64,
    /// (aₙ^c, aₙ^s) for n = 1, 2, ...
    pub coefficients: Vec<(f64, f64)>,
}

impl HarmonicSource {
    /// The linear source `h = x`.
    pub fn linear_x() -> HarmonicSource {
        HarmonicSource {
            constant: 0.0,
            coefficients: vec![(1.0, 0.0)],
        }
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len()
    }

    /// Complex coefficients `αₙ = aₙ^c − i aₙ^s`.
    pub fn alpha(&self, n: usize) -> Complex64 {
        match self.coefficients.get(n - 1) {
            Some(&(c, s)) => Complex64::new(c, -s),
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// Evaluate the source at a point.
    pub fn eval(&self, z: Complex64) -> f64 {
        let mut v = self.constant;
        for (n, &(c, s)) in self.coefficients.iter().enumerate() {
            let zn = z.powu((n + 1) as u32);
            v += c * zn.re + s * zn.im;
        }
        v
    }
}

/// Multipole coefficients `β_m = Σₙ (γ¹_{mn} αₙ + γ²_{mn} conj(αₙ))` of the
/// field perturbation caused by `source`.
pub fn multipole_coefficients(gamma: &GammaTable, source: &HarmonicSource) -> Vec<Complex64> {
    (1..=gamma.order)
        .map(|m| {
            (1..=gamma.order.min(source.degree()))
                .map(|n| {
                    let a = source.alpha(n);
                    gamma.g1(m, n) * a + gamma.g2(m, n) * a.conj()
                })
                .sum()
        })
        .collect()
}

/// Field values and multipole coefficients of the perturbed exterior field.
///
/// `u(x) = h(x) − Re Σ β_m / x^m`, valid well outside the boundary; points
/// closer than 1.5× the circumscribed radius about the centroid are rejected.
pub fn exterior_field(
    sb: &SampledBoundary,
    k: f64,
    order: usize,
    source: &HarmonicSource,
    points: &[Complex64],
) -> Result<(Vec<f64>, Vec<Complex64>)> {
    let gpt = compute_gpt(sb, k, order)?;
    let gamma = gamma_tables(&gpt);
    let beta = multipole_coefficients(&gamma, source);
    let center = sb.centroid();
    let radius = 0.5 * sb.diameter();
    let values = points
        .iter()
        .map(|&z| {
            if (z - center).norm() < 1.5 * radius {
                return Err(Error::EvaluationRegion(format!(
                    "point ({}, {}) is within 1.5x the circumscribed radius",
                    z.re, z.im
                )));
            }
            let mut pert = Complex64::new(0.0, 0.0);
            let inv = 1.0 / z;
            let mut zpow = Complex64::new(1.0, 0.0);
            for b in &beta {
                zpow *= inv;
                pert += b * zpow;
            }
            Ok(source.eval(z) - pert.re)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok((values, beta))
}

/// Comparison of two tensor tables of the same shape at scales 1 and `s`:
/// entries must satisfy `M(sΩ)_{mn} = s^{m+n} M(Ω)_{mn}`.
#[derive(Debug, Clone, Serialize)]
pub struct ScalingReport {
    pub scale: f64,
    pub max_relative_error: f64,
    pub pass: bool,
}

use serde::Serialize;

/// Check tensor homogeneity under dilation. Returns a report rather than an
/// error so that callers can log violations.
pub fn gpt_scaling_check(unit: &GptTable, scaled: &GptTable, s: f64) -> ScalingReport {
    let n = unit.order.min(scaled.order);
    let mut worst: f64 = 0.0;
    let scale_ref = unit.cc.amax().max(unit.ss.amax()).max(1e-300);
    for m in 0..n {
        for j in 0..n {
            let factor = s.powi((m + j + 2) as i32);
            for (a, b) in [
                (&unit.cc, &scaled.cc),
                (&unit.cs, &scaled.cs),
                (&unit.sc, &scaled.sc),
                (&unit.ss, &scaled.ss),
            ] {
                let expect = a[(m, j)] * factor;
                let got = b[(m, j)];
                let denom = expect.abs().max(scale_ref * factor);
                worst = worst.max((got - expect).abs() / denom);
            }
        }
    }
    ScalingReport {
        scale: s,
        max_relative_error: worst,
        pass: worst < 1e-6,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::make_shape;
    use crate::potential::single_layer_offboundary;
    use approx::assert_relative_eq;

    fn sampled(spec: &str, m: usize) -> SampledBoundary {
        make_shape(&spec.parse().unwrap()).unwrap().sample(m).unwrap()
    }

    /// Closed-form tensors of a centered disk: diagonal blocks
    /// `2πn R^{2n} (k−1)/(k+1)`, every other entry zero.
    fn disk_gpt_diagonal(radius: f64, k: f64, n: usize) -> f64 {
        2.0 * PI * n as f64 * radius.powi(2 * n as i32) * (k - 1.0) / (k + 1.0)
    }

    #[test]
    fn harmonic_poly_low_orders() {
        let z = Complex64::new(0.7, -0.4);
        assert_relative_eq!(
            harmonic_poly(1, HarmonicKind::Cosine, z),
            z.re,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            harmonic_poly(2, HarmonicKind::Sine, z),
            2.0 * z.re * z.im,
            epsilon = 1e-15
        );
    }

    #[test]
    fn normal_gradient_on_circle() {
        let sb = sampled("disk:1.5", 64);
        for n in [1u32, 2, 4] {
            let g = harmonic_normal_gradient(&sb, n, HarmonicKind::Cosine);
            for (i, t) in sb.params.iter().enumerate() {
                let expect = n as f64 * 1.5f64.powi(n as i32 - 1) * (n as f64 * t).cos();
                assert_relative_eq!(g[i], expect, epsilon = 1e-12);
            }
        }
        let g0 = harmonic_normal_gradient(&sb, 0, HarmonicKind::Cosine);
        assert!(g0.amax() == 0.0);
    }

    #[test]
    fn normal_gradient_has_zero_mean() {
        // divergence theorem: ∮ ν·∇P dσ = 0 for harmonic P
        let sb = sampled("star:2,0.4,3", 256);
        let w = DVector::from_column_slice(&sb.weights);
        for n in 1..=5u32 {
            for kind in [HarmonicKind::Cosine, HarmonicKind::Sine] {
                let g = harmonic_normal_gradient(&sb, n, kind);
                let mean = w.dot(&g) / sb.perimeter();
                assert!(mean.abs() < 1e-10 * (1.0 + g.amax()));
            }
        }
    }

    #[test]
    fn disk_gpt_matches_separation_of_variables() {
        let sb = sampled("disk:1", 128);
        let gpt = compute_gpt(&sb, 0.0, 4).unwrap();
        for n in 1..=4 {
            let expect = disk_gpt_diagonal(1.0, 0.0, n);
            assert_relative_eq!(gpt.cc[(n - 1, n - 1)], expect, max_relative = 1e-10);
            assert_relative_eq!(gpt.ss[(n - 1, n - 1)], expect, max_relative = 1e-10);
        }
        // off-diagonal and cross blocks vanish
        let scale = gpt.cc.amax();
        for m in 0..4 {
            for n in 0..4 {
                if m != n {
                    assert!(gpt.cc[(m, n)].abs() < 1e-10 * scale);
                    assert!(gpt.ss[(m, n)].abs() < 1e-10 * scale);
                }
                assert!(gpt.cs[(m, n)].abs() < 1e-10 * scale);
                assert!(gpt.sc[(m, n)].abs() < 1e-10 * scale);
            }
        }
    }

    #[test]
    fn disk_gpt_general_conductivity() {
        let sb = sampled("disk:1.3", 128);
        let gpt = compute_gpt(&sb, 3.0, 3).unwrap();
        for n in 1..=3 {
            let expect = disk_gpt_diagonal(1.3, 3.0, n);
            assert_relative_eq!(gpt.cc[(n - 1, n - 1)], expect, max_relative = 1e-9);
            assert_relative_eq!(gpt.ss[(n - 1, n - 1)], expect, max_relative = 1e-9);
        }
        let scale = gpt.cc.amax();
        for m in 0..3 {
            for n in 0..3 {
                assert!(gpt.cs[(m, n)].abs() < 1e-9 * scale);
            }
        }
    }

    #[test]
    fn gpt_block_symmetry_on_ellipse() {
        let sb = sampled("ellipse:2,1", 256);
        let gpt = compute_gpt(&sb, 0.0, 6).unwrap();
        assert!(gpt.block_asymmetry() < 1e-8, "{}", gpt.block_asymmetry());
    }

    #[test]
    fn gpt_diagonal_blocks_negative_definite_at_k0() {
        let sb = sampled("star:2,0.4,3", 256);
        let gpt = compute_gpt(&sb, 0.0, 5).unwrap();
        for block in [&gpt.cc, &gpt.ss] {
            let sym = (block + block.transpose()) * 0.5;
            for trial in 0..5 {
                let v = DVector::from_iterator(
                    5,
                    (0..5).map(|i| ((i * 7 + trial * 3 + 1) as f64 * 0.37).sin()),
                );
                let q = (v.transpose() * &sym * &v)[(0, 0)];
                assert!(q < 0.0, "Rayleigh quotient {q} not negative");
            }
        }
    }

    #[test]
    fn gamma_tables_disk_and_ellipse() {
        let sb = sampled("disk:1", 128);
        let gamma = gamma_tables(&compute_gpt(&sb, 0.0, 4).unwrap());
        assert!((gamma.g2(1, 1) - Complex64::new(-1.0, 0.0)).norm() < 1e-10);
        assert!(gamma.gamma1.amax() < 1e-10);

        let sb = sampled("ellipse:2,1", 512);
        let gamma = gamma_tables(&compute_gpt(&sb, 0.0, 2).unwrap());
        assert!((gamma.g2(1, 1) - Complex64::new(-2.25, 0.0)).norm() < 1e-8);
        assert!((gamma.g1(1, 1) - Complex64::new(0.75, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn gamma_on_translated_disk_encodes_center() {
        // γ²₂₁ = −R²·z₀ pins the complex index conventions
        let z0 = Complex64::new(0.3, 0.4);
        let r = 0.7;
        let sb = sampled("disk:0.7,0.3,0.4", 256);
        let gamma = gamma_tables(&compute_gpt(&sb, 0.0, 3).unwrap());
        let expect = -r * r * z0;
        assert!(
            (gamma.g2(2, 1) - expect).norm() < 1e-10,
            "got {}, expected {}",
            gamma.g2(2, 1),
            expect
        );
    }

    #[test]
    fn exterior_field_disk_matches_image_solution() {
        // insulated unit disk, h = x: u = x + x/|z|²
        let sb = sampled("disk:1", 128);
        let pts = [
            Complex64::new(2.0, 0.5),
            Complex64::new(-1.8, 1.2),
            Complex64::new(0.0, 3.0),
        ];
        let (vals, beta) = exterior_field(&sb, 0.0, 6, &HarmonicSource::linear_x(), &pts).unwrap();
        for (z, u) in pts.iter().zip(&vals) {
            let exact = z.re + z.re / z.norm_sqr();
            assert_relative_eq!(*u, exact, epsilon = 1e-10);
        }
        assert!((beta[0] - Complex64::new(-1.0, 0.0)).norm() < 1e-10);
        for b in &beta[1..] {
            assert!(b.norm() < 1e-10);
        }
    }

    #[test]
    fn exterior_field_constant_source_unperturbed() {
        let sb = sampled("star:2,0.4,3", 128);
        let source = HarmonicSource {
            constant: 2.5,
            coefficients: vec![],
        };
        let pts = [Complex64::new(8.0, 1.0)];
        let (vals, beta) = exterior_field(&sb, 0.0, 4, &source, &pts).unwrap();
        assert_relative_eq!(vals[0], 2.5, epsilon = 1e-12);
        for b in &beta {
            assert!(b.norm() < 1e-12);
        }
    }

    #[test]
    fn exterior_field_rejects_near_points() {
        let sb = sampled("disk:1", 64);
        let pts = [Complex64::new(1.2, 0.0)];
        assert!(matches!(
            exterior_field(&sb, 0.0, 2, &HarmonicSource::linear_x(), &pts),
            Err(Error::EvaluationRegion(_))
        ));
    }

    #[test]
    fn ellipse_beta1_from_gamma_entries() {
        let sb = sampled("ellipse:2,1", 512);
        let gamma = gamma_tables(&compute_gpt(&sb, 0.0, 4).unwrap());
        let beta = multipole_coefficients(&gamma, &HarmonicSource::linear_x());
        assert!((beta[0] - Complex64::new(-1.5, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn multipole_expansion_matches_direct_layer_potential() {
        // evaluate u−h at radius 6 two ways: the multipole series and the
        // single-layer potential of the solved density
        let sb = sampled("ellipse:2,1", 512);
        let np = assemble_np(&sb).unwrap();
        let rhs = harmonic_normal_gradient(&sb, 1, HarmonicKind::Cosine);
        let phi = crate::potential::solve_density(&np, -0.5, &rhs).unwrap();

        let gamma = gamma_tables(&compute_gpt(&sb, 0.0, 8).unwrap());
        let beta = multipole_coefficients(&gamma, &HarmonicSource::linear_x());

        let pts: Vec<Complex64> = (0..16)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / 16.0;
                Complex64::new(6.0 * t.cos(), 6.0 * t.sin())
            })
            .collect();
        let direct = single_layer_offboundary(&sb, &phi, &pts);
        for (z, d) in pts.iter().zip(&direct) {
            let mut series = Complex64::new(0.0, 0.0);
            for (m, b) in beta.iter().enumerate() {
                series += b / z.powu((m + 1) as u32);
            }
            // u − h = S[φ] = −Re Σ β_m z^{−m}
            assert!(
                (d - (-series.re)).abs() < 1e-6,
                "direct {d} vs series {}",
                -series.re
            );
        }
    }

    #[test]
    fn scaling_check_on_disks() {
        let g1 = compute_gpt(&sampled("disk:1", 128), 0.0, 3).unwrap();
        let g2 = compute_gpt(&sampled("disk:2", 128), 0.0, 3).unwrap();
        assert_relative_eq!(g2.cc[(0, 0)] / g1.cc[(0, 0)], 4.0, max_relative = 1e-10);
        assert_relative_eq!(g2.cc[(1, 1)] / g1.cc[(1, 1)], 16.0, max_relative = 1e-10);
        let report = gpt_scaling_check(&g1, &g2, 2.0);
        assert!(report.pass, "scaling error {}", report.max_relative_error);
        let same = gpt_scaling_check(&g1, &g1, 1.0);
        assert_eq!(same.max_relative_error, 0.0);
    }

    #[test]
    fn rotation_preserves_first_gamma2_entry() {
        let curve = make_shape(&"star:2,0.4,3".parse().unwrap()).unwrap();
        let g0 = gamma_tables(&compute_gpt(&curve.sample(256).unwrap(), 0.0, 2).unwrap());
        let g1 = gamma_tables(
            &compute_gpt(&curve.rotated(0.7).sample(256).unwrap(), 0.0, 2).unwrap(),
        );
        assert_relative_eq!(
            g0.g2(1, 1).norm(),
            g1.g2(1, 1).norm(),
            epsilon = 1e-8
        );
        // γ² with equal indices is rotation invariant outright; γ¹ picks up
        // the phase e^{2iθ}
        assert!((g0.g2(1, 1) - g1.g2(1, 1)).norm() < 1e-8);
        let expect = g0.g1(1, 1) * Complex64::new(0.0, 2.0 * 0.7).exp();
        assert!((g1.g1(1, 1) - expect).norm() < 1e-8);
    }

    #[test]
    fn order_caps_enforced() {
        let sb = sampled("disk:1", 64);
        assert!(matches!(
            compute_gpt(&sb, 0.0, 9),
            Err(Error::ResolutionInsufficient(_))
        ));
        assert!(matches!(
            compute_gpt(&sb, 0.0, 25),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            compute_gpt(&sb, 1.0, 2),
            Err(Error::InvalidParameter(_))
        ));
    }
}
