//! Cross-identities and geometric error metrics used by the validation
//! command and the acceptance suite.

use num_complex::Complex64;
use serde::Serialize;

use crate::conformal::ConformalCoefficients;
use crate::error::{Error, Result};
use crate::gpt::GammaTable;

/// One named check with its computed value, reference, tolerance and basis.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub reference: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// where the reference comes from (closed form, continuum identity,
    /// negative control, ...)
    pub basis: String,
}

impl Check {
    /// A check that passes when |value − reference| ≤ tolerance.
    pub fn near(name: &str, value: f64, reference: f64, tolerance: f64, basis: &str) -> Check {
        Check {
            name: name.into(),
            value,
            reference,
            tolerance,
            pass: (value - reference).abs() <= tolerance,
            basis: basis.into(),
        }
    }

    /// A check that passes when the value exceeds a floor (negative controls).
    pub fn exceeds(name: &str, value: f64, floor: f64, basis: &str) -> Check {
        Check {
            name: name.into(),
            value,
            reference: floor,
            tolerance: 0.0,
            pass: value > floor,
            basis: basis.into(),
        }
    }
}

/// Machine-readable validation outcome; deterministic given its inputs.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Plain-text table, one row per check.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<34} {:>14} {:>14} {:>10}  {:<6} {}\n",
            "check", "value", "reference", "tol", "status", "basis"
        ));
        for c in &self.checks {
            out.push_str(&format!(
                "{:<34} {:>14.6e} {:>14.6e} {:>10.1e}  {:<6} {}\n",
                c.name,
                c.value,
                c.reference,
                c.tolerance,
                if c.pass { "pass" } else { "FAIL" },
                c.basis
            ));
        }
        out
    }
}

/// Both sides of the third-order consistency identity
/// `γ²₃₁ = γ¹₁₁ γ²₁₁ + (γ²₂₁)² / γ²₁₁`,
/// which holds exactly for simply connected domains and fails otherwise.
pub fn consistency_identity(gamma: &GammaTable) -> Result<(Complex64, Complex64)> {
    if gamma.order < 3 {
        return Err(Error::InvalidParameter(format!(
            "consistency identity needs tensor order >= 3, got {}",
            gamma.order
        )));
    }
    let g11 = gamma.g2(1, 1);
    if g11.norm() == 0.0 {
        return Err(Error::NotSimplyConnected(
            "γ²₁₁ vanishes; identity undefined".into(),
        ));
    }
    let lhs = gamma.g2(3, 1);
    let g21 = gamma.g2(2, 1);
    let rhs = gamma.g1(1, 1) * g11 + g21 * g21 / g11;
    Ok((lhs, rhs))
}

/// Symmetric discrete Hausdorff distance between two point sets.
pub fn hausdorff_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    fn one_sided(a: &[Complex64], b: &[Complex64]) -> f64 {
        a.iter()
            .map(|p| {
                b.iter()
                    .map(|q| (p - q).norm_sqr())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
            .sqrt()
    }
    one_sided(a, b).max(one_sided(b, a))
}

/// Similarity-invariant shape descriptors derived from the map coefficients.
///
/// The raw ratios `μ_j/μ₋₁` are invariant under translation and scaling; a
/// rotation by θ multiplies the j-th ratio by a fixed phase `e^{i(j+1)θ}`, so
/// the exported descriptor splits each ratio into its modulus and a relative
/// phase with that rotation factored out (anchored at the first ratio with
/// significant modulus).
#[derive(Debug, Clone, Serialize)]
pub struct ShapeDescriptors {
    /// μ_j/μ₋₁ for j = 1..N as (re, im)
    pub ratios: Vec<(f64, f64)>,
    /// |μ_j/μ₋₁|, fully similarity invariant
    pub moduli: Vec<f64>,
    /// arg(μ_j/μ₋₁) − (j+1)·θ̂ in (−π, π], with θ̂ estimated from the anchor
    pub relative_phases: Vec<f64>,
}

pub fn shape_descriptors(coeffs: &ConformalCoefficients) -> ShapeDescriptors {
    let ratios: Vec<Complex64> = coeffs.mu.iter().skip(1).map(|m| m / coeffs.c).collect();
    let moduli: Vec<f64> = ratios.iter().map(|r| r.norm()).collect();
    let scale = moduli.iter().cloned().fold(0.0, f64::max);
    // anchor: first ratio that carries signal; θ̂ = arg(ratio_j)/(j+1)
    let theta = ratios
        .iter()
        .enumerate()
        .find(|(_, r)| r.norm() > 1e-9 * (1.0 + scale))
        .map(|(j, r)| r.arg() / (j as f64 + 2.0))
        .unwrap_or(0.0);
    let relative_phases = ratios
        .iter()
        .enumerate()
        .map(|(j, r)| {
            if r.norm() <= 1e-12 * (1.0 + scale) {
                0.0
            } else {
                let raw = r.arg() - (j as f64 + 2.0) * theta;
                // wrap into (−π, π]
                let mut x = raw % (2.0 * std::f64::consts::PI);
                if x > std::f64::consts::PI {
                    x -= 2.0 * std::f64::consts::PI;
                } else if x <= -std::f64::consts::PI {
                    x += 2.0 * std::f64::consts::PI;
                }
                x
            }
        })
        .collect();
    ShapeDescriptors {
        ratios: ratios.iter().map(|r| (r.re, r.im)).collect(),
        moduli,
        relative_phases,
    }
}
