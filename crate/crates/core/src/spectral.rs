//! Eigendecomposition of the Neumann–Poincaré operator in the energy inner
//! product, and the spectral route to the polarization tensors.
//!
//! On the weighted-mean-zero subspace, `K*` is self-adjoint with respect to
//! `⟨φ,ψ⟩_H = −Σᵢ wᵢ φᵢ (Sψ)ᵢ`, whose Gram matrix `G = −W·S` is symmetric
//! positive definite there. The discretized problem is reduced to that
//! subspace with a Householder reflector carrying the weight vector onto the
//! first coordinate axis, then solved as a symmetric generalized problem
//! `A x = λ G x` via the Cholesky factor of `G`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::geometry::SampledBoundary;
use crate::gpt::{harmonic_normal_gradient, HarmonicKind};
use crate::potential::{NpMatrix, SingleLayerMatrix};

/// Retained eigenpairs, sorted by decreasing |λ| and orthonormal in the
/// energy inner product.
#[derive(Debug, Clone)]
pub struct SpectralData {
    pub eigenvalues: Vec<f64>,
    /// column j is the node vector of the j-th eigenfunction
    pub eigenvectors: DMatrix<f64>,
    pub boundary: SampledBoundary,
}

/// Householder reflector that maps e₁ to `w/|w|`; applying it to a matrix on
/// both sides and dropping the first row/column restricts to {v : wᵀv = 0}.
struct Reflector {
    u: DVector<f64>,
}

impl Reflector {
    fn for_weights(w: &DVector<f64>) -> Reflector {
        let mut u = w / w.norm();
        u[0] -= 1.0;
        let n = u.norm();
        if n > 0.0 {
            u /= n;
        }
        Reflector { u }
    }

    /// H v with H = I − 2uuᵀ.
    fn apply_vec(&self, v: &DVector<f64>) -> DVector<f64> {
        v - 2.0 * self.u.dot(v) * &self.u
    }

    /// H A H, then the trailing principal block.
    fn restrict(&self, a: &DMatrix<f64>) -> DMatrix<f64> {
        let m = a.nrows();
        // A - 2u(uᵀA) - 2(Au)uᵀ + 4u(uᵀAu)uᵀ
        let au = a * &self.u;
        let uta = a.tr_mul(&self.u);
        let uau = self.u.dot(&au);
        let mut h = a.clone();
        for i in 0..m {
            for j in 0..m {
                h[(i, j)] += -2.0 * self.u[i] * uta[j] - 2.0 * au[i] * self.u[j]
                    + 4.0 * self.u[i] * uau * self.u[j];
            }
        }
        h.view((1, 1), (m - 1, m - 1)).into_owned()
    }

    /// Lift a restricted vector back to the full space.
    fn lift(&self, x: &DVector<f64>) -> DVector<f64> {
        let m = x.len() + 1;
        let mut v = DVector::zeros(m);
        v.rows_mut(1, m - 1).copy_from(x);
        self.apply_vec(&v)
    }
}

/// Compute `count` eigenpairs of `K*` on the energy space.
///
/// Eigenpairs whose discrete eigenvalue reaches `½ − 1e−6` are discarded as
/// artifacts of the constant mode leaking through quadrature error.
pub fn np_eigendecomposition(
    np: &NpMatrix,
    sl: &SingleLayerMatrix,
    count: usize,
) -> Result<SpectralData> {
    let sb = &np.boundary;
    let m = sb.len();
    if sb.components != 1 {
        return Err(Error::UnsupportedGeometry(
            "eigendecomposition needs a single-component boundary".into(),
        ));
    }
    if count > m / 4 {
        return Err(Error::InvalidParameter(format!(
            "requested {count} modes exceeds node count / 4 = {}",
            m / 4
        )));
    }

    let w = DVector::from_column_slice(&sb.weights);
    let wdiag = DMatrix::from_diagonal(&w);
    // energy metric and the symmetrized operator
    let g = -(&wdiag * &sl.matrix);
    let g = 0.5 * (&g + g.transpose());
    let a = &g * &np.matrix;
    let a = 0.5 * (&a + a.transpose());

    let refl = Reflector::for_weights(&w);
    let g_r = refl.restrict(&g);
    let a_r = refl.restrict(&a);

    let chol = g_r
        .clone()
        .cholesky()
        .ok_or_else(|| Error::NumericalFailure(
            "energy metric not positive definite on the mean-zero subspace".into(),
        ))?;
    let l = chol.l();
    // C = L⁻¹ A L⁻ᵀ
    let c = {
        let la = l
            .solve_lower_triangular(&a_r)
            .ok_or_else(|| Error::NumericalFailure("singular Cholesky factor".into()))?;
        let ct = l
            .solve_lower_triangular(&la.transpose())
            .ok_or_else(|| Error::NumericalFailure("singular Cholesky factor".into()))?;
        0.5 * (&ct + ct.transpose())
    };
    let eig = nalgebra::SymmetricEigen::try_new(c, 1e-13, 10_000)
        .ok_or_else(|| Error::NumericalFailure("symmetric eigensolver did not converge".into()))?;

    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[j]
            .abs()
            .partial_cmp(&eig.eigenvalues[i].abs())
            .unwrap()
    });

    let lt = l.transpose();
    let mut eigenvalues = Vec::with_capacity(count);
    let mut columns: Vec<DVector<f64>> = Vec::with_capacity(count);
    for &idx in &order {
        if eigenvalues.len() == count {
            break;
        }
        let lam = eig.eigenvalues[idx];
        if lam.abs() >= 0.5 - 1e-6 {
            continue; // constant-mode artifact
        }
        let y = eig.eigenvectors.column(idx).into_owned();
        let x = lt
            .solve_upper_triangular(&y)
            .ok_or_else(|| Error::NumericalFailure("singular Cholesky factor".into()))?;
        eigenvalues.push(lam);
        columns.push(refl.lift(&x));
    }
    let eigenvectors = if columns.is_empty() {
        DMatrix::zeros(m, 0)
    } else {
        DMatrix::from_columns(&columns)
    };
    Ok(SpectralData {
        eigenvalues,
        eigenvectors,
        boundary: sb.clone(),
    })
}

impl SpectralData {
    pub fn count(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Gram matrix of the eigenvectors in the energy inner product; equals
    /// the identity by construction.
    pub fn energy_gram(&self, sl: &SingleLayerMatrix) -> DMatrix<f64> {
        let w = DMatrix::from_diagonal(&DVector::from_column_slice(&self.boundary.weights));
        let g = -(&w * &sl.matrix);
        self.eigenvectors.tr_mul(&(&g * &self.eigenvectors))
    }
}

/// One tensor entry from the spectral sum
/// `Σ_j ⟨ν·∇P_n^α, φ_j⟩_H ⟨ν·∇P_m^β, φ_j⟩_H / ((λ−λ_j)(½−λ_j))`.
///
/// Serves as an oracle for the direct quadrature route. The denominator's
/// second factor is `½ − λ_j`: substituting the jump relation
/// `φ_j = (λ_j−½)⁻¹ ∂_ν S[φ_j]|₋` into `⟨P_m, φ_j⟩` and integrating by parts
/// flips the sign of the energy pairing once.
#[allow(clippy::too_many_arguments)]
pub fn gpt_spectral(
    spec: &SpectralData,
    sl: &SingleLayerMatrix,
    lambda: f64,
    m: usize,
    n: usize,
    beta: HarmonicKind,
    alpha: HarmonicKind,
) -> Result<f64> {
    if lambda.abs() < 0.5 {
        return Err(Error::InvalidParameter(format!(
            "spectral parameter must satisfy |λ| >= 1/2, got {lambda}"
        )));
    }
    for lam in &spec.eigenvalues {
        if (lambda - lam).abs() < 1e-12 {
            return Err(Error::Resonance(format!(
                "λ = {lambda} collides with eigenvalue {lam}"
            )));
        }
    }
    let sb = &spec.boundary;
    let w = DMatrix::from_diagonal(&DVector::from_column_slice(&sb.weights));
    let g = -(&w * &sl.matrix);
    let gn = harmonic_normal_gradient(sb, n as u32, alpha);
    let gm = harmonic_normal_gradient(sb, m as u32, beta);
    let pn = spec.eigenvectors.tr_mul(&(&g * &gn));
    let pm = spec.eigenvectors.tr_mul(&(&g * &gm));
    let mut sum = 0.0;
    for (j, lam) in spec.eigenvalues.iter().enumerate() {
        sum += pn[j] * pm[j] / ((lambda - lam) * (0.5 - lam));
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::make_shape;
    use crate::gpt::compute_gpt;
    use crate::potential::{assemble_np, assemble_single_layer};
    use approx::assert_relative_eq;

    fn setup(spec: &str, m: usize) -> (NpMatrix, SingleLayerMatrix) {
        let sb = make_shape(&spec.parse().unwrap())
            .unwrap()
            .sample(m)
            .unwrap();
        (
            assemble_np(&sb).unwrap(),
            assemble_single_layer(&sb).unwrap(),
        )
    }

    #[test]
    fn ellipse_spectrum_is_geometric() {
        // semi-axes (a,b) give eigenvalue pairs ±q^n/2 with q=(a−b)/(a+b)
        let (np, sl) = setup("ellipse:2,1", 512);
        let spec = np_eigendecomposition(&np, &sl, 8).unwrap();
        let q: f64 = 1.0 / 3.0;
        let expected = [
            q / 2.0,
            -q / 2.0,
            q * q / 2.0,
            -q * q / 2.0,
            q * q * q / 2.0,
            -q * q * q / 2.0,
        ];
        let mut got = spec.eigenvalues[..6].to_vec();
        got.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let mut want = expected.to_vec();
        want.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (g, e) in got.iter().zip(&want) {
            assert_relative_eq!(*g, *e, epsilon = 1e-6);
        }
    }

    #[test]
    fn disk_mean_zero_spectrum_vanishes() {
        let (np, sl) = setup("disk:1", 512);
        let spec = np_eigendecomposition(&np, &sl, 16).unwrap();
        for lam in &spec.eigenvalues {
            assert!(lam.abs() < 1e-8, "disk eigenvalue {lam}");
        }
    }

    #[test]
    fn eigenvalues_stay_inside_open_interval() {
        let (np, sl) = setup("star:2,0.4,3", 256);
        let spec = np_eigendecomposition(&np, &sl, 32).unwrap();
        for lam in &spec.eigenvalues {
            assert!(lam.abs() < 0.5);
        }
        assert!(spec.eigenvalues[spec.count() - 1].abs() < spec.eigenvalues[0].abs());
    }

    #[test]
    fn eigenvectors_are_energy_orthonormal() {
        let (np, sl) = setup("ellipse:2,1", 256);
        let spec = np_eigendecomposition(&np, &sl, 12).unwrap();
        let gram = spec.energy_gram(&sl);
        for i in 0..spec.count() {
            for j in 0..spec.count() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (gram[(i, j)] - expect).abs() < 1e-8,
                    "gram[{i},{j}] = {}",
                    gram[(i, j)]
                );
            }
        }
    }

    #[test]
    fn spectral_sum_reproduces_disk_tensors() {
        let (np, sl) = setup("disk:1", 256);
        let spec = np_eigendecomposition(&np, &sl, 32).unwrap();
        for n in 1..=3usize {
            let direct = -2.0 * std::f64::consts::PI * n as f64; // radius 1, k = 0
            let s = gpt_spectral(
                &spec,
                &sl,
                -0.5,
                n,
                n,
                HarmonicKind::Cosine,
                HarmonicKind::Cosine,
            )
            .unwrap();
            assert_relative_eq!(s, direct, max_relative = 1e-6);
        }
    }

    #[test]
    fn spectral_matches_direct_on_ellipse() {
        let sb = make_shape(&"ellipse:2,1".parse().unwrap())
            .unwrap()
            .sample(512)
            .unwrap();
        let np = assemble_np(&sb).unwrap();
        let sl = assemble_single_layer(&sb).unwrap();
        let spec = np_eigendecomposition(&np, &sl, 48).unwrap();
        let gpt = compute_gpt(&sb, 0.0, 2).unwrap();
        let s = gpt_spectral(
            &spec,
            &sl,
            -0.5,
            1,
            1,
            HarmonicKind::Cosine,
            HarmonicKind::Cosine,
        )
        .unwrap();
        assert_relative_eq!(s, gpt.cc[(0, 0)], max_relative = 1e-5);
    }

    #[test]
    fn spectral_sum_is_symmetric_bitwise() {
        let (np, sl) = setup("ellipse:2,1", 128);
        let spec = np_eigendecomposition(&np, &sl, 8).unwrap();
        let a = gpt_spectral(
            &spec,
            &sl,
            -0.5,
            2,
            1,
            HarmonicKind::Cosine,
            HarmonicKind::Sine,
        )
        .unwrap();
        let b = gpt_spectral(
            &spec,
            &sl,
            -0.5,
            1,
            2,
            HarmonicKind::Sine,
            HarmonicKind::Cosine,
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn empty_spectrum_gives_zero_sum() {
        let (np, sl) = setup("disk:1", 64);
        let spec = np_eigendecomposition(&np, &sl, 0).unwrap();
        let s = gpt_spectral(
            &spec,
            &sl,
            -0.5,
            1,
            1,
            HarmonicKind::Cosine,
            HarmonicKind::Cosine,
        )
        .unwrap();
        assert_eq!(s, 0.0);
    }

    #[test]
    fn mode_count_cap() {
        let (np, sl) = setup("disk:1", 64);
        assert!(matches!(
            np_eigendecomposition(&np, &sl, 32),
            Err(Error::InvalidParameter(_))
        ));
    }
}
