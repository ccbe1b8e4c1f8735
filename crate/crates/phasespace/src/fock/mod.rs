//! Independent truncated Fock-basis oracle: states, translations,
//! reflections, parity projection, and dephasing, built from ladder-operator
//! matrix algebra with no reference to the grid pipeline.
//!
//! Conventions: q = sqrt(hbar/2)(a + a+), p = i sqrt(hbar/2)(a+ - a); the
//! translation by a chord xi is exp((i/hbar)(xi_p q - xi_q p)), which
//! displaces the vacuum to the coherent state centered at (xi_p, xi_q).
//! Reflections compose as R_x = T_{2x} R_0 with R_0 = diag((-1)^n).
//!
//! Matrix exponentials corrupt the top of the truncated basis, so unitarity
//! and group-law assertions are made on the protected subblock of the lowest
//! dim/2 levels only.

mod expm;
mod quad;

pub use expm::expm;
pub use quad::gauss_hermite;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::point::{symplectic_product, Chord, PhasePoint};
use crate::states::Parity;

/// Truncation rule for coherent-type states of amplitude |alpha|^2 =
/// |Y|^2/(2 hbar): a Poisson-tail margin keeping the missing mass below 1e-10.
pub fn recommended_dim(y_norm: f64, hbar: f64) -> usize {
    let a = y_norm * y_norm / (2.0 * hbar);
    (a + 10.0 * a.sqrt() + 20.0).ceil() as usize
}

/// Operator on the truncated Fock space.
#[derive(Debug, Clone)]
pub struct FockOperator {
    mat: DMatrix<Complex64>,
    hbar: f64,
}

impl FockOperator {
    pub fn new(mat: DMatrix<Complex64>, hbar: f64) -> Self {
        assert_eq!(mat.nrows(), mat.ncols());
        Self { mat, hbar }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }
    pub fn hbar(&self) -> f64 {
        self.hbar
    }
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn adjoint(&self) -> FockOperator {
        FockOperator::new(self.mat.adjoint(), self.hbar)
    }

    pub fn compose(&self, other: &FockOperator) -> FockOperator {
        assert_eq!(self.dim(), other.dim());
        FockOperator::new(&self.mat * &other.mat, self.hbar)
    }

    /// Largest |entry| of (self - other) restricted to the protected
    /// subblock (lowest dim/2 levels).
    pub fn protected_distance(&self, other: &FockOperator) -> f64 {
        protected_max_abs(&(&self.mat - &other.mat), self.dim() / 2)
    }

    /// Unitarity defect max |(U+ U - 1)_{mn}| over the protected subblock.
    pub fn protected_unitarity_defect(&self) -> f64 {
        let gram = self.mat.adjoint() * &self.mat;
        let eye = DMatrix::<Complex64>::identity(self.dim(), self.dim());
        protected_max_abs(&(gram - eye), self.dim() / 2)
    }
}

fn protected_max_abs(m: &DMatrix<Complex64>, block: usize) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..block {
        for j in 0..block {
            worst = worst.max(m[(i, j)].norm());
        }
    }
    worst
}

fn trace(m: &DMatrix<Complex64>) -> Complex64 {
    (0..m.nrows()).map(|k| m[(k, k)]).sum()
}

fn trace_product(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> Complex64 {
    let n = a.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

/// Truncated density operator: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    mat: DMatrix<Complex64>,
    hbar: f64,
}

impl DensityMatrix {
    pub fn from_matrix(mat: DMatrix<Complex64>, hbar: f64) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::InvalidDensity("matrix is not square".into()));
        }
        if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidDensity("non-finite entries".into()));
        }
        let herm_defect = (&mat - mat.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm_defect > 1e-12 {
            return Err(Error::InvalidDensity(format!(
                "Hermiticity defect {herm_defect:.3e}"
            )));
        }
        let tr = trace(&mat);
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(Error::InvalidDensity(format!("trace {tr} != 1")));
        }
        let eigen_min = SymmetricEigen::new(mat.clone())
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |m, &v| m.min(v));
        if eigen_min < -1e-10 {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {eigen_min:.3e}"
            )));
        }
        Ok(Self { mat, hbar })
    }

    /// Pure state |psi><psi| (normalizing psi).
    pub fn pure(psi: &DVector<Complex64>, hbar: f64) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 {
            return Err(Error::InvalidDensity("zero state vector".into()));
        }
        let scaled = psi.map(|z| z / norm);
        let mat = DMatrix::from_fn(psi.len(), psi.len(), |i, j| scaled[i] * scaled[j].conj());
        Self::from_matrix(mat, hbar)
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }
    pub fn hbar(&self) -> f64 {
        self.hbar
    }
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn trace(&self) -> Complex64 {
        trace(&self.mat)
    }

    pub fn purity(&self) -> f64 {
        trace_product(&self.mat, &self.mat).re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = SymmetricEigen::new(self.mat.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        v.sort_by(|a, b| a.total_cmp(b));
        v
    }

    /// Classical mixture p rho1 + (1-p) rho2.
    pub fn mix(p: f64, rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<Self> {
        assert_eq!(rho1.dim(), rho2.dim());
        let mat = rho1.mat.map(|z| z * p) + rho2.mat.map(|z| z * (1.0 - p));
        Self::from_matrix(mat, rho1.hbar)
    }
}

/// Annihilation matrix a|n> = sqrt(n)|n-1>.
pub fn lowering(dim: usize) -> DMatrix<Complex64> {
    let mut a = DMatrix::<Complex64>::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// Position and momentum quadratures q = sqrt(hbar/2)(a + a+),
/// p = i sqrt(hbar/2)(a+ - a).
pub fn ladder_and_quadratures(dim: usize, hbar: f64) -> (FockOperator, FockOperator) {
    assert!(dim >= 4);
    let a = lowering(dim);
    let ad = a.adjoint();
    let scale = (hbar / 2.0).sqrt();
    let q = (&a + &ad).map(|z| z * scale);
    let p = (&ad - &a).map(|z| z * Complex64::new(0.0, scale));
    (FockOperator::new(q, hbar), FockOperator::new(p, hbar))
}

/// Translation T_xi = exp((i/hbar)(xi_p q - xi_q p)).
///
/// Fails when the displacement amplitude |xi|^2/(2 hbar) exceeds half the
/// truncation, or when the resulting matrix loses unitarity on the protected
/// subblock.
pub fn translation_operator(xi: Chord, dim: usize, hbar: f64) -> Result<FockOperator> {
    let amplitude = xi.norm_sq() / (2.0 * hbar);
    if amplitude > dim as f64 / 2.0 {
        return Err(Error::TruncationExceeded { amplitude, dim });
    }
    let t = translation_unchecked(xi, dim, hbar);
    let defect = t.protected_unitarity_defect();
    if defect > 1e-8 {
        return Err(Error::TruncationExceeded { amplitude, dim });
    }
    Ok(t)
}

/// Exponential of the translation generator with no truncation guards; for
/// internal quadrature sums whose weights already suppress the corrupted
/// large-displacement terms.
fn translation_unchecked(xi: Chord, dim: usize, hbar: f64) -> FockOperator {
    let (q, p) = ladder_and_quadratures(dim, hbar);
    let generator =
        (q.mat.map(|z| z * xi.p) - p.mat.map(|z| z * xi.q)).map(|z| z * Complex64::i() / hbar);
    FockOperator::new(expm(&generator), hbar)
}

/// Parity about the origin, R_0 = diag((-1)^n).
pub fn parity_operator(dim: usize, hbar: f64) -> FockOperator {
    let mat = DMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            Complex64::new(if i % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    FockOperator::new(mat, hbar)
}

/// Reflection through the phase-space point x: R_x = T_{2x} R_0, Hermitian
/// and involutive on the protected subblock.
pub fn reflection_operator(x: PhasePoint, dim: usize, hbar: f64) -> Result<FockOperator> {
    let t = translation_operator(x * 2.0, dim, hbar)?;
    Ok(t.compose(&parity_operator(dim, hbar)))
}

/// Vacuum state |0><0|.
pub fn vacuum_density(dim: usize, hbar: f64) -> DensityMatrix {
    let mut psi = DVector::<Complex64>::zeros(dim);
    psi[0] = Complex64::new(1.0, 0.0);
    DensityMatrix::pure(&psi, hbar).expect("vacuum is a valid state")
}

/// Coherent state centered at y = (P, Q): T_{(P,Q)} |0>.
pub fn coherent_density(y: PhasePoint, dim: usize, hbar: f64) -> Result<DensityMatrix> {
    let t = translation_operator(y, dim, hbar)?;
    let psi = DVector::from_fn(dim, |k, _| t.mat[(k, 0)]);
    DensityMatrix::pure(&psi, hbar)
}

/// Parity cat: normalized |Y> +- |-Y>.
pub fn cat_density(y: PhasePoint, parity: Parity, dim: usize, hbar: f64) -> Result<DensityMatrix> {
    if parity == Parity::Odd && y.norm_sq() == 0.0 {
        return Err(Error::DegenerateCat);
    }
    let plus = translation_operator(y, dim, hbar)?;
    let minus = translation_operator(-y, dim, hbar)?;
    let s = parity.sign();
    let psi = DVector::from_fn(dim, |k, _| plus.mat[(k, 0)] + s * minus.mat[(k, 0)]);
    DensityMatrix::pure(&psi, hbar)
}

/// Wigner value W(x) = Tr(rho R_x) / (pi hbar).
pub fn wigner_point(rho: &DensityMatrix, x: PhasePoint) -> Result<f64> {
    let r = reflection_operator(x, rho.dim(), rho.hbar())?;
    let tr = trace_product(rho.matrix(), r.matrix());
    if tr.im.abs() > 1e-8 {
        return Err(Error::ImaginaryResidue {
            residue: tr.im.abs(),
            limit: 1e-8,
        });
    }
    Ok(tr.re / (PI * rho.hbar()))
}

/// Chord value Wtilde(xi) = Tr(T_xi rho) / (2 pi hbar); the sign of the
/// displacement is fixed by requiring agreement with the symplectic Fourier
/// transform of the Wigner function.
pub fn chord_point(rho: &DensityMatrix, xi: Chord) -> Result<Complex64> {
    let t = translation_operator(xi, rho.dim(), rho.hbar())?;
    Ok(trace_product(t.matrix(), rho.matrix()) / (2.0 * PI * rho.hbar()))
}

/// Parity measurement about `x_center`: returns the normalized projected
/// density P rho P / Tr(rho P) and the outcome probability
/// Tr(rho P) = (1 +- pi hbar W(x_center))/2.
pub fn project_density(
    rho: &DensityMatrix,
    x_center: PhasePoint,
    parity: Parity,
) -> Result<(DensityMatrix, f64)> {
    let dim = rho.dim();
    let hbar = rho.hbar();
    let r = reflection_operator(x_center, dim, hbar)?;
    let s = Complex64::new(0.5 * parity.sign(), 0.0);
    let projector = DMatrix::<Complex64>::identity(dim, dim).map(|z| z * 0.5) + r.matrix().map(|z| z * s);

    let prob_tr = trace_product(rho.matrix(), &projector);
    if prob_tr.im.abs() > 1e-10 {
        return Err(Error::ImaginaryResidue {
            residue: prob_tr.im.abs(),
            limit: 1e-10,
        });
    }
    let probability = prob_tr.re;

    // built-in cross-check against (1 +- pi hbar W(X))/2
    let from_wigner = 0.5 * (1.0 + parity.sign() * PI * hbar * wigner_point(rho, x_center)?);
    if (probability - from_wigner).abs() > 1e-8 {
        return Err(Error::InvalidDensity(format!(
            "projection probability {probability} disagrees with (1 +- pi hbar W)/2 = {from_wigner}"
        )));
    }

    if probability <= crate::measurement::P_FLOOR {
        return Err(Error::ImpossibleOutcome {
            probability,
            floor: crate::measurement::P_FLOOR,
        });
    }

    let sandwiched = &projector * rho.matrix() * &projector;
    let normalized = sandwiched.map(|z| z / probability);
    // sandwiching leaves round-off Hermiticity defects; symmetrize before
    // validation
    let symmetrized = (normalized.clone() + normalized.adjoint()).map(|z| z * 0.5);
    Ok((DensityMatrix::from_matrix(symmetrized, hbar)?, probability))
}

/// Oracle counterpart of the diffusive propagator: the Gaussian-weighted
/// mixture of translated densities
///
///   rho(t) = Int dy K(y) T_y rho T_y+,  K = heat kernel of variance
///   hbar c^2 t per axis,
///
/// discretized with Gauss-Hermite quadrature. The order is raised until two
/// consecutive rules agree to 1e-7 entrywise.
pub fn dephase_density(rho: &DensityMatrix, t: f64, coupling: f64) -> Result<DensityMatrix> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::NonFinite("dephasing time must be >= 0"));
    }
    if t == 0.0 {
        return Ok(rho.clone());
    }
    let sigma = (rho.hbar() * coupling * coupling * t).sqrt();
    let orders = [24usize, 36, 48, 64];
    let mut previous: Option<DMatrix<Complex64>> = None;
    for &order in &orders {
        let mixed = dephase_at_order(rho, sigma, order)?;
        if let Some(prev) = previous {
            let residual = (&mixed - &prev).iter().map(|z| z.norm()).fold(0.0, f64::max);
            if residual <= 1e-7 {
                let symmetrized = (mixed.clone() + mixed.adjoint()).map(|z| z * 0.5);
                return DensityMatrix::from_matrix(symmetrized, rho.hbar());
            }
        }
        previous = Some(mixed);
    }
    Err(Error::QuadratureUnderResolved {
        residual: f64::NAN,
        order: *orders.last().unwrap(),
    })
}

fn dephase_at_order(rho: &DensityMatrix, sigma: f64, order: usize) -> Result<DMatrix<Complex64>> {
    let dim = rho.dim();
    let hbar = rho.hbar();
    let (all_nodes, all_weights) = gauss_hermite(order);
    // nodes in the far Gaussian tail contribute nothing but would displace
    // past the truncation
    let kept: Vec<(f64, f64)> = all_nodes
        .into_iter()
        .zip(all_weights)
        .filter(|&(_, w)| w > 1e-16)
        .collect();
    let (nodes, weights): (Vec<f64>, Vec<f64>) = kept.into_iter().unzip();
    let scale = std::f64::consts::SQRT_2 * sigma;

    // 1D displacement families along p and q
    let mut along_p = Vec::with_capacity(nodes.len());
    let mut along_q = Vec::with_capacity(nodes.len());
    for &tk in &nodes {
        let y = scale * tk;
        along_p.push(translation_unchecked(Chord::new(y, 0.0), dim, hbar));
        along_q.push(translation_unchecked(Chord::new(0.0, y), dim, hbar));
    }

    // spectral decomposition of rho: the translated mixture only needs
    // matrix-vector products per eigenvector
    let eig = SymmetricEigen::new(rho.matrix().clone());
    let mut out = DMatrix::<Complex64>::zeros(dim, dim);
    for v in 0..dim {
        let lambda = eig.eigenvalues[v];
        if lambda <= 1e-13 {
            continue;
        }
        let psi = eig.eigenvectors.column(v).into_owned();
        for (j, tp) in along_p.iter().enumerate() {
            for (k, tq) in along_q.iter().enumerate() {
                let weight = lambda * weights[j] * weights[k] / PI;
                let phi = tp.matrix() * (tq.matrix() * &psi);
                // rank-one accumulation: out += weight phi phi+
                for col in 0..dim {
                    let factor = phi[col].conj() * weight;
                    for row in 0..dim {
                        out[(row, col)] += phi[row] * factor;
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Residuals of the four affine group relations on the protected subblock,
/// with the phases that the concrete operators of this module satisfy:
///
///   T_a T_b   = T_{a+b}      exp(-(i/2h) a.Jb)
///   T_xi R_x  = R_{x+xi/2}   exp(+(i/h) x.Jxi)
///   R_x T_xi  = R_{x-xi/2}   exp(+(i/h) x.Jxi)
///   R_x R_x'  = T_{2(x-x')}  exp(+(2i/h) x.Jx')
pub fn affine_relation_residuals(
    x1: PhasePoint,
    x2: PhasePoint,
    xi1: Chord,
    xi2: Chord,
    dim: usize,
    hbar: f64,
) -> Result<[f64; 4]> {
    let phase = |arg: f64| Complex64::from_polar(1.0, arg);
    let t1 = translation_operator(xi1, dim, hbar)?;
    let t2 = translation_operator(xi2, dim, hbar)?;
    let r1 = reflection_operator(x1, dim, hbar)?;
    let r2 = reflection_operator(x2, dim, hbar)?;

    let lhs_a = t1.compose(&t2);
    let rhs_a = translation_operator(xi1 + xi2, dim, hbar)?;
    let res_a = protected_max_abs(
        &(lhs_a.matrix()
            - rhs_a
                .matrix()
                .map(|z| z * phase(-0.5 * symplectic_product(xi1, xi2) / hbar))),
        dim / 2,
    );

    let lhs_b = t1.compose(&r1);
    let rhs_b = reflection_operator(x1 + xi1 * 0.5, dim, hbar)?;
    let res_b = protected_max_abs(
        &(lhs_b.matrix()
            - rhs_b
                .matrix()
                .map(|z| z * phase(symplectic_product(x1, xi1) / hbar))),
        dim / 2,
    );

    let lhs_c = r1.compose(&t1);
    let rhs_c = reflection_operator(x1 - xi1 * 0.5, dim, hbar)?;
    let res_c = protected_max_abs(
        &(lhs_c.matrix()
            - rhs_c
                .matrix()
                .map(|z| z * phase(symplectic_product(x1, xi1) / hbar))),
        dim / 2,
    );

    let lhs_d = r1.compose(&r2);
    let rhs_d = translation_operator((x1 - x2) * 2.0, dim, hbar)?;
    let res_d = protected_max_abs(
        &(lhs_d.matrix()
            - rhs_d
                .matrix()
                .map(|z| z * phase(2.0 * symplectic_product(x1, x2) / hbar))),
        dim / 2,
    );

    Ok([res_a, res_b, res_c, res_d])
}
