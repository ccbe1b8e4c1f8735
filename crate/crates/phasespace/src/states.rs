//! Closed-form Wigner and chord functions for coherent states, parity cat
//! states, and their diffusively decohered descendants.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::field::WignerField;
use crate::grid::GridSpec;
use crate::point::{symplectic_product, Chord, PhasePoint};

/// Parity eigenvalue label: Even maps to +1, Odd to -1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

impl std::fmt::Display for Parity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Parity::Even => write!(f, "+1"),
            Parity::Odd => write!(f, "-1"),
        }
    }
}

/// Coherent-state center Y = (P, Q), i.e. `<p>` = P and `<q>` = Q.
pub type Displacement = PhasePoint;

/// Parameters of a parity cat: superposition (even) or difference (odd) of
/// coherent states at +Y and -Y.
#[derive(Debug, Clone, Copy)]
pub struct CatParameters {
    pub y: Displacement,
    pub parity: Parity,
    pub hbar: f64,
}

impl CatParameters {
    pub fn new(y: Displacement, parity: Parity, hbar: f64) -> Result<Self> {
        if !y.is_finite() {
            return Err(Error::NonFinite("cat displacement"));
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::NonFinite("hbar must be finite and positive"));
        }
        // the odd combination of |Y> and |-Y> has zero norm at Y = 0
        if parity == Parity::Odd && y.norm_sq() == 0.0 {
            return Err(Error::DegenerateCat);
        }
        Ok(Self { y, parity, hbar })
    }
}

/// Minimum-uncertainty Gaussian centered on `y`:
/// W_Y(x) = (1/ pi hbar) exp(-(x - Y)^2 / hbar).
pub fn coherent_wigner(y: Displacement, hbar: f64, x: PhasePoint) -> f64 {
    (-(x - y).norm_sq() / hbar).exp() / (PI * hbar)
}

/// Chord function of the coherent state at `y`:
/// (1/2 pi hbar) exp(-xi^2/(4 hbar)) exp((i/hbar) Y . J xi).
pub fn coherent_chord(y: Displacement, hbar: f64, xi: Chord) -> Complex64 {
    let modulus = (-xi.norm_sq() / (4.0 * hbar)).exp() / (2.0 * PI * hbar);
    Complex64::from_polar(modulus, symplectic_product(y, xi) / hbar)
}

/// Wigner function of the parity cat: two coherent mounds at +-Y plus a
/// fringe Gaussian at the origin,
///
///   W(x) = (1/2 pi hbar) [ e^{-(x-Y)^2/h} + e^{-(x+Y)^2/h}
///           +- 2 e^{-x^2/h} cos(2 x . J Y / h) ] / (1 +- e^{-Y^2/h}).
///
/// The denominator is the dimensionless 1 +- e^{-Y^2/hbar}, which makes the
/// normalization exact and the central value +-1/(pi hbar).
pub fn cat_wigner(params: &CatParameters, x: PhasePoint) -> f64 {
    let CatParameters { y, parity, hbar } = *params;
    let s = parity.sign();
    let mounds = (-(x - y).norm_sq() / hbar).exp() + (-(x + y).norm_sq() / hbar).exp();
    let fringe =
        2.0 * (-x.norm_sq() / hbar).exp() * (2.0 * symplectic_product(x, y) / hbar).cos();
    let norm = 1.0 + s * (-y.norm_sq() / hbar).exp();
    (mounds + s * fringe) / (2.0 * PI * hbar * norm)
}

/// Odd cat evolved for time `t` under isotropic phase-space diffusion with
/// coupling `c`; spreads every Gaussian width by the factor (2 c^2 t + 1)
/// and damps the fringe contrast:
///
///   W(x, t) = N / (pi hbar s) [ e^{-(x-Y)^2/(h s)} + e^{-(x+Y)^2/(h s)}
///             - 2 e^{-x^2/(h s)} e^{-2 c^2 t Y^2/(h s)} cos(2 x . J Y/(h s)) ],
///
/// with s = 2 c^2 t + 1 and N^{-1} = 2 (1 - e^{-Y^2/hbar}).
///
/// Requires t >= 0 and Y != 0.
pub fn evolved_cat_wigner(y: Displacement, t: f64, coupling: f64, hbar: f64, x: PhasePoint) -> f64 {
    debug_assert!(t >= 0.0, "diffusion time must be non-negative");
    debug_assert!(y.norm_sq() > 0.0, "odd cat requires nonzero displacement");
    let s = 2.0 * coupling * coupling * t + 1.0;
    let hs = hbar * s;
    let mounds = (-(x - y).norm_sq() / hs).exp() + (-(x + y).norm_sq() / hs).exp();
    let fringe = 2.0
        * (-x.norm_sq() / hs).exp()
        * (-2.0 * coupling * coupling * t * y.norm_sq() / hs).exp()
        * (2.0 * symplectic_product(x, y) / hs).cos();
    let n = 1.0 / (2.0 * (1.0 - (-y.norm_sq() / hbar).exp()));
    n * (mounds - fringe) / (PI * hbar * s)
}

/// Positivity threshold of the diffused odd cat: t0 = 1/(2 c^2).
pub fn positivity_time(coupling: f64) -> f64 {
    1.0 / (2.0 * coupling * coupling)
}

/// Evaluate a closed-form state node-wise on `grid`. The result records a
/// tail warning when the outermost node ring carries mass above 1e-9,
/// signalling that the state's support escapes the domain.
pub fn rasterize<F>(grid: &GridSpec, hbar: f64, f: F) -> Result<WignerField>
where
    F: Fn(PhasePoint) -> f64,
{
    let values = ndarray::Array2::from_shape_fn((grid.n_p(), grid.n_q()), |(i, j)| {
        f(grid.node(i, j))
    });
    let mut field = WignerField::new(*grid, hbar, values)?;
    let tail = field.boundary_tail_mass();
    if tail > 1e-9 {
        field.set_tail_warning(tail);
    }
    Ok(field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::default_half_width;
    use approx::assert_relative_eq;

    const HBAR: f64 = 0.1;

    fn default_grid(y: Displacement, n: usize) -> GridSpec {
        GridSpec::centered_square(default_half_width(y.norm(), HBAR), n).unwrap()
    }

    #[test]
    fn coherent_peak_and_decay() {
        let y = Displacement::new(0.7, -1.1);
        assert_relative_eq!(
            coherent_wigner(y, HBAR, y),
            1.0 / (PI * HBAR),
            max_relative = 1e-15
        );
        assert_eq!(coherent_wigner(y, HBAR, PhasePoint::new(1e4, 1e4)), 0.0);
    }

    #[test]
    fn coherent_value_one_width_out() {
        // x - Y = (0, sqrt(hbar)) gives the peak scaled by 1/e
        let x = PhasePoint::new(0.0, HBAR.sqrt());
        let expect = (1.0 / (PI * HBAR)) * (-1.0f64).exp();
        assert_relative_eq!(
            coherent_wigner(Displacement::ORIGIN, HBAR, x),
            expect,
            max_relative = 1e-14
        );
    }

    #[test]
    fn odd_cat_requires_displacement() {
        assert!(matches!(
            CatParameters::new(Displacement::ORIGIN, Parity::Odd, HBAR),
            Err(Error::DegenerateCat)
        ));
        assert!(CatParameters::new(Displacement::ORIGIN, Parity::Even, HBAR).is_ok());
    }

    #[test]
    fn cat_spike_values_at_origin() {
        let y = Displacement::new(0.0, 1.0);
        for parity in [Parity::Even, Parity::Odd] {
            let params = CatParameters::new(y, parity, HBAR).unwrap();
            assert_relative_eq!(
                cat_wigner(&params, PhasePoint::ORIGIN),
                parity.sign() / (PI * HBAR),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn cat_reduces_to_mounds_where_cosine_vanishes() {
        let y = Displacement::new(0.0, 1.0);
        let params = CatParameters::new(y, Parity::Odd, HBAR).unwrap();
        // 2 x . J Y / hbar = pi/2 at x = (-pi hbar / 4, q) for Y = (0, 1)
        let x = PhasePoint::new(-PI * HBAR / 4.0, 0.3);
        assert!((2.0 * symplectic_product(x, y) / HBAR - PI / 2.0).abs() < 1e-12);
        let mounds = ((-(x - y).norm_sq() / HBAR).exp() + (-(x + y).norm_sq() / HBAR).exp())
            / (2.0 * PI * HBAR * (1.0 - (-y.norm_sq() / HBAR).exp()));
        assert_relative_eq!(cat_wigner(&params, x), mounds, max_relative = 1e-12);
    }

    #[test]
    fn rasterized_cats_are_normalized() {
        let y = Displacement::new(0.0, 1.0);
        for parity in [Parity::Even, Parity::Odd] {
            let params = CatParameters::new(y, parity, HBAR).unwrap();
            let w = rasterize(&default_grid(y, 256), HBAR, |x| cat_wigner(&params, x)).unwrap();
            assert!((w.integrate() - 1.0).abs() < 1e-6);
            assert!(w.is_normalized());
            assert!(w.tail_warning().is_none());
        }
    }

    #[test]
    fn odd_cat_minimum_sits_at_origin() {
        let y = Displacement::new(0.0, 1.0);
        let params = CatParameters::new(y, Parity::Odd, HBAR).unwrap();
        let w = rasterize(&default_grid(y, 256), HBAR, |x| cat_wigner(&params, x)).unwrap();
        let ext = w.min_max();
        assert!((ext.min + 1.0 / (PI * HBAR)).abs() < 1e-6);
        assert!(ext.argmin.norm() < 1e-12);
    }

    #[test]
    fn cat_parity_symmetry() {
        let y = Displacement::new(0.6, 0.8);
        for parity in [Parity::Even, Parity::Odd] {
            let params = CatParameters::new(y, parity, HBAR).unwrap();
            for &(a, b) in &[(0.11, -0.43), (1.2, 0.77), (-0.35, 0.05)] {
                let x = PhasePoint::new(a, b);
                assert_relative_eq!(
                    cat_wigner(&params, x),
                    cat_wigner(&params, -x),
                    max_relative = 1e-12
                );
            }
        }
    }

    #[test]
    fn evolved_cat_matches_cat_at_time_zero() {
        let y = Displacement::new(0.0, 1.0);
        let params = CatParameters::new(y, Parity::Odd, HBAR).unwrap();
        for &(a, b) in &[(0.0, 0.0), (0.2, -0.5), (1.0, 1.0), (-0.07, 0.93)] {
            let x = PhasePoint::new(a, b);
            assert_relative_eq!(
                evolved_cat_wigner(y, 0.0, 1.0, HBAR, x),
                cat_wigner(&params, x),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn evolved_cat_vanishes_at_origin_at_threshold() {
        let y = Displacement::new(0.0, 1.0);
        let c = 1.0;
        let t0 = positivity_time(c);
        assert_eq!(t0, 0.5);
        let v = evolved_cat_wigner(y, t0, c, HBAR, PhasePoint::ORIGIN);
        assert!(v.abs() < 1e-15);
    }

    #[test]
    fn evolved_cat_long_time_limit() {
        // direct substitution check of the fringe suppression factor
        let y = Displacement::new(0.0, 1.0);
        let (t, c) = (50.0, 1.0);
        let s = 2.0 * c * c * t + 1.0;
        let x = PhasePoint::new(0.05, 0.0);
        let n = 1.0 / (2.0 * (1.0 - (-y.norm_sq() / HBAR).exp()));
        let expect = n / (PI * HBAR * s)
            * ((-(x - y).norm_sq() / (HBAR * s)).exp()
                + (-(x + y).norm_sq() / (HBAR * s)).exp()
                - 2.0
                    * (-x.norm_sq() / (HBAR * s)).exp()
                    * (-2.0 * c * c * t / (HBAR * s)).exp()
                    * (2.0 * symplectic_product(x, y) / (HBAR * s)).cos());
        assert_relative_eq!(
            evolved_cat_wigner(y, t, c, HBAR, x),
            expect,
            max_relative = 1e-12
        );
        // fringe factor is exponentially suppressed relative to the mounds
        let fringe_factor = (-2.0 * c * c * t * y.norm_sq() / (HBAR * s)).exp();
        assert!(fringe_factor < (-y.norm_sq() / (HBAR * s)).exp());
    }

    #[test]
    fn undersized_grid_records_tail_warning() {
        let y = Displacement::new(0.0, 1.0);
        let tiny = GridSpec::centered_square(0.5, 32).unwrap();
        let w = rasterize(&tiny, HBAR, |x| coherent_wigner(y, HBAR, x)).unwrap();
        assert!(w.tail_warning().is_some());
    }
}
