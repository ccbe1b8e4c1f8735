//! Wigner and chord fields sampled on rectangular grids.

use ndarray::Array2;
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::point::{Chord, PhasePoint};

/// Numerical-negativity tolerance: separates round-off from genuine
/// negativity at working resolutions.
pub fn negativity_epsilon(hbar: f64) -> f64 {
    1e-6 / (PI * hbar)
}

/// Real-valued Wigner samples; row i maps to p_i, column j to q_j.
#[derive(Debug, Clone)]
pub struct WignerField {
    grid: GridSpec,
    hbar: f64,
    values: Array2<f64>,
    normalized: bool,
    /// Boundary-ring mass recorded when rasterization saw support escaping.
    tail_warning: Option<f64>,
}

impl WignerField {
    pub fn new(grid: GridSpec, hbar: f64, values: Array2<f64>) -> Result<Self> {
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::NonFinite("hbar must be finite and positive"));
        }
        if values.dim() != (grid.n_p(), grid.n_q()) {
            return Err(Error::GridMismatch(format!(
                "value shape {:?} vs grid {}x{}",
                values.dim(),
                grid.n_p(),
                grid.n_q()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("field values"));
        }
        let mut field = Self {
            grid,
            hbar,
            values,
            normalized: false,
            tail_warning: None,
        };
        field.normalized = (field.integrate() - 1.0).abs() < 1e-6;
        Ok(field)
    }

    pub fn zeros(grid: GridSpec, hbar: f64) -> Result<Self> {
        Self::new(grid, hbar, Array2::zeros((grid.n_p(), grid.n_q())))
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }
    pub fn hbar(&self) -> f64 {
        self.hbar
    }
    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }
    pub fn is_normalized(&self) -> bool {
        self.normalized
    }
    pub fn tail_warning(&self) -> Option<f64> {
        self.tail_warning
    }

    pub(crate) fn set_tail_warning(&mut self, mass: f64) {
        self.tail_warning = Some(mass);
    }

    /// Riemann sum of the field over the grid.
    pub fn integrate(&self) -> f64 {
        self.values.sum() * self.grid.cell_area()
    }

    /// Spike-modulus bound check: values must stay within
    /// [-1/(pi hbar) - eps, 1/(pi hbar) + eps].
    pub fn within_physical_bounds(&self) -> bool {
        let bound = 1.0 / (PI * self.hbar) + negativity_epsilon(self.hbar);
        self.values.iter().all(|v| v.abs() <= bound)
    }

    /// Bilinear interpolation at `x`; `None` outside the node hull.
    pub fn value_at(&self, x: PhasePoint) -> Option<f64> {
        if !self.grid.contains(x) {
            return None;
        }
        let (fi, fj) = self.grid.fractional_index(x);
        Some(bilinear(&self.values, fi, fj))
    }

    /// Bilinear interpolation, treating points beyond the hull as vacuum tail.
    pub fn value_at_or_zero(&self, x: PhasePoint) -> f64 {
        self.value_at(x).unwrap_or(0.0)
    }

    /// Grid extrema with their node locations.
    pub fn min_max(&self) -> FieldExtrema {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        let mut argmin = (0, 0);
        let mut argmax = (0, 0);
        for ((i, j), &v) in self.values.indexed_iter() {
            if v < min {
                min = v;
                argmin = (i, j);
            }
            if v > max {
                max = v;
                argmax = (i, j);
            }
        }
        FieldExtrema {
            min,
            argmin: self.grid.node(argmin.0, argmin.1),
            max,
            argmax: self.grid.node(argmax.0, argmax.1),
        }
    }

    /// |mass| carried by the outermost ring of nodes; a proxy for support
    /// escaping (or wrapping around) the periodic domain.
    pub fn boundary_tail_mass(&self) -> f64 {
        let (np, nq) = self.values.dim();
        let mut sum = 0.0;
        for j in 0..nq {
            sum += self.values[(0, j)].abs() + self.values[(np - 1, j)].abs();
        }
        for i in 1..np - 1 {
            sum += self.values[(i, 0)].abs() + self.values[(i, nq - 1)].abs();
        }
        sum * self.grid.cell_area()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FieldExtrema {
    pub min: f64,
    pub argmin: PhasePoint,
    pub max: f64,
    pub argmax: PhasePoint,
}

/// Riemann-sum expectation of a real symbol field against a Wigner field.
///
/// Both fields must share the grid and hbar exactly.
pub fn expectation(symbol: &WignerField, w: &WignerField) -> Result<f64> {
    if symbol.grid != w.grid || symbol.hbar != w.hbar {
        return Err(Error::GridMismatch(
            "expectation requires identical grids and hbar".into(),
        ));
    }
    Ok((&symbol.values * &w.values).sum() * w.grid.cell_area())
}

/// Complex chord samples on the conjugate grid; row i maps to xi_p and
/// column j to xi_q (mirroring the Wigner row/column convention).
#[derive(Debug, Clone)]
pub struct ChordField {
    grid: GridSpec,
    hbar: f64,
    values: Array2<Complex64>,
    /// Unpadded real-space grid this chord field corresponds to; required to
    /// invert the transform.
    source: GridSpec,
    pad_factor: usize,
}

impl ChordField {
    pub fn new(
        grid: GridSpec,
        hbar: f64,
        values: Array2<Complex64>,
        source: GridSpec,
        pad_factor: usize,
    ) -> Result<Self> {
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::NonFinite("hbar must be finite and positive"));
        }
        let expected = source.chord_grid(hbar, pad_factor)?;
        if grid != expected {
            return Err(Error::GridMismatch(
                "chord grid is not conjugate to the declared source grid".into(),
            ));
        }
        if values.dim() != (grid.n_p(), grid.n_q()) {
            return Err(Error::GridMismatch(format!(
                "value shape {:?} vs chord grid {}x{}",
                values.dim(),
                grid.n_p(),
                grid.n_q()
            )));
        }
        Ok(Self {
            grid,
            hbar,
            values,
            source,
            pad_factor,
        })
    }

    /// Sample an analytic chord function on the grid conjugate to
    /// `source` with the given pad factor.
    pub fn sample<F>(source: &GridSpec, hbar: f64, pad_factor: usize, f: F) -> Result<Self>
    where
        F: Fn(Chord) -> Complex64,
    {
        let grid = source.chord_grid(hbar, pad_factor)?;
        let values =
            Array2::from_shape_fn((grid.n_p(), grid.n_q()), |(i, j)| f(grid.node(i, j)));
        Self::new(grid, hbar, values, *source, pad_factor)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }
    pub fn hbar(&self) -> f64 {
        self.hbar
    }
    pub fn values(&self) -> &Array2<Complex64> {
        &self.values
    }
    pub fn source_grid(&self) -> &GridSpec {
        &self.source
    }
    pub fn pad_factor(&self) -> usize {
        self.pad_factor
    }

    /// Bilinear interpolation of the complex samples at chord argument `xi`.
    ///
    /// Exact on grid nodes; errors outside the chord domain (increase the
    /// pad factor or refine the source grid to extend coverage).
    pub fn chord_at(&self, xi: Chord) -> Result<Complex64> {
        if !self.grid.contains(xi) {
            return Err(Error::OutOfDomain { p: xi.p, q: xi.q });
        }
        let (fi, fj) = self.grid.fractional_index(xi);
        let re = bilinear_map(&self.values, fi, fj, |z| z.re);
        let im = bilinear_map(&self.values, fi, fj, |z| z.im);
        Ok(Complex64::new(re, im))
    }
}

fn bilinear(values: &Array2<f64>, fi: f64, fj: f64) -> f64 {
    bilinear_map(values, fi, fj, |v| v)
}

fn bilinear_map<T, F>(values: &Array2<T>, fi: f64, fj: f64, get: F) -> f64
where
    T: Copy,
    F: Fn(T) -> f64,
{
    let (np, nq) = values.dim();
    let i0 = (fi.floor() as usize).min(np - 1);
    let j0 = (fj.floor() as usize).min(nq - 1);
    let i1 = (i0 + 1).min(np - 1);
    let j1 = (j0 + 1).min(nq - 1);
    let tp = (fi - i0 as f64).clamp(0.0, 1.0);
    let tq = (fj - j0 as f64).clamp(0.0, 1.0);
    let v00 = get(values[(i0, j0)]);
    let v01 = get(values[(i0, j1)]);
    let v10 = get(values[(i1, j0)]);
    let v11 = get(values[(i1, j1)]);
    (1.0 - tp) * ((1.0 - tq) * v00 + tq * v01) + tp * ((1.0 - tq) * v10 + tq * v11)
}
