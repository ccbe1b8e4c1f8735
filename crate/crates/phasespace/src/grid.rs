//! Uniform rectangular phase-space grids.

use crate::error::{Error, Result};
use crate::point::PhasePoint;

/// A uniform rectangular grid over [p_min, p_max) x [q_min, q_max).
///
/// Nodes sit at p_min + i*dp (i = 0..n_p) and q_min + j*dq (j = 0..n_q) with
/// dp = (p_max - p_min)/n_p; the upper bounds are one spacing past the last
/// node, so the domain length equals the DFT period. Counts must be even and
/// at least 8 to keep the transforms aligned.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    p_min: f64,
    p_max: f64,
    q_min: f64,
    q_max: f64,
    n_p: usize,
    n_q: usize,
}

impl GridSpec {
    pub fn new(
        p_min: f64,
        p_max: f64,
        n_p: usize,
        q_min: f64,
        q_max: f64,
        n_q: usize,
    ) -> Result<Self> {
        for (v, name) in [
            (p_min, "p_min"),
            (p_max, "p_max"),
            (q_min, "q_min"),
            (q_max, "q_max"),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidGrid(format!("{name} is not finite")));
            }
        }
        if p_max <= p_min || q_max <= q_min {
            return Err(Error::InvalidGrid(format!(
                "empty axis: p=[{p_min}, {p_max}), q=[{q_min}, {q_max})"
            )));
        }
        for (n, name) in [(n_p, "n_p"), (n_q, "n_q")] {
            if n < 8 || n % 2 != 0 {
                return Err(Error::InvalidGrid(format!(
                    "{name} = {n}; counts must be even and >= 8"
                )));
            }
        }
        Ok(Self {
            p_min,
            p_max,
            q_min,
            q_max,
            n_p,
            n_q,
        })
    }

    /// Square grid centered on the origin with half-width `half` on both axes.
    pub fn centered_square(half: f64, n: usize) -> Result<Self> {
        Self::new(-half, half, n, -half, half, n)
    }

    pub fn p_min(&self) -> f64 {
        self.p_min
    }
    pub fn p_max(&self) -> f64 {
        self.p_max
    }
    pub fn q_min(&self) -> f64 {
        self.q_min
    }
    pub fn q_max(&self) -> f64 {
        self.q_max
    }
    pub fn n_p(&self) -> usize {
        self.n_p
    }
    pub fn n_q(&self) -> usize {
        self.n_q
    }

    pub fn dp(&self) -> f64 {
        (self.p_max - self.p_min) / self.n_p as f64
    }

    pub fn dq(&self) -> f64 {
        (self.q_max - self.q_min) / self.n_q as f64
    }

    pub fn cell_area(&self) -> f64 {
        self.dp() * self.dq()
    }

    pub fn p(&self, i: usize) -> f64 {
        self.p_min + i as f64 * self.dp()
    }

    pub fn q(&self, j: usize) -> f64 {
        self.q_min + j as f64 * self.dq()
    }

    pub fn node(&self, i: usize, j: usize) -> PhasePoint {
        PhasePoint::new(self.p(i), self.q(j))
    }

    /// True when `x` lies inside the node hull [p_min, p(n_p-1)] x [q_min, q(n_q-1)],
    /// where bilinear interpolation is defined.
    pub fn contains(&self, x: PhasePoint) -> bool {
        x.p >= self.p_min
            && x.p <= self.p(self.n_p - 1)
            && x.q >= self.q_min
            && x.q <= self.q(self.n_q - 1)
    }

    /// Fractional index of `x`: (i, j) with node(i, j) at the cell corner.
    pub(crate) fn fractional_index(&self, x: PhasePoint) -> (f64, f64) {
        ((x.p - self.p_min) / self.dp(), (x.q - self.q_min) / self.dq())
    }

    /// The conjugate (chord) grid for this real grid, hbar, and pad factor.
    ///
    /// Chord spacing is 2*pi*hbar / (padded domain length) on each axis; the
    /// xi_p axis is conjugate to q and the xi_q axis to p, so the counts swap.
    pub fn chord_grid(&self, hbar: f64, pad_factor: usize) -> Result<GridSpec> {
        if pad_factor < 1 {
            return Err(Error::InvalidGrid("pad_factor must be >= 1".into()));
        }
        let np_pad = self.n_p * pad_factor;
        let nq_pad = self.n_q * pad_factor;
        let dxi_p = 2.0 * std::f64::consts::PI * hbar / (nq_pad as f64 * self.dq());
        let dxi_q = 2.0 * std::f64::consts::PI * hbar / (np_pad as f64 * self.dp());
        GridSpec::new(
            -(nq_pad as f64 / 2.0) * dxi_p,
            (nq_pad as f64 / 2.0) * dxi_p,
            nq_pad,
            -(np_pad as f64 / 2.0) * dxi_q,
            (np_pad as f64 / 2.0) * dxi_q,
            np_pad,
        )
    }
}

/// Default square domain for states displaced by `y`: half-width
/// |y| + 6*sqrt(hbar) covers Gaussian tails below 1e-15.
pub fn default_half_width(y_norm: f64, hbar: f64) -> f64 {
    y_norm + 6.0 * hbar.sqrt()
}

/// Domain rule widened for diffusive evolution up to time `t` with coupling
/// `c`: the Gaussian width sqrt(hbar) grows to sqrt(hbar*(2c^2 t + 1)).
pub fn evolved_half_width(y_norm: f64, hbar: f64, c: f64, t: f64) -> f64 {
    y_norm + 6.0 * (hbar * (2.0 * c * c * t + 1.0)).sqrt()
}
