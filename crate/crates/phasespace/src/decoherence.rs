//! Markovian open-system evolution of Wigner fields: isotropic phase-space
//! diffusion d W/dt = (hbar c^2 / 2) Laplacian W, positivity-threshold
//! detection, and decoherence metrics.
//!
//! The propagator is the heat kernel exp(-y^2/(2 hbar c^2 t))/(2 pi hbar c^2 t)
//! convolved with W(x - y, 0); in chord space this is node-wise
//! multiplication of Wtilde(xi) by exp(-c^2 t xi^2 / (2 hbar)).

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::field::{negativity_epsilon, WignerField};
use crate::transform::{chord_to_wigner, wigner_to_chord};

/// Coupling to the diffusive environment.
#[derive(Debug, Clone, Copy)]
pub struct DiffusionParams {
    pub coupling: f64,
    pub hbar: f64,
}

impl DiffusionParams {
    pub fn new(coupling: f64, hbar: f64) -> Result<Self> {
        if !(coupling.is_finite() && coupling > 0.0) {
            return Err(Error::NonFinite("coupling must be finite and positive"));
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::NonFinite("hbar must be finite and positive"));
        }
        Ok(Self { coupling, hbar })
    }

    /// Positivity threshold of pure states under this coupling: 1/(2 c^2).
    pub fn threshold_time(&self) -> f64 {
        1.0 / (2.0 * self.coupling * self.coupling)
    }
}

/// Diffuse `w` for time `t >= 0`. Mass is conserved exactly (the zero-chord
/// mode is untouched) and the evolution is a semigroup in t.
///
/// Fails when the widened support reaches the grid boundary (tail mass above
/// 1e-9), with a suggested enlarged half-width.
pub fn heat_propagate(w: &WignerField, t: f64, params: &DiffusionParams) -> Result<WignerField> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::NonFinite("propagation time must be >= 0"));
    }
    if params.hbar != w.hbar() {
        return Err(Error::GridMismatch(
            "diffusion parameters and field disagree on hbar".into(),
        ));
    }
    if t == 0.0 {
        return Ok(w.clone());
    }
    let hbar = w.hbar();
    let damping = params.coupling * params.coupling * t / (2.0 * hbar);
    let chord = wigner_to_chord(w, 1)?;
    let grid = *chord.grid();
    let values = ndarray::Array2::from_shape_fn(chord.values().dim(), |(i, j)| {
        let xi = grid.node(i, j);
        chord.values()[(i, j)] * (-damping * xi.norm_sq()).exp()
    });
    let damped = crate::field::ChordField::new(
        grid,
        hbar,
        values,
        *chord.source_grid(),
        chord.pad_factor(),
    )?;
    let out = chord_to_wigner(&damped)?;
    let tail = out.boundary_tail_mass();
    if tail > 1e-9 {
        let half_now = 0.5 * (w.grid().p_max() - w.grid().p_min());
        let widened = 6.0 * (hbar * 2.0 * params.coupling * params.coupling * t).sqrt();
        return Err(Error::DomainOverflow {
            tail_mass: tail,
            suggested_half_width: half_now + widened,
        });
    }
    Ok(out)
}

/// Reference path: direct real-space convolution with the heat kernel.
/// O(N^4); used as the oracle for the chord-space propagator on small grids.
pub fn heat_propagate_direct(
    w: &WignerField,
    t: f64,
    params: &DiffusionParams,
) -> Result<WignerField> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::NonFinite("propagation time must be >= 0"));
    }
    if t == 0.0 {
        return Ok(w.clone());
    }
    let grid = *w.grid();
    let hbar = w.hbar();
    let var = hbar * params.coupling * params.coupling * t;
    let kernel_norm = grid.cell_area() / (2.0 * PI * var);
    let values = ndarray::Array2::from_shape_fn((grid.n_p(), grid.n_q()), |(i, j)| {
        let x = grid.node(i, j);
        let mut acc = 0.0;
        for ((a, b), &v) in w.values().indexed_iter() {
            let y = x - grid.node(a, b);
            acc += v * (-y.norm_sq() / (2.0 * var)).exp();
        }
        acc * kernel_norm
    });
    WignerField::new(grid, hbar, values)
}

/// Purity 2 pi hbar Int W^2 dx: 1 for pure states, strictly below 1 after
/// any positive diffusion time.
pub fn purity(w: &WignerField) -> f64 {
    2.0 * PI * w.hbar() * w.values().mapv(|v| v * v).sum() * w.grid().cell_area()
}

/// Integrated negative part Int (|W| - W)/2 dx >= 0; zero iff the field is
/// non-negative on all nodes.
pub fn negativity_volume(w: &WignerField) -> f64 {
    w.values()
        .iter()
        .map(|&v| if v < 0.0 { -v } else { 0.0 })
        .sum::<f64>()
        * w.grid().cell_area()
}

/// Bisection trace for the earliest time at which the diffused field clears
/// the negativity tolerance.
#[derive(Debug, Clone)]
pub struct ThresholdReport {
    pub t_star: f64,
    /// (t, min node value) pairs for every propagation evaluated, sorted in t.
    pub min_trace: Vec<(f64, f64)>,
    pub epsilon: f64,
}

/// Find the smallest t with min W(., t) >= -epsilon_grid by bisection on
/// [0, t_hi], terminating when the bracket width drops below 1e-3 t_hi.
///
/// Returns t_star = 0 immediately for fields that are already positive, and
/// fails when the field at t_hi still carries genuine negativity.
pub fn positivity_threshold(
    w0: &WignerField,
    params: &DiffusionParams,
    t_hi: f64,
) -> Result<ThresholdReport> {
    if !(t_hi.is_finite() && t_hi > 0.0) {
        return Err(Error::NonFinite("bracket end must be positive"));
    }
    let epsilon = negativity_epsilon(w0.hbar());
    let mut trace: Vec<(f64, f64)> = Vec::new();
    let min0 = w0.min_max().min;
    trace.push((0.0, min0));
    if min0 >= -epsilon {
        return Ok(ThresholdReport {
            t_star: 0.0,
            min_trace: trace,
            epsilon,
        });
    }

    let min_at = |t: f64| -> Result<f64> { Ok(heat_propagate(w0, t, params)?.min_max().min) };
    let min_hi = min_at(t_hi)?;
    trace.push((t_hi, min_hi));
    if min_hi < -epsilon {
        return Err(Error::BracketNotSignChanging {
            t_hi,
            min_at_hi: min_hi,
        });
    }

    let (mut lo, mut hi) = (0.0, t_hi);
    while hi - lo > 1e-3 * t_hi {
        let mid = 0.5 * (lo + hi);
        let min_mid = min_at(mid)?;
        trace.push((mid, min_mid));
        if min_mid >= -epsilon {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    trace.sort_by(|a, b| a.0.total_cmp(&b.0));
    // diffusion averages with a positive kernel, so the minimum cannot
    // decrease along the trace; a violation means the propagator is broken
    for pair in trace.windows(2) {
        if pair[1].1 < pair[0].1 - 1e-12 {
            return Err(Error::NonFinite("non-monotone minimum trace"));
        }
    }
    Ok(ThresholdReport {
        t_star: hi,
        min_trace: trace,
        epsilon,
    })
}
