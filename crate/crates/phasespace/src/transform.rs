//! The Wigner <-> chord Fourier-transform pair.
//!
//! The chord function is the symplectic Fourier transform of the Wigner
//! function,
//!
//!   Wtilde(xi) = (1/2 pi hbar) Int dx W(x) exp((i/hbar) x . J xi),
//!
//! approximated by the DFT of the grid samples. With x = (p, q) and
//! xi = (xi_p, xi_q), the exponent splits into a positive-sign transform of
//! the q axis against xi_p and a negative-sign transform of the p axis
//! against xi_q; boundary phases restore the absolute node positions.

use ndarray::Array2;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::field::{ChordField, WignerField};

fn fft_rows(a: &mut Array2<Complex64>, fft: &dyn Fft<f64>) {
    for mut row in a.rows_mut() {
        fft.process(row.as_slice_mut().expect("rows of standard layout"));
    }
}

/// Discrete approximation of the chord transform, zero-padding the real
/// domain by `pad_factor` to refine the chord sampling.
pub fn wigner_to_chord(w: &WignerField, pad_factor: usize) -> Result<ChordField> {
    let g = *w.grid();
    let hbar = w.hbar();
    let chord_grid = g.chord_grid(hbar, pad_factor)?;
    let np_pad = g.n_p() * pad_factor;
    let nq_pad = g.n_q() * pad_factor;

    let mut buf = Array2::<Complex64>::zeros((np_pad, nq_pad));
    for ((a, b), &v) in w.values().indexed_iter() {
        buf[(a, b)] = Complex64::new(v, 0.0);
    }

    let mut planner = FftPlanner::new();
    // positive exponent along q (axis 1), negative along p (axis 0)
    fft_rows(&mut buf, planner.plan_fft_inverse(nq_pad).as_ref());
    let mut bt = buf.reversed_axes().as_standard_layout().into_owned();
    fft_rows(&mut bt, planner.plan_fft_forward(np_pad).as_ref());
    // bt[mq, mp] now holds the raw double sum

    let scale = g.cell_area() / (2.0 * PI * hbar);
    let phase_p: Vec<Complex64> = (0..nq_pad)
        .map(|i| Complex64::from_polar(1.0, g.q_min() * chord_grid.p(i) / hbar))
        .collect();
    let phase_q: Vec<Complex64> = (0..np_pad)
        .map(|j| Complex64::from_polar(1.0, -g.p_min() * chord_grid.q(j) / hbar))
        .collect();

    let values = Array2::from_shape_fn((nq_pad, np_pad), |(i, j)| {
        let mq = (i + nq_pad / 2) % nq_pad;
        let mp = (j + np_pad / 2) % np_pad;
        bt[(mq, mp)] * phase_p[i] * phase_q[j] * scale
    });

    ChordField::new(chord_grid, hbar, values, g, pad_factor)
}

/// Exact inverse of [`wigner_to_chord`]: recovers the Wigner samples on the
/// unpadded source grid.
pub fn chord_to_wigner(c: &ChordField) -> Result<WignerField> {
    let source = *c.source_grid();
    let hbar = c.hbar();
    let chord_grid = *c.grid();
    let np_pad = source.n_p() * c.pad_factor();
    let nq_pad = source.n_q() * c.pad_factor();

    let scale = source.cell_area() / (2.0 * PI * hbar);
    let mut bt = Array2::<Complex64>::zeros((nq_pad, np_pad));
    for ((i, j), &v) in c.values().indexed_iter() {
        let mq = (i + nq_pad / 2) % nq_pad;
        let mp = (j + np_pad / 2) % np_pad;
        let phase = Complex64::from_polar(
            1.0,
            -(source.q_min() * chord_grid.p(i) - source.p_min() * chord_grid.q(j)) / hbar,
        );
        bt[(mq, mp)] = v * phase / scale;
    }

    let mut planner = FftPlanner::new();
    // undo: inverse along mp (axis 1 of bt), then forward along mq
    fft_rows(&mut bt, planner.plan_fft_inverse(np_pad).as_ref());
    let mut buf = bt.reversed_axes().as_standard_layout().into_owned();
    fft_rows(&mut buf, planner.plan_fft_forward(nq_pad).as_ref());

    let norm = 1.0 / (np_pad as f64 * nq_pad as f64);
    let mut max_abs = 0.0f64;
    let mut max_im = 0.0f64;
    let mut values = Array2::<f64>::zeros((source.n_p(), source.n_q()));
    for ((a, b), out) in values.indexed_iter_mut() {
        let z = buf[(a, b)] * norm;
        max_abs = max_abs.max(z.re.abs());
        max_im = max_im.max(z.im.abs());
        *out = z.re;
    }
    let limit = 1e-8 * max_abs.max(1e-300);
    if max_im > limit {
        return Err(Error::ImaginaryResidue {
            residue: max_im,
            limit,
        });
    }
    WignerField::new(source, hbar, values)
}
