//! Numerical phase-space toolkit for parity measurements on Wigner
//! functions.
//!
//! The crate provides four layers:
//!
//! * grids, fields, and the Wigner <-> chord transform pair ([`grid`],
//!   [`field`], [`transform`]);
//! * closed-form coherent, cat, and diffused-cat states ([`states`]);
//! * ideal parity measurements (outcome probabilities, post-measurement
//!   fields, seeded Monte Carlo sampling) and Markovian decoherence with
//!   positivity-threshold detection ([`measurement`], [`decoherence`]);
//! * an independent truncated Fock-basis oracle used to cross-validate every
//!   phase-space result ([`fock`]).

pub mod czt;
pub mod decoherence;
pub mod error;
pub mod field;
pub mod fock;
pub mod grid;
pub mod io;
pub mod measurement;
pub mod point;
pub mod states;
pub mod transform;

pub use error::{Error, Result};
pub use field::{negativity_epsilon, ChordField, FieldExtrema, WignerField};
pub use grid::{default_half_width, evolved_half_width, GridSpec};
pub use point::{symplectic_product, Chord, PhasePoint};
pub use states::{
    cat_wigner, coherent_chord, coherent_wigner, evolved_cat_wigner, positivity_time,
    rasterize, CatParameters, Displacement, Parity,
};
pub use transform::{chord_to_wigner, wigner_to_chord};
