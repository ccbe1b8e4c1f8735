//! Phase-space points, chord vectors, and the symplectic pairing.

use std::ops::{Add, Mul, Neg, Sub};

/// A point x = (p, q) of the phase plane.
///
/// The same representation serves for chord (Fourier-conjugate) vectors
/// xi = (xi_p, xi_q); see [`Chord`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub p: f64,
    pub q: f64,
}

/// Chord vector xi = (xi_p, xi_q), conjugate to phase-space translations.
pub type Chord = PhasePoint;

impl PhasePoint {
    pub const ORIGIN: PhasePoint = PhasePoint { p: 0.0, q: 0.0 };

    pub fn new(p: f64, q: f64) -> Self {
        Self { p, q }
    }

    pub fn is_finite(&self) -> bool {
        self.p.is_finite() && self.q.is_finite()
    }

    /// Squared Euclidean norm p^2 + q^2.
    pub fn norm_sq(&self) -> f64 {
        self.p * self.p + self.q * self.q
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }
}

impl Add for PhasePoint {
    type Output = PhasePoint;
    fn add(self, rhs: PhasePoint) -> PhasePoint {
        PhasePoint::new(self.p + rhs.p, self.q + rhs.q)
    }
}

impl Sub for PhasePoint {
    type Output = PhasePoint;
    fn sub(self, rhs: PhasePoint) -> PhasePoint {
        PhasePoint::new(self.p - rhs.p, self.q - rhs.q)
    }
}

impl Neg for PhasePoint {
    type Output = PhasePoint;
    fn neg(self) -> PhasePoint {
        PhasePoint::new(-self.p, -self.q)
    }
}

impl Mul<f64> for PhasePoint {
    type Output = PhasePoint;
    fn mul(self, s: f64) -> PhasePoint {
        PhasePoint::new(self.p * s, self.q * s)
    }
}

/// Symplectic pairing a . J b with J = [[0, -1], [1, 0]]:
/// a . J b = -a_p b_q + a_q b_p.
///
/// With this orientation the translation-operator exponent
/// (i/hbar) x . J xi expands to (i/hbar)(xi_p q - xi_q p).
pub fn symplectic_product(a: PhasePoint, b: PhasePoint) -> f64 {
    a.q * b.p - a.p * b.q
}
