//! Numerical tolerances shared across the pipeline.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative tolerance for the frame identities `γ̇·ν = 0`, `γ̇ = βμ` and
    /// `β = lα`.
    pub frame: f64,
    /// Values with magnitude at most this are treated as zero (`β`, `l`).
    pub zero: f64,
    /// Speeds below this mark a singular sample of the Gauss map.
    pub singular_speed: f64,
    /// Largest angle (radians) between Gauss map directions at adjacent
    /// samples when the map is reconstructed from the tangent.
    pub max_normal_jump: f64,
    /// `|λ̇/β|` may exceed one by this much before it counts as a failure of
    /// creativity; smaller excesses clamp to `±1`.
    pub clamp: f64,
    /// `|cos θ|` within this of one snaps to `±1`. Roundoff of order `ε` in
    /// `λ̇/β` would otherwise produce a spurious `sin θ ≈ √(2ε)`.
    pub unit_snap: f64,
    /// Relative tolerance for `λ̇ = ±β`.
    pub equality: f64,
    /// Fraction of grid samples on which a property must hold to count as
    /// holding densely.
    pub density: f64,
    /// Largest change of `cos θ` between adjacent samples accepted as
    /// continuous.
    pub max_cos_jump: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            frame: 1e-9,
            zero: 1e-10,
            singular_speed: 1e-12,
            max_normal_jump: 0.1,
            clamp: 1e-9,
            unit_snap: 1e-12,
            equality: 1e-8,
            density: 0.995,
            max_cos_jump: 0.5,
        }
    }
}

/// Default verification tolerance where every quantity is evaluated from
/// closed forms.
pub const SYMBOLIC_TOL: f64 = 1e-8;

/// Default verification tolerance where finite differences enter.
pub const FINITE_DIFFERENCE_TOL: f64 = 1e-5;
