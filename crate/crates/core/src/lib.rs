//! Envelopes of one-parameter circle families in the plane.
//!
//! A circle family is a center curve `γ`, a frontal with unit normal `ν`,
//! together with a positive radius `λ`. The family has an envelope exactly
//! when it is *creative*: `λ̇ = cos θ · β` for a continuous angle `θ`. The
//! envelope is then `f = γ + λ ν̃` with creator `ν̃ = -cos θ μ ± sin θ ν`.
//!
//! The crate is organised as a pipeline:
//!
//! - [`parser`], [`expr`] and [`dsl`]: family files and symbolic calculus;
//! - [`frontal`]: Gauss map, frame and curvature pair on a grid;
//! - [`envelope`]: creativity, creators, envelopes and their count;
//! - [`assoc`]: involutes, evolutes, evolutoids and pedaloids;
//! - [`verify`]: numerical checks of the relations between envelopes and
//!   associated curves;
//! - [`mohr`]: failure envelopes of Mohr circles;
//! - [`render`] and [`cli`]: SVG output and the `circenv` driver.
//!
//! ```
//! use circle_envelopes::{dsl::parse_family, envelope::{CircleFamily, Classification}};
//!
//! let spec = parse_family(
//!     "curve x=cos(t); y=sin(t)\n\
//!      nu x=cos(t); y=sin(t)\n\
//!      radius 1\n\
//!      domain (0, 2*pi)",
//! ).unwrap();
//! let family = CircleFamily::from_spec(&spec, &Default::default()).unwrap();
//! assert_eq!(family.classify().variant, Classification::ExactlyTwo);
//! ```

use thiserror::Error;

pub mod assoc;
pub mod cli;
pub mod dsl;
pub mod envelope;
pub mod expr;
pub mod frontal;
pub mod geom;
pub mod io;
pub mod mohr;
pub mod parser;
pub mod render;
pub mod tolerance;
pub mod verify;

pub use dsl::{parse_family, FamilySpec};
pub use envelope::{CircleFamily, EnvelopeBranch};
pub use expr::Expr;
pub use frontal::{build_frontal, FrontalData, Grid};
pub use geom::Vec2;
pub use tolerance::Tolerances;

/// Syntax error with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError { line, column, message: message.into() }
    }
}

// The guide's code blocks run as doc-tests.
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
pub struct IntroductionChapter;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/family-files.md")]
pub struct FamilyFilesChapter;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/frontals.md")]
pub struct FrontalsChapter;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/envelopes.md")]
pub struct EnvelopesChapter;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/associated-curves.md")]
pub struct AssociatedCurvesChapter;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/verification.md")]
pub struct VerificationChapter;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/mohr.md")]
pub struct MohrChapter;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/rendering-cli.md")]
pub struct RenderingCliChapter;
