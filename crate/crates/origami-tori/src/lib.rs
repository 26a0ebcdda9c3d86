//! Construction and analysis of piecewise-linear isometric (origami)
//! embeddings of flat tori in 3-space.
//!
//! The building block is the flat annulus `A_n^rho`: the band of `2n`
//! congruent triangles between two unit regular `n`-gons at heights `0`
//! and `h`, the top one rotated by `2*pi*rho`. Two such annuli whose
//! boundaries coincide can be pasted into a closed flat torus; cutting a
//! torus at a horizontal plane and doubling the slab yields tori with
//! rectangular (pure imaginary) moduli.
//!
//! Modules:
//! - [`geom`]: points, triangle meshes, congruence and interior-disjointness
//!   predicates, tolerance policy.
//! - [`annulus`]: the annulus `A_n^rho`, its development, and horizontal cuts.
//! - [`torus`]: pairing conditions, torus assembly, embedding verification,
//!   and the doubling construction.
//! - [`unroll`]: face-by-face development of triangle strips into the plane.
//! - [`moduli`]: the torus modulus (closed form and development-based),
//!   limit curves, cycloid boundaries, and region membership.
//! - [`solver`]: inverse design, from a target modulus to embedding
//!   parameters.
//! - [`export`]: OBJ/STL meshes, SVG crease patterns, CSV atlases, and JSON
//!   reports.

pub mod annulus;
pub mod export;
pub mod geom;
pub mod moduli;
pub mod solver;
pub mod torus;
pub mod unroll;

use thiserror::Error;

/// Crate-wide error type. Variant names track the failure labels used in
/// validation reports.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate-triangle: triangle area below tolerance")]
    DegenerateTriangle,
    #[error("unused-vertex: vertex {0} has no incident face")]
    UnusedVertex(usize),
    #[error("twist-out-of-range: rho = {rho} outside (-1/2, 1/2 - 1/{n})")]
    TwistOutOfRange { n: u32, rho: f64 },
    #[error("cut-out-of-range: a = {a} outside (0, {h})")]
    CutOutOfRange { a: f64, h: f64 },
    #[error("n-too-small: n = {n}, need n >= {min}")]
    NTooSmall { n: u32, min: u32 },
    #[error("invalid-pairing: {0}")]
    InvalidPairing(String),
    #[error("not-closed: mesh has boundary edges")]
    NotClosed,
    #[error("not-developable: vertex {vertex} has angle sum {angle_sum}")]
    NotDevelopable { vertex: usize, angle_sum: f64 },
    #[error("outside-parameter-triangle: (rho, theta) = ({rho}, {theta})")]
    OutsideParameterTriangle { rho: f64, theta: f64 },
    #[error("degenerate-direction: theta = {0} is an endpoint")]
    DegenerateDirection(f64),
    #[error("not-upper-half-plane: Im = {0}")]
    NotUpperHalfPlane(f64),
    #[error("imaginary-part-unreachable: y = {y} at or below the h=0 limit {limit}")]
    ImaginaryPartUnreachable { y: f64, limit: f64 },
    #[error("target-unreached (increase nMax): searched n <= {0}")]
    TargetUnreached(u32),
    #[error("invalid-parameter: {0}")]
    InvalidParameter(String),
    #[error("io-error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
