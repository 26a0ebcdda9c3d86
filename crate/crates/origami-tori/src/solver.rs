//! Inverse design: from a target modulus to embedding parameters.
//!
//! Targets with nonzero real part are met by a paired-annuli torus found
//! by a deterministic search over `(n, l)`; pure imaginary targets are met
//! by doubling a cut slab of a fixed base torus. Every returned solution
//! is re-verified geometrically: the mesh passes the embedding check and
//! the reported modulus is recomputed from the development.

use num_complex::Complex64;

use crate::geom::Tolerances;
use crate::moduli::{modulus_from_development, modulus_h0, modulus_value, reduce_modulus};
use crate::torus::{assemble_torus, double_torus, verify_embedding, DoubleSpec, Half, TorusParams};
use crate::{Error, Result};

/// A solve target with its search budget and acceptance tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveRequest {
    /// Target modulus, `Im > 0`.
    pub target: Complex64,
    /// Cap on the polygon order searched.
    pub n_max: u32,
    /// Acceptance tolerance on `|achieved - target|`.
    pub tol: f64,
    /// Move the target into the fundamental domain before solving.
    pub allow_reduction: bool,
}

impl SolveRequest {
    pub fn new(target: Complex64) -> Self {
        SolveRequest {
            target,
            n_max: 400,
            tol: 1e-9,
            allow_reduction: false,
        }
    }
}

/// Parameters realizing a solved target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Solution {
    Torus(TorusParams),
    Double(DoubleSpec),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveResult {
    pub solution: Solution,
    /// Modulus recomputed from the development of the returned mesh.
    pub achieved: Complex64,
    pub residual: f64,
}

/// Open twist interval of valid pairings for a signed step `l`.
fn twist_interval(n: u32, l: i32) -> (f64, f64) {
    let nf = n as f64;
    if l > 0 {
        (-0.5, -(l as f64) / (2.0 * nf) - 1.0 / nf)
    } else {
        ((-l) as f64 / (2.0 * nf), 0.5 - 1.0 / nf)
    }
}

const SAMPLES: usize = 1024;
const END_MARGIN: f64 = 1e-9;

/// All twists `rho` in the valid open interval of `(n, l)` at which the
/// (height-independent) real part of the modulus equals `x`, found by
/// dense sampling and bisection. Ascending; empty if the value is never
/// attained.
pub fn solve_real_part(n: u32, l: i32, x: f64) -> Vec<f64> {
    let tol = Tolerances::default();
    let (lo, hi) = twist_interval(n, l);
    let (lo, hi) = (lo + END_MARGIN, hi - END_MARGIN);
    if hi <= lo {
        return Vec::new();
    }
    let f = |rho: f64| modulus_value(n, l, rho, 1.0).re - x;
    let mut roots = Vec::new();
    let mut prev_rho = lo;
    let mut prev_val = f(lo);
    for i in 1..=SAMPLES {
        let rho = lo + (hi - lo) * i as f64 / SAMPLES as f64;
        let val = f(rho);
        if prev_val == 0.0 {
            roots.push(prev_rho);
        } else if prev_val * val < 0.0 {
            let (mut a, mut b) = (prev_rho, rho);
            let mut fa = prev_val;
            while b - a > tol.solver {
                let m = 0.5 * (a + b);
                let fm = f(m);
                if fa * fm <= 0.0 {
                    b = m;
                } else {
                    a = m;
                    fa = fm;
                }
            }
            roots.push(0.5 * (a + b));
        }
        prev_rho = rho;
        prev_val = val;
    }
    roots
}

/// The unique height at which the imaginary part of the modulus of
/// `(n, l, rho)` equals `y`. The imaginary part decreases to the `h = 0`
/// curve value as the height shrinks, so targets at or below that limit
/// are unreachable.
pub fn solve_height(n: u32, l: i32, rho: f64, y: f64) -> Result<f64> {
    let tol = Tolerances::default();
    let limit = modulus_h0(n, l, rho).im;
    if y <= limit + tol.solver {
        return Err(Error::ImaginaryPartUnreachable { y, limit });
    }
    let f = |h: f64| modulus_value(n, l, rho, h).im - y;
    let mut hi = 1.0;
    while f(hi) < 0.0 {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::InvalidParameter(format!(
                "height bracket for Im = {y} exceeded 1e12"
            )));
        }
    }
    let mut lo = 0.0;
    while hi - lo > tol.solver * hi.max(1.0) {
        let m = 0.5 * (lo + hi);
        if f(m) < 0.0 {
            lo = m;
        } else {
            hi = m;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Deterministic inverse search: smallest `n`, then smallest `|l|`
/// (positive sign first), then smallest `rho`. Targets on the imaginary
/// axis are delegated to the doubling construction.
pub fn solve_modulus(req: &SolveRequest) -> Result<SolveResult> {
    if req.target.im <= 0.0 || req.target.im.is_nan() {
        return Err(Error::NotUpperHalfPlane(req.target.im));
    }
    if req.n_max < 5 {
        return Err(Error::NTooSmall {
            n: req.n_max,
            min: 5,
        });
    }
    let target = if req.allow_reduction {
        reduce_modulus(req.target)?.normalized
    } else {
        req.target
    };
    if target.re.abs() <= req.tol {
        return solve_pure_imaginary(target.im, None);
    }

    let tol = Tolerances::default();
    for n in 5..=req.n_max {
        for step in 2..=(n - 3) as i32 {
            for l in [step, -step] {
                for rho in solve_real_part(n, l, target.re) {
                    let Ok(h) = solve_height(n, l, rho, target.im) else {
                        continue;
                    };
                    let params = TorusParams::new(n, l, rho, h);
                    let Ok(torus) = assemble_torus(params) else {
                        continue;
                    };
                    if !verify_embedding(&torus, &tol)?.ok {
                        continue;
                    }
                    let achieved = modulus_from_development(&torus, &tol)?;
                    let residual = (achieved - target).norm();
                    if residual <= req.tol {
                        return Ok(SolveResult {
                            solution: Solution::Torus(params),
                            achieved,
                            residual,
                        });
                    }
                }
            }
        }
    }
    Err(Error::TargetUnreached(req.n_max))
}

/// Realize the pure imaginary modulus `i y` as the double of a horizontal
/// slab of a base torus. The lower slab `[0, a]` doubles to a torus of
/// modulus `i * 2 (a/h) (H_rho + H_sigma) / L`, linear in the cut height,
/// so any `y > 0` is reachable after growing the base height.
pub fn solve_pure_imaginary(y: f64, base: Option<TorusParams>) -> Result<SolveResult> {
    if y <= 0.0 || y.is_nan() {
        return Err(Error::InvalidParameter(format!(
            "pure imaginary target needs y > 0, got {y}"
        )));
    }
    let tol = Tolerances::default();
    let mut params = base.unwrap_or(TorusParams::new(8, 2, -3.0 / 8.0, 1.0));
    params.validate()?;
    let full_im = |h: f64| modulus_value(params.n, params.l, params.rho, h).im;
    // A lower slab [0, a] doubled has imaginary part 2 (a/h) times the
    // full torus value; grow the height until that range covers the
    // target, then cut at the linearly interpolated height.
    while 2.0 * full_im(params.h) <= y * (1.0 + 1e-6) {
        params.h *= 2.0;
    }
    let a = params.h * y / (2.0 * full_im(params.h));
    let spec = DoubleSpec {
        base: params,
        a,
        half: Half::Lower,
    };
    let doubled = double_torus(spec, &tol)?;
    if !verify_embedding(&doubled, &tol)?.ok {
        return Err(Error::InvalidPairing(
            "doubled slab failed the embedding check".into(),
        ));
    }
    let achieved = modulus_from_development(&doubled, &tol)?;
    let residual = (achieved - Complex64::new(0.0, y)).norm();
    Ok(SolveResult {
        solution: Solution::Double(spec),
        achieved,
        residual,
    })
}
