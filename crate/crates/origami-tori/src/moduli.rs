//! Moduli of the assembled tori: the closed form, the development-based
//! computation (independent of the closed form), the `h = 0` limit curves
//! and their cycloid envelopes, and membership tests for the region of
//! achievable moduli.
//!
//! Sign convention: the step `l` of a pairing enters the closed form with
//! its sign; positive and negative steps give moduli with positive and
//! negative real part respectively, and correspond to mirror-image tori.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::annulus::strip_height;
use crate::geom::Tolerances;
use crate::torus::{ring_length, Provenance, TorusMesh, TorusParams};
use crate::unroll::{self, Pt2, Vec2};
use crate::{Error, Result};

/// A point of the upper half-plane together with its normalization into
/// the standard fundamental domain `|Re| <= 1/2, |z| >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Modulus {
    pub value: Complex64,
    pub normalized: Complex64,
    /// Unimodular transformation carrying `value` to `normalized`, as a
    /// left-to-right word of generators.
    pub transform_chain: Vec<MoebiusStep>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoebiusStep {
    /// `z -> z + k`.
    Translate(i64),
    /// `z -> -1/z`.
    Invert,
}

/// Normalize a point of the upper half-plane into the fundamental domain
/// by the classical translate/invert loop.
pub fn reduce_modulus(z: Complex64) -> Result<Modulus> {
    if z.im <= 0.0 || z.im.is_nan() {
        return Err(Error::NotUpperHalfPlane(z.im));
    }
    let value = z;
    let mut w = z;
    let mut chain = Vec::new();
    let eps = 1e-15;
    for _ in 0..10_000 {
        let k = (-w.re).round();
        if k != 0.0 {
            w += k;
            chain.push(MoebiusStep::Translate(k as i64));
        }
        if w.norm_sqr() < 1.0 - eps {
            w = -w.inv();
            chain.push(MoebiusStep::Invert);
        } else {
            return Ok(Modulus {
                value,
                normalized: w,
                transform_chain: chain,
            });
        }
    }
    Err(Error::InvalidParameter(format!(
        "fundamental-domain reduction of {z} did not terminate"
    )))
}

/// Modulus of the torus pairing `A_n^rho` with `A_n^(rho + l/n)`:
/// the horizontal part is the shear between the two development strips
/// plus the identification shift, the vertical part the sum of the two
/// strip heights, both over the common strip width.
pub fn torus_modulus(params: TorusParams) -> Result<Modulus> {
    params.validate()?;
    let value = modulus_value(params.n, params.l, params.rho, params.h);
    let mut m = reduce_modulus(value)?;
    debug_assert!(m.value.im > 0.0);
    m.value = value;
    Ok(m)
}

/// The closed-form modulus without parameter validation. The inverse
/// solver evaluates this on candidate parameters that may sit outside the
/// embeddable set.
pub fn modulus_value(n: u32, l: i32, rho: f64, h: f64) -> Complex64 {
    let nf = n as f64;
    let lf = l as f64;
    let sigma = rho + lf / nf;
    let re = (2.0 * PI * rho + PI / nf).sin() - (2.0 * PI * sigma + PI / nf).sin()
        + 2.0 * lf * (PI / nf).sin();
    let im = strip_height(n, rho, h) + strip_height(n, sigma, h);
    Complex64::new(re, im) / ring_length(n)
}

/// The `h = 0` degeneration of the modulus formula: the square roots in
/// the strip heights collapse to absolute values. Not an embeddable torus;
/// used for the limit-curve analysis.
pub fn modulus_h0(n: u32, l: i32, rho: f64) -> Complex64 {
    let nf = n as f64;
    let lf = l as f64;
    let sigma = rho + lf / nf;
    let height0 = |t: f64| ((2.0 * PI * t + PI / nf).cos() - (PI / nf).cos()).abs();
    let re = (2.0 * PI * rho + PI / nf).sin() - (2.0 * PI * sigma + PI / nf).sin()
        + 2.0 * lf * (PI / nf).sin();
    let im = height0(rho) + height0(sigma);
    Complex64::new(re, im) / ring_length(n)
}

fn c64(v: Vec2) -> Complex64 {
    Complex64::new(v.x, v.y)
}

/// Compute the modulus by unrolling the mesh along its two marked loop
/// chains and taking the ratio of the period vectors. Independent of the
/// closed form; works for paired and doubled tori.
pub fn modulus_from_development(torus: &TorusMesh, tol: &Tolerances) -> Result<Complex64> {
    let mesh = &torus.mesh;
    if !mesh.is_closed() {
        return Err(Error::NotClosed);
    }
    // A closed flat torus has angle sum exactly 2 pi at every vertex.
    for v in 0..mesh.vertices.len() {
        let sum = mesh.angle_at_vertex(v)?;
        if (sum - 2.0 * PI).abs() > 1e3 * tol.geom {
            return Err(Error::NotDevelopable {
                vertex: v,
                angle_sum: sum,
            });
        }
    }

    let (v0, v1) = torus.chains.seed;
    let u = unroll::loop_period(mesh, &torus.chains.h_chain, v0, v1, 1.0)?;

    let d = (mesh.vertices[v1] - mesh.vertices[v0]).norm();
    let placements = unroll::unroll_chain(
        mesh,
        &torus.chains.v_chain,
        v0,
        v1,
        Pt2::origin(),
        Pt2::new(d, 0.0),
        1.0,
    )?;
    let last = torus.chains.v_chain.len() - 1;
    let v = unroll::image_of(mesh, &torus.chains.v_chain, &placements, last, v0) - Pt2::origin();

    let tau = c64(v) / c64(u);
    // The chart orientation (side of the first unrolled face) is a free
    // choice; fix it so the modulus lands in the upper half-plane.
    Ok(if tau.im < 0.0 { tau.conj() } else { tau })
}

/// Planar development of a paired torus: the inner-annulus strip above the
/// shared bottom line, the outer-annulus strip below it, and the period
/// vectors of the induced lattice.
#[derive(Debug, Clone)]
pub struct TorusDevelopment {
    /// Images of `P_0 ... P_n` on the shared line.
    pub p_hat: Vec<Pt2>,
    /// Images of the ring vertices `Q_0 ... Q_n` in the inner strip.
    pub q_upper: Vec<Pt2>,
    /// Images of the ring vertices `Q^sigma_0 ... Q^sigma_n` in the outer
    /// strip (negative ordinates).
    pub q_lower: Vec<Pt2>,
    /// Identification shift: `Q^sigma_k` is the ring vertex `Q_(k+shift)`.
    pub shift: i32,
    /// Horizontal period `P_n - P_0`.
    pub period_h: Vec2,
    /// Vertical period `Q_shift (upper, extended) - Q^sigma_0 (lower)`.
    pub period_v: Vec2,
}

/// Unroll both annulus bands of a paired torus from the shared seed edge
/// `P_0 P_1` and harvest the strip vertex images.
pub fn torus_development(torus: &TorusMesh) -> Result<TorusDevelopment> {
    let params = match torus.provenance {
        Provenance::Paired(p) => p,
        Provenance::Doubled(_) => {
            return Err(Error::InvalidParameter(
                "two-strip development is defined for paired tori only".into(),
            ))
        }
    };
    let mesh = &torus.mesh;
    let n = params.n;
    let nn = n as usize;
    let l = params.l as i64;

    let seed0 = Pt2::origin();
    let seed1 = Pt2::new((mesh.vertices[1] - mesh.vertices[0]).norm(), 0.0);

    // Band loop of one annulus; `base` is 0 for the inner block, 2n for
    // the outer.
    let band = |base: usize| {
        let f1 = |k: usize| base + 2 * (k % nn);
        let f2 = |k: usize| base + 2 * (k % nn) + 1;
        let mut chain = vec![f1(0)];
        for k in 1..nn {
            chain.push(f2(k));
            chain.push(f1(k));
        }
        chain.push(f2(0));
        chain.push(f1(0));
        chain
    };

    // First planar image of each vertex id along a chain, plus the image
    // of the ring vertex `q0_id` in the wrap face at the right end.
    let harvest = |chain: &[usize], side: f64| -> Result<(Vec<Option<Pt2>>, Pt2)> {
        let pl = unroll::unroll_chain(mesh, chain, 0, 1, seed0, seed1, side)?;
        let mut first: Vec<Option<Pt2>> = vec![None; mesh.vertices.len()];
        for (w, &f) in chain.iter().enumerate().take(chain.len() - 1) {
            for (i, &vid) in mesh.faces[f].iter().enumerate() {
                if first[vid].is_none() {
                    first[vid] = Some(pl[w][i]);
                }
            }
        }
        let wrap = unroll::image_of(mesh, chain, &pl, chain.len() - 2, chain_ring0(mesh, chain));
        Ok((first, wrap))
    };
    // The ring vertex completing a strip at its right end is the one in
    // the wrap face `f2_0` that is not in the seed face's bottom edge.
    fn chain_ring0(mesh: &crate::geom::TriMesh, chain: &[usize]) -> usize {
        let f2_0 = mesh.faces[chain[chain.len() - 2]];
        let f1_0 = mesh.faces[chain[0]];
        // f2_0 = {P_0, Q_0, Q_1}; Q_1 is shared with f1_0, P_0 is vertex 0.
        *f2_0
            .iter()
            .find(|v| **v != 0 && !f1_0.contains(v))
            .expect("wrap face has no fresh ring vertex")
    }

    let (inner_first, inner_wrap) = harvest(&band(0), 1.0)?;
    let (outer_first, outer_wrap) = harvest(&band(2 * nn), -1.0)?;

    let qid = |k: i64| nn + k.rem_euclid(n as i64) as usize;

    let mut p_hat: Vec<Pt2> = (0..nn).map(|k| inner_first[k].unwrap()).collect();
    let period_h = Vec2::new(ring_length(n), 0.0);
    p_hat.push(p_hat[0] + period_h);

    let mut q_upper: Vec<Pt2> = Vec::with_capacity(nn + 1);
    let mut q_lower: Vec<Pt2> = Vec::with_capacity(nn + 1);
    for k in 1..=nn as i64 {
        if k < nn as i64 {
            q_upper.push(inner_first[qid(k)].unwrap());
            q_lower.push(outer_first[qid(k + l)].unwrap());
        } else {
            q_upper.push(inner_wrap);
            q_lower.push(outer_wrap);
        }
    }
    q_upper.insert(0, q_upper[nn - 1] - period_h);
    q_lower.insert(0, q_lower[nn - 1] - period_h);

    // Q_l in the extended upper strip, relative to the outer ring start.
    let q_upper_ext = if l >= 0 {
        q_upper[l as usize]
    } else {
        q_upper[(l + nn as i64) as usize] - period_h
    };
    let period_v = q_upper_ext - q_lower[0];

    Ok(TorusDevelopment {
        p_hat,
        q_upper,
        q_lower,
        shift: params.l,
        period_h,
        period_v,
    })
}

/// Limit curve of the moduli as `n` grows with `theta = l/n` fixed:
/// `c_theta(rho)`, defined for `(rho, theta)` interior to the parameter
/// triangle `-1/2 < rho < -theta/2`, `0 < theta < 1`.
pub fn limit_curve(theta: f64, rho: f64) -> Result<Complex64> {
    if !(0.0 < theta && theta < 1.0 && -0.5 < rho && rho < -theta / 2.0) {
        return Err(Error::OutsideParameterTriangle { rho, theta });
    }
    Ok(gamma(rho, theta))
}

/// The limit-curve formula as a map on all of `(rho, theta)`-space, used
/// for boundary curves and finite differencing.
pub fn gamma(rho: f64, theta: f64) -> Complex64 {
    let re = (2.0 * PI * rho).sin() - (2.0 * PI * (rho + theta)).sin() + 2.0 * PI * theta;
    let im = 2.0 - (2.0 * PI * rho).cos() - (2.0 * PI * (rho + theta)).cos();
    Complex64::new(re, im) / (2.0 * PI)
}

/// Distance between the `h = 0` modulus at `(m n, m l, rho)` and the limit
/// curve value `c_(l/n)(rho)`; tends to zero as `m` grows.
pub fn convergence_check(n: u32, l: u32, rho: f64, m: u32) -> Result<f64> {
    if l == 0 || l >= n || m == 0 {
        return Err(Error::InvalidParameter(format!(
            "need 0 < l < n and m >= 1, got l = {l}, n = {n}, m = {m}"
        )));
    }
    let theta = l as f64 / n as f64;
    let limit = limit_curve(theta, rho)?;
    let approx = modulus_h0(m * n, (m * l) as i32, rho);
    Ok((approx - limit).norm())
}

/// Jacobian determinant of `gamma` with respect to `(theta, rho)`:
/// `4 sin(pi rho) sin(pi (rho + theta)) sin(pi (2 rho + theta))`.
/// (With the variables ordered `(rho, theta)` the determinant has the
/// opposite sign.)
pub fn jacobian_gamma(rho: f64, theta: f64) -> f64 {
    4.0 * (PI * rho).sin() * (PI * (rho + theta)).sin() * (PI * (2.0 * rho + theta)).sin()
}

/// Unit direction of the segment `{c_theta(rho)}` (fixed `theta`): all of
/// its chords are parallel to `(sin(pi theta), cos(pi theta))`.
pub fn tangent_direction(theta: f64) -> Result<Complex64> {
    if !(0.0 < theta && theta < 1.0) {
        return Err(Error::DegenerateDirection(theta));
    }
    Ok(Complex64::new((PI * theta).sin(), (PI * theta).cos()))
}

/// Boundary cycloid `c_theta(-theta)`, `theta` in `[0, 1]`.
pub fn cycloid_lower(theta: f64) -> Complex64 {
    let t = 2.0 * PI * theta;
    Complex64::new(t - t.sin(), 1.0 - t.cos()) / (2.0 * PI)
}

/// Boundary cycloid `c_theta(-1/2)`, `theta` in `[0, 1]`.
pub fn cycloid_upper(theta: f64) -> Complex64 {
    let t = 2.0 * PI * theta;
    Complex64::new(t.sin() + t, 3.0 + t.cos()) / (2.0 * PI)
}

/// Boundary cycloid `c_(-2 rho)(rho)`, `rho` in `[-1/2, 0]`.
pub fn cycloid_left(rho: f64) -> Complex64 {
    let t = 2.0 * PI * rho;
    Complex64::new(2.0 * t.sin() - 2.0 * t, 2.0 - 2.0 * t.cos()) / (2.0 * PI)
}

/// Classification of a point against the closure of the two domains whose
/// union is the image of the parameter triangle under `gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionClass {
    Domain1,
    Domain2,
    Boundary,
    Outside,
}

const REGION_SAMPLES: usize = 4096;

fn polyline(f: impl Fn(f64) -> Complex64, from: f64, to: f64) -> Vec<Complex64> {
    (0..=REGION_SAMPLES)
        .map(|i| f(from + (to - from) * i as f64 / REGION_SAMPLES as f64))
        .collect()
}

fn dist_to_polyline(z: Complex64, poly: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for w in poly.windows(2) {
        let (a, b) = (w[0], w[1]);
        let ab = b - a;
        let t = ((z - a).re * ab.re + (z - a).im * ab.im) / ab.norm_sqr();
        let p = a + ab * t.clamp(0.0, 1.0);
        best = best.min((z - p).norm());
    }
    best
}

fn winding_contains(z: Complex64, loop_poly: &[Complex64]) -> bool {
    // Even-odd ray crossing along +x.
    let mut inside = false;
    for w in loop_poly.windows(2) {
        let (a, b) = (w[0], w[1]);
        if (a.im > z.im) != (b.im > z.im) {
            let x = a.re + (z.im - a.im) / (b.im - a.im) * (b.re - a.re);
            if x > z.re {
                inside = !inside;
            }
        }
    }
    inside
}

fn region_loops() -> (Vec<Complex64>, Vec<Complex64>) {
    // Domain 1: imaginary-axis segment, then c_theta(-1/2) out to the
    // common corner 1/2 + i/pi, back along c_theta(-theta).
    let mut loop1 = polyline(|t| Complex64::new(0.0, 2.0 * t / PI), 0.0, 1.0);
    loop1.extend(polyline(cycloid_upper, 0.0, 0.5));
    loop1.extend(polyline(cycloid_lower, 0.5, 0.0));
    // Domain 2: c_theta(-theta) up to the corner, c_theta(-1/2) on to
    // 1 + 2i/pi, back along c_(-2 rho)(rho).
    let mut loop2 = polyline(cycloid_lower, 0.0, 0.5);
    loop2.extend(polyline(cycloid_upper, 0.5, 1.0));
    loop2.extend(polyline(cycloid_left, -0.5, 0.0));
    (loop1, loop2)
}

/// Classify `z` against the two cycloid-bounded domains. Points within
/// `tol.geom` of a bounding polyline are reported as boundary.
pub fn region_contains(z: Complex64, tol: &Tolerances) -> RegionClass {
    let (loop1, loop2) = region_loops();
    if dist_to_polyline(z, &loop1) <= tol.geom || dist_to_polyline(z, &loop2) <= tol.geom {
        return RegionClass::Boundary;
    }
    if winding_contains(z, &loop1) {
        RegionClass::Domain1
    } else if winding_contains(z, &loop2) {
        RegionClass::Domain2
    } else {
        RegionClass::Outside
    }
}

/// Membership in the covered part of the fundamental domain:
/// `Re z` in `(0, 1/2)` with `Im z >= sqrt(1 - Re^2)`, its mirror image,
/// or the vertical edges `Re z = +-1/2` with `Im z > sqrt(3)/2`.
pub fn coverage_region_contains(z: Complex64) -> bool {
    let x = z.re.abs();
    if x > 0.0 && x < 0.5 {
        z.im >= (1.0 - x * x).sqrt()
    } else if (x - 0.5).abs() == 0.0 {
        z.im > 3f64.sqrt() / 2.0
    } else {
        false
    }
}
