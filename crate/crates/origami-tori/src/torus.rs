//! Closed origami tori: pasting the annuli `A_n^rho` and `A_n^sigma`
//! (`sigma = rho + l/n`) along their common boundary rings, enumerating
//! valid twist pairs, verifying embeddedness, and doubling a horizontal
//! slab into a torus with reflection symmetry.

use std::f64::consts::PI;

use nalgebra::Point3;

use crate::annulus::{
    bottom_vertex, canonical_twist, lower_slab_chain, lower_slab_faces, top_vertex,
    upper_slab_chain, upper_slab_faces, SlabLayout,
};
use crate::geom::{Pt3, Tolerances, TriMesh};
use crate::{Error, Result};

/// Parameters of a paired torus. The outer twist is stored implicitly via
/// the step `l` so that `sigma - rho = l/n` holds exactly and the two
/// boundary rings coincide structurally, never by a floating-point test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusParams {
    pub n: u32,
    /// Signed step between the twists, `2 <= |l| <= n - 3`.
    pub l: i32,
    /// Inner-annulus twist, canonical representative in `[-1/2, 1/2)`.
    pub rho: f64,
    pub h: f64,
}

impl TorusParams {
    pub fn new(n: u32, l: i32, rho: f64, h: f64) -> Self {
        TorusParams {
            n,
            l,
            rho: canonical_twist(rho),
            h,
        }
    }

    /// Outer-annulus twist `sigma = rho + l/n`, canonical.
    pub fn sigma(&self) -> f64 {
        canonical_twist(self.rho + self.l as f64 / self.n as f64)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 5 {
            return Err(Error::NTooSmall { n: self.n, min: 5 });
        }
        if self.h <= 0.0 || self.h.is_nan() {
            return Err(Error::InvalidParameter(format!(
                "height h = {} must be positive",
                self.h
            )));
        }
        let labs = self.l.unsigned_abs();
        if labs < 2 || labs > self.n - 3 {
            return Err(Error::InvalidPairing(format!(
                "step l = {} outside 2 <= |l| <= {}",
                self.l,
                self.n - 3
            )));
        }
        if !step_interval_ok(self.n, self.l, self.rho) {
            return Err(Error::InvalidPairing(format!(
                "rho = {} outside the valid interval for (n, l) = ({}, {})",
                self.rho, self.n, self.l
            )));
        }
        Ok(())
    }
}

/// Interval condition on the inner twist for a given step:
/// `l > 0`: `-1/2 < rho < -l/(2n) - 1/n`;
/// `l < 0`: `|l|/(2n) < rho < 1/2 - 1/n`.
pub fn step_interval_ok(n: u32, l: i32, rho: f64) -> bool {
    let nf = n as f64;
    let rho = canonical_twist(rho);
    if l > 0 {
        -0.5 < rho && rho < -(l as f64) / (2.0 * nf) - 1.0 / nf
    } else {
        (-l) as f64 / (2.0 * nf) < rho && rho < 0.5 - 1.0 / nf
    }
}

/// Pairing condition as a direct comparison of the two annuli: the slant
/// edges of each annulus approach the axis to a distance controlled by an
/// angular span; the outer annulus must stay strictly farther out.
pub fn edge_span_ok(n: u32, rho: f64, sigma: f64) -> bool {
    let nf = n as f64;
    let span_inner = |t: f64| {
        if t <= -0.5 / nf {
            (t + 1.0 / nf).abs()
        } else {
            t.abs()
        }
    };
    let span_outer = |t: f64| {
        if t <= -0.5 / nf {
            t.abs()
        } else {
            t + 1.0 / nf
        }
    };
    span_outer(canonical_twist(sigma)) < span_inner(canonical_twist(rho))
}

/// Outcome of [`pairing_valid`].
#[derive(Debug, Clone)]
pub struct PairingCheck {
    pub valid: bool,
    /// The step realizing the pairing, when one exists.
    pub l: Option<i32>,
    pub reason: String,
}

/// Decide whether `A_n^rho` (inner) and `A_n^sigma` (outer) paste into an
/// embedded torus. Both the step-interval form and the edge-span form of
/// the condition are evaluated and cross-checked.
pub fn pairing_valid(n: u32, rho: f64, sigma: f64) -> Result<PairingCheck> {
    if n < 5 {
        return Err(Error::NTooSmall { n, min: 5 });
    }
    let nf = n as f64;
    let rho = canonical_twist(rho);
    let sigma = canonical_twist(sigma);
    let eps = 1e-9;

    // Both annuli must individually be embeddable.
    for (name, t) in [("rho", rho), ("sigma", sigma)] {
        if matches!(
            crate::annulus::classify_twist(n, t),
            crate::annulus::TwistClass::DegenerateLower
                | crate::annulus::TwistClass::DegenerateUpper
        ) {
            return Ok(PairingCheck {
                valid: false,
                l: None,
                reason: format!("{name} = {t} is not an embeddable twist"),
            });
        }
    }

    let diff = sigma - rho;
    let l0 = (diff * nf).round() as i32;
    if (diff - l0 as f64 / nf).abs() > eps {
        return Ok(PairingCheck {
            valid: false,
            l: None,
            reason: format!("sigma - rho = {diff} is not a multiple of 1/{n}"),
        });
    }

    // The same sigma is reached by steps differing by n; try both signs.
    let max = (n - 3) as i32;
    let candidates: Vec<i32> = [l0, l0 - n as i32, l0 + n as i32]
        .into_iter()
        .filter(|l| (2..=max).contains(&l.abs()))
        .collect();
    if candidates.is_empty() {
        return Ok(PairingCheck {
            valid: false,
            l: None,
            reason: format!("step l = {l0} outside 2 <= |l| <= {max}"),
        });
    }

    let passing = candidates
        .iter()
        .copied()
        .find(|&l| step_interval_ok(n, l, rho));
    let valid = passing.is_some();

    // Cross-check against the edge-span form, away from interval endpoints
    // where the strict inequalities are numerically ambiguous.
    let margin = candidates
        .iter()
        .flat_map(|&l| {
            let lf = l as f64;
            [
                rho + 0.5,
                rho + lf / (2.0 * nf) + 1.0 / nf,
                rho - 0.5 + 1.0 / nf,
            ]
        })
        .map(f64::abs)
        .fold(f64::INFINITY, f64::min);
    if margin > 1e-7 {
        assert_eq!(
            valid,
            edge_span_ok(n, rho, sigma),
            "pairing forms disagree at (n, rho, sigma) = ({n}, {rho}, {sigma})"
        );
    }

    Ok(PairingCheck {
        valid,
        l: passing,
        reason: if valid {
            format!("valid with l = {}", passing.unwrap())
        } else {
            format!("rho = {rho} outside the valid interval for candidate steps {candidates:?}")
        },
    })
}

/// All grid pairs `(rho, sigma)`, numerators over `d`, that pass
/// [`pairing_valid`], sorted lexicographically.
pub fn enumerate_pairs(n: u32, d: u32) -> Result<Vec<(f64, f64)>> {
    if d < n {
        return Err(Error::InvalidParameter(format!(
            "denominator grid d = {d} must be >= n = {n}"
        )));
    }
    let di = d as i64;
    let lo = -(di / 2);
    let hi = (di - 1) / 2;
    let mut out = Vec::new();
    for kr in lo..=hi {
        for ks in lo..=hi {
            let rho = kr as f64 / d as f64;
            let sigma = ks as f64 / d as f64;
            if pairing_valid(n, rho, sigma)?.valid {
                out.push((rho, sigma));
            }
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(out)
}

/// Which annulus a face belongs to and its role in the local quad/triangle
/// decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FaceTag {
    pub outer: bool,
    /// True for faces of the reflected copy in a doubled torus.
    pub mirrored: bool,
    pub k: u32,
    pub kind: FaceKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceKind {
    /// Triangle on the bottom ring edge (`P_k P_{k+1}`).
    Bottom,
    /// Triangle on the top ring edge (`Q_k Q_{k+1}`).
    Top,
    /// First/second half of a split planar quad in a slab.
    QuadA,
    QuadB,
    /// Corner triangle of a slab at the cut plane.
    Corner,
}

/// How a torus mesh was produced.
#[derive(Debug, Clone)]
pub enum Provenance {
    Paired(TorusParams),
    Doubled(DoubleSpec),
}

/// Loop chains through the face graph realizing the two marked generators
/// of the torus, for development-based modulus computation. Both chains
/// start on the same face and end on a repeat of it.
#[derive(Debug, Clone)]
pub struct DevChains {
    /// Seed edge (two vertex ids of the first chain face) pinned on the
    /// horizontal axis when unrolling.
    pub seed: (usize, usize),
    pub h_chain: Vec<usize>,
    pub v_chain: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct TorusMesh {
    pub mesh: TriMesh,
    pub tags: Vec<FaceTag>,
    pub provenance: Provenance,
    pub chains: DevChains,
}

/// Paste `A_n^rho` and `A_n^sigma` into a closed torus.
///
/// Vertex layout: `P_k` at `0..n`, the common `Q` ring at `n..2n` indexed
/// by the inner twist (`Q_k^sigma = Q_{k+l}^rho`). Face layout: inner
/// faces at `0..2n` (windings flipped so the closed mesh is consistently
/// oriented), outer faces at `2n..4n`.
pub fn assemble_torus(params: TorusParams) -> Result<TorusMesh> {
    params.validate()?;
    Ok(assemble_torus_unchecked(params))
}

/// [`assemble_torus`] without the pairing check, for building known-bad
/// candidates that verification should reject.
pub fn assemble_torus_unchecked(params: TorusParams) -> TorusMesh {
    let n = params.n;
    let nn = n as usize;
    let mut vertices = Vec::with_capacity(2 * nn);
    for k in 0..n {
        vertices.push(bottom_vertex(n, k));
    }
    for k in 0..n {
        vertices.push(top_vertex(n, params.rho, params.h, k));
    }

    let p = |k: u32| (k % n) as usize;
    let q = |k: i64| nn + k.rem_euclid(n as i64) as usize;
    let l = params.l as i64;

    let mut faces = Vec::with_capacity(4 * nn);
    let mut tags = Vec::with_capacity(4 * nn);
    for k in 0..n {
        let ki = k as i64;
        faces.push([q(ki + 1), p(k + 1), p(k)]);
        tags.push(FaceTag {
            outer: false,
            mirrored: false,
            k,
            kind: FaceKind::Bottom,
        });
        faces.push([p(k), q(ki), q(ki + 1)]);
        tags.push(FaceTag {
            outer: false,
            mirrored: false,
            k,
            kind: FaceKind::Top,
        });
    }
    for k in 0..n {
        let ki = k as i64;
        faces.push([p(k), p(k + 1), q(ki + 1 + l)]);
        tags.push(FaceTag {
            outer: true,
            mirrored: false,
            k,
            kind: FaceKind::Bottom,
        });
        faces.push([q(ki + 1 + l), q(ki + l), p(k)]);
        tags.push(FaceTag {
            outer: true,
            mirrored: false,
            k,
            kind: FaceKind::Top,
        });
    }

    // Inner face indices within the interleaved layout.
    let f1i = |k: i64| 2 * k.rem_euclid(n as i64) as usize;
    let f2i = |k: i64| 2 * k.rem_euclid(n as i64) as usize + 1;
    let f1o = |k: i64| 2 * nn + 2 * k.rem_euclid(n as i64) as usize;
    let f2o = |k: i64| 2 * nn + 2 * k.rem_euclid(n as i64) as usize + 1;

    // Horizontal generator: once around the inner band.
    let mut h_chain = vec![f1i(0)];
    for k in 1..n as i64 {
        h_chain.push(f2i(k));
        h_chain.push(f1i(k));
    }
    h_chain.push(f2i(0));
    h_chain.push(f1i(0));

    // Vertical generator: over the top ring into the outer annulus at the
    // sector m where the outer top edge comes back over `Q_0 Q_1`, then
    // along the inner band back to the start sector.
    let m = (-l).rem_euclid(n as i64);
    let mut v_chain = vec![f1i(0), f2i(0), f2o(m), f1o(m), f1i(m)];
    if params.l > 0 {
        let mut j = m;
        while j != n as i64 {
            v_chain.push(f2i(j + 1));
            v_chain.push(f1i(j + 1));
            j += 1;
        }
    } else {
        let mut j = m;
        while j != 0 {
            v_chain.push(f2i(j));
            v_chain.push(f1i(j - 1));
            j -= 1;
        }
    }

    TorusMesh {
        mesh: TriMesh::new(vertices, faces),
        tags,
        provenance: Provenance::Paired(params),
        chains: DevChains {
            seed: (0, 1),
            h_chain,
            v_chain,
        },
    }
}

/// Report of the brute-force embeddedness scan.
#[derive(Debug, Clone)]
pub struct EmbeddingReport {
    pub ok: bool,
    pub violating_face_pairs: Vec<(usize, usize)>,
}

/// Check that every pair of faces of a closed torus mesh has disjoint
/// interiors.
pub fn verify_embedding(torus: &TorusMesh, tol: &Tolerances) -> Result<EmbeddingReport> {
    if !torus.mesh.is_closed() {
        return Err(Error::NotClosed);
    }
    let violating = torus.mesh.self_intersections(tol)?;
    Ok(EmbeddingReport {
        ok: violating.is_empty(),
        violating_face_pairs: violating,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleSpec {
    pub base: TorusParams,
    /// Cut height, `0 < a < h`.
    pub a: f64,
    pub half: Half,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Half {
    Lower,
    Upper,
}

fn mirror_z(p: Pt3, a: f64) -> Pt3 {
    Point3::new(p.x, p.y, 2.0 * a - p.z)
}

/// Rotate a loop chain (last entry repeats the first) to start at `start`.
fn rotate_loop(chain: &[usize], start: usize) -> Vec<usize> {
    let core = &chain[..chain.len() - 1];
    let i = core
        .iter()
        .position(|&f| f == start)
        .expect("start face not in loop chain");
    let mut out: Vec<usize> = core[i..].iter().chain(core[..i].iter()).copied().collect();
    out.push(start);
    out
}

fn quad_tri_with(faces: &[[usize; 3]], pair: [usize; 2], e: (usize, usize)) -> usize {
    for &t in &pair {
        if faces[t].contains(&e.0) && faces[t].contains(&e.1) {
            return t;
        }
    }
    panic!("no quad triangle contains edge {e:?}");
}

fn tag_slab(layout: &SlabLayout, n: u32, outer: bool, mirrored: bool) -> Vec<FaceTag> {
    let mut tags = vec![
        FaceTag {
            outer,
            mirrored,
            k: 0,
            kind: FaceKind::QuadA,
        };
        layout.faces.len()
    ];
    for k in 0..n as usize {
        tags[layout.quads[k][0]].k = k as u32;
        tags[layout.quads[k][0]].kind = FaceKind::QuadA;
        tags[layout.quads[k][1]].k = k as u32;
        tags[layout.quads[k][1]].kind = FaceKind::QuadB;
        tags[layout.tris[k]].k = k as u32;
        tags[layout.tris[k]].kind = FaceKind::Corner;
    }
    tags
}

/// Cut the base torus at `z = a`, keep the chosen slab, and weld on its
/// mirror image across the cut plane. The result is a closed torus with a
/// reflection symmetry, spanning `z` in `[0, 2a]` (lower) or
/// `[2a - h, h]` (upper).
pub fn double_torus(spec: DoubleSpec, tol: &Tolerances) -> Result<TorusMesh> {
    spec.base.validate()?;
    let (a, h) = (spec.a, spec.base.h);
    if !(a > 0.0 && a < h) {
        return Err(Error::CutOutOfRange { a, h });
    }
    let params = spec.base;
    let n = params.n;
    let nn = n as usize;
    let f = a / h;
    let l = params.l as i64;

    let pv: Vec<Pt3> = (0..n).map(|k| bottom_vertex(n, k)).collect();
    let qv: Vec<Pt3> = (0..n)
        .map(|k| top_vertex(n, params.rho, params.h, k))
        .collect();
    let qs = |k: i64| qv[k.rem_euclid(n as i64) as usize];

    // Cut points on the slant edges of both annuli, all at z = a.
    let crv: Vec<Pt3> = (0..nn).map(|k| pv[k] + (qv[k] - pv[k]) * f).collect();
    let drv: Vec<Pt3> = (0..nn)
        .map(|k| pv[k] + (qs(k as i64 + 1) - pv[k]) * f)
        .collect();
    let csv: Vec<Pt3> = (0..nn)
        .map(|k| pv[k] + (qs(k as i64 + l) - pv[k]) * f)
        .collect();
    let dsv: Vec<Pt3> = (0..nn)
        .map(|k| pv[k] + (qs(k as i64 + 1 + l) - pv[k]) * f)
        .collect();

    // Ring vertex ids shared by all layouts of one double.
    let cr = move |k: u32| nn + (k % n) as usize;
    let dr = move |k: u32| 2 * nn + (k % n) as usize;
    let cs = move |k: u32| 3 * nn + (k % n) as usize;
    let ds = move |k: u32| 4 * nn + (k % n) as usize;

    let (vertices, inner, outer, seed): (Vec<Pt3>, SlabLayout, SlabLayout, _) = match spec.half {
        Half::Lower => {
            // P ring at 0..n, mirror ring P' at 5n..6n.
            let mut vertices = pv.clone();
            vertices.extend(crv.iter().cloned());
            vertices.extend(drv.iter().cloned());
            vertices.extend(csv.iter().cloned());
            vertices.extend(dsv.iter().cloned());
            vertices.extend(pv.iter().map(|p| mirror_z(*p, a)));
            let p = move |k: u32| (k % n) as usize;
            let inner = lower_slab_faces(&vertices, n, &p, &cr, &dr, tol);
            let outer = lower_slab_faces(&vertices, n, &p, &cs, &ds, tol);
            (vertices, inner, outer, (p(0), p(1)))
        }
        Half::Upper => {
            // Q ring at 0..n, mirror ring Q' at 5n..6n.
            let mut vertices = qv.clone();
            vertices.extend(crv.iter().cloned());
            vertices.extend(drv.iter().cloned());
            vertices.extend(csv.iter().cloned());
            vertices.extend(dsv.iter().cloned());
            vertices.extend(qv.iter().map(|p| mirror_z(*p, a)));
            let qi = move |k: u32| (k % n) as usize;
            let qo = move |k: u32| (k as i64 + l).rem_euclid(n as i64) as usize;
            let inner = upper_slab_faces(&vertices, n, &qi, &cr, &dr, tol);
            let outer = upper_slab_faces(&vertices, n, &qo, &cs, &ds, tol);
            (vertices, inner, outer, (cr(0), dr(0)))
        }
    };

    // Assemble: inner original (winding flipped), outer original, then the
    // mirror copies (ids shifted to the mirror ring, winding re-reversed).
    let block = 3 * nn;
    let vmap = |v: usize| if v < nn { v + 5 * nn } else { v };
    let mut faces: Vec<[usize; 3]> = Vec::with_capacity(4 * block);
    faces.extend(inner.faces.iter().map(|&[x, y, z]| [z, y, x]));
    faces.extend(outer.faces.iter().cloned());
    faces.extend(
        inner
            .faces
            .iter()
            .map(|&[x, y, z]| [vmap(x), vmap(y), vmap(z)]),
    );
    faces.extend(
        outer
            .faces
            .iter()
            .map(|&[x, y, z]| [vmap(z), vmap(y), vmap(x)]),
    );

    let mut tags = tag_slab(&inner, n, false, false);
    tags.extend(tag_slab(&outer, n, true, false));
    tags.extend(tag_slab(&inner, n, false, true));
    tags.extend(tag_slab(&outer, n, true, true));

    // Development chains. The horizontal loop runs around the inner band;
    // the vertical loop crosses the cut plane twice and the shared ring of
    // the two annuli twice.
    let (h_chain, v_chain) = match spec.half {
        Half::Lower => {
            let p = |k: u32| (k % n) as usize;
            let band = lower_slab_chain(&inner, n, &p, &cr, &dr);
            let s = quad_tri_with(&inner.faces, inner.quads[0], (p(0), p(1)));
            let s2 = inner.quads[0][0] + inner.quads[0][1] - s;
            let h_chain = rotate_loop(&band, s);
            let ob = quad_tri_with(&outer.faces, outer.quads[0], (p(0), p(1)));
            let oc = quad_tri_with(&outer.faces, outer.quads[0], (cs(1), ds(0)));
            let v_chain = vec![
                s,
                s2,
                2 * block + s2,
                2 * block + s,
                3 * block + ob,
                3 * block + oc,
                block + oc,
                block + ob,
                s,
            ];
            (h_chain, v_chain)
        }
        Half::Upper => {
            let qi = |k: u32| (k % n) as usize;
            let band = upper_slab_chain(&inner, n, &qi, &cr, &dr);
            let s = quad_tri_with(&inner.faces, inner.quads[0], (cr(0), dr(0)));
            let s2 = inner.quads[0][0] + inner.quads[0][1] - s;
            let h_chain = rotate_loop(&band, s);
            let m = ((-l).rem_euclid(n as i64)) as usize;
            let ot = quad_tri_with(&outer.faces, outer.quads[m], (qi(0), qi(1)));
            let oc = quad_tri_with(&outer.faces, outer.quads[m], (cs(m as u32), ds(m as u32)));
            let v_chain = vec![
                s,
                s2,
                block + ot,
                block + oc,
                3 * block + oc,
                3 * block + ot,
                2 * block + s2,
                2 * block + s,
                s,
            ];
            (h_chain, v_chain)
        }
    };

    Ok(TorusMesh {
        mesh: TriMesh::new(vertices, faces),
        tags,
        provenance: Provenance::Doubled(spec),
        chains: DevChains {
            seed,
            h_chain,
            v_chain,
        },
    })
}

/// Width of every development strip: the common ring length `2n sin(pi/n)`.
pub fn ring_length(n: u32) -> f64 {
    2.0 * n as f64 * (PI / n as f64).sin()
}
