//! The origami-embedded flat annulus `A_n^rho`: the band of `2n` congruent
//! triangles between the unit regular `n`-gon at height `0` and its copy at
//! height `h` rotated by `2*pi*rho`. Also its development into a planar
//! parallelogram strip and the horizontal cut at `z = a`.

use std::f64::consts::PI;

use nalgebra::Point3;

use crate::geom::{Pt3, Tolerances, TriMesh};
use crate::unroll::{self, Pt2, Vec2};
use crate::{Error, Result};

/// Generator triple of an annulus: polygon order `n`, twist `rho`, height `h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnulusParams {
    pub n: u32,
    pub rho: f64,
    pub h: f64,
}

impl AnnulusParams {
    /// `rho` is reduced to the canonical representative in `[-1/2, 1/2)`.
    pub fn new(n: u32, rho: f64, h: f64) -> Self {
        AnnulusParams {
            n,
            rho: canonical_twist(rho),
            h,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::NTooSmall { n: self.n, min: 3 });
        }
        if self.h <= 0.0 || self.h.is_nan() {
            return Err(Error::InvalidParameter(format!(
                "height h = {} must be positive",
                self.h
            )));
        }
        match classify_twist(self.n, self.rho) {
            TwistClass::DegenerateLower | TwistClass::DegenerateUpper => {
                Err(Error::TwistOutOfRange {
                    n: self.n,
                    rho: self.rho,
                })
            }
            _ => Ok(()),
        }
    }

    pub fn is_embeddable(&self) -> bool {
        self.validate().is_ok()
    }
}

/// Reduce a twist to its canonical representative in `[-1/2, 1/2)`.
pub fn canonical_twist(rho: f64) -> f64 {
    let r = rho - (rho + 0.5).floor();
    // floor can land exactly on 0.5 from below; clamp the half-open interval.
    if r >= 0.5 {
        r - 1.0
    } else {
        r
    }
}

/// Qualitative position of a twist within (or outside) the validity interval
/// `(-1/2, 1/2 - 1/n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwistClass {
    Embeddable,
    /// `rho` in `{0, -1/n}`: side faces of the regular prism.
    Prism,
    /// `rho = -1/(2n)`: side faces of the uniform antiprism.
    Antiprism,
    /// `rho <= -1/2`: vertical edges pass through the center.
    DegenerateLower,
    /// `rho >= 1/2 - 1/n`: slanted edges pass through the center.
    DegenerateUpper,
}

pub fn classify_twist(n: u32, rho: f64) -> TwistClass {
    let eps = 1e-9;
    let r = canonical_twist(rho);
    let nf = n as f64;
    if r <= -0.5 + eps {
        return TwistClass::DegenerateLower;
    }
    if r >= 0.5 - 1.0 / nf - eps {
        return TwistClass::DegenerateUpper;
    }
    if r.abs() <= eps || (r + 1.0 / nf).abs() <= eps {
        return TwistClass::Prism;
    }
    if (r + 0.5 / nf).abs() <= eps {
        return TwistClass::Antiprism;
    }
    TwistClass::Embeddable
}

/// Bottom-ring vertex `P_k = (cos(2 pi k / n), sin(2 pi k / n), 0)`.
pub fn bottom_vertex(n: u32, k: u32) -> Pt3 {
    let t = 2.0 * PI * k as f64 / n as f64;
    Point3::new(t.cos(), t.sin(), 0.0)
}

/// Top-ring vertex `Q_k^rho = (cos(2 pi (rho + k/n)), sin(...), h)`.
pub fn top_vertex(n: u32, rho: f64, h: f64, k: u32) -> Pt3 {
    let t = 2.0 * PI * (rho + k as f64 / n as f64);
    Point3::new(t.cos(), t.sin(), h)
}

/// The annulus mesh. Vertex layout: bottom ring `P_k` at indices `0..n`,
/// top ring `Q_k` at `n..2n`. Face layout per sector `k`: the triangle on
/// the bottom edge at `2k`, the triangle on the top edge at `2k + 1`.
#[derive(Debug, Clone)]
pub struct AnnulusMesh {
    pub params: AnnulusParams,
    pub mesh: TriMesh,
}

impl AnnulusMesh {
    pub fn bottom(&self, k: u32) -> usize {
        (k % self.params.n) as usize
    }

    pub fn top(&self, k: u32) -> usize {
        (self.params.n + k % self.params.n) as usize
    }

    /// Face `△ P_k P_{k+1} Q_{k+1}`.
    pub fn face_lower(&self, k: u32) -> usize {
        2 * (k % self.params.n) as usize
    }

    /// Face `△ Q_{k+1} Q_k P_k`.
    pub fn face_upper(&self, k: u32) -> usize {
        2 * (k % self.params.n) as usize + 1
    }
}

/// Build `A_n^rho` as a triangle mesh with `2n` faces.
pub fn build_annulus(params: AnnulusParams) -> Result<AnnulusMesh> {
    params.validate()?;
    let n = params.n;
    let mut vertices = Vec::with_capacity(2 * n as usize);
    for k in 0..n {
        vertices.push(bottom_vertex(n, k));
    }
    for k in 0..n {
        vertices.push(top_vertex(n, params.rho, params.h, k));
    }
    let p = |k: u32| (k % n) as usize;
    let q = |k: u32| (n + k % n) as usize;
    let mut faces = Vec::with_capacity(2 * n as usize);
    for k in 0..n {
        faces.push([p(k), p(k + 1), q(k + 1)]);
        faces.push([q(k + 1), q(k), p(k)]);
    }
    Ok(AnnulusMesh {
        params,
        mesh: TriMesh::new(vertices, faces),
    })
}

/// Height of the development strip of `A_n^rho`:
/// `sqrt(h^2 + (cos(2 pi rho + pi/n) - cos(pi/n))^2)`.
pub fn strip_height(n: u32, rho: f64, h: f64) -> f64 {
    let nf = n as f64;
    let d = (2.0 * PI * rho + PI / nf).cos() - (PI / nf).cos();
    (h * h + d * d).sqrt()
}

/// Scalar projection of `Q_1 - P_0` onto the bottom edge `P_1 - P_0`:
/// `sin(2 pi rho + pi/n) + sin(pi/n)`.
pub fn projection_foot(params: &AnnulusParams) -> Result<f64> {
    params.validate()?;
    let nf = params.n as f64;
    Ok((2.0 * PI * params.rho + PI / nf).sin() + (PI / nf).sin())
}

/// Planar development of an annulus (or of one of its horizontal slabs):
/// a parallelogram strip with the bottom boundary on `y = 0` and the top
/// boundary on `y = height`.
#[derive(Debug, Clone)]
pub struct DevelopmentStrip {
    /// Bottom edge length, `2 n sin(pi/n)` for a full annulus.
    pub width: f64,
    pub height: f64,
    /// Horizontal offset of the first top vertex relative to the first
    /// bottom vertex.
    pub top_offset: f64,
    /// Planar images of the bottom boundary vertices, left to right.
    pub bottom: Vec<Pt2>,
    /// Planar images of the top boundary vertices, left to right.
    pub top: Vec<Pt2>,
}

/// Develop `A_n^rho` to its parallelogram strip (closed form).
pub fn develop_annulus(params: &AnnulusParams) -> Result<DevelopmentStrip> {
    params.validate()?;
    let n = params.n;
    let nf = n as f64;
    let s = (PI / nf).sin();
    let height = strip_height(n, params.rho, params.h);
    let shear = (2.0 * PI * params.rho + PI / nf).sin();
    let bottom: Vec<Pt2> = (0..=n).map(|k| Pt2::new(2.0 * k as f64 * s, 0.0)).collect();
    let top: Vec<Pt2> = (0..=n)
        .map(|k| Pt2::new(shear + (2.0 * k as f64 - 1.0) * s, height))
        .collect();
    Ok(DevelopmentStrip {
        width: 2.0 * nf * s,
        height,
        top_offset: shear - s,
        bottom,
        top,
    })
}

/// One slab of a cut annulus together with its measured development.
#[derive(Debug, Clone)]
pub struct AnnulusSlab {
    pub mesh: TriMesh,
    pub dev: DevelopmentStrip,
    /// Band chain used to develop the slab (loops back to its first face).
    pub chain: Vec<usize>,
}

/// Split the quad `(a, b, c, d)` (cyclic order) along its shorter diagonal.
/// Tie-break: the diagonal whose lowest vertex index is smallest.
/// Returns two triangles preserving the cyclic orientation.
pub(crate) fn split_quad(vertices: &[Pt3], quad: [usize; 4], tol: &Tolerances) -> [[usize; 3]; 2] {
    let [a, b, c, d] = quad;
    let diag_ac = (vertices[c] - vertices[a]).norm();
    let diag_bd = (vertices[d] - vertices[b]).norm();
    let use_ac = if (diag_ac - diag_bd).abs() <= tol.geom {
        a.min(c) < b.min(d)
    } else {
        diag_ac < diag_bd
    };
    if use_ac {
        [[a, b, c], [a, c, d]]
    } else {
        [[a, b, d], [b, c, d]]
    }
}

fn face_has_edge(face: &[usize; 3], e: (usize, usize)) -> bool {
    face.contains(&e.0) && face.contains(&e.1)
}

/// Of the two triangles of a split quad, walk from the one containing
/// `from` to the one containing `to` (possibly the same triangle).
pub(crate) fn through_quad(
    faces: &[[usize; 3]],
    pair: [usize; 2],
    from: (usize, usize),
    to: (usize, usize),
) -> Vec<usize> {
    let (t0, t1) = (pair[0], pair[1]);
    let entry = if face_has_edge(&faces[t0], from) {
        t0
    } else {
        t1
    };
    let exit = if face_has_edge(&faces[t0], to) {
        t0
    } else {
        t1
    };
    debug_assert!(face_has_edge(&faces[entry], from));
    debug_assert!(face_has_edge(&faces[exit], to));
    if entry == exit {
        vec![entry]
    } else {
        vec![entry, exit]
    }
}

/// Measure a developed band: rigidly move the unrolled chain so the bottom
/// boundary lies on `y = 0` running in `+x`, and read off width, height and
/// offset. `bottom_ids`/`top_ids` list the boundary vertices left to right
/// (without the wrap duplicates, which are appended from the loop period).
pub(crate) fn measure_band(
    mesh: &TriMesh,
    chain: &[usize],
    seed: (usize, usize),
    bottom_ids: &[usize],
    top_ids: &[usize],
    tol: &Tolerances,
) -> Result<DevelopmentStrip> {
    let d = (mesh.vertices[seed.1] - mesh.vertices[seed.0]).norm();
    let placements = unroll::unroll_chain(
        mesh,
        chain,
        seed.0,
        seed.1,
        Pt2::origin(),
        Pt2::new(d, 0.0),
        1.0,
    )?;

    // First-occurrence planar image of every vertex in the chain.
    let mut first: std::collections::HashMap<usize, Pt2> = std::collections::HashMap::new();
    for (w, &f) in chain.iter().enumerate() {
        for (i, &v) in mesh.faces[f].iter().enumerate() {
            first.entry(v).or_insert(placements[w][i]);
        }
    }
    let last = chain.len() - 1;
    assert_eq!(chain[0], chain[last], "band chain must loop");
    let period = unroll::image_of(mesh, chain, &placements, last, chain_anchor(mesh, chain))
        - first[&chain_anchor(mesh, chain)];

    let width = period.norm();
    let u = period / width;
    let nrm = Vec2::new(-u.y, u.x);
    let origin = first[&bottom_ids[0]];
    let proj = |p: Pt2| -> Pt2 {
        let r = p - origin;
        Pt2::new(r.dot(&u), r.dot(&nrm))
    };

    let mut bottom: Vec<Pt2> = bottom_ids.iter().map(|v| proj(first[v])).collect();
    let mut top: Vec<Pt2> = top_ids.iter().map(|v| proj(first[v])).collect();
    // Flip so the top boundary has positive y.
    let top_side = top[0].y;
    if top_side < 0.0 {
        for p in bottom.iter_mut().chain(top.iter_mut()) {
            p.y = -p.y;
        }
    }
    // Straightness of the boundary lines is the flatness of the band.
    let height = top.iter().map(|p| p.y).sum::<f64>() / top.len() as f64;
    for p in &bottom {
        if p.y.abs() > 100.0 * tol.geom {
            return Err(Error::NotDevelopable {
                vertex: bottom_ids[0],
                angle_sum: p.y,
            });
        }
    }
    for p in &top {
        if (p.y - height).abs() > 100.0 * tol.geom {
            return Err(Error::NotDevelopable {
                vertex: top_ids[0],
                angle_sum: p.y,
            });
        }
    }
    // Close the boundary polylines with the wrap copies.
    bottom.push(Pt2::new(bottom[0].x + width, 0.0));
    top.push(Pt2::new(top[0].x + width, height));
    let top_offset = top[0].x - bottom[0].x;
    Ok(DevelopmentStrip {
        width,
        height,
        top_offset,
        bottom,
        top,
    })
}

/// A vertex of the first chain face, used to read the loop period.
fn chain_anchor(mesh: &TriMesh, chain: &[usize]) -> usize {
    mesh.faces[chain[0]][0]
}

/// Structured lower/upper slab of a cut annulus, shared between
/// `cut_annulus` and the torus doubling construction.
pub(crate) struct SlabLayout {
    pub faces: Vec<[usize; 3]>,
    /// Two triangle indices of the split quad for each sector `k`.
    pub quads: Vec<[usize; 2]>,
    /// Apex (or cut-corner) triangle index per sector `k`.
    pub tris: Vec<usize>,
}

/// Faces of the lower slab of one annulus. `p`, `c`, `d` map sector index
/// `k` to the vertex ids of `P_k`, the cut point on `P_k Q_k`, and the cut
/// point on `P_k Q_{k+1}`.
pub(crate) fn lower_slab_faces(
    vertices: &[Pt3],
    n: u32,
    p: &dyn Fn(u32) -> usize,
    c: &dyn Fn(u32) -> usize,
    d: &dyn Fn(u32) -> usize,
    tol: &Tolerances,
) -> SlabLayout {
    let mut faces = Vec::new();
    let mut quads = Vec::new();
    let mut tris = Vec::new();
    for k in 0..n {
        let quad = [p(k), p(k + 1), c(k + 1), d(k)];
        let [t0, t1] = split_quad(vertices, quad, tol);
        quads.push([faces.len(), faces.len() + 1]);
        faces.push(t0);
        faces.push(t1);
        tris.push(faces.len());
        faces.push([c(k), p(k), d(k)]);
    }
    SlabLayout { faces, quads, tris }
}

/// Faces of the upper slab of one annulus. `q(k)` is the vertex id of
/// `Q_k`; `c`, `d` as in [`lower_slab_faces`].
pub(crate) fn upper_slab_faces(
    vertices: &[Pt3],
    n: u32,
    q: &dyn Fn(u32) -> usize,
    c: &dyn Fn(u32) -> usize,
    d: &dyn Fn(u32) -> usize,
    tol: &Tolerances,
) -> SlabLayout {
    let mut faces = Vec::new();
    let mut quads = Vec::new();
    let mut tris = Vec::new();
    for k in 0..n {
        let quad = [q(k + 1), q(k), c(k), d(k)];
        let [t0, t1] = split_quad(vertices, quad, tol);
        quads.push([faces.len(), faces.len() + 1]);
        faces.push(t0);
        faces.push(t1);
        tris.push(faces.len());
        faces.push([c(k + 1), q(k + 1), d(k)]);
    }
    SlabLayout { faces, quads, tris }
}

/// Band chain of a lower slab: apex triangles and quads alternating around
/// the band, ending back on the first apex.
pub(crate) fn lower_slab_chain(
    layout: &SlabLayout,
    n: u32,
    p: &dyn Fn(u32) -> usize,
    c: &dyn Fn(u32) -> usize,
    d: &dyn Fn(u32) -> usize,
) -> Vec<usize> {
    let mut chain = vec![layout.tris[0]];
    for k in 0..n {
        chain.extend(through_quad(
            &layout.faces,
            layout.quads[k as usize],
            (p(k), d(k)),
            (p(k + 1), c(k + 1)),
        ));
        chain.push(layout.tris[((k + 1) % n) as usize]);
    }
    chain
}

/// Band chain of an upper slab, starting and ending on the quad triangle
/// that contains the left edge `Q_0 C_0`.
pub(crate) fn upper_slab_chain(
    layout: &SlabLayout,
    n: u32,
    q: &dyn Fn(u32) -> usize,
    c: &dyn Fn(u32) -> usize,
    d: &dyn Fn(u32) -> usize,
) -> Vec<usize> {
    let [t0, t1] = layout.quads[0];
    let start = if face_has_edge(&layout.faces[t0], (q(0), c(0))) {
        t0
    } else {
        t1
    };
    let other = if start == t0 { t1 } else { t0 };
    let mut chain = vec![start];
    if !face_has_edge(&layout.faces[start], (d(0), q(1))) {
        chain.push(other);
    }
    for k in 0..n {
        chain.push(layout.tris[k as usize]);
        let kk = (k + 1) % n;
        if kk == 0 {
            // Wrap: walk back to the start triangle.
            let entry_edge = (c(0), q(0));
            if face_has_edge(&layout.faces[start], entry_edge) {
                chain.push(start);
            } else {
                chain.push(other);
                chain.push(start);
            }
        } else {
            chain.extend(through_quad(
                &layout.faces,
                layout.quads[kk as usize],
                (q(kk), c(kk)),
                (d(kk), q(kk + 1)),
            ));
        }
    }
    chain
}

/// Cut `A_n^rho` at the plane `z = a`, returning the lower (`z` in `[0, a]`)
/// and upper (`z` in `[a, h]`) slabs with their measured developments.
pub fn cut_annulus(
    params: &AnnulusParams,
    a: f64,
    tol: &Tolerances,
) -> Result<(AnnulusSlab, AnnulusSlab)> {
    params.validate()?;
    if !(a > 0.0 && a < params.h) {
        return Err(Error::CutOutOfRange { a, h: params.h });
    }
    let n = params.n;
    let f = a / params.h;

    let pv: Vec<Pt3> = (0..n).map(|k| bottom_vertex(n, k)).collect();
    let qv: Vec<Pt3> = (0..n)
        .map(|k| top_vertex(n, params.rho, params.h, k))
        .collect();
    let cv: Vec<Pt3> = (0..n)
        .map(|k| pv[k as usize] + (qv[k as usize] - pv[k as usize]) * f)
        .collect();
    let dv: Vec<Pt3> = (0..n)
        .map(|k| pv[k as usize] + (qv[((k + 1) % n) as usize] - pv[k as usize]) * f)
        .collect();

    // Lower slab: P ring 0..n, C 0..n at n.., D 0..n at 2n..
    let nn = n as usize;
    let mut lower_vertices = pv.clone();
    lower_vertices.extend(cv.iter().cloned());
    lower_vertices.extend(dv.iter().cloned());
    let p = move |k: u32| (k % n) as usize;
    let c = move |k: u32| nn + (k % n) as usize;
    let d = move |k: u32| 2 * nn + (k % n) as usize;
    let layout = lower_slab_faces(&lower_vertices, n, &p, &c, &d, tol);
    let chain = lower_slab_chain(&layout, n, &p, &c, &d);
    let mesh = TriMesh::new(lower_vertices, layout.faces.clone());
    let bottom_ids: Vec<usize> = (0..n).map(&p).collect();
    let mut top_ids = Vec::new();
    for k in 0..n {
        top_ids.push(c(k));
        top_ids.push(d(k));
    }
    let seed = (c(0), p(0));
    let dev = measure_band(&mesh, &chain, seed, &bottom_ids, &top_ids, tol)?;
    let lower = AnnulusSlab { mesh, dev, chain };

    // Upper slab: Q ring 0..n, C at n.., D at 2n..
    let mut upper_vertices = qv.clone();
    upper_vertices.extend(cv.iter().cloned());
    upper_vertices.extend(dv.iter().cloned());
    let q = move |k: u32| (k % n) as usize;
    let layout = upper_slab_faces(&upper_vertices, n, &q, &c, &d, tol);
    let chain = upper_slab_chain(&layout, n, &q, &c, &d);
    let mesh = TriMesh::new(upper_vertices, layout.faces.clone());
    let mut bottom_ids = Vec::new();
    for k in 0..n {
        bottom_ids.push(c(k));
        bottom_ids.push(d(k));
    }
    let top_ids: Vec<usize> = (0..n).map(&q).collect();
    let seed = (q(0), c(0));
    let dev = measure_band(&mesh, &chain, seed, &bottom_ids, &top_ids, tol)?;
    let upper = AnnulusSlab { mesh, dev, chain };

    Ok((lower, upper))
}
