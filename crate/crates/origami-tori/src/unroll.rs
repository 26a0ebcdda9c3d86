//! Face-by-face development (unrolling) of triangle strips into the plane.
//!
//! A chain is an ordered list of face indices in which consecutive faces
//! share an edge. The first face is pinned by placing two of its vertices;
//! every following face contributes exactly one new vertex, placed from its
//! 3-space edge lengths on the side opposite the previous face. Chains may
//! revisit a face (a loop around the surface); each entry gets its own
//! planar placement, which is what makes period vectors readable.

use nalgebra::{Point2, Vector2};

use crate::geom::TriMesh;
use crate::{Error, Result};

pub type Pt2 = Point2<f64>;
pub type Vec2 = Vector2<f64>;

/// Planar placement of one chain entry, aligned with the face's vertex order.
pub type FacePlacement = [Pt2; 3];

fn rot90(v: Vec2) -> Vec2 {
    Vec2::new(-v.y, v.x)
}

fn cross2(a: Vec2, b: Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Place the third vertex of a triangle given the planar images of two
/// vertices and the 3-space distances from each to the third. `side > 0`
/// puts it to the left of the directed edge `a -> b`.
fn place_third(a: Pt2, b: Pt2, la: f64, lb: f64, side: f64) -> Pt2 {
    let ab = b - a;
    let d = ab.norm();
    let u = ab / d;
    let x = (d * d + la * la - lb * lb) / (2.0 * d);
    let y2 = (la * la - x * x).max(0.0);
    let y = y2.sqrt();
    a + u * x + rot90(u) * (y * side.signum())
}

/// Unroll `chain` into the plane. The seed pins vertices `(v0, v1)` of the
/// first face at `p0`, `p1`; the first face's third vertex goes to the left
/// of `p0 -> p1` when `first_side > 0`.
pub fn unroll_chain(
    mesh: &TriMesh,
    chain: &[usize],
    v0: usize,
    v1: usize,
    p0: Pt2,
    p1: Pt2,
    first_side: f64,
) -> Result<Vec<FacePlacement>> {
    assert!(!chain.is_empty(), "empty chain");
    let mut out: Vec<FacePlacement> = Vec::with_capacity(chain.len());

    // First face.
    let f0 = mesh.faces[chain[0]];
    let i0 = f0
        .iter()
        .position(|&v| v == v0)
        .expect("seed vertex v0 not in first chain face");
    let i1 = f0
        .iter()
        .position(|&v| v == v1)
        .expect("seed vertex v1 not in first chain face");
    let i2 = 3 - i0 - i1;
    let la = (mesh.vertices[f0[i2]] - mesh.vertices[v0]).norm();
    let lb = (mesh.vertices[f0[i2]] - mesh.vertices[v1]).norm();
    let p2 = place_third(p0, p1, la, lb, first_side);
    let mut placement = [Pt2::origin(); 3];
    placement[i0] = p0;
    placement[i1] = p1;
    placement[i2] = p2;
    out.push(placement);

    for w in 1..chain.len() {
        let prev_face = mesh.faces[chain[w - 1]];
        let prev_pl = out[w - 1];
        let face = mesh.faces[chain[w]];

        // Shared edge: the two vertex ids common to both faces.
        let shared: Vec<usize> = face
            .iter()
            .copied()
            .filter(|v| prev_face.contains(v))
            .collect();
        if shared.len() != 2 {
            return Err(Error::InvalidPairing(format!(
                "chain step {w}: faces {} and {} share {} vertices, need 2",
                chain[w - 1],
                chain[w],
                shared.len()
            )));
        }
        let (sa, sb) = (shared[0], shared[1]);
        let new_v = face
            .iter()
            .copied()
            .find(|v| *v != sa && *v != sb)
            .expect("degenerate face in chain");
        let pa = prev_pl[prev_face.iter().position(|&v| v == sa).unwrap()];
        let pb = prev_pl[prev_face.iter().position(|&v| v == sb).unwrap()];
        let prev_third = prev_face
            .iter()
            .copied()
            .find(|v| *v != sa && *v != sb)
            .unwrap();
        let pt = prev_pl[prev_face.iter().position(|&v| v == prev_third).unwrap()];

        let la = (mesh.vertices[new_v] - mesh.vertices[sa]).norm();
        let lb = (mesh.vertices[new_v] - mesh.vertices[sb]).norm();
        // Opposite side from the previous face's remaining vertex.
        let side = -cross2(pb - pa, pt - pa).signum();
        let pn = place_third(pa, pb, la, lb, side);

        let mut pl = [Pt2::origin(); 3];
        for (i, &v) in face.iter().enumerate() {
            pl[i] = if v == sa {
                pa
            } else if v == sb {
                pb
            } else {
                pn
            };
        }
        out.push(pl);
    }
    Ok(out)
}

/// Image of `vertex` in chain entry `idx`.
pub fn image_of(
    mesh: &TriMesh,
    chain: &[usize],
    placements: &[FacePlacement],
    idx: usize,
    vertex: usize,
) -> Pt2 {
    let face = mesh.faces[chain[idx]];
    let i = face
        .iter()
        .position(|&v| v == vertex)
        .expect("vertex not in chain face");
    placements[idx][i]
}

/// Unroll a loop chain whose last entry repeats the first face, and return
/// the translation carrying the initial placement of `v0` to the final one.
/// With the seed at the origin this is the period vector of the loop.
pub fn loop_period(
    mesh: &TriMesh,
    chain: &[usize],
    v0: usize,
    v1: usize,
    first_side: f64,
) -> Result<Vec2> {
    let d = (mesh.vertices[v1] - mesh.vertices[v0]).norm();
    let placements = unroll_chain(
        mesh,
        chain,
        v0,
        v1,
        Pt2::origin(),
        Pt2::new(d, 0.0),
        first_side,
    )?;
    let last = chain.len() - 1;
    assert_eq!(
        chain[last], chain[0],
        "loop chain must end on its first face"
    );
    let end = image_of(mesh, chain, &placements, last, v0);
    Ok(end - Pt2::origin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Pt3;

    #[test]
    fn unrolls_two_coplanar_triangles_flat() {
        // Unit square split along the diagonal; unrolling must reproduce it.
        let mesh = TriMesh::new(
            vec![
                Pt3::new(0.0, 0.0, 0.0),
                Pt3::new(1.0, 0.0, 0.0),
                Pt3::new(1.0, 1.0, 0.0),
                Pt3::new(0.0, 1.0, 0.0),
            ],
            vec![[0, 1, 2], [0, 2, 3]],
        );
        let pl =
            unroll_chain(&mesh, &[0, 1], 0, 1, Pt2::origin(), Pt2::new(1.0, 0.0), 1.0).unwrap();
        let v3 = pl[1][2];
        assert!((v3 - Pt2::new(0.0, 1.0)).norm() < 1e-12, "v3 = {v3:?}");
    }

    #[test]
    fn unrolling_preserves_edge_lengths() {
        // A folded strip of three triangles out of plane.
        let mesh = TriMesh::new(
            vec![
                Pt3::new(0.0, 0.0, 0.0),
                Pt3::new(1.0, 0.0, 0.0),
                Pt3::new(1.3, 0.8, 0.4),
                Pt3::new(0.2, 1.1, 0.7),
                Pt3::new(1.9, 1.4, 0.2),
            ],
            vec![[0, 1, 2], [0, 2, 3], [2, 4, 3]],
        );
        let chain = [0usize, 1, 2];
        let pl = unroll_chain(&mesh, &chain, 0, 1, Pt2::origin(), Pt2::new(1.0, 0.0), 1.0).unwrap();
        for (w, &f) in chain.iter().enumerate() {
            let face = mesh.faces[f];
            for i in 0..3 {
                let j = (i + 1) % 3;
                let d3 = (mesh.vertices[face[i]] - mesh.vertices[face[j]]).norm();
                let d2 = (pl[w][i] - pl[w][j]).norm();
                assert!((d3 - d2).abs() < 1e-12);
            }
        }
    }
}
