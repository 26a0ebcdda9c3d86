//! Shared geometric primitives: points, indexed triangle meshes, the
//! congruence and interior-disjointness predicates, and the tolerance
//! policy used throughout the crate.

use std::collections::HashMap;

use nalgebra::{Point3, Vector3};

use crate::{Error, Result};

/// Centralized numeric tolerances. All comparisons in the crate go through
/// one of these four knobs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Vertex coincidence when welding meshes.
    pub weld: f64,
    /// Length/angle equality.
    pub geom: f64,
    /// Root finding.
    pub solver: f64,
    /// Degenerate-triangle area floor.
    pub area: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            weld: 1e-9,
            geom: 1e-9,
            solver: 1e-12,
            area: 1e-12,
        }
    }
}

impl Tolerances {
    /// Uniform scaling of the geometric tolerances, used by the CLI
    /// `--tol` flag and the `ORIGAMI_TORI_TOL` environment variable.
    pub fn with_geom(geom: f64) -> Self {
        Tolerances {
            weld: geom,
            geom,
            ..Tolerances::default()
        }
    }
}

pub type Pt3 = Point3<f64>;
pub type Vec3 = Vector3<f64>;

fn triangle_area(t: &[Pt3; 3]) -> f64 {
    (t[1] - t[0]).cross(&(t[2] - t[0])).norm() * 0.5
}

fn check_nondegenerate(t: &[Pt3; 3], tol: &Tolerances) -> Result<()> {
    if triangle_area(t) <= tol.area {
        return Err(Error::DegenerateTriangle);
    }
    Ok(())
}

/// True iff the two triangles are congruent, i.e. their sorted edge-length
/// triples agree pairwise within `tol.geom`.
pub fn triangle_congruent(t1: &[Pt3; 3], t2: &[Pt3; 3], tol: &Tolerances) -> Result<bool> {
    check_nondegenerate(t1, tol)?;
    check_nondegenerate(t2, tol)?;
    let mut e1 = edge_lengths(t1);
    let mut e2 = edge_lengths(t2);
    e1.sort_by(f64::total_cmp);
    e2.sort_by(f64::total_cmp);
    Ok(e1
        .iter()
        .zip(e2.iter())
        .all(|(a, b)| (a - b).abs() <= tol.geom))
}

fn edge_lengths(t: &[Pt3; 3]) -> [f64; 3] {
    [
        (t[1] - t[0]).norm(),
        (t[2] - t[1]).norm(),
        (t[0] - t[2]).norm(),
    ]
}

/// Interior-disjointness predicate for two triangles in 3-space.
///
/// Returns `true` when the open interiors do not meet. Contact along a
/// shared full edge, a partial edge, or a vertex counts as disjoint; this
/// matches the gluing semantics of the annulus and torus constructions.
/// Implemented as a separating-axis test where a separation of at least
/// `-tol.geom` (touching) is accepted.
pub fn triangles_interior_disjoint(t1: &[Pt3; 3], t2: &[Pt3; 3], tol: &Tolerances) -> Result<bool> {
    check_nondegenerate(t1, tol)?;
    check_nondegenerate(t2, tol)?;

    let e1 = [t1[1] - t1[0], t1[2] - t1[1], t1[0] - t1[2]];
    let e2 = [t2[1] - t2[0], t2[2] - t2[1], t2[0] - t2[2]];
    let n1 = e1[0].cross(&e1[1]);
    let n2 = e2[0].cross(&e2[1]);

    // Coplanar pair: the face-normal axis would report zero-width "touching"
    // intervals, so restrict to the 2D separating axes (edge normals).
    let n1u = n1 / n1.norm();
    let coplanar = t2.iter().all(|p| (p - t1[0]).dot(&n1u).abs() <= tol.geom)
        && t1.iter().all(|p| {
            let n2u = n2 / n2.norm();
            (p - t2[0]).dot(&n2u).abs() <= tol.geom
        });

    let mut axes: Vec<Vec3> = Vec::with_capacity(17);
    if !coplanar {
        axes.push(n1);
        axes.push(n2);
        for a in &e1 {
            for b in &e2 {
                axes.push(a.cross(b));
            }
        }
    }
    // In-plane edge normals, the complete axis set for the coplanar case.
    for a in &e1 {
        axes.push(n1.cross(a));
    }
    for b in &e2 {
        axes.push(n2.cross(b));
    }

    for axis in axes {
        let len = axis.norm();
        if len < 1e-14 {
            continue;
        }
        let axis = axis / len;
        let (min1, max1) = project(t1, &axis);
        let (min2, max2) = project(t2, &axis);
        if max1 <= min2 + tol.geom || max2 <= min1 + tol.geom {
            return Ok(true);
        }
    }
    Ok(false)
}

fn project(t: &[Pt3; 3], axis: &Vec3) -> (f64, f64) {
    let d: Vec<f64> = t.iter().map(|p| axis.dot(&p.coords)).collect();
    (
        d.iter().cloned().fold(f64::INFINITY, f64::min),
        d.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    )
}

/// Indexed triangle mesh with a derived undirected edge table.
#[derive(Debug, Clone)]
pub struct TriMesh {
    pub vertices: Vec<Pt3>,
    pub faces: Vec<[usize; 3]>,
}

impl TriMesh {
    pub fn new(vertices: Vec<Pt3>, faces: Vec<[usize; 3]>) -> Self {
        TriMesh { vertices, faces }
    }

    pub fn face_points(&self, f: usize) -> [Pt3; 3] {
        let [a, b, c] = self.faces[f];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    /// Undirected edge table: (lo, hi) vertex pair to incident face indices.
    pub fn edge_table(&self) -> HashMap<(usize, usize), Vec<usize>> {
        let mut edges: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (fi, f) in self.faces.iter().enumerate() {
            for i in 0..3 {
                let (a, b) = (f[i], f[(i + 1) % 3]);
                let key = (a.min(b), a.max(b));
                edges.entry(key).or_default().push(fi);
            }
        }
        edges
    }

    /// Edges incident to exactly one face.
    pub fn boundary_edges(&self) -> Vec<(usize, usize)> {
        self.edge_table()
            .into_iter()
            .filter(|(_, fs)| fs.len() == 1)
            .map(|(e, _)| e)
            .collect()
    }

    pub fn is_closed(&self) -> bool {
        self.edge_table().values().all(|fs| fs.len() == 2)
    }

    pub fn euler_characteristic(&self) -> i64 {
        let v = self.vertices.len() as i64;
        let e = self.edge_table().len() as i64;
        let f = self.faces.len() as i64;
        v - e + f
    }

    /// True iff every shared edge is traversed in opposite directions by
    /// its two faces, and no edge has more than two faces.
    pub fn orientation_consistent(&self) -> bool {
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        for f in &self.faces {
            for i in 0..3 {
                let e = (f[i], f[(i + 1) % 3]);
                *directed.entry(e).or_insert(0) += 1;
            }
        }
        directed
            .iter()
            .all(|(&(a, b), &cnt)| cnt == 1 && directed.get(&(b, a)).copied().unwrap_or(0) <= 1)
    }

    /// Sum of interior face angles at `vertex` over all incident faces.
    pub fn angle_at_vertex(&self, vertex: usize) -> Result<f64> {
        let mut sum = 0.0;
        let mut found = false;
        for f in &self.faces {
            if let Some(i) = f.iter().position(|&v| v == vertex) {
                found = true;
                let p = self.vertices[f[i]];
                let q = self.vertices[f[(i + 1) % 3]];
                let r = self.vertices[f[(i + 2) % 3]];
                let u = q - p;
                let v = r - p;
                let cos = u.dot(&v) / (u.norm() * v.norm());
                sum += cos.clamp(-1.0, 1.0).acos();
            }
        }
        if !found {
            return Err(Error::UnusedVertex(vertex));
        }
        Ok(sum)
    }

    /// All-pairs interior-disjointness scan. Returns the violating face
    /// pairs, empty when the mesh is free of self-intersections.
    pub fn self_intersections(&self, tol: &Tolerances) -> Result<Vec<(usize, usize)>> {
        let mut bad = Vec::new();
        for i in 0..self.faces.len() {
            let ti = self.face_points(i);
            for j in (i + 1)..self.faces.len() {
                let tj = self.face_points(j);
                if !triangles_interior_disjoint(&ti, &tj, tol)? {
                    bad.push((i, j));
                }
            }
        }
        Ok(bad)
    }
}

/// Vertex pool that welds coincident vertices at `tol.weld` while a mesh is
/// being assembled, so boundary pastes produce index identity.
pub struct VertexPool {
    vertices: Vec<Pt3>,
    grid: HashMap<(i64, i64, i64), Vec<usize>>,
    cell: f64,
}

impl VertexPool {
    pub fn new(tol: &Tolerances) -> Self {
        VertexPool {
            vertices: Vec::new(),
            grid: HashMap::new(),
            cell: tol.weld.max(1e-12) * 4.0,
        }
    }

    fn key(&self, p: &Pt3) -> (i64, i64, i64) {
        (
            (p.x / self.cell).floor() as i64,
            (p.y / self.cell).floor() as i64,
            (p.z / self.cell).floor() as i64,
        )
    }

    pub fn insert(&mut self, p: Pt3, tol: &Tolerances) -> usize {
        let (kx, ky, kz) = self.key(&p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(ids) = self.grid.get(&(kx + dx, ky + dy, kz + dz)) {
                        for &id in ids {
                            if (self.vertices[id] - p).norm() <= tol.weld {
                                return id;
                            }
                        }
                    }
                }
            }
        }
        let id = self.vertices.len();
        self.vertices.push(p);
        self.grid.entry((kx, ky, kz)).or_default().push(id);
        id
    }

    pub fn into_vertices(self) -> Vec<Pt3> {
        self.vertices
    }
}
