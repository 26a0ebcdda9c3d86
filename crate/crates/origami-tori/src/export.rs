//! File emitters: OBJ/STL meshes, SVG crease patterns, CSV atlases and
//! limit-curve tables, and JSON reports. All writes are atomic (temp file
//! plus rename) and deterministic.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::annulus::{AnnulusMesh, DevelopmentStrip};
use crate::geom::{Tolerances, TriMesh};
use crate::moduli::{cycloid_left, cycloid_lower, cycloid_upper, torus_modulus, TorusDevelopment};
use crate::torus::{enumerate_pairs, pairing_valid, TorusMesh, TorusParams};
use crate::unroll::{self, Pt2};
use crate::{Error, Result};

/// Format a float with 12 significant digits (mesh coordinates).
fn sig12(x: f64) -> String {
    format!("{x:.11e}")
}

/// Format a float with 17 significant digits (round-trips any double).
fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Write `bytes` to `path` atomically: temp file in the same directory,
/// then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    Obj,
    Stl,
}

/// Emit a triangle mesh. OBJ is ASCII with 12-significant-digit vertices
/// and 1-based faces; STL is binary with one unit normal per face.
pub fn export_mesh(mesh: &TriMesh, format: MeshFormat, path: &Path) -> Result<()> {
    match format {
        MeshFormat::Obj => {
            let mut out = String::new();
            for v in &mesh.vertices {
                writeln!(out, "v {} {} {}", sig12(v.x), sig12(v.y), sig12(v.z)).unwrap();
            }
            for f in &mesh.faces {
                writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1).unwrap();
            }
            write_atomic(path, out.as_bytes())
        }
        MeshFormat::Stl => {
            let mut out = Vec::with_capacity(84 + 50 * mesh.faces.len());
            out.extend_from_slice(&[0u8; 80]);
            out.extend_from_slice(&(mesh.faces.len() as u32).to_le_bytes());
            for f in 0..mesh.faces.len() {
                let [a, b, c] = mesh.face_points(f);
                let n = (b - a).cross(&(c - a));
                let n = if n.norm() > 0.0 { n / n.norm() } else { n };
                for v in [n.x, n.y, n.z] {
                    out.extend_from_slice(&(v as f32).to_le_bytes());
                }
                for p in [a, b, c] {
                    for v in [p.x, p.y, p.z] {
                        out.extend_from_slice(&(v as f32).to_le_bytes());
                    }
                }
                out.extend_from_slice(&0u16.to_le_bytes());
            }
            write_atomic(path, &out)
        }
    }
}

/// Parse an ASCII OBJ file written by [`export_mesh`] (vertices and
/// triangular faces only).
pub fn import_obj(path: &Path) -> Result<TriMesh> {
    let text = std::fs::read_to_string(path)?;
    let mut vertices = Vec::new();
    let mut faces = Vec::new();
    let bad = |line: &str| Error::InvalidParameter(format!("unparsable OBJ line: {line}"));
    for line in text.lines() {
        let mut it = line.split_whitespace();
        match it.next() {
            Some("v") => {
                let mut p = [0.0f64; 3];
                for c in &mut p {
                    *c = it
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| bad(line))?;
                }
                vertices.push(crate::geom::Pt3::new(p[0], p[1], p[2]));
            }
            Some("f") => {
                let mut f = [0usize; 3];
                for c in &mut f {
                    let tok = it.next().ok_or_else(|| bad(line))?;
                    let idx: usize = tok
                        .split('/')
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| bad(line))?;
                    *c = idx - 1;
                }
                faces.push(f);
            }
            _ => {}
        }
    }
    Ok(TriMesh::new(vertices, faces))
}

/// Fold class of an interior mesh edge. Convention: with face normals
/// pointing away from the enclosed solid, an edge whose dihedral angle
/// measured through the outside is below pi is a mountain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fold {
    Mountain,
    Valley,
    Flat,
}

/// Classify the fold along the edge shared by faces `f` and `g` from the
/// 3-space dihedral sign.
pub fn fold_between(mesh: &TriMesh, f: usize, g: usize, tol: &Tolerances) -> Fold {
    let [a, b, c] = mesh.face_points(f);
    let n = (b - a).cross(&(c - a));
    let [p, q, r] = mesh.face_points(g);
    let centroid = crate::geom::Pt3::new(
        (p.x + q.x + r.x) / 3.0,
        (p.y + q.y + r.y) / 3.0,
        (p.z + q.z + r.z) / 3.0,
    );
    let s = n.dot(&(centroid - a)) / n.norm();
    if s.abs() < 1e3 * tol.geom {
        Fold::Flat
    } else if s < 0.0 {
        Fold::Mountain
    } else {
        Fold::Valley
    }
}

/// A planar crease pattern: development outline(s), classified interior
/// fold segments, text annotations, and an optional fundamental-domain
/// parallelogram overlay.
#[derive(Debug, Clone)]
pub struct CreasePattern {
    pub outlines: Vec<Vec<Pt2>>,
    pub folds: Vec<(Pt2, Pt2, Fold)>,
    pub labels: Vec<(Pt2, String)>,
    pub overlay: Option<[Pt2; 4]>,
}

/// Band chain of one annulus block drawn as a single strip (no wrap):
/// `f1_0, f2_1, f1_1, ..., f2_{n-1}, f1_{n-1}, f2_0`.
fn band_strip_chain(n: usize, base: usize) -> Vec<usize> {
    let mut chain = vec![base];
    for k in 1..n {
        chain.push(base + 2 * k + 1);
        chain.push(base + 2 * k);
    }
    chain.push(base + 1);
    chain
}

/// Unroll a strip chain and classify the fold at each interior adjacency.
fn chain_folds(
    mesh: &TriMesh,
    chain: &[usize],
    side: f64,
    tol: &Tolerances,
) -> Result<Vec<(Pt2, Pt2, Fold)>> {
    let d = (mesh.vertices[1] - mesh.vertices[0]).norm();
    let pl = unroll::unroll_chain(mesh, chain, 0, 1, Pt2::origin(), Pt2::new(d, 0.0), side)?;
    let mut folds = Vec::with_capacity(chain.len() - 1);
    for w in 1..chain.len() {
        let prev = mesh.faces[chain[w - 1]];
        let shared: Vec<usize> = mesh.faces[chain[w]]
            .iter()
            .copied()
            .filter(|v| prev.contains(v))
            .collect();
        let a = unroll::image_of(mesh, chain, &pl, w, shared[0]);
        let b = unroll::image_of(mesh, chain, &pl, w, shared[1]);
        folds.push((a, b, fold_between(mesh, chain[w - 1], chain[w], tol)));
    }
    Ok(folds)
}

/// Crease pattern of a single annulus development strip.
pub fn annulus_crease_pattern(
    annulus: &AnnulusMesh,
    dev: &DevelopmentStrip,
    tol: &Tolerances,
) -> Result<CreasePattern> {
    let n = annulus.params.n as usize;
    let mut outline: Vec<Pt2> = dev.bottom.clone();
    outline.extend(dev.top.iter().rev());
    let folds = chain_folds(&annulus.mesh, &band_strip_chain(n, 0), 1.0, tol)?;
    Ok(CreasePattern {
        outlines: vec![outline],
        folds,
        labels: vec![(
            Pt2::new(0.0, -0.15 * dev.height),
            "left and right edges glue (one period shown)".into(),
        )],
        overlay: None,
    })
}

/// Crease pattern of a paired torus: the two annulus strips share the
/// bottom line; the shift label records the ring identification.
pub fn torus_crease_pattern(
    torus: &TorusMesh,
    dev: &TorusDevelopment,
    tol: &Tolerances,
) -> Result<CreasePattern> {
    let n = dev.p_hat.len() - 1;
    let mesh = &torus.mesh;

    let mut outline: Vec<Pt2> = dev.q_upper.clone();
    outline.push(dev.p_hat[n]);
    outline.extend(dev.q_lower.iter().rev());
    outline.push(dev.p_hat[0]);

    let mut folds = chain_folds(mesh, &band_strip_chain(n, 0), 1.0, tol)?;
    folds.extend(chain_folds(mesh, &band_strip_chain(n, 2 * n), -1.0, tol)?);
    for k in 0..n {
        folds.push((
            dev.p_hat[k],
            dev.p_hat[k + 1],
            fold_between(mesh, 2 * k, 2 * n + 2 * k, tol),
        ));
    }

    let overlay = Some([
        dev.q_lower[0],
        dev.q_lower[0] + dev.period_h,
        dev.q_lower[0] + dev.period_h + dev.period_v,
        dev.q_lower[0] + dev.period_v,
    ]);
    Ok(CreasePattern {
        outlines: vec![outline],
        folds,
        labels: vec![(
            dev.p_hat[0] + 0.5 * dev.period_h - Pt2::origin().coords,
            format!("ring identification shift l = {}", dev.shift),
        )],
        overlay,
    })
}

/// Emit a crease pattern as SVG 1.1 with millimeter units. `scale_mm` is
/// the number of millimeters per model unit.
pub fn export_crease_pattern(cp: &CreasePattern, path: &Path, scale_mm: f64) -> Result<()> {
    let pts = cp
        .outlines
        .iter()
        .flatten()
        .chain(cp.folds.iter().flat_map(|(a, b, _)| [a, b]));
    let (mut min_x, mut min_y, mut max_x, mut max_y) = (
        f64::INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::NEG_INFINITY,
    );
    for p in pts {
        min_x = min_x.min(p.x);
        min_y = min_y.min(p.y);
        max_x = max_x.max(p.x);
        max_y = max_y.max(p.y);
    }
    let pad = 0.1 * (max_x - min_x).max(max_y - min_y).max(1.0);
    let (min_x, min_y) = (min_x - pad, min_y - pad);
    let (w, h) = (max_x + pad - min_x, max_y + pad - min_y);
    // SVG y grows downward; flip about the band axis.
    let m = |p: &Pt2| (scale_mm * (p.x - min_x), scale_mm * (max_y + pad - p.y));

    let mut svg = String::new();
    writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{:.3}mm\" height=\"{:.3}mm\" viewBox=\"0 0 {:.3} {:.3}\" \
         data-scale=\"{scale_mm}mm per model unit\">",
        scale_mm * w,
        scale_mm * h,
        scale_mm * w,
        scale_mm * h
    )
    .unwrap();
    for outline in &cp.outlines {
        let pts: Vec<String> = outline
            .iter()
            .map(|p| {
                let (x, y) = m(p);
                format!("{x:.4},{y:.4}")
            })
            .collect();
        writeln!(
            svg,
            "  <polygon points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"0.4\"/>",
            pts.join(" ")
        )
        .unwrap();
    }
    for (a, b, fold) in &cp.folds {
        let (stroke, dash) = match fold {
            Fold::Mountain => ("red", ""),
            Fold::Valley => ("blue", ""),
            Fold::Flat => ("gray", " stroke-dasharray=\"1,1\""),
        };
        let (x1, y1) = m(a);
        let (x2, y2) = m(b);
        writeln!(
            svg,
            "  <line x1=\"{x1:.4}\" y1=\"{y1:.4}\" x2=\"{x2:.4}\" y2=\"{y2:.4}\" \
             stroke=\"{stroke}\" stroke-width=\"0.25\"{dash}/>"
        )
        .unwrap();
    }
    if let Some(quad) = &cp.overlay {
        let pts: Vec<String> = quad
            .iter()
            .map(|p| {
                let (x, y) = m(p);
                format!("{x:.4},{y:.4}")
            })
            .collect();
        writeln!(
            svg,
            "  <polygon points=\"{}\" fill=\"none\" stroke=\"red\" stroke-width=\"0.5\" \
             stroke-opacity=\"0.6\"/>",
            pts.join(" ")
        )
        .unwrap();
    }
    for (p, text) in &cp.labels {
        let (x, y) = m(p);
        writeln!(
            svg,
            "  <text x=\"{x:.4}\" y=\"{y:.4}\" font-size=\"3\" fill=\"black\">{text}</text>"
        )
        .unwrap();
    }
    writeln!(svg, "</svg>").unwrap();
    write_atomic(path, svg.as_bytes())
}

/// One atlas line: parameters plus raw and normalized modulus.
#[derive(Debug, Clone, Serialize)]
pub struct AtlasRow {
    pub n: u32,
    pub l: i32,
    pub rho: f64,
    pub h: f64,
    pub re: f64,
    pub im: f64,
    pub norm_re: f64,
    pub norm_im: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct AtlasSummary {
    pub rows: usize,
    pub skipped: usize,
}

/// Tabulate the moduli of every valid grid pairing of denominator `d` for
/// polygon order `n`, at each height. Invalid grid pairs are skipped and
/// counted. Deterministic row order: pairs lexicographically, then heights.
pub fn emit_atlas(n: u32, d: u32, heights: &[f64], path: &Path) -> Result<AtlasSummary> {
    if heights.is_empty() {
        return Err(Error::InvalidParameter("empty height list".into()));
    }
    let pairs = enumerate_pairs(n, d)?;
    let mut csv = String::from("n,l,rho,h,re,im,norm_re,norm_im\r\n");
    let mut rows = 0usize;
    for (rho, sigma) in &pairs {
        let l = pairing_valid(n, *rho, *sigma)?
            .l
            .expect("enumerated pair has a step");
        for &h in heights {
            let m = torus_modulus(TorusParams::new(n, l, *rho, h))?;
            writeln!(
                csv,
                "{n},{l},{},{},{},{},{},{}\r",
                sig17(*rho),
                sig17(h),
                sig17(m.value.re),
                sig17(m.value.im),
                sig17(m.normalized.re),
                sig17(m.normalized.im)
            )
            .unwrap();
            rows += 1;
        }
    }
    write_atomic(path, csv.as_bytes())?;
    let skipped = (d as usize * d as usize - pairs.len()) * heights.len();
    Ok(AtlasSummary { rows, skipped })
}

/// Emit the three cycloid boundary curves and the imaginary-axis segment
/// of the limit-curve picture as a CSV polyline table.
pub fn emit_limit_curves(path: &Path, samples: usize) -> Result<()> {
    let mut csv = String::from("curve,param,re,im\r\n");
    let mut emit = |name: &str, f: &dyn Fn(f64) -> num_complex::Complex64, lo: f64, hi: f64| {
        for i in 0..=samples {
            let t = lo + (hi - lo) * i as f64 / samples as f64;
            let z = f(t);
            writeln!(csv, "{name},{},{},{}\r", sig17(t), sig17(z.re), sig17(z.im)).unwrap();
        }
    };
    emit(
        "segment",
        &|t| num_complex::Complex64::new(0.0, 2.0 * t / std::f64::consts::PI),
        0.0,
        1.0,
    );
    emit("cycloid_lower", &cycloid_lower, 0.0, 1.0);
    emit("cycloid_upper", &cycloid_upper, 0.0, 1.0);
    emit("cycloid_left", &cycloid_left, -0.5, 0.0);
    write_atomic(path, csv.as_bytes())
}

/// Serialize a report as pretty JSON (doubles round-trip exactly).
pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::InvalidParameter(format!("json serialization: {e}")))?;
    write_atomic(path, format!("{text}\n").as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annulus::{build_annulus, develop_annulus, AnnulusParams};
    use crate::moduli::torus_development;
    use crate::torus::assemble_torus;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn obj_round_trip_preserves_counts_and_coordinates() {
        let dir = tempfile::tempdir().unwrap();

        let prism = build_annulus(AnnulusParams::new(4, 0.0, 1.0)).unwrap();
        let p = dir.path().join("prism.obj");
        export_mesh(&prism.mesh, MeshFormat::Obj, &p).unwrap();
        let back = import_obj(&p).unwrap();
        assert_eq!(back.vertices.len(), 8);
        assert_eq!(back.faces.len(), 8);

        let torus = assemble_torus(TorusParams::new(8, 2, -6.0 / 16.0, 1.0)).unwrap();
        let t = dir.path().join("torus.obj");
        export_mesh(&torus.mesh, MeshFormat::Obj, &t).unwrap();
        let back = import_obj(&t).unwrap();
        assert_eq!(back.vertices.len(), 16);
        assert_eq!(back.faces.len(), 32);
        for (a, b) in back.vertices.iter().zip(&torus.mesh.vertices) {
            assert!((a - b).norm() < 1e-10);
        }
        assert_eq!(back.faces, torus.mesh.faces);
        // Watertightness survives the round trip.
        assert!(back.is_closed());
        assert_eq!(back.euler_characteristic(), 0);
    }

    #[test]
    fn stl_has_fixed_layout_and_unit_normals() {
        let dir = tempfile::tempdir().unwrap();
        let torus = assemble_torus(TorusParams::new(8, 2, -6.0 / 16.0, 1.0)).unwrap();
        let p = dir.path().join("torus.stl");
        export_mesh(&torus.mesh, MeshFormat::Stl, &p).unwrap();
        let bytes = std::fs::read(&p).unwrap();
        assert_eq!(bytes.len(), 84 + 50 * 32);
        let count = u32::from_le_bytes(bytes[80..84].try_into().unwrap());
        assert_eq!(count, 32);
        for f in 0..32usize {
            let off = 84 + 50 * f;
            let g = |i: usize| {
                f32::from_le_bytes(bytes[off + 4 * i..off + 4 * i + 4].try_into().unwrap())
            };
            let n2 = g(0) * g(0) + g(1) * g(1) + g(2) * g(2);
            assert!((n2 - 1.0).abs() < 1e-5);
        }
    }

    #[test]
    fn prism_creases_are_flat_diagonals_and_uniform_verticals() {
        let tol = tol();
        let params = AnnulusParams::new(8, 0.0, 1.0);
        let a = build_annulus(params).unwrap();
        let dev = develop_annulus(&params).unwrap();
        let cp = annulus_crease_pattern(&a, &dev, &tol).unwrap();
        assert_eq!(cp.folds.len(), 2 * 8 - 1);
        // Chain alternates vertical and diagonal adjacencies; diagonals
        // split coplanar rectangle halves.
        let tags: Vec<Fold> = cp.folds.iter().map(|f| f.2).collect();
        let verticals: Vec<Fold> = tags.iter().copied().step_by(2).collect();
        let diagonals: Vec<Fold> = tags.iter().copied().skip(1).step_by(2).collect();
        assert!(diagonals.iter().all(|f| *f == Fold::Flat), "{tags:?}");
        // With outward normals the prism's vertical edges are mountains.
        assert!(verticals.iter().all(|f| *f == Fold::Mountain), "{tags:?}");
    }

    #[test]
    fn antiprism_creases_follow_the_dihedral_oracle() {
        // The antiprism twist gives a convex polyhedron: every lateral
        // edge is a mountain (the dihedral sign decides, not the visual
        // zigzag of the pattern).
        let tol = tol();
        let params = AnnulusParams::new(8, -1.0 / 16.0, 1.0);
        let a = build_annulus(params).unwrap();
        let dev = develop_annulus(&params).unwrap();
        let cp = annulus_crease_pattern(&a, &dev, &tol).unwrap();
        assert!(cp.folds.iter().all(|f| f.2 == Fold::Mountain));
    }

    #[test]
    fn pleated_annulus_creases_alternate() {
        // Beyond the antiprism twist the band pleats: fold classes
        // alternate along the strip.
        let tol = tol();
        let params = AnnulusParams::new(8, -3.0 / 8.0, 1.0);
        let a = build_annulus(params).unwrap();
        let dev = develop_annulus(&params).unwrap();
        let cp = annulus_crease_pattern(&a, &dev, &tol).unwrap();
        let tags: Vec<Fold> = cp.folds.iter().map(|f| f.2).collect();
        for w in tags.windows(2) {
            assert_ne!(w[0], w[1], "{tags:?}");
            assert_ne!(w[0], Fold::Flat);
        }
    }

    #[test]
    fn torus_pattern_counts_and_flip_convention() {
        let tol = tol();
        let torus = assemble_torus(TorusParams::new(8, 2, -6.0 / 16.0, 1.0)).unwrap();
        let dev = torus_development(&torus).unwrap();
        let cp = torus_crease_pattern(&torus, &dev, &tol).unwrap();
        let n = 8;
        assert_eq!(cp.folds.len(), 2 * (2 * n - 1) + n);
        assert!(cp.overlay.is_some());
        assert!(cp.labels.iter().any(|(_, s)| s.contains("l = 2")));
        // The outer annulus of this pair has the prism twist -1/n; its
        // flat creases are the even-offset adjacencies of the second
        // strip (walls split between f1_k and f2_{k+1}). Everything else
        // folds.
        for (i, (_, _, fold)) in cp.folds.iter().enumerate() {
            let outer_flat =
                (2 * n - 1..2 * (2 * n - 1)).contains(&i) && (i - (2 * n - 1)) % 2 == 0;
            assert_eq!(*fold == Fold::Flat, outer_flat, "fold {i}: {fold:?}");
        }

        // Reversing every face winding flips each mountain/valley tag.
        let mut flipped = torus.clone();
        for f in &mut flipped.mesh.faces {
            f.swap(1, 2);
        }
        for (f, g) in [(0usize, 1usize), (2, 3), (16, 17)] {
            let orig = fold_between(&torus.mesh, f, g, &tol);
            let flip = fold_between(&flipped.mesh, f, g, &tol);
            match orig {
                Fold::Mountain => assert_eq!(flip, Fold::Valley),
                Fold::Valley => assert_eq!(flip, Fold::Mountain),
                Fold::Flat => assert_eq!(flip, Fold::Flat),
            }
        }
    }

    #[test]
    fn svg_emission_mentions_units_and_colors() {
        let tol = tol();
        let dir = tempfile::tempdir().unwrap();
        let torus = assemble_torus(TorusParams::new(8, 2, -6.0 / 16.0, 1.0)).unwrap();
        let dev = torus_development(&torus).unwrap();
        let cp = torus_crease_pattern(&torus, &dev, &tol).unwrap();
        let p = dir.path().join("pattern.svg");
        export_crease_pattern(&cp, &p, 20.0).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert!(text.contains("mm\""));
        assert!(text.contains("data-scale"));
        assert!(text.contains("stroke=\"red\""));
        assert!(text.contains("stroke=\"blue\""));
        assert!(text.contains("shift l = 2"));
    }

    #[test]
    fn atlas_rows_and_determinism() {
        let dir = tempfile::tempdir().unwrap();
        let p1 = dir.path().join("a1.csv");
        let s = emit_atlas(8, 16, &[1.0], &p1).unwrap();
        assert_eq!(s.rows, 12);
        let text = std::fs::read_to_string(&p1).unwrap();
        assert_eq!(text.lines().count(), 13);

        let p2 = dir.path().join("a2.csv");
        emit_atlas(8, 16, &[1.0], &p2).unwrap();
        assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());

        // Height sweep: identical real part per pair across heights.
        let p3 = dir.path().join("a3.csv");
        let s = emit_atlas(8, 16, &[0.5, 1.0, 2.0], &p3).unwrap();
        assert_eq!(s.rows, 36);
        let text = std::fs::read_to_string(&p3).unwrap();
        let rows: Vec<Vec<&str>> = text
            .lines()
            .skip(1)
            .map(|l| l.split(',').collect())
            .collect();
        for chunk in rows.chunks(3) {
            let re: Vec<f64> = chunk.iter().map(|r| r[4].parse().unwrap()).collect();
            assert!((re[0] - re[1]).abs() < 1e-12 && (re[1] - re[2]).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_grid_reports_zero_rows() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("empty.csv");
        let s = emit_atlas(5, 5, &[1.0], &p).unwrap();
        assert_eq!(s.rows, 0);
        assert_eq!(s.skipped, 25);
    }

    #[test]
    fn limit_curve_table_has_all_four_curves() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("curves.csv");
        emit_limit_curves(&p, 64).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        for name in ["segment", "cycloid_lower", "cycloid_upper", "cycloid_left"] {
            assert_eq!(text.lines().filter(|l| l.starts_with(name)).count(), 65);
        }
    }
}
