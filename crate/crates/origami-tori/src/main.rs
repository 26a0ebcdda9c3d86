//! Command-line front end: build annuli and tori, enumerate pairings,
//! compute moduli, solve inverse problems, and emit mesh / crease-pattern
//! / atlas artifacts.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use origami_tori::annulus::{build_annulus, canonical_twist, develop_annulus, AnnulusParams};
use origami_tori::export::{
    annulus_crease_pattern, emit_atlas, emit_limit_curves, export_crease_pattern, export_mesh,
    torus_crease_pattern, write_json, MeshFormat,
};
use origami_tori::geom::Tolerances;
use origami_tori::moduli::{
    modulus_from_development, reduce_modulus, torus_development, torus_modulus,
};
use origami_tori::solver::{solve_modulus, Solution, SolveRequest};
use origami_tori::torus::{
    assemble_torus, double_torus, enumerate_pairs, verify_embedding, DoubleSpec, Half, TorusParams,
};
use origami_tori::{Error, Result};

#[derive(Parser)]
#[command(
    name = "origami-tori",
    about = "Piecewise-linear isometric embeddings of flat tori: construction, moduli, inverse design",
    version
)]
struct Cli {
    /// Geometric tolerance (also read from ORIGAMI_TORI_TOL).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Emit a machine-readable JSON report to stdout (or to --out for
    /// report-only commands).
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct MeshOut {
    /// Output mesh path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Mesh format.
    #[arg(long, value_enum, default_value = "obj")]
    format: CliFormat,
    /// Also write an SVG crease pattern here.
    #[arg(long)]
    crease: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CliFormat {
    Obj,
    Stl,
}

impl From<CliFormat> for MeshFormat {
    fn from(f: CliFormat) -> Self {
        match f {
            CliFormat::Obj => MeshFormat::Obj,
            CliFormat::Stl => MeshFormat::Stl,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build a flat annulus band and export it.
    Annulus {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        rho: f64,
        #[arg(long, default_value_t = 1.0)]
        height: f64,
        #[command(flatten)]
        mesh_out: MeshOut,
    },
    /// Assemble a paired-annuli torus and export it.
    Torus {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        l: i32,
        #[arg(long, allow_hyphen_values = true)]
        rho: f64,
        #[arg(long, default_value_t = 1.0)]
        height: f64,
        #[command(flatten)]
        mesh_out: MeshOut,
    },
    /// List the valid grid pairings (rho, sigma) of denominator --den.
    EnumeratePairs {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        den: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Modulus of a torus: closed form, development check, normalization.
    Modulus {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        l: i32,
        #[arg(long, allow_hyphen_values = true)]
        rho: f64,
        #[arg(long, default_value_t = 1.0)]
        height: f64,
    },
    /// Solve the inverse problem for a target modulus.
    Solve {
        #[arg(long, allow_hyphen_values = true)]
        re: f64,
        #[arg(long)]
        im: f64,
        #[arg(long, default_value_t = 400)]
        nmax: u32,
        #[arg(long, default_value_t = 1e-9)]
        residual: f64,
        /// Reduce the target into the fundamental domain first.
        #[arg(long)]
        allow_reduction: bool,
        /// Export the solved mesh here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "obj")]
        format: CliFormat,
    },
    /// Cut a torus at height a and double one slab.
    Double {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        l: i32,
        #[arg(long, allow_hyphen_values = true)]
        rho: f64,
        #[arg(long, default_value_t = 1.0)]
        height: f64,
        #[arg(long)]
        a: f64,
        #[arg(long, value_enum, default_value = "lower")]
        half: CliHalf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "obj")]
        format: CliFormat,
    },
    /// Tabulate moduli over a pairing grid as CSV.
    Atlas {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        den: u32,
        /// Comma-separated heights.
        #[arg(long, default_value = "1", value_delimiter = ',')]
        heights: Vec<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check closedness, flatness, and embeddedness of a torus.
    Verify {
        /// Comma-separated assignments, e.g. n=8,l=2,rho=-0.375,h=1.
        #[arg(long)]
        params: String,
    },
    /// Emit the limit-curve cycloids as a CSV polyline table.
    LimitCurves {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 512)]
        samples: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CliHalf {
    Lower,
    Upper,
}

fn tolerances(cli_tol: Option<f64>) -> Tolerances {
    let mut tol = Tolerances::default();
    if let Ok(s) = std::env::var("ORIGAMI_TORI_TOL") {
        if let Ok(v) = s.parse::<f64>() {
            tol = Tolerances::with_geom(v);
        }
    }
    if let Some(v) = cli_tol {
        tol = Tolerances::with_geom(v);
    }
    tol
}

/// Twists outside the canonical range are almost certainly caption-style
/// angles (multiples of pi); say how they were read.
fn note_twist_interpretation(raw: f64) {
    let canonical = canonical_twist(raw);
    if (raw - canonical).abs() > 1e-12 {
        eprintln!(
            "note: twist {raw} interpreted as the canonical fraction {canonical} \
             (angle-style parameters are reduced modulo 1)"
        );
    }
}

#[derive(Serialize)]
struct ModulusReport {
    n: u32,
    l: i32,
    rho: f64,
    h: f64,
    value: [f64; 2],
    normalized: [f64; 2],
    development: [f64; 2],
    agreement: f64,
}

#[derive(Serialize)]
struct VerifyReport {
    closed: bool,
    flat: bool,
    embedded: bool,
    euler_characteristic: i64,
    max_angle_defect: f64,
}

#[derive(Serialize)]
struct SolveReport {
    kind: &'static str,
    n: u32,
    l: i32,
    rho: f64,
    h: f64,
    a: Option<f64>,
    achieved: [f64; 2],
    residual: f64,
}

fn run(cli: Cli) -> Result<()> {
    let tol = tolerances(cli.tol);
    match cli.command {
        Command::Annulus {
            n,
            rho,
            height,
            mesh_out,
        } => {
            note_twist_interpretation(rho);
            let params = AnnulusParams::new(n, rho, height);
            let annulus = build_annulus(params)?;
            if let Some(path) = &mesh_out.out {
                export_mesh(&annulus.mesh, mesh_out.format.into(), path)?;
            }
            if let Some(path) = &mesh_out.crease {
                let dev = develop_annulus(&params)?;
                let cp = annulus_crease_pattern(&annulus, &dev, &tol)?;
                export_crease_pattern(&cp, path, 20.0)?;
            }
            let dev = develop_annulus(&params)?;
            if cli.json {
                #[derive(Serialize)]
                struct R {
                    n: u32,
                    rho: f64,
                    h: f64,
                    strip_width: f64,
                    strip_height: f64,
                    top_offset: f64,
                }
                let r = R {
                    n,
                    rho: params.rho,
                    h: height,
                    strip_width: dev.width,
                    strip_height: dev.height,
                    top_offset: dev.top_offset,
                };
                println!("{}", serde_json::to_string_pretty(&r).unwrap());
            } else {
                println!(
                    "annulus n={n} rho={} h={height}: strip {} x {}, top offset {}",
                    params.rho, dev.width, dev.height, dev.top_offset
                );
            }
            Ok(())
        }
        Command::Torus {
            n,
            l,
            rho,
            height,
            mesh_out,
        } => {
            note_twist_interpretation(rho);
            let params = TorusParams::new(n, l, rho, height);
            let torus = assemble_torus(params)?;
            let report = verify_embedding(&torus, &tol)?;
            if !report.ok {
                eprintln!(
                    "error: assembled faces intersect ({} pairs)",
                    report.violating_face_pairs.len()
                );
                return Err(Error::InvalidPairing("faces intersect".into()));
            }
            if let Some(path) = &mesh_out.out {
                export_mesh(&torus.mesh, mesh_out.format.into(), path)?;
            }
            if let Some(path) = &mesh_out.crease {
                let dev = torus_development(&torus)?;
                let cp = torus_crease_pattern(&torus, &dev, &tol)?;
                export_crease_pattern(&cp, path, 20.0)?;
            }
            let m = torus_modulus(params)?;
            if cli.json {
                #[derive(Serialize)]
                struct R {
                    n: u32,
                    l: i32,
                    rho: f64,
                    sigma: f64,
                    h: f64,
                    modulus: [f64; 2],
                }
                let r = R {
                    n,
                    l,
                    rho: params.rho,
                    sigma: params.sigma(),
                    h: height,
                    modulus: [m.value.re, m.value.im],
                };
                println!("{}", serde_json::to_string_pretty(&r).unwrap());
            } else {
                println!(
                    "torus n={n} l={l} rho={} sigma={}: modulus {} + {}i",
                    params.rho,
                    params.sigma(),
                    m.value.re,
                    m.value.im
                );
            }
            Ok(())
        }
        Command::EnumeratePairs { n, den, out } => {
            let pairs = enumerate_pairs(n, den)?;
            if cli.json || out.is_some() {
                let json: Vec<[f64; 2]> = pairs.iter().map(|(r, s)| [*r, *s]).collect();
                if let Some(path) = out {
                    write_json(&json, &path)?;
                }
                if cli.json {
                    println!("{}", serde_json::to_string_pretty(&json).unwrap());
                }
            } else {
                for (rho, sigma) in &pairs {
                    println!("rho={rho} sigma={sigma}");
                }
                println!("{} valid pairs", pairs.len());
            }
            Ok(())
        }
        Command::Modulus { n, l, rho, height } => {
            note_twist_interpretation(rho);
            let params = TorusParams::new(n, l, rho, height);
            let m = torus_modulus(params)?;
            let torus = assemble_torus(params)?;
            let dev = modulus_from_development(&torus, &tol)?;
            let r = ModulusReport {
                n,
                l,
                rho: params.rho,
                h: height,
                value: [m.value.re, m.value.im],
                normalized: [m.normalized.re, m.normalized.im],
                development: [dev.re, dev.im],
                agreement: (dev - m.value).norm(),
            };
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&r).unwrap());
            } else {
                println!(
                    "modulus {} + {}i (normalized {} + {}i; development agrees to {:e})",
                    r.value[0], r.value[1], r.normalized[0], r.normalized[1], r.agreement
                );
            }
            Ok(())
        }
        Command::Solve {
            re,
            im,
            nmax,
            residual,
            allow_reduction,
            out,
            format,
        } => {
            let req = SolveRequest {
                target: Complex64::new(re, im),
                n_max: nmax,
                tol: residual,
                allow_reduction,
            };
            let res = solve_modulus(&req)?;
            let (kind, params, a) = match res.solution {
                Solution::Torus(p) => ("torus", p, None),
                Solution::Double(d) => ("double", d.base, Some(d.a)),
            };
            if let Some(path) = &out {
                let mesh = match res.solution {
                    Solution::Torus(p) => assemble_torus(p)?.mesh,
                    Solution::Double(d) => double_torus(d, &tol)?.mesh,
                };
                export_mesh(&mesh, format.into(), path)?;
            }
            let r = SolveReport {
                kind,
                n: params.n,
                l: params.l,
                rho: params.rho,
                h: params.h,
                a,
                achieved: [res.achieved.re, res.achieved.im],
                residual: res.residual,
            };
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&r).unwrap());
            } else {
                println!(
                    "{kind}: n={} l={} rho={} h={}{} achieved {} + {}i (residual {:e})",
                    r.n,
                    r.l,
                    r.rho,
                    r.h,
                    a.map(|a| format!(" a={a}")).unwrap_or_default(),
                    r.achieved[0],
                    r.achieved[1],
                    r.residual
                );
            }
            Ok(())
        }
        Command::Double {
            n,
            l,
            rho,
            height,
            a,
            half,
            out,
            format,
        } => {
            note_twist_interpretation(rho);
            let spec = DoubleSpec {
                base: TorusParams::new(n, l, rho, height),
                a,
                half: match half {
                    CliHalf::Lower => Half::Lower,
                    CliHalf::Upper => Half::Upper,
                },
            };
            let doubled = double_torus(spec, &tol)?;
            let m = modulus_from_development(&doubled, &tol)?;
            if let Some(path) = &out {
                export_mesh(&doubled.mesh, format.into(), path)?;
            }
            if cli.json {
                #[derive(Serialize)]
                struct R {
                    modulus: [f64; 2],
                    faces: usize,
                }
                println!(
                    "{}",
                    serde_json::to_string_pretty(&R {
                        modulus: [m.re, m.im],
                        faces: doubled.mesh.faces.len()
                    })
                    .unwrap()
                );
            } else {
                println!(
                    "double ({} faces): modulus {} + {}i",
                    doubled.mesh.faces.len(),
                    m.re,
                    m.im
                );
            }
            Ok(())
        }
        Command::Atlas {
            n,
            den,
            heights,
            out,
        } => {
            let s = emit_atlas(n, den, &heights, &out)?;
            println!("{} rows written, {} grid tuples skipped", s.rows, s.skipped);
            Ok(())
        }
        Command::Verify { params } => {
            let p = parse_params(&params)?;
            note_twist_interpretation(p.rho);
            let torus = assemble_torus(p)?;
            let report = verify_embedding(&torus, &tol)?;
            let mut max_defect = 0.0f64;
            for v in 0..torus.mesh.vertices.len() {
                let s = torus.mesh.angle_at_vertex(v)?;
                max_defect = max_defect.max((s - 2.0 * std::f64::consts::PI).abs());
            }
            let r = VerifyReport {
                closed: torus.mesh.is_closed(),
                flat: max_defect < 1e-9,
                embedded: report.ok,
                euler_characteristic: torus.mesh.euler_characteristic(),
                max_angle_defect: max_defect,
            };
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&r).unwrap());
            } else {
                println!(
                    "closed: {}, flat: {} (max defect {:e}), embedded: {}, chi = {}",
                    r.closed, r.flat, r.max_angle_defect, r.embedded, r.euler_characteristic
                );
            }
            if r.closed && r.flat && r.embedded {
                Ok(())
            } else {
                Err(Error::InvalidPairing("verification failed".into()))
            }
        }
        Command::LimitCurves { out, samples } => {
            emit_limit_curves(&out, samples)?;
            println!("limit curves written to {}", out.display());
            // Sanity anchor for the reduction path, kept cheap.
            debug_assert!(reduce_modulus(Complex64::new(0.3, 1.2)).is_ok());
            Ok(())
        }
    }
}

/// Parse "n=8,l=2,rho=-0.375,h=1" into TorusParams.
fn parse_params(s: &str) -> Result<TorusParams> {
    let (mut n, mut l, mut rho, mut h) = (None, None, None, 1.0f64);
    for item in s.split(',') {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| Error::InvalidParameter(format!("expected key=value, got {item}")))?;
        let bad = |e: std::num::ParseFloatError| {
            Error::InvalidParameter(format!("bad value for {key}: {e}"))
        };
        match key.trim() {
            "n" => n = Some(value.trim().parse::<f64>().map_err(bad)? as u32),
            "l" => l = Some(value.trim().parse::<f64>().map_err(bad)? as i32),
            "rho" => rho = Some(value.trim().parse().map_err(bad)?),
            "h" => h = value.trim().parse().map_err(bad)?,
            other => {
                return Err(Error::InvalidParameter(format!("unknown key {other}")));
            }
        }
    }
    match (n, l, rho) {
        (Some(n), Some(l), Some(rho)) => Ok(TorusParams::new(n, l, rho, h)),
        _ => Err(Error::InvalidParameter(
            "need n=..., l=..., rho=... (h optional)".into(),
        )),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
