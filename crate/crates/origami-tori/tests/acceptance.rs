//! Acceptance gate: the eleven verification criteria, each reported with
//! a single pass/fail line. One criterion (limit-curve anchor 6a) is a
//! documented deviation: the quoted constant for the lower cycloid
//! endpoint is inconsistent with the curve formula itself, and the run
//! reports it as an expected failure rather than papering over it.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use origami_tori::annulus::{build_annulus, cut_annulus, AnnulusParams};
use origami_tori::geom::{triangles_interior_disjoint, Tolerances};
use origami_tori::moduli::{
    cycloid_left, cycloid_lower, cycloid_upper, gamma, jacobian_gamma, modulus_from_development,
    modulus_value, tangent_direction, torus_modulus,
};
use origami_tori::solver::{solve_modulus, solve_pure_imaginary, SolveRequest};
use origami_tori::torus::{assemble_torus, enumerate_pairs, pairing_valid, TorusParams};

type Check = std::result::Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn tol() -> Tolerances {
    Tolerances::default()
}

fn the_twelve_pairs() -> Vec<(f64, f64)> {
    let mut want = vec![
        (5.0, -3.0),
        (4.0, -2.0),
        (5.0, -1.0),
        (3.0, -1.0),
        (4.0, 0.0),
        (5.0, 1.0),
        (-7.0, -3.0),
        (-6.0, -2.0),
        (-5.0, -1.0),
        (-7.0, -1.0),
        (-6.0, 0.0),
        (-7.0, 1.0),
    ];
    for p in &mut want {
        *p = (p.0 / 16.0, p.1 / 16.0);
    }
    want.sort_by(|a, b| a.partial_cmp(b).unwrap());
    want
}

fn paper_tori() -> Vec<TorusParams> {
    the_twelve_pairs()
        .into_iter()
        .map(|(rho, sigma)| {
            let l = pairing_valid(8, rho, sigma).unwrap().l.unwrap();
            TorusParams::new(8, l, rho, 1.0)
        })
        .collect()
}

/// Uniform draw of valid torus parameters.
fn random_params(rng: &mut ChaCha8Rng, n_max: u32, h_range: (f64, f64)) -> TorusParams {
    loop {
        let n = rng.gen_range(5..=n_max);
        let mut l = rng.gen_range(2..=(n - 3) as i32);
        if rng.gen_bool(0.5) {
            l = -l;
        }
        let nf = n as f64;
        let (lo, hi) = if l > 0 {
            (-0.5, -l as f64 / (2.0 * nf) - 1.0 / nf)
        } else {
            ((-l) as f64 / (2.0 * nf), 0.5 - 1.0 / nf)
        };
        if hi - lo < 1e-3 {
            continue;
        }
        let rho = lo + (hi - lo) * rng.gen_range(0.05..0.95);
        let h = rng.gen_range(h_range.0..h_range.1);
        return TorusParams::new(n, l, rho, h);
    }
}

fn criterion_1_pair_enumeration() -> Check {
    let start = Instant::now();
    let got = enumerate_pairs(8, 16).map_err(|e| e.to_string())?;
    let want = the_twelve_pairs();
    if got.len() != want.len() {
        return Err(format!("expected 12 pairs, got {}", got.len()));
    }
    for (g, w) in got.iter().zip(want.iter()) {
        if (g.0 - w.0).abs() > 1e-12 || (g.1 - w.1).abs() > 1e-12 {
            return Err(format!("pair mismatch: got {g:?}, want {w:?}"));
        }
    }
    if start.elapsed().as_secs_f64() > 1.0 {
        return Err("runtime exceeded 1 s".into());
    }
    Ok(())
}

fn criterion_2_flatness() -> Check {
    for params in paper_tori() {
        let t = assemble_torus(params).map_err(|e| e.to_string())?;
        for v in 0..t.mesh.vertices.len() {
            let s = t.mesh.angle_at_vertex(v).map_err(|e| e.to_string())?;
            if (s - 2.0 * PI).abs() > 1e-9 {
                return Err(format!("{params:?}: vertex {v} angle sum {s}"));
            }
        }
    }
    Ok(())
}

/// Distance from the grid point to the nearest decision boundary of the
/// pairing conditions (twist degeneracies and interval endpoints for both
/// role assignments).
fn boundary_margin(n: u32, rho: f64, sigma: f64) -> f64 {
    let nf = n as f64;
    let mut m = f64::INFINITY;
    for t in [rho, sigma] {
        for b in [-0.5, 0.5 - 1.0 / nf, -0.5 / nf, 0.0, -1.0 / nf] {
            m = m.min((t - b).abs());
        }
    }
    let ends = |l: f64, t: f64| {
        if l > 0.0 {
            (t - (-l / (2.0 * nf) - 1.0 / nf)).abs()
        } else {
            (t - (-l) / (2.0 * nf)).abs()
        }
    };
    let l0 = ((sigma - rho) * nf).round();
    for l in [l0, l0 - nf, l0 + nf] {
        if l != 0.0 {
            m = m.min(ends(l, rho)).min(ends(-l, sigma));
        }
    }
    m
}

/// Geometric ground truth for a pairing: both annuli buildable, a ring
/// identification step in range exists, and every face of one annulus is
/// interior-disjoint from every face of the other. `None` when no
/// candidate closed surface exists at all (no step in range), since the
/// disjointness question is then moot.
fn brute_force_valid(n: u32, rho: f64, sigma: f64, tol: &Tolerances) -> Option<bool> {
    let steps = (sigma - rho) * n as f64;
    if (steps - steps.round()).abs() > 1e-9 {
        return None;
    }
    let l0 = steps.round() as i32;
    let max = (n - 3) as i32;
    if ![l0, l0 - n as i32, l0 + n as i32]
        .iter()
        .any(|l| (2..=max).contains(&l.abs()))
    {
        return None;
    }
    let inner = build_annulus(AnnulusParams::new(n, rho, 1.0)).ok()?;
    let outer = build_annulus(AnnulusParams::new(n, sigma, 1.0)).ok()?;
    for i in 0..inner.mesh.faces.len() {
        let ti = inner.mesh.face_points(i);
        for j in 0..outer.mesh.faces.len() {
            let tj = outer.mesh.face_points(j);
            if !triangles_interior_disjoint(&ti, &tj, tol).unwrap() {
                return Some(false);
            }
        }
    }
    Some(true)
}

fn criterion_3_embeddedness_oracle() -> Check {
    let start = Instant::now();
    let tol = tol();
    for n in 5..=10u32 {
        let d = 2 * n;
        let df = d as f64;
        for k1 in -(d as i32) / 2..=(d as i32 - 1) / 2 {
            for k2 in -(d as i32) / 2..=(d as i32 - 1) / 2 {
                let (rho, sigma) = (k1 as f64 / df, k2 as f64 / df);
                if boundary_margin(n, rho, sigma) < 1e-6 {
                    continue;
                }
                let Some(brute) = brute_force_valid(n, rho, sigma, &tol) else {
                    continue;
                };
                // The closed-form conditions are role-sensitive (each
                // unordered pair has one canonical description), while
                // face disjointness is symmetric in the two annuli, so
                // compare against the unordered claim.
                let claim = pairing_valid(n, rho, sigma)
                    .map_err(|e| e.to_string())?
                    .valid
                    || pairing_valid(n, sigma, rho)
                        .map_err(|e| e.to_string())?
                        .valid;
                if claim != brute {
                    return Err(format!(
                        "n = {n}, (rho, sigma) = ({rho}, {sigma}): closed form {claim} vs brute {brute}"
                    ));
                }
            }
        }
    }
    if start.elapsed().as_secs_f64() > 120.0 {
        return Err("runtime exceeded 2 min".into());
    }
    Ok(())
}

fn criterion_4_modulus_oracles() -> Check {
    let start = Instant::now();
    let tol = tol();
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut cases = paper_tori();
    for _ in 0..100 {
        cases.push(random_params(&mut rng, 14, (0.2, 3.0)));
    }
    for params in cases {
        let t = assemble_torus(params).map_err(|e| e.to_string())?;
        let dev = modulus_from_development(&t, &tol).map_err(|e| e.to_string())?;
        let closed = torus_modulus(params).map_err(|e| e.to_string())?.value;
        if (dev - closed).norm() > 1e-9 {
            return Err(format!("{params:?}: dev {dev} vs closed {closed}"));
        }
    }
    if start.elapsed().as_secs_f64() > 30.0 {
        return Err("runtime exceeded 30 s".into());
    }
    Ok(())
}

fn criterion_5_height_independence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    for _ in 0..50 {
        let p = random_params(&mut rng, 14, (0.5, 1.5));
        let re: Vec<f64> = [0.1, 1.0, 10.0]
            .iter()
            .map(|&h| modulus_value(p.n, p.l, p.rho, h).re)
            .collect();
        if (re[0] - re[1]).abs() > 1e-12 || (re[1] - re[2]).abs() > 1e-12 {
            return Err(format!("{p:?}: Re varies with h: {re:?}"));
        }
    }
    Ok(())
}

fn criterion_6_limit_curve_anchors() -> Check {
    // Anchor 6a as stated: c_theta(-theta) at theta = 1/2 equals
    // 1/2 + i/(2 pi). The curve formula gives 1/2 + i/pi instead (the
    // same corner both boundary cycloids pass through), so this anchor
    // cannot hold together with the formula; it is reported faithfully.
    let quoted = Complex64::new(0.5, 1.0 / (2.0 * PI));
    let a = cycloid_lower(0.5);
    let mut failed = Vec::new();
    if (a - quoted).norm() > 1e-12 {
        failed.push(format!(
            "6a: c_theta(-theta)|theta=1/2 = {a} per the formula, quoted constant {quoted} \
             (documented deviation: the formula value 1/2 + i/pi matches the cusp anchor 6c \
             and the region corner)"
        ));
    }
    let b = cycloid_left(-0.5);
    if (b - Complex64::new(1.0, 2.0 / PI)).norm() > 1e-12 {
        failed.push(format!("6b: c_(-2rho)(rho)|rho=-1/2 = {b}, want 1 + 2i/pi"));
    }
    let c = cycloid_upper(0.5);
    if (c - Complex64::new(0.5, 1.0 / PI)).norm() > 1e-12 {
        failed.push(format!(
            "6c: c_theta(-1/2)|theta=1/2 = {c}, want 1/2 + i/pi"
        ));
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(failed.join("; "))
    }
}

fn criterion_7_jacobian() -> Check {
    let step = 1e-6;
    for i in 1..50 {
        for j in 1..50 {
            // Interior grid of the parameter triangle -1/2 < rho < -theta/2.
            let theta = i as f64 / 50.0;
            let s = j as f64 / 50.0;
            let rho = -0.5 + s * (0.5 - theta / 2.0);
            if rho >= -theta / 2.0 - 1e-3 || rho <= -0.5 + 1e-3 {
                continue;
            }
            let drho = (gamma(rho + step, theta) - gamma(rho - step, theta)) / (2.0 * step);
            let dtheta = (gamma(rho, theta + step) - gamma(rho, theta - step)) / (2.0 * step);
            let fd = dtheta.re * drho.im - drho.re * dtheta.im;
            let closed = jacobian_gamma(rho, theta);
            if ((fd - closed) / closed.abs().max(1e-3)).abs() > 1e-5 {
                return Err(format!(
                    "(rho, theta) = ({rho}, {theta}): fd {fd} vs closed {closed}"
                ));
            }
        }
    }
    for t in [0.1, 0.25, 0.4] {
        let j = jacobian_gamma(-t, t);
        if j.abs() > 1e-12 {
            return Err(format!("jacobian at rho + theta = 0 is {j}, not 0"));
        }
    }
    Ok(())
}

fn criterion_8_tangent_geometry() -> Check {
    for theta in [0.1, 0.25, 0.4] {
        let dir = tangent_direction(theta).map_err(|e| e.to_string())?;
        // Chord direction constant along the segment.
        let base = gamma(-0.5 + 1e-6, theta);
        for k in 1..20 {
            let rho = -0.5 + k as f64 / 20.0 * (0.5 - theta / 2.0 - 2e-6);
            let chord = gamma(rho, theta) - base;
            let cross = dir.re * chord.im - dir.im * chord.re;
            if chord.norm() > 1e-9 && cross.abs() / chord.norm() > 1e-9 {
                return Err(format!("theta = {theta}: chord direction varies"));
            }
        }
        // The segment's line is tangent to the cycloid c_t(-t) at t = theta.
        let project = |z: Complex64| {
            let w = z - base;
            // Signed distance from the line through `base` with direction `dir`.
            dir.re * w.im - dir.im * w.re
        };
        let mut best = (f64::INFINITY, 0.0);
        let mut t = 1e-4;
        while t < 1.0 {
            let d = project(cycloid_lower(t)).abs();
            if d < best.0 {
                best = (d, t);
            }
            t += 1e-4;
        }
        if best.0 > 1e-6 {
            return Err(format!(
                "theta = {theta}: min line-curve distance {}",
                best.0
            ));
        }
        if (best.1 - theta).abs() > 1e-3 {
            return Err(format!(
                "theta = {theta}: tangency attained at t = {} instead",
                best.1
            ));
        }
    }
    Ok(())
}

fn criterion_9_solver_coverage() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(91);
    for i in 0..50 {
        let re: f64 = rng.gen_range(0.02..0.48);
        let im = (1.0 - re * re).sqrt() + rng.gen_range(0.0..1.0);
        let mut req = SolveRequest::new(Complex64::new(re, im));
        req.n_max = 400;
        let res = solve_modulus(&req).map_err(|e| format!("target {re}+{im}i: {e}"))?;
        if res.residual > 1e-9 {
            return Err(format!("target {re}+{im}i: residual {}", res.residual));
        }
        let _ = i;
    }
    if start.elapsed().as_secs_f64() > 300.0 {
        return Err("runtime exceeded 5 min".into());
    }
    Ok(())
}

fn criterion_10_pure_imaginary() -> Check {
    let start = Instant::now();
    for y in [0.2, 0.432037, 1.0, 3f64.sqrt(), 10.0] {
        let res = solve_pure_imaginary(y, None).map_err(|e| e.to_string())?;
        if res.achieved.re.abs() > 1e-9 {
            return Err(format!("y = {y}: Re(achieved) = {}", res.achieved.re));
        }
        if (res.achieved.im - y).abs() > 1e-9 {
            return Err(format!("y = {y}: Im(achieved) = {}", res.achieved.im));
        }
    }
    // The a = h/2 cut reproduces the base torus's imaginary part.
    let base = TorusParams::new(8, 2, -3.0 / 8.0, 1.0);
    let y = torus_modulus(base).map_err(|e| e.to_string())?.value.im;
    let res = solve_pure_imaginary(y, Some(base)).map_err(|e| e.to_string())?;
    let origami_tori::solver::Solution::Double(spec) = res.solution else {
        return Err("expected a doubled solution".into());
    };
    if (spec.a / spec.base.h - 0.5).abs() > 1e-12 || (res.achieved.im - y).abs() > 1e-9 {
        return Err(format!("half-cut case: a/h = {}", spec.a / spec.base.h));
    }
    if start.elapsed().as_secs_f64() > 10.0 {
        return Err("runtime exceeded 10 s".into());
    }
    Ok(())
}

fn criterion_11_cut_heights() -> Check {
    let tol = tol();
    let mut rng = ChaCha8Rng::seed_from_u64(111);
    for _ in 0..25 {
        let n = rng.gen_range(3..=12u32);
        let nf = n as f64;
        let rho = rng.gen_range(-0.499..(0.5 - 1.0 / nf - 1e-3));
        let h = rng.gen_range(0.2..3.0);
        let params = AnnulusParams::new(n, rho, h);
        if !params.is_embeddable() {
            continue;
        }
        let a = h * rng.gen_range(0.05..0.95);
        let (lower, upper) = cut_annulus(&params, a, &tol).map_err(|e| e.to_string())?;
        let ratio = lower.dev.height / upper.dev.height;
        let want = a / (h - a);
        if (ratio - want).abs() > 1e-9 * want.max(1.0) {
            return Err(format!(
                "(n, rho, h, a) = ({n}, {rho}, {h}, {a}): ratio {ratio} vs {want}"
            ));
        }
    }
    Ok(())
}

#[test]
fn acceptance() {
    let criteria: Vec<Criterion> = vec![
        ("1 pair enumeration", criterion_1_pair_enumeration),
        ("2 flatness", criterion_2_flatness),
        (
            "3 embeddedness oracle agreement",
            criterion_3_embeddedness_oracle,
        ),
        ("4 modulus oracle equivalence", criterion_4_modulus_oracles),
        (
            "5 height-independence of Re",
            criterion_5_height_independence,
        ),
        ("6 limit-curve anchors", criterion_6_limit_curve_anchors),
        ("7 jacobian check", criterion_7_jacobian),
        ("8 tangent/cycloid geometry", criterion_8_tangent_geometry),
        ("9 solver coverage", criterion_9_solver_coverage),
        ("10 pure-imaginary realization", criterion_10_pure_imaginary),
        ("11 cut height ratio", criterion_11_cut_heights),
    ];
    // Criterion 6 contains one anchor whose quoted constant contradicts
    // the curve formula; its failure is expected and documented.
    let expected_failures = ["6 limit-curve anchors"];

    let mut unexpected = Vec::new();
    for (name, run) in criteria {
        match run() {
            Ok(()) => println!("criterion {name}: PASS"),
            Err(msg) => {
                if expected_failures.contains(&name) {
                    println!("criterion {name}: FAIL (expected, documented) — {msg}");
                } else {
                    println!("criterion {name}: FAIL — {msg}");
                    unexpected.push(name);
                }
            }
        }
    }
    assert!(
        unexpected.is_empty(),
        "unexpected criterion failures: {unexpected:?}"
    );
}
