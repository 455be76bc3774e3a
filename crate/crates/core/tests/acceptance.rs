//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 on any failure.

use std::f64::consts::PI;
use std::sync::Arc;
use std::time::{Duration, Instant};

use hlsext_core::closed_forms::{
    annulus_c2_exact, annulus_c2_slope, bubble_boundary_norm, bubble_boundary_tail, bubble_g,
    critical_exponent, isoperimetric_ball, sharp_constant_ball, theta2_ball, BubbleParams,
};
use hlsext_core::extension::{integrate_field_estimated, FieldSymmetry, Provenance};
use hlsext_core::geometry::unit_ball_volume;
use hlsext_core::solver::{default_init, ExtremalProblem};
use hlsext_core::*;

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// A fixed unit direction with every coordinate nonzero.
fn direction(n: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..n).map(|k| 1.0 + 0.37 * k as f64).collect();
    let s = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / s).collect()
}

fn single_layer_ball() -> Outcome {
    let mut worst = 0.0f64;
    for n in 3..=8 {
        let f = BoundaryFunction::constant(DomainSpec::ball(n).map_err(err)?, &[1.0]).map_err(err)?;
        let want = n as f64 * unit_ball_volume(n).map_err(err)?;
        for s in [0.0, 0.25, 0.5, 0.75, 0.95] {
            let x: Vec<f64> = direction(n).iter().map(|v| v * s).collect();
            let got = extend_riesz(&f, 2.0, &x).map_err(err)?;
            worst = worst.max(rel(got, want));
            ensure(rel(got, want) <= 1e-10, || format!("n={n} |x|={s}: {got} vs {want}"))?;
        }
    }
    Ok(format!("max rel err {worst:.2e}"))
}

fn single_layer_exterior() -> Outcome {
    let mut worst = 0.0f64;
    for n in 3..=8 {
        let area = n as f64 * unit_ball_volume(n).map_err(err)?;
        for r in [0.1, 0.2, 0.5] {
            // data 0 on the outer sphere and 1 on the inner sphere of radius r
            let f = BoundaryFunction::constant(DomainSpec::annulus(n, r).map_err(err)?, &[0.0, 1.0]).map_err(err)?;
            for s in [0.6, 0.8, 0.95] {
                let x: Vec<f64> = direction(n).iter().map(|v| v * s).collect();
                let got = extend_riesz(&f, 2.0, &x).map_err(err)?;
                let want = area * r.powi(n as i32 - 1) / s.powi(n as i32 - 2);
                worst = worst.max(rel(got, want));
                ensure(rel(got, want) <= 1e-10, || format!("n={n} r={r} |x|={s}: {got} vs {want}"))?;
            }
        }
    }
    Ok(format!("max rel err {worst:.2e}"))
}

fn sharp_ball_constant() -> Outcome {
    let mut worst = 0.0f64;
    let mut n3 = 0.0;
    for n in 3..=8 {
        let f = BoundaryFunction::constant(DomainSpec::ball(n).map_err(err)?, &[1.0]).map_err(err)?;
        let got = rayleigh_j2(&f).map_err(err)?.quotient;
        let nf = n as f64;
        let w = unit_ball_volume(n).map_err(err)?;
        let want = nf.powf((nf - 2.0) / (2.0 * (nf - 1.0))) * w.powf(1.0 - 1.0 / nf - 1.0 / (2.0 * (nf - 1.0)));
        worst = worst.max(rel(got, want));
        ensure(rel(got, want) <= 1e-8, || format!("n={n}: {got} vs {want}"))?;
        if n == 3 {
            n3 = got;
        }
    }
    ensure((n3 - 2.390_473_319_878).abs() < 1e-8, || format!("n=3 value {n3}"))?;
    Ok(format!("J2(1) n=3 = {n3:.10}, max rel err {worst:.2e}"))
}

fn annulus_c2_sweep() -> Outcome {
    let n = 3;
    let ball = c2_functional(&DomainSpec::ball(n).map_err(err)?).map_err(err)?;
    ensure(rel(ball.quotient, sharp_constant_ball(n).map_err(err)?) <= 1e-10, || {
        format!("ball value {}", ball.quotient)
    })?;
    let mut worst = 0.0f64;
    let mut min_ratio = f64::INFINITY;
    for k in 1..=40 {
        let r = 0.3 * k as f64 / 40.0;
        let rep = c2_functional(&DomainSpec::annulus(n, r).map_err(err)?).map_err(err)?;
        let exact = annulus_c2_exact(r, n).map_err(err)?;
        worst = worst.max(rel(rep.quotient, exact));
        ensure(rel(rep.quotient, exact) <= 1e-8, || format!("r={r}: {} vs exact {exact}", rep.quotient))?;
        let margin = rep.quotient - ball.quotient;
        let error = rep.error_estimate + ball.error_estimate;
        min_ratio = min_ratio.min(margin / error);
        ensure(margin > 3.0 * error && rep.verdict == Verdict::ExceedsBall, || {
            format!("r={r}: margin {margin:.3e} vs error {error:.3e}")
        })?;
    }
    // slope of C2(A_r)/C2(B_1) - 1 in r^{n-1}, extrapolated linearly in r
    let slope_at = |r: f64| -> std::result::Result<f64, String> {
        let v = c2_functional(&DomainSpec::annulus(n, r).map_err(err)?).map_err(err)?.quotient;
        Ok((v / ball.quotient - 1.0) / r.powi(n as i32 - 1))
    };
    let (r1, r2) = (1e-2, 1e-3);
    let (s1, s2) = (slope_at(r1)?, slope_at(r2)?);
    let slope = s2 + (s2 - s1) * r2 / (r1 - r2);
    let want = annulus_c2_slope(n);
    ensure(rel(slope, want) <= 0.01, || format!("slope {slope} vs {want}"))?;
    Ok(format!(
        "40/40 ExceedsBall, min margin/error {min_ratio:.1e}, max rel err {worst:.2e}, slope {slope:.6} (want {want})"
    ))
}

fn poisson_surrogate() -> Outcome {
    let n = 3;
    let d = DomainSpec::annulus(n, 0.05).map_err(err)?;
    let best = optimize_two_level(&d, TwoLevelObjective::PoissonSurrogate, (1.01, 10.0), 16, &VolumeOptions::default())
        .map_err(err)?;
    let theta = theta2_ball(n).map_err(err)?;
    let rep = &best.report;
    ensure(rep.quotient - theta > 3.0 * rep.error_estimate && rep.verdict == Verdict::ExceedsBall, || {
        format!("surrogate {} vs {theta} (err {:.2e})", rep.quotient, rep.error_estimate)
    })?;
    let iso = isoperimetric_conformal(&BoundaryFunction::two_level(d, best.a).map_err(err)?).map_err(err)?;
    let iso_ball = isoperimetric_ball(n).map_err(err)?;
    ensure(iso > iso_ball && iso > 0.45474, || format!("isoperimetric {iso} vs {iso_ball}"))?;
    Ok(format!(
        "a* = {:.5}, surrogate {:.8} > {theta:.8} (margin {:.2e}, err {:.1e}), isoperimetric {iso:.8}",
        best.a, rep.quotient, rep.margin, rep.error_estimate
    ))
}

fn bubble_identity() -> Outcome {
    let p = BubbleParams::new(1.0, 3).map_err(err)?;
    let window = DomainSpec::half_space_window(3, 1e4).map_err(err)?;
    let f = BoundaryFunction::radial(window, move |t, _| p.f_radial(t)).map_err(err)?;
    let mut ratios = Vec::new();
    for k in 0..20 {
        // spread over |x| ≤ 5 in the upper half space
        let s = 0.2 + 4.8 * k as f64 / 19.0;
        let theta = 0.05 + 1.45 * ((k as f64 * 0.618_033_988_75).fract());
        let phi = 2.0 * PI * ((k as f64 * 0.414_213_562_37).fract());
        let x = [s * theta.sin() * phi.cos(), s * theta.sin() * phi.sin(), s * theta.cos()];
        let v = extend_riesz(&f, 2.0, &x).map_err(err)?;
        ratios.push(v / bubble_g(&p, &x).map_err(err)?.powf(0.2));
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let spread = ratios.iter().map(|r| rel(*r, mean)).fold(0.0, f64::max);
    ensure(spread <= 1e-4, || format!("ratio spread {spread:.2e}"))?;
    let mut axis = 0.0f64;
    for xn in [0.05, 0.3, 1.0, 2.5, 5.0] {
        let v = extend_riesz(&f, 2.0, &[0.0, 0.0, xn]).map_err(err)?;
        axis = axis.max(rel(v * (1.0 + xn), 2.0 * PI));
    }
    ensure(axis <= 1e-4, || format!("axis deviation {axis:.2e}"))?;
    Ok(format!("ratio {mean:.8} spread {spread:.1e}, axis vs 2π {axis:.1e}"))
}

fn epsilon_invariance() -> Outcome {
    let norms: Vec<f64> = [0.1, 1.0, 10.0]
        .iter()
        .map(|e| bubble_boundary_norm(&BubbleParams::new(*e, 3).unwrap()))
        .collect::<hlsext_core::Result<_>>()
        .map_err(err)?;
    let spread = norms.iter().map(|v| rel(*v, norms[1])).fold(0.0, f64::max);
    ensure(spread <= 1e-10, || format!("norms {norms:?}"))?;
    Ok(format!("norm {:.12}, spread {spread:.1e}", norms[1]))
}

fn tail_scaling() -> Outcome {
    let p = BubbleParams::new(1.0, 3).map_err(err)?;
    let pts: Vec<(f64, f64)> = [1e2f64, 1e3, 1e4]
        .iter()
        .map(|r: &f64| Ok((r.ln(), bubble_boundary_tail(&p, *r)?.ln())))
        .collect::<hlsext_core::Result<_>>()
        .map_err(err)?;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / 3.0;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / 3.0;
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    ensure(rel(slope, -2.0) <= 0.02, || format!("slope {slope}"))?;
    Ok(format!("slope {slope:.6}"))
}

fn monotone(history: &[f64]) -> bool {
    history.windows(2).all(|w| w[1] >= w[0] - 1e-12 * w[0].abs())
}

fn solver_properties() -> Outcome {
    let grid = BoundaryGrid::default();
    // constants are fixed points on the ball
    let mut fixed = 0.0f64;
    for n in [3usize, 4, 5] {
        let ball = DomainSpec::ball(n).map_err(err)?;
        for q in [3.0, 4.0, 5.0, 5.9].into_iter().filter(|q| *q < critical_exponent(n)) {
            let prob = ExtremalProblem::new(&ball, q, &grid).map_err(err)?;
            let f = prob.normalize(&[vec![1.0; grid.nodes_per_sphere]]).map_err(err)?;
            let next = prob.step(&f).map_err(err)?;
            let dev = f[0].iter().zip(&next[0]).map(|(a, b)| (a - b).abs() / a).fold(0.0, f64::max);
            fixed = fixed.max(dev);
            ensure(dev <= 1e-12, || format!("n={n} q={q}: deviation {dev:.2e}"))?;
        }
    }

    let mut runs = 0;
    let mut check = |r: &SolverReport| -> std::result::Result<(), String> {
        runs += 1;
        ensure(monotone(&r.quotient_history), || format!("non-monotone history at q={}", r.q))?;
        ensure((r.boundary_norm - 1.0).abs() < 1e-12, || format!("boundary norm {}", r.boundary_norm))?;
        if let Some(b) = r.holder_bound {
            ensure(r.quotient <= b * (1.0 + 1e-12), || format!("quotient {} above bound {b}", r.quotient))?;
        }
        Ok(())
    };

    // random start on the ball
    let ball = DomainSpec::ball(3).map_err(err)?;
    let basis = Arc::new(ZonalBasis::new(3, grid.nodes_per_sphere).map_err(err)?);
    for seed in [1u64, 2, 3] {
        let init = BoundaryFunction::zonal(ZonalProfile::random_positive(ball, basis.clone(), seed).map_err(err)?);
        let r = solve_subcritical(&ball, &SolverConfig::new(2.5 + seed as f64), &init).map_err(err)?;
        check(&r)?;
        ensure(r.converged, || format!("random start seed {seed} did not converge"))?;
    }

    // thin annulus near the critical exponent
    let ann = DomainSpec::annulus(3, 0.05).map_err(err)?;
    let r = solve_subcritical(&ann, &SolverConfig::new(5.9), &default_init(&ann).map_err(err)?).map_err(err)?;
    check(&r)?;
    let baseline = ball_constant_quotient(3, 5.9).map_err(err)?;
    ensure(r.converged && r.quotient > baseline, || format!("annulus {} vs ball {baseline}", r.quotient))?;
    let annulus_note = format!(
        "annulus r=0.05 q=5.9: {:.8} > ball {baseline:.8} after {} iterations",
        r.quotient, r.iterations
    );

    // continuation to just below 2*
    let mut landed = Vec::new();
    for n in [3usize, 4] {
        let crit = critical_exponent(n);
        let qs: Vec<f64> = [0.2, 0.5, 0.8, 0.95].iter().map(|t| 2.0 + t * (crit - 2.0)).chain([crit - 0.01]).collect();
        let ball = DomainSpec::ball(n).map_err(err)?;
        let c = continuation_to_critical(&ball, &qs, &SolverConfig::new(qs[0])).map_err(err)?;
        for r in &c.reports {
            check(r)?;
        }
        let last = c.points.last().unwrap().estimate;
        let want = sharp_constant_ball(n).map_err(err)?;
        ensure(rel(last, want) <= 0.01 && !c.tentative, || format!("n={n}: landed at {last} vs {want}"))?;
        landed.push(format!("n={n} {last:.6}/{want:.6}"));
    }
    Ok(format!(
        "fixed-point dev {fixed:.1e}, {runs} monotone runs, continuation {}; {annulus_note}",
        landed.join(", ")
    ))
}

fn duality() -> Outcome {
    type Radial = fn(f64) -> f64;
    let pairs: [(usize, f64, Radial); 5] = [
        (3, 1.5, |r| (-r).exp()),
        (3, 0.7, |r| 1.0 + r * r),
        (4, 2.0, |r| r),
        (5, 1.0, |r| (2.0 * r).cos()),
        (6, 0.3, |r| 1.0 / (1.0 + r)),
    ];
    let mut worst = 0.0f64;
    for (n, c, g) in pairs {
        let ball = DomainSpec::ball(n).map_err(err)?;
        let f = BoundaryFunction::constant(ball, &[c]).map_err(err)?;
        let field = InteriorField::radial(ball, g);
        let ext = extension_field(&f, 2.0).map_err(err)?;
        let gc = field.clone();
        let prod = InteriorField::new(
            ball,
            FieldSymmetry::Radial,
            Provenance::Supplied,
            Arc::new(move |x| Ok(ext.eval(x)? * gc.eval(x)?)),
        );
        let lhs = integrate_field_estimated(&prod, &VolumeOptions::default(), |v| v).map_err(err)?.value;
        let mut pole = vec![0.0; n];
        pole[n - 1] = 1.0;
        let area = n as f64 * unit_ball_volume(n).map_err(err)?;
        let rhs = c * area * restrict_riesz(&field, 2.0, &pole).map_err(err)?;
        worst = worst.max(rel(lhs, rhs));
        ensure(rel(lhs, rhs) <= 1e-8, || format!("n={n}: {lhs} vs {rhs}"))?;
    }
    Ok(format!("5 pairs, max rel err {worst:.2e}"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("single-layer ball identity", single_layer_ball, Some(Duration::from_secs(1))),
        ("exterior single-layer identity", single_layer_exterior, Some(Duration::from_secs(1))),
        ("sharp ball constant", sharp_ball_constant, Some(Duration::from_secs(5))),
        ("annulus beats the ball (C2 sweep)", annulus_c2_sweep, Some(Duration::from_secs(30))),
        ("Poisson surrogate beats the ball", poisson_surrogate, Some(Duration::from_secs(10))),
        ("bubble identity", bubble_identity, Some(Duration::from_secs(30))),
        ("epsilon invariance", epsilon_invariance, None),
        ("tail scaling law", tail_scaling, None),
        ("solver properties", solver_properties, None),
        ("duality consistency", duality, None),
    ];
    let mut failed = 0;
    for (k, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(l)) if took > *l => Err(format!("took {took:.2?}, limit {l:?}")),
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{took:.2?}]", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{took:.2?}]", k + 1);
            }
        }
    }
    println!("acceptance: {}/{} passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
