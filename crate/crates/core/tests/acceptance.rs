//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mtnav::control::{compute_command, pixel_error, ControllerGains, PixelError};
use mtnav::geometry::{image_center, project, unproject, FrameSpec, GroundPoint, PixelPoint, Pose};
use mtnav::harness::{self, path_spread, sample_stats, Campaign, RunOptions, Scenario};
use mtnav::imagination::{random_trajectory, reverse, Termination};
use mtnav::mission::{self, audit_transitions, FsmState, MissionKind, MissionSpec};
use mtnav::perception::{detect, render, ColorClass, Marker};
use mtnav::sim::{Carrier, NoiseModel, PerceptionMode, SimConfig, WorldState};

type Check = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn stats_reproduction() -> Check {
    let values: Vec<f64> = std::iter::repeat_n(1.0, 14)
        .chain(std::iter::repeat_n(0.0, 6))
        .collect();
    let s = sample_stats(&values).map_err(|e| e.to_string())?;
    ensure((s.mean - 0.7).abs() < 5e-5, || format!("mean {}", s.mean))?;
    ensure((s.std_dev - 0.4702).abs() < 5e-5, || format!("std_dev {}", s.std_dev))?;
    Ok(format!("mean {:.4}, std_dev {:.4}", s.mean, s.std_dev))
}

fn controller_suite() -> Check {
    let g = ControllerGains::default();
    let c = PixelPoint::new(320.0, 180.0);
    ensure(
        pixel_error(PixelPoint::new(400.0, 200.0), c) == PixelError::new(80.0, 20.0),
        || "pixel_error (400,200)".into(),
    )?;
    ensure(pixel_error(c, c) == PixelError::new(0.0, 0.0), || {
        "pixel_error identity".into()
    })?;
    ensure(
        pixel_error(PixelPoint::new(320.0, 80.0), c) == PixelError::new(0.0, -100.0),
        || "pixel_error forward".into(),
    )?;

    let zero = compute_command(PixelError::new(0.0, 0.0), &g);
    ensure(
        zero.hovering && zero.vel_forward == 0.0 && zero.vel_right == 0.0,
        || format!("{zero:?}"),
    )?;
    let fwd = compute_command(PixelError::new(0.0, -100.0), &g);
    ensure(fwd.vel_forward == 0.05 && fwd.vel_right == 0.0 && !fwd.hovering, || {
        format!("{fwd:?}")
    })?;
    let diag = compute_command(PixelError::new(80.0, 20.0), &g);
    ensure(
        diag.vel_forward == -0.01 && diag.vel_right == 0.04 && !diag.hovering,
        || format!("{diag:?}"),
    )?;
    ensure(compute_command(PixelError::new(30.0, 30.0), &g).hovering, || {
        "(30,30) should hover".into()
    })?;

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut checked = 0;
    while checked < 10_000 {
        let r: f64 = rng.random_range(40.0..60.0);
        let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let (ex, ey) = (r * theta.cos(), r * theta.sin());
        let n2 = ex * ex + ey * ey;
        if (n2 - 2500.0).abs() < 1e-9 {
            continue; // too close to call in floating point
        }
        let cmd = compute_command(PixelError::new(ex, ey), &g);
        ensure(cmd.hovering == (n2 <= 2500.0), || {
            format!("hover mismatch at ({ex}, {ey})")
        })?;
        checked += 1;
    }
    Ok("examples exact, 10000 threshold samples".into())
}

fn closed_loop() -> Check {
    // 150 px right of center at 1 m altitude.
    let scenario = Scenario {
        markers: vec![Marker::new(GroundPoint::new(0.0, 150.0 / 320.0), 0.1, ColorClass::Pink)],
        start_airborne: true,
        ..Scenario::default()
    };
    let spec = MissionSpec::track_visible(ColorClass::Pink);
    let mut errors_by_mode = Vec::new();
    for perception in [PerceptionMode::Rendered, PerceptionMode::GroundTruth] {
        let cfg = SimConfig {
            perception,
            ..SimConfig::noiseless()
        };
        let res = mission::run(&spec, scenario.world(0, &cfg), &cfg).map_err(|e| e.to_string())?;
        ensure(res.final_state == FsmState::HoveringOnTarget, || {
            format!("{perception:?}: ended {}", res.final_state)
        })?;
        let errs: Vec<f64> = res.rows.iter().filter_map(|r| r.err_px).collect();
        ensure(errs.len() == res.rows.len(), || "missing error samples".into())?;
        ensure(errs.windows(2).all(|w| w[1] < w[0]), || {
            format!("{perception:?}: error not strictly decreasing")
        })?;
        errors_by_mode.push(errs);
    }

    let exact = &errors_by_mode[1];
    let worst = exact
        .windows(2)
        .map(|w| (w[1] / w[0] - 0.984).abs())
        .fold(0.0, f64::max);
    ensure(worst <= 1e-6, || format!("contraction off by {worst:e}"))?;
    let rendered = &errors_by_mode[0];
    let rendered_worst = rendered
        .windows(2)
        .map(|w| (w[1] / w[0] - 0.984).abs())
        .fold(0.0, f64::max);
    Ok(format!(
        "{} steps to hover; contraction 0.984 within {worst:.1e} (exact centers), {rendered_worst:.1e} (rendered centroids)",
        exact.len() - 1
    ))
}

fn forward_search() -> Check {
    let quiet = Campaign::standard(MissionKind::ForwardSearchHover, SimConfig::noiseless(), 100);
    let s = harness::run_campaign(&quiet).map_err(|e| e.to_string())?;
    ensure(s.success_count == 20, || format!("zero noise {}/20", s.success_count))?;
    ensure(s.std_dev == Some(0.0), || format!("zero-noise std_dev {:?}", s.std_dev))?;

    let noisy = Campaign::standard(MissionKind::ForwardSearchHover, SimConfig::default(), 100);
    let n = harness::run_campaign(&noisy).map_err(|e| e.to_string())?;
    ensure(n.success_count >= 18, || {
        format!("default noise {}/20", n.success_count)
    })?;
    Ok(format!(
        "zero noise 20/20 at {:.1} s (std 0); default noise {}/20, {:.2} ± {:.2} s",
        s.mean.unwrap_or(f64::NAN),
        n.success_count,
        n.mean.unwrap_or(f64::NAN),
        n.std_dev.unwrap_or(f64::NAN)
    ))
}

fn search_return_land() -> Check {
    let c = Campaign::standard(MissionKind::SearchReturnLand, SimConfig::noiseless(), 200);
    let (stats, missions) = harness::run_campaign_detailed(&c, &RunOptions::default()).map_err(|e| e.to_string())?;
    let footprint = 20.0 * c.config.altitude / c.config.frame.focal_length;
    let start = c.scenario.carrier_start;
    let mut worst: f64 = 0.0;
    for (i, m) in missions.iter().enumerate() {
        ensure(m.final_state == FsmState::Landed, || {
            format!("trial {i} ended {}", m.final_state)
        })?;
        worst = worst.max(m.final_pose.ground().distance_to(start));
    }
    ensure(worst <= footprint, || {
        format!("landed {worst:.4} m from start (limit {footprint})")
    })?;
    Ok(format!(
        "{}/20 landed, worst {:.2e} m from start",
        stats.success_count, worst
    ))
}

fn drift_widening() -> Check {
    let levels = [0.0, 0.005, 0.01, 0.02];
    let mut means = Vec::new();
    for drift in levels {
        let cfg = SimConfig {
            noise: NoiseModel {
                drift_std: drift,
                takeoff_jitter_std: 0.0,
            },
            ..SimConfig::default()
        };
        let c = Campaign {
            trials: 50,
            ..Campaign::standard(MissionKind::SearchReturnLand, cfg, 300)
        };
        let (_, missions) = harness::run_campaign_detailed(&c, &RunOptions::default()).map_err(|e| e.to_string())?;
        let spreads = missions
            .iter()
            .map(|m| path_spread(&m.rows))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| format!("drift {drift}: {e}"))?;
        if drift == 0.0 {
            let max = spreads.iter().copied().fold(0.0, f64::max);
            ensure(max <= 1e-6, || format!("zero-drift spread {max:e}"))?;
        }
        means.push(spreads.iter().sum::<f64>() / spreads.len() as f64);
    }
    ensure(means.windows(2).all(|w| w[1] >= w[0]), || format!("means {means:?}"))?;
    let shown: Vec<String> = levels.iter().zip(&means).map(|(d, m)| format!("{d}:{m:.4}")).collect();
    Ok(format!("mean spread (m) by drift {}", shown.join(" ")))
}

fn coordination() -> Check {
    let c = Campaign::standard(MissionKind::CarrierCoordination, SimConfig::default(), 400);
    let (stats, missions) = harness::run_campaign_detailed(&c, &RunOptions::default()).map_err(|e| e.to_string())?;
    let expected = [
        FsmState::TakingOff,
        FsmState::Servoing(ColorClass::Pink),
        FsmState::HoveringOnTarget,
        FsmState::ServoingHome,
        FsmState::Landing,
        FsmState::Landed,
    ];
    let mut full_sequence = 0;
    for (i, m) in missions.iter().enumerate() {
        audit_transitions(&m.transitions).map_err(|t| format!("trial {i}: illegal {} -> {}", t.from, t.to))?;
        let mut want = expected.iter().peekable();
        for t in &m.transitions {
            if want.peek() == Some(&&t.to) {
                want.next();
            }
        }
        if want.peek().is_none() {
            full_sequence += 1;
        }
    }
    ensure(full_sequence >= 18, || {
        format!("{full_sequence}/20 completed the full sequence")
    })?;
    ensure(stats.success_count >= 18, || {
        format!("{}/20 succeeded", stats.success_count)
    })?;
    Ok(format!(
        "{}/20 landed on the carrier, all transition logs legal",
        stats.success_count
    ))
}

fn write_all(dir: &Path, c: &Campaign) -> Result<(), String> {
    let (stats, missions) = harness::run_campaign_detailed(c, &RunOptions::default()).map_err(|e| e.to_string())?;
    harness::write_campaign_outputs(dir, &stats, &missions).map_err(|e| e.to_string())
}

fn determinism() -> Check {
    let mut files = 0;
    for kind in [
        MissionKind::TrackVisible,
        MissionKind::ForwardSearchHover,
        MissionKind::SearchReturnLand,
        MissionKind::CarrierCoordination,
    ] {
        let c = Campaign {
            trials: 4,
            ..Campaign::standard(kind, SimConfig::default(), 77)
        };
        let a = tempfile::tempdir().map_err(|e| e.to_string())?;
        let b = tempfile::tempdir().map_err(|e| e.to_string())?;
        write_all(a.path(), &c)?;
        write_all(b.path(), &c)?;
        let mut names: Vec<_> = fs::read_dir(a.path())
            .map_err(|e| e.to_string())?
            .map(|e| e.map(|e| e.file_name()))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        names.sort();
        ensure(names.len() == 6, || format!("{kind}: {} output files", names.len()))?;
        for name in names {
            let x = fs::read(a.path().join(&name)).map_err(|e| e.to_string())?;
            let y = fs::read(b.path().join(&name)).map_err(|e| e.to_string())?;
            ensure(x == y, || format!("{kind}: {name:?} differs"))?;
            files += 1;
        }
    }
    Ok(format!("{files} output files bit-identical across reruns"))
}

fn perception_oracle() -> Check {
    let spec = FrameSpec::default();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        let drone = Pose::new(
            rng.random_range(-5.0..5.0),
            rng.random_range(-5.0..5.0),
            rng.random_range(0.8..1.5),
            rng.random_range(-std::f64::consts::PI..std::f64::consts::PI),
        );
        let radius = rng.random_range(0.05..0.2);
        let r_px = spec.focal_length * radius / drone.z;
        let px = PixelPoint::new(
            rng.random_range(r_px + 1.0..spec.width as f64 - r_px - 2.0),
            rng.random_range(r_px + 1.0..spec.height as f64 - r_px - 2.0),
        );
        let at = unproject(&drone, px, &spec).map_err(|e| e.to_string())?;
        let marker = Marker::new(at, radius, ColorClass::Red);
        let frame = render(&drone, &[marker], &spec).map_err(|e| e.to_string())?;
        let d = detect(&frame, ColorClass::Red, 10).ok_or_else(|| format!("placement {i} not detected"))?;
        let truth = project(&drone, at, &spec).map_err(|e| e.to_string())?;
        worst = worst.max(d.center.distance_to(truth));
    }
    ensure(worst <= 0.5, || format!("centroid off by {worst} px"))?;

    // Discs straddling an edge or corner: brute-force every pixel of the frame.
    let drone = Pose::new(0.0, 0.0, 1.0, 0.0);
    let mut clipped = 0;
    while clipped < 200 {
        let radius = rng.random_range(0.05..0.2);
        let r_px = spec.focal_length * radius;
        let px = PixelPoint::new(
            rng.random_range(-r_px..spec.width as f64 + r_px),
            rng.random_range(-r_px..spec.height as f64 + r_px),
        );
        let fully_inside = px.x - r_px >= 0.0
            && px.x + r_px <= spec.width as f64 - 1.0
            && px.y - r_px >= 0.0
            && px.y + r_px <= spec.height as f64 - 1.0;
        if fully_inside {
            continue;
        }
        let at = unproject(&drone, px, &spec).map_err(|e| e.to_string())?;
        let frame = render(&drone, &[Marker::new(at, radius, ColorClass::Green)], &spec).map_err(|e| e.to_string())?;
        let c = project(&drone, at, &spec).map_err(|e| e.to_string())?;
        let (mut n, mut sx, mut sy) = (0u64, 0.0f64, 0.0f64);
        for row in 0..spec.height {
            for col in 0..spec.width {
                let (dx, dy) = (col as f64 - c.x, row as f64 - c.y);
                if dx * dx + dy * dy <= r_px * r_px {
                    n += 1;
                    sx += col as f64;
                    sy += row as f64;
                }
            }
        }
        let got = detect(&frame, ColorClass::Green, 1);
        match got {
            None => ensure(n == 0, || format!("clipped disc at {px:?}: oracle saw {n} pixels"))?,
            Some(d) => {
                let want = PixelPoint::new(sx / n as f64, sy / n as f64);
                ensure(d.pixel_count == n as usize && d.center == want, || {
                    format!("clipped disc at {px:?}: {:?} vs oracle {want:?} ({n} px)", d)
                })?;
            }
        }
        clipped += 1;
    }
    Ok(format!("1000 placements within {worst:.3} px; 200 clipped blobs exact"))
}

fn reversal() -> Check {
    let cfg = SimConfig::noiseless();
    let center = image_center(&cfg.frame);
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    for i in 0..100u64 {
        let segments = rng.random_range(2..=6);
        let ticks: u32 = rng.random_range(5..=40);
        let offset = rng.random_range(60.0..300.0);
        let traj =
            random_trajectory(&cfg.frame, segments, ticks as f64 * cfg.dt, offset, i).map_err(|e| e.to_string())?;

        let start = Pose::new(
            rng.random_range(-3.0..3.0),
            rng.random_range(-3.0..3.0),
            cfg.altitude,
            0.0,
        );
        let mut world = WorldState::new(start, Carrier::parked_at(GroundPoint::new(100.0, 100.0)), vec![], i);
        let out_log = mission::fly_trajectory(&mut world, &traj, &cfg).map_err(|e| e.to_string())?;
        let back = reverse(&out_log, &cfg.frame).map_err(|e| e.to_string())?;
        let back_log = mission::fly_trajectory(&mut world, &back, &cfg).map_err(|e| e.to_string())?;
        worst = worst.max(world.drone.ground().distance_to(start.ground()));

        let again = reverse(&back_log, &cfg.frame).map_err(|e| e.to_string())?;
        ensure(again.targets() == traj.targets(), || {
            format!("trajectory {i}: reverse twice changed targets")
        })?;
        for (a, b) in again.segments.iter().zip(&traj.segments) {
            let (Termination::Duration(_), Termination::Duration(_)) = (a.terminate_on, b.terminate_on) else {
                return Err(format!("trajectory {i}: non-duration segment"));
            };
            ensure(
                a.terminate_on.duration_ticks(cfg.dt) == b.terminate_on.duration_ticks(cfg.dt),
                || format!("trajectory {i}: segment length changed"),
            )?;
        }
        ensure(
            traj.targets()
                .iter()
                .all(|t| t.distance_to(center) > cfg.gains.hover_threshold),
            || "target inside hover radius".into(),
        )?;
    }
    ensure(worst <= 1e-6, || format!("net displacement {worst:e} m"))?;
    Ok(format!("100 trajectories, worst net displacement {worst:.1e} m"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (
            "1 statistics reproduction",
            Duration::from_millis(1),
            stats_reproduction,
        ),
        ("2 controller unit suite", Duration::from_secs(5), controller_suite),
        ("3 closed-loop convergence", Duration::from_secs(1), closed_loop),
        ("4 forward search and hover", Duration::from_secs(10), forward_search),
        ("5 search, return and land", Duration::from_secs(10), search_return_land),
        (
            "6 drift widens the return path",
            Duration::from_secs(60),
            drift_widening,
        ),
        ("7 carrier coordination", Duration::from_secs(20), coordination),
        ("8 determinism", Duration::from_secs(30), determinism),
        ("9 perception oracle", Duration::from_secs(30), perception_oracle),
        ("10 reversal property", Duration::from_secs(30), reversal),
    ];

    let mut failed = 0;
    for (name, budget, check) in criteria {
        let t0 = Instant::now();
        let result = check();
        let took = t0.elapsed();
        let (ok, detail) = match result {
            Ok(d) if took <= budget => (true, d),
            Ok(d) => (false, format!("{d}; over time budget {budget:?}")),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!("[{}] {name}: {detail} ({took:.2?})", if ok { "PASS" } else { "FAIL" });
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
