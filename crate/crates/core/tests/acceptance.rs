//! Acceptance checks, one line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so that every criterion is
//! reported even when an earlier one fails.

use std::f64::consts::{FRAC_1_SQRT_2, LN_2};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use emdyn::chsh::m_value;
use emdyn::critical_times::{
    classification_boundaries, disentanglement_time_closed, disentanglement_time_numeric, golden_threshold,
    locality_time_closed, locality_time_numeric, ordering_report, pure_locality_branch_point, sweep, CriticalTime,
    SweepMethod, TimesReport,
};
use emdyn::dynamics::{exact_propagate, rk4_evolve, EmissionRates, RK4_STEP};
use emdyn::entanglement::{concurrence, concurrence_x};
use emdyn::linalg::{pauli, I};
use emdyn::sampling::{random_density, random_unitary2, random_x_state};
use emdyn::states::{
    as_x_state, flip_a, local_conjugate, off_pattern_magnitude, projector, werner, BellKind, DensityMatrix, Family,
    FamilyKind, Sign,
};
use emdyn::trajectory::time_grid;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn finite(t: CriticalTime, what: &str) -> Result<f64, String> {
    t.tau()
        .ok_or_else(|| format!("{what}: expected finite, got {}", t.label()))
}

fn criterion(id: u32, title: &str, budget: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = f();
    let elapsed = start.elapsed();
    let (ok, detail) = match outcome {
        Ok(d) if elapsed <= budget => (true, d),
        Ok(d) => (false, format!("{d}; over budget {:.1} s", budget.as_secs_f64())),
        Err(d) => (false, d),
    };
    let tag = if ok { "PASS" } else { "FAIL" };
    println!("[{tag}] {id}. {title}: {detail} ({:.3} s)", elapsed.as_secs_f64());
    ok
}

fn figure_one() -> Outcome {
    let phi = Family::pure_phi(0.8).initial_state().map_err(|e| e.to_string())?;
    let td = finite(
        disentanglement_time_numeric(&phi).map_err(|e| e.to_string())?,
        "t_d(P_phi)",
    )?;
    ensure((td - LN_2).abs() <= 1e-6, || format!("t_d(P_phi) = {td:.9}, want ln 2"))?;

    let psi = Family::pure_psi(0.8).initial_state().map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for tau in time_grid(3.0, 0.01).map_err(|e| e.to_string())? {
        let c = concurrence(&exact_propagate(&psi, tau))
            .map_err(|e| e.to_string())?
            .value();
        worst = worst.max((c - 0.8 * (-tau).exp()).abs());
    }
    ensure(worst <= 1e-12, || format!("psi trajectory off by {worst:e}"))?;
    Ok(format!("t_d(P_phi) = {td:.9}; max |C_psi - 0.8 e^-tau| = {worst:.1e}"))
}

fn figure_two() -> Outcome {
    let wphi = Family::werner_phi(0.75).initial_state().map_err(|e| e.to_string())?;
    let td = finite(
        disentanglement_time_numeric(&wphi).map_err(|e| e.to_string())?,
        "t_d(W_Phi)",
    )?;
    ensure((td - 3.5f64.ln()).abs() <= 1e-6, || {
        format!("t_d(W_Phi) = {td:.9}, want ln 3.5")
    })?;

    let wpsi = Family::werner_psi(0.75).initial_state().map_err(|e| e.to_string())?;
    let class = disentanglement_time_numeric(&wpsi).map_err(|e| e.to_string())?;
    ensure(class == CriticalTime::Asymptotic, || {
        format!("t_d(W_Psi) is {}", class.label())
    })?;
    let closed = disentanglement_time_closed(&Family::werner_psi(0.75)).map_err(|e| e.to_string())?;
    ensure(closed == CriticalTime::Asymptotic, || {
        format!("closed t_d(W_Psi) is {}", closed.label())
    })?;

    let c0 = concurrence(&wpsi).map_err(|e| e.to_string())?.value();
    ensure((c0 - 0.625).abs() <= 1e-12, || format!("C(W_Psi, 0) = {c0}"))?;
    Ok(format!(
        "t_d(W_Phi) = {td:.9}; W_Psi asymptotic; C(W_Psi, 0) = {c0:.15}"
    ))
}

fn thresholds() -> Outcome {
    const POINTS: usize = 1000;
    let third = 1.0 / 3.0;
    let golden = golden_threshold();
    let mut found = Vec::new();

    for kind in [FamilyKind::WernerPsi, FamilyKind::WernerPhi] {
        let rows = sweep(kind, 0.0, 1.0, POINTS, SweepMethod::Closed).map_err(|e| e.to_string())?;
        let td = classification_boundaries(&rows, |r| r.t_d);
        let tloc = classification_boundaries(&rows, |r| r.t_loc);

        let onset = td
            .iter()
            .find(|b| b.1 == "immediate" && b.2 == "finite")
            .ok_or_else(|| format!("{kind}: no entanglement onset"))?;
        ensure((onset.0 - third).abs() <= 1e-3, || {
            format!("{kind}: onset at {}", onset.0)
        })?;
        found.push(format!("{kind} onset {:.4}", onset.0));

        if kind == FamilyKind::WernerPsi {
            let b = td
                .iter()
                .find(|b| b.1 == "finite" && b.2 == "asymptotic")
                .ok_or("werner-psi: no finite->asymptotic boundary")?;
            ensure((b.0 - golden).abs() <= 1e-3, || {
                format!("werner-psi: asymptotic from {}", b.0)
            })?;
            found.push(format!("asymptotic {:.4}", b.0));
        }

        let chsh = tloc
            .iter()
            .find(|b| b.1 == "immediate" && b.2 == "finite")
            .ok_or_else(|| format!("{kind}: no violation onset"))?;
        ensure((chsh.0 - FRAC_1_SQRT_2).abs() <= 1e-3, || {
            format!("{kind}: violation from {}", chsh.0)
        })?;
        found.push(format!("violation {:.4}", chsh.0));

        // the numeric path must classify the grid points on both sides the same way
        let step = 1.0 / (POINTS - 1) as f64;
        for b in td.iter().chain(&tloc) {
            for param in [b.0 - 0.5 * step, b.0 + 0.5 * step] {
                let row = rows
                    .iter()
                    .min_by(|a, c| (a.param - param).abs().total_cmp(&(c.param - param).abs()))
                    .unwrap();
                let rho0 = Family::new(kind, row.param)
                    .initial_state()
                    .map_err(|e| e.to_string())?;
                let ntd = disentanglement_time_numeric(&rho0).map_err(|e| e.to_string())?;
                let ntl = locality_time_numeric(&rho0).map_err(|e| e.to_string())?;
                ensure(ntd.same_class(row.t_d) && ntl.same_class(row.t_loc), || {
                    format!(
                        "{kind} p={}: numeric {}/{} vs closed {}/{}",
                        row.param,
                        ntd.label(),
                        ntl.label(),
                        row.t_d.label(),
                        row.t_loc.label()
                    )
                })?;
            }
        }
    }
    Ok(format!("{POINTS}-point sweeps: {}", found.join(", ")))
}

fn local_operation_headline() -> Outcome {
    for k in 1..=9 {
        let c = k as f64 / 10.0;
        for (f, want_finite) in [(Family::pure_phi(c), true), (Family::pure_psi(c), false)] {
            let rho0 = f.initial_state().map_err(|e| e.to_string())?;
            let t = disentanglement_time_numeric(&rho0).map_err(|e| e.to_string())?;
            let ok = if want_finite {
                t.is_finite()
            } else {
                t == CriticalTime::Asymptotic
            };
            ensure(ok, || format!("{f}: t_d {}", t.label()))?;
        }
        let (ua, ub) = flip_a();
        let phi = Family::pure_phi(c).initial_state().map_err(|e| e.to_string())?;
        let psi = Family::pure_psi(c).initial_state().map_err(|e| e.to_string())?;
        let moved = local_conjugate(&phi, &ua, &ub).map_err(|e| e.to_string())?;
        let d = moved.matrix().max_abs_diff(psi.matrix());
        ensure(d <= 1e-12, || {
            format!("(s1 x I) P_phi (s1 x I) - P_psi = {d:e} at C={c}")
        })?;
    }
    let isy = pauli::sigma_y().scale(I);
    for p in [0.65, 0.75, 0.85, 0.95] {
        for (f, want_finite) in [(Family::werner_phi(p), true), (Family::werner_psi(p), false)] {
            let rho0 = f.initial_state().map_err(|e| e.to_string())?;
            let t = disentanglement_time_numeric(&rho0).map_err(|e| e.to_string())?;
            let ok = if want_finite {
                t.is_finite()
            } else {
                t == CriticalTime::Asymptotic
            };
            ensure(ok, || format!("{f}: t_d {}", t.label()))?;
        }
        let psi_minus = werner(BellKind::PsiMinus, p).map_err(|e| e.to_string())?;
        let moved = local_conjugate(&psi_minus, &pauli::identity(), &isy).map_err(|e| e.to_string())?;
        let target = werner(BellKind::PhiPlus, p).map_err(|e| e.to_string())?;
        let d = moved.matrix().max_abs_diff(target.matrix());
        ensure(d <= 1e-12, || {
            format!("(I x i s2) W_Psi- (I x i s2)+ - W_Phi+ = {d:e} at p={p}")
        })?;
    }
    Ok("P_phi finite / P_psi asymptotic for C = 0.1..0.9; W_Phi finite / W_Psi asymptotic for p = 0.65..0.95; unitary relations hold".into())
}

fn locality_times() -> Outcome {
    let bell = projector(&BellKind::PhiPlus.state());
    let t = finite(locality_time_numeric(&bell).map_err(|e| e.to_string())?, "t_loc(Bell)")?;
    ensure((t - 0.5 * LN_2).abs() <= 1e-6, || format!("t_loc(Bell) = {t:.9}"))?;

    let w = Family::werner_psi(0.75).initial_state().map_err(|e| e.to_string())?;
    let tw = finite(locality_time_numeric(&w).map_err(|e| e.to_string())?, "t_loc(Werner)")?;
    ensure((tw - 0.5 * 1.125f64.ln()).abs() <= 1e-6, || {
        format!("t_loc(Werner 3/4) = {tw:.9}")
    })?;

    let piecewise = |c: f64| {
        if c <= pure_locality_branch_point() {
            (0.25 * c * c).ln_1p()
        } else {
            0.5 * (2.0 * c * c).ln()
        }
    };
    let mut worst_psi: f64 = 0.0;
    let mut discrepancies = Vec::new();
    for k in 1..=10 {
        let c = k as f64 / 10.0;
        let psi = Family::pure_psi(c).initial_state().map_err(|e| e.to_string())?;
        let tn = finite(locality_time_numeric(&psi).map_err(|e| e.to_string())?, "t_loc(P_psi)")?;
        worst_psi = worst_psi.max((tn - piecewise(c)).abs());

        let report = TimesReport::for_family(&Family::pure_phi(c), Sign::Plus).map_err(|e| e.to_string())?;
        let tn = finite(report.t_loc_numeric, "t_loc(P_phi)")?;
        if c >= pure_locality_branch_point() {
            ensure((tn - 0.5 * (2.0 * c * c).ln()).abs() <= 1e-6, || {
                format!("t_loc(P_phi, C={c}) = {tn:.9}")
            })?;
        } else {
            ensure(report.has_discrepancy(), || {
                format!("no discrepancy reported for P_phi C={c}")
            })?;
            let closed = finite(
                locality_time_closed(&Family::pure_phi(c)).map_err(|e| e.to_string())?,
                "closed",
            )?;
            discrepancies.push(format!("C={c}: closed {closed:.6} numeric {tn:.6}"));
        }
    }
    ensure(worst_psi <= 1e-6, || {
        format!("psi-class numeric t_loc off by {worst_psi:e}")
    })?;
    for d in &discrepancies {
        println!("       phi-class locality discrepancy {d}");
    }
    Ok(format!(
        "t_loc(Bell) = {t:.9}, t_loc(W 3/4) = {tw:.9}, psi-class max dev {worst_psi:.1e}, {} phi-class discrepancies reported",
        discrepancies.len()
    ))
}

fn oracle_equivalence() -> Outcome {
    let taus = [0.1, 0.5, 1.0, 2.0, 5.0];
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut states: Vec<DensityMatrix> = (0..100).map(|_| random_x_state(&mut rng).to_density()).collect();
    states.extend((0..20).map(|_| random_density(&mut rng)));
    let mut worst: f64 = 0.0;
    for rho0 in &states {
        let mut rho = *rho0;
        let mut prev = 0.0;
        for tau in taus {
            rho = rk4_evolve(&rho, tau - prev, RK4_STEP, EmissionRates::identical());
            prev = tau;
            worst = worst.max(rho.matrix().max_abs_diff(exact_propagate(rho0, tau).matrix()));
        }
    }
    ensure(worst <= 1e-8, || format!("max entrywise gap {worst:e}"))?;
    Ok(format!("120 states x 5 times, max entrywise gap {worst:.2e}"))
}

fn invariant_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let taus = [0.0, 0.05, 0.3, 1.0, 2.5, 7.0];
    let (mut trace, mut min_eig, mut semi, mut wootters, mut lu, mut leak) =
        (0f64, f64::INFINITY, 0f64, 0f64, 0f64, 0f64);
    for k in 0..200 {
        let x0 = random_x_state(&mut rng);
        let rho0 = if k % 2 == 0 {
            x0.to_density()
        } else {
            random_density(&mut rng)
        };
        let (ua, ub) = (random_unitary2(&mut rng), random_unitary2(&mut rng));
        for &tau in &taus {
            let rho = exact_propagate(&rho0, tau);
            trace = trace.max((rho.matrix().trace().re - 1.0).abs());
            min_eig = min_eig.min(rho.validate().min_eigenvalue);
            let half = exact_propagate(&exact_propagate(&rho0, 0.5 * tau), 0.5 * tau);
            semi = semi.max(half.matrix().max_abs_diff(rho.matrix()));

            let moved = local_conjugate(&rho, &ua, &ub).map_err(|e| e.to_string())?;
            let dc = concurrence(&rho).map_err(|e| e.to_string())?.value()
                - concurrence(&moved).map_err(|e| e.to_string())?.value();
            let dm =
                m_value(&rho).map_err(|e| e.to_string())?.value() - m_value(&moved).map_err(|e| e.to_string())?.value();
            lu = lu.max(dc.abs()).max(dm.abs());

            let xt = exact_propagate(&x0.to_density(), tau);
            leak = leak.max(off_pattern_magnitude(xt.matrix()));
            let general = concurrence(&xt).map_err(|e| e.to_string())?.value();
            let closed = concurrence_x(&as_x_state(&xt).map_err(|e| e.to_string())?).value();
            wootters = wootters.max((general - closed).abs());
        }
    }
    let checks = [
        ("trace", trace <= 1e-12),
        ("positivity", min_eig >= -1e-10),
        ("semigroup", semi <= 1e-12),
        ("wootters-vs-x", wootters <= 1e-10),
        ("local-unitary", lu <= 1e-10),
        ("x-leakage", leak <= 1e-14),
    ];
    let detail = format!(
        "trace {trace:.1e}, min eig {min_eig:.1e}, semigroup {semi:.1e}, wootters-vs-x {wootters:.1e}, local-unitary {lu:.1e}, x-leakage {leak:.1e}"
    );
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    ensure(failed.is_empty(), || format!("{} failed; {detail}", failed.join(", ")))?;
    Ok(detail)
}

fn ordering_property() -> Outcome {
    let mut finite_count = 0;
    for kind in FamilyKind::ALL {
        for k in 0..=200 {
            let f = Family::new(kind, k as f64 / 200.0);
            let r = ordering_report(&f).map_err(|e| e.to_string())?;
            if let CriticalTime::Finite(td) = r.t_d {
                finite_count += 1;
                let ok = match r.t_loc {
                    CriticalTime::Finite(tl) => tl <= td,
                    CriticalTime::Immediate => true,
                    CriticalTime::Asymptotic => false,
                };
                ensure(ok, || format!("{f}: t_loc {} after t_d {td}", r.t_loc))?;
            }
        }
    }
    let gap_phi = ordering_report(&Family::pure_phi(0.8))
        .map_err(|e| e.to_string())?
        .gap
        .ok_or("no gap for P_phi(0.8)")?;
    let want_phi = LN_2 - 1.16f64.ln();
    ensure((gap_phi - want_phi).abs() <= 1e-5, || {
        format!("gap P_phi(0.8) = {gap_phi:.9}")
    })?;
    let gap_w = ordering_report(&Family::werner_phi(0.75))
        .map_err(|e| e.to_string())?
        .gap
        .ok_or("no gap for W_Phi(0.75)")?;
    let want_w = 3.5f64.ln() - 0.5 * 1.125f64.ln();
    ensure((gap_w - want_w).abs() <= 1e-5, || {
        format!("gap W_Phi(0.75) = {gap_w:.9}")
    })?;
    Ok(format!(
        "t_loc <= t_d on {finite_count} finite cases; gap P_phi(0.8) = {gap_phi:.6}, gap W_Phi(0.75) = {gap_w:.6}"
    ))
}

fn main() -> ExitCode {
    let s = Duration::from_secs;
    let results = [
        criterion(1, "Figure 1 reproduction", s(1), figure_one),
        criterion(2, "Figure 2 reproduction", s(1), figure_two),
        criterion(3, "Threshold structure", s(10), thresholds),
        criterion(4, "Local-operation headline", s(60), local_operation_headline),
        criterion(5, "Locality times", s(60), locality_times),
        criterion(6, "Oracle equivalence", s(30), oracle_equivalence),
        criterion(7, "Invariant suites", s(60), invariant_suites),
        criterion(8, "Ordering property", s(60), ordering_property),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
