//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::process::ExitCode;

use bianchi_core::bianchi::{algebra_for, BianchiAlgebra, BianchiLabel};
use bianchi_core::curvature::{ricci, riemann, weyl_split};
use bianchi_core::evolution::{
    closed_form, contraction_system, correspondence_table, general_with_variable, integrate,
    reduce_label, residual, EvalVariable, EvolutionSystem, FamilyKind, Kind, OdeWeights,
    SolutionFamily,
};
use bianchi_core::exterior::KForm;
use bianchi_core::geometry::{
    d_fundamental, endomorphisms, frame_metric, fundamental_forms, nijenhuis, signature_counts,
    FrameState,
};
use bianchi_core::jet::Jet;
use bianchi_core::verify::{compatible_family, reference_cases, sample_state, ReferenceCase};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn interior(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|i| lo + (hi - lo) * i as f64 / (n + 1) as f64).collect()
}

fn alg(label: BianchiLabel) -> BianchiAlgebra {
    algebra_for(label).expect("class A row")
}

/// One general family per canonical sign pattern, with generic constants
/// and a sampling window inside its domain.
struct GeneralCase {
    group: BianchiLabel,
    params: [f64; 3],
    seed: f64,
    window: (f64, f64),
}

fn general_cases() -> Vec<GeneralCase> {
    use BianchiLabel::*;
    vec![
        GeneralCase { group: IX, params: [0.3, -0.4, 1.1], seed: 2.0, window: (1.15, 4.0) },
        GeneralCase { group: VIII, params: [-0.2, 0.4, 2.5], seed: 1.0, window: (0.45, 2.45) },
        GeneralCase { group: II, params: [0.7, 1.9, 0.4], seed: 1.0, window: (0.0, 3.0) },
        GeneralCase { group: VII0, params: [0.8, -0.3, 0.6], seed: 1.0, window: (0.65, 3.5) },
        GeneralCase { group: VI0, params: [1.3, -0.5, 1.7], seed: 0.0, window: (-0.45, 1.65) },
    ]
}

fn general_family(c: &GeneralCase) -> Result<(EvolutionSystem, SolutionFamily), String> {
    let sys = reduce_label(c.group, Kind::Hk).map_err(|e| e.to_string())?;
    let fam = closed_form(&sys, c.params, c.seed).map_err(|e| e.to_string())?;
    Ok((sys, fam))
}

/// The exact solutions named for every `(group, kind)` pair, plus the
/// su(1,1) biaxial solution as a second HK VIII witness.
fn named_cases() -> Vec<ReferenceCase> {
    let mut v = reference_cases();
    v.push((BianchiLabel::IX, Kind::Hk, FamilyKind::BgppTriaxial, [1.0, 1.2, 1.4], (1.45, 3.0)));
    v.push((BianchiLabel::VIII, Kind::Hs, FamilyKind::EguchiHanson, [1.0, 0.0, 0.0], (1.01, 2.0)));
    v
}

/// All exact-solution states used by the closedness and curvature checks.
fn exact_states(n: usize) -> Result<Vec<(String, EvolutionSystem, FrameState)>, String> {
    let mut out = Vec::new();
    for c in general_cases() {
        let (sys, fam) = general_family(&c)?;
        let a = alg(c.group);
        for t in interior(c.window.0, c.window.1, n) {
            let st = sample_state(&fam, &a, Kind::Hk, t, 0.0).map_err(|e| e.to_string())?;
            out.push((format!("{} HK {}", c.group, fam.kind), sys, st));
        }
    }
    for (g, kind, family, params, (lo, hi)) in named_cases() {
        let a = alg(g);
        let (sys, fam) = compatible_family(&a, kind, family, params).map_err(|e| e.to_string())?;
        for t in interior(lo, hi, n) {
            let st = sample_state(&fam, &a, kind, t, 0.0).map_err(|e| e.to_string())?;
            out.push((format!("{g} {kind} {family}"), sys, st));
        }
    }
    Ok(out)
}

fn criterion_1() -> Outcome {
    for label in BianchiLabel::CLASS_A {
        let b = alg(label).b.map(|v| v as i8);
        let hk = reduce_label(label, Kind::Hk).map_err(|e| e.to_string())?.sigma;
        let hs = reduce_label(label, Kind::Hs).map_err(|e| e.to_string())?.sigma;
        if hk != b || hs != [b[0], b[1], -b[2]] {
            return Err(format!("{label}: HK {hk:?}, HS {hs:?}, table {b:?}"));
        }
    }
    use BianchiLabel::*;
    let mut got: Vec<_> = correspondence_table()
        .into_iter()
        .map(|p| (p.hk, p.hs, p.sign_flipped))
        .collect();
    got.sort();
    let mut want = vec![
        (IX, VIII, false),
        (VIII, IX, false),
        (VII0, VI0, false),
        (VI0, VII0, false),
        (II, II, true),
    ];
    want.sort();
    if got != want {
        return Err(format!("correspondence table {got:?}"));
    }
    Ok("6 groups x 2 kinds exact; table = {IX<->VIII, VIII<->IX, VII0<->VI0, VI0<->VII0, II<->II (sign)}".into())
}

fn criterion_2() -> Outcome {
    let mut worst = 0.0f64;
    for c in general_cases() {
        let (sys, fam) = general_family(&c)?;
        let a = alg(c.group);
        for t in interior(c.window.0, c.window.1, 100) {
            let st = fam.state(t, Kind::Hk, a).map_err(|e| e.to_string())?;
            let r = residual(&sys, &st).iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if !(r < 1e-10) {
                return Err(format!("{} at t={t}: residual {r:e}", fam.kind));
            }
            worst = worst.max(r);
        }
    }
    Ok(format!("5 families x 100 samples, max residual {worst:.2e} < 1e-10"))
}

fn criterion_3() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    for (g, kind, family, params, (lo, hi)) in named_cases() {
        let a = alg(g);
        let (sys, fam) = compatible_family(&a, kind, family, params).map_err(|e| e.to_string())?;
        for t in interior(lo, hi, 100) {
            let st = sample_state(&fam, &a, kind, t, 0.0).map_err(|e| e.to_string())?;
            let r = residual(&sys, &st).iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if !(r < 1e-10) {
                return Err(format!("{g} {kind} {family} at t={t}: residual {r:e}"));
            }
            worst = worst.max(r);
        }
        count += 1;
    }
    Ok(format!("{count} (group, kind, solution) cases x 100 samples, max residual {worst:.2e}"))
}

fn criterion_4() -> Outcome {
    let mut worst = 0.0f64;
    let mut weakest = f64::INFINITY;
    let states = exact_states(20)?;
    for (name, _, st) in &states {
        let d = d_fundamental(st).iter().map(KForm::max_abs).fold(0.0, f64::max);
        if !(d < 1e-12) {
            return Err(format!("{name} at t={}: |dF| = {d:e}", st.t));
        }
        worst = worst.max(d);
        let p = d_fundamental(&st.perturbed(1e-2)).iter().map(KForm::max_abs).fold(0.0, f64::max);
        if !(p >= 1e-3) {
            return Err(format!("{name} at t={}: perturbed |dF| = {p:e}", st.t));
        }
        weakest = weakest.min(p);
    }
    Ok(format!(
        "{} exact states, max |dF| {worst:.2e} < 1e-12; perturbed min |dF| {weakest:.2e} >= 1e-3",
        states.len()
    ))
}

fn reference_states(n: usize) -> Result<Vec<(String, FrameState)>, String> {
    let mut out = Vec::new();
    for (g, kind, family, params, (lo, hi)) in reference_cases() {
        let a = alg(g);
        let (_, fam) = compatible_family(&a, kind, family, params).map_err(|e| e.to_string())?;
        for t in interior(lo, hi, n) {
            let st = sample_state(&fam, &a, kind, t, 0.0).map_err(|e| e.to_string())?;
            out.push((format!("{g} {kind} {family}"), st));
        }
    }
    Ok(out)
}

fn criterion_5() -> Outcome {
    let states = reference_states(50)?;
    let (mut ric_max, mut sd_max) = (0.0f64, 0.0f64);
    for (name, st) in &states {
        let ric = ricci(st).map_err(|e| e.to_string())?;
        let r = ric.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        let (sd, _) = weyl_split(st).map_err(|e| e.to_string())?;
        if !(r < 1e-8 && sd < 1e-8) {
            return Err(format!("{name} at t={}: |Ric| {r:e}, |W+| {sd:e}", st.t));
        }
        ric_max = ric_max.max(r);
        sd_max = sd_max.max(sd);
    }
    // equal constants in the quartic variable: flat space
    let flat = general_with_variable(
        FamilyKind::GeneralPpp,
        [0.4; 3],
        EvalVariable::Quartic { scale: 0.5 },
        Some(2.0),
    )
    .map_err(|e| e.to_string())?;
    let mut flat_max = 0.0f64;
    let (flat_lo, _) = flat.domain;
    for t in interior(flat_lo + 0.05, flat_lo + 3.0, 50) {
        let st = flat.state(t, Kind::Hk, alg(BianchiLabel::IX)).map_err(|e| e.to_string())?;
        let r = riemann(&st).map_err(|e| e.to_string())?;
        let norm = r.iter().flatten().flatten().flatten().map(|v| v * v).sum::<f64>().sqrt();
        flat_max = flat_max.max(norm);
    }
    if !(flat_max < 1e-10) {
        return Err(format!("flat family Riemann norm {flat_max:e}"));
    }
    let control = FrameState::from_jets(
        1.0,
        [Jet::constant(1.0); 3],
        Jet::constant(1.0),
        Kind::Hk,
        alg(BianchiLabel::IX),
    )
    .map_err(|e| e.to_string())?;
    let cr = ricci(&control)
        .map_err(|e| e.to_string())?
        .iter()
        .flatten()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    if !(cr > 1e-3) {
        return Err(format!("non-solution control |Ric| = {cr:e}"));
    }
    Ok(format!(
        "10 families x 50 samples: max |Ric| {ric_max:.2e}, max |W+| {sd_max:.2e}; flat |Rm| {flat_max:.2e}; control |Ric| {cr:.2}"
    ))
}

fn criterion_6() -> Outcome {
    let states = reference_states(50)?;
    for (name, st) in &states {
        let want = match st.kind {
            Kind::Hk => (4, 0),
            Kind::Hs => (2, 2),
        };
        let got = signature_counts(&frame_metric(st));
        if got != want {
            return Err(format!("{name} at t={}: signature {got:?}", st.t));
        }
    }
    Ok(format!("{} samples: (4,0) for HK, (2,2) for HS", states.len()))
}

fn criterion_7() -> Outcome {
    let states = reference_states(50)?;
    let mut nij = 0.0f64;
    for (name, st) in &states {
        let triple = endomorphisms(st).map_err(|e| format!("{name}: {e}"))?;
        let defect = triple.identity_defect(st.signature().eta);
        if defect != 0.0 {
            return Err(format!("{name}: identity defect {defect:e}"));
        }
        for m in &triple.mats {
            if !m.iter().flatten().all(|v| [0.0, 1.0, -1.0].contains(v)) {
                return Err(format!("{name}: non-integer structure matrix"));
            }
            let n = nijenhuis(st, m).iter().flatten().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
            if !(n < 1e-10) {
                return Err(format!("{name} at t={}: Nijenhuis {n:e}", st.t));
            }
            nij = nij.max(n);
        }
    }
    Ok(format!("{} samples: identities exact, max Nijenhuis {nij:.2e}", states.len()))
}

fn sup_error(fam: &SolutionFamily, sys: &EvolutionSystem, t0: f64, step: f64) -> Result<f64, String> {
    let gauge = |t: f64| fam.eval(t).map(|p| p.gauge.v).unwrap_or(f64::NAN);
    let init = fam.eval(t0).map_err(|e| e.to_string())?.values().0;
    let tr = integrate(sys, gauge, init, t0, t0 + 1.0, step).map_err(|e| e.to_string())?;
    if let Some(hit) = &tr.boundary {
        return Err(format!("{} left its domain at t={}", fam.kind, hit.t));
    }
    let mut err = 0.0f64;
    for p in &tr.points {
        let exact = fam.eval(p.t).map_err(|e| e.to_string())?.values().0;
        for i in 0..3 {
            err = err.max((p.f[i] - exact[i]).abs());
        }
    }
    Ok(err)
}

fn criterion_8() -> Outcome {
    let mut worst = 0.0f64;
    let mut ratios = Vec::new();
    for c in general_cases() {
        let (sys, fam) = general_family(&c)?;
        // with x(t) = t the pair products are linear in t and RK4 is exact
        let e = sup_error(&fam, &sys, c.window.0 + 0.5, 1e-3)?;
        if !(e < 1e-8) {
            return Err(format!("{} at step 1e-3: sup error {e:e}", fam.kind));
        }
        worst = worst.max(e);
        // x = (s t)^4 makes them genuinely nonlinear in t
        let scale = if fam.domain.1.is_finite() { 0.3 } else { 1.0 };
        let probe = general_with_variable(fam.kind, c.params, EvalVariable::Quartic { scale }, None)
            .map_err(|e| e.to_string())?;
        let t0 = probe.domain.0.max(0.0) + 0.25;
        if !(t0 + 1.0 < probe.domain.1) {
            return Err(format!("{}: quartic domain {:?} too short", fam.kind, probe.domain));
        }
        let e = sup_error(&probe, &sys, t0, 1e-3)?;
        if !(e < 1e-8) {
            return Err(format!("{} (quartic) at step 1e-3: sup error {e:e}", fam.kind));
        }
        worst = worst.max(e);
        // the order is measured where truncation dominates rounding
        let coarse = sup_error(&probe, &sys, t0, 0.05)?;
        let fine = sup_error(&probe, &sys, t0, 0.025)?;
        let ratio = coarse / fine;
        if !(12.0..=20.0).contains(&ratio) {
            return Err(format!("{}: halving ratio {ratio:.2} (errors {coarse:e}, {fine:e})", fam.kind));
        }
        ratios.push(ratio);
    }
    let rs: Vec<String> = ratios.iter().map(|r| format!("{r:.1}")).collect();
    Ok(format!(
        "5 families in x = t and x = (s t)^4: max error at step 1e-3 {worst:.2e} < 1e-8; halving ratios 0.05 -> 0.025: [{}]",
        rs.join(", ")
    ))
}

fn criterion_9() -> Outcome {
    let init = [1.0, 1.2, 0.8];
    let run = |lambda: f64| -> Result<Vec<[f64; 3]>, String> {
        let sys = contraction_system(lambda).map_err(|e| e.to_string())?;
        let tr = integrate(&sys, |_| 1.0, init, 0.0, 1.0, 1e-3).map_err(|e| e.to_string())?;
        if tr.boundary.is_some() {
            return Err(format!("lambda={lambda}: boundary hit"));
        }
        Ok(tr.points.iter().map(|p| p.f).collect())
    };
    let zero = run(0.0)?;
    if contraction_system(0.0).map_err(|e| e.to_string())?.weights()
        != reduce_label(BianchiLabel::VII0, Kind::Hk).map_err(|e| e.to_string())?.weights()
    {
        return Err("lambda = 0 weights differ from the (0,1,1) system".into());
    }
    let lambdas = [1e-2, 1e-3, 1e-4];
    let mut devs = Vec::new();
    for &l in &lambdas {
        let tr = run(l)?;
        let d = tr
            .iter()
            .zip(&zero)
            .flat_map(|(a, b)| (0..3).map(move |i| (a[i] - b[i]).abs()))
            .fold(0.0f64, f64::max);
        devs.push(d);
    }
    let xs: Vec<f64> = lambdas.iter().map(|l| l.ln()).collect();
    let ys: Vec<f64> = devs.iter().map(|d| d.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    if !((slope - 2.0).abs() <= 0.2) {
        return Err(format!("log-log slope {slope:.3}, deviations {devs:?}"));
    }
    Ok(format!(
        "deviations {:.2e}, {:.2e}, {:.2e}; log-log slope {slope:.4}",
        devs[0], devs[1], devs[2]
    ))
}

fn criterion_10() -> Outcome {
    for kind in [Kind::Hk, Kind::Hs] {
        let st = FrameState::from_jets(
            1.0,
            [Jet::constant(1.0); 3],
            Jet::constant(1.0),
            kind,
            alg(BianchiLabel::IX),
        )
        .map_err(|e| e.to_string())?;
        let sig = st.signature();
        for (s, form) in fundamental_forms(&st).iter().enumerate() {
            let star = form.hodge(&sig).map_err(|e| e.to_string())?;
            if star != *form {
                return Err(format!("{kind} form {}: star = {star:?}, form = {form:?}", s + 1));
            }
        }
    }
    Ok("star F_s = F_s (orientation +1), star Omega_s = Omega_s (orientation -1), exact".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("sigma derivation and correspondence table", criterion_1),
        ("closed-form family residuals", criterion_2),
        ("named solution residuals", criterion_3),
        ("closedness of the fundamental forms", criterion_4),
        ("curvature certification", criterion_5),
        ("metric signature", criterion_6),
        ("algebraic identities and Nijenhuis", criterion_7),
        ("integrator against closed forms", criterion_8),
        ("contraction limit", criterion_9),
        ("self-duality of the fundamental forms", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
