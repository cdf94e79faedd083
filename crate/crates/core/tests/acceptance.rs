//! End-to-end acceptance checks. Runs as a plain binary so that every
//! criterion prints exactly one pass/fail line; exits nonzero if any fails.

use nbscope_core::analytic::{
    boundary_l1_scan, decay_rule_check, eval_shift_pair, periodic_reflectionless_check,
    shift_identity_exact, ArcSpec, CheckOutcome, DecayOutcome, DecaySide, GaussianRational,
    ProbeConfig,
};
use nbscope_core::random::{
    certificate_rate_experiment, separated_values, Atom, ProcessKind, ProcessSpec, Separation,
};
use nbscope_core::rightlimit::{
    detect_eventual_periodicity, enumerate_pair_witnesses, extract_right_limits,
    find_gap_certificate, find_pair_certificate, szego_block_analysis, verdict, CertificateKind,
    FlankSide, SearchConfig, SzegoOutcome, Verdict,
};
use nbscope_core::sequence::{
    make_sequence, BoundaryFn, Edge, ExponentSet, GeneratorSpec, OneSidedSequence, Provenance,
    RotationNumber, SequenceOrigin, TwoSidedWindow,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{PI, TAU};
use std::time::Instant;

type Check = std::result::Result<String, String>;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Debug>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| format!("{e:?}"))
}

fn shift_identity() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut cases = 0;
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let values: Vec<Complex64> = (0..400)
            .map(|_| Complex64::from_polar(rng.random::<f64>(), rng.random::<f64>() * TAU))
            .collect();
        let seq = OneSidedSequence::from_values(values, SequenceOrigin::Imported { source: "random".into() });
        for _ in 0..10 {
            let z = Complex64::from_polar(rng.random_range(0.3..=0.7), rng.random::<f64>() * TAU);
            for shift in [0, 1, 5, 20] {
                let pair = ok(eval_shift_pair(&seq, shift, z, 1e-12))?;
                let (res, budget) = (pair.identity_residual.unwrap(), pair.error_budget.unwrap());
                ensure!(res <= 2.0 * budget, "residual {res} above 2·{budget} at N={shift}, z={z}");
                worst = worst.max(res / budget);
                cases += 1;
            }
        }
    }
    // exact integer sequences at z = 1/2
    let half = GaussianRational::ratio(1, 2);
    for spec in [
        GeneratorSpec::RudinShapiro,
        GeneratorSpec::Periodic { pattern: vec![c(1.0), c(-2.0), c(0.0), c(3.0)] },
        GeneratorSpec::GapPowers { exponents: ExponentSet::Factorials, fill: c(1.0) },
    ] {
        let seq = ok(make_sequence(&spec))?;
        for shift in [0, 1, 5, 20] {
            let ex = ok(shift_identity_exact(&seq, shift, &half, 200))?;
            ensure!(ex.residual.is_zero(), "exact residual nonzero for {spec:?}, N={shift}");
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure!(secs < 5.0, "took {secs:.2}s");
    Ok(format!("{cases} float cases, worst residual/budget {worst:.3}; exact residuals 0; {secs:.2}s"))
}

/// `f_-(z) = Σ_{k>=1} z^{-k}` for the all-ones two-sided sequence.
fn ones_fminus(z: Complex64) -> (Complex64, f64) {
    let w = z.inv();
    let rho = w.norm();
    let n = ((1e-16f64).ln() / rho.ln()).ceil() as u64 + 1;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut p = Complex64::new(1.0, 0.0);
    for _ in 1..=n {
        p *= w;
        sum += p;
    }
    (sum, rho.powf((n + 1) as f64) / (1.0 - rho))
}

fn pole_oracle(pattern: &[Complex64], alpha: f64, beta: f64) -> bool {
    // pole at a T-th root of unity ζ iff P(ζ) != 0; reflectionless iff no pole on the arc
    let t = pattern.len();
    !(0..t).any(|k| {
        let theta = TAU * k as f64 / t as f64;
        let in_arc = (alpha..=beta).contains(&theta)
            || (alpha..=beta).contains(&(theta + TAU))
            || (alpha..=beta).contains(&(theta - TAU));
        let zeta = Complex64::from_polar(1.0, theta);
        let p: Complex64 = pattern.iter().rev().fold(c(0.0), |acc, &a| acc * zeta + a);
        in_arc && p.norm() > 1e-9
    })
}

fn reflectionless_periodic() -> Check {
    let arc = ok(ArcSpec::new(0.1, TAU - 0.1))?;
    let check = ok(periodic_reflectionless_check(&[c(1.0)], &arc))?;
    ensure!(check.outcome == CheckOutcome::Pass, "pattern (1) failed: {:?}", check.outcome);
    let mut worst = 0.0f64;
    for i in 0..50 {
        let rho = 1.02 + 0.96 * i as f64 / 49.0;
        let z = Complex64::from_polar(rho, 0.1 + (TAU - 0.2) * ((i * 7) % 50) as f64 / 49.0);
        let (fm, tail) = ones_fminus(z);
        let dev = (c(1.0) / (c(1.0) - z) + fm).norm();
        ensure!(dev <= 1e-10 + tail, "deviation {dev} at {z}");
        worst = worst.max(dev);
    }
    let arcs = [(0.1, TAU - 0.1), (-0.5, 0.5), (PI - 0.3, PI + 0.3), (PI / 2.0 - 0.2, PI / 2.0 + 0.2), (0.3, 1.9)];
    let mut patterns = 0;
    for len in 1..=4u32 {
        for code in 0..3usize.pow(len) {
            let pattern: Vec<Complex64> =
                (0..len).map(|i| c((code / 3usize.pow(i)) as f64 % 3.0 - 1.0)).collect();
            for &(a, b) in &arcs {
                let arc = ok(ArcSpec::new(a, b))?;
                let got = ok(periodic_reflectionless_check(&pattern, &arc))?;
                let pass = got.outcome == CheckOutcome::Pass;
                ensure!(
                    pass == pole_oracle(&pattern, a, b),
                    "pattern {pattern:?} on ({a}, {b}): check says {pass}"
                );
            }
            patterns += 1;
        }
    }
    Ok(format!("pattern (1) passes, max |1/(1-z) + f_-| = {worst:.1e}; {patterns} patterns agree with the pole oracle"))
}

fn factorials_up_to(limit: u64) -> Vec<u64> {
    let mut out = vec![];
    let (mut f, mut j) = (1u64, 1u64);
    while f <= limit {
        out.push(f);
        j += 1;
        f *= j;
    }
    out
}

fn gap_hits_oracle(members: &[u64], w: u64, horizon: u64) -> Vec<u64> {
    members
        .iter()
        .copied()
        .filter(|&n| n >= w && n <= horizon)
        .filter(|&n| (1..=w).all(|k| !members.contains(&(n - k))))
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect()
}

fn gap_cfg(window: usize, horizon: u64) -> SearchConfig {
    SearchConfig {
        window,
        horizon,
        eps: 0.0,
        delta: 0.5,
        max_witnesses: 1 << 20,
        ..SearchConfig::default()
    }
}

fn gap_certificates() -> Check {
    let start = Instant::now();
    let horizon = 1_000_000;
    let fact = ok(make_sequence(&GeneratorSpec::GapPowers { exponents: ExponentSet::Factorials, fill: c(1.0) }))?;
    let cert = ok(find_gap_certificate(&fact, &gap_cfg(6, horizon)))?.ok_or("no factorial certificate")?;
    ok(cert.verify(&fact))?;
    let expected = gap_hits_oracle(&factorials_up_to(horizon), 6, horizon);
    ensure!(cert.hits == expected, "factorial hits {:?}, oracle {expected:?}", cert.hits);
    for n in [720, 5040, 40320, 362880] {
        ensure!(cert.hits.contains(&n), "{n} missing");
    }

    let squares = ok(make_sequence(&GeneratorSpec::GapPowers { exponents: ExponentSet::Squares, fill: c(1.0) }))?;
    let cert = ok(find_gap_certificate(&squares, &gap_cfg(4, horizon)))?.ok_or("no squares certificate")?;
    ok(cert.verify(&squares))?;
    let members: Vec<u64> = (0..=1000u64).map(|j| j * j).collect();
    let expected = gap_hits_oracle(&members, 4, horizon);
    ensure!(cert.hits == expected, "square hits differ from the oracle");
    let rule: Vec<u64> = (3..=1000u64).map(|j| j * j).collect();
    ensure!(expected == rule, "oracle disagrees with 2j-1 > 4");
    let secs = start.elapsed().as_secs_f64();
    ensure!(secs < 10.0, "took {secs:.2}s");
    Ok(format!(
        "factorial hits {:?}; {} square hits 9..=10^6; {secs:.2}s",
        gap_hits_oracle(&factorials_up_to(horizon), 6, horizon),
        rule.len()
    ))
}

/// Rudin–Shapiro by polynomial concatenation `P' = P Q`, `Q' = P (-Q)`.
fn rudin_shapiro_oracle(len: usize) -> Vec<f64> {
    let (mut p, mut q) = (vec![1.0], vec![1.0]);
    while p.len() < len {
        let np: Vec<f64> = p.iter().chain(q.iter()).copied().collect();
        let nq: Vec<f64> = p.iter().copied().chain(q.iter().map(|x| -x)).collect();
        (p, q) = (np, nq);
    }
    p.truncate(len);
    p
}

fn rudin_shapiro_pairs() -> Check {
    let rs = ok(make_sequence(&GeneratorSpec::RudinShapiro))?;
    let oracle = rudin_shapiro_oracle(1 << 13);
    for (n, &v) in oracle.iter().enumerate() {
        ensure!(rs.eval(n as u64).re == v, "a_{n} differs from the concatenation");
    }
    let cfg = SearchConfig { window: 4, horizon: 1 << 12, eps: 0.0, delta: 1.0, ..SearchConfig::default() };
    let all = ok(enumerate_pair_witnesses(&rs, &cfg, FlankSide::Backward, usize::MAX))?;
    ensure!(!all.truncated, "enumeration truncated");
    for j in 2..=10u32 {
        let (n, m) = (1u64 << j, 3u64 << j);
        ensure!(all.pairs.contains(&(n, m)), "({n}, {m}) not found");
        let (n, m) = (n as usize, m as usize);
        ensure!((1..=4).all(|k| oracle[n - k] == oracle[m - k]), "flanks of ({n}, {m}) differ");
        ensure!((oracle[n] - oracle[m]).abs() == 2.0, "center gap of ({n}, {m}) is not 2");
    }
    let cert = ok(find_pair_certificate(&rs, &cfg, FlankSide::Backward))?.ok_or("no certificate")?;
    ok(cert.verify(&rs))?;
    Ok(format!("(2^j, 3·2^j) for j = 2..10 among {} exact pairs; certificate with {} pairs verifies", all.pairs.len(), cert.pairs.len()))
}

/// Least `(preperiod, period)` of `pre ++ cycle^∞`, computed structurally.
fn periodic_oracle(pre: &[i64], cycle: &[i64]) -> (u64, u64) {
    let t = (1..=cycle.len())
        .find(|&d| cycle.len().is_multiple_of(d) && (0..cycle.len()).all(|i| cycle[i] == cycle[(i + d) % cycle.len()]))
        .unwrap();
    let mut cycle: Vec<i64> = cycle[..t].to_vec();
    let mut pre = pre.to_vec();
    // absorb preperiod entries that continue the cycle backwards
    while let Some(&last) = pre.last() {
        if last != cycle[t - 1] {
            break;
        }
        pre.pop();
        cycle.rotate_right(1);
    }
    (pre.len() as u64, t as u64)
}

fn szego_analysis() -> Check {
    let signs = ProcessSpec {
        kind: ProcessKind::Iid { support: vec![Atom { value: c(-1.0), prob: 0.5 }, Atom { value: c(1.0), prob: 0.5 }] },
        bound: 1.0,
        seed: 7,
    };
    let path = ok(nbscope_core::random::sample_process(&signs, 100_000))?;
    let cfg = SearchConfig { horizon: 100_000, ..SearchConfig::for_sequence(&path) };
    let report = ok(szego_block_analysis(&path, &cfg))?;
    ok(report.verify(&path))?;
    for entry in &report.witnesses {
        match entry.outcome {
            SzegoOutcome::Witness { l, .. } => ensure!(l > entry.p as u64, "L_{} = {l}", entry.p),
            ref other => return Err(format!("p = {}: {other:?}", entry.p)),
        }
    }
    ensure!(report.witnesses.len() == 8, "{} block lengths", report.witnesses.len());

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut inputs = 0;
    for pre_len in 0..=5usize {
        for period in 1..=6usize {
            for _ in 0..4 {
                let pre: Vec<i64> = (0..pre_len).map(|_| rng.random_range(-1..=1)).collect();
                let cycle: Vec<i64> = (0..period).map(|_| rng.random_range(-1..=1)).collect();
                let values: Vec<Complex64> =
                    pre.iter().chain(cycle.iter().cycle().take(3000)).map(|&v| c(v as f64)).collect();
                let seq = ok(make_sequence(&GeneratorSpec::Explicit { values }))?;
                let expected = periodic_oracle(&pre, &cycle);
                let found = ok(detect_eventual_periodicity(&seq, 64, 64, 2000, 0.0))?;
                ensure!(found == Some(expected), "pre {pre:?} cycle {cycle:?}: {found:?} vs {expected:?}");
                let cfg = SearchConfig { horizon: 2000, ..SearchConfig::for_sequence(&seq) };
                match ok(verdict(&seq, &cfg))? {
                    v @ Verdict::EventuallyPeriodic { .. } => {
                        ok(v.verify(&seq))?;
                        let Verdict::EventuallyPeriodic { period, rational_form, .. } = v else { unreachable!() };
                        ensure!(rational_form.poles.iter().all(|r| period % r.d == 0), "pole off the period-th roots");
                        let z = Complex64::new(0.4, 0.3);
                        let direct: Complex64 = (0..200).rev().fold(c(0.0), |acc, n| acc * z + seq.eval(n));
                        ensure!((rational_form.eval(z) - direct).norm() < 1e-9, "rational form disagrees with the series");
                    }
                    other => return Err(format!("verdict {} for an eventually periodic input", other.name())),
                }
                inputs += 1;
            }
        }
    }
    Ok(format!("iid ±1 mismatch witness at every p <= 8; {inputs} eventually periodic inputs detected exactly"))
}

fn hecke() -> Check {
    let seq = ok(make_sequence(&GeneratorSpec::Rotation {
        boundary: BoundaryFn::FractionalPart,
        q: ok(RotationNumber::sqrt(2))?.plus_integer(-1),
        theta: 0.0,
    }))?;
    let q = 2f64.sqrt() - 1.0;
    let frac = |n: u64| (n as f64 * q).fract();
    ensure!((frac(70) - 0.99495).abs() < 1e-5 && (frac(29) - 0.01219).abs() < 1e-5, "a_70, a_29 off");
    let flank = (1..=5).map(|k| (frac(70 + k) - frac(29 + k)).abs()).fold(0.0, f64::max);
    ensure!(flank <= 0.05, "oracle flank difference {flank}");

    let cfg = SearchConfig { window: 5, horizon: 100_000, eps: 0.05, delta: 0.5, ..SearchConfig::default() };
    let cert = ok(find_pair_certificate(&seq, &cfg, FlankSide::Forward))?.ok_or("no forward certificate")?;
    ok(cert.verify(&seq))?;
    ensure!(cert.pairs.len() >= 3, "{} pairs", cert.pairs.len());
    let small = SearchConfig { horizon: 200, ..cfg.clone() };
    let early = ok(enumerate_pair_witnesses(&seq, &small, FlankSide::Forward, usize::MAX))?;
    ensure!(early.pairs.contains(&(29, 70)), "(29, 70) not among the early pairs");
    let v = ok(verdict(&seq, &cfg))?;
    ensure!(v.name() == "StrongNaturalBoundaryEvidence", "verdict {}", v.name());
    ok(v.verify(&seq))?;
    Ok(format!("{} forward pairs, first {:?}; (29, 70) qualifies; verdict {}", cert.pairs.len(), cert.pairs[0], v.name()))
}

/// `1/AGM(1, √(1-r²))`, the closed form of `∫|1 - re^{iθ}|^{-1} dθ/2π`.
fn agm_oracle(r: f64) -> f64 {
    let (mut a, mut b) = (1.0f64, (1.0 - r * r).sqrt());
    // quadratic convergence; a fixed count avoids stalling on a last-bit oscillation
    for _ in 0..64 {
        (a, b) = ((a + b) / 2.0, (a * b).sqrt());
    }
    1.0 / a
}

/// Composite Simpson on `[0, b]` over pieces `[s·2^k, s·2^(k+1)]` that grow
/// away from a peak of width `s` at the origin.
fn graded_simpson(f: &dyn Fn(f64) -> f64, s: f64, b: f64) -> f64 {
    let mut cuts = vec![0.0, s / 1024.0];
    while *cuts.last().unwrap() * 2.0 < b {
        let next = cuts.last().unwrap() * 2.0;
        cuts.push(next);
    }
    cuts.push(b);
    let n = 2000;
    cuts.windows(2)
        .map(|w| {
            let h = (w[1] - w[0]) / n as f64;
            let inner: f64 = (1..n).map(|i| f(w[0] + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 }).sum();
            h / 3.0 * (f(w[0]) + inner + f(w[1]))
        })
        .sum()
}

fn boundary_probe() -> Check {
    let start = Instant::now();
    let ones = ok(make_sequence(&GeneratorSpec::Periodic { pattern: vec![c(1.0)] }))?;
    let radii: Vec<f64> = (1..=4).map(|k| 1.0 - 10f64.powi(-k)).collect();
    let report = ok(boundary_l1_scan(&ones, &ArcSpec::Full, &radii, &ProbeConfig::default()))?;
    ensure!(report.entries.len() == 4, "skipped radii: {:?}", report.skipped);
    ensure!(report.entries.windows(2).all(|w| w[0].integral < w[1].integral), "I(r) not increasing");
    let fit = report.growth_fit.ok_or("no growth fit")?;
    ensure!(fit.relative_residual < 0.15, "fit residual {}", fit.relative_residual);
    let mut worst = 0.0f64;
    for e in &report.entries {
        let r = e.r;
        // integrand symmetric in θ; integrate [0, π] with the peak at the left end.
        // |1 - re^{iθ}|² written without the cancellation of 1 - 2r cos θ + r²
        let g = |t: f64| 1.0 / ((1.0 - r).powi(2) + 4.0 * r * (t / 2.0).sin().powi(2)).sqrt();
        let quad = graded_simpson(&g, 1.0 - r, PI) / PI;
        let closed = agm_oracle(r);
        ensure!((quad - closed).abs() < 1e-8 * closed, "oracles disagree at r = {r}: {quad} vs {closed}");
        let err = (e.integral - quad).abs();
        ensure!(err <= e.quad_err + e.trunc_err + 1e-8 * quad, "r = {r}: I = {}, oracle {quad}, bounds {} + {}", e.integral, e.quad_err, e.trunc_err);
        worst = worst.max(err / quad);
    }
    let arc = ok(ArcSpec::new(PI / 2.0, 3.0 * PI / 2.0))?;
    let arc_report = ok(boundary_l1_scan(&ones, &arc, &[0.999, 0.9999], &ProbeConfig::default()))?;
    ensure!(arc_report.entries.len() == 2, "arc radii skipped: {:?}", arc_report.skipped);
    let diff = (arc_report.entries[0].integral - arc_report.entries[1].integral).abs();
    ensure!(diff < 1e-3, "arc integrals differ by {diff}");
    let secs = start.elapsed().as_secs_f64();
    ensure!(secs < 60.0, "took {secs:.2}s");
    Ok(format!(
        "I(r) increasing, log fit slope {:.4} residual {:.2}%, worst relative oracle gap {worst:.1e}; arc |ΔI| = {diff:.1e}; {secs:.2}s",
        fit.slope,
        100.0 * fit.relative_residual
    ))
}

fn erdos_edges() -> Check {
    let hard = ok(make_sequence(&GeneratorSpec::Erdos { edge: Edge::Hard }))?;
    let soft = ok(make_sequence(&GeneratorSpec::Erdos { edge: Edge::Soft }))?;
    let cfg = SearchConfig { window: 5, horizon: 1_000_000, eps: 0.01, delta: 0.5, ..SearchConfig::default() };
    let cert = ok(find_gap_certificate(&hard, &cfg))?.ok_or("hard edge: no certificate")?;
    ensure!(cert.kind == CertificateKind::GapZeroFlank, "wrong kind");
    ok(cert.verify(&hard))?;
    ensure!(ok(find_gap_certificate(&soft, &cfg))?.is_none(), "soft edge produced a gap certificate");
    let rl_cfg = SearchConfig { window: 3, horizon: 1_000_000, eps: 0.1, ..SearchConfig::default() };
    let report = ok(extract_right_limits(&soft, &rl_cfg))?;
    ensure!(!report.candidates.is_empty(), "no right-limit candidates");
    let mut spread = 0.0f64;
    for cand in &report.candidates {
        let v = &cand.window.values;
        let centre = v[v.len() / 2];
        spread = spread.max(v.iter().map(|x| (x - centre).norm()).fold(0.0, f64::max));
    }
    ensure!(spread <= 0.2, "candidate spread {spread}");
    Ok(format!(
        "hard edge: {} gap hits from {:?}; soft edge: none, {} candidates within {spread:.3} of constant",
        cert.hits.len(),
        &cert.hits[..3.min(cert.hits.len())],
        report.candidates.len()
    ))
}

fn monte_carlo() -> Check {
    let spec = ProcessSpec {
        kind: ProcessKind::Iid { support: vec![Atom { value: c(0.0), prob: 0.5 }, Atom { value: c(1.0), prob: 0.5 }] },
        bound: 1.0,
        seed: 42,
    };
    let cfg = SearchConfig { window: 3, horizon: 10_000, eps: 0.0, delta: 1.0, ..SearchConfig::default() };
    let report = ok(certificate_rate_experiment(&spec, 20, &cfg))?;
    ok(report.verify())?;
    ensure!(report.hits == 20, "{} of 20 trials certified", report.hits);
    let covered = report.records.iter().filter(|r| r.variance.covers(0.25, 3.0)).count();
    ensure!(covered >= 19, "variance within 1/4 ± 3 SE in only {covered} trials");
    let again = ok(certificate_rate_experiment(&spec, 20, &cfg))?;
    ensure!(again == report, "rerun differs");
    let dist = [(c(0.0), 0.5), (c(1.0), 0.5)];
    match ok(separated_values(&dist, 4, 0.25))? {
        Separation::Separated { separation, threshold, .. } => {
            ensure!(separation == 1.0 && separation >= 0.125f64.sqrt(), "separation {separation}");
            Ok(format!("20/20 certified, variance covered in {covered}/20, separation {separation} >= {threshold:.4}"))
        }
        other => Err(format!("{other:?}")),
    }
}

fn decay_rule() -> Check {
    let win = |f: &dyn Fn(i64) -> f64, radius: i64| {
        TwoSidedWindow::from_values((-radius..=radius).map(|n| c(f(n))).collect(), Provenance::Center(radius as u64), 0.0)
    };
    let spike = ok(win(&|n| if n == -1 { 1.0 } else { 0.0 }, 5))?;
    let zero = ok(win(&|_| 0.0, 5))?;
    let halving = ok(win(&|n| if n >= 0 { 0.5f64.powi(n as i32) } else { 0.0 }, 10))?;
    let a = ok(decay_rule_check(&spike, DecaySide::Positive, 1.0, 1.0, 0.5))?;
    let b = ok(decay_rule_check(&zero, DecaySide::Positive, 1.0, 1.0, 0.5))?;
    let d = ok(decay_rule_check(&halving, DecaySide::Positive, 1.0, std::f64::consts::LN_2, 0.5))?;
    ensure!(a == DecayOutcome::NotReflectionless { witness: -1 }, "spike: {a:?}");
    ensure!(b == DecayOutcome::ConsistentWithZero, "zero: {b:?}");
    ensure!(d == DecayOutcome::NotReflectionless { witness: 0 }, "halving: {d:?}");
    Ok("witness -1, consistent with zero, witness 0".into())
}

fn main() {
    let checks: [(&str, fn() -> Check); 10] = [
        ("shift identity", shift_identity),
        ("reflectionless periodic example", reflectionless_periodic),
        ("gap certificates", gap_certificates),
        ("Rudin-Shapiro pair certificates", rudin_shapiro_pairs),
        ("block recurrence analysis", szego_analysis),
        ("Hecke rotation", hecke),
        ("boundary probe", boundary_probe),
        ("hard/soft edge discrimination", erdos_edges),
        ("Monte Carlo certificate rate", monte_carlo),
        ("decay rule", decay_rule),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let t = Instant::now();
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail} [{:.2}s]", i + 1, t.elapsed().as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {why} [{:.2}s]", i + 1, t.elapsed().as_secs_f64());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed in {:.1}s", checks.len() - failed, start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
