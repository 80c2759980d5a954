// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Run with `cargo test --test acceptance`, or
// `cargo test --test acceptance -- 1 6` for a subset.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ffcs::baseline::RealSensing;
use ffcs::experiments::{self, Experiment, ExperimentConfig};
use ffcs::field::{count_primitive_polynomials, euler_phi, prime_power, Field};
use ffcs::lifting::LiftSpec;
use ffcs::matrix::{FieldMatrix, FieldVector};
use ffcs::noisy::{AdversaryStrategy, NoiseModel, NoisyOptions, NoisyScheme};
use ffcs::sensing::{ceil_log, l0_oracle, sample_complexity, SensingScheme, SparseSignal};
use ffcs::tracking::{quantize, synthetic_series, track_finite, track_real};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance").join(name);
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).expect("scratch dir");
    dir
}

fn field_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for q in [2u64, 3, 8, 256, 1 << 16] {
        let f = Field::of_order(q).map_err(|e| e.to_string())?;
        let o = f.order();
        for _ in 0..10_000 {
            let (a, b, c) = (rng.random_range(0..o), rng.random_range(0..o), rng.random_range(0..o));
            check(f.add(a, b) == f.add(b, a), format!("F_{q}: add commutes"))?;
            check(f.mul(a, b) == f.mul(b, a), format!("F_{q}: mul commutes"))?;
            check(f.add(f.add(a, b), c) == f.add(a, f.add(b, c)), format!("F_{q}: add associates"))?;
            check(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)), format!("F_{q}: mul associates"))?;
            check(
                f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)),
                format!("F_{q}: distributive"),
            )?;
            check(f.add(a, 0) == a && f.mul(a, 1) == a && f.mul(a, 0) == 0, format!("F_{q}: identities"))?;
            check(f.add(a, f.neg(a)) == 0 && f.sub(f.add(a, b), b) == a, format!("F_{q}: additive inverse"))?;
            if a != 0 {
                let inv = f.inv(a).ok_or(format!("F_{q}: no inverse of {a}"))?;
                check(f.mul(a, inv) == 1, format!("F_{q}: multiplicative inverse"))?;
                check(f.div(f.mul(b, a), a) == Some(b), format!("F_{q}: division"))?;
            }
        }
    }
    let mut fields = 0;
    for q in 2..=(1u64 << 16) {
        if prime_power(q).is_none() {
            continue;
        }
        let f = Field::of_order(q).map_err(|e| e.to_string())?;
        let g = f.group_order();
        if let Some(e) = (0..g).find(|&e| f.log(f.alpha_pow(e as i64)) != Some(e)) {
            return Err(format!("F_{q}: log(alpha^{e})"));
        }
        if let Some(a) = (1..f.order()).find(|&a| f.log(a).map(|e| f.alpha_pow(e as i64)) != Some(a)) {
            return Err(format!("F_{q}: alpha^log({a})"));
        }
        check(f.log(0).is_none(), format!("F_{q}: log(0) defined"))?;
        fields += 1;
    }
    Ok(format!("5 fields x 10^4 law checks; exp/log exhaustive over {fields} fields"))
}

/// Brute-force primitivity over F_2 with polynomials as bit masks.
fn is_primitive_f2(poly: u32, s: u32) -> bool {
    let order = (1u32 << s) - 1;
    let mut x = 1u32;
    for e in 1..=order {
        x <<= 1;
        if x >> s & 1 == 1 {
            x ^= poly;
        }
        if x == 1 {
            return e == order;
        }
    }
    false
}

fn primitive_counts() -> Outcome {
    let expected = [1u64, 1, 2, 2, 6, 6];
    let mut got = Vec::new();
    for s in 1..=6u32 {
        let count = count_primitive_polynomials(2, s).map_err(|e| e.to_string())?;
        let phi = euler_phi((1 << s) - 1) / s as u64;
        let brute = (0..1u32 << s).filter(|low| is_primitive_f2((1 << s) | low, s)).count() as u64;
        check(
            count == expected[s as usize - 1] && count == phi && count == brute,
            format!("s={s}: count {count}, phi/s {phi}, brute {brute}"),
        )?;
        got.push(count);
    }
    Ok(format!("counts {got:?}"))
}

fn table_one() -> Outcome {
    let f = Field::build(2, 3, Some(&[1, 1, 0, 1])).map_err(|e| e.to_string())?;
    let rows: [(Option<i64>, [u32; 3]); 8] = [
        (None, [0, 0, 0]),
        (Some(0), [1, 0, 0]),
        (Some(1), [0, 1, 0]),
        (Some(2), [0, 0, 1]),
        (Some(3), [1, 1, 0]),
        (Some(4), [0, 1, 1]),
        (Some(5), [1, 1, 1]),
        (Some(6), [1, 0, 1]),
    ];
    for (power, coords) in rows {
        let a = match power {
            None => 0,
            Some(e) => f.alpha_pow(e),
        };
        check(f.digits(a) == coords, format!("row {power:?}: {:?} != {coords:?}", f.digits(a)))?;
        check(f.from_digits(&coords) == a, format!("row {power:?}: from_digits"))?;
        check(f.log(a) == power.map(|e| e as u32), format!("row {power:?}: log"))?;
    }
    check(f.alpha_pow(7) == 1, "alpha^7 != 1")?;
    Ok("8 rows match".into())
}

fn lifting_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    for (q, s, n) in [(2u64, 3u32, 20usize), (256, 2, 300)] {
        let base = Field::of_order(q).map_err(|e| e.to_string())?;
        let lift = LiftSpec::new(&base, s).map_err(|e| e.to_string())?;
        let o = base.order();
        for trial in 0..200 {
            let rows = s as usize * rng.random_range(1..=6);
            let a = FieldMatrix::from_fn(&base, rows, n, |_, _| rng.random_range(0..o));
            let x = FieldVector::new(&base, (0..n).map(|_| rng.random_range(0..o)).collect())
                .map_err(|e| e.to_string())?;
            let y = a.mul_vec(&x).map_err(|e| e.to_string())?;
            let lhs = lift.lift_vector(&y).map_err(|e| e.to_string())?;
            let rhs = lift
                .lift_matrix(&a)
                .and_then(|la| Ok(la.mul_vec(&lift.embed_vector(&x)?)?))
                .map_err(|e| e.to_string())?;
            check(lhs == rhs, format!("q={q} s={s} trial {trial}"))?;
        }
    }
    Ok("400 pairs exact".into())
}

fn signals_up_to(n: usize, b: usize, q: u32, out: &mut Vec<SparseSignal>) {
    fn rec(n: usize, start: usize, left: usize, q: u32, cur: &mut Vec<(usize, u32)>, out: &mut Vec<SparseSignal>) {
        out.push(SparseSignal::from_pairs(n, cur.iter().copied()).expect("valid support"));
        if left == 0 {
            return;
        }
        for j in start..n {
            for v in 1..q {
                cur.push((j, v));
                rec(n, j + 1, left - 1, q, cur, out);
                cur.pop();
            }
        }
    }
    rec(n, 0, b, q, &mut Vec::new(), out);
}

fn oracle_equivalence() -> Outcome {
    let mut compared = 0usize;
    for q in [2u64, 4] {
        for b in 1..=2usize {
            for n in (2 * b + 1)..=8 {
                let s = SensingScheme::build(q, n, b).map_err(|e| format!("q={q} n={n} b={b}: {e}"))?;
                let mut signals = Vec::new();
                signals_up_to(n, b, q as u32, &mut signals);
                for x in signals {
                    let y = s.measure(&x).map_err(|e| e.to_string())?;
                    let fast = s.recover(&y).map_err(|e| format!("q={q} n={n} b={b} {x:?}: {e}"))?;
                    let slow = l0_oracle(s.matrix(), &y, b).map_err(|e| e.to_string())?;
                    check(fast == slow && fast == x, format!("q={q} n={n} b={b} {x:?}"))?;
                    compared += 1;
                }
            }
        }
    }
    Ok(format!("{compared} signals agree"))
}

fn sweep_at_design() -> Outcome {
    let mut cfg = ExperimentConfig::defaults(Experiment::RecoverySweep);
    cfg.theta = vec![1.0];
    let rows = experiments::run_recovery_sweep(&cfg).map_err(|e| e.to_string())?;
    let mut report = Vec::new();
    let mut real_lower = false;
    for pair in rows.chunks(2) {
        let (fin, real) = (&pair[0], &pair[1]);
        check(fin.method == "finite" && real.method == "real", "row order")?;
        check(fin.success_fraction == 1.0, format!("finite success {} at b={}", fin.success_fraction, fin.b))?;
        real_lower |= real.success_fraction < fin.success_fraction;
        report.push(format!("b={} m={} finite={} real={}", fin.b, fin.m, fin.success_fraction, real.success_fraction));
    }
    check(rows.len() == 6, format!("{} rows", rows.len()))?;
    check(real_lower, "real success never below finite")?;
    Ok(report.join("; "))
}

fn saturation_table() -> Outcome {
    let cfg = ExperimentConfig::defaults(Experiment::MeasurementSaturation);
    let rows = experiments::run_measurement_saturation(&cfg).map_err(|e| e.to_string())?;
    check(rows.len() == 2 * 4 * 16, format!("{} rows", rows.len()))?;
    for row in &rows {
        let q = 1u64 << row.log2_q;
        let b = experiments::sparsity_level(row.n, row.r) as u64;
        let mut levels = 0u64;
        let mut reach = 1u64;
        while reach < row.n as u64 {
            reach *= q;
            levels += 1;
        }
        check(row.m == 2 * b * levels, format!("{row:?}: expected {}", 2 * b * levels))?;
        check((row.m == 2 * b) == (q >= row.n as u64), format!("{row:?}: saturation point"))?;
    }
    Ok(format!("{} rows; m = 2b exactly when q >= n", rows.len()))
}

fn worst_case() -> Outcome {
    let mut decodes = 0usize;
    for delta in [0.0, 0.1, 0.2, 0.3, 0.4] {
        let s = NoisyScheme::build(2, 7, 1, NoiseModel::WorstCase { delta }, NoisyOptions::default())
            .map_err(|e| format!("delta={delta}: {e}"))?;
        let budget = s.adversary_budget();
        check(s.outer().min_distance() > 2 * budget, format!("delta={delta}: d <= 2 budget"))?;
        let m = s.measurements();
        check(m <= 24, format!("m = {m} too large to enumerate"))?;
        let field = s.inner().base_field().clone();
        let noises: Vec<FieldVector> = (0u32..1 << m)
            .map(|bits| FieldVector::new(&field, (0..m).map(|i| bits >> i & 1).collect()).expect("binary"))
            .filter(|e| s.outer_weight(e) <= budget)
            .collect();
        let mut signals = Vec::new();
        signals_up_to(7, 1, 2, &mut signals);
        for x in &signals {
            let clean = s.measure(x).map_err(|e| e.to_string())?;
            for e in &noises {
                let y = clean.add(e).map_err(|e| e.to_string())?;
                let xh = s.recover_noisy(&y).map_err(|err| format!("delta={delta} {x:?}: {err}"))?;
                check(&xh == x, format!("delta={delta}: wrong recovery of {x:?}"))?;
                decodes += 1;
            }
        }
    }

    let s = NoisyScheme::build(256, 255, 4, NoiseModel::WorstCase { delta: 0.2 }, NoisyOptions::default())
        .map_err(|e| e.to_string())?;
    let budget = s.adversary_budget();
    check(budget > 0 && s.outer().min_distance() > 2 * budget, "large config budget")?;
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    for i in 0..1000 {
        let w = rng.random_range(0..=4);
        let support = sample(&mut rng, 255, w).into_vec();
        let x = SparseSignal::from_pairs(255, support.into_iter().map(|j| (j, rng.random_range(1..256u32))))
            .map_err(|e| e.to_string())?;
        let strategy = AdversaryStrategy::ALL[i % AdversaryStrategy::ALL.len()];
        let weight = if i % 2 == 0 { budget } else { rng.random_range(0..=budget) };
        let e = s.adversarial_noise(strategy, weight, &mut rng);
        check(s.outer_weight(&e) <= budget, "adversary exceeded budget")?;
        let y = s.measure(&x).and_then(|c| Ok(c.add(&e)?)).map_err(|e| e.to_string())?;
        let xh = s.recover_noisy(&y).map_err(|e| format!("pattern {i}: {e}"))?;
        check(xh == x, format!("pattern {i} ({}): wrong recovery", strategy.name()))?;
    }
    Ok(format!("{decodes} exhaustive decodes at (2,7,1); 1000 patterns at (256,255,4), budget {budget}"))
}

fn q_symmetric() -> Outcome {
    let mut cfg = ExperimentConfig::defaults(Experiment::NoiseSuite);
    cfg.delta.clear();
    let rows = experiments::run_noise_suite(&cfg).map_err(|e| e.to_string())?;
    check(rows.len() == cfg.lambda.len(), format!("{} rows", rows.len()))?;
    let mut report = Vec::new();
    for row in &rows {
        check(row.status == "ok" && row.trials == 500, format!("{row:?}"))?;
        check(row.conditional_exact_fraction == 1.0, format!("{row:?}"))?;
        report.push(format!(
            "lambda={} cond={}/{} exact={}",
            row.parameter, row.conditional_exact_fraction, row.conditional_trials, row.exact_fraction
        ));
    }
    Ok(report.join("; "))
}

/// Quantization floor computed directly from the raw series with global
/// uniform bins.
fn floor_oracle(series: &[Vec<f64>], q: u32) -> Vec<f64> {
    let lo = series.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    let hi = series.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
    let w = (hi - lo) / q as f64;
    series
        .iter()
        .map(|x| {
            let ss: f64 = x
                .iter()
                .map(|&v| {
                    let k = ((v - lo) / w).floor().clamp(0.0, (q - 1) as f64);
                    let c = lo + (k + 0.5) * w;
                    (v - c) * (v - c)
                })
                .sum();
            (ss / x.len() as f64).sqrt()
        })
        .collect()
}

fn tracking() -> Outcome {
    let (n, t, q) = (256usize, 100usize, 256u32);
    let b = experiments::sparsity_level(n, 0.2);
    let series = synthetic_series(n, t, b, 77);
    let mut distinct: Vec<f64> = series.iter().flatten().copied().collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    check(distinct.len() > q as usize, "synthetic series should need binning")?;

    let tracked = quantize(&series, q).map_err(|e| e.to_string())?;
    let b = b.max(tracked.b_max());
    let scheme = SensingScheme::build(q as u64, n, b).map_err(|e| e.to_string())?;
    let finite = track_finite(&tracked, &scheme).map_err(|e| e.to_string())?;
    let floor = floor_oracle(&series, q);
    check(finite.errors.len() == t, "trace length")?;
    let worst = finite.errors.iter().zip(&floor).map(|(a, f)| (a - f).abs()).fold(0.0, f64::max);
    check(worst <= 1e-12, format!("finite trace off the floor by {worst:e}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(78);
    let real = RealSensing::sample(scheme.measurements(), n, Default::default(), &mut rng).map_err(|e| e.to_string())?;
    let real_trace = track_real(&tracked, &real, b);
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (first, last) = (mean(&real_trace.errors[..20]), mean(&real_trace.errors[t - 20..]));
    check(last > first, format!("real error did not grow: first {first:.4} last {last:.4}"))?;

    // Binary series, at most `bb` flips per step, written to CSV.
    let (nb, tb, bb) = (64usize, 50usize, 3usize);
    let mut rng = ChaCha8Rng::seed_from_u64(79);
    let mut x: Vec<u8> = (0..nb).map(|_| rng.random_range(0..2)).collect();
    let mut text = String::new();
    for step in 0..tb {
        if step > 0 {
            let flips = rng.random_range(0..=bb);
            for j in sample(&mut rng, nb, flips) {
                x[j] ^= 1;
            }
        }
        let line: Vec<String> = x.iter().map(u8::to_string).collect();
        text.push_str(&line.join(","));
        text.push('\n');
    }
    let dir = scratch("binary_csv");
    let input = dir.join("binary.csv");
    fs::write(&input, text).map_err(|e| e.to_string())?;
    let mut cfg = ExperimentConfig::defaults(Experiment::TrackCsv);
    cfg.q = vec![2];
    cfg.b = Some(bb);
    cfg.input = Some(input);
    let runs = experiments::run_tracking(&cfg).map_err(|e| e.to_string())?;
    check(runs.len() == 1 && runs[0].b_max <= bb, "binary run shape")?;
    check(runs[0].err_finite.iter().all(|&e| e == 0.0), "binary finite trace not zero")?;
    check(runs[0].err_finite.len() == tb, "binary trace length")?;

    Ok(format!(
        "floor match within {worst:e}; real first20 {first:.4} last20 {last:.4}; binary trace zero over {tb} steps"
    ))
}

fn storage() -> Outcome {
    let sc = sample_complexity(256, 1024, 4);
    let m = 2 * 4 * ceil_log(256, 1024) as u64;
    check(m == 16 && sc.m_finite == m, format!("m_finite {}", sc.m_finite))?;
    check(sc.storage_bits_finite == 128 && sc.storage_bits_finite == m * 8, format!("bits {}", sc.storage_bits_finite))?;
    for j in [16u64, 32, 64] {
        let real = sc.storage_bits_real(j);
        check(real * 8 == j * sc.storage_bits_finite, format!("j={j}: real bits {real}"))?;
    }
    Ok("128 bits; ratios 2, 4, 8".into())
}

fn suite_configs(root: &Path, csv: &Path) -> Vec<ExperimentConfig> {
    let mut cfgs: Vec<ExperimentConfig> = [
        Experiment::RecoverySweep,
        Experiment::MeasurementSaturation,
        Experiment::TrackSynthetic,
        Experiment::NoiseSuite,
    ]
    .into_iter()
    .map(ExperimentConfig::defaults)
    .collect();
    let mut track_csv = ExperimentConfig::defaults(Experiment::TrackCsv);
    track_csv.input = Some(csv.to_path_buf());
    track_csv.q = vec![64];
    cfgs.push(track_csv);
    for (i, c) in cfgs.iter_mut().enumerate() {
        c.seed = 2024;
        c.out = root.join(format!("exp{i}"));
    }
    cfgs
}

fn determinism() -> Outcome {
    let dir = scratch("determinism");
    let csv = dir.join("series.csv");
    let rows: Vec<String> = synthetic_series(40, 30, 3, 5)
        .iter()
        .map(|x| x.iter().map(|v| format!("{v}")).collect::<Vec<_>>().join(","))
        .collect();
    fs::write(&csv, rows.join("\n")).map_err(|e| e.to_string())?;

    let mut outputs = Vec::new();
    for run in ["a", "b"] {
        let mut files = Vec::new();
        for cfg in suite_configs(&dir.join(run), &csv) {
            files.extend(experiments::run(&cfg).map_err(|e| e.to_string())?);
        }
        outputs.push(files);
    }
    check(outputs[0].len() == outputs[1].len(), "different file counts")?;
    for (a, b) in outputs[0].iter().zip(&outputs[1]) {
        let (ba, bb) = (fs::read(a).map_err(|e| e.to_string())?, fs::read(b).map_err(|e| e.to_string())?);
        check(ba == bb, format!("{} differs", a.display()))?;
    }
    Ok(format!("{} CSVs byte-identical", outputs[0].len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 12] = [
        ("1 field laws", field_laws, Duration::from_secs(5)),
        ("2 primitive polynomial counts", primitive_counts, Duration::from_secs(5)),
        ("3 F_8 power table", table_one, Duration::from_secs(1)),
        ("4 lifting identity", lifting_identity, Duration::from_secs(5)),
        ("5 l0 oracle equivalence", oracle_equivalence, Duration::from_secs(60)),
        ("6 recovery at design sparsity", sweep_at_design, Duration::from_secs(600)),
        ("7 measurement saturation", saturation_table, Duration::from_secs(1)),
        ("8 worst-case noise", worst_case, Duration::from_secs(120)),
        ("9 q-ary symmetric noise", q_symmetric, Duration::from_secs(120)),
        ("10 tracking", tracking, Duration::from_secs(300)),
        ("11 storage accounting", storage, Duration::from_secs(1)),
        ("12 determinism", determinism, Duration::from_secs(1800)),
    ];
    // Optional criterion numbers on the command line select a subset.
    let only: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let number = name.split(' ').next().unwrap_or_default();
        if !only.is_empty() && !only.iter().any(|o| o == number) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if took > budget => Err(format!("{msg}; took {took:.2?}, budget {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("[PASS] {name} ({took:.2?}): {msg}"),
            Err(msg) => {
                failed += 1;
                println!("[FAIL] {name} ({took:.2?}): {msg}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
