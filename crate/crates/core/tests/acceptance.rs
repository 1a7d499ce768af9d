//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use urllc_mc::fbl::{q_func, q_inv, FblContext};
use urllc_mc::outage::{mc_outage, sc_outage, succ_first, ChaseModel, LinkBlerProfile};
use urllc_mc::resource::{normalized_usage, usage_at_reliability};
use urllc_mc::scenario::{cmd_simulate, parse_scenario};
use urllc_mc::sim::{DeliveryPath, Numerology, Simulator};
use urllc_mc::solver::BlerPolicy;
use urllc_mc::Scheme;

/// Two-sided 99.99% normal quantile.
const Z_9999: f64 = 3.890_591_886_413_094;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Box<dyn FnOnce() -> Outcome>);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let result = f();
    let elapsed = start.elapsed();
    let suffix = format!(" [{:.3} s]", elapsed.as_secs_f64());
    match (result, limit) {
        (Ok(d), Some(l)) if elapsed > l => {
            Err(format!("{d}; exceeded {:.0} s{suffix}", l.as_secs_f64()))
        }
        (Ok(d), _) => Ok(d + &suffix),
        (Err(d), _) => Err(d + &suffix),
    }
}

fn operating_point(scheme: Scheme, m: u32, db: f64) -> urllc_mc::resource::UsageReport {
    let ctx = FblContext::from_db(256, db).unwrap();
    usage_at_reliability(scheme, m, 1e-5, &ctx, BlerPolicy::Equal, ChaseModel::Zero).unwrap()
}

fn single_connectivity_row() -> Outcome {
    let r = operating_point(Scheme::Sc, 1, 10.0);
    check(
        (r.bler_target - 1.826e-3).abs() <= 2e-5
            && (r.channel_use_single - 85.14).abs() <= 0.05
            && (r.total_usage - 85.44).abs() <= 0.10,
        format!(
            "p_d = {:.4}%, R = {:.3}, U = {:.3}",
            100.0 * r.bler_target,
            r.channel_use_single,
            r.total_usage
        ),
    )
}

fn multi_connectivity_row() -> Outcome {
    let r = operating_point(Scheme::Mc, 2, 10.0);
    check(
        (r.bler_target - 3.28e-2).abs() <= 2e-4
            && (r.channel_use_single - 80.88).abs() <= 0.05
            && (r.total_usage - 172.20).abs() <= 0.10,
        format!(
            "p_d = {:.3}%, R = {:.3}, U = {:.3} (published 166.12 not reproducible)",
            100.0 * r.bler_target,
            r.channel_use_single,
            r.total_usage
        ),
    )
}

fn symmetric_closed_form() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let p: f64 = rng.random();
        let out = sc_outage(&LinkBlerProfile::symmetric(p, p, 0.0).unwrap()).p_out;
        worst = worst.max((out - (3.0 * p * p - 2.0 * p * p * p)).abs());
    }
    let p = 1.826e-3;
    let at = sc_outage(&LinkBlerProfile::symmetric(p, p, 0.0).unwrap()).p_out;
    check(
        worst <= 1e-14 && ((at - 1e-5) / 1e-5).abs() <= 0.01,
        format!("max abs error {worst:.1e}, outage at 0.1826% = {at:.4e}"),
    )
}

fn product_law() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let link = LinkBlerProfile::symmetric(rng.random(), rng.random(), 0.0).unwrap();
        let single = sc_outage(&link).p_out;
        for k in 1..=4 {
            let multi = mc_outage(&vec![link; k]).unwrap();
            let expect = single.powi(k as i32);
            if expect > 0.0 {
                worst = worst.max(((multi - expect) / expect).abs());
            }
        }
    }
    let p = 0.0328;
    let link = LinkBlerProfile::symmetric(p, p, 0.0).unwrap();
    let pair = mc_outage(&[link, link]).unwrap();
    check(
        worst <= 1e-13 && ((pair - 1e-5) / 1e-5).abs() <= 0.02,
        format!("max rel error {worst:.1e}, two links at 3.28% = {pair:.4e}"),
    )
}

fn normalized_usage_point() -> Outcome {
    let link = LinkBlerProfile::symmetric(0.01, 0.1, 0.0).unwrap();
    let sc = normalized_usage(Scheme::Sc, 1, &link).unwrap();
    let mc = normalized_usage(Scheme::Mc, 2, &link).unwrap();
    check(
        (sc - 1.109).abs() <= 0.001 && (mc - 2.218).abs() <= 0.002,
        format!("SC {sc:.4}, MC(2) {mc:.4}"),
    )
}

fn savings_band() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for db in [0.0, 10.0] {
        let sc = operating_point(Scheme::Sc, 1, db).total_usage;
        let mc = operating_point(Scheme::Mc, 2, db).total_usage;
        let s = 1.0 - sc / mc;
        ok &= (0.46..=0.52).contains(&s);
        parts.push(format!("{db} dB: {:.2}%", 100.0 * s));
    }
    check(ok, parts.join(", "))
}

fn finite_blocklength_roundtrip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut worst_bits, mut worst_q): (f64, f64) = (0.0, 0.0);
    for _ in 0..10_000 {
        let l: u32 = rng.random_range(8..=8192);
        let db: f64 = rng.random_range(-10.0..30.0);
        let p = 10f64.powf(rng.random_range(-9.0..-0.31));
        let ctx = FblContext::from_db(l, db).unwrap();
        let r = ctx.channel_use(p).unwrap();
        let back = ctx.information_bits(r, p).unwrap();
        worst_bits = worst_bits.max(((back - f64::from(l)) / f64::from(l)).abs());

        let q = 10f64.powf(rng.random_range(-12.0..-0.302));
        let q = if rng.random::<bool>() { q } else { 1.0 - q };
        let rt = q_func(q_inv(q).unwrap()).unwrap();
        worst_q = worst_q.max(((rt - q) / q).abs());
    }
    check(
        worst_bits <= 1e-9 && worst_q <= 1e-12,
        format!("payload reconstruction {worst_bits:.1e}, Q roundtrip {worst_q:.1e}"),
    )
}

fn random_profile(rng: &mut ChaCha8Rng) -> LinkBlerProfile {
    let mut draw = || rng.random_range(5e-3f64..=0.3);
    let (p_m1, p_d1, p_m2, p_d2) = (draw(), draw(), draw(), draw());
    let p_c = draw().min(p_d1).min(p_d2);
    LinkBlerProfile::new(p_m1, p_d1, p_m2, p_d2, p_c).unwrap()
}

fn count_within(count: u64, trials: u64, p: f64) -> bool {
    let n = trials as f64;
    (count as f64 / n - p).abs() <= Z_9999 * (p * (1.0 - p) / n).sqrt() + 0.5 / n
}

fn monte_carlo_oracle() -> Outcome {
    const TRIALS: u64 = 1_000_000;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut failures = Vec::new();
    for i in 0..20u64 {
        let profile = random_profile(&mut rng);
        let partner = random_profile(&mut rng);

        let sc = Simulator::new(vec![profile], Numerology::default()).unwrap();
        let tally = sc.run(TRIALS, 1000 + i, false).unwrap();
        let b = sc_outage(&profile);
        let leaves = [
            (DeliveryPath::First, b.p_succ_first),
            (DeliveryPath::TimeoutRetx, b.p_succ_timeout_retx),
            (DeliveryPath::NackRetx, b.p_succ_nack_retx),
            (DeliveryPath::Outage, b.p_out),
        ];
        for (path, p) in leaves {
            if !count_within(tally.path_count(path), TRIALS, p) {
                failures.push(format!("profile {i} {}", path.as_str()));
            }
        }
        if !count_within(tally.outages(), TRIALS, b.p_out) {
            failures.push(format!("profile {i} outage"));
        }
        // Usage is 1 + the retransmission indicator.
        let retx = tally.multiples_sum - TRIALS;
        if !count_within(retx, TRIALS, 1.0 - b.p_succ_first) {
            failures.push(format!("profile {i} mean usage"));
        }

        let links = [profile, partner];
        let mc = Simulator::new(links.to_vec(), Numerology::default()).unwrap();
        let tally = mc.run(TRIALS, 2000 + i, false).unwrap();
        let (f1, f2) = (succ_first(&profile), succ_first(&partner));
        let hist = [
            f1 * f2,
            f1 * (1.0 - f2) + (1.0 - f1) * f2,
            (1.0 - f1) * (1.0 - f2),
        ];
        for (n, p) in hist.iter().enumerate() {
            if !count_within(tally.multiples_histogram[2 + n], TRIALS, *p) {
                failures.push(format!("profile {i} histogram {}", 2 + n));
            }
        }
        if !count_within(tally.outages(), TRIALS, mc_outage(&links).unwrap()) {
            failures.push(format!("profile {i} duplicated outage"));
        }
        let mean = tally.multiples_sum as f64 / TRIALS as f64;
        let var = f1 * (1.0 - f1) + f2 * (1.0 - f2);
        if (mean - (4.0 - f1 - f2)).abs() > Z_9999 * (var / TRIALS as f64).sqrt() {
            failures.push(format!("profile {i} duplicated mean usage"));
        }
    }
    check(
        failures.is_empty(),
        if failures.is_empty() {
            "20 profiles x 1e6 trials, all statistics inside 99.99% intervals".into()
        } else {
            format!("outside interval: {}", failures.join(", "))
        },
    )
}

fn latency_budget() -> Outcome {
    let num = Numerology::default();
    let tti = num.tti_duration_ms();
    let worst = num.worst_case_latency_ms();
    let link = LinkBlerProfile::new(0.1, 0.3, 0.1, 0.1, 0.05).unwrap();
    let mut in_bands = true;
    for profiles in [vec![link], vec![link, link]] {
        let tally = Simulator::new(profiles, num)
            .unwrap()
            .run(200_000, 6, true)
            .unwrap();
        in_bands &= tally
            .latencies_ttis
            .iter()
            .all(|l| (2.0..3.0).contains(l) || (6.0..7.0).contains(l));
    }
    check(
        tti == 1.0 / 7.0 && worst == 1.0 && in_bands,
        format!("tti = {tti:.6} ms, worst case = {worst} ms, latencies in [2,3) u [6,7) TTIs: {in_bands}"),
    )
}

fn determinism() -> Outcome {
    let cfg = parse_scenario(
        r#"{"scheme": "MC", "m_nodes": 2, "p_d": 0.03, "trials": 200000, "seed": 77}"#,
    )
    .unwrap();
    let threads = std::thread::available_parallelism().map_or(4, |n| n.get().max(2));
    let one = cmd_simulate(&cfg, Some(1)).unwrap().table().to_csv();
    let again = cmd_simulate(&cfg, Some(1)).unwrap().table().to_csv();
    let many = cmd_simulate(&cfg, Some(threads)).unwrap().table().to_csv();
    check(
        one == again && one == many,
        format!("1 thread vs {threads} threads, {} bytes", one.len()),
    )
}

fn main() -> ExitCode {
    let one_second = Some(Duration::from_secs(1));
    let criteria: Vec<Criterion> = vec![
        (
            "single-connectivity operating point",
            Box::new(move || timed(one_second, single_connectivity_row)),
        ),
        (
            "multi-connectivity operating point",
            Box::new(move || timed(one_second, multi_connectivity_row)),
        ),
        (
            "symmetric closed form",
            Box::new(|| timed(None, symmetric_closed_form)),
        ),
        (
            "multi-connectivity product law",
            Box::new(|| timed(None, product_law)),
        ),
        (
            "normalized usage",
            Box::new(|| timed(None, normalized_usage_point)),
        ),
        (
            "single-connectivity savings",
            Box::new(move || timed(one_second, savings_band)),
        ),
        (
            "finite-blocklength roundtrip",
            Box::new(|| timed(None, finite_blocklength_roundtrip)),
        ),
        (
            "Monte Carlo oracle",
            Box::new(|| timed(Some(Duration::from_secs(60)), monte_carlo_oracle)),
        ),
        ("latency budget", Box::new(|| timed(None, latency_budget))),
        ("determinism", Box::new(|| timed(None, determinism))),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        match f() {
            Ok(d) => println!("criterion {:>2} PASS  {name}: {d}", i + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {d}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
