use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use urllc_mc::outage::{
    mc_outage, sc_outage, succ_first, succ_retx_nack, succ_retx_timeout, succ_retx_total,
    LinkBlerProfile,
};

/// Explicit enumeration of all 2⁵ combinations of the binary reception
/// events on one link (metadata 1, data 1, metadata 2, data 2, combined
/// decode), returning the total probability of the delivering leaves.
fn event_tree_success(p: &LinkBlerProfile) -> f64 {
    let combine_fail = if p.p_d1() > 0.0 {
        p.p_c() / p.p_d1()
    } else {
        0.0
    };
    let probs = [p.p_m1(), p.p_d1(), p.p_m2(), p.p_d2(), combine_fail];
    let mut success = 0.0;
    for mask in 0u32..32 {
        let fails: Vec<bool> = (0..5).map(|k| mask & (1 << k) != 0).collect();
        let weight: f64 = probs
            .iter()
            .zip(&fails)
            .map(|(&q, &f)| if f { q } else { 1.0 - q })
            .product();
        let (m1, d1, m2, d2, comb) = (fails[0], fails[1], fails[2], fails[3], fails[4]);
        let delivered = if !m1 && !d1 {
            true
        } else if m1 {
            // timeout: retransmission decoded alone
            !m2 && !d2
        } else {
            // NACK: combined decode
            !m2 && !comb
        };
        if delivered {
            success += weight;
        }
    }
    success
}

fn random_profile(rng: &mut ChaCha8Rng) -> LinkBlerProfile {
    let p_m1: f64 = rng.random();
    let p_d1: f64 = rng.random();
    let p_m2: f64 = rng.random();
    let p_d2: f64 = rng.random();
    let p_c = rng.random::<f64>() * p_d1.min(p_d2);
    LinkBlerProfile::new(p_m1, p_d1, p_m2, p_d2, p_c).unwrap()
}

#[test]
fn partition_sums_to_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1_000_000 {
        let b = sc_outage(&random_profile(&mut rng));
        assert!((b.total() - 1.0).abs() <= 1e-12, "{b:?}");
    }
}

#[test]
fn event_tree_oracle_agrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..100_000 {
        let p = random_profile(&mut rng);
        let out = sc_outage(&p).p_out;
        assert!(
            (out - (1.0 - event_tree_success(&p))).abs() <= 1e-14,
            "{p:?}"
        );
    }
}

#[test]
fn single_link_operating_point() {
    let p = 1.826e-3;
    let out = sc_outage(&LinkBlerProfile::symmetric(p, p, 0.0).unwrap()).p_out;
    assert!((out - 1.0e-5).abs() < 0.01e-5);
    let oracle = 1.0 - event_tree_success(&LinkBlerProfile::symmetric(p, p, 0.0).unwrap());
    assert!((out - oracle).abs() < 1e-15);
}

#[test]
fn retransmission_forms_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..100_000 {
        let p = random_profile(&mut rng);
        let sum = succ_retx_timeout(&p) + succ_retx_nack(&p);
        assert!((succ_retx_total(&p) - sum).abs() <= 1e-15);
    }
}

#[test]
fn duplicated_outage_examples() {
    let sym = |p| LinkBlerProfile::symmetric(p, p, 0.0).unwrap();
    // Find a link whose outage is 1e-2: 3p² − 2p³ = 1e-2.
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if 3.0 * mid * mid - 2.0 * mid.powi(3) < 1e-2 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let link = sym(lo);
    let cube = mc_outage(&[link; 3]).unwrap();
    assert!((cube - 1e-6).abs() < 1e-18);

    let a = sym(0.0328);
    let pair = mc_outage(&[a, link]).unwrap();
    assert!((pair - 3.16e-5).abs() < 0.01e-5);
}

proptest! {
    #[test]
    fn symmetric_closed_form(p in 0.0f64..=1.0) {
        let out = sc_outage(&LinkBlerProfile::symmetric(p, p, 0.0).unwrap()).p_out;
        prop_assert!((out - (3.0 * p * p - 2.0 * p * p * p)).abs() <= 1e-14);
    }

    #[test]
    fn product_law(p_m in 0.0f64..0.5, p_d in 0.0f64..0.5, c in 0.0f64..1.0, k in 1usize..=4) {
        let link = LinkBlerProfile::symmetric(p_m, p_d, c * p_d).unwrap();
        let single = sc_outage(&link).p_out;
        let multi = mc_outage(&vec![link; k]).unwrap();
        let expect = single.powi(k as i32);
        prop_assert!(multi == expect || ((multi - expect) / expect).abs() <= 1e-13);
    }

    #[test]
    fn outage_monotone_in_each_field(
        p_m1 in 0.0f64..0.9,
        p_d1 in 0.0f64..0.9,
        p_m2 in 0.0f64..0.9,
        p_d2 in 0.0f64..0.9,
        c in 0.0f64..1.0,
        bump in 1e-6f64..0.1,
    ) {
        let p_c = c * p_d1.min(p_d2);
        let base = sc_outage(&LinkBlerProfile::new(p_m1, p_d1, p_m2, p_d2, p_c).unwrap()).p_out;
        let tol = 1e-15;
        let up = |v: f64| (v + bump).min(1.0);
        let check = |p: LinkBlerProfile| sc_outage(&p).p_out + tol >= base;
        prop_assert!(check(LinkBlerProfile::new(up(p_m1), p_d1, p_m2, p_d2, p_c).unwrap()));
        prop_assert!(check(LinkBlerProfile::new(p_m1, p_d1, up(p_m2), p_d2, p_c).unwrap()));
        prop_assert!(check(LinkBlerProfile::new(p_m1, p_d1, p_m2, up(p_d2), p_c).unwrap()));
        let pc_up = (p_c + bump).min(p_d1.min(p_d2));
        prop_assert!(check(LinkBlerProfile::new(p_m1, p_d1, p_m2, p_d2, pc_up).unwrap()));
    }

    #[test]
    fn first_transmission_is_product(p_m in 0.0f64..=1.0, p_d in 0.0f64..=1.0) {
        let link = LinkBlerProfile::symmetric(p_m, p_d, 0.0).unwrap();
        prop_assert_eq!(succ_first(&link), (1.0 - p_m) * (1.0 - p_d));
    }
}
