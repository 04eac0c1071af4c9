use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, LN_2};

use qkdsim::channel::NoiseModel;
use qkdsim::distill::AmplificationPlan;
use qkdsim::eve::{eve_guess, helstrom_basis, EntanglingProbe, Eve, EveMode, EveStrategy, UnitaryProbe};
use qkdsim::protocol::{
    run_session, run_session_detailed, run_stage1_b92, run_stage1_bb84, sift_b92, sift_bb84, Protocol, SessionConfig,
};
use qkdsim::quantum::Ket2;
use qkdsim::transcript::PublicTranscript;
use qkdsim::Rng;

/// `(P(conclusive 1), P(conclusive 0))` for a real carrier `c` under the
/// B92 receiver at half-angle `theta`, by explicit quadratic forms.
fn b92_response(theta: f64, c: [f64; 2]) -> (f64, f64) {
    let k = 1.0 + (2.0 * theta).cos();
    let along = |phi: f64| {
        let u = [phi.cos(), phi.sin()];
        let dot = u[0] * c[0] + u[1] * c[1];
        (c[0] * c[0] + c[1] * c[1] - dot * dot) / k
    };
    (along(-theta), along(theta))
}

fn polar(phi: f64) -> [f64; 2] {
    [phi.cos(), phi.sin()]
}

fn sigma(p: f64, n: f64) -> f64 {
    (p * (1.0 - p) / n).sqrt()
}

/// Runs B92 Stage 1 plus sifting and returns (conclusive fraction, sifted error rate).
fn b92_stats(theta: f64, strategy: EveStrategy, n: usize, seed: u64) -> (f64, f64) {
    let mut eve = Eve::new(strategy, EveMode::B92 { theta }, seed).unwrap();
    let rec = run_stage1_b92(n, theta, &NoiseModel::NONE, Some(&mut eve), &mut Rng::new(seed)).unwrap();
    let raw = sift_b92(&rec, &mut PublicTranscript::new()).unwrap();
    (raw.len() as f64 / n as f64, raw.error_rate())
}

#[test]
fn entangling_probe_statistics_match_oracle() {
    let theta = FRAC_PI_8;
    let n = 200_000;
    for (i, strength) in [0.0, 0.3, 0.7, 1.0].into_iter().enumerate() {
        let p = EntanglingProbe::with_strength(theta, strength).unwrap();
        let (a, b) = (p.a.re, p.b.re);
        // Bit 1 leaves the carrier in a|↗⟩ + b|↖⟩ with the probe factored out.
        let up = polar(FRAC_PI_4);
        let down = polar(-FRAC_PI_4);
        let carrier = [a * up[0] + b * down[0], a * up[1] + b * down[1]];
        let (ok, err) = b92_response(theta, carrier);
        let (conclusive, rate) = b92_stats(theta, EveStrategy::TranslucentEntangling(p), n, 100 + i as u64);
        let expected_rate = err / (ok + err);
        assert!(
            (conclusive - (ok + err)).abs() < 4.0 * sigma(ok + err, n as f64),
            "λ={strength}: {conclusive} vs {}",
            ok + err
        );
        let m = conclusive * n as f64;
        assert!(
            (rate - expected_rate).abs() < 4.0 * sigma(expected_rate, m) + 1e-12,
            "λ={strength}: {rate} vs {expected_rate}"
        );
    }
}

#[test]
fn unitary_probe_statistics_match_oracle() {
    let theta = FRAC_PI_8;
    let n = 200_000;
    for (i, strength) in [0.0, 0.5, 1.0].into_iter().enumerate() {
        let p = UnitaryProbe::with_strength(theta, strength).unwrap();
        let (ok, err) = b92_response(theta, polar(theta * (1.0 - strength)));
        let (conclusive, rate) = b92_stats(theta, EveStrategy::TranslucentUnitary(p), n, 200 + i as u64);
        assert!((conclusive - (ok + err)).abs() < 4.0 * sigma(ok + err, n as f64));
        let expected_rate = err / (ok + err);
        let m = conclusive * n as f64;
        assert!(
            (rate - expected_rate).abs() < 4.0 * sigma(expected_rate, m) + 1e-12,
            "{rate} vs {expected_rate}"
        );
    }
}

#[test]
fn probes_coincide_at_full_strength() {
    let theta = 0.3;
    let u = UnitaryProbe::with_strength(theta, 1.0).unwrap();
    let e = EntanglingProbe::with_strength(theta, 1.0).unwrap();
    let carrier = Ket2::real(
        e.a.re * FRAC_PI_4.cos() + e.b.re * FRAC_PI_4.cos(),
        (e.a.re - e.b.re) * FRAC_PI_4.sin(),
    )
    .unwrap();
    assert!(carrier.same_ray(&u.carrier_plus, 1e-12));
    assert!((u.probe_plus.overlap(&u.probe_minus) - e.probe_plus.overlap(&e.probe_minus)).abs() < 1e-12);
}

#[test]
fn helstrom_success_probability() {
    for i in 1..20 {
        let theta = FRAC_PI_4 * i as f64 / 20.0;
        let (plus, minus) = (Ket2::polarized(theta), Ket2::polarized(-theta));
        let (basis, success) = helstrom_basis(&plus, &minus);
        let expected = 0.5 * (1.0 + (2.0 * theta).sin());
        assert!((success - expected).abs() < 1e-12);
        let realized = 0.5 * (basis.probability(&plus, 1) + basis.probability(&minus, 0));
        assert!(
            (realized - expected).abs() < 1e-12,
            "θ={theta}: {realized} vs {expected}"
        );
    }
}

#[test]
fn opaque_error_rate_is_linear_in_fraction() {
    for (i, eta) in [0.2, 0.4, 0.6, 0.8].into_iter().enumerate() {
        let cfg = SessionConfig {
            n_pulses: 60_000,
            eve: EveStrategy::Opaque { fraction: eta },
            r_max: 1.0,
            seed: 30 + i as u64,
            ..Default::default()
        };
        let r = run_session(&cfg).unwrap();
        let rate = r.sifted_error_rate.unwrap();
        let tol = 4.0 * sigma(eta / 4.0, r.sifted_count as f64);
        assert!((rate - eta / 4.0).abs() < tol, "η={eta}: {rate}");
    }
}

#[test]
fn eve_guess_is_reproducible_from_record_and_transcript() {
    for (protocol, eve) in [
        (Protocol::Bb84, EveStrategy::Opaque { fraction: 0.5 }),
        (Protocol::B92, EveStrategy::Opaque { fraction: 0.5 }),
        (
            Protocol::B92,
            EveStrategy::TranslucentEntangling(EntanglingProbe::with_strength(FRAC_PI_8, 0.5).unwrap()),
        ),
    ] {
        let cfg = SessionConfig {
            protocol,
            n_pulses: 20_000,
            eve,
            r_max: 1.0,
            seed: 5,
            ..Default::default()
        };
        let out = run_session_detailed(&cfg).unwrap();
        let record = out.eve_record.clone().expect("Eve was present");
        assert!(!out.eve_guess.is_empty());
        assert_eq!(eve_guess(&record, &out.transcript), out.eve_guess);
    }
}

#[test]
fn session_accounting_adds_up() {
    for seed in 0..20 {
        let cfg = SessionConfig {
            protocol: if seed % 2 == 0 { Protocol::Bb84 } else { Protocol::B92 },
            n_pulses: 8_000,
            noise: NoiseModel::new(0.02, 0.1, 0.0).unwrap(),
            r_max: 0.2,
            seed,
            ..Default::default()
        };
        let r = run_session(&cfg).unwrap();
        if r.aborted {
            continue;
        }
        let reconciled = r.reconciled_length.unwrap();
        assert_eq!(r.final_key_length, reconciled - r.leaked_bits.unwrap() - r.sec_param);
        assert_eq!(
            r.reconciled_length.unwrap() + r.bits_discarded + r.errors_deleted,
            r.sifted_count - r.disclosed_count
        );
        assert_eq!(r.final_key_alice, r.final_key_bob);
        assert!(r.eve_final_key_info_estimate.unwrap() <= 2f64.powi(-(r.sec_param as i32)) / LN_2 + 1e-12);
    }
}

#[test]
fn sessions_are_deterministic_per_seed() {
    let cfg = SessionConfig {
        n_pulses: 5_000,
        noise: NoiseModel::new(0.03, 0.05, 0.0).unwrap(),
        seed: 77,
        ..Default::default()
    };
    let a = run_session_detailed(&cfg).unwrap();
    let b = run_session_detailed(&cfg).unwrap();
    assert_eq!(a.report, b.report);
    assert_eq!(a.transcript.digest_hex(), b.transcript.digest_hex());
    let c = run_session_detailed(&SessionConfig { seed: 78, ..cfg }).unwrap();
    assert_ne!(a.transcript.digest_hex(), c.transcript.digest_hex());
}

#[test]
fn bb84_sifting_keeps_about_half() {
    let n = 50_000;
    let rec = run_stage1_bb84(n, &NoiseModel::NONE, None, &mut Rng::new(8)).unwrap();
    let raw = sift_bb84(&rec, &mut PublicTranscript::new()).unwrap();
    let frac = raw.len() as f64 / n as f64;
    assert!((frac - 0.5).abs() < 4.0 * sigma(0.5, n as f64));
    assert_eq!(raw.alice, raw.bob);
}

/// Mean mutual information between the amplified key and 4 known bits of a
/// 12-bit key, over `seeds` public subset draws.
fn mean_leak(k: usize, s: usize, seeds: u64) -> f64 {
    let n = 12;
    let known: Vec<usize> = (0..k).collect();
    let entropy = |h: &[u32]| -> f64 {
        let t: u32 = h.iter().sum();
        h.iter()
            .filter(|&&c| c > 0)
            .map(|&c| {
                let p = c as f64 / t as f64;
                -p * p.log2()
            })
            .sum()
    };
    let mut total = 0.0;
    for seed in 0..seeds {
        let plan = AmplificationPlan {
            seed: 1000 + seed,
            n,
            m: n - k - s,
        };
        let subsets = plan.subsets();
        let f = |key: u32| -> usize {
            subsets
                .iter()
                .enumerate()
                .map(|(i, sub)| (sub.iter().map(|&j| key >> j & 1).sum::<u32>() as usize & 1) << i)
                .sum()
        };
        let mut all = vec![0u32; 1 << plan.m];
        let mut by_known = vec![vec![0u32; 1 << plan.m]; 1 << k];
        for key in 0..(1u32 << n) {
            let v: usize = known
                .iter()
                .enumerate()
                .map(|(i, &j)| ((key >> j & 1) as usize) << i)
                .sum();
            all[f(key)] += 1;
            by_known[v][f(key)] += 1;
        }
        let cond: f64 = by_known.iter().map(|h| entropy(h)).sum::<f64>() / (1 << k) as f64;
        total += entropy(&all) - cond;
    }
    total / seeds as f64
}

#[test]
fn amplification_leak_shrinks_with_security_parameter() {
    let i3 = mean_leak(4, 3, 150);
    let i4 = mean_leak(4, 4, 150);
    assert!(i3 <= 2f64.powi(-3) / LN_2, "{i3}");
    assert!(i4 <= 2f64.powi(-4) / LN_2, "{i4}");
    let ratio = i4 / i3;
    assert!(ratio > 0.3 && ratio < 0.7, "ratio {ratio}");
}
