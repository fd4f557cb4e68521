use msplit::multisplit::EvCheck;
use msplit::suite::{property_names, regenerate, replay, run_property, trial_seed, Mode, SuiteConfig};

#[test]
fn every_property_passes() {
    let cfg = SuiteConfig {
        trials: 200,
        ..SuiteConfig::default()
    };
    let mut failed = Vec::new();
    for name in property_names() {
        let r = run_property(name, Mode::Both, &cfg).unwrap();
        eprintln!(
            "{name}: {} trials, {} skipped, {} failures, {:?}",
            r.trials,
            r.skipped,
            r.failures.len(),
            r.elapsed
        );
        if let Some(f) = r.failures.first() {
            eprintln!("  first: {}", f.detail);
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failing: {failed:?}");
}

#[test]
fn failures_replay_from_data_and_seed() {
    let cfg = SuiteConfig {
        trials: 50,
        ev_check: EvCheck::WeakenedDropCover,
        ..SuiteConfig::default()
    };
    let r = run_property("P_ev_agree", Mode::Random, &cfg).unwrap();
    assert!(!r.passed());
    for f in &r.failures {
        let seed = f.seed.expect("random trials carry seeds");
        assert_eq!(regenerate("P_ev_agree", seed).unwrap(), f.case);
        assert_eq!(replay("P_ev_agree", f, &cfg).unwrap().as_deref(), Some(f.detail.as_str()));
        let fixed = SuiteConfig { ev_check: EvCheck::Fast, ..cfg };
        assert_eq!(replay("P_ev_agree", f, &fixed).unwrap(), None);
    }
}

#[test]
fn records_are_deterministic() {
    let cfg = SuiteConfig {
        trials: 100,
        exhaustive_max: 2,
        ..SuiteConfig::default()
    };
    for name in ["P_graph", "P_compose", "P_equiv7"] {
        let a = run_property(name, Mode::Both, &cfg).unwrap();
        let b = run_property(name, Mode::Both, &cfg).unwrap();
        assert_eq!(a.record(), b.record());
    }
    let other = SuiteConfig { seed: 2, ..cfg };
    assert_ne!(trial_seed(cfg.seed, "P_graph", 0), trial_seed(other.seed, "P_graph", 0));
}

#[test]
fn exhaustive_counts() {
    let cfg = SuiteConfig {
        trials: 0,
        ..SuiteConfig::default()
    };
    // Σ over sizes a, b ≤ 3 of T(a)·T(b)·b^a with T = 1, 4, 29.
    let t = [1u64, 4, 29];
    let expected: u64 = (1..=3u32)
        .flat_map(|a| (1..=3u32).map(move |b| t[a as usize - 1] * t[b as usize - 1] * (b as u64).pow(a)))
        .sum();
    assert_eq!(run_property("P_ev_agree", Mode::Exhaustive, &cfg).unwrap().trials, expected);
    let noop = run_property("P_compactness", Mode::Both, &cfg).unwrap();
    assert!(noop.passed() && noop.trials == 0 && noop.note.is_some());
}
