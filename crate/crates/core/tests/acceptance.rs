//! One line per acceptance criterion. Runs without the libtest harness so
//! the lines are always printed.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use msplit::gallery::{divergence_witness, f_weird_distinct, f_weird_star_check, DIVERGENCE_EXAMPLES};
use msplit::multifunction::PointMap;
use msplit::multisplit::{is_ev_set, EvCheck};
use msplit::splithomeo::{reglue_from_splithomeo, splithomeo_from_reglue, validate_reglue};
use msplit::suite::{enumerate_topologies, run_property, Mode, PropertyResult, SuiteConfig};
use msplit::{BigRational, FinSpace, Rational128};
use std::sync::Arc;

type Criterion = (&'static str, fn() -> Line);

struct Line {
    ok: bool,
    detail: String,
}

fn cfg(trials: u64, ev_check: EvCheck) -> SuiteConfig {
    SuiteConfig {
        seed: 20_240_601,
        trials,
        exhaustive_max: 3,
        ev_check,
        ..SuiteConfig::default()
    }
}

fn run(name: &str, mode: Mode, c: &SuiteConfig) -> PropertyResult {
    run_property(name, mode, c).expect("registered property")
}

fn summary(rs: &[PropertyResult]) -> (bool, String) {
    let ok = rs.iter().all(PropertyResult::passed);
    let parts: Vec<String> = rs
        .iter()
        .map(|r| {
            format!(
                "{} {} cases/{} skipped/{} violations",
                r.name,
                r.trials,
                r.skipped,
                r.failures.len()
            )
        })
        .collect();
    (ok, parts.join("; "))
}

/// Fast versus definitional check on every 3-point pair, map, point and
/// non-empty candidate. Returns (checks, mismatches, elapsed).
fn ev_oracle_sweep(strategy: EvCheck) -> (u64, u64, Duration) {
    let start = Instant::now();
    let tops = enumerate_topologies(3).unwrap();
    let (mut checks, mut mismatches) = (0u64, 0u64);
    for x in &tops {
        for y in &tops {
            for code in 0..27usize {
                let table = vec![code / 9, code / 3 % 3, code % 3];
                let f = PointMap::new(x.clone(), y.clone(), table).unwrap();
                for p in 0..3 {
                    for mask in 1..8usize {
                        let z = y.set_from_indices((0..3).filter(|i| mask & (1 << i) != 0)).unwrap();
                        let fast = is_ev_set(&f, p, &z, strategy).unwrap();
                        let def = is_ev_set(&f, p, &z, EvCheck::Definitional).unwrap();
                        checks += 1;
                        mismatches += u64::from(fast != def);
                    }
                }
            }
        }
    }
    (checks, mismatches, start.elapsed())
}

fn criterion_1() -> Line {
    let (checks, mismatches, t) = ev_oracle_sweep(EvCheck::Fast);
    Line {
        ok: checks == 29 * 29 * 27 * 3 * 7 && mismatches == 0 && t < Duration::from_secs(60),
        detail: format!("{checks} checks over 29x29 pairs x 27 maps, {mismatches} mismatches, {:.2?}", t),
    }
}

fn criterion_2() -> Line {
    let r = run("P_graph", Mode::Both, &cfg(10_000, EvCheck::Fast));
    let (ok, detail) = summary(&[r]);
    Line { ok, detail }
}

fn criterion_3() -> Line {
    let c = cfg(10_000, EvCheck::Fast);
    let rs: Vec<_> = ["P_star_usc", "P_star_usco_closed", "P_proj_closed"]
        .iter()
        .map(|n| run(n, Mode::Both, &c))
        .collect();
    let (ok, detail) = summary(&rs);
    Line { ok, detail }
}

fn criterion_4() -> Line {
    let r = run("P_compose", Mode::Both, &cfg(10_000, EvCheck::Fast));
    let (ok, detail) = summary(&[r]);
    Line { ok, detail }
}

fn criterion_5() -> Line {
    let c = cfg(10_000, EvCheck::Fast);
    let rs: Vec<_> = ["P_finusc", "P_union"]
        .iter()
        .map(|n| run(n, Mode::Random, &c))
        .collect();
    let (ok, detail) = summary(&rs);
    Line { ok, detail }
}

fn criterion_6() -> Line {
    let r = run("P_unique", Mode::Exhaustive, &cfg(0, EvCheck::Fast));
    let (ok, detail) = summary(&[r]);
    Line { ok, detail }
}

fn criterion_7() -> Line {
    let start = Instant::now();
    let mut ok = f_weird_distinct::<Rational128>(40, 50);
    let mut sizes = Vec::new();
    for n in 1..=40u64 {
        let r = f_weird_star_check::<Rational128>(n, 50);
        ok &= r.passes() && r.star_size == Some(n as usize + 1);
        sizes.push(r.star_size.unwrap_or(0));
    }
    // The arbitrary-precision scalar must give the same verdicts.
    for n in [1u64, 7, 40] {
        let big = f_weird_star_check::<BigRational>(n, 50);
        ok &= big.passes() && big.star_size == Some(n as usize + 1);
    }
    let t = start.elapsed();
    ok &= t < Duration::from_secs(10);
    Line {
        ok,
        detail: format!(
            "n = 1..40 at K = 50: sizes {}..{} (expected n+1), distinct and in balls, {:.2?}",
            sizes[0],
            sizes[39],
            t
        ),
    }
}

fn criterion_8() -> Line {
    let mut ok = true;
    let mut parts = Vec::new();
    for ex in DIVERGENCE_EXAMPLES {
        let depth = if ex == "comb_space" { 50 } else { 1000 };
        let r = divergence_witness::<BigRational>(ex, depth).unwrap();
        ok &= r.passes() && !r.evidence.is_empty() && r.depth == depth;
        parts.push(format!("{ex}@{depth}: {}", serde_json::to_value(r.verdict).unwrap().as_str().unwrap()));
    }
    Line {
        ok,
        detail: parts.join("; "),
    }
}

fn criterion_9() -> Line {
    let mut bijections = 0;
    let mut ok = true;
    for n in 1..=4usize {
        let d = Arc::new(FinSpace::discrete(n));
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            let f = PointMap::new(d.clone(), d.clone(), perm.clone()).unwrap();
            let datum = reglue_from_splithomeo(&f).unwrap();
            ok &= validate_reglue(&datum).passes() && splithomeo_from_reglue(&datum).unwrap() == f;
            bijections += 1;
            if !next_permutation(&mut perm) {
                break;
            }
        }
    }
    let r = run("P_equiv7", Mode::Random, &cfg(1000, EvCheck::Fast));
    ok &= r.passed() && r.trials == 1000;
    Line {
        ok,
        detail: format!(
            "{bijections} bijections round-trip; {} random composable pairs, {} violations",
            r.trials,
            r.failures.len()
        ),
    }
}

fn next_permutation(a: &mut [usize]) -> bool {
    let Some(i) = (1..a.len()).rev().find(|&i| a[i - 1] < a[i]) else {
        return false;
    };
    let j = (i..a.len()).rev().find(|&j| a[j] > a[i - 1]).unwrap();
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

fn criterion_10() -> Line {
    let mut ok = true;
    let mut parts = Vec::new();
    for (label, m) in [("drop-closure", EvCheck::WeakenedDropClosure), ("drop-cover", EvCheck::WeakenedDropCover)] {
        let (_, mismatches, _) = ev_oracle_sweep(m);
        let g = run("P_graph", Mode::Both, &cfg(10_000, m));
        ok &= mismatches > 0 && !g.passed();
        parts.push(format!(
            "{label}: criterion 1 sees {mismatches} mismatches, criterion 2 sees {} violations",
            g.failures.len()
        ));
    }
    Line {
        ok,
        detail: parts.join("; "),
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("oracle equivalence", criterion_1),
        ("graph identity", criterion_2),
        ("star usc/usco/closed graph", criterion_3),
        ("composition", criterion_4),
        ("finite usc and union", criterion_5),
        ("Hausdorff uniqueness", criterion_6),
        ("f_weird star sizes", criterion_7),
        ("divergence witnesses", criterion_8),
        ("reglue round trip", criterion_9),
        ("mutation sensitivity", criterion_10),
    ];
    let mut all = true;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let line = f();
        all &= line.ok;
        println!(
            "criterion {:>2} {}: {} ({})",
            i + 1,
            if line.ok { "PASS" } else { "FAIL" },
            name,
            line.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
