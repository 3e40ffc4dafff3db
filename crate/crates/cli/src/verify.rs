//! Invariant suites over bundled contexts, with a hidden fault-injection
//! flag used by the harness's own tests.

use crate::CliError;
use num_complex::Complex64;
use psicorr::corr::mult_identity_check;
use psicorr::curve::DEFAULT_ENUM_CAP;
use psicorr::{CharSeq, Character, CorrStrategy, Curve, EdsContext, PrimeField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde_json::json;
use std::path::PathBuf;

pub const SUITES: &[&str] = &[
    "identities",
    "periodicity",
    "zero-locus",
    "parseval",
    "spectral-t",
    "weighted-chain",
    "ladder-vs-oracle",
    "fft-vs-direct",
    "mult-identity",
];

struct Bundle {
    ctx: EdsContext,
    chi: Character,
    seq: CharSeq,
}

/// Small curves covering character orders 2, 3, 4 and 6.
const CONTEXT_PARAMS: &[(u64, u64, u64, u64)] = &[
    (5, 1, 1, 2),
    (101, 3, 7, 2),
    (101, 3, 7, 4),
    (1009, 1, 6, 2),
    (1009, 1, 6, 3),
    (1009, 1, 6, 6),
];

fn bundled_contexts(inject_fault: bool) -> Vec<Bundle> {
    CONTEXT_PARAMS
        .iter()
        .map(|&(p, a, b, d)| {
            let f = PrimeField::new(p).unwrap();
            let c = Curve::new(f, f.elem(a), f.elem(b)).unwrap();
            let (pt, ord) = c
                .find_point_min_order(3, DEFAULT_ENUM_CAP)
                .unwrap()
                .unwrap();
            let ctx = EdsContext::new(c, pt, ord).unwrap();
            let chi = Character::build(f, d).unwrap();
            let mut seq = CharSeq::build(&ctx, &chi);
            if inject_fault {
                // Turn the zero at n = ord P into a unit: the zero-locus
                // and periodicity suites must notice.
                seq.flip_value(ctx.ord_p());
            }
            Bundle { ctx, chi, seq }
        })
        .collect()
}

struct SuiteResult {
    name: &'static str,
    cases: u64,
    failures: u64,
    detail: Option<String>,
}

fn run_suite(name: &'static str, bundles: &[Bundle], seed: u64) -> SuiteResult {
    let mut cases = 0u64;
    let mut failures = 0u64;
    let mut detail = None;
    let mut fail = |cases: &mut u64, failures: &mut u64, ok: bool, what: String| {
        *cases += 1;
        if !ok {
            *failures += 1;
            detail.get_or_insert(what);
        }
    };
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    match name {
        "identities" => {
            for b in bundles {
                for _ in 0..200 {
                    let (m, n, r) = (
                        rng.gen_range(-300i64..=300),
                        rng.gen_range(-300i64..=300),
                        rng.gen_range(-300i64..=300),
                    );
                    let ok = b.ctx.check_identity(m, n, r);
                    fail(&mut cases, &mut failures, ok, format!("identity ({m},{n},{r})"));
                }
            }
        }
        "periodicity" => {
            for b in bundles {
                let r = b.seq.period();
                for n in 1..=2 * r {
                    let ok = b.seq.value(n) == b.chi.eval(&b.ctx.psi_eval(n));
                    fail(&mut cases, &mut failures, ok, format!("s_{n} mismatch"));
                }
            }
        }
        "zero-locus" => {
            for b in bundles {
                let r = b.seq.period();
                for n in 1..=2 * r {
                    let ok = b.seq.value(n).is_zero() == (n % b.ctx.ord_p() == 0);
                    fail(&mut cases, &mut failures, ok, format!("zero locus at n = {n}"));
                }
            }
        }
        "parseval" => {
            for b in bundles {
                let info = b.seq.info();
                let sum: f64 = b.seq.spectrum().iter().map(|s| s.norm_sqr()).sum();
                let expected = (info.r * info.d * (info.ord_p - 1)) as f64;
                let ok = (sum - expected).abs() <= 1e-9 * expected.max(1.0);
                fail(
                    &mut cases,
                    &mut failures,
                    ok,
                    format!("parseval {sum} vs {expected} at p = {}", info.p),
                );
            }
        }
        "spectral-t" => {
            for b in bundles.iter().filter(|b| b.seq.period() <= 4000) {
                let (lhs, rhs) = b.seq.spectral_t_identity().unwrap();
                let ok = (lhs - rhs).abs() <= 1e-6 * lhs.abs().max(1.0);
                fail(
                    &mut cases,
                    &mut failures,
                    ok,
                    format!("spectral T {lhs} vs {rhs} at p = {}", b.seq.info().p),
                );
            }
        }
        "weighted-chain" => {
            for b in bundles {
                let r = b.seq.period();
                let h = r.min(32);
                for _ in 0..20 {
                    let weights: Vec<Complex64> = (0..r)
                        .map(|_| {
                            Complex64::from_polar(
                                rng.gen_range(0.0..=1.0),
                                rng.gen_range(0.0..std::f64::consts::TAU),
                            )
                        })
                        .collect();
                    let (_, _, ok) = b.seq.weighted_chain_check(&weights, h).unwrap();
                    fail(&mut cases, &mut failures, ok, "weighted chain".into());
                }
            }
        }
        "ladder-vs-oracle" => {
            for b in bundles {
                let curve = b.ctx.curve();
                let psis = psicorr::oracle::poly_psi_all(curve, 40).unwrap();
                for (n, psi) in psis.iter().enumerate() {
                    let ok = b.ctx.psi_eval(n as u64)
                        == psicorr::oracle::poly_eval(curve, psi, &b.ctx.point());
                    fail(&mut cases, &mut failures, ok, format!("psi_{n} vs oracle"));
                }
            }
        }
        "fft-vs-direct" => {
            for b in bundles {
                let r = b.seq.period();
                let h = r.min(64);
                for conj in [false, true] {
                    let direct = b
                        .seq
                        .corr_all_shifts(r, h, conj, CorrStrategy::Direct)
                        .unwrap();
                    let fft = b.seq.corr_all_shifts(r, h, conj, CorrStrategy::Fft).unwrap();
                    for (i, (x, y)) in direct.iter().zip(&fft).enumerate() {
                        let ok = (x - y).norm() <= 1e-9 * r as f64;
                        fail(
                            &mut cases,
                            &mut failures,
                            ok,
                            format!("fft vs direct at h = {} conj = {conj}", i + 1),
                        );
                    }
                }
            }
        }
        "mult-identity" => {
            for b in bundles {
                for _ in 0..200 {
                    let m = rng.gen_range(1u64..500);
                    let mut n = rng.gen_range(1u64..500);
                    if n % b.ctx.ord_p() == 0 {
                        n += 1;
                    }
                    let ok = mult_identity_check(&b.ctx, &b.chi, m, n).unwrap();
                    fail(&mut cases, &mut failures, ok, format!("mult-identity ({m},{n})"));
                }
            }
        }
        _ => unreachable!("suite names validated by caller"),
    }
    SuiteResult {
        name,
        cases,
        failures,
        detail,
    }
}

pub fn cmd_verify(
    suite: &str,
    seed: u64,
    inject_fault: bool,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    let selected: Vec<&'static str> = if suite == "all" {
        SUITES.to_vec()
    } else {
        match SUITES.iter().find(|s| **s == suite) {
            Some(s) => vec![s],
            None => {
                return Err(CliError::Config(format!(
                    "unknown suite {suite:?}; expected one of: all, {}",
                    SUITES.join(", ")
                )))
            }
        }
    };
    let bundles = bundled_contexts(inject_fault);
    let mut results = Vec::new();
    for name in selected {
        let r = run_suite(name, &bundles, seed);
        if r.failures == 0 {
            println!("suite {}: PASS ({} cases)", r.name, r.cases);
        } else {
            println!(
                "suite {}: FAIL ({}/{} cases; first: {})",
                r.name,
                r.failures,
                r.cases,
                r.detail.as_deref().unwrap_or("-")
            );
        }
        results.push(r);
    }
    let any_failed = results.iter().any(|r| r.failures > 0);
    let summary = json!({
        "seed": seed,
        "inject_fault": inject_fault,
        "ok": !any_failed,
        "suites": results.iter().map(|r| json!({
            "name": r.name,
            "cases": r.cases,
            "failures": r.failures,
            "first_failure": r.detail,
        })).collect::<Vec<_>>(),
    });
    let text = format!("{summary:#}\n");
    match &out {
        Some(path) => std::fs::write(path, &text)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    if any_failed {
        Err(CliError::Verify)
    } else {
        Ok(())
    }
}
