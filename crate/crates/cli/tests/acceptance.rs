//! Acceptance suite: one pass/fail line per criterion.
//!
//! Corpus-wide criteria read the reports of two `derange verify all` runs
//! (`--jobs 1` and `--jobs 8`), which also serve the determinism criterion.
//! Criteria with a runtime budget are additionally timed in-process.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde_json::Value;

use derange_core::families::{
    classical_natural, coset_eigenvalue_checks, deleted_module_census, deleted_module_floor, extraspecial2,
    extraspecial_fixer_count, natural_module_check, sharp_gammal1, sl2_5_z, two_cycle_formula, ClassicalKind, Sign,
};
use derange_core::gammal1::{enumerate_in, GammaL1};
use derange_core::harness::corpus::{affine_image_in_range, build_default_corpus, CorpusConfig, GAMMAL1_FIELDS};
use derange_core::matgroup::affine_stats;
use derange_core::numtheory::{bound_f, bound_g, bound_h, check_valuation_lemmas};
use derange_core::perm::DEFAULT_CAP;
use derange_core::{make_field, CheckResult, ExactRatio, Status};

/// Criteria that cannot hold as stated, with the reason. Each must still fail;
/// if one starts passing, this list is stale and the suite says so.
const KNOWN_UNATTAINABLE: &[(u32, &str)] = &[(
    6,
    "PSL(3,2) on the 7 points of the Fano plane is not Frobenius and has delta = 48/168 = 2/7, \
     so the strict 2/n dichotomy fails at n = 7",
)];

struct Outcome {
    id: u32,
    title: &'static str,
    ok: bool,
    detail: String,
    elapsed: Duration,
}

fn timed(id: u32, title: &'static str, budget: Option<Duration>, f: impl FnOnce() -> (bool, String)) -> Outcome {
    let start = Instant::now();
    let (ok, mut detail) = f();
    let elapsed = start.elapsed();
    let in_budget = budget.is_none_or(|b| elapsed < b);
    if let Some(b) = budget {
        detail.push_str(&format!("; budget {:.0} s", b.as_secs_f64()));
    }
    Outcome { id, title, ok: ok && in_budget, detail, elapsed }
}

fn no_fail(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.status != Status::Fail)
}

fn verify_all(jobs: usize, dir: &Path) -> Duration {
    let start = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_derange"))
        .args(["verify", "all", "--jobs", &jobs.to_string(), "--out"])
        .arg(dir)
        .status()
        .expect("run derange");
    // Exit status 1 only signals failing checks, which the criteria inspect.
    assert!(matches!(status.code(), Some(0) | Some(1)), "derange verify all exited with {status}");
    start.elapsed()
}

fn load_reports(dir: &Path) -> BTreeMap<String, (Vec<u8>, Value)> {
    let mut out = BTreeMap::new();
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let bytes = std::fs::read(&path).unwrap();
        let value: Value = serde_json::from_slice(&bytes).unwrap();
        out.insert(path.file_name().unwrap().to_string_lossy().into_owned(), (bytes, value));
    }
    out
}

/// `(checked, failed ids)` over results of `suite` whose id starts with `prefix`.
fn tally(reports: &BTreeMap<String, (Vec<u8>, Value)>, suite: &str, prefix: &str) -> (usize, Vec<String>) {
    let results = reports[&format!("{suite}.json")].1["results"].as_array().unwrap().clone();
    let mut checked = 0;
    let mut failed = Vec::new();
    for r in results.iter().filter(|r| r["check_id"].as_str().unwrap().starts_with(prefix)) {
        if r["status"] == "skipped" {
            continue;
        }
        checked += 1;
        if r["status"] == "fail" {
            failed.push(r["check_id"].as_str().unwrap().to_string());
        }
    }
    (checked, failed)
}

#[test]
fn acceptance() {
    let tmp = tempfile::tempdir().unwrap();
    let (d1, d8) = (tmp.path().join("jobs1"), tmp.path().join("jobs8"));
    let t1 = verify_all(1, &d1);
    let t8 = verify_all(8, &d8);
    let r1 = load_reports(&d1);
    let r8 = load_reports(&d8);
    let mut outcomes = Vec::new();

    outcomes.push(timed(1, "sharp GL_1(q):<sigma>: delta = g(q), alpha = h(q)", Some(Duration::from_secs(5)), || {
        let mut ok = true;
        let mut seen = Vec::new();
        for q in [16u64, 64, 81, 256] {
            let m = sharp_gammal1(q).unwrap();
            let s = affine_stats(&m.group.enumerated(DEFAULT_CAP).unwrap()).unwrap();
            let g = bound_g(q).unwrap().exact().cloned().unwrap();
            let h = bound_h(q).unwrap().exact().cloned().unwrap();
            ok &= s.delta_affine == g && s.alpha == h;
            seen.push(format!("q={q}: delta={} alpha={}", s.delta_affine, s.alpha));
        }
        (ok, seen.join(", "))
    }));

    outcomes.push(timed(2, "Z.SL_2(5) at q = 59: delta = f(59^2), semiregular", Some(Duration::from_secs(30)), || {
        let m = sl2_5_z(59, true).unwrap();
        let s = affine_stats(&m.group.enumerated(DEFAULT_CAP).unwrap()).unwrap();
        let f = bound_f(59 * 59).unwrap().exact().cloned().unwrap();
        let ok = s.order == 3480 && s.delta_affine == f && f == ExactRatio::new(1, 3481) && s.semiregular_nonzero;
        (ok, format!("order {}, delta {}, semiregular {}", s.order, s.delta_affine, s.semiregular_nonzero))
    }));

    outcomes.push(timed(3, "eta identity against the affine permutation image", Some(Duration::from_secs(120)), || {
        let corpus = build_default_corpus(&CorpusConfig::default()).unwrap();
        let (mut covered, mut mismatched) = (0, 0);
        for m in &corpus.members {
            let Some(g) = m.mat() else { continue };
            if !affine_image_in_range(g) {
                continue;
            }
            let s = affine_stats(g).unwrap();
            let image = g.affine_to_perm().unwrap().enumerated(DEFAULT_CAP).unwrap();
            covered += 1;
            mismatched += (image.delta().unwrap() != s.delta_affine) as usize;
        }
        let (checked, failed) = tally(&r1, "eta-identity", "eta-identity/");
        let ok = covered >= 50 && mismatched == 0 && failed.is_empty();
        (ok, format!("{covered} groups, {mismatched} mismatches; report: {checked} checks, {} failed", failed.len()))
    }));

    outcomes.push(timed(4, "coset formula and criteria over all subgroups of GL_1(q)", Some(Duration::from_secs(180)), || {
        let (mut groups, mut checks, mut failed) = (0, 0, 0);
        for (p, f) in GAMMAL1_FIELDS {
            let u = GammaL1::new(Arc::new(make_field(p, f).unwrap())).unwrap();
            for g in enumerate_in(&u).unwrap() {
                groups += 1;
                let mut rs = g.coset_checks().unwrap();
                rs.extend(g.valuation_checks().unwrap());
                checks += rs.len();
                failed += rs.iter().filter(|r| r.status != Status::Pass).count();
            }
        }
        (failed == 0 && checks > 0, format!("{groups} subgroups, {checks} checks, {failed} mismatches"))
    }));

    outcomes.push(timed(5, "valuation lemmas, p <= 50, r <= 13, i <= 4", Some(Duration::from_secs(1)), || {
        let rs = check_valuation_lemmas(50, 13, 4);
        let skipped = rs.iter().filter(|r| r.status == Status::Skipped).count();
        let failed = rs.iter().filter(|r| r.status == Status::Fail).count();
        (failed == 0 && skipped > 0, format!("{} checks, {failed} failed, {skipped} excluded (r, i) = (2, 1)", rs.len()))
    }));

    outcomes.push(timed(6, "Cameron-Cohen and Guralnick-Wan trichotomies on the corpus", None, || {
        let (cc, cc_fail) = tally(&r1, "trichotomy-cc", "");
        let (gw, gw_fail) = tally(&r1, "trichotomy-gw", "");
        let results = r1["trichotomy-gw.json"].1["results"].as_array().unwrap();
        let two_over_n = results.iter().any(|r| {
            r["check_id"].as_str().unwrap().starts_with("gw/") && r["relation"] == "=" && r["status"] == "pass" && {
                let rhs = r["rhs"].as_str().unwrap_or("");
                rhs.starts_with("2/") || rhs == "1/2"
            }
        });
        let ok = cc_fail.is_empty() && gw_fail.is_empty() && two_over_n && cc > 0 && gw > 0;
        (ok, format!("cc {cc} checks, failed {cc_fail:?}; gw {gw} checks, failed {gw_fail:?}; 2/n attained: {two_over_n}"))
    }));

    outcomes.push(timed(7, "subgroup-index identity and |G:D| <= 1/delta", None, || {
        let (idx, idx_fail) = tally(&r1, "subgroup-index", "subgroup-index/");
        let (bnd, bnd_fail) = tally(&r1, "subgroup-index", "d-index-bound/");
        let (_, facts_fail) = tally(&r1, "subgroup-index", "facts/");
        let ok = idx > 0 && bnd > 0 && idx_fail.is_empty() && bnd_fail.is_empty() && facts_fail.is_empty();
        (ok, format!("{idx} identities, {bnd} index bounds; failed {:?}", [idx_fail, bnd_fail, facts_fail].concat()))
    }));

    outcomes.push(timed(8, "extraspecial eigenvalue-1 counts 4^s +- 2^s - 2 over F_3", Some(Duration::from_secs(10)), || {
        let mut ok = true;
        let mut seen = Vec::new();
        for s in 1..=3u32 {
            for sign in [Sign::Plus, Sign::Minus] {
                let g = extraspecial2(s, sign, 3).unwrap().group.enumerated(DEFAULT_CAP).unwrap();
                let hist = g.fixed_dim_histogram().unwrap();
                let nontrivial_fixers = hist[1..].iter().sum::<u64>() - 1;
                let expected = extraspecial_fixer_count(s, sign);
                ok &= nontrivial_fixers == expected;
                seen.push(format!("s={s}{}: {nontrivial_fixers}", if sign == Sign::Plus { "+" } else { "-" }));
            }
        }
        let (_, failed) = tally(&r1, "extraspecial", "");
        (ok && failed.is_empty(), seen.join(", "))
    }));

    outcomes.push(timed(9, "fully deleted module census and log floor", Some(Duration::from_secs(120)), || {
        let mut ok = true;
        let mut notes = Vec::new();
        for m in 5..=9usize {
            for p in [2u64, 3] {
                let c = deleted_module_census(m, p).unwrap();
                ok &= c.two_cycle == two_cycle_formula(m as u64);
                if m >= 7 {
                    let holds = c.alpha >= deleted_module_floor(m as u64);
                    ok &= holds;
                    notes.push(format!("A{m}/F{p}: alpha={}", c.alpha));
                }
            }
        }
        (ok, notes.join(", "))
    }));

    outcomes.push(timed(10, "natural-module bounds", Some(Duration::from_secs(180)), || {
        let cases = [
            (ClassicalKind::Sl, 2, 3),
            (ClassicalKind::Sl, 2, 5),
            (ClassicalKind::Sl, 3, 3),
            (ClassicalKind::Sp, 4, 3),
            (ClassicalKind::Su, 3, 3),
            (ClassicalKind::Sl, 3, 2),
            (ClassicalKind::Sl, 4, 2),
            (ClassicalKind::Sp, 4, 2),
            (ClassicalKind::Sp, 6, 2),
        ];
        let mut rs = Vec::new();
        for (kind, n, s) in cases {
            let mut m = classical_natural(kind, n, s).unwrap();
            m.group = m.group.enumerated(DEFAULT_CAP).unwrap();
            rs.push(natural_module_check(&m, kind, n, s).unwrap());
        }
        let lines: Vec<String> = rs.iter().map(|r| format!("{} {}", r.check_id, r.status.as_str())).collect();
        (no_fail(&rs), lines.join(", "))
    }));

    outcomes.push(timed(11, "eigenvalue-lambda proportions in cosets of SL_2(q)", None, || {
        let mut total = 0;
        let mut ok = true;
        for q in [3u64, 4, 5, 7, 9] {
            let rs = coset_eigenvalue_checks(q).unwrap();
            total += rs.len();
            ok &= no_fail(&rs) && rs.iter().all(|r| r.witness["at_least_1_over_q"] == true);
        }
        (ok, format!("{total} (coset, lambda) pairs"))
    }));

    outcomes.push(timed(12, "byte-identical reports for --jobs 1 and --jobs 8", None, || {
        let same_files = r1.keys().eq(r8.keys());
        let differing: Vec<&String> = r1.keys().filter(|k| r8.get(*k).map(|x| &x.0) != Some(&r1[*k].0)).collect();
        let ok = same_files && differing.is_empty() && r1.len() == 14;
        (ok, format!("{} reports, differing {differing:?}; runs took {:.1} s and {:.1} s", r1.len(), t1.as_secs_f64(), t8.as_secs_f64()))
    }));

    // Straight to the stdout handle: libtest only captures the print macros,
    // and these lines belong in every test log.
    let mut log = std::io::stdout().lock();
    writeln!(log).unwrap();
    for o in &outcomes {
        let known = KNOWN_UNATTAINABLE.iter().find(|(id, _)| *id == o.id);
        let tag = match (o.ok, known) {
            (true, _) => "PASS",
            (false, Some(_)) => "FAIL (known)",
            (false, None) => "FAIL",
        };
        writeln!(log, "criterion {:>2} {:<13} {} [{:.2} s] {}", o.id, tag, o.title, o.elapsed.as_secs_f64(), o.detail).unwrap();
        if let (false, Some((_, why))) = (o.ok, known) {
            writeln!(log, "             reason: {why}").unwrap();
        }
    }
    drop(log);
    let unexpected: Vec<u32> = outcomes
        .iter()
        .filter(|o| !o.ok && !KNOWN_UNATTAINABLE.iter().any(|(id, _)| *id == o.id))
        .map(|o| o.id)
        .collect();
    let stale: Vec<u32> = KNOWN_UNATTAINABLE
        .iter()
        .filter(|(id, _)| outcomes.iter().any(|o| o.id == *id && o.ok))
        .map(|(id, _)| *id)
        .collect();
    assert!(unexpected.is_empty(), "failing criteria: {unexpected:?}");
    assert!(stale.is_empty(), "criteria listed as unattainable now pass: {stale:?}");
}
