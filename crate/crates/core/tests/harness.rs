use derange_core::families::{frobenius_affine, FamilyId};
use derange_core::harness::corpus::{build_default_corpus, Corpus, CorpusConfig, MemberGroup, Provenance};
use derange_core::harness::report::{to_csv, SuiteReport, CSV_COLUMNS, SCHEMA};
use derange_core::harness::specfile::{parse_spec, GroupSpec};
use derange_core::harness::{resolve_suites, run_suite, SUITES};
use derange_core::perm::DEFAULT_CAP;
use derange_core::{Error, PermGroup, Status};

#[test]
fn default_corpus_has_the_required_members() {
    let c = build_default_corpus(&CorpusConfig::default()).unwrap();
    assert!(c.members.len() >= 200, "{} members", c.members.len());
    assert!(c.skipped.is_empty(), "{:?}", c.skipped);
    for name in ["frobenius_affine(5,1)", "sharp_gammal1(16)", "sl2_5_z(59,1)", "spec[AGL1(5)]", "spec[M11]"] {
        assert!(c.find(name).is_some(), "missing {name}");
    }
    let again = build_default_corpus(&CorpusConfig::default()).unwrap();
    let names = |c: &Corpus| c.members.iter().map(|m| m.name.clone()).collect::<Vec<_>>();
    assert_eq!(names(&c), names(&again));
}

fn small_corpus() -> Corpus {
    let agl = frobenius_affine(5, 1).unwrap();
    let f16 = frobenius_affine(16, 5).unwrap();
    let wreath = parse_spec("kind perm\ndegree 6\ngen (0 1 2)\ngen (0 1)\ngen (0 3)(1 4)(2 5)\n").unwrap();
    let GroupSpec::Perm { group: wreath, .. } = wreath else { unreachable!() };
    let members = vec![
        (agl.name(), Provenance::Family(agl.spec), MemberGroup::Mat { group: agl.group.enumerated(DEFAULT_CAP).unwrap(), gammal1: None }),
        (f16.name(), Provenance::Family(f16.spec), MemberGroup::Mat { group: f16.group.enumerated(DEFAULT_CAP).unwrap(), gammal1: None }),
        ("S3wrC2".into(), Provenance::SpecFile { file: "inline".into() }, MemberGroup::Perm(wreath.enumerated(DEFAULT_CAP).unwrap())),
        ("C2".into(), Provenance::SpecFile { file: "inline".into() }, MemberGroup::Perm(PermGroup::cyclic(2).unwrap().enumerated(DEFAULT_CAP).unwrap())),
    ];
    Corpus::from_members(members, DEFAULT_CAP)
}

#[test]
fn corpus_suites_pass_on_a_small_corpus() {
    let c = small_corpus();
    c.prepare();
    for suite in ["eta-identity", "sandwich", "trichotomy-cc", "subgroup-index", "families-sharpness", "block-quotient"] {
        let results = run_suite(suite, &c).unwrap();
        let fails: Vec<_> = results.iter().filter(|r| r.status == Status::Fail).map(|r| &r.check_id).collect();
        // The coverage check needs 50 members; everything else must pass.
        assert!(fails.iter().all(|id| *id == "eta-identity/coverage"), "{suite}: {fails:?}");
    }
    let bq = run_suite("block-quotient", &c).unwrap();
    // F_16 : F_4^* preserves the F_4-lines, and S3 wr C2 has its two blocks.
    assert!(bq.iter().any(|r| r.check_id.starts_with("block-quotient/S3wrC2/")));
    assert!(bq.iter().any(|r| r.check_id.starts_with("block-quotient/frobenius_affine(16,5):affine/")));
    let fam = run_suite("families-sharpness", &c).unwrap();
    assert!(fam.iter().any(|r| r.check_id == "frobenius-iff/frobenius_affine(5,1)" && r.status == Status::Pass));
    assert_eq!(c.find("frobenius_affine(5,1)").and_then(|m| m.family()).map(|s| s.id), Some(FamilyId::FrobeniusAffine));
}

#[test]
fn suite_names_resolve() {
    assert_eq!(resolve_suites("all").unwrap().len(), SUITES.len());
    assert_eq!(resolve_suites("sandwich").unwrap(), vec!["sandwich"]);
    assert!(matches!(resolve_suites("bogus"), Err(Error::UnknownSuite(_))));
    assert!(matches!(run_suite("bogus", &small_corpus()), Err(Error::UnknownSuite(_))));
}

#[test]
fn reports_have_a_versioned_schema() {
    let c = small_corpus();
    let results = run_suite("valuation-lemmas", &c).unwrap();
    let rep = SuiteReport::new("valuation-lemmas", &c, results);
    assert!(!rep.failed());
    let json: serde_json::Value = serde_json::from_str(&rep.to_json().unwrap()).unwrap();
    assert_eq!(json["schema"], SCHEMA);
    let first = &json["results"][0];
    for key in ["check_id", "anchor", "status", "witness"] {
        assert!(first.get(key).is_some(), "{key}");
    }
    let csv = to_csv(&[rep]).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(format!("# schema {SCHEMA}").as_str()));
    assert_eq!(lines.next(), Some(CSV_COLUMNS.join(",").as_str()));
    assert!(lines.next().is_some());
}
