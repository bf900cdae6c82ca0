use n6alg::corpus::{run_corpus, CorpusConfig, Fault};

#[test]
fn full_corpus_passes() {
    let summary = run_corpus(&CorpusConfig::default()).unwrap();
    eprintln!("{}", summary.table());
    eprintln!("{:.1}s", summary.seconds);
    assert!(summary.all_passed(), "failing: {:?}", summary.failing);
    assert_eq!(summary.instances, summary.rows.len());
    assert_eq!(summary.instances, 105 + 24);
}

#[test]
fn psi_fault_names_the_c3_instances() {
    let cfg = CorpusConfig { fault: Some(Fault::PsiSignDropped), towers: false, infinite: false, ..Default::default() };
    let summary = run_corpus(&cfg).unwrap();
    assert!(!summary.all_passed());
    assert!(summary.failing.iter().all(|f| f.starts_with("C3")), "{:?}", summary.failing);
    let c3_rows = summary.rows.iter().filter(|r| r.family.starts_with("C3")).count();
    let c3_failing = summary.failing.len();
    eprintln!("{c3_failing} of {c3_rows} C3 rows fail");
    assert!(c3_failing > 0);
}
