use kgkms::classifier::{classify, failing_states, regimes_ordered, GraphCase};
use kgkms::fixtures;
use kgkms::input::GraphDocument;
use kgkms::kms::Dynamics;
use kgkms::spectral::SpectralSummary;
use kgkms::structure::{order_vertices_relaxed, Decomposition};

#[test]
fn every_fixture_runs_through_the_pipeline() {
    for (name, s) in fixtures::valid_skeletons() {
        let d = Decomposition::new(&s);
        assert!(order_vertices_relaxed(&s, &d).is_block_upper_triangular(&s), "{name}");
        let sum = SpectralSummary::new(&s, &d).unwrap();
        let Ok(dy) = Dynamics::preferred(&sum) else {
            // radius at most 1 in some colour: no preferred dynamics
            assert!(sum.rho.iter().any(|r| r.value <= 1.0 + 1e-12), "{name}");
            continue;
        };
        let rep = classify(&s, &d, &sum, &dy, &[1.5, 3.0]).unwrap();
        assert!(regimes_ordered(&rep), "{name}");
        assert!(failing_states(&s, &rep).is_empty(), "{name}");
        let json = serde_json::to_string(&rep).unwrap();
        assert!(json.contains("\"regimes\""));
        if rep.case == GraphCase::General {
            assert!(rep.incomplete, "{name}");
        }
    }
}

#[test]
fn concrete_documents_agree_with_their_skeletons() {
    for (src, sk) in [(fixtures::FIGURE1_CONCRETE, fixtures::figure1()), (fixtures::FIGURE2_CONCRETE, fixtures::figure2())] {
        let doc = GraphDocument::parse(src).unwrap();
        assert_eq!(doc.skeleton().unwrap(), sk);
        assert!(doc.concrete().unwrap().is_some());
    }
}

#[test]
fn non_commuting_fixture_is_rejected() {
    let doc = GraphDocument::parse(fixtures::NON_COMMUTING).unwrap();
    assert!(doc.skeleton().unwrap_err().to_string().contains("do not commute"));
}
