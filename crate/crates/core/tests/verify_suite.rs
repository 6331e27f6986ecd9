use monocat::graph::Mode;
use monocat::products::ProductKind;
use monocat::verify::{check_all, Corpus, ProductOracle, VerifyConfig};

#[test]
fn built_in_oracles_pass_everything() {
    let cfg = VerifyConfig::default();
    for mode in [Mode::Directed, Mode::Undirected] {
        let corpus = Corpus::default_for(mode);
        for kind in ProductKind::ALL {
            let oracle = ProductOracle::new(kind, mode);
            for report in check_all(&oracle, &corpus, &cfg).unwrap() {
                for law in &report.laws {
                    assert!(law.passed, "{:?}", law.counterexample);
                }
            }
        }
    }
}
