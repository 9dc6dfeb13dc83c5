use std::path::PathBuf;

use proptest::prelude::*;

use motivic_cover::format::{
    center_from_json, center_to_json, config_from_json, config_to_json, graph_from_json, graph_to_json, is_graph_json,
};
use motivic_cover::random::{random_case, Bounds};
use motivic_cover::Error;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", name].iter().collect();
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn fixture_round_trips() {
    for name in ["example_a", "example_b", "example_c", "example_d", "example_e", "one_component", "zero_exceptional"] {
        let c = config_from_json(&fixture(&format!("{name}.json"))).unwrap();
        assert_eq!(config_from_json(&config_to_json(&c).unwrap()).unwrap(), c, "{name}");
        let z = center_from_json(&fixture(&format!("{name}_center.json"))).unwrap();
        assert_eq!(center_from_json(&center_to_json(&z).unwrap()).unwrap(), z, "{name}");
    }
    for name in ["cusp.json", "smooth_germ.json"] {
        let text = fixture(name);
        assert!(is_graph_json(&text));
        let g = graph_from_json(&text).unwrap();
        assert_eq!(graph_from_json(&graph_to_json(&g).unwrap()).unwrap(), g);
    }
    assert!(!is_graph_json(&fixture("example_a.json")));
}

#[test]
fn rejections() {
    assert!(matches!(config_from_json(&fixture("zero_multiplicity.json")), Err(Error::InvalidConfiguration(_))));
    assert!(matches!(config_from_json(&fixture("malformed.json")), Err(Error::Format { .. })));
    let extra = fixture("example_a.json").replacen('{', "{\"colour\": 1,", 1);
    assert!(matches!(config_from_json(&extra), Err(Error::Format { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn random_cases_round_trip(seed in 0u64..1000, index in 0u64..1000) {
        let case = random_case(seed, index, &Bounds::default(), false);
        let c = config_from_json(&config_to_json(&case.config).unwrap()).unwrap();
        prop_assert_eq!(c, case.config);
        let z = center_from_json(&center_to_json(&case.center).unwrap()).unwrap();
        prop_assert_eq!(z, case.center);
    }
}
