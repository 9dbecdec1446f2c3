use serde_json::Value;

use fraccolor_wasm_demo::{color_demo, oracle_path, regime_curve};

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn curve_endpoints_match_closed_form() {
    let v = parse(regime_curve("graph", 1, 8.0, 4.0, 1048576.0, 5));
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 5);
    let last = &rows[4];
    assert!((last["d"].as_f64().unwrap() - 1048576.0).abs() < 1e-6);
    let alpha = 20.0 / (3.0 * 1048576.0);
    assert!((last["alpha"].as_f64().unwrap() / alpha - 1.0).abs() < 1e-9);
    assert_eq!(last["inside"], true);
    assert!(parse(regime_curve("hyper", 1, 1.0, 4.0, 8.0, 3))["error"].is_string());
}

#[test]
fn colored_graph_is_proper_and_sample_matches() {
    let v = parse(color_demo("graph-trianglefree", 60, 4, 1, 400, 3));
    assert_eq!(v["valid"], true, "{v}");
    let edges: Vec<[usize; 2]> = serde_json::from_value(v["edges"].clone()).unwrap();
    let members: Vec<usize> = serde_json::from_value(v["sample"]["vertices"].clone()).unwrap();
    for [a, b] in edges {
        assert!(!(members.contains(&a) && members.contains(&b)));
    }
    assert_eq!(v, parse(color_demo("graph-trianglefree", 60, 4, 1, 400, 3)));
}

#[test]
fn hypergraph_family_runs() {
    let v = parse(color_demo("hyper-girth4", 60, 3, 3, 400, 8));
    assert_eq!(v["valid"], true, "{v}");
    assert!(parse(color_demo("hyper-girth4", 60, 3, 1, 400, 8))["error"].is_string());
}

#[test]
fn oracle_on_single_edge_is_exact() {
    let v = parse(oracle_path("hyper", 3, 1, "1/4"));
    assert_eq!(v["exact"], true, "{v}");
    assert_eq!(v["expectations"][0], "1/4");
    assert_eq!(parse(oracle_path("graph", 1, 2, "1/10"))["exact"], true);
}
