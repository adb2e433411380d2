//! Report determinism and the JSON layout consumed by the CLI.

use prepol_core::verify::{init_pool, pool, run_case};
use prepol_core::CaseId;
use serde_json::Value;

#[test]
fn reports_are_deterministic_across_pools() {
    init_pool(Some(4)).unwrap();
    let serial = run_case(CaseId::E6TwistedR4, 2).unwrap().to_json();
    let parallel = pool().install(|| run_case(CaseId::E6TwistedR4, 2).unwrap().to_json());
    assert_eq!(serial.to_string(), parallel.to_string());
}

#[test]
fn json_layout() {
    let v = run_case(CaseId::E8R1, 1).unwrap().to_json();
    assert_eq!(v["family"], "E8_1");
    assert_eq!(v["node"], 1);
    assert_eq!(v["table_node"], 7);
    assert_eq!(v["s"], 1);
    for c in v["conditions"].as_array().unwrap() {
        assert!(matches!(c["kind"].as_str(), Some("i" | "ii")));
        assert!(c["pass"].is_boolean() && c["value"].is_string() && c["required"].is_string());
        assert!(c["certificates"].is_array());
        if c["kind"] == "ii" {
            assert!(c["i"].is_u64() && c["f_norm"].is_string());
        }
    }
    for x in v["crosscheck"].as_array().unwrap() {
        for key in ["label", "formula", "engine", "paper"] {
            assert!(x[key].is_string(), "{key}");
        }
        assert!(x["match"].is_boolean() && x["advisory"].is_boolean());
    }
    assert!(v["decomposition"].is_array() || v["decomposition"].is_object());
    assert!(v["notes"].is_array());
    let other: Value = run_case(CaseId::E6R3, 1).unwrap().to_json();
    assert!(other.get("table_node").is_none());
}
