use katz_cli::doc::{Document, Envelope};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = String> {
    (-20i64..=20, 1i64..=9).prop_map(|(n, d)| format!("{n}/{d}"))
}

fn matrix(n: usize, scalar: BoxedStrategy<serde_json::Value>) -> impl Strategy<Value = serde_json::Value> {
    prop::collection::vec(prop::collection::vec(scalar, n), n).prop_map(|rows| serde_json::json!(rows))
}

/// Byte-normalized form: parse, serialize, compare text.
fn normalize(text: &str) -> String {
    Document::parse(text).unwrap().to_json()
}

fn check(text: String) -> Result<(), TestCaseError> {
    let Ok(doc) = Document::parse(&text) else {
        // singular tuples are rejected; nothing to round-trip
        return Ok(());
    };
    let once = doc.to_json();
    prop_assert_eq!(Document::parse(&once).unwrap(), doc);
    prop_assert_eq!(normalize(&once), once.clone());
    let env: Envelope = serde_json::from_str(&once).unwrap();
    prop_assert_eq!(serde_json::to_string_pretty(&env).unwrap(), once);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_tuples((n, ms) in (1usize..=3).prop_flat_map(|n| (Just(n), prop::collection::vec(matrix(n, rational().prop_map(serde_json::Value::from).boxed()), 1..=3)))) {
        let text = serde_json::json!({"kind": "mat-tuple", "field": {"kind": "rational"}, "n": n, "r": ms.len(), "matrices": ms}).to_string();
        check(text)?;
    }

    #[test]
    fn cyclotomic_tuples((n, ms) in (1usize..=2).prop_flat_map(|n| {
        let scalar = prop::collection::vec(rational(), 2).prop_map(|v| serde_json::json!(v)).boxed();
        (Just(n), prop::collection::vec(matrix(n, scalar), 1..=3))
    })) {
        let text = serde_json::json!({"kind": "mat-tuple", "field": {"kind": "cyclotomic", "order": 3}, "n": n, "r": ms.len(), "matrices": ms}).to_string();
        check(text)?;
    }

    #[test]
    fn fuchsian_systems((n, ms) in (1usize..=3).prop_flat_map(|n| (Just(n), prop::collection::vec(matrix(n, rational().prop_map(serde_json::Value::from).boxed()), 1..=4)))) {
        let points: Vec<String> = (0..ms.len()).map(|i| format!("{}/2", 2 * i as i64 - 3)).collect();
        let text = serde_json::json!({"kind": "fuchsian", "field": {"kind": "rational"}, "n": n, "r": ms.len(), "points": points, "matrices": ms}).to_string();
        check(text)?;
    }

    #[test]
    fn okubo_systems(t in prop::collection::vec(-3i64..=3, 1..=4), b in prop::collection::vec(rational(), 16)) {
        let n = t.len();
        let b: Vec<Vec<String>> = (0..n).map(|i| b[i * n..(i + 1) * n].to_vec()).collect();
        let mut distinct: Vec<i64> = Vec::new();
        for x in &t {
            if !distinct.contains(x) {
                distinct.push(*x);
            }
        }
        let t: Vec<String> = t.iter().map(|x| x.to_string()).collect();
        let text = serde_json::json!({"kind": "okubo", "field": {"kind": "rational"}, "n": n, "r": distinct.len(), "T": t, "b": b}).to_string();
        check(text)?;
    }
}

#[test]
fn non_normalized_scalars_are_reduced() {
    let text = r#"{"kind":"mat-tuple","field":{"kind":"rational"},"n":1,"r":1,"matrices":[[["4/-6"]]]}"#;
    let doc = Document::parse(text).unwrap();
    assert_eq!(doc.to_value()["matrices"][0][0][0], "-2/3");
}
