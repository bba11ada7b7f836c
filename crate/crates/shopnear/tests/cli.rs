mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::{golden_path, Server};
use serde_json::Value;
use shopnear::api::ApiSettings;
use shopnear::store::Store;

fn shopnear(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shopnear"))
        .args(args)
        .env_remove("SHOPNEAR_SNAPSHOT")
        .env_remove("SHOPNEAR_CONFIG")
        .env("RUST_LOG", "warn")
        .output()
        .unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = shopnear(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn demo_snapshot(dir: &Path) -> String {
    let path = dir.join("demo.json");
    ok(&["seed", "--demo", "--out", path.to_str().unwrap()]);
    path.to_str().unwrap().to_owned()
}

#[test]
fn seed_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let c = dir.path().join("c.json");
    ok(&["seed", "--seed", "42", "--out", a.to_str().unwrap()]);
    ok(&["seed", "--seed", "42", "--out", b.to_str().unwrap()]);
    ok(&["seed", "--seed", "43", "--out", c.to_str().unwrap()]);
    let (a, b, c) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap(), std::fs::read(c).unwrap());
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn mine_json_on_demo() {
    let dir = tempfile::tempdir().unwrap();
    let snap = demo_snapshot(dir.path());
    let out: Value = serde_json::from_str(&ok(&["mine", "--snapshot", &snap, "--shop", "1"])).unwrap();
    assert_eq!(out["transactions"], 4);
    let rules = out["rules"].as_array().unwrap();
    assert_eq!(rules.len(), 2);
    assert_eq!(rules[0]["antecedent"][0]["name"], "bread");
    assert_eq!(rules[0]["consequent"][0]["name"], "milk");
    assert_eq!(rules[1]["antecedent"][0]["name"], "milk");
    for r in rules {
        assert_eq!(r["support"].as_f64().unwrap(), 0.5);
        assert!((r["confidence"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-9);
    }
    let frequent = out["frequent_itemsets"].as_array().unwrap();
    assert!(frequent.iter().all(|f| f["support"].as_f64().unwrap() >= 0.3));

    // Lower thresholds surface the cake rules as well.
    let loose: Value = serde_json::from_str(&ok(&[
        "mine",
        "--snapshot",
        &snap,
        "--shop",
        "1",
        "--min-support",
        "0.1",
        "--top-k",
        "10",
    ]))
    .unwrap();
    assert_eq!(loose["rules"].as_array().unwrap().len(), 7);
}

#[test]
fn mine_table_on_demo() {
    let dir = tempfile::tempdir().unwrap();
    let snap = demo_snapshot(dir.path());
    let table = ok(&["mine", "--snapshot", &snap, "--shop", "1", "--format", "table"]);
    assert!(table.contains("bread"), "{table}");
    let rule_line =
        table.lines().find(|l| l.contains("milk") && l.contains("0.6667")).unwrap_or_else(|| panic!("{table}"));
    assert!(rule_line.contains("0.5000"), "{rule_line}");
}

#[test]
fn mine_config_file_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let snap = demo_snapshot(dir.path());
    let cfg = dir.path().join("shopnear.toml");
    std::fs::write(&cfg, "min_support = 0.1\ntop_k = 1\n").unwrap();
    let out: Value =
        serde_json::from_str(&ok(&["mine", "--snapshot", &snap, "--shop", "1", "--config", cfg.to_str().unwrap()]))
            .unwrap();
    assert_eq!(out["rules"].as_array().unwrap().len(), 1);
    let out: Value = serde_json::from_str(&ok(&[
        "mine",
        "--snapshot",
        &snap,
        "--shop",
        "1",
        "--config",
        cfg.to_str().unwrap(),
        "--top-k",
        "3",
    ]))
    .unwrap();
    assert_eq!(out["rules"].as_array().unwrap().len(), 3);
}

#[test]
fn export_arff_matches_golden_and_empty_shop() {
    let dir = tempfile::tempdir().unwrap();
    let snap = demo_snapshot(dir.path());
    let out = dir.path().join("shop1.arff");
    ok(&["export-arff", "--snapshot", &snap, "--shop", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), std::fs::read_to_string(golden_path("demo_shop.arff")).unwrap());

    // A shop with no history: header only, still a success.
    let store = Store::in_memory();
    store.restore(Path::new(&snap)).unwrap();
    let owner = store.read(|s| s.shops().next().unwrap().owner_user_id);
    let empty = store.register_shop(owner, "Empty", shopnear_core::GeoPoint::new(1.0, 1.0).unwrap()).unwrap().id;
    let snap2 = dir.path().join("with-empty.json");
    store.snapshot_to(&snap2).unwrap();
    let out2 = dir.path().join("empty.arff");
    ok(&[
        "export-arff",
        "--snapshot",
        snap2.to_str().unwrap(),
        "--shop",
        &empty.to_string(),
        "--out",
        out2.to_str().unwrap(),
    ]);
    let (_, attributes, rows) = common::parse_basket_arff(&std::fs::read_to_string(out2).unwrap());
    assert_eq!(attributes.len(), 8);
    assert!(rows.is_empty());
}

#[test]
fn bad_invocations_fail() {
    let dir = tempfile::tempdir().unwrap();
    let snap = demo_snapshot(dir.path());
    let cases: Vec<Vec<&str>> = vec![
        vec!["frobnicate"],
        vec!["mine", "--snapshot", &snap],
        vec!["mine", "--snapshot", &snap, "--shop", "1", "--min-support", "0"],
        vec!["mine", "--snapshot", &snap, "--shop", "1", "--min-confidence", "1.5"],
        vec!["mine", "--snapshot", &snap, "--shop", "1", "--top-k", "0"],
        vec!["mine", "--snapshot", &snap, "--shop", "99"],
        vec!["mine", "--snapshot", "/definitely/not/here.json", "--shop", "1"],
        vec!["mine", "--snapshot", &snap, "--shop", "1", "--format", "xml"],
    ];
    for args in cases {
        let out = shopnear(&args);
        assert!(!out.status.success(), "{args:?} should fail");
        assert!(!out.stderr.is_empty());
        assert!(out.stdout.is_empty(), "{args:?} printed {}", String::from_utf8_lossy(&out.stdout));
    }
    let truncated = dir.path().join("truncated.json");
    let bytes = std::fs::read(&snap).unwrap();
    std::fs::write(&truncated, &bytes[..bytes.len() / 2]).unwrap();
    let out = shopnear(&["mine", "--snapshot", truncated.to_str().unwrap(), "--shop", "1"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("truncated.json"));
}

#[tokio::test]
async fn cli_and_api_agree() {
    let dir = tempfile::tempdir().unwrap();
    let snap = dir.path().join("seeded.json");
    ok(&["seed", "--seed", "7", "--orders", "150", "--out", snap.to_str().unwrap()]);
    let store = Store::open(&snap).unwrap();
    let shops: Vec<u64> = store.read(|s| s.shops().map(|s| s.id.0).collect());
    let server = Server::start(store, ApiSettings::default()).await;
    for shop in shops {
        let cli: Value =
            serde_json::from_str(&ok(&["mine", "--snapshot", snap.to_str().unwrap(), "--shop", &shop.to_string()]))
                .unwrap();
        let (status, api) = server.get(&format!("/shops/{shop}/recommendations"), None).await;
        assert_eq!(status, 200);
        assert_eq!(cli["rules"], api["data"], "shop {shop}");
    }
    server.stop().await;
}
