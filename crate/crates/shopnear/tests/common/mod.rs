//! Shared helpers for the integration tests: an in-process server on an
//! ephemeral port, a thin JSON client, schema loading, and the independent
//! oracles (ARFF reader, exhaustive rule miner).
#![allow(dead_code)]

pub mod gen;

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use serde_json::Value;
use shopnear::api::{self, ApiSettings, AppState};
use shopnear::clock::SystemClock;
use shopnear::orders::Orders;
use shopnear::outbox::MemoryOutbox;
use shopnear::store::Store;
use tokio::sync::oneshot;

pub struct Server {
    pub base: String,
    pub state: AppState,
    pub orders: Arc<Orders>,
    pub outbox: Arc<MemoryOutbox>,
    pub client: reqwest::Client,
    stop: Option<oneshot::Sender<()>>,
    task: Option<tokio::task::JoinHandle<std::io::Result<()>>>,
}

impl Server {
    pub async fn start(store: Store, settings: ApiSettings) -> Server {
        let outbox = Arc::new(MemoryOutbox::default());
        let orders = Arc::new(Orders::new(Arc::new(store), outbox.clone(), Arc::new(SystemClock)));
        let state = AppState::new(orders.clone(), settings);
        let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
        let base = format!("http://{}", listener.local_addr().unwrap());
        let (stop, stopped) = oneshot::channel::<()>();
        let task = tokio::spawn(api::serve(listener, state.clone(), async move {
            let _ = stopped.await;
        }));
        Server { base, state, orders, outbox, client: reqwest::Client::new(), stop: Some(stop), task: Some(task) }
    }

    pub async fn stop(mut self) {
        if let Some(stop) = self.stop.take() {
            let _ = stop.send(());
        }
        if let Some(task) = self.task.take() {
            tokio::time::timeout(Duration::from_secs(5), task).await.expect("server drains").unwrap().unwrap();
        }
    }

    pub fn url(&self, path: &str) -> String {
        format!("{}{}", self.base, path)
    }

    pub async fn get(&self, path: &str, token: Option<&str>) -> (u16, Value) {
        let mut req = self.client.get(self.url(path));
        if let Some(t) = token {
            req = req.bearer_auth(t);
        }
        decode(req.send().await.unwrap()).await
    }

    pub async fn post(&self, path: &str, token: Option<&str>, body: Value) -> (u16, Value) {
        let mut req = self.client.post(self.url(path)).json(&body);
        if let Some(t) = token {
            req = req.bearer_auth(t);
        }
        decode(req.send().await.unwrap()).await
    }

    pub async fn login(&self, user_id: u64, password: &str) -> String {
        let (status, body) =
            self.post("/login", None, serde_json::json!({"user_id": user_id, "password": password})).await;
        assert_eq!(status, 200, "{body}");
        body["data"]["token"].as_str().unwrap().to_owned()
    }
}

async fn decode(resp: reqwest::Response) -> (u16, Value) {
    let status = resp.status().as_u16();
    let text = resp.text().await.unwrap();
    let body: Value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("non-JSON body {text:?}: {e}"));
    (status, body)
}

/// Reads NDJSON notification lines from a long-lived response.
pub struct LineReader {
    resp: reqwest::Response,
    pending: Vec<u8>,
}

impl LineReader {
    pub fn new(resp: reqwest::Response) -> Self {
        LineReader { resp, pending: Vec::new() }
    }

    pub async fn next_json(&mut self, within: Duration) -> Option<Value> {
        tokio::time::timeout(within, async {
            loop {
                if let Some(pos) = self.pending.iter().position(|&b| b == b'\n') {
                    let line: Vec<u8> = self.pending.drain(..=pos).collect();
                    return Some(serde_json::from_slice(&line[..line.len() - 1]).expect("one JSON document per line"));
                }
                match self.resp.chunk().await.ok()? {
                    Some(bytes) => self.pending.extend_from_slice(&bytes),
                    None => return None,
                }
            }
        })
        .await
        .ok()
        .flatten()
    }
}

pub async fn open_stream(server: &Server, token: &str, after: Option<u64>) -> LineReader {
    let mut url = server.url("/notifications/stream");
    if let Some(a) = after {
        url.push_str(&format!("?after={a}"));
    }
    let resp = server.client.get(url).bearer_auth(token).send().await.unwrap();
    assert_eq!(resp.status().as_u16(), 200);
    assert_eq!(resp.headers()["content-type"], "application/x-ndjson");
    LineReader::new(resp)
}

pub fn schema(name: &str) -> jsonschema::Validator {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schemas").join(name);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    jsonschema::validator_for(&doc).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn assert_valid(validator: &jsonschema::Validator, doc: &Value) {
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "schema violations {errors:?} in {doc}");
}

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden").join(name)
}

// ---- oracles ---------------------------------------------------------------

/// Minimal ARFF reader for boolean basket files: attribute names in order
/// and, per data row, the set of attribute names whose value is `t`.
pub fn parse_basket_arff(text: &str) -> (String, Vec<String>, Vec<BTreeSet<String>>) {
    let mut relation = String::new();
    let mut attributes: Vec<String> = Vec::new();
    let mut rows = Vec::new();
    let mut in_data = false;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let lower = line.to_ascii_lowercase();
        if in_data {
            let values: Vec<&str> = line.split(',').collect();
            assert_eq!(values.len(), attributes.len(), "row width");
            let set = values
                .iter()
                .zip(&attributes)
                .filter_map(|(v, a)| match *v {
                    "t" => Some(a.clone()),
                    "f" => None,
                    other => panic!("unexpected value {other:?}"),
                })
                .collect();
            rows.push(set);
        } else if lower.starts_with("@relation") {
            relation = line["@relation".len()..].trim().to_owned();
        } else if lower.starts_with("@attribute") {
            let rest = line["@attribute".len()..].trim();
            let (name, domain) = if let Some(quoted) = rest.strip_prefix('\'') {
                let mut name = String::new();
                let mut chars = quoted.char_indices();
                let mut end = 0;
                while let Some((i, c)) = chars.next() {
                    match c {
                        '\\' => name.push(chars.next().unwrap().1),
                        '\'' => {
                            end = i + 1;
                            break;
                        }
                        c => name.push(c),
                    }
                }
                (name, quoted[end..].trim())
            } else {
                let (n, d) = rest.split_once(' ').unwrap();
                (n.to_owned(), d.trim())
            };
            assert_eq!(domain, "{t,f}");
            attributes.push(name);
        } else if lower == "@data" {
            in_data = true;
        } else {
            panic!("unexpected header line {line:?}");
        }
    }
    (relation, attributes, rows)
}

pub type Items = Vec<u64>;

/// Exhaustive miner over raw baskets: every subset of the item universe is
/// counted directly, rules are every split of every frequent set.
pub fn brute_frequent(transactions: &[Items], min_support: f64) -> BTreeMap<Items, usize> {
    let universe: BTreeSet<u64> = transactions.iter().flatten().copied().collect();
    let universe: Vec<u64> = universe.into_iter().collect();
    assert!(universe.len() <= 16);
    let n = transactions.len();
    let mut out = BTreeMap::new();
    for mask in 1u32..(1 << universe.len()) {
        let subset: Items = (0..universe.len()).filter(|i| mask & (1 << i) != 0).map(|i| universe[i]).collect();
        let count = transactions.iter().filter(|t| subset.iter().all(|x| t.contains(x))).count();
        if count as f64 / n as f64 >= min_support {
            out.insert(subset, count);
        }
    }
    out
}

pub fn brute_rules(
    frequent: &BTreeMap<Items, usize>,
    n: usize,
    min_confidence: f64,
) -> BTreeMap<(Items, Items), (f64, f64)> {
    let mut out = BTreeMap::new();
    for (whole, &count) in frequent.iter().filter(|(k, _)| k.len() >= 2) {
        for mask in 1u32..(1 << whole.len()) - 1 {
            let lhs: Items = (0..whole.len()).filter(|i| mask & (1 << i) != 0).map(|i| whole[i]).collect();
            let rhs: Items = whole.iter().copied().filter(|x| !lhs.contains(x)).collect();
            let confidence = count as f64 / frequent[&lhs] as f64;
            if confidence > min_confidence {
                out.insert((lhs, rhs), (count as f64 / n as f64, confidence));
            }
        }
    }
    out
}

/// Support desc, confidence desc, then (antecedent, consequent) ascending.
pub fn brute_top(rules: &BTreeMap<(Items, Items), (f64, f64)>, k: usize) -> Vec<((Items, Items), (f64, f64))> {
    let mut all: Vec<_> = rules.iter().map(|(k, v)| (k.clone(), *v)).collect();
    all.sort_by(|a, b| {
        b.1 .0.partial_cmp(&a.1 .0).unwrap().then(b.1 .1.partial_cmp(&a.1 .1).unwrap()).then(a.0.cmp(&b.0))
    });
    all.truncate(k);
    all
}
