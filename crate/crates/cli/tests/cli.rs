use std::io::{BufRead, BufReader, Read, Write};
use std::net::{TcpListener, TcpStream};
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};
use std::time::Duration;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_basketchef"));
    cmd.env_remove("BASKETCHEF_CORPUS").env_remove("BASKETCHEF_PORT");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name).display().to_string()
}

fn temp_file(name: &str, contents: &str) -> String {
    let dir = std::env::temp_dir().join(format!("basketchef-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.display().to_string()
}

#[test]
fn validate_bundled_corpus() {
    let out = run(&["validate"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("ok: 2 categories, 60 recipes, 58 distinct items"));
}

#[test]
fn invalid_corpus_exits_1_with_path() {
    let bad = r#"{"categories":[{"name":"rice","subcategories":[{"name":"pulao","dishes":[{"name":"peas pulao","recipes":[{"id":"r1","items":[]}]}]}]}]}"#;
    let path = temp_file("empty-recipe.json", bad);
    let out = run(&["--corpus", &path, "validate"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("rice/pulao/peas pulao/r1"), "{}", stderr(&out));

    let path = temp_file("not-json.json", "{");
    assert_eq!(run(&["--corpus", &path, "validate"]).status.code(), Some(1));
}

#[test]
fn missing_corpus_is_an_io_error() {
    let out = run(&["--corpus", "/definitely/not/here.json", "identifiers"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn corpus_path_from_environment() {
    let path = temp_file("env.json", basketchef_corpus());
    let out = bin().env("BASKETCHEF_CORPUS", &path).arg("validate").output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("1 categories, 2 recipes"));
}

fn basketchef_corpus() -> &'static str {
    r#"{"categories":[{"name":"soup","subcategories":[
        {"name":"clear","dishes":[{"name":"broth","recipes":[{"id":"b1","items":["water","salt","bone"]}]}]},
        {"name":"thick","dishes":[{"name":"stew","recipes":[{"id":"s1","items":["water","salt","potato"]}]}]}]}]}"#
}

#[test]
fn threshold_table_defaults() {
    let out = run(&["threshold-table"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 8);
    assert_eq!(lines[0], r#""theta","n=1","n=2","n=3","n=4","n=5","n=6","n=7","n=8","n=9","n=10""#);
    assert_eq!(lines[7], "7,616,18,12,11,10,9,9,9,9,8");
}

#[test]
fn threshold_table_custom_and_limit() {
    let out = run(&["threshold-table", "--n", "1,2", "--theta", "5,30"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "\"theta\",\"n=1\",\"n=2\"\n5,83,10\n30,\"NA\",247\n");
    assert_eq!(run(&["threshold-table", "--n", "0.5"]).status.code(), Some(2));
}

#[test]
fn score_curve() {
    let out = run(&["score-curve", "--n", "1,2", "--max-rank", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "\"rank\",\"n=1\",\"n=2\"\n1,1,1\n2,0.5,0.7071067811865476\n3,0.3333333333333333,0.5773502691896257\n4,0.25,0.5\n");
}

#[test]
fn identifiers_and_differentiators() {
    let out = run(&["identifiers", "--k", "2"]);
    assert_eq!(
        stdout(&out),
        "\"category\",\"rank\",\"item\",\"score\"\n\"rice\",1,\"long-grain rice\",1\n\"rice\",2,\"clove\",0.6666666666666666\n\"chicken\",1,\"chicken\",0.7916666666666666\n\"chicken\",2,\"chicken breast\",0.5416666666666666\n"
    );
    let out = run(&["differentiators", "--category", "chicken", "--top", "1"]);
    assert_eq!(
        stdout(&out),
        "\"category\",\"subcategory\",\"rank\",\"item\",\"score\"\n\"chicken\",\"indian\",1,\"cumin\",0.75\n\"chicken\",\"chinese\",1,\"dark soya sauce\",0.75\n"
    );
    let out = run(&["differentiators", "--category", "pasta"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("rice, chicken"));
}

#[test]
fn replay_matches_golden_transcript() {
    let out = run(&["replay", &fixture("biryani.script")]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let golden = std::fs::read_to_string(fixture("biryani.transcript.json")).unwrap();
    assert_eq!(stdout(&out), golden);
}

#[test]
fn replay_with_overrides() {
    let script = temp_file("short.script", "add ghee\nadd kewra water\nrecommend\n");
    let out = run(&["replay", &script, "--theta", "1", "--top-n", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let t: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(t["config"]["theta"], 1.0);
    assert_eq!(t["steps"][1]["event"]["activated_subcategories"][0]["subcategory"], "biryani");
    assert_eq!(t["steps"][2]["recommendations"]["recommendations"].as_array().unwrap().len(), 1);
}

#[test]
fn empty_script_gives_initial_state_only() {
    let script = temp_file("empty.script", "# nothing yet\n");
    let out = run(&["replay", &script]);
    assert_eq!(out.status.code(), Some(0));
    let t: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(t["steps"], serde_json::json!([]));
    assert_eq!(t["initial"]["basket"], serde_json::json!([]));
    assert_eq!(stdout(&run(&["replay", &script])), stdout(&out));
}

#[test]
fn one_identifier_per_category_without_salt() {
    let text = stdout(&run(&["identifiers", "--k", "1"]));
    assert_eq!(text.lines().count(), 3);
    assert!(!stdout(&run(&["identifiers"])).contains("\"salt\""));
}

#[test]
fn replay_errors() {
    let script = temp_file("typo.script", "add ghee\nadd kewra\n");
    let out = run(&["replay", &script]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains(":2:") && stderr(&out).contains("kewra water"), "{}", stderr(&out));
    assert_eq!(run(&["replay", "/no/such.script"]).status.code(), Some(3));
    assert_eq!(run(&["replay", &script, "--k", "0"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["identifiers", "--k", "many"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn serve_reports_port_conflicts() {
    let taken = TcpListener::bind("127.0.0.1:0").unwrap();
    let port = taken.local_addr().unwrap().port().to_string();
    let out = run(&["serve", "--port", &port]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("already in use"), "{}", stderr(&out));
}

#[test]
fn serve_rejects_invalid_corpus_before_binding() {
    let path = temp_file("broken.json", "[]");
    let taken = TcpListener::bind("127.0.0.1:0").unwrap();
    let port = taken.local_addr().unwrap().port().to_string();
    let out = run(&["--corpus", &path, "serve", "--port", &port]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!stderr(&out).contains("already in use"));
}

#[test]
fn serve_answers_http_requests() {
    let mut child = bin().args(["serve", "--port", "0"]).stderr(Stdio::piped()).stdout(Stdio::null()).spawn().unwrap();
    let mut lines = BufReader::new(child.stderr.take().unwrap()).lines();
    let banner = lines.next().unwrap().unwrap();
    let addr = banner.strip_prefix("listening on http://").unwrap().to_owned();

    let request = |raw: String| {
        let mut stream = TcpStream::connect(&addr).unwrap();
        stream.set_read_timeout(Some(Duration::from_secs(10))).unwrap();
        stream.write_all(raw.as_bytes()).unwrap();
        let mut response = String::new();
        stream.read_to_string(&mut response).unwrap();
        response
    };
    let created =
        request("POST /sessions HTTP/1.1\r\nHost: x\r\nContent-Length: 0\r\nConnection: close\r\n\r\n".into());
    assert!(created.starts_with("HTTP/1.1 201"), "{created}");
    assert!(created.contains(r#""session_id":"s-00000001""#));
    let body = r#"{"item":"ghee"}"#;
    let added = request(format!(
        "POST /sessions/s-00000001/items HTTP/1.1\r\nHost: x\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
        body.len()
    ));
    assert!(added.starts_with("HTTP/1.1 200"), "{added}");
    assert!(added.contains(r#""activated_categories":["rice"]"#));

    child.kill().unwrap();
    child.wait().unwrap();
}
