use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn homecrawl(args: &[&str]) -> Output {
    homecrawl_with_input(args, "")
}

fn homecrawl_with_input(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_homecrawl"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn sim(name: &str) -> String {
    format!("sim:{}", data(name).display())
}

fn crawl(scenario: &str, store: &Path, extra: &[&str]) -> Output {
    let source = sim(scenario);
    let mut args = vec!["crawl", "--source", &source, "--store", store.to_str().unwrap()];
    args.extend(extra);
    let out = homecrawl(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    out
}

fn report_value(report: &str, key: &str) -> String {
    report
        .lines()
        .find_map(|l| l.strip_prefix(key))
        .map(|v| v.trim_start_matches(':').trim().to_string())
        .unwrap_or_else(|| panic!("no {key} in {report}"))
}

#[test]
fn missing_scenario_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("s.nt");
    let out = homecrawl(&["crawl", "--source", "sim:/nonexistent/scenario.json", "--store", store.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!store.exists());
}

#[test]
fn exit_codes_for_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.nt");
    std::fs::write(&bad, "this is not a triple\n").unwrap();
    assert_eq!(homecrawl(&["ask", "--store", bad.to_str().unwrap(), "devices"]).status.code(), Some(4));
    let empty = dir.path().join("none.nt");
    assert_eq!(homecrawl(&["ask", "--store", empty.to_str().unwrap(), "weather"]).status.code(), Some(2));
    assert_eq!(homecrawl(&["crawl", "--source", "lan"]).status.code(), Some(2));
    assert_eq!(homecrawl(&["query", "--store", empty.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(
        homecrawl(&["query", "--store", empty.to_str().unwrap(), "--pattern", "?s ?p"]).status.code(),
        Some(2)
    );
    let scenario = dir.path().join("s.json");
    std::fs::write(&scenario, r#"{"seed":1,"gatewayName":"g","colour":"red"}"#).unwrap();
    let source = format!("sim:{}", scenario.display());
    assert_eq!(
        homecrawl(&["crawl", "--source", &source, "--store", empty.to_str().unwrap()]).status.code(),
        Some(2)
    );
    assert_eq!(
        homecrawl(&["classify", "--model", "/nonexistent/model.json", "--trace", "/nonexistent/t.csv"]).status.code(),
        Some(2)
    );
}

#[test]
fn empty_home_gives_all_zero_report() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("s.nt");
    let report = stdout(&crawl("empty.json", &store, &[]));
    for key in ["devices discovered", "gateways queried", "gateway nodes", "streams", "observations", "merges"] {
        assert_eq!(report_value(&report, key), "0", "{key}");
    }
    assert_eq!(stdout(&homecrawl(&["ask", "--store", store.to_str().unwrap(), "whats-happening"])).trim(), "nothing notable is happening");
}

#[test]
fn crawl_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("s.nt");
    crawl("demo.json", &store, &["--poll-samples", "5"]);
    let first = std::fs::read(&store).unwrap();
    crawl("demo.json", &store, &["--poll-samples", "5"]);
    assert_eq!(std::fs::read(&store).unwrap(), first);
}

#[test]
fn confirm_from_piped_input() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("s.nt");
    let store_arg = store.to_str().unwrap();
    let report = stdout(&crawl("demo.json", &store, &["--poll-samples", "1"]));
    assert!(report.contains("1 ambiguous (0 auto-accepted)"), "{report}");

    let out = homecrawl_with_input(&["confirm", "--store", store_arg], "1\n");
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("Fibaro Kitchen (ambiguous)"), "{text}");
    assert!(text.contains("1. devices:FibaroWallPlug"), "{text}");
    assert!(text.contains("1 confirmed, 0 skipped"), "{text}");

    let typed = stdout(&homecrawl(&["query", "--store", store_arg, "--pattern", "?d rdf:type devices:FibaroWallPlug"]));
    assert_eq!(typed.lines().count(), 2, "{typed}");
    assert_eq!(stdout(&homecrawl_with_input(&["confirm", "--store", store_arg], "")).trim(), "nothing to confirm");
}

#[test]
fn confirm_skips_on_eof_and_keeps_queue() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("s.nt");
    let store_arg = store.to_str().unwrap();
    crawl("demo.json", &store, &["--poll-samples", "1"]);
    let out = homecrawl_with_input(&["confirm", "--store", store_arg], "9\ns\n");
    assert!(stdout(&out).contains("no candidate 9"));
    assert!(stdout(&out).contains("0 confirmed, 1 skipped"));
    assert!(stdout(&homecrawl_with_input(&["confirm", "--store", store_arg], "")).contains("Fibaro Kitchen"));
}

#[test]
fn questions_after_demo_crawl() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("s.nt");
    let store_arg = store.to_str().unwrap();
    let report = stdout(&crawl("demo.json", &store, &["--auto-accept-top"]));
    assert_eq!(report_value(&report, "gateways queried"), "1");
    assert_eq!(report_value(&report, "gateway nodes"), "2");

    let devices = stdout(&homecrawl(&["ask", "--store", store_arg, "devices"]));
    let expected = "FIBARO System FGWPE/F Wall Plug Gen5\tdevices:FibaroWallPlug\n\
                    Fibaro Kitchen\tdevices:FibaroWallPlug\n\
                    homee-0005510F1A3D\tdevices:HomeeGateway\n";
    assert_eq!(devices, expected);
    let network = stdout(&homecrawl(&["ask", "--store", store_arg, "network"]));
    assert_eq!(network, "homee-0005510F1A3D\t192.168.1.10\n");
    // Without a classifier there is no appliance to name, only usage.
    let happening = stdout(&homecrawl(&["ask", "--store", store_arg, "whats-happening"]));
    assert!(happening.contains("a device is in use in the kitchen"), "{happening}");

    let power = stdout(&homecrawl(&["query", "--store", store_arg, "--find-streams", "--quantity", "qk:Power"]));
    assert_eq!(power.lines().count(), 2);
    let plugs = stdout(&homecrawl(&[
        "query", "--store", store_arg, "--find-streams", "--device-type", "devices:FibaroWallPlug",
    ]));
    assert_eq!(plugs.lines().count(), 4);
}

#[test]
fn train_and_classify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("model.json");
    let out = homecrawl(&["train", "--out", model.to_str().unwrap(), "--traces-per-class", "20", "--seed", "3"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("macro precision: 0."));

    let zero = dir.path().join("zero.csv");
    let rows: String = (0..90).map(|i| format!("{},0\n", 1_550_000_000 + 10 * i)).collect();
    std::fs::write(&zero, format!("timestamp,watts\n{rows}")).unwrap();
    let out = homecrawl(&["classify", "--model", model.to_str().unwrap(), "--trace", zero.to_str().unwrap()]);
    assert!(out.status.success());
    let line = stdout(&out);
    let (label, confidence) = line.trim().split_once('\t').unwrap();
    assert!(!label.is_empty());
    let confidence: f64 = confidence.parse().unwrap();
    assert!((0.0..=1.0).contains(&confidence));
}

#[test]
fn simulate_serves_the_gateway_protocol() {
    use std::io::{BufRead, BufReader};
    use std::net::{TcpListener, TcpStream};
    use std::time::{Duration, Instant};

    let port = TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let listen = format!("127.0.0.1:{port}");
    let mut child = Command::new(env!("CARGO_BIN_EXE_homecrawl"))
        .args(["simulate", "--scenario", data("demo.json").to_str().unwrap(), "--listen", &listen])
        .stdout(Stdio::null())
        .spawn()
        .unwrap();
    let deadline = Instant::now() + Duration::from_secs(20);
    let stream = loop {
        match TcpStream::connect(&listen) {
            Ok(s) => break s,
            Err(_) if Instant::now() < deadline => std::thread::sleep(Duration::from_millis(50)),
            Err(e) => panic!("gateway never came up: {e}"),
        }
    };
    let mut writer = stream.try_clone().unwrap();
    writer.write_all(b"GET:nodes/\n").unwrap();
    let mut line = String::new();
    BufReader::new(stream).read_line(&mut line).unwrap();
    child.kill().unwrap();
    let _ = child.wait();
    assert!(line.starts_with(r#"{"nodes":[{"added":1548863167,"id":7,"#), "{line}");
}
