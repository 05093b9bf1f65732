//! Compare the perturbative gadget, the nine-direction reduction and its
//! greedy ten-term extension for X1 Z2 X3, through the command layer.
//!
//! Usage: `cargo run --release --example compare [output.json]`

fn main() {
    let out = std::env::args().nth(1).unwrap_or_else(|| "compare.json".into());
    let args = ["klocal", "compare", "--output", &out, "--delta-grid", "1e2:1e8:7"];
    let code = klocal::commands::run_from(args);
    if code == 0 {
        let text = std::fs::read_to_string(&out).expect("output written");
        let v: serde_json::Value = serde_json::from_str(&text).expect("valid JSON");
        for m in v["methods"].as_array().into_iter().flatten() {
            let last = m["points"].as_array().and_then(|p| p.last()).cloned().unwrap_or_default();
            println!("{:>6}  error {}  spread {}", m["method"], last["spectral_error"], last["spread"]);
        }
    }
    std::process::exit(code);
}
