use std::process::Command;

// Each example must build and exit cleanly.
#[test]
fn examples_run() {
    for name in ["next_cover", "two_machines", "ptas_reduction", "fptas_mechanism", "oracle", "ratio_report"] {
        let out = Command::new(env!("CARGO"))
            .args(["run", "-q", "--example", name])
            .current_dir(env!("CARGO_MANIFEST_DIR"))
            .output()
            .expect("cargo runs");
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stdout.is_empty(), "{name} printed nothing");
    }
}
