// Drive the command-line interface in-process and read back its manifest.

use itep::cli::{manifest_path, run, RunManifest};

fn main() -> itep::Result<()> {
    let dir = std::env::temp_dir().join(format!("itep-cli-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    let config = dir.join("medium.json");
    std::fs::write(&config, r#"{"epsilon0": 1, "gamma0": 0.1, "epsilon1": {"constant": 3}, "gamma1": {"constant": 0.2}}"#)
        .expect("write config");
    let out = dir.join("eigs.csv");

    let code = run([
        "itep", "eigs", "--config", config.to_str().unwrap(), "--re-min", "0.5", "--re-max", "10", "--im-min", "-1.5",
        "--im-max", "1", "--out", out.to_str().unwrap(),
    ]);
    println!("exit code {code}");
    print!("{}", std::fs::read_to_string(&out).expect("csv"));

    let manifest: RunManifest =
        serde_json::from_str(&std::fs::read_to_string(manifest_path(&out)).expect("manifest")).expect("parse");
    println!("{} took {:.3} s, sha256 {}", manifest.subcommand, manifest.duration_seconds, manifest.artifacts[0].sha256);

    // usage errors exit with 2
    println!("unknown flag → {}", run(["itep", "eigs", "--nope"]));
    std::fs::remove_dir_all(&dir).ok();
    Ok(())
}
