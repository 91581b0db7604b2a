// Load a medium from JSON, validate it and print its spectral constants.

use itep::media::{compute_constants, validate_profile, MediumProfile, DEFAULT_QUAD_TOL};

const MEDIUM: &str = r#"{
  "epsilon0": 1.0,
  "gamma0": 0.1,
  "epsilon1": { "breakpoints": [0.0, 0.5, 1.0], "coeffs": [[4.0, 0.0, -2.0], [3.5, -2.0, 1.0]] },
  "gamma1": { "constant": 0.2 }
}"#;

fn main() -> itep::Result<()> {
    let profile = MediumProfile::from_json(MEDIUM)?;
    let report = validate_profile(&profile);
    println!("valid: {}, C²: {}", report.passed(), report.is_c2());
    for w in &report.warnings {
        println!("warning: {w}");
    }

    let c = compute_constants(&profile, DEFAULT_QUAD_TOL)?;
    println!("A = {:.12}  B = {:.12}  C = {:.12}  D = {:.12}", c.A, c.B, c.C, c.D);
    println!("predicted zero density (A+B)/π = {:.6}", c.predicted_density());

    // a negative permittivity is reported with the offending radius
    let bad = MediumProfile::from_json(r#"{"epsilon0": 1, "gamma0": 0, "epsilon1": {"breakpoints": [0, 1], "coeffs": [[1, -2]]}, "gamma1": {"constant": 0}}"#)?;
    for v in validate_profile(&bad).violations {
        println!("rejected: {v}");
    }
    Ok(())
}
