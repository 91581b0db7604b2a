// Follow the first eigenvalues while the absorption is scaled, and relate
// their displacement to η.

use itep::determinant::DetSettings;
use itep::media::MediumProfile;
use itep::stability::{displacement_vs_eta, track_eigenvalues, Family};
use itep::zero_finder::FinderOptions;

fn main() -> itep::Result<()> {
    let base = MediumProfile::constant(3.0, 0.2, 1.0, 0.1);
    let s_values = [1.0, 1.05, 1.1, 1.25, 1.5];
    let run = track_eigenvalues(&base, &Family::Scale, &s_values, 6, &DetSettings::default(), &FinderOptions::default())?;

    for (j, traj) in run.trajectories.iter().enumerate() {
        let path: Vec<String> = traj.iter().map(|k| format!("{k:.5}")).collect();
        println!("k{j}: {}", path.join(" → "));
    }
    if !run.broken.is_empty() {
        println!("broken: {:?}", run.broken);
    }

    let summary = displacement_vs_eta(&run)?;
    for (eta, d) in summary.eta.iter().zip(&summary.max_displacement) {
        println!("η = {eta:.5}  max displacement = {d:.5}");
    }
    let fit = summary.fit;
    println!(
        "slope {:.4}, intercept {:.2e} ± {:.2e}, R² {:.5}, monotone {}",
        fit.slope, fit.intercept, fit.intercept_se, fit.r_squared, summary.monotone
    );
    Ok(())
}
