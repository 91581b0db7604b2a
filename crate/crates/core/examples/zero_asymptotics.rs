// Zeros of y(1; k) and y'(1; k) against their leading-order locations.

use itep::asymptotics::{asymptote_convergence, interlaces};
use itep::media::MediumProfile;
use itep::radial_solver::OdeSettings;
use itep::zero_finder::{BoundaryKind, FinderOptions};

fn main() -> itep::Result<()> {
    let settings = OdeSettings::default();
    let opts = FinderOptions::default();

    let lossy = MediumProfile::constant(4.0, 0.4, 1.0, 0.1);
    for kind in [BoundaryKind::Dirichlet, BoundaryKind::Neumann] {
        let table = asymptote_convergence(&lossy, 5, 12, kind, &settings, &opts)?;
        println!("{kind:?}");
        for r in &table.rows {
            println!("  j={:>2} found {:.10} predicted {:.10} gap·j {:.2e}", r.j, r.found, r.predicted, r.gap_times_j);
        }
    }

    // without absorption every zero is real and the two families alternate
    let lossless = MediumProfile::constant(4.0, 0.0, 1.0, 0.0);
    let d = asymptote_convergence(&lossless, 1, 10, BoundaryKind::Dirichlet, &settings, &opts)?;
    let n = asymptote_convergence(&lossless, 1, 10, BoundaryKind::Neumann, &settings, &opts)?;
    let re = |t: &itep::asymptotics::AsymptoteTable| t.rows.iter().map(|r| r.found.re).collect::<Vec<_>>();
    println!("lossless: max |Im| = {:.1e}, interlaced = {}", d.max_abs_im.max(n.max_abs_im), interlaces(&re(&d), &re(&n)));
    Ok(())
}
