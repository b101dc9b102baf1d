//! Sweeps the (p, gamma) grid on a Vicsek iterate and classifies each cell of
//! the Riesz / reverse-Riesz phase diagram from witness-family slopes, then
//! prints the grid against the four theoretical regions.

use subgauss::generate::{generate, Family, GeneratorSpec};
use subgauss::pipeline::{bind_families, default_scales};
use subgauss::riesz::{
    phase_diagram, theorem_reverse_fails, theorem_reverse_holds, theorem_riesz_fails,
    theorem_riesz_holds, Direction, Method, MethodContext, ScanPlan,
};
use subgauss::config::FamilyKind;
use subgauss::spectral::spectral_decompose;

fn main() {
    let (raw, expected) = generate(&GeneratorSpec::new(Family::Vicsek, 4, 2)).unwrap();
    let g = raw.lazify(0.5).unwrap();
    let dec = spectral_decompose(&g, 4000).unwrap();
    let kinds = [FamilyKind::Tent, FamilyKind::EigenmodeBand];
    let mut plan = ScanPlan::new(
        g.center_vertex(),
        default_scales(&g),
        bind_families(&kinds, &expected, 1),
    );
    plan.method = Method::Spectral;
    plan.ctx = MethodContext::with_spectral(&dec);
    let ps = [1.5, 2.0, 3.0, 4.0];
    let gammas: Vec<f64> = (1..10).map(|i| i as f64 / 10.0).collect();
    let pd = phase_diagram(&g, &ps, &gammas, &plan).unwrap();
    let beta = expected.escape;
    for cell in &pd.cells {
        let theory = match cell.direction {
            Direction::Riesz if theorem_riesz_holds(cell.p, cell.gamma) => "holds",
            Direction::Riesz if theorem_riesz_fails(cell.p, cell.gamma, beta) => "fails",
            Direction::ReverseRiesz if theorem_reverse_holds(cell.p, cell.gamma) => "holds",
            Direction::ReverseRiesz if theorem_reverse_fails(cell.p, cell.gamma, beta) => "fails",
            _ => "open",
        };
        println!(
            "p {:3} gamma {:.1} {:13}: measured {:12} theory {}",
            cell.p,
            cell.gamma,
            cell.direction.name(),
            cell.classification.name(),
            theory
        );
    }
}
