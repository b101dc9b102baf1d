//! Collapses the heat kernel onto its sub-Gaussian profile: plots of
//! log(p_k V) against (d^beta/k)^{1/(beta-1)} fall on one line when beta is
//! right, and the positive residual quantifies how badly a wrong beta fails.

use subgauss::generate::{generate, Family, GeneratorSpec};
use subgauss::scaling::{verify_dkue, verify_ue_shape, KERNEL_FLOOR};

fn main() {
    let (raw, expected) = generate(&GeneratorSpec::new(Family::Vicsek, 5, 2)).unwrap();
    let g = raw.lazify(0.5).unwrap();
    let y = g.center_vertex();
    let ks = [16, 32, 64, 128, 256];
    for beta in [expected.escape, 2.0, 3.2] {
        let fit = verify_ue_shape(&g, y, &ks, beta, KERNEL_FLOOR).unwrap();
        println!(
            "beta = {beta:.3}: rate {:.3}, violation {:.3}, on-diagonal slope {:.3} ({} samples)",
            fit.rate, fit.violation, fit.on_diagonal_slope, fit.n_samples
        );
    }
    let dk = verify_dkue(&g, y, &ks, expected.escape, KERNEL_FLOOR).unwrap();
    println!(
        "time-derivative collapse: rate {:.3}, violation {:.3}",
        dk.rate, dk.violation
    );
}
