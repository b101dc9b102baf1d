//! Fits the volume-growth exponent D on the three graph families and compares
//! it with the closed-form value carried by each generator.

use subgauss::fit::geometric_radii;
use subgauss::generate::{generate, Family, GeneratorSpec};
use subgauss::scaling::fit_volume_growth;

fn main() {
    for (family, level) in [
        (Family::Vicsek, 5),
        (Family::Sierpinski, 6),
        (Family::LatticeBox, 101),
    ] {
        let (g, expected) = generate(&GeneratorSpec::new(family, level, 2)).unwrap();
        let center = g.center_vertex();
        let ecc = *g.bfs_distances(center).iter().max().unwrap();
        let radii = geometric_radii(4, ecc / 2, 5);
        let fit = fit_volume_growth(&g, &[center], &radii).unwrap();
        println!(
            "{:<12} fitted D = {:.3} (expected {:.3}, residual {:.3})",
            family.name(),
            fit.exponent,
            expected.growth,
            fit.residual
        );
    }
}
