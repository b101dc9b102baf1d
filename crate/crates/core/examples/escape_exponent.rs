//! Computes expected exit times from balls by an exact linear solve and fits
//! the escape exponent beta, the anomalous-diffusion signature.

use subgauss::generate::{generate, Family, GeneratorSpec};
use subgauss::scaling::{escape_time, fit_escape_exponent};

fn main() {
    // Radii follow each family's self-similar scale factor so log-periodic
    // oscillation does not bias the fit.
    let cases = [
        (Family::Vicsek, 5, vec![2, 6, 18, 54]),
        (Family::Sierpinski, 6, vec![3, 6, 12, 24]),
    ];
    for (family, level, radii) in cases {
        let (raw, expected) = generate(&GeneratorSpec::new(family, level, 2)).unwrap();
        let g = raw.lazify(0.5).unwrap();
        let x = g.center_vertex();
        for &r in &radii {
            let t = escape_time(&g, x, r).unwrap();
            println!("{:<12} E[exit B(x,{r:3})] = {t:12.1}", family.name());
        }
        let fit = fit_escape_exponent(&g, x, &radii).unwrap();
        println!(
            "{:<12} fitted beta = {:.3} (expected {:.3})\n",
            family.name(),
            fit.exponent,
            expected.escape
        );
    }
}
