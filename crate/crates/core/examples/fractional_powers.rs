//! Cross-validates the three routes to Delta^gamma f: exact dense spectral
//! calculus, the binomial series in P with a certified tail bound, and the
//! Littlewood-Paley square-functional proxy.

use subgauss::fracpow::{frac_power_binomial, lp_functional, SpectralBand};
use subgauss::function::lp_norm;
use subgauss::generate::{generate, Family, GeneratorSpec};
use subgauss::spectral::{frac_power_spectral, spectral_decompose};
use subgauss::witness::random_mean_zero;

fn main() {
    let (raw, _) = generate(&GeneratorSpec::new(Family::Vicsek, 4, 2)).unwrap();
    let g = raw.lazify(0.5).unwrap();
    let dec = spectral_decompose(&g, 4000).unwrap();
    let band = SpectralBand {
        lambda_min: dec.spectral_gap() * 0.99,
        lambda_max: dec.lambda_max() * 1.01,
    };
    let f = random_mean_zero(&g, 7);
    for gamma in [0.25, 0.5, 0.75] {
        let exact = frac_power_spectral(&g, &dec, gamma, &f).unwrap();
        let (series, report) =
            frac_power_binomial(&g, gamma, &f, 1e-8, Some(band), 5_000_000).unwrap();
        let diff = lp_norm(&g, &series.sub(&exact), 2.0).unwrap();
        let scale = lp_norm(&g, &exact, 2.0).unwrap();
        let (proxy, _) = lp_functional(&g, gamma, &f, 20_000).unwrap();
        let proxy_ratio = lp_norm(&g, &proxy, 2.0).unwrap() / scale;
        println!(
            "gamma {gamma}: spectral vs binomial rel err {:.2e} ({} terms, tail {:.2e}); \
             Littlewood-Paley norm ratio {:.3}",
            diff / scale,
            report.n_terms,
            report.tail_bound,
            proxy_ratio
        );
    }
}
