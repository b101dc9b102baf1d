//! Builds one graph from each family and prints its validity certificates:
//! local uniform finiteness, the non-degeneracy constant, and the lazy-walk
//! analyticity certificate.

use subgauss::generate::{generate, Family, GeneratorSpec};

fn main() {
    for (family, level) in [
        (Family::Vicsek, 4),
        (Family::Sierpinski, 5),
        (Family::LatticeBox, 32),
    ] {
        let (raw, expected) = generate(&GeneratorSpec::new(family, level, 2)).unwrap();
        let g = raw.lazify(0.5).unwrap();
        println!(
            "{} level {level}: {} vertices, {} edges",
            family.name(),
            g.n_vertices(),
            g.n_edges()
        );
        println!("  expected exponents: D = {:.4}, beta = {:.4}", expected.growth, expected.escape);
        println!("  uniform finiteness M = {}", g.uniform_finiteness());
        println!("  non-degeneracy eps = {:.4}", g.certify_nondegeneracy());
        match g.certify_analyticity(4) {
            Ok((ell, eps)) => println!("  analytic: inf p_{{2l+1}}(x,x)m(x) = {eps:.4} at l = {ell}"),
            Err(e) => println!("  analyticity failed: {e}"),
        }
    }
}
