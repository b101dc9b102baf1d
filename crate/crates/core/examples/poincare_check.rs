//! Evaluates the ball Poincare inequality ||f||_p <= C r^alpha ||grad f||_p
//! for tent witnesses, including the exact sup-norm form with the explicit
//! constant 2r(2/eps)^{1/2}.

use subgauss::function::lp_norm;
use subgauss::generate::{generate, Family, GeneratorSpec};
use subgauss::markov::gradient_length;
use subgauss::riesz::check_poincare;
use subgauss::witness::tent_witness;

fn main() {
    let (raw, _) = generate(&GeneratorSpec::new(Family::Sierpinski, 6, 2)).unwrap();
    let g = raw.lazify(0.5).unwrap();
    let x = g.center_vertex();
    let eps = g.certify_nondegeneracy();
    for r in [4usize, 8, 16, 32] {
        let f = tent_witness(&g, x, r).unwrap();
        let ball = g.ball(x, r).unwrap();
        let chk = check_poincare(&g, &ball, &f, 2.0, 1.0).unwrap();
        let sup_f = lp_norm(&g, &f, f64::INFINITY).unwrap();
        let sup_grad = lp_norm(&g, &gradient_length(&g, &f).unwrap(), f64::INFINITY).unwrap();
        let explicit = 2.0 * r as f64 * (2.0 / eps).sqrt() * sup_grad;
        println!(
            "r {r:3}: L2 ratio {:.3}; sup-norm {:.1} <= {:.1} ({})",
            chk.ratio,
            sup_f,
            explicit,
            if sup_f <= explicit { "ok" } else { "VIOLATED" }
        );
    }
}
