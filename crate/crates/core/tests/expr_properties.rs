mod common;

use common::{ad_suite, central_difference, random_expr};
use kkt_cert::expr::Expr;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn gradient_matches_central_differences(seed in any::<u64>(), x in prop::array::uniform3(-1.0f64..1.0)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_expr(&mut rng, 3, 3);
        let g = e.gradient(&x).unwrap();
        prop_assume!(g.value.abs() <= 1e3 && g.grad.iter().all(|v| v.abs() <= 1e4));
        let fd = central_difference(&e, &x, 1e-6);
        for (a, b) in g.grad.iter().zip(&fd) {
            prop_assert!((a - b).abs() / 1f64.max(a.abs()).max(b.abs()) <= 1e-6, "{e}: {a} vs {b}");
        }
        prop_assert_eq!(g.value, e.evaluate(&x).unwrap());
    }

    #[test]
    fn printing_is_a_fixed_point_of_parsing(seed in any::<u64>(), x in prop::array::uniform3(-1.0f64..1.0)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_expr(&mut rng, 4, 3);
        let once = Expr::parse(&e.to_string(), 3).unwrap();
        let twice = Expr::parse(&once.to_string(), 3).unwrap();
        prop_assert_eq!(&once, &twice);
        prop_assert_eq!(e.evaluate(&x).ok(), once.evaluate(&x).ok());
    }
}

#[test]
fn thousand_expression_suite() {
    let s = ad_suite(1000, 2024);
    assert_eq!(s.expressions, 1000);
    assert!(s.max_relative_error <= 1e-6, "{} ({})", s.max_relative_error, s.worst);
}
