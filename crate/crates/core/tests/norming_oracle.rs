//! Brute-force validation of the exact norming-set parameterisation on M_2.

mod common;

use opgeo_core::algebra::{norming_set, Element, Functional};
use opgeo_core::{AlgebraShape, Tolerances};
use rand::Rng;

fn as_functional(a: opgeo_core::ComplexMatrix) -> Functional {
    Functional::new(AlgebraShape::full(2), vec![a]).unwrap()
}

#[test]
fn grid_maximisers_lie_in_described_set() {
    let tol = Tolerances::default();
    let mut rng = common::rng(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let s: f64 = rng.random_range(0.0..1.0);
        let x = common::with_singular_values(&[1.0, s], &mut rng);
        let desc = norming_set(&Element::single(x.clone()).unwrap(), &tol).unwrap();
        for (a, value) in common::brute_force_maximisers(&x, 4, 4) {
            assert!(value > 1.0 - 1e-12 && value < 1.0 + 1e-12, "max {value}");
            let d = desc.membership_defect(&as_functional(a)).unwrap();
            worst = worst.max(d);
        }
    }
    assert!(worst <= 1e-6, "worst membership defect {worst}");
}

#[test]
fn random_start_maximisers_for_degenerate_spectra() {
    let tol = Tolerances::default();
    let mut rng = common::rng(77);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    // unitary, rank-one partial isometry, and a generic point
    for sigma in [[1.0, 1.0], [1.0, 0.0], [1.0, 0.37]] {
        for _ in 0..3 {
            let x = common::with_singular_values(&sigma, &mut rng);
            let desc = norming_set(&Element::single(x.clone()).unwrap(), &tol).unwrap();
            for (a, value) in common::random_start_maximisers(&x, 112, &mut rng) {
                if value < 1.0 - 1e-12 {
                    // a local search that stalled away from the maximum
                    continue;
                }
                count += 1;
                let d = desc.membership_defect(&as_functional(a)).unwrap();
                worst = worst.max(d);
            }
        }
    }
    assert!(count >= 900, "only {count} converged searches");
    assert!(worst <= 1e-6, "worst membership defect {worst}");
}
