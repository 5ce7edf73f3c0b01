use cuspidal::cohomology::*;
use cuspidal::linalg::{frac, int, Rational};
use cuspidal::weight_engine::{root_shift, ExponentVector, WindowModule};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn functions(mu: &str, radius: usize) -> WindowModule {
    WindowModule::functions(&mu.parse().unwrap(), radius)
}

#[test]
fn inverse_root_cocycle() {
    for mu in ["1/2,-1/2", "1/2,-3/2", "2/5,1/3"] {
        let m = functions(mu, 5);
        for b in [int(0), int(1), frac(-3, 2), int(7)] {
            let c = Cocycle::inverse_root(&m, &b).unwrap();
            assert!(check_cocycle(&c, &m), "{mu} b = {b}");
            assert_eq!(self_extension_nontrivial(&c, &m), !b.is_zero());
        }
    }
    let n2 = WindowModule::functions(&ExponentVector::default_for(2), 2);
    assert!(Cocycle::inverse_root(&n2, &int(1)).is_err());
}

#[test]
fn rigidity_of_multiplication_cocycles() {
    for n in 2..=3 {
        let m = WindowModule::functions(&ExponentVector::default_for(n), 2);
        for b in [int(1), frac(-2, 3)] {
            let c = Cocycle::multiplication(&m, |_, _| b.clone());
            assert!(check_cocycle(&c, &m));
        }
        for r in all_roots(n) {
            let c = Cocycle::multiplication(&m, |i, j| if (i, j) == r { int(2) } else { int(1) });
            assert!(!check_cocycle(&c, &m), "n = {n}, b_{r:?} differs");
        }
    }
}

#[test]
fn sl2_multiplication_rigidity() {
    let m = functions("1/2,-1/2", 4);
    assert!(check_cocycle(&Cocycle::multiplication(&m, |_, _| int(3)), &m));
    assert!(!check_cocycle(&Cocycle::multiplication(&m, |i, _| int(i as i64)), &m));
}

#[test]
fn coboundaries_are_cocycles() {
    let m = WindowModule::functions(&ExponentVector::default_for(2), 2);
    let id = diagonal_operator(&m, |_| Rational::one());
    assert!(coboundary(&id, &m).is_zero());
    let phi = diagonal_operator(&m, |l| &l[0] * &l[0] - &l[1] * int(3) + &l[2] / int(5));
    let c = coboundary(&phi, &m);
    assert!(!c.is_zero());
    assert!(check_cocycle(&c, &m));
    assert!(!self_extension_nontrivial(&c, &m));
    // the trivializing map recovers φ up to a constant
    let psi = trivializing_map(&c, &m).unwrap();
    let diffs: Vec<Rational> = m.weights().iter().map(|d| psi.blocks[d].get(0, 0) - phi.blocks[d].get(0, 0)).collect();
    assert!(diffs.iter().all(|x| *x == diffs[0]));
}

#[test]
fn adding_coboundaries_keeps_the_class() {
    let m = functions("1/2,-1/2", 4);
    let c = Cocycle::multiplication(&m, |_, _| int(1));
    let phi = diagonal_operator(&m, |l| &l[0] * &l[1]);
    let shifted = c.add(&coboundary(&phi, &m));
    assert!(check_cocycle(&shifted, &m));
    assert!(self_extension_nontrivial(&shifted, &m));
}

#[test]
fn first_coordinate_recursion() {
    let m = WindowModule::functions(&ExponentVector::default_for(2), 3);
    let phi = |x: &Rational| (x + frac(1, 5)).recip();
    let zeta = integrate_first_coordinate(&m, phi);
    let c = coboundary(&zeta, &m);
    for i in 1..=2 {
        for (d, block) in &c.roots[&(i, 0)].blocks {
            let e = m.root_vector(i, 0, d);
            let expected = e.scale(&phi(&m.total_weight(d)[0]));
            assert_eq!(*block, expected, "E_{i}0 at {d:?}");
        }
    }
}

#[test]
fn self_extension_dichotomy() {
    // |μ| = 0: the extension by c(E_ij) = t_i/t_j does not split
    for mu in ["1/2,-1/2", "1/3,1/3,-2/3"] {
        let m = functions(mu, 4);
        let c = Cocycle::multiplication(&m, |_, _| int(1));
        assert!(check_cocycle(&c, &m));
        assert!(self_extension_nontrivial(&c, &m), "{mu}");
    }
    // sl(2), |μ| = −1: it splits
    let m = functions("1/2,-3/2", 4);
    let c = Cocycle::multiplication(&m, |_, _| int(1));
    let phi = trivializing_map(&c, &m).expect("trivial cocycle");
    // φ(λ) − φ(λ + e_0 − e_1) = 1/λ_1
    for d in m.interior_weights(1) {
        let next = root_shift(&d, 0, 1);
        let lam = m.total_weight(&d);
        assert_eq!(phi.blocks[&d].get(0, 0) - phi.blocks[&next].get(0, 0), lam[1].recip());
    }
    assert!(!self_extension_nontrivial(&Cocycle::zero(&m, &all_roots(1), Mode::Relative), &m));
}

#[test]
fn logarithmic_cocycles() {
    let m = WindowModule::functions(&ExponentVector::default_for(2), 2);
    let u = vec![int(0), int(2), frac(-1, 3)];
    let c = Cocycle::logarithmic(&m, &u);
    assert!(check_cocycle(&c, &m));
    assert!(self_extension_nontrivial(&c, &m));
    let mut relative = c.clone();
    relative.mode = Mode::Relative;
    assert!(!check_cocycle(&relative, &m));
    // a constant shift of u changes nothing in sl(n+1)
    let shifted: Vec<Rational> = u.iter().map(|x| x + int(4)).collect();
    assert!(check_cocycle(&Cocycle::logarithmic(&m, &shifted), &m));
}

#[test]
fn sl2_h1_dimensions() {
    for mu in ["1/2,-1/2", "1/2,-3/2", "1/3,1/5"] {
        let m = functions(mu, 3);
        let rel = h1_dimension(&m, Mode::Relative, 3..=10).unwrap();
        assert!(rel.stable);
        assert_eq!(rel.dim_h1(), Some(1), "{mu}");
        for d in &rel.per_radius {
            let n = d.radius;
            assert_eq!(d.unknowns, 4 * n);
            assert_eq!(d.equation_rank, 2 * n - 1);
            assert_eq!(d.dim_coboundaries, 2 * n);
        }
        let gen = h1_dimension(&m, Mode::Generalized, 3..=10).unwrap();
        assert!(gen.stable);
        assert_eq!(gen.dim_h1(), Some(2), "{mu}");
    }
}

#[test]
fn degenerate_window() {
    let m = functions("1/2,-1/2", 0);
    let d = h1_between(&m, &m, Mode::Relative).unwrap();
    assert_eq!((d.unknowns, d.dim_h1), (0, 0));
}

#[test]
fn distinct_blocks_have_no_extensions() {
    let a = functions("1/2,-1/2", 5);
    let b = functions("3/4,-1/4", 5);
    assert_eq!(h1_between(&a, &b, Mode::Relative).unwrap().dim_h1, 0);
    assert!(h1_between(&a, &b, Mode::Generalized).is_err());
    assert!(h1_between(&a, &functions("1/3,-1/3", 5), Mode::Relative).is_err());
}

#[test]
fn rank_two_window_is_reported() {
    let m = WindowModule::functions(&ExponentVector::default_for(2), 2);
    let r = h1_dimension(&m, Mode::Relative, 2..=3).unwrap();
    assert_eq!(r.per_radius.len(), 2);
    assert!(r.per_radius.iter().all(|d| d.dim_cocycles >= d.dim_coboundaries));
}

#[test]
fn matrix_market_dump() {
    let m = functions("1/2,-1/2", 3);
    let sys = constraint_system(&m, &m, Mode::Relative).unwrap();
    let text = sys.to_matrix_market();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("%%MatrixMarket"));
    let header: Vec<usize> = lines.next().unwrap().split(' ').map(|x| x.parse().unwrap()).collect();
    assert_eq!(header[0], sys.equations.len());
    assert_eq!(header[1], 12);
    assert_eq!(lines.count(), header[2]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn random_coboundaries(coeffs in proptest::collection::vec(-5i64..5, 3), radius in 2usize..4) {
        let m = functions("1/3,-1/3", radius);
        let phi = diagonal_operator(&m, |l| {
            int(coeffs[0]) * &l[0] + int(coeffs[1]) * &l[0] * &l[1] + int(coeffs[2])
        });
        let c = coboundary(&phi, &m);
        prop_assert!(check_cocycle(&c, &m));
        prop_assert!(!self_extension_nontrivial(&c, &m));
        let sum = Cocycle::inverse_root(&m, &int(1)).unwrap().add(&c);
        prop_assert!(check_cocycle(&sum, &m));
        prop_assert!(self_extension_nontrivial(&sum, &m));
    }
}
