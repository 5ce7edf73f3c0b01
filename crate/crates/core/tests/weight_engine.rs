use cuspidal::linalg::{frac, int, Matrix, Rational, Subspace};
use cuspidal::weight_engine::*;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn mu(v: &[(i64, i64)]) -> ExponentVector {
    ExponentVector::new(v.iter().map(|&(a, b)| frac(a, b)).collect()).unwrap()
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// E_ij for i ≠ j, E_ii (with log term) on the diagonal.
fn gl_block(m: &WindowModule, i: usize, j: usize, d: &[i64]) -> Matrix {
    if i == j {
        m.restrict(&m.ambient_diagonal(i, d), d, d)
    } else {
        m.root_vector(i, j, d)
    }
}

fn gl_shift(d: &[i64], i: usize, j: usize) -> Vec<i64> {
    if i == j {
        d.to_vec()
    } else {
        root_shift(d, i, j)
    }
}

/// [E_ij, E_kl] = δ_jk E_il − δ_li E_kj on every depth-2 interior weight.
fn assert_gl_brackets(m: &WindowModule) {
    let n = m.n();
    for d in m.interior_weights(2) {
        for i in 0..=n {
            for j in 0..=n {
                for k in 0..=n {
                    for l in 0..=n {
                        let lhs = gl_block(m, i, j, &gl_shift(&d, k, l))
                            .mul(&gl_block(m, k, l, &d))
                            .sub(&gl_block(m, k, l, &gl_shift(&d, i, j)).mul(&gl_block(m, i, j, &d)));
                        let size = lhs.rows();
                        let mut rhs = Matrix::zeros(size, lhs.cols());
                        if j == k {
                            rhs = rhs.add(&gl_block(m, i, l, &d));
                        }
                        if l == i {
                            rhs = rhs.sub(&gl_block(m, k, j, &d));
                        }
                        assert_eq!(lhs, rhs, "[E{i}{j}, E{k}{l}] at {d:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn commutator_e01_e10() {
    let m = WindowModule::functions(&ExponentVector::default_for(1), 4);
    for d in m.interior_weights(1) {
        let lhs = m
            .root_vector(0, 1, &root_shift(&d, 1, 0))
            .mul(&m.root_vector(1, 0, &d))
            .sub(&m.root_vector(1, 0, &root_shift(&d, 0, 1)).mul(&m.root_vector(0, 1, &d)));
        let h = m.cartan(0, &d) - m.cartan(1, &d);
        assert_eq!(lhs, Matrix::scalar(1, &h));
    }
}

#[test]
fn bracket_relations() {
    let m2 = ExponentVector::default_for(2);
    assert_gl_brackets(&WindowModule::functions(&m2, 2));
    assert_gl_brackets(&WindowModule::functions(&m2, 2).log_extend(2));
    for k in 0..=2 {
        assert_gl_brackets(&WindowModule::build_forms(&m2, k, 2).unwrap());
    }
    assert_gl_brackets(&WindowModule::build_forms(&m2, 1, 2).unwrap().log_extend(1));
    assert_gl_brackets(&WindowModule::build_forms(&m2, 1, 2).unwrap().natural_tensor().unwrap());
    assert_gl_brackets(&simple_lk(&m2, 1, 2).unwrap());
    assert_gl_brackets(&WindowModule::functions(&mu(&[(1, 5), (2, 7), (1, 3), (-3, 4)]), 2));
}

#[test]
fn exceptional_action_is_sl2() {
    // only the sl(2) brackets hold: E_00 and E_11 separately ignore u
    let m = WindowModule::functions(&mu(&[(1, 2), (-3, 2)]), 4).log_extend(2);
    assert_eq!(m.action(), LogAction::Exceptional);
    for d in m.interior_weights(2) {
        let x = |d: &[i64]| m.root_vector(0, 1, d);
        let y = |d: &[i64]| m.root_vector(1, 0, d);
        let h = m.restrict(&m.ambient_diagonal(0, &d).sub(&m.ambient_diagonal(1, &d)), &d, &d);
        let xy = x(&root_shift(&d, 1, 0)).mul(&y(&d)).sub(&y(&root_shift(&d, 0, 1)).mul(&x(&d)));
        assert_eq!(xy, h);
        let hx = (m.cartan(0, &root_shift(&d, 0, 1)) - m.cartan(1, &root_shift(&d, 0, 1)))
            - (m.cartan(0, &d) - m.cartan(1, &d));
        assert_eq!(hx, int(2));
    }
}

#[test]
fn weight_homogeneity() {
    let m = WindowModule::build_forms(&ExponentVector::default_for(2), 1, 2).unwrap();
    let op = act_root_vector(&m, 2, 0);
    assert_eq!(op.shift, vec![-1, 0, 1]);
    for (src, block) in &op.blocks {
        let dst = op.target(src);
        assert!(m.contains(&dst));
        assert_eq!(block.shape(), (m.dim(&dst), m.dim(src)));
    }
    // boundary weights whose image leaves the window carry no block
    assert!(!op.blocks.contains_key(&vec![-2, 0, 2]));
}

#[test]
fn cuspidal_defaults_pass() {
    for m in [ExponentVector::default_for(1), ExponentVector::default_for(2)] {
        for radius in 1..=8 {
            let r = check_cuspidal(&WindowModule::functions(&m, radius));
            assert!(r.passed(), "{m} radius {radius}: {:?}", r.failures.first());
            assert!(r.blocks_checked > 0);
        }
    }
}

#[test]
fn cuspidal_fails_exactly_where_predicted() {
    for base in [ExponentVector::default_for(1), ExponentVector::default_for(2)] {
        for i in 0..=base.n() {
            for v in [-1, 0, 2] {
                let m = base.with_component(i, int(v));
                let w = WindowModule::functions(&m, 4);
                let report = check_cuspidal(&w);
                let predicted = predicted_cuspidal_failures(&w);
                assert!(!report.passed());
                assert_eq!(report.failures, predicted, "{m}");
                assert!(predicted.iter().all(|f| f.j == i));
            }
        }
    }
}

#[test]
fn cuspidal_forms() {
    let m2 = ExponentVector::default_for(2);
    for k in 0..=2 {
        assert!(check_cuspidal(&WindowModule::build_forms(&m2, k, 3).unwrap()).passed());
        assert!(check_cuspidal(&simple_lk(&m2, k.max(1), 3).unwrap()).passed());
    }
}

#[test]
fn casimir_is_central() {
    let m2 = ExponentVector::default_for(2);
    for m in [
        WindowModule::build_forms(&m2, 1, 3).unwrap(),
        WindowModule::functions(&m2, 3).log_extend(1),
    ] {
        let n = m.n();
        for d in m.interior_weights(2) {
            for i in 0..=n {
                for j in 0..=n {
                    if i == j {
                        continue;
                    }
                    let e = m.root_vector(i, j, &d);
                    assert_eq!(m.casimir(&root_shift(&d, i, j)).mul(&e), e.mul(&m.casimir(&d)));
                }
            }
        }
    }
}

#[test]
fn casimir_scalar_on_functions() {
    let m = ExponentVector::default_for(1);
    let c = casimir_matrix(&WindowModule::functions(&m, 3));
    // highest weight |μ| ε_0 = 0 for μ = (1/2, −1/2)
    let expected = highest_weight_casimir(&[Rational::zero(), Rational::zero()]);
    for (d, b) in &c.blocks {
        if d.iter().all(|x| x.abs() < 3) {
            assert_eq!(*b, Matrix::scalar(1, &expected));
        }
    }
}

#[test]
fn log_extension_casimir_correction() {
    // Ω(u f) = u Ω(f) + 2(1 + |μ|) f
    for m in [mu(&[(1, 2), (-1, 2)]), mu(&[(1, 3), (1, 6)]), mu(&[(1, 2), (-3, 2)]), mu(&[(2, 5), (4, 3)])] {
        let w = WindowModule::functions(&m, 4).log_extend_with(1, LogAction::Standard);
        let base = WindowModule::functions(&m, 4);
        let shift = int(2) * (int(1) + m.total());
        for d in w.interior_weights(2) {
            let c = w.casimir(&d);
            let c0 = base.casimir(&d);
            assert_eq!(c.get(1, 1), c0.get(0, 0));
            assert_eq!(c.get(0, 0), c0.get(0, 0));
            assert_eq!(*c.get(0, 1), shift);
            assert!(c.get(1, 0).is_zero());
        }
    }
}

#[test]
fn exceptional_casimir_correction() {
    // XY(uf) = uXYf + f and YX(uf) = uYXf + f, so Ω(uf) = uΩ(f) + 2f
    // while the standard action at |μ| = −1 has no correction
    let m = mu(&[(1, 2), (-3, 2)]);
    let w = WindowModule::functions(&m, 4).log_extend(1);
    let standard = WindowModule::functions(&m, 4).log_extend_with(1, LogAction::Standard);
    for d in w.interior_weights(2) {
        let c = w.casimir(&d);
        assert_eq!(c.get(0, 0), c.get(1, 1));
        assert_eq!(*c.get(0, 1), int(2));
        let s = standard.casimir(&d);
        assert_eq!(s, Matrix::scalar(2, s.get(0, 0)));
    }
}

#[test]
fn log_filtration_is_lower_triangular() {
    let m = ExponentVector::default_for(2);
    let base = WindowModule::functions(&m, 2);
    let ext = base.log_extend(2);
    assert_eq!(ext.ambient().len(), 3);
    for d in ext.interior_weights(1) {
        for (i, j) in [(0, 1), (1, 2), (2, 0)] {
            let e = ext.root_vector(i, j, &d);
            let e0 = base.root_vector(i, j, &d);
            for p in 0..3 {
                assert_eq!(e.get(p, p), e0.get(0, 0));
                for q in 0..p {
                    // nothing raises the u-degree
                    assert!(e.get(p, q).is_zero());
                }
            }
        }
    }
    assert_eq!(base.log_extend(0).ambient(), base.ambient());
}

#[test]
fn z_grading_formula() {
    let m = ExponentVector::default_for(2);
    let entries = z_grading(&WindowModule::functions(&m, 3)).unwrap();
    for e in &entries {
        assert_eq!(e.computed.as_ref(), Some(&e.predicted));
        if e.k == 0 {
            assert_eq!(e.predicted, int(-1));
        }
    }
    let step: Vec<_> = entries.iter().filter(|e| e.k == 1).collect();
    assert_eq!(step[0].predicted.clone() - int(-1), int(3));
    assert!(z_grading(&WindowModule::functions(&ExponentVector::default_for(1), 2)).is_err());
    let other = mu(&[(1, 4), (2, 3), (1, 7)]);
    for e in z_grading(&WindowModule::functions(&other, 2)).unwrap() {
        assert_eq!(e.computed, Some(e.predicted));
    }
}

#[test]
fn form_dimensions() {
    for n in 1..=4 {
        let m = ExponentVector::default_for(n);
        for k in 0..=n {
            let w = WindowModule::build_forms(&m, k, 1).unwrap();
            let rank = contraction_matrix(n, k).rank();
            let expected = binomial(n + 1, k) - rank;
            assert_eq!(w.dim(&vec![0; n + 1]), expected);
            assert_eq!(expected, binomial(n, k));
            let iota = contraction_matrix(n, k);
            for v in w.fiber(&vec![0; n + 1]).basis() {
                assert!(iota.mul_vec(v).iter().all(Zero::is_zero));
            }
        }
    }
}

#[test]
fn build_forms_rejections() {
    let m = ExponentVector::default_for(2);
    assert!(matches!(WindowModule::build_forms(&m, 3, 2), Err(WeightError::FormDegree { .. })));
    assert!(matches!(
        WindowModule::build_forms(&mu(&[(1, 3), (1, 3), (1, 3)]), 1, 2),
        Err(WeightError::NonzeroTotal(_))
    ));
    assert!(matches!(
        WindowModule::build_forms(&mu(&[(1, 1), (1, 2), (-3, 2)]), 1, 2),
        Err(WeightError::Integral(0, _))
    ));
    assert!(simple_lk(&m, 0, 2).is_err());
}

#[test]
fn de_rham_complex() {
    let m = ExponentVector::default_for(2);
    for radius in 1..=6 {
        let r = de_rham_report(&m, radius).unwrap();
        assert!(r.passed(), "radius {radius}: {r:?}");
        assert_eq!(r.dims, vec![1, 2, 1]);
    }
    let r = de_rham_report(&mu(&[(1, 4), (1, 3), (1, 6), (-3, 4)]), 2).unwrap();
    assert!(r.passed());
    assert_eq!(r.dims, vec![1, 3, 3, 1]);
}

#[test]
fn de_rham_on_monomials() {
    let m = ExponentVector::default_for(2);
    let w = WindowModule::build_forms(&m, 0, 2).unwrap();
    let d = de_rham(&w).unwrap();
    assert_eq!(d.degree, 0);
    let w2 = WindowModule::build_forms(&m, 2, 2).unwrap();
    assert!(de_rham(&w2).unwrap().blocks.values().all(|b| b.rows() == 0));
    // d = 0 on Ω^0 only if every λ_i vanishes
    assert!(d.blocks.values().all(|b| !b.is_zero()));
}

#[test]
fn simple_modules() {
    let m = ExponentVector::default_for(2);
    let l1 = simple_lk(&m, 1, 3).unwrap();
    let l2 = simple_lk(&m, 2, 3).unwrap();
    let omega0 = WindowModule::build_forms(&m, 0, 3).unwrap();
    let omega1 = WindowModule::build_forms(&m, 1, 3).unwrap();
    let omega2 = WindowModule::build_forms(&m, 2, 3).unwrap();
    for d in l1.weights() {
        assert_eq!(l1.dim(d), 1);
        assert_eq!(l2.dim(d), omega2.dim(d));
        // ker d_k = d(Ω^{k−1}) inside the ambient forms
        for (lk, prev, k) in [(&l1, &omega0, 0usize), (&l2, &omega1, 1)] {
            let dd = exterior_derivative(2, k, &m.at(d));
            let image: Vec<_> = prev.fiber(d).basis().iter().map(|v| dd.mul_vec(v)).collect();
            let image = Subspace::span(lk.ambient().len(), &image);
            assert_eq!(image, lk.fiber(d));
        }
    }
    // stable under every E_ij at interior weights
    for lk in [&l1, &l2] {
        for d in lk.interior_weights(1) {
            for (i, j) in [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)] {
                let e = lk.ambient_root_vector(i, j, &d);
                let target = lk.fiber(&root_shift(&d, i, j));
                for v in lk.fiber(&d).basis() {
                    assert!(target.contains(&e.mul_vec(v)));
                }
            }
        }
    }
}

#[test]
fn casimir_projection() {
    let m = ExponentVector::default_for(2);
    for k in 1..=2 {
        let r = casimir_projection_check(&m, k, 3).unwrap();
        assert!(r.passed(), "k = {k}: {r:?}");
        for w in &r.weights {
            assert_eq!(w.tensor_dim, 3 * binomial(2, k - 1));
            assert_eq!(w.s_dim, binomial(2, k) + binomial(2, k - 1));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cuspidal_iff_nonintegral(a in -6i64..6, b in 1i64..5, c in -6i64..6, e in 1i64..5) {
        let m = mu(&[(a, b), (c, e), (-a * e - c * b, b * e)]);
        let w = WindowModule::functions(&m, 3);
        let report = check_cuspidal(&w);
        if m.is_cuspidal() {
            prop_assert!(report.passed());
        }
        // an integral μ_i with |μ_i| < radius puts ν_i = 0 on an interior weight
        let visible = m.integral_components().iter().any(|&i| m.get(i).abs() < int(3));
        if visible {
            prop_assert!(!report.passed());
        }
        prop_assert_eq!(report.failures, predicted_cuspidal_failures(&w));
    }

    #[test]
    fn casimir_scalar_random(a in -6i64..6, b in 2i64..6, c in -6i64..6, e in 2i64..6) {
        let m = mu(&[(a, b), (c, e), (1, 7)]);
        let w = WindowModule::functions(&m, 2);
        let expected = highest_weight_casimir(&[m.total(), int(0), int(0)]);
        for d in w.interior_weights(2) {
            prop_assert_eq!(w.casimir(&d), Matrix::scalar(1, &expected));
        }
    }

    #[test]
    fn cartan_identity_random(num in proptest::collection::vec(-9i64..9, 4), k in 0usize..5) {
        let nu: Vec<Rational> = num.iter().map(|&v| frac(v, 3)).collect();
        let total: Rational = nu.iter().sum();
        let size = form_subsets(3, k).len();
        let mut lhs = contraction_matrix(3, k + 1).mul(&exterior_derivative(3, k, &nu));
        if k > 0 {
            lhs = lhs.add(&exterior_derivative(3, k - 1, &nu).mul(&contraction_matrix(3, k)));
        }
        prop_assert_eq!(lhs, Matrix::scalar(size, &total));
    }
}
