use cuspidal::linalg::{frac, int, Matrix, Rational};
use cuspidal::quiver_rep::*;
use cuspidal::string_band::{
    enumerate_bands, enumerate_strings, unfold, BandDescriptor, Descriptor, Dir::*, GradedPolygon,
    GradedString, SocleSeries,
};
use num_traits::Zero;
use proptest::prelude::*;

fn simple(n: usize, j: usize) -> QuiverRep {
    build_string_rep(&GradedString::simple(n, j).unwrap())
}

fn exstring() -> GradedString {
    GradedString::new(3, vec![R, L, R, R, R], vec![2, 1, 1, 2, 1, 2]).unwrap()
}

/// Hom dimension from a dense system assembled entry by entry and reduced by
/// plain Gaussian elimination, independent of the library's solvers.
fn dense_hom_dim(m: &QuiverRep, n: &QuiverRep) -> usize {
    let k = m.n();
    let mut offset = vec![0; k + 1];
    for j in 0..k {
        offset[j + 1] = offset[j] + n.dims()[j] * m.dims()[j];
    }
    let unknowns = offset[k];
    let var = |j: usize, r: usize, c: usize| offset[j] + r * m.dims()[j] + c;
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for j in 0..k {
        for (nb, mb, t) in [(n.x(j), m.x(j), m.x_target(j)), (n.y(j), m.y(j), m.y_target(j))] {
            // nb · φ_j = φ_t · mb, entry (a, c)
            for a in 0..n.dims()[t] {
                for c in 0..m.dims()[j] {
                    let mut row = vec![Rational::zero(); unknowns];
                    for b in 0..n.dims()[j] {
                        row[var(j, b, c)] += nb.get(a, b);
                    }
                    for b in 0..m.dims()[t] {
                        row[var(t, a, b)] -= mb.get(b, c);
                    }
                    rows.push(row);
                }
            }
        }
    }
    let mut rank = 0;
    for col in 0..unknowns {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = &rows[r][col] / &pivot[col];
                for c in col..unknowns {
                    let v = &f * &pivot[c];
                    rows[r][c] -= v;
                }
            }
        }
        rank += 1;
    }
    unknowns - rank
}

#[test]
fn construction_examples() {
    assert_eq!(build_string_rep(&exstring()).dims(), &[3, 3, 0]);
    let l2 = simple(3, 2);
    assert_eq!(l2.dims(), &[0, 1, 0]);
    let x = build_string_rep(&GradedString::homogeneous_x(2, 2, 1).unwrap());
    assert_eq!(x.dims(), &[1, 1]);
    assert_eq!(x.x(0), &Matrix::from_i64(&[&[1]]));
    assert!(x.x(1).is_zero() && x.y(0).is_zero() && x.y(1).is_zero());
}

/// Rank of the trace form (a, b) ↦ tr(ab) on End(M); it equals dim End/rad.
fn local_rank(m: &QuiverRep) -> usize {
    let basis = hom_space(m, m).basis;
    let gram: Vec<Vec<Rational>> =
        basis.iter().map(|a| basis.iter().map(|b| a.compose(b).trace()).collect()).collect();
    Matrix::from_rows(gram).rank()
}

#[test]
fn band_trace_and_jordan_placement() {
    for p in enumerate_bands(2, 5) {
        let b = BandDescriptor::new(p.clone(), frac(3, 2), 1).unwrap();
        let m = build_band_rep(&b);
        assert_eq!(m.total_dim(), p.len());
        assert_eq!(band_monodromy(&m, &b).trace(), frac(3, 2));
        assert_eq!(local_rank(&m), 1);
        let b2 = BandDescriptor::new(p.clone(), frac(-2, 1), 2).unwrap();
        let base = build_band_rep_at(&b2, 0);
        for arrow in 1..p.len() {
            assert!(is_isomorphic(&base, &build_band_rep_at(&b2, arrow)));
        }
    }
}

#[test]
fn hom_small_cases() {
    for i in 1..=3 {
        for j in 1..=3 {
            assert_eq!(hom_space(&simple(3, i), &simple(3, j)).dim(), usize::from(i == j));
        }
    }
    assert!(!is_isomorphic(&simple(2, 1), &simple(2, 2)));
    let m = build_string_rep(&exstring());
    assert!(is_isomorphic(&m, &m));
}

#[test]
fn hom_matches_dense_oracle() {
    let strings = enumerate_strings(2, 4);
    let picks: Vec<QuiverRep> = strings.iter().step_by(5).map(build_string_rep).collect();
    for a in &picks {
        for b in &picks {
            assert_eq!(hom_space(a, b).dim(), dense_hom_dim(a, b));
        }
    }
    for m in 1..=6 {
        let x = build_string_rep(&GradedString::homogeneous_x(2, m, 1).unwrap());
        assert_eq!(hom_space(&x, &x).dim(), dense_hom_dim(&x, &x));
    }
}

#[test]
fn direct_sum_and_socle() {
    let m = build_string_rep(&exstring());
    let z = QuiverRep::zero(3);
    assert_eq!(m.direct_sum(&z).unwrap(), m);
    let n = build_string_rep(&GradedString::homogeneous_y(3, 3, 2).unwrap());
    let s = m.direct_sum(&n).unwrap();
    assert_eq!(s.dims(), &[3, 5, 1]);
    assert_eq!(socle_filtration(&s), socle_filtration(&m).merge(&socle_filtration(&n)));
    assert_eq!(socle_filtration(&simple(3, 3)), SocleSeries::from_label_lists(&[&[3]]));
}

#[test]
fn duality() {
    for j in 1..=3 {
        assert!(is_isomorphic(&simple(3, j).dual(), &simple(3, j)));
    }
    for s in enumerate_strings(3, 4).iter().step_by(7) {
        let m = build_string_rep(s);
        assert!(is_isomorphic(&m.dual(), &build_string_rep(&s.reverse())));
        assert_eq!(m.dual().dual(), m);
    }
    let strings = enumerate_strings(2, 3);
    for a in strings.iter().step_by(3) {
        for b in strings.iter().step_by(4) {
            let (ma, mb) = (build_string_rep(a), build_string_rep(b));
            assert_eq!(hom_space(&ma, &mb).dim(), hom_space(&mb.dual(), &ma.dual()).dim());
        }
    }
}

#[test]
fn gluing_strings() {
    // X_2(1) ends at the sink 2; the second string starts at the sink 2
    let s1 = GradedString::homogeneous_x(3, 2, 1).unwrap();
    let s2 = GradedString::new(3, vec![L, L], vec![2, 3, 2]).unwrap();
    let (m1, m2) = (build_string_rep(&s1), build_string_rep(&s2));
    // socle vectors: last vertex of s1, first vertex of s2 (both label 2)
    let v1 = HomogeneousVector::new(2, unit_vector(1, 0));
    let v2 = HomogeneousVector::new(2, vec![int(1), int(0)]);
    let g = glue(&m1, &m2, 2, &v1, &v2).unwrap();
    assert_eq!(g.total_dim(), m1.total_dim() + m2.total_dim() - 1);
    let joined = s1.join(&s2).unwrap();
    assert!(is_isomorphic(&g, &build_string_rep(&joined)));
    let parts = decompose(&g).unwrap();
    assert_eq!(parts.len(), 1);
    assert_eq!(parts[0].multiplicity, 1);

    let l = simple(2, 1);
    let e = HomogeneousVector::new(1, vec![int(1)]);
    assert_eq!(glue(&l, &l, 1, &e, &e).unwrap(), l);
    assert_eq!(dual_glue(&l, &l, 1, &e, &e).unwrap(), l);

    let bad = HomogeneousVector::new(1, vec![int(1)]);
    assert!(glue(&m1, &m2, 1, &bad, &bad).is_err());
}

#[test]
fn dual_gluing_y_strings() {
    // 3 ← 2 ends at the source 2, 2 → 1 starts there
    let a = GradedString::new(3, vec![L], vec![3, 2]).unwrap();
    let b = GradedString::new(3, vec![R], vec![2, 1]).unwrap();
    let (ma, mb) = (build_string_rep(&a), build_string_rep(&b));
    let fa = HomogeneousVector::new(2, vec![int(1)]);
    let fb = HomogeneousVector::new(2, vec![int(1)]);
    let g = dual_glue(&ma, &mb, 2, &fa, &fb).unwrap();
    assert_eq!(g.total_dim(), ma.total_dim() + mb.total_dim() - 1);
    let parts = decompose(&g).unwrap();
    assert_eq!(parts.len(), 1);
    let expected = a.join(&b).unwrap();
    assert!(is_isomorphic(&g, &build_string_rep(&expected)));
}

fn endpoint_polymer(p: &GradedPolygon, sink: usize, lambda: Rational, r: usize) -> QuiverRep {
    let s = unfold(p, sink).unwrap();
    let m = build_string_rep(&s);
    let l = s.labels()[0];
    let d = m.dims()[l - 1];
    let first = HomogeneousVector::new(l, unit_vector(d, 0));
    let last = HomogeneousVector::new(l, unit_vector(d, d - 1));
    polymerize(&m, &[first], &[last], &lambda, r).unwrap()
}

#[test]
fn polymerization_gives_bands() {
    let p = GradedPolygon::new(2, vec![R, R, L, L], vec![1, 2, 1, 1]).unwrap();
    let sink = p.sinks()[0];
    for r in 1..=2 {
        let m = endpoint_polymer(&p, sink, frac(3, 2), r);
        assert_eq!(m.total_dim(), p.len() * r);
        let b = BandDescriptor::new(p.clone(), frac(3, 2), r).unwrap();
        assert!(is_isomorphic(&m, &build_band_rep(&b)));
    }
    let a = endpoint_polymer(&p, sink, frac(3, 2), 1);
    let b = endpoint_polymer(&p, sink, frac(5, 2), 1);
    assert!(!is_isomorphic(&a, &b));
    let two = endpoint_polymer(&p, sink, int(1), 2);
    let parts = decompose(&two).unwrap();
    assert_eq!(parts.len(), 1);
    match &parts[0].descriptor {
        Descriptor::Band(b) => assert_eq!((b.r(), b.lambda().clone()), (2, int(1))),
        d => panic!("unexpected {d}"),
    }
}

#[test]
fn path_algebra_counts() {
    for n in 2..=4 {
        let dims: Vec<usize> = (0..=8).map(|m| path_algebra_layer(n, m).dim()).collect();
        let mut expected = vec![2 * n; 9];
        expected[0] = n;
        assert_eq!(dims, expected);
    }
    assert_eq!(path_algebra_layer(3, 2).dim(), 6);
    for n in [2, 3] {
        assert_eq!(hilbert_series(n, 10), hilbert_formula(n, 10));
        assert!(koszul_numerical_check(n, 10));
    }
}

#[test]
fn socle_cross_validation_small() {
    for s in enumerate_strings(3, 6) {
        assert_eq!(socle_filtration(&build_string_rep(&s)), Descriptor::String(s.clone()).predicted_socle(), "{s}");
    }
    for p in enumerate_bands(2, 6) {
        for r in 1..=2 {
            let b = BandDescriptor::new(p.clone(), int(1), r).unwrap();
            let d = Descriptor::Band(b);
            assert_eq!(socle_filtration(&build(&d)), d.predicted_socle(), "{d}");
        }
    }
}

/// Cyclic representation with one-dimensional vertex spaces, identity arrows
/// and `scale` on arrow 0 (which must be an x).
fn cyclic_rep(n: usize, dirs: &[cuspidal::string_band::Dir], labels: &[usize], scale: Rational) -> QuiverRep {
    let k = labels.len();
    let mut dims = vec![0; n];
    let mut slot = Vec::new();
    for l in labels {
        slot.push(dims[l - 1]);
        dims[l - 1] += 1;
    }
    let mut x: Vec<Matrix> = (0..n).map(|j| Matrix::zeros(dims[cuspidal::string_band::pi1(n, j + 1) - 1], dims[j])).collect();
    let mut y: Vec<Matrix> = (0..n).map(|j| Matrix::zeros(dims[cuspidal::string_band::pi2(n, j + 1) - 1], dims[j])).collect();
    for (i, d) in dirs.iter().enumerate() {
        let (a, b) = (i, (i + 1) % k);
        let v = if i == 0 { scale.clone() } else { int(1) };
        match d {
            R => x[labels[a] - 1].set(slot[b], slot[a], v),
            L => y[labels[b] - 1].set(slot[a], slot[b], v),
        }
    }
    QuiverRep::new(n, dims, x, y).unwrap()
}

#[test]
fn symmetric_polygons_decompose() {
    // the triangle R,R,L on one vertex traversed twice; monodromy 4 = 2·2
    let (dirs, labels) = (vec![R, R, L, R, R, L], vec![1usize; 6]);
    let sym = GradedPolygon::new(1, dirs.clone(), labels.clone()).unwrap();
    assert!(BandDescriptor::new(sym, int(4), 1).is_err());
    let m = cyclic_rep(1, &dirs, &labels, int(4));
    let parts = decompose(&m).unwrap();
    let tri = GradedPolygon::new(1, vec![R, R, L], vec![1; 3]).unwrap();
    let band = |l: i64| Descriptor::Band(BandDescriptor::new(tri.clone(), int(l), 1).unwrap().normalized());
    let mut expected = vec![
        Summand { descriptor: band(-2), multiplicity: 1 },
        Summand { descriptor: band(2), multiplicity: 1 },
    ];
    expected.sort();
    assert_eq!(parts, expected);

    // an asymmetric polygon gives a single summand for every r
    for r in 1..=3 {
        let b = build_band_rep(&BandDescriptor::new(tri.clone(), int(2), r).unwrap());
        assert_eq!(decompose(&b).unwrap().len(), 1);
    }
}

#[test]
fn decompose_examples() {
    assert!(decompose(&QuiverRep::zero(3)).unwrap().is_empty());
    let s = exstring();
    let parts = decompose(&build_string_rep(&s)).unwrap();
    assert_eq!(parts, vec![Summand { descriptor: Descriptor::String(s), multiplicity: 1 }]);
}

#[test]
fn relation_violations_rejected() {
    let x = vec![Matrix::from_i64(&[&[1]]), Matrix::zeros(1, 1)];
    let y = vec![Matrix::zeros(1, 1), Matrix::from_i64(&[&[1]])];
    let err = QuiverRep::new(2, vec![1, 1], x, y).unwrap_err();
    assert!(err.is_relation_violation());
}

fn descriptor_pool(n: usize) -> Vec<Descriptor> {
    let mut pool: Vec<Descriptor> = enumerate_strings(n, 4).into_iter().map(Descriptor::String).collect();
    for p in enumerate_bands(n, 4) {
        for (lambda, r) in [(int(1), 1), (frac(3, 2), 2), (int(-2), 1)] {
            pool.push(Descriptor::Band(BandDescriptor::new(p.clone(), lambda, r).unwrap().normalized()));
        }
    }
    pool
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn decompose_round_trip(n in 1usize..=3, picks in proptest::collection::vec(any::<prop::sample::Index>(), 1..=4)) {
        let pool = descriptor_pool(n);
        let chosen: Vec<Descriptor> = picks.iter().map(|i| i.get(&pool).clone()).collect();
        let reps: Vec<QuiverRep> = chosen.iter().map(build).collect();
        let m = QuiverRep::direct_sum_all(n, &reps).unwrap();
        let mut expected: std::collections::BTreeMap<Descriptor, usize> = Default::default();
        for d in chosen {
            *expected.entry(d).or_insert(0) += 1;
        }
        let got: std::collections::BTreeMap<Descriptor, usize> =
            decompose(&m).unwrap().into_iter().map(|s| (s.descriptor, s.multiplicity)).collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn dual_is_involution(n in 1usize..=3, i in any::<prop::sample::Index>()) {
        let pool = descriptor_pool(n);
        let m = build(i.get(&pool));
        prop_assert_eq!(m.dual().dual(), m.clone());
        prop_assert_eq!(radical_layers(&m), socle_filtration(&m.dual()));
    }

    #[test]
    fn json_round_trip(n in 1usize..=3, i in any::<prop::sample::Index>()) {
        let pool = descriptor_pool(n);
        let m = build(i.get(&pool));
        let text = m.to_file().to_json();
        prop_assert_eq!(RepFile::from_json(&text).unwrap().to_rep().unwrap(), m);
    }
}
