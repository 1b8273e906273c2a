mod common;

use std::collections::BTreeSet;

use common::{hilbert_series, q, random_homogeneous, ws, Q};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use weylstack::graded::{
    basis_of_d_degree, block_matrices, exponents_up_to_order, hilbert_dim, koszul_homology_window, koszul_phi1,
    koszul_phi2, reduce_mod_euler, DQuotientResidue, EulerReducer, GradedError, Window,
};
use weylstack::scalar::Field;
use weylstack::weyl::{euler_field, Monomial};
use weylstack::{Poly, RatFunc, Scalar, TwistParameter, WeightSystem, WeylElement};

const SYSTEMS: &[&[u64]] = &[
    &[1, 1],
    &[2, 3],
    &[1, 2, 3],
    &[2, 3, 5],
    &[1, 1, 1],
    &[1, 1, 2],
    &[2, 4],
    &[1, 2, 2],
    &[3, 6, 9],
    &[6, 9, 20],
];

/// Rank by plain Gauss-Jordan elimination on a copy of the columns.
fn rank<F: Field>(cols: &[Vec<F>]) -> usize {
    let mut rows: Vec<Vec<F>> = cols.to_vec();
    let width = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..width {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].times(&inv);
                for j in c..width {
                    let t = rows[r][j].times(&f);
                    rows[i][j] = rows[i][j].minus(&t);
                }
            }
        }
        r += 1;
    }
    r
}

fn dense(elements: &[WeylElement<Q>]) -> Vec<Vec<Q>> {
    let support: BTreeSet<Monomial> = elements.iter().flat_map(|e| e.terms().map(|(m, _)| m.clone())).collect();
    elements
        .iter()
        .map(|e| support.iter().map(|m| e.coefficient(m)).collect())
        .collect()
}

#[test]
fn hilbert_matches_power_series() {
    for w in SYSTEMS {
        let series = hilbert_series(w, 60);
        let sys = ws(w);
        for (k, &c) in series.iter().enumerate() {
            assert_eq!(hilbert_dim(&sys, k as i64), c, "{w:?} k={k}");
        }
        assert_eq!(hilbert_dim(&sys, -1), 0);
    }
}

#[test]
fn basis_spans_the_graded_piece() {
    for w in [&[1u64, 1][..], &[2, 3], &[1, 2, 3], &[1, 1, 1]] {
        let sys = ws(w);
        for k in -6..=6 {
            for order in 0..=3 {
                let basis = basis_of_d_degree(&sys, k, order);
                // independent count: sum over beta of dim A_{k + <d, beta>}
                let expected: u64 = exponents_up_to_order(w.len(), order)
                    .iter()
                    .map(|b| {
                        let shift: i64 = b.iter().zip(w.iter()).map(|(&b, &d)| b as i64 * d as i64).sum();
                        hilbert_dim(&sys, k + shift)
                    })
                    .sum();
                assert_eq!(basis.len() as u64, expected, "{w:?} k={k} order={order}");
                let mut previous: Option<Monomial> = None;
                for e in &basis {
                    assert_eq!(e.len(), 1);
                    let (m, c) = e.terms().next().unwrap();
                    assert_eq!(*c, q(1));
                    assert_eq!(m.degree(&sys), k);
                    assert!(m.order() <= order);
                    if let Some(p) = &previous {
                        assert!(p < m);
                    }
                    previous = Some(m.clone());
                }
            }
        }
    }
}

fn euler_minus(w: &WeightSystem, lam: &Q) -> WeylElement<Q> {
    let e: WeylElement<Q> = euler_field(w);
    e.sub(&WeylElement::constant(w.len(), lam.clone()))
}

#[test]
fn reduction_agrees_with_span_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let twists = [q(0), q(1), q(-2), Q::new(1.into(), 2.into()), q(-5)];
    for w in [&[1u64, 1][..], &[2, 3], &[1, 1, 2], &[1, 2, 3]] {
        let sys = ws(w);
        let win = Window::new(-8, 8, 3, sys.max_weight()).unwrap();
        for lam in &twists {
            let twist = TwistParameter::Rational(lam.clone());
            let el = euler_minus(&sys, lam);
            for _ in 0..12 {
                let k = rng.gen_range(-4..=4);
                let order = 3;
                // half the samples are built inside the ideal
                let cof = random_homogeneous(&sys, k, order - 1, 3, &mut rng);
                let mut a = cof.multiply(&el);
                if rng.gen_bool(0.5) {
                    a = a.add(&random_homogeneous(&sys, k, order, 2, &mut rng));
                }
                if a.is_zero() || a.order().unwrap() > order {
                    continue;
                }
                let gens: Vec<WeylElement<Q>> = basis_of_d_degree(&sys, k, order - 1)
                    .iter()
                    .map(|b| b.multiply(&el))
                    .collect();
                let mut all = gens.clone();
                all.push(a.clone());
                let oracle = rank(&dense(&all)) == rank(&dense(&gens));
                let red = reduce_mod_euler(&sys, &a, &twist, &win).unwrap();
                assert_eq!(red.in_ideal, oracle, "{w:?} lambda={lam} a={a}");
            }
        }
    }
}

#[test]
fn cofactors_are_sound() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for w in [&[1u64, 1][..], &[2, 3], &[1, 1, 2], &[1, 2, 3], &[2, 3, 5]] {
        let sys = ws(w);
        // generic twist: coefficients are polynomials in the twist variable
        let mut reducer = EulerReducer::new(&sys, Poly::var());
        let el = reducer.euler_minus_lambda(&sys);
        for _ in 0..20 {
            let k = rng.gen_range(-6..=6);
            let a = random_homogeneous(&sys, k, 4, 4, &mut rng).map_coefficients(Poly::from_rational);
            let (nf, cof) = reducer.reduce_with_cofactor(&a);
            assert_eq!(nf.add(&cof.multiply(&el)), a);
            assert!(nf.terms().all(|(m, _)| EulerReducer::<Poly>::is_standard(m)));
        }
        // rational twists through the public entry point
        for lam in [q(0), q(3), q(-4)] {
            let twist = TwistParameter::Rational(lam.clone());
            let win = Window::new(-6, 6, 4, sys.max_weight()).unwrap();
            let el = euler_minus(&sys, &lam).map_coefficients(Poly::from_rational);
            for _ in 0..10 {
                let k = rng.gen_range(-6..=6);
                let a = random_homogeneous(&sys, k, 4, 4, &mut rng);
                let red = reduce_mod_euler(&sys, &a, &twist, &win).unwrap();
                let back = red.residue.rep().add(&red.cofactor.multiply(&el));
                assert_eq!(back, a.map_coefficients(Poly::from_rational));
                if red.in_ideal {
                    assert_eq!(red.cofactor.multiply(&el), a.map_coefficients(Poly::from_rational));
                }
            }
        }
    }
}

#[test]
fn reduction_errors() {
    let sys = ws(&[1, 2]);
    let win = Window::new(-2, 2, 2, 2).unwrap();
    let lam = TwistParameter::integer(0);
    let mixed = WeylElement::<Q>::x(2, 0).add(&WeylElement::x(2, 1));
    assert!(matches!(reduce_mod_euler(&sys, &mixed, &lam, &win), Err(GradedError::NotHomogeneous(..))));
    let far = WeylElement::<Q>::x(2, 1).pow(3);
    assert!(matches!(reduce_mod_euler(&sys, &far, &lam, &win), Err(GradedError::OutsideWindow { .. })));
    let wrong = WeylElement::<Q>::x(3, 0);
    assert!(matches!(reduce_mod_euler(&sys, &wrong, &lam, &win), Err(GradedError::ArityMismatch { .. })));
    let zero = WeylElement::<Q>::zero(2);
    assert!(reduce_mod_euler(&sys, &zero, &lam, &win).unwrap().in_ideal);
}

#[test]
fn koszul_composite_vanishes() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut done = 0;
    while done < 200 {
        let len = rng.gen_range(2..=4);
        let w: Vec<u64> = (0..len).map(|_| rng.gen_range(1..=4)).collect();
        let sys = ws(&w);
        let twist = match rng.gen_range(0..4) {
            0 => TwistParameter::Generic,
            1 => TwistParameter::rational(rng.gen_range(-5..=5), 2),
            _ => TwistParameter::integer(rng.gen_range(-6..=6)),
        };
        let k = rng.gen_range(-5..=5);
        let a = random_homogeneous(&sys, k, 3, 3, &mut rng);
        if a.is_zero() {
            continue;
        }
        let m = DQuotientResidue::new(&sys, &twist, &a).unwrap();
        let image = koszul_phi2(&koszul_phi1(&m)).unwrap();
        assert_eq!(image.len(), len * (len - 1) / 2);
        assert!(image.iter().all(DQuotientResidue::is_zero), "w={w:?} lambda={twist} a={a}");
        done += 1;
    }
}

#[test]
fn phi1_keeps_the_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for w in [&[1u64, 1][..], &[2, 3], &[1, 2, 3]] {
        let sys = ws(w);
        let lam = TwistParameter::integer(1);
        for _ in 0..30 {
            let k = rng.gen_range(-4..=4);
            let a = random_homogeneous(&sys, k, 3, 3, &mut rng);
            let m = DQuotientResidue::new(&sys, &lam, &a).unwrap();
            let Ok(order) = m.rep().order() else { continue };
            for image in koszul_phi1(&m) {
                if let Ok(o) = image.rep().order() {
                    assert!(o <= order);
                }
            }
        }
    }
}

#[test]
fn rank_drops_only_under_specialisation() {
    let samples: &[(&[u64], &[i64])] = &[
        (&[1, 1], &[-1, -1]),
        (&[1, 1], &[0, -1]),
        (&[2, 3], &[-1, -1]),
        (&[2, 3], &[1, -1]),
        (&[1, 1, 2], &[-1, 0, 0]),
        (&[1, 1, 2], &[-1, -1, 1]),
        (&[1, 2, 3], &[0, -1, 0]),
        (&[1, 2, 3], &[1, 1, -1]),
    ];
    let values = [q(0), q(1), q(-1), q(-3), q(-4), Q::new(1.into(), 2.into())];
    for (w, nu) in samples {
        let sys = ws(w);
        for bound in 1..=3 {
            let generic = block_matrices(&sys, RatFunc::var(), nu, bound);
            let r1 = rank(&generic.phi1);
            let r2 = rank(&generic.phi2);
            for v in &values {
                let special = block_matrices(&sys, v.clone(), nu, bound);
                assert_eq!(special.dims, generic.dims);
                assert!(rank(&special.phi1) <= r1, "{w:?} {nu:?} lambda={v}");
                assert!(rank(&special.phi2) <= r2, "{w:?} {nu:?} lambda={v}");
                // wherever the generic entry is defined at v it specialises to the exact entry
                for (gc, sc) in generic.phi1.iter().zip(&special.phi1).chain(generic.phi2.iter().zip(&special.phi2)) {
                    for (g, s) in gc.iter().zip(sc) {
                        if let Some(e) = g.eval(v) {
                            assert_eq!(&e, s);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn window_examples() {
    let lam = TwistParameter::integer(0);
    let r = koszul_homology_window(&ws(&[1, 1, 1]), &lam, &Window::new(-3, 3, 3, 1).unwrap()).unwrap();
    assert_eq!((r.ker_phi1_dim, r.homology_dim), (0, 0));
    assert_eq!(r.homology_status, "window-relative");

    let r = koszul_homology_window(&ws(&[1, 1, 2]), &TwistParameter::Generic, &Window::new(-2, 2, 2, 2).unwrap()).unwrap();
    assert_eq!(r.homology_dim, 0);

    let r = koszul_homology_window(&ws(&[2, 3]), &lam, &Window::default_for(&ws(&[2, 3]))).unwrap();
    assert!(r.homology_dim >= 1);
    assert_eq!(r.homology_status, "certified");
    let pc = r.paper_class.as_ref().unwrap();
    assert!(pc.detected());
    assert_eq!(pc.components, vec!["-3*d1", "2*d0"]);
    assert!(r
        .witness_vectors
        .iter()
        .any(|h| h.components == ["-3*d1", "2*d0"]));

    let small = Window::new(-2, 2, 2, 1).unwrap();
    assert!(matches!(
        koszul_homology_window(&ws(&[1, 2]), &lam, &small),
        Err(GradedError::WindowTooSmall { padding: 1, needed: 2 })
    ));
}

#[test]
fn n1_class_detected_at_twist_zero() {
    for d0 in 1..=6u64 {
        for d1 in 1..=6u64 {
            let sys = ws(&[d0, d1]);
            let s = (d0 + d1) as i64;
            let win = Window::new(-s, s, 2, d0.max(d1)).unwrap();
            let r = koszul_homology_window(&sys, &TwistParameter::integer(0), &win).unwrap();
            let pc = r.paper_class.as_ref().expect("class degree lies in the window");
            assert!(pc.detected(), "({d0},{d1})");
            assert!(r.homology_by_degree()[&-s] >= 1);
        }
    }
}

#[test]
fn n1_class_is_not_a_cycle_for_nonzero_twist() {
    // phi_2 of (-d1 d1, d0 d0) is E, which is lambda modulo the ideal
    for (d0, d1) in [(1u64, 1u64), (2, 3), (4, 6)] {
        let sys = ws(&[d0, d1]);
        for lam in [TwistParameter::integer(1), TwistParameter::integer(-1), TwistParameter::Generic] {
            let c0 = WeylElement::<Q>::d(2, 1).scale(&q(-(d1 as i64)));
            let c1 = WeylElement::<Q>::d(2, 0).scale(&q(d0 as i64));
            let ms = [DQuotientResidue::new(&sys, &lam, &c0).unwrap(), DQuotientResidue::new(&sys, &lam, &c1).unwrap()];
            let image = koszul_phi2(&ms).unwrap();
            assert_eq!(image.len(), 1);
            let constant = image[0].rep().coefficient(&Monomial::one(2));
            let expected = match &lam {
                TwistParameter::Rational(l) => Poly::from_rational(l),
                TwistParameter::Generic => Poly::var(),
            };
            assert_eq!(constant, expected);
            assert_eq!(image[0].rep().len(), 1);
        }
    }
}
