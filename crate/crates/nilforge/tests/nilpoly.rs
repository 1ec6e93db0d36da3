mod common;

use common::{companion_pointing, corpus, cubics, cyclic, dm, hu_instances, invertible, rng};
use nilforge::algebra::cyclic_algebra;
use nilforge::iso::{find_isomorphism, IsoOutcome};
use nilforge::linalg::Matrix;
use nilforge::nilpoly::{
    apply_euler_forms, associativity_by_theta, binary_quartic_invariants, cubic_to_nilpoly, cyclic_nil_polynomial,
    degree4_cubic, degree4_family, degree4_quadratic, equivalence_scale, equivalent_nilpolys, euler_linear_forms,
    extended_algebra, extended_nil_polynomial, extended_nil_polynomial_zero_dim, graded_nil_polynomial, induced_product,
    nil_polynomial, phi_closed_form, phi_invariant, quartic_invariant, reconstruct_from_2_3, table1_row, theta_scaling_holds,
    theta_tensor, trace_free_check, verify_extension_isomorphism, CubicDatum, Equivalence, QuarticInvariant, Reconstruction,
};
use nilforge::poly::{polarize, Polynomial};
use nilforge::{Error, FieldTag, Scalar};

fn q(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn var(n: usize, i: usize) -> Polynomial {
    Polynomial::var(n, i)
}

#[test]
fn table1_rows() {
    assert_eq!(table1_row(2).unwrap(), "x1^(2)");
    let row4 = cyclic_nil_polynomial(4).unwrap().poly;
    let expect4 = dm(&[1, 0, 1], 1).add(&dm(&[0, 2, 0], 1)).add(&dm(&[2, 1, 0], 1)).add(&dm(&[4, 0, 0], 1));
    assert_eq!(row4, expect4);
    let row6 = cyclic_nil_polynomial(6).unwrap().poly;
    let expect6 = [
        [1, 0, 0, 0, 1],
        [0, 1, 0, 1, 0],
        [0, 0, 2, 0, 0],
        [1, 1, 1, 0, 0],
        [2, 0, 0, 1, 0],
        [0, 3, 0, 0, 0],
        [2, 2, 0, 0, 0],
        [3, 0, 1, 0, 0],
        [4, 1, 0, 0, 0],
        [6, 0, 0, 0, 0],
    ]
    .iter()
    .fold(Polynomial::zero(5), |acc, e| acc.add(&dm(e, 1)));
    assert_eq!(row6, expect6);
}

#[test]
fn extended_nil_polynomial_examples() {
    let c2 = cyclic(2);
    assert_eq!(extended_nil_polynomial(&c2).unwrap(), var(2, 1).add(&dm(&[2, 0], 1)));
    let one = extended_nil_polynomial_zero_dim();
    assert_eq!(one.nvars, 0);
    assert!(one.eval(&[]).is_one());
}

#[test]
fn extended_restricts_to_nil_polynomial() {
    for (name, p) in corpus() {
        let ext = extended_nil_polynomial(&p).unwrap();
        let f = nil_polynomial(&p, None).unwrap();
        let kb = p.kernel_basis();
        let subs: Vec<Polynomial> = (0..p.dim())
            .map(|i| {
                let coeffs: Vec<Scalar> = kb.iter().map(|v| v[i].clone()).collect();
                Polynomial::linear(&coeffs)
            })
            .collect();
        assert_eq!(ext.compose(&subs), f.poly, "{name}");
    }
}

#[test]
fn parts_round_trip() {
    for (name, p) in corpus() {
        let f = nil_polynomial(&p, None).unwrap();
        let sum = f.parts().iter().fold(Polynomial::zero(f.nvars()), |a, b| a.add(b));
        assert_eq!(sum, f.poly, "{name}");
        assert!(f.part(0).is_zero() && f.part(1).is_zero(), "{name}");
        assert_eq!(f.degree as usize, p.algebra.nil_index().unwrap(), "{name}");
    }
}

#[test]
fn polarization_examples() {
    let f2 = cyclic_nil_polynomial(4).unwrap().part(2);
    assert_eq!(f2, dm(&[1, 0, 1], 1).add(&dm(&[0, 2, 0], 1)));
    let w2 = polarize(&f2, 2);
    assert!(w2.get(&[0, 2]).is_one());
    assert!(w2.get(&[1, 1]).is_one());
    assert!(w2.get(&[0, 0]).is_zero());

    let xyz = dm(&[1, 1, 1], 1);
    let w3 = polarize(&xyz, 3);
    for idx in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
        assert!(w3.get(&idx).is_one());
    }
    assert!(w3.get(&[0, 0, 1]).is_zero());
    let ones = vec![vec![q(1), q(1), q(1)]; 3];
    assert_eq!(w3.eval(&ones), &q(6) * &xyz.eval(&[q(1), q(1), q(1)]));
}

#[test]
fn polarization_diagonal_identity() {
    let mut r = rng(41);
    for (name, p) in corpus().into_iter().take(14) {
        let f = nil_polynomial(&p, None).unwrap();
        for k in 2..=f.degree.min(4) {
            let part = f.part(k);
            let t = polarize(&part, k as usize);
            let x: Vec<Scalar> = (0..f.nvars()).map(|_| common::rational(&mut r, 3)).collect();
            let lhs = t.eval(&vec![x.clone(); k as usize]);
            assert_eq!(lhs, &Scalar::factorial(k) * &part.eval(&x), "{name}, k={k}");
        }
    }
}

#[test]
fn induced_product_examples() {
    let a = induced_product(&cyclic_nil_polynomial(4).unwrap().poly).unwrap();
    let e = |i: usize| nilforge::linalg::unit_vec(3, i);
    assert_eq!(a.mul(&e(0), &e(0)), e(1));
    assert_eq!(a.mul(&e(0), &e(1)), e(2));
    assert!(a.mul(&e(0), &e(2)).iter().all(Scalar::is_zero));
    assert!(a.mul(&e(1), &e(1)).iter().all(Scalar::is_zero));
    let quotient = cyclic_algebra(FieldTag::Rational, 4).algebra.quotient(&cyclic(4).algebra.annihilator()).unwrap();
    assert!(a.is_isomorphism_to(&quotient, &Matrix::identity(3)));

    let quad = dm(&[1, 1, 0], 1).add(&dm(&[0, 0, 2], 1));
    let z = induced_product(&quad).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            assert!(z.product(i, j).iter().all(Scalar::is_zero));
        }
    }
    assert!(matches!(induced_product(&dm(&[2, 0], 1)), Err(Error::DegenerateQuadraticPart)));
}

#[test]
fn companion_products_are_graded() {
    for (name, c) in hu_instances() {
        let m = c.f.nvars() / 2;
        let w = induced_product(&c.f.poly).unwrap();
        for i in 0..m {
            for j in 0..m {
                assert!(w.product(i, j)[..m].iter().all(Scalar::is_zero), "{name}");
                assert!(w.product(i, m + j).iter().all(Scalar::is_zero), "{name}");
            }
        }
    }
}

#[test]
fn reconstruction_examples() {
    let row5 = cyclic_nil_polynomial(5).unwrap();
    let rec = reconstruct_from_2_3(&CubicDatum::of(&row5.poly).unwrap()).unwrap().member().unwrap();
    assert_eq!(rec.poly, row5.poly);

    let quad = dm(&[1, 1], 1);
    let only_q = reconstruct_from_2_3(&CubicDatum::new(quad.clone(), Polynomial::zero(2)).unwrap()).unwrap();
    let f = only_q.member().unwrap();
    assert_eq!((f.poly.clone(), f.degree), (quad.clone(), 2));

    let row3 = reconstruct_from_2_3(&CubicDatum::new(quad.clone(), dm(&[3, 0], 1)).unwrap()).unwrap().member().unwrap();
    assert_eq!(row3.poly, cyclic_nil_polynomial(3).unwrap().poly);
    let plain = Polynomial::monomial(vec![3, 0], q(1));
    let rec = reconstruct_from_2_3(&CubicDatum::new(quad.clone(), plain.clone()).unwrap()).unwrap().member().unwrap();
    assert_eq!(rec.poly, quad.add(&plain));
}

#[test]
fn reconstruction_detects_non_members() {
    let quad = dm(&[1, 0, 1], 1).add(&dm(&[0, 2, 0], 1));
    let c = dm(&[2, 1, 0], 1).add(&dm(&[1, 2, 0], 1)).add(&dm(&[0, 0, 3], 1));
    let d = CubicDatum::new(quad, c).unwrap();
    let prod = d.product().unwrap();
    assert!(prod.validate().is_err());
    match reconstruct_from_2_3(&d).unwrap() {
        Reconstruction::NotInCq(reason) => assert!(reason.starts_with("associativity fails"), "{reason}"),
        Reconstruction::Member(f) => panic!("{f:?}"),
    }
    assert!(matches!(CubicDatum::new(dm(&[2, 0], 1), dm(&[3, 0], 1)), Err(Error::DegenerateQuadraticPart)));
}

#[test]
fn reconstruction_reproduces_every_corpus_member() {
    for (name, p) in corpus() {
        let f = nil_polynomial(&p, None).unwrap();
        if f.degree < 2 {
            continue;
        }
        let rec = reconstruct_from_2_3(&CubicDatum::of(&f.poly).unwrap()).unwrap().member().unwrap();
        assert_eq!(rec.poly, f.poly, "{name}");
    }
}

#[test]
fn trace_free_examples() {
    for (name, p) in corpus() {
        let f = nil_polynomial(&p, None).unwrap();
        assert!(trace_free_check(&CubicDatum::of(&f.poly).unwrap()).unwrap().holds, "{name}");
    }
    let quad = Polynomial::monomial(vec![2, 0], q(1)).add(&Polynomial::monomial(vec![0, 2], q(1)));
    let bad = trace_free_check(&CubicDatum::new(quad.clone(), Polynomial::monomial(vec![3, 0], q(1))).unwrap()).unwrap();
    assert!(!bad.holds);
    // Gram of q is 2·I, the polarized x1³ has h_111 = 6, so the first contraction is 6/2
    assert_eq!(bad.contractions, vec![q(3), q(0)]);
    assert!(trace_free_check(&CubicDatum::new(quad, Polynomial::zero(2)).unwrap()).unwrap().holds);
}

#[test]
fn cubic_constructions() {
    let one = cubic_to_nilpoly(1, &Polynomial::monomial(vec![3], q(1)), None).unwrap();
    assert_eq!(one.f.poly, dm(&[1, 1], 1).add(&Polynomial::monomial(vec![3, 0], q(1))));
    assert_eq!(one.f.degree, 3);

    let c0 = (0..3).fold(Polynomial::zero(3), |a, i| a.add(&var(3, i).pow(3)));
    let f0 = cubic_to_nilpoly(3, &c0, None).unwrap();
    assert_eq!((f0.f.nvars(), f0.f.degree), (6, 3));
    for t in [-2, -1, 0, 1, 3, 7] {
        let c = c0.add(&Polynomial::monomial(vec![1, 1, 1], q(t)));
        let ft = cubic_to_nilpoly(3, &c, None).unwrap();
        assert_eq!(ft.f.part(3), c.embed(6, &[0, 1, 2]), "t={t}");
        assert_eq!(ft.companion.degree, vec![1, 1, 1, 2, 2, 2, 3]);
    }
    assert!(matches!(cubic_to_nilpoly(2, &c0, None), Err(Error::DimensionMismatch(_))));
}

#[test]
fn degree4_examples() {
    let d0 = degree4_family(&q(1), &q(0)).unwrap();
    let expect = dm(&[4, 0, 0, 0, 0, 0, 0], 1).add(&dm(&[2, 2, 0, 0, 0, 0, 0], 1)).add(&dm(&[0, 4, 0, 0, 0, 0, 0], 1));
    assert_eq!(d0.d, expect);
    let d1 = degree4_family(&q(1), &q(1)).unwrap();
    assert_eq!(d1.d.divided_coeff(&[0, 4, 0, 0, 0, 0, 0]), q(2));
    for (eps, t) in common::degree4_params() {
        let m = degree4_family(&eps, &t).unwrap();
        assert_eq!(m.f.degree, 4);
        assert!(extended_algebra(&m.f.poly).unwrap().validate().is_ok());
    }
    assert!(matches!(degree4_family(&q(0), &q(1)), Err(Error::RangeError(_))));
}

#[test]
fn theta_examples() {
    let eps = [q(1), q(1), q(1)];
    for (e, t) in common::degree4_params() {
        let c = degree4_cubic(&t).embed(7, &(0..7).collect::<Vec<_>>());
        let c5 = restrict(&c, &[0, 1, 2, 3, 4]);
        let eps_t = [q(1), q(1), e.clone()];
        assert!(associativity_by_theta(&c5, 2, &eps_t).unwrap(), "t={t}");
    }

    // c = x1^(2)y1 + x1x2y2 on (x1,x2,y1,y2)
    let c = dm(&[2, 0, 1, 0], 1).add(&dm(&[1, 1, 0, 1], 1));
    let th = theta_tensor(&c, 2, &eps[..2]).unwrap();
    let coeff = |i: usize, j: usize, k: usize| -> i64 {
        match (i.min(j), i.max(j), k) {
            (0, 0, 0) => 1,
            (0, 1, 1) => 1,
            _ => 0,
        }
    };
    for i in 0..2 {
        for j in 0..2 {
            for r in 0..2 {
                for s in 0..2 {
                    let brute: i64 = (0..2).map(|k| coeff(i, j, k) * coeff(r, s, k)).sum();
                    assert_eq!(th.get(i, j, r, s), &q(brute));
                }
            }
        }
    }
    assert_eq!((th.get(0, 1, 0, 1), th.get(0, 0, 1, 1)), (&q(1), &q(0)));
    assert!(!th.symmetric_in_i_r);

    let zero = theta_tensor(&Polynomial::zero(4), 2, &eps[..2]).unwrap();
    assert!(zero.symmetric_in_i_r && zero.fully_symmetric());
    assert!(matches!(theta_tensor(&dm(&[3, 0, 0, 0], 1), 2, &eps[..2]), Err(Error::ShapeMismatch(_))));
}

#[test]
fn theta_verdict_matches_reconstruction() {
    let samples = [
        dm(&[2, 0, 1, 0, 0, 0, 0], 1).add(&dm(&[1, 1, 0, 1, 0, 0, 0], 1)),
        degree4_cubic(&q(3)),
        dm(&[2, 0, 1, 0, 0, 0, 0], 1).add(&dm(&[0, 2, 0, 1, 0, 0, 0], 1)),
        dm(&[1, 1, 1, 0, 0, 0, 0], 1).add(&dm(&[0, 2, 0, 0, 1, 0, 0], 2)),
    ];
    for eps in [q(1), q(-1), q(2)] {
        let quad = degree4_quadratic(&eps);
        for c in &samples {
            let by_theta = associativity_by_theta(&restrict(c, &[0, 1, 2, 3, 4]), 2, &[q(1), q(1), eps.clone()]).unwrap();
            let member = matches!(
                reconstruct_from_2_3(&CubicDatum::new(quad.clone(), c.clone()).unwrap()).unwrap(),
                Reconstruction::Member(_)
            );
            assert_eq!(by_theta, member, "{c:?}, eps={eps}");
        }
    }
}

fn restrict(p: &Polynomial, keep: &[usize]) -> Polynomial {
    let mut out = Polynomial::zero(keep.len());
    for (e, c) in p.terms() {
        if (0..e.len()).all(|i| keep.contains(&i) || e[i] == 0) {
            out.add_term(keep.iter().map(|&i| e[i]).collect(), c.clone());
        }
    }
    out
}

#[test]
fn phi_examples() {
    assert_eq!(phi_invariant(&q(1), &q(2)).unwrap(), q(32));
    assert_eq!(phi_closed_form(&q(1), &q(2)).unwrap(), q(32));
    assert_eq!(phi_invariant(&q(1), &q(1)).unwrap(), q(125));
    for (eps, t) in common::degree4_params() {
        assert_eq!(phi_invariant(&eps, &t).unwrap(), phi_invariant(&eps, &-&t).unwrap());
        assert_eq!(phi_invariant(&eps, &t).unwrap(), phi_closed_form(&eps, &t).unwrap());
    }
    let d0 = dm(&[4, 0], 1).add(&dm(&[2, 2], 1)).add(&dm(&[0, 4], 1));
    assert!(binary_quartic_invariants(&d0).unwrap().1.is_zero());
    assert!(matches!(phi_invariant(&q(1), &q(0)), Err(Error::ZeroG3)));
}

#[test]
fn phi_is_constant_along_verified_equivalences() {
    let mut flip = Matrix::identity(7);
    flip[(4, 4)] = q(-1);
    for (eps, t) in common::degree4_params() {
        let f = degree4_family(&eps, &t).unwrap().f.poly;
        let g = degree4_family(&eps, &-&t).unwrap().f.poly;
        assert_eq!(equivalence_scale(&f, &g, &flip), Some(q(1)));
        assert_eq!(quartic_invariant(&f), quartic_invariant(&g));
        assert_eq!(quartic_invariant(&f), QuarticInvariant::Phi(phi_closed_form(&eps, &t).unwrap()));
    }
}

#[test]
fn equivalence_examples() {
    let row3 = cyclic_nil_polynomial(3).unwrap().poly;
    let m = Matrix::from_ints(&[&[1, 1], &[0, 1]]);
    let moved = row3.compose_linear(&m);
    match equivalent_nilpolys(&row3, &moved, 20_000) {
        Equivalence::Equivalent { t, map } => assert_eq!(moved.compose_linear(&map), row3.scale(&t)),
        other => panic!("{other:?}"),
    }
    let f1 = degree4_family(&q(1), &q(1)).unwrap().f.poly;
    let f2 = degree4_family(&q(1), &q(2)).unwrap().f.poly;
    assert_eq!(equivalent_nilpolys(&f1, &f2, 100), Equivalence::Distinct("quartic invariant".into()));
    let row4 = cyclic_nil_polynomial(4).unwrap().poly;
    assert!(matches!(equivalent_nilpolys(&row3, &row4, 100), Equivalence::Distinct(_)));
}

#[test]
fn equivalence_after_random_change_of_variables() {
    let mut r = rng(43);
    let row3 = cyclic_nil_polynomial(3).unwrap().poly;
    let mut found = 0;
    for _ in 0..4 {
        let m = invertible(&mut r, 2);
        let moved = row3.compose_linear(&m);
        match equivalent_nilpolys(&row3, &moved, 50_000) {
            Equivalence::Equivalent { t, map } => {
                assert_eq!(moved.compose_linear(&map), row3.scale(&t));
                found += 1;
            }
            Equivalence::Unknown => {}
            Equivalence::Distinct(d) => panic!("equivalent pair reported distinct by {d}"),
        }
    }
    assert!(found > 0);
}

#[test]
fn euler_forms_for_graded_sources() {
    let mut graded: Vec<_> = (1..=6).map(|nu| cyclic_algebra(FieldTag::Rational, nu)).collect();
    graded.extend(hu_instances().into_iter().map(|(_, c)| c.companion));
    for g in graded {
        let (f, degrees) = graded_nil_polynomial(&g).unwrap();
        if f.poly.is_zero() {
            continue;
        }
        let l = euler_linear_forms(&f.poly).expect("linear forms exist");
        assert_eq!(apply_euler_forms(&f.poly, &l), f.poly);
        assert!(theta_scaling_holds(&f.poly, &degrees, g.top_degree()));
    }
}

#[test]
fn theta_scaling_fails_for_wrong_weights() {
    let (f, degrees) = graded_nil_polynomial(&cyclic_algebra(FieldTag::Rational, 4)).unwrap();
    assert!(theta_scaling_holds(&f.poly, &degrees, 4));
    assert!(!theta_scaling_holds(&f.poly, &[1, 1, 1], 4));
    assert!(!theta_scaling_holds(&f.poly, &degrees, 3));
}

#[test]
fn extended_algebra_recovers_the_source() {
    for (name, p) in corpus() {
        let f = nil_polynomial(&p, None).unwrap();
        assert!(verify_extension_isomorphism(&f).unwrap(), "{name}");
    }
}

/// Discriminant of a binary cubic `a x³ + b x²y + c xy² + d y³`; its vanishing is a GL(2) invariant.
fn binary_cubic_discriminant(c: &Polynomial) -> Scalar {
    let a = c.coeff(&[3, 0]);
    let b = c.coeff(&[2, 1]);
    let cc = c.coeff(&[1, 2]);
    let d = c.coeff(&[0, 3]);
    let t1 = &(&(&b * &b) * &(&cc * &cc)) - &(&q(4) * &(&a * &cc.pow(3)));
    let t2 = &(&q(4) * &(&b.pow(3) * &d)) + &(&q(27) * &(&(&a * &a) * &(&d * &d)));
    let t3 = &q(18) * &(&(&a * &b) * &(&cc * &d));
    &(&t1 - &t2) + &t3
}

#[test]
fn companion_isomorphisms_transport_cubics() {
    let binary: Vec<Polynomial> = cubics().into_iter().filter(|(_, m, _)| *m == 2).map(|(_, _, c)| c).collect();
    let gs = [Matrix::from_ints(&[&[1, 1], &[0, 1]]), Matrix::from_ints(&[&[0, 1], &[1, 0]]), Matrix::from_ints(&[&[1, 0], &[1, -1]])];
    for c in &binary {
        let base = cubic_to_nilpoly(2, c, None).unwrap();
        let p = companion_pointing(&base);
        for g in &gs {
            // c̃ = c∘g: the equivalence (x, y) ↦ (g x, g⁻ᵀ y) carries q + c to q + c̃
            let ct = c.compose_linear(g);
            let other = cubic_to_nilpoly(2, &ct, None).unwrap();
            let h = block_diag(g, &g.inverse().unwrap().transpose());
            assert_eq!(equivalence_scale(&other.f.poly, &base.f.poly, &h), Some(q(1)));
            let phi = block_diag(&h, &Matrix::identity(1));
            assert!(other.companion.algebra.is_isomorphism_to(&base.companion.algebra, &phi));

            // from an abstract isomorphism back to the cubic forms: c̃∘g₀ = λ·c
            let pt = companion_pointing(&other);
            match find_isomorphism(&p.algebra, &pt.algebra, 20_000) {
                IsoOutcome::Iso(iso) => {
                    let g0 = Matrix::from_rows(&(0..2).map(|i| (0..2).map(|j| iso[(i, j)].clone()).collect()).collect::<Vec<_>>());
                    let lambda = iso[(4, 4)].clone();
                    assert_eq!(ct.compose_linear(&g0), c.scale(&lambda));
                }
                other => panic!("isomorphic companions not matched: {other:?}"),
            }
        }
    }
    // x1^(3)+x2^(3) has three distinct root lines, x1^(2)x2 a double one: never c∘g
    let (c1, c2) = (&binary[0], &binary[1]);
    assert!(!binary_cubic_discriminant(c1).is_zero());
    assert!(binary_cubic_discriminant(c2).is_zero());
    let f1 = cubic_to_nilpoly(2, c1, None).unwrap();
    let f2 = cubic_to_nilpoly(2, c2, None).unwrap();
    assert!(!matches!(equivalent_nilpolys(&f1.f.poly, &f2.f.poly, 5_000), Equivalence::Equivalent { .. }));
    assert!(!find_isomorphism(&f1.companion.algebra, &f2.companion.algebra, 5_000).is_iso());
}

fn block_diag(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.rows + b.rows;
    let mut m = Matrix::zeros(n, n);
    for i in 0..a.rows {
        for j in 0..a.cols {
            m[(i, j)] = a[(i, j)].clone();
        }
    }
    for i in 0..b.rows {
        for j in 0..b.cols {
            m[(a.rows + i, a.cols + j)] = b[(i, j)].clone();
        }
    }
    m
}
