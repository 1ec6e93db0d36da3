mod common;

use common::{corpus, cyclic, invertible, rng};
use nilforge::algebra::{cyclic_algebra, glued_sum, Algebra, Violation};
use nilforge::forms::signature_of_pana;
use nilforge::iso::{find_isomorphism, fingerprint, IsoOutcome};
use nilforge::linalg::{unit_vec, zero_vec, Matrix, Subspace};
use nilforge::{Error, FieldTag, Scalar};
use proptest::prelude::*;

fn q(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn cyc(nu: usize) -> Algebra {
    cyclic_algebra(FieldTag::Rational, nu).algebra
}

fn xi(nu: usize, k: usize) -> Vec<Scalar> {
    unit_vec(nu, k - 1)
}

#[test]
fn validate_examples() {
    assert!(cyc(3).validate().is_ok());
    assert!(cyc(6).validate().is_ok());

    let mut a = Algebra::zero_product(FieldTag::Rational, 2);
    a.set_product_ordered(0, 1, unit_vec(2, 0));
    assert_eq!(a.validate(), Err(Violation::Commutativity { i: 1, j: 2, k: 1 }));

    let mut b = Algebra::zero_product(FieldTag::Rational, 2);
    b.set_product(0, 0, unit_vec(2, 1));
    b.set_product(0, 1, unit_vec(2, 0));
    assert!(matches!(b.validate(), Err(Violation::Associativity { .. })));
}

#[test]
fn multiply_examples() {
    let a = cyc(4);
    assert_eq!(a.multiply(&xi(4, 1), &xi(4, 1)).unwrap(), xi(4, 2));
    assert_eq!(a.multiply(&xi(4, 2), &xi(4, 3)).unwrap(), zero_vec(4));
    let y = vec![q(1), q(-2), q(3), q(5)];
    assert_eq!(a.multiply(&zero_vec(4), &y).unwrap(), zero_vec(4));
    assert!(matches!(a.multiply(&zero_vec(3), &y), Err(Error::DimensionMismatch(_))));
}

#[test]
fn multiplication_is_bilinear_and_commutative() {
    let mut r = rng(11);
    for (name, p) in corpus() {
        let a = &p.algebra;
        let n = a.dim;
        let x: Vec<Scalar> = (0..n).map(|_| common::rational(&mut r, 4)).collect();
        let y: Vec<Scalar> = (0..n).map(|_| common::rational(&mut r, 4)).collect();
        let z: Vec<Scalar> = (0..n).map(|_| common::rational(&mut r, 4)).collect();
        assert_eq!(a.mul(&x, &y), a.mul(&y, &x), "{name}");
        let lhs = a.mul(&nilforge::linalg::vec_add(&x, &z), &y);
        let rhs = nilforge::linalg::vec_add(&a.mul(&x, &y), &a.mul(&z, &y));
        assert_eq!(lhs, rhs, "{name}");
    }
}

#[test]
fn power_subspace_examples() {
    let a = cyc(4);
    assert_eq!(a.power_subspace(2), Subspace::span(4, &[xi(4, 2), xi(4, 3), xi(4, 4)]));
    assert_eq!(a.power_subspace(5).dim(), 0);
    assert_eq!(a.power_subspace(1), Subspace::full(4));
    assert_eq!(Algebra::zero_product(FieldTag::Rational, 3).power_subspace(2).dim(), 0);
}

#[test]
fn nil_index_examples() {
    for nu in 1..=6 {
        assert_eq!(cyc(nu).nil_index().unwrap(), nu);
    }
    assert_eq!(Algebra::zero_product(FieldTag::Rational, 3).nil_index().unwrap(), 1);

    let mut unital = cyc(2);
    let mut u = Algebra::zero_product(FieldTag::Rational, 3);
    u.set_product(0, 0, unit_vec(3, 0));
    u.set_product(0, 1, unit_vec(3, 1));
    u.set_product(0, 2, unit_vec(3, 2));
    u.set_product(1, 1, unit_vec(3, 2));
    assert!(u.validate().is_ok());
    assert!(matches!(u.nil_index(), Err(Error::NotNilpotent)));
    unital.set_product(0, 0, unit_vec(2, 0));
    assert!(!unital.is_nilpotent());
}

#[test]
fn annihilator_examples() {
    assert_eq!(cyc(4).annihilator(), Subspace::span(4, &[xi(4, 4)]));
    assert_eq!(Algebra::zero_product(FieldTag::Rational, 3).annihilator(), Subspace::full(3));
    let c2 = cyclic(2);
    let g = glued_sum(&c2.algebra, &c2.omega, &c2.algebra, &c2.omega).unwrap();
    assert_eq!(g.annihilator().dim(), 1);
}

#[test]
fn cyclic_examples() {
    let one = cyc(1);
    assert_eq!(one.dim, 1);
    assert!(one.product(0, 0).iter().all(Scalar::is_zero));
    let three = cyc(3);
    assert!(three.c(0, 0, 1).is_one());
    assert!(three.c(0, 1, 2).is_one());
    assert!((0..3).all(|k| three.c(0, 2, k).is_zero()));
    assert_eq!(cyclic_algebra(FieldTag::Rational, 5).degree, vec![1, 2, 3, 4, 5]);
}

#[test]
fn glued_sum_examples() {
    let c1 = cyclic(1);
    let g = glued_sum(&c1.algebra, &c1.omega, &c1.algebra, &c1.omega).unwrap();
    assert_eq!(g.dim, 1);

    let g31 = common::glue(&cyclic(3), &cyclic(1));
    assert_eq!(signature_of_pana(&cyclic(3)).unwrap().pq(), (2, 2));
    assert_eq!(signature_of_pana(&g31).unwrap().pq(), (2 + 1 - 1, 2 + 1 - 1));
    let g21 = common::glue(&cyclic(2), &cyclic(1));
    assert_eq!(signature_of_pana(&g21).unwrap().pq(), (2, 1));

    let c3 = cyclic(3);
    let c2 = cyclic(2);
    let g32 = glued_sum(&c3.algebra, &c3.omega, &c2.algebra, &c2.omega).unwrap();
    assert_eq!(g32.nil_index().unwrap(), 3);
    let chain: Vec<usize> = g32.power_chain().iter().map(Subspace::dim).collect();
    assert_eq!(chain, vec![4, 2, 1, 0]);

    let z = Algebra::zero_product(FieldTag::Rational, 2);
    assert!(matches!(
        glued_sum(&z, &[q(1), q(0)], &c2.algebra, &c2.omega),
        Err(Error::AnnihilatorNotOneDim(2))
    ));
}

#[test]
fn glued_sum_dimension_law() {
    let parts: Vec<_> = corpus().into_iter().filter(|(_, p)| p.dim() <= 5).collect();
    for (n1, p1) in &parts {
        for (n2, p2) in parts.iter().take(6) {
            let g = glued_sum(&p1.algebra, &p1.omega, &p2.algebra, &p2.omega).unwrap();
            assert_eq!(g.dim, p1.dim() + p2.dim() - 1, "{n1} # {n2}");
            assert_eq!(g.annihilator().dim(), 1, "{n1} # {n2}");
            assert!(g.validate().is_ok(), "{n1} # {n2}");
            let nu = p1.algebra.nil_index().unwrap().max(p2.algebra.nil_index().unwrap());
            assert_eq!(g.nil_index().unwrap(), nu, "{n1} # {n2}");
        }
    }
}

#[test]
fn quotient_examples() {
    let a = cyc(4);
    let top = a.annihilator();
    let qa = a.quotient(&top).unwrap();
    assert_eq!(qa.dim, 3);
    let c3 = cyc(3);
    for i in 0..3 {
        for j in 0..3 {
            assert_eq!(qa.product(i, j), c3.product(i, j));
        }
    }
    let same = a.quotient(&Subspace::zero(4)).unwrap();
    for i in 0..4 {
        for j in 0..4 {
            assert_eq!(same.product(i, j), a.product(i, j));
        }
    }
    assert_eq!(a.quotient(&Subspace::full(4)).unwrap().dim, 0);
    assert!(matches!(a.quotient(&Subspace::span(4, &[xi(4, 1)])), Err(Error::NotAnIdeal)));
}

#[test]
fn fingerprint_examples() {
    let f = fingerprint(&cyc(4)).unwrap();
    assert_eq!(f.power_dims[..4], [4, 3, 2, 1]);
    assert_eq!(f.ann_dim, 1);
    assert_eq!(f.nil_index, 4);
    assert_eq!(fingerprint(&cyc(3)).unwrap(), fingerprint(&cyc(3)).unwrap());
    let z = fingerprint(&Algebra::zero_product(FieldTag::Rational, 3)).unwrap();
    assert_eq!((fingerprint(&cyc(3)).unwrap().nil_index, z.nil_index), (3, 1));
}

#[test]
fn find_isomorphism_examples() {
    match find_isomorphism(&cyc(3), &cyc(3), 10_000) {
        IsoOutcome::Iso(m) => assert_eq!(m, Matrix::identity(3)),
        other => panic!("{other:?}"),
    }
    match find_isomorphism(&cyc(3), &Algebra::zero_product(FieldTag::Rational, 3), 10_000) {
        IsoOutcome::Distinct(w) => assert_eq!(w, "nil-index"),
        other => panic!("{other:?}"),
    }
    let f1 = common::degree4_pointing(&q(1), &q(1)).algebra;
    let f2 = common::degree4_pointing(&q(1), &q(2)).algebra;
    assert!(!find_isomorphism(&f1, &f2, 200).is_iso());
}

#[test]
fn annihilator_of_quotient_contains_top_power() {
    for (name, p) in corpus() {
        let a = &p.algebra;
        let nu = a.nil_index().unwrap();
        if nu < 2 {
            continue;
        }
        let ann = a.annihilator();
        let qa = a.quotient(&ann).unwrap();
        let keep: Vec<usize> = (0..a.dim).filter(|c| !ann.pivots().contains(c)).collect();
        let project = |v: &Vec<Scalar>| -> Vec<Scalar> {
            let mut r = v.clone();
            for (b, &pv) in ann.basis().iter().zip(ann.pivots()) {
                let f = r[pv].clone();
                r = nilforge::linalg::vec_sub(&r, &nilforge::linalg::vec_scale(&f, b));
            }
            keep.iter().map(|&c| r[c].clone()).collect()
        };
        let image: Vec<Vec<Scalar>> = a.power_subspace(nu - 1).basis().iter().map(project).collect();
        let qann = qa.annihilator();
        for v in &image {
            assert!(qann.contains(v), "{name}");
        }
    }
}

#[test]
fn power_chain_is_decreasing() {
    for (name, p) in corpus() {
        let chain = p.algebra.power_chain();
        for w in chain.windows(2) {
            assert!(w[0].contains_subspace(&w[1]), "{name}");
        }
        assert_eq!(p.algebra.power_subspace(p.dim() + 1).dim(), 0, "{name}");
    }
}

#[test]
fn isomorphism_search_is_sound() {
    let mut r = rng(5);
    for nu in 1..=4 {
        let a = cyc(nu);
        let s = invertible(&mut r, nu);
        let b = a.change_basis(&s).unwrap();
        if let IsoOutcome::Iso(phi) = find_isomorphism(&a, &b, 5_000) {
            assert!(a.is_isomorphism_to(&b, &phi));
        }
    }
    for (name, p) in corpus().into_iter().filter(|(_, p)| p.dim() <= 4) {
        if let IsoOutcome::Iso(phi) = find_isomorphism(&p.algebra, &p.algebra, 2_000) {
            assert!(p.algebra.is_isomorphism_to(&p.algebra, &phi), "{name}");
        }
    }
}

#[test]
fn json_round_trip_and_loader_rejects_invalid() {
    for (name, p) in corpus() {
        let back = Algebra::from_json(&p.algebra.to_json()).unwrap();
        assert_eq!(back.to_json(), p.algebra.to_json(), "{name}");
    }
    let bad = serde_json::json!({
        "field": "rational", "dim": 2, "labels": ["a", "b"],
        "products": [{"i": 1, "j": 1, "coeffs": ["0", "1"]}, {"i": 1, "j": 2, "coeffs": ["1", "0"]}]
    });
    assert!(Algebra::from_json(&bad).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fingerprint_is_basis_invariant(seed in 0u64..1_000_000, which in 0usize..26) {
        let all = corpus();
        let (name, p) = &all[which % all.len()];
        let mut r = rng(seed);
        let s = invertible(&mut r, p.dim());
        let b = p.algebra.change_basis(&s).unwrap();
        prop_assert!(b.validate().is_ok());
        prop_assert_eq!(fingerprint(&p.algebra).unwrap(), fingerprint(&b).unwrap(), "{}", name);
    }
}
