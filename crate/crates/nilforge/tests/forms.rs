mod common;

use common::{corpus, cyclic, invertible, rational, rng};
use nilforge::algebra::Algebra;
use nilforge::forms::{
    adapted_decomposition, b_pi, b_pi_standard, complex_rank, isometry_from_isomorphism, mixed_complement, shifted_complement, signature,
    signature_of_pana, unital_extension_map, Pointing, Projection, SymmetricForm,
};
use nilforge::linalg::{unit_vec, Matrix};
use nilforge::nilpoly::cyclic_nil_polynomial;
use nilforge::poly::gram_matrix;
use nilforge::{Error, FieldTag, Scalar};

fn q(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn sig(m: &[&[i64]]) -> (usize, usize, usize) {
    let s = signature(&SymmetricForm::new(Matrix::from_ints(m)).unwrap()).unwrap();
    (s.p, s.q, s.z)
}

#[test]
fn cyclic_types() {
    assert_eq!(signature_of_pana(&cyclic(1)).unwrap().pq(), (1, 1));
    assert_eq!(signature_of_pana(&cyclic(2)).unwrap().pq(), (2, 1));
    assert_eq!(signature_of_pana(&cyclic(3)).unwrap().pq(), (2, 2));
    let c3 = cyclic(3);
    let b = b_pi(&c3, &c3.canonical_complement()).unwrap();
    assert_eq!(b.dim(), 4);
    assert!(b.is_nondegenerate());
}

#[test]
fn signature_examples() {
    assert_eq!(sig(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, -1]]), (2, 1, 0));
    assert_eq!(sig(&[&[0, 1], &[1, 0]]), (1, 1, 0));
    assert_eq!(sig(&[&[0, 0], &[0, 0]]), (0, 0, 2));
    assert_eq!(sig(&[&[1, 1], &[1, 1]]), (1, 0, 1));
    let f2 = cyclic_nil_polynomial(4).unwrap().part(2);
    let hess = SymmetricForm::new(gram_matrix(&f2)).unwrap();
    assert_eq!(signature(&hess).unwrap().pq(), (2, 1));
}

#[test]
fn signature_rejects_complex_forms() {
    let mut m = Matrix::identity(2);
    m[(0, 1)] = Scalar::i();
    m[(1, 0)] = Scalar::i();
    let f = SymmetricForm::new(m).unwrap();
    assert!(matches!(signature(&f), Err(Error::ComplexFieldUnsupported)));
    assert_eq!(complex_rank(&f), 2);
    assert!(SymmetricForm::new(Matrix::from_ints(&[&[0, 1], &[0, 0]])).is_err());
}

#[test]
fn pana_type_examples() {
    let z = Pointing::canonical(Algebra::zero_product(FieldTag::Rational, 1)).unwrap();
    assert_eq!(signature_of_pana(&z).unwrap().pq(), (1, 1));
    let g = common::glue(&cyclic(2), &cyclic(2));
    assert_eq!(signature_of_pana(&g).unwrap().pq(), (3, 1));
}

#[test]
fn glued_types_add() {
    let parts: Vec<_> = corpus().into_iter().filter(|(_, p)| p.dim() <= 4).collect();
    for (n1, p1) in &parts {
        for (n2, p2) in &parts {
            let s1 = signature_of_pana(p1).unwrap();
            let s2 = signature_of_pana(p2).unwrap();
            let g = signature_of_pana(&common::glue(p1, p2)).unwrap();
            assert_eq!(g.pq(), (s1.p + s2.p - 1, s1.q + s2.q - 1), "{n1} # {n2}");
        }
    }
}

#[test]
fn adapted_decomposition_examples() {
    let c4 = cyclic(4);
    let d = adapted_decomposition(&c4, &c4.canonical_complement()).unwrap();
    assert_eq!(d.dims(), (1, 3, 1));
    let b = b_pi_standard(&c4, &Projection::canonical(&c4));
    let one = unit_vec(5, 0);
    assert!(b.eval(&one, &one).is_zero());
    for v in d.e2.basis() {
        assert!(b.eval(&one, v).is_zero());
    }
}

#[test]
fn bad_complements_are_rejected() {
    let c3 = cyclic(3);
    let ann = c3.ann_generator();
    assert!(matches!(b_pi(&c3, &[ann.clone(), unit_vec(3, 0)]), Err(Error::BadComplement(_))));
    assert!(matches!(b_pi(&c3, &[unit_vec(3, 0)]), Err(Error::BadComplement(_))));
    assert!(matches!(adapted_decomposition(&c3, &[unit_vec(3, 0)]), Err(Error::BadComplement(_))));
}

#[test]
fn forms_are_nondegenerate_and_isotropic_for_random_complements() {
    let mut r = rng(17);
    for (name, p) in corpus() {
        let k = p.dim() - 1;
        for _ in 0..4 {
            let shifts: Vec<Scalar> = (0..k).map(|_| rational(&mut r, 5)).collect();
            let comp = mixed_complement(&p, &invertible(&mut r, k), &shifts);
            assert!(b_pi(&p, &comp).unwrap().is_nondegenerate(), "{name}");
            let b = b_pi_standard(&p, &Projection::new(&p, &comp).unwrap());
            let d = adapted_decomposition(&p, &comp).unwrap();
            assert_eq!(d.dims(), (1, k, 1), "{name}");
            let outer = [d.e1.basis()[0].clone(), d.e3.basis()[0].clone()];
            for u in &outer {
                assert!(b.eval(u, u).is_zero(), "{name}");
                for v in d.e2.basis() {
                    assert!(b.eval(u, v).is_zero(), "{name}");
                }
            }
        }
    }
}

#[test]
fn signature_is_independent_of_the_complement() {
    let mut r = rng(23);
    for (name, p) in corpus() {
        let base = signature_of_pana(&p).unwrap();
        let k = p.dim() - 1;
        for trial in 0..20 {
            let shifts: Vec<Scalar> = (0..k).map(|_| rational(&mut r, 6)).collect();
            let comp = if trial % 2 == 0 {
                shifted_complement(&p, &shifts)
            } else {
                mixed_complement(&p, &invertible(&mut r, k), &shifts)
            };
            let s = signature(&b_pi(&p, &comp).unwrap()).unwrap();
            assert_eq!(s, base, "{name}, trial {trial}");
        }
    }
}

#[test]
fn sylvester_congruence() {
    let mut r = rng(29);
    for (name, p) in corpus() {
        let b = b_pi(&p, &p.canonical_complement()).unwrap();
        let s = signature(&b).unwrap();
        for _ in 0..3 {
            let g = invertible(&mut r, b.dim());
            assert_eq!(signature(&b.congruent(&g)).unwrap(), s, "{name}");
        }
    }
}

#[test]
fn identity_isometry() {
    for (name, p) in corpus() {
        let w = isometry_from_isomorphism(&p, &p, &Matrix::identity(p.dim())).unwrap();
        assert!(w.scale.is_one(), "{name}");
        assert_eq!(w.map, Matrix::identity(p.dim() + 1), "{name}");
        assert_eq!(w.map, unital_extension_map(&Matrix::identity(p.dim())));
    }
}

#[test]
fn scaled_pointing_keeps_its_type() {
    let c3 = cyclic(3);
    let c3x4 = c3.scaled(&q(4));
    assert_eq!(signature_of_pana(&c3).unwrap(), signature_of_pana(&c3x4).unwrap());
    let w = isometry_from_isomorphism(&c3, &c3x4, &Matrix::identity(3)).unwrap();
    assert_eq!(w.scale, q(4));

    // θ_2: ξ^k ↦ 2^k ξ^k
    let theta = Matrix::diag(&[q(2), q(4), q(8)]);
    let w = isometry_from_isomorphism(&c3, &c3x4, &theta).unwrap();
    let b1 = b_pi_standard(&c3, &Projection::canonical(&c3));
    let b2 = b_pi_standard(&c3x4, &Projection::canonical(&c3x4));
    assert_eq!(b2.congruent(&w.map).matrix, b1.matrix.scale(&w.scale));
}

#[test]
fn random_presentations_are_isometric() {
    let mut r = rng(31);
    for (name, p) in corpus() {
        let s = invertible(&mut r, p.dim());
        let p2 = p.change_basis(&s).unwrap();
        let phi = s.inverse().unwrap();
        assert!(p.algebra.is_isomorphism_to(&p2.algebra, &phi), "{name}");
        let w = isometry_from_isomorphism(&p, &p2, &phi).unwrap();
        let b1 = b_pi_standard(&p, &Projection::canonical(&p));
        let b2 = b_pi_standard(&p2, &Projection::canonical(&p2));
        assert_eq!(b2.congruent(&w.map).matrix, b1.matrix.scale(&w.scale), "{name}");
        assert_eq!(signature_of_pana(&p).unwrap(), signature_of_pana(&p2).unwrap(), "{name}");
    }
}

#[test]
fn non_isomorphisms_are_rejected() {
    let c3 = cyclic(3);
    let bad = Matrix::diag(&[q(1), q(1), q(2)]);
    assert!(matches!(isometry_from_isomorphism(&c3, &c3, &bad), Err(Error::NotAnIsomorphism(_))));
}

#[test]
fn pointing_requires_nonzero_value_on_annihilator() {
    let a = cyclic(3).algebra;
    assert!(Pointing::new(a.clone(), vec![q(1), q(0), q(0)]).is_err());
    assert!(Pointing::new(a, vec![q(0), q(0), q(3)]).is_ok());
}
