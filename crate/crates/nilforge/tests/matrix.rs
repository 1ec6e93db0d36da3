mod common;

use common::{corpus, cyclic, invertible, rng};
use nilforge::algebra::Algebra;
use nilforge::forms::{signature_of_pana, Pointing};
use nilforge::linalg::{unit_vec, Matrix};
use nilforge::matrix::{
    cartan_generators, conjugacy_from_isomorphism, coordinate_decomposable, diagonal_basis, dim_bounds_check,
    expected_gram, extremal_example, hermitian_eval, hermitian_form_matrix, in_su, kb_subspaces, mansa_from_pana,
    matrix_algebra, matrix_nil_index, middle_signature, omega, orthogonal_complement, read_blocks, selfadjoint, tau_anti_fixed,
    verify_bd_axioms, verify_cartan, verify_realization, BdData, Case,
};
use nilforge::{Error, FieldTag, Scalar};

fn q(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn unit(m: usize, j: usize, k: usize) -> Matrix {
    let mut e = Matrix::zeros(m, m);
    e[(j, k)] = q(1);
    e
}

/// `b(xu, v) = b(u, xv)` on every pair of basis vectors, summed by hand.
fn selfadjoint_oracle(x: &Matrix, b: &Matrix) -> bool {
    let m = b.rows;
    (0..m).all(|u| {
        (0..m).all(|v| {
            let left = (0..m).fold(q(0), |acc, k| acc + &x[(k, u)] * &b[(k, v)]);
            let right = (0..m).fold(q(0), |acc, k| acc + &b[(u, k)] * &x[(k, v)]);
            left == right
        })
    })
}

#[test]
fn hermitian_examples() {
    assert_eq!(hermitian_form_matrix(2, 1).unwrap(), Matrix::diag(&[q(1), q(1), q(-1)]));
    assert_eq!(hermitian_form_matrix(0, 1).unwrap(), Matrix::diag(&[q(-1)]));
    for p in 0..5 {
        for qq in 0..5 {
            if p + qq == 0 {
                assert!(matches!(hermitian_form_matrix(p, qq), Err(Error::RangeError(_))));
                continue;
            }
            let h = hermitian_form_matrix(p, qq).unwrap();
            assert_eq!(h.trace(), q(p as i64 - qq as i64));
        }
    }
    let h = hermitian_form_matrix(1, 1).unwrap();
    let u = vec![Scalar::i(), q(0)];
    assert_eq!(hermitian_eval(&h, &u, &u), q(1));
}

#[test]
fn omega_squares_to_half_i() {
    assert_eq!(&q(2) * &(&omega() * &omega()), Scalar::i());
}

#[test]
fn diagonal_basis_examples() {
    for (p, qq) in [(1, 0), (1, 1), (2, 1), (3, 2), (3, 3)] {
        assert_eq!(diagonal_basis(p, qq, 0).unwrap().matrix, Matrix::identity(p + qq));
    }
    let d = diagonal_basis(2, 1, 1).unwrap();
    assert_eq!(d.gram[(0, 2)], Scalar::i());
    assert_eq!(d.gram[(1, 1)], q(1));
    assert!(matches!(diagonal_basis(2, 1, 2), Err(Error::RangeError(_))));
    assert!(matches!(diagonal_basis(1, 2, 0), Err(Error::RangeError(_))));
}

#[test]
fn diagonal_basis_gram_identity_and_unmixed_middle() {
    for p in 1..=4 {
        for qq in 0..=p {
            for ell in 0..=qq {
                let d = diagonal_basis(p, qq, ell).unwrap();
                let m = p + qq;
                let h = hermitian_form_matrix(p, qq).unwrap();
                for j in 0..m {
                    for k in 0..m {
                        let g = hermitian_eval(&h, &d.matrix.col(j), &d.matrix.col(k));
                        assert_eq!(g, expected_gram(p, qq, ell)[(j, k)], "({p},{qq},{ell})");
                    }
                }
                for j in ell..m - ell {
                    assert_eq!(d.matrix.col(j), unit_vec(m, j), "({p},{qq},{ell})");
                }
            }
        }
    }
}

#[test]
fn cartan_examples() {
    let c = cartan_generators(1, 1, 1).unwrap();
    let i = Scalar::i();
    assert_eq!(c.vector, vec![unit(2, 0, 1).sub(&unit(2, 1, 0)).scale(&i)]);
    assert!(c.compact.is_empty());
    assert!(matches!(cartan_generators(2, 1, 2), Err(Error::RangeError(_))));
}

#[test]
fn cartan_dimensions_and_properties() {
    for p in 0..=4 {
        for qq in 0..=4 {
            if p + qq == 0 {
                continue;
            }
            for ell in 0..=p.min(qq) {
                let c = cartan_generators(p, qq, ell).unwrap();
                assert_eq!(c.vector.len(), ell);
                assert_eq!(c.dim(), p + qq - 1);
                verify_cartan(&c).unwrap();
                let h = hermitian_form_matrix(p, qq).unwrap();
                for x in c.all() {
                    assert!(in_su(&x, &h) && tau_anti_fixed(&x) && x.trace().is_zero());
                    for y in c.all() {
                        assert!(x.commutator(&y).is_zero());
                    }
                }
            }
        }
    }
}

#[test]
fn tampered_cartan_data_is_rejected() {
    let mut c = cartan_generators(2, 2, 2).unwrap();
    c.compact[0] = c.compact[0].scale(&Scalar::i());
    assert!(verify_cartan(&c).is_err());
    let mut c = cartan_generators(2, 2, 1).unwrap();
    c.vector.pop();
    assert!(verify_cartan(&c).is_err());
}

#[test]
fn cyclic3_realization_by_hand() {
    let r = mansa_from_pana(&cyclic(3), Case::Real).unwrap();
    assert_eq!(r.generators.len(), 3);
    // multiplication by ξ shifts 𝟙 → ξ → ξ² → ξ³
    let s = unit(4, 1, 0).add(&unit(4, 2, 1)).add(&unit(4, 3, 2));
    assert_eq!(r.generators, vec![s.clone(), s.mul(&s), s.mul(&s).mul(&s)]);
    for g in &r.generators {
        assert_eq!(g.rows, 4);
        assert!(selfadjoint_oracle(g, &r.form));
    }
}

#[test]
fn realizations_over_the_corpus() {
    for (name, p) in corpus() {
        for case in [Case::Real, Case::Complex] {
            let r = mansa_from_pana(&p, case).unwrap();
            let rep = verify_realization(&r);
            assert!(rep.passes(), "{name}: {:?}", rep.violations);
            assert_eq!(r.m(), p.dim() + 1, "{name}");
            assert_eq!(r.generators.len(), r.m() - 1, "{name}");
            assert!(verify_bd_axioms(&r.blocks).passes(), "{name}");
            assert_eq!(read_blocks(&r.generators).unwrap(), r.blocks, "{name}");
            assert_eq!(r.blocks.generators(), r.generators, "{name}");
            for g in &r.generators {
                assert_eq!(selfadjoint(g, &r.form), selfadjoint_oracle(g, &r.form), "{name}");
                assert!(g.is_nilpotent(), "{name}");
            }
            if case == Case::Real {
                for g in &r.generators {
                    let x = g.scale(&Scalar::i());
                    assert!(in_su(&x, &r.form) && tau_anti_fixed(&x), "{name}");
                }
            }
        }
    }
}

#[test]
fn kernel_is_orthogonal_of_image() {
    for (name, p) in corpus() {
        let r = mansa_from_pana(&p, Case::Complex).unwrap();
        let alg = matrix_algebra(&r.generators).unwrap();
        assert_eq!(alg.len(), r.m() - 1, "{name}");
        let (b, k) = kb_subspaces(&alg);
        assert_eq!(k, orthogonal_complement(&b, &r.form), "{name}");
        assert_eq!(matrix_nil_index(&alg), p.algebra.nil_index().unwrap(), "{name}");
    }
}

#[test]
fn dimension_bounds() {
    for (name, p) in corpus() {
        let r = mansa_from_pana(&p, Case::Complex).unwrap();
        let d = dim_bounds_check(&r.generators).unwrap();
        assert_eq!(d.d1, 1, "{name}");
        assert_eq!(d.dim, d.m - 1, "{name}");
        assert_eq!(d.d2 + d.d3, d.m - 1, "{name}");
        assert!(d.holds(), "{name}: {d:?}");
    }
    for m in 2..=6 {
        let d = dim_bounds_check(&extremal_example(m)).unwrap();
        assert_eq!(d.dim, m * m / 4);
        assert_eq!(d.dim, d.upper);
        assert_eq!(d.d3, m.div_ceil(2));
        assert!(d.holds());
    }
    let d = dim_bounds_check(&extremal_example(4)).unwrap();
    assert_eq!((d.dim, d.upper), (4, 4));
}

#[test]
fn non_nilpotent_or_non_commuting_inputs_fail() {
    assert!(matches!(dim_bounds_check(&[Matrix::identity(3)]), Err(Error::NotNilpotentAlgebra(_))));
    assert!(matches!(dim_bounds_check(&[unit(3, 1, 0), unit(3, 2, 1)]), Err(Error::NotNilpotentAlgebra(_))));
}

#[test]
fn zero_product_realization() {
    let p = Pointing::canonical(Algebra::zero_product(FieldTag::Rational, 1)).unwrap();
    let r = mansa_from_pana(&p, Case::Real).unwrap();
    assert_eq!(r.generators, vec![unit(2, 1, 0)]);
    let alg = matrix_algebra(&r.generators).unwrap();
    assert_eq!(matrix_nil_index(&alg), 1);
    let (b, k) = kb_subspaces(&alg);
    assert_eq!(b, k);
    // a square that does not vanish separates the two subspaces
    let r = mansa_from_pana(&cyclic(2), Case::Real).unwrap();
    let (b, k) = kb_subspaces(&matrix_algebra(&r.generators).unwrap());
    assert_eq!((b.dim(), k.dim()), (2, 1));
}

#[test]
fn bd_data_with_vanishing_n() {
    for j in [Matrix::from_ints(&[&[1, 0], &[0, -1]]), Matrix::from_ints(&[&[0, 1], &[1, 0]]), Matrix::from_ints(&[&[2, 1, 0], &[1, 0, 0], &[0, 0, 3]])] {
        let w = j.rows;
        let d = BdData { n: vec![Matrix::zeros(w, w); w], j: j.to_rows() };
        assert!(verify_bd_axioms(&d).passes());
        let gens = d.generators();
        let alg = matrix_algebra(&gens).unwrap();
        assert_eq!(alg.len(), w + 1);
        assert_eq!(matrix_nil_index(&alg), 2);
    }
}

#[test]
fn perturbed_j_breaks_symmetry() {
    let r = mansa_from_pana(&cyclic(4), Case::Complex).unwrap();
    let mut d = r.blocks.clone();
    d.j[0][1] = &d.j[0][1] + &q(1);
    let rep = verify_bd_axioms(&d);
    assert!(rep.violations.iter().any(|v| v == "(b) J(x)y = J(y)x"), "{:?}", rep.violations);
}

#[test]
fn middle_block_signature() {
    for (name, p) in corpus() {
        let r = mansa_from_pana(&p, Case::Real).unwrap();
        let (whole, mid) = middle_signature(&r).unwrap();
        let t = signature_of_pana(&p).unwrap();
        assert_eq!(whole.pq(), t.pq(), "{name}");
        assert_eq!(mid.pq(), (t.p - 1, t.q - 1), "{name}");
    }
}

#[test]
fn realizations_are_coordinate_indecomposable() {
    for (name, p) in corpus().into_iter().filter(|(_, p)| p.dim() <= 8) {
        let r = mansa_from_pana(&p, Case::Complex).unwrap();
        assert!(!coordinate_decomposable(&r.generators), "{name}");
    }
    let split = vec![unit(4, 1, 0), unit(4, 3, 2)];
    assert!(coordinate_decomposable(&split));
}

#[test]
fn case_checks() {
    let z = Pointing::canonical(Algebra::zero_product(FieldTag::GaussianRational, 1)).unwrap();
    assert!(matches!(mansa_from_pana(&z, Case::Real), Err(Error::FieldMismatch(_))));
    assert!(mansa_from_pana(&z, Case::Complex).is_ok());
    assert!(matches!(Pointing::canonical(Algebra::zero_product(FieldTag::Rational, 2)), Err(Error::AnnihilatorNotOneDim(2))));
    assert_eq!("real".parse::<Case>().unwrap(), Case::Real);
    assert!("quaternionic".parse::<Case>().is_err());
}

#[test]
fn isomorphic_pointings_give_conjugate_realizations() {
    let mut r = rng(61);
    for (name, p) in corpus().into_iter().filter(|(_, p)| p.dim() <= 6) {
        let s = invertible(&mut r, p.dim());
        let p2 = p.change_basis(&s).unwrap();
        let phi = s.inverse().unwrap();
        let c = conjugacy_from_isomorphism(&p, &p2, &phi).unwrap();
        let r1 = mansa_from_pana(&p, Case::Complex).unwrap();
        let r2 = mansa_from_pana(&p2, Case::Complex).unwrap();
        assert_eq!(c.map.transpose().mul(&r2.form).mul(&c.map), r1.form.scale(&c.scale), "{name}");
        let inv = c.map.inverse().unwrap();
        let a2 = matrix_algebra(&r2.generators).unwrap();
        for g in &r1.generators {
            let img = c.map.mul(g).mul(&inv);
            let stacked: Vec<_> = a2.iter().chain(std::iter::once(&img)).map(|m| m.flat().to_vec()).collect();
            assert_eq!(Matrix::from_rows(&stacked).rank(), a2.len(), "{name}");
        }
    }
    let c3 = cyclic(3);
    let bad = Matrix::diag(&[q(1), q(1), q(2)]);
    assert!(matches!(conjugacy_from_isomorphism(&c3, &c3, &bad), Err(Error::NotAnIsomorphism(_))));
}
