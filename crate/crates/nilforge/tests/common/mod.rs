#![allow(dead_code)]

use nilforge::algebra::{cyclic_algebra, glued_functional, glued_sum};
use nilforge::forms::Pointing;
use nilforge::linalg::{unit_vec, Matrix};
use nilforge::nilpoly::{cubic_to_nilpoly, degree4_family, extended_pointing, CubicNilPolynomial};
use nilforge::poly::Polynomial;
use nilforge::{FieldTag, Scalar};
use rand::{Rng, SeedableRng};
use std::sync::OnceLock;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rational(rng: &mut ChaCha8Rng, bound: i64) -> Scalar {
    let n = rng.gen_range(-bound..=bound);
    let d = rng.gen_range(1..=bound.max(1));
    Scalar::from_ratio(n, d)
}

pub fn nonzero_rational(rng: &mut ChaCha8Rng, bound: i64) -> Scalar {
    loop {
        let r = rational(rng, bound);
        if !r.is_zero() {
            return r;
        }
    }
}

/// Random invertible matrix: a product of a random unit lower and unit upper triangle with a nonzero diagonal.
pub fn invertible(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let mut l = Matrix::identity(n);
    let mut u = Matrix::identity(n);
    for i in 0..n {
        for j in 0..i {
            l[(i, j)] = rational(rng, 3);
            u[(j, i)] = rational(rng, 3);
        }
        u[(i, i)] = nonzero_rational(rng, 3);
    }
    l.mul(&u)
}

pub fn cyclic(nu: usize) -> Pointing {
    Pointing::canonical(cyclic_algebra(FieldTag::Rational, nu).algebra).unwrap()
}

pub fn dm(exp: &[u32], c: i64) -> Polynomial {
    Polynomial::divided_monomial(exp.to_vec(), Scalar::from_int(c))
}

pub fn cubics() -> Vec<(String, usize, Polynomial)> {
    vec![
        ("x1^(3)".into(), 1, dm(&[3], 1)),
        ("x1^(3)+x2^(3)".into(), 2, dm(&[3, 0], 1).add(&dm(&[0, 3], 1))),
        ("x1^(2)x2".into(), 2, dm(&[2, 1], 1)),
        ("x1x2x3".into(), 3, dm(&[1, 1, 1], 1)),
        ("x1^(3)-x2^(2)x3+2x3^(3)".into(), 3, dm(&[3, 0, 0], 1).add(&dm(&[0, 2, 1], -1)).add(&dm(&[0, 0, 3], 2))),
    ]
}

pub fn hu_instances() -> Vec<(String, CubicNilPolynomial)> {
    cubics().into_iter().map(|(name, m, c)| (name, cubic_to_nilpoly(m, &c, None).unwrap())).collect()
}

pub fn companion_pointing(c: &CubicNilPolynomial) -> Pointing {
    let n = c.companion.algebra.dim;
    Pointing::new(c.companion.algebra.clone(), unit_vec(n, n - 1)).unwrap()
}

/// Ten parameter pairs `(ε, t)` with `ε = ±1` and `t ≠ 0`.
pub fn degree4_params() -> Vec<(Scalar, Scalar)> {
    let ts = [(1, 1), (2, 1), (-1, 1), (1, 2), (-3, 2), (5, 1), (2, 3), (-7, 4), (3, 1), (1, 5)];
    ts.iter()
        .enumerate()
        .map(|(k, &(n, d))| (Scalar::from_int(if k % 2 == 0 { 1 } else { -1 }), Scalar::from_ratio(n, d)))
        .collect()
}

pub fn degree4_pointing(eps: &Scalar, t: &Scalar) -> Pointing {
    extended_pointing(&degree4_family(eps, t).unwrap().f.poly).unwrap()
}

pub fn glue(p1: &Pointing, p2: &Pointing) -> Pointing {
    let a = glued_sum(&p1.algebra, &p1.omega, &p2.algebra, &p2.omega).unwrap();
    let w = glued_functional(&p1.omega, &p2.omega, &p1.algebra, &p2.algebra).unwrap();
    Pointing::new(a, w).unwrap()
}

pub fn glued_corpus() -> Vec<(String, Pointing)> {
    let hu = hu_instances();
    vec![
        ("C2#C2".into(), glue(&cyclic(2), &cyclic(2))),
        ("C3#C1".into(), glue(&cyclic(3), &cyclic(1))),
        ("C3#-C2".into(), glue(&cyclic(3), &cyclic(2).scaled(&Scalar::from_int(-1)))),
        ("C4#C3".into(), glue(&cyclic(4), &cyclic(3))),
        ("HU#C2".into(), glue(&companion_pointing(&hu[2].1), &cyclic(2))),
    ]
}

/// Every pointed algebra used by the property suites.
pub fn corpus() -> Vec<(String, Pointing)> {
    static CORPUS: OnceLock<Vec<(String, Pointing)>> = OnceLock::new();
    CORPUS.get_or_init(build_corpus).clone()
}

fn build_corpus() -> Vec<(String, Pointing)> {
    let mut out: Vec<(String, Pointing)> = (1..=6).map(|nu| (format!("cyclic {nu}"), cyclic(nu))).collect();
    for (name, c) in hu_instances() {
        out.push((format!("q+c, c={name}"), companion_pointing(&c)));
    }
    for (eps, t) in degree4_params() {
        out.push((format!("degree 4, eps={eps}, t={t}"), degree4_pointing(&eps, &t)));
    }
    out.extend(glued_corpus());
    out
}
