//! Nil-polynomials `f = ω∘exp∘φ` and the quadratic/cubic data that determine them.

use serde::Serialize;

use crate::algebra::{cyclic_algebra, Algebra, GradedAlgebra, Violation};
use crate::error::{Error, Result};
use crate::forms::{signature, Pointing, SymmetricForm};
use crate::iso::{find_isomorphism_filtered, fingerprint, fingerprint_difference, IsoOutcome};
use crate::linalg::{dot, is_zero_vec, unit_vec, Matrix, Subspace, Vector};
use crate::poly::{generic_element, gram_matrix, polarize, poly_vec_is_zero, poly_vec_zero, PolyVector, Polynomial};
use crate::scalar::{FieldTag, Scalar};

/// Nil-polynomial together with the pointed algebra it was computed from, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilPolynomial {
    pub poly: Polynomial,
    pub degree: u32,
    pub provenance: Option<Provenance>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub pointing: Pointing,
    pub kernel_basis: Vec<Vector>,
}

impl NilPolynomial {
    pub fn part(&self, k: u32) -> Polynomial {
        self.poly.homogeneous_part(k)
    }

    pub fn parts(&self) -> Vec<Polynomial> {
        (0..=self.degree).map(|k| self.part(k)).collect()
    }

    pub fn nvars(&self) -> usize {
        self.poly.nvars
    }
}

/// Product of two algebra elements whose coordinates are polynomials.
pub fn poly_mul_in(a: &Algebra, x: &[Polynomial], y: &[Polynomial]) -> PolyVector {
    let nv = x.first().map_or(0, |p| p.nvars);
    let mut out = poly_vec_zero(a.dim, nv);
    for i in 0..a.dim {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..a.dim {
            if y[j].is_zero() {
                continue;
            }
            let prod = a.product(i, j);
            if is_zero_vec(prod) {
                continue;
            }
            let xy = x[i].mul(&y[j]);
            for (k, c) in prod.iter().enumerate() {
                if !c.is_zero() {
                    out[k] = out[k].add(&xy.scale(c));
                }
            }
        }
    }
    out
}

fn apply_functional(omega: &[Scalar], v: &[Polynomial], nvars: usize) -> Polynomial {
    let mut s = Polynomial::zero(nvars);
    for (w, p) in omega.iter().zip(v) {
        if !w.is_zero() {
            s = s.add(&p.scale(w));
        }
    }
    s
}

/// `Σ_{k≥1} ω(X^k)/k!` for the generic element `X` over `basis`.
fn omega_exp(p: &Pointing, basis: &[Vector]) -> Polynomial {
    let m = basis.len();
    let x = generic_element(basis, p.dim());
    let mut f = Polynomial::zero(m);
    let mut power = x.clone();
    let mut k = 1u32;
    while !poly_vec_is_zero(&power) {
        f = f.add(&apply_functional(&p.omega, &power, m).scale(&Scalar::factorial(k).inv().unwrap()));
        power = poly_mul_in(&p.algebra, &power, &x);
        k += 1;
    }
    f
}

/// Nil-polynomial on `ker ω` in the coordinates of `kernel_basis`
/// (the pivot-free basis of [`Pointing::kernel_basis`] when `None`).
pub fn nil_polynomial(p: &Pointing, kernel_basis: Option<&[Vector]>) -> Result<NilPolynomial> {
    let ann = p.algebra.annihilator();
    if ann.dim() != 1 {
        return Err(Error::AnnihilatorNotOneDim(ann.dim()));
    }
    let basis: Vec<Vector> = match kernel_basis {
        Some(b) => b.to_vec(),
        None => p.kernel_basis(),
    };
    for (i, b) in basis.iter().enumerate() {
        if b.len() != p.dim() {
            return Err(Error::DimensionMismatch("kernel basis vector length".into()));
        }
        if !dot(&p.omega, b).is_zero() {
            return Err(Error::BasisNotInKernel(i));
        }
    }
    if basis.len() + 1 != p.dim() || Subspace::span(p.dim(), &basis).dim() != basis.len() {
        return Err(Error::PreconditionFailed("kernel basis must be a basis of ker ω".into()));
    }
    let nu = p.algebra.nil_index()? as u32;
    let poly = omega_exp(p, &basis);
    Ok(NilPolynomial { poly, degree: nu, provenance: Some(Provenance { pointing: p.clone(), kernel_basis: basis }) })
}

/// Extended nil-polynomial on the whole algebra in its standard coordinates.
pub fn extended_nil_polynomial(p: &Pointing) -> Result<Polynomial> {
    let ann = p.algebra.annihilator();
    if ann.dim() != 1 {
        return Err(Error::AnnihilatorNotOneDim(ann.dim()));
    }
    let basis: Vec<Vector> = (0..p.dim()).map(|i| unit_vec(p.dim(), i)).collect();
    Ok(omega_exp(p, &basis))
}

/// Extended nil-polynomial of the zero space.
pub fn extended_nil_polynomial_zero_dim() -> Polynomial {
    Polynomial::one(0)
}

/// Commutative product on `W` defined by `ω₂(x·y, z) = ω₃(x, y, z)`.
pub fn induced_product(f: &Polynomial) -> Result<Algebra> {
    let n = f.nvars;
    let g = gram_matrix(&f.homogeneous_part(2));
    let ginv = g.inverse().map_err(|_| Error::DegenerateQuadraticPart)?;
    let t = polarize(f, 3);
    let mut a = Algebra::zero_product(f.field(), n);
    for i in 0..n {
        for j in i..n {
            let h = t.slot_vector(&[i, j]);
            a.set_product(i, j, ginv.mul_vec(&h));
        }
    }
    Ok(a)
}

/// The algebra `W ⊕ F` with `(x,s)(y,t) = (x·y, ω₂(x,y))`, pointed at the last coordinate.
pub fn extended_algebra(f: &Polynomial) -> Result<Algebra> {
    let n = f.nvars;
    let w = induced_product(f)?;
    let g = gram_matrix(&f.homogeneous_part(2));
    let mut a = Algebra::zero_product(f.field(), n + 1);
    for i in 0..n {
        for j in i..n {
            let mut v = w.product(i, j).clone();
            v.push(g[(i, j)].clone());
            a.set_product(i, j, v);
        }
    }
    Ok(a)
}

pub fn extended_pointing(f: &Polynomial) -> Result<Pointing> {
    let a = extended_algebra(f)?;
    let n = a.dim;
    Pointing::new(a, unit_vec(n, n - 1))
}

/// Matrix of `(x, s) ↦ Σ x_i b_i + s·a` from the extended algebra into the source algebra.
pub fn extension_isomorphism(prov: &Provenance) -> Matrix {
    let mut cols = prov.kernel_basis.clone();
    cols.push(prov.pointing.ann_generator());
    Matrix::from_cols(&cols, prov.pointing.dim())
}

/// Checks that the extended induced algebra maps isomorphically onto the source.
pub fn verify_extension_isomorphism(f: &NilPolynomial) -> Result<bool> {
    let prov = f.provenance.as_ref().ok_or_else(|| Error::PreconditionFailed("no source algebra".into()))?;
    let ext = extended_algebra(&f.poly)?;
    Ok(ext.is_isomorphism_to(&prov.pointing.algebra, &extension_isomorphism(prov)))
}

/// Quadratic and cubic term on a common space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicDatum {
    pub q: Polynomial,
    pub c: Polynomial,
}

impl CubicDatum {
    pub fn new(q: Polynomial, c: Polynomial) -> Result<Self> {
        if q.nvars != c.nvars {
            return Err(Error::DimensionMismatch("q and c live on different spaces".into()));
        }
        if !q.is_homogeneous(2) {
            return Err(Error::ShapeMismatch("q is not a quadratic form".into()));
        }
        if !c.is_homogeneous(3) {
            return Err(Error::ShapeMismatch("c is not a cubic form".into()));
        }
        if gram_matrix(&q).det().is_zero() {
            return Err(Error::DegenerateQuadraticPart);
        }
        Ok(CubicDatum { q, c })
    }

    pub fn of(f: &Polynomial) -> Result<Self> {
        CubicDatum::new(f.homogeneous_part(2), f.homogeneous_part(3))
    }

    pub fn product(&self) -> Result<Algebra> {
        induced_product(&self.q.add(&self.c))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reconstruction {
    Member(NilPolynomial),
    NotInCq(String),
}

impl Reconstruction {
    pub fn member(self) -> Option<NilPolynomial> {
        match self {
            Reconstruction::Member(f) => Some(f),
            Reconstruction::NotInCq(_) => None,
        }
    }
}

/// Rebuilds `f` from `(q, c)` through `ω_{k+1}(x₀,…,x_k) = ω_k(x₀·x₁, x₂, …, x_k)`.
pub fn reconstruct_from_2_3(d: &CubicDatum) -> Result<Reconstruction> {
    let prod = d.product()?;
    match prod.validate() {
        Ok(()) => {}
        Err(v @ Violation::Associativity { .. }) => return Ok(Reconstruction::NotInCq(format!("{v}"))),
        Err(v) => return Ok(Reconstruction::NotInCq(format!("{v}"))),
    }
    if !prod.is_nilpotent() {
        return Ok(Reconstruction::NotInCq("induced product is not nilpotent".into()));
    }
    let n = d.q.nvars;
    let g = gram_matrix(&d.q);
    let basis: Vec<Vector> = (0..n).map(|i| unit_vec(n, i)).collect();
    let x = generic_element(&basis, n);
    let pair = |u: &[Polynomial]| -> Polynomial {
        let mut s = Polynomial::zero(n);
        for i in 0..n {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if !g[(i, j)].is_zero() {
                    s = s.add(&u[i].mul(&x[j]).scale(&g[(i, j)]));
                }
            }
        }
        s
    };
    let mut f = Polynomial::zero(n);
    let mut y = x.clone();
    let mut k = 2u32;
    while !poly_vec_is_zero(&y) {
        let part = pair(&y).scale(&Scalar::factorial(k).inv().unwrap());
        if part.is_zero() {
            break;
        }
        f = f.add(&part);
        y = poly_mul_in(&prod, &y, &x);
        k += 1;
    }
    let degree = f.degree().unwrap_or(0);
    Ok(Reconstruction::Member(NilPolynomial { poly: f, degree, provenance: None }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceFree {
    pub holds: bool,
    /// `Σ_{i,j} g^{ij} h_{ijk}` for each `k`.
    pub contractions: Vector,
}

pub fn trace_free_check(d: &CubicDatum) -> Result<TraceFree> {
    let n = d.q.nvars;
    let ginv = gram_matrix(&d.q).inverse().map_err(|_| Error::DegenerateQuadraticPart)?;
    let h = polarize(&d.c, 3);
    let contractions: Vector = (0..n)
        .map(|k| {
            let mut s = Scalar::zero();
            for i in 0..n {
                for j in 0..n {
                    if !ginv[(i, j)].is_zero() {
                        s += &ginv[(i, j)] * &h.get(&[i, j, k]);
                    }
                }
            }
            s
        })
        .collect();
    Ok(TraceFree { holds: is_zero_vec(&contractions), contractions })
}

/// `q + c` on `W₁ ⊕ W₂` with its companion graded algebra `W₁ ⊕ W₂ ⊕ F`.
#[derive(Clone, Debug)]
pub struct CubicNilPolynomial {
    pub f: NilPolynomial,
    pub companion: GradedAlgebra,
}

/// `f = q + c` where `q(x, y) = Σ P_ij x_i y_j` pairs `W₁ = F^m` with `W₂ = F^m`
/// (`P` the identity when `pairing` is `None`) and `c` is a cubic form on `W₁`.
pub fn cubic_to_nilpoly(m: usize, c: &Polynomial, pairing: Option<&Matrix>) -> Result<CubicNilPolynomial> {
    if c.nvars != m {
        return Err(Error::DimensionMismatch("cubic form must live on W1".into()));
    }
    if !c.is_homogeneous(3) {
        return Err(Error::ShapeMismatch("c is not a cubic form".into()));
    }
    let pm = pairing.cloned().unwrap_or_else(|| Matrix::identity(m));
    if pm.rows != m || pm.cols != m || pm.det().is_zero() {
        return Err(Error::DegenerateQuadraticPart);
    }
    let n = 2 * m;
    let mut q = Polynomial::zero(n);
    for i in 0..m {
        for j in 0..m {
            if !pm[(i, j)].is_zero() {
                q = q.add(&Polynomial::var(n, i).mul(&Polynomial::var(n, m + j)).scale(&pm[(i, j)]));
            }
        }
    }
    let embed: Vec<usize> = (0..m).collect();
    let f = q.add(&c.embed(n, &embed));
    let ext = extended_algebra(&f)?;
    let w = induced_product(&f)?;
    let generic = generic_element(&(0..n).map(|i| unit_vec(n, i)).collect::<Vec<_>>(), n);
    let triple = poly_mul_in(&w, &poly_mul_in(&w, &generic, &generic), &generic);
    if !poly_vec_is_zero(&triple) {
        return Err(Error::PreconditionFailed("(x·y)·z does not vanish".into()));
    }
    let mut degree = vec![1; m];
    degree.extend(vec![2; m]);
    degree.push(3);
    let companion = GradedAlgebra::new(ext.clone(), degree)?;
    let pointing = Pointing::new(ext, unit_vec(n + 1, n))?;
    let basis: Vec<Vector> = (0..n).map(|i| unit_vec(n + 1, i)).collect();
    let nil = nil_polynomial(&pointing, Some(&basis))?;
    if nil.poly != f {
        return Err(Error::PreconditionFailed("companion algebra does not reproduce q + c".into()));
    }
    Ok(CubicNilPolynomial { f: nil, companion })
}

/// Variable names of the degree-4 family.
pub const DEGREE4_VARS: [&str; 7] = ["x1", "x2", "y1", "y2", "y3", "z1", "z2"];

#[derive(Clone, Debug)]
pub struct Degree4Member {
    pub f: NilPolynomial,
    pub q: Polynomial,
    pub c: Polynomial,
    pub d: Polynomial,
}

fn dm(exp: [u32; 7], c: Scalar) -> Polynomial {
    Polynomial::divided_monomial(exp.to_vec(), c)
}

pub fn degree4_quadratic(eps: &Scalar) -> Polynomial {
    let one = Scalar::one();
    dm([1, 0, 0, 0, 0, 1, 0], one.clone())
        .add(&dm([0, 1, 0, 0, 0, 0, 1], one.clone()))
        .add(&dm([0, 0, 2, 0, 0, 0, 0], one.clone()))
        .add(&dm([0, 0, 0, 2, 0, 0, 0], one))
        .add(&dm([0, 0, 0, 0, 2, 0, 0], eps.clone()))
}

pub fn degree4_cubic(t: &Scalar) -> Polynomial {
    let one = Scalar::one();
    dm([2, 0, 1, 0, 0, 0, 0], one.clone())
        .add(&dm([0, 2, 1, 0, 0, 0, 0], one.clone()))
        .add(&dm([1, 1, 0, 1, 0, 0, 0], one))
        .add(&dm([0, 2, 0, 0, 1, 0, 0], t.clone()))
}

/// Expected quartic part `x₁^(4) + x₁^(2)x₂^(2) + (1+ε⁻¹t²) x₂^(4)`.
pub fn degree4_quartic(eps: &Scalar, t: &Scalar) -> Result<Polynomial> {
    let u = &Scalar::one() + &(&eps.inv()? * &(t * t));
    Ok(dm([4, 0, 0, 0, 0, 0, 0], Scalar::one()).add(&dm([2, 2, 0, 0, 0, 0, 0], Scalar::one())).add(&dm([0, 4, 0, 0, 0, 0, 0], u)))
}

pub fn degree4_family(eps: &Scalar, t: &Scalar) -> Result<Degree4Member> {
    if eps.is_zero() {
        return Err(Error::RangeError("ε must be nonzero".into()));
    }
    let q = degree4_quadratic(eps);
    let c = degree4_cubic(t);
    let f = match reconstruct_from_2_3(&CubicDatum::new(q.clone(), c.clone())?)? {
        Reconstruction::Member(f) => f,
        Reconstruction::NotInCq(r) => return Err(Error::PreconditionFailed(format!("c_t not in C_q: {r}"))),
    };
    let d = f.part(4);
    if d != degree4_quartic(eps, t)? || f.degree != 4 {
        return Err(Error::PreconditionFailed("quartic part differs from d_t".into()));
    }
    Ok(Degree4Member { f, q, c, d })
}

/// `Θ_{ijrs} = Σ_k ε_k⁻¹ c_{ijk} c_{rsk}` for `c = ½ Σ c_{ijk} x_i x_j y_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theta {
    pub n: usize,
    pub entries: Vec<Scalar>,
    pub symmetric_in_i_r: bool,
}

impl Theta {
    pub fn get(&self, i: usize, j: usize, r: usize, s: usize) -> &Scalar {
        let n = self.n;
        &self.entries[((i * n + j) * n + r) * n + s]
    }

    pub fn fully_symmetric(&self) -> bool {
        let n = self.n;
        let idx = |a: [usize; 4]| ((a[0] * n + a[1]) * n + a[2]) * n + a[3];
        (0..n.pow(4)).all(|flat| {
            let a = [flat / n.pow(3), (flat / n.pow(2)) % n, (flat / n) % n, flat % n];
            let mut s = a;
            s.sort_unstable();
            self.entries[flat] == self.entries[idx(s)]
        })
    }
}

pub fn theta_tensor(c: &Polynomial, n_x: usize, eps: &[Scalar]) -> Result<Theta> {
    let n_y = eps.len();
    if c.nvars != n_x + n_y {
        return Err(Error::ShapeMismatch("cubic must live on W1 ⊕ W2".into()));
    }
    for (e, _) in c.terms() {
        let dx: u32 = e[..n_x].iter().sum();
        let dy: u32 = e[n_x..].iter().sum();
        if dx != 2 || dy != 1 {
            return Err(Error::ShapeMismatch("cubic is not quadratic in x and linear in y".into()));
        }
    }
    let inv: Vec<Scalar> = eps.iter().map(Scalar::inv).collect::<Result<_>>()?;
    let h = polarize(c, 3);
    let n = n_x;
    let mut entries = Vec::with_capacity(n.pow(4));
    for i in 0..n {
        for j in 0..n {
            for r in 0..n {
                for s in 0..n {
                    let mut v = Scalar::zero();
                    for (k, e) in inv.iter().enumerate() {
                        v += &(e * &h.get(&[i, j, n_x + k])) * &h.get(&[r, s, n_x + k]);
                    }
                    entries.push(v);
                }
            }
        }
    }
    let mut th = Theta { n, entries, symmetric_in_i_r: false };
    th.symmetric_in_i_r = (0..n).all(|i| (0..n).all(|j| (0..n).all(|r| (0..n).all(|s| th.get(i, j, r, s) == th.get(r, j, i, s)))));
    Ok(th)
}

/// Associativity verdict by the symmetry of `Θ` in its first and third index.
pub fn associativity_by_theta(c: &Polynomial, n_x: usize, eps: &[Scalar]) -> Result<bool> {
    let th = theta_tensor(c, n_x, eps)?;
    if th.symmetric_in_i_r {
        assert!(th.fully_symmetric(), "Θ symmetric in i,r must be fully symmetric");
    }
    Ok(th.symmetric_in_i_r)
}

/// `(g₂, g₃)` of `a₀x⁴ + 4a₁x³y + 6a₂x²y² + 4a₃xy³ + a₄y⁴`.
pub fn binary_quartic_invariants(quartic: &Polynomial) -> Result<(Scalar, Scalar)> {
    if quartic.nvars != 2 || !quartic.is_homogeneous(4) {
        return Err(Error::ShapeMismatch("expected a binary quartic".into()));
    }
    let a0 = quartic.coeff(&[4, 0]);
    let a1 = &quartic.coeff(&[3, 1]) / &Scalar::from_int(4);
    let a2 = &quartic.coeff(&[2, 2]) / &Scalar::from_int(6);
    let a3 = &quartic.coeff(&[1, 3]) / &Scalar::from_int(4);
    let a4 = quartic.coeff(&[0, 4]);
    let g2 = &(&(&a0 * &a4) - &(&Scalar::from_int(4) * &(&a1 * &a3))) + &(&Scalar::from_int(3) * &(&a2 * &a2));
    let m = Matrix::from_rows(&[vec![a0, a1.clone(), a2.clone()], vec![a1, a2.clone(), a3.clone()], vec![a2, a3, a4]]);
    Ok((g2, m.det()))
}

pub fn phi_of_quartic(quartic: &Polynomial) -> Result<Scalar> {
    let (g2, g3) = binary_quartic_invariants(quartic)?;
    if g3.is_zero() {
        return Err(Error::ZeroG3);
    }
    Ok(&g2.pow(3) / &g3.pow(2))
}

/// `φ(t) = g₂(d_t)³ / g₃(d_t)²` computed from the reconstructed family member.
pub fn phi_invariant(eps: &Scalar, t: &Scalar) -> Result<Scalar> {
    let member = degree4_family(eps, t)?;
    phi_of_quartic(&restrict_to_first_two(&member.d))
}

fn restrict_to_first_two(p: &Polynomial) -> Polynomial {
    let mut out = Polynomial::zero(2);
    for (e, c) in p.terms() {
        if e[2..].iter().all(|&k| k == 0) {
            out.add_term(vec![e[0], e[1]], c.clone());
        }
    }
    out
}

/// `ε² t⁻⁴ (4 + ε⁻¹t²)³`.
pub fn phi_closed_form(eps: &Scalar, t: &Scalar) -> Result<Scalar> {
    if t.is_zero() {
        return Err(Error::ZeroG3);
    }
    let e_inv = eps.inv()?;
    let base = &Scalar::from_int(4) + &(&e_inv * &(t * t));
    Ok(&(&(eps * eps) * &t.pow(4).inv()?) * &base.pow(3))
}

/// Invariant of the quartic part under `f ↦ t·f∘g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuarticInvariant {
    /// The quartic part does not factor through a plane.
    NotBinary(usize),
    G3Zero,
    Phi(Scalar),
}

pub fn quartic_invariant(f: &Polynomial) -> QuarticInvariant {
    let d = f.homogeneous_part(4);
    let n = f.nvars;
    let derivs: Vec<Polynomial> = (0..n).map(|i| d.derivative(i)).collect();
    let mut monos: Vec<Vec<u32>> = derivs.iter().flat_map(|p| p.terms().map(|(e, _)| e.clone())).collect();
    monos.sort();
    monos.dedup();
    let mut m = Matrix::zeros(monos.len(), n);
    for (r, e) in monos.iter().enumerate() {
        for (i, p) in derivs.iter().enumerate() {
            m[(r, i)] = p.coeff(e);
        }
    }
    let kernel = Subspace::span(n, &m.nullspace());
    let ess = n - kernel.dim();
    if ess != 2 {
        return QuarticInvariant::NotBinary(ess);
    }
    let comp = kernel.echelon_complement();
    let subs: Vec<Polynomial> = (0..n).map(|i| Polynomial::linear(&[comp[0][i].clone(), comp[1][i].clone()])).collect();
    match phi_of_quartic(&d.compose(&subs)) {
        Ok(phi) => QuarticInvariant::Phi(phi),
        Err(_) => QuarticInvariant::G3Zero,
    }
}

/// Outcome of [`equivalent_nilpolys`]; on success `g∘map = t·f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent { t: Scalar, map: Matrix },
    Distinct(String),
    Unknown,
}

fn quadratic_type(f: &Polynomial) -> Option<(usize, usize)> {
    if !f.is_real() {
        return None;
    }
    let s = signature(&SymmetricForm::new(gram_matrix(&f.homogeneous_part(2))).ok()?).ok()?;
    Some((s.p.max(s.q), s.p.min(s.q)))
}

/// Scalar `t` with `g∘h = t·f`, if one exists.
pub fn equivalence_scale(f: &Polynomial, g: &Polynomial, h: &Matrix) -> Option<Scalar> {
    let gh = g.compose_linear(h);
    let (e, c) = f.terms().next()?;
    let t = &gh.coeff(e) / c;
    (gh == f.scale(&t) && !t.is_zero()).then_some(t)
}

pub fn equivalent_nilpolys(f: &Polynomial, g: &Polynomial, budget: usize) -> Equivalence {
    if f.nvars != g.nvars {
        return Equivalence::Distinct("variable count".into());
    }
    if f.degree() != g.degree() {
        return Equivalence::Distinct("degree".into());
    }
    if f.field() == FieldTag::Rational && g.field() == FieldTag::Rational && quadratic_type(f) != quadratic_type(g) {
        return Equivalence::Distinct("quadratic signature".into());
    }
    let (qf, qg) = (quartic_invariant(f), quartic_invariant(g));
    if qf != qg {
        return Equivalence::Distinct("quartic invariant".into());
    }
    let (af, ag) = match (extended_algebra(f), extended_algebra(g)) {
        (Ok(a), Ok(b)) => (a, b),
        _ => return Equivalence::Unknown,
    };
    match (fingerprint(&af), fingerprint(&ag)) {
        (Ok(x), Ok(y)) => {
            if let Some(d) = fingerprint_difference(&x, &y) {
                return Equivalence::Distinct(format!("algebra {d}"));
            }
        }
        _ => return Equivalence::Unknown,
    }
    let n = f.nvars;
    let block = |phi: &Matrix| -> Option<Matrix> {
        if (0..n).any(|j| !phi[(n, j)].is_zero()) {
            return None;
        }
        let mut h = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                h[(i, j)] = phi[(i, j)].clone();
            }
        }
        Some(h)
    };
    let accept = |phi: &Matrix| block(phi).and_then(|h| equivalence_scale(f, g, &h)).is_some();
    match find_isomorphism_filtered(&af, &ag, budget, &accept) {
        IsoOutcome::Iso(phi) => {
            let h = block(&phi).expect("accepted map is block diagonal");
            let t = equivalence_scale(f, g, &h).expect("accepted map is an equivalence");
            Equivalence::Equivalent { t, map: h }
        }
        IsoOutcome::Distinct(d) => Equivalence::Distinct(format!("algebra {d}")),
        IsoOutcome::Unknown => Equivalence::Unknown,
    }
}

/// Linear forms `λ_k` with `f = Σ_k λ_k ∂f/∂x_k`; row `k` holds the coefficients of `λ_k`.
pub fn euler_linear_forms(f: &Polynomial) -> Option<Matrix> {
    let n = f.nvars;
    let gens: Vec<Polynomial> = (0..n)
        .flat_map(|k| {
            let dk = f.derivative(k);
            (0..n).map(move |j| Polynomial::var(n, j).mul(&dk))
        })
        .collect();
    let mut monos: Vec<Vec<u32>> = gens.iter().chain(std::iter::once(f)).flat_map(|p| p.terms().map(|(e, _)| e.clone())).collect();
    monos.sort();
    monos.dedup();
    let mut m = Matrix::zeros(monos.len(), n * n);
    for (r, e) in monos.iter().enumerate() {
        for (c, p) in gens.iter().enumerate() {
            m[(r, c)] = p.coeff(e);
        }
    }
    let rhs: Vector = monos.iter().map(|e| f.coeff(e)).collect();
    let sol = m.solve(&rhs)?;
    let mut l = Matrix::zeros(n, n);
    for k in 0..n {
        for j in 0..n {
            l[(k, j)] = sol[k * n + j].clone();
        }
    }
    Some(l)
}

/// `Σ_k λ_k ∂f/∂x_k` for the matrix returned by [`euler_linear_forms`].
pub fn apply_euler_forms(f: &Polynomial, l: &Matrix) -> Polynomial {
    let n = f.nvars;
    let mut s = Polynomial::zero(n);
    for k in 0..n {
        s = s.add(&Polynomial::linear(l.row(k)).mul(&f.derivative(k)));
    }
    s
}

/// Nil-polynomial of a graded pointed algebra in the homogeneous coordinates of
/// `ker ω`, with the degree of every variable.
pub fn graded_nil_polynomial(g: &GradedAlgebra) -> Result<(NilPolynomial, Vec<usize>)> {
    let top = g.top_degree();
    let top_piece = g.piece(top);
    if top_piece.len() != 1 {
        return Err(Error::AnnihilatorNotOneDim(top_piece.len()));
    }
    let n = g.algebra.dim;
    let p = Pointing::new(g.algebra.clone(), unit_vec(n, top_piece[0]))?;
    let idx: Vec<usize> = (0..n).filter(|&i| i != top_piece[0]).collect();
    let basis: Vec<Vector> = idx.iter().map(|&i| unit_vec(n, i)).collect();
    let f = nil_polynomial(&p, Some(&basis))?;
    Ok((f, idx.iter().map(|&i| g.degree[i]).collect()))
}

/// `f∘θ_s` as a polynomial in the original variables and a trailing symbol `s`,
/// where `θ_s` scales the degree-`j` coordinates by `s^j`.
pub fn theta_scaled(f: &Polynomial, degrees: &[usize]) -> Polynomial {
    let n = f.nvars;
    let s = Polynomial::var(n + 1, n);
    let subs: Vec<Polynomial> = (0..n).map(|i| Polynomial::var(n + 1, i).mul(&s.pow(degrees[i] as u32))).collect();
    f.compose(&subs)
}

/// Checks `f∘θ_s = s^d f` with `s` symbolic.
pub fn theta_scaling_holds(f: &Polynomial, degrees: &[usize], d: usize) -> bool {
    let n = f.nvars;
    let lifted = f.embed(n + 1, &(0..n).collect::<Vec<_>>());
    theta_scaled(f, degrees) == lifted.mul(&Polynomial::var(n + 1, n).pow(d as u32))
}

/// Cyclic nil-polynomial with `n − 1` variables (row `n` of the cyclic table).
pub fn cyclic_nil_polynomial(n: usize) -> Result<NilPolynomial> {
    if n == 0 {
        return Err(Error::RangeError("row index must be positive".into()));
    }
    let g = cyclic_algebra(FieldTag::Rational, n);
    let p = Pointing::canonical(g.algebra)?;
    nil_polynomial(&p, None)
}

/// Divided-power display of the cyclic nil-polynomial of degree `n`.
pub fn table1_row(n: usize) -> Result<String> {
    Ok(cyclic_nil_polynomial(n)?.poly.to_divided())
}

#[derive(Serialize)]
pub struct PartsJson {
    pub degree: u32,
    pub display: String,
    pub parts: Vec<serde_json::Value>,
}

pub fn parts_json(f: &NilPolynomial) -> PartsJson {
    PartsJson {
        degree: f.degree,
        display: f.poly.to_divided(),
        parts: (2..=f.degree)
            .map(|k| serde_json::json!({"k": k, "display": f.part(k).to_divided(), "poly": f.part(k).to_json()}))
            .collect(),
    }
}
