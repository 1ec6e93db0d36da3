//! Pointings, the form `b_π` on the unital extension, signatures and adapted decompositions.
//!
//! Vectors of the unital extension `N⁰ = F·𝟙 ⊕ N` use coordinates
//! `(s, x₁, …, x_n)` with the unit coefficient first.

use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::linalg::{dot, is_zero_vec, unit_vec, vec_add, vec_scale, zero_vec, Matrix, Subspace, Vector};
use crate::scalar::{FieldTag, Scalar};

/// Nilpotent algebra with one-dimensional annihilator and a linear form `ω` nonzero on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pointing {
    pub algebra: Algebra,
    pub omega: Vector,
}

impl Pointing {
    pub fn new(algebra: Algebra, omega: Vector) -> Result<Self> {
        if omega.len() != algebra.dim {
            return Err(Error::DimensionMismatch("pointing length".into()));
        }
        algebra.nil_index()?;
        let ann = algebra.annihilator();
        if ann.dim() != 1 {
            return Err(Error::AnnihilatorNotOneDim(ann.dim()));
        }
        if dot(&omega, &ann.basis()[0]).is_zero() {
            return Err(Error::BadComplement("pointing vanishes on the annihilator".into()));
        }
        Ok(Pointing { algebra, omega })
    }

    /// Pointing that reads the pivot coordinate of the annihilator.
    pub fn canonical(algebra: Algebra) -> Result<Self> {
        let ann = algebra.annihilator();
        if ann.dim() != 1 {
            return Err(Error::AnnihilatorNotOneDim(ann.dim()));
        }
        let omega = unit_vec(algebra.dim, ann.pivots()[0]);
        Pointing::new(algebra, omega)
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim
    }

    pub fn field(&self) -> FieldTag {
        self.algebra.field
    }

    /// Annihilator generator `a` normalized by `ω(a) = 1`.
    pub fn ann_generator(&self) -> Vector {
        let ann = self.algebra.annihilator();
        let g = &ann.basis()[0];
        vec_scale(&dot(&self.omega, g).inv().expect("pointing is nonzero on Ann"), g)
    }

    /// Echelon complement of the annihilator inside `N`.
    pub fn canonical_complement(&self) -> Vec<Vector> {
        self.algebra.annihilator().echelon_complement()
    }

    /// Basis of `ker ω`.
    pub fn kernel_basis(&self) -> Vec<Vector> {
        let m = Matrix::from_rows(&[self.omega.clone()]);
        Subspace::span(self.dim(), &m.nullspace()).basis().to_vec()
    }

    pub fn scaled(&self, c: &Scalar) -> Pointing {
        Pointing { algebra: self.algebra.clone(), omega: vec_scale(c, &self.omega) }
    }

    /// Transport along the change of basis whose columns are the new basis vectors.
    pub fn change_basis(&self, s: &Matrix) -> Result<Pointing> {
        let algebra = self.algebra.change_basis(s)?;
        let omega = s.transpose().mul_vec(&self.omega);
        Pointing::new(algebra, omega)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = self.algebra.to_json();
        v["pointing"] = serde_json::Value::Array(self.omega.iter().map(|s| s.to_json(self.field())).collect());
        v
    }

    /// Parse an algebra file; a missing `pointing` entry selects [`Pointing::canonical`].
    pub fn from_json(v: &serde_json::Value) -> Result<Pointing> {
        let algebra = Algebra::from_json(v)?;
        match v.get("pointing").and_then(serde_json::Value::as_array) {
            Some(arr) => {
                let omega = arr.iter().map(Scalar::from_json).collect::<Result<Vector>>()?;
                Pointing::new(algebra, omega)
            }
            None => Pointing::canonical(algebra),
        }
    }
}

/// Product in the unital extension.
pub fn unital_mul(a: &Algebra, u: &[Scalar], v: &[Scalar]) -> Vector {
    let (s, x) = (&u[0], &u[1..]);
    let (t, y) = (&v[0], &v[1..]);
    let mut out = vec![s * t];
    let xy = a.mul(x, y);
    let body = vec_add(&vec_add(&vec_scale(s, y), &vec_scale(t, x)), &xy);
    out.extend(body);
    out
}

/// Matrix of `L(x)` on `N⁰` in unital coordinates, for `x ∈ N`.
pub fn unital_left_mul(a: &Algebra, x: &[Scalar]) -> Matrix {
    let n = a.dim;
    let mut ux = vec![Scalar::zero()];
    ux.extend(x.iter().cloned());
    let cols: Vec<Vector> = (0..=n).map(|j| unital_mul(a, &ux, &unit_vec(n + 1, j))).collect();
    Matrix::from_cols(&cols, n + 1)
}

/// Symmetric matrix over exact scalars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricForm {
    pub matrix: Matrix,
}

impl SymmetricForm {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if !matrix.is_square() || matrix.transpose() != matrix {
            return Err(Error::ShapeMismatch("form matrix is not symmetric".into()));
        }
        Ok(SymmetricForm { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows
    }

    pub fn eval(&self, u: &[Scalar], v: &[Scalar]) -> Scalar {
        dot(u, &self.matrix.mul_vec(v))
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.rank() == self.dim()
    }

    /// `Gᵀ F G`.
    pub fn congruent(&self, g: &Matrix) -> SymmetricForm {
        SymmetricForm { matrix: g.transpose().mul(&self.matrix).mul(g) }
    }
}

/// Sylvester counts of a real symmetric form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Signature {
    pub p: usize,
    pub q: usize,
    pub z: usize,
}

impl Signature {
    pub fn new(p: usize, q: usize, z: usize) -> Self {
        Signature { p, q, z }
    }

    pub fn pq(&self) -> (usize, usize) {
        (self.p, self.q)
    }
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.p, self.q, self.z)
    }
}

/// Signature by exact symmetric congruence diagonalization.
pub fn signature(form: &SymmetricForm) -> Result<Signature> {
    let m = &form.matrix;
    if !m.is_real() {
        return Err(Error::ComplexFieldUnsupported);
    }
    let n = m.rows;
    let mut a = m.clone();
    let (mut p, mut q) = (0, 0);
    let swap = |a: &mut Matrix, i: usize, j: usize| {
        if i == j {
            return;
        }
        for c in 0..n {
            let t = a[(i, c)].clone();
            a[(i, c)] = a[(j, c)].clone();
            a[(j, c)] = t;
        }
        for r in 0..n {
            let t = a[(r, i)].clone();
            a[(r, i)] = a[(r, j)].clone();
            a[(r, j)] = t;
        }
    };
    for k in 0..n {
        let piv = (k..n).find(|&i| !a[(i, i)].is_zero());
        let piv = match piv {
            Some(i) => i,
            None => {
                let off = (k..n).flat_map(|i| (k..n).map(move |j| (i, j))).find(|&(i, j)| i != j && !a[(i, j)].is_zero());
                let Some((i, j)) = off else { break };
                // row_i += row_j, col_i += col_j
                for c in 0..n {
                    let v = &a[(i, c)] + &a[(j, c)];
                    a[(i, c)] = v;
                }
                for r in 0..n {
                    let v = &a[(r, i)] + &a[(r, j)];
                    a[(r, i)] = v;
                }
                i
            }
        };
        swap(&mut a, k, piv);
        let d = a[(k, k)].clone();
        match d.real_sign() {
            1 => p += 1,
            _ => q += 1,
        }
        let dinv = d.inv()?;
        for r in k + 1..n {
            if a[(r, k)].is_zero() {
                continue;
            }
            let f = &a[(r, k)] * &dinv;
            for c in k..n {
                let v = &a[(r, c)] - &(&f * &a[(k, c)]);
                a[(r, c)] = v;
            }
            for rr in k..n {
                let v = &a[(rr, r)] - &(&f * &a[(rr, k)]);
                a[(rr, r)] = v;
            }
        }
    }
    Ok(Signature { p, q, z: n - p - q })
}

/// Projection data for `b_π`: the complement basis and the annihilator generator.
#[derive(Clone, Debug)]
pub struct Projection {
    pub complement: Vec<Vector>,
    pub ann: Vector,
    decompose: Matrix,
}

impl Projection {
    pub fn new(p: &Pointing, complement: &[Vector]) -> Result<Self> {
        let n = p.dim();
        if complement.len() + 1 != n || complement.iter().any(|v| v.len() != n) {
            return Err(Error::BadComplement(format!("expected {} vectors of length {n}", n.saturating_sub(1))));
        }
        let ann = p.ann_generator();
        let mut cols = complement.to_vec();
        cols.push(ann.clone());
        let decompose = Matrix::from_cols(&cols, n)
            .inverse()
            .map_err(|_| Error::BadComplement("vectors do not complement the annihilator".into()))?;
        Ok(Projection { complement: complement.to_vec(), ann, decompose })
    }

    pub fn canonical(p: &Pointing) -> Self {
        Projection::new(p, &p.canonical_complement()).expect("echelon complement is a complement")
    }

    /// Scalar `ω(π(x))` for `x ∈ N`.
    pub fn pi(&self, x: &[Scalar]) -> Scalar {
        let c = self.decompose.mul_vec(x);
        c[c.len() - 1].clone()
    }

    /// Complement coordinates of `x − π(x)`.
    pub fn complement_coords(&self, x: &[Scalar]) -> Vector {
        let mut c = self.decompose.mul_vec(x);
        c.pop();
        c
    }

    /// Columns: `𝟙`, complement basis, annihilator generator, in unital coordinates.
    pub fn adapted_basis(&self) -> Matrix {
        let n = self.ann.len();
        let mut cols = vec![unit_vec(n + 1, 0)];
        for v in self.complement.iter().chain(std::iter::once(&self.ann)) {
            let mut u = vec![Scalar::zero()];
            u.extend(v.iter().cloned());
            cols.push(u);
        }
        Matrix::from_cols(&cols, n + 1)
    }

    /// Linear form `ℓ(s𝟙 + x) = ω(π(x))` on `N⁰`.
    pub fn functional(&self, u: &[Scalar]) -> Scalar {
        self.pi(&u[1..])
    }
}

/// `b_π(u,v) = ω(π(uv))` in unital coordinates.
pub fn b_pi_standard(p: &Pointing, proj: &Projection) -> SymmetricForm {
    let n = p.dim();
    let mut m = Matrix::zeros(n + 1, n + 1);
    for i in 0..=n {
        for j in i..=n {
            let prod = unital_mul(&p.algebra, &unit_vec(n + 1, i), &unit_vec(n + 1, j));
            let v = proj.functional(&prod);
            m[(i, j)] = v.clone();
            m[(j, i)] = v;
        }
    }
    SymmetricForm { matrix: m }
}

/// `b_π` in the adapted basis `(𝟙; complement; annihilator generator)`; nondegeneracy is verified.
pub fn b_pi(p: &Pointing, complement: &[Vector]) -> Result<SymmetricForm> {
    let proj = Projection::new(p, complement)?;
    let std = b_pi_standard(p, &proj);
    let form = std.congruent(&proj.adapted_basis());
    if !form.is_nondegenerate() {
        return Err(Error::BadComplement("b_pi is degenerate".into()));
    }
    Ok(form)
}

pub fn signature_of_pana(p: &Pointing) -> Result<Signature> {
    if p.field() != FieldTag::Rational {
        return Err(Error::ComplexFieldUnsupported);
    }
    signature(&b_pi(p, &p.canonical_complement())?)
}

/// Splitting `N⁰ = F𝟙 ⊕ complement ⊕ Ann` in unital coordinates.
#[derive(Clone, Debug)]
pub struct AdaptedDecomposition {
    pub e1: Subspace,
    pub e2: Subspace,
    pub e3: Subspace,
}

impl AdaptedDecomposition {
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.e1.dim(), self.e2.dim(), self.e3.dim())
    }
}

/// Returns the decomposition after checking `𝔼₁, 𝔼₃` isotropic and orthogonal to `𝔼₂`.
pub fn adapted_decomposition(p: &Pointing, complement: &[Vector]) -> Result<AdaptedDecomposition> {
    let proj = Projection::new(p, complement)?;
    let b = b_pi_standard(p, &proj);
    let n = p.dim();
    let lift = |v: &Vector| -> Vector {
        let mut u = vec![Scalar::zero()];
        u.extend(v.iter().cloned());
        u
    };
    let one = unit_vec(n + 1, 0);
    let ann = lift(&proj.ann);
    let comp: Vec<Vector> = proj.complement.iter().map(lift).collect();
    let iso = |v: &Vector| b.eval(v, v).is_zero();
    if !iso(&one) || !iso(&ann) {
        return Err(Error::BadComplement("outer pieces are not isotropic".into()));
    }
    for c in &comp {
        if !b.eval(&one, c).is_zero() || !b.eval(&ann, c).is_zero() {
            return Err(Error::BadComplement("outer pieces are not orthogonal to the complement".into()));
        }
    }
    Ok(AdaptedDecomposition {
        e1: Subspace::span(n + 1, &[one]),
        e2: Subspace::span(n + 1, &comp),
        e3: Subspace::span(n + 1, &[ann]),
    })
}

/// Congruence `Ψ` between the canonical forms of two pointed algebras.
#[derive(Clone, Debug)]
pub struct IsometryWitness {
    /// Matrix on unital coordinates, `N₁⁰ → N₂⁰`.
    pub map: Matrix,
    /// `b₂(Ψu, Ψv) = scale · b₁(u, v)`.
    pub scale: Scalar,
    /// Unit `u` with `Ψ = L(u) ∘ φ⁰`; equal to `𝟙` when `φ` already matches the projections.
    pub unit: Vector,
}

/// `φ⁰(s𝟙 + x) = s𝟙 + φ(x)`.
pub fn unital_extension_map(phi: &Matrix) -> Matrix {
    let n = phi.rows;
    let mut m = Matrix::zeros(n + 1, n + 1);
    m[(0, 0)] = Scalar::one();
    for i in 0..n {
        for j in 0..n {
            m[(i + 1, j + 1)] = phi[(i, j)].clone();
        }
    }
    m
}

/// Power series square root of a unit `1 + n` in `N⁰`.
pub fn unital_sqrt(a: &Algebra, v: &[Scalar]) -> Result<Vector> {
    if !v[0].is_one() {
        return Err(Error::RangeError("square root needs unit coefficient 1".into()));
    }
    let dim = a.dim + 1;
    let mut nil = v.to_vec();
    nil[0] = Scalar::zero();
    let mut out = unit_vec(dim, 0);
    let mut power = unit_vec(dim, 0);
    let mut coeff = Scalar::one();
    let half = Scalar::from_ratio(1, 2);
    for k in 1..=dim {
        power = unital_mul(a, &power, &nil);
        if is_zero_vec(&power) {
            break;
        }
        // binom(1/2, k) = binom(1/2, k-1) · (1/2 − k + 1)/k
        coeff = &coeff * &(&(&half - &Scalar::from_int(k as i64 - 1)) / &Scalar::from_int(k as i64));
        out = vec_add(&out, &vec_scale(&coeff, &power));
    }
    Ok(out)
}

/// Builds and verifies `Ψ` with `b₂(Ψu,Ψv) = c·b₁(u,v)` and `Ψ L₁(x) Ψ⁻¹ = L₂(φx)`,
/// both forms taken with the canonical complements.
pub fn isometry_from_isomorphism(p1: &Pointing, p2: &Pointing, phi: &Matrix) -> Result<IsometryWitness> {
    if !p1.algebra.is_isomorphism_to(&p2.algebra, phi) {
        return Err(Error::NotAnIsomorphism("map fails multiplicativity or bijectivity".into()));
    }
    let n = p1.dim();
    let proj1 = Projection::canonical(p1);
    let proj2 = Projection::canonical(p2);
    let phi0 = unital_extension_map(phi);
    let phi0_inv = phi0.inverse()?;
    let mut a2 = vec![Scalar::zero()];
    a2.extend(proj2.ann.iter().cloned());
    let pulled = proj1.functional(&phi0_inv.mul_vec(&a2));
    let scale = &proj2.functional(&a2) / &pulled;
    // ℓ₂(v·w) = c·ℓ₁(φ⁰⁻¹ w) for every basis vector w of N₂⁰
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for w in 0..=n {
        let ew = unit_vec(n + 1, w);
        rows.push((0..=n).map(|k| proj2.functional(&unital_mul(&p2.algebra, &unit_vec(n + 1, k), &ew))).collect());
        rhs.push(&scale * &proj1.functional(&phi0_inv.mul_vec(&ew)));
    }
    let v = Matrix::from_rows(&rows).solve(&rhs).ok_or(Error::Singular)?;
    let unit = unital_sqrt(&p2.algebra, &v)?;
    let mut lu = Matrix::zeros(n + 1, n + 1);
    for j in 0..=n {
        let col = unital_mul(&p2.algebra, &unit, &unit_vec(n + 1, j));
        for i in 0..=n {
            lu[(i, j)] = col[i].clone();
        }
    }
    let map = lu.mul(&phi0);
    let b1 = b_pi_standard(p1, &proj1);
    let b2 = b_pi_standard(p2, &proj2);
    if b2.congruent(&map).matrix != b1.matrix.scale(&scale) {
        return Err(Error::NotAnIsomorphism("congruence identity fails".into()));
    }
    let map_inv = map.inverse()?;
    for i in 0..n {
        let x = unit_vec(n, i);
        let l1 = unital_left_mul(&p1.algebra, &x);
        let l2 = unital_left_mul(&p2.algebra, &phi.mul_vec(&x));
        if map.mul(&l1).mul(&map_inv) != l2 {
            return Err(Error::NotAnIsomorphism("conjugation identity fails".into()));
        }
    }
    if p1.field() == FieldTag::Rational && p2.field() == FieldTag::Rational {
        let s1 = signature_of_pana(p1)?;
        let s2 = signature_of_pana(p2)?;
        let matches = if scale.real_sign() > 0 { s1 == s2 } else { s1.p == s2.q && s1.q == s2.p };
        if !matches {
            return Err(Error::NotAnIsomorphism("signatures disagree".into()));
        }
    }
    Ok(IsometryWitness { map, scale, unit })
}

/// Random-like complement: echelon complement vectors shifted by multiples of the annihilator.
pub fn shifted_complement(p: &Pointing, shifts: &[Scalar]) -> Vec<Vector> {
    let ann = p.ann_generator();
    p.canonical_complement()
        .iter()
        .zip(shifts.iter().chain(std::iter::repeat(&Scalar::zero())))
        .map(|(c, s)| vec_add(c, &vec_scale(s, &ann)))
        .collect()
}

/// Complements mixing complement vectors among themselves as well; `mix` is an invertible square matrix.
pub fn mixed_complement(p: &Pointing, mix: &Matrix, shifts: &[Scalar]) -> Vec<Vector> {
    let base = shifted_complement(p, shifts);
    (0..base.len())
        .map(|j| {
            let mut v = zero_vec(p.dim());
            for (i, b) in base.iter().enumerate() {
                v = vec_add(&v, &vec_scale(&mix[(i, j)], b));
            }
            v
        })
        .collect()
}

/// Complex symmetric forms only have a rank.
pub fn complex_rank(form: &SymmetricForm) -> usize {
    form.rank()
}
