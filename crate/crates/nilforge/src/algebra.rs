//! Commutative associative algebras given by structure constants.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{is_zero_vec, unit_vec, vec_add, vec_scale, zero_vec, Matrix, Subspace, Vector};
use crate::scalar::{FieldTag, Scalar};

/// Finite-dimensional algebra with product `e_i e_j = Σ_k c[i][j][k] e_k`.
#[derive(Clone, PartialEq, Eq)]
pub struct Algebra {
    pub field: FieldTag,
    pub dim: usize,
    pub labels: Vec<String>,
    table: Vec<Vector>,
}

/// First failing identity found by [`Algebra::validate`]. Indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Commutativity { i: usize, j: usize, k: usize },
    Associativity { i: usize, j: usize, k: usize, m: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Commutativity { i, j, k } => write!(f, "commutativity fails at ({i},{j},{k})"),
            Violation::Associativity { i, j, k, m } => {
                write!(f, "associativity fails at ({i},{j},{k}) in coordinate {m}")
            }
        }
    }
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Algebra(dim={}, {})", self.dim, self.to_json())
    }
}

impl Algebra {
    /// Algebra with all products zero.
    pub fn zero_product(field: FieldTag, dim: usize) -> Self {
        Algebra {
            field,
            dim,
            labels: (1..=dim).map(|i| format!("e{i}")).collect(),
            table: vec![zero_vec(dim); dim * dim],
        }
    }

    /// Build from a full table `products[i][j]` (row i, column j).
    pub fn from_table(field: FieldTag, products: Vec<Vec<Vector>>) -> Result<Self> {
        let dim = products.len();
        let mut a = Algebra::zero_product(field, dim);
        for (i, row) in products.into_iter().enumerate() {
            if row.len() != dim {
                return Err(Error::DimensionMismatch("product table row".into()));
            }
            for (j, v) in row.into_iter().enumerate() {
                if v.len() != dim {
                    return Err(Error::DimensionMismatch("product vector".into()));
                }
                a.table[i * dim + j] = v;
            }
        }
        Ok(a)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.dim);
        self.labels = labels;
        self
    }

    /// Set `e_i e_j = e_j e_i = v`.
    pub fn set_product(&mut self, i: usize, j: usize, v: Vector) {
        self.table[i * self.dim + j] = v.clone();
        self.table[j * self.dim + i] = v;
    }

    /// Set only the ordered entry `e_i e_j`.
    pub fn set_product_ordered(&mut self, i: usize, j: usize, v: Vector) {
        self.table[i * self.dim + j] = v;
    }

    pub fn product(&self, i: usize, j: usize) -> &Vector {
        &self.table[i * self.dim + j]
    }

    /// Structure constant `c[i][j][k]` (0-based).
    pub fn c(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.table[i * self.dim + j][k]
    }

    pub fn validate(&self) -> std::result::Result<(), Violation> {
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.c(i, j, k) != self.c(j, i, k) {
                        return Err(Violation::Commutativity { i: i + 1, j: j + 1, k: k + 1 });
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let ij = self.product(i, j).clone();
                for k in 0..n {
                    let left = self.mul_vec_basis(&ij, k);
                    let jk = self.product(j, k).clone();
                    let right = self.mul_basis_vec(i, &jk);
                    if let Some(m) = (0..n).find(|&m| left[m] != right[m]) {
                        return Err(Violation::Associativity { i: i + 1, j: j + 1, k: k + 1, m: m + 1 });
                    }
                }
            }
        }
        Ok(())
    }

    fn mul_vec_basis(&self, x: &[Scalar], k: usize) -> Vector {
        let mut out = zero_vec(self.dim);
        for (l, xl) in x.iter().enumerate() {
            if !xl.is_zero() {
                out = vec_add(&out, &vec_scale(xl, self.product(l, k)));
            }
        }
        out
    }

    fn mul_basis_vec(&self, i: usize, y: &[Scalar]) -> Vector {
        let mut out = zero_vec(self.dim);
        for (l, yl) in y.iter().enumerate() {
            if !yl.is_zero() {
                out = vec_add(&out, &vec_scale(yl, self.product(i, l)));
            }
        }
        out
    }

    /// Product of coordinate vectors, with a length check.
    pub fn multiply(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vector> {
        if x.len() != self.dim || y.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "vectors of length {} and {} in an algebra of dimension {}",
                x.len(),
                y.len(),
                self.dim
            )));
        }
        Ok(self.mul(x, y))
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let n = self.dim;
        let mut out = zero_vec(n);
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                let c = &x[i] * &y[j];
                for (k, p) in self.product(i, j).iter().enumerate() {
                    if !p.is_zero() {
                        out[k] += &c * p;
                    }
                }
            }
        }
        out
    }

    /// Matrix of left multiplication by `x` (columns are images of basis vectors).
    pub fn left_mul_matrix(&self, x: &[Scalar]) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim).map(|j| self.mul_vec_basis(x, j)).collect();
        Matrix::from_cols(&cols, self.dim)
    }

    /// Span of all products `u v` with `u ∈ U`, `v ∈ V`.
    pub fn product_space(&self, u: &Subspace, v: &Subspace) -> Subspace {
        let mut vecs = Vec::new();
        for a in u.basis() {
            for b in v.basis() {
                let p = self.mul(a, b);
                if !is_zero_vec(&p) {
                    vecs.push(p);
                }
            }
        }
        Subspace::span(self.dim, &vecs)
    }

    /// `N^k`, with `N^1 = N` and `N^{k+1} = ⟨N N^k⟩`.
    pub fn power_subspace(&self, k: usize) -> Subspace {
        assert!(k >= 1, "power index starts at 1");
        let full = Subspace::full(self.dim);
        let mut cur = full.clone();
        for _ in 1..k {
            cur = self.product_space(&full, &cur);
            if cur.dim() == 0 {
                break;
            }
        }
        cur
    }

    /// `[N^1, N^2, …]` up to and including the first zero power, or until it stabilizes.
    pub fn power_chain(&self) -> Vec<Subspace> {
        let full = Subspace::full(self.dim);
        let mut chain = vec![full.clone()];
        loop {
            let last = chain.last().unwrap();
            if last.dim() == 0 {
                break;
            }
            let next = self.product_space(&full, last);
            let stalled = next.dim() == last.dim();
            chain.push(next);
            if stalled {
                break;
            }
        }
        chain
    }

    pub fn nil_index(&self) -> Result<usize> {
        let chain = self.power_chain();
        let last = chain.last().unwrap();
        if last.dim() != 0 {
            return Err(Error::NotNilpotent);
        }
        Ok(chain.len() - 1)
    }

    pub fn is_nilpotent(&self) -> bool {
        self.nil_index().is_ok()
    }

    pub fn annihilator(&self) -> Subspace {
        let n = self.dim;
        // x ↦ (x e_j)_k for all j,k, stacked
        let mut rows = Vec::with_capacity(n * n);
        for j in 0..n {
            for k in 0..n {
                rows.push((0..n).map(|i| self.c(i, j, k).clone()).collect::<Vector>());
            }
        }
        if n == 0 {
            return Subspace::zero(0);
        }
        Subspace::span(n, &Matrix::from_rows(&rows).nullspace())
    }

    pub fn is_ideal(&self, ideal: &Subspace) -> bool {
        let full = Subspace::full(self.dim);
        ideal.contains_subspace(&self.product_space(ideal, &full))
    }

    /// `A/I`, presented on the echelon complement of `I`.
    pub fn quotient(&self, ideal: &Subspace) -> Result<Algebra> {
        if !self.is_ideal(ideal) {
            return Err(Error::NotAnIdeal);
        }
        let keep: Vec<usize> = (0..self.dim).filter(|c| !ideal.pivots().contains(c)).collect();
        let m = keep.len();
        let reduce = |v: &Vector| -> Vector {
            let mut r = v.clone();
            for (b, &p) in ideal.basis().iter().zip(ideal.pivots()) {
                if !r[p].is_zero() {
                    let f = r[p].clone();
                    r = crate::linalg::vec_sub(&r, &vec_scale(&f, b));
                }
            }
            keep.iter().map(|&c| r[c].clone()).collect()
        };
        let mut q = Algebra::zero_product(self.field, m);
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                q.set_product_ordered(a, b, reduce(self.product(i, j)));
            }
        }
        q.labels = keep.iter().map(|&c| self.labels[c].clone()).collect();
        Ok(q)
    }

    /// Direct product `A ⊕ B` (componentwise multiplication).
    pub fn direct_sum(&self, o: &Algebra) -> Algebra {
        let n = self.dim + o.dim;
        let field = if self.field == o.field { self.field } else { FieldTag::GaussianRational };
        let mut s = Algebra::zero_product(field, n);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let mut v = self.product(i, j).clone();
                v.extend(zero_vec(o.dim));
                s.set_product_ordered(i, j, v);
            }
        }
        for i in 0..o.dim {
            for j in 0..o.dim {
                let mut v = zero_vec(self.dim);
                v.extend(o.product(i, j).iter().cloned());
                s.set_product_ordered(self.dim + i, self.dim + j, v);
            }
        }
        s.labels = self
            .labels
            .iter()
            .map(|l| format!("{l}'"))
            .chain(o.labels.iter().map(|l| format!("{l}''")))
            .collect();
        s
    }

    /// Structure constants in the basis given by the columns of `s`.
    pub fn change_basis(&self, s: &Matrix) -> Result<Algebra> {
        let inv = s.inverse()?;
        let n = self.dim;
        let cols: Vec<Vector> = (0..n).map(|j| s.col(j)).collect();
        let mut out = Algebra::zero_product(self.field, n);
        for a in 0..n {
            for b in 0..n {
                let p = self.mul(&cols[a], &cols[b]);
                out.set_product_ordered(a, b, inv.mul_vec(&p));
            }
        }
        Ok(out)
    }

    /// Checks `φ(e_i e_j) = φ(e_i) φ(e_j)` for a map given by its columns.
    pub fn is_homomorphism_to(&self, target: &Algebra, phi: &Matrix) -> bool {
        let n = self.dim;
        let imgs: Vec<Vector> = (0..n).map(|j| phi.col(j)).collect();
        for i in 0..n {
            for j in i..n {
                let lhs = phi.mul_vec(self.product(i, j));
                let rhs = target.mul(&imgs[i], &imgs[j]);
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_isomorphism_to(&self, target: &Algebra, phi: &Matrix) -> bool {
        phi.rows == target.dim
            && phi.cols == self.dim
            && self.dim == target.dim
            && phi.rank() == self.dim
            && self.is_homomorphism_to(target, phi)
    }

    pub fn to_json(&self) -> Value {
        let mut products = Vec::new();
        for i in 0..self.dim {
            for j in i..self.dim {
                let v = self.product(i, j);
                if !is_zero_vec(v) {
                    products.push(json!({
                        "i": i + 1,
                        "j": j + 1,
                        "coeffs": v.iter().map(|s| s.to_json(self.field)).collect::<Vec<_>>(),
                    }));
                }
            }
        }
        json!({
            "field": self.field.name(),
            "dim": self.dim,
            "labels": self.labels,
            "products": products,
        })
    }

    /// Parse the JSON algebra format; files that fail [`Algebra::validate`] are rejected.
    pub fn from_json(v: &Value) -> Result<Algebra> {
        let field = FieldTag::parse(v["field"].as_str().ok_or_else(|| Error::Parse("missing `field`".into()))?)?;
        let dim = v["dim"].as_u64().ok_or_else(|| Error::Parse("missing `dim`".into()))? as usize;
        let mut a = Algebra::zero_product(field, dim);
        if let Some(labels) = v.get("labels").and_then(Value::as_array) {
            if labels.len() != dim {
                return Err(Error::Parse("label count differs from dim".into()));
            }
            a.labels = labels.iter().map(|l| l.as_str().unwrap_or("").to_string()).collect();
        }
        let empty = Vec::new();
        let mut seen = BTreeMap::new();
        for p in v.get("products").and_then(Value::as_array).unwrap_or(&empty) {
            let i = p["i"].as_u64().ok_or_else(|| Error::Parse("product without `i`".into()))? as usize;
            let j = p["j"].as_u64().ok_or_else(|| Error::Parse("product without `j`".into()))? as usize;
            if i == 0 || j == 0 || i > dim || j > dim || i > j {
                return Err(Error::Parse(format!("bad product index ({i},{j})")));
            }
            let coeffs = p["coeffs"].as_array().ok_or_else(|| Error::Parse("product without `coeffs`".into()))?;
            if coeffs.len() != dim {
                return Err(Error::Parse("coefficient vector length differs from dim".into()));
            }
            let vec: Vector = coeffs.iter().map(Scalar::from_json).collect::<Result<_>>()?;
            if field == FieldTag::Rational && vec.iter().any(|s| !s.is_real()) {
                return Err(Error::FieldMismatch("complex coefficient in a rational algebra".into()));
            }
            if seen.insert((i, j), ()).is_some() {
                return Err(Error::Parse(format!("duplicate product ({i},{j})")));
            }
            a.set_product(i - 1, j - 1, vec);
        }
        a.validate().map_err(|v| Error::InvalidAlgebra(v.to_string()))?;
        Ok(a)
    }
}

/// Algebra together with a degree for each basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedAlgebra {
    pub algebra: Algebra,
    pub degree: Vec<usize>,
}

impl GradedAlgebra {
    pub fn new(algebra: Algebra, degree: Vec<usize>) -> Result<Self> {
        if degree.len() != algebra.dim {
            return Err(Error::NotGraded("one degree per basis vector required".into()));
        }
        if degree.iter().any(|&d| d == 0) {
            return Err(Error::NotGraded("degrees must be positive".into()));
        }
        let g = GradedAlgebra { algebra, degree };
        g.check()?;
        Ok(g)
    }

    fn check(&self) -> Result<()> {
        let a = &self.algebra;
        for i in 0..a.dim {
            for j in 0..a.dim {
                for (k, c) in a.product(i, j).iter().enumerate() {
                    if !c.is_zero() && self.degree[k] != self.degree[i] + self.degree[j] {
                        return Err(Error::NotGraded(format!(
                            "e{}·e{} has a component of degree {} instead of {}",
                            i + 1,
                            j + 1,
                            self.degree[k],
                            self.degree[i] + self.degree[j]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Largest degree `d` with `N_d ≠ 0`.
    pub fn top_degree(&self) -> usize {
        self.degree.iter().copied().max().unwrap_or(0)
    }

    /// Basis indices of the degree-`k` piece.
    pub fn piece(&self, k: usize) -> Vec<usize> {
        (0..self.algebra.dim).filter(|&i| self.degree[i] == k).collect()
    }

    /// Checks that the grading refines the power filtration: `N^k = ⊕_{i ≥ k} N_i`.
    pub fn matches_power_filtration(&self) -> bool {
        let n = self.algebra.dim;
        let d = self.top_degree();
        (1..=d + 1).all(|k| {
            let span: Vec<Vector> =
                (0..n).filter(|&i| self.degree[i] >= k).map(|i| unit_vec(n, i)).collect();
            Subspace::span(n, &span) == self.algebra.power_subspace(k)
        })
    }
}

/// Cyclic algebra with basis `ξ, ξ², …, ξ^ν` and `deg ξ^k = k`.
pub fn cyclic_algebra(field: FieldTag, nu: usize) -> GradedAlgebra {
    assert!(nu >= 1, "nil-index must be positive");
    let mut a = Algebra::zero_product(field, nu);
    for j in 1..=nu {
        for k in j..=nu {
            if j + k <= nu {
                a.set_product(j - 1, k - 1, unit_vec(nu, j + k - 1));
            }
        }
    }
    a.labels = (1..=nu).map(|k| if k == 1 { "xi".to_string() } else { format!("xi^{k}") }).collect();
    GradedAlgebra { algebra: a, degree: (1..=nu).collect() }
}

/// `(A₁ ⊕ A₂)/I` where `I` identifies the annihilators so that `λ₁ = λ₂` on the quotient.
///
/// `lambda1`, `lambda2` are linear forms on the algebras; only their values on
/// the annihilators matter.
pub fn glued_sum(a1: &Algebra, lambda1: &[Scalar], a2: &Algebra, lambda2: &[Scalar]) -> Result<Algebra> {
    let ann1 = a1.annihilator();
    let ann2 = a2.annihilator();
    if ann1.dim() != 1 {
        return Err(Error::AnnihilatorNotOneDim(ann1.dim()));
    }
    if ann2.dim() != 1 {
        return Err(Error::AnnihilatorNotOneDim(ann2.dim()));
    }
    if !a1.is_nilpotent() || !a2.is_nilpotent() {
        return Err(Error::NotNilpotent);
    }
    let g1 = &ann1.basis()[0];
    let g2 = &ann2.basis()[0];
    let l1 = crate::linalg::dot(lambda1, g1);
    let l2 = crate::linalg::dot(lambda2, g2);
    if l1.is_zero() || l2.is_zero() {
        return Err(Error::BadComplement("identification vanishes on the annihilator".into()));
    }
    // unit annihilator vectors u_k with λ_k(u_k) = 1; the ideal is spanned by (u₁, −u₂)
    let mut gen = vec_scale(&l1.inv()?, g1);
    gen.extend(vec_scale(&(-l2.inv()?), g2));
    let sum = a1.direct_sum(a2);
    let ideal = Subspace::span(sum.dim, &[gen]);
    sum.quotient(&ideal)
}

/// Linear form on the glued sum induced by `λ₁ ⊕ λ₂`.
pub fn glued_functional(lambda1: &[Scalar], lambda2: &[Scalar], a1: &Algebra, a2: &Algebra) -> Result<Vector> {
    let ann1 = a1.annihilator();
    let ann2 = a2.annihilator();
    let g1 = &ann1.basis()[0];
    let g2 = &ann2.basis()[0];
    let mut gen = vec_scale(&crate::linalg::dot(lambda1, g1).inv()?, g1);
    gen.extend(vec_scale(&(-crate::linalg::dot(lambda2, g2).inv()?), g2));
    let ideal = Subspace::span(a1.dim + a2.dim, &[gen]);
    let mut full: Vector = lambda1.to_vec();
    full.extend(lambda2.iter().cloned());
    Ok((0..full.len()).filter(|c| !ideal.pivots().contains(c)).map(|c| full[c].clone()).collect())
}
