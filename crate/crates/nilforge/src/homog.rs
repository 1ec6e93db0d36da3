//! Affine homogeneity of the varieties `𝔣⁻¹(c)` for `𝔣 = π∘Φ` on graded nilpotent algebras.

use std::fmt;

use crate::algebra::GradedAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{is_zero_vec, unit_vec, vec_add, vec_scale, zero_vec, Matrix, Vector};
use crate::nilpoly::poly_mul_in;
use crate::poly::{generic_element, poly_vec_zero, PolyVector, Polynomial};
use crate::scalar::Scalar;

/// `Φ = Σ c_k T^k`, truncated; the constant term never contributes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalSeries {
    pub coeffs: Vec<Scalar>,
}

impl FormalSeries {
    pub fn new(coeffs: Vec<Scalar>) -> Self {
        FormalSeries { coeffs }
    }

    /// Exponential series up to `T^len`.
    pub fn exp(len: usize) -> Self {
        FormalSeries::new((0..=len).map(|k| Scalar::factorial(k as u32).inv().unwrap()).collect())
    }

    pub fn identity() -> Self {
        FormalSeries::new(vec![Scalar::zero(), Scalar::one()])
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    /// `exp`, `id`, or a comma-separated list `c0,c1,c2,…`.
    pub fn parse(s: &str, len: usize) -> Result<Self> {
        match s.trim() {
            "exp" => Ok(FormalSeries::exp(len)),
            "id" | "T" => Ok(FormalSeries::identity()),
            list => Ok(FormalSeries::new(list.split(',').map(|c| c.trim().parse()).collect::<Result<_>>()?)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Precondition {
    Ok,
    Fails(String),
}

/// `c₁ ≠ 0`; additionally `c₂ ≠ 0` for `ν = 3` and `c₂c₃ ≠ 0` for `ν = 4`.
pub fn precondition_check(phi: &FormalSeries, nu: usize) -> Result<Precondition> {
    if nu > 4 {
        return Err(Error::NuTooLarge(nu));
    }
    if phi.coeff(1).is_zero() {
        return Ok(Precondition::Fails("c1 = 0".into()));
    }
    if nu >= 3 && phi.coeff(2).is_zero() {
        return Ok(Precondition::Fails("c2 = 0".into()));
    }
    if nu == 4 && phi.coeff(3).is_zero() {
        return Ok(Precondition::Fails("c3 = 0".into()));
    }
    Ok(Precondition::Ok)
}

/// `𝔣 = π∘Φ` as polynomial coordinates on the top piece `𝒩_d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedProjectionMap {
    pub graded: GradedAlgebra,
    pub series: FormalSeries,
    /// Basis indices of `𝒩_d`.
    pub top: Vec<usize>,
    pub components: Vec<Polynomial>,
}

fn series_of(g: &GradedAlgebra, phi: &FormalSeries, x: &[Polynomial]) -> PolyVector {
    let a = &g.algebra;
    let nv = x.first().map_or(0, |p| p.nvars);
    let mut total = poly_vec_zero(a.dim, nv);
    let mut power = x.to_vec();
    let mut k = 1;
    while power.iter().any(|p| !p.is_zero()) {
        let c = phi.coeff(k);
        if !c.is_zero() {
            for (t, p) in total.iter_mut().zip(&power) {
                *t = t.add(&p.scale(&c));
            }
        }
        power = poly_mul_in(a, &power, x);
        k += 1;
    }
    total
}

pub fn graded_projection_map(g: &GradedAlgebra, phi: &FormalSeries) -> Result<GradedProjectionMap> {
    let n = g.algebra.dim;
    let check = GradedAlgebra::new(g.algebra.clone(), g.degree.clone())?;
    let top = check.piece(check.top_degree());
    let x = generic_element(&(0..n).map(|i| unit_vec(n, i)).collect::<Vec<_>>(), n);
    let v = series_of(g, phi, &x);
    let components = top.iter().map(|&i| v[i].clone()).collect();
    Ok(GradedProjectionMap { graded: check, series: phi.clone(), top, components })
}

impl GradedProjectionMap {
    pub fn dim(&self) -> usize {
        self.graded.algebra.dim
    }

    pub fn eval(&self, x: &[Scalar]) -> Vector {
        self.components.iter().map(|p| p.eval(x)).collect()
    }

    pub fn on_variety(&self, x: &[Scalar]) -> bool {
        is_zero_vec(&self.eval(x))
    }

    /// Point of `𝔣⁻¹(0)` with prescribed coordinates below the top degree.
    pub fn point_on_variety(&self, lower: &[Scalar]) -> Result<Vector> {
        let n = self.dim();
        let idx: Vec<usize> = (0..n).filter(|i| !self.top.contains(i)).collect();
        if lower.len() != idx.len() {
            return Err(Error::DimensionMismatch(format!("{} coordinates below the top degree expected", idx.len())));
        }
        let c1 = self.series.coeff(1);
        if c1.is_zero() {
            return Err(Error::PreconditionFailed("c1 = 0".into()));
        }
        let mut x = zero_vec(n);
        for (&i, v) in idx.iter().zip(lower) {
            x[i] = v.clone();
        }
        // 𝔣 is c₁·x_top plus terms in lower coordinates
        let rest = self.eval(&x);
        for (k, &t) in self.top.iter().enumerate() {
            x[t] = -(&rest[k] / &c1);
        }
        Ok(x)
    }

    /// `𝔣 ∘ (x ↦ Mx + b)` where `M`, `b` may involve extra variables.
    fn compose_affine(&self, image: &[Polynomial]) -> Vec<Polynomial> {
        self.components.iter().map(|p| p.compose(image)).collect()
    }
}

/// `x ↦ Mx + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    pub linear: Matrix,
    pub translation: Vector,
}

impl AffineMap {
    pub fn identity(n: usize) -> Self {
        AffineMap { linear: Matrix::identity(n), translation: zero_vec(n) }
    }

    pub fn apply(&self, x: &[Scalar]) -> Vector {
        vec_add(&self.linear.mul_vec(x), &self.translation)
    }

    /// Coordinates of the image as linear polynomials in `nvars` variables, the first `n` being `x`.
    fn image_polys(&self, nvars: usize) -> Vec<Polynomial> {
        let n = self.linear.rows;
        (0..n)
            .map(|i| {
                let mut p = Polynomial::constant(nvars, self.translation[i].clone());
                for j in 0..self.linear.cols {
                    if !self.linear[(i, j)].is_zero() {
                        p = p.add(&Polynomial::var(nvars, j).scale(&self.linear[(i, j)]));
                    }
                }
                p
            })
            .collect()
    }
}

fn x_degree(e: &[u32], n: usize) -> u32 {
    e[..n].iter().sum()
}

fn part_of_x_degree(p: &Polynomial, n: usize, k: u32) -> Polynomial {
    let mut out = Polynomial::zero(p.nvars);
    for (e, c) in p.terms() {
        if x_degree(e, n) == k {
            out.add_term(e.clone(), c.clone());
        }
    }
    out
}

fn max_x_degree(ps: &[Polynomial], n: usize) -> Option<u32> {
    ps.iter().flat_map(|p| p.terms().map(|(e, _)| x_degree(e, n))).max()
}

/// One correction stage of a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessStage {
    /// Graded component being corrected.
    pub component: usize,
    /// Degree of the residual removed by the stage.
    pub removed_degree: u32,
    /// The unipotent factor `x ↦ x − K(x)`.
    pub factor: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub map: AffineMap,
    pub stages: Vec<WitnessStage>,
}

fn residual(f: &GradedProjectionMap, g: &AffineMap) -> Vec<Polynomial> {
    let n = f.dim();
    let img = g.image_polys(n);
    f.compose_affine(&img).iter().zip(&f.components).map(|(a, b)| a.sub(b)).collect()
}

/// Affine `g` with `𝔣∘g = 𝔣` and `g(c) = c + a` on `𝒩_d`, built as the translation by `a`
/// followed by unipotent corrections of the components of degree `2, …, d`.
pub fn transitivity_witness(f: &GradedProjectionMap, a: &[Scalar]) -> Result<Witness> {
    let g = &f.graded;
    let n = f.dim();
    if a.len() != n {
        return Err(Error::DimensionMismatch("point has the wrong length".into()));
    }
    if !g.matches_power_filtration() {
        return Err(Error::PreconditionFailed("grading does not match the power filtration".into()));
    }
    let nu = g.top_degree();
    if let Precondition::Fails(why) = precondition_check(&f.series, nu)? {
        return Err(Error::PreconditionFailed(why));
    }
    if !f.on_variety(a) {
        return Err(Error::PointNotOnVariety);
    }
    let mut map = AffineMap { linear: Matrix::identity(n), translation: a.to_vec() };
    let mut stages = Vec::new();
    for j in 2..=nu {
        let k = (nu - j + 1) as u32;
        // unknown β_{j−i} ∈ 𝒩_{j−i} for i = 1..j−1
        let mut beta_slots: Vec<(usize, usize)> = Vec::new();
        for i in 1..j {
            for b in g.piece(j - i) {
                beta_slots.push((i, b));
            }
        }
        let m = beta_slots.len();
        let nv = n + m;
        let mut kx: PolyVector = poly_vec_zero(n, nv);
        for i in 1..j {
            let mut beta = poly_vec_zero(n, nv);
            for (slot, &(ii, b)) in beta_slots.iter().enumerate() {
                if ii == i {
                    beta[b] = beta[b].add(&Polynomial::var(nv, n + slot));
                }
            }
            let mut xi = poly_vec_zero(n, nv);
            for c in g.piece(i) {
                xi[c] = Polynomial::var(nv, c);
            }
            let prod = poly_mul_in(&g.algebra, &beta, &xi);
            for (t, p) in kx.iter_mut().zip(prod) {
                *t = t.add(&p);
            }
        }
        // image of x under map ∘ (id − K)
        let inner: Vec<Polynomial> = (0..n).map(|c| Polynomial::var(nv, c).sub(&kx[c])).collect();
        let outer: Vec<Polynomial> = (0..n)
            .map(|r| {
                let mut p = Polynomial::constant(nv, map.translation[r].clone());
                for c in 0..n {
                    if !map.linear[(r, c)].is_zero() {
                        p = p.add(&inner[c].scale(&map.linear[(r, c)]));
                    }
                }
                p
            })
            .collect();
        let lifted: Vec<Polynomial> = f.components.iter().map(|p| p.embed(nv, &(0..n).collect::<Vec<_>>())).collect();
        let res: Vec<Polynomial> = f.compose_affine(&outer).iter().zip(&lifted).map(|(x, y)| x.sub(y)).collect();
        // linear equations in β from the x-degree-k part
        let mut rows: Vec<Vector> = Vec::new();
        let mut rhs: Vec<Scalar> = Vec::new();
        for comp in &res {
            let part = part_of_x_degree(comp, n, k);
            let mut by_x: std::collections::BTreeMap<Vec<u32>, (Vector, Scalar)> = std::collections::BTreeMap::new();
            for (e, c) in part.terms() {
                let bdeg: u32 = e[n..].iter().sum();
                if bdeg > 1 {
                    return Err(Error::PreconditionFailed("correction equations are not linear".into()));
                }
                let entry = by_x.entry(e[..n].to_vec()).or_insert_with(|| (zero_vec(m), Scalar::zero()));
                match e[n..].iter().position(|&d| d == 1) {
                    Some(s) => entry.0[s] += c,
                    None => entry.1 -= c,
                }
            }
            for (_, (row, r)) in by_x {
                rows.push(row);
                rhs.push(r);
            }
        }
        let beta_vals = if rows.is_empty() {
            zero_vec(m)
        } else if m == 0 {
            if rhs.iter().all(Scalar::is_zero) {
                Vec::new()
            } else {
                return Err(Error::PreconditionFailed(format!("no correction available in degree {j}")));
            }
        } else {
            Matrix::from_rows(&rows)
                .solve(&rhs)
                .ok_or_else(|| Error::PreconditionFailed(format!("correction in degree {j} is not solvable")))?
        };
        let mut kmat = Matrix::zeros(n, n);
        for c in 0..n {
            for (slot, val) in beta_vals.iter().enumerate() {
                if val.is_zero() {
                    continue;
                }
                let (i, b) = beta_slots[slot];
                if g.degree[c] == i {
                    let prod = g.algebra.mul(&unit_vec(n, b), &unit_vec(n, c));
                    for r in 0..n {
                        if !prod[r].is_zero() {
                            kmat[(r, c)] += &(&prod[r] * val);
                        }
                    }
                }
            }
        }
        let factor = Matrix::identity(n).sub(&kmat);
        let next = AffineMap { linear: map.linear.mul(&factor), translation: map.translation.clone() };
        let left = residual(f, &next);
        if max_x_degree(&left, n).is_some_and(|d| d >= k) {
            return Err(Error::PreconditionFailed(format!("stage {j} did not lower the residual degree")));
        }
        map = next;
        stages.push(WitnessStage { component: j, removed_degree: k, factor });
    }
    if residual(f, &map).iter().any(|p| !p.is_zero()) {
        return Err(Error::PreconditionFailed("residual does not vanish".into()));
    }
    Ok(Witness { map, stages })
}

/// `𝔣∘g = 𝔣` as a polynomial identity and `g(c) = c + a` on the top piece.
pub fn verify_witness(f: &GradedProjectionMap, w: &Witness, a: &[Scalar]) -> bool {
    let n = f.dim();
    if residual(f, &w.map).iter().any(|p| !p.is_zero()) {
        return false;
    }
    f.top.iter().all(|&t| {
        let e = unit_vec(n, t);
        w.map.apply(&e) == vec_add(&e, a)
    }) && w.map.apply(&zero_vec(n)) == a
}

/// `θ_s = ⊕ s^k id` on `𝒩_k`.
pub fn scaling_automorphism(g: &GradedAlgebra, s: &Scalar) -> Matrix {
    Matrix::diag(&g.degree.iter().map(|&k| s.pow(k as u32)).collect::<Vec<_>>())
}

/// `θ_s` is an automorphism for a symbolic `s`, i.e. the structure constants respect the grading.
pub fn scaling_is_automorphism(g: &GradedAlgebra) -> bool {
    let a = &g.algebra;
    (0..a.dim).all(|i| {
        (0..a.dim).all(|j| a.product(i, j).iter().enumerate().all(|(k, c)| c.is_zero() || g.degree[k] == g.degree[i] + g.degree[j]))
    })
}

/// `𝔣∘θ_s = s^d 𝔣` with `s` a polynomial indeterminate.
pub fn scaling_identity_holds(f: &GradedProjectionMap) -> bool {
    let n = f.dim();
    let d = f.graded.top_degree() as u32;
    let s = Polynomial::var(n + 1, n);
    let subs: Vec<Polynomial> = (0..n).map(|i| Polynomial::var(n + 1, i).mul(&s.pow(f.graded.degree[i] as u32))).collect();
    let lift: Vec<usize> = (0..n).collect();
    f.components.iter().all(|p| p.compose(&subs) == p.embed(n + 1, &lift).mul(&s.pow(d)))
}

/// `x ↦ c + Ax` acting as a derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineVectorField {
    pub constant: Vector,
    pub linear: Matrix,
}

impl AffineVectorField {
    pub fn at(&self, x: &[Scalar]) -> Vector {
        vec_add(&self.constant, &self.linear.mul_vec(x))
    }

    pub fn component(&self, i: usize) -> Polynomial {
        let n = self.constant.len();
        let mut p = Polynomial::constant(n, self.constant[i].clone());
        for j in 0..n {
            if !self.linear[(i, j)].is_zero() {
                p = p.add(&Polynomial::var(n, j).scale(&self.linear[(i, j)]));
            }
        }
        p
    }

    /// `[X, Y] = X(Y) − Y(X)`.
    pub fn bracket(&self, o: &AffineVectorField) -> AffineVectorField {
        let constant = crate::linalg::vec_sub(&o.linear.mul_vec(&self.constant), &self.linear.mul_vec(&o.constant));
        AffineVectorField { constant, linear: o.linear.mul(&self.linear).sub(&self.linear.mul(&o.linear)) }
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.constant) && self.linear.is_zero()
    }

    fn flat(&self) -> Vector {
        let mut v = self.constant.clone();
        v.extend(self.linear.flat().iter().cloned());
        v
    }

    /// `c ∂₁ − x₁ ∂₂ …` rendered as `3 d/dx1 - x1 d/dx2 - 2 x2 d/dx3`.
    pub fn display(&self) -> String {
        let n = self.constant.len();
        let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        let mut out = String::new();
        for i in 0..n {
            let c = self.component(i);
            if c.is_zero() {
                continue;
            }
            let single = c.len() == 1;
            let (neg, body) = if single {
                let (e, v) = c.terms().next().unwrap();
                let neg = v.is_real() && v.real_sign() < 0;
                let mag = if neg { -v.clone() } else { v.clone() };
                let var = e.iter().position(|&k| k == 1).map(|j| names[j].clone());
                let s = match (var, mag.is_one()) {
                    (None, true) => String::new(),
                    (None, false) => mag.to_string(),
                    (Some(v), true) => v,
                    (Some(v), false) => format!("{mag} {v}"),
                };
                (neg, s)
            } else {
                (false, format!("({})", c.to_plain_with(&names, false)))
            };
            let term = if body.is_empty() { format!("d/d{}", names[i]) } else { format!("{body} d/d{}", names[i]) };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&term);
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }
}

impl fmt::Display for AffineVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display())
    }
}

/// `Σ ξ_i ∂𝔣/∂x_i` for every coordinate of `𝔣`.
pub fn apply_field(xi: &AffineVectorField, f: &[Polynomial]) -> Vec<Polynomial> {
    let n = xi.constant.len();
    f.iter()
        .map(|p| {
            let mut s = Polynomial::zero(n);
            for i in 0..n {
                let c = xi.component(i);
                if !c.is_zero() {
                    s = s.add(&c.mul(&p.derivative(i)));
                }
            }
            s
        })
        .collect()
}

/// `(d−j)α ∂/∂x_j − Σ_k kα x_k ∂/∂x_{j+k}` for `j < d` and `α` running over the basis of `𝒩_j`.
pub fn homogeneity_fields(g: &GradedAlgebra) -> Result<Vec<AffineVectorField>> {
    let g = GradedAlgebra::new(g.algebra.clone(), g.degree.clone())?;
    let n = g.algebra.dim;
    let d = g.top_degree();
    let mut out = Vec::new();
    for j in 1..d {
        for b in g.piece(j) {
            let alpha = unit_vec(n, b);
            let constant = vec_scale(&Scalar::from_int((d - j) as i64), &alpha);
            let mut linear = Matrix::zeros(n, n);
            for c in 0..n {
                let k = g.degree[c];
                if k > d - j {
                    continue;
                }
                let prod = g.algebra.mul(&alpha, &unit_vec(n, c));
                for r in 0..n {
                    linear[(r, c)] = -(&prod[r] * &Scalar::from_int(k as i64));
                }
            }
            out.push(AffineVectorField { constant, linear });
        }
    }
    Ok(out)
}

/// Lengths of the lower central series of the span, ending at 0 when nilpotent.
pub fn lower_central_dims(fields: &[AffineVectorField]) -> Vec<usize> {
    let span = |fs: &[AffineVectorField]| -> Vec<AffineVectorField> {
        if fs.is_empty() {
            return Vec::new();
        }
        let rows: Vec<Vector> = fs.iter().map(AffineVectorField::flat).collect();
        let (r, piv) = Matrix::from_rows(&rows).rref();
        let n = fs[0].constant.len();
        (0..piv.len())
            .map(|i| {
                let v = r.row(i);
                let mut linear = Matrix::zeros(n, n);
                for a in 0..n {
                    for b in 0..n {
                        linear[(a, b)] = v[n + a * n + b].clone();
                    }
                }
                AffineVectorField { constant: v[..n].to_vec(), linear }
            })
            .collect()
    };
    let base = span(fields);
    let mut dims = vec![base.len()];
    let mut cur = base.clone();
    for _ in 0..=base.len() {
        let br: Vec<AffineVectorField> = base.iter().flat_map(|x| cur.iter().map(move |y| x.bracket(y))).filter(|f| !f.is_zero()).collect();
        cur = span(&br);
        dims.push(cur.len());
        if cur.is_empty() {
            break;
        }
    }
    dims
}

/// Evaluation `ξ ↦ ξ(a)` is injective on the span of `fields`.
pub fn evaluation_injective(fields: &[AffineVectorField], a: &[Scalar]) -> bool {
    if fields.is_empty() {
        return true;
    }
    let cols: Vec<Vector> = fields.iter().map(|f| f.at(a)).collect();
    Matrix::from_cols(&cols, a.len()).rank() == fields.len()
}
