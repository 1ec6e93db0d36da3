//! Matrix models: the forms `𝔥_{p,q}`, diagonal bases, Cartan generators and realizations `L(𝒩)`.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::forms::{b_pi_standard, signature, unital_left_mul, IsometryWitness, Pointing, Projection, Signature, SymmetricForm};
use crate::linalg::{unit_vec, Matrix, Subspace, Vector};
use crate::scalar::{FieldTag, Scalar};

/// `diag(+1 × p, −1 × q)`.
pub fn hermitian_form_matrix(p: usize, q: usize) -> Result<Matrix> {
    if p + q == 0 {
        return Err(Error::RangeError("p + q must be positive".into()));
    }
    Ok(Matrix::diag(&(0..p + q).map(|j| Scalar::from_int(if j < p { 1 } else { -1 })).collect::<Vec<_>>()))
}

/// `𝔥(u, v) = v* H u`, linear in the first slot.
pub fn hermitian_eval(h: &Matrix, u: &[Scalar], v: &[Scalar]) -> Scalar {
    let hu = h.mul_vec(u);
    hu.iter().zip(v).fold(Scalar::zero(), |acc, (a, b)| acc + a * &b.conj())
}

fn unit_matrix(m: usize, j: usize, k: usize) -> Matrix {
    let mut e = Matrix::zeros(m, m);
    e[(j, k)] = Scalar::one();
    e
}

/// `ω = (1 + i)/2`, a root of `2ω² = i`.
pub fn omega() -> Scalar {
    &(Scalar::one() + Scalar::i()) / &Scalar::from_int(2)
}

#[derive(Clone, Debug)]
pub struct DiagonalBasis {
    pub p: usize,
    pub q: usize,
    pub ell: usize,
    /// Columns are the vectors `ℓf_j` in the basis `e_j`.
    pub matrix: Matrix,
    /// `gram[(j, k)] = 𝔥(ℓf_j, ℓf_k)`.
    pub gram: Matrix,
}

/// Expected Gram matrix: `i` at `(j, j•)` for `j ≤ ℓ`, its conjugate at `(j•, j)`, `θ_{p,j}` in the middle.
pub fn expected_gram(p: usize, q: usize, ell: usize) -> Matrix {
    let m = p + q;
    let mut g = Matrix::zeros(m, m);
    for j in 0..m {
        let jb = m - 1 - j;
        if j < ell {
            g[(j, jb)] = Scalar::i();
            g[(jb, j)] = -Scalar::i();
        } else if j < m - ell {
            g[(j, j)] = Scalar::from_int(if j < p { 1 } else { -1 });
        }
    }
    g
}

/// `ℓf_j = e_j` for `ℓ < j < ℓ•`, `ωe_j + ω̄e_{j•}` otherwise; the Gram identity is verified.
pub fn diagonal_basis(p: usize, q: usize, ell: usize) -> Result<DiagonalBasis> {
    if ell > q || q > p || p + q == 0 {
        return Err(Error::RangeError(format!("need 0 <= l <= q <= p, got p={p} q={q} l={ell}")));
    }
    let m = p + q;
    let w = omega();
    let mut f = Matrix::zeros(m, m);
    for j in 0..m {
        let jb = m - 1 - j;
        if j >= ell && j < m - ell {
            f[(j, j)] = Scalar::one();
        } else {
            f[(j, j)] = w.clone();
            f[(jb, j)] = w.conj();
        }
    }
    let h = hermitian_form_matrix(p, q)?;
    let mut gram = Matrix::zeros(m, m);
    for j in 0..m {
        for k in 0..m {
            gram[(j, k)] = hermitian_eval(&h, &f.col(j), &f.col(k));
        }
    }
    if gram != expected_gram(p, q, ell) {
        return Err(Error::RangeError("Gram identity fails".into()));
    }
    Ok(DiagonalBasis { p, q, ell, matrix: f, gram })
}

#[derive(Clone, Debug)]
pub struct CartanGenerators {
    pub p: usize,
    pub q: usize,
    pub ell: usize,
    pub compact: Vec<Matrix>,
    pub vector: Vec<Matrix>,
}

impl CartanGenerators {
    pub fn all(&self) -> Vec<Matrix> {
        self.compact.iter().chain(&self.vector).cloned().collect()
    }

    pub fn dim(&self) -> usize {
        self.compact.len() + self.vector.len()
    }
}

/// `x*𝔥 + 𝔥x = 0`.
pub fn in_su(x: &Matrix, h: &Matrix) -> bool {
    x.adjoint().mul(h).add(&h.mul(x)).is_zero()
}

/// `τ(x) = −x` for the entrywise conjugation `τ`.
pub fn tau_anti_fixed(x: &Matrix) -> bool {
    x.conj().add(x).is_zero()
}

fn is_diagonal(x: &Matrix) -> bool {
    (0..x.rows).all(|i| (0..x.cols).all(|j| i == j || x[(i, j)].is_zero()))
}

fn pairwise_commuting(ms: &[Matrix]) -> bool {
    ms.iter().enumerate().all(|(a, x)| ms[a + 1..].iter().all(|y| x.commutator(y).is_zero()))
}

fn independent(ms: &[Matrix]) -> bool {
    ms.is_empty() || Matrix::from_rows(&ms.iter().map(|m| m.flat().to_vec()).collect::<Vec<_>>()).rank() == ms.len()
}

/// Compact part: trace-free span of `i(E_jj + E_j•j•)` for `j ≤ ℓ` and `iE_jj` in the middle.
/// Vector part: `i(E_{j,j•} − E_{j•,j})` for `j ≤ ℓ`.
pub fn cartan_generators(p: usize, q: usize, ell: usize) -> Result<CartanGenerators> {
    if ell > p.min(q) || p + q == 0 {
        return Err(Error::RangeError(format!("need 0 <= l <= min(p,q), got p={p} q={q} l={ell}")));
    }
    let m = p + q;
    let i = Scalar::i();
    let vector: Vec<Matrix> = (0..ell).map(|j| unit_matrix(m, j, m - 1 - j).sub(&unit_matrix(m, m - 1 - j, j)).scale(&i)).collect();
    let mut units: Vec<Matrix> = (0..ell).map(|j| unit_matrix(m, j, j).add(&unit_matrix(m, m - 1 - j, m - 1 - j)).scale(&i)).collect();
    units.extend((ell..m - ell).map(|j| unit_matrix(m, j, j).scale(&i)));
    let last = units.pop().expect("m >= 1");
    let tl = last.trace();
    let compact = units.iter().map(|u| u.sub(&last.scale(&(&u.trace() / &tl)))).collect();
    let gens = CartanGenerators { p, q, ell, compact, vector };
    verify_cartan(&gens)?;
    Ok(gens)
}

/// Commuting, diagonal in `ℓf`, trace-free, in `su(𝔼, 𝔥)`, anti-fixed by `τ`, of dimension `p + q − 1`.
pub fn verify_cartan(g: &CartanGenerators) -> Result<()> {
    let all = g.all();
    let h = hermitian_form_matrix(g.p, g.q)?;
    let f = if g.ell <= g.q && g.q <= g.p {
        diagonal_basis(g.p, g.q, g.ell)?.matrix
    } else {
        // q > p: the mixing pairs the first ℓ vectors with the last ℓ, which also works with the roles swapped
        diagonal_basis(g.q, g.p, g.ell)?.matrix
    };
    let finv = f.inverse()?;
    let fail = |why: &str| Err(Error::RangeError(format!("Cartan generators: {why}")));
    if all.len() != g.p + g.q - 1 || !independent(&all) {
        return fail("wrong dimension");
    }
    if !pairwise_commuting(&all) {
        return fail("not commuting");
    }
    for x in &all {
        if !x.trace().is_zero() {
            return fail("not trace-free");
        }
        if !in_su(x, &h) {
            return fail("not in su");
        }
        if !tau_anti_fixed(x) {
            return fail("not anti-fixed by tau");
        }
        if !is_diagonal(&finv.mul(x).mul(&f)) {
            return fail("not diagonal in the mixed basis");
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Case {
    Real,
    Complex,
}

impl std::str::FromStr for Case {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "real" => Ok(Case::Real),
            "complex" => Ok(Case::Complex),
            other => Err(Error::Parse(format!("unknown case `{other}`"))),
        }
    }
}

/// `L(𝒩)` on `𝒩⁰` in the adapted basis `(𝟙; complement; annihilator generator)`.
#[derive(Clone, Debug)]
pub struct MansaRealization {
    pub case: Case,
    pub field: FieldTag,
    /// `L(c_1), …, L(c_{m−2}), L(a)`.
    pub generators: Vec<Matrix>,
    /// Ambient symmetric form `b_π` in the adapted basis.
    pub form: Matrix,
    /// `𝔑` and `𝔍` read off the generators of the complement.
    pub blocks: BdData,
}

impl MansaRealization {
    pub fn m(&self) -> usize {
        self.form.rows
    }

    pub fn to_json(&self) -> Value {
        json!({
            "case": if self.case == Case::Real { "real" } else { "complex" },
            "m": self.m(),
            "form": self.form.to_json(),
            "generators": self.generators.iter().map(|g| g.to_json()).collect::<Vec<_>>(),
        })
    }
}

/// Linear maps `𝔑 : W → End(W)` and `𝔍 : W → W*`, stored on the basis of `W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BdData {
    pub n: Vec<Matrix>,
    pub j: Vec<Vector>,
}

impl BdData {
    pub fn w(&self) -> usize {
        self.j.len()
    }

    fn n_of(&self, y: &[Scalar]) -> Matrix {
        let w = self.w();
        y.iter().zip(&self.n).fold(Matrix::zeros(w, w), |acc, (c, m)| if c.is_zero() { acc } else { acc.add(&m.scale(c)) })
    }

    /// Matrix `[0 0 0; y 𝔑(y) 0; t 𝔍(y) 0]`.
    pub fn block_matrix(&self, y: &[Scalar], t: &Scalar) -> Matrix {
        let w = self.w();
        let ny = self.n_of(y);
        let mut x = Matrix::zeros(w + 2, w + 2);
        for a in 0..w {
            x[(a + 1, 0)] = y[a].clone();
            for b in 0..w {
                x[(a + 1, b + 1)] = ny[(a, b)].clone();
            }
            let jy = y.iter().zip(&self.j).fold(Scalar::zero(), |acc, (c, v)| acc + c * &v[a]);
            x[(w + 1, a + 1)] = jy;
        }
        x[(w + 1, 0)] = t.clone();
        x
    }

    /// Generators `M(e_a, 0)` and `M(0, 1)`.
    pub fn generators(&self) -> Vec<Matrix> {
        let w = self.w();
        let mut out: Vec<Matrix> = (0..w).map(|a| self.block_matrix(&unit_vec(w, a), &Scalar::zero())).collect();
        out.push(self.block_matrix(&vec![Scalar::zero(); w], &Scalar::one()));
        out
    }
}

/// Block data of a matrix list in the layout `[0 0 0; y 𝔑(y) 0; t 𝔍(y) 0]`, indexed by the first column.
pub fn read_blocks(generators: &[Matrix]) -> Result<BdData> {
    let m = generators.first().map_or(0, |g| g.rows);
    if m < 2 {
        return Err(Error::ShapeMismatch("need at least 2x2 matrices".into()));
    }
    let w = m - 2;
    let firsts: Vec<Vector> = generators.iter().map(|g| (1..=w).map(|a| g[(a, 0)].clone()).collect()).collect();
    let mut n = Vec::new();
    let mut j = Vec::new();
    for a in 0..w {
        let target = unit_vec(w, a);
        let idx = generators
            .iter()
            .zip(&firsts)
            .position(|(_, f)| *f == target)
            .ok_or_else(|| Error::ShapeMismatch("generators are not in adapted block form".into()))?;
        let g = &generators[idx];
        let mut nm = Matrix::zeros(w, w);
        for r in 0..w {
            for c in 0..w {
                nm[(r, c)] = g[(r + 1, c + 1)].clone();
            }
        }
        n.push(nm);
        j.push((1..=w).map(|c| g[(w + 1, c)].clone()).collect());
    }
    Ok(BdData { n, j })
}

/// Left regular representation of the complement basis and `a` in the adapted basis.
pub fn mansa_from_pana(p: &Pointing, case: Case) -> Result<MansaRealization> {
    let ann = p.algebra.annihilator();
    if ann.dim() != 1 {
        return Err(Error::AnnihilatorNotOneDim(ann.dim()));
    }
    if case == Case::Real && p.field() != FieldTag::Rational {
        return Err(Error::FieldMismatch("real case needs a rational algebra".into()));
    }
    let proj = Projection::canonical(p);
    let s = proj.adapted_basis();
    let sinv = s.inverse()?;
    let form = b_pi_standard(p, &proj).congruent(&s).matrix;
    let basis: Vec<Vector> = proj.complement.iter().chain(std::iter::once(&proj.ann)).cloned().collect();
    let generators: Vec<Matrix> = basis.iter().map(|x| sinv.mul(&unital_left_mul(&p.algebra, x)).mul(&s)).collect();
    let blocks = read_blocks(&generators)?;
    let r = MansaRealization { case, field: p.field(), generators, form, blocks };
    let report = verify_realization(&r);
    if !report.violations.is_empty() {
        return Err(Error::NotNilpotentAlgebra(report.violations.join("; ")));
    }
    Ok(r)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<String>,
    pub violations: Vec<String>,
}

impl Report {
    fn check(&mut self, name: &str, ok: bool) {
        self.checks.push(name.to_string());
        if !ok {
            self.violations.push(name.to_string());
        }
    }

    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({ "checks": self.checks, "violations": self.violations, "pass": self.passes() })
    }
}

/// `b x = xᵀ b`.
pub fn selfadjoint(x: &Matrix, b: &Matrix) -> bool {
    b.mul(x) == x.transpose().mul(b)
}

/// Block shape, commuting, nilpotent, selfadjoint, trace 0, `dim = m − 1`, nondegenerate `𝔍` pairing,
/// and in the real case `i·L(𝒩) ⊂ su(𝔼, b)` anti-fixed by `τ`.
pub fn verify_realization(r: &MansaRealization) -> Report {
    let mut rep = Report::default();
    let m = r.m();
    let shape = r.generators.iter().all(|g| (0..m).all(|c| g[(0, c)].is_zero() && g[(c, m - 1)].is_zero()));
    rep.check("block shape", shape && read_blocks(&r.generators).is_ok());
    rep.check("commuting", pairwise_commuting(&r.generators));
    rep.check("nilpotent", r.generators.iter().all(Matrix::is_nilpotent));
    rep.check("selfadjoint", r.generators.iter().all(|g| selfadjoint(g, &r.form)));
    rep.check("trace 0", r.generators.iter().all(|g| g.trace().is_zero()));
    rep.check("dim = m - 1", r.generators.len() + 1 == m && independent(&r.generators));
    let jp = j_pairing(&r.blocks);
    rep.check("J pairing symmetric nondegenerate", jp == jp.transpose() && jp.rank() == jp.rows);
    if r.case == Case::Real {
        let i = Scalar::i();
        let ok = r.generators.iter().all(|g| {
            let x = g.scale(&i);
            in_su(&x, &r.form) && tau_anti_fixed(&x)
        });
        rep.check("iL in su and anti-fixed by tau", ok);
    }
    rep
}

/// `(x, y) ↦ 𝔍(x) y` on the basis of `W`.
pub fn j_pairing(d: &BdData) -> Matrix {
    Matrix::from_rows(&d.j)
}

/// Signature of `b` restricted to the middle block `V₂`, compared with the whole form.
pub fn middle_signature(r: &MansaRealization) -> Result<(Signature, Signature)> {
    let m = r.m();
    let mut mid = Matrix::zeros(m - 2, m - 2);
    for a in 0..m - 2 {
        for b in 0..m - 2 {
            mid[(a, b)] = r.form[(a + 1, b + 1)].clone();
        }
    }
    Ok((signature(&SymmetricForm::new(r.form.clone())?)?, signature(&SymmetricForm::new(mid)?)?))
}

/// Relations (a)–(c) on basis pairs.
pub fn verify_bd_axioms(d: &BdData) -> Report {
    let mut rep = Report::default();
    let w = d.w();
    let e = |a: usize| unit_vec(w, a);
    let generic = d.n.iter().fold(Matrix::zeros(w, w), |acc, m| acc.add(m));
    rep.check("(a) N(x) nilpotent", d.n.iter().all(Matrix::is_nilpotent) && generic.is_nilpotent());
    let mut b1 = true;
    let mut b2 = true;
    let mut b3 = true;
    let mut c = true;
    for a in 0..w {
        for b in 0..w {
            b1 &= d.n[a].mul_vec(&e(b)) == d.n[b].mul_vec(&e(a));
            b2 &= d.j[a][b] == d.j[b][a];
            let ja = Matrix::from_rows(&[d.j[a].clone()]);
            let jb = Matrix::from_rows(&[d.j[b].clone()]);
            b3 &= ja.mul(&d.n[b]) == jb.mul(&d.n[a]);
            c &= d.n_of(&d.n[a].mul_vec(&e(b))) == d.n[a].mul(&d.n[b]);
        }
    }
    rep.check("(b) N(x)y = N(y)x", b1);
    rep.check("(b) J(x)y = J(y)x", b2);
    rep.check("(b) J(x)N(y) = J(y)N(x)", b3);
    rep.check("(c) N(N(x)y) = N(x)N(y)", c);
    rep.check("J bijective", w == 0 || j_pairing(d).rank() == w);
    rep
}

fn flat_span(ms: &[Matrix]) -> Subspace {
    let n = ms.first().map_or(0, |m| m.rows * m.cols);
    Subspace::span(n, &ms.iter().map(|m| m.flat().to_vec()).collect::<Vec<_>>())
}

fn unflat(v: &[Scalar], m: usize) -> Matrix {
    Matrix::from_rows(&v.chunks(m).map(<[Scalar]>::to_vec).collect::<Vec<_>>())
}

/// Associative span of the generators; fails unless commutative and nilpotent.
pub fn matrix_algebra(generators: &[Matrix]) -> Result<Vec<Matrix>> {
    let m = generators.first().map_or(0, |g| g.rows);
    let mut span = flat_span(generators);
    loop {
        let basis: Vec<Matrix> = span.basis().iter().map(|v| unflat(v, m)).collect();
        let mut all = basis.clone();
        for x in &basis {
            for y in &basis {
                all.push(x.mul(y));
            }
        }
        let next = flat_span(&all);
        if next.dim() == span.dim() {
            break;
        }
        span = next;
    }
    let basis: Vec<Matrix> = span.basis().iter().map(|v| unflat(v, m)).collect();
    if !pairwise_commuting(&basis) {
        return Err(Error::NotNilpotentAlgebra("not commutative".into()));
    }
    if !basis.iter().all(Matrix::is_nilpotent) {
        return Err(Error::NotNilpotentAlgebra("contains a non-nilpotent matrix".into()));
    }
    Ok(basis)
}

/// `𝔹 = ⟨𝒩(v)⟩` and `𝕂 = {v : 𝒩(v) = 0}`.
pub fn kb_subspaces(algebra: &[Matrix]) -> (Subspace, Subspace) {
    let m = algebra.first().map_or(0, |g| g.rows);
    let mut image = Vec::new();
    for x in algebra {
        for c in 0..m {
            image.push(x.col(c));
        }
    }
    let b = Subspace::span(m, &image);
    let stacked: Vec<Vector> = algebra.iter().flat_map(|x| x.to_rows()).collect();
    let k = if stacked.is_empty() { Subspace::full(m) } else { Subspace::span(m, &Matrix::from_rows(&stacked).nullspace()) };
    (b, k)
}

/// `U^⊥` for the symmetric form `b`.
pub fn orthogonal_complement(u: &Subspace, b: &Matrix) -> Subspace {
    let m = b.rows;
    if u.dim() == 0 {
        return Subspace::full(m);
    }
    let rows: Vec<Vector> = u.basis().iter().map(|v| b.transpose().mul_vec(v)).collect();
    Subspace::span(m, &Matrix::from_rows(&rows).nullspace())
}

/// Nil-index of an algebra of matrices.
pub fn matrix_nil_index(algebra: &[Matrix]) -> usize {
    let mut power = algebra.to_vec();
    let mut k = 0;
    while !flat_span(&power).basis().is_empty() {
        k += 1;
        let next: Vec<Matrix> = power.iter().flat_map(|x| algebra.iter().map(move |y| x.mul(y))).collect();
        let m = algebra[0].rows;
        power = flat_span(&next).basis().iter().map(|v| unflat(v, m)).collect();
    }
    k
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimBounds {
    pub m: usize,
    pub d1: usize,
    pub d2: usize,
    pub d3: usize,
    pub dim: usize,
    pub lower: usize,
    pub upper: usize,
}

impl DimBounds {
    pub fn holds(&self) -> bool {
        self.lower <= self.dim && self.dim <= self.upper
    }

    pub fn to_json(&self) -> Value {
        json!({
            "m": self.m, "d1": self.d1, "d2": self.d2, "d3": self.d3,
            "dim": self.dim, "lower": self.lower, "upper": self.upper, "holds": self.holds(),
        })
    }
}

/// `d₁d₃ + ⌈d₂/μ⌉ ≤ dim 𝒩 ≤ ⌊m²/4⌋` with `μ = min(d₁, d₃)`.
pub fn dim_bounds_check(generators: &[Matrix]) -> Result<DimBounds> {
    let alg = matrix_algebra(generators)?;
    let m = generators.first().map_or(0, |g| g.rows);
    let (b, k) = kb_subspaces(&alg);
    let d1 = m - b.dim();
    let d3 = k.dim();
    let d2 = b.dim() - d3;
    let mu = d1.min(d3);
    let lower = d1 * d3 + if mu == 0 { 0 } else { d2.div_ceil(mu) };
    Ok(DimBounds { m, d1, d2, d3, dim: alg.len(), lower, upper: m * m / 4 })
}

/// `Hom(𝔼₁, 𝔼₃)` with `dim 𝔼₁ = ⌊m/2⌋`, `dim 𝔼₃ = ⌈m/2⌉`.
pub fn extremal_example(m: usize) -> Vec<Matrix> {
    let d1 = m / 2;
    let mut out = Vec::new();
    for j in d1..m {
        for k in 0..d1 {
            out.push(unit_matrix(m, j, k));
        }
    }
    out
}

/// Some split of the coordinates into two nonempty sets has both spans invariant.
pub fn coordinate_decomposable(generators: &[Matrix]) -> bool {
    let m = generators.first().map_or(0, |g| g.rows);
    if m < 2 || m > 16 {
        return false;
    }
    (1..(1u32 << m) - 1).filter(|mask| mask & 1 == 1).any(|mask| {
        let inside = |i: usize| mask >> i & 1 == 1;
        generators.iter().all(|g| (0..m).all(|r| (0..m).all(|c| inside(r) == inside(c) || g[(r, c)].is_zero())))
    })
}

/// Conjugates one realization onto the other through an isometry of the ambient forms.
#[derive(Clone, Debug)]
pub struct Conjugacy {
    /// In the adapted bases of the two realizations.
    pub map: Matrix,
    pub scale: Scalar,
}

/// From a verified algebra isomorphism, builds `Ψ` with `Ψᵀ b₂ Ψ = c·b₁` and `Ψ L(𝒩₁) Ψ⁻¹ = L(𝒩₂)`.
pub fn conjugacy_from_isomorphism(p1: &Pointing, p2: &Pointing, phi: &Matrix) -> Result<Conjugacy> {
    let IsometryWitness { map, scale, .. } = crate::forms::isometry_from_isomorphism(p1, p2, phi)?;
    let r1 = mansa_from_pana(p1, Case::Complex)?;
    let r2 = mansa_from_pana(p2, Case::Complex)?;
    let s1 = Projection::canonical(p1).adapted_basis();
    let s2 = Projection::canonical(p2).adapted_basis();
    let psi = s2.inverse()?.mul(&map).mul(&s1);
    if psi.transpose().mul(&r2.form).mul(&psi) != r1.form.scale(&scale) {
        return Err(Error::NotAnIsomorphism("form congruence fails".into()));
    }
    let psi_inv = psi.inverse()?;
    let target = flat_span(&r2.generators);
    let image: Vec<Matrix> = r1.generators.iter().map(|g| psi.mul(g).mul(&psi_inv)).collect();
    if flat_span(&image) != target {
        return Err(Error::NotAnIsomorphism("conjugation does not carry one algebra onto the other".into()));
    }
    Ok(Conjugacy { map: psi, scale })
}
