//! Sparse multivariate polynomials with exact coefficients.
//!
//! Coefficients are stored against plain powers. [`Polynomial::to_divided`]
//! renders with divided powers `x^(k) = x^k/k!`.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::scalar::{FieldTag, Scalar};

pub type Exponent = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    pub nvars: usize,
    terms: BTreeMap<Exponent, Scalar>,
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_divided())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_divided())
    }
}

fn exp_factorial(e: &[u32]) -> Scalar {
    let mut s = Scalar::one();
    for &k in e {
        if k > 1 {
            s = &s * &Scalar::factorial(k);
        }
    }
    s
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        let mut p = Polynomial::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Polynomial::constant(nvars, Scalar::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Polynomial::monomial(e, Scalar::one())
    }

    pub fn monomial(exp: Exponent, c: Scalar) -> Self {
        let mut p = Polynomial::zero(exp.len());
        p.add_term(exp, c);
        p
    }

    /// Divided-power monomial `c · x^(e)`.
    pub fn divided_monomial(exp: Exponent, c: Scalar) -> Self {
        let f = exp_factorial(&exp);
        Polynomial::monomial(exp, &c / &f)
    }

    /// Linear form `Σ c_i x_i`.
    pub fn linear(coeffs: &[Scalar]) -> Self {
        let n = coeffs.len();
        let mut p = Polynomial::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn add_term(&mut self, exp: Exponent, c: Scalar) {
        assert_eq!(exp.len(), self.nvars, "exponent length");
        if c.is_zero() {
            return;
        }
        let remove = {
            let slot = self.terms.entry(exp.clone()).or_insert_with(Scalar::zero);
            *slot += &c;
            slot.is_zero()
        };
        if remove {
            self.terms.remove(&exp);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: &[u32]) -> Scalar {
        self.terms.get(exp).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Coefficient in divided-power form, `coeff · e!`.
    pub fn divided_coeff(&self, exp: &[u32]) -> Scalar {
        &self.coeff(exp) * &exp_factorial(exp)
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(Scalar::is_real)
    }

    pub fn field(&self) -> FieldTag {
        if self.is_real() {
            FieldTag::Rational
        } else {
            FieldTag::GaussianRational
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).min()
    }

    pub fn homogeneous_part(&self, k: u32) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(e, _)| e.iter().sum::<u32>() == k).map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }

    pub fn is_homogeneous(&self, k: u32) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<u32>() == k)
    }

    pub fn add(&self, o: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, o.nvars, "polynomial variable counts");
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, o: &Polynomial) -> Polynomial {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial { nvars: self.nvars, terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    pub fn mul(&self, o: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, o.nvars, "polynomial variable counts");
        let mut p = Polynomial::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1 * c2);
            }
        }
        p
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut p = Polynomial::one(self.nvars);
        for _ in 0..k {
            p = p.mul(self);
        }
        p
    }

    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut p = Polynomial::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut ne = e.clone();
                ne[i] -= 1;
                p.add_term(ne, c * &Scalar::from_int(e[i] as i64));
            }
        }
        p
    }

    pub fn eval(&self, x: &[Scalar]) -> Scalar {
        assert_eq!(x.len(), self.nvars, "evaluation point length");
        let mut s = Scalar::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t = &t * &xi.pow(k);
                }
            }
            s += t;
        }
        s
    }

    /// Substitute `x_i ↦ subs[i]`; all substitutes share a variable count.
    pub fn compose(&self, subs: &[Polynomial]) -> Polynomial {
        assert_eq!(subs.len(), self.nvars, "one substitute per variable");
        let m = subs.first().map_or(0, |s| s.nvars);
        let mut cache: Vec<Vec<Polynomial>> = subs.iter().map(|s| vec![Polynomial::one(m), s.clone()]).collect();
        let mut out = Polynomial::zero(m);
        for (e, c) in &self.terms {
            let mut t = Polynomial::constant(m, c.clone());
            for (i, &k) in e.iter().enumerate() {
                while cache[i].len() <= k as usize {
                    let next = cache[i].last().unwrap().mul(&subs[i]);
                    cache[i].push(next);
                }
                if k > 0 {
                    t = t.mul(&cache[i][k as usize]);
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Substitute a linear change `x ↦ M x`, i.e. `(f∘M)(x) = f(Mx)`.
    pub fn compose_linear(&self, m: &crate::linalg::Matrix) -> Polynomial {
        let subs: Vec<Polynomial> = (0..m.rows).map(|i| Polynomial::linear(m.row(i))).collect();
        self.compose(&subs)
    }

    /// Same polynomial in a larger ring; variable `i` becomes `map[i]`.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Polynomial {
        let mut p = Polynomial::zero(nvars);
        for (e, c) in &self.terms {
            let mut ne = vec![0; nvars];
            for (i, &k) in e.iter().enumerate() {
                ne[map[i]] += k;
            }
            p.add_term(ne, c.clone());
        }
        p
    }

    /// Real part of the coefficients.
    pub fn real_part(&self) -> Polynomial {
        let mut p = Polynomial::zero(self.nvars);
        for (e, c) in &self.terms {
            p.add_term(e.clone(), Scalar::from_rational(c.re.clone()));
        }
        p
    }

    /// Ordering of monomials inside one degree: exponent vectors compared
    /// position by position with zero ranked above every positive entry.
    fn display_key(e: &[u32]) -> (u32, Vec<u32>) {
        (e.iter().sum(), e.iter().map(|&k| if k == 0 { u32::MAX } else { k }).collect())
    }

    pub fn sorted_terms(&self) -> Vec<(&Exponent, &Scalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| Polynomial::display_key(a.0).cmp(&Polynomial::display_key(b.0)));
        v
    }

    pub fn to_divided(&self) -> String {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("x{i}")).collect();
        self.to_divided_with(&names)
    }

    /// Divided-power rendering: `x1x3 + x2^(2) + 1/2 x1^(4)`.
    pub fn to_divided_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let dc = c * &exp_factorial(e);
            let mono: String = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { names[i].clone() } else { format!("{}^({k})", names[i]) })
                .collect();
            let (neg, mag) = if dc.is_real() && dc.real_sign() < 0 { (true, -dc) } else { (false, dc) };
            let body = if mono.is_empty() {
                mag.to_string()
            } else if mag.is_one() {
                mono
            } else {
                format!("{mag} {mono}")
            };
            match (idx, neg) {
                (0, false) => out.push_str(&body),
                (0, true) => {
                    out.push('-');
                    out.push_str(&body);
                }
                (_, false) => {
                    out.push_str(" + ");
                    out.push_str(&body);
                }
                (_, true) => {
                    out.push_str(" - ");
                    out.push_str(&body);
                }
            }
        }
        out
    }

    /// Plain-power rendering `x1^2*x2`, used by LaTeX-like and tube output.
    pub fn to_plain_with(&self, names: &[String], latex: bool) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        names[i].clone()
                    } else if latex {
                        format!("{}^{{{k}}}", names[i])
                    } else {
                        format!("{}^{k}", names[i])
                    }
                })
                .collect();
            let mono = mono.join(if latex { " " } else { "" });
            let (neg, mag) = if c.is_real() && c.real_sign() < 0 { (true, -c.clone()) } else { (false, c.clone()) };
            let coeff = if latex && !mag.is_real() {
                mag.to_string()
            } else if latex && *mag.re.denom() != num_bigint::BigInt::from(1) {
                format!("\\frac{{{}}}{{{}}}", mag.re.numer(), mag.re.denom())
            } else {
                mag.to_string()
            };
            let body = if mono.is_empty() {
                coeff
            } else if mag.is_one() {
                mono
            } else {
                format!("{coeff}{}{mono}", if latex { " " } else { "*" })
            };
            let sep = match (idx, neg) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            out.push_str(sep);
            out.push_str(&body);
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let field = self.field();
        json!({
            "vars": self.nvars,
            "terms": self.terms.iter().map(|(e, c)| json!({"exp": e, "coeff": c.to_json(field)})).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Polynomial> {
        let n = v["vars"].as_u64().ok_or_else(|| Error::Parse("missing `vars`".into()))? as usize;
        let mut p = Polynomial::zero(n);
        let empty = Vec::new();
        for t in v.get("terms").and_then(Value::as_array).unwrap_or(&empty) {
            let exp: Exponent = t["exp"]
                .as_array()
                .ok_or_else(|| Error::Parse("term without `exp`".into()))?
                .iter()
                .map(|x| x.as_u64().map(|k| k as u32).ok_or_else(|| Error::Parse("bad exponent".into())))
                .collect::<Result<_>>()?;
            if exp.len() != n {
                return Err(Error::Parse("exponent length differs from `vars`".into()));
            }
            p.add_term(exp, Scalar::from_json(&t["coeff"])?);
        }
        Ok(p)
    }
}

/// Vector of polynomials, the coordinates of an element of an algebra over `F[x]`.
pub type PolyVector = Vec<Polynomial>;

pub fn poly_vec_zero(len: usize, nvars: usize) -> PolyVector {
    vec![Polynomial::zero(nvars); len]
}

pub fn poly_vec_is_zero(v: &[Polynomial]) -> bool {
    v.iter().all(Polynomial::is_zero)
}

/// `Σ_i x_i b_i` for vectors `b_i` of length `len`.
pub fn generic_element(basis: &[Vector], len: usize) -> PolyVector {
    let m = basis.len();
    let mut out = poly_vec_zero(len, m);
    for (i, b) in basis.iter().enumerate() {
        let xi = Polynomial::var(m, i);
        for (k, c) in b.iter().enumerate() {
            if !c.is_zero() {
                out[k] = out[k].add(&xi.scale(c));
            }
        }
    }
    out
}

/// Fully symmetric `k`-form stored on sorted index tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricTensor {
    pub order: usize,
    pub nvars: usize,
    entries: BTreeMap<Vec<usize>, Scalar>,
}

fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, k, i, cur, out);
            cur.pop();
        }
    }
    rec(n, k, 0, &mut cur, &mut out);
    out
}

impl SymmetricTensor {
    pub fn get(&self, idx: &[usize]) -> Scalar {
        let mut s = idx.to_vec();
        s.sort_unstable();
        self.entries.get(&s).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn nonzero_entries(&self) -> impl Iterator<Item = (&Vec<usize>, &Scalar)> {
        self.entries.iter()
    }

    /// Multilinear evaluation `ω(v₁, …, v_k)`.
    pub fn eval(&self, vs: &[Vector]) -> Scalar {
        assert_eq!(vs.len(), self.order);
        let mut total = Scalar::zero();
        fn rec(t: &SymmetricTensor, vs: &[Vector], pos: usize, idx: &mut Vec<usize>, coef: Scalar, total: &mut Scalar) {
            if pos == vs.len() {
                let e = t.get(idx);
                if !e.is_zero() {
                    *total += &coef * &e;
                }
                return;
            }
            for (i, c) in vs[pos].iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                idx.push(i);
                rec(t, vs, pos + 1, idx, &coef * c, total);
                idx.pop();
            }
        }
        rec(self, vs, 0, &mut Vec::new(), Scalar::one(), &mut total);
        total
    }

    /// Contract the last slot against `z`, leaving the vector `k ↦ ω(…, e_k)` when `z` is `None`.
    pub fn slot_vector(&self, head: &[usize]) -> Vector {
        (0..self.nvars)
            .map(|k| {
                let mut idx = head.to_vec();
                idx.push(k);
                self.get(&idx)
            })
            .collect()
    }
}

/// Polarization of a homogeneous degree-`k` polynomial through the subset
/// finite-difference formula `ω(v₁..v_k) = Σ_{S} (−1)^{k−|S|} f(Σ_{i∈S} v_i)`,
/// so that `ω(x,…,x) = k!·f(x)`.
pub fn polarize(f: &Polynomial, k: usize) -> SymmetricTensor {
    let n = f.nvars;
    let fk = f.homogeneous_part(k as u32);
    let mut entries = BTreeMap::new();
    if k == 0 {
        let c = fk.coeff(&vec![0; n]);
        if !c.is_zero() {
            entries.insert(Vec::new(), c);
        }
        return SymmetricTensor { order: 0, nvars: n, entries };
    }
    for idx in multisets(n, k) {
        let mut total = Scalar::zero();
        for mask in 1u32..(1 << k) {
            let mut point = vec![Scalar::zero(); n];
            for (bit, &i) in idx.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    point[i] += Scalar::one();
                }
            }
            let v = fk.eval(&point);
            if (k as u32 - mask.count_ones()) % 2 == 0 {
                total += v;
            } else {
                total -= &v;
            }
        }
        if !total.is_zero() {
            entries.insert(idx, total);
        }
    }
    SymmetricTensor { order: k, nvars: n, entries }
}

/// Gram matrix of the symmetric 2-form obtained by polarizing `f_[2]`.
pub fn gram_matrix(q: &Polynomial) -> crate::linalg::Matrix {
    let t = polarize(q, 2);
    let n = q.nvars;
    let mut m = crate::linalg::Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = t.get(&[i, j]);
        }
    }
    m
}
