//! Normal-form functions `ψ` of tube bases assembled block by block from a D-invariant.

use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::dinv::{im_type, BlockType, DInvariant};
use crate::error::{Error, Result};
use crate::forms::{signature, signature_of_pana, Pointing, Signature, SymmetricForm};
use crate::interval::{cos_sin, exp, Interval};
use crate::nilpoly::{extended_nil_polynomial, extended_pointing};
use crate::algebra::cyclic_algebra;
use crate::poly::{gram_matrix, Polynomial};
use crate::scalar::{FieldTag, Scalar};

/// One summand of `ψ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Block {
    /// `ψ(x) = e^{x₀} f(x₁,…,x_n)` with `f` an extended real nil-polynomial; `λ = (s+t)x₀`.
    K { s: usize, t: usize, f: Polynomial },
    /// `ψ(z) = Re(e^{z₀} f(z₁,…,z_n))` with `f` an extended complex nil-polynomial; `λ = m(z₀+z̄₀)`.
    L { m: usize, f: Polynomial },
}

impl Block {
    pub fn block_type(&self) -> BlockType {
        match self {
            Block::K { s, t, .. } => BlockType::K(*s, *t),
            Block::L { m, .. } => BlockType::L(*m),
        }
    }

    /// Coordinates of the block, counting complex ones once.
    pub fn arity(&self) -> usize {
        match self {
            Block::K { f, .. } | Block::L { f, .. } => f.nvars + 1,
        }
    }

    /// Representative of `Ψ_{j^opp} = −Ψ_j`.
    pub fn opposite(&self) -> Block {
        match self {
            Block::K { s, t, f } => Block::K { s: *t, t: *s, f: f.neg() },
            Block::L { .. } => self.clone(),
        }
    }

    fn is_trivial(&self) -> bool {
        matches!(self, Block::K { s, t, .. } if s + t == 1) || matches!(self, Block::L { m: 1, .. })
    }
}

/// `(1,0)` or `(0,1)` block: `ψ = ±e^{x₀}`.
pub fn trivial_block(positive: bool) -> Block {
    let c = if positive { Scalar::one() } else { Scalar::from_int(-1) };
    if positive {
        Block::K { s: 1, t: 0, f: Polynomial::constant(0, c) }
    } else {
        Block::K { s: 0, t: 1, f: Polynomial::constant(0, c) }
    }
}

pub fn psi_k_block(p: &Pointing, s: usize, t: usize) -> Result<Block> {
    if p.field() != FieldTag::Rational {
        return Err(Error::FieldMismatch("K-blocks need a real pointed algebra".into()));
    }
    let sig = signature_of_pana(p)?;
    if sig.pq() != (s, t) {
        return Err(Error::TypeMismatch(format!("pointed algebra has type {sig}, requested ({s},{t})")));
    }
    Ok(Block::K { s, t, f: extended_nil_polynomial(p)? })
}

/// L-block from a complex pointed algebra of dimension `m − 1`; `None` gives `m = 1`.
pub fn psi_l_block(p: Option<&Pointing>, m: usize) -> Result<Block> {
    match p {
        None if m == 1 => Ok(Block::L { m: 1, f: Polynomial::one(0) }),
        None => Err(Error::BlockMismatch(format!("L{m} needs a pointed algebra"))),
        Some(p) => {
            if p.field() != FieldTag::GaussianRational {
                return Err(Error::FieldMismatch("L-blocks need a complex pointed algebra".into()));
            }
            if p.dim() + 1 != m {
                return Err(Error::BlockMismatch(format!("L{m} needs dimension {}, got {}", m - 1, p.dim())));
            }
            Ok(Block::L { m, f: extended_nil_polynomial(p)? })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TubeEquationSpec {
    pub blocks: Vec<Block>,
    pub dinv: DInvariant,
}

impl TubeEquationSpec {
    pub fn pq(&self) -> (usize, usize) {
        self.dinv.pq()
    }

    fn from_blocks(blocks: Vec<Block>) -> Self {
        let mut dinv = DInvariant::new();
        for b in &blocks {
            dinv.add(b.block_type(), 1);
        }
        TubeEquationSpec { blocks, dinv }
    }

    pub fn is_cartan(&self) -> bool {
        self.blocks.iter().all(Block::is_trivial)
    }
}

/// Assembles `ψ = Σ_α ψ_α`; one pointed algebra per block of dimension > 1, in the canonical block order.
/// A real algebra of the opposite type is accepted with its pointing negated.
pub fn psi_for(d: &DInvariant, panas: &[Pointing]) -> Result<TubeEquationSpec> {
    let mut it = panas.iter();
    let mut blocks = Vec::new();
    for (b, mult) in d.blocks() {
        for _ in 0..mult {
            let block = match b {
                BlockType::K(1, 0) => trivial_block(true),
                BlockType::K(0, 1) => trivial_block(false),
                BlockType::K(s, t) => {
                    let p = it.next().ok_or_else(|| Error::BlockMismatch(format!("missing algebra for ({s},{t})")))?;
                    if p.dim() + 1 != s + t {
                        return Err(Error::BlockMismatch(format!("({s},{t}) needs dimension {}, got {}", s + t - 1, p.dim())));
                    }
                    let sig = signature_of_pana(p).map_err(|e| Error::BlockMismatch(e.to_string()))?;
                    if sig.pq() == (s, t) {
                        psi_k_block(p, s, t)?
                    } else if sig.pq() == (t, s) {
                        psi_k_block(&p.scaled(&Scalar::from_int(-1)), s, t)?
                    } else {
                        return Err(Error::BlockMismatch(format!("({s},{t}) got an algebra of type {sig}")));
                    }
                }
                BlockType::L(1) => psi_l_block(None, 1)?,
                BlockType::L(m) => {
                    let p = it.next().ok_or_else(|| Error::BlockMismatch(format!("missing algebra for L{m}")))?;
                    psi_l_block(Some(p), m).map_err(|e| match e {
                        Error::FieldMismatch(_) | Error::BlockMismatch(_) => Error::BlockMismatch(e.to_string()),
                        other => other,
                    })?
                }
            };
            blocks.push(block);
        }
    }
    if it.next().is_some() {
        return Err(Error::BlockMismatch("more algebras than blocks".into()));
    }
    Ok(TubeEquationSpec { blocks, dinv: d.clone() })
}

/// Blocks `ℓ·L1`, `(p−ℓ)·(1,0)`, `(q−ℓ)·(0,1)` in that order.
pub fn cartan_equation(p: usize, q: usize, l: usize) -> Result<TubeEquationSpec> {
    if l > p.min(q) {
        return Err(Error::RangeError(format!("ℓ = {l} exceeds min(p,q) = {}", p.min(q))));
    }
    let mut blocks = vec![Block::L { m: 1, f: Polynomial::one(0) }; l];
    blocks.extend((0..p - l).map(|_| trivial_block(true)));
    blocks.extend((0..q - l).map(|_| trivial_block(false)));
    Ok(TubeEquationSpec::from_blocks(blocks))
}

/// Pointed algebra used for a block by default: the extended algebra of a diagonal
/// quadratic form for `K(s,t)`, the complex cyclic algebra of nil-index `m−1` for `L(m)`.
pub fn standard_block_pana(b: BlockType) -> Option<Pointing> {
    match b {
        BlockType::K(s, t) if s >= 1 && t >= 1 => {
            let n = s + t - 2;
            let mut q = Polynomial::zero(n);
            for i in 0..n {
                let c = if i < s - 1 { Scalar::from_ratio(1, 2) } else { Scalar::from_ratio(-1, 2) };
                q = q.add(&Polynomial::var(n, i).pow(2).scale(&c));
            }
            if n == 0 {
                let mut a = crate::algebra::Algebra::zero_product(FieldTag::Rational, 1);
                a.labels = vec!["a".into()];
                return Pointing::new(a, vec![Scalar::one()]).ok();
            }
            extended_pointing(&q).ok()
        }
        BlockType::L(m) if m >= 2 => Pointing::canonical(cyclic_algebra(FieldTag::GaussianRational, m - 1).algebra).ok(),
        _ => None,
    }
}

pub fn standard_panas(d: &DInvariant) -> Vec<Pointing> {
    d.blocks().flat_map(|(b, mult)| std::iter::repeat_n(b, mult)).filter_map(standard_block_pana).collect()
}

/// Quadratic part of `e^{x₀}f` at the origin: `f₀x₀²/2 + x₀f₁ + f₂` in variables `(x₀, x₁, …)`.
fn quadratic_part(f: &Polynomial) -> Polynomial {
    let n = f.nvars + 1;
    let shift: Vec<usize> = (1..n).collect();
    let lift = |p: Polynomial| p.embed(n, &shift);
    let x0 = Polynomial::var(n, 0);
    let f0 = f.homogeneous_part(0);
    lift(f0)
        .mul(&x0.pow(2))
        .scale(&Scalar::from_ratio(1, 2))
        .add(&x0.mul(&lift(f.homogeneous_part(1))))
        .add(&lift(f.homogeneous_part(2)))
}

/// Real quadratic form of `ψ` near 0, in real coordinates (`u, v` for complex blocks).
pub fn hessian_quadratic(spec: &TubeEquationSpec) -> Polynomial {
    let parts: Vec<Polynomial> = spec
        .blocks
        .iter()
        .map(|b| match b {
            Block::K { f, .. } => quadratic_part(f),
            Block::L { f, .. } => {
                let qc = quadratic_part(f);
                let k = qc.nvars;
                let subs: Vec<Polynomial> = (0..k)
                    .map(|i| Polynomial::var(2 * k, i).add(&Polynomial::var(2 * k, k + i).scale(&Scalar::i())))
                    .collect();
                qc.compose(&subs).real_part()
            }
        })
        .collect();
    let total: usize = parts.iter().map(|p| p.nvars).sum();
    let mut out = Polynomial::zero(total);
    let mut off = 0;
    for p in parts {
        let map: Vec<usize> = (off..off + p.nvars).collect();
        off += p.nvars;
        out = out.add(&p.embed(total, &map));
    }
    out
}

pub fn hessian_signature_at_origin(spec: &TubeEquationSpec) -> Result<Signature> {
    signature(&SymmetricForm::new(gram_matrix(&hessian_quadratic(spec)))?)
}

/// Coordinates of a point: real values for K-blocks, complex values for L-blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvaluationPoint {
    pub blocks: Vec<Vec<Scalar>>,
}

/// Verified enclosure of a real value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub value: Interval,
    pub precision: u32,
}

impl Evaluation {
    pub fn to_decimal(&self) -> String {
        self.value.to_decimal(self.precision)
    }
}

fn check_point(spec: &TubeEquationSpec, point: &EvaluationPoint) -> Result<()> {
    if point.blocks.len() != spec.blocks.len() {
        return Err(Error::DimensionMismatch(format!("{} blocks expected, got {}", spec.blocks.len(), point.blocks.len())));
    }
    for (b, x) in spec.blocks.iter().zip(&point.blocks) {
        if x.len() != b.arity() {
            return Err(Error::DimensionMismatch(format!("block {} needs {} coordinates", b.block_type(), b.arity())));
        }
        if matches!(b, Block::K { .. }) && !x.iter().all(Scalar::is_real) {
            return Err(Error::DimensionMismatch("K-block coordinates must be real".into()));
        }
    }
    Ok(())
}

fn psi_interval(spec: &TubeEquationSpec, point: &EvaluationPoint, digits: u32) -> Interval {
    let mut total = Interval::zero();
    for (b, x) in spec.blocks.iter().zip(&point.blocks) {
        match b {
            Block::K { f, .. } => {
                let fv = f.eval(&x[1..]);
                total = total.add(&exp(&x[0].re, digits).scale(&fv.re));
            }
            Block::L { f, .. } => {
                let fv = f.eval(&x[1..]);
                let e = exp(&x[0].re, digits);
                let (c, s) = cos_sin(&x[0].im, digits);
                let re = c.scale(&fv.re).sub(&s.scale(&fv.im));
                total = total.add(&e.mul(&re));
            }
        }
    }
    total
}

/// `ψ(0)`, exactly.
pub fn psi_at_origin(spec: &TubeEquationSpec) -> BigRational {
    spec.blocks
        .iter()
        .map(|b| match b {
            Block::K { f, .. } | Block::L { f, .. } => f.eval(&vec![Scalar::zero(); f.nvars]).re,
        })
        .fold(BigRational::zero(), |a, b| a + b)
}

fn enclose(spec: &TubeEquationSpec, point: &EvaluationPoint, precision: u32, shift: &BigRational) -> Result<Evaluation> {
    if precision == 0 {
        return Err(Error::RangeError("precision must be at least 1".into()));
    }
    check_point(spec, point)?;
    let target = BigRational::new(1.into(), num_traits::pow(num_bigint::BigInt::from(10), precision as usize));
    let mut guard = 6;
    loop {
        let v = psi_interval(spec, point, precision + guard);
        let v = Interval::new(&v.lo - shift, &v.hi - shift);
        if v.width() <= target {
            return Ok(Evaluation { value: v, precision });
        }
        guard += 10;
        if guard > 400 {
            return Err(Error::PreconditionFailed("could not reach the requested precision".into()));
        }
    }
}

/// Enclosure of `ψ(point)`, of width at most `10^{−precision}`.
pub fn evaluate_psi(spec: &TubeEquationSpec, point: &EvaluationPoint, precision: u32) -> Result<Evaluation> {
    enclose(spec, point, precision, &BigRational::zero())
}

/// Enclosure of `ψ(point) − ψ(0)`, of width at most `10^{−precision}`.
pub fn evaluate(spec: &TubeEquationSpec, point: &EvaluationPoint, precision: u32) -> Result<Evaluation> {
    enclose(spec, point, precision, &psi_at_origin(spec))
}

/// `λ_D` at a point, exactly.
pub fn lambda(spec: &TubeEquationSpec, point: &EvaluationPoint) -> Result<BigRational> {
    check_point(spec, point)?;
    let mut s = BigRational::zero();
    for (b, x) in spec.blocks.iter().zip(&point.blocks) {
        match b {
            Block::K { s: p, t: q, .. } => s += &x[0].re * BigRational::from_integer((p + q).into()),
            Block::L { m, .. } => s += &x[0].re * BigRational::from_integer((2 * m).into()),
        }
    }
    Ok(s)
}

/// Output format of [`emit`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Latex,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "latex" | "latex-like" => Ok(Format::Latex),
            other => Err(Error::UnknownFormat(other.into())),
        }
    }
}

/// Coordinate names: `t_k` for `(1,0)`/`(0,1)` blocks, `z_k` for `L1` blocks, `x_{a,j}`/`z_{a,j}` otherwise.
pub fn coordinate_names(spec: &TubeEquationSpec) -> Vec<Vec<String>> {
    let (mut tk, mut zk, mut a) = (0, 0, 0);
    spec.blocks
        .iter()
        .map(|b| match b {
            Block::K { s, t, .. } if s + t == 1 => {
                tk += 1;
                vec![format!("t_{tk}")]
            }
            Block::L { m: 1, .. } => {
                zk += 1;
                vec![format!("z_{zk}")]
            }
            Block::K { f, .. } => {
                a += 1;
                (0..=f.nvars).map(|j| format!("x_{{{a},{j}}}")).collect()
            }
            Block::L { f, .. } => {
                a += 1;
                (0..=f.nvars).map(|j| format!("z_{{{a},{j}}}")).collect()
            }
        })
        .collect()
}

fn block_term(b: &Block, names: &[String], latex: bool) -> (bool, String) {
    let e = |v: &str| if latex { format!("\\mathrm{{e}}^{{{v}}}") } else { format!("e^{{{v}}}") };
    let re = if latex { "\\operatorname{Re}" } else { "Re" };
    match b {
        Block::K { f, .. } if f.nvars == 0 => {
            let c = f.coeff(&[]);
            let neg = c.real_sign() < 0;
            let mag = if neg { -c } else { c };
            let body = if mag.is_one() { e(&names[0]) } else { format!("{mag}{}{}", if latex { " " } else { "*" }, e(&names[0])) };
            (neg, body)
        }
        Block::K { f, .. } => (false, format!("{}({})", e(&names[0]), f.to_plain_with(&names[1..], latex))),
        Block::L { f, .. } if f.nvars == 0 => (false, format!("{re}({})", e(&names[0]))),
        Block::L { f, .. } => (false, format!("{re}({}({}))", e(&names[0]), f.to_plain_with(&names[1..], latex))),
    }
}

fn join_terms(terms: &[(bool, String)]) -> String {
    let mut out = String::new();
    for (i, (neg, t)) in terms.iter().enumerate() {
        match (i, neg) {
            (0, false) => out.push_str(t),
            (0, true) => {
                out.push('-');
                out.push_str(t);
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(t);
            }
            (_, true) => {
                out.push_str(" - ");
                out.push_str(t);
            }
        }
    }
    out
}

fn psi_text(spec: &TubeEquationSpec, latex: bool) -> String {
    let names = coordinate_names(spec);
    let terms: Vec<(bool, String)> = spec.blocks.iter().zip(&names).map(|(b, n)| block_term(b, n, latex)).collect();
    if terms.is_empty() {
        "0".into()
    } else {
        join_terms(&terms)
    }
}

fn lambda_text(spec: &TubeEquationSpec, latex: bool) -> String {
    let names = coordinate_names(spec);
    let bar = |z: &str| if latex { format!("\\overline{{{z}}}") } else { format!("conj({z})") };
    let terms: Vec<String> = spec
        .blocks
        .iter()
        .zip(&names)
        .map(|(b, n)| match b {
            Block::K { s, t, .. } if s + t == 1 => n[0].clone(),
            Block::K { s, t, .. } => format!("{}{}", s + t, if latex { format!(" {}", n[0]) } else { format!("*{}", n[0]) }),
            Block::L { m: 1, .. } => format!("({} + {})", n[0], bar(&n[0])),
            Block::L { m, .. } => format!("{m}({} + {})", n[0], bar(&n[0])),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// The Cartan-type balance `Σ Re(e^{z_k}) + Σ e^{t_k} = Σ e^{t_{p−ℓ+k}}`, `0` for an empty side.
fn cartan_balance(spec: &TubeEquationSpec, latex: bool) -> String {
    let names = coordinate_names(spec);
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for (b, n) in spec.blocks.iter().zip(&names) {
        let (neg, t) = block_term(b, n, latex);
        if neg {
            rhs.push((false, t));
        } else {
            lhs.push((false, t));
        }
    }
    let side = |v: &[(bool, String)]| if v.is_empty() { "0".to_string() } else { join_terms(v) };
    format!("{} = {}", side(&lhs), side(&rhs))
}

pub fn im_annotation(spec: &TubeEquationSpec) -> Option<String> {
    im_type(&spec.dinv).ok().map(|t| t.to_string())
}

pub fn emit(spec: &TubeEquationSpec, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(&spec_to_json(spec)).expect("serializable"),
        Format::Text | Format::Latex => {
            let latex = format == Format::Latex;
            let (p, q) = spec.pq();
            let psi = if latex { "\\psi" } else { "psi" };
            let mut lines = vec![format!("D = {}", spec.dinv), format!("type ({p},{q})")];
            if let Some(t) = im_annotation(spec) {
                lines.push(format!("Isaev-Mishchenko {t}"));
            }
            lines.push(format!("{psi} = {}", psi_text(spec, latex)));
            lines.push(format!("V: {} = 0", lambda_text(spec, latex)));
            if spec.is_cartan() {
                lines.push(format!("F: {}", cartan_balance(spec, latex)));
            } else {
                lines.push(format!("F: {psi}(x) - {psi}(0) = 0, {psi}(0) = {}", Scalar::fmt_rational(&psi_at_origin(spec))));
            }
            lines.join("\n") + "\n"
        }
    }
}

pub fn spec_to_json(spec: &TubeEquationSpec) -> Value {
    let (p, q) = spec.pq();
    let names = coordinate_names(spec);
    json!({
        "dinv": spec.dinv.to_string(),
        "p": p,
        "q": q,
        "im_type": im_annotation(spec),
        "blocks": spec.blocks.iter().zip(&names).map(|(b, n)| match b {
            Block::K { s, t, f } => json!({"kind": "K", "s": s, "t": t, "coords": n, "f": f.to_json()}),
            Block::L { m, f } => json!({"kind": "L", "m": m, "coords": n, "f": f.to_json()}),
        }).collect::<Vec<_>>(),
        "psi": psi_text(spec, false),
        "lambda": lambda_text(spec, false),
    })
}

pub fn spec_from_json(v: &Value) -> Result<TubeEquationSpec> {
    let bad = |m: &str| Error::Parse(m.to_string());
    let dinv: DInvariant = v["dinv"].as_str().ok_or_else(|| bad("missing `dinv`"))?.parse()?;
    let mut blocks = Vec::new();
    for b in v["blocks"].as_array().ok_or_else(|| bad("missing `blocks`"))? {
        let f = Polynomial::from_json(&b["f"])?;
        let num = |k: &str| b[k].as_u64().map(|x| x as usize).ok_or_else(|| bad("bad block entry"));
        match b["kind"].as_str() {
            Some("K") => blocks.push(Block::K { s: num("s")?, t: num("t")?, f }),
            Some("L") => blocks.push(Block::L { m: num("m")?, f }),
            _ => return Err(bad("unknown block kind")),
        }
    }
    let spec = TubeEquationSpec { blocks, dinv };
    let mut check = DInvariant::new();
    for b in &spec.blocks {
        check.add(b.block_type(), 1);
    }
    if check != spec.dinv {
        return Err(Error::BlockMismatch("blocks do not match the D-invariant".into()));
    }
    Ok(spec)
}
