use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use nilforge::algebra::{Algebra, GradedAlgebra};
use nilforge::dinv::{enumerate_dinvariants, im_type, tube_class_count, DInvariant};
use nilforge::forms::{signature_of_pana, Pointing};
use nilforge::homog::{
    graded_projection_map, homogeneity_fields, lower_central_dims, precondition_check, transitivity_witness, verify_witness,
    FormalSeries, Precondition,
};
use nilforge::iso::{find_isomorphism, fingerprint, IsoOutcome};
use nilforge::linalg::{Matrix, Subspace};
use nilforge::matrix::{dim_bounds_check, mansa_from_pana, middle_signature, verify_bd_axioms, verify_realization, Case};
use nilforge::nilpoly::{
    cyclic_nil_polynomial, nil_polynomial, parts_json, quartic_invariant, reconstruct_from_2_3, table1_row, CubicDatum,
    QuarticInvariant, Reconstruction,
};
use nilforge::poly::Polynomial;
use nilforge::tube::{
    cartan_equation, emit, evaluate, hessian_signature_at_origin, lambda, psi_for, spec_to_json, standard_panas, EvaluationPoint,
    Format, TubeEquationSpec,
};
use nilforge::{Error, Scalar};

const DEFAULT_PRECISION: u32 = 30;

#[derive(Parser)]
#[command(name = "nilforge", version, about = "Exact computations with commutative nilpotent algebras")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Algebra files: validation, invariants, isomorphism search.
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Nil-polynomials.
    #[command(subcommand)]
    Nilpoly(NilpolyCmd),
    /// D-invariants and tube-class counts.
    #[command(subcommand)]
    Dinv(DinvCmd),
    /// Normal-form tube equations.
    #[command(subcommand)]
    Tube(TubeCmd),
    /// Affine homogeneity of graded projection maps.
    #[command(subcommand)]
    Homog(HomogCmd),
    /// Matrix realizations.
    #[command(subcommand)]
    Mansa(MansaCmd),
}

#[derive(Subcommand)]
enum AlgebraCmd {
    Validate { file: PathBuf },
    Fingerprint { file: PathBuf },
    Iso {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 5000)]
        budget: usize,
    },
}

#[derive(Subcommand)]
enum NilpolyCmd {
    /// Nil-polynomial of a pointed algebra file.
    Generate { file: PathBuf },
    /// Rebuild from polynomial JSON, either `{"q": .., "c": ..}` or a single polynomial.
    Reconstruct { file: PathBuf },
    /// Degree, quadratic type and quartic invariant of a polynomial JSON file.
    Invariants { file: PathBuf },
    /// Cyclic nil-polynomial of degree `n`.
    Table1 {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Args)]
struct PqArgs {
    #[arg(long)]
    p: usize,
    #[arg(long)]
    q: usize,
}

#[derive(Subcommand)]
enum DinvCmd {
    Enumerate(PqArgs),
    Count(PqArgs),
    Imtype {
        #[arg(long)]
        dinv: String,
    },
}

#[derive(Args)]
struct SpecArgs {
    /// D-invariant, e.g. `(3,2)+L1`.
    #[arg(long)]
    dinv: String,
    /// Comma-separated algebra files, one per nontrivial block; standard algebras when omitted.
    #[arg(long, value_delimiter = ',')]
    pana: Vec<PathBuf>,
}

#[derive(Subcommand)]
enum TubeCmd {
    Emit {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value = "text")]
        format: String,
    },
    Cartan {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        l: usize,
    },
    Hessian {
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// `ψ(x) − ψ(0)` and `λ(x)` at a point; blocks separated by `;`, coordinates by `,`, complex values as `re:im`.
    Eval {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Decimal digits; defaults to NILFORGE_PRECISION or 30.
        #[arg(long)]
        precision: Option<u32>,
    },
}

#[derive(Subcommand)]
enum HomogCmd {
    Witness {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long, default_value = "exp")]
        series: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    Fields {
        #[arg(long)]
        algebra: PathBuf,
    },
}

#[derive(Subcommand)]
enum MansaCmd {
    Build {
        #[arg(long)]
        pana: PathBuf,
        #[arg(long, default_value = "complex")]
        case: String,
        #[arg(long)]
        verify: bool,
    },
}

enum Failure {
    Domain(Error),
    Io(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome = Result<(String, Value), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((text, value)) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
            } else {
                print!("{text}");
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            match f {
                Failure::Domain(e) => eprintln!("error: {}: {e}", e.name()),
                Failure::Io(m) => eprintln!("error: IoError: {m}"),
                Failure::Verification(m) => eprintln!("error: VerificationFailed: {m}"),
            }
            ExitCode::from(1)
        }
    }
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Algebra(c) => algebra_cmd(c),
        Command::Nilpoly(c) => nilpoly_cmd(c),
        Command::Dinv(c) => dinv_cmd(c),
        Command::Tube(c) => tube_cmd(c),
        Command::Homog(c) => homog_cmd(c),
        Command::Mansa(c) => mansa_cmd(c),
    }
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let s = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&s).map_err(|e| Error::Parse(format!("{}: {e}", path.display())).into())
}

fn load_algebra(path: &Path) -> Result<Algebra, Failure> {
    Ok(Algebra::from_json(&read_json(path)?)?)
}

fn load_pointing(path: &Path) -> Result<Pointing, Failure> {
    Ok(Pointing::from_json(&read_json(path)?)?)
}

fn load_poly(v: &Value) -> Result<Polynomial, Failure> {
    Ok(Polynomial::from_json(v)?)
}

fn matrix_text(m: &Matrix) -> String {
    (0..m.rows).map(|i| m.row(i).iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")).collect::<Vec<_>>().join("\n")
}

fn vector_text(v: &[Scalar]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn vector_json(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(|s| Value::String(s.to_string())).collect())
}

fn parse_scalar(s: &str) -> Result<Scalar, Failure> {
    match s.split_once(':') {
        Some((re, im)) => Ok(&re.trim().parse::<Scalar>()? + &(&Scalar::i() * &im.trim().parse::<Scalar>()?)),
        None => Ok(s.trim().parse()?),
    }
}

fn parse_vector(s: &str) -> Result<Vec<Scalar>, Failure> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_scalar).collect()
}

fn algebra_cmd(c: AlgebraCmd) -> Outcome {
    match c {
        AlgebraCmd::Validate { file } => {
            let a = load_algebra(&file)?;
            let nu = a.nil_index()?;
            let ann = a.annihilator().dim();
            let text = format!("valid: dim {}, nil-index {nu}, annihilator dim {ann}\n", a.dim);
            Ok((text, json!({"valid": true, "dim": a.dim, "nil_index": nu, "ann_dim": ann, "field": a.field.name()})))
        }
        AlgebraCmd::Fingerprint { file } => {
            let f = fingerprint(&load_algebra(&file)?)?;
            let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
            let mut text = format!(
                "dim {}\nnil-index {}\npower dims {}\nannihilator dim {}\nsquare ranks {}\n",
                f.dim,
                f.nil_index,
                join(&f.power_dims),
                f.ann_dim,
                join(&f.square_ranks)
            );
            if let Some((p, q)) = f.signature {
                text.push_str(&format!("signature ({p},{q})\n"));
            }
            Ok((text, serde_json::to_value(&f).expect("serializable")))
        }
        AlgebraCmd::Iso { a, b, budget } => {
            let (a, b) = (load_algebra(&a)?, load_algebra(&b)?);
            if a.dim == b.dim && a.is_isomorphism_to(&b, &Matrix::identity(a.dim)) {
                return Ok(("iso (identity)\n".into(), json!({"result": "iso", "identity": true, "map": Matrix::identity(a.dim).to_json()})));
            }
            Ok(match find_isomorphism(&a, &b, budget) {
                IsoOutcome::Iso(m) => (format!("iso\n{}\n", matrix_text(&m)), json!({"result": "iso", "identity": false, "map": m.to_json()})),
                IsoOutcome::Distinct(why) => (format!("distinct ({why})\n"), json!({"result": "distinct", "invariant": why})),
                IsoOutcome::Unknown => ("unknown (budget exhausted)\n".into(), json!({"result": "unknown", "budget": budget})),
            })
        }
    }
}

fn nilpoly_cmd(c: NilpolyCmd) -> Outcome {
    match c {
        NilpolyCmd::Generate { file } => {
            let f = nil_polynomial(&load_pointing(&file)?, None)?;
            let mut text = format!("f = {}\n", f.poly.to_divided());
            for k in 2..=f.degree {
                text.push_str(&format!("f[{k}] = {}\n", f.part(k).to_divided()));
            }
            let mut v = serde_json::to_value(parts_json(&f)).expect("serializable");
            v["poly"] = f.poly.to_json();
            Ok((text, v))
        }
        NilpolyCmd::Reconstruct { file } => {
            let v = read_json(&file)?;
            let datum = if v.get("q").is_some() && v.get("c").is_some() {
                CubicDatum::new(load_poly(&v["q"])?, load_poly(&v["c"])?)?
            } else {
                CubicDatum::of(&load_poly(&v)?)?
            };
            Ok(match reconstruct_from_2_3(&datum)? {
                Reconstruction::Member(f) => {
                    (format!("member\nf = {}\n", f.poly.to_divided()), json!({"member": true, "display": f.poly.to_divided(), "poly": f.poly.to_json()}))
                }
                Reconstruction::NotInCq(why) => (format!("not a nil-polynomial: {why}\n"), json!({"member": false, "reason": why})),
            })
        }
        NilpolyCmd::Invariants { file } => {
            let f = load_poly(&read_json(&file)?)?;
            let degree = f.degree().unwrap_or(0);
            let datum = CubicDatum::of(&f).ok();
            let quad = signature_of_quadratic(&f);
            let (qtext, qjson) = match quartic_invariant(&f) {
                QuarticInvariant::Phi(phi) => (format!("phi = {phi}"), json!({"kind": "phi", "value": phi.to_string()})),
                QuarticInvariant::G3Zero => ("g3 = 0".to_string(), json!({"kind": "g3_zero"})),
                QuarticInvariant::NotBinary(k) => (format!("quartic part in {k} essential variables"), json!({"kind": "not_binary", "essential": k})),
            };
            let mut text = format!("variables {}\ndegree {degree}\n", f.nvars);
            if let Some((p, q)) = quad {
                text.push_str(&format!("quadratic type ({p},{q})\n"));
            }
            text.push_str(&format!("nondegenerate quadratic part {}\n{qtext}\n", datum.is_some()));
            let v = json!({
                "vars": f.nvars,
                "degree": degree,
                "quadratic_type": quad.map(|(p, q)| json!([p, q])),
                "nondegenerate": datum.is_some(),
                "quartic": qjson,
            });
            Ok((text, v))
        }
        NilpolyCmd::Table1 { n } => {
            let row = table1_row(n)?;
            let f = cyclic_nil_polynomial(n)?;
            Ok((format!("{row}\n"), json!({"n": n, "row": row, "poly": f.poly.to_json()})))
        }
    }
}

fn signature_of_quadratic(f: &Polynomial) -> Option<(usize, usize)> {
    use nilforge::forms::{signature, SymmetricForm};
    let form = SymmetricForm::new(nilforge::poly::gram_matrix(&f.homogeneous_part(2))).ok()?;
    signature(&form).ok().map(|s| s.pq())
}

fn dinv_cmd(c: DinvCmd) -> Outcome {
    match c {
        DinvCmd::Enumerate(PqArgs { p, q }) => {
            let all = enumerate_dinvariants(p, q);
            let text: String = all.iter().map(|d| format!("{d}\n")).collect();
            Ok((text, json!({"p": p, "q": q, "count": all.len(), "dinvariants": all.iter().map(DInvariant::to_json).collect::<Vec<_>>()})))
        }
        DinvCmd::Count(PqArgs { p, q }) => {
            let c = tube_class_count(p, q)?;
            Ok((format!("{c}\n"), json!({"p": p, "q": q, "count": c.to_json()})))
        }
        DinvCmd::Imtype { dinv } => {
            let d: DInvariant = dinv.parse()?;
            let t = im_type(&d)?;
            Ok((format!("{t}\n"), t.to_json()))
        }
    }
}

fn build_spec(args: &SpecArgs) -> Result<TubeEquationSpec, Failure> {
    let d: DInvariant = args.dinv.parse()?;
    let panas = if args.pana.is_empty() {
        standard_panas(&d)
    } else {
        args.pana.iter().map(|p| load_pointing(p)).collect::<Result<Vec<_>, _>>()?
    };
    Ok(psi_for(&d, &panas)?)
}

fn precision() -> Result<u32, Failure> {
    match std::env::var("NILFORGE_PRECISION") {
        Ok(s) => s.trim().parse().map_err(|_| Error::Parse(format!("NILFORGE_PRECISION: `{s}` is not a digit count")).into()),
        Err(_) => Ok(DEFAULT_PRECISION),
    }
}

fn tube_cmd(c: TubeCmd) -> Outcome {
    match c {
        TubeCmd::Emit { spec, format } => {
            let s = build_spec(&spec)?;
            let format: Format = format.parse()?;
            Ok((emit(&s, format), spec_to_json(&s)))
        }
        TubeCmd::Cartan { p, q, l } => {
            let s = cartan_equation(p, q, l)?;
            Ok((emit(&s, Format::Text), spec_to_json(&s)))
        }
        TubeCmd::Hessian { spec } => {
            let s = build_spec(&spec)?;
            let sig = hessian_signature_at_origin(&s)?;
            let (p, q) = s.pq();
            let text = format!("Hessian at 0 on V: {sig}\ntype ({p},{q})\n");
            Ok((text, json!({"p": sig.p, "q": sig.q, "z": sig.z, "type": [p, q]})))
        }
        TubeCmd::Eval { spec, point, precision: digits } => {
            let s = build_spec(&spec)?;
            let digits = match digits {
                Some(d) => d,
                None => precision()?,
            };
            let blocks = point.split(';').map(parse_vector).collect::<Result<Vec<_>, _>>()?;
            let pt = EvaluationPoint { blocks };
            let e = evaluate(&s, &pt, digits)?;
            let l = Scalar::fmt_rational(&lambda(&s, &pt)?);
            let text = format!("psi(x) - psi(0) = {}\nlambda(x) = {l}\n", e.to_decimal());
            Ok((text, json!({"value": e.to_decimal(), "precision": digits, "lambda": l})))
        }
    }
}

/// Degrees from the file's `degrees` entry, else `deg e_i = max{k : e_i ∈ N^k}`.
fn load_graded(path: &Path) -> Result<GradedAlgebra, Failure> {
    let v = read_json(path)?;
    let a = Algebra::from_json(&v)?;
    let degrees = match v.get("degrees").and_then(Value::as_array) {
        Some(ds) => ds
            .iter()
            .map(|d| d.as_u64().map(|d| d as usize).ok_or_else(|| Error::Parse("degrees must be positive integers".into())))
            .collect::<Result<Vec<_>, _>>()?,
        None => {
            let chain: Vec<Subspace> = a.power_chain();
            (0..a.dim)
                .map(|i| {
                    let e = nilforge::linalg::unit_vec(a.dim, i);
                    chain.iter().take_while(|s| s.contains(&e)).count()
                })
                .collect()
        }
    };
    Ok(GradedAlgebra::new(a, degrees)?)
}

fn homog_cmd(c: HomogCmd) -> Outcome {
    match c {
        HomogCmd::Witness { algebra, series, point } => {
            let g = load_graded(&algebra)?;
            let phi = FormalSeries::parse(&series, g.algebra.dim + 1)?;
            let nu = g.top_degree();
            if let Precondition::Fails(why) = precondition_check(&phi, nu)? {
                return Err(Error::PreconditionFailed(why).into());
            }
            let f = graded_projection_map(&g, &phi)?;
            let a = parse_vector(&point)?;
            let w = transitivity_witness(&f, &a)?;
            if !verify_witness(&f, &w, &a) {
                return Err(Failure::Verification("witness does not preserve the variety".into()));
            }
            let mut text = String::new();
            for (k, comp) in f.components.iter().enumerate() {
                text.push_str(&format!("f{} = {}\n", k + 1, comp.to_divided()));
            }
            text.push_str(&format!("stages {}\n", w.stages.len()));
            for s in &w.stages {
                text.push_str(&format!("stage: component {}, degree {}\n{}\n", s.component + 1, s.removed_degree, matrix_text(&s.factor)));
            }
            text.push_str(&format!("linear\n{}\ntranslation {}\nverified\n", matrix_text(&w.map.linear), vector_text(&w.map.translation)));
            let v = json!({
                "components": f.components.iter().map(Polynomial::to_json).collect::<Vec<_>>(),
                "point": vector_json(&a),
                "linear": w.map.linear.to_json(),
                "translation": vector_json(&w.map.translation),
                "stages": w.stages.iter().map(|s| json!({
                    "component": s.component, "removed_degree": s.removed_degree, "factor": s.factor.to_json(),
                })).collect::<Vec<_>>(),
                "verified": true,
            });
            Ok((text, v))
        }
        HomogCmd::Fields { algebra } => {
            let g = load_graded(&algebra)?;
            let fields = homogeneity_fields(&g)?;
            let dims = lower_central_dims(&fields);
            let mut text: String = fields.iter().map(|x| format!("{x}\n")).collect();
            text.push_str(&format!("lower central series dims {}\n", dims.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")));
            let v = json!({
                "fields": fields.iter().map(|x| x.display()).collect::<Vec<_>>(),
                "lower_central_dims": dims,
            });
            Ok((text, v))
        }
    }
}

fn mansa_cmd(c: MansaCmd) -> Outcome {
    let MansaCmd::Build { pana, case, verify } = c;
    let p = load_pointing(&pana)?;
    let case: Case = case.parse()?;
    let r = mansa_from_pana(&p, case)?;
    let mut text = format!("m = {}\nform\n{}\n", r.m(), matrix_text(&r.form));
    for (k, g) in r.generators.iter().enumerate() {
        text.push_str(&format!("generator {}\n{}\n", k + 1, matrix_text(g)));
    }
    let mut v = r.to_json();
    if verify {
        let rep = verify_realization(&r);
        let bd = verify_bd_axioms(&r.blocks);
        let bounds = dim_bounds_check(&r.generators)?;
        let middle = if case == Case::Real { Some(middle_signature(&r)?) } else { None };
        for (name, ok) in rep.checks.iter().chain(&bd.checks).map(|c| (c, !rep.violations.contains(c) && !bd.violations.contains(c))) {
            text.push_str(&format!("{} {name}\n", if ok { "ok" } else { "FAIL" }));
        }
        text.push_str(&format!(
            "dims d1={} d2={} d3={} dim={} bounds {} <= {} <= {}\n",
            bounds.d1, bounds.d2, bounds.d3, bounds.dim, bounds.lower, bounds.dim, bounds.upper
        ));
        if let Some((whole, mid)) = &middle {
            let t = signature_of_pana(&p)?;
            text.push_str(&format!("type {t}, form {whole}, middle block {mid}\n"));
        }
        v["verify"] = json!({
            "realization": rep.to_json(),
            "bd_axioms": bd.to_json(),
            "dim_bounds": bounds.to_json(),
            "middle_signature": middle.as_ref().map(|(_, m)| json!([m.p, m.q])),
        });
        if !rep.passes() || !bd.passes() || !bounds.holds() {
            return Err(Failure::Verification(text));
        }
    }
    Ok((text, v))
}
