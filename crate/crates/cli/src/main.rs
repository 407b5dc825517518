//! `complements`: command-line front end for the `ncomplements` library.

mod input;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use ncomplements::adjunction::{
    direct, inverse, inverse_inequality_check, inverse_rdn_monotonicity,
    main_inequality_check, n_phi_inequality_check, transport_hyperstandard,
};
use ncomplements::dim1::{
    self, classify, construct_n_complement, default_filtration, has_n_complement,
    has_r_complement, lct_smooth_point, polynomial_complement, rct_threshold, CurvePair,
};
use ncomplements::hyperstandard::{
    as_hyperstandard, gamma_contains, gamma_enumerate_below, low_approximation, tilde_set,
};
use ncomplements::indices::{self, lattice_points_in_span, rational_span, IndexProblem, SymbolicVector};
use ncomplements::suites::{run_suite, SuiteName};
use ncomplements::{Constants, ExactScalar, Rat, Spec};

const SEED_ENV: &str = "COMPLEMENTS_SEED";

/// Exact calculus of n-complements: hyperstandard sets, adjunction,
/// complementary indices and complements on curves.
///
/// Rationals are written `p/q` or as decimals (`0.25` = 1/4); nothing is
/// parsed as a float. Lists are comma separated.
#[derive(Debug, Parser)]
#[command(name = "complements", version)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Hyperstandard sets Γ(N, Φ(ℜ)).
    #[command(subcommand)]
    Gamma(GammaCmd),
    /// Adjunction correspondence d = 1 − r/l + b/l.
    #[command(subcommand)]
    Adj(AdjCmd),
    /// Complementary indices with Diophantine approximations.
    #[command(subcommand)]
    Indices(IndicesCmd),
    /// Complements on curves.
    #[command(subcommand)]
    Dim1(Dim1Cmd),
    /// Run a seeded property suite.
    Suite(SuiteArgs),
}

#[derive(Debug, Args)]
struct SpecArgs {
    /// ℜ ⊂ [0,1]; 1 is always added.
    #[arg(long = "R", default_value = "1")]
    r: String,
    /// Index set N of positive integers.
    #[arg(long = "N", default_value = "")]
    n: String,
    /// Only l = 1 in 1 − g/l.
    #[arg(long)]
    abridged: bool,
}

impl SpecArgs {
    fn spec(&self) -> Result<Spec, CliError> {
        let r = input::rat_list(&self.r).map_err(CliError::Usage)?;
        let n = input::index_list(&self.n).map_err(CliError::Usage)?;
        Spec::new(r, n, self.abridged).map_err(domain)
    }
}

#[derive(Debug, Subcommand)]
enum GammaCmd {
    /// Membership b ∈ Γ(N, Φ).
    Contains {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Elements of Γ(N, Φ) at most 1 − eps, sorted.
    Enumerate {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        eps: String,
    },
    /// Largest element of Γ(N, Φ) not exceeding each b.
    LowApprox {
        #[command(flatten)]
        spec: SpecArgs,
        /// One multiplicity or a list.
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// ℜ′ with Γ(N, Φ(ℜ)) = Φ(ℜ′).
    AsHyperstandard {
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// ℜ̄ ∪ {0} with ℜ̄ = {r₀ − Σ(1 − rᵢ) ≥ 0 : rᵢ ∈ ℜ ∪ {1}}.
    Tilde {
        #[arg(long = "R")]
        r: String,
    },
}

#[derive(Debug, Args)]
struct ConstArgs {
    #[arg(long)]
    r: String,
    #[arg(long)]
    l: u64,
}

impl ConstArgs {
    fn constants(&self) -> Result<Constants, CliError> {
        Constants::new(arg_rat(&self.r)?, self.l).map_err(domain)
    }
}

#[derive(Debug, Subcommand)]
enum AdjCmd {
    /// d = 1 − r/l + b/l.
    Direct {
        #[command(flatten)]
        c: ConstArgs,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// b = l·d − l + r.
    Inverse {
        #[command(flatten)]
        c: ConstArgs,
        #[arg(long, allow_hyphen_values = true)]
        d: String,
    },
    /// ℜ′ = {r′ − l(1 − r) ≥ 0 : r ∈ ℜ″, r′ ∈ ℜ}.
    Transport {
        #[arg(long = "Rpp")]
        r_pp: String,
        #[arg(long = "R")]
        r: String,
    },
    /// Check one of the adjunction inequalities.
    #[command(subcommand)]
    Check(CheckCmd),
}

#[derive(Debug, Subcommand)]
enum CheckCmd {
    /// r − l + l⌊(n+1)d⌋/n ≥ ⌊(n+1)(r − l + ld)⌋/n for n·r ∈ ℤ, r ≤ 1.
    Main {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        l: u64,
        #[arg(long, allow_hyphen_values = true)]
        d: String,
        #[arg(long, allow_hyphen_values = true)]
        r: String,
    },
    /// b_{1,n_Φ} ≤ inverse(d′) given d′ ≥ (direct b₁)_{n_Φ′}.
    NPhi {
        #[command(flatten)]
        c: ConstArgs,
        #[arg(long)]
        n: u64,
        #[arg(long, allow_hyphen_values = true)]
        b1: String,
        #[arg(long = "d-prime", allow_hyphen_values = true)]
        d_prime: String,
        /// ℜ of Φ.
        #[arg(long = "R", default_value = "1")]
        r_set: String,
        /// ℜ′ of Φ′; defaults to the transport of ℜ along {1, r}.
        #[arg(long = "R-prime")]
        r_prime: Option<String>,
    },
    /// Monotonicity of inverse(⌈d⌉ₙ) and the inverse inequality for d⁺.
    Inverse {
        #[command(flatten)]
        c: ConstArgs,
        #[arg(long)]
        n: u64,
        #[arg(long, allow_hyphen_values = true)]
        d: String,
        /// When given, also check inverse(d⁺) ≥ ⌈inverse(d)⌉ₙ.
        #[arg(long = "d-plus", allow_hyphen_values = true)]
        d_plus: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
enum IndicesCmd {
    /// Rational affine span of v, and its points with n·x integral.
    Span {
        /// Symbolic vector, e.g. `sqrt2: (1, 0); rat: (-1, 1/2)`.
        /// A symbol `sqrtK` is √K; any other needs an enclosure
        /// `name[lo, hi]: (coeffs)`.
        #[arg(long)]
        v: String,
        #[arg(long)]
        n: Option<u64>,
    },
    /// Find n ∈ I·ℕ and v_n with n·v_n ∈ ℤ^l, ‖v_n − v‖ < eps/n, v_n in the
    /// rational span of v, and optionally (v_n − v)/‖v_n − v‖ within eps of e.
    Solve {
        /// The problem as JSON `{"I", "eps", "v", "e"}` (file path or inline).
        #[arg(long, conflicts_with_all = ["divisor", "eps", "v", "e"])]
        input: Option<String>,
        #[arg(long = "I", default_value_t = 1)]
        divisor: u64,
        #[arg(long, required_unless_present = "input")]
        eps: Option<String>,
        /// Symbolic vector; see `indices span --help`.
        #[arg(long, required_unless_present = "input")]
        v: Option<String>,
        /// Direction in the rational span of v.
        #[arg(long, allow_hyphen_values = true)]
        e: Option<String>,
        /// Largest n tried.
        #[arg(long, default_value_t = 10_000)]
        budget: u64,
    },
}

#[derive(Debug, Args)]
struct PairArgs {
    /// Boundary as `label:value, …`, e.g. `1:1, 2:1/2`.
    #[arg(long = "B", required_unless_present = "input")]
    b: Option<String>,
    #[arg(long, default_value = "rational")]
    kind: String,
    /// The pair as JSON `{"kind", "B"}` (file path or inline).
    #[arg(long, conflicts_with = "b")]
    input: Option<String>,
}

impl PairArgs {
    fn pair(&self) -> Result<CurvePair<Rat>, CliError> {
        let p = match (&self.input, &self.b) {
            (Some(doc), _) => input::pair_from_json(doc).map_err(CliError::Usage)?,
            (None, Some(b)) => CurvePair {
                kind: input::kind(&self.kind).map_err(CliError::Usage)?,
                b: input::multiplicities(b).map_err(CliError::Usage)?,
                poly: None,
            },
            (None, None) => return Err(CliError::Usage("missing --B".into())),
        };
        p.validated().map_err(domain)
    }
}

#[derive(Debug, Subcommand)]
enum Dim1Cmd {
    /// Existence of an ℝ-complement.
    RComplement {
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Existence of an n-complement.
    NComplement {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        n: u64,
        /// Degree constant: 2 on ℙ¹, d + 1 for hyperplanes in ℙ^d.
        #[arg(long, default_value = "2")]
        c: String,
    },
    /// Construct an n-complement B⁺.
    Construct {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        n: u64,
    },
    /// Type and complementary indices through the default filtration.
    Classify {
        #[command(flatten)]
        pair: PairArgs,
    },
    /// ℝ-complement threshold of B + tF, with smooth-point lc thresholds.
    Threshold {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long = "F")]
        f: String,
    },
    /// B⁺ = (f)₀/n for f of degree 2n; coefficients constant term first.
    PolyComplement {
        #[arg(long = "f", allow_hyphen_values = true)]
        f: String,
        #[arg(long)]
        n: u64,
    },
}

#[derive(Debug, Args)]
struct SuiteArgs {
    /// inequalities, hyperstandard, adjunction or dim1-tables.
    name: String,
    /// Overridden by COMPLEMENTS_SEED when set.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    iterations: u64,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Domain(String),
    Budget(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Domain(_) => 2,
            CliError::Budget(_) => 3,
        }
    }

    fn message(&self) -> (&'static str, &str) {
        match self {
            CliError::Usage(m) => ("usage", m),
            CliError::Domain(m) => ("domain", m),
            CliError::Budget(m) => ("budget", m),
        }
    }
}

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

fn arg_rat(s: &str) -> Result<Rat, CliError> {
    input::rat(s).map_err(CliError::Usage)
}

/// A result rendered as JSON or as `key: value` lines.
struct Report {
    json: Value,
    table: Vec<String>,
}

impl Report {
    fn new(json: Value) -> Self {
        Self { json, table: Vec::new() }
    }

    fn row(mut self, key: &str, value: impl std::fmt::Display) -> Self {
        self.table.push(format!("{key}: {value}"));
        self
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.json).expect("serializable"),
            Format::Table => self.table.join("\n"),
        }
    }
}

fn to_json(x: &impl Serialize) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn strs<'a>(xs: impl IntoIterator<Item = &'a Rat>) -> Vec<String> {
    xs.into_iter().map(ToString::to_string).collect()
}

fn list<'a>(xs: impl IntoIterator<Item = &'a Rat>) -> String {
    format!("{{{}}}", strs(xs).join(", "))
}

fn gamma(cmd: &GammaCmd) -> Result<Report, CliError> {
    Ok(match cmd {
        GammaCmd::Contains { spec, b } => {
            let s = spec.spec()?;
            let b = arg_rat(b)?;
            let yes = gamma_contains(&s, &b);
            Report::new(json!({ "spec": to_json(&s), "b": b.to_string(), "contains": yes }))
                .row("b", &b)
                .row("contains", yes)
        }
        GammaCmd::Enumerate { spec, eps } => {
            let s = spec.spec()?;
            let eps = arg_rat(eps)?;
            let xs = gamma_enumerate_below(&s, &eps).map_err(domain)?;
            Report::new(json!({ "spec": to_json(&s), "eps": eps.to_string(), "elements": strs(&xs) }))
                .row("count", xs.len())
                .row("elements", list(&xs))
        }
        GammaCmd::LowApprox { spec, b } => {
            let s = spec.spec()?;
            let bs = input::rat_list(b).map_err(CliError::Usage)?;
            let mut rows = Vec::new();
            let mut table = Vec::new();
            for b in &bs {
                let low = low_approximation(&s, b).map_err(domain)?;
                table.push(format!("{b} -> {low}"));
                rows.push(json!({ "b": b.to_string(), "low": low.to_string() }));
            }
            Report {
                json: json!({ "spec": to_json(&s), "approximations": rows }),
                table,
            }
        }
        GammaCmd::AsHyperstandard { spec } => {
            let s = spec.spec()?;
            let rp = as_hyperstandard(&s);
            Report::new(json!({ "spec": to_json(&s), "R_prime": strs(&rp) })).row("R'", list(&rp))
        }
        GammaCmd::Tilde { r } => {
            let r = input::rat_set(r).map_err(CliError::Usage)?;
            let t = tilde_set(&r).map_err(domain)?;
            Report::new(json!({ "R": strs(&r), "R_tilde": strs(&t) })).row("R~", list(&t))
        }
    })
}

fn adj(cmd: &AdjCmd) -> Result<Report, CliError> {
    Ok(match cmd {
        AdjCmd::Direct { c, b } => {
            let k = c.constants()?;
            let b = arg_rat(b)?;
            let d = direct(&k, &b);
            Report::new(json!({ "constants": to_json(&k), "b": b.to_string(), "d": d.to_string() }))
                .row("d", d)
        }
        AdjCmd::Inverse { c, d } => {
            let k = c.constants()?;
            let d = arg_rat(d)?;
            let b = inverse(&k, &d);
            Report::new(json!({ "constants": to_json(&k), "d": d.to_string(), "b": b.to_string() }))
                .row("b", b)
        }
        AdjCmd::Transport { r_pp, r } => {
            let rpp = input::rat_set(r_pp).map_err(CliError::Usage)?;
            let r = input::rat_set(r).map_err(CliError::Usage)?;
            let out = transport_hyperstandard(&rpp, &r).map_err(domain)?;
            Report::new(json!({ "Rpp": strs(&rpp), "R": strs(&r), "R_prime": strs(&out) }))
                .row("R'", list(&out))
        }
        AdjCmd::Check(check) => adj_check(check)?,
    })
}

fn verdict(name: &str, holds: bool, detail: Value) -> Report {
    let mut json = json!({ "check": name, "holds": holds });
    if let (Value::Object(m), Value::Object(extra)) = (&mut json, detail) {
        m.extend(extra);
    }
    Report::new(json).row("check", name).row("holds", holds)
}

fn adj_check(cmd: &CheckCmd) -> Result<Report, CliError> {
    Ok(match cmd {
        CheckCmd::Main { n, l, d, r } => {
            let (d, r) = (arg_rat(d)?, arg_rat(r)?);
            let ok = main_inequality_check(*n, *l, &d, &r).map_err(domain)?;
            verdict("main", ok, json!({ "n": n, "l": l, "d": d.to_string(), "r": r.to_string() }))
        }
        CheckCmd::NPhi { c, n, b1, d_prime, r_set, r_prime } => {
            let k = c.constants()?;
            let (b1, dp) = (arg_rat(b1)?, arg_rat(d_prime)?);
            let r = input::rat_set(r_set).map_err(CliError::Usage)?;
            let rp = match r_prime {
                Some(s) => input::rat_set(s).map_err(CliError::Usage)?,
                None => {
                    let rpp = [Rat::from_int(1), k.r().clone()].into_iter().collect();
                    transport_hyperstandard(&rpp, &r).map_err(domain)?
                }
            };
            let phi = Spec::new(r, [], false).map_err(domain)?;
            let phi_p = Spec::new(rp.iter().cloned(), [], false).map_err(domain)?;
            let ok = n_phi_inequality_check(&k, *n, &b1, &dp, &phi, &phi_p).map_err(domain)?;
            verdict(
                "n-phi",
                ok,
                json!({ "n": n, "b1": b1.to_string(), "d_prime": dp.to_string(), "R_prime": strs(&rp) }),
            )
        }
        CheckCmd::Inverse { c, n, d, d_plus } => {
            let k = c.constants()?;
            let d = arg_rat(d)?;
            let (lo, hi) = inverse_rdn_monotonicity(&k, *n, &d).map_err(domain)?;
            let mut ok = lo <= hi;
            let mut detail = json!({ "n": n, "d": d.to_string(), "rdn_inverse": lo.to_string(), "inverse_rdn": hi.to_string() });
            if let Some(dp) = d_plus {
                let dp = arg_rat(dp)?;
                let holds = inverse_inequality_check(&k, *n, &d, &dp).map_err(domain)?;
                ok &= holds;
                detail["d_plus"] = json!(dp.to_string());
            }
            verdict("inverse", ok, detail)
        }
    })
}

fn indices_cmd(cmd: &IndicesCmd) -> Result<Report, CliError> {
    Ok(match cmd {
        IndicesCmd::Span { v, n } => {
            let v = SymbolicVector::parse(v).map_err(|e| CliError::Usage(e.to_string()))?;
            let span = rational_span(&v);
            let mut json = json!({ "span": to_json(&span) });
            let mut r = Report::new(Value::Null)
                .row("dimension", span.dimension())
                .row("basepoint", list(&span.basepoint));
            for w in &span.directions {
                r = r.row("direction", list(w));
            }
            if let Some(n) = n {
                if *n == 0 {
                    return Err(CliError::Usage("n must be positive".into()));
                }
                let lat = lattice_points_in_span(&span, *n);
                json["lattice"] = to_json(&lat);
                r = r.row("lattice empty", lat.empty);
                if !lat.empty {
                    r = r.row("lattice offset", list(&lat.offset));
                    for g in &lat.generators {
                        r = r.row("lattice generator", list(g));
                    }
                }
            }
            r.json = json;
            r
        }
        IndicesCmd::Solve { input: doc, divisor, eps, v, e, budget } => {
            let problem = match doc {
                Some(doc) => {
                    let text = input::json_document(doc).map_err(CliError::Usage)?;
                    serde_json::from_str::<IndexProblem>(&text).map_err(|e| CliError::Usage(e.to_string()))?
                }
                None => IndexProblem {
                    divisor: *divisor,
                    eps: arg_rat(eps.as_deref().unwrap_or_default())?,
                    v: SymbolicVector::parse(v.as_deref().unwrap_or_default())
                        .map_err(|e| CliError::Usage(e.to_string()))?,
                    e: e.as_deref().map(input::rat_list).transpose().map_err(CliError::Usage)?,
                },
            };
            let sol = indices::solve(&problem, *budget).map_err(|e| match e {
                indices::IndexError::BudgetExhausted { .. } | indices::IndexError::EmptyLattice { .. } => {
                    CliError::Budget(e.to_string())
                }
                indices::IndexError::Parse(_) => CliError::Usage(e.to_string()),
                _ => domain(e),
            })?;
            let c = &sol.certificates;
            let mut r = Report::new(to_json(&sol))
                .row("n", sol.n)
                .row("v_n", list(&sol.v_n))
                .row("n*v_n", list(&c.scaled))
                .row("|v_n - v| in", &c.distance)
                .row("eps/n", &c.bound);
            if let Some(dev) = &c.direction_deviation {
                r = r.row("direction deviation in", dev);
            }
            r.row("precision bits", c.precision_bits)
        }
    })
}

fn dim1_cmd(cmd: &Dim1Cmd) -> Result<Report, CliError> {
    Ok(match cmd {
        Dim1Cmd::RComplement { pair } => {
            let p = pair.pair()?;
            let yes = has_r_complement(&p);
            Report::new(json!({ "pair": to_json(&p), "exists": yes })).row("r-complement", yes)
        }
        Dim1Cmd::NComplement { pair, n, c } => {
            let p = pair.pair()?;
            nonzero(*n)?;
            let c = arg_rat(c)?;
            let yes = has_n_complement(&p, *n, &c);
            Report::new(json!({ "pair": to_json(&p), "n": n, "c": c.to_string(), "exists": yes }))
                .row(&format!("{n}-complement"), yes)
        }
        Dim1Cmd::Construct { pair, n } => {
            let p = pair.pair()?;
            nonzero(*n)?;
            let res = construct_n_complement(&p, *n).map_err(domain)?;
            let mut r = Report::new(to_json(&res)).row("n", res.n).row("B+", &res.b_plus);
            if let Some(t) = res.type_tag {
                r = r.row("type", t);
            }
            if !res.fresh.is_empty() {
                r = r.row("added points", res.fresh.join(", "));
            }
            r
        }
        Dim1Cmd::Classify { pair } => {
            let p = pair.pair()?;
            let c = classify(&p, &default_filtration()).map_err(domain)?;
            let mut r = Report::new(to_json(&c))
                .row("type", c.type_tag)
                .row("indices", format!("{:?}", c.indices));
            for level in &c.levels {
                r = r.row(
                    &format!("N = {:?}", level.n_set),
                    format!("B_N = {} ({}), indices {:?}", level.approximation, level.type_tag, level.indices),
                );
            }
            r
        }
        Dim1Cmd::Threshold { pair, f } => {
            let p = pair.pair()?;
            let f = input::multiplicities(f).map_err(CliError::Usage)?;
            let t = rct_threshold(&p, &f).map_err(domain)?;
            let mut lct = Vec::new();
            let mut r = Report::new(Value::Null).row("rct", &t);
            for (label, fv) in f.entries().iter().filter(|(_, v)| *v > Rat::from_int(0)) {
                let x = lct_smooth_point(&p.b.get(label), fv).map_err(domain)?;
                r = r.row(&format!("lct at {label}"), &x);
                lct.push(json!({ "label": label, "lct": x.to_string() }));
            }
            r.json = json!({ "pair": to_json(&p), "F": to_json(&f), "rct": t.to_string(), "lct": lct });
            r
        }
        Dim1Cmd::PolyComplement { f, n } => {
            let coeffs = input::rat_list(f).map_err(CliError::Usage)?;
            let res = polynomial_complement(&coeffs, *n).map_err(domain)?;
            let mut r = Report::new(json!({
                "n": res.n,
                "Bplus": to_json(&res.b_plus),
                "factors": to_json(&res.factors),
                "geometric_total": res.geometric_total().to_string(),
            }));
            for g in &res.factors {
                r = r.row(
                    &g.label,
                    format!("degree {}, multiplicity {}, B+ = {}", g.degree, g.multiplicity, res.b_plus.get(&g.label)),
                );
            }
            r.row("geometric total", res.geometric_total())
        }
    })
}

fn nonzero(n: u64) -> Result<(), CliError> {
    if n == 0 {
        Err(domain(dim1::Dim1Error::ZeroIndex))
    } else {
        Ok(())
    }
}

fn seed(flag: u64) -> Result<u64, CliError> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{SEED_ENV}=`{s}` is not a u64"))),
        Err(_) => Ok(flag),
    }
}

fn suite(args: &SuiteArgs) -> Result<Report, CliError> {
    let name: SuiteName = args.name.parse().map_err(CliError::Usage)?;
    let report = run_suite(name, seed(args.seed)?, args.iterations);
    let mut r = Report::new(to_json(&report))
        .row("suite", report.suite)
        .row("seed", report.seed)
        .row("iterations", report.iterations);
    for (check, count) in &report.checks {
        r = r.row(check, count);
    }
    for line in &report.table {
        r = r.row("case", line);
    }
    r = r.row("result", if report.passed { "pass" } else { "FAIL" });
    match &report.counterexample {
        Some(ce) => Err(CliError::Domain(format!(
            "suite {} failed: {ce}\n{}",
            report.suite,
            r.render(Format::Json)
        ))),
        None => Ok(r),
    }
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Gamma(c) => gamma(c),
        Command::Adj(c) => adj(c),
        Command::Indices(c) => indices_cmd(c),
        Command::Dim1(c) => dim1_cmd(c),
        Command::Suite(a) => suite(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(report) => {
            println!("{}", report.render(cli.format));
            ExitCode::SUCCESS
        }
        Err(e) => {
            let (kind, msg) = e.message();
            eprintln!("error ({kind}): {msg}");
            ExitCode::from(e.code())
        }
    }
}
