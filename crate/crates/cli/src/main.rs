//! `bflab`: command-line front end for the counting kernels.
//!
//! Exit codes: 0 success, 2 precondition or input error (JSON on stderr),
//! 3 cost budget exceeded.

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bflab_core::analysis::{self, fit_exponent, Suite, SuiteInput, SuiteParams};
use bflab_core::cluster::{cluster_pipeline, ClusterSize};
use bflab_core::crossratio::{cross_ratio, cross_ratio_of_directions_on, cross_ratio_set, Transversal};
use bflab_core::equations::{
    count_affine_product, count_form_value, count_incidences, count_ternary_linear, count_teq,
};
use bflab_core::formstats::{
    distance_energy, form_energy, pinned_form_energy, split_by_line_richness, value_stats, value_table,
};
use bflab_core::generators::{erdos_construction, make_grid, make_progression, random_points, random_set, ProgressionKind};
use bflab_core::geom::direction_of;
use bflab_core::io::{format_points, format_scalars, read_form, read_lines, read_points, read_scalars, write_text};
use bflab_core::setops::{additive_energy, combine, weak_es_report, SetOp};
use bflab_core::{BilinearForm, Ctx, Error, Exec, PointSet, Result, Scalar, ScalarSet};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use output::{emit, envelope, Format};

#[derive(Parser, Debug)]
#[command(name = "bflab", version, about = "Exact counting experiments for bilinear forms and sum-product sets")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Seed for generators and embedded in every report.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Pair-evaluation budget for the guarded kernels.
    #[arg(long, global = true, default_value_t = bflab_core::par::DEFAULT_BUDGET)]
    max_cost: u64,
    /// Constant in the incidence bound comparison.
    #[arg(long, global = true, default_value = "4")]
    st_constant: Scalar,
    /// Constant used when choosing the cluster size.
    #[arg(long, global = true, default_value = "1")]
    c_param: Scalar,
    /// Write the report (or generated data) here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Ignore the cost budget.
    #[arg(long, global = true)]
    force: bool,
    /// Run every kernel on one thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Serialize, Debug)]
pub struct RunConfig {
    seed: u64,
    format: Format,
    max_cost: u64,
    st_constant: String,
    c_param: String,
    force: bool,
    sequential: bool,
}

impl RunConfig {
    fn ctx(&self) -> Ctx {
        let exec = if self.sequential { Exec::Sequential } else { Exec::default() };
        let budget = if self.force { u64::MAX } else { self.max_cost };
        Ctx::default().with_exec(exec).with_budget(budget)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// A op B for op in sum, diff, prod, ratio.
    Setop {
        #[arg(long)]
        a: PathBuf,
        /// Defaults to A.
        #[arg(long)]
        b: Option<PathBuf>,
        #[arg(long, value_enum)]
        op: OpArg,
        /// Include the elements of the result.
        #[arg(long)]
        list: bool,
    },
    /// Additive energy E(A, B).
    Energy {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: Option<PathBuf>,
    },
    /// Energy, sum, difference and product set sizes with the
    /// Cauchy-Schwarz checks.
    WeakEs {
        #[arg(long)]
        a: PathBuf,
    },
    /// Value statistics of a bilinear form on a point set.
    Form(FormCmd),
    /// Cross-ratio of four scalars, or the set R(A) with --a.
    Crossratio {
        #[arg(long, conflicts_with = "values")]
        a: Option<PathBuf>,
        /// Four scalars a b c d.
        #[arg(long, num_args = 4, allow_hyphen_values = true)]
        values: Option<Vec<Scalar>>,
        #[arg(long)]
        list: bool,
    },
    /// Cross-ratio of the origin lines through four points.
    CrossratioDirs {
        /// File with exactly four points.
        #[arg(long)]
        points: PathBuf,
        /// Transversal u x + v y = w (default x = 1).
        #[arg(long, num_args = 3, allow_hyphen_values = true)]
        transversal: Option<Vec<Scalar>>,
    },
    /// Generate inputs.
    #[command(subcommand)]
    Gen(GenCmd),
    /// Exact equation and incidence counts.
    #[command(subcommand)]
    Count(CountCmd),
    /// Slope-fiber clusters of A x A.
    Cluster {
        #[arg(long)]
        a: PathBuf,
        /// Fixed cluster size; otherwise chosen from --c-param.
        #[arg(long)]
        m: Option<usize>,
        /// Include per-cluster reports.
        #[arg(long)]
        detail: bool,
    },
    /// Bound-ratio suites.
    Suite(SuiteCmd),
    /// Log-log least-squares fit of `size,value` records.
    Fit {
        #[arg(long)]
        csv: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OpArg {
    Sum,
    Diff,
    Prod,
    Ratio,
}

impl From<OpArg> for SetOp {
    fn from(o: OpArg) -> Self {
        match o {
            OpArg::Sum => SetOp::Sum,
            OpArg::Diff => SetOp::Difference,
            OpArg::Prod => SetOp::Product,
            OpArg::Ratio => SetOp::Ratio,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Dot,
    Cross,
}

#[derive(Args, Debug)]
struct FormSel {
    /// Form file: four scalars and `symmetric` or `skew`.
    #[arg(long)]
    form: Option<PathBuf>,
    /// Built-in form when no file is given.
    #[arg(long, value_enum, default_value_t = KindArg::Cross)]
    kind: KindArg,
}

impl FormSel {
    fn load(&self) -> Result<BilinearForm> {
        match &self.form {
            Some(p) => read_form(p),
            None => Ok(match self.kind {
                KindArg::Dot => BilinearForm::dot(),
                KindArg::Cross => BilinearForm::cross(),
            }),
        }
    }
}

#[derive(Args, Debug)]
struct FormCmd {
    #[arg(long)]
    points: PathBuf,
    #[command(flatten)]
    form: FormSel,
    /// List the value set.
    #[arg(long)]
    values: bool,
    #[arg(long)]
    energy: bool,
    #[arg(long)]
    pinned: bool,
    /// Distance energy (ignores the form).
    #[arg(long)]
    distance: bool,
    /// Rich/poor split at this line population.
    #[arg(long)]
    split: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum GenCmd {
    Progression {
        #[arg(long, value_enum)]
        kind: ProgArg,
        #[arg(long, allow_hyphen_values = true)]
        start: Scalar,
        #[arg(long, allow_hyphen_values = true)]
        step: Scalar,
        #[arg(long)]
        n: usize,
    },
    Grid {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: Option<PathBuf>,
        /// Drop the origin.
        #[arg(long)]
        puncture: bool,
    },
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        bound: u64,
        /// Points of [-bound, bound]^2 instead of scalars.
        #[arg(long)]
        points: bool,
    },
    /// Grid-and-pencil bundle; --out names a directory.
    Erdos {
        #[arg(long)]
        n: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ProgArg {
    Arithmetic,
    Geometric,
}

#[derive(Subcommand, Debug)]
enum CountCmd {
    /// a - b = c d.
    AffineProduct {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        c: PathBuf,
        #[arg(long)]
        d: PathBuf,
    },
    /// t1 t2 = t3 t4 - t5 t6.
    Teq {
        #[arg(long)]
        t: PathBuf,
    },
    /// c1 a1 + c2 a2 + c3 a3 = 0.
    Ternary {
        #[arg(long)]
        a: PathBuf,
        #[arg(long, num_args = 3, allow_hyphen_values = true, required = true)]
        coeffs: Vec<Scalar>,
    },
    Incidences {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        lines: PathBuf,
        /// One positive integer weight per point, in sorted point order.
        #[arg(long)]
        point_weights: Option<PathBuf>,
    },
    /// form(p, q) = c over P x Q.
    FormValue {
        #[arg(long)]
        p: PathBuf,
        #[arg(long)]
        q: Option<PathBuf>,
        #[command(flatten)]
        form: FormSel,
        #[arg(long, allow_hyphen_values = true)]
        c: Scalar,
    },
}

#[derive(Args, Debug)]
struct SuiteCmd {
    /// thm34, eps1, eps2, construction, weak-es or e-upper.
    name: String,
    /// Point file (thm34, e-upper).
    #[arg(long)]
    points: Option<PathBuf>,
    #[command(flatten)]
    form: FormSel,
    /// Scalar file (eps1, eps2, weak-es).
    #[arg(long)]
    a: Option<PathBuf>,
    /// Comma-separated sizes (construction).
    #[arg(long, value_delimiter = ',')]
    n: Vec<u64>,
}

fn hashed_scalars(path: &Path) -> Result<(ScalarSet, Value)> {
    let a = read_scalars(path)?;
    let meta = json!({"hash": analysis::hash_scalars(&a), "size": a.len()});
    Ok((a, meta))
}

fn hashed_points(path: &Path) -> Result<(PointSet, Value)> {
    let p = read_points(path)?;
    let meta = json!({"hash": analysis::hash_points(&p), "size": p.len()});
    Ok((p, meta))
}

fn strings<'a>(it: impl IntoIterator<Item = &'a Scalar>) -> Vec<String> {
    it.into_iter().map(|s| s.to_string()).collect()
}

fn run(cli: Cli) -> Result<()> {
    let g = cli.global;
    let cfg = RunConfig {
        seed: g.seed,
        format: g.format,
        max_cost: g.max_cost,
        st_constant: g.st_constant.to_string(),
        c_param: g.c_param.to_string(),
        force: g.force,
        sequential: g.sequential,
    };
    let ctx = cfg.ctx();
    let out = g.out.as_deref();
    let (name, result) = match cli.command {
        Command::Setop { a, b, op, list } => {
            let (sa, ma) = hashed_scalars(&a)?;
            let (sb, mb) = match &b {
                Some(p) => hashed_scalars(p)?,
                None => (sa.clone(), ma.clone()),
            };
            let op = SetOp::from(op);
            let r = combine(&sa, &sb, op, &ctx)?;
            let mut v = json!({"op": op.name(), "inputs": {"a": ma, "b": mb}, "size": r.len()});
            if list {
                v["elements"] = json!(strings(&r));
            }
            ("setop", v)
        }
        Command::Energy { a, b } => {
            let (sa, ma) = hashed_scalars(&a)?;
            let (sb, mb) = match &b {
                Some(p) => hashed_scalars(p)?,
                None => (sa.clone(), ma.clone()),
            };
            let e = additive_energy(&sa, &sb, &ctx)?;
            ("energy", json!({"inputs": {"a": ma, "b": mb}, "energy": e}))
        }
        Command::WeakEs { a } => {
            let (sa, ma) = hashed_scalars(&a)?;
            ("weak-es", json!({"inputs": {"a": ma}, "report": weak_es_report(&sa, &ctx)?}))
        }
        Command::Form(f) => ("form", form_cmd(f, &ctx)?),
        Command::Crossratio { a, values, list } => match (a, values) {
            (Some(path), _) => {
                let (sa, ma) = hashed_scalars(&path)?;
                let r = cross_ratio_set(&sa, &ctx)?;
                let mut v = json!({"inputs": {"a": ma}, "size": r.len()});
                if list {
                    v["elements"] = json!(strings(&r));
                }
                ("crossratio", v)
            }
            (None, Some(v)) => {
                let r = cross_ratio(&v[0], &v[1], &v[2], &v[3])?;
                ("crossratio", json!({"values": strings(&v), "cross_ratio": r.to_string()}))
            }
            (None, None) => return Err(Error::precondition("crossratio needs --a FILE or --values a b c d")),
        },
        Command::CrossratioDirs { points, transversal } => {
            let (p, mp) = hashed_points(&points)?;
            if p.len() != 4 {
                return Err(Error::precondition(format!("expected exactly 4 points, found {}", p.len())));
            }
            let t = match transversal {
                Some(v) => Transversal::new(v[0].clone(), v[1].clone(), v[2].clone())?,
                None => Transversal::default(),
            };
            let d: Vec<_> = p.iter().map(direction_of).collect::<Result<_>>()?;
            let r = cross_ratio_of_directions_on(&d[0], &d[1], &d[2], &d[3], &t)?;
            let dirs: Vec<String> = d.iter().map(|x| x.to_string()).collect();
            ("crossratio-dirs", json!({"inputs": {"points": mp}, "directions": dirs, "cross_ratio": r.to_string()}))
        }
        Command::Gen(cmd) => return gen_cmd(cmd, &cfg, out),
        Command::Count(cmd) => ("count", count_cmd(cmd, &g.st_constant, &ctx)?),
        Command::Cluster { a, m, detail } => {
            let (sa, ma) = hashed_scalars(&a)?;
            let size = match m {
                Some(m) => ClusterSize::Fixed(m),
                None => ClusterSize::FromConstant(g.c_param.clone()),
            };
            let mut rep = serde_json::to_value(cluster_pipeline(&sa, &size, &ctx)?).expect("json");
            if !detail {
                rep.as_object_mut().expect("object").remove("mu");
            }
            ("cluster", json!({"inputs": {"a": ma}, "report": rep}))
        }
        Command::Suite(s) => {
            let suite: Suite = s.name.parse()?;
            let input = match suite {
                Suite::Thm34 | Suite::EUpper => {
                    let path = s.points.ok_or_else(|| Error::precondition(format!("suite {suite} needs --points FILE")))?;
                    SuiteInput::Points { points: read_points(&path)?, form: s.form.load()? }
                }
                Suite::Eps1 | Suite::Eps2 | Suite::WeakEs => {
                    let path = s.a.ok_or_else(|| Error::precondition(format!("suite {suite} needs --a FILE")))?;
                    SuiteInput::Scalars(read_scalars(&path)?)
                }
                Suite::Construction => SuiteInput::Sizes(if s.n.is_empty() { vec![64, 4096] } else { s.n }),
            };
            let params = SuiteParams { seed: g.seed, c_param: g.c_param.clone() };
            let rep = analysis::run_suite(suite, &input, &params, &ctx)?;
            ("suite", serde_json::to_value(rep).expect("json"))
        }
        Command::Fit { csv } => ("fit", fit_cmd(&csv)?),
    };
    emit(&envelope(name, &cfg, result), &cfg, out)
}

fn form_cmd(f: FormCmd, ctx: &Ctx) -> Result<Value> {
    let (p, mp) = hashed_points(&f.points)?;
    let form = f.form.load()?;
    let mut v = json!({"inputs": {"points": mp}, "form": format!("{form:?}")});
    if f.energy {
        v["energy"] = json!(form_energy(&p, &form, ctx)?);
    }
    if f.pinned {
        v["pinned_energy"] = json!(pinned_form_energy(&p, &form, ctx)?);
    }
    if f.distance {
        v["distance_energy"] = json!(distance_energy(&p, ctx)?);
    }
    if f.values {
        v["values"] = json!(strings(value_table(&p, &form, ctx)?.key_set().iter()));
    }
    if let Some(w0) = f.split {
        let s = split_by_line_richness(&p, w0)?;
        v["split"] = json!({
            "threshold": w0,
            "poor_points": s.poor.len(),
            "rich_points": s.rich.len(),
            "poor_lines": s.poor_directions(),
            "rich_lines": s.rich_directions(),
        });
    }
    if !(f.energy || f.pinned || f.distance || f.values || f.split.is_some()) {
        v["stats"] = serde_json::to_value(value_stats(&p, &form, ctx)?).expect("json");
    }
    Ok(v)
}

fn count_cmd(cmd: CountCmd, st_constant: &Scalar, ctx: &Ctx) -> Result<Value> {
    Ok(match cmd {
        CountCmd::AffineProduct { a, b, c, d } => {
            let (sa, ma) = hashed_scalars(&a)?;
            let (sb, mb) = hashed_scalars(&b)?;
            let (sc, mc) = hashed_scalars(&c)?;
            let (sd, md) = hashed_scalars(&d)?;
            let n = count_affine_product(&sa, &sb, &sc, &sd, ctx)?;
            json!({"equation": "affine-product", "inputs": {"a": ma, "b": mb, "c": mc, "d": md}, "count": n})
        }
        CountCmd::Teq { t } => {
            let (st, mt) = hashed_scalars(&t)?;
            json!({"equation": "teq", "inputs": {"t": mt}, "count": count_teq(&st, ctx)?})
        }
        CountCmd::Ternary { a, coeffs } => {
            let (sa, ma) = hashed_scalars(&a)?;
            let n = count_ternary_linear(&sa, &coeffs[0], &coeffs[1], &coeffs[2], ctx)?;
            json!({"equation": "ternary", "inputs": {"a": ma}, "coefficients": strings(&coeffs), "count": n})
        }
        CountCmd::Incidences { points, lines, point_weights } => {
            let (p, mp) = hashed_points(&points)?;
            let l = read_lines(&lines)?;
            let weights = match point_weights {
                Some(path) => Some(parse_weights(&path)?),
                None => None,
            };
            let rep = count_incidences(&p, &l, weights.as_deref(), ctx)?;
            let constant = st_constant.to_f64();
            let bound = rep.unweighted_bound(constant);
            json!({
                "equation": "incidences",
                "inputs": {"points": mp, "lines": l.len()},
                "report": rep,
                "st_bound": bound,
                "st_ratio": rep.incidences as f64 / bound,
            })
        }
        CountCmd::FormValue { p, q, form, c } => {
            let (sp, mp) = hashed_points(&p)?;
            let (sq, mq) = match &q {
                Some(path) => hashed_points(path)?,
                None => (sp.clone(), mp.clone()),
            };
            if c.is_zero() {
                return Err(Error::precondition("form value must be nonzero"));
            }
            let n = count_form_value(&sp, &sq, &form.load()?, &c, ctx)?;
            json!({"equation": "form-value", "inputs": {"p": mp, "q": mq}, "c": c.to_string(), "count": n})
        }
    })
}

fn parse_weights(path: &Path) -> Result<Vec<u64>> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_owned(), source })?;
    let mut out = Vec::new();
    for (i, tok) in text.lines().enumerate().flat_map(|(i, l)| l.split_whitespace().map(move |t| (i + 1, t))) {
        out.push(tok.parse::<u64>().map_err(|e| Error::ParseFile { path: path.to_owned(), line: i, msg: format!("{tok:?}: {e}") })?);
    }
    Ok(out)
}

fn gen_cmd(cmd: GenCmd, cfg: &RunConfig, out: Option<&Path>) -> Result<()> {
    let (kind, text) = match cmd {
        GenCmd::Progression { kind, start, step, n } => {
            let k = match kind {
                ProgArg::Arithmetic => ProgressionKind::Arithmetic,
                ProgArg::Geometric => ProgressionKind::Geometric,
            };
            ("scalars", format_scalars(&make_progression(k, &start, &step, n)?))
        }
        GenCmd::Grid { a, b, puncture } => {
            let sa = read_scalars(&a)?;
            let sb = match &b {
                Some(p) => read_scalars(p)?,
                None => sa.clone(),
            };
            ("points", format_points(&make_grid(&sa, &sb, puncture)))
        }
        GenCmd::Random { n, bound, points } => {
            if points {
                ("points", format_points(&random_points(cfg.seed, n, bound)?))
            } else {
                ("scalars", format_scalars(&random_set(cfg.seed, n, bound)?))
            }
        }
        GenCmd::Erdos { n } => {
            let dir = out.ok_or_else(|| Error::precondition("gen erdos needs --out DIR"))?;
            let b = erdos_construction(n)?;
            b.write_to(dir)?;
            let summary = json!({
                "kind": "erdos",
                "N": n,
                "dir": dir.display().to_string(),
                "sizes": {"p1": b.p1.len(), "p2": b.p2.len(), "lines": b.lines.len()},
            });
            print!("{}", output::render(&envelope("gen", cfg, summary), cfg.format));
            return Ok(());
        }
    };
    match out {
        Some(path) => {
            write_text(path, &text)?;
            let summary = json!({
                "kind": kind,
                "records": text.lines().count(),
                "hash": analysis::content_hash(&text),
                "path": path.display().to_string(),
            });
            print!("{}", output::render(&envelope("gen", cfg, summary), cfg.format));
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn fit_cmd(path: &Path) -> Result<Value> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(source) => Error::Io { path: path.to_owned(), source },
            other => Error::ParseFile { path: path.to_owned(), line: 0, msg: format!("{other:?}") },
        })?;
    let mut records = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row.map_err(|e| Error::ParseFile { path: path.to_owned(), line: i + 1, msg: e.to_string() })?;
        if row.len() < 2 {
            return Err(Error::ParseFile { path: path.to_owned(), line: i + 1, msg: "expected size,value".into() });
        }
        match (row[0].parse::<u64>(), row[1].parse::<u128>()) {
            (Ok(s), Ok(v)) => records.push((s, v)),
            // A non-numeric first record is a header.
            _ if i == 0 => continue,
            _ => return Err(Error::ParseFile { path: path.to_owned(), line: i + 1, msg: format!("not integers: {:?}", row) }),
        }
    }
    let fit = fit_exponent(&records)?;
    Ok(json!({"inputs": {"path": path.display().to_string(), "records": records.len()}, "fit": fit, "slope": fit.slope}))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let body = json!({"error": e.kind(), "message": e.to_string()});
            eprintln!("{}", serde_json::to_string(&body).expect("json"));
            ExitCode::from(if e.is_cost() { 3 } else { 2 })
        }
    }
}
