use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use msplit::gallery::{self, ExactScalar, WitnessReport};
use msplit::io::{function_json, space_json, Kind, ReglueFile, Workspace};
use msplit::multifunction::{UscoMode, DEFAULT_SEARCH_CAP};
use msplit::multisplit::{self, EvCheck};
use msplit::splithomeo::{self, ReglueDatum};
use msplit::suite::{self, FailureRecord, Mode, SuiteConfig};
use msplit::{BigRational, Error, FinSpace, MultiMap, PointMap, PointSet, Rational, Rational128};

/// Decide multi-split continuity and related properties of maps between
/// finite topological spaces.
///
/// Exit codes: 0 success, 1 negative verdict or property failure, 2 usage
/// or input error.
#[derive(Parser)]
#[command(name = "msplit", version)]
struct Cli {
    /// Output style: readable text or one JSON record per line.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Extra files to load first (spaces, functions, multimaps, reglue data).
    #[arg(long, short = 'l', global = true)]
    load: Vec<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Record,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckArg {
    Fast,
    Definitional,
    DropClosure,
    DropCover,
}

impl From<CheckArg> for EvCheck {
    fn from(c: CheckArg) -> EvCheck {
        match c {
            CheckArg::Fast => EvCheck::Fast,
            CheckArg::Definitional => EvCheck::Definitional,
            CheckArg::DropClosure => EvCheck::WeakenedDropClosure,
            CheckArg::DropCover => EvCheck::WeakenedDropCover,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Scalar {
    I64,
    I128,
    Big,
}

#[derive(Subcommand)]
enum Command {
    /// Load a space file and report its basic structure.
    Validate {
        #[arg(long)]
        space: PathBuf,
    },
    /// Closure, interior and boundary of a subset.
    Closure {
        #[arg(long)]
        space: PathBuf,
        /// Comma-separated point labels.
        #[arg(long, value_delimiter = ',')]
        set: Vec<String>,
    },
    /// T0, Hausdorff and regularity flags.
    Separation {
        #[arg(long)]
        space: PathBuf,
    },
    /// All sets of extended values at one point or at every point.
    Evsets {
        #[arg(long = "fn")]
        function: PathBuf,
        #[arg(long)]
        point: Option<String>,
        #[arg(long, value_enum, default_value_t = CheckArg::Fast)]
        check: CheckArg,
    },
    /// The star multifunction f* (Hausdorff codomain only).
    Star {
        #[arg(long = "fn")]
        function: PathBuf,
    },
    /// Multi-split continuity with certificates.
    Msc {
        #[arg(long = "fn")]
        function: PathBuf,
        #[arg(long)]
        point: Option<String>,
    },
    /// Upper semicontinuity of a multimap.
    Usc {
        #[arg(long)]
        multimap: PathBuf,
        #[arg(long)]
        point: Option<String>,
    },
    /// Usco check, optionally for minimality.
    Usco {
        #[arg(long)]
        multimap: PathBuf,
        #[arg(long)]
        minimal: bool,
        #[arg(long, default_value_t = DEFAULT_SEARCH_CAP)]
        cap: u128,
    },
    /// Whether every selection of a multimap is multi-split continuous.
    Prems {
        #[arg(long)]
        multimap: PathBuf,
        #[arg(long)]
        point: Option<String>,
        #[arg(long, default_value_t = DEFAULT_SEARCH_CAP)]
        cap: u128,
    },
    /// Graph of a map, its closure, and gr(f*) when defined.
    Graphclosure {
        #[arg(long = "fn")]
        function: PathBuf,
    },
    /// Check a map, or search for a split homeomorphism between two spaces.
    Splithomeo {
        #[arg(long = "fn", conflicts_with = "spaces")]
        function: Option<PathBuf>,
        #[arg(long, num_args = 2, value_names = ["S", "T"])]
        spaces: Vec<PathBuf>,
    },
    /// Cut-and-reglue datum from a split homeomorphism of discrete spaces.
    ReglueBuild {
        #[arg(long = "fn")]
        function: PathBuf,
        /// Directory to write Z, pX, pY, pXinv and the datum file into.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate a reglue datum clause by clause.
    ReglueVerify {
        #[arg(long)]
        reglue: PathBuf,
    },
    /// Chain two reglue data, or reverse one with --reverse.
    ReglueCompose {
        #[arg(long, num_args = 1..=2)]
        reglue: Vec<PathBuf>,
        #[arg(long)]
        reverse: bool,
    },
    /// Exact-arithmetic checks of the infinite examples.
    Gallery {
        #[command(subcommand)]
        which: GalleryCommand,
    },
    /// Run (or replay) the property suite.
    Suite(SuiteArgs),
}

#[derive(Subcommand)]
enum GalleryCommand {
    /// |f*_weird(1/n)| = n + 1 for each n up to --n.
    Weird {
        #[arg(long, default_value_t = 10)]
        n: u64,
        #[arg(long, default_value_t = 50)]
        depth: u64,
        #[arg(long, value_enum, default_value_t = Scalar::I128)]
        scalar: Scalar,
    },
    /// Divergence witness for a named example.
    Divergence {
        #[arg(long)]
        example: String,
        #[arg(long, default_value_t = 100)]
        depth: u64,
        #[arg(long, value_enum, default_value_t = Scalar::I128)]
        scalar: Scalar,
    },
    /// The two-circle reglue datum with 2n - 2 points per side.
    Circle {
        #[arg(long, default_value_t = 4)]
        n: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteAction {
    Run,
    Replay,
    List,
}

#[derive(Args)]
struct SuiteArgs {
    #[arg(value_enum, default_value_t = SuiteAction::Run)]
    action: SuiteAction,
    /// Restrict to these properties (repeatable).
    #[arg(long)]
    property: Vec<String>,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    exhaustive_max: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Both)]
    mode: ModeArg,
    /// Extended-value check used by the suite; the drop-* values are faults.
    #[arg(long, value_enum, default_value_t = CheckArg::Fast)]
    check: CheckArg,
    #[arg(long, default_value_t = DEFAULT_SEARCH_CAP)]
    cap: u128,
    /// Failure record to replay (JSON, as printed by `suite run`).
    #[arg(long)]
    record: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Both,
    Exhaustive,
    Random,
}

/// Records to print and whether the verdict was positive.
struct Outcome {
    records: Vec<Value>,
    ok: bool,
}

impl Outcome {
    fn one(record: Value, ok: bool) -> Outcome {
        Outcome {
            records: vec![record],
            ok,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            for r in &out.records {
                print!("{}", render(r, cli.format));
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Record => format!("{v}\n"),
        Format::Text => {
            let mut out = String::new();
            text(v, 0, &mut out);
            out.push('\n');
            out
        }
    }
}

fn text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match x {
                    Value::Object(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        text(x, indent + 1, out);
                    }
                    Value::Array(a) if a.iter().any(Value::is_object) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        for item in a {
                            out.push_str(&format!("{pad}  -\n"));
                            text(item, indent + 2, out);
                        }
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar_text(x))),
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar_text(v))),
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn load(ws: &mut Workspace, path: &Path, kind: Kind) -> Result<String, Error> {
    let (got, name) = ws.load(path, None)?;
    if got != kind {
        return Err(Error::Parse(format!(
            "{} holds a {}, expected a {}",
            path.display(),
            got.as_str(),
            kind.as_str()
        )));
    }
    Ok(name)
}

fn load_space(ws: &mut Workspace, path: &Path) -> Result<Arc<FinSpace>, Error> {
    let name = load(ws, path, Kind::Space)?;
    Ok(ws.space(&name)?.clone())
}

fn load_map(ws: &mut Workspace, path: &Path) -> Result<PointMap, Error> {
    let name = load(ws, path, Kind::Function)?;
    Ok(ws.map(&name)?.clone())
}

fn load_multimap(ws: &mut Workspace, path: &Path) -> Result<MultiMap, Error> {
    let name = load(ws, path, Kind::MultiMap)?;
    Ok(ws.multimap(&name)?.clone())
}

fn load_reglue(ws: &mut Workspace, path: &Path) -> Result<ReglueDatum, Error> {
    let name = load(ws, path, Kind::Reglue)?;
    Ok(ws.reglue(&name)?.clone())
}

fn point(space: &FinSpace, label: &Option<String>) -> Result<Option<usize>, Error> {
    label.as_deref().map(|l| space.index_of(l)).transpose()
}

fn labels(space: &FinSpace, set: &PointSet) -> Value {
    json!(space.labels_of(set))
}

fn map_record(f: &PointMap) -> Value {
    let (x, y) = (f.domain(), f.codomain());
    Value::Object(
        (0..x.len())
            .map(|p| (x.label(p).to_string(), json!(y.label(f.apply(p)))))
            .collect::<Map<_, _>>(),
    )
}

fn multimap_record(m: &MultiMap) -> Value {
    let (x, y) = (m.domain(), m.codomain());
    Value::Object(
        (0..x.len())
            .map(|p| (x.label(p).to_string(), labels(y, m.value(p))))
            .collect::<Map<_, _>>(),
    )
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let mut ws = Workspace::new();
    for path in &cli.load {
        ws.load(path, None)?;
    }
    match &cli.command {
        Command::Validate { space } => {
            let s = load_space(&mut ws, space)?;
            let flags = s.separation_flags();
            Ok(Outcome::one(
                json!({
                    "name": s.name(),
                    "points": s.labels(),
                    "opens": s.opens().len(),
                    "minimal_opens": Value::Object(
                        (0..s.len()).map(|p| (s.label(p).to_string(), labels(&s, s.min_open(p)))).collect()
                    ),
                    "t0": flags.t0,
                    "discrete": s.is_discrete(),
                }),
                true,
            ))
        }
        Command::Closure { space, set } => {
            let s = load_space(&mut ws, space)?;
            let a = s.set_from_labels(set)?;
            let (cl, int, bd) = s.closure_interior_boundary(&a)?;
            Ok(Outcome::one(
                json!({
                    "set": labels(&s, &a),
                    "closure": labels(&s, &cl),
                    "interior": labels(&s, &int),
                    "boundary": labels(&s, &bd),
                    "open": s.is_open(&a),
                    "closed": s.is_closed(&a),
                }),
                true,
            ))
        }
        Command::Separation { space } => {
            let s = load_space(&mut ws, space)?;
            let f = s.separation_flags();
            Ok(Outcome::one(
                json!({"name": s.name(), "t0": f.t0, "hausdorff": f.hausdorff, "regular": f.regular}),
                true,
            ))
        }
        Command::Evsets { function, point: at, check } => {
            let f = load_map(&mut ws, function)?;
            let points: Vec<usize> = match point(f.domain(), at)? {
                Some(p) => vec![p],
                None => (0..f.domain().len()).collect(),
            };
            let mut records = Vec::new();
            let mut ok = true;
            for p in points {
                let fam = multisplit::ev_family_with(&f, p, (*check).into())?;
                ok &= fam.split_at();
                records.push(multisplit::ev_record(f.domain(), f.codomain(), &fam));
            }
            Ok(Outcome { records, ok })
        }
        Command::Star { function } => {
            let f = load_map(&mut ws, function)?;
            let st = multisplit::star(&f)?;
            Ok(Outcome::one(json!({"star": multimap_record(st.as_multimap())}), true))
        }
        Command::Msc { function, point: at } => {
            let f = load_map(&mut ws, function)?;
            let p = point(f.domain(), at)?;
            let r = multisplit::is_multi_split(&f, p)?;
            let certs: Map<String, Value> = r
                .certificates
                .iter()
                .map(|(p, z)| (f.domain().label(*p).to_string(), labels(f.codomain(), z)))
                .collect();
            Ok(Outcome::one(
                json!({"multi_split": r.holds, "continuous": f.is_continuous(p).holds(), "certificates": certs}),
                r.holds,
            ))
        }
        Command::Usc { multimap, point: at } => {
            let m = load_multimap(&mut ws, multimap)?;
            let p = point(m.domain(), at)?;
            let v = m.is_usc(p);
            let witness = v.witness.as_ref().map(|w| {
                json!({"point": m.domain().label(w.point), "open": labels(m.codomain(), &w.open)})
            });
            Ok(Outcome::one(json!({"usc": v.holds(), "witness": witness}), v.holds()))
        }
        Command::Usco { multimap, minimal, cap } => {
            let m = load_multimap(&mut ws, multimap)?;
            let usco = m.is_usco(UscoMode::Usco, *cap)?;
            let mut rec = Map::new();
            rec.insert("usco".into(), json!(usco));
            let mut ok = usco;
            if *minimal {
                let sub = if usco { m.proper_usco_submultifunction(*cap)? } else { None };
                let min = usco && sub.is_none();
                rec.insert("minimal".into(), json!(min));
                rec.insert("proper_usco_sub".into(), sub.as_ref().map(multimap_record).unwrap_or(Value::Null));
                ok = min;
            }
            Ok(Outcome::one(Value::Object(rec), ok))
        }
        Command::Prems { multimap, point: at, cap } => {
            let m = load_multimap(&mut ws, multimap)?;
            let p = point(m.domain(), at)?;
            let r = multisplit::is_pre_multi_split(&m, p, *cap)?;
            let first = r.first_uncertified.map(|(s, p)| json!({"selection": s.to_string(), "point": m.domain().label(p)}));
            Ok(Outcome::one(
                json!({
                    "pre_multi_split": r.holds,
                    "selections": r.selections.to_string(),
                    "values_certify": r.values_certify,
                    "first_uncertified": first,
                }),
                r.holds,
            ))
        }
        Command::Graphclosure { function } => {
            let f = load_map(&mut ws, function)?;
            let (prod, gr, cl) = f.to_multimap().graph_and_closure();
            let mut rec = Map::new();
            rec.insert("graph".into(), labels(&prod, &gr));
            rec.insert("closure".into(), labels(&prod, &cl));
            rec.insert("closed".into(), json!(gr == cl));
            if f.codomain().is_hausdorff() {
                let st = multisplit::star(&f)?;
                let gs = st.as_multimap().graph_in(&prod);
                rec.insert("star_graph".into(), labels(&prod, &gs));
                rec.insert("closure_is_star_graph".into(), json!(gs == cl));
            }
            Ok(Outcome::one(Value::Object(rec), true))
        }
        Command::Splithomeo { function, spaces } => {
            if let Some(path) = function {
                let f = load_map(&mut ws, path)?;
                let ok = splithomeo::is_split_homeo(&f);
                Ok(Outcome::one(json!({"split_homeomorphism": ok}), ok))
            } else if let [a, b] = spaces.as_slice() {
                let s = load_space(&mut ws, a)?;
                let t = load_space(&mut ws, b)?;
                let w = splithomeo::split_homeomorphic(&s, &t)?;
                let ok = w.is_some();
                Ok(Outcome::one(
                    json!({"split_homeomorphic": ok, "witness": w.as_ref().map(map_record)}),
                    ok,
                ))
            } else {
                Err(Error::Parse("give --fn FILE or --spaces S T".into()))
            }
        }
        Command::ReglueBuild { function, out } => {
            let f = load_map(&mut ws, function)?;
            let d = splithomeo::reglue_from_splithomeo(&f)?;
            let stem = function.file_stem().and_then(|s| s.to_str()).unwrap_or("f");
            let files = datum_files(stem, &d)?;
            if let Some(dir) = out {
                std::fs::create_dir_all(dir).map_err(|e| Error::Parse(format!("{}: {e}", dir.display())))?;
                for (name, v) in &files {
                    let path = dir.join(format!("{name}.json"));
                    let text = serde_json::to_string_pretty(v).expect("plain data");
                    std::fs::write(&path, text + "\n")
                        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
                }
            }
            let report = splithomeo::validate_reglue(&d);
            Ok(Outcome::one(
                json!({
                    "files": files.iter().map(|(n, _)| format!("{n}.json")).collect::<Vec<_>>(),
                    "validation": report,
                    "derived": map_record(&d.derived()),
                }),
                report.passes(),
            ))
        }
        Command::ReglueVerify { reglue } => {
            let d = load_reglue(&mut ws, reglue)?;
            let r = splithomeo::validate_reglue(&d);
            Ok(Outcome::one(
                json!({"valid": r.passes(), "clauses": r, "derived": map_record(&d.derived())}),
                r.passes(),
            ))
        }
        Command::ReglueCompose { reglue, reverse } => {
            let d = match (reglue.as_slice(), reverse) {
                ([a], true) => splithomeo::reglue_reverse(&load_reglue(&mut ws, a)?)?,
                ([a, b], false) => {
                    let d1 = load_reglue(&mut ws, a)?;
                    let d2 = load_reglue(&mut ws, b)?;
                    splithomeo::reglue_transitive(&d1, &d2)?
                }
                _ => return Err(Error::Parse("give two --reglue files, or one with --reverse".into())),
            };
            let r = splithomeo::validate_reglue(&d);
            Ok(Outcome::one(
                json!({
                    "valid": r.passes(),
                    "clauses": r,
                    "z_points": d.z().len(),
                    "derived": map_record(&d.derived()),
                }),
                r.passes(),
            ))
        }
        Command::Gallery { which } => gallery_cmd(which),
        Command::Suite(args) => suite_cmd(args),
    }
}

/// Space and function files for a datum; new objects are named after
/// `stem`.
fn datum_files(stem: &str, d: &ReglueDatum) -> Result<Vec<(String, Value)>, Error> {
    let z_name = format!("{stem}_Z");
    let z = Arc::new(d.z().as_ref().clone().with_name(&z_name));
    let px = PointMap::new(z.clone(), d.x().clone(), d.px().table().to_vec())?;
    let py = PointMap::new(z.clone(), d.y().clone(), d.py().table().to_vec())?;
    let pxinv = PointMap::new(d.x().clone(), z.clone(), d.pxinv().table().to_vec())?;
    let names = ["pX", "pY", "pXinv"].map(|n| format!("{stem}_{n}"));
    let datum = ReglueFile {
        name: Some(format!("{stem}_reglue")),
        z: z_name.clone(),
        px: names[0].clone(),
        py: names[1].clone(),
        pxinv: names[2].clone(),
    };
    let mut files = vec![(d.x().name().to_string(), space_json(d.x()))];
    if d.y().name() != d.x().name() {
        files.push((d.y().name().to_string(), space_json(d.y())));
    }
    files.extend([
        (z_name, space_json(&z)),
        (names[0].clone(), function_json(Some(&names[0]), &px)),
        (names[1].clone(), function_json(Some(&names[1]), &py)),
        (names[2].clone(), function_json(Some(&names[2]), &pxinv)),
        (format!("{stem}_reglue"), serde_json::to_value(datum).expect("plain data")),
    ]);
    Ok(files)
}

fn witness(r: WitnessReport) -> Outcome {
    let ok = r.passes();
    Outcome::one(serde_json::to_value(r).expect("plain data"), ok)
}

fn weird_all<T: ExactScalar>(n: u64, depth: u64) -> Outcome {
    let mut records = Vec::new();
    let mut ok = gallery::f_weird_distinct::<T>(n, depth);
    records.push(json!({"distinct": ok, "n_max": n, "depth": depth}));
    for i in 1..=n {
        let r = gallery::f_weird_star_check::<T>(i, depth);
        ok &= r.passes();
        records.push(serde_json::to_value(r).expect("plain data"));
    }
    Outcome { records, ok }
}

fn gallery_cmd(which: &GalleryCommand) -> Result<Outcome, Error> {
    match which {
        GalleryCommand::Weird { n, depth, scalar } => Ok(match scalar {
            Scalar::I64 => weird_all::<Rational>(*n, *depth),
            Scalar::I128 => weird_all::<Rational128>(*n, *depth),
            Scalar::Big => weird_all::<BigRational>(*n, *depth),
        }),
        GalleryCommand::Divergence { example, depth, scalar } => Ok(witness(match scalar {
            Scalar::I64 => gallery::divergence_witness::<Rational>(example, *depth)?,
            Scalar::I128 => gallery::divergence_witness::<Rational128>(example, *depth)?,
            Scalar::Big => gallery::divergence_witness::<BigRational>(example, *depth)?,
        })),
        GalleryCommand::Circle { n } => {
            let d = gallery::circle_reglue_demo(*n)?;
            let r = splithomeo::validate_reglue(&d);
            Ok(Outcome::one(
                json!({
                    "z_points": d.z().len(),
                    "x_points": d.x().len(),
                    "y_points": d.y().len(),
                    "valid": r.passes(),
                    "clauses": r,
                    "derived": map_record(&d.derived()),
                }),
                r.passes(),
            ))
        }
    }
}

fn suite_cmd(args: &SuiteArgs) -> Result<Outcome, Error> {
    let cfg = SuiteConfig {
        seed: args.seed,
        trials: args.trials,
        exhaustive_max: args.exhaustive_max,
        ev_check: args.check.into(),
        selection_cap: args.cap,
    };
    if cfg.exhaustive_max > suite::MAX_ENUMERATED {
        return Err(Error::TooLarge(format!(
            "--exhaustive-max is at most {}",
            suite::MAX_ENUMERATED
        )));
    }
    let names: Vec<String> = if args.property.is_empty() {
        suite::property_names().into_iter().map(str::to_string).collect()
    } else {
        args.property.clone()
    };
    match args.action {
        SuiteAction::List => Ok(Outcome {
            records: names.iter().map(|n| json!({"name": n})).collect(),
            ok: true,
        }),
        SuiteAction::Replay => {
            let path = args
                .record
                .as_ref()
                .ok_or_else(|| Error::Parse("replay needs --record FILE".into()))?;
            let [name] = names.as_slice() else {
                return Err(Error::Parse("replay needs exactly one --property".into()));
            };
            let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            let rec: FailureRecord = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
            let detail = suite::replay(name, &rec, &cfg)?;
            Ok(Outcome::one(
                json!({"name": name, "verdict": if detail.is_some() { "fail" } else { "pass" }, "detail": detail}),
                detail.is_none(),
            ))
        }
        SuiteAction::Run => {
            let mode = match args.mode {
                ModeArg::Both => Mode::Both,
                ModeArg::Exhaustive => Mode::Exhaustive,
                ModeArg::Random => Mode::Random,
            };
            let mut records = Vec::new();
            let mut ok = true;
            for name in &names {
                let r = suite::run_property(name, mode, &cfg)?;
                ok &= r.passed();
                records.push(r.record());
            }
            Ok(Outcome { records, ok })
        }
    }
}
