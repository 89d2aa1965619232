//! Command-line front end. Exit codes: 0 affirmative, 1 negative but valid,
//! 2 error.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::charvar::{commutator_trace, lift_with, locus_eval, locus_verify, Character, LocusTolerances, RootChoice};
use crate::error::{Error, Result};
use crate::freegroup::{fox_derivative, Alphabet, Word};
use crate::representation::{solve_parabolic, MatrixRep, ParabolicGrid, Representation, SymPowerRep};
use crate::scalar::{default_tolerance, init_default_tolerance};
use crate::suturedcert::{certify, SuturedHandlebodyData};
use crate::twisted::{conjecture_check, wada_torsion, Presentation, TorsionResult, Verdict};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputMode {
    /// `key: value` lines.
    Human,
    /// One JSON object, a superset of the human lines.
    Json,
}

#[derive(Parser, Debug)]
#[command(
    name = "torsion-cert",
    version,
    about = "Fox-calculus certificates, twisted torsion and character-variety loci"
)]
pub struct Cli {
    /// Relative zero tolerance for floating-point scalars.
    #[arg(long, global = true, env = "TORSION_CERT_TOL")]
    pub tol: Option<f64>,
    /// Seed for every sampling command.
    #[arg(long, global = true, env = "TORSION_CERT_SEED", default_value_t = 7)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = OutputMode::Human)]
    pub format: OutputMode,
    /// Directory searched for file arguments that do not exist as given.
    #[arg(long, global = true)]
    pub data_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Fox derivative of a word with respect to a generator.
    Fox {
        word: String,
        generator: char,
        /// Generator names; inferred from the word when omitted.
        #[arg(long)]
        alphabet: Option<String>,
    },
    /// Determinant certificate for a sutured handlebody.
    Certify(CertifyArgs),
    /// Wada torsion of a deficiency-one presentation.
    Torsion(TorsionArgs),
    /// Verify a reference locus polynomial, or scan a single character.
    Locus(LocusArgs),
    /// Explicit SL(2) lift of a character.
    Charlift {
        character: String,
        /// Use `u⁻¹` instead of the principal root.
        #[arg(long)]
        inverse_root: bool,
    },
    /// Lint data files (`.pres`, `.sut`, `.rep`); defaults to the data directory.
    Validate { files: Vec<PathBuf> },
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    pub sutured: PathBuf,
    /// Character literal `(x, y, z)`.
    #[arg(long = "char", conflicts_with = "rep", required_unless_present = "rep")]
    pub character: Option<String>,
    /// Representation file.
    #[arg(long)]
    pub rep: Option<PathBuf>,
    /// Cross-check with relative homology.
    #[arg(long)]
    pub oracle: bool,
    /// Compose with the N-dimensional symmetric power.
    #[arg(long)]
    pub sym_power: Option<usize>,
}

#[derive(Args, Debug)]
#[group(skip)]
#[command(group(ArgGroup::new("source").required(true).args(["trivial_rep", "trivial_rep2", "parabolic", "rep"])))]
pub struct TorsionArgs {
    pub presentation: PathBuf,
    /// One-dimensional trivial representation.
    #[arg(long)]
    pub trivial_rep: bool,
    /// Two-dimensional trivial representation.
    #[arg(long)]
    pub trivial_rep2: bool,
    /// Parabolic representation from the grid search.
    #[arg(long)]
    pub parabolic: bool,
    /// Representation file.
    #[arg(long)]
    pub rep: Option<PathBuf>,
    /// Which parabolic solution to use, in sorted order.
    #[arg(long, default_value_t = 0)]
    pub solution: usize,
    /// Compare the degree with `4g - 2`.
    #[arg(long)]
    pub genus_check: bool,
}

#[derive(Args, Debug)]
pub struct LocusArgs {
    /// Symmetric power dimension.
    #[arg(long = "N", default_value_t = 3)]
    pub n: usize,
    #[arg(long, default_value_t = 100)]
    pub samples: u64,
    /// Perturb the reference polynomial (negative control).
    #[arg(long)]
    pub corrupt: bool,
    /// Evaluate a single character instead of sampling.
    #[arg(long)]
    pub scan: Option<String>,
    /// Relative bound for points on the locus.
    #[arg(long, default_value_t = 1e-6)]
    pub on_tol: f64,
    /// Relative floor for perturbed points.
    #[arg(long, default_value_t = 1e-3)]
    pub off_tol: f64,
}

/// Resolved global options.
#[derive(Clone, Debug, Serialize)]
pub struct Config {
    pub tolerance: f64,
    pub seed: u64,
    pub output_mode: OutputMode,
    pub data_dir: PathBuf,
}

impl Config {
    /// `path` as given when it exists, otherwise relative to the data directory.
    pub fn resolve(&self, path: &Path) -> PathBuf {
        if path.exists() || path.is_absolute() {
            path.to_path_buf()
        } else {
            self.data_dir.join(path)
        }
    }

    fn read(&self, path: &Path) -> Result<String> {
        let full = self.resolve(path);
        std::fs::read_to_string(&full).map_err(|e| Error::Io(format!("{}: {e}", full.display())))
    }
}

pub fn default_data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data")
}

/// Ordered key/value report; the JSON form adds structured `details`.
#[derive(Default)]
struct Report {
    lines: Vec<(String, String)>,
    details: Map<String, Value>,
}

impl Report {
    fn line(&mut self, key: &str, value: impl ToString) {
        self.lines.push((key.to_string(), value.to_string()));
    }

    fn detail(&mut self, key: &str, value: impl Serialize) -> Result<()> {
        let v = serde_json::to_value(value).map_err(|e| Error::Io(e.to_string()))?;
        self.details.insert(key.to_string(), v);
        Ok(())
    }

    fn render(self, mode: OutputMode) -> String {
        match mode {
            OutputMode::Human => self.lines.iter().fold(String::new(), |mut s, (k, v)| {
                let _ = writeln!(s, "{k}: {v}");
                s
            }),
            OutputMode::Json => {
                let mut obj: Map<String, Value> = self.lines.into_iter().map(|(k, v)| (k, Value::String(v))).collect();
                if !self.details.is_empty() {
                    obj.insert("details".into(), Value::Object(self.details));
                }
                let mut s = serde_json::to_string_pretty(&Value::Object(obj)).unwrap_or_default();
                s.push('\n');
                s
            }
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_YES };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli) {
        Ok((report, mode, code)) => {
            let _ = out.write_all(report.render(mode).as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

pub fn run() -> i32 {
    run_with(
        std::env::args_os(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}

fn configure(cli: &Cli) -> Result<Config> {
    let tolerance = match cli.tol {
        Some(t) => {
            if init_default_tolerance(t).is_err() && default_tolerance() != t {
                return Err(Error::InvalidArgument(format!(
                    "tolerance must be positive and set once, got {t}"
                )));
            }
            t
        }
        None => default_tolerance(),
    };
    Ok(Config {
        tolerance,
        seed: cli.seed,
        output_mode: cli.format,
        data_dir: cli.data_dir.clone().unwrap_or_else(default_data_dir),
    })
}

fn execute(cli: Cli) -> Result<(Report, OutputMode, i32)> {
    let cfg = configure(&cli)?;
    let (report, code) = match &cli.command {
        Command::Fox {
            word,
            generator,
            alphabet,
        } => cmd_fox(word, *generator, alphabet.as_deref())?,
        Command::Certify(a) => cmd_certify(&cfg, a)?,
        Command::Torsion(a) => cmd_torsion(&cfg, a)?,
        Command::Locus(a) => cmd_locus(&cfg, a)?,
        Command::Charlift {
            character,
            inverse_root,
        } => cmd_charlift(character, *inverse_root)?,
        Command::Validate { files } => cmd_validate(&cfg, files)?,
    };
    Ok((report, cfg.output_mode, code))
}

fn cmd_fox(word: &str, generator: char, alphabet: Option<&str>) -> Result<(Report, i32)> {
    let gen_name = generator.to_string();
    let alphabet = match alphabet {
        Some(a) => Alphabet::parse(a)?,
        None => Alphabet::infer([word, gen_name.as_str()])?,
    };
    let w = Word::parse(word, &alphabet)?;
    let g = alphabet.generator(generator)?;
    let d = fox_derivative(&w, g.index)?;
    let mut r = Report::default();
    r.line("word", &w);
    r.line("generator", generator);
    r.line("derivative", &d);
    r.detail("terms", d.num_terms())?;
    r.detail("augmentation", d.augmentation())?;
    Ok((r, EXIT_YES))
}

fn cmd_certify(cfg: &Config, a: &CertifyArgs) -> Result<(Report, i32)> {
    let data = SuturedHandlebodyData::parse(&cfg.read(&a.sutured)?)?;
    let mut r = Report::default();
    r.line("sutured", data.name());
    let base = match (&a.character, &a.rep) {
        (Some(c), _) => {
            let c: Character = c.parse()?;
            let lift = lift_with(&c, RootChoice::Principal)?;
            r.line("character", &c);
            r.line("reducible", lift.reducible);
            lift.rep
        }
        (None, Some(p)) => Representation::parse(&cfg.read(p)?)?,
        (None, None) => return Err(Error::InvalidArgument("need --char or --rep".into())),
    };
    let cert = match a.sym_power {
        Some(n) => {
            r.line("sym_power", n);
            certify(&data, &SymPowerRep::new(base, n)?, a.oracle)?
        }
        None => certify(&data, &base, a.oracle)?,
    };
    r.line("representation", &cert.rep_description);
    r.line("determinant", &cert.determinant);
    r.line("verdict", if cert.is_product { "product" } else { "not-product" });
    if let Some(h1) = cert.oracle_h1 {
        r.line("oracle_h1", h1);
    }
    if let Some((h0, h1, h2)) = cert.oracle_homology {
        r.line("oracle_homology", format!("({h0}, {h1}, {h2})"));
    }
    if cert.extended {
        r.line("extended", true);
    }
    r.detail("certificate", &cert)?;
    Ok((r, if cert.is_product { EXIT_YES } else { EXIT_NO }))
}

fn torsion_lines(r: &mut Report, t: &TorsionResult) {
    r.line("dimension", t.dim);
    r.line("numerator", &t.numerator);
    r.line("denominator", &t.denominator);
    r.line("column_deleted", t.column_deleted);
    let or_none = |v: Option<String>| v.unwrap_or_else(|| "none".into());
    r.line("degree", or_none(t.degree.map(|d| d.to_string())));
    r.line(
        "norm_bound",
        or_none(t.norm_bound.as_ref().map(crate::scalar::fmt_rational)),
    );
    r.line(
        "genus_bound",
        or_none(t.genus_bound.as_ref().map(crate::scalar::fmt_rational)),
    );
}

fn cmd_torsion(cfg: &Config, a: &TorsionArgs) -> Result<(Report, i32)> {
    let pres = Presentation::parse(&cfg.read(&a.presentation)?)?;
    let mut r = Report::default();
    r.line("presentation", pres.name());
    let rep = if a.trivial_rep {
        r.line("representation", "trivial, dimension 1");
        Representation::trivial(pres.alphabet(), 1)
    } else if a.trivial_rep2 {
        r.line("representation", "trivial, dimension 2");
        Representation::trivial(pres.alphabet(), 2)
    } else if a.parabolic {
        let sols = solve_parabolic(&pres, &ParabolicGrid::default())?;
        let count = sols.len();
        let s = sols.into_iter().nth(a.solution).ok_or_else(|| {
            Error::InvalidArgument(format!("parabolic solution {} requested, {count} found", a.solution))
        })?;
        r.line("representation", "parabolic");
        r.line("parabolic_solutions", count);
        r.line("parabolic_y", format!("{:.12}", s.y));
        r.line("relator_defect", format!("{:e}", s.defect));
        s.rep
    } else if let Some(p) = &a.rep {
        r.line("representation", p.display());
        Representation::parse(&cfg.read(p)?)?
    } else {
        return Err(Error::InvalidArgument("no representation source".into()));
    };
    if a.genus_check {
        let report = conjecture_check(&pres, &rep)?;
        torsion_lines(&mut r, &report.torsion);
        r.line("genus", report.genus);
        r.line("expected_degree", report.expected_degree);
        if let Some(tr) = &report.longitude_trace {
            r.line("longitude_trace", tr);
        }
        r.line("verdict", report.verdict);
        r.detail("conjecture", &report)?;
        let code = if report.verdict == Verdict::Equality {
            EXIT_YES
        } else {
            EXIT_NO
        };
        Ok((r, code))
    } else {
        let t = wada_torsion(&pres, &rep)?;
        torsion_lines(&mut r, &t);
        r.detail("torsion", &t)?;
        Ok((r, EXIT_YES))
    }
}

fn cmd_locus(cfg: &Config, a: &LocusArgs) -> Result<(Report, i32)> {
    if a.n < 2 {
        return Err(Error::InvalidArgument(format!("--N must be at least 2, got {}", a.n)));
    }
    if !(a.on_tol > 0.0 && a.off_tol > 0.0) {
        return Err(Error::InvalidArgument("locus tolerances must be positive".into()));
    }
    let mut r = Report::default();
    r.line("N", a.n);
    if let Some(c) = &a.scan {
        let c: Character = c.parse()?;
        let v = locus_eval(&c, &crate::suturedcert::pants_example(), a.n)?;
        let on = v.vanishes(a.on_tol);
        r.line("character", &c);
        r.line("determinant", &v.det);
        r.line("relative", format!("{:e}", v.relative()));
        r.line("verdict", if on { "on-locus" } else { "off-locus" });
        r.detail("value", &v)?;
        return Ok((r, if on { EXIT_YES } else { EXIT_NO }));
    }
    if a.samples == 0 {
        return Err(Error::InvalidArgument("--samples must be positive".into()));
    }
    let tol = LocusTolerances {
        on: a.on_tol,
        off: a.off_tol,
        ..LocusTolerances::default()
    };
    let rep = locus_verify(a.n, a.samples, cfg.seed, a.corrupt, &tol)?;
    let worst_on = rep.samples.iter().map(|s| s.worst_on).fold(0.0, f64::max);
    let best_off = rep.samples.iter().map(|s| s.best_off).fold(f64::INFINITY, f64::min);
    r.line("seed", rep.seed);
    r.line("polynomial", &rep.polynomial);
    r.line("corrupted", rep.corrupted);
    r.line("samples", rep.samples.len());
    r.line("on_checked", rep.on_checked);
    r.line("on_failures", rep.on_failures);
    r.line("off_checked", rep.off_checked);
    r.line("off_failures", rep.off_failures);
    r.line("worst_on", format!("{worst_on:e}"));
    r.line("best_off", format!("{best_off:e}"));
    let passed = rep.passed();
    r.line("verdict", if passed { "pass" } else { "fail" });
    r.detail("report", &rep)?;
    Ok((r, if passed { EXIT_YES } else { EXIT_NO }))
}

fn cmd_charlift(character: &str, inverse_root: bool) -> Result<(Report, i32)> {
    let c: Character = character.parse()?;
    let choice = if inverse_root {
        RootChoice::Inverse
    } else {
        RootChoice::Principal
    };
    let lift = lift_with(&c, choice)?;
    let mut r = Report::default();
    r.line("character", &c);
    r.line("u", &lift.u);
    r.line("x", lift.rep.image(0));
    r.line("y", lift.rep.image(1));
    r.line("kind", lift.rep.kind());
    r.line("commutator_trace", commutator_trace(&c));
    r.line("reducible", lift.reducible);
    r.detail("character", &c)?;
    Ok((r, EXIT_YES))
}

fn round_trip<T: PartialEq + std::fmt::Display>(value: T, parse: impl Fn(&str) -> Result<T>) -> Result<()> {
    let printed = value.to_string();
    let again = parse(&printed)?;
    if again != value {
        return Err(Error::Validation(
            "printed form re-parses to a different structure".into(),
        ));
    }
    Ok(())
}

/// Parses, checks and round-trips one data file.
pub fn validate_text(kind: &str, text: &str) -> Result<()> {
    match kind {
        "pres" => {
            let p = Presentation::parse(text)?;
            p.validate()?;
            round_trip(p, Presentation::parse)
        }
        "sut" => round_trip(SuturedHandlebodyData::parse(text)?, SuturedHandlebodyData::parse),
        "rep" => round_trip(Representation::parse(text)?, Representation::parse),
        other => Err(Error::InvalidArgument(format!("unknown data file extension `{other}`"))),
    }
}

fn data_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| matches!(p.extension().and_then(|e| e.to_str()), Some("pres" | "sut" | "rep")))
        .collect();
    files.sort();
    Ok(files)
}

fn cmd_validate(cfg: &Config, files: &[PathBuf]) -> Result<(Report, i32)> {
    let files = if files.is_empty() {
        data_files(&cfg.data_dir)?
    } else {
        files.to_vec()
    };
    let mut r = Report::default();
    let mut bad = 0;
    let mut results = Map::new();
    for f in &files {
        let ext = f.extension().and_then(|e| e.to_str()).unwrap_or("");
        let outcome = cfg.read(f).and_then(|t| validate_text(ext, &t));
        let msg = match &outcome {
            Ok(()) => "ok".to_string(),
            Err(e) => {
                bad += 1;
                format!("invalid: {e}")
            }
        };
        results.insert(f.display().to_string(), json!(msg));
        r.line(&f.display().to_string(), msg);
    }
    r.line("checked", files.len());
    r.line("invalid", bad);
    r.detail("files", Value::Object(results))?;
    Ok((r, if bad == 0 { EXIT_YES } else { EXIT_ERROR }))
}
