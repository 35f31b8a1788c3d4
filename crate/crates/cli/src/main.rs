use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use qfock::canonical::{bar_invariance_check, build_block, canonical_basis, DecompositionMatrix, Sign};
use qfock::fock::{s_multi, v_operator, Flavor, FockContext, FockVector, MultiCharge, OperatorExpr};
use qfock::verify::{run_property_suite, sweep_theorem_412, Verifier, SUITES};
use qfock::wedge::{FockParams, WedgeEngine};
use qfock::{LaurentRat, Multipartition, Partition};

mod cache;

use cache::BlockCache;

#[derive(Parser)]
#[command(name = "qfock", version, about = "Exact computations in higher-level q-deformed Fock spaces")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Global {
    /// Number of residues.
    #[arg(long, global = true, default_value_t = 2)]
    n: usize,
    /// Level; defaults to the length of --charge, or 1.
    #[arg(long, global = true)]
    l: Option<usize>,
    /// Multicharge as a comma list; defaults to all zeros.
    #[arg(long, global = true, allow_hyphen_values = true)]
    charge: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, global = true, env = "QFOCK_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

impl From<SignArg> for Sign {
    fn from(s: SignArg) -> Sign {
        match s {
            SignArg::Plus => Sign::Plus,
            SignArg::Minus => Sign::Minus,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Route {
    Ribbon,
    Boson,
}

#[derive(Subcommand)]
enum Command {
    /// Normal-orders a finite wedge, or a semi-infinite one with --s.
    Straighten {
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        /// Charge of the semi-infinite wedge whose head is --word.
        #[arg(long, allow_hyphen_values = true)]
        s: Option<i64>,
    },
    /// Bar involution of a basis vector.
    Bar {
        #[arg(long)]
        lambda: String,
    },
    /// A boson on a basis vector: plain B_m, or B'_{-m}[i] / B_{-m}[j] / B_{-m}[j,ℓ].
    Boson {
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        primed: Option<usize>,
        #[arg(long)]
        bracket: Option<usize>,
        #[arg(long)]
        ranged: Option<usize>,
    },
    /// Applies an operator to |λ; s⟩ (or to G⁻(λ; s) with --canonical-input).
    ApplyOp {
        /// Operator as JSON, or @path to a JSON file.
        #[arg(long, conflicts_with_all = ["schur", "v"])]
        expr: Option<String>,
        /// The product Schur operator of a multipartition.
        #[arg(long, conflicts_with = "v")]
        schur: Option<String>,
        /// V'_m[i] with --sector i.
        #[arg(long)]
        v: Option<usize>,
        #[arg(long, default_value_t = 1)]
        sector: usize,
        #[arg(long, value_enum, default_value_t = Route::Ribbon)]
        route: Route,
        /// Target label; defaults to the vacuum.
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        canonical_input: bool,
    },
    /// The matrix Δ± of a degree block.
    Canonical {
        #[arg(long)]
        degree: usize,
        #[arg(long, value_enum, default_value_t = SignArg::Minus)]
        sign: SignArg,
    },
    /// Runs a theorem check or a property suite; JSON lines on stdout.
    Verify {
        #[arg(long, conflicts_with = "suite")]
        theorem: Option<String>,
        #[arg(long)]
        suite: Option<String>,
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        #[arg(long, default_value_t = 200)]
        budget: usize,
    },
    /// Writes Δ± for degrees 0..=max-degree into a directory.
    DecompExport {
        #[arg(long)]
        max_degree: usize,
        #[arg(long, value_enum, default_value_t = SignArg::Minus)]
        sign: SignArg,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] qfock::Error),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0} check(s) failed")]
    Failed(usize),
}

type CliResult<T> = Result<T, CliError>;

struct Config {
    params: FockParams,
    charge: MultiCharge,
    format: Format,
    cache: Option<BlockCache>,
    jobs: usize,
    seed: u64,
}

impl Config {
    fn from_global(g: &Global) -> CliResult<Config> {
        if g.n < 2 {
            return Err(CliError::Usage("--n must be at least 2".into()));
        }
        let charge = match &g.charge {
            None => vec![0; g.l.unwrap_or(1)],
            Some(text) => parse_list(text)?,
        };
        let l = g.l.unwrap_or(charge.len());
        if l < 1 {
            return Err(CliError::Usage("--l must be at least 1".into()));
        }
        if charge.len() != l {
            return Err(CliError::Usage(format!("--charge has {} entries but --l is {}", charge.len(), l)));
        }
        let params = FockParams::new(g.n, l)?;
        Ok(Config {
            params,
            charge: MultiCharge::new(charge)?,
            format: g.format,
            cache: g.cache_dir.as_deref().map(BlockCache::new),
            jobs: g.jobs.max(1),
            seed: g.seed,
        })
    }

    fn label(&self, text: &str) -> CliResult<Multipartition> {
        let m: Multipartition = serde_json::from_str(text)?;
        if m.level() != self.params.l {
            return Err(CliError::Usage(format!(
                "label {} has {} components but --l is {}",
                m,
                m.level(),
                self.params.l
            )));
        }
        Ok(m)
    }

    /// Δ± through the cache. A cache hit is accepted only if a randomly
    /// chosen row is bar-invariant.
    fn matrix(&self, degree: usize, sign: Sign, charge: &MultiCharge) -> CliResult<DecompositionMatrix> {
        let (n, l) = (self.params.n, self.params.l);
        if let Some(cache) = &self.cache {
            if let Some(m) = cache.load(n, l, charge, degree, sign) {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ degree as u64);
                let row = rng.gen_range(0..m.len());
                let g = m.basis_vector(&m.labels[row]).expect("row exists");
                if bar_invariance_check(&FockContext::new(self.params), &g)? {
                    return Ok(m);
                }
                eprintln!("cache entry for degree {} failed revalidation; recomputing", degree);
            }
        }
        let block = build_block(self.params, charge, degree)?;
        let m = canonical_basis(&block, sign)?;
        if let Some(cache) = &self.cache {
            cache.store(&m)?;
        }
        Ok(m)
    }
}

fn parse_list(text: &str) -> CliResult<Vec<i64>> {
    text.split(',')
        .map(|x| x.trim())
        .filter(|x| !x.is_empty())
        .map(|x| x.parse::<i64>().map_err(|_| CliError::Usage(format!("not an integer: {:?}", x))))
        .collect()
}

fn read_json_arg(text: &str) -> CliResult<String> {
    match text.strip_prefix('@') {
        Some(path) => Ok(std::fs::read_to_string(path)?),
        None => Ok(text.to_string()),
    }
}

fn render_vector(v: &FockVector, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string(v).expect("vector serializes"),
        Format::Csv => {
            let mut out = String::from("label,coeff\n");
            for (l, c) in v.iter().collect::<Vec<_>>().into_iter().rev() {
                out.push_str(&format!("\"{}\",{}\n", l, c));
            }
            out.trim_end().to_string()
        }
        Format::Text => {
            if v.is_zero() {
                return "0".into();
            }
            let rows: Vec<(String, String)> =
                v.iter().collect::<Vec<_>>().into_iter().rev().map(|(l, c)| (c.to_string(), l.to_string())).collect();
            aligned(&rows)
        }
    }
}

fn aligned(rows: &[(String, String)]) -> String {
    let w = rows.iter().map(|(a, _)| a.chars().count()).max().unwrap_or(0);
    rows.iter()
        .map(|(a, b)| format!("{:>w$}  {}", a, b, w = w))
        .collect::<Vec<_>>()
        .join("\n")
}

fn render_words(terms: &BTreeMap<Vec<i64>, LaurentRat>, format: Format) -> String {
    #[derive(Serialize)]
    struct Term<'a> {
        word: &'a [i64],
        coeff: &'a LaurentRat,
    }
    let show = |w: &[i64]| w.iter().map(|k| format!("u{}", k)).collect::<Vec<_>>().join(" ∧ ");
    match format {
        Format::Json => {
            let v: Vec<Term> = terms.iter().rev().map(|(w, c)| Term { word: w, coeff: c }).collect();
            serde_json::to_string(&v).expect("terms serialize")
        }
        Format::Csv => {
            let mut out = String::from("word,coeff\n");
            for (w, c) in terms.iter().rev() {
                let ws: Vec<String> = w.iter().map(|k| k.to_string()).collect();
                out.push_str(&format!("\"{}\",{}\n", ws.join(" "), c));
            }
            out.trim_end().to_string()
        }
        Format::Text => {
            if terms.is_empty() {
                return "0".into();
            }
            let rows: Vec<(String, String)> = terms.iter().rev().map(|(w, c)| (c.to_string(), show(w))).collect();
            aligned(&rows)
        }
    }
}

fn render_matrix(m: &DecompositionMatrix, format: Format) -> String {
    match format {
        Format::Json => m.to_json(),
        Format::Csv => m.to_csv().trim_end().to_string(),
        Format::Text => {
            let mut out = String::new();
            for (i, lam) in m.labels.iter().enumerate() {
                let mut g = FockVector::new(m.charge.clone());
                for (j, c) in m.entries[i].iter().enumerate() {
                    g.add_term(m.labels[j].clone(), c.clone());
                }
                out.push_str(&format!("G({}) = {}\n", lam, g));
            }
            out.trim_end().to_string()
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let cfg = Config::from_global(&cli.global)?;
    let mut stdout = std::io::stdout().lock();
    match cli.command {
        Command::Straighten { word, s } => {
            let raw = parse_list(&word)?;
            let engine = WedgeEngine::new(cfg.params);
            let terms: BTreeMap<Vec<i64>, LaurentRat> = match s {
                None => engine.normal_order_finite(&raw),
                Some(s) => {
                    let r = qfock::wedge::truncation_length(cfg.params, 0, &[s]).max(raw.len() + 1);
                    engine.normal_order(s, &raw, r)?.iter().map(|(w, c)| (w.clone(), c.clone())).collect()
                }
            };
            writeln!(stdout, "{}", render_words(&terms, cfg.format))?;
        }
        Command::Bar { lambda } => {
            let lam = cfg.label(&lambda)?;
            let ctx = FockContext::new(cfg.params);
            let v = ctx.bar(&FockVector::basis(lam, cfg.charge.clone()))?;
            writeln!(stdout, "{}", render_vector(&v, cfg.format))?;
        }
        Command::Boson { m, lambda, primed, bracket, ranged } => {
            let lam = cfg.label(&lambda)?;
            let ctx = FockContext::new(cfg.params);
            let u = FockVector::basis(lam, cfg.charge.clone());
            let sector_mode = || -> CliResult<usize> {
                if m >= 0 {
                    return Err(CliError::Usage("sector bosons take a creation mode: pass a negative --m".into()));
                }
                Ok(m.unsigned_abs() as usize)
            };
            let v = match (primed, bracket, ranged) {
                (None, None, None) => {
                    if m == 0 {
                        return Err(CliError::Usage("--m must be nonzero".into()));
                    }
                    ctx.boson(m, &u)?
                }
                (Some(i), None, None) => ctx.boson_component(i, sector_mode()?, &u)?,
                (None, Some(j), None) => ctx.boson_bracket(j, sector_mode()?, &u, false)?,
                (None, None, Some(j)) => ctx.boson_bracket(j, sector_mode()?, &u, true)?,
                _ => return Err(CliError::Usage("choose at most one of --primed, --bracket, --ranged".into())),
            };
            writeln!(stdout, "{}", render_vector(&v, cfg.format))?;
        }
        Command::ApplyOp { expr, schur, v, sector, route, lambda, canonical_input } => {
            let lam = match lambda {
                Some(t) => cfg.label(&t)?,
                None => Multipartition::empty(cfg.params.l),
            };
            let ctx = FockContext::new(cfg.params);
            let input = if canonical_input {
                let m = cfg.matrix(lam.size(), Sign::Minus, &cfg.charge)?;
                m.basis_vector(&lam).expect("label in its block")
            } else {
                FockVector::basis(lam, cfg.charge.clone())
            };
            let out = match (expr, schur, v) {
                (Some(e), None, None) => {
                    let op: OperatorExpr = serde_json::from_str(&read_json_arg(&e)?)?;
                    ctx.apply(&op, &input)?
                }
                (None, Some(s), None) => ctx.apply(&s_multi(&cfg.label(&s)?), &input)?,
                (None, None, Some(m)) => match route {
                    Route::Ribbon => ctx.ribbon_v_apply(m, sector, &input)?,
                    Route::Boson => ctx.apply(&v_operator(m, Flavor::Primed(sector)), &input)?,
                },
                _ => return Err(CliError::Usage("pass one of --expr, --schur, --v".into())),
            };
            writeln!(stdout, "{}", render_vector(&out, cfg.format))?;
        }
        Command::Canonical { degree, sign } => {
            let m = cfg.matrix(degree, sign.into(), &cfg.charge)?;
            let bad = m.lattice_violations();
            writeln!(stdout, "{}", render_matrix(&m, cfg.format))?;
            if !bad.is_empty() {
                eprintln!("{} entries violate the lattice or integrality condition", bad.len());
                return Err(CliError::Failed(bad.len()));
            }
        }
        Command::DecompExport { max_degree, sign, out } => {
            std::fs::create_dir_all(&out)?;
            let sign: Sign = sign.into();
            let ext = match cfg.format {
                Format::Json => "json",
                _ => "csv",
            };
            let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs).build().expect("thread pool");
            let results: Vec<CliResult<DecompositionMatrix>> = pool.install(|| {
                (0..=max_degree).into_par_iter().map(|d| cfg.matrix(d, sign, &cfg.charge)).collect()
            });
            for (d, m) in results.into_iter().enumerate() {
                let m = m?;
                let body = if ext == "json" { m.to_json() } else { m.to_csv() };
                let path = out.join(format!("delta_{}_N{}.{}", sign, d, ext));
                std::fs::write(&path, body)?;
                writeln!(stdout, "{}", path.display())?;
            }
        }
        Command::Verify { theorem, suite, lambda, max_degree, budget } => {
            let mut failures = 0;
            match (theorem.as_deref(), suite.as_deref()) {
                (Some("412"), None) => {
                    let reports = match lambda {
                        Some(t) => vec![Verifier::new(cfg.params).check_theorem_412(&cfg.label(&t)?, &cfg.charge)?],
                        None => sweep_theorem_412(cfg.params, &cfg.charge, max_degree, cfg.jobs)?,
                    };
                    for r in &reports {
                        failures += usize::from(!r.passed());
                        writeln!(stdout, "{}", serde_json::to_string(r)?)?;
                    }
                }
                (Some("49"), None) => {
                    let t = lambda.ok_or_else(|| CliError::Usage("--theorem 49 needs --lambda [mu, lambda, j]".into()))?;
                    let (mu, part, j): (Multipartition, Partition, usize) = serde_json::from_str(&t)?;
                    let r = Verifier::new(cfg.params).check_theorem_49(&mu, &part, j, &cfg.charge)?;
                    failures += usize::from(!r.passed());
                    writeln!(stdout, "{}", serde_json::to_string(&r)?)?;
                }
                (Some(other), None) => return Err(CliError::Usage(format!("unknown theorem {:?} (412 or 49)", other))),
                (None, Some(name)) => {
                    let names: Vec<&str> = if name == "all" { SUITES.to_vec() } else { vec![name] };
                    for name in names {
                        let r = run_property_suite(name, cfg.seed, budget)?;
                        failures += r.failures.len();
                        writeln!(stdout, "{}", serde_json::to_string(&r)?)?;
                    }
                }
                _ => return Err(CliError::Usage("pass --theorem or --suite".into())),
            }
            if failures > 0 {
                return Err(CliError::Failed(failures));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn global(l: Option<usize>, charge: Option<&str>) -> Global {
        Global {
            n: 2,
            l,
            charge: charge.map(String::from),
            format: Format::Text,
            cache_dir: None,
            jobs: 1,
            seed: 1,
        }
    }

    #[test]
    fn lists_parse() {
        assert_eq!(parse_list("-1, -2,4").unwrap(), vec![-1, -2, 4]);
        assert!(parse_list("1,x").is_err());
    }

    #[test]
    fn level_follows_charge() {
        assert_eq!(Config::from_global(&global(None, Some("0,0"))).unwrap().params.l, 2);
        assert_eq!(Config::from_global(&global(None, None)).unwrap().charge.0, vec![0]);
        assert!(Config::from_global(&global(Some(2), Some("1"))).is_err());
        assert!(Config::from_global(&global(Some(0), Some(""))).is_err());
    }
}
