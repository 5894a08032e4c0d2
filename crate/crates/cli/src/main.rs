use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use gsedf::feasibility::{known_construction, K1Bound, DEFAULT_C_MAX, DEFAULT_GRID};
use gsedf::search::{aggregate_status, DEFAULT_BUDGET};
use gsedf::verify::default_spectral_tol;
use gsedf::{
    alpha_scan, catalog_lookup, classify, coset_check, decompose, emit, enumerate_params, exhaustive_search,
    rule_out, search_all_groups, spectral_verify, verify_gsedf, AbelianGroup, ConstructionRecipe, Constraints,
    DiffFamily, EmitFormat, Error, FeasibilityStatus, ParamTuple, RecipeName, SearchConfig, SearchStatus,
};

const OK: u8 = 0;
const NEGATIVE: u8 = 1;
const USAGE: u8 = 2;
const BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "gsedf", version, about = "Construct, verify and search for generalized strong external difference families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a family from a named recipe.
    Construct {
        recipe: RecipeName,
        #[arg(long, value_delimiter = ',')]
        args: Vec<u64>,
        /// Family file to lift (recipe `lift`).
        #[arg(long)]
        base: Option<PathBuf>,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// Check a family file exactly, optionally also spectrally or by cosets.
    Verify {
        file: PathBuf,
        #[arg(long)]
        spectral: bool,
        #[arg(long, requires = "spectral")]
        tol: Option<f64>,
        #[arg(long)]
        coset_check: bool,
    },
    /// Exhaustive backtracking search.
    Search {
        #[command(flatten)]
        params: Params,
        #[arg(long, value_delimiter = ',', conflicts_with = "all_groups")]
        group: Option<Vec<u64>>,
        /// Search every abelian group of order v (the default without --group).
        #[arg(long)]
        all_groups: bool,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Worker threads; 0 uses all cores.
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
    /// Enumerate counting-feasible tuples and classify each.
    Feasible {
        #[arg(long)]
        v_max: u64,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        lambda_min: u64,
        #[arg(long)]
        sum_k_eq_v: bool,
        #[arg(long, value_enum, default_value_t = K1Arg::Any)]
        k1_bound: K1Arg,
        #[arg(long)]
        strictly_increasing: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Apply the nonexistence filters.
    Ruleout {
        #[command(flatten)]
        params: Params,
    },
    /// Emit the cyclic bipartite decomposition induced by a two-set family.
    Decompose {
        file: PathBuf,
        #[arg(long, default_value = "edges")]
        format: String,
    },
    /// Sign-change scan of the alpha equation.
    Alpha {
        #[arg(long, value_delimiter = ',', required = true)]
        lambda: Vec<u64>,
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = DEFAULT_C_MAX)]
        c_max: f64,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
    },
    /// Literature status of a tuple, plus any recognized construction.
    Catalog {
        #[command(flatten)]
        params: Params,
    },
}

#[derive(clap::Args)]
struct Params {
    #[arg(long)]
    v: u64,
    #[arg(long, value_delimiter = ',', required = true)]
    k: Vec<u64>,
    #[arg(long, value_delimiter = ',')]
    lambda: Option<Vec<u64>>,
}

impl Params {
    fn tuple(&self) -> gsedf::Result<ParamTuple> {
        ParamTuple::new(self.v, self.k.clone(), self.lambda.clone())
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum K1Arg {
    Any,
    One,
    Sqrt,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn read_input(path: &PathBuf) -> io::Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path)
    }
}

fn write_output(path: &PathBuf, text: &str) -> io::Result<()> {
    if path.as_os_str() == "-" {
        io::stdout().write_all(text.as_bytes())
    } else {
        fs::write(path, text)
    }
}

fn json<T: Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("serializable") + "\n"
}

fn read_family(path: &PathBuf) -> Result<DiffFamily, String> {
    let text = read_input(path).map_err(|e| format!("{}: {e}", path.display()))?;
    DiffFamily::from_json(&text).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct VerifyOutput {
    #[serde(flatten)]
    report: gsedf::VerifyReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    spectral: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    coset_check: Option<bool>,
}

/// One row of `feasible` output.
#[derive(Serialize)]
pub struct FeasibleRow {
    pub v: u64,
    pub m: usize,
    pub ks: String,
    pub lambdas: String,
    pub status: FeasibilityStatus,
    pub reason: String,
}

fn join(xs: &[u64]) -> String {
    xs.iter().map(u64::to_string).collect::<Vec<_>>().join(";")
}

fn run(cli: Cli) -> Result<u8, String> {
    let err = |e: Error| e.to_string();
    match cli.command {
        Command::Construct { recipe, args, base, out } => {
            let r = ConstructionRecipe::new(recipe, args).map_err(err)?;
            let base = match (&base, r.needs_base()) {
                (Some(p), true) => Some(read_family(p)?),
                (None, true) => return Err("recipe `lift` needs --base FILE".into()),
                (Some(_), false) => return Err(format!("recipe `{recipe}` takes no --base")),
                (None, false) => None,
            };
            let f = r.build(base.as_ref()).map_err(err)?;
            write_output(&out, &json(&f)).map_err(|e| e.to_string())?;
            Ok(OK)
        }
        Command::Verify { file, spectral, tol, coset_check: coset } => {
            let f = read_family(&file)?;
            let report = verify_gsedf(&f);
            let spectral = spectral
                .then(|| spectral_verify(&f, tol.unwrap_or_else(|| default_spectral_tol(&f))))
                .transpose()
                .map_err(err)?;
            let coset = coset.then(|| coset_check(&f)).transpose().map_err(err)?;
            let pass = report.is_gsedf && spectral != Some(false) && coset != Some(false);
            print!("{}", json(&VerifyOutput { report, spectral, coset_check: coset }));
            Ok(if pass { OK } else { NEGATIVE })
        }
        Command::Search { params, group, all_groups: _, budget, workers } => {
            let t = params.tuple().map_err(err)?;
            let cfg = SearchConfig { budget, workers };
            let status = match group {
                Some(factors) => {
                    let g = AbelianGroup::new(&factors).map_err(err)?;
                    let out = exhaustive_search(&g, &t, &cfg).map_err(err)?;
                    print!("{}", json(&out));
                    out.status
                }
                None => {
                    let outs = search_all_groups(&t, &cfg).map_err(err)?;
                    print!("{}", json(&outs));
                    aggregate_status(&outs)
                }
            };
            Ok(match status {
                SearchStatus::Found => OK,
                SearchStatus::Exhausted => NEGATIVE,
                SearchStatus::BudgetExceeded => BUDGET,
            })
        }
        Command::Feasible { v_max, m, lambda_min, sum_k_eq_v, k1_bound, strictly_increasing, format } => {
            let c = Constraints {
                lambda_min,
                sum_k_eq_v,
                k1_bound: match k1_bound {
                    K1Arg::Any => K1Bound::Any,
                    K1Arg::One => K1Bound::AboveOne,
                    K1Arg::Sqrt => K1Bound::AboveSqrtV,
                },
                strictly_increasing,
            };
            let rows: Vec<FeasibleRow> = enumerate_params(v_max, m, &c)
                .map_err(err)?
                .into_iter()
                .map(|t| {
                    let verdict = classify(&t);
                    FeasibleRow {
                        v: t.v,
                        m: t.m(),
                        ks: join(&t.ks),
                        lambdas: join(&t.resolved_lambdas().unwrap_or_default()),
                        status: verdict.status,
                        reason: verdict.reason,
                    }
                })
                .collect();
            match format {
                Format::Json => print!("{}", json(&rows)),
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(io::stdout());
                    if rows.is_empty() {
                        w.write_record(["v", "m", "ks", "lambdas", "status", "reason"]).map_err(|e| e.to_string())?;
                    }
                    for r in &rows {
                        w.serialize(r).map_err(|e| e.to_string())?;
                    }
                    w.flush().map_err(|e| e.to_string())?;
                }
            }
            Ok(OK)
        }
        Command::Ruleout { params } => {
            let verdict = rule_out(&params.tuple().map_err(err)?);
            print!("{}", json(&verdict));
            Ok(if verdict.status == FeasibilityStatus::RuledOut { NEGATIVE } else { OK })
        }
        Command::Decompose { file, format } => {
            let format: EmitFormat = format.parse().map_err(err)?;
            let f = read_family(&file)?;
            match decompose(&f) {
                Ok(d) => {
                    print!("{}", emit(&d, format));
                    Ok(OK)
                }
                Err(e @ Error::NotApplicable(_)) => {
                    eprintln!("gsedf: {e}");
                    Ok(NEGATIVE)
                }
                Err(e) => Err(e.to_string()),
            }
        }
        Command::Alpha { lambda, k, c_max, grid } => {
            let report = alpha_scan(&lambda, k, c_max, grid).map_err(err)?;
            print!("{}", json(&report));
            Ok(OK)
        }
        Command::Catalog { params } => {
            let t = params.tuple().map_err(err)?;
            #[derive(Serialize)]
            struct CatalogOutput {
                catalog: gsedf::FeasibilityVerdict,
                construction: Option<ConstructionRecipe>,
            }
            let out = CatalogOutput { catalog: catalog_lookup(&t), construction: known_construction(&t) };
            print!("{}", json(&out));
            let denied = matches!(out.catalog.status, FeasibilityStatus::DeniedByCatalog | FeasibilityStatus::RuledOut);
            Ok(if denied { NEGATIVE } else { OK })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("gsedf: {msg}");
            ExitCode::from(USAGE)
        }
    }
}
