//! The `toric-cohom` command line front end.
//!
//! Exit codes: 0 success, 1 internal failure, 2 invalid input (parse errors,
//! singular characteristic matrix, even q), 3 resource cap exceeded.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cai::{cohomology_ring, rz_cohomology, RingPresentation};
use crate::complex::{Face, SimplicialComplex};
use crate::error::{Error, Result};
use crate::homology::{CoeffSpec, CohomologyProfile};
use crate::linalg::field::is_prime;
use crate::linalg::{PrimeField, Rationals};
use crate::moore::{moore_space, torsion_hunt, HuntMode, PipelineConfig};
use crate::nesto::{canonical_lambda, member_label, nested_complex, BuildingFamily, BuildingSet};
use crate::toric::{betti_profile, check_pair, CharacteristicPair, Mode};

#[derive(Parser, Debug)]
#[command(name = "toric-cohom", version, about = "Cohomology of real moment-angle complexes and real toric manifolds")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Full,
    Targeted,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Additive cohomology of M(K, λ) from the row-space formula.
    Cohomology {
        complex: PathBuf,
        lambda: PathBuf,
        #[arg(long, default_value = "Q")]
        coeff: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Full)]
        mode: ModeArg,
        /// Comma-separated vertex labels of one support; repeatable.
        #[arg(long)]
        omega: Vec<String>,
    },
    /// Cohomology ring of M(K, λ) over Q or Z/p, p an odd prime.
    Ring {
        complex: PathBuf,
        lambda: PathBuf,
        #[arg(long, default_value = "Q")]
        coeff: String,
    },
    /// Cohomology of the real moment-angle complex of K.
    Rz {
        complex: PathBuf,
        #[arg(long, default_value = "Z")]
        coeff: String,
    },
    /// Building set, nested set complex and canonical characteristic matrix.
    Nestohedron {
        /// Complex whose minimal non-faces generate the building set.
        #[arg(long, conflicts_with_all = ["generators", "ground"])]
        complex: Option<PathBuf>,
        /// Generators such as `1,2;2,3;3,4` on the ground set 1..n.
        #[arg(long, requires = "ground")]
        generators: Option<String>,
        #[arg(long)]
        ground: Option<usize>,
    },
    /// Triangulated mod-q Moore space.
    Moore { q: u64 },
    /// Search for q-torsion in a real toric manifold built from a Moore space.
    TorsionHunt {
        q: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::Targeted)]
        mode: ModeArg,
        /// Extra support as comma-separated member labels; repeatable.
        #[arg(long)]
        omega: Vec<String>,
        /// Allow full mode despite its cost.
        #[arg(long)]
        yes_i_know: bool,
        /// Random maximal nested sets checked for nonsingularity.
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        /// List the building set explicitly up to this many members.
        #[arg(long, default_value_t = 200_000)]
        member_cap: usize,
    },
    /// Nonsingularity and row-space statistics of a pair.
    Check { complex: PathBuf, lambda: PathBuf },
}

/// Parse arguments from the environment, run, print, and return the exit code.
pub fn main_entry() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Run a parsed command line; returns the exit code on success.
pub fn run(cli: &Cli) -> Result<i32> {
    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(j) = cli.jobs {
            if j == 0 {
                return Err(Error::invalid("--jobs must be positive"));
            }
            b = b.num_threads(j);
        }
        b.build().map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?
    };
    let (json, table, code) = pool.install(|| execute(&cli.command))?;
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(&json)? + "\n",
        Format::Table => table,
    };
    match &cli.out {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(code)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))
}

fn load_pair(complex: &Path, lambda: &Path) -> Result<CharacteristicPair> {
    CharacteristicPair::from_json(&read(complex)?, &read(lambda)?)
}

fn parse_omegas(k: &SimplicialComplex, specs: &[String]) -> Result<Vec<Face>> {
    specs
        .iter()
        .map(|s| {
            let labels: Vec<&str> = s.split(',').map(str::trim).filter(|l| !l.is_empty()).collect();
            k.face_from_labels(&labels)
        })
        .collect()
}

fn profile_table(p: &CohomologyProfile) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:>6}  {:>6}  torsion", "degree", "rank");
    for (d, g) in &p.degrees {
        let t: Vec<String> = g.torsion.iter().map(|x| format!("Z/{x}")).collect();
        let _ = writeln!(s, "{d:>6}  {:>6}  {}", g.betti, if t.is_empty() { "-".into() } else { t.join(" + ") });
    }
    s
}

fn ring_for(pair: &CharacteristicPair, coeff: &str) -> Result<(Value, String)> {
    fn render<E: Clone + PartialEq + std::fmt::Display>(r: &RingPresentation<E>) -> (Value, String) {
        let mut s = String::new();
        let _ = writeln!(s, "field {}  dims {:?}", r.field, r.dims());
        for c in &r.classes {
            let rep: Vec<String> = c.representative.iter().map(|(x, e)| format!("{e}·{}", x.format(&r.labels))).collect();
            let _ = writeln!(s, "  {:<6} deg {}  {}", c.label, c.degree, rep.join(" + "));
        }
        for (a, b, g, c) in &r.constants {
            let _ = writeln!(s, "  {} * {} = {c}·{}", r.classes[*a].label, r.classes[*b].label, r.classes[*g].label);
        }
        (r.to_json_value(), s)
    }
    match coeff.parse::<CoeffSpec>() {
        Ok(CoeffSpec::Rational) => Ok(render(&cohomology_ring(pair, Rationals, "Q")?)),
        Ok(CoeffSpec::ModQ(q)) if is_prime(q) && q < 1 << 32 => {
            Ok(render(&cohomology_ring(pair, PrimeField::new(q), &format!("Z/{q}"))?))
        }
        Ok(CoeffSpec::ModQ(q)) => Err(Error::invalid(format!(
            "ring structure over Z/{q} needs a field; use an odd prime or the cohomology command for additive output"
        ))),
        Ok(CoeffSpec::Integral) => Err(Error::invalid("ring structure needs a field: use Q or Z/p with p an odd prime")),
        Err(e) => Err(e),
    }
}

fn execute(cmd: &Command) -> Result<(Value, String, i32)> {
    match cmd {
        Command::Cohomology { complex, lambda, coeff, mode, omega } => {
            let pair = load_pair(complex, lambda)?;
            let coeff: CoeffSpec = coeff.parse()?;
            let mode = match mode {
                ModeArg::Full if omega.is_empty() => Mode::Full,
                ModeArg::Full => return Err(Error::invalid("--omega only applies to --mode targeted")),
                ModeArg::Targeted => Mode::Targeted(parse_omegas(pair.complex(), omega)?),
            };
            let r = betti_profile(&pair, coeff, &mode)?;
            let mut t = format!("coefficients {}\n", r.coeff);
            t += &profile_table(&r.total);
            for row in &r.per_omega {
                let _ = writeln!(t, "  ω = {{{}}}: {}", pair.complex().face_labels(row.omega).join(","), row.profile);
            }
            for w in &r.warnings {
                let _ = writeln!(t, "warning: {w}");
            }
            Ok((r.to_json_value(pair.complex()), t, 0))
        }
        Command::Ring { complex, lambda, coeff } => {
            let pair = load_pair(complex, lambda)?;
            let (v, t) = ring_for(&pair, coeff)?;
            Ok((v, t, 0))
        }
        Command::Rz { complex, coeff } => {
            let k = SimplicialComplex::from_json(&read(complex)?)?;
            let p = rz_cohomology(&k, coeff.parse()?)?;
            let t = format!("coefficients {}\n{}", p.coeff, profile_table(&p));
            Ok((serde_json::to_value(p.to_json_value())?, t, 0))
        }
        Command::Nestohedron { complex, generators, ground } => {
            let b = match (complex, generators, ground) {
                (Some(path), _, _) => BuildingSet::of_complex(&SimplicialComplex::from_json(&read(path)?)?)?,
                (None, Some(g), Some(n)) => BuildingSet::closure(&parse_generators(g, *n)?, *n)?,
                (None, None, Some(n)) => BuildingSet::closure(&[Face::full(*n)], *n)?,
                _ => return Err(Error::invalid("give --complex or --ground (with optional --generators)")),
            };
            let delta = nested_complex(&b)?;
            let lambda = canonical_lambda(&b);
            let (f, chi) = delta.f_vector_and_euler()?;
            let members: Vec<String> = b.members().iter().map(|x| member_label(b.ground_labels(), *x)).collect();
            let mut t = format!("building set ({} members): {}\n", b.len(), members.join(" "));
            let _ = writeln!(t, "nested set complex: f-vector {f:?}, Euler characteristic {chi}");
            let _ = writeln!(t, "canonical characteristic matrix ({} × {}):", lambda.num_rows(), lambda.num_cols());
            for row in lambda.to_rows() {
                let _ = writeln!(t, "  {}", row.iter().map(u8::to_string).collect::<Vec<_>>().join(" "));
            }
            let v = json!({
                "building_set": b.to_json_value(),
                "nested_complex": delta.to_json_value(),
                "f_vector": f,
                "euler_characteristic": chi,
                "lambda": { "rows": lambda.to_rows() },
            });
            Ok((v, t, 0))
        }
        Command::Moore { q } => {
            let k = moore_space(*q)?;
            let (f, chi) = k.f_vector_and_euler()?;
            let t = format!("mod-{q} Moore space: f-vector {f:?}, Euler characteristic {chi}\n{}\n", k.to_json());
            Ok((serde_json::to_value(k.to_json_value())?, t, 0))
        }
        Command::TorsionHunt { q, mode, omega, yes_i_know, samples, member_cap } => {
            let mut config = PipelineConfig::new(*q)?;
            config.mode = match mode {
                ModeArg::Full => HuntMode::Full,
                ModeArg::Targeted => HuntMode::Targeted,
            };
            config.extra_omegas = omega
                .iter()
                .map(|s| s.split(',').map(|l| l.trim().to_string()).filter(|l| !l.is_empty()).collect())
                .collect();
            config.allow_full = *yes_i_know;
            config.nonsingular_samples = *samples;
            config.explicit_member_cap = *member_cap;
            let report = torsion_hunt(&config)?;
            let code = if report.failed() { 1 } else { 0 };
            Ok((report.to_json_value(), report.to_table(), code))
        }
        Command::Check { complex, lambda } => {
            let pair = load_pair(complex, lambda)?;
            let c = check_pair(&pair);
            let mut t = String::new();
            match &c.witness {
                None => t += "nonsingular\n",
                Some(f) => {
                    let _ = writeln!(t, "singular on face {{{}}}", f.join(","));
                }
            }
            let _ = writeln!(t, "rank {}, row-space size {}, kernel dimension {}", c.rank, c.row_space_size, c.kernel_dimension);
            for w in &c.warnings {
                let _ = writeln!(t, "warning: {w}");
            }
            let code = if c.nonsingular { 0 } else { 2 };
            Ok((serde_json::to_value(&c)?, t, code))
        }
    }
}

/// `1,2;2,3` on the ground set `1..=n`.
fn parse_generators(text: &str, n: usize) -> Result<Vec<Face>> {
    text.split(';')
        .filter(|g| !g.trim().is_empty())
        .map(|g| {
            let ix: Vec<usize> = g
                .split(',')
                .map(|x| {
                    let i: usize = x.trim().parse().map_err(|_| Error::invalid(format!("bad element {x:?}")))?;
                    if i == 0 || i > n {
                        return Err(Error::invalid(format!("element {i} is outside 1..{n}")));
                    }
                    Ok(i - 1)
                })
                .collect::<Result<_>>()?;
            Ok(Face::from_indices(ix))
        })
        .collect()
}
