//! `partrand`: command-line workbench for exact partial-randomness
//! experiments: measure evaluation, rule membership, the square-root
//! operators, dual-pair reports, test/witness conversions, sequence
//! profiling, and the aggregated property suite.
//!
//! Exit codes: 0 all checks passed (or query answered), 1 a verified
//! property failed, 2 usage or parse error, 3 a resource cap was exceeded.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use partrand_core::duality::{dual_ratio, sqrt_premeasure_eval, sqrt_rule_member, DEFAULT_CAP};
use partrand_core::error::Error;
use partrand_core::levin_schnorr::{
    deficiency_profile, merge_universal, tests_from_witness, verify_test, verify_witness,
    witness_from_tests, TestFamily,
};
use partrand_core::parse::{parse_measure, parse_rule, Resolver};
use partrand_core::premeasure::{HSpec, PreMeasureSpec, TreeFamily};
use partrand_core::rules::{FiniteComplexity, RuleSpec};
use partrand_core::strings::{parse_string_set, BinaryString, UNIVERSE_CAP};
use partrand_core::suite::{run_suite, Scale, SuiteOptions};
use partrand_core::witness::{generate_witness, WitnessStrategy};

#[derive(Parser)]
#[command(name = "partrand", version, about = "Exact-arithmetic workbench for partial randomness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CapArg {
    /// Exponent cap for square-root searches.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a measure expression on a string-set file.
    EvalMeasure {
        /// Measure expression, e.g. "dwt(len)" or "star(dwt(scaled:1/2))".
        #[arg(long)]
        measure: String,
        #[command(flatten)]
        cap: CapArg,
        /// String-set file: one string per line, `@` for the empty string.
        set_file: PathBuf,
    },
    /// Decide membership of a complexity table in a rule expression.
    RuleMember {
        /// Rule expression, e.g. "kp(len)" or "msqrt(dwt(len))".
        #[arg(long)]
        rule: String,
        #[command(flatten)]
        cap: CapArg,
        /// Complexity table: lines `<string> <int>`.
        table_file: PathBuf,
    },
    /// Decide membership of a complexity table in the square-root rule of a
    /// measure.
    SqrtOfMeasure {
        #[arg(long)]
        measure: String,
        #[command(flatten)]
        cap: CapArg,
        table_file: PathBuf,
    },
    /// Evaluate the square-root pre-measure of a rule on a string set.
    SqrtOfRule {
        #[arg(long)]
        rule: String,
        #[command(flatten)]
        cap: CapArg,
        set_file: PathBuf,
    },
    /// Report the dual-pair ratio bounds between a measure and a rule.
    DualCheck {
        /// Explicit measure expression (alternative to --pair).
        #[arg(long, conflicts_with = "pair", required_unless_present = "pair")]
        measure: Option<String>,
        /// Explicit rule expression (alternative to --pair).
        #[arg(long, conflicts_with = "pair", required_unless_present = "pair")]
        rule: Option<String>,
        /// One of the four canonical pairs: dwt-kp, pwt-ka, dct-ks, pct-kd.
        #[arg(long)]
        pair: Option<String>,
        /// h specification for --pair: `len | scaled:<p>/<q> | table:<path>`.
        #[arg(long = "h", default_value = "len")]
        h: String,
        /// Universe depth to sweep.
        #[arg(long, default_value_t = 2)]
        universe: u32,
        /// Largest set size in the sweep.
        #[arg(long, default_value_t = 3)]
        kmax: usize,
        #[command(flatten)]
        cap: CapArg,
        /// Fail (exit 1) if either ratio exceeds this bound.
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Run the aggregated property suite.
    PropSuite {
        /// tiny (universe 2, exhaustive) or small (universe 3).
        scale: String,
        /// Seed for the budgeted sweeps.
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Inject deliberately broken fixtures; the suite must then fail.
        #[arg(long, hide = true)]
        inject_broken: bool,
    },
    /// Convert a complexity witness into a test family.
    ToTests {
        /// Highest level to emit.
        #[arg(long, default_value_t = 3)]
        imax: usize,
        table_file: PathBuf,
    },
    /// Convert a test family into a complexity witness.
    ToWitness { family_file: PathBuf },
    /// Diagonally merge test families into one.
    MergeTests {
        #[arg(long, default_value_t = 3)]
        imax: usize,
        #[arg(required = true)]
        family_files: Vec<PathBuf>,
    },
    /// Verify the level bounds of a test family against a measure.
    VerifyTest {
        #[arg(long)]
        measure: String,
        #[command(flatten)]
        cap: CapArg,
        family_file: PathBuf,
    },
    /// Verify a witness against the square-root rule of a measure.
    VerifyWitness {
        #[arg(long)]
        measure: String,
        #[command(flatten)]
        cap: CapArg,
        table_file: PathBuf,
    },
    /// Deficiency profile of a bit sequence against a witness table.
    Profile {
        /// Truncate the input sequence to this many bits.
        #[arg(long)]
        limit: Option<usize>,
        bits_file: PathBuf,
        table_file: PathBuf,
    },
    /// Generate a complexity witness from a bit sequence.
    GenWitness {
        /// `runlength` or `blockcode:<b>`.
        #[arg(long)]
        strategy: String,
        #[arg(long)]
        limit: Option<usize>,
        bits_file: PathBuf,
    },
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

/// Resource caps exit 3; malformed input exits 2.
fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::UniverseCap { .. }
        | Error::PartitionLimit { .. }
        | Error::ExponentCap { .. }
        | Error::SearchBound { .. } => 3,
        Error::MissingH(_)
        | Error::TreeNotClosed { .. }
        | Error::EmptyInput
        | Error::FileFormat { .. }
        | Error::Expr { .. } => 2,
    }
}

/// Resolves table/mixture paths relative to the working directory.
struct FsResolver;

impl Resolver for FsResolver {
    fn h_table(&self, path: &str) -> Result<BTreeMap<BinaryString, u32>, Error> {
        let text = read_file(Path::new(path))?;
        let mut map = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| Error::FileFormat {
                file: path.to_string(),
                line: idx + 1,
                msg,
            };
            let mut tokens = line.split_whitespace();
            let (s, v) = match (tokens.next(), tokens.next(), tokens.next()) {
                (Some(s), Some(v), None) => (s, v),
                _ => return Err(err("expected \"<string> <nat>\"".into())),
            };
            let sigma: BinaryString = s.parse().map_err(err)?;
            let value: u32 = v.parse().map_err(|_| err(format!("bad value {v:?}")))?;
            map.insert(sigma, value);
        }
        Ok(map)
    }

    fn tree_family(&self, path: &str) -> Result<TreeFamily, Error> {
        let text = read_file(Path::new(path))?;
        TreeFamily::parse(path, &text)
    }
}

fn read_file(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::FileFormat {
        file: path.display().to_string(),
        line: 0,
        msg: e.to_string(),
    })
}

fn read_set(path: &Path) -> Result<partrand_core::strings::StringSet, Error> {
    parse_string_set(&path.display().to_string(), &read_file(path)?)
}

fn read_table(path: &Path) -> Result<FiniteComplexity, Error> {
    FiniteComplexity::parse(&path.display().to_string(), &read_file(path)?)
}

fn read_family(path: &Path) -> Result<TestFamily, Error> {
    TestFamily::parse(&path.display().to_string(), &read_file(path)?)
}

/// Bitstream files are ASCII 0/1 with whitespace ignored.
fn read_bits(path: &Path, limit: Option<usize>) -> Result<BinaryString, Error> {
    let text = read_file(path)?;
    let mut bits = Vec::new();
    for (i, c) in text.chars().enumerate() {
        if c.is_whitespace() {
            continue;
        }
        match c {
            '0' => bits.push(false),
            '1' => bits.push(true),
            other => {
                return Err(Error::FileFormat {
                    file: path.display().to_string(),
                    line: 0,
                    msg: format!("invalid bitstream character {other:?} at offset {i}"),
                })
            }
        }
        if let Some(l) = limit {
            if bits.len() == l {
                break;
            }
        }
    }
    Ok(BinaryString::from_bits(bits))
}

fn measure_arg(text: &str, cap: u32) -> Result<PreMeasureSpec, Error> {
    let mut m = parse_measure(text, &FsResolver)?;
    m.set_sqrt_caps(cap);
    Ok(m)
}

fn rule_arg(text: &str, cap: u32) -> Result<RuleSpec, Error> {
    let mut r = parse_rule(text, &FsResolver)?;
    r.set_sqrt_caps(cap);
    Ok(r)
}

fn parse_strategy(text: &str) -> Result<WitnessStrategy, Error> {
    if text == "runlength" {
        return Ok(WitnessStrategy::RunLength);
    }
    if let Some(b) = text.strip_prefix("blockcode:") {
        let block: usize = b.parse().map_err(|_| Error::Expr {
            offset: 0,
            msg: format!("bad block length {b:?}"),
        })?;
        if block == 0 {
            return Err(Error::Expr {
                offset: 0,
                msg: "block length must be positive".into(),
            });
        }
        return Ok(WitnessStrategy::BlockCode { block });
    }
    Err(Error::Expr {
        offset: 0,
        msg: format!("unknown strategy {text:?} (runlength | blockcode:<b>)"),
    })
}

fn pair_arg(pair: &str, h: &HSpec) -> Result<(PreMeasureSpec, RuleSpec), Error> {
    let out = match pair {
        "dwt-kp" => (PreMeasureSpec::Dwt(h.clone()), RuleSpec::Kp(h.clone())),
        "pwt-ka" => (PreMeasureSpec::Pwt(h.clone()), RuleSpec::Ka(h.clone())),
        "dct-ks" => (PreMeasureSpec::Dct(h.clone()), RuleSpec::Ks(h.clone())),
        "pct-kd" => (PreMeasureSpec::Pct(h.clone()), RuleSpec::Kd(h.clone())),
        other => {
            return Err(Error::Expr {
                offset: 0,
                msg: format!("unknown pair {other:?} (dwt-kp | pwt-ka | dct-ks | pct-kd)"),
            })
        }
    };
    Ok(out)
}

const PASS: ExitCode = ExitCode::SUCCESS;
const FAILED: ExitCode = ExitCode::FAILURE;

fn usage() -> ExitCode {
    ExitCode::from(2)
}

fn run() -> Result<ExitCode, Error> {
    let cli = Cli::parse();
    match cli.command {
        Command::EvalMeasure {
            measure,
            cap,
            set_file,
        } => {
            let m = measure_arg(&measure, cap.cap)?;
            let f = read_set(&set_file)?;
            println!("measure={m} set={f} value={}", m.eval(&f)?);
            Ok(PASS)
        }
        Command::RuleMember {
            rule,
            cap,
            table_file,
        } => {
            let r = rule_arg(&rule, cap.cap)?;
            let table = read_table(&table_file)?;
            println!("rule={r} pairs={} member={}", table.len(), r.member(&table)?);
            Ok(PASS)
        }
        Command::SqrtOfMeasure {
            measure,
            cap,
            table_file,
        } => {
            let m = measure_arg(&measure, cap.cap)?;
            let table = read_table(&table_file)?;
            println!(
                "measure={m} pairs={} member={}",
                table.len(),
                sqrt_rule_member(&m, &table)?
            );
            Ok(PASS)
        }
        Command::SqrtOfRule {
            rule,
            cap,
            set_file,
        } => {
            let r = rule_arg(&rule, cap.cap)?;
            let f = read_set(&set_file)?;
            println!(
                "rule={r} set={f} value={}",
                sqrt_premeasure_eval(&r, &f, cap.cap)?
            );
            Ok(PASS)
        }
        Command::DualCheck {
            measure,
            rule,
            pair,
            h,
            universe,
            kmax,
            cap,
            bound,
        } => {
            if universe > UNIVERSE_CAP {
                return Err(Error::UniverseCap {
                    requested: universe,
                    cap: UNIVERSE_CAP,
                });
            }
            let (m, r) = match pair {
                Some(p) => {
                    let h = match parse_measure(&format!("dwt({h})"), &FsResolver)? {
                        PreMeasureSpec::Dwt(h) => h,
                        _ => unreachable!("dwt wrapper always yields its h"),
                    };
                    pair_arg(&p, &h)?
                }
                None => {
                    let (Some(m), Some(r)) = (measure, rule) else {
                        return Err(Error::Expr {
                            offset: 0,
                            msg: "need --measure and --rule, or --pair".into(),
                        });
                    };
                    (measure_arg(&m, cap.cap)?, rule_arg(&r, cap.cap)?)
                }
            };
            let u = partrand_core::strings::universe(universe)?;
            let ratios = dual_ratio(&m, &r, &u, kmax, cap.cap)?;
            let report = ratios.to_check_report(&format!("dual-ratio {m}|{r}"), bound);
            print!("{report}");
            Ok(if report.pass() { PASS } else { FAILED })
        }
        Command::PropSuite {
            scale,
            seed,
            inject_broken,
        } => {
            let scale: Scale = match scale.parse() {
                Ok(s) => s,
                Err(msg) => {
                    eprintln!("error: {msg}");
                    return Ok(usage());
                }
            };
            let report = run_suite(
                scale,
                &SuiteOptions {
                    seed,
                    inject_broken,
                },
            )?;
            print!("{report}");
            Ok(if report.pass() { PASS } else { FAILED })
        }
        Command::ToTests { imax, table_file } => {
            let table = read_table(&table_file)?;
            print!("{}", tests_from_witness(&table, imax).to_blocks());
            Ok(PASS)
        }
        Command::ToWitness { family_file } => {
            let family = read_family(&family_file)?;
            print!("{}", witness_from_tests(&family).to_table());
            Ok(PASS)
        }
        Command::MergeTests { imax, family_files } => {
            let families: Vec<TestFamily> = family_files
                .iter()
                .map(|p| read_family(p))
                .collect::<Result<_, _>>()?;
            print!("{}", merge_universal(&families, imax).to_blocks());
            Ok(PASS)
        }
        Command::VerifyTest {
            measure,
            cap,
            family_file,
        } => {
            let m = measure_arg(&measure, cap.cap)?;
            let family = read_family(&family_file)?;
            let report = verify_test(&m, &family)?;
            print!("{report}");
            Ok(if report.pass() { PASS } else { FAILED })
        }
        Command::VerifyWitness {
            measure,
            cap,
            table_file,
        } => {
            let m = measure_arg(&measure, cap.cap)?;
            let table = read_table(&table_file)?;
            let report = verify_witness(&m, &table)?;
            print!("{report}");
            Ok(if report.pass() { PASS } else { FAILED })
        }
        Command::Profile {
            limit,
            bits_file,
            table_file,
        } => {
            let x = read_bits(&bits_file, limit)?;
            let table = read_table(&table_file)?;
            let profile = deficiency_profile(&x, &table);
            print!("{profile}");
            let max = profile
                .max_finite()
                .map_or("none".to_string(), |v| v.to_string());
            let tail = profile
                .tail_min()
                .map_or("-inf".to_string(), |v| v.to_string());
            println!("length={} max_deficiency={max} tail_min={tail}", profile.len());
            Ok(PASS)
        }
        Command::GenWitness {
            strategy,
            limit,
            bits_file,
        } => {
            let strategy = parse_strategy(&strategy)?;
            let x = read_bits(&bits_file, limit)?;
            print!("{}", generate_witness(&x, &strategy)?.to_table());
            Ok(PASS)
        }
    }
}
