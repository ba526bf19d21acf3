//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failures (reports still
//! written), 2 usage errors or unreadable input, 3 resource limits.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::compiler::{
    compile, extendable, verify_completeness, verify_soundness, CompileOptions, CompiledSystem,
};
use crate::error::{Error, Result};
use crate::grid::{Patch, WangTileSet};
use crate::hierarchy::{
    build_assembly, check_assembly_with, validate_schedule, Alignment, Assembly, CheckOptions,
    Margins, ZoomSchedule,
};
use crate::render::{render_assembly, render_patch, Format};
use crate::solver::cnf::export_cnf;
use crate::solver::{tile_region, BoundaryConstraint, SolveOptions, SolveStatus};
use crate::subshift::{enum_step, legal_words, SubshiftSpec, Word};
use crate::tmtiles::{fixtures, tm_to_wang, TMSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURES: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "tilelift", version, about = "Lift one-dimensional subshifts to hierarchical plane tilings")]
pub struct Cli {
    /// Worker threads for verification sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// Print JSON instead of tables.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct ScheduleArgs {
    /// Paper-mode constant.
    #[arg(long = "C", value_name = "C")]
    pub c: Option<u32>,
    /// Schedule JSON file (paper or custom mode).
    #[arg(long)]
    pub schedule: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Lower a subshift and schedule to a compiled system.
    Compile {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        schedule: ScheduleArgs,
        #[arg(long = "K", value_name = "K")]
        k: usize,
        /// Emit a flat tile set when its label estimate is at most this.
        #[arg(long)]
        flatten: Option<u128>,
        /// Refuse schedules failing validation.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve a finite tiling problem.
    Tile {
        /// Wang tile set JSON.
        #[arg(long, conflicts_with_all = ["cs", "machine"])]
        tiles: Option<PathBuf>,
        /// Use the flat tile set of a compiled system.
        #[arg(long, conflicts_with = "machine")]
        cs: Option<PathBuf>,
        /// Machine JSON file or fixture name; tiles its space-time diagram.
        #[arg(long)]
        machine: Option<String>,
        /// Machine input.
        #[arg(long, default_value = "")]
        input: String,
        /// Boundary constraint JSON.
        #[arg(long)]
        boundary: Option<PathBuf>,
        #[arg(long)]
        width: usize,
        #[arg(long)]
        height: usize,
        /// Search node limit.
        #[arg(long)]
        limit: Option<u64>,
        /// Witnesses to enumerate.
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification sweep over a compiled system.
    Verify {
        #[arg(long, value_enum)]
        mode: VerifyMode,
        #[arg(long)]
        cs: PathBuf,
        #[arg(long, default_value_t = 0)]
        width: usize,
        /// Patch height; defaults to the roof height.
        #[arg(long)]
        height: Option<usize>,
        #[arg(long, default_value_t = 1)]
        budget: usize,
        /// Word for extendability.
        #[arg(long)]
        word: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List legal words of a length.
    Oracle {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        budget: usize,
    },
    /// List forbidden words released within a budget.
    Enum {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 1)]
        budget: usize,
    },
    /// Build the honest assembly over a word and check it.
    Assemble {
        #[arg(long)]
        cs: PathBuf,
        #[arg(long)]
        word: String,
        /// Offset of the top level grid.
        #[arg(long, default_value_t = 0)]
        alignment: i64,
        /// Budget cap for the forbidden-word scan.
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a tiling or an assembly.
    Render {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "ascii")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a tiling problem as DIMACS CNF.
    ExportCnf {
        #[arg(long)]
        tiles: PathBuf,
        #[arg(long)]
        boundary: Option<PathBuf>,
        #[arg(long)]
        width: usize,
        #[arg(long)]
        height: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the schedule inequalities level by level.
    ValidateSchedule {
        #[command(flatten)]
        schedule: ScheduleArgs,
        #[arg(long, default_value_t = 4)]
        kmax: usize,
        #[arg(long, default_value_t = 10)]
        m_log: u64,
        #[arg(long, default_value_t = 2)]
        m_son: u64,
        #[arg(long, default_value_t = 4)]
        m_grp: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyMode {
    Soundness,
    Completeness,
    Extendable,
}

/// Failures that stop a command, mapped to exit codes.
#[derive(Debug)]
enum Fail {
    Usage(String),
    Limit(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::ResourceLimit(_) | Error::FlattenBoundExceeded { .. } | Error::ScheduleTooLarge(_) => {
                Fail::Limit(e.to_string())
            }
            _ => Fail::Usage(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<i32, Fail>;

fn read(path: &Path) -> std::result::Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))
}

fn write_out(path: Option<&Path>, bytes: &[u8]) -> std::result::Result<(), Fail> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| Fail::Usage(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| Fail::Usage(e.to_string())),
    }
}

fn load<T>(path: &Path, parse: impl FnOnce(&str) -> Result<T>) -> std::result::Result<T, Fail> {
    parse(&read(path)?).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))
}

fn schedule_of(a: &ScheduleArgs) -> std::result::Result<ZoomSchedule, Fail> {
    match (a.c, &a.schedule) {
        (Some(c), None) => Ok(ZoomSchedule::paper(c)?),
        (None, Some(p)) => load(p, |t| Ok(serde_json::from_str(t)?)),
        _ => Err(Fail::Usage("give exactly one of --C and --schedule".into())),
    }
}

fn parse_word(s: &str) -> std::result::Result<Word, Fail> {
    s.parse().map_err(|e: Error| Fail::Usage(e.to_string()))
}

fn json_line<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable") + "\n"
}

/// Parse `argv` (program name first) and run. Returns the exit code.
pub fn run_command<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads.max(1)).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    match pool.install(|| execute(&cli)) {
        Ok(code) => code,
        Err(Fail::Usage(m)) => {
            eprintln!("error: {m}");
            EXIT_USAGE
        }
        Err(Fail::Limit(m)) => {
            eprintln!("resource limit: {m}");
            EXIT_LIMIT
        }
    }
}

fn execute(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Compile {
            spec,
            schedule,
            k,
            flatten,
            strict,
            out,
        } => {
            let spec = load(spec, SubshiftSpec::from_json)?;
            let s = schedule_of(schedule)?;
            let cs = compile(
                &spec,
                &s,
                *k,
                CompileOptions {
                    strict: *strict,
                    flatten: *flatten,
                },
            )?;
            write_out(Some(out), cs.to_json().as_bytes())?;
            if cli.json {
                print!(
                    "{}",
                    json_line(&serde_json::json!({
                        "out": out,
                        "K": cs.top,
                        "schedule_passed": cs.validation.passed(),
                        "flat_tiles": cs.flat.as_ref().map(|f| f.tiles.len()),
                    }))
                );
            } else {
                println!("compiled {} with K={} -> {}", spec.name(), cs.top, out.display());
                if !cs.validation.passed() {
                    println!(
                        "schedule validation: {} failing rows (not strict)",
                        cs.validation.failures().count()
                    );
                }
                if let Some(f) = &cs.flat {
                    println!("flat tile set: {} tiles, {} colors", f.tiles.len(), f.tiles.colors());
                }
            }
            Ok(EXIT_OK)
        }
        Command::Tile {
            tiles,
            cs,
            machine,
            input,
            boundary,
            width,
            height,
            limit,
            count,
            out,
        } => {
            let (set, mut bc) = if let Some(m) = machine {
                let tm = match fixtures::by_name(m) {
                    Some(tm) => tm,
                    None => load(Path::new(m), TMSpec::from_json)?,
                };
                let enc = tm_to_wang(&tm, *width, *height)?;
                let bc = enc.boundary(input)?;
                (enc.tiles, bc)
            } else if let Some(p) = cs {
                let cs = load(p, CompiledSystem::from_json)?;
                let flat = cs
                    .flat
                    .ok_or_else(|| Fail::Usage("compiled system has no flat tile set".into()))?;
                let bc = crate::compiler::flat_boundary(&flat, *width, *height);
                (flat.tiles, bc)
            } else if let Some(p) = tiles {
                (load(p, |t| Ok(serde_json::from_str::<WangTileSet>(t)?))?, BoundaryConstraint::none())
            } else {
                return Err(Fail::Usage("give --tiles, --cs or --machine".into()));
            };
            if let Some(p) = boundary {
                bc = load(p, |t| Ok(serde_json::from_str(t)?))?;
            }
            let r = tile_region(
                &set,
                *width,
                *height,
                &bc,
                SolveOptions {
                    limit: *limit,
                    count: (*count).max(1),
                },
            )?;
            let text = if cli.json {
                json_line(&r)
            } else {
                let mut s = format!(
                    "{:?}: {} witness(es), {} nodes\n",
                    r.status,
                    r.witnesses.len(),
                    r.stats.nodes
                );
                for w in &r.witnesses {
                    s.push_str(&String::from_utf8_lossy(&render_patch(w, Format::Ascii)));
                    s.push('\n');
                }
                s
            };
            write_out(out.as_deref(), text.as_bytes())?;
            Ok(if r.status == SolveStatus::Limit { EXIT_LIMIT } else { EXIT_OK })
        }
        Command::Verify {
            mode,
            cs,
            width,
            height,
            budget,
            word,
            out,
        } => {
            let cs = load(cs, CompiledSystem::from_json)?;
            let h = match height {
                Some(h) => *h,
                None => cs.schedule.side_u64(cs.top + 1)? as usize,
            };
            if *mode == VerifyMode::Extendable {
                let w = parse_word(word.as_deref().unwrap_or(""))?;
                let ok = extendable(&cs, &w, h)?;
                let text = if cli.json {
                    json_line(&serde_json::json!({"mode": "extendability", "word": w, "height": h, "extendable": ok}))
                } else {
                    format!("{w}: {}\n", if ok { "extendable" } else { "not extendable" })
                };
                write_out(out.as_deref(), text.as_bytes())?;
                return Ok(EXIT_OK);
            }
            let report = match mode {
                VerifyMode::Completeness => verify_completeness(&cs, *width, *budget)?,
                _ => verify_soundness(&cs, *width, h, *budget)?,
            };
            let text = if cli.json {
                json_line(&report)
            } else {
                let mut s = format!(
                    "{:?} width={} budget={} levels<= {}: {} instances, {} words, {} failures\n",
                    report.mode,
                    report.width,
                    report.budget,
                    report.top,
                    report.instances,
                    report.words.len(),
                    report.failures.len()
                );
                for w in &report.words {
                    s.push_str(&format!("  {w}\n"));
                }
                for f in &report.failures {
                    s.push_str(&format!("FAIL {} {:?}: {}\n", f.word, f.alignment, f.detail));
                }
                s
            };
            write_out(out.as_deref(), text.as_bytes())?;
            Ok(if report.passed() { EXIT_OK } else { EXIT_FAILURES })
        }
        Command::Oracle { spec, n, budget } => {
            let spec = load(spec, SubshiftSpec::from_json)?;
            let words = legal_words(&spec, *n, *budget)?;
            if cli.json {
                print!("{}", json_line(&words));
            } else {
                for w in &words {
                    println!("{w}");
                }
            }
            Ok(EXIT_OK)
        }
        Command::Enum { spec, budget } => {
            let spec = load(spec, SubshiftSpec::from_json)?;
            let words = enum_step(&spec, *budget);
            if cli.json {
                print!("{}", json_line(&words));
            } else {
                for w in &words {
                    println!("{w}");
                }
            }
            Ok(EXIT_OK)
        }
        Command::Assemble {
            cs,
            word,
            alignment,
            budget,
            out,
        } => {
            let cs = load(cs, CompiledSystem::from_json)?;
            let w = parse_word(word)?;
            let al = Alignment::from_top(&cs.schedule, cs.top, *alignment)?;
            let a = build_assembly(&w, cs.top, &cs.schedule, &al)?;
            let opts = CheckOptions {
                budget_cap: *budget,
                ..CheckOptions::default()
            };
            let rep = check_assembly_with(&a, &cs.spec, &cs.schedule, &opts);
            if let Some(p) = out {
                write_out(Some(p), a.to_json().as_bytes())?;
            }
            if cli.json {
                print!("{}", rep.to_json_lines());
            } else {
                println!("{} tiles, {} violations", a.state_count(), rep.len());
                for v in rep.violations.iter().take(20) {
                    println!("  {} level {} {:?}: {}", v.constraint, v.level, v.position, v.description);
                }
            }
            Ok(if rep.is_empty() { EXIT_OK } else { EXIT_FAILURES })
        }
        Command::Render { input, format, out } => {
            let f: Format = format.parse()?;
            let text = read(input)?;
            let bytes = if let Ok(a) = Assembly::from_json(&text) {
                render_assembly(&a, f)
            } else {
                let p: Patch = serde_json::from_str(&text)
                    .map_err(|e| Fail::Usage(format!("{}: neither an assembly nor a patch: {e}", input.display())))?;
                render_patch(&p, f)
            };
            write_out(out.as_deref(), &bytes)?;
            Ok(EXIT_OK)
        }
        Command::ExportCnf {
            tiles,
            boundary,
            width,
            height,
            out,
        } => {
            let set = load(tiles, |t| Ok(serde_json::from_str::<WangTileSet>(t)?))?;
            let bc = match boundary {
                Some(p) => load(p, |t| Ok(serde_json::from_str(t)?))?,
                None => BoundaryConstraint::none(),
            };
            let cnf = export_cnf(&set, *width, *height, &bc)?;
            write_out(out.as_deref(), cnf.to_dimacs().as_bytes())?;
            Ok(EXIT_OK)
        }
        Command::ValidateSchedule {
            schedule,
            kmax,
            m_log,
            m_son,
            m_grp,
        } => {
            let s = schedule_of(schedule)?;
            if *kmax < 2 {
                return Err(Fail::Usage("--kmax must be at least 2".into()));
            }
            let m = Margins {
                log: *m_log,
                son: *m_son,
                group: *m_grp,
            };
            let rep = validate_schedule(&s, *kmax, m);
            if cli.json {
                for row in &rep.rows {
                    print!("{}", json_line(row));
                }
            } else {
                println!("{:>3} {:>5} {:>9} {:>24} {:>24}", "k", "check", "status", "lhs", "rhs");
                for row in &rep.rows {
                    println!(
                        "{:>3} {:>5} {:>9} {:>24} {:>24}",
                        row.k,
                        serde_json::to_value(row.check).unwrap().as_str().unwrap_or("?"),
                        format!("{:?}", row.status),
                        clip(&row.lhs),
                        clip(&row.rhs)
                    );
                }
            }
            Ok(if rep.passed() { EXIT_OK } else { EXIT_FAILURES })
        }
    }
}

fn clip(s: &str) -> String {
    if s.len() <= 24 {
        s.to_string()
    } else {
        format!("{}..({} digits)", &s[..8], s.len())
    }
}
