//! Command-line front end.
//!
//! Exit codes: 0 yes or success, 1 no, 2 usage or input error, 3 a size
//! cap or search budget was exceeded. Every witness is re-checked with
//! [`crate::check`] before a positive answer is printed.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::check;
use crate::error::{Error, Result};
use crate::gen::{generate, Class, GenSpec};
use crate::hom::{core_capped, find_hom_with, SearchOptions, CORE_CAP, DEFAULT_BUDGET};
use crate::io;
use crate::mmsnp;
use crate::par::Exec;
use crate::patterns::{decide_fpp_with, find_violation, Problem};
use crate::products::{product, truncated_product_with, ProductCaps};
use crate::relstruct::{ColouredStructure, Structure};
use crate::treedepth::{tree_depth_capped, uniformly_sparse_orientation, TD_CAP};
use crate::universal::{
    bounded_degree_universal, low_td_universal_with, verify_duality_with, x_param, BoundedOptions,
    MemberMode,
};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "fpdual",
    version,
    about = "Forbidden-patterns problems and universal templates"
)]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Overrides the search budget and the size caps of the chosen verb.
    #[arg(long, global = true)]
    pub cap: Option<u64>,
    /// Output file (a directory for `gen`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Where to write the checked witness of a positive answer.
    #[arg(long, global = true)]
    pub witness: Option<PathBuf>,
    /// Run batch work on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Search for a homomorphism between two structures.
    Hom {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        /// Read both structures as coloured for this problem's palettes.
        #[arg(long)]
        problem: Option<String>,
    },
    /// Check that a coloured structure avoids every pattern.
    Valid {
        #[arg(long)]
        problem: String,
        #[arg(long)]
        input: PathBuf,
    },
    /// Decide whether a structure admits a valid colouring.
    Decide {
        #[arg(long)]
        problem: String,
        #[arg(long)]
        input: PathBuf,
    },
    /// Compute a core.
    Core {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        problem: Option<String>,
    },
    /// Exact tree-depth with an elimination forest.
    Treedepth {
        #[arg(long)]
        input: PathBuf,
    },
    /// Classical product of two structures.
    Product {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    /// Truncated product of a coloured structure.
    Tproduct {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        problem: Option<String>,
    },
    /// Template for inputs of bounded degree.
    UniversalBd {
        #[arg(long)]
        problem: String,
        #[arg(long)]
        degree: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Labelled)]
        mode: ModeArg,
        /// Keep only members that are cores (representatives mode).
        #[arg(long)]
        cores_only: bool,
        /// Admit members of any degree.
        #[arg(long)]
        all_degrees: bool,
    },
    /// Template for inputs with low tree-depth colourings.
    UniversalLtd {
        #[arg(long)]
        problem: String,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        n_max: usize,
    },
    /// Compare template homomorphisms with the decision procedure on a
    /// generated input class.
    Verify {
        #[arg(long)]
        template: PathBuf,
        /// Defaults to the problem recorded next to the template.
        #[arg(long)]
        problem: Option<String>,
        #[command(flatten)]
        class: ClassArgs,
    },
    /// Compile a primitive MMSNP sentence into a problem.
    MmsnpCompile {
        #[arg(long)]
        input: PathBuf,
    },
    /// Render a problem as an MMSNP sentence.
    MmsnpDecompile {
        #[arg(long)]
        problem: String,
    },
    /// Encode an edge-coloured problem over a single vertex colour.
    EncodeFpp2 {
        #[arg(long)]
        problem: String,
    },
    /// Write generated structures into the `--out` directory.
    Gen {
        #[command(flatten)]
        class: ClassArgs,
    },
    /// Orientation with bounded in-degree.
    Sparse {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Args, Debug, Clone)]
pub struct ClassArgs {
    /// degree-B, digraph-degree-B, bounded-td-P, k-sparse-witness, random-digraph
    #[arg(long)]
    pub class: String,
    /// Parameter of `degree-b`, `bounded-td-p` or `k-sparse-witness`.
    #[arg(long)]
    pub param: Option<usize>,
    #[arg(long, default_value_t = 6)]
    pub max_n: usize,
    /// Sample this many structures instead of enumerating.
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    pub density: f64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Labelled,
    Representatives,
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_resource_limit() {
        EXIT_LIMIT
    } else {
        EXIT_USAGE
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_YES };
            let text = e.render().to_string();
            let _ = if code == EXIT_YES {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

struct Ctx<'a> {
    cli: &'a Cli,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn exec(&self) -> Exec {
        if self.cli.sequential {
            Exec::Sequential
        } else {
            Exec::Parallel
        }
    }

    fn budget(&self) -> u64 {
        self.cli.cap.unwrap_or(DEFAULT_BUDGET)
    }

    fn say(&mut self, line: impl std::fmt::Display) -> Result<()> {
        writeln!(self.out, "{line}")?;
        Ok(())
    }

    /// Writes to `--out`, or prints when no file was given.
    fn emit(&mut self, v: &Value) -> Result<()> {
        match &self.cli.out {
            Some(p) => io::write_json(p, v),
            None => {
                self.out.write_all(io::to_text(v).as_bytes())?;
                Ok(())
            }
        }
    }

    fn emit_witness(&mut self, v: &Value) -> Result<()> {
        if let Some(p) = &self.cli.witness {
            io::write_json(p, v)?;
        }
        Ok(())
    }
}

fn load_plain(path: &Path) -> Result<Structure> {
    io::structure_from_json(&io::read_json(path)?)
}

fn load_coloured(path: &Path, problem: Option<&Problem>) -> Result<ColouredStructure> {
    let v = io::read_json(path)?;
    match problem {
        Some(p) => io::coloured_from_json(&v, p.palettes()),
        None => Ok(ColouredStructure::uncoloured(io::structure_from_json(&v)?)),
    }
}

fn optional_problem(spec: &Option<String>) -> Result<Option<Problem>> {
    spec.as_deref().map(io::load_problem).transpose()
}

/// Inputs of an undirected problem are read as symmetric graphs.
fn prepare_input(s: Structure, p: &Problem) -> Structure {
    if p.undirected {
        s.symmetric_closure()
    } else {
        s
    }
}

fn unchecked(what: &str) -> Error {
    Error::Invalid(format!(
        "internal error: {what} failed its independent re-check"
    ))
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let mut cx = Ctx { cli, out };
    match &cli.command {
        Command::Hom {
            source,
            target,
            problem,
        } => {
            let pr = optional_problem(problem)?;
            let a = load_coloured(source, pr.as_ref())?;
            let b = load_coloured(target, pr.as_ref())?;
            let opts = SearchOptions {
                pins: Vec::new(),
                budget: cx.budget(),
            };
            match find_hom_with(&a, &b, &opts)? {
                Some(h) => {
                    if !check::is_hom(&a, &b, &h) {
                        return Err(unchecked("homomorphism"));
                    }
                    cx.emit_witness(&io::hom_to_json(a.base(), b.base(), &h))?;
                    cx.say("YES")?;
                    Ok(EXIT_YES)
                }
                None => {
                    cx.say("NO")?;
                    Ok(EXIT_NO)
                }
            }
        }
        Command::Valid { problem, input } => {
            let p = io::load_problem(problem)?;
            let cs = load_coloured(input, Some(&p))?;
            let violation = find_violation(&cs, &p)?;
            if violation.is_none() != check::is_valid_colouring(&cs, &p) {
                return Err(unchecked("validity verdict"));
            }
            match violation {
                None => {
                    cx.say("YES")?;
                    Ok(EXIT_YES)
                }
                Some((i, h)) => {
                    let f = p.patterns()[i].body();
                    cx.emit_witness(
                        &json!({"pattern": i, "map": io::hom_to_json(f.base(), cs.base(), &h)}),
                    )?;
                    cx.say(format!("NO (pattern {i} occurs)"))?;
                    Ok(EXIT_NO)
                }
            }
        }
        Command::Decide { problem, input } => {
            let p = io::load_problem(problem)?;
            let s = prepare_input(load_plain(input)?, &p);
            match decide_fpp_with(&s, &p, cx.budget())? {
                Some(c) => {
                    if !check::is_valid_colouring(&c, &p) {
                        return Err(unchecked("colouring"));
                    }
                    cx.emit_witness(&io::coloured_to_json(&c, None))?;
                    cx.say("YES")?;
                    Ok(EXIT_YES)
                }
                None => {
                    cx.say("NO")?;
                    Ok(EXIT_NO)
                }
            }
        }
        Command::Core { input, problem } => {
            let pr = optional_problem(problem)?;
            let cs = load_coloured(input, pr.as_ref())?;
            let cap = cli.cap.map_or(CORE_CAP, |c| c as usize);
            let r = core_capped(&cs, cap)?;
            if !check::is_hom(&cs, &r.core, &r.retraction)
                || !check::is_hom(&r.core, &cs, &r.inclusion)
            {
                return Err(unchecked("core maps"));
            }
            cx.emit_witness(&json!({
                "retraction": io::hom_to_json(cs.base(), r.core.base(), &r.retraction),
                "inclusion": io::hom_to_json(r.core.base(), cs.base(), &r.inclusion),
            }))?;
            cx.emit(&io::coloured_to_json(&r.core, None))?;
            if cli.out.is_some() {
                cx.say(format!("core has {} of {} elements", r.core.n(), cs.n()))?;
            }
            Ok(EXIT_YES)
        }
        Command::Treedepth { input } => {
            let s = load_plain(input)?;
            let cap = cli.cap.map_or(TD_CAP, |c| c as usize);
            let (td, f) = tree_depth_capped(&s, cap)?;
            if !check::is_forest_witness(&s, &f, td) || (s.n() <= 20 && check::brute_td(&s) != td) {
                return Err(unchecked("elimination forest"));
            }
            let fj = io::forest_to_json(&s, &f);
            cx.emit_witness(&fj)?;
            if let Some(p) = &cli.out {
                io::write_json(p, &fj)?;
            }
            cx.say(td)?;
            Ok(EXIT_YES)
        }
        Command::Product { left, right } => {
            let a = load_plain(left)?;
            let b = load_plain(right)?;
            let prod = product(&a, &b)?;
            cx.emit(&io::structure_to_json(&prod, None))?;
            Ok(EXIT_YES)
        }
        Command::Tproduct { input, p, problem } => {
            let pr = optional_problem(problem)?;
            let cs = load_coloured(input, pr.as_ref())?;
            let mut caps = ProductCaps::default();
            if let Some(c) = cli.cap {
                caps.elements = c;
            }
            let tp = truncated_product_with(&cs, *p, caps, cx.exec())?;
            cx.emit(&io::coloured_to_json(&tp.structure, None))?;
            if cli.out.is_some() {
                cx.say(format!("{} elements", tp.structure.n()))?;
            }
            Ok(EXIT_YES)
        }
        Command::UniversalBd {
            problem,
            degree,
            mode,
            cores_only,
            all_degrees,
        } => {
            let p = io::load_problem(problem)?;
            let mut opts = BoundedOptions {
                restrict_degree: !all_degrees,
                mode: match mode {
                    ModeArg::Labelled => MemberMode::Labelled,
                    ModeArg::Representatives => MemberMode::Representatives,
                },
                cores_only: *cores_only,
                exec: cx.exec(),
                ..BoundedOptions::default()
            };
            if let Some(c) = cli.cap {
                opts.member_cap = c;
                opts.tuple_cap = c;
            }
            let t = bounded_degree_universal(&p, *degree, &opts)?;
            let path = cli
                .out
                .as_ref()
                .ok_or_else(|| Error::Param("universal-bd needs --out".into()))?;
            io::save_template(path, &t, &p)?;
            let b = t.bounded().expect("bounded provenance");
            cx.say(format!(
                "X = {}, {} members, {} elements",
                x_param(b.b as u64, b.m as u64),
                b.members.len(),
                t.carrier.n()
            ))?;
            Ok(EXIT_YES)
        }
        Command::UniversalLtd {
            problem,
            p,
            q,
            n_max,
        } => {
            let pr = io::load_problem(problem)?;
            let mut caps = ProductCaps::default();
            if let Some(c) = cli.cap {
                caps.elements = c;
            }
            let t = low_td_universal_with(&pr, *p, *q, *n_max, caps, cx.exec())?;
            let path = cli
                .out
                .as_ref()
                .ok_or_else(|| Error::Param("universal-ltd needs --out".into()))?;
            io::save_template(path, &t, &pr)?;
            let l = t.low_td().expect("low tree-depth provenance");
            cx.say(format!(
                "{} cores, {} elements",
                l.cores.len(),
                t.carrier.n()
            ))?;
            Ok(EXIT_YES)
        }
        Command::Verify {
            template,
            problem,
            class,
        } => {
            let (t, recorded) = io::load_template(template)?;
            let p = match problem {
                Some(spec) => io::load_problem(spec)?,
                None => recorded,
            };
            let inputs: Vec<Structure> = generate(&gen_spec(class, cli.seed)?, cx.exec())?
                .into_iter()
                .map(|g| prepare_input(g.structure, &p))
                .collect();
            let r = verify_duality_with(&t, &p, &inputs, cx.budget(), cx.exec())?;
            let rj = io::report_to_json(&r);
            if let Some(path) = &cli.out {
                io::write_json(path, &rj)?;
            }
            cx.say(format!(
                "cases {} agreements {} disagreements {} exhausted {}",
                r.cases,
                r.agreements,
                r.disagreements.len(),
                r.exhausted.len()
            ))?;
            Ok(if !r.disagreements.is_empty() {
                EXIT_NO
            } else if !r.exhausted.is_empty() {
                EXIT_LIMIT
            } else {
                EXIT_YES
            })
        }
        Command::MmsnpCompile { input } => {
            let text = std::fs::read_to_string(input)?;
            let sentences = mmsnp::parse_disjunction(&text)?;
            let mut problems = Vec::new();
            for (i, s) in sentences.iter().enumerate() {
                let (ok, why) = mmsnp::is_primitive(s);
                if !ok {
                    return Err(Error::Invalid(format!(
                        "disjunct {}: not primitive: {}",
                        i + 1,
                        why.join("; ")
                    )));
                }
                problems.push(io::problem_to_json(&mmsnp::sentence_to_problem(s, None)?));
            }
            let v = if problems.len() == 1 {
                problems.pop().expect("one problem")
            } else {
                json!({ "disjuncts": problems })
            };
            cx.emit(&v)?;
            Ok(EXIT_YES)
        }
        Command::MmsnpDecompile { problem } => {
            let p = io::load_problem(problem)?;
            let text = format!("{}\n", mmsnp::render(&mmsnp::problem_to_sentence(&p)?));
            match &cli.out {
                Some(path) => std::fs::write(path, text)?,
                None => cx.out.write_all(text.as_bytes())?,
            }
            Ok(EXIT_YES)
        }
        Command::EncodeFpp2 { problem } => {
            let p = io::load_problem(problem)?;
            let enc = mmsnp::encode_fpp2(&p)?;
            cx.emit(&io::problem_to_json(&enc.problem))?;
            if cli.out.is_some() {
                cx.say(format!(
                    "{} arc colours, {} predicates",
                    enc.arc_colours, enc.predicates
                ))?;
            }
            Ok(EXIT_YES)
        }
        Command::Gen { class } => {
            let dir = cli
                .out
                .as_ref()
                .ok_or_else(|| Error::Param("gen needs --out DIR".into()))?;
            let spec = gen_spec(class, cli.seed)?;
            let cases = generate(&spec, cx.exec())?;
            std::fs::create_dir_all(dir)?;
            let label = spec.class.label();
            for (i, g) in cases.iter().enumerate() {
                io::write_json(
                    &dir.join(format!("{label}-{i:04}.json")),
                    &io::structure_to_json(&g.structure, Some(g.meta.clone())),
                )?;
            }
            cx.say(format!("{} structures", cases.len()))?;
            Ok(EXIT_YES)
        }
        Command::Sparse { input, k } => {
            let g = load_plain(input)?;
            match uniformly_sparse_orientation(&g, *k)? {
                Some(o) => {
                    if !check::is_orientation_witness(&g, *k, &o) {
                        return Err(unchecked("orientation"));
                    }
                    cx.emit_witness(&io::orientation_to_json(&g, *k, &o))?;
                    cx.say("YES")?;
                    Ok(EXIT_YES)
                }
                None => {
                    cx.say("NO")?;
                    Ok(EXIT_NO)
                }
            }
        }
    }
}

fn gen_spec(c: &ClassArgs, seed: u64) -> Result<GenSpec> {
    let mut spec = GenSpec::new(Class::parse(&c.class, c.param)?, c.max_n);
    spec.count = c.count;
    spec.seed = seed;
    spec.density = c.density;
    Ok(spec)
}
