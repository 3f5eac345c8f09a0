//! The `pillow` command line: one subcommand per pipeline plus cross-route
//! verification.
//!
//! Standard output is deterministic for identical arguments. A metadata
//! line (version, timestamp, elapsed time, cache status) goes to standard
//! error unless `--no-meta` is given.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use serde_json::json;

use crate::arith::{rat, BigRational, PiValue};
use crate::covers::{
    connected_counts, growth_ratios, naive_table, CacheStatus, CharacterTable, Partition,
};
use crate::error::{Error, Result};
use crate::local::{f_closed, f_kontsevich_base, f_recurrence, LayerSignature};
use crate::poly::Polynomial;
use crate::ribbon::{self, LabelMode};
use crate::tree::{contributions, expected_volume, subtotals, TreeContribution};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "pillow",
    version,
    about = "Exact counts of lattice Jenkins-Strebel differentials and pillowcase covers"
)]
pub struct Cli {
    /// Do not print the metadata line (version, timestamp, timing) to stderr.
    #[arg(long, global = true)]
    pub no_meta: bool,

    /// Worker threads for parallel sums [default: number of cores].
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,

    /// Directory of the character cache [default: $PILLOW_CACHE_DIR, else
    /// the user cache directory].
    #[arg(long, global = true, value_name = "PATH")]
    pub cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the local polynomial F_{m,n}.
    LocalPoly(LocalPolyArgs),
    /// Brute-force ribbon graph oracle.
    Ribbon {
        #[command(subcommand)]
        command: RibbonCommand,
    },
    /// Volume of Q(1^K, -1^(K+4)) as a sum over decorated trees.
    Volume(VolumeArgs),
    /// Character-theoretic pillowcase cover counts.
    Covers {
        #[command(subcommand)]
        command: CoversCommand,
    },
    /// Run all cross-route identities and print a summary.
    Verify(VerifyArgs),
    /// Render an entity: `local-poly M N`, `volume K`, `ribbon M N`,
    /// `hat-f M N`, `character IRREP CLASS`, optionally followed by a format.
    Render(RenderArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    LatexTable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolyMethod {
    Closed,
    Recurrence,
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    FacesOnly,
    Full,
}

impl From<Mode> for LabelMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::FacesOnly => LabelMode::FacesOnly,
            Mode::Full => LabelMode::Full,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoverMethod {
    Frobenius,
    Naive,
}

#[derive(Debug, Args)]
pub struct Signature {
    /// Number of simple zeros on the layer.
    #[arg(long)]
    pub m: u32,
    /// Number of simple poles on the layer.
    #[arg(long)]
    pub n: u32,
}

impl Signature {
    fn get(&self) -> Result<LayerSignature> {
        LayerSignature::new(self.m, self.n)
    }
}

#[derive(Debug, Args)]
pub struct LocalPolyArgs {
    #[command(flatten)]
    pub sig: Signature,
    #[arg(long, value_enum, default_value = "auto")]
    pub method: PolyMethod,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum RibbonCommand {
    /// List connected genus-0 ribbon graphs with labelled faces.
    Enumerate {
        #[command(flatten)]
        sig: Signature,
        #[arg(long, value_enum, default_value = "faces-only")]
        mode: Mode,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Exact number of half-integer metrics with the given face widths.
    Count {
        #[command(flatten)]
        sig: Signature,
        /// Integer face widths, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        widths: Vec<u64>,
        /// Count for one graph of the enumeration instead of the weighted
        /// sum over all fully labelled graphs.
        #[arg(long)]
        graph_id: Option<usize>,
        #[arg(long, value_enum, default_value = "faces-only")]
        mode: Mode,
    },
    /// Recover the top-degree part of the counts and compare with F_{m,n}.
    Fit {
        #[command(flatten)]
        sig: Signature,
        /// Sample directions are drawn from {1..=radius}^faces.
        #[arg(long, default_value_t = 8)]
        radius: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Sum of graph Laplace transforms, compared with the transform of F_{m,n}.
    Transform {
        #[command(flatten)]
        sig: Signature,
    },
    /// Check the pole-adding recurrence from (m,n) to (m+1,n+1).
    Recurrence {
        #[command(flatten)]
        sig: Signature,
    },
}

#[derive(Debug, Args)]
pub struct VolumeArgs {
    /// Number of simple zeros K.
    #[arg(long = "K", value_name = "K")]
    pub k: u32,
    /// List every decorated tree with its contribution.
    #[arg(long)]
    pub per_tree: bool,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum CoversCommand {
    /// Connected weighted cover counts at the profile (K, K+4) by degree.
    Count {
        #[arg(long = "K", value_name = "K")]
        k: u32,
        #[arg(long)]
        max_degree: u32,
        #[arg(long, value_enum, default_value = "frobenius")]
        method: CoverMethod,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Growth ratio of square-tiled surface counts against the volume.
    Ratio {
        #[arg(long = "K", value_name = "K", default_value_t = 1)]
        k: u32,
        #[arg(long, value_delimiter = ',', default_value = "10,20,30")]
        degrees: Vec<u32>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Check volumes for K = 1..=K-max.
    #[arg(long = "K-max", value_name = "K", default_value_t = 4)]
    pub k_max: u32,
    /// Check local polynomial routes for m + n <= mn-max.
    #[arg(long, default_value_t = 8)]
    pub mn_max: u32,
    /// Check character counts against enumeration up to this degree (<= 5).
    #[arg(long = "cover-n-max", default_value_t = 5)]
    pub cover_n_max: u32,
    /// Largest dart count for which the ribbon oracle is run.
    #[arg(long, default_value_t = 12)]
    pub darts_max: u32,
    /// Corrupt one closed-form coefficient to exercise the failure path.
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// Entity kind followed by its parameters and an optional format.
    #[arg(required = true, num_args = 1.., allow_hyphen_values = false)]
    pub entity: Vec<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    EXIT_USAGE
                }
            };
        }
    };
    let start = Instant::now();
    let mut ctx = Context {
        cache_dir: cli.cache_dir.clone(),
        cache_note: None,
    };
    let result = match cli.jobs {
        Some(jobs) => match rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
        {
            Ok(pool) => {
                // Output is buffered so the closure can move onto the pool.
                let mut buf = Vec::new();
                let r = pool.install(|| dispatch(&cli.command, &mut ctx, &mut buf));
                out.write_all(&buf).map_err(Error::from).and(r)
            }
            Err(e) => Err(Error::Invalid(format!("cannot start {jobs} workers: {e}"))),
        },
        None => dispatch(&cli.command, &mut ctx, out),
    };
    let code = match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Verification(_) => EXIT_VERIFY,
                _ => EXIT_USAGE,
            }
        }
    };
    if !cli.no_meta {
        let stamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let cache = ctx
            .cache_note
            .map(|c| format!(" cache={c}"))
            .unwrap_or_default();
        let _ = writeln!(
            err,
            "# pillow {} generated_at={stamp} elapsed_ms={}{cache}",
            env!("CARGO_PKG_VERSION"),
            start.elapsed().as_millis()
        );
    }
    code
}

struct Context {
    cache_dir: Option<PathBuf>,
    cache_note: Option<String>,
}

impl Context {
    fn characters(&mut self) -> CharacterTable {
        let table = match CharacterTable::cache_dir(self.cache_dir.as_deref()) {
            Some(dir) => CharacterTable::open(&dir),
            None => CharacterTable::in_memory(),
        };
        self.cache_note = Some(match table.status() {
            CacheStatus::InMemory => "memory".into(),
            CacheStatus::Fresh => "fresh".into(),
            CacheStatus::Loaded(n) => format!("loaded:{n}"),
            CacheStatus::Discarded(_) => "discarded".into(),
        });
        table
    }

    fn persist(&mut self, table: &CharacterTable) {
        if let Err(e) = table.persist() {
            self.cache_note = Some(format!("unwritable ({e})"));
        }
    }
}

fn dispatch(command: &Command, ctx: &mut Context, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::LocalPoly(a) => {
            local_poly(a.sig.get()?, a.method, a.format, out)?;
            Ok(EXIT_OK)
        }
        Command::Ribbon { command } => ribbon_cmd(command, out),
        Command::Volume(a) => {
            volume_cmd(a.k, a.per_tree, a.format, out)?;
            Ok(EXIT_OK)
        }
        Command::Covers { command } => covers_cmd(command, ctx, out),
        Command::Verify(a) => verify_cmd(a, out),
        Command::Render(a) => render_cmd(a, out),
    }
}

fn local_poly(
    sig: LayerSignature,
    method: PolyMethod,
    format: Format,
    out: &mut dyn Write,
) -> Result<()> {
    let p = match method {
        PolyMethod::Closed | PolyMethod::Auto => f_closed(sig),
        PolyMethod::Recurrence => f_recurrence(sig),
    };
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(&p.to_json_terms())?)?,
        Format::Text => writeln!(out, "{p}")?,
        Format::LatexTable => writeln!(out, "{}", poly_latex(&p))?,
    }
    Ok(())
}

fn ribbon_cmd(command: &RibbonCommand, out: &mut dyn Write) -> Result<i32> {
    match command {
        RibbonCommand::Enumerate { sig, mode, format } => {
            let graphs = ribbon::enumerate_graphs(sig.get()?, (*mode).into());
            match format {
                Format::Json => {
                    let js: Vec<_> = graphs.iter().map(|g| g.to_json()).collect();
                    writeln!(out, "{}", serde_json::to_string_pretty(&js)?)?;
                }
                _ => {
                    writeln!(out, "{} graphs", graphs.len())?;
                    for (i, g) in graphs.iter().enumerate() {
                        let profile: Vec<String> = g
                            .face_pair_profile()
                            .iter()
                            .map(|(a, b)| format!("{}{}", a + 1, b + 1))
                            .collect();
                        writeln!(
                            out,
                            "{i}: alpha={:?} faces={:?} edge-faces=[{}] transform={}",
                            g.alpha(),
                            (0..g.darts()).map(|d| g.face_of(d) + 1).collect::<Vec<_>>(),
                            profile.join(" "),
                            g.laplace_transform()
                        )?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
        RibbonCommand::Count {
            sig,
            widths,
            graph_id,
            mode,
        } => {
            let sig = sig.get()?;
            let value = match graph_id {
                Some(id) => {
                    let graphs = ribbon::enumerate_graphs(sig, (*mode).into());
                    let g = graphs.get(*id).ok_or_else(|| {
                        Error::Invalid(format!("graph id {id} out of range 0..{}", graphs.len()))
                    })?;
                    rat(g.exact_lattice_count(widths)? as i64)
                }
                None => {
                    if widths.len() != sig.faces() {
                        return Err(Error::DimensionMismatch {
                            expected: sig.faces(),
                            got: widths.len(),
                        });
                    }
                    ribbon::total_lattice_count(sig, widths)?
                }
            };
            writeln!(out, "{value}")?;
            Ok(EXIT_OK)
        }
        RibbonCommand::Fit {
            sig,
            radius,
            format,
        } => {
            let sig = sig.get()?;
            let fit = ribbon::leading_part_fit(sig, *radius)?;
            let closed = f_closed(sig);
            let agree = fit == closed;
            match format {
                Format::Json => writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "signature": [sig.m(), sig.n()],
                        "fit": fit.to_json_terms(),
                        "closed": closed.to_json_terms(),
                        "agree": agree,
                    }))?
                )?,
                _ => {
                    writeln!(out, "fit    {fit}")?;
                    writeln!(out, "closed {closed}")?;
                    writeln!(out, "agree  {agree}")?;
                }
            }
            if agree {
                Ok(EXIT_OK)
            } else {
                Err(Error::Verification(format!(
                    "leading part {fit} differs from F{sig} = {closed}"
                )))
            }
        }
        RibbonCommand::Transform { sig } => {
            let sig = sig.get()?;
            let hat = ribbon::hat_f(sig);
            let laplace = f_closed(sig).laplace();
            let agree = hat.equals(&laplace);
            writeln!(out, "graphs  {hat}")?;
            writeln!(out, "closed  {laplace}")?;
            writeln!(out, "agree   {agree}")?;
            if agree {
                Ok(EXIT_OK)
            } else {
                Err(Error::Verification(format!("transform mismatch at {sig}")))
            }
        }
        RibbonCommand::Recurrence { sig } => {
            let sig = sig.get()?;
            let holds = ribbon::verify_pole_recurrence(sig)?;
            writeln!(
                out,
                "{sig} -> ({},{}) {}",
                sig.m() + 1,
                sig.n() + 1,
                if holds { "holds" } else { "FAILS" }
            )?;
            if holds {
                Ok(EXIT_OK)
            } else {
                Err(Error::Verification(format!(
                    "pole recurrence fails at {sig}"
                )))
            }
        }
    }
}

#[derive(Serialize)]
struct PiJson {
    num: String,
    den: String,
    pi_power: u32,
}

fn pi_json(v: &PiValue) -> PiJson {
    PiJson {
        num: v.coefficient().numer().to_string(),
        den: v.coefficient().denom().to_string(),
        pi_power: v.pi_power(),
    }
}

fn rational_latex(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        let sign = if r.is_negative() { "-" } else { "" };
        format!("{sign}\\frac{{{}}}{{{}}}", r.numer().abs(), r.denom())
    }
}

fn poly_latex(p: &Polynomial) -> String {
    let text = p.render("w");
    if p.is_zero() {
        return "0".into();
    }
    // Turn `w3^4` into `w_{3}^{4}` and drop `*`.
    let mut out = String::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        match chars[i] {
            'w' => {
                let j = (i + 1..chars.len())
                    .find(|&j| !chars[j].is_ascii_digit())
                    .unwrap_or(chars.len());
                out.push_str(&format!(
                    "w_{{{}}}",
                    chars[i + 1..j].iter().collect::<String>()
                ));
                i = j;
            }
            '^' => {
                let j = (i + 1..chars.len())
                    .find(|&j| !chars[j].is_ascii_digit())
                    .unwrap_or(chars.len());
                out.push_str(&format!(
                    "^{{{}}}",
                    chars[i + 1..j].iter().collect::<String>()
                ));
                i = j;
            }
            '*' => {
                out.push_str(" \\, ");
                i += 1;
            }
            c => {
                out.push(c);
                i += 1;
            }
        }
    }
    out
}

fn cylinders(k: usize) -> String {
    if k == 1 {
        "k=1 \\text{ cylinder}".into()
    } else {
        format!("k={k} \\text{{ cylinders}}")
    }
}

fn volume_latex_table(k_zeros: u32, rows: &[TreeContribution]) -> Result<String> {
    let subs = subtotals(rows)?;
    let total = PiValue::sum(2 * k_zeros + 2, rows.iter().map(|c| &c.value))?;
    let mut s = String::new();
    s.push_str("\\begin{array}{|c|c|c|c|}\n\\hline\n");
    s.push_str("\\text{Tree} & \\prod F_{m_i,n_i} & c(T,a) & \\text{Contribution}\\\\\n\\hline\n");
    for (k, sub) in &subs {
        s.push_str(&format!(
            "\\multicolumn{{4}}{{c}}{{{}}}\\\\\n\\hline\n",
            cylinders(*k)
        ));
        for c in rows.iter().filter(|c| c.tree.edge_count() == *k) {
            s.push_str(&format!(
                "\\text{{{}}} & {} & {} & {}\\\\\n\\hline\n",
                c.tree.nested(),
                poly_latex(&c.product),
                rational_latex(&c.multinomial_factor),
                c.value.to_latex()
            ));
        }
        if subs.len() > 1 {
            s.push_str(&format!(
                "\\multicolumn{{3}}{{r}}{{\\text{{Subtotal:}}}} & {}\\\\\n",
                sub.to_latex()
            ));
        }
    }
    s.push_str(&format!(
        "\\multicolumn{{3}}{{r}}{{\\text{{Total:}}}} & {}\\\\\n\\end{{array}}",
        total.to_latex()
    ));
    Ok(s)
}

fn volume_cmd(k_zeros: u32, per_tree: bool, format: Format, out: &mut dyn Write) -> Result<()> {
    let rows = contributions(k_zeros)?;
    let total = PiValue::sum(2 * k_zeros + 2, rows.iter().map(|c| &c.value))?;
    match (format, per_tree) {
        (Format::Text, false) => writeln!(out, "{total}")?,
        (Format::Text, true) => {
            for c in &rows {
                writeln!(
                    out,
                    "k={} tree={} prodF={} aut={} c={} contribution={}",
                    c.tree.edge_count(),
                    c.tree,
                    c.product,
                    c.aut_order,
                    c.multinomial_factor,
                    c.value
                )?;
            }
            for (k, sub) in subtotals(&rows)? {
                writeln!(out, "subtotal k={k} {sub}")?;
            }
            writeln!(out, "total {total}")?;
        }
        (Format::Json, _) => {
            let mut doc = json!({
                "K": k_zeros,
                "volume": pi_json(&total),
                "expected": pi_json(&expected_volume(k_zeros)),
            });
            if per_tree {
                let trees: Vec<_> = rows
                    .iter()
                    .map(|c| {
                        json!({
                            "tree": c.tree.nested(),
                            "edges": c.tree.edges(),
                            "layers": c.layers.iter().map(|s| [s.m(), s.n()]).collect::<Vec<_>>(),
                            "aut": c.aut_order,
                            "c": c.multinomial_factor.to_string(),
                            "product": c.product.to_json_terms(),
                            "contribution": pi_json(&c.value),
                        })
                    })
                    .collect();
                let subs: serde_json::Map<String, serde_json::Value> = subtotals(&rows)?
                    .iter()
                    .map(|(k, v)| {
                        (
                            k.to_string(),
                            serde_json::to_value(pi_json(v)).expect("plain struct"),
                        )
                    })
                    .collect();
                doc["trees"] = json!(trees);
                doc["subtotals"] = json!(subs);
            }
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
        (Format::LatexTable, false) => writeln!(out, "{}", total.to_latex())?,
        (Format::LatexTable, true) => writeln!(out, "{}", volume_latex_table(k_zeros, &rows)?)?,
    }
    Ok(())
}

fn covers_cmd(command: &CoversCommand, ctx: &mut Context, out: &mut dyn Write) -> Result<i32> {
    match command {
        CoversCommand::Count {
            k,
            max_degree,
            method,
            format,
        } => {
            let (zeros, poles) = (*k, k + 4);
            let per_degree: Vec<(u32, BigRational)> = match method {
                CoverMethod::Frobenius => {
                    let table = ctx.characters();
                    let covers = connected_counts(*k, *max_degree, &table)?;
                    ctx.persist(&table);
                    (1..=*max_degree)
                        .map(|n| (n, covers.connected_at(n, zeros, poles)))
                        .collect()
                }
                CoverMethod::Naive => (1..=*max_degree)
                    .map(|n| {
                        let t = naive_table(n)?;
                        Ok((
                            n,
                            t.connected
                                .get(&(zeros, poles))
                                .cloned()
                                .unwrap_or_else(BigRational::zero),
                        ))
                    })
                    .collect::<Result<_>>()?,
            };
            let labels = rat(1)
                * crate::arith::int_rat(
                    crate::arith::factorial(u64::from(zeros))
                        * crate::arith::factorial(u64::from(poles)),
                );
            match format {
                Format::Json => {
                    let rows: Vec<_> = per_degree
                        .iter()
                        .map(|(n, c)| json!({"degree": n, "connected": c.to_string()}))
                        .collect();
                    writeln!(
                        out,
                        "{}",
                        serde_json::to_string_pretty(&json!({
                            "K": k,
                            "method": format!("{method:?}").to_lowercase(),
                            "counts": rows,
                        }))?
                    )?;
                }
                _ => {
                    writeln!(out, "degree connected labelled-cumulative")?;
                    let mut cumulative = BigRational::zero();
                    for (n, c) in &per_degree {
                        cumulative += c * &labels;
                        writeln!(out, "{n} {c} {cumulative}")?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
        CoversCommand::Ratio { k, degrees, format } => {
            let table = ctx.characters();
            let rows = growth_ratios(*k, degrees, &table)?;
            ctx.persist(&table);
            match format {
                Format::Json => {
                    let js: Vec<_> = rows
                        .iter()
                        .map(|(n, sq, r)| json!({"degree": n, "sq": sq.to_string(), "ratio": format!("{r:.6}")}))
                        .collect();
                    writeln!(
                        out,
                        "{}",
                        serde_json::to_string_pretty(&json!({"K": k, "rows": js}))?
                    )?;
                }
                _ => {
                    writeln!(out, "N Sq_N r_N")?;
                    for (n, sq, r) in rows {
                        writeln!(out, "{n} {sq} {r:.6}")?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
    }
}

/// One row of the verification summary.
struct Check {
    name: String,
    ok: bool,
    detail: String,
}

fn verify_cmd(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let mut checks: Vec<Check> = Vec::new();
    let mut first_failure: Option<String> = None;
    let mut record =
        |checks: &mut Vec<Check>, name: String, ok: bool, detail: String, failure: String| {
            if !ok && first_failure.is_none() {
                first_failure = Some(failure);
            }
            checks.push(Check { name, ok, detail });
        };

    for sig in LayerSignature::all_up_to(args.mn_max) {
        let mut closed = f_closed(sig);
        if args.inject_fault && checks.is_empty() {
            let (m, c) = closed
                .terms()
                .next()
                .map(|(m, c)| (m.clone(), c.clone()))
                .expect("nonzero");
            closed.add_term(m, BigRational::one());
            let _ = c;
        }
        let rec = f_recurrence(sig);
        let ok = closed == rec;
        record(
            &mut checks,
            format!("closed = recurrence {sig}"),
            ok,
            String::new(),
            format!("F{sig}: closed {closed} != recurrence {rec}"),
        );
        if sig.n() == 0 {
            let base = f_kontsevich_base(sig.m())?;
            let ok = closed == base;
            record(
                &mut checks,
                format!("closed = kontsevich {sig}"),
                ok,
                String::new(),
                format!("F{sig}: closed {closed} != kontsevich {base}"),
            );
        }
        let darts = 3 * sig.m() + sig.n();
        if darts <= args.darts_max {
            let hat = ribbon::hat_f(sig);
            let lap = closed.laplace();
            let ok = hat.equals(&lap);
            record(
                &mut checks,
                format!("graphs = transform {sig}"),
                ok,
                String::new(),
                format!("F{sig}: graph transform {hat} != transform of closed form {lap}"),
            );
        }
        if darts <= args.darts_max.min(10) {
            let fit = ribbon::leading_part_fit(sig, 8)?;
            let ok = fit == closed;
            record(
                &mut checks,
                format!("closed = oracle-leading {sig}"),
                ok,
                String::new(),
                format!("F{sig}: closed {closed} != lattice leading part {fit}"),
            );
        }
    }

    for k in 1..=args.k_max {
        let got = crate::tree::volume(k)?;
        let want = expected_volume(k);
        let ok = got == want;
        record(
            &mut checks,
            format!("volume K={k}"),
            ok,
            got.to_string(),
            format!("volume K={k}: trees give {got}, closed form {want}"),
        );
    }

    let n_max = args.cover_n_max.min(crate::covers::naive::NAIVE_MAX_DEGREE);
    if n_max > 0 {
        let table = CharacterTable::in_memory();
        let covers = connected_counts(2, n_max, &table)?;
        for n in 1..=n_max {
            let naive = naive_table(n)?;
            let mut ok = true;
            let mut failure = String::new();
            for zeros in 0..=2 {
                for poles in 0..=6 {
                    let f = covers.connected_at(n, zeros, poles);
                    let e = naive
                        .connected
                        .get(&(zeros, poles))
                        .cloned()
                        .unwrap_or_else(BigRational::zero);
                    if f != e && ok {
                        ok = false;
                        failure = format!(
                            "covers N={n} zeros={zeros} poles={poles}: frobenius {f} != naive {e}"
                        );
                    }
                }
            }
            record(
                &mut checks,
                format!("frobenius = naive N={n}"),
                ok,
                String::new(),
                failure,
            );
        }
    }

    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    for c in &checks {
        let status = if c.ok { "ok" } else { "FAIL" };
        if c.detail.is_empty() {
            writeln!(out, "{:width$}  {status}", c.name)?;
        } else {
            writeln!(out, "{:width$}  {status}  {}", c.name, c.detail)?;
        }
    }
    let failed = checks.iter().filter(|c| !c.ok).count();
    writeln!(out, "{} checks, {} failed", checks.len(), failed)?;
    match first_failure {
        Some(f) => {
            writeln!(out, "first failure: {f}")?;
            Ok(EXIT_VERIFY)
        }
        None => Ok(EXIT_OK),
    }
}

fn parse_format(s: &str) -> Option<Format> {
    Format::from_str(s, true).ok()
}

fn render_cmd(args: &RenderArgs, out: &mut dyn Write) -> Result<i32> {
    let mut tokens = args.entity.clone();
    let mut format = args.format;
    if tokens.len() > 1 {
        if let Some(f) = parse_format(tokens.last().expect("nonempty")) {
            format = Some(f);
            tokens.pop();
        }
    }
    let kind = tokens[0].as_str();
    let params = &tokens[1..];
    let num = |i: usize| -> Result<u32> {
        params
            .get(i)
            .ok_or_else(|| Error::Invalid(format!("`{kind}` needs {} parameter(s)", i + 1)))?
            .parse()
            .map_err(|_| Error::Invalid(format!("parameter {:?} is not a number", params[i])))
    };
    match kind {
        "local-poly" => {
            let sig = LayerSignature::new(num(0)?, num(1)?)?;
            local_poly(sig, PolyMethod::Auto, format.unwrap_or(Format::Json), out)?;
        }
        "volume" => {
            let f = format.unwrap_or(Format::Text);
            volume_cmd(num(0)?, f == Format::LatexTable, f, out)?;
        }
        "ribbon" => {
            let sig = LayerSignature::new(num(0)?, num(1)?)?;
            let graphs = ribbon::enumerate_graphs(sig, LabelMode::FacesOnly);
            let js: Vec<_> = graphs.iter().map(|g| g.to_json()).collect();
            writeln!(out, "{}", serde_json::to_string_pretty(&js)?)?;
        }
        "hat-f" => {
            let sig = LayerSignature::new(num(0)?, num(1)?)?;
            writeln!(out, "{}", ribbon::hat_f(sig))?;
        }
        "character" => {
            let irrep: Partition = params
                .first()
                .ok_or_else(|| Error::Invalid("`character` needs IRREP CLASS".into()))?
                .parse()?;
            let class: Partition = params
                .get(1)
                .ok_or_else(|| Error::Invalid("`character` needs IRREP CLASS".into()))?
                .parse()?;
            let v = CharacterTable::in_memory().character(&irrep, &class)?;
            writeln!(out, "{v}")?;
        }
        other => return Err(Error::UnknownEntity(other.to_string())),
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["pillow", "--no-meta"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn local_poly_json_golden() {
        let (code, out, _) = call(&["local-poly", "--m", "2", "--n", "2", "--format", "json"]);
        assert_eq!(code, 0);
        assert_eq!(
            out.trim(),
            r#"[{"exponents":[2,0],"num":"2","den":"1"},{"exponents":[0,2],"num":"2","den":"1"}]"#
        );
        let (_, rendered, _) = call(&["render", "local-poly", "2", "2", "json"]);
        assert_eq!(rendered, out);
    }

    #[test]
    fn volume_text() {
        let (code, out, _) = call(&["volume", "--K", "1"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "pi^4 * 1/1");
        let (_, out, _) = call(&["render", "volume", "1", "text"]);
        assert_eq!(out.trim(), "pi^4 * 1/1");
    }

    #[test]
    fn volume_latex_table_rows() {
        let (code, out, _) = call(&["render", "volume", "2", "latex-table"]);
        assert_eq!(code, 0);
        for cell in [
            "\\frac{4}{63}\\pi^{6}",
            "\\frac{16}{189}\\pi^{6}",
            "\\frac{2}{15}\\pi^{6}",
            "\\frac{4}{45}\\pi^{6}",
            "\\frac{1}{9}\\pi^{6}",
            "\\frac{1}{54}\\pi^{6}",
            "\\frac{4}{27}\\pi^{6}",
            "\\frac{2}{9}\\pi^{6}",
            "\\frac{7}{54}\\pi^{6}",
            "\\frac{1}{2}\\pi^{6}",
        ] {
            assert!(out.contains(cell), "missing {cell} in\n{out}");
        }
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(call(&["local-poly", "--m", "1"]).0, EXIT_USAGE);
        assert_eq!(call(&["local-poly", "--m", "1", "--n", "2"]).0, EXIT_USAGE);
        assert_eq!(call(&["render", "banana", "1"]).0, EXIT_USAGE);
        assert_eq!(call(&["--bogus"]).0, EXIT_USAGE);
        assert_eq!(call(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn verify_small_and_fault_injection() {
        let (code, out, _) = call(&[
            "verify",
            "--K-max",
            "2",
            "--mn-max",
            "4",
            "--cover-n-max",
            "3",
        ]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("volume K=1  ok  pi^4 * 1/1") || out.contains("pi^4 * 1/1"));
        assert!(out.contains("pi^6 * 1/2"));
        let (code, out, _) = call(&[
            "verify",
            "--K-max",
            "1",
            "--mn-max",
            "2",
            "--cover-n-max",
            "1",
            "--inject-fault",
        ]);
        assert_eq!(code, EXIT_VERIFY);
        assert!(out.contains("first failure"));
    }

    #[test]
    fn deterministic_output_with_one_job() {
        let a = call(&["volume", "--K", "3", "--per-tree", "--format", "json"]);
        let b = call(&[
            "--jobs",
            "1",
            "volume",
            "--K",
            "3",
            "--per-tree",
            "--format",
            "json",
        ]);
        assert_eq!(a.1, b.1);
    }

    #[test]
    fn ribbon_commands() {
        let (code, out, _) = call(&["ribbon", "enumerate", "--m", "2", "--n", "2"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("5 graphs"));
        let (code, out, _) = call(&["ribbon", "count", "--m", "0", "--n", "2", "--widths", "3"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "1");
        let (code, _, _) = call(&["ribbon", "fit", "--m", "1", "--n", "3"]);
        assert_eq!(code, 0);
    }

    #[test]
    fn covers_commands() {
        let dir = tempfile::tempdir().unwrap();
        let d = dir.path().to_str().unwrap();
        let (code, out, _) = call(&[
            "--cache-dir",
            d,
            "covers",
            "count",
            "--K",
            "1",
            "--max-degree",
            "3",
        ]);
        assert_eq!(code, 0);
        assert!(out.lines().any(|l| l == "3 12 1440"), "{out}");
        let (code, naive, _) = call(&[
            "covers",
            "count",
            "--K",
            "1",
            "--max-degree",
            "3",
            "--method",
            "naive",
        ]);
        assert_eq!(code, 0);
        assert_eq!(naive, out);
        assert!(dir.path().join("characters.txt").exists());
    }
}
