//! Command logic behind the `arcflock` binary.
//!
//! Each command returns an [`Output`]: the rendered document and whether every
//! verdict in it was true. Rendering is deterministic; parallel work is always
//! collected back into canonical order before it is printed.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use arcflock::flock::projection::default_projection_point;
use arcflock::io::{ArcJson, FlockJson, SearchReport};
use arcflock::search::{search_all, search_one, SearchOutcome, SeedOrder};
use arcflock::{
    arc_to_flock, build_trace_system, construct_extension_arc, denniston_arc, flock_to_arc,
    geometric_to_additive, guaranteed_degree, project_arc, rank_analysis, solve_trace_system, verify_arc,
    ArcReport, Field, FlockReport, Gf, GroupSpec, MathonArc, PartialFlock, Point3,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "arcflock", version, about = "Mathon arcs and additive partial flocks over GF(2^h)")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Field degree: q = 2^h.
    #[arg(long = "h", global = true)]
    pub h: Option<u32>,
    /// Irreducible modulus as an integer; the least one by default.
    #[arg(long, global = true)]
    pub modulus: Option<u32>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long = "seed-order", global = true, value_enum, default_value_t = Order::Asc)]
    pub seed_order: Order,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Order {
    Asc,
    Desc,
}

impl From<Order> for SeedOrder {
    fn from(o: Order) -> SeedOrder {
        match o {
            Order::Asc => SeedOrder::Asc,
            Order::Desc => SeedOrder::Desc,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build an arc and verify it.
    #[command(subcommand)]
    Construct(Construct),
    /// Verify an arc document.
    Verify { input: PathBuf },
    /// Convert between arcs and flocks.
    Convert {
        #[arg(value_enum)]
        direction: Direction,
        input: PathBuf,
    },
    /// Project the embedded conics of an arc from a point on the nuclear line.
    Project {
        input: PathBuf,
        /// Projection point (s,0,1,0) as four integers.
        #[arg(long, value_delimiter = ',')]
        point: Option<Vec<u32>>,
    },
    /// Solve the trace conditions for every H of order d and every λ_d.
    Search {
        #[arg(long)]
        d: usize,
        /// Build and verify one example arc per pair.
        #[arg(long)]
        arcs: bool,
    },
    /// Rank of the trace conditions for one (H, λ_d).
    Rank {
        #[arg(long = "H", value_delimiter = ',', required = true)]
        h_gens: Vec<u32>,
        #[arg(long = "lambda-d")]
        lambda_d: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum Construct {
    /// Denniston arc on the additive group spanned by `--A`.
    Denniston {
        #[arg(long)]
        alpha: u32,
        #[arg(long = "A", value_delimiter = ',', required = true)]
        a_gens: Vec<u32>,
    },
    /// Degree-2d arc containing the Denniston arc on H.
    MathonExtend {
        #[arg(long = "H", value_delimiter = ',', required = true)]
        h_gens: Vec<u32>,
        #[arg(long = "lambda-d")]
        lambda_d: u32,
        #[arg(long)]
        rho: Option<u32>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    ArcToFlock,
    FlockToArc,
    Project,
    Chain,
}

/// A rendered document and its overall verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub body: String,
    pub ok: bool,
}

#[derive(Serialize)]
struct FlockSummary {
    pairs: usize,
    disagreements: usize,
    verdict: bool,
}

impl From<&FlockReport> for FlockSummary {
    fn from(r: &FlockReport) -> Self {
        FlockSummary { pairs: r.pairs.len(), disagreements: r.disagreements, verdict: r.verdict }
    }
}

#[derive(Serialize)]
struct ArcDoc {
    #[serde(flatten)]
    arc: ArcJson,
    verification: ArcReport,
}

#[derive(Serialize)]
struct FlockDoc {
    #[serde(flatten)]
    flock: FlockJson,
    verification: FlockSummary,
}

#[derive(Serialize)]
struct ChainDoc {
    projected: FlockDoc,
    additive: FlockDoc,
    expected: FlockDoc,
    equal: bool,
    verdict: bool,
}

#[derive(Serialize)]
struct EmptySolution {
    q: u32,
    #[serde(rename = "H")]
    h_group: Vec<u32>,
    lambda_d: u32,
    num_rho_prefilter: usize,
    num_rho_valid: usize,
    reason: String,
    verdict: bool,
}

#[derive(Serialize)]
struct SearchSummary {
    q: u32,
    d: usize,
    pairs: usize,
    /// rank -> number of pairs
    rank_histogram: BTreeMap<usize, usize>,
    pairs_with_valid_rho: usize,
    guaranteed_degree: u64,
    verdict: bool,
}

#[derive(Serialize)]
struct SummaryLine<'a> {
    summary: &'a SearchSummary,
}

#[derive(Serialize)]
struct RankDoc {
    #[serde(flatten)]
    report: SearchReport,
    conditions: Vec<ConditionDoc>,
}

#[derive(Serialize)]
struct ConditionDoc {
    lambda: u32,
    coeff: u32,
    epsilon: u8,
}

pub fn field_from(opts: &GlobalOpts) -> Result<Field> {
    let h = opts.h.ok_or_else(|| anyhow!("--h is required for this command"))?;
    Ok(match opts.modulus {
        Some(m) => Field::with_modulus(h, m)?,
        None => Field::new(h)?,
    })
}

fn check_field(opts: &GlobalOpts, f: &Field) -> Result<()> {
    if let Some(h) = opts.h {
        if h != f.h() || opts.modulus.is_some_and(|m| m != f.modulus()) {
            bail!("--h/--modulus disagree with the field of the input document");
        }
    }
    Ok(())
}

fn elements(f: &Field, values: &[u32]) -> Result<Vec<Gf>> {
    Ok(values.iter().map(|&v| f.element(v)).collect::<arcflock::Result<_>>()?)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_arc(opts: &GlobalOpts, path: &Path) -> Result<MathonArc> {
    let arc = read_json::<ArcJson>(path)?.to_arc()?;
    check_field(opts, arc.field())?;
    Ok(arc)
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn arc_doc(m: &MathonArc) -> ArcDoc {
    ArcDoc { arc: ArcJson::from_arc(m), verification: verify_arc(m) }
}

fn flock_doc(flock: &PartialFlock) -> FlockDoc {
    FlockDoc { flock: FlockJson::from_flock(flock), verification: (&flock.verify()).into() }
}

fn arc_text(title: &str, doc: &ArcDoc) -> String {
    let r = &doc.verification;
    let mut s = format!(
        "{title}: degree {} in PG(2,{}), {} points (expected {})\n",
        r.degree, r.q, r.size, r.expected_size
    );
    for c in &doc.arc.conics {
        let _ = writeln!(s, "  F({}, {}, {})", c.alpha, c.beta, c.lambda);
    }
    let hist: Vec<String> = r.histogram.iter().map(|(k, v)| format!("{k}:{v}")).collect();
    let _ = writeln!(s, "  line histogram {}", hist.join(" "));
    let _ = writeln!(s, "  verdict {}", r.verdict);
    s
}

fn flock_text(title: &str, doc: &FlockDoc) -> String {
    let fl = &doc.flock;
    let mut s = format!("{title}: {} planes over GF(2^{})\n", fl.planes.len(), fl.field.h);
    for p in &fl.planes {
        let _ = writeln!(s, "  [{}, {}, {}, {}]", p[0], p[1], p[2], p[3]);
    }
    let _ = writeln!(s, "  additive {}, linear {}", fl.additive.unwrap_or(false), fl.linear.unwrap_or(false));
    let _ = writeln!(
        s,
        "  {} pairs checked, {} disagreements, verdict {}",
        doc.verification.pairs, doc.verification.disagreements, doc.verification.verdict
    );
    s
}

fn render_arc(format: Format, title: &str, m: &MathonArc) -> Output {
    let doc = arc_doc(m);
    let ok = doc.verification.verdict;
    let body = match format {
        Format::Json => json(&doc),
        Format::Text => arc_text(title, &doc),
    };
    Output { body, ok }
}

fn render_flock(format: Format, title: &str, flock: &PartialFlock) -> Output {
    let doc = flock_doc(flock);
    let ok = doc.verification.verdict;
    let body = match format {
        Format::Json => json(&doc),
        Format::Text => flock_text(title, &doc),
    };
    Output { body, ok }
}

/// Runs one command and renders its output.
pub fn run(cli: &Cli) -> Result<Output> {
    let opts = &cli.global;
    match &cli.command {
        Command::Construct(c) => construct(opts, c),
        Command::Verify { input } => Ok(render_arc(opts.format, "arc", &read_arc(opts, input)?)),
        Command::Convert { direction, input } => convert(opts, *direction, input, None),
        Command::Project { input, point } => convert(opts, Direction::Project, input, point.as_deref()),
        Command::Search { d, arcs } => search(opts, *d, *arcs),
        Command::Rank { h_gens, lambda_d } => rank(opts, h_gens, *lambda_d),
    }
}

fn construct(opts: &GlobalOpts, c: &Construct) -> Result<Output> {
    let f = field_from(opts)?;
    match c {
        Construct::Denniston { alpha, a_gens } => {
            let gens = elements(&f, a_gens)?;
            let group = f.additive_span(&gens);
            let a_set: Vec<Gf> = group.into_iter().filter(|g| !g.is_zero()).collect();
            let m = denniston_arc(&f, f.element(*alpha)?, &a_set)?;
            Ok(render_arc(opts.format, "Denniston arc", &m))
        }
        Construct::MathonExtend { h_gens, lambda_d, rho } => {
            let spec = GroupSpec::new(&f, &elements(&f, h_gens)?, f.element(*lambda_d)?)?;
            let rho = match rho {
                Some(r) => f.element(*r)?,
                None => {
                    let sol = solve_trace_system(&build_trace_system(&f, &spec)?)?;
                    match SeedOrder::from(opts.seed_order).arrange(&sol.valid).first() {
                        Some(&r) => r,
                        None => {
                            return Ok(empty_solution(
                                opts.format,
                                &f,
                                &spec,
                                sol.prefilter.len(),
                                0,
                                "no rho satisfies the trace conditions with Tr(beta) = 1".into(),
                            ))
                        }
                    }
                }
            };
            match construct_extension_arc(&f, &spec, rho) {
                Ok(m) => Ok(render_arc(opts.format, "Mathon extension", &m)),
                Err(e @ arcflock::Error::EvenDegreeBase(_)) => Err(e.into()),
                Err(e) => {
                    let sol = solve_trace_system(&build_trace_system(&f, &spec)?)?;
                    Ok(empty_solution(
                        opts.format,
                        &f,
                        &spec,
                        sol.prefilter.len(),
                        sol.valid.len(),
                        e.to_string(),
                    ))
                }
            }
        }
    }
}

fn empty_solution(
    format: Format,
    f: &Field,
    spec: &GroupSpec,
    prefilter: usize,
    valid: usize,
    reason: String,
) -> Output {
    let doc = EmptySolution {
        q: f.q(),
        h_group: spec.h_group.iter().map(|g| g.0).collect(),
        lambda_d: spec.lambda_d.0,
        num_rho_prefilter: prefilter,
        num_rho_valid: valid,
        reason,
        verdict: false,
    };
    let body = match format {
        Format::Json => json(&doc),
        Format::Text => format!(
            "no extension for H = {:?}, lambda_d = {}: {}\n  verdict false\n",
            doc.h_group, doc.lambda_d, doc.reason
        ),
    };
    Output { body, ok: false }
}

fn convert(opts: &GlobalOpts, dir: Direction, input: &Path, point: Option<&[u32]>) -> Result<Output> {
    match dir {
        Direction::ArcToFlock => {
            let m = read_arc(opts, input)?;
            Ok(render_flock(opts.format, "additive flock", &arc_to_flock(&m)))
        }
        Direction::FlockToArc => {
            let flock = read_json::<FlockJson>(input)?.to_flock()?;
            check_field(opts, flock.field())?;
            Ok(render_arc(opts.format, "arc", &flock_to_arc(&flock)?))
        }
        Direction::Project => {
            let m = read_arc(opts, input)?;
            let f = m.field();
            let p = match point {
                Some(&[a, b, c, d]) => Point3::from_ints(f, [a, b, c, d])?,
                Some(_) => bail!("--point takes four coordinates"),
                None => default_projection_point(f),
            };
            Ok(render_flock(opts.format, "projected flock", &project_arc(&m, &p)?))
        }
        Direction::Chain => {
            let m = read_arc(opts, input)?;
            let projected = project_arc(&m, &default_projection_point(m.field()))?;
            let additive = geometric_to_additive(&projected)?;
            let expected = arc_to_flock(&m);
            let equal = additive.plane_set() == expected.plane_set();
            let doc = ChainDoc {
                projected: flock_doc(&projected),
                additive: flock_doc(&additive),
                expected: flock_doc(&expected),
                equal,
                verdict: false,
            };
            let verdict = equal
                && doc.projected.verification.verdict
                && doc.additive.verification.verdict
                && doc.expected.verification.verdict;
            let doc = ChainDoc { verdict, ..doc };
            let body = match opts.format {
                Format::Json => json(&doc),
                Format::Text => format!(
                    "{}{}{}chain equal {}, verdict {}\n",
                    flock_text("projected flock", &doc.projected),
                    flock_text("after delta, phi, kappa", &doc.additive),
                    flock_text("additive flock of the arc", &doc.expected),
                    doc.equal,
                    doc.verdict
                ),
            };
            Ok(Output { body, ok: verdict })
        }
    }
}

fn search(opts: &GlobalOpts, d: usize, arcs: bool) -> Result<Output> {
    let f = field_from(opts)?;
    if d < 1 || 2 * d > f.q() as usize {
        bail!("need 1 <= d and 2d <= q");
    }
    let outcomes = search_all(&f, d, opts.seed_order.into(), arcs)?;
    let reports: Vec<SearchReport> = outcomes.iter().map(|o| SearchReport::from_outcome(&f, o)).collect();
    let arcs_ok = outcomes.iter().filter_map(|o| o.example_arc.as_ref()).all(|m| verify_arc(m).verdict);
    let mut rank_histogram = BTreeMap::new();
    for o in &outcomes {
        *rank_histogram.entry(o.rank.rank).or_insert(0) += 1;
    }
    let summary = SearchSummary {
        q: f.q(),
        d,
        pairs: outcomes.len(),
        rank_histogram,
        pairs_with_valid_rho: outcomes.iter().filter(|o| !o.solution.valid.is_empty()).count(),
        guaranteed_degree: guaranteed_degree(f.h()),
        verdict: arcs_ok,
    };
    let mut body = String::new();
    match opts.format {
        Format::Json => {
            for r in &reports {
                body.push_str(&serde_json::to_string(r)?);
                body.push('\n');
            }
            body.push_str(&serde_json::to_string(&SummaryLine { summary: &summary })?);
            body.push('\n');
        }
        Format::Text => {
            for (o, r) in outcomes.iter().zip(&reports) {
                let _ = writeln!(body, "{}", report_line(o, r));
            }
            let hist: Vec<String> = summary.rank_histogram.iter().map(|(k, v)| format!("{k}:{v}")).collect();
            let _ = writeln!(
                body,
                "q = {}, d = {}: {} pairs, {} with a valid rho, ranks {}, guaranteed degree {}",
                summary.q,
                d,
                summary.pairs,
                summary.pairs_with_valid_rho,
                hist.join(" "),
                summary.guaranteed_degree
            );
        }
    }
    Ok(Output { body, ok: arcs_ok })
}

fn report_line(o: &SearchOutcome, r: &SearchReport) -> String {
    let mut s = format!(
        "H = {:?}, lambda_d = {}: rank {}, {} prefilter rho, {} valid",
        r.h_group, r.lambda_d, r.rank, r.num_rho_prefilter, r.num_rho_valid
    );
    if let (Some(rho), Some(m)) = (r.example_rho, &o.example_arc) {
        let _ = write!(s, ", rho = {rho} gives degree {} (verdict {})", m.degree(), verify_arc(m).verdict);
    }
    s
}

fn rank(opts: &GlobalOpts, h_gens: &[u32], lambda_d: u32) -> Result<Output> {
    let f = field_from(opts)?;
    let spec = GroupSpec::new(&f, &elements(&f, h_gens)?, f.element(lambda_d)?)?;
    let sys = build_trace_system(&f, &spec)?;
    let outcome = search_one(&f, &spec, opts.seed_order.into(), false)?;
    debug_assert_eq!(outcome.rank, rank_analysis(&sys));
    let doc = RankDoc {
        report: SearchReport::from_outcome(&f, &outcome),
        conditions: sys
            .conditions
            .iter()
            .map(|c| ConditionDoc { lambda: c.lambda.0, coeff: c.coeff.0, epsilon: c.epsilon })
            .collect(),
    };
    let body = match opts.format {
        Format::Json => json(&doc),
        Format::Text => {
            let mut s = report_line(&outcome, &doc.report);
            s.push('\n');
            for c in &doc.conditions {
                let _ = writeln!(s, "  Tr({} mu) = {}   (lambda = {})", c.coeff, c.epsilon, c.lambda);
            }
            s
        }
    };
    Ok(Output { body, ok: true })
}

/// Caps the global worker pool at `ARCFLOCK_THREADS` when it is set.
pub fn init_threads(value: Option<&str>) -> Result<()> {
    if let Some(v) = value {
        let n: usize = v.trim().parse().with_context(|| format!("ARCFLOCK_THREADS = {v:?}"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}
