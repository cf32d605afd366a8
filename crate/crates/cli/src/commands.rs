//! One function per subcommand; each builds a serializable body and hands
//! it to [`io::emit`] together with the run manifest.

use std::collections::HashMap;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use coklab_core::linalg::{smith_normal_form, MatrixJson};
use coklab_core::mc::{
    empirical_moment, exact_moment, exhaustive_distribution, run_experiment, tv_distance,
    z_score, ExperimentConfig, MomentEstimate, Tally,
};
use coklab_core::measure::{catalog_limits, limiting_probability};
use coklab_core::module::{
    enumerate_catalog, module_type, present_cokernel, FiniteModule, ModuleCatalog, ModuleError,
    ModuleJson, RingContext,
};
use coklab_core::LimitResult;

use crate::io::{
    emit, parse_measure, read_json, read_matrix, read_module, ring_context, threads_from_env,
    write_csv, RunManifest,
};
use crate::{
    Command, CompareArgs, CoktypeArgs, MomentsArgs, OracleArgs, RingArgs, SimulateArgs, SnfArgs,
    TheoryArgs,
};

pub fn dispatch(cmd: Command) -> Result<()> {
    let started = Instant::now();
    match cmd {
        Command::Factor(a) => factor(a, started),
        Command::Snf(a) => snf(a, started),
        Command::Coktype(a) => coktype(a, started),
        Command::Theory(a) => theory(a, started),
        Command::Simulate(a) => simulate(a, started),
        Command::Moments(a) => moments(a, started),
        Command::Oracle(a) => oracle(a, started),
        Command::Compare(a) => compare(a, started),
    }
}

/// Ring data echoed in every body.
#[derive(Serialize)]
struct RingEcho {
    p: u64,
    k: u32,
    poly: Vec<u64>,
    squarefree: bool,
}

fn ring_echo(ctx: &RingContext) -> RingEcho {
    RingEcho {
        p: ctx.p(),
        k: ctx.k(),
        poly: ctx.spec().poly().coeffs().to_vec(),
        squarefree: ctx.is_squarefree(),
    }
}

fn context(r: &RingArgs) -> Result<RingContext> {
    ring_context(r.p, r.k, &r.poly)
}

#[derive(Serialize)]
struct FactorRow {
    poly: Vec<u64>,
    multiplicity: u32,
    degree: usize,
    field_size: u64,
    lift: Vec<u64>,
}

#[derive(Serialize)]
struct FactorBody {
    ring: RingEcho,
    factors: Vec<FactorRow>,
}

fn factor(a: RingArgs, started: Instant) -> Result<()> {
    let ctx = context(&a)?;
    let factors = (0..ctx.len())
        .map(|j| FactorRow {
            poly: ctx.residue_poly(j).coeffs().to_vec(),
            multiplicity: ctx.multiplicity(j),
            degree: ctx.degree(j),
            field_size: ctx.field_size(j),
            lift: ctx.lift(j).coeffs().to_vec(),
        })
        .collect();
    let body = FactorBody {
        ring: ring_echo(&ctx),
        factors,
    };
    emit(&a.output, RunManifest::new("factor", &a)?, started, &body)
}

#[derive(Serialize)]
struct Transforms {
    u: MatrixJson,
    v: MatrixJson,
}

#[derive(Serialize)]
struct SnfBody {
    p: u64,
    k: u32,
    valuations: Vec<u32>,
    cokernel: Vec<u32>,
    log_size: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    transforms: Option<Transforms>,
}

fn snf(a: SnfArgs, started: Instant) -> Result<()> {
    let md = coklab_core::ring::Modulus::new(a.p, a.k)?;
    let m = read_matrix(&a.matrix, md)?;
    let res = smith_normal_form(&m, a.transforms);
    let mut cokernel = res.cokernel_exponents();
    cokernel.reverse();
    let body = SnfBody {
        p: a.p,
        k: a.k,
        valuations: res.valuations().to_vec(),
        cokernel,
        log_size: res.cokernel_log_size(),
        transforms: res.transforms().map(|t| Transforms {
            u: t.u.to_json(),
            v: t.v.to_json(),
        }),
    };
    emit(&a.output, RunManifest::new("snf", &a)?, started, &body)
}

/// Catalog for the ring: enumerated up to `max_size` when square-free
/// (user modules are then reported separately), explicit otherwise.
fn catalog(
    ctx: &RingContext,
    max_size: u64,
    files: &[PathBuf],
) -> Result<(ModuleCatalog, Vec<(String, FiniteModule)>)> {
    let modules = files
        .iter()
        .map(|f| read_module(f, ctx))
        .collect::<Result<Vec<_>>>()?;
    if ctx.is_squarefree() {
        return Ok((enumerate_catalog(ctx, max_size)?, modules));
    }
    if modules.is_empty() {
        return Err(ModuleError::NotSquarefree).context("no --module given");
    }
    Ok((ModuleCatalog::from_modules(ctx, modules)?, Vec::new()))
}

#[derive(Serialize)]
struct CoktypeBody {
    ring: RingEcho,
    n: usize,
    #[serde(rename = "type")]
    type_id: String,
    log_size: u64,
    saturated: bool,
    violations: u32,
    module: ModuleJson,
}

fn coktype(a: CoktypeArgs, started: Instant) -> Result<()> {
    let ctx = context(&a.ring)?;
    let x = read_matrix(&a.matrix, *ctx.spec().modulus())?;
    if !x.is_square() {
        bail!("the matrix must be square");
    }
    let (cat, _) = catalog(&ctx, 1, &a.modules)?;
    let out = module_type(&x, &ctx, (!ctx.is_squarefree()).then_some(&cat))?;
    let body = CoktypeBody {
        ring: ring_echo(&ctx),
        n: x.rows(),
        type_id: out.module_type.id(),
        log_size: out.log_size,
        saturated: out.saturated,
        violations: out.violations,
        module: present_cokernel(&x, ctx.spec()).to_module().to_json(),
    };
    emit(&a.ring.output, RunManifest::new("coktype", &a)?, started, &body)
}

#[derive(Serialize)]
struct TheoryRow {
    #[serde(rename = "type")]
    type_id: String,
    log_size: u64,
    aut: String,
    hom_log_p: Vec<u64>,
    ext_log_p: Vec<u64>,
    probability: f64,
    radius: f64,
    tail: f64,
    truncation: u32,
    vanishing: bool,
}

fn theory_row(type_id: String, log_size: u64, r: &LimitResult) -> TheoryRow {
    TheoryRow {
        type_id,
        log_size,
        aut: r.aut.to_string(),
        hom_log_p: r.terms.iter().map(|t| t.hom_log).collect(),
        ext_log_p: r.terms.iter().map(|t| t.ext_log).collect(),
        probability: r.value,
        radius: r.radius,
        tail: r.tail,
        truncation: r.truncation,
        vanishing: r.vanishing,
    }
}

#[derive(Serialize)]
struct TheoryBody {
    ring: RingEcho,
    max_size: Option<u64>,
    rows: Vec<TheoryRow>,
    /// Limits of the user modules (square-free case), outside the catalog.
    modules: Vec<TheoryRow>,
    total: f64,
    deficit: f64,
}

fn theory_body(ctx: &RingContext, args: &TheoryArgs) -> Result<(ModuleCatalog, TheoryBody)> {
    let (cat, extra) = catalog(ctx, args.max_size, &args.modules)?;
    let limits = catalog_limits::<f64>(ctx, &cat)?;
    let rows: Vec<TheoryRow> = cat
        .entries()
        .iter()
        .zip(&limits)
        .map(|(e, r)| theory_row(e.id.clone(), e.log_size, r))
        .collect();
    let modules = extra
        .iter()
        .map(|(id, g)| {
            let r = limiting_probability::<f64>(ctx, g)?;
            let t = cat.classify(ctx, g)?;
            Ok(theory_row(format!("{id}={}", t.id()), g.log_size(), &r))
        })
        .collect::<Result<Vec<_>>>()?;
    let total: f64 = rows.iter().map(|r| r.probability).sum();
    let body = TheoryBody {
        ring: ring_echo(ctx),
        max_size: ctx.is_squarefree().then_some(args.max_size),
        rows,
        modules,
        total,
        deficit: 1.0 - total,
    };
    Ok((cat, body))
}

fn theory(a: TheoryArgs, started: Instant) -> Result<()> {
    let ctx = context(&a.ring)?;
    let (_, body) = theory_body(&ctx, &a)?;
    emit(&a.ring.output, RunManifest::new("theory", &a)?, started, &body)
}

#[derive(Serialize)]
struct TallyRow {
    #[serde(rename = "type")]
    type_id: String,
    count: u64,
    freq: f64,
    theory: f64,
    ci_lo: f64,
    ci_hi: f64,
    z: f64,
}

#[derive(Serialize)]
struct SimulationResult {
    n: usize,
    tally: Tally,
    rows: Vec<TallyRow>,
    other_freq: f64,
    tv: f64,
    deficit: f64,
}

#[derive(Serialize)]
struct SimulateBody {
    ring: RingEcho,
    measure: String,
    epsilon: f64,
    results: Vec<SimulationResult>,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    n: usize,
    #[serde(rename = "type")]
    type_id: &'a str,
    count: u64,
    freq: f64,
    theory: f64,
    ci_lo: f64,
    ci_hi: f64,
}

fn summarize(tally: Tally, theory: &[f64]) -> SimulationResult {
    let freqs = tally.frequencies();
    let rows = (0..tally.ids.len())
        .map(|i| {
            let (lo, hi) = tally.interval(i, 1.96);
            TallyRow {
                type_id: tally.ids[i].clone(),
                count: tally.counts[i],
                freq: freqs[i],
                theory: theory[i],
                ci_lo: lo,
                ci_hi: hi,
                z: z_score(tally.counts[i], tally.samples, theory[i]),
            }
        })
        .collect();
    let total: f64 = theory.iter().sum();
    SimulationResult {
        n: tally.n,
        other_freq: tally.other as f64 / tally.samples as f64,
        tv: tv_distance(&freqs, theory),
        deficit: 1.0 - total,
        rows,
        tally,
    }
}

fn simulate(a: SimulateArgs, started: Instant) -> Result<()> {
    let ctx = context(&a.theory.ring)?;
    let measure = parse_measure(&a.measure, ctx.p())?;
    let threads = threads_from_env()?;
    let (cat, theory) = theory_body(&ctx, &a.theory)?;
    let probs: Vec<f64> = theory.rows.iter().map(|r| r.probability).collect();
    let mut results = Vec::with_capacity(a.n.len());
    for &n in &a.n {
        let cfg = ExperimentConfig {
            n,
            samples: a.samples,
            measure: measure.clone(),
            seed: a.seed,
            threads,
        };
        let tally = run_experiment(&ctx, &cat, &cfg).with_context(|| format!("n = {n}"))?;
        results.push(summarize(tally, &probs));
    }
    if let Some(path) = &a.csv {
        let rows: Vec<CsvRow> = results
            .iter()
            .flat_map(|r| {
                r.rows.iter().map(move |t| CsvRow {
                    n: r.n,
                    type_id: &t.type_id,
                    count: t.count,
                    freq: t.freq,
                    theory: t.theory,
                    ci_lo: t.ci_lo,
                    ci_hi: t.ci_hi,
                })
            })
            .collect();
        write_csv(path, &rows)?;
    }
    let body = SimulateBody {
        ring: ring_echo(&ctx),
        measure: measure.name().to_string(),
        epsilon: measure.epsilon(ctx.p()),
        results,
    };
    emit(&a.theory.ring.output, RunManifest::new("simulate", &a)?, started, &body)
}

#[derive(Serialize)]
struct MomentsBody {
    ring: RingEcho,
    module: String,
    module_log_size: u64,
    measure: String,
    results: Vec<MomentEstimate>,
}

fn moments(a: MomentsArgs, started: Instant) -> Result<()> {
    let ctx = context(&a.ring)?;
    let measure = parse_measure(&a.measure, ctx.p())?;
    let threads = threads_from_env()?;
    let (id, g) = read_module(&a.module, &ctx)?;
    let results = a
        .n
        .iter()
        .map(|&n| {
            let cfg = ExperimentConfig {
                n,
                samples: a.samples,
                measure: measure.clone(),
                seed: a.seed,
                threads,
            };
            Ok(empirical_moment(&ctx, &g, &cfg)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let body = MomentsBody {
        ring: ring_echo(&ctx),
        module: id,
        module_log_size: g.log_size(),
        measure: measure.name().to_string(),
        results,
    };
    emit(&a.ring.output, RunManifest::new("moments", &a)?, started, &body)
}

#[derive(Serialize)]
struct OracleRow {
    n: usize,
    #[serde(rename = "type")]
    type_id: String,
    count: u64,
    total: u64,
    probability: String,
    value: f64,
}

#[derive(Serialize)]
struct ExactMomentRow {
    n: usize,
    mobius: String,
    direct: Option<String>,
    value: f64,
}

#[derive(Serialize)]
struct OracleBody {
    ring: RingEcho,
    rows: Vec<OracleRow>,
    other: Vec<(usize, u64)>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    moments: Vec<ExactMomentRow>,
}

fn oracle(a: OracleArgs, started: Instant) -> Result<()> {
    let ctx = context(&a.ring)?;
    let threads = threads_from_env()?;
    let (cat, _) = catalog(&ctx, a.max_size, &a.modules)?;
    let mut rows = Vec::new();
    let mut other = Vec::new();
    let mut moments = Vec::new();
    let g = a
        .moment_module
        .as_ref()
        .map(|f| read_module(f, &ctx))
        .transpose()?;
    for &n in &a.n {
        let t = exhaustive_distribution(&ctx, &cat, n, threads)?;
        for (i, id) in t.ids.iter().enumerate() {
            let pr = t.probability(id).expect("id from the tally");
            rows.push(OracleRow {
                n,
                type_id: id.clone(),
                count: t.counts[i],
                total: t.total,
                probability: pr.to_string(),
                value: t.counts[i] as f64 / t.total as f64,
            });
        }
        other.push((n, t.other));
        if let Some((_, g)) = &g {
            let (m, d) = exact_moment(&ctx, g, n, threads)?;
            moments.push(ExactMomentRow {
                n,
                mobius: m.to_string(),
                direct: d.map(|d| d.to_string()),
                value: m.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    if let Some(path) = &a.csv {
        write_csv(path, &rows)?;
    }
    let body = OracleBody {
        ring: ring_echo(&ctx),
        rows,
        other,
        moments,
    };
    emit(&a.ring.output, RunManifest::new("oracle", &a)?, started, &body)
}

#[derive(Deserialize)]
struct TallyDoc {
    results: Vec<TallyOnly>,
}

#[derive(Deserialize)]
struct TallyOnly {
    tally: Tally,
}

#[derive(Deserialize)]
struct TheoryDoc {
    rows: Vec<TheoryRowLite>,
}

#[derive(Deserialize)]
struct TheoryRowLite {
    #[serde(rename = "type")]
    type_id: String,
    probability: f64,
}

#[derive(Serialize)]
struct CompareRow {
    #[serde(rename = "type")]
    type_id: String,
    count: u64,
    freq: f64,
    theory: f64,
    z: f64,
}

#[derive(Serialize)]
struct CompareResult {
    n: usize,
    samples: u64,
    tv: f64,
    deficit: f64,
    other_freq: f64,
    rows: Vec<CompareRow>,
    /// Tally types absent from the theory file, sorted by id.
    unmatched: Vec<(String, u64)>,
}

#[derive(Serialize)]
struct CompareBody {
    results: Vec<CompareResult>,
}

fn compare(a: CompareArgs, started: Instant) -> Result<()> {
    let tallies: TallyDoc = read_json(&a.tally)?;
    let theory: TheoryDoc = read_json(&a.theory)?;
    let mut results = Vec::new();
    for TallyOnly { tally } in tallies.results {
        if tally.ids.len() != tally.counts.len() || tally.samples == 0 {
            bail!("malformed tally for n = {}", tally.n);
        }
        let counts: HashMap<&str, u64> = tally
            .ids
            .iter()
            .map(String::as_str)
            .zip(tally.counts.iter().copied())
            .collect();
        let rows: Vec<CompareRow> = theory
            .rows
            .iter()
            .map(|t| {
                let count = counts.get(t.type_id.as_str()).copied().unwrap_or(0);
                CompareRow {
                    type_id: t.type_id.clone(),
                    count,
                    freq: count as f64 / tally.samples as f64,
                    theory: t.probability,
                    z: z_score(count, tally.samples, t.probability),
                }
            })
            .collect();
        let mut unmatched: Vec<(String, u64)> = counts
            .iter()
            .filter(|(id, _)| !theory.rows.iter().any(|t| t.type_id == **id))
            .map(|(id, &c)| (id.to_string(), c))
            .collect();
        unmatched.sort();
        let freqs: Vec<f64> = rows.iter().map(|r| r.freq).collect();
        let probs: Vec<f64> = rows.iter().map(|r| r.theory).collect();
        let matched: u64 = rows.iter().map(|r| r.count).sum();
        results.push(CompareResult {
            n: tally.n,
            samples: tally.samples,
            tv: tv_distance(&freqs, &probs),
            deficit: 1.0 - probs.iter().sum::<f64>(),
            other_freq: (tally.samples - matched) as f64 / tally.samples as f64,
            rows,
            unmatched,
        });
    }
    emit(&a.output, RunManifest::new("compare", &a)?, started, &CompareBody { results })
}
