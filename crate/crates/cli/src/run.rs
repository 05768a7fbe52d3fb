use std::fs;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use pattern_forge::colouring::{delta_colouring, BranchSet, ColourError, ColourMap, Colouring};
use pattern_forge::group::GroupError;
use pattern_forge::verify::{
    check_fs_matrix_identities, delta_descent_check, find_monochromatic_ap, find_monochromatic_fs,
    find_monochromatic_span, find_monochromatic_subgroup, fs_support_growth_check, no_seven_norms, Domain,
    MatrixSplit, DEFAULT_BUDGET,
};
use pattern_forge::{
    search, CertStatus, Certificate, Element, GroupSpec, SearchConfig, SearchError, SearchStatus, VerifyConfig,
    VerifyError,
};
use serde::Serialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::args::{BenchArgs, Claim, Cli, ColourArgs, Command, SearchArgs, VerifyArgs};

pub const EXIT_USAGE: u8 = 64;
pub const EXIT_DATA: u8 = 65;
pub const EXIT_SOFTWARE: u8 = 70;
pub const EXIT_IO: u8 = 74;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Io(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
            CliError::Io(_) => EXIT_IO,
            CliError::Internal(_) => EXIT_SOFTWARE,
        }
    }
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::InvalidConfig(_) => CliError::Usage(e.to_string()),
            SearchError::RegionTooLarge { .. } => CliError::Data(e.to_string()),
            SearchError::SelfCheck(_) => CliError::Internal(e.to_string()),
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Witness(_) => CliError::Internal(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<ColourError> for CliError {
    fn from(e: ColourError) -> Self {
        match e {
            ColourError::UnknownId(_) => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        CliError::Data(e.to_string())
    }
}

/// Embedded in every JSON document the tool writes. Thread counts are left
/// out so that documents compare byte-for-byte across thread budgets.
#[derive(Debug, Serialize)]
struct RunManifest {
    command: &'static str,
    config: Value,
    tool_version: &'static str,
    inputs: Vec<String>,
    output: Option<String>,
    counts: Value,
}

impl RunManifest {
    fn new(command: &'static str, config: Value, counts: Value) -> Self {
        RunManifest {
            command,
            config,
            tool_version: env!("CARGO_PKG_VERSION"),
            inputs: Vec::new(),
            output: None,
            counts,
        }
    }
}

struct Report {
    doc: Value,
    manifest: RunManifest,
    code: u8,
    /// Printed on stdout instead of the document, when set.
    stdout: Option<String>,
}

pub fn run(cli: &Cli) -> Result<u8, CliError> {
    let threads = cli.threads as usize;
    let mut inputs = Vec::new();
    let mut report = match &cli.command {
        Command::Search(a) => cmd_search(a, threads)?,
        Command::Verify(a) => cmd_verify(a, threads, &mut inputs)?,
        Command::Colour(a) => cmd_colour(a, &mut inputs)?,
        Command::Bench(a) => cmd_bench(a, threads)?,
    };
    report.manifest.inputs = inputs;
    report.manifest.output = cli.out.as_ref().map(|p| p.display().to_string());
    let Value::Object(mut doc) = report.doc else {
        return Err(CliError::Internal("document is not a JSON object".into()));
    };
    let manifest = serde_json::to_value(&report.manifest).map_err(|e| CliError::Internal(e.to_string()))?;
    doc.insert("manifest".into(), manifest);
    let text = Value::Object(doc).to_string();
    match &report.stdout {
        Some(s) => println!("{s}"),
        None => println!("{text}"),
    }
    if let Some(path) = &cli.out {
        fs::write(path, format!("{text}\n")).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(report.code)
}

fn usage<T>(s: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(s.into()))
}

/// A JSON argument given inline or as `@PATH`; file paths are recorded.
fn json_arg(raw: &str, inputs: &mut Vec<String>) -> Result<Value, CliError> {
    let text = match raw.strip_prefix('@') {
        Some(path) => {
            inputs.push(path.to_string());
            fs::read_to_string(Path::new(path)).map_err(|e| CliError::Io(format!("{path}: {e}")))?
        }
        None => raw.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| CliError::Data(format!("invalid JSON {raw:?}: {e}")))
}

fn group_arg(raw: &str, inputs: &mut Vec<String>) -> Result<Arc<GroupSpec>, CliError> {
    let v = json_arg(raw, inputs)?;
    Ok(GroupSpec::from_json_str(&v.to_string())?)
}

fn cmd_search(a: &SearchArgs, threads: usize) -> Result<Report, CliError> {
    match (a.m, a.entry_bound) {
        (0, None) => return usage("--m 0 requires --entry-bound"),
        (m, Some(_)) if m != 0 => return usage("--entry-bound applies only to --m 0"),
        _ => {}
    }
    let cfg = SearchConfig {
        n: a.n,
        m: a.m,
        l_min: a.l_min,
        l_max: a.l_max,
        entry_bound: a.entry_bound,
        deterministic: !a.nondeterministic,
        threads,
        node_cap: a.node_cap,
        symmetry: !a.no_symmetry,
    };
    let outcome = search(&cfg)?;
    let code = match outcome.status {
        SearchStatus::Found { .. } => 0,
        SearchStatus::Exhausted => 1,
        SearchStatus::Inconclusive { .. } => 2,
    };
    let mut config = serde_json::to_value(&cfg).map_err(|e| CliError::Internal(e.to_string()))?;
    if let Value::Object(o) = &mut config {
        o.remove("threads");
    }
    let manifest = RunManifest::new("search", config, json!({"nodes": outcome.nodes}));
    Ok(Report { doc: outcome.to_json(), manifest, code, stdout: None })
}

fn need<T: Copy>(v: Option<T>, claim: Claim, flag: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("--claim {} requires --{flag}", claim.id())))
}

fn need_str<'a>(v: &'a Option<String>, claim: Claim, flag: &str) -> Result<&'a str, CliError> {
    v.as_deref().ok_or_else(|| CliError::Usage(format!("--claim {} requires --{flag}", claim.id())))
}

fn allowed_flags(claim: Claim) -> &'static [&'static str] {
    match claim {
        Claim::Thm41 => &["kappa", "max-set", "budget"],
        Claim::Thm32 => &["dim", "bound", "n", "budget"],
        Claim::Lemma31 => &["dim", "bound", "budget"],
        Claim::Thm54 => &["group", "colouring", "budget"],
        Claim::Thm55 => &["group", "all-subgroups", "colouring", "budget"],
        Claim::Thm56 => &["prime", "dim", "bound", "budget"],
        Claim::Thm23 => &["modulus", "dim", "kappa", "seed", "colours", "colouring"],
        Claim::Thm51Shadow => &["group", "set"],
    }
}

/// The claim-specific flags that were given, for rejection of strays and for
/// the manifest.
fn given_flags(a: &VerifyArgs) -> Map<String, Value> {
    let mut m = Map::new();
    let mut put = |k: &str, v: Option<Value>| {
        if let Some(v) = v {
            m.insert(k.to_string(), v);
        }
    };
    put("kappa", a.kappa.map(Value::from));
    put("max-set", a.max_set.map(Value::from));
    put("dim", a.dim.map(Value::from));
    put("bound", a.bound.map(Value::from));
    put("n", a.n.map(Value::from));
    put("group", a.group.clone().map(Value::from));
    put("all-subgroups", a.all_subgroups.then_some(Value::Bool(true)));
    put("prime", a.prime.map(Value::from));
    put("modulus", a.modulus.map(Value::from));
    put("seed", a.seed.map(Value::from));
    put("colours", a.colours.map(Value::from));
    put("colouring", a.colouring.clone().map(Value::from));
    put("set", a.set.clone().map(Value::from));
    put("budget", a.budget.map(Value::from));
    m
}

fn cmd_verify(a: &VerifyArgs, threads: usize, inputs: &mut Vec<String>) -> Result<Report, CliError> {
    let claim = a.claim;
    let given = given_flags(a);
    let allowed = allowed_flags(claim);
    if let Some(stray) = given.keys().find(|k| !allowed.contains(&k.as_str())) {
        return usage(format!("--{stray} does not apply to --claim {}", claim.id()));
    }
    let cfg = VerifyConfig { budget: a.budget.unwrap_or(DEFAULT_BUDGET), threads };
    let colouring_or = |default: &str| Colouring::parse(a.colouring.as_deref().unwrap_or(default));
    let cert: Certificate = match claim {
        Claim::Thm41 => delta_descent_check(need(a.kappa, claim, "kappa")?, need(a.max_set, claim, "max-set")?, cfg)?,
        Claim::Thm32 => {
            let dim = need(a.dim, claim, "dim")?;
            let bound = need(a.bound, claim, "bound")?;
            let n = need(a.n, claim, "n")?;
            let domain = Domain::nonzero(&GroupSpec::int_box(bound, dim)?)?;
            find_monochromatic_fs("thm3.2", &Colouring::SumSquares, &domain, n, cfg)?
        }
        Claim::Lemma31 => no_seven_norms(need(a.dim, claim, "dim")?, need(a.bound, claim, "bound")?, cfg)?,
        Claim::Thm54 => {
            let spec = group_arg(need_str(&a.group, claim, "group")?, inputs)?;
            find_monochromatic_ap(&colouring_or("product_sigma")?, &spec, cfg)?
        }
        Claim::Thm55 => {
            let spec = group_arg(need_str(&a.group, claim, "group")?, inputs)?;
            find_monochromatic_subgroup(&colouring_or("subgroup_parity")?, &spec, a.all_subgroups, cfg)?
        }
        Claim::Thm56 => find_monochromatic_span(
            need(a.prime, claim, "prime")?,
            need(a.dim, claim, "dim")?,
            need(a.bound, claim, "bound")?,
            cfg,
        )?,
        Claim::Thm23 => {
            let modulus = need(a.modulus, claim, "modulus")?;
            let dim = need(a.dim, claim, "dim")?;
            let kappa = need(a.kappa, claim, "kappa")?;
            let c: Box<dyn ColourMap> = match (&a.colouring, a.seed, a.colours) {
                (Some(id), None, None) => Box::new(Colouring::parse(id)?),
                (None, Some(seed), Some(k)) => Box::new(Colouring::parse(&format!("random:seed={seed},colours={k}"))?),
                _ => return usage("--claim thm2.3 requires either --colouring or both --seed and --colours"),
            };
            if modulus < 2 {
                return usage("--modulus must be at least 2");
            }
            let spec = GroupSpec::cyclic_power(modulus, dim)?;
            check_fs_matrix_identities(c.as_ref(), &spec.standard_basis(), &MatrixSplit::contiguous(kappa))?
        }
        Claim::Thm51Shadow => {
            let spec = group_arg(need_str(&a.group, claim, "group")?, inputs)?;
            let set = match json_arg(need_str(&a.set, claim, "set")?, inputs)? {
                Value::Array(items) => items
                    .iter()
                    .map(|v| spec.element_from_json(v))
                    .collect::<Result<Vec<Element>, _>>()?,
                _ => return Err(CliError::Data("--set must be a JSON list of elements".into())),
            };
            fs_support_growth_check(&set)?
        }
    };
    let code = match cert.status {
        CertStatus::Verified => 0,
        CertStatus::Counterexample => 1,
        CertStatus::Inconclusive => 2,
    };
    let mut config = given;
    config.insert("claim".into(), claim.id().into());
    let manifest = RunManifest::new("verify", Value::Object(config), json!({"enumerated": cert.enumerated}));
    Ok(Report { doc: cert.to_json(), manifest, code, stdout: None })
}

/// Without `--group`, an integer vector is read in `Z^len`, or in
/// `(Z/2)^len` for the delta colouring.
fn default_group(id: &Colouring, v: &Value) -> Result<Arc<GroupSpec>, CliError> {
    let Value::Array(items) = v else {
        return Err(CliError::Data("--element must be a JSON list".into()));
    };
    let ints = items
        .iter()
        .map(|x| x.as_i64().ok_or_else(|| CliError::Data(format!("{x} is not an integer; pass --group"))))
        .collect::<Result<Vec<i64>, _>>()?;
    let spec = match id {
        Colouring::Delta => GroupSpec::cyclic_power(2, ints.len())?,
        _ => {
            let bound = ints.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0).max(1);
            GroupSpec::int_box(bound, ints.len())?
        }
    };
    Ok(spec)
}

fn cmd_colour(a: &ColourArgs, inputs: &mut Vec<String>) -> Result<Report, CliError> {
    let c = Colouring::parse(&a.id)?;
    let mut config = json!({"id": a.id});
    let token = if let Some(raw) = &a.branches {
        if c != Colouring::Delta {
            return usage("--branches applies only to --id delta");
        }
        config["branches"] = raw.clone().into();
        let items: Vec<String> = serde_json::from_value(json_arg(raw, inputs)?)
            .map_err(|e| CliError::Data(format!("--branches must be a list of strings: {e}")))?;
        delta_colouring(&BranchSet::parse(&items)?)
    } else {
        let raw = a.element.as_deref().expect("clap requires --element or --branches");
        config["element"] = raw.into();
        let v = json_arg(raw, inputs)?;
        let spec = match &a.group {
            Some(g) => {
                config["group"] = g.clone().into();
                group_arg(g, inputs)?
            }
            None => default_group(&c, &v)?,
        };
        c.colour(&spec.element_from_json(&v)?)?
    };
    let stdout = token.to_canonical_json();
    let manifest = RunManifest::new("colour", config, json!({}));
    Ok(Report { doc: json!({"token": token.to_json()}), manifest, code: 0, stdout: Some(stdout) })
}

pub const WORKLOADS: &[&str] =
    &["search-n3-m2", "search-n4-m2", "search-n3-m3", "search-n3-m0", "thm4.1-k3", "lemma3.1-d3"];

/// Runs one workload and returns the number of nodes or enumerated items.
fn run_workload(name: &str, threads: usize) -> Result<u64, CliError> {
    let searched = |n: usize, m: u64, l_max: usize, bound: Option<u64>| -> Result<u64, CliError> {
        let mut cfg = SearchConfig::new(n, m, l_max);
        cfg.entry_bound = bound;
        cfg.threads = threads;
        Ok(search(&cfg)?.nodes)
    };
    let cfg = VerifyConfig { threads, ..VerifyConfig::default() };
    match name {
        "search-n3-m2" => searched(3, 2, 8, None),
        "search-n4-m2" => searched(4, 2, 16, None),
        "search-n3-m3" => searched(3, 3, 9, None),
        "search-n3-m0" => searched(3, 0, 4, Some(2)),
        "thm4.1-k3" => Ok(delta_descent_check(3, 3, cfg)?.enumerated),
        "lemma3.1-d3" => Ok(no_seven_norms(3, 3, cfg)?.enumerated),
        _ => usage(format!("unknown workload {name:?}; known: {}", WORKLOADS.join(", "))),
    }
}

fn cmd_bench(a: &BenchArgs, threads: usize) -> Result<Report, CliError> {
    if !WORKLOADS.contains(&a.workload.as_str()) {
        return usage(format!("unknown workload {:?}; known: {}", a.workload, WORKLOADS.join(", ")));
    }
    let mut runs = Vec::with_capacity(a.repeat as usize);
    let mut nodes = 0;
    for _ in 0..a.repeat {
        let start = Instant::now();
        nodes = run_workload(&a.workload, threads)?;
        runs.push(start.elapsed().as_secs_f64());
    }
    let mean = runs.iter().sum::<f64>() / runs.len() as f64;
    let doc = json!({
        "workload": a.workload,
        "threads": threads,
        "nodes": nodes,
        "wall_seconds": runs,
        "mean_seconds": mean,
        "nodes_per_second": if mean > 0.0 { nodes as f64 / mean } else { 0.0 },
    });
    eprintln!("{}: {nodes} nodes, {mean:.3} s mean over {} run(s)", a.workload, a.repeat);
    let config = json!({"workload": a.workload, "repeat": a.repeat});
    Ok(Report { doc, manifest: RunManifest::new("bench", config, json!({"nodes": nodes})), code: 0, stdout: None })
}
