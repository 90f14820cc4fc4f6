use std::time::Instant;

use clap::ValueEnum;
use serde_json::{json, Map, Value};

use core_ideals::engine::{
    self, adjoint_colon, check_conjecture, check_inclusion_chain, check_stabilization, kn_general,
    ln_from_kn, CoreParams, DEFAULT_T_MAX, DEFAULT_WINDOW,
};
use core_ideals::reductions::{
    general_minimal_reduction, reduction_number, s_invariant, stream, DEFAULT_N_MAX,
    DEFAULT_REPEATS, DEFAULT_SEED,
};
use core_ideals::{Error, ErrorClass, GeneralElementConfig, Ideal};

use crate::spec::SpecFile;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Core,
    Kn,
    Ln,
    Adjoint,
    Rednum,
    S,
    CheckChain,
    CheckConjecture,
    CheckStabilization,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Core => "core",
            Command::Kn => "kn",
            Command::Ln => "ln",
            Command::Adjoint => "adjoint",
            Command::Rednum => "rednum",
            Command::S => "s",
            Command::CheckChain => "check-chain",
            Command::CheckConjecture => "check-conjecture",
            Command::CheckStabilization => "check-stabilization",
        }
    }
}

/// Command-line overrides; unset values fall back to the spec file, then
/// to the built-in defaults.
#[derive(Clone, Debug, Default)]
pub struct Flags {
    pub n: Option<usize>,
    pub seed: Option<u64>,
    pub repeats: Option<usize>,
    pub window: Option<usize>,
    pub t_max: Option<usize>,
    pub n_max: Option<usize>,
    /// Generators of J.
    pub j: Option<String>,
    /// Name of the ideal to work on.
    pub ideal: Option<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Spec { path: String, source: Error },
    #[error("{0}")]
    Engine(#[from] Error),
}

impl CliError {
    /// 1 usage or parse error, 2 theorem violation, 3 genericity failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Engine(e) => match e.class() {
                ErrorClass::Usage => 1,
                ErrorClass::TheoremViolation => 2,
                ErrorClass::Genericity => 3,
            },
            _ => 1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: Command,
    pub ring: String,
    pub ideal_name: String,
    pub ideal: Vec<String>,
    pub seed: u64,
    pub field_size: u64,
    /// Result ideals as reduced Gröbner bases.
    pub results: Vec<(String, Vec<String>)>,
    pub verdicts: Vec<(String, Value)>,
    pub genericity_log: Vec<String>,
    pub timing_ms: u128,
}

impl Report {
    /// Human-readable form; identical inputs give identical text.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("ring: {}\n", self.ring));
        out.push_str(&format!("ideal {}: ({})\n", self.ideal_name, self.ideal.join(", ")));
        out.push_str(&format!("command: {}\n", self.command.name()));
        out.push_str(&format!("seed: {}\n", self.seed));
        for (name, gens) in &self.results {
            out.push_str(&format!("{name}:\n"));
            for g in gens {
                out.push_str(&format!("  {g}\n"));
            }
        }
        if !self.verdicts.is_empty() {
            out.push_str("verdicts:\n");
            for (k, v) in &self.verdicts {
                match v {
                    Value::String(s) => out.push_str(&format!("  {k} = {s}\n")),
                    v => out.push_str(&format!("  {k} = {v}\n")),
                }
            }
        }
        if !self.genericity_log.is_empty() {
            out.push_str("log:\n");
            for l in &self.genericity_log {
                out.push_str(&format!("  {l}\n"));
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let mut results = Map::new();
        for (k, v) in &self.results {
            results.insert(k.clone(), json!(v));
        }
        let mut verdicts = Map::new();
        for (k, v) in &self.verdicts {
            verdicts.insert(k.clone(), v.clone());
        }
        json!({
            "ring": self.ring,
            "ideal": { "name": self.ideal_name, "generators": self.ideal },
            "command": self.command.name(),
            "seed": self.seed,
            "field_size": self.field_size,
            "results": results,
            "verdicts": verdicts,
            "genericity_log": self.genericity_log,
            "timing_ms": self.timing_ms as u64,
        })
    }
}

struct Ctx<'a> {
    spec: &'a SpecFile,
    i: &'a Ideal,
    params: CoreParams,
    n: Option<usize>,
    j_text: Option<&'a str>,
    results: Vec<(String, Vec<String>)>,
    verdicts: Vec<(String, Value)>,
    log: Vec<String>,
}

impl Ctx<'_> {
    fn result(&mut self, name: impl Into<String>, ideal: &Ideal) -> Result<(), Error> {
        self.results.push((name.into(), ideal.basis_strings()?));
        Ok(())
    }

    fn verdict(&mut self, name: &str, v: impl Into<Value>) {
        self.verdicts.push((name.to_string(), v.into()));
    }

    /// J from --J, else the spec's ideal `J`, else a general minimal reduction.
    fn reduction(&mut self) -> Result<Ideal, Error> {
        let j = if let Some(text) = self.j_text {
            let ring = self.spec.ring.clone();
            Ideal::new(ring.clone(), ring.parse_polys(text)?)?
        } else if let Some(j) = self.spec.ideal("J") {
            j.clone()
        } else {
            let d = general_minimal_reduction(self.i, &self.params.cfg, &[stream::REDUCTION])?;
            self.log.push(format!(
                "J drawn as a general minimal reduction ({} generators, r_J(I) = {})",
                d.lambdas.len(),
                d.r
            ));
            if d.rejected > 0 {
                self.log.push(format!("{} sample(s) rejected as non-reductions", d.rejected));
            }
            if d.localized {
                self.log.push("sampled reduction cut down to its m-primary component".into());
            }
            d.j
        };
        if !self.i.contains_ideal(&j)? {
            return Err(Error::NotContained);
        }
        Ok(j)
    }

    /// --n, else s for the given reduction.
    fn n_for(&mut self, j: &Ideal) -> Result<usize, Error> {
        match self.n {
            Some(0) => Err(Error::InvalidArgument("n must be positive".into())),
            Some(n) => Ok(n),
            None => {
                let s = s_invariant(self.i, j, &self.params.cfg, &[stream::S_INVARIANT])?;
                self.log.push(format!("n defaulted to s = {s}"));
                Ok(s)
            }
        }
    }

    fn run(&mut self, cmd: Command) -> Result<(), Error> {
        let i = self.i;
        let cfg = self.params.cfg.clone();
        let t_max = self.params.t_max;
        match cmd {
            Command::Core => {
                let report = engine::core(i, self.n.unwrap_or(0), &self.params)?;
                self.result("core", &report.core)?;
                self.result("J_1", &report.reductions[0].j)?;
                let first = &report.bounds[0];
                self.verdict("n", report.n);
                self.verdict("s", report.s);
                self.verdict("analytic_spread", report.ell);
                self.verdict("height", report.height);
                self.verdict("reductions_used", report.reductions.len());
                self.verdict("certification", report.certification());
                self.verdict("lower_strict", first.lower_strict);
                self.verdict("upper_strict", first.upper_strict);
                self.verdict("bounds_guaranteed", first.guaranteed);
                self.log.extend(report.log);
            }
            Command::Kn => {
                let j = self.reduction()?;
                let n = self.n_for(&j)?;
                let k = kn_general(&j, i, n, &cfg, &[stream::KN], t_max)?;
                self.result("J", &j)?;
                self.result("K_n", &k.kn)?;
                self.verdict("n", n);
                self.verdict("elements_used", k.elements_used);
                self.verdict("equals_I^n", k.kn.equals(&i.power(n as u32)?)?);
                self.log.push(format!("K_n agreed across {} independent runs", cfg.repeats));
            }
            Command::Ln => {
                let j = self.reduction()?;
                let n = self.n_for(&j)?;
                let k = kn_general(&j, i, n, &cfg, &[stream::KN], t_max)?;
                let l = ln_from_kn(&j, &k.kn, n)?;
                self.result("J", &j)?;
                self.result("L_n", &l)?;
                self.verdict("n", n);
                self.log.push(format!("K_n agreed across {} independent runs", cfg.repeats));
            }
            Command::Adjoint => {
                let j = self.reduction()?;
                let n = self.n_for(&j)?;
                let a = adjoint_colon(&j, i, n)?;
                self.result("J", &j)?;
                self.result("J^(n+1):I^n", &a)?;
                self.verdict("n", n);
            }
            Command::Rednum => {
                let j = self.reduction()?;
                let r = reduction_number(&j, i, cfg.n_max)?;
                self.result("J", &j)?;
                self.verdict("r", r);
            }
            Command::S => {
                let j = self.reduction()?;
                let s = s_invariant(i, &j, &cfg, &[stream::S_INVARIANT])?;
                self.result("J", &j)?;
                self.verdict("s", s);
                self.log.push(format!("s agreed across {} sampled elements", cfg.repeats));
            }
            Command::CheckChain => {
                let v = check_inclusion_chain(i, self.n.unwrap_or(0), &self.params)?;
                self.result("J^(n+1):I^n", &v.lower)?;
                self.result("core", &v.core)?;
                self.result("L_n", &v.upper)?;
                self.verdict("n", v.n);
                self.verdict("r", v.r);
                self.verdict("analytic_spread", v.ell);
                self.verdict("height", v.height);
                self.verdict("threshold", v.threshold);
                self.verdict("lower_contained", v.lower_contained);
                self.verdict("upper_contained", v.upper_contained);
                self.verdict("lower_strict", v.lower_strict);
                self.verdict("upper_strict", v.upper_strict);
            }
            Command::CheckConjecture => {
                let v = check_conjecture(i, self.n.unwrap_or(0), &self.params)?;
                self.result("core", &v.core)?;
                for (k, p) in v.partial.iter().enumerate() {
                    self.result(format!("intersection_{}", k + 1), p)?;
                }
                self.verdict("n", v.n);
                self.verdict("analytic_spread", v.ell);
                self.verdict("equal", v.equal.clone());
                self.verdict("holds", v.equal.last().copied().unwrap_or(false));
                self.log.push(format!("verdicts agreed across {} independent runs", cfg.repeats));
            }
            Command::CheckStabilization => {
                let j = self.reduction()?;
                let v = check_stabilization(&j, i, &self.params)?;
                self.result("J", &j)?;
                for (n, k) in &v.kn {
                    self.result(format!("K_{n}"), k)?;
                }
                self.result(format!("L_{}", v.ln[0].0), &v.ln[0].1)?;
                self.result("J^(n+1):I^n", &v.adjoint)?;
                self.verdict("s", v.s);
                self.verdict("r", v.r);
                self.verdict("checked_n", v.ln.iter().map(|(n, _)| *n).collect::<Vec<_>>());
                self.verdict("adjoint_from", v.adjoint_from);
                self.verdict("stable", true);
            }
        }
        Ok(())
    }
}

/// Runs one command on the ideal selected by `flags.ideal` (default `I`, or
/// the only ideal in the spec).
pub fn run_command(cmd: Command, spec: &SpecFile, flags: &Flags) -> Result<Report, CliError> {
    let start = Instant::now();
    let (name, i) = match &flags.ideal {
        Some(name) => match spec.ideal(name) {
            Some(i) => (name.clone(), i),
            None => return Err(CliError::Usage(format!("no ideal named {name:?}"))),
        },
        None => match (spec.ideal("I"), spec.ideals.as_slice()) {
            (Some(i), _) => ("I".to_string(), i),
            (None, [(n, i)]) => (n.clone(), i),
            _ => return Err(CliError::Usage("several ideals given; choose one with --ideal".into())),
        },
    };
    let o = &spec.options;
    let seed = flags.seed.or(o.seed).unwrap_or(DEFAULT_SEED);
    let cfg = GeneralElementConfig {
        seed,
        repeats: flags.repeats.or(o.repeats).unwrap_or(DEFAULT_REPEATS),
        n_max: flags.n_max.or(o.n_max).unwrap_or(DEFAULT_N_MAX),
        ..Default::default()
    };
    cfg.validate()?;
    let window = flags.window.or(o.window).unwrap_or(DEFAULT_WINDOW);
    if window == 0 {
        return Err(CliError::Usage("window must be positive".into()));
    }
    let params = CoreParams {
        cfg,
        window,
        t_max: flags.t_max.or(o.t_max).unwrap_or(DEFAULT_T_MAX),
    };
    let ring = &spec.ring;
    let mut ctx = Ctx {
        spec,
        i,
        params,
        n: flags.n.or(o.n),
        j_text: flags.j.as_deref(),
        results: Vec::new(),
        verdicts: Vec::new(),
        log: Vec::new(),
    };
    if ring.field().size() < ctx.params.cfg.field_floor {
        ctx.log.push(format!(
            "field has {} elements; general choices may fail",
            ring.field().size()
        ));
    }
    ctx.run(cmd)?;
    Ok(Report {
        command: cmd,
        ring: ring.describe(),
        ideal_name: name,
        ideal: i.gens().iter().map(|g| ring.format(g)).collect(),
        seed,
        field_size: ring.field().size(),
        results: ctx.results,
        verdicts: ctx.verdicts,
        genericity_log: ctx.log,
        timing_ms: start.elapsed().as_millis(),
    })
}

/// Reads and parses a spec file.
pub fn load_spec(path: &str, field_ext: Option<u32>) -> Result<SpecFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_string(),
        source,
    })?;
    SpecFile::parse_with(&text, field_ext).map_err(|source| CliError::Spec {
        path: path.to_string(),
        source,
    })
}
