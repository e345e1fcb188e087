//! Command-line front end: argument parsing, job configuration, the
//! subcommands and their JSON or CSV output.

use crate::abelian::Character;
use crate::arith::is_prime_u64;
use crate::classgroup::RayClassGroup;
use crate::const_terms::{ConstTermError, ConstTermSpace};
use crate::cusps::{CuspError, CuspSet, CuspSpace};
use crate::cyclotomic::Cyclo;
use crate::field::{FieldElement, RealQuadraticField};
use crate::hecke::{character_sign, compatible_characters, is_admissible_weight, kernel_witnesses};
use crate::ideal::{int_elem, primes_up_to_norm, FractionalIdeal, IdealError};
use crate::rigidity::{is_good_prime, level_report, RigidityError};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::panic::{catch_unwind, AssertUnwindSafe};

pub const SCHEMA_VERSION: &str = "v1";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid ideal: {0}")]
    BadIdeal(String),
    #[error("invalid field: {0}")]
    BadField(String),
    #[error("character parity does not match the weight")]
    ParityMismatch,
    #[error("internal error: {0}")]
    Internal(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::BadIdeal(_) => 2,
            CliError::ParityMismatch => 3,
            CliError::Internal(_) => 4,
            CliError::BadField(_) | CliError::Invalid(_) => 1,
        }
    }
}

impl From<IdealError> for CliError {
    fn from(e: IdealError) -> Self {
        CliError::BadIdeal(e.to_string())
    }
}

impl From<CuspError> for CliError {
    fn from(e: CuspError) -> Self {
        CliError::Internal(e.to_string())
    }
}

impl From<ConstTermError> for CliError {
    fn from(e: ConstTermError) -> Self {
        match e {
            ConstTermError::ParityMismatch => CliError::ParityMismatch,
            ConstTermError::Inadmissible(_) | ConstTermError::OddWeight => CliError::Invalid(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<RigidityError> for CliError {
    fn from(e: RigidityError) -> Self {
        match e {
            RigidityError::NotIntegral => CliError::BadIdeal(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "cusp-forge", version, about = "Cusps, constant terms and rigidity data for Hilbert modular varieties over real quadratic fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for randomized checks.
    #[arg(long, global = true, env = "CUSP_FORGE_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args, Clone)]
pub struct LevelArgs {
    /// Squarefree D > 1 with F = Q(sqrt D).
    #[arg(long)]
    pub field: i64,
    /// Level ideal: "(g)", "(a, x+y*w)" or "hnf:[[a,b],[0,c]]/d".
    #[arg(long, default_value = "(1)")]
    pub modulus: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Field invariants: discriminant, fundamental unit, different, class numbers.
    Field {
        #[arg(long)]
        field: i64,
    },
    /// Ray class group of the modulus, wide or narrow.
    Classgroup {
        #[command(flatten)]
        level: LevelArgs,
        #[arg(long)]
        narrow: bool,
    },
    /// Admissibility of a weight and the compatible nebentypus characters.
    Hecke {
        #[command(flatten)]
        level: LevelArgs,
        #[arg(long)]
        weight: i64,
    },
    /// Cusps of level Gamma_1(n) with their invariants.
    Cusps {
        #[command(flatten)]
        level: LevelArgs,
        #[arg(long)]
        weight: Option<i64>,
        /// Restrict to p-unramified cusps.
        #[arg(long)]
        p: Option<u64>,
    },
    /// The constant-term vector B at the p-unramified cusps.
    ConstantTerm {
        #[command(flatten)]
        level: LevelArgs,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        weight: i64,
        /// Index of a character of the narrow ray class group.
        #[arg(long, conflicts_with = "trivial_psi")]
        character: Option<usize>,
        #[arg(long)]
        trivial_psi: bool,
        /// Also list q-expansion indices of trace at most this bound.
        #[arg(long)]
        truncation: Option<i64>,
    },
    /// Rigidity criteria, inertia bound and good primes of a level.
    Rigidity {
        #[command(flatten)]
        level: LevelArgs,
        #[arg(long)]
        p: Option<u64>,
    },
    /// Runs the invariant suite on one level.
    Check {
        #[command(flatten)]
        level: LevelArgs,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, default_value_t = 2)]
        weight: i64,
        /// Random cases per randomized check.
        #[arg(long, default_value_t = 20)]
        cases: usize,
    },
}

/// Everything a job depends on; echoed in every output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobConfig {
    pub subcommand: String,
    pub field: i64,
    pub modulus: String,
    pub p: Option<u64>,
    pub weight: Option<i64>,
    pub character: Option<usize>,
    pub trivial_psi: bool,
    pub narrow: bool,
    pub truncation: Option<i64>,
    pub cases: Option<usize>,
    pub format: Format,
    pub seed: u64,
}

impl JobConfig {
    fn base(subcommand: &str, field: i64, modulus: &str, cli: &Cli) -> Self {
        JobConfig {
            subcommand: subcommand.to_string(),
            field,
            modulus: modulus.to_string(),
            p: None,
            weight: None,
            character: None,
            trivial_psi: false,
            narrow: false,
            truncation: None,
            cases: None,
            format: cli.format,
            seed: cli.seed,
        }
    }

    pub fn from_cli(cli: &Cli) -> Self {
        match &cli.command {
            Command::Field { field } => Self::base("field", *field, "(1)", cli),
            Command::Classgroup { level, narrow } => JobConfig { narrow: *narrow, ..Self::base("classgroup", level.field, &level.modulus, cli) },
            Command::Hecke { level, weight } => JobConfig { weight: Some(*weight), ..Self::base("hecke", level.field, &level.modulus, cli) },
            Command::Cusps { level, weight, p } => JobConfig { weight: *weight, p: *p, ..Self::base("cusps", level.field, &level.modulus, cli) },
            Command::ConstantTerm { level, p, weight, character, trivial_psi, truncation } => JobConfig {
                p: Some(*p),
                weight: Some(*weight),
                character: *character,
                trivial_psi: *trivial_psi,
                truncation: *truncation,
                ..Self::base("constant-term", level.field, &level.modulus, cli)
            },
            Command::Rigidity { level, p } => JobConfig { p: *p, ..Self::base("rigidity", level.field, &level.modulus, cli) },
            Command::Check { level, p, weight, cases } => JobConfig {
                p: *p,
                weight: Some(*weight),
                cases: Some(*cases),
                ..Self::base("check", level.field, &level.modulus, cli)
            },
        }
    }
}

/// Parses `x`, `y*w`, `w` and signed sums of such terms with integer
/// coefficients.
pub fn parse_element(s: &str) -> Option<FieldElement> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    let mut x = 0i64;
    let mut y = 0i64;
    let mut rest = s.as_str();
    let mut first = true;
    while !rest.is_empty() {
        let (sign, body) = match rest.as_bytes()[0] {
            b'+' if !first => (1, &rest[1..]),
            b'-' => (-1, &rest[1..]),
            _ if first => (1, rest),
            _ => return None,
        };
        first = false;
        if body.is_empty() || body.starts_with(['+', '-']) {
            return None;
        }
        let end = body[1..].find(['+', '-']).map(|i| i + 1).unwrap_or(body.len());
        let term = &body[..end];
        rest = &body[end..];
        if let Some(coef) = term.strip_suffix("*w") {
            y = y.checked_add(sign * coef.parse::<i64>().ok()?)?;
        } else if term == "w" {
            y += sign;
        } else {
            x = x.checked_add(sign * term.parse::<i64>().ok()?)?;
        }
    }
    Some(FieldElement::from_ints(x, y))
}

/// Parses the ideal grammar `(g)`, `(g1, g2, ...)` or `hnf:[[a,b],[0,c]]/d`.
pub fn parse_ideal(f: &RealQuadraticField, s: &str) -> Result<FractionalIdeal, CliError> {
    let t = s.trim();
    if t.starts_with("hnf:") {
        let i = FractionalIdeal::parse_hnf(t).ok_or_else(|| CliError::BadIdeal(s.to_string()))?;
        if !i.is_o_stable(f) {
            return Err(CliError::BadIdeal(format!("{s} is not an O_F-module")));
        }
        return Ok(i);
    }
    let inner = t
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| CliError::BadIdeal(s.to_string()))?;
    let gens: Vec<FieldElement> =
        inner.split(',').map(parse_element).collect::<Option<Vec<_>>>().ok_or_else(|| CliError::BadIdeal(s.to_string()))?;
    FractionalIdeal::from_generators(f, &gens).map_err(|e| CliError::BadIdeal(format!("{s}: {e}")))
}

fn field_of(d: i64) -> Result<RealQuadraticField, CliError> {
    RealQuadraticField::new(d).map_err(|e| CliError::BadField(e.to_string()))
}

fn level_of(f: &RealQuadraticField, s: &str) -> Result<FractionalIdeal, CliError> {
    let n = parse_ideal(f, s)?;
    if !n.is_integral() {
        return Err(CliError::BadIdeal(format!("{s} is not integral")));
    }
    Ok(n)
}

fn check_prime(p: u64) -> Result<(), CliError> {
    if is_prime_u64(p) {
        Ok(())
    } else {
        Err(CliError::Invalid(format!("{p} is not prime")))
    }
}

fn cyclo_json(c: &Cyclo) -> Value {
    Value::String(c.display())
}

fn character_json(g: &RayClassGroup, chi: &Character, k: Option<i64>) -> Value {
    let values: Vec<String> = (0..g.group.invariants.len())
        .map(|i| {
            let mut e = g.group.zero();
            e[i] = 1;
            let z = chi.eval(&e);
            format!("{}/{}", z.exp, z.order)
        })
        .collect();
    let mut v = json!({
        "index": chi.index(),
        "order": chi.order(),
        "values_on_generators": values,
        "sign": character_sign(g, chi),
    });
    if let Some(k) = k {
        v["compatible"] = json!(compatible_characters(g, k).contains(chi));
    }
    v
}

fn run_field(d: i64) -> Result<Value, CliError> {
    let f = field_of(d)?;
    let one = FractionalIdeal::unit();
    let wide = RayClassGroup::new(&f, &one, false)?;
    let narrow = RayClassGroup::new(&f, &one, true)?;
    Ok(json!({
        "d": f.d,
        "discriminant": f.disc,
        "omega_min_poly": format!("w^2 - {}*w - {}", f.t, f.s),
        "fundamental_unit": f.fund_unit.to_string(),
        "fundamental_unit_norm": f.unit_norm(),
        "totally_positive_unit": f.positive_unit().to_string(),
        "different": crate::ideal::different(&f).to_string(),
        "class_number": wide.order(),
        "narrow_class_number": narrow.order(),
    }))
}

fn run_classgroup(cfg: &JobConfig) -> Result<Value, CliError> {
    let f = field_of(cfg.field)?;
    let n = level_of(&f, &cfg.modulus)?;
    let g = RayClassGroup::new(&f, &n, cfg.narrow)?;
    Ok(json!({
        "modulus": n.to_string(),
        "narrow": cfg.narrow,
        "invariant_factors": g.group.invariants,
        "order": g.order(),
        "generators": g.gens.iter().map(|i| i.to_string()).collect::<Vec<_>>(),
    }))
}

fn run_hecke(cfg: &JobConfig) -> Result<Value, CliError> {
    let f = field_of(cfg.field)?;
    let n = level_of(&f, &cfg.modulus)?;
    let k = cfg.weight.unwrap_or(2);
    let g = RayClassGroup::new(&f, &n, true)?;
    let chars: Vec<Value> = g.characters().iter().map(|c| character_json(&g, c, Some(k))).collect();
    let compatible: Vec<usize> = compatible_characters(&g, k).iter().map(|c| c.index()).collect();
    Ok(json!({
        "modulus": n.to_string(),
        "weight": k,
        "admissible": is_admissible_weight(&g, k),
        "units": g.units,
        "kernel_witnesses": kernel_witnesses(&g),
        "invariant_factors": g.group.invariants,
        "characters": chars,
        "compatible": compatible,
    }))
}

fn run_cusps(cfg: &JobConfig) -> Result<Value, CliError> {
    let f = field_of(cfg.field)?;
    let n = level_of(&f, &cfg.modulus)?;
    let space = CuspSpace::new(&f, &n)?;
    let cusps = match cfg.p {
        Some(p) => {
            check_prime(p)?;
            space.p_unramified_cusps(p)
        }
        None => space.all_cusps(),
    };
    let list: Vec<Value> = cusps
        .iter()
        .map(|c| {
            let mut v = json!({
                "key": c.key,
                "component": c.component,
                "a": c.data.a.to_string(),
                "b": c.data.b.to_string(),
                "m": c.data.m.to_string(),
                "gamma": c.rep.gamma.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
                "line": c.rep.line.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
                "u_c_exponent": c.uc_exp,
                "eps_c_order": c.eps_order,
                "unramified": c.unramified,
            });
            if let Some(k) = cfg.weight {
                v["admissible"] = json!(c.is_admissible(k));
            }
            v
        })
        .collect();
    let unramified = cusps.iter().filter(|c| c.unramified).count();
    Ok(json!({
        "modulus": n.to_string(),
        "count": cusps.len(),
        "unramified_count": unramified,
        "components": space.t_lambda.len(),
        "cusps": list,
    }))
}

fn selected_characters(cts: &ConstTermSpace, cfg: &JobConfig) -> Result<Vec<usize>, CliError> {
    let all = cts.space.narrow.characters();
    let pick = |chi: &Character| cts.ring.chars.iter().position(|c| c == chi).ok_or(CliError::ParityMismatch);
    if cfg.trivial_psi {
        let triv = all.iter().find(|c| c.is_trivial()).expect("trivial character");
        return Ok(vec![pick(triv)?]);
    }
    if let Some(i) = cfg.character {
        let chi = all.get(i).ok_or_else(|| CliError::Invalid(format!("no character with index {i}")))?;
        return Ok(vec![pick(chi)?]);
    }
    Ok((0..cts.ring.chars.len()).collect())
}

fn run_constant_term(cfg: &JobConfig) -> Result<Value, CliError> {
    let f = field_of(cfg.field)?;
    let n = level_of(&f, &cfg.modulus)?;
    let p = cfg.p.ok_or_else(|| CliError::Invalid("--p is required".into()))?;
    check_prime(p)?;
    let k = cfg.weight.ok_or_else(|| CliError::Invalid("--weight is required".into()))?;
    let cts = ConstTermSpace::new(&f, &n, p, k)?;
    if cts.ring.chars.is_empty() {
        return Err(CliError::ParityMismatch);
    }
    let sel = selected_characters(&cts, cfg)?;
    let b = cts.build_b()?;
    let gens: Vec<_> = (0..cts.group().invariants.len())
        .map(|i| {
            let mut e = cts.group().zero();
            e[i] = 1;
            e
        })
        .collect();
    let isotypic = cts.is_psi_isotypic(&b, &gens);
    let mut chars = Vec::new();
    for ci in sel {
        let chi = &cts.ring.chars[ci];
        let entries: Vec<Value> = cts
            .set
            .cusps
            .iter()
            .zip(&b[ci].entries)
            .map(|(c, e)| json!({"key": c.key, "entry": e.as_ref().map(cyclo_json)}))
            .collect();
        // normalized entries at the standard cusps C_lambda
        let normalized: Vec<Value> = (0..cts.space.t_lambda.len())
            .map(|lambda| {
                let (e, ideal) = cts.normalized_entry(&b[ci], &crate::lattice::mat_identity(), lambda)?;
                Ok(json!({"lambda": lambda, "ideal": ideal.to_string(), "entry": e.as_ref().map(cyclo_json)}))
            })
            .collect::<Result<_, CliError>>()?;
        chars.push(json!({
            "character": character_json(&cts.space.narrow, chi, None),
            "entries": entries,
            "normalized": normalized,
        }));
    }
    let mut out = json!({
        "modulus": n.to_string(),
        "p": p,
        "weight": k,
        "group_order": cts.ring.order(),
        "cyclotomic_order": cts.ring.m,
        "cusp_count": cts.set.len(),
        "psi_isotypic": isotypic,
        "characters": chars,
    });
    if let Some(t) = cfg.truncation {
        let idx: Vec<Value> = (0..cts.set.len())
            .map(|i| {
                let q = cts.truncated(i, t, |_| Cyclo::zero(1));
                json!({"cusp": i, "indices": q.indices.iter().map(|b| b.to_string()).collect::<Vec<_>>()})
            })
            .collect();
        out["q_indices"] = Value::Array(idx);
    }
    Ok(out)
}

fn run_rigidity(cfg: &JobConfig) -> Result<Value, CliError> {
    let f = field_of(cfg.field)?;
    let n = level_of(&f, &cfg.modulus)?;
    let mut out = serde_json::to_value(level_report(&f, &n)?).map_err(|e| CliError::Internal(e.to_string()))?;
    if let Some(p) = cfg.p {
        let v = is_good_prime(&f, &n, p)?;
        out["good_prime"] = serde_json::to_value(v).map_err(|e| CliError::Internal(e.to_string()))?;
    }
    Ok(out)
}

/// One entry of the `check` report.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, body: impl FnOnce() -> Result<String, String>) -> CheckResult {
    let r = catch_unwind(AssertUnwindSafe(body));
    let (passed, detail) = match r {
        Ok(Ok(d)) => (true, d),
        Ok(Err(d)) => (false, d),
        Err(e) => (false, e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default()),
    };
    CheckResult { name: name.to_string(), passed, detail }
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn default_prime(n: &FractionalIdeal) -> u64 {
    let norm = n.norm().to_integer().to_u64().unwrap_or(1);
    (3..).find(|&p| is_prime_u64(p) && norm % p != 0).unwrap()
}

/// A random integral ideal coprime to `avoid`, a product of one or two
/// small primes.
fn random_ideal(f: &RealQuadraticField, avoid: &FractionalIdeal, rng: &mut ChaCha8Rng) -> FractionalIdeal {
    let primes: Vec<FractionalIdeal> =
        primes_up_to_norm(f, 60).into_iter().map(|q| q.ideal).filter(|q| q.is_coprime(f, avoid)).collect();
    let mut out = primes[rng.gen_range(0..primes.len())].clone();
    if rng.gen_bool(0.5) {
        out = out.mul(f, &primes[rng.gen_range(0..primes.len())]);
    }
    out
}

/// A totally positive `alpha = 1 mod n` with `(alpha)` coprime to `avoid`.
fn random_trivial_element(f: &RealQuadraticField, n: &FractionalIdeal, avoid: &FractionalIdeal, rng: &mut ChaCha8Rng) -> FieldElement {
    let [b0, b1] = n.basis();
    loop {
        let nu = b0.scale(&crate::field::rat(rng.gen_range(-4..=4))).add(&b1.scale(&crate::field::rat(rng.gen_range(-4..=4))));
        let a = FieldElement::one().add(&nu);
        if a.is_zero() {
            continue;
        }
        let a2 = f.mul(&a, &a);
        if FractionalIdeal::principal(f, &a2).unwrap().is_coprime(f, avoid) {
            return a2;
        }
    }
}

/// The invariant suite behind the `check` subcommand.
pub fn run_checks(cfg: &JobConfig) -> Result<Vec<CheckResult>, CliError> {
    let f = field_of(cfg.field)?;
    let n = level_of(&f, &cfg.modulus)?;
    let p = cfg.p.unwrap_or_else(|| default_prime(&n));
    check_prime(p)?;
    let k = cfg.weight.unwrap_or(2);
    let cases = cfg.cases.unwrap_or(20);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let space = CuspSpace::new(&f, &n)?;
    let pn = n.mul(&f, &FractionalIdeal::from_int(p as i64));
    let mut out = Vec::new();

    out.push(check("fundamental_unit", || {
        let e = &f.fund_unit;
        ensure(num_traits::Signed::abs(&f.norm(e)) == crate::field::rat(1), "norm is not a unit")?;
        ensure(f.gt(e, &FieldElement::one()), "fundamental unit is not > 1")?;
        Ok(e.to_string())
    }));
    out.push(check("class_group_orders", || {
        for g in [&space.narrow, &space.wide] {
            ensure(g.order() == g.predicted_order(), format!("order {} vs exact sequence {}", g.order(), g.predicted_order()))?;
        }
        Ok(format!("narrow {}, wide {}", space.narrow.order(), space.wide.order()))
    }));
    let all = space.all_cusps();
    out.push(check("cusp_representatives", || {
        for c in &all {
            let (key, _) = space.canonicalize(&c.rep).map_err(|e| e.to_string())?;
            ensure(key == c.key, "a representative does not canonicalize to its key")?;
        }
        let by_orbit = space.unramified_by_orbit().map_err(|e| e.to_string())?;
        let unram = space.unramified_cusps().len();
        ensure(by_orbit.len() == unram, format!("{} unramified orbit images vs {} unramified cusps", by_orbit.len(), unram))?;
        Ok(format!("{} cusps, {} unramified", all.len(), unram))
    }));
    out.push(check("diamond_laws", || {
        for _ in 0..cases {
            let c = &all[rng.gen_range(0..all.len())].rep;
            let n1 = random_ideal(&f, &pn, &mut rng);
            let n2 = random_ideal(&f, &pn, &mut rng);
            let key = |l| space.canonicalize(&l).map(|(k, _)| k).map_err(|e: CuspError| e.to_string());
            let direct = key(space.diamond_act(&n1.mul(&f, &n2), c).map_err(|e| e.to_string())?)?;
            let step = space.diamond_act(&n1, c).map_err(|e| e.to_string())?;
            let composed = key(space.diamond_act(&n2, &step).map_err(|e| e.to_string())?)?;
            ensure(direct == composed, "composition law fails")?;
            let id = key(space.diamond_act(&FractionalIdeal::unit(), c).map_err(|e| e.to_string())?)?;
            ensure(id == key(c.clone())?, "identity acts nontrivially")?;
            let alpha = random_trivial_element(&f, &n, &pn, &mut rng);
            let a = FractionalIdeal::principal(&f, &alpha).unwrap();
            let triv = key(space.diamond_act(&a, c).map_err(|e| e.to_string())?)?;
            ensure(triv == key(c.clone())?, format!("principal class ({alpha}) acts nontrivially"))?;
        }
        Ok(format!("{cases} cases"))
    }));
    out.push(check("kernel_acts_trivially", || {
        let set = CuspSet::new(&space, all.clone()).map_err(|e| e.to_string())?;
        ensure(set.kernel_acts_trivially(&space), "narrow kernel moves a cusp")?;
        Ok(format!("{} orbits", set.orbits().len()))
    }));
    let g_narrow = &space.narrow;
    if is_admissible_weight(g_narrow, k) && !compatible_characters(g_narrow, k).is_empty() {
        out.push(check("b_vector", || {
            let cts = ConstTermSpace::new(&f, &n, p, k).map_err(|e| e.to_string())?;
            let b = cts.build_b().map_err(|e| e.to_string())?;
            let gens: Vec<_> = (0..cts.group().invariants.len())
                .map(|i| {
                    let mut e = cts.group().zero();
                    e[i] = 1;
                    e
                })
                .collect();
            ensure(cts.is_psi_isotypic(&b, &gens), "B is not psi-isotypic")?;
            Ok(format!("{} characters over {} cusps", b.len(), cts.set.len()))
        }));
    }
    if k % 2 == 0 {
        out.push(check("f_k_invariance", || {
            let cts = ConstTermSpace::new(&f, &n, p, k).map_err(|e| e.to_string())?;
            let ones = cts.ones_vector(false).map_err(|e| e.to_string())?;
            for g in cts.group().elements() {
                ensure(cts.act(&g, &ones) == ones, "f_k is not invariant")?;
            }
            let odd = ConstTermSpace::new(&f, &n, p, 1).map_err(|e| e.to_string())?;
            let f1 = odd.ones_vector(true).map_err(|e| e.to_string())?;
            let f2 = ConstTermSpace::new(&f, &n, p, 2).map_err(|e| e.to_string())?.ones_vector(true).map_err(|e| e.to_string())?;
            ensure(f1.mul(&f1).entries == f2.entries, "f_1^2 differs from f_2 mod 2")?;
            Ok("invariant under every class".into())
        }));
    }
    out.push(check("rigidity_report", || {
        let r = level_report(&f, &n).map_err(|e| e.to_string())?;
        ensure(r.inertia_bound == r.square_index as u128 * r.gl2_order / r.unit_image_order, "bound is not the product formula")?;
        ensure(r.good_primes_excluded.contains(&2), "2 is reported good")?;
        if n.contains(&int_elem(2)) {
            return Ok(format!("bound {} at {}", r.inertia_bound, r.bound_level));
        }
        Ok(format!("bound {}", r.inertia_bound))
    }));
    Ok(out)
}

fn run_check(cfg: &JobConfig) -> Result<(Value, bool), CliError> {
    let results = run_checks(cfg)?;
    let passed = results.iter().all(|r| r.passed);
    Ok((json!({"passed": passed, "checks": results}), passed))
}

/// Runs one job. The boolean is false when a `check` suite failed.
pub fn run(cfg: &JobConfig) -> Result<(Value, bool), CliError> {
    let body = match cfg.subcommand.as_str() {
        "field" => run_field(cfg.field)?,
        "classgroup" => run_classgroup(cfg)?,
        "hecke" => run_hecke(cfg)?,
        "cusps" => run_cusps(cfg)?,
        "constant-term" => run_constant_term(cfg)?,
        "rigidity" => run_rigidity(cfg)?,
        "check" => {
            let (v, ok) = run_check(cfg)?;
            return Ok((wrap(cfg, v), ok));
        }
        other => return Err(CliError::Invalid(format!("unknown subcommand {other}"))),
    };
    Ok((wrap(cfg, body), true))
}

fn wrap(cfg: &JobConfig, mut body: Value) -> Value {
    body["schema"] = json!(format!("cusp-forge/{}/{}", cfg.subcommand, SCHEMA_VERSION));
    body["config"] = serde_json::to_value(cfg).expect("config serializes");
    body
}

/// Flattens a JSON value into `path,value` rows.
pub fn to_csv(v: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&p, x, out);
                }
            }
            Value::Array(a) => {
                for (i, x) in a.iter().enumerate() {
                    walk(&format!("{prefix}.{i}"), x, out);
                }
            }
            Value::String(s) => out.push((prefix.to_string(), s.clone())),
            other => out.push((prefix.to_string(), other.to_string())),
        }
    }
    let quote = |s: &str| {
        if s.contains([',', '"', '\n']) {
            format!("\"{}\"", s.replace('"', "\"\""))
        } else {
            s.to_string()
        }
    };
    let mut rows = Vec::new();
    walk("", v, &mut rows);
    let mut s = String::from("path,value\n");
    for (k, x) in rows {
        s.push_str(&quote(&k));
        s.push(',');
        s.push_str(&quote(&x));
        s.push('\n');
    }
    s
}

/// Parses arguments, runs the job and returns `(stdout, stderr, exit code)`.
pub fn execute<I, T>(args: I) -> (String, String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            return (if code == 0 { e.to_string() } else { String::new() }, if code == 0 { String::new() } else { e.to_string() }, code);
        }
    };
    let cfg = JobConfig::from_cli(&cli);
    let result = catch_unwind(AssertUnwindSafe(|| run(&cfg)));
    match result {
        Ok(Ok((v, ok))) => {
            let text = match cfg.format {
                Format::Json => serde_json::to_string_pretty(&v).expect("json output") + "\n",
                Format::Csv => to_csv(&v),
            };
            (text, String::new(), if ok { 0 } else { 4 })
        }
        Ok(Err(e)) => (String::new(), format!("error: {e}\n"), e.exit_code()),
        Err(_) => (String::new(), "error: internal assertion failed\n".into(), 4),
    }
}
