//! Proof pipeline, certificate and command line.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::bounds::{
    self, constant_checks, decimal_integer, lambda1_instance, matveev_exponent, rounded_window_encloses_derived,
    simplified_x_cap_valid_from, solve_m_bound, solve_x_bound_k1_is_x, solve_x_bound_small_n, x_bound_from_m,
    x_bound_unsimplified, Precision,
};
use crate::realfield::{cf_expand, const_alpha, CertifiedReal, DEFAULT_PRECISION, DEFAULT_PRECISION_CAP};
use crate::reduction::{gamma_sqrt5, reduce_fib_family, reduce_second_stage, ReductionError};
use crate::search::{
    aux_equation_searches, conjecture_scan, corollary_reports, exhaustive_search_stats, final_case_check,
    in_theorem_list, verify_theorem_table_with, CaseReport, SearchDomain, SearchOptions, Verdict,
};
use crate::sequences::{check_identities, IdentityVerdict, Natural};

pub const CERTIFICATE_SCHEMA: &str = "fibluc-certificate/1";
pub const MANIFEST_VERSION: &str = "1";

pub const DEFAULT_N_CAP: u64 = 270;
pub const DEFAULT_X_CAP: u64 = 102;

/// Stages of the full proof, in dependency order. Stage 0 (identities) and
/// 10 (conjecture scan) only run when selected.
pub const PROOF_STAGES: [u8; 9] = [1, 2, 3, 4, 5, 6, 7, 8, 9];

pub fn stage_label(stage: u8) -> &'static str {
    match stage {
        0 => "sequence identities",
        1 => "theorem table",
        2 => "auxiliary equations",
        3 => "Matveev bound for n <= n_cap",
        4 => "family reduction",
        5 => "exhaustive search",
        6 => "bound chain for n > n_cap",
        7 => "second reduction",
        8 => "final window",
        9 => "corollaries",
        10 => "conjecture scan",
        _ => "unknown",
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub precision: u32,
    pub precision_cap: u32,
    pub n_cap: u64,
    pub x_cap: u64,
    pub workers: usize,
    pub prefilter: bool,
    /// Empty selects every proof stage.
    pub stages: Vec<u8>,
    pub out: Option<PathBuf>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            precision: DEFAULT_PRECISION,
            precision_cap: DEFAULT_PRECISION_CAP,
            n_cap: DEFAULT_N_CAP,
            x_cap: DEFAULT_X_CAP,
            workers: 0,
            prefilter: true,
            stages: Vec::new(),
            out: None,
        }
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("n_cap must be at least 4 and x_cap at least 2")]
    Caps,
    #[error("precision must be at least 32 bits and at most the cap")]
    Precision,
    #[error("unknown stage {0}")]
    Stage(u8),
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n_cap < 4 || self.x_cap < 2 {
            return Err(ConfigError::Caps);
        }
        if self.precision < 32 || self.precision_cap < self.precision {
            return Err(ConfigError::Precision);
        }
        if let Some(&s) = self.stages.iter().find(|&&s| s > 10) {
            return Err(ConfigError::Stage(s));
        }
        Ok(())
    }

    pub fn precision(&self) -> Precision {
        Precision { start: self.precision, cap: self.precision_cap }
    }

    /// Whether the caps are the ones the argument needs.
    pub fn is_default_scope(&self) -> bool {
        self.n_cap == DEFAULT_N_CAP && self.x_cap == DEFAULT_X_CAP
    }

    fn selected(&self) -> Vec<u8> {
        if self.stages.is_empty() {
            PROOF_STAGES.to_vec()
        } else {
            let mut s = self.stages.clone();
            s.sort_unstable();
            s.dedup();
            s
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageReport {
    pub stage: u8,
    #[serde(flatten)]
    pub report: CaseReport,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProofCertificate {
    pub schema: String,
    pub version: String,
    pub manifest_version: String,
    pub config: PipelineConfig,
    pub stages: Vec<StageReport>,
    pub verdict: Verdict,
}

impl ProofCertificate {
    pub fn new(config: PipelineConfig) -> Self {
        ProofCertificate {
            schema: CERTIFICATE_SCHEMA.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            manifest_version: MANIFEST_VERSION.into(),
            config,
            stages: Vec::new(),
            verdict: Verdict::Undecided,
        }
    }

    pub fn stage(&self, stage: u8) -> impl Iterator<Item = &StageReport> {
        self.stages.iter().filter(move |s| s.stage == stage)
    }

    pub fn number(&self, stage: u8, key: &str) -> Option<&str> {
        self.stage(stage).find_map(|s| s.report.numbers.get(key).map(String::as_str))
    }

    /// Verified iff every stage is verified; restricted if some stage only
    /// holds on a reduced scope; an empty certificate is undecided.
    pub fn aggregate(&self) -> Verdict {
        aggregate(self.stages.iter().map(|s| s.report.verdict))
    }

    /// Same as the certificate with all timing fields zeroed.
    pub fn without_timing(&self) -> ProofCertificate {
        let mut c = self.clone();
        for s in &mut c.stages {
            s.seconds = 0.0;
        }
        c
    }
}

pub fn aggregate(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
    let mut any = false;
    let mut out = Verdict::Verified;
    for v in verdicts {
        any = true;
        out = match (out, v) {
            (Verdict::Refuted, _) | (_, Verdict::Refuted) => Verdict::Refuted,
            (Verdict::Undecided, _) | (_, Verdict::Undecided) => Verdict::Undecided,
            (Verdict::VerifiedRestricted, _) | (_, Verdict::VerifiedRestricted) => Verdict::VerifiedRestricted,
            _ => Verdict::Verified,
        };
    }
    if any { out } else { Verdict::Undecided }
}

pub fn exit_code(v: Verdict) -> i32 {
    match v {
        Verdict::Verified | Verdict::VerifiedRestricted => 0,
        Verdict::Refuted => 1,
        Verdict::Undecided => 2,
    }
}

/// A reference value the pipeline compares its output against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Expect {
    Below(&'static str),
    Above(&'static str),
    AtMost(&'static str),
    Equal(&'static str),
}

impl Expect {
    pub fn check(&self, v: &Natural) -> bool {
        match *self {
            Expect::Below(s) => v < &decimal_integer(s),
            Expect::Above(s) => v > &decimal_integer(s),
            Expect::AtMost(s) => v <= &decimal_integer(s),
            Expect::Equal(s) => v == &decimal_integer(s),
        }
    }
}

/// Reference values, keyed by `(stage, number)`.
pub const MANIFEST: [(u8, &str, Expect); 11] = [
    (3, "x_bound", Expect::Below("6.43e13")),
    (4, "q_min", Expect::Above("6.43e13")),
    (4, "q_max", Expect::Below("1.7e23")),
    (4, "a_max", Expect::Equal("1598")),
    (4, "x_cap_out_global", Expect::AtMost("102")),
    (6, "m_bound", Expect::Below("5.18e11")),
    (6, "x_bound", Expect::Below("8.32e24")),
    (7, "a_max", Expect::Equal("29")),
    (7, "q_kstar", Expect::Below("2e26")),
    (7, "q_kstar", Expect::Above("8.32e24")),
    (7, "x_cap_out", Expect::Equal("100")),
];

fn apply_manifest(stage: u8, rep: &mut CaseReport) {
    let entries: Vec<_> = MANIFEST.iter().filter(|(s, _, _)| *s == stage).collect();
    if entries.is_empty() {
        return;
    }
    let mut drift = Vec::new();
    for (_, key, expect) in entries {
        let ok = rep
            .numbers
            .get(*key)
            .and_then(|v| v.parse::<Natural>().ok())
            .is_some_and(|v| expect.check(&v));
        if !ok {
            drift.push(format!("{key}: expected {expect:?}"));
        }
    }
    if drift.is_empty() {
        rep.number("manifest", "match");
    } else {
        rep.number("manifest", format!("mismatch: {}", drift.join("; ")));
        rep.verdict = Verdict::Refuted;
    }
}

/// Values passed between stages.
#[derive(Default)]
struct Carry {
    x_bound_small_n: Option<Natural>,
    reduced_x_cap: Option<Natural>,
    x_bound_large: Option<Natural>,
    second_cap: Option<u64>,
}

fn parse_number(cert: Option<&ProofCertificate>, stage: u8, key: &str) -> Option<Natural> {
    cert?.number(stage, key)?.parse().ok()
}

fn undecided(label: &str, err: impl ToString) -> CaseReport {
    let mut r = CaseReport::new(label, json!({}));
    r.verdict = Verdict::Undecided;
    r.witnesses = json!({ "error": err.to_string() });
    r
}

fn check_list(checks: &[bounds::ConstantCheck], names: &[&str]) -> (bool, Value) {
    let picked: Vec<&bounds::ConstantCheck> = checks.iter().filter(|c| names.contains(&c.name.as_str())).collect();
    let ok = picked.iter().all(|c| c.holds == Some(true));
    (ok, serde_json::to_value(&picked).expect("serializable"))
}

fn stage3(cfg: &PipelineConfig, carry: &mut Carry) -> CaseReport {
    let prec = cfg.precision();
    let mut rep = CaseReport::new(stage_label(3), json!({ "n_cap": cfg.n_cap }));
    let x = match solve_x_bound_small_n(cfg.n_cap, prec) {
        Ok(x) => x,
        Err(e) => return undecided(stage_label(3), e),
    };
    let b = CertifiedReal::from_natural(&(&x * cfg.n_cap), cfg.precision);
    let e = matveev_exponent(&lambda1_instance(cfg.n_cap, b, cfg.precision), cfg.precision);
    let checks = constant_checks(cfg.precision.max(256));
    let (ok, witnesses) = check_list(&checks, &["lambda1_coefficient", "z_coefficient", "u_below_0_9", "weger_0_9", "coeff_11", "legendre_x103"]);
    rep.number("x_bound", &x);
    rep.number("matveev_exponent_at_cap", format!("{:.6e}", e.to_f64()));
    rep.witnesses = json!({
        "constant_checks": witnesses,
        "height_of_F_n": "n log alpha, an upper bound for log F_n",
    });
    rep.verdict = Verdict::from_bool(ok);
    carry.x_bound_small_n = Some(x);
    rep
}

fn stage4(cfg: &PipelineConfig, carry: &mut Carry, prior: Option<&ProofCertificate>) -> CaseReport {
    let prec = cfg.precision();
    let x_cap = match carry.x_bound_small_n.clone().or_else(|| parse_number(prior, 3, "x_bound")) {
        Some(x) => x,
        None => match solve_x_bound_small_n(cfg.n_cap, prec) {
            Ok(x) => x,
            Err(e) => return undecided(stage_label(4), e),
        },
    };
    let mut rep = CaseReport::new(
        stage_label(4),
        json!({ "n_range": [4, cfg.n_cap], "x_cap_in": x_cap.to_string(), "coeff": "11", "base": "1.5" }),
    );
    let coeff = CertifiedReal::from_int(11, cfg.precision);
    let base = CertifiedReal::from_decimal("1.5", cfg.precision);
    let fam = match reduce_fib_family((4, cfg.n_cap), &x_cap, &coeff, &base, prec) {
        Ok(f) => f,
        Err(ReductionError::NotReduced(o)) => {
            rep.verdict = Verdict::Refuted;
            rep.witnesses = json!({ "not_reduced": o.gamma_label });
            return rep;
        }
        Err(e) => return undecided(stage_label(4), e),
    };
    rep.number("uniform_index", fam.uniform_index);
    rep.number("q_min", &fam.q_min);
    rep.number("q_max", &fam.q_max);
    rep.number("q_prev_min", &fam.q_prev_min.0);
    rep.number("q_prev_min_n", fam.q_prev_min.1);
    rep.number("a_max", &fam.a_max);
    rep.number("a_max_n", fam.a_max_at.0);
    rep.number("a_max_i", fam.a_max_at.1);
    rep.number("a_bound", &fam.a_bound);
    rep.number("x_cap_out", &fam.x_cap_out);
    rep.number("x_cap_out_global", &fam.x_cap_out_global);
    let per_n: Vec<Value> = fam
        .per_n
        .iter()
        .map(|(n, o)| {
            json!({
                "n": n, "k_star": o.k_star, "q_kstar": o.q_kstar.to_string(),
                "a_max": o.a_max.to_string(), "a_bound": o.a_bound.to_string(),
                "x_cap_out": o.x_cap_out.to_string(), "precision": o.precision_used,
            })
        })
        .collect();
    rep.witnesses = json!({
        "per_n": per_n,
        "convergent_index_note": "q_min/q_max are q_K with K the common index; q_prev_min is q_(K-1)",
    });
    rep.verdict = Verdict::Verified;
    carry.reduced_x_cap = Some(fam.x_cap_out_global);
    rep
}

fn stage5(cfg: &PipelineConfig, carry: &Carry, prior: Option<&ProofCertificate>) -> CaseReport {
    let domain = SearchDomain::main(cfg.n_cap, cfg.x_cap);
    let mut rep = CaseReport::new(stage_label(5), serde_json::to_value(domain).expect("serializable"));
    let opts = SearchOptions { workers: cfg.workers, prefilter: cfg.prefilter };
    let (found, stats) = match exhaustive_search_stats(&domain, opts) {
        Ok(r) => r,
        Err(e) => return undecided(stage_label(5), e),
    };
    let unexpected: Vec<_> = found.iter().filter(|s| !in_theorem_list(s)).collect();
    let reduced = carry.reduced_x_cap.clone().or_else(|| parse_number(prior, 4, "x_cap_out_global"));
    let covers = reduced.as_ref().is_some_and(|r| r <= &Natural::from(cfg.x_cap)) && cfg.n_cap >= DEFAULT_N_CAP;
    rep.number("candidates", stats.candidates);
    rep.number("prefilter_survivors", stats.survivors);
    rep.number("solutions", found.len());
    if let Some(r) = &reduced {
        rep.number("reduced_x_cap", r);
    }
    rep.witnesses = json!({ "solutions": found, "unexpected": unexpected });
    rep.verdict = if !unexpected.is_empty() {
        Verdict::Refuted
    } else if covers {
        Verdict::Verified
    } else {
        Verdict::VerifiedRestricted
    };
    rep
}

fn stage6(cfg: &PipelineConfig, carry: &mut Carry) -> CaseReport {
    let prec = cfg.precision();
    let mut rep = CaseReport::new(stage_label(6), json!({ "m_min": (cfg.n_cap.max(270) - 3) / 2 }));
    let run = || -> Result<(Natural, Natural, Natural, u64), crate::realfield::RealError> {
        let m = solve_m_bound(prec)?;
        let x = x_bound_from_m(&m, prec)?;
        let xk = solve_x_bound_k1_is_x(prec)?;
        let from = simplified_x_cap_valid_from(prec)?;
        Ok((m, x, xk, from))
    };
    let (m, x, xk, from) = match run() {
        Ok(v) => v,
        Err(e) => return undecided(stage_label(6), e),
    };
    let p = cfg.precision.max(256);
    let checks = constant_checks(p);
    let (ok_checks, witnesses) = check_list(&checks, &["weger_0_5", "coeff_2_91", "coeff_66", "alpha_134", "lambda2_half"]);
    let window_ok = rounded_window_encloses_derived(p) == Some(true);
    // m = 134, 135 fall below the range of the simplified cap; the
    // unsimplified one is used there
    let gap_ok = (134..from).all(|mm| {
        let u = x_bound_unsimplified(mm, p);
        u.lt(&CertifiedReal::from_natural(&x, p)) == Some(true)
            && u.lt(&const_alpha(p).powi(mm as i64).expect("power")) == Some(true)
    });
    let y_ok = bounds::x_bound_from_m_real(&Natural::from(from), p)
        .lt(&const_alpha(p).powi(from as i64).expect("power"))
        == Some(true);
    rep.number("m_bound", &m);
    rep.number("x_bound", &x);
    rep.number("x_bound_if_k1_is_x", &xk);
    rep.number("simplified_cap_valid_from_m", from);
    rep.witnesses = json!({
        "constant_checks": witnesses,
        "window_constants_enclose_derived": window_ok,
        "small_m_unsimplified_cap_ok": gap_ok,
        "y_below_alpha_minus_m": y_ok,
    });
    rep.verdict = Verdict::from_bool(ok_checks && window_ok && gap_ok && y_ok && xk < x);
    carry.x_bound_large = Some(x);
    rep
}

fn stage7(cfg: &PipelineConfig, carry: &mut Carry, prior: Option<&ProofCertificate>) -> CaseReport {
    let prec = cfg.precision();
    let x_cap = match carry.x_bound_large.clone().or_else(|| parse_number(prior, 6, "x_bound")) {
        Some(x) => x,
        None => match solve_m_bound(prec).and_then(|m| x_bound_from_m(&m, prec)) {
            Ok(x) => x,
            Err(e) => return undecided(stage_label(7), e),
        },
    };
    let mut rep = CaseReport::new(stage_label(7), json!({ "x_cap_in": x_cap.to_string(), "rhs": "1/(66 x^2)" }));
    let s = match reduce_second_stage(&x_cap, prec) {
        Ok(s) => s,
        Err(ReductionError::NotReduced(o)) => {
            rep.verdict = Verdict::Refuted;
            rep.number("a_bound", &o.a_bound);
            return rep;
        }
        Err(e) => return undecided(stage_label(7), e),
    };
    let o = &s.outcome;
    rep.number("k_star", o.k_star);
    rep.number("q_kstar", &o.q_kstar);
    if let Ok(cf) = cf_expand(&gamma_sqrt5, o.k_star + 2, cfg.precision_cap) {
        rep.number("q_next", cf.q(o.k_star + 1));
    }
    rep.number("a_max", &o.a_max);
    rep.number("a_max_index", o.a_max_index);
    rep.number("a_bound", &o.a_bound);
    rep.number("lower_bound_denominator", &s.lower_den);
    rep.number("rhs_denominator", s.rhs_den);
    rep.number("x_cap_out", &o.x_cap_out);
    rep.number("least_threshold", s.least_threshold);
    rep.witnesses = json!({
        "coefficient_checked": s.coefficient_checked,
        "threshold_checked": s.threshold_checked,
        "precision_used": o.precision_used,
    });
    rep.verdict = Verdict::Verified;
    carry.second_cap = o.x_cap_out.to_u64();
    rep
}

fn stage8(cfg: &PipelineConfig, carry: &Carry, prior: Option<&ProofCertificate>) -> CaseReport {
    let hi = carry
        .second_cap
        .or_else(|| parse_number(prior, 7, "x_cap_out").and_then(|v| v.to_u64()))
        .unwrap_or(crate::reduction::SECOND_STAGE_THRESHOLD);
    match final_case_check(2, hi, cfg.precision()) {
        Ok((rep, _)) => rep,
        Err(e) => undecided(stage_label(8), e),
    }
}

fn stage0() -> CaseReport {
    let mut rep = CaseReport::new(stage_label(0), json!({ "n_max": 500 }));
    let v = check_identities(500);
    rep.verdict = Verdict::from_bool(v.passed());
    if let IdentityVerdict::Fail { identity, n } = v {
        rep.witnesses = json!({ "identity": identity, "n": n });
    }
    rep
}

fn stage10(cfg: &PipelineConfig) -> CaseReport {
    let n_cap = cfg.n_cap.clamp(6, 100);
    let x_cap = cfg.x_cap.clamp(4, 20);
    let mut rep = CaseReport::new(stage_label(10), json!({ "n_cap": n_cap, "x_cap": x_cap }));
    match conjecture_scan(n_cap, x_cap, SearchOptions { workers: cfg.workers, prefilter: cfg.prefilter }) {
        Ok(found) => {
            rep.number("solutions", found.len());
            rep.witnesses = json!({ "solutions": found, "note": "empirical only" });
            rep.verdict = Verdict::from_bool(found.is_empty());
        }
        Err(e) => return undecided(stage_label(10), e),
    }
    rep
}

/// Runs the selected stages in order. Stages already present in `prior`
/// and not selected are carried over; their numbers feed later stages.
pub fn run_pipeline_from(config: &PipelineConfig, prior: Option<&ProofCertificate>) -> ProofCertificate {
    let mut cert = ProofCertificate::new(config.clone());
    let selected = config.selected();
    let mut carry = Carry::default();
    let push = |cert: &mut ProofCertificate, stage: u8, reps: Vec<CaseReport>, t: Instant| {
        let secs = t.elapsed().as_secs_f64() / reps.len().max(1) as f64;
        for mut r in reps {
            if config.is_default_scope() {
                apply_manifest(stage, &mut r);
            }
            cert.stages.push(StageReport { stage, report: r, seconds: secs });
        }
    };
    for stage in 0..=10u8 {
        if !selected.contains(&stage) {
            if let Some(p) = prior {
                cert.stages.extend(p.stage(stage).cloned());
            }
            continue;
        }
        let t = Instant::now();
        let reps = match stage {
            0 => vec![stage0()],
            1 => vec![verify_theorem_table_with(50, 200)],
            2 => vec![aux_equation_searches(200).0],
            3 => vec![stage3(config, &mut carry)],
            4 => vec![stage4(config, &mut carry, prior)],
            5 => vec![stage5(config, &carry, prior)],
            6 => vec![stage6(config, &mut carry)],
            7 => vec![stage7(config, &mut carry, prior)],
            8 => vec![stage8(config, &carry, prior)],
            9 => match corollary_reports(config.x_cap) {
                Ok(r) => r,
                Err(e) => vec![undecided(stage_label(9), e)],
            },
            10 => vec![stage10(config)],
            _ => unreachable!(),
        };
        push(&mut cert, stage, reps, t);
    }
    cert.verdict = cert.aggregate();
    cert
}

pub fn run_pipeline(config: &PipelineConfig) -> ProofCertificate {
    let run = || run_pipeline_from(config, None);
    match rayon::ThreadPoolBuilder::new().num_threads(config.workers).build() {
        Ok(pool) => pool.install(run),
        Err(_) => run(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum Format {
    Json,
    Text,
}

pub fn emit_report(cert: &ProofCertificate, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(cert).expect("serializable"),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "{} (tool {}, manifest {})", cert.schema, cert.version, cert.manifest_version);
            let _ = writeln!(
                s,
                "n_cap {}  x_cap {}  precision {}..{}",
                cert.config.n_cap, cert.config.x_cap, cert.config.precision, cert.config.precision_cap
            );
            let _ = writeln!(s, "{:<6}{:<34}{:<24}{:>10}", "stage", "label", "verdict", "seconds");
            for st in &cert.stages {
                let _ = writeln!(
                    s,
                    "{:<6}{:<34}{:<24}{:>10.3}",
                    st.stage,
                    st.report.label,
                    st.report.verdict.as_str(),
                    st.seconds
                );
                for (k, v) in &st.report.numbers {
                    let _ = writeln!(s, "        {k} = {v}");
                }
            }
            let _ = writeln!(s, "verdict: {}", cert.verdict.as_str());
            s
        }
    }
}

pub fn parse_certificate(text: &str) -> Result<ProofCertificate, serde_json::Error> {
    serde_json::from_str(text)
}

#[derive(Parser, Debug)]
#[command(name = "fibluc", version, about = "Certified verification of F_n^x - F_m^x = L_r for n <= 2m + 4")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Largest n of the small-n case.
    #[arg(long, global = true, default_value_t = DEFAULT_N_CAP)]
    pub n_cap: u64,
    /// Largest x of the exhaustive search.
    #[arg(long, global = true, default_value_t = DEFAULT_X_CAP)]
    pub x_cap: u64,
    /// Starting precision in bits.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    pub precision: u32,
    /// Precision at which escalation gives up.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION_CAP)]
    pub precision_cap: u32,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, env = "FIBLUC_WORKERS", default_value_t = 0)]
    pub workers: usize,
    /// Disable the residue prefilter of the exhaustive search.
    #[arg(long, global = true)]
    pub no_prefilter: bool,
    /// Write the certificate here as well as to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the full pipeline (or the stages given with --stage).
    Prove {
        /// Stage numbers to run (0-10); repeat or separate with commas.
        #[arg(long, value_delimiter = ',')]
        stage: Vec<u8>,
        /// Carry over stages from an earlier JSON certificate.
        #[arg(long)]
        resume: Option<PathBuf>,
    },
    /// Exhaustive search over n in [4, n_cap], x in [2, x_cap].
    Search,
    /// Both continued-fraction reductions.
    Reduce,
    /// The Matveev bound and the bound chain.
    Bounds,
    /// The six corollary equations.
    Corollaries,
    /// Search n > 2m + 4 for x >= 4 (empirical).
    Conjecture,
    /// Check the Fibonacci/Lucas identities up to 500.
    Identities,
}

impl Cli {
    pub fn config(&self) -> PipelineConfig {
        let stages = match &self.command {
            Command::Prove { stage, .. } => stage.clone(),
            Command::Search => vec![5],
            Command::Reduce => vec![4, 7],
            Command::Bounds => vec![3, 6],
            Command::Corollaries => vec![9],
            Command::Conjecture => vec![10],
            Command::Identities => vec![0],
        };
        PipelineConfig {
            precision: self.common.precision,
            precision_cap: self.common.precision_cap,
            n_cap: self.common.n_cap,
            x_cap: self.common.x_cap,
            workers: self.common.workers,
            prefilter: !self.common.no_prefilter,
            stages,
            out: self.common.out.clone(),
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn main_with(cli: Cli) -> i32 {
    let config = cli.config();
    if let Err(e) = config.validate() {
        eprintln!("error: {e}");
        return 2;
    }
    let prior = match &cli.command {
        Command::Prove { resume: Some(path), .. } => {
            match std::fs::read_to_string(path).map_err(|e| e.to_string()).and_then(|t| parse_certificate(&t).map_err(|e| e.to_string())) {
                Ok(c) => Some(c),
                Err(e) => {
                    eprintln!("error: cannot resume from {}: {e}", path.display());
                    return 2;
                }
            }
        }
        _ => None,
    };
    let run = || run_pipeline_from(&config, prior.as_ref());
    let cert = match rayon::ThreadPoolBuilder::new().num_threads(config.workers).build() {
        Ok(pool) => pool.install(run),
        Err(_) => run(),
    };
    let text = emit_report(&cert, cli.common.format);
    println!("{text}");
    if let Some(path) = &config.out {
        if let Err(e) = std::fs::write(path, emit_report(&cert, Format::Json)) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return 2;
        }
    }
    exit_code(cert.verdict)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_certificate_is_undecided() {
        let c = ProofCertificate::new(PipelineConfig::default());
        assert_eq!(c.aggregate(), Verdict::Undecided);
        let back = parse_certificate(&emit_report(&c, Format::Json)).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn aggregate_rules() {
        use Verdict::*;
        assert_eq!(aggregate([Verified, Verified]), Verified);
        assert_eq!(aggregate([Verified, VerifiedRestricted]), VerifiedRestricted);
        assert_eq!(aggregate([VerifiedRestricted, Undecided]), Undecided);
        assert_eq!(aggregate([Undecided, Refuted]), Refuted);
        assert_eq!(exit_code(Refuted), 1);
        assert_eq!(exit_code(Undecided), 2);
    }

    #[test]
    fn corollary_stage_alone() {
        let cfg = PipelineConfig { stages: vec![9], ..Default::default() };
        let c = run_pipeline(&cfg);
        assert_eq!(c.stages.len(), 6);
        assert_eq!(c.verdict, Verdict::Verified);
    }

    #[test]
    fn manifest_flags_drift() {
        let mut rep = CaseReport::new("x", json!({}));
        rep.verdict = Verdict::Verified;
        rep.number("m_bound", "600000000000");
        rep.number("x_bound", "1");
        apply_manifest(6, &mut rep);
        assert_eq!(rep.verdict, Verdict::Refuted);
        assert!(rep.numbers["manifest"].starts_with("mismatch"));
    }

    #[test]
    fn config_validation() {
        assert!(PipelineConfig { n_cap: 3, ..Default::default() }.validate().is_err());
        assert!(PipelineConfig { precision: 512, precision_cap: 256, ..Default::default() }.validate().is_err());
        assert!(PipelineConfig { stages: vec![11], ..Default::default() }.validate().is_err());
        assert!(PipelineConfig::default().validate().is_ok());
    }
}
