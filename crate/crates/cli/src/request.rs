//! Job requests, dispatch into the library, and reports.
//!
//! Every invocation — inline flags or `--request file.json` — is funneled
//! through a [`JobRequest`] so reports echo exactly what ran and re-running
//! the same request with the same seed reproduces every verdict field.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use xarability::hierarchy::{
    hermitian_form_level, hsos_decompose, optimize_over_variety, witness_certify, Direction,
};
use xarability::json as xjson;
use xarability::subspace::{
    generic_degree, gm_lower_bound, nullstellensatz_certify, robustness_radius,
    witness_from_subspace, worst_case_degree, Subspace,
};
use xarability::varieties::{ikperp_sampling, BasisCache, Route};
use xarability::xtension::{
    definetti_bound, tension_feasibility, verify_infeasibility_certificate, TensionVerdict,
    DEFAULT_MAX_ITERS, DEFAULT_TOL,
};
use xarability::{Config, Error, VarietySpec};

/// One unit of work. Unknown fields are rejected during parsing, so a
/// request that deserializes is schema-valid.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct JobRequest {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variety: Option<VarietySpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<InputPayload>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// Inclusive `[k_min, k_max]`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_range: Option<(usize, usize)>,
    /// Subspace dimension for the generic-degree report.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    /// `"max"` or `"min"` for `optimize`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direction: Option<String>,
    /// Degree of the Hermitian form payload.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub form_degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Ambient-cap override (matrix entries).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_entries: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iters: Option<usize>,
    /// Sample count override for the sampling route.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub emit_basis: Option<bool>,
    /// `"closed"` (default) or `"sampling"` for `ikperp`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub route: Option<String>,
    /// Search cap for the generic-degree report (default 12).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generic_k_cap: Option<usize>,
    /// Also attempt the constructive decomposition in `optimize` when a
    /// Hermitian form is given.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hsos: Option<bool>,
}

/// Exactly one payload kind per request.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct InputPayload {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subspace: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observable: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hermitian_form: Option<Value>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EffectiveSettings {
    pub max_entries: usize,
    pub rank_rel_tol: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JobReport {
    pub request: JobRequest,
    pub result: Value,
    pub wall_time_ms: f64,
    pub library_version: String,
    pub seed: u64,
    pub effective: EffectiveSettings,
}

impl JobRequest {
    fn spec(&self) -> Result<&VarietySpec, Error> {
        self.variety
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("missing variety".into()))
    }

    fn level(&self) -> Result<usize, Error> {
        self.k
            .ok_or_else(|| Error::InvalidInput("missing level k".into()))
    }

    fn levels(&self) -> Result<(usize, usize), Error> {
        if let Some((lo, hi)) = self.k_range {
            if lo < 1 || hi < lo {
                return Err(Error::InvalidInput(format!("bad k_range [{lo}, {hi}]")));
            }
            return Ok((lo, hi));
        }
        let k = self.level()?;
        Ok((k, k))
    }

    fn payload(&self) -> Result<&InputPayload, Error> {
        self.input
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("missing input payload".into()))
    }

    fn subspace(&self, config: &Config) -> Result<Subspace, Error> {
        let v =
            self.payload()?.subspace.as_ref().ok_or_else(|| {
                Error::InvalidInput("this command needs an input.subspace".into())
            })?;
        xjson::subspace_from_json(v, config)
    }

    fn state(&self) -> Result<xarability::CMat, Error> {
        let v = self
            .payload()?
            .state
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("this command needs an input.state".into()))?;
        xjson::matrix_from_json(v)
    }
}

/// Run one request against a fresh cache built from its effective settings.
pub fn run_request(req: &JobRequest) -> Result<(Value, EffectiveSettings), Error> {
    let mut config = Config::default();
    if let Some(me) = req.max_entries {
        config.caps.max_entries = me;
    }
    let tolerance = req.tolerance.unwrap_or(1e-8);
    let effective = EffectiveSettings {
        max_entries: config.caps.max_entries,
        rank_rel_tol: config.rank_rel_tol,
        tolerance,
    };
    let cache = BasisCache::new(config);
    let result = match req.command.as_str() {
        "degree" => cmd_degree(req, &cache)?,
        "ikperp" => cmd_ikperp(req, &cache, &config)?,
        "certify-subspace" => cmd_certify(req, &cache, &config)?,
        "gm" => cmd_gm(req, &cache, &config)?,
        "witness" => cmd_witness(req, &cache, &config, tolerance)?,
        "optimize" => cmd_optimize(req, &cache)?,
        "tension" => cmd_tension(req, &cache, tolerance)?,
        "definetti" => cmd_definetti(req)?,
        other => return Err(Error::InvalidInput(format!("unknown command {other:?}"))),
    };
    Ok((result, effective))
}

fn cmd_degree(req: &JobRequest, cache: &BasisCache) -> Result<Value, Error> {
    let spec = req.spec()?;
    let worst = worst_case_degree(spec)?;
    let generic = match req.s {
        Some(s) => {
            let cap = req.generic_k_cap.unwrap_or(12);
            Some(generic_degree(spec, s, cap, cache)?)
        }
        None => None,
    };
    Ok(json!({
        "worst_case": worst,
        "generic": generic,
    }))
}

fn cmd_ikperp(req: &JobRequest, cache: &BasisCache, config: &Config) -> Result<Value, Error> {
    let spec = req.spec()?;
    let k = req.level()?;
    let icb = match req.route.as_deref() {
        None | Some("closed") => (*cache.closed_form(spec, k)?).clone(),
        Some("sampling") => ikperp_sampling(spec, k, req.samples, req.seed.unwrap_or(0), config)?,
        Some(other) => {
            return Err(Error::InvalidInput(format!(
                "route must be \"closed\" or \"sampling\", got {other:?}"
            )))
        }
    };
    let mut out = json!({
        "dimension": icb.dim(),
        "predicted_dimension": icb.predicted_dim(),
        "route": match icb.route() {
            Route::ClosedForm => "closed_form",
            Route::Generators => "generators",
            Route::Sampling => "sampling",
        },
        "undersampled": icb.undersampled(),
        "ambient_power_dim": icb.ambient_power_dim(),
    });
    if req.emit_basis.unwrap_or(false) {
        out["basis"] = xjson::matrix_to_json(icb.basis());
    }
    Ok(out)
}

fn cmd_certify(req: &JobRequest, cache: &BasisCache, config: &Config) -> Result<Value, Error> {
    let spec = req.spec()?;
    let (lo, hi) = req.levels()?;
    // A state payload routes through the range criterion: certify the image
    // subspace; success proves the state X-tangled.
    if req.payload()?.state.is_some() {
        let rho = req.state()?;
        let mut levels = Vec::new();
        for k in lo..=hi {
            let res = xarability::subspace::range_criterion(&rho, spec, k, cache)?;
            levels.push(serde_json::to_value(&res).expect("serializable result"));
        }
        return Ok(json!({ "mode": "range_criterion", "levels": levels }));
    }
    let u = req.subspace(config)?;
    let mut levels = Vec::new();
    for k in lo..=hi {
        let res = nullstellensatz_certify(&u, spec, k, cache)?;
        levels.push(serde_json::to_value(&res).expect("serializable result"));
    }
    Ok(json!({ "mode": "subspace", "subspace_dim": u.dim(), "levels": levels }))
}

fn cmd_gm(req: &JobRequest, cache: &BasisCache, config: &Config) -> Result<Value, Error> {
    let spec = req.spec()?;
    let u = req.subspace(config)?;
    let (lo, hi) = req.levels()?;
    let mut entries = Vec::new();
    let mut prev = f64::NEG_INFINITY;
    let mut monotone = true;
    for k in lo..=hi {
        let gm = gm_lower_bound(&u, spec, k, cache)?;
        let radius = robustness_radius(&u, spec, k, cache)?;
        monotone &= gm >= prev - 1e-8;
        prev = gm;
        entries.push(json!({ "k": k, "gm_lower_bound": gm, "robustness_radius": radius }));
    }
    Ok(json!({ "entries": entries, "monotone": monotone }))
}

fn cmd_witness(
    req: &JobRequest,
    cache: &BasisCache,
    config: &Config,
    tolerance: f64,
) -> Result<Value, Error> {
    let spec = req.spec()?;
    let k = req.level()?;
    let payload = req.payload()?;
    if let Some(ov) = &payload.observable {
        // Verify mode: is the given observable a witness at this level?
        let h = xjson::matrix_from_json(ov)?;
        let cert = witness_certify(&h, spec, k, cache)?;
        let mut out = json!({ "mode": "verify", "certificate": cert });
        if let Some(sv) = &payload.state {
            let rho = xjson::matrix_from_json(sv)?;
            let ok = verify_infeasibility_certificate(&h, &rho, spec, k, tolerance, cache)?;
            out["state_excluded"] = json!(ok);
        }
        return Ok(out);
    }
    // Construct mode from a subspace.
    let u = req.subspace(config)?;
    let (h, cert) = witness_from_subspace(&u, spec, k, cache)?;
    Ok(json!({
        "mode": "construct",
        "witness": xjson::matrix_to_json(&h),
        "certificate": cert,
    }))
}

fn cmd_optimize(req: &JobRequest, cache: &BasisCache) -> Result<Value, Error> {
    let spec = req.spec()?;
    let payload = req.payload()?;
    let (lo, hi) = req.levels()?;
    if let Some(fv) = &payload.hermitian_form {
        let d = req
            .form_degree
            .ok_or_else(|| Error::InvalidInput("hermitian_form needs form_degree".into()))?;
        let form = xjson::matrix_from_json(fv)?;
        let mut entries = Vec::new();
        for k in lo.max(d)..=hi {
            let nu = hermitian_form_level(&form, d, spec, k, cache)?;
            entries.push(json!({
                "k": k, "nu": nu.value, "empty_complement": nu.empty_complement
            }));
        }
        let mut out = json!({ "kind": "hermitian_form", "entries": entries });
        if req.hsos.unwrap_or(false) {
            let (outcome, _) = hsos_decompose(&form, d, spec, hi, cache)?;
            out["hsos"] = serde_json::to_value(&outcome).expect("serializable outcome");
        }
        return Ok(out);
    }
    let hv = payload.observable.as_ref().ok_or_else(|| {
        Error::InvalidInput("optimize needs an observable or hermitian_form".into())
    })?;
    let h = xjson::matrix_from_json(hv)?;
    let direction = match req.direction.as_deref() {
        Some("min") => Direction::Min,
        Some("max") | None => Direction::Max,
        Some(other) => {
            return Err(Error::InvalidInput(format!(
                "direction must be max|min, got {other:?}"
            )))
        }
    };
    let trace = optimize_over_variety(&h, spec, hi, direction, cache)?;
    let entries: Vec<Value> = trace
        .entries
        .iter()
        .filter(|e| e.k >= lo)
        .map(|e| json!({ "k": e.k, "nu": e.value, "empty_complement": e.empty_complement }))
        .collect();
    Ok(json!({
        "kind": "observable",
        "direction": trace.direction,
        "entries": entries,
        "monotone": trace.monotone,
        "final_bound": trace.final_bound,
        "truncated": trace.truncated,
    }))
}

fn cmd_tension(req: &JobRequest, cache: &BasisCache, tolerance: f64) -> Result<Value, Error> {
    let spec = req.spec()?;
    let k = req.level()?;
    let rho = req.state()?;
    let max_iters = req.max_iters.unwrap_or(DEFAULT_MAX_ITERS);
    let tol = if req.tolerance.is_some() {
        tolerance
    } else {
        DEFAULT_TOL
    };
    let res = tension_feasibility(&rho, spec, k, max_iters, tol, cache)?;
    let mut out = json!({
        "verdict": res.verdict,
        "diagnostics": res.diagnostics,
        "extensions": res.extensions,
    });
    if let Some(t) = &res.tension {
        out["sigma"] = xjson::matrix_to_json(t.sigma());
    }
    if let Some(w) = &res.witness {
        out["witness"] = xjson::matrix_to_json(w);
        out["witness_gap"] = json!(res.witness_gap);
    }
    if res.verdict == TensionVerdict::Undetermined {
        out["note"] = json!(
            "undetermined is a permanent possible outcome at finite level; \
             no finite level is complete for arability"
        );
    }
    Ok(out)
}

fn cmd_definetti(req: &JobRequest) -> Result<Value, Error> {
    let spec = req.spec()?;
    let (lo, hi) = req.levels()?;
    let mut entries = Vec::new();
    for k in lo..=hi {
        entries.push(json!({ "k": k, "bound": definetti_bound(spec, k)? }));
    }
    Ok(json!({ "entries": entries }))
}

/// Map library errors to the documented process exit codes.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CapExceeded { .. } => 2,
        Error::Inconsistency(_) => 3,
        _ => 1,
    }
}

pub fn error_json(e: &Error) -> Value {
    let kind = match e {
        Error::CapExceeded { .. } => "cap_exceeded",
        Error::Inconsistency(_) => "internal_inconsistency",
        Error::DimensionMismatch { .. } => "dimension_mismatch",
        Error::NotHermitian { .. } => "not_hermitian",
        Error::NotNormalized { .. } => "not_normalized",
        Error::MalformedState { .. } => "malformed_state",
        Error::InvalidSpec(_) => "invalid_spec",
        Error::UnsupportedVariety { .. } => "unsupported_variety",
        Error::Overflow(_) => "overflow",
        Error::MissingFactors(_) => "missing_factors",
        Error::UncertifiedLevel { .. } => "uncertified_level",
        Error::InvalidInput(_) => "invalid_input",
    };
    json!({ "error": { "kind": kind, "message": e.to_string() } })
}
