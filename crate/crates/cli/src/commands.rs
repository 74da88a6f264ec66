use bmoalab::sampling::halton_disc;
use bmoalab::semigroup::{
    check_cond2, check_cond3, check_plog, classify_theory, continuity_probe, dw_decompose, flow, Semigroup,
};
use bmoalab::spaces::{
    bloch_seminorm, bmoa_norm, bmoa_seminorm, dirichlet_norm, garsia_norm, growth_constant, vmoa_profile, SpaceParam,
    VanishingProfile, Verdict,
};
use bmoalab::volterra::{gamma_symbol, logcar_profile, tg_image_vmoa_check, tg_lower_bound, VolterraOp};
use bmoalab::{AnalyticFn, Complex64, Result};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::*;
use crate::expr;
use crate::suite;

/// Everything a command produces besides timing.
#[derive(Debug, Default)]
pub struct Outcome {
    pub results: Value,
    /// Named profile sets; the first goes to `profile.csv`.
    pub profiles: Vec<(String, Vec<VanishingProfile>)>,
    pub warnings: Vec<String>,
    /// A suite member failed.
    pub failed: bool,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

// Expressions and semigroups were validated when the config was loaded.
fn func(src: &str) -> AnalyticFn {
    expr::parse(src).expect("validated expression")
}

fn semigroup(spec: &SemigroupSpec) -> Semigroup {
    spec.build().expect("validated semigroup")
}

fn param(p: f64) -> SpaceParam {
    SpaceParam::new(p).expect("validated exponent")
}

fn default_angles(fns: &[&AnalyticFn]) -> Vec<f64> {
    let mut a = vec![0.0];
    a.extend(fns.iter().flat_map(|f| f.cluster_points()).map(|c| c.arg()));
    a.sort_by(|x, y| x.total_cmp(y));
    a.dedup_by(|x, y| (*x - *y).abs() < 1e-12);
    a
}

fn verdict_warnings(label: &str, profiles: &[VanishingProfile], out: &mut Vec<String>) {
    for p in profiles {
        if p.verdict == Verdict::Inconclusive {
            out.push(format!("{label}: profile {} is inconclusive", p.label));
        }
    }
}

pub fn execute(exp: &Experiment) -> Result<Outcome> {
    let mut o = Outcome::default();
    match exp {
        Experiment::Norm(c) => {
            let f = func(&c.function);
            let p = param(c.p);
            let est = match c.kind {
                NormKind::Bmoa => bmoa_norm(&f, p, &c.grid, &c.search)?,
                NormKind::BmoaSeminorm => bmoa_seminorm(&f, p, &c.grid, &c.search)?,
                NormKind::Dirichlet => dirichlet_norm(&f, p, &c.grid)?,
                NormKind::Bloch => bloch_seminorm(&f, &c.search)?,
                NormKind::Garsia => garsia_norm(&f, &c.search)?,
                NormKind::Growth => growth_constant(&f, Some(&halton_disc(4096, 0.999, c.rng_seed)))?,
            };
            if est.inconclusive {
                o.warnings.push("supremum approached at the outermost search radius; value is a lower bound".into());
            }
            o.results = json!({ "function": f.describe(), "kind": c.kind, "estimate": to_value(&est) });
        }
        Experiment::Vmoa(c) => {
            let f = func(&c.function);
            let angles = c.angles.clone().unwrap_or_else(|| default_angles(&[&f]));
            let prof = vmoa_profile(&f, param(c.p), &c.grid, &angles, c.k_max)?;
            verdict_warnings("vmoa", &prof.profiles, &mut o.warnings);
            o.results = json!({ "function": f.describe(), "profile": to_value(&prof) });
            o.profiles.push(("vmoa".into(), prof.profiles));
        }
        Experiment::SemigroupFlow(c) => {
            let sg = semigroup(&c.semigroup);
            let ode = Semigroup { closed_form: None, ..sg.clone() };
            let starts = c.points.clone().unwrap_or_else(|| halton_disc(c.samples, 0.95, c.rng_seed));
            let mut runs = Vec::with_capacity(starts.len());
            let mut worst: Option<f64> = None;
            for z in starts {
                let r = flow(&ode, z, c.t, c.tol)?;
                let err = sg.closed_form.map(|cf| {
                    r.samples.iter().map(|&(t, w)| (w - cf.apply(t, z)).norm()).fold(0.0, f64::max)
                });
                if let Some(e) = err {
                    worst = Some(worst.unwrap_or(0.0).max(e));
                }
                runs.push(json!({ "z0": z, "flow": to_value(&r), "closed_form_error": err }));
            }
            let dw = if sg.is_trivial() {
                Value::Null
            } else {
                let r = dw_decompose(&sg.generator, sg.dw_point)?;
                json!({ "min_re_p": r.min_re_p, "argmin": r.argmin, "round_trip": r.round_trip })
            };
            o.results = json!({
                "semigroup": sg.label,
                "dw_point": sg.dw_point,
                "dw_decomposition": dw,
                "max_closed_form_error": worst,
                "trajectories": runs,
            });
        }
        Experiment::Continuity(c) => {
            let f = func(&c.function);
            let sg = semigroup(&c.semigroup);
            let r = continuity_probe(&f, &sg, param(c.p), c.k_min, c.k_max, &c.grid, &c.search)?;
            if r.excluded_nodes > 0 {
                o.warnings.push(format!(
                    "{} quadrature nodes fell on zeros of G; the flow derivative was linearized there",
                    r.excluded_nodes
                ));
            }
            verdict_warnings("continuity", std::slice::from_ref(&r.profile), &mut o.warnings);
            o.results = json!({ "function": f.describe(), "semigroup": sg.label, "report": to_value(&r) });
            o.profiles.push(("continuity".into(), vec![r.profile]));
        }
        Experiment::Condition(c) => {
            let sg = semigroup(&c.semigroup);
            let p = param(c.p);
            let mut res = serde_json::Map::new();
            res.insert("semigroup".into(), sg.label.clone().into());
            let mut plog = None;
            let mut cond3 = None;
            for kind in &c.conditions {
                match kind {
                    ConditionKind::PLog => {
                        let r = check_plog(&sg, p, &c.boxes)?;
                        verdict_warnings("pLog", &r.profiles, &mut o.warnings);
                        res.insert("pLog".into(), to_value(&r));
                        plog = Some(r.verdict);
                        o.profiles.push(("pLog".into(), r.profiles));
                    }
                    ConditionKind::Cond3 => {
                        let r = check_cond3(&sg, p, &c.boxes)?;
                        verdict_warnings("cond3", &r.profiles, &mut o.warnings);
                        res.insert("cond3".into(), to_value(&r));
                        cond3 = Some(r.verdict);
                        o.profiles.push(("cond3".into(), r.profiles));
                    }
                    ConditionKind::Cond2 => {
                        let r = check_cond2(&sg, c.cond2_a, c.cond2_k_max)?;
                        res.insert("cond2".into(), to_value(&r));
                    }
                }
            }
            if let (Some(a), Some(b)) = (plog, cond3) {
                res.insert("theory".into(), to_value(&classify_theory(a, b, sg.interior_dw())));
            }
            o.results = Value::Object(res);
        }
        Experiment::Volterra(c) => {
            let g = func(&c.symbol);
            let p_to = param(c.p_to);
            let p_from = param(c.p_from.unwrap_or(c.p_to));
            let lc = logcar_profile(&g, p_to, &c.boxes)?;
            verdict_warnings("logcar", &lc.profile.profiles, &mut o.warnings);
            let op = VolterraOp::new(g.clone());
            let mut images = Vec::new();
            for src in &c.functions {
                let f = func(src);
                let angles = c.image_angles.clone().unwrap_or_else(|| default_angles(&[&g, &f]));
                let prof = tg_image_vmoa_check(&op, &f, p_to, &angles, c.image_k_max, &c.grid)?;
                verdict_warnings(&format!("image of {}", f.describe()), &prof.profiles, &mut o.warnings);
                images.push(json!({ "function": f.describe(), "profile": to_value(&prof) }));
                o.profiles.push((format!("image-{}", images.len()), prof.profiles));
            }
            let lower = if c.schedule.is_empty() {
                Value::Null
            } else {
                to_value(&tg_lower_bound(&op, p_from, p_to, &c.schedule, &c.grid, &c.search)?)
            };
            o.results = json!({ "symbol": g.describe(), "logcar": to_value(&lc), "images": images, "lower_bound": lower });
            o.profiles.insert(0, ("logcar".into(), lc.profile.profiles));
        }
        Experiment::Gamma(c) => {
            let sg = semigroup(&c.semigroup);
            let gm = gamma_symbol(&sg, c.path_nodes)?;
            let pts = c.points.clone().unwrap_or_else(|| halton_disc(c.samples, 0.9, c.rng_seed));
            let target = |z: Complex64| match gm.case {
                bmoalab::volterra::GammaCase::Interior => z - gm.dw_point,
                bmoalab::volterra::GammaCase::Boundary => Complex64::new(1.0, 0.0),
            };
            let mut rows = Vec::with_capacity(pts.len());
            let mut worst = 0.0f64;
            for z in pts {
                let d = gm.gamma.deriv_at(z);
                let residual = (d * sg.generator.value(z) - target(z)).norm();
                worst = worst.max(residual);
                rows.push(json!({ "z": z, "gamma": gm.gamma.eval(z)?, "gamma_prime": d, "residual": residual }));
            }
            let lc = logcar_profile(&gm.gamma, param(c.p), &c.boxes)?;
            verdict_warnings("logcar", &lc.profile.profiles, &mut o.warnings);
            o.results = json!({
                "semigroup": sg.label,
                "case": gm.case,
                "dw_point": gm.dw_point,
                "max_residual": worst,
                "points": rows,
                "logcar": to_value(&lc),
            });
            o.profiles.push(("logcar".into(), lc.profile.profiles));
        }
        Experiment::Suite(c) => {
            let mut checks = Vec::new();
            for name in suite::members(c.suite) {
                checks.extend(suite::run_group(name)?);
            }
            if c.suite == SuiteId::Conditions {
                for spec in &c.extra_semigroups {
                    checks.extend(suite::extra_condition_checks(&semigroup(spec))?);
                }
            }
            o.failed = checks.iter().any(|c| !c.passed);
            let passed = checks.iter().filter(|c| c.passed).count();
            o.results = json!({ "suite": c.suite, "passed": passed, "total": checks.len(), "checks": to_value(&checks) });
        }
    }
    Ok(o)
}

/// Rows of the pass/fail table printed by the suite command.
pub fn suite_table(results: &Value) -> String {
    let mut s = String::new();
    if let Some(checks) = results["checks"].as_array() {
        for c in checks {
            let mark = if c["passed"].as_bool() == Some(true) { "PASS" } else { "FAIL" };
            s.push_str(&format!(
                "{mark}  [{}] {}: {}\n",
                c["criterion"],
                c["name"].as_str().unwrap_or(""),
                c["detail"].as_str().unwrap_or("")
            ));
        }
        s.push_str(&format!("{}/{} checks passed\n", results["passed"], results["total"]));
    }
    s
}
