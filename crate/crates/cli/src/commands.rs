use serde_json::{json, Map, Value};
use symquot_core::{
    enumerate_strata, hilbert_basis, identity_residuals, integrate_flow, minimize_kempf_ness,
    su2_multiplicity, verify_qr, verify_su2_dimension, weight_multiplicity, Completeness,
    FlowOptions, KempfNessStatus, Mode, Rational, RepSpec, StabilityTag, StateVector,
};

use crate::args::{Cli, Command};
use crate::config::{config_hash, format_rational, load_config};
use crate::generate::InstanceGen;
use crate::output::{self, level_string, parse_degrees, parse_level, parse_point, state_json};
use crate::{CliError, EXIT_FAILED, EXIT_OK};

/// Identity residuals above this fail `identities`.
pub const IDENTITY_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub output: String,
}

fn ok(output: String) -> Outcome {
    Outcome {
        code: EXIT_OK,
        output,
    }
}

struct Ctx<'a> {
    cli: &'a Cli,
    name: &'static str,
}

impl Ctx<'_> {
    fn rep(&self) -> Result<RepSpec, CliError> {
        let path = self
            .cli
            .rep
            .as_ref()
            .ok_or_else(|| CliError::Usage(format!("`{}` needs --rep", self.name)))?;
        load_config(path)
    }

    fn flow_options(&self) -> Result<FlowOptions, CliError> {
        let mut o = FlowOptions::default();
        if let Some(x) = self.cli.tol_phi {
            o.phi_tol = x;
        }
        if let Some(x) = self.cli.tol_grad {
            o.grad_stop = x;
        }
        if let Some(x) = self.cli.tmax {
            o.t_max = x;
        }
        o.validate()?;
        Ok(o)
    }

    fn point(&self, rep: &RepSpec, given: Option<&str>) -> Result<StateVector, CliError> {
        match given {
            Some(s) => parse_point(s),
            None => Ok(InstanceGen::new(self.cli.seed).state(rep.n())),
        }
    }

    fn table(
        &self,
        hash: Option<&str>,
        columns: &[&str],
        rows: Vec<Map<String, Value>>,
        extra: Map<String, Value>,
    ) -> String {
        if self.cli.csv {
            output::csv(self.name, hash, columns, &rows)
        } else {
            let mut body = extra;
            body.insert(
                "rows".into(),
                Value::Array(rows.into_iter().map(Value::Object).collect()),
            );
            output::report(self.name, self.cli.seed, hash, body)
        }
    }

    fn json_only(&self) -> Result<(), CliError> {
        if self.cli.csv {
            return Err(CliError::Usage(format!("`{}` has no CSV form", self.name)));
        }
        Ok(())
    }
}

fn obj(pairs: Vec<(&str, Value)>) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn tag_name(tag: StabilityTag) -> &'static str {
    match tag {
        StabilityTag::Unstable => "unstable",
        StabilityTag::Semistable => "semistable",
        StabilityTag::Stable => "stable",
    }
}

fn rationals_json(xs: &[Rational]) -> Value {
    Value::Array(xs.iter().map(|x| json!(format_rational(x))).collect())
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let name = match &cli.command {
        Command::Classify { .. } => "classify",
        Command::Flow { .. } => "flow",
        Command::Kn { .. } => "kn",
        Command::Invariants => "invariants",
        Command::Multiplicity { .. } => "multiplicity",
        Command::Ehrhart { .. } => "ehrhart",
        Command::VerifyQr { .. } => "verify-qr",
        Command::Identities { .. } => "identities",
    };
    let ctx = Ctx { cli, name };
    match &cli.command {
        Command::Classify { point, batch } => classify(&ctx, point.as_deref(), *batch),
        Command::Flow { point, every } => flow(&ctx, point.as_deref(), *every),
        Command::Kn { point } => kn(&ctx, point.as_deref()),
        Command::Invariants => invariants(&ctx),
        Command::Multiplicity { lambda, degree } => multiplicity(&ctx, lambda, degree),
        Command::Ehrhart { lambda, k0, rmax } => ehrhart(&ctx, lambda.as_deref(), *k0, *rmax),
        Command::VerifyQr {
            lambda,
            degree,
            batch,
        } => verify(&ctx, lambda, degree, *batch),
        Command::Identities { batch } => identities(&ctx, *batch),
    }
}

fn classify(ctx: &Ctx, point: Option<&str>, batch: Option<usize>) -> Result<Outcome, CliError> {
    let rep = ctx.rep()?;
    let hash = config_hash(&rep);
    let opts = ctx.flow_options()?;
    let points = match (point, batch) {
        (Some(p), _) => {
            let v = parse_point(p)?;
            rep.check_state(&v)?;
            vec![v]
        }
        (None, Some(b)) => {
            let mut g = InstanceGen::new(ctx.cli.seed);
            (0..b).map(|_| g.state(rep.n())).collect()
        }
        (None, None) => {
            return Err(CliError::Usage(
                "`classify` needs --point or --batch".into(),
            ))
        }
    };
    let mut rows = Vec::with_capacity(points.len());
    for (i, v) in points.iter().enumerate() {
        let mut row = obj(vec![("index", json!(i))]);
        match integrate_flow(&rep, v, &opts) {
            Ok(r) => {
                let (tag, closed) = match r.classification {
                    Some(c) => (tag_name(c.tag), json!(c.closed_orbit)),
                    None if r.phi_residual > opts.phi_tol
                        && r.phi_residual < 10.0 * opts.phi_tol =>
                    {
                        ("indeterminate", Value::Null)
                    }
                    None => ("unclassified", Value::Null),
                };
                row.insert("tag".into(), json!(tag));
                row.insert("closed_orbit".into(), closed);
                row.insert("phi_residual".into(), json!(r.phi_residual));
                row.insert("converged".into(), json!(r.converged));
                row.insert("steps".into(), json!(r.steps));
            }
            Err(e) => {
                row.insert("tag".into(), json!("error"));
                row.insert("error".into(), json!(e.to_string()));
            }
        }
        if ctx.cli.csv {
            row.insert("point".into(), json!(output::state_json(v).to_string()));
        } else {
            row.insert("point".into(), state_json(v));
        }
        rows.push(row);
    }
    let columns = [
        "index",
        "tag",
        "closed_orbit",
        "phi_residual",
        "converged",
        "steps",
        "error",
        "point",
    ];
    Ok(ok(ctx.table(Some(&hash), &columns, rows, Map::new())))
}

fn flow(ctx: &Ctx, point: Option<&str>, every: usize) -> Result<Outcome, CliError> {
    ctx.json_only()?;
    let rep = ctx.rep()?;
    let opts = FlowOptions {
        sample_every: every,
        ..ctx.flow_options()?
    };
    let v = ctx.point(&rep, point)?;
    let r = integrate_flow(&rep, &v, &opts)?;
    Ok(ok(output::trajectory(&config_hash(&rep), &r)))
}

fn kn(ctx: &Ctx, point: Option<&str>) -> Result<Outcome, CliError> {
    ctx.json_only()?;
    let rep = ctx.rep()?;
    let v = ctx.point(&rep, point)?;
    let out = minimize_kempf_ness(&rep, &v, &ctx.flow_options()?)?;
    let (status, xi) = match &out.status {
        KempfNessStatus::Minimum(x) => ("minimum", x),
        KempfNessStatus::Divergent(x) => ("divergent", x),
    };
    let body = obj(vec![
        ("point", state_json(&v)),
        ("status", json!(status)),
        (
            if status == "minimum" {
                "xi"
            } else {
                "direction"
            },
            json!(xi.0),
        ),
        ("value", json!(out.value)),
        ("iterations", json!(out.iterations)),
    ]);
    Ok(ok(output::report(
        ctx.name,
        ctx.cli.seed,
        Some(&config_hash(&rep)),
        body,
    )))
}

fn invariants(ctx: &Ctx) -> Result<Outcome, CliError> {
    ctx.json_only()?;
    let rep = ctx.rep()?;
    let basis = hilbert_basis(&rep, ctx.cli.degree_cap)?;
    let strata = enumerate_strata(&rep)?;
    let needed = match basis.completeness {
        Completeness::Certified => Value::Null,
        Completeness::Truncated { needed_degree } => json!(needed_degree),
    };
    let generators: Vec<Value> = basis
        .generators
        .iter()
        .map(|g| json!({"exponents": g.exps, "degree": g.degree, "weight": g.weight}))
        .collect();
    let strata: Vec<Value> = strata
        .iter()
        .map(|s| {
            json!({
                "dimension": s.dimension,
                "character_lattice": s.character_lattice.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "stabilizer_kernel": s.stabilizer_kernel.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "support_patterns": s.support_patterns,
            })
        })
        .collect();
    let body = obj(vec![
        ("level", rationals_json(rep.level())),
        (
            "hilbert_basis",
            json!({
                "degree_cap": basis.degree_cap,
                "certified": basis.is_certified(),
                "needed_degree": needed,
                "generators": generators,
                "extreme_rays": basis.extreme_rays,
            }),
        ),
        ("strata", Value::Array(strata)),
    ]);
    Ok(ok(output::report(
        ctx.name,
        ctx.cli.seed,
        Some(&config_hash(&rep)),
        body,
    )))
}

fn levels(rep: &RepSpec, given: &[String]) -> Result<Vec<Vec<Rational>>, CliError> {
    if given.is_empty() {
        Ok(vec![rep.level().to_vec()])
    } else {
        given.iter().map(|s| parse_level(s)).collect()
    }
}

fn multiplicity(ctx: &Ctx, lambda: &[String], degree: &str) -> Result<Outcome, CliError> {
    let rep = ctx.rep()?;
    let hash = config_hash(&rep);
    let degrees = parse_degrees(degree)?;
    let mut rows = Vec::new();
    if rep.is_torus() {
        for lam in levels(&rep, lambda)? {
            for &k in &degrees {
                let count = weight_multiplicity(&rep, &lam, k)?;
                rows.push(obj(vec![
                    ("lambda", json!(level_string(&lam))),
                    ("degree", json!(k)),
                    ("count", json!(count.to_string())),
                ]));
            }
        }
    } else {
        let weights: Vec<u32> = if lambda.is_empty() {
            vec![0]
        } else {
            lambda
                .iter()
                .map(|s| {
                    s.trim().parse().map_err(|_| {
                        CliError::Usage(format!(
                            "SU(2) highest weight must be a nonnegative integer: {s:?}"
                        ))
                    })
                })
                .collect::<Result<_, _>>()?
        };
        for m in weights {
            for &k in &degrees {
                let count = su2_multiplicity(&rep, m, k)?;
                rows.push(obj(vec![
                    ("lambda", json!(m.to_string())),
                    ("degree", json!(k)),
                    ("count", json!(count.to_string())),
                ]));
            }
        }
    }
    Ok(ok(ctx.table(
        Some(&hash),
        &["lambda", "degree", "count"],
        rows,
        Map::new(),
    )))
}

fn ehrhart(ctx: &Ctx, lambda: Option<&str>, k0: u64, rmax: u64) -> Result<Outcome, CliError> {
    ctx.json_only()?;
    let rep = ctx.rep()?;
    let lam = match lambda {
        Some(s) => parse_level(s)?,
        None => rep.level().to_vec(),
    };
    let fit = symquot_core::ehrhart_fit(&rep, &lam, k0, rmax)?;
    let failures: Vec<String> = if fit.leading_matches_volume {
        vec![]
    } else {
        vec!["leading coefficient differs from volume / dim!".into()]
    };
    let body = obj(vec![
        ("lambda", json!(level_string(&lam))),
        ("k0", json!(fit.k0)),
        ("period", json!(fit.period)),
        ("dimension", json!(fit.dimension)),
        (
            "samples",
            Value::Array(
                fit.samples
                    .iter()
                    .map(|(r, c)| json!([r, c.to_string()]))
                    .collect(),
            ),
        ),
        ("coefficients", rationals_json(&fit.coefficients)),
        (
            "normalized_volume",
            json!(format_rational(&fit.normalized_volume)),
        ),
        ("leading_matches_volume", json!(fit.leading_matches_volume)),
        ("failures", json!(failures)),
    ]);
    let code = if failures.is_empty() {
        EXIT_OK
    } else {
        EXIT_FAILED
    };
    Ok(Outcome {
        code,
        output: output::report(ctx.name, ctx.cli.seed, Some(&config_hash(&rep)), body),
    })
}

fn qr_row(
    source: &str,
    index: usize,
    rep: &RepSpec,
    lam: &str,
    c: &symquot_core::QrCheck,
) -> Map<String, Value> {
    obj(vec![
        ("source", json!(source)),
        ("index", json!(index)),
        ("config", json!(crate::config::serialize_config(rep))),
        ("lambda", json!(lam)),
        ("degree", json!(c.degree)),
        ("upstairs", json!(c.upstairs.to_string())),
        ("downstairs", json!(c.downstairs.to_string())),
        ("equal", json!(c.equal)),
    ])
}

fn verify(ctx: &Ctx, lambda: &[String], degree: &str, batch: usize) -> Result<Outcome, CliError> {
    let rep = match (&ctx.cli.rep, batch) {
        (None, 0) => return Err(CliError::Usage("`verify-qr` needs --rep or --batch".into())),
        (None, _) => None,
        (Some(_), _) => Some(ctx.rep()?),
    };
    let hash = rep.as_ref().map(config_hash);
    let mut rows = Vec::new();
    if let Some(rep) = &rep {
        let degrees = parse_degrees(degree)?;
        if rep.is_torus() {
            for lam in levels(rep, lambda)? {
                for &k in &degrees {
                    let c = verify_qr(rep, &lam, k)?;
                    rows.push(qr_row("rep", rows.len(), rep, &level_string(&lam), &c));
                }
            }
        } else {
            if !lambda.is_empty() {
                return Err(CliError::Usage(
                    "SU(2) verification takes no --lambda".into(),
                ));
            }
            for &k in &degrees {
                let c = verify_su2_dimension(rep, k)?;
                rows.push(qr_row("rep", rows.len(), rep, "0,0,0", &c));
            }
        }
    }
    let mut g = InstanceGen::new(ctx.cli.seed);
    for i in 0..batch {
        let (r, lam, k) = random_qr_instance(&mut g);
        let c = verify_qr(&r, &lam, k)?;
        rows.push(qr_row("batch", i, &r, &level_string(&lam), &c));
    }
    let failures: Vec<Value> = rows
        .iter()
        .filter(|r| r["equal"] == json!(false))
        .map(|r| json!(format!("{} row {}", r["source"], r["index"])))
        .collect();
    let code = if failures.is_empty() {
        EXIT_OK
    } else {
        EXIT_FAILED
    };
    let extra = obj(vec![
        ("all_equal", json!(failures.is_empty())),
        ("failures", Value::Array(failures)),
    ]);
    let columns = [
        "source",
        "index",
        "config",
        "lambda",
        "degree",
        "upstairs",
        "downstairs",
        "equal",
    ];
    Ok(Outcome {
        code,
        output: ctx.table(hash.as_deref(), &columns, rows, extra),
    })
}

/// Torus with `n ∈ [2, 5]`, `d ∈ [1, 2]`, weights in `[-3, 3]`, a random
/// mode, level components `p/q` with `p ∈ [-2, 2]`, `q ∈ [1, 2]`, and a
/// degree in `[0, 8]`.
pub fn random_qr_instance(g: &mut InstanceGen) -> (RepSpec, Vec<Rational>, u64) {
    let mode = if g.int_in(0, 1) == 0 {
        Mode::Affine
    } else {
        Mode::Projective
    };
    let rep = g.torus((2, 5), (1, 2), 3, mode, &[]);
    let lam: Vec<Rational> = (0..rep.lie_dim())
        .map(|_| Rational::new(g.int_in(-2, 2).into(), g.int_in(1, 2).into()))
        .collect();
    let k = g.int_in(0, 8) as u64;
    (rep, lam, k)
}

fn identities(ctx: &Ctx, batch: usize) -> Result<Outcome, CliError> {
    let rep = ctx.rep()?;
    let hash = config_hash(&rep);
    let cone = rep.with_mode(Mode::Affine);
    let mut g = InstanceGen::new(ctx.cli.seed);
    let mut rows = Vec::with_capacity(batch);
    let mut failures = Vec::new();
    for i in 0..batch {
        let v = g.state(cone.n());
        let xi = g.lie(cone.lie_dim());
        let r = identity_residuals(&cone, &v, &xi)?;
        if r.max().is_nan() || r.max() > IDENTITY_TOLERANCE {
            failures.push(json!(format!("row {i}: max residual {:e}", r.max())));
        }
        rows.push(obj(vec![
            ("index", json!(i)),
            ("grad_identity", json!(r.grad_identity)),
            ("angle_identity", json!(r.angle_identity)),
            ("mu_identity", json!(r.mu_identity)),
            ("isotropy", r.isotropy.map_or(Value::Null, |x| json!(x))),
        ]));
    }
    let code = if failures.is_empty() {
        EXIT_OK
    } else {
        EXIT_FAILED
    };
    let extra = obj(vec![
        ("evaluated_on", json!("affine cone")),
        ("tolerance", json!(IDENTITY_TOLERANCE)),
        ("failures", Value::Array(failures)),
    ]);
    let columns = [
        "index",
        "grad_identity",
        "angle_identity",
        "mu_identity",
        "isotropy",
    ];
    Ok(Outcome {
        code,
        output: ctx.table(Some(&hash), &columns, rows, extra),
    })
}
