use std::path::PathBuf;

use abyss::algorithms::{
    certify_osc, cousin_subcover, indicator_rep, inf_usco, is_continuous_at, jordan_nbv, jump_enum,
    limits_lr, lsco_modulus_on_cf, modulus_continuity_qc, modulus_qc, modulus_regulation,
    osc_point, point_of_continuity_qc, point_of_continuity_usco, rm_code_from_r2_baire1,
    sup_baire1, sup_qc, total_variation_nbv, usco_separator, CousinClass, UscoModulus,
};
use abyss::reductions::{
    demo_abyss, realiser_from_cliq_modulus, realiser_from_regulation_modulus, realiser_from_sup,
    CliqModulusOracle, RegulationOracle, SupOracle,
};
use abyss::universe::{parse_closed, parse_function, parse_open, parse_set};
use abyss::{AbyssError, Precision, Rational, Surd, SymbolicFn, DEFAULT_FUEL};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::envelope::{failure, success, Outcome};

#[derive(Parser, Debug)]
#[command(
    name = "abyss",
    version,
    about = "Exact oracle-relative analysis on a symbolic function universe"
)]
pub struct Cli {
    /// Search budget; overrides ABYSS_FUEL.
    #[arg(long, global = true)]
    fuel: Option<u64>,
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Also write `x,f(x)` on the dyadic grid as CSV.
    #[arg(long, global = true, value_name = "PATH")]
    plot_data: Option<PathBuf>,
    /// Grid depth for --plot-data.
    #[arg(long, global = true, default_value_t = 8)]
    plot_depth: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SupMethod {
    Auto,
    Qc,
    Baire1,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModulusKind {
    Continuity,
    Qc,
    Usco,
    Lsco,
    Regulation,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PocClass {
    Qc,
    Usco,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RealiserMethod {
    Sup,
    Cliq,
    Regulation,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact value at a point.
    Eval {
        #[arg(long = "fn")]
        function: String,
        #[arg(long)]
        x: String,
    },
    /// Supremum on [P, Q] to within 2^-k.
    Sup {
        #[arg(long = "fn")]
        function: String,
        #[arg(long, num_args = 2, value_names = ["P", "Q"], default_values = ["0", "1"])]
        interval: Vec<String>,
        #[arg(long, default_value_t = 10)]
        k: u32,
        #[arg(long, value_enum, default_value = "auto")]
        method: SupMethod,
    },
    /// Infimum of an usco function on [P, Q] to within 2^-k.
    Inf {
        #[arg(long = "fn")]
        function: String,
        #[arg(long, num_args = 2, value_names = ["P", "Q"], default_values = ["0", "1"])]
        interval: Vec<String>,
        #[arg(long, default_value_t = 10)]
        k: u32,
    },
    /// Oscillation at a point to within 2^-k.
    Osc {
        #[arg(long = "fn")]
        function: String,
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 8)]
        k: u32,
    },
    /// Whether the function is continuous at a point.
    Continuity {
        #[arg(long = "fn")]
        function: String,
        #[arg(long)]
        x: String,
    },
    /// One value of a modulus.
    Modulus {
        #[arg(long = "fn")]
        function: String,
        #[arg(long, value_enum)]
        kind: ModulusKind,
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 4)]
        k: u32,
        /// Ball exponent for the quasi-continuity modulus.
        #[arg(long, default_value_t = 2)]
        n: u32,
    },
    /// A point of continuity, certified to oscillation below 2^-k.
    PointOfContinuity {
        #[arg(long = "fn")]
        function: String,
        #[arg(long, default_value_t = 8)]
        k: u32,
        #[arg(long, value_enum, default_value = "qc")]
        class: PocClass,
        /// Upper bound on the function, needed for the usco method.
        #[arg(long)]
        top: Option<String>,
    },
    /// Finite subcover of the balls B(x, f(x)).
    Cousin {
        #[arg(long = "fn")]
        function: String,
        #[arg(long, default_value = "qc")]
        class: String,
    },
    /// One-sided limits at a point.
    Limits {
        #[arg(long = "fn")]
        function: String,
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 10)]
        k: u32,
    },
    /// Jump points among candidates of index at most CAP.
    Jumps {
        #[arg(long = "fn")]
        function: String,
        #[arg(long, default_value_t = 16)]
        cap: u64,
    },
    /// Total variation on [0, x].
    Variation {
        #[arg(long = "fn")]
        function: String,
        #[arg(long, default_value = "1")]
        x: String,
        #[arg(long, default_value_t = 10)]
        k: u32,
    },
    /// Jordan decomposition f = g - h evaluated at a point.
    Jordan {
        #[arg(long = "fn")]
        function: String,
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 10)]
        k: u32,
    },
    /// Code of an open set from a Baire-1 representation of its indicator.
    RmCode {
        /// Open set as A..B,C..D.
        #[arg(long)]
        open: String,
        /// Representation; defaults to the ramp sequence of the open set.
        #[arg(long = "fn")]
        function: Option<String>,
        #[arg(long, default_value_t = 8)]
        depth: u32,
    },
    /// An usco function that is 0 on one closed set and 1 on another.
    Separator {
        #[arg(long)]
        c0: String,
        #[arg(long)]
        c1: String,
    },
    /// A point outside a countable set, from a hypothetical functional.
    Realiser {
        #[arg(long, value_enum)]
        method: RealiserMethod,
        #[arg(long, default_value = "canonical")]
        set: String,
        #[arg(long, default_value_t = 16)]
        k: u32,
        /// Certify members up to this index.
        #[arg(long, default_value_t = 16)]
        cert: u64,
    },
    /// Rational-grid baseline against the exact oracle.
    DemoAbyss {
        #[arg(long, default_value = "penny")]
        family: String,
        #[arg(long, default_value_t = 20)]
        depth: u32,
    },
    /// Runs the acceptance suite and prints its transcript.
    Selftest {
        #[arg(long, default_value_t = crate::suite::DEFAULT_SEED)]
        seed: u64,
    },
}

fn fuel_from_env(flag: Option<u64>) -> Result<u64, AbyssError> {
    if let Some(f) = flag {
        return Ok(f);
    }
    match std::env::var("ABYSS_FUEL") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| AbyssError::Parse(format!("ABYSS_FUEL={v:?} is not a number"))),
        Err(_) => Ok(DEFAULT_FUEL),
    }
}

fn load_function(spec: &str) -> Result<SymbolicFn, AbyssError> {
    let s = spec.trim();
    if s.starts_with('{') || !std::path::Path::new(s).is_file() {
        return parse_function(s);
    }
    let text = std::fs::read_to_string(s).map_err(|e| AbyssError::Parse(format!("{s}: {e}")))?;
    parse_function(&text)
}

fn rational(s: &str) -> Result<Rational, AbyssError> {
    s.parse()
}

fn point(s: &str) -> Result<Surd, AbyssError> {
    s.parse()
}

fn interval(v: &[String]) -> Result<(Rational, Rational), AbyssError> {
    Ok((rational(&v[0])?, rational(&v[1])?))
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialise")
}

fn plot_csv(f: &SymbolicFn, depth: u32) -> Result<String, AbyssError> {
    if depth > 16 {
        return Err(AbyssError::Domain(format!(
            "plot depth {depth} is above 16"
        )));
    }
    let mut out = String::from("x,fx,x_approx,fx_approx\n");
    for j in 0..=(1u64 << depth) {
        let x = Rational::dyadic(j, depth);
        let v = f.eval(&Surd::from(&x))?;
        out.push_str(&format!("{x},{v},{},{}\n", x.to_f64(), v.to_f64()));
    }
    Ok(out)
}

struct Ctx {
    fuel: u64,
    plot: Option<(PathBuf, u32)>,
}

impl Ctx {
    fn function(&self, spec: &str, input: &mut Value) -> Result<SymbolicFn, AbyssError> {
        let f = load_function(spec)?;
        input["function"] = to_value(&f);
        if let Some((path, depth)) = &self.plot {
            let csv = plot_csv(&f, *depth)?;
            std::fs::write(path, csv)
                .map_err(|e| AbyssError::Domain(format!("{}: {e}", path.display())))?;
        }
        Ok(f)
    }
}

fn name(c: &Command) -> &'static str {
    match c {
        Command::Eval { .. } => "eval",
        Command::Sup { .. } => "sup",
        Command::Inf { .. } => "inf",
        Command::Osc { .. } => "osc",
        Command::Continuity { .. } => "continuity",
        Command::Modulus { .. } => "modulus",
        Command::PointOfContinuity { .. } => "point-of-continuity",
        Command::Cousin { .. } => "cousin",
        Command::Limits { .. } => "limits",
        Command::Jumps { .. } => "jumps",
        Command::Variation { .. } => "variation",
        Command::Jordan { .. } => "jordan",
        Command::RmCode { .. } => "rm-code",
        Command::Separator { .. } => "separator",
        Command::Realiser { .. } => "realiser",
        Command::DemoAbyss { .. } => "demo-abyss",
        Command::Selftest { .. } => "selftest",
    }
}

pub(crate) fn execute(cli: Cli) -> Outcome {
    let command = name(&cli.command);
    let mut input = json!({});
    let out = match fuel_from_env(cli.fuel) {
        Ok(fuel) => {
            input["fuel"] = json!(fuel);
            let ctx = Ctx {
                fuel,
                plot: cli.plot_data.clone().map(|p| (p, cli.plot_depth)),
            };
            match dispatch(&ctx, cli.command, &mut input) {
                Ok((result, code)) => {
                    let mut o = success(command, input, result);
                    o.code = code;
                    o
                }
                Err(e) => failure(command, input, &e),
            }
        }
        Err(e) => failure(command, input, &e),
    };
    match &cli.output {
        Some(path) => match std::fs::write(path, &out.stdout) {
            Ok(()) => Outcome {
                stdout: String::new(),
                ..out
            },
            Err(e) => Outcome {
                code: 1,
                stdout: String::new(),
                stderr: format!("abyss: {}: {e}\n", path.display()),
            },
        },
        None => out,
    }
}

fn dispatch(ctx: &Ctx, cmd: Command, input: &mut Value) -> Result<(Value, i32), AbyssError> {
    let fuel = ctx.fuel;
    let ok = |v: Value| Ok((v, 0));
    match cmd {
        Command::Eval { function, x } => {
            let f = ctx.function(&function, input)?;
            let x = point(&x)?;
            input["x"] = to_value(&x);
            let v = f.eval(&x)?;
            ok(json!({ "value": v, "approx": v.to_f64(), "classes": f.tags().names() }))
        }
        Command::Sup {
            function,
            interval: iv,
            k,
            method,
        } => {
            let f = ctx.function(&function, input)?;
            let (p, q) = interval(&iv)?;
            input["interval"] = json!([p, q]);
            input["k"] = json!(k);
            let baire = matches!(method, SupMethod::Baire1)
                || (matches!(method, SupMethod::Auto) && matches!(f, SymbolicFn::Baire1 { .. }));
            let r = if baire {
                sup_baire1(&f, &p, &q, Precision(k), fuel)?
            } else {
                sup_qc(&f, &p, &q, Precision(k), fuel)?
            };
            ok(json!({ "method": if baire { "baire1" } else { "qc" }, "interval": r }))
        }
        Command::Inf {
            function,
            interval: iv,
            k,
        } => {
            let f = ctx.function(&function, input)?;
            let (p, q) = interval(&iv)?;
            input["interval"] = json!([p, q]);
            input["k"] = json!(k);
            ok(json!({ "interval": inf_usco(&f, &p, &q, Precision(k), fuel)? }))
        }
        Command::Osc { function, x, k } => {
            let f = ctx.function(&function, input)?;
            let x = point(&x)?;
            input["x"] = to_value(&x);
            input["k"] = json!(k);
            ok(json!({ "interval": osc_point(&f, &x, Precision(k), fuel)? }))
        }
        Command::Continuity { function, x } => {
            let f = ctx.function(&function, input)?;
            let x = point(&x)?;
            input["x"] = to_value(&x);
            let r = is_continuous_at(&f, &x, fuel)?;
            ok(json!({ "continuous": r.value, "fuel_spent": r.fuel_spent }))
        }
        Command::Modulus {
            function,
            kind,
            x,
            k,
            n,
        } => {
            let f = ctx.function(&function, input)?;
            let x = point(&x)?;
            input["x"] = to_value(&x);
            input["k"] = json!(k);
            match kind {
                ModulusKind::Continuity => {
                    let g = modulus_continuity_qc(&f, fuel)?.at(&x, k)?;
                    ok(json!({ "kind": "continuity", "value": g }))
                }
                ModulusKind::Qc => {
                    input["n"] = json!(n);
                    let (c, d) = modulus_qc(&f, &x, k, n, fuel)?;
                    ok(json!({ "kind": "qc", "interval": [c, d] }))
                }
                ModulusKind::Usco => {
                    let psi = match &f {
                        SymbolicFn::Penny { set } => UscoModulus::penny(set.clone()),
                        _ => UscoModulus::searched(&f, fuel),
                    };
                    let r = psi.radius(&x, k)?;
                    ok(json!({ "kind": "usco", "modulus": psi.name(), "radius": r }))
                }
                ModulusKind::Lsco => {
                    ok(json!({ "kind": "lsco", "value": lsco_modulus_on_cf(&f, &x, k, fuel)? }))
                }
                ModulusKind::Regulation => ok(
                    json!({ "kind": "regulation", "value": modulus_regulation(&f, fuel)?.at(&x, k)? }),
                ),
            }
        }
        Command::PointOfContinuity {
            function,
            k,
            class,
            top,
        } => {
            let f = ctx.function(&function, input)?;
            input["k"] = json!(k);
            let p = match class {
                PocClass::Qc => point_of_continuity_qc(&f, k, fuel)?,
                PocClass::Usco => {
                    let top = rational(top.as_deref().ok_or_else(|| {
                        AbyssError::Parse(
                            "the usco method needs --top, an upper bound on the function".into(),
                        )
                    })?)?;
                    input["top"] = json!(top);
                    let psi = match &f {
                        SymbolicFn::Penny { set } => UscoModulus::penny(set.clone()),
                        _ => UscoModulus::searched(&f, fuel),
                    };
                    point_of_continuity_usco(&f, &psi, &top, k, fuel)?
                }
            };
            let check = certify_osc(&f, &Surd::from(&p.point), k, fuel)?;
            ok(json!({ "point": p, "recheck": check.value }))
        }
        Command::Cousin { function, class } => {
            let f = ctx.function(&function, input)?;
            let class: CousinClass = class.parse()?;
            input["class"] = to_value(&class);
            ok(to_value(&cousin_subcover(&f, class, fuel)?))
        }
        Command::Limits { function, x, k } => {
            let f = ctx.function(&function, input)?;
            let x = point(&x)?;
            input["x"] = to_value(&x);
            input["k"] = json!(k);
            ok(to_value(&limits_lr(&f, &x, k)?))
        }
        Command::Jumps { function, cap } => {
            let f = ctx.function(&function, input)?;
            input["cap"] = json!(cap);
            ok(json!({ "jumps": jump_enum(&f, cap)? }))
        }
        Command::Variation { function, x, k } => {
            let f = ctx.function(&function, input)?;
            let x = point(&x)?;
            input["x"] = to_value(&x);
            input["k"] = json!(k);
            ok(json!({ "interval": total_variation_nbv(&f, &x, k)? }))
        }
        Command::Jordan { function, x, k } => {
            let f = ctx.function(&function, input)?;
            let x = point(&x)?;
            input["x"] = to_value(&x);
            input["k"] = json!(k);
            let j = jordan_nbv(&f)?;
            ok(json!({
                "f": f.eval(&x)?,
                "g": j.g(&x)?,
                "h": j.h(&x)?,
                "g_interval": j.g_within(&x, k)?,
                "h_interval": j.h_within(&x, k)?,
            }))
        }
        Command::RmCode {
            open,
            function,
            depth,
        } => {
            let o = parse_open(&open)?;
            input["open"] = to_value(&o);
            input["depth"] = json!(depth);
            let rep = match function {
                Some(spec) => ctx.function(&spec, input)?,
                None => indicator_rep(&o),
            };
            ok(to_value(&rm_code_from_r2_baire1(&o, &rep, depth, fuel)?))
        }
        Command::Separator { c0, c1 } => {
            let (c0, c1) = (parse_closed(&c0)?, parse_closed(&c1)?);
            input["c0"] = to_value(&c0);
            input["c1"] = to_value(&c1);
            let g = usco_separator(&c0, &c1)?;
            ok(json!({ "separator": g, "classes": g.tags().names() }))
        }
        Command::Realiser {
            method,
            set,
            k,
            cert,
        } => {
            let set = parse_set(&set)?;
            input["set"] = to_value(&set);
            input["k"] = json!(k);
            input["cert"] = json!(cert);
            let r = match method {
                RealiserMethod::Sup => realiser_from_sup(&SupOracle::exact(), &set, k, cert)?,
                RealiserMethod::Cliq => realiser_from_cliq_modulus(
                    &CliqModulusOracle::canonical(set.clone()),
                    &set,
                    k,
                    cert,
                )?,
                RealiserMethod::Regulation => {
                    let m = RegulationOracle::canonical(set.clone(), fuel)?;
                    realiser_from_regulation_modulus(&m, &set, k, cert, fuel)?
                }
            };
            ok(json!({ "realiser": r, "verified": r.verify() }))
        }
        Command::DemoAbyss { family, depth } => ok(to_value(&demo_abyss(&family, depth)?)),
        Command::Selftest { seed } => {
            input["seed"] = json!(seed);
            let report = crate::suite::run_all(seed);
            let code = if report.pass { 0 } else { 4 };
            Ok((to_value(&report), code))
        }
    }
}
