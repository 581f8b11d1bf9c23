//! `lagcorr`: command-line access to Lagrangian correspondences, the extension cocycles,
//! and finite Heisenberg groups.
//!
//! Exit codes: 0 on success, 1 on a validation error (bad input), 2 on an invariant
//! violation or a failed verification suite.

mod emit;
mod scenario;
mod verify;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lagcorr::arith::BaseRing;
use lagcorr::cocycle::{
    ext_mul, lambda_report, n_coeff_report, obstruction_witness, ExtElement, LambdaRoute,
};
use lagcorr::correspondence::compose;
use lagcorr::heisenberg::{
    brute_force_multiplicities, equivalent, hom_space, invariants_dim, is_irreducible_weight1,
    isotropic_subgroups, lift_isotropic, maximal_isotropic, maximal_isotropic_subgroups,
    restrict_multiplicities, schrodinger, HeisenbergData, HomRoute, Multiplicities, SkewPairing,
    Subgroup,
};
use lagcorr::isogeny::{index, inertia};
use lagcorr::{Error, ErrorClass};

use emit::{int, quad, rat, render, sp, Format};
use scenario::{parse_orders, parse_ring, parse_vectors, Context, Res};

#[derive(Parser, Debug)]
#[command(
    name = "lagcorr",
    version,
    about = "Lagrangian correspondences over powers of an elliptic curve"
)]
struct Cli {
    /// Base ring: Z, or D=<d> for the CM order of discriminant d in {-1, -2, -3, -7, -11}
    #[arg(long, global = true)]
    ring: Option<String>,
    /// Genus g of A = E^g
    #[arg(long, global = true)]
    genus: Option<usize>,
    /// Scenario file (JSON) with named elements, correspondences, forms and tasks
    #[arg(long, global = true)]
    input: Option<std::path::PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Json)]
    format: OutFormat,
    /// Seed for randomized suites
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Sample count for randomized suites
    #[arg(long, global = true, default_value_t = 100)]
    samples: usize,
    /// Largest |n| tried when searching for shears
    #[arg(long, global = true, default_value_t = lagcorr::cocycle::DEFAULT_SHEAR_BOUND)]
    shear_bound: u32,
    /// Largest group order enumerated by brute-force routines
    #[arg(long, global = true, default_value_t = lagcorr::heisenberg::DEFAULT_BRUTE_BOUND)]
    brute_bound: usize,
    /// Include secondary data (routes, unsigned indices)
    #[arg(long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Compose two correspondences: pi, q, |pi0|, d, N_Z and N
    Compose { l: String, m: String },
    /// lambda(g1, g2) on U
    Lambda { g1: String, g2: String },
    /// lambda on all ordered pairs of a comma-separated set
    LambdaTable {
        #[arg(default_value = "I,S,F1,F-1,T1,T-1,S^2")]
        set: String,
    },
    /// N(g1, g2), by default on graph presentations
    Ncoeff {
        g1: String,
        g2: String,
        /// Presentation of g1 (a correspondence expression)
        #[arg(long)]
        l1: Option<String>,
        /// Presentation of g2
        #[arg(long)]
        l2: Option<String>,
    },
    /// Index of a Hermitian form: an integer d (d*I), a JSON matrix, or a scenario name
    Index {
        #[arg(allow_hyphen_values = true)]
        h: String,
        /// Positive definite reference form
        #[arg(long)]
        reference: Option<String>,
    },
    /// Multiply lifts (g, 1, 0) of the listed elements in the central extension, left to right
    ExtMul {
        #[arg(required = true)]
        chain: Vec<String>,
    },
    /// Finite Heisenberg groups
    Heisenberg {
        #[command(subcommand)]
        cmd: HeisCmd,
    },
    /// Evaluate the mod-squares obstruction at g_sqrtD
    Obstruction {
        #[arg(allow_hyphen_values = true)]
        d: i64,
    },
    /// Run a seeded property suite: cocycle, correspondence, index, heisenberg, obstruction or all
    Verify { suite: String },
    /// Run the task list of the --input scenario
    Run,
}

#[derive(Subcommand, Debug)]
enum HeisCmd {
    /// Schrödinger representation of the split group (Z/n1)^2 + (Z/n2)^2 + ...
    Schrodinger { orders: String },
    /// Multiplicities of the restriction to C^perp, formula and brute force
    Multiplicities {
        orders: String,
        /// Generators of C as "x1,x2,..;y1,y2,.."; all isotropic subgroups when omitted
        #[arg(long)]
        gens: Option<String>,
    },
    /// Degree and dimension of Hom(Y, Z) for two transversal Lagrangians
    Homspace { y: String, z: String },
}

struct Out {
    value: Value,
    /// Set when the command ran but found a violated property (verify suites).
    violated: bool,
}

impl From<Value> for Out {
    fn from(value: Value) -> Self {
        Out { value, violated: false }
    }
}

fn route_label(r: &LambdaRoute) -> String {
    match r {
        LambdaRoute::Unit => "unit".into(),
        LambdaRoute::Closed => "closed".into(),
        LambdaRoute::DegenerateFibre => "degenerate-fibre".into(),
        LambdaRoute::Reduced(_) => "reduced".into(),
    }
}

fn lambda_json(cli: &Cli, cx: &Context, a: &str, b: &str) -> Res<Value> {
    let r = lambda_report(&cx.element(a)?, &cx.element(b)?, cli.shear_bound)?;
    let mut v = json!({"lambda": r.value});
    if cli.verbose {
        v["route"] = json!(route_label(&r.route));
        if let LambdaRoute::Reduced(w) = &r.route {
            v["intermediate"] = sp(w);
        }
        v["unsigned_index"] = json!(r.unsigned_index);
        v["second_value"] = json!(r.second_value);
    }
    Ok(v)
}

fn split_group(orders: &str) -> Res<HeisenbergData> {
    Ok(HeisenbergData::standard(SkewPairing::standard(&parse_orders(orders)?)?))
}

fn mult_json(c: &Subgroup, f: &Multiplicities, brute_agrees: bool) -> Value {
    json!({
        "c_order": c.order(),
        "c_members": c.members(),
        "dim_v": f.dim_v,
        "quotient_dim": f.quotient_dim,
        "characters": f.counts.len(),
        "multiplicities": f.counts.iter().map(|k| k.multiplicity).collect::<Vec<_>>(),
        "brute_force_agrees": brute_agrees,
    })
}

fn heisenberg(cli: &Cli, cx: &Context, cmd: &HeisCmd) -> Res<Out> {
    let bound = cli.brute_bound;
    match cmd {
        HeisCmd::Schrodinger { orders } => {
            let h = split_group(orders)?;
            let sub = maximal_isotropic(h.pairing(), bound)?;
            let lift = lift_isotropic(&h, &sub)?;
            let rho = schrodinger(&h, &lift)?;
            rho.verify(&h)?;
            // every other model, when the group is small enough to enumerate
            let (models, all_equivalent) = match maximal_isotropic_subgroups(h.pairing(), bound) {
                Ok(subs) => {
                    let mut eq = true;
                    for s in &subs {
                        eq &= equivalent(&rho, &schrodinger(&h, &lift_isotropic(&h, s)?)?);
                    }
                    (json!(subs.len()), json!(eq))
                }
                Err(Error::SearchExhausted(_)) => (Value::Null, Value::Null),
                Err(e) => return Err(e),
            };
            let violated = all_equivalent == json!(false);
            Ok(Out {
                value: json!({
                    "group_order": h.group().order(),
                    "dim": rho.dim(),
                    "irreducible": is_irreducible_weight1(&rho, &h)?,
                    "invariants_dim": invariants_dim(&rho, &lift)?,
                    "maximal_isotropics": models,
                    "all_models_equivalent": all_equivalent,
                    "phase_order": rho.phase_order(),
                }),
                violated,
            })
        }
        HeisCmd::Multiplicities { orders, gens } => {
            let h = split_group(orders)?;
            let subs = match gens {
                Some(g) => vec![Subgroup::generated(h.group(), &parse_vectors(g)?)],
                None => isotropic_subgroups(h.pairing(), bound)?,
            };
            let mut rows = vec![];
            let mut violated = false;
            for c in &subs {
                let f = restrict_multiplicities(&h, c, bound)?;
                let b = brute_force_multiplicities(&h, c, bound)?;
                violated |= f != b;
                rows.push(mult_json(c, &f, f == b));
            }
            Ok(Out { value: json!({"group_order": h.group().order(), "rows": rows}), violated })
        }
        HeisCmd::Homspace { y, z } => {
            let h = hom_space(&cx.correspondence(y)?, &cx.correspondence(z)?)?;
            let (route, shear) = match h.route {
                HomRoute::Direct => ("direct", Value::Null),
                HomRoute::Twisted { shear } => ("twisted", json!(shear)),
            };
            let mut v = json!({
                "degree": h.degree,
                "dimension": int(&h.dimension),
                "intersection_order": int(&h.intersection_order),
            });
            if cli.verbose {
                v["route"] = json!(route);
                v["shear"] = shear;
            }
            Ok(v.into())
        }
    }
}

fn execute(cli: &Cli, cx: &Context, cmd: &Cmd) -> Res<Out> {
    Ok(match cmd {
        Cmd::Compose { l, m } => {
            let z = compose(&cx.correspondence(l)?, &cx.correspondence(m)?)?;
            json!({
                "pi": sp(&z.pi()?),
                "q": int(&z.q()?),
                "pi0": int(&z.pi0_order),
                "d": int(&z.d_image_degree),
                "N_Z": int(&z.n_z()?),
                "N": int(&z.n_total()?),
            })
            .into()
        }
        Cmd::Lambda { g1, g2 } => lambda_json(cli, cx, g1, g2)?.into(),
        Cmd::LambdaTable { set } => {
            let names: Vec<&str> =
                set.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            let mut rows = vec![];
            for a in &names {
                for b in &names {
                    let mut r = lambda_json(cli, cx, a, b)?;
                    r["g1"] = json!(a);
                    r["g2"] = json!(b);
                    rows.push(r);
                }
            }
            json!({"rows": rows}).into()
        }
        Cmd::Ncoeff { g1, g2, l1, l2 } => {
            let (a, b) = (cx.element(g1)?, cx.element(g2)?);
            let la = cx.correspondence(l1.as_deref().unwrap_or(&format!("graph({g1})")))?;
            let lb = cx.correspondence(l2.as_deref().unwrap_or(&format!("graph({g2})")))?;
            let r = n_coeff_report(&a, &b, &la, &lb)?;
            json!({
                "N": int(&r.n),
                "pi0": int(&r.pi0_order),
                "d": int(&r.d_image_degree),
                "q_route_N_squared": r.q_route_square.as_ref().map(int),
            })
            .into()
        }
        Cmd::Index { h, reference } => {
            let h = cx.hermitian_form(h)?;
            let (np, nm, nz) = inertia(&h)?;
            let idx = match reference {
                Some(r) => Some(index(&h, &cx.hermitian_form(r)?)?),
                None if nz == 0 => Some(nm),
                None => None,
            };
            json!({"index": idx, "inertia": {"positive": np, "negative": nm, "zero": nz}}).into()
        }
        Cmd::ExtMul { chain } => {
            let mut acc: Option<ExtElement> = None;
            for name in chain {
                let x = ExtElement::lift(cx.element(name)?);
                acc = Some(match acc {
                    None => x,
                    Some(a) => ext_mul(&a, &x)?,
                });
            }
            let e = acc.expect("chain is nonempty");
            json!({"g": sp(&e.g), "m": rat(&e.m), "n": e.n}).into()
        }
        Cmd::Heisenberg { cmd } => heisenberg(cli, cx, cmd)?,
        Cmd::Obstruction { d } => {
            let w = obstruction_witness(*d)?;
            json!({
                "discriminant": w.discriminant,
                "sqrt_d": quad(&w.sqrt_d),
                "q": int(&w.q),
                "q_bar": int(&w.q_bar.0),
                "phi": quad(&w.phi),
                "nm_phi_class": int(&w.nm_phi_class.0),
                "det": quad(&w.det),
                "square_in_sl2_q": w.square_in_sl2_q,
                "nontrivial": w.nontrivial,
            })
            .into()
        }
        Cmd::Verify { suite } => {
            let settings = verify::Settings {
                seed: cli.seed,
                samples: cli.samples,
                ring: cli.ring.as_deref().map(parse_ring).transpose()?,
                shear_bound: cli.shear_bound,
                brute_bound: cli.brute_bound,
            };
            let (value, ok) = verify::run(suite, &settings)?;
            Out { value, violated: !ok }
        }
        Cmd::Run => {
            if cx.tasks.is_empty() {
                return Err(Error::EmptyInput("scenario has no tasks".into()));
            }
            let mut rows = vec![];
            let mut violated = false;
            for argv in &cx.tasks {
                let parsed = Cli::try_parse_from(
                    std::iter::once("lagcorr".to_string()).chain(argv.iter().cloned()),
                )
                .map_err(|e| Error::Shape(format!("task {argv:?}: {}", e.kind())))?;
                if matches!(parsed.cmd, Cmd::Run) {
                    return Err(Error::Shape("tasks cannot run scenarios".into()));
                }
                let row = match execute(cli, cx, &parsed.cmd) {
                    Ok(o) => {
                        violated |= o.violated;
                        json!({"task": argv.join(" "), "ok": !o.violated, "output": o.value})
                    }
                    Err(e) => {
                        violated |= e.class() == ErrorClass::Invariant;
                        json!({"task": argv.join(" "), "ok": false, "error": error_json(&e)})
                    }
                };
                rows.push(row);
            }
            Out { value: json!({"rows": rows}), violated }
        }
    })
}

fn error_json(e: &Error) -> Value {
    let class = match e.class() {
        ErrorClass::Validation => "validation",
        ErrorClass::Invariant => "invariant",
    };
    json!({"code": e.code(), "class": class, "message": e.to_string()})
}

fn context(cli: &Cli) -> Res<Context> {
    let ring = cli.ring.as_deref().map(parse_ring).transpose()?;
    if cli.genus == Some(0) {
        return Err(Error::Shape("genus must be positive".into()));
    }
    match &cli.input {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Shape(format!("cannot read {}: {e}", path.display())))?;
            let doc: Value = serde_json::from_str(&text)
                .map_err(|e| Error::Shape(format!("scenario JSON: {e}")))?;
            Context::from_scenario(&doc, ring, cli.genus)
        }
        None => Ok(Context::new(ring.unwrap_or(BaseRing::Integers), cli.genus.unwrap_or(1))),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // usage errors are validation errors (exit 1); help and version exit 0
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let format = match cli.format {
        OutFormat::Json => Format::Json,
        OutFormat::Csv => Format::Csv,
    };
    let result = context(&cli).and_then(|cx| execute(&cli, &cx, &cli.cmd));
    match result {
        Ok(out) => {
            print!("{}", render(&out.value, &format));
            ExitCode::from(if out.violated { 2 } else { 0 })
        }
        Err(e) => {
            print!("{}", render(&json!({"error": error_json(&e)}), &format));
            eprintln!("error: {e}");
            ExitCode::from(match e.class() {
                ErrorClass::Validation => 1,
                ErrorClass::Invariant => 2,
            })
        }
    }
}
