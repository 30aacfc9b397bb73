//! The `dfstab` command line: argument handling, dispatch to `dfstab-core`
//! and report rendering. [`run`] is the whole program minus process I/O so
//! that it can be driven from tests.

mod report;

use clap::{Parser, Subcommand};
use dfstab_core::ore::{adjoint, apply, indicial_at_point, infinity_data, ore_mul};
use dfstab_core::parse::{fmt_d_poly, fmt_poly_in, parse_d_poly, parse_operator, parse_poly, parse_ratfun};
use dfstab_core::stability::{
    bound_b, first_order_coefficient, first_order_sind_bounds, first_order_stable, inv_q_profile_to, katz_operator,
    katz_sind, verify_chain_identity, Analyzer,
};
use dfstab_core::{Error, OreOp, RatFun, Settings};
use serde_json::json;

pub use report::{step_certificate_holds, Format, Report};

pub const SCHEMA_VERSION: &str = "1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "dfstab",
    version,
    about = "Principal integrals and stability indices of linear differential operators"
)]
struct Cli {
    /// Largest block degree split by exhaustive factor search.
    #[arg(long, global = true, env = "DFSTAB_FACTOR_CAP", default_value_t = 6)]
    factor_cap: usize,
    /// Refuse chains deeper than this.
    #[arg(long, global = true, default_value_t = 64)]
    max_depth: usize,
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    text: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// The adjoint L* = sum (-D)^i a_i.
    Adjoint {
        #[arg(allow_hyphen_values = true)]
        operator: String,
    },
    /// L applied to a rational function.
    Apply {
        #[arg(allow_hyphen_values = true)]
        operator: String,
        #[arg(allow_hyphen_values = true)]
        function: String,
    },
    /// The product A*B.
    Mul {
        #[arg(allow_hyphen_values = true)]
        left: String,
        #[arg(allow_hyphen_values = true)]
        right: String,
    },
    /// Indicial data at infinity, or at a rational point with --at.
    Indicial {
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
        #[arg(allow_hyphen_values = true)]
        operator: String,
    },
    /// Principal integral chain L_0, ..., L_depth.
    Chain {
        #[arg(long)]
        depth: usize,
        /// Also expand L D^n = (prod I_i) L_n and recheck every certificate.
        #[arg(long)]
        verify: bool,
        #[arg(allow_hyphen_values = true)]
        operator: String,
    },
    /// Exact stability index with witnesses.
    Sind {
        #[arg(allow_hyphen_values = true)]
        operator: String,
    },
    /// Closed-form bounds for the index of D + f (give f or the operator).
    Bounds1 {
        #[arg(allow_hyphen_values = true)]
        input: String,
    },
    /// Stability verdict and normal form for D + f (give f or the operator).
    Stable1 {
        #[arg(allow_hyphen_values = true)]
        input: String,
    },
    /// Order profile of the chain of D + q'/q.
    ProfileInvq {
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        /// Compare against the computed chain and verify it.
        #[arg(long)]
        check: bool,
        /// Last chain index (default deg q + 1).
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Index of the operator p(D) + q(x).
    Katz {
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
    },
}

/// A failed command: message and exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_parse() { EXIT_USAGE } else { EXIT_DOMAIN };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: String) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message,
    }
}

/// Parses `f` or a first-order operator `a (D + f)` and returns `f`.
fn first_order_input(text: &str) -> Result<RatFun, Failure> {
    let op = parse_operator(text)?;
    match op.order() {
        None => Ok(RatFun::zero()),
        Some(0) => Ok(op.coeff(0)),
        _ => Ok(first_order_coefficient(&op)?),
    }
}

fn check_depth(depth: usize, max: usize) -> Result<(), Failure> {
    if depth > max {
        return Err(usage(format!("depth {depth} exceeds --max-depth {max}")));
    }
    Ok(())
}

/// Runs one command. `argv[0]` is the program name. Returns the text for
/// standard output (or the error message) and the exit code.
pub fn run<I, T>(argv: I) -> (String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return (e.render().to_string(), code);
        }
    };
    let format = if cli.text { Format::Text } else { Format::Json };
    match execute(&cli) {
        Ok(report) => (report.render(format), EXIT_OK),
        Err(f) => (format!("error: {}", f.message), f.code),
    }
}

fn execute(cli: &Cli) -> Result<Report, Failure> {
    let settings = Settings {
        factor_cap: cli.factor_cap,
    };
    let cap = settings.factor_cap;
    match &cli.command {
        Command::Adjoint { operator } => {
            let l = parse_operator(operator)?;
            let mut r = Report::new("adjoint", json!({ "operator": operator }));
            r.set("result", adjoint(&l)?.to_string());
            Ok(r)
        }
        Command::Apply { operator, function } => {
            let l = parse_operator(operator)?;
            let f = parse_ratfun(function)?;
            let mut r = Report::new("apply", json!({ "operator": operator, "function": function }));
            r.set("result", apply(&l, &f).to_string());
            Ok(r)
        }
        Command::Mul { left, right } => {
            let a = parse_operator(left)?;
            let b = parse_operator(right)?;
            let mut r = Report::new("mul", json!({ "left": left, "right": right }));
            r.set("result", ore_mul(&a, &b).to_string());
            Ok(r)
        }
        Command::Indicial { at, operator } => {
            let l = parse_operator(operator)?;
            let mut r = Report::new("indicial", json!({ "operator": operator, "at": at }));
            match at {
                None => {
                    let inf = infinity_data(&l)?;
                    r.set("point", "infinity");
                    r.set("indicial", fmt_poly_in(&inf.indicial, "s"));
                    r.set("sigma", inf.sigma);
                }
                Some(at) => {
                    let c = parse_ratfun(at)?
                        .as_constant()
                        .ok_or_else(|| usage(format!("--at expects a rational number, got {at}")))?;
                    r.set("point", c.to_string());
                    r.set("indicial", fmt_poly_in(&indicial_at_point(&l, &c)?, "s"));
                }
            }
            Ok(r)
        }
        Command::Chain {
            depth,
            verify,
            operator,
        } => {
            check_depth(*depth, cli.max_depth)?;
            let l = parse_operator(operator)?;
            let mut analyzer = Analyzer::new(settings);
            let chain = analyzer.principal_chain(&l, *depth)?;
            let mut r = Report::new("chain", json!({ "operator": operator, "depth": depth }));
            for op in chain.operators() {
                for w in analyzer.warnings_for(op)? {
                    if !r.warnings.contains(&w) {
                        r.warnings.push(w);
                    }
                }
            }
            report::chain_payload(&mut r, &chain);
            if *verify {
                r.set("expanded_identity", verify_chain_identity(&chain.base, &chain.steps));
                r.set("certificates_verified", report::certificates_hold(&chain));
            }
            Ok(r)
        }
        Command::Sind { operator } => {
            let l = parse_operator(operator)?;
            let s = Analyzer::new(settings).sind_exact(&l)?;
            let mut r = Report::new("sind", json!({ "operator": operator }));
            report::sind_payload(&mut r, &s);
            Ok(r)
        }
        Command::Bounds1 { input } => {
            let f = first_order_input(input)?;
            let b = first_order_sind_bounds(&f, cap)?;
            let mut r = Report::new("bounds1", json!({ "input": input }));
            r.set("f", f.to_string());
            r.set("lower", b.lower);
            r.set("upper", b.upper);
            r.set("exact", b.exact);
            r.warnings = b.warnings;
            Ok(r)
        }
        Command::Stable1 { input } => {
            let f = first_order_input(input)?;
            let v = first_order_stable(&f, cap)?;
            let mut r = Report::new("stable1", json!({ "input": input }));
            r.set("f", f.to_string());
            r.set("stable", v.stable);
            r.set("normal_form", report::normal_form(&v.normal_form));
            r.warnings = v.warnings;
            Ok(r)
        }
        Command::ProfileInvq { q, check, depth } => {
            let qp = parse_poly(q)?;
            let depth = match depth {
                Some(d) => *d,
                None => qp.degree().map_or(0, |d| d + 1),
            };
            check_depth(depth, cli.max_depth)?;
            let profile = inv_q_profile_to(&qp, depth)?;
            let mut r = Report::new("profile-invq", json!({ "q": q, "depth": depth }));
            r.set("profile", profile.clone());
            if *check {
                let l = OreOp::first_order(RatFun::log_derivative(&qp)?);
                let mut analyzer = Analyzer::new(settings);
                let chain = analyzer.principal_chain(&l, depth)?;
                r.set("operator", l.to_string());
                r.set("chain_orders", chain.orders.clone());
                r.set("agree", chain.orders == profile);
                r.set("verified_identity", chain.verified_identity);
                r.set("expanded_identity", verify_chain_identity(&chain.base, &chain.steps));
                r.set("certificates_verified", report::certificates_hold(&chain));
                r.warnings = analyzer.warnings_for(&l)?;
            }
            Ok(r)
        }
        Command::Katz { p, q } => {
            let pp = parse_d_poly(p)?;
            let qp = parse_poly(q)?;
            let op = katz_operator(&pp, &qp)?;
            let mut r = Report::new("katz", json!({ "p": p, "q": q }));
            r.set("p", fmt_d_poly(&pp));
            r.set("operator", op.to_string());
            r.set("sind", katz_sind(&pp, &qp)?);
            r.set("B", bound_b(&op)?);
            Ok(r)
        }
    }
}
