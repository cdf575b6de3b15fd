use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tautring::intersect::{psi_integral_dvv, psi_integral_ppz};
use tautring::qp::{p_sym, q_norm, q_sym};
use tautring::reduce::{
    c_coeffs, dim_bound, eliminate_kappa, kappa_reduce_lowdeg, nondegeneracy_check, pushed, socle_reduce,
    socle_reduce_any, spanning_check, vanish_reduce,
};
use tautring::relation::RelationSpec;
use tautring::scalar::{parse_rational, rational_to_string};
use tautring::taut::Monomial;
use tautring::{Error, Rational};

#[derive(Parser, Debug)]
#[command(name = "tautring", version, about = "Exact r = 1/2 tautological relations and reductions")]
struct Cli {
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Pretty-print JSON.
    #[arg(short, long, global = true)]
    verbose: bool,
    /// Thread-count hint; all computations are deterministic regardless.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Q_m as a polynomial, optionally evaluated at a.
    Qpoly {
        #[arg(long)]
        m: usize,
        #[arg(long, value_parser = rational)]
        a: Option<Rational>,
    },
    /// P_m(r, a), optionally evaluated.
    Ppoly {
        #[arg(long)]
        m: usize,
        #[arg(long, value_parser = rational, requires = "a")]
        r: Option<Rational>,
        #[arg(long, value_parser = rational, requires = "r")]
        a: Option<Rational>,
    },
    /// A relation pushed forward to M_{g,n}.
    Relation {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        degree: u32,
        /// Fields of markings and then extra points, e.g. 5/2,1,3/2,-1/2
        #[arg(long, value_delimiter = ',', value_parser = rational, allow_hyphen_values = true)]
        fields: Vec<Rational>,
        #[arg(long, default_value_t = 0)]
        x: u8,
        /// ψ exponents on all legs before the pushforward.
        #[arg(long, value_delimiter = ',')]
        sigma: Option<Vec<u32>>,
    },
    /// κ elimination (degree g-1) or the low-degree κ reduction (degree < g-1).
    Reduce {
        #[command(flatten)]
        mono: MonoArgs,
    },
    /// Coordinates over the socle basis.
    Socle {
        #[command(flatten)]
        mono: MonoArgs,
    },
    /// Zero certificate in degree >= g.
    Vanish {
        #[command(flatten)]
        mono: MonoArgs,
    },
    /// ψ intersection numbers on the compactification.
    Intersect {
        #[arg(long)]
        g: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        exps: Vec<u32>,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// Dimension bound for R^d(M_{g,n}).
    Dims {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: usize,
        /// Also run the constructive spanning check.
        #[arg(long)]
        check: bool,
    },
    /// Non-degeneracy of the s = 0 system.
    Nondeg {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: usize,
    },
    /// Runs the acceptance suite.
    Verify,
}

#[derive(clap::Args, Debug)]
struct MonoArgs {
    #[arg(long)]
    g: u32,
    #[arg(long)]
    n: usize,
    /// ψ exponents, one per marking.
    #[arg(long, value_delimiter = ',')]
    psi: Option<Vec<u32>>,
    /// κ indices.
    #[arg(long, value_delimiter = ',')]
    kappa: Option<Vec<u32>>,
}

impl MonoArgs {
    fn monomial(&self) -> Result<Monomial, Error> {
        let psi = self.psi.clone().unwrap_or_else(|| vec![0; self.n]);
        if psi.len() != self.n {
            return Err(Error::InvalidInput(format!("{} ψ exponents for n = {}", psi.len(), self.n)));
        }
        Monomial::new(psi, self.kappa.clone().unwrap_or_default())
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Ppz,
    Dvv,
    Both,
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("not a rational number: {s}"))
}

fn q(x: &Rational) -> Value {
    Value::String(rational_to_string(x))
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::DivisionByZero => "division_by_zero",
        Error::InexactDivision(_) => "inexact_division",
        Error::Interpolation(_) => "interpolation",
        Error::InterpolationUnstable { .. } => "interpolation_unstable",
        Error::Determination { .. } => "determination",
        Error::InvalidSpec(_) => "invalid_spec",
        Error::Unstable { .. } => "unstable",
        Error::Unimplemented(_) => "unimplemented",
        Error::AmbientMismatch(_) => "ambient_mismatch",
        Error::NonDegeneracy(_) => "non_degeneracy",
        Error::Reduction(_) => "reduction",
        Error::InvalidInput(_) => "invalid_input",
    }
}

/// Returns the JSON payload and whether the run counts as a success.
fn run(cmd: &Cmd) -> Result<(Value, bool), Error> {
    let out = match cmd {
        Cmd::Qpoly { m, a } => {
            let mut v = json!({ "m": m, "poly": q_sym::<Rational>(*m).to_string() });
            if let Some(a) = a {
                v["a"] = q(a);
                v["value"] = q(&q_sym::<Rational>(*m).eval(a));
                v["normalized"] = q(&q_norm(*m, a));
            }
            v
        }
        Cmd::Ppoly { m, r, a } => {
            let p = p_sym(*m)?;
            let mut v = json!({ "m": m, "poly": p.to_string() });
            if let (Some(r), Some(a)) = (r, a) {
                v["value"] = q(&p.eval(r, a));
            }
            v
        }
        Cmd::Relation { g, n, degree, fields, x, sigma } => {
            let spec = RelationSpec::new(*g, *n, *degree, fields.clone(), *x);
            spec.validate()?;
            let sigma = sigma.clone().unwrap_or_else(|| vec![0; fields.len()]);
            let cls = pushed(&spec, &sigma)?;
            json!({ "relation": spec.to_json_value(), "sigma": sigma, "class": cls.to_json_value() })
        }
        Cmd::Reduce { mono } => {
            let mu = mono.monomial()?;
            let d = mu.degree();
            let cert = if d + 1 == mono.g {
                eliminate_kappa(mono.g, mono.n, &mu)?
            } else if d + 1 < mono.g {
                kappa_reduce_lowdeg(mono.g, mono.n, d, &mu)?
            } else {
                return Err(Error::InvalidInput(format!("degree {d} >= g; use `vanish`")));
            };
            let ok = cert.verify()?;
            json!({ "verified": ok, "certificate": cert.to_json_value() })
        }
        Cmd::Socle { mono } => {
            let mu = mono.monomial()?;
            let res = if mu.kappa.is_empty() && mono.n >= 2 {
                socle_reduce(mono.g, mono.n, &mu)?
            } else {
                socle_reduce_any(mono.g, mono.n, &mu)?
            };
            let mut v = res.to_json_value();
            v["verified"] = json!(res.certificate.verify()?);
            v
        }
        Cmd::Vanish { mono } => {
            let cert = vanish_reduce(mono.g, mono.n, &mono.monomial()?)?;
            json!({ "verified": cert.verify()?, "certificate": cert.to_json_value() })
        }
        Cmd::Intersect { g, exps, method } => {
            let mut v = json!({ "g": g, "exps": exps });
            let ppz = matches!(method, Method::Ppz | Method::Both).then(|| psi_integral_ppz(*g, exps)).transpose()?;
            let dvv = matches!(method, Method::Dvv | Method::Both).then(|| psi_integral_dvv(*g, exps)).transpose()?;
            if let Some(x) = &ppz {
                v["ppz"] = q(x);
            }
            if let Some(x) = &dvv {
                v["dvv"] = q(x);
            }
            if let (Some(a), Some(b)) = (&ppz, &dvv) {
                v["equal"] = json!(a == b);
                return Ok((v, a == b));
            }
            v
        }
        Cmd::Dims { d, g, n, check } => {
            let bound = u64::try_from(dim_bound(*d, *g, *n)).map_err(|_| Error::InvalidInput("bound overflows u64".into()))?;
            let mut v = json!({ "bound": bound });
            if *check {
                let rep = spanning_check(*g, *n, *d)?;
                v["spanning_set"] = json!(rep.support.iter().map(|m| m.to_string()).collect::<Vec<_>>());
                v["confirms"] = json!(rep.confirms());
                return Ok((v, rep.confirms()));
            }
            v
        }
        Cmd::Nondeg { g, n } => {
            let (ok, s) = nondegeneracy_check(*g, *n)?;
            let c = c_coeffs(*g, *n)?;
            return Ok((json!({ "nonzero": ok, "S": q(&s), "coefficients": c.to_json_value() }), true));
        }
        Cmd::Verify => {
            let results = tautring::acceptance::run_all();
            let pass = results.iter().all(|o| o.pass);
            for o in &results {
                eprintln!("{}", o.line());
            }
            let v = json!({
                "pass": pass,
                "criteria": results.iter().map(|o| o.to_json_value()).collect::<Vec<_>>(),
            });
            return Ok((v, pass));
        }
    };
    Ok((out, true))
}

fn emit(cli: &Cli, v: &Value) -> std::io::Result<()> {
    let text = if cli.verbose { serde_json::to_string_pretty(v)? } else { serde_json::to_string(v)? };
    match &cli.output {
        Some(p) => std::fs::write(p, text + "\n"),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (v, code) = match run(&cli.cmd) {
        Ok((v, true)) => (v, 0),
        Ok((v, false)) => (v, 1),
        Err(e) => (json!({ "error": error_kind(&e), "message": e.to_string() }), 1),
    };
    if let Err(e) = emit(&cli, &v) {
        eprintln!("cannot write output: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
