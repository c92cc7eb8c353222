use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use drinfeld::density::{density_sweep, euler_product_partial, EulerRow, CSV_HEADER};
use drinfeld::drinfeld::{DrinfeldModule, ReductionClass};
use drinfeld::error::{Error, Result};
use drinfeld::frobenius::{sample_frobenius, SampleOptions};
use drinfeld::gfq::{factor_in_a, parse_poly, FieldSpec, PrimeOfA};
use drinfeld::image::{surjectivity_verdict, ImageCertificate, Verdict};
use drinfeld::newton::{newton_polygon, verify_vz_formula, witness_valuation, NewtonPolygon, ValuedCoeffs};
use drinfeld::tate::{exp_truncated, LatticeDatum};
use num_rational::BigRational;
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "drinfeld", version, about = "Exact computations with Drinfeld modules over F_q[T]")]
struct Cli {
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, env = "DRINFELD_THREADS", default_value_t = 0)]
    threads: usize,

    /// Recorded in certificates. Every pipeline is deterministic, so the
    /// output does not depend on it otherwise.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Validate a module and print φ_T, its determinant module and bad primes.
    Inspect {
        /// Inline JSON `{"q":..,"r":..,"g":[..]}` or a path to such a file.
        #[arg(long)]
        module: String,
    },
    /// Print φ_a(x) as an F_q-linear polynomial.
    Torsion {
        #[arg(long)]
        module: String,
        #[arg(long, default_value = "T")]
        a: String,
    },
    /// Frobenius samples at good primes, one JSON object per line.
    Frobsample {
        #[arg(long)]
        module: String,
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
        /// Skip the torsion matrices and use only the linear-system charpolys.
        #[arg(long)]
        no_matrices: bool,
    },
    /// Surjectivity certificate for a rank-2 module (exit 0 SURJECTIVE, 2 UNKNOWN).
    Certify {
        #[arg(long)]
        module: String,
        #[arg(long, default_value_t = 3)]
        max_prime_degree: usize,
        #[arg(long, value_enum, default_value_t = Emit::Json)]
        emit: Emit,
    },
    /// Newton polygon of φ_a(x) at a prime.
    Newton {
        #[arg(long)]
        module: String,
        #[arg(long)]
        prime: String,
        #[arg(long, default_value = "T^2")]
        a: String,
        #[arg(long)]
        json: bool,
    },
    /// Truncated exponential of the lattice {ϕ_a(u^-e)} for ϕ_T = T + bτ.
    Exp {
        #[arg(long, default_value_t = 3)]
        q: u64,
        #[arg(long)]
        prime: String,
        #[arg(long, default_value = "1")]
        b: String,
        #[arg(long)]
        gamma_val: u32,
        #[arg(long, default_value_t = 1)]
        cutoff: usize,
        #[arg(long, default_value_t = 60)]
        precision: i64,
    },
    /// Π_r counts over the boxes C_r(X), as CSV.
    Density {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 1)]
        x_min: usize,
        #[arg(long)]
        x_max: usize,
    },
    /// Partial Euler products prod_{deg l <= B} (1 - 1/q_l + 1/q_l^p).
    Eulerprod {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        max_degree: usize,
        /// Exact rationals in the `partial` column.
        #[arg(long, conflicts_with = "float")]
        exact: bool,
        /// 64-bit floats in the `partial` column (the default).
        #[arg(long)]
        float: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Emit {
    Json,
    Text,
}

fn load_module(arg: &str) -> Result<DrinfeldModule> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Error::InvalidModule(format!("{arg}: {e}")))?
    };
    DrinfeldModule::from_json(&text)
}

fn prime_of(fq: &'static FieldSpec, s: &str) -> Result<PrimeOfA> {
    PrimeOfA::new(parse_poly(s, fq)?)
}

fn inspect(phi: &DrinfeldModule) -> Result<String> {
    let fq = phi.fq();
    let r = phi.rank();
    let mut out = String::new();
    writeln!(out, "q = {}, r = {r}", fq.q()).unwrap();
    writeln!(out, "phi_T = {phi}").unwrap();
    writeln!(out, "psi_T = {}", phi.det_module().psi).unwrap();
    let (_, factors) = factor_in_a(phi.g(r))?;
    for (l, e) in factors {
        let info = phi.reduction_info(&l);
        let class = match info.class {
            ReductionClass::Good => "good",
            ReductionClass::Stable => "stable",
            ReductionClass::Unclassified => "unclassified",
        };
        let witness = if witness_valuation(phi, &l).is_ok() { ", witness" } else { "" };
        writeln!(out, "{l}: v(g_r) = {e}, {class} reduction of rank {}{witness}", info.reduction_rank).unwrap();
    }
    Ok(out)
}

fn polygon_json(np: &NewtonPolygon) -> serde_json::Value {
    json!({
        "vertices": np.vertices.iter().map(|(x, y)| [x.to_string(), y.to_string()]).collect::<Vec<_>>(),
        "segments": np.segments.iter().map(|s| json!({
            "slope": s.slope.to_string(),
            "length": s.length.to_string(),
            "root_valuation": s.root_valuation().to_string(),
        })).collect::<Vec<_>>(),
    })
}

fn newton(phi: &DrinfeldModule, prime: &str, a: &str, as_json: bool) -> Result<String> {
    let fq = phi.fq();
    let l = prime_of(fq, prime)?;
    let a = parse_poly(a, fq)?;
    let np = newton_polygon(&ValuedCoeffs::of_torsion(phi, &a, &l)?)?;
    let vz = witness_valuation(phi, &l).ok().map(|_| verify_vz_formula(phi, &l)).transpose()?;
    if as_json {
        let mut v = polygon_json(&np);
        if let Some(rep) = vz {
            v["v_z"] = json!({
                "value": rep.v_z.to_string(),
                "expected": rep.expected.to_string(),
                "formula_match": rep.formula_match,
                "p_part_denominator": rep.p_part_denominator.to_string(),
            });
        }
        return Ok(format!("{v}\n"));
    }
    let mut out = np.to_string();
    if let Some(rep) = vz {
        writeln!(out, "v(z) = {} (expected {}), p-part of denominator {}", rep.v_z, rep.expected, rep.p_part_denominator).unwrap();
    }
    Ok(out)
}

fn certificate_text(cert: &ImageCertificate) -> String {
    let mut out = String::new();
    let verdict = match cert.verdict {
        Verdict::Surjective => "SURJECTIVE",
        Verdict::Unknown => "UNKNOWN",
    };
    writeln!(out, "verdict: {verdict}").unwrap();
    writeln!(out, "mod T: {:?} (unexcluded: {:?})", cert.mod_t.status, cert.mod_t.unexcluded).unwrap();
    writeln!(out, "det: {:?} (generated order {})", cert.det.status, cert.det.generated_order).unwrap();
    let witness = cert.mod_t2.witness.as_ref().map_or("none".to_string(), |l| l.to_string());
    writeln!(out, "mod T^2: {:?} (witness {witness})", cert.mod_t2.status).unwrap();
    writeln!(out, "samples: {}", cert.samples_used).unwrap();
    out
}

fn exp(q: u64, prime: &str, b: &str, e: u32, n: usize, m: i64) -> Result<String> {
    let fq = FieldSpec::from_q(q)?;
    let l = prime_of(fq, prime)?;
    let datum = LatticeDatum::new(&l, &parse_poly(b, fq)?, e, n, m)?;
    let ex = exp_truncated(&datum)?;
    let mut out = String::new();
    for (i, c) in ex.tau.coeffs().iter().enumerate() {
        let prec = c.precision().map_or("exact".to_string(), |p| format!("known to u^{p}"));
        writeln!(out, "x^(q^{i}): {c:?}  [{prec}]").unwrap();
    }
    Ok(out)
}

fn eulerprod(q: u64, p: u64, b: usize, exact: bool) -> String {
    let mut out = String::from("B,c_n,partial,log_sum,linear_bound\n");
    if exact {
        let rows: Vec<EulerRow<BigRational>> = euler_product_partial(q, p, b);
        for r in rows {
            writeln!(out, "{},{},{},{},{}", r.degree, r.c_n, r.partial, r.log_sum, r.linear_bound).unwrap();
        }
    } else {
        let rows: Vec<EulerRow<f64>> = euler_product_partial(q, p, b);
        for r in rows {
            writeln!(out, "{},{},{},{},{}", r.degree, r.c_n, r.partial, r.log_sum, r.linear_bound).unwrap();
        }
    }
    out
}

/// Output and exit code of a successful run.
fn run(cli: Cli) -> Result<(String, u8)> {
    match cli.cmd {
        Cmd::Inspect { module } => Ok((inspect(&load_module(&module)?)?, 0)),
        Cmd::Torsion { module, a } => {
            let phi = load_module(&module)?;
            let t = phi.torsion_poly(&parse_poly(&a, phi.fq())?)?;
            Ok((format!("{t}\n"), 0))
        }
        Cmd::Frobsample { module, max_degree, no_matrices } => {
            let phi = load_module(&module)?;
            let opts = SampleOptions { matrices: !no_matrices, ..SampleOptions::default() };
            let mut out = String::new();
            for s in sample_frobenius(&phi, max_degree, opts)? {
                writeln!(out, "{}", s.to_json()).unwrap();
            }
            Ok((out, 0))
        }
        Cmd::Certify { module, max_prime_degree, emit } => {
            let phi = load_module(&module)?;
            let cert = surjectivity_verdict(&phi, max_prime_degree)?;
            let code = if cert.verdict == Verdict::Surjective { 0 } else { 2 };
            let out = match emit {
                Emit::Json => {
                    let mut v = cert.to_json();
                    v["seed"] = json!(cli.seed);
                    v["max_prime_degree"] = json!(max_prime_degree);
                    format!("{v}\n")
                }
                Emit::Text => certificate_text(&cert),
            };
            Ok((out, code))
        }
        Cmd::Newton { module, prime, a, json } => Ok((newton(&load_module(&module)?, &prime, &a, json)?, 0)),
        Cmd::Exp { q, prime, b, gamma_val, cutoff, precision } => {
            Ok((exp(q, &prime, &b, gamma_val, cutoff, precision)?, 0))
        }
        Cmd::Density { q, r, x_min, x_max } => {
            let fq = FieldSpec::from_q(q)?;
            let mut out = format!("{CSV_HEADER}\n");
            for row in density_sweep(fq, r, x_min..=x_max)? {
                writeln!(out, "{}", row.csv()).unwrap();
            }
            Ok((out, 0))
        }
        Cmd::Eulerprod { q, p, max_degree, exact, float: _ } => {
            if FieldSpec::from_q(q)?.p() != p {
                return Err(Error::UnsupportedField(format!("p = {p} is not the characteristic of F_{q}")));
            }
            Ok((eulerprod(q, p, max_degree, exact), 0))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    match run(cli) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
