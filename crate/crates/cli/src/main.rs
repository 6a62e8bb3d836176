//! Command-line front end: expression normal ordering, the identity suite,
//! metric and braiding dumps, and the boost-spectrum computations, in exact
//! and numeric modes.
//!
//! Exit codes: 0 success (all identities pass), 1 identity failure,
//! 2 parse or flag error, 3 domain error.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use qmink::coordalg::RewriteSystem;
use qmink::expr::parse_ncpoly;
use qmink::identities::{IdentityContext, IdentityId};
use qmink::scalars::rational_to_f64;
use qmink::so3q;
use qmink::spectra::{self, BoostLabel, Params};
use qmink::tensors::{LorentzData, Sign};

#[derive(Parser)]
#[command(
    name = "qmink",
    about = "Exact computer algebra for the quantum Lorentz group and q-deformed Minkowski space",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

#[derive(Args)]
struct QArg {
    /// Deformation parameter q as a rational ("3/2") or decimal ("1.5").
    /// Rational values select exact arithmetic.
    #[arg(long, default_value = "3/2", allow_hyphen_values = true)]
    q: String,
    /// Force exact mode (requires a rational q).
    #[arg(long)]
    exact: bool,
}

/// A parsed deformation parameter: exact when entered as a rational.
enum QParam {
    Rational(BigRational),
    Real(f64),
}

impl QArg {
    fn parse(&self) -> Result<QParam, String> {
        let s = self.q.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: i64 = n.parse().map_err(|_| format!("bad rational q `{}`", s))?;
            let d: i64 = d.parse().map_err(|_| format!("bad rational q `{}`", s))?;
            if d == 0 {
                return Err("q denominator is zero".to_string());
            }
            let q = BigRational::new(n.into(), d.into());
            if q <= BigRational::new(0.into(), 1.into()) {
                return Err("q must be positive".to_string());
            }
            return Ok(QParam::Rational(q));
        }
        if !s.contains('.') {
            let n: i64 = s.parse().map_err(|_| format!("bad q `{}`", s))?;
            if n <= 0 {
                return Err("q must be positive".to_string());
            }
            return Ok(QParam::Rational(BigRational::from_integer(n.into())));
        }
        if self.exact {
            return Err("--exact requires a rational q".to_string());
        }
        let v: f64 = s.parse().map_err(|_| format!("bad q `{}`", s))?;
        if !(v > 0.0) {
            return Err("q must be positive".to_string());
        }
        Ok(QParam::Real(v))
    }

    /// Exact rational for the identity suite; decimals convert exactly.
    fn parse_rational(&self) -> Result<BigRational, String> {
        match self.parse()? {
            QParam::Rational(q) => Ok(q),
            QParam::Real(v) => BigRational::from_float(v)
                .ok_or_else(|| "q is not finite".to_string()),
        }
    }
}

fn parse_half_integer(s: &str, what: &str) -> Result<i64, String> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.parse().map_err(|_| format!("bad {} `{}`", what, s))?;
        let d: i64 = d.parse().map_err(|_| format!("bad {} `{}`", what, s))?;
        if d != 2 {
            return Err(format!("{} must be an integer or half-integer", what));
        }
        return Ok(n);
    }
    let n: i64 = s.parse().map_err(|_| format!("bad {} `{}`", what, s))?;
    Ok(2 * n)
}

#[derive(Subcommand)]
enum Command {
    /// Normal-order a coordinate-algebra expression.
    NormalOrder { expression: String },
    /// Print the quantum metric and its inverse.
    Metric {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Dump the 16x16 vector braiding as 256 lines "N M K L <scalar>".
    Rmatrix {
        #[arg(long, value_enum, default_value_t = SignArg::Plus)]
        sign: SignArg,
    },
    /// Run the identity catalog; exits 1 if any identity fails.
    Identities {
        /// Run the full catalog (the default).
        #[arg(long)]
        all: bool,
        /// Run a single identity by name.
        #[arg(long)]
        id: Option<String>,
        #[command(flatten)]
        q: QArg,
    },
    /// Emit the quantized boost spectrum for l = 0, 1/2, ..., l-max.
    Spectrum {
        #[command(flatten)]
        q: QArg,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long)]
        mass: Option<f64>,
        /// Largest l, as an integer or half-integer ("3/2").
        #[arg(long, default_value = "1")]
        l_max: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Light-cone eigenvalues and the stable state.
    Lightcone {
        #[command(flatten)]
        q: QArg,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 5)]
        n_max: u32,
    },
    /// Boost a rest state with the given label.
    Boost {
        #[command(flatten)]
        q: QArg,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long)]
        mass: Option<f64>,
        /// l as an integer or half-integer.
        #[arg(long)]
        l: String,
        /// m as an integer or half-integer, -l <= m <= l.
        #[arg(long, allow_hyphen_values = true)]
        m: String,
    },
    /// Semiclassical lifetime-dilatation report.
    Lifetime {
        /// Classical speed, |v| < 1.
        #[arg(long)]
        v: f64,
        #[arg(long, default_value_t = 0.01)]
        kappa: f64,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
    },
    /// Verify the spatial-rotation restriction; exits 1 on failure.
    So3,
    /// Quantum-sphere parameters of the fixed-time slice.
    Sphere {
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 0.0)]
        tau2: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(AppError::Flag(msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
        Err(AppError::Parse(err)) => {
            eprintln!("error: {}", err);
            ExitCode::from(2)
        }
        Err(AppError::Domain(msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(3)
        }
    }
}

enum AppError {
    Flag(String),
    Parse(qmink::ParseError),
    Domain(String),
}

impl From<qmink::ParseError> for AppError {
    fn from(e: qmink::ParseError) -> AppError {
        AppError::Parse(e)
    }
}

impl From<qmink::SpectraError> for AppError {
    fn from(e: qmink::SpectraError) -> AppError {
        AppError::Domain(e.to_string())
    }
}

fn run(command: Command) -> Result<ExitCode, AppError> {
    match command {
        Command::NormalOrder { expression } => {
            let poly = parse_ncpoly(&expression)?;
            let nf = RewriteSystem::standard().normal_order(&poly);
            println!("{}", nf);
            Ok(ExitCode::SUCCESS)
        }
        Command::Metric { format } => {
            let ld = LorentzData::new();
            match format {
                Format::Json => {
                    println!(
                        "{{\"metric\": {}, \"inverse\": {}}}",
                        ld.metric_tensor(Sign::Plus).to_json(),
                        ld.metric_inverse_tensor(Sign::Plus).to_json()
                    );
                }
                _ => {
                    for i in 0..4 {
                        for j in 0..4 {
                            let v = ld.g_up[Sign::Plus.index()].get(i, j);
                            if !v.is_zero() {
                                println!("G[{}][{}] = {}", i, j, v);
                            }
                        }
                    }
                    for i in 0..4 {
                        for j in 0..4 {
                            let v = ld.g_lo[Sign::Plus.index()].get(i, j);
                            if !v.is_zero() {
                                println!("Ginv[{}][{}] = {}", i, j, v);
                            }
                        }
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Rmatrix { sign } => {
            let ld = LorentzData::new();
            let fd = qmink::FunctionalData::new(&ld);
            let sign = match sign {
                SignArg::Plus => Sign::Plus,
                SignArg::Minus => Sign::Minus,
            };
            let r = fd.big_r(sign);
            for n in 0..4 {
                for m in 0..4 {
                    for k in 0..4 {
                        for l in 0..4 {
                            println!("{} {} {} {} {}", n, m, k, l, r.get(&[n, m, k, l]));
                        }
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Identities { all: _, id, q } => {
            let q0 = q.parse_rational().map_err(AppError::Flag)?;
            let ld = LorentzData::new();
            let ctx = IdentityContext::new(&ld, q0);
            let outcomes = match id {
                Some(name) => {
                    let id = IdentityId::from_name(&name)
                        .ok_or_else(|| AppError::Flag(format!("unknown identity `{}`", name)))?;
                    vec![ctx.run(id)]
                }
                None => ctx.run_all(),
            };
            let mut failed = false;
            for outcome in &outcomes {
                if outcome.passed {
                    println!("{} PASS", outcome.id.name());
                } else {
                    failed = true;
                    println!(
                        "{} FAIL [{}]",
                        outcome.id.name(),
                        outcome.residual.as_deref().unwrap_or("")
                    );
                }
            }
            Ok(if failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Spectrum {
            q,
            t,
            mass,
            l_max,
            format,
        } => {
            let twice_l_max = parse_half_integer(&l_max, "l-max").map_err(AppError::Flag)?;
            if twice_l_max < 0 {
                return Err(AppError::Domain("l-max must be nonnegative".to_string()));
            }
            match q.parse().map_err(AppError::Flag)? {
                QParam::Rational(q0) => {
                    let t_rat = BigRational::from_float(t)
                        .ok_or_else(|| AppError::Domain("t is not finite".to_string()))?;
                    let mass_rat = match mass {
                        Some(m) => Some(BigRational::from_float(m).ok_or_else(|| {
                            AppError::Domain("mass is not finite".to_string())
                        })?),
                        None => None,
                    };
                    let mut rows = Vec::new();
                    for twice_l in 0..=twice_l_max {
                        rows.extend(
                            spectra::spectrum_table_exact(
                                twice_l,
                                &q0,
                                &t_rat,
                                mass_rat.as_ref(),
                            )?,
                        );
                    }
                    emit_rows_exact(&rows, format);
                }
                QParam::Real(q0) => {
                    let params = Params { q0, t, mass };
                    let mut rows = Vec::new();
                    for twice_l in 0..=twice_l_max {
                        rows.extend(spectra::spectrum_table(twice_l, &params)?);
                    }
                    emit_rows_f64(&rows, format);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Lightcone { q, t, n_max } => {
            match q.parse().map_err(AppError::Flag)? {
                QParam::Rational(q0) => {
                    let t_rat = BigRational::from_float(t)
                        .ok_or_else(|| AppError::Domain("t is not finite".to_string()))?;
                    for n in 0..=n_max {
                        let x = spectra::lightcone_spectrum_exact(n, &t_rat, &q0);
                        println!("n = {}: x3 = {}", n, rational_string(&x));
                    }
                    let stable = spectra::stable_state_check(&t_rat, &q0);
                    println!(
                        "stable state at x3 = -t/q: {}",
                        if stable { "PASS" } else { "FAIL" }
                    );
                    Ok(if stable {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    })
                }
                QParam::Real(q0) => {
                    for n in 0..=n_max {
                        let x = spectra::lightcone_spectrum(n, t, q0)?;
                        println!("n = {}: x3 = {}", n, x);
                    }
                    Ok(ExitCode::SUCCESS)
                }
            }
        }
        Command::Boost { q, t, mass, l, m } => {
            let twice_l = parse_half_integer(&l, "l").map_err(AppError::Flag)?;
            let twice_m = parse_half_integer(&m, "m").map_err(AppError::Flag)?;
            let label = BoostLabel::new(twice_l, twice_m)?;
            let q0 = match q.parse().map_err(AppError::Flag)? {
                QParam::Rational(q0) => rational_to_f64(&q0),
                QParam::Real(q0) => q0,
            };
            let params = Params { q0, t, mass };
            let event = spectra::boost_event(&params, label)?;
            println!("t' = {}", event.t_prime);
            println!("x3' = {}", event.x3_prime);
            if let Some(e) = event.energy {
                println!("E = {}", e);
            }
            if let Some(p3) = event.p3 {
                println!("p3 = {}", p3);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Lifetime { v, kappa, t } => {
            let ld = LorentzData::new();
            let report = spectra::lifetime_report(&ld, t, v, kappa)?;
            let half = spectra::lifetime_report(&ld, t, v, kappa / 2.0)?;
            println!("classical lifetime      = {}", report.t_cl);
            println!("first-order (plus)      = {}", report.first_order_plus);
            println!("exact at q = 1 + kappa  = {}", report.exact_plus);
            println!("exact at q = 1 - kappa  = {}", report.exact_minus);
            let r1 = (report.exact_plus - report.first_order_plus).abs();
            let r2 = (half.exact_plus - half.first_order_plus).abs();
            println!("residual(kappa)         = {}", r1);
            println!("residual(kappa/2)       = {}", r2);
            if r2 > 0.0 {
                println!("residual ratio          = {}", r1 / r2);
            }
            println!(
                "derived sign (q = 1+kappa branch) = {:+}",
                report.derived_sign_plus_branch
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::So3 => {
            let ld = LorentzData::new();
            let fd = qmink::FunctionalData::new(&ld);
            let report = so3q::verify_so3(&fd);
            let lines = [
                ("TIME_INVARIANCE", report.time_diagonal_residual.is_zero()
                    && report.time_mixing_residuals.iter().all(|r| r.is_zero())),
                ("ORTHOGONALITY_UPPER", report
                    .upper_orthogonality
                    .iter()
                    .all(|r| r.is_zero())),
                ("ORTHOGONALITY_LOWER", report
                    .lower_orthogonality
                    .iter()
                    .all(|r| r.is_zero())),
                ("SPIN_ONE_MATRIX", report.d1_residuals.iter().all(|r| r.is_zero())),
                ("COUNIT_IDENTITY", report
                    .counit_residuals
                    .iter()
                    .all(|r| r.is_zero())),
            ];
            for (name, ok) in lines {
                println!("{} {}", name, if ok { "PASS" } else { "FAIL" });
            }
            if report.passed() {
                Ok(ExitCode::SUCCESS)
            } else {
                for line in report.failing_lines() {
                    println!("residual: {}", line);
                }
                Ok(ExitCode::from(1))
            }
        }
        Command::Sphere { t, tau2 } => {
            let t_rat = BigRational::from_float(t)
                .ok_or_else(|| AppError::Domain("t is not finite".to_string()))?;
            let tau_rat = BigRational::from_float(tau2)
                .ok_or_else(|| AppError::Domain("tau2 is not finite".to_string()))?;
            let t_scalar = qmink::Scalar::from_rational(&t_rat);
            let tau_scalar = qmink::Scalar::from_rational(&tau_rat);
            let (lambda, rho) = so3q::sphere_parameters(&t_scalar, &tau_scalar);
            println!("lambda = {}", lambda);
            println!("rho = {}", rho);
            let ok = so3q::sphere_closure(&t_scalar);
            println!("closure: {}", if ok { "PASS" } else { "FAIL" });
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn rational_string(r: &BigRational) -> String {
    use num_traits::One;
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn emit_rows_exact(rows: &[spectra::SpectrumRow<BigRational>], format: Format) {
    match format {
        Format::Csv => {
            println!("l,m,gamma,x3,v3,vsq,E,p3");
            for row in rows {
                println!(
                    "{},{},{},{},{},{},{},{}",
                    BoostLabel::half_string(row.label.twice_l()),
                    BoostLabel::half_string(row.label.twice_m()),
                    rational_string(&row.gamma),
                    rational_string(&row.x3),
                    rational_string(&row.v3),
                    rational_string(&row.vsq),
                    row.energy.as_ref().map(rational_string).unwrap_or_default(),
                    row.p3.as_ref().map(rational_string).unwrap_or_default(),
                );
            }
        }
        Format::Json => {
            let mut objs = Vec::new();
            for row in rows {
                let mut fields = vec![
                    format!("\"l\": \"{}\"", BoostLabel::half_string(row.label.twice_l())),
                    format!("\"m\": \"{}\"", BoostLabel::half_string(row.label.twice_m())),
                    format!("\"gamma\": \"{}\"", rational_string(&row.gamma)),
                    format!("\"x3\": \"{}\"", rational_string(&row.x3)),
                    format!("\"v3\": \"{}\"", rational_string(&row.v3)),
                    format!("\"vsq\": \"{}\"", rational_string(&row.vsq)),
                ];
                if let Some(e) = &row.energy {
                    fields.push(format!("\"E\": \"{}\"", rational_string(e)));
                }
                if let Some(p) = &row.p3 {
                    fields.push(format!("\"p3\": \"{}\"", rational_string(p)));
                }
                objs.push(format!("{{{}}}", fields.join(", ")));
            }
            println!("[{}]", objs.join(", "));
        }
        Format::Text => {
            for row in rows {
                println!(
                    "l = {}, m = {}: gamma = {}, x3 = {}, v3 = {}, |v|^2 = {}{}{}",
                    BoostLabel::half_string(row.label.twice_l()),
                    BoostLabel::half_string(row.label.twice_m()),
                    rational_string(&row.gamma),
                    rational_string(&row.x3),
                    rational_string(&row.v3),
                    rational_string(&row.vsq),
                    row.energy
                        .as_ref()
                        .map(|e| format!(", E = {}", rational_string(e)))
                        .unwrap_or_default(),
                    row.p3
                        .as_ref()
                        .map(|p| format!(", p3 = {}", rational_string(p)))
                        .unwrap_or_default(),
                );
            }
        }
    }
}

fn emit_rows_f64(rows: &[spectra::SpectrumRow<f64>], format: Format) {
    match format {
        Format::Csv => {
            println!("l,m,gamma,x3,v3,vsq,E,p3");
            for row in rows {
                println!(
                    "{},{},{},{},{},{},{},{}",
                    row.label.l_as_f64(),
                    row.label.m_as_f64(),
                    row.gamma,
                    row.x3,
                    row.v3,
                    row.vsq,
                    row.energy.map(|e| e.to_string()).unwrap_or_default(),
                    row.p3.map(|p| p.to_string()).unwrap_or_default(),
                );
            }
        }
        Format::Json => {
            let mut objs = Vec::new();
            for row in rows {
                let mut fields = vec![
                    format!("\"l\": {}", row.label.l_as_f64()),
                    format!("\"m\": {}", row.label.m_as_f64()),
                    format!("\"gamma\": {}", row.gamma),
                    format!("\"x3\": {}", row.x3),
                    format!("\"v3\": {}", row.v3),
                    format!("\"vsq\": {}", row.vsq),
                ];
                if let Some(e) = row.energy {
                    fields.push(format!("\"E\": {}", e));
                }
                if let Some(p) = row.p3 {
                    fields.push(format!("\"p3\": {}", p));
                }
                objs.push(format!("{{{}}}", fields.join(", ")));
            }
            println!("[{}]", objs.join(", "));
        }
        Format::Text => {
            for row in rows {
                println!(
                    "l = {}, m = {}: gamma = {}, x3 = {}, v3 = {}, |v|^2 = {}{}{}",
                    row.label.l_as_f64(),
                    row.label.m_as_f64(),
                    row.gamma,
                    row.x3,
                    row.v3,
                    row.vsq,
                    row.energy
                        .map(|e| format!(", E = {}", e))
                        .unwrap_or_default(),
                    row.p3.map(|p| format!(", p3 = {}", p)).unwrap_or_default(),
                );
            }
        }
    }
}
