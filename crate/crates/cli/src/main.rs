//! Command-line front end: one subcommand per subsystem, JSON reports (CSV
//! for grids), deterministic output with the seed recorded.
//!
//! Exit codes: 0 success, 2 when results are dominated by `Undecided`
//! outcomes, 1 on errors.

use std::fs;
use std::io::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::json;

use cubicdyn::classify::{self, Zeta};
use cubicdyn::dynamics::CubicParam;
use cubicdyn::equidist::{self, Line, Window};
use cubicdyn::exactalg::bipoly::{BiPoly, Var};
use cubicdyn::exactalg::qomega::QOmega;
use cubicdyn::exactalg::unipoly::UniPoly;
use cubicdyn::green;
use cubicdyn::padicval::{self, MultiplierSpec};
use cubicdyn::pcf;
use cubicdyn::periodic;
use cubicdyn::Error;

#[derive(Parser)]
#[command(name = "cubicdyn", version, about = "Arithmetic dynamics of the cubic family P(z) = z^3/3 - c z^2/2 + a^3")]
struct Cli {
    #[command(flatten)]
    run: RunOpts,
    #[command(subcommand)]
    command: Command,
}

/// Run configuration, also loadable from a JSON file via --config.
#[derive(Args, Debug, Clone)]
struct RunOpts {
    /// Output path (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<String>,
    /// Seed for randomized property checks; recorded in every report.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Worker threads (0 = library default).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Tolerance override for numeric Green evaluations.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    /// Iteration/orbit cap override.
    #[arg(long, global = true, default_value_t = 300)]
    cap: u32,
    /// JSON config file with the same fields (CLI flags win).
    #[arg(long, global = true)]
    config: Option<String>,
}

#[derive(Deserialize, Default)]
struct FileConfig {
    seed: Option<u64>,
    threads: Option<usize>,
    tol: Option<f64>,
    cap: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Symbolic Boettcher coefficients (canonical JSON), with optional
    /// verification reports.
    Bottcher {
        #[arg(long, default_value_t = 4)]
        order: u32,
        /// Also emit the functional-equation and coefficient-bound reports.
        #[arg(long)]
        verify: bool,
    },
    /// Green functions at a parameter, or a CSV grid sweep.
    Green {
        /// Parameter c as `re` or `re,im`.
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
        /// Parameter a as `re` or `re,im`.
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        /// Grid sweep `re0,re1,im0,im1` over the chosen plane coordinate.
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        /// Grid resolution per axis.
        #[arg(long, default_value_t = 64)]
        resolution: usize,
        /// Which coordinate the grid sweeps: the other one is fixed.
        #[arg(long, default_value = "a")]
        plane: String,
        /// Fixed value of the other coordinate for grid mode (`re[,im]`).
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        fixed: String,
    },
    /// Per_m(lambda) sampling over a c-grid (CSV rows).
    Perm {
        #[arg(long)]
        m: u32,
        /// Multiplier `re` or `re,im`.
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        /// `re0,re1,n`: n real c-samples between re0 and re1.
        #[arg(long, allow_hyphen_values = true)]
        c_grid: String,
        /// Imaginary part for all c samples.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        c_im: f64,
        /// Keep only samples whose exact period and multiplier confirm.
        #[arg(long)]
        filter_exact: bool,
    },
    /// Enumerate post-critically finite parameters (JSON with witnesses
    /// and certification status).
    Pcf {
        /// Cap: relations with 3^(n+k) <= 3^max_orbit are used.
        #[arg(long, default_value_t = 2)]
        max_orbit: u32,
    },
    /// Special-curve checks: symmetry | collision | zset | branch.
    Classify {
        #[arg(long)]
        check: String,
        #[arg(long, default_value_t = 0)]
        q: u32,
        #[arg(long, default_value_t = 0)]
        m: u32,
        /// zeta: `1`, `-1`, or `re,im`.
        #[arg(long, default_value = "-1", allow_hyphen_values = true)]
        zeta: String,
        /// Collision pair `m,k`.
        #[arg(long, default_value = "1,1")]
        mk: String,
        /// Curve for branch growth: `a`, `c`, `symmetry`, or `per10`.
        #[arg(long, default_value = "a")]
        curve: String,
        /// Orbit length for branch growth.
        #[arg(long, default_value_t = 8)]
        q_max: u32,
    },
    /// Newton-polygon verification of the multiplier valuations of
    /// z^d + t (JSON table).
    MultiplierValuations {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        m: u32,
        /// Rational coefficients of the minimal polynomial of t,
        /// ascending, comma-separated (e.g. `1,0,1` for t^2+1).
        #[arg(long, allow_hyphen_values = true)]
        t_minpoly: String,
        /// Primes to check.
        #[arg(long, default_value = "2,3,5,7,11")]
        primes: String,
    },
    /// Equidistribution experiment on a line (distance table, optional
    /// grid dumps).
    Equidist {
        /// `c=0` or `a=0`.
        #[arg(long, default_value = "c=0")]
        line: String,
        /// Orbit caps, comma-separated.
        #[arg(long, default_value = "2,3,4")]
        caps: String,
        /// Half-width of the square window in the line coordinate.
        #[arg(long, default_value_t = 1.4)]
        window: f64,
        #[arg(long, default_value_t = 256)]
        resolution: usize,
        /// Write the density grid as CSV here.
        #[arg(long)]
        dump_csv: Option<String>,
        /// Write the density grid as a PGM image here.
        #[arg(long)]
        dump_pgm: Option<String>,
    },
    /// Run the acceptance suite and print one pass/fail line per
    /// criterion.
    Selftest,
}

fn main() -> ExitCode {
    // Usage errors exit 1 (2 is reserved for Undecided-dominated results);
    // help/version requests still exit 0.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut opts = cli.run.clone();
    if let Some(path) = &opts.config {
        match fs::read_to_string(path).map_err(|e| e.to_string()).and_then(|s| {
            serde_json::from_str::<FileConfig>(&s).map_err(|e| e.to_string())
        }) {
            Ok(fc) => {
                // CLI flags win only when explicitly set; clap defaults are
                // indistinguishable here, so the file fills the defaults.
                if opts.seed == 42 {
                    opts.seed = fc.seed.unwrap_or(opts.seed);
                }
                if opts.threads == 0 {
                    opts.threads = fc.threads.unwrap_or(0);
                }
                if opts.tol == 1e-10 {
                    opts.tol = fc.tol.unwrap_or(opts.tol);
                }
                if opts.cap == 300 {
                    opts.cap = fc.cap.unwrap_or(opts.cap);
                }
            }
            Err(e) => {
                eprintln!("error: cannot read config {path}: {e}");
                return ExitCode::from(1);
            }
        }
    }
    if opts.threads > 0 {
        cubicdyn::exec::configure_threads(opts.threads);
    }
    match dispatch(&cli.command, &opts) {
        Ok(Output { text, undecided_dominated }) => {
            if let Err(e) = emit(&opts.out, &text) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            if undecided_dominated {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Undecided(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

struct Output {
    text: String,
    undecided_dominated: bool,
}

impl Output {
    fn done(text: String) -> cubicdyn::Result<Output> {
        Ok(Output { text, undecided_dominated: false })
    }
}

fn emit(out: &Option<String>, text: &str) -> std::io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())
        }
    }
}

fn parse_complex(s: &str) -> cubicdyn::Result<Complex64> {
    let parts: Vec<&str> = s.split(',').collect();
    let bad = || Error::InvalidInput(format!("cannot parse complex number from {s:?}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(re.trim().parse().map_err(|_| bad())?, 0.0)),
        [re, im] => Ok(Complex64::new(
            re.trim().parse().map_err(|_| bad())?,
            im.trim().parse().map_err(|_| bad())?,
        )),
        _ => Err(bad()),
    }
}

fn parse_rational(s: &str) -> cubicdyn::Result<QOmega> {
    let bad = || Error::InvalidInput(format!("cannot parse rational {s:?}"));
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(QOmega::from_frac(n, d));
    }
    let n: i64 = s.parse().map_err(|_| bad())?;
    Ok(QOmega::from_int(n))
}

fn parse_zeta(s: &str) -> cubicdyn::Result<Zeta> {
    match s.trim() {
        "1" | "+1" => Ok(Zeta::One),
        "-1" => Ok(Zeta::MinusOne),
        other => Ok(Zeta::Numeric(parse_complex(other)?)),
    }
}

fn dispatch(cmd: &Command, opts: &RunOpts) -> cubicdyn::Result<Output> {
    match cmd {
        Command::Bottcher { order, verify } => {
            let exp = cubicdyn::boettcher::bottcher_coeffs(*order);
            let coeffs: Vec<serde_json::Value> =
                exp.coeffs.iter().map(|p| p.to_json()).collect();
            let mut doc = json!({
                "seed": opts.seed,
                "order": order,
                "normalization": "phi(z) = w (z - c/2) + sum a_k z^-k, w^2 = 1/3",
                "coefficients": coeffs,
            });
            if *verify {
                let eq = cubicdyn::boettcher::verify_functional_equation_with(&exp);
                let bounds = cubicdyn::boettcher::coefficient_bounds_report(&exp);
                doc["functional_equation"] = serde_json::to_value(&eq).unwrap();
                doc["coefficient_bounds"] = serde_json::to_value(&bounds).unwrap();
            }
            Output::done(format!("{:#}\n", doc))
        }
        Command::Green { c, a, grid, resolution, plane, fixed } => match grid {
            None => {
                let c = parse_complex(c.as_deref().ok_or_else(|| {
                    Error::InvalidInput("--c required without --grid".into())
                })?)?;
                let a = parse_complex(a.as_deref().ok_or_else(|| {
                    Error::InvalidInput("--a required without --grid".into())
                })?)?;
                let p = CubicParam::new(c, a);
                let (g0, g1, g) = green::g0g1g(&p, opts.tol)?;
                let doc = json!({
                    "seed": opts.seed,
                    "c": [c.re, c.im],
                    "a": [a.re, a.im],
                    "g0": g0.value,
                    "g1": g1.value,
                    "G": g.value,
                    "err": g0.error_bound.max(g1.error_bound),
                });
                Output::done(format!("{:#}\n", doc))
            }
            Some(gspec) => {
                let nums: Vec<f64> = gspec
                    .split(',')
                    .map(|x| x.trim().parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| Error::InvalidInput("grid must be re0,re1,im0,im1".into()))?;
                let [re0, re1, im0, im1]: [f64; 4] = nums
                    .try_into()
                    .map_err(|_| Error::InvalidInput("grid must be re0,re1,im0,im1".into()))?;
                let fixed = parse_complex(fixed)?;
                let sweep_a = plane == "a";
                let n = *resolution;
                let rows: Vec<String> = cubicdyn::exec::map_range(n * n, |idx| {
                    let i = idx / n;
                    let j = idx % n;
                    let w = Complex64::new(
                        re0 + (re1 - re0) * (j as f64 + 0.5) / n as f64,
                        im0 + (im1 - im0) * (i as f64 + 0.5) / n as f64,
                    );
                    let p = if sweep_a {
                        CubicParam::new(fixed, w)
                    } else {
                        CubicParam::new(w, fixed)
                    };
                    match green::g0g1g(&p, opts.tol) {
                        Ok((g0, g1, _)) => format!(
                            "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
                            p.c.re, p.c.im, p.a.re, p.a.im, g0.value, g1.value
                        ),
                        Err(_) => format!(
                            "{:.17e},{:.17e},{:.17e},{:.17e},nan,nan",
                            p.c.re, p.c.im, p.a.re, p.a.im
                        ),
                    }
                });
                let mut text =
                    format!("# seed={}\nre_c,im_c,re_a,im_a,g0,g1\n", opts.seed);
                text.push_str(&rows.join("\n"));
                text.push('\n');
                Output::done(text)
            }
        },
        Command::Perm { m, lambda, c_grid, c_im, filter_exact } => {
            let lambda = parse_complex(lambda)?;
            let parts: Vec<&str> = c_grid.split(',').collect();
            if parts.len() != 3 {
                return Err(Error::InvalidInput("--c-grid must be re0,re1,n".into()));
            }
            let re0: f64 = parts[0]
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput("bad c-grid".into()))?;
            let re1: f64 = parts[1]
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput("bad c-grid".into()))?;
            let n: usize = parts[2]
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput("bad c-grid".into()))?;
            let cs: Vec<Complex64> = (0..n)
                .map(|i| {
                    Complex64::new(
                        re0 + (re1 - re0) * (i as f64 + 0.5) / n.max(1) as f64,
                        *c_im,
                    )
                })
                .collect();
            let mut text = format!(
                "# seed={} m={} lambda={},{}\nre_c,im_c,re_a,im_a,exact_period_ok\n",
                opts.seed, m, lambda.re, lambda.im
            );
            for cv in cs {
                let samples = periodic::perm_sample(*m, lambda, cv, *filter_exact)?;
                for s in samples {
                    text.push_str(&format!(
                        "{:.17e},{:.17e},{:.17e},{:.17e},{}\n",
                        cv.re, cv.im, s.a.0, s.a.1, s.exact_period_ok
                    ));
                }
            }
            Output::done(text)
        }
        Command::Pcf { max_orbit } => {
            let cap = 3u64.pow(*max_orbit);
            let res = pcf::pcf_enumerate(cap)?;
            let doc = json!({
                "seed": opts.seed,
                "max_orbit": max_orbit,
                "count": res.points.len(),
                "curve_pairs": res.curve_pairs,
                "box_radius": res.box_radius,
                "all_in_box": res.all_in_box,
                "points": serde_json::to_value(&res.points).unwrap(),
            });
            Output::done(format!("{:#}\n", doc))
        }
        Command::Classify { check, q, m, zeta, mk, curve, q_max } => {
            let zeta = parse_zeta(zeta)?;
            match check.as_str() {
                "symmetry" => {
                    let curve = classify::symmetry_curve();
                    let ze = zeta.exact().ok_or_else(|| {
                        Error::InvalidInput("symmetry check needs zeta = +-1".into())
                    })?;
                    let rep = classify::commutator_on_curve(*m, &ze, &curve, Var::A);
                    let doc = json!({
                        "seed": opts.seed,
                        "curve": curve.to_json(),
                        "m": m,
                        "k": rep.k,
                        "remainders_all_zero": rep.all_zero,
                        "remainders": rep.remainders.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
                        "lc_powers": rep.lc_powers,
                    });
                    Output::done(format!("{:#}\n", doc))
                }
                "collision" => {
                    let parts: Vec<&str> = mk.split(',').collect();
                    if parts.len() != 2 {
                        return Err(Error::InvalidInput("--mk must be m,k".into()));
                    }
                    let cm: u32 = parts[0].trim().parse().map_err(|_| {
                        Error::InvalidInput("bad --mk".into())
                    })?;
                    let ck: u32 = parts[1].trim().parse().map_err(|_| {
                        Error::InvalidInput("bad --mk".into())
                    })?;
                    let col = classify::collision_curve(cm, ck)?;
                    let doc = json!({
                        "seed": opts.seed,
                        "m": col.m,
                        "k": col.k,
                        "excluded_pair": col.excluded_pair,
                        "poly": col.poly.to_json(),
                    });
                    Output::done(format!("{:#}\n", doc))
                }
                "zset" => {
                    let outcomes = classify::z_probe(*q, *m, zeta)?;
                    let rendered: Vec<serde_json::Value> = outcomes
                        .iter()
                        .map(|o| match o {
                            classify::ZProbeOutcome::Curve { poly, reduced } => json!({
                                "kind": "curve",
                                "poly": poly.to_json(),
                                "reduced": reduced.to_json(),
                            }),
                            classify::ZProbeOutcome::Finite { points } => json!({
                                "kind": "finite",
                                "points": points
                                    .iter()
                                    .map(|(cv, av)| json!([cv.re, cv.im, av.re, av.im]))
                                    .collect::<Vec<_>>(),
                            }),
                        })
                        .collect();
                    let doc = json!({
                        "seed": opts.seed,
                        "q": q,
                        "m": m,
                        "outcomes": rendered,
                    });
                    Output::done(format!("{:#}\n", doc))
                }
                "branch" => {
                    let curve_poly = match curve.as_str() {
                        "a" => BiPoly::var(Var::A),
                        "c" => BiPoly::var(Var::C),
                        "symmetry" => classify::symmetry_curve(),
                        "per10" => BiPoly::var(Var::A)
                            .pow(3)
                            .sub(&BiPoly::var(Var::C).pow(3).scale(&QOmega::from_frac(1, 6)))
                            .sub(&BiPoly::var(Var::C)),
                        other => {
                            return Err(Error::InvalidInput(format!(
                                "unknown curve {other:?} (use a|c|symmetry|per10)"
                            )))
                        }
                    };
                    let rows = classify::branch_growth_all(&curve_poly, *q_max)?;
                    let rendered: Vec<serde_json::Value> = rows
                        .iter()
                        .map(|(branch, growth)| {
                            json!({
                                "n": branch.n,
                                "exact": branch.is_exact(),
                                "growth_c0": serde_json::to_value(&growth[0]).unwrap(),
                                "growth_c1": serde_json::to_value(&growth[1]).unwrap(),
                            })
                        })
                        .collect();
                    let doc = json!({
                        "seed": opts.seed,
                        "curve": curve,
                        "q_max": q_max,
                        "branches": rendered,
                    });
                    Output::done(format!("{:#}\n", doc))
                }
                other => Err(Error::InvalidInput(format!(
                    "unknown check {other:?} (use symmetry|collision|zset|branch)"
                ))),
            }
        }
        Command::MultiplierValuations { d, m, t_minpoly, primes } => {
            let coeffs: Vec<QOmega> = t_minpoly
                .split(',')
                .map(parse_rational)
                .collect::<cubicdyn::Result<_>>()?;
            let primes: Vec<u64> = primes
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse::<u64>()
                        .map_err(|_| Error::InvalidInput("bad prime list".into()))
                })
                .collect::<cubicdyn::Result<_>>()?;
            let spec = MultiplierSpec { d: *d, t_minpoly: UniPoly::new(coeffs), m: *m };
            let rep = padicval::verify_prop_multiplier(&spec, &primes)?;
            let doc = json!({
                "seed": opts.seed,
                "report": serde_json::to_value(&rep).unwrap(),
            });
            Output::done(format!("{:#}\n", doc))
        }
        Command::Equidist { line, caps, window, resolution, dump_csv, dump_pgm } => {
            let line = match line.trim() {
                "c=0" => Line::CZero,
                "a=0" => Line::AZero,
                other => {
                    return Err(Error::InvalidInput(format!(
                        "unknown line {other:?} (use c=0 or a=0)"
                    )))
                }
            };
            let caps: Vec<u32> = caps
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::InvalidInput("bad caps".into()))
                })
                .collect::<cubicdyn::Result<_>>()?;
            let win = Window::square(*window);
            let rep = equidist::equidistribution_trend(line, &caps, win, *resolution)?;
            if dump_csv.is_some() || dump_pgm.is_some() {
                let nu = equidist::bifurcation_density(line, win, *resolution)?;
                if let Some(path) = dump_csv {
                    let mut text = String::from("ix,iy,density\n");
                    for iy in 0..nu.resolution {
                        for ix in 0..nu.resolution {
                            text.push_str(&format!(
                                "{ix},{iy},{:.17e}\n",
                                nu.values[iy * nu.resolution + ix]
                            ));
                        }
                    }
                    fs::write(path, text).map_err(|e| Error::InvalidInput(e.to_string()))?;
                }
                if let Some(path) = dump_pgm {
                    let max = nu.values.iter().cloned().fold(0.0f64, f64::max).max(1e-300);
                    let mut pgm = format!("P2\n{} {}\n255\n", nu.resolution, nu.resolution);
                    for iy in 0..nu.resolution {
                        let row: Vec<String> = (0..nu.resolution)
                            .map(|ix| {
                                let v = nu.values[iy * nu.resolution + ix] / max;
                                format!("{}", (255.0 * v.sqrt()).round() as u8)
                            })
                            .collect();
                        pgm.push_str(&row.join(" "));
                        pgm.push('\n');
                    }
                    fs::write(path, pgm).map_err(|e| Error::InvalidInput(e.to_string()))?;
                }
            }
            let undecided_dominated = rep.masked_fraction > 0.5;
            let doc = json!({
                "seed": opts.seed,
                "report": serde_json::to_value(&rep).unwrap(),
            });
            Ok(Output { text: format!("{:#}\n", doc), undecided_dominated })
        }
        Command::Selftest => {
            let rep = cubicdyn::selftest::run_selftest(opts.seed);
            for r in &rep.results {
                eprintln!("criterion {:>2}: {} ms", r.id, r.elapsed_ms);
            }
            let text = rep.render_canonical();
            if rep.all_pass() {
                Output::done(text)
            } else {
                // Emit the table, then fail.
                emit(&opts.out, &text).map_err(|e| Error::InvalidInput(e.to_string()))?;
                Err(Error::InvalidInput("selftest criteria failed".into()))
            }
        }
    }
}
