//! `tronq`: compute tronquée / tritronquée solutions of the supported
//! Painlevé III/IV cases, locate their poles, and validate the asymptotic
//! pole-position formulas against numerics.
//!
//! Exit codes: 0 success, 1 numeric failure, 2 usage error.

mod selftest;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64 as C64;
use serde::Deserialize;
use serde_json::json;
use std::path::PathBuf;
use tronq_core::asymptotics::{predict_poles, predict_poles_x, Predictions};
use tronq_core::borel::{Side, TronqueeRep};
use tronq_core::equations::{EquationSpec, PainleveCase};
use tronq_core::io::{c_to_pair, SeriesJson};
use tronq_core::ode;
use tronq_core::series::compute_levels;

#[derive(Parser)]
#[command(name = "tronq", version, about)]
struct Cli {
    /// JSON config file; values present in it override the flags
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (default: print to stdout)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, global = true, default_value = "json")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Clone)]
struct SpecArgs {
    /// Equation case: PIII_i, PIII_ii, PIV_1, PIV_2, PIV_3
    #[arg(long)]
    case: String,
    /// α parameter as "re" or "re,im"
    #[arg(long, default_value = "0")]
    alpha: String,
    /// β parameter as "re" or "re,im"
    #[arg(long, default_value = "0")]
    beta: String,
    /// Root constant A as "re" or "re,im" (cases PIII_i, PIII_ii, PIV_3)
    #[arg(long = "A")]
    a: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Formal series data: h̃₀ and the level series s̃₁..s̃_K
    Series {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 25)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
    /// Borel-summed solution values on a w-grid
    Sum {
        #[command(flatten)]
        spec: SpecArgs,
        /// transseries constant C as "re" or "re,im"
        #[arg(long = "C", default_value = "0")]
        c: String,
        #[arg(long, value_parser = parse_side, default_value = "upper")]
        side: Side,
        /// grid "rmin:rmax:count" of |w|
        #[arg(long = "w-grid")]
        w_grid: Option<String>,
        /// explicit w list "re,im;re,im;..."
        #[arg(long = "w-list")]
        w_list: Option<String>,
        /// common arg(w) for --w-grid, radians
        #[arg(long = "w-arg", default_value_t = 0.0)]
        w_arg: f64,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 30)]
        n: usize,
    },
    /// Integrate the canonical equation from a Borel-summed seed
    Integrate {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long = "C", default_value = "0")]
        c: String,
        #[arg(long, value_parser = parse_side, default_value = "upper")]
        side: Side,
        /// start point "re,im"
        #[arg(long)]
        from: String,
        /// end point "re,im"
        #[arg(long)]
        to: String,
        #[arg(long, default_value_t = 1e-11)]
        rel_tol: f64,
        #[arg(long, default_value_t = 0.0)]
        abs_tol: f64,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 30)]
        n: usize,
    },
    /// Detect poles near the predicted first arrays
    Poles {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long = "C", default_value = "1")]
        c: String,
        #[arg(long, value_parser = parse_side, default_value = "upper")]
        side: Side,
        /// index range "nmin..nmax"
        #[arg(long, default_value = "3..10")]
        n_range: String,
        #[arg(long, default_value_t = 6.0)]
        seed_offset: f64,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 30)]
        n: usize,
    },
    /// Asymptotic pole positions from the closed-form profile singularities
    Predict {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long = "C", default_value = "1")]
        c: String,
        #[arg(long, value_parser = parse_side, default_value = "upper")]
        side: Side,
        #[arg(long, default_value = "1..20")]
        n_range: String,
        /// also map predictions to the original x-plane
        #[arg(long)]
        x_plane: bool,
        #[arg(long, default_value_t = 0)]
        sheet: i32,
    },
    /// Predict, detect, and match pole arrays; emit the comparison report
    Compare {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long = "C", default_value = "1")]
        c: String,
        #[arg(long, value_parser = parse_side, default_value = "upper")]
        side: Side,
        #[arg(long, default_value = "3..10")]
        n_range: String,
        #[arg(long, default_value_t = 6.0)]
        seed_offset: f64,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 30)]
        n: usize,
    },
    /// Run the built-in invariant checks and print a pass/fail table
    Selftest {
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

fn parse_side(s: &str) -> Result<Side, String> {
    match s {
        "upper" => Ok(Side::Upper),
        "lower" => Ok(Side::Lower),
        _ => Err("side must be 'upper' or 'lower'".into()),
    }
}

fn parse_complex(s: &str) -> Result<C64, String> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [re] => re
            .trim()
            .parse::<f64>()
            .map(|r| C64::new(r, 0.0))
            .map_err(|e| e.to_string()),
        [re, im] => {
            let r = re.trim().parse::<f64>().map_err(|e| e.to_string())?;
            let i = im.trim().parse::<f64>().map_err(|e| e.to_string())?;
            Ok(C64::new(r, i))
        }
        _ => Err(format!("cannot parse complex number from '{s}'")),
    }
}

fn parse_range(s: &str) -> Result<std::ops::RangeInclusive<usize>, String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("range must look like '3..12', got '{s}'"))?;
    let lo: usize = a.trim().parse().map_err(|_| "bad range start".to_string())?;
    let hi: usize = b.trim().parse().map_err(|_| "bad range end".to_string())?;
    if lo == 0 || hi < lo {
        return Err(format!("empty or invalid index range '{s}'"));
    }
    Ok(lo..=hi)
}

fn parse_case(s: &str) -> Result<PainleveCase, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string()))
        .map_err(|_| format!("unknown case '{s}' (PIII_i, PIII_ii, PIV_1, PIV_2, PIV_3)"))
}

/// Optional config-file overrides (equation parameters and common knobs);
/// round-trips losslessly through JSON.
#[derive(Debug, Default, PartialEq, Deserialize, serde::Serialize)]
struct ConfigFile {
    case: Option<String>,
    alpha: Option<[f64; 2]>,
    beta: Option<[f64; 2]>,
    #[serde(rename = "branch_A")]
    branch_a: Option<[f64; 2]>,
    #[serde(rename = "C")]
    c: Option<[f64; 2]>,
    side: Option<String>,
    n: Option<usize>,
    k: Option<usize>,
    seed: Option<u64>,
}

#[cfg(test)]
mod tests {
    use super::ConfigFile;

    #[test]
    fn config_round_trips_losslessly() {
        let text = r#"{"case":"PIV_2","alpha":[0.25,0.0],"C":[1.5,-0.25],"side":"lower","n":28,"seed":11}"#;
        let cfg: ConfigFile = serde_json::from_str(text).unwrap();
        let back: ConfigFile = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(cfg, back);
    }
}

fn usage_error(msg: &str) -> ! {
    eprintln!("{}", json!({"error": msg, "kind": "usage"}));
    std::process::exit(2);
}

fn numeric_error(err: impl std::fmt::Display) -> ! {
    eprintln!("{}", json!({"error": err.to_string(), "kind": "numeric"}));
    std::process::exit(1);
}

struct Ctx {
    out: Option<PathBuf>,
    format: Format,
    config: ConfigFile,
}

impl Ctx {
    fn spec(&self, args: &SpecArgs) -> EquationSpec {
        let case = self
            .config
            .case
            .as_deref()
            .unwrap_or(&args.case)
            .to_string();
        let case = parse_case(&case).unwrap_or_else(|e| usage_error(&e));
        let alpha = match self.config.alpha {
            Some(p) => C64::new(p[0], p[1]),
            None => parse_complex(&args.alpha).unwrap_or_else(|e| usage_error(&e)),
        };
        let beta = match self.config.beta {
            Some(p) => C64::new(p[0], p[1]),
            None => parse_complex(&args.beta).unwrap_or_else(|e| usage_error(&e)),
        };
        let a = match self.config.branch_a {
            Some(p) => Some(C64::new(p[0], p[1])),
            None => args
                .a
                .as_deref()
                .map(|s| parse_complex(s).unwrap_or_else(|e| usage_error(&e))),
        };
        EquationSpec::new(case, alpha, beta, a).unwrap_or_else(|e| numeric_error(e))
    }

    fn c_value(&self, flag: &str) -> C64 {
        match self.config.c {
            Some(p) => C64::new(p[0], p[1]),
            None => parse_complex(flag).unwrap_or_else(|e| usage_error(&e)),
        }
    }

    fn side(&self, flag: Side) -> Side {
        match self.config.side.as_deref() {
            Some("upper") => Side::Upper,
            Some("lower") => Side::Lower,
            Some(other) => usage_error(&format!("bad side '{other}' in config")),
            None => flag,
        }
    }

    fn n_order(&self, flag: usize) -> usize {
        self.config.n.unwrap_or(flag)
    }

    fn k_levels(&self, flag: usize) -> usize {
        self.config.k.unwrap_or(flag)
    }

    /// Write (atomically) or print the report.
    fn emit(&self, name: &str, value: &serde_json::Value, csv: Option<String>) {
        match (&self.out, self.format) {
            (None, Format::Json) => println!("{}", serde_json::to_string_pretty(value).unwrap()),
            (None, Format::Csv) => {
                print!("{}", csv.unwrap_or_else(|| "csv output not available\n".into()))
            }
            (Some(dir), fmt) => {
                std::fs::create_dir_all(dir).unwrap_or_else(|e| numeric_error(e));
                let (ext, data) = match fmt {
                    Format::Json => ("json", serde_json::to_string_pretty(value).unwrap()),
                    Format::Csv => (
                        "csv",
                        csv.unwrap_or_else(|| "csv output not available\n".into()),
                    ),
                };
                let path = dir.join(format!("{name}.{ext}"));
                let tmp = dir.join(format!(".{name}.{ext}.tmp"));
                std::fs::write(&tmp, data).unwrap_or_else(|e| numeric_error(e));
                std::fs::rename(&tmp, &path).unwrap_or_else(|e| numeric_error(e));
                eprintln!("wrote {}", path.display());
            }
        }
    }
}

fn build_rep(spec: &EquationSpec, k: usize, n: usize) -> (tronq_core::equations::NormalizedForm, TronqueeRep) {
    let nf = spec.normalize().unwrap_or_else(|e| numeric_error(e));
    let ts = compute_levels(&nf, k, n).unwrap_or_else(|e| numeric_error(e));
    let rep = TronqueeRep::build(&nf, &ts).unwrap_or_else(|e| numeric_error(e));
    (nf, rep)
}

fn main() {
    let cli = Cli::parse();
    let config: ConfigFile = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).unwrap_or_else(|e| numeric_error(e));
            serde_json::from_str(&text).unwrap_or_else(|e| usage_error(&format!("bad config: {e}")))
        }
        None => ConfigFile::default(),
    };
    let ctx = Ctx {
        out: cli.out.clone(),
        format: cli.format,
        config,
    };

    match cli.command {
        Command::Series { spec, n, k } => {
            let spec = ctx.spec(&spec);
            let nf = spec.normalize().unwrap_or_else(|e| numeric_error(e));
            let n = ctx.n_order(n);
            let ts = compute_levels(&nf, ctx.k_levels(k), n).unwrap_or_else(|e| numeric_error(e));
            let value = json!({
                "spec": tronq_core::io::SpecJson::from(&spec),
                "beta1": c_to_pair(nf.beta1),
                "beta2": c_to_pair(nf.beta2),
                "m1": nf.m1(),
                "m2": nf.m2(),
                "h0": SeriesJson::from(&ts.h0),
                "levels": ts.levels.iter().map(SeriesJson::from).collect::<Vec<_>>(),
            });
            ctx.emit("series", &value, None);
        }

        Command::Sum {
            spec,
            c,
            side,
            w_grid,
            w_list,
            w_arg,
            k,
            n,
        } => {
            let spec = ctx.spec(&spec);
            let c = ctx.c_value(&c);
            let side = ctx.side(side);
            let (k, n) = (ctx.k_levels(k), ctx.n_order(n));
            let (nf, rep) = build_rep(&spec, k, n);
            let ws: Vec<C64> = if let Some(list) = w_list {
                list.split(';')
                    .map(|s| parse_complex(s).unwrap_or_else(|e| usage_error(&e)))
                    .collect()
            } else if let Some(grid) = w_grid {
                let parts: Vec<&str> = grid.split(':').collect();
                if parts.len() != 3 {
                    usage_error("--w-grid must be rmin:rmax:count");
                }
                let rmin: f64 = parts[0].parse().unwrap_or_else(|_| usage_error("bad rmin"));
                let rmax: f64 = parts[1].parse().unwrap_or_else(|_| usage_error("bad rmax"));
                let count: usize = parts[2].parse().unwrap_or_else(|_| usage_error("bad count"));
                if count == 0 {
                    usage_error("--w-grid count must be positive");
                }
                (0..count)
                    .map(|i| {
                        let r = if count == 1 {
                            rmin
                        } else {
                            rmin + (rmax - rmin) * i as f64 / (count - 1) as f64
                        };
                        C64::from_polar(r, w_arg)
                    })
                    .collect()
            } else {
                usage_error("one of --w-grid or --w-list is required");
            };
            let mut records = Vec::new();
            let mut csv = String::from("w_re,w_im,h_re,h_im,residual,est_error\n");
            for w in ws {
                let jet = rep.eval(c, side, w, k).unwrap_or_else(|e| numeric_error(e));
                let res = rep.residual(w, &jet).unwrap_or_else(|e| numeric_error(e));
                csv.push_str(&format!(
                    "{:.17e},{:.17e},{:.17e},{:.17e},{:.3e},{:.3e}\n",
                    w.re,
                    w.im,
                    jet.h.re,
                    jet.h.im,
                    res.norm(),
                    jet.err_estimate
                ));
                records.push(json!({
                    "w": c_to_pair(w),
                    "value": c_to_pair(jet.h),
                    "residual": res.norm(),
                    "est_error": jet.err_estimate,
                }));
            }
            let value = json!({
                "spec": tronq_core::io::SpecJson::from(&spec),
                "C": c_to_pair(c),
                "side": side,
                "K": k, "N": n,
                "beta1": c_to_pair(nf.beta1),
                "records": records,
            });
            ctx.emit("sum", &value, Some(csv));
        }

        Command::Integrate {
            spec,
            c,
            side,
            from,
            to,
            rel_tol,
            abs_tol,
            k,
            n,
        } => {
            let spec = ctx.spec(&spec);
            let c = ctx.c_value(&c);
            let side = ctx.side(side);
            let (nf, rep) = build_rep(&spec, ctx.k_levels(k), ctx.n_order(n));
            let from = parse_complex(&from).unwrap_or_else(|e| usage_error(&e));
            let to = parse_complex(&to).unwrap_or_else(|e| usage_error(&e));
            let (init, small_warn) =
                ode::seed_from_borel(&rep, c, side, from).unwrap_or_else(|e| numeric_error(e));
            let path = ode::PathSpec::line(from, to, rel_tol, abs_tol);
            let traj = ode::integrate_path(&nf, init, &path).unwrap_or_else(|e| numeric_error(e));
            let mut csv = String::from("w_re,w_im,h_re,h_im\n");
            for node in &traj.nodes {
                csv.push_str(&format!(
                    "{:.17e},{:.17e},{:.17e},{:.17e}\n",
                    node.w.re, node.w.im, node.h.re, node.h.im
                ));
            }
            let value = json!({
                "spec": tronq_core::io::SpecJson::from(&spec),
                "seed_small_w_warning": small_warn,
                "blowup": traj.blowup.map(|b| c_to_pair(b.w_pole_guess)),
                "nodes": traj.nodes.iter().map(|n| json!({
                    "w": c_to_pair(n.w), "h": c_to_pair(n.h), "hp": c_to_pair(n.hp),
                })).collect::<Vec<_>>(),
            });
            ctx.emit("integrate", &value, Some(csv));
        }

        Command::Poles {
            spec,
            c,
            side,
            n_range,
            seed_offset,
            k,
            n,
        } => {
            let spec = ctx.spec(&spec);
            let c = ctx.c_value(&c);
            let side = ctx.side(side);
            let range = parse_range(&n_range).unwrap_or_else(|e| usage_error(&e));
            let (nf, rep) = build_rep(&spec, ctx.k_levels(k), ctx.n_order(n));
            let f0 = tronq_core::asymptotics::F0Form::for_spec(&spec);
            if f0.singular_set().is_empty() {
                numeric_error(tronq_core::Error::NotApplicable(
                    "this case's leading profile has no singularities".into(),
                ));
            }
            let mut rows = Vec::new();
            let mut csv = String::from("array,n,w_re,w_im,order,uncertainty,refined\n");
            for (array, (xi_s, _)) in f0.singular_set().into_iter().enumerate() {
                if let Predictions::Poles(list) =
                    predict_poles(nf.beta1, c, xi_s, side, range.clone())
                {
                    for p in list {
                        let kind = ode::SolutionKind::Tronquee { c, side };
                        match ode::hunt_pole_near(&nf, &rep, kind, p.w_pred, seed_offset) {
                            Ok(obs) => {
                                csv.push_str(&format!(
                                    "{},{},{:.12e},{:.12e},{},{:.3e},{}\n",
                                    array,
                                    p.n,
                                    obs.location.re,
                                    obs.location.im,
                                    obs.order_estimate,
                                    obs.uncertainty,
                                    obs.refined
                                ));
                                rows.push(json!({
                                    "array": array,
                                    "n": p.n,
                                    "w_pred": c_to_pair(p.w_pred),
                                    "w_obs": c_to_pair(obs.location),
                                    "order": obs.order_estimate,
                                    "uncertainty": obs.uncertainty,
                                    "refined": obs.refined,
                                }))
                            }
                            Err(e) => rows.push(json!({
                                "array": array, "n": p.n,
                                "w_pred": c_to_pair(p.w_pred),
                                "error": e.to_string(),
                            })),
                        }
                    }
                }
            }
            let value = json!({
                "spec": tronq_core::io::SpecJson::from(&spec),
                "C": c_to_pair(c),
                "poles": rows,
            });
            ctx.emit("poles", &value, Some(csv));
        }

        Command::Predict {
            spec,
            c,
            side,
            n_range,
            x_plane,
            sheet,
        } => {
            let spec = ctx.spec(&spec);
            let c = ctx.c_value(&c);
            let side = ctx.side(side);
            let range = parse_range(&n_range).unwrap_or_else(|e| usage_error(&e));
            let nf = spec.normalize().unwrap_or_else(|e| numeric_error(e));
            if x_plane {
                let rows = predict_poles_x(&spec, c, side, range, sheet)
                    .unwrap_or_else(|e| numeric_error(e));
                let value = json!({
                    "spec": tronq_core::io::SpecJson::from(&spec),
                    "predictions": rows.iter().map(|p| json!({
                        "n": p.n, "array": p.array,
                        "w_pred": c_to_pair(p.w_pred),
                        "x_pred": c_to_pair(p.x_pred),
                    })).collect::<Vec<_>>(),
                });
                ctx.emit("predict", &value, None);
            } else {
                let f0 = tronq_core::asymptotics::F0Form::for_spec(&spec);
                if f0.singular_set().is_empty() {
                    numeric_error(tronq_core::Error::NotApplicable(
                        "this case's leading profile has no singularities".into(),
                    ));
                }
                let mut arrays = Vec::new();
                for (idx, (xi_s, order)) in f0.singular_set().into_iter().enumerate() {
                    let preds = predict_poles(nf.beta1, c, xi_s, side, range.clone());
                    arrays.push(json!({
                        "array": idx,
                        "xi_s": c_to_pair(xi_s),
                        "profile_pole_order": order,
                        "w_pred": preds.list().iter().map(|p| json!({
                            "n": p.n, "w": c_to_pair(p.w_pred),
                        })).collect::<Vec<_>>(),
                    }));
                }
                let value = json!({
                    "spec": tronq_core::io::SpecJson::from(&spec),
                    "C": c_to_pair(c),
                    "side": side,
                    "beta1": c_to_pair(nf.beta1),
                    "arrays": arrays,
                });
                ctx.emit("predict", &value, None);
            }
        }

        Command::Compare {
            spec,
            c,
            side,
            n_range,
            seed_offset,
            k,
            n,
        } => {
            let spec = ctx.spec(&spec);
            let c = ctx.c_value(&c);
            let side = ctx.side(side);
            let range = parse_range(&n_range).unwrap_or_else(|e| usage_error(&e));
            let (nf, rep) = build_rep(&spec, ctx.k_levels(k), ctx.n_order(n));
            let f0 = tronq_core::asymptotics::F0Form::for_spec(&spec);
            if f0.singular_set().is_empty() {
                numeric_error(tronq_core::Error::NotApplicable(
                    "this case's leading profile has no singularities".into(),
                ));
            }
            let mut reports = Vec::new();
            for (idx, (xi_s, _)) in f0.singular_set().into_iter().enumerate() {
                let report = tronq_core::asymptotics::validate_pole_formula(
                    &nf,
                    &rep,
                    c,
                    side,
                    xi_s,
                    range.clone(),
                    seed_offset,
                )
                .unwrap_or_else(|e| numeric_error(e));
                reports.push(json!({
                    "array": idx,
                    "xi_s": c_to_pair(xi_s),
                    "trend_decreasing": report.trend_decreasing,
                    "unmatched_observed": report.unmatched_observed,
                    "unmatched_predicted": report.unmatched_predicted,
                    "matches": report.matches.iter().map(|m| json!({
                        "n": m.n,
                        "w_pred": c_to_pair(m.w_pred),
                        "w_obs": c_to_pair(m.w_obs),
                        "gap": m.gap,
                    })).collect::<Vec<_>>(),
                }));
            }
            let value = json!({
                "spec": tronq_core::io::SpecJson::from(&spec),
                "C": c_to_pair(c),
                "side": side,
                "reports": reports,
            });
            ctx.emit("compare", &value, None);
        }

        Command::Selftest { seed } => {
            let seed = ctx.config.seed.unwrap_or(seed);
            let ok = selftest::run(seed);
            if !ok {
                std::process::exit(1);
            }
        }
    }
}
