use std::f64::consts::PI;
use std::io::Write;

use serde::Serialize;
use serde_json::json;

use super::output::{open, write_json, Cell, Table};
use super::{
    AngleArgs, Cli, CliError, Command, EstimateArgs, Format, HaarArgs, MajoranaArgs, ModelArg,
    NoiseArgs, OptimizeArgs, ProbeArgs, QfiArgs, SweepArgs, EXIT_NOT_CONVERGED, EXIT_OK,
};
use crate::error::{Error, Result};
use crate::estimation::{run_batch, ProtocolConfig, Realignment};
use crate::noise::{
    dephase_ghz, dephased_trace_qfi_closed, depol_qfi_factor, depolarize, DepolarizeMode,
};
use crate::optimizer::{maximize_with, OptimizerConfig};
use crate::qfi::{
    closed_form_ghz_qfi, ghz_crb_trace_inverse, goldberg_bound, haar_avg_trace_analytic,
    haar_avg_trace_mc, qfi_pure, saturation_check, MixedQfi, QfiMatrix, DEFAULT_EIG_CUTOFF,
    SIN_BETA_GUARD,
};
use crate::spin_algebra::{ghz_state, majorana_roots, rotation, EulerAngles, Spin, SpinState};

/// Largest N for which the depolarizing table computes the full-space QFI.
const NOISE_FULL_SPACE_MAX: u32 = 10;

pub(super) fn dispatch(cli: &Cli) -> Result<i32, CliError> {
    let ctx = Ctx { cli };
    match &cli.command {
        Command::Qfi(a) => ctx.qfi(a),
        Command::SweepBeta(a) => ctx.sweep_beta(a),
        Command::Haar(a) => ctx.haar(a),
        Command::Noise(a) => ctx.noise(a),
        Command::Estimate(a) => ctx.estimate(a),
        Command::Optimize(a) => ctx.optimize(a),
        Command::Majorana(a) => ctx.majorana(a),
    }
}

struct Ctx<'a> {
    cli: &'a Cli,
}

impl Ctx<'_> {
    fn angle(&self, x: f64) -> f64 {
        if self.cli.degrees {
            x.to_radians()
        } else {
            x
        }
    }

    fn euler(&self, a: &AngleArgs) -> EulerAngles {
        EulerAngles::new(self.angle(a.alpha), self.angle(a.beta), self.angle(a.gamma))
    }

    fn out(&self) -> Result<Box<dyn Write>, CliError> {
        Ok(open(self.cli.output.as_deref())?)
    }

    fn json<R: Serialize>(&self, command: &str, result: &R) -> Result<i32, CliError> {
        write_json(&mut *self.out()?, command, self.cli, result)?;
        Ok(EXIT_OK)
    }

    fn table(&self, command: &str, table: &Table, default: Format, extra: serde_json::Value) -> Result<i32, CliError> {
        match self.cli.format.unwrap_or(default) {
            Format::Csv => table.write_csv(&mut *self.out()?, command, self.cli)?,
            Format::Json => {
                let mut result = json!({ "rows": table.to_json() });
                if let (Some(obj), serde_json::Value::Object(more)) = (result.as_object_mut(), extra) {
                    obj.extend(more);
                }
                write_json(&mut *self.out()?, command, self.cli, &result)?;
            }
        }
        Ok(EXIT_OK)
    }

    fn qfi(&self, a: &QfiArgs) -> Result<i32, CliError> {
        let state = load_probe(&a.probe)?;
        let angles = self.euler(&a.angles);
        let f = qfi_pure(&state, &angles);
        let inverse = fisher_inverse_trace(&f, angles.beta);
        if a.inverse {
            if let Err(e) = &inverse {
                return Err(e.clone().into());
            }
        }
        let is_ghz = a.probe.state == "ghz";
        let n = state.spin().n_qubits();
        #[derive(Serialize)]
        struct Out {
            j: f64,
            angles: EulerAngles,
            matrix: QfiMatrix,
            trace: f64,
            trace_inverse: Option<f64>,
            note: Option<String>,
            closed_form_ghz: Option<QfiMatrix>,
            ghz_crb_trace_inverse: Option<f64>,
            saturation: [[f64; 3]; 3],
        }
        let out = Out {
            j: state.spin().j(),
            angles,
            matrix: f,
            trace: f.trace(),
            trace_inverse: inverse.as_ref().ok().copied(),
            note: inverse.as_ref().err().map(|e| e.to_string()),
            closed_form_ghz: is_ghz.then(|| closed_form_ghz_qfi(n, angles.beta)),
            ghz_crb_trace_inverse: if is_ghz { ghz_crb_trace_inverse(n, angles.beta).ok() } else { None },
            saturation: saturation_check(&state, &angles),
        };
        match self.cli.format.unwrap_or(Format::Json) {
            Format::Json => self.json("qfi", &out),
            Format::Csv => {
                let mut t = Table::new(vec![
                    "trace", "trace_inverse", "f_aa", "f_ab", "f_ag", "f_bb", "f_bg", "f_gg",
                ]);
                let r = f.rows();
                t.push(vec![
                    out.trace.into(),
                    out.trace_inverse.into(),
                    r[0][0].into(),
                    r[0][1].into(),
                    r[0][2].into(),
                    r[1][1].into(),
                    r[1][2].into(),
                    r[2][2].into(),
                ]);
                self.table("qfi", &t, Format::Csv, json!({}))
            }
        }
    }

    fn sweep_beta(&self, a: &SweepArgs) -> Result<i32, CliError> {
        if a.steps < 2 {
            return Err(CliError::input("--steps must be at least 2"));
        }
        if a.n == 0 {
            return Err(CliError::input("--N must be at least 1"));
        }
        let mut cols = vec!["beta", "trace_inverse_ghz"];
        if a.compare_goldberg {
            cols.extend(["trace_inverse_goldberg", "ratio"]);
        }
        let mut t = Table::new(cols);
        let mut best = (f64::INFINITY, 0.0, f64::INFINITY, 0.0);
        for i in 0..a.steps {
            let beta = (i as f64 + 0.5) * PI / a.steps as f64;
            let g = ghz_crb_trace_inverse(a.n, beta)?;
            let mut row = vec![Cell::Num(beta), Cell::Num(g)];
            if g < best.0 {
                best.0 = g;
                best.1 = beta;
            }
            if a.compare_goldberg {
                let b = goldberg_bound(a.n, beta)?;
                row.extend([Cell::Num(b), Cell::Num(g / b)]);
                if b < best.2 {
                    best.2 = b;
                    best.3 = beta;
                }
            }
            t.push(row);
        }
        let mut extra = json!({ "argmin_beta_ghz": best.1 });
        if a.compare_goldberg {
            extra["argmin_beta_goldberg"] = json!(best.3);
        }
        self.table("sweep-beta", &t, Format::Csv, extra)
    }

    fn haar(&self, a: &HaarArgs) -> Result<i32, CliError> {
        let state = load_probe(&a.probe)?;
        let analytic = haar_avg_trace_analytic(&state);
        let (method, avg) = match a.mc {
            Some(n) => ("monte-carlo", haar_avg_trace_mc(&state, n, a.seed)?),
            None => ("analytic", analytic),
        };
        let z = (avg.stderr > 0.0).then(|| (avg.value - analytic.value) / avg.stderr);
        self.json(
            "haar",
            &json!({
                "j": state.spin().j(),
                "method": method,
                "value": avg.value,
                "stderr": avg.stderr,
                "n_samples": avg.n_samples,
                "analytic_value": analytic.value,
                "z_score": z,
            }),
        )
    }

    fn noise(&self, a: &NoiseArgs) -> Result<i32, CliError> {
        let betas: Vec<f64> = if a.beta.is_empty() {
            (1..=5).map(|k| k as f64 * PI / 6.0).collect()
        } else {
            a.beta.iter().map(|&b| self.angle(b)).collect()
        };
        let (alpha, gamma) = (self.angle(a.alpha), self.angle(a.gamma));
        let n = a.n;
        let mut t;
        match a.model {
            ModelArg::Dephasing => {
                t = Table::new(vec!["p", "beta", "closed_form", "numeric", "abs_diff"]);
                for &p in &a.p {
                    let mixed = if a.no_numeric {
                        dephase_ghz(n, p)?;
                        None
                    } else {
                        Some(MixedQfi::new(&dephase_ghz(n, p)?, DEFAULT_EIG_CUTOFF)?)
                    };
                    for &beta in &betas {
                        let closed = dephased_trace_qfi_closed(n, p, beta);
                        let num = mixed.map(|m| m.at(&EulerAngles::new(alpha, beta, gamma)).trace());
                        t.push(vec![
                            p.into(),
                            beta.into(),
                            closed.into(),
                            num.into(),
                            num.map(|x| (x - closed).abs()).into(),
                        ]);
                    }
                }
            }
            ModelArg::Depolarizing => {
                t = Table::new(vec![
                    "p",
                    "beta",
                    "factor_exact",
                    "factor_leading",
                    "factor_gap_bound",
                    "pure_trace",
                    "closed_form",
                    "numeric",
                    "abs_diff",
                ]);
                let ghz = ghz_state(n, 0.0)?;
                let numeric = !a.no_numeric && n <= NOISE_FULL_SPACE_MAX;
                for &p in &a.p {
                    let fac = depol_qfi_factor(n, p)?;
                    let mixed = if numeric {
                        Some(MixedQfi::new(&depolarize(&ghz, p, DepolarizeMode::Full)?, DEFAULT_EIG_CUTOFF)?)
                    } else {
                        None
                    };
                    for &beta in &betas {
                        let ang = EulerAngles::new(alpha, beta, gamma);
                        let pure = qfi_pure(&ghz, &ang).trace();
                        let closed = fac.exact * pure;
                        let num = mixed.map(|m| m.at(&ang).trace());
                        t.push(vec![
                            p.into(),
                            beta.into(),
                            fac.exact.into(),
                            fac.leading.into(),
                            (8.0 * (1.0 - p) / 2f64.powi(n as i32)).into(),
                            pure.into(),
                            closed.into(),
                            num.into(),
                            num.map(|x| (x - closed).abs()).into(),
                        ]);
                    }
                }
            }
        }
        self.table("noise", &t, Format::Csv, json!({}))
    }

    fn estimate(&self, a: &EstimateArgs) -> Result<i32, CliError> {
        let angles = self.euler(&a.angles);
        let mut cfg = ProtocolConfig::new(a.shots);
        if let Some(p) = a.parity_shots {
            cfg.parity_shots = p;
        }
        if a.ideal_realign {
            cfg.realignment = Realignment::True;
        }
        let res = run_batch(&angles, a.n, &cfg, a.batches, a.seed)?;
        match self.cli.format.unwrap_or(Format::Json) {
            Format::Json => {
                let runs = if a.summary_only { None } else { Some(&res.runs) };
                self.json(
                    "estimate",
                    &json!({ "protocol": res.config, "summary": res.summary, "runs": runs }),
                )
            }
            Format::Csv => {
                let mut t = Table::new(vec![
                    "batch", "seed", "alpha_hat", "beta_hat", "gamma_hat", "sq_err_alpha",
                    "sq_err_beta", "sq_err_gamma", "failure",
                ]);
                for (i, r) in res.runs.iter().enumerate() {
                    let est = r.estimates.as_ref();
                    let err = r.empirical_error;
                    t.push(vec![
                        Cell::Int(i as i64),
                        Cell::Text(r.seed.to_string()),
                        est.map(|e| e.alpha).into(),
                        est.map(|e| e.beta).into(),
                        est.map(|e| e.gamma).into(),
                        err.map(|e| e[0]).into(),
                        err.map(|e| e[1]).into(),
                        err.map(|e| e[2]).into(),
                        r.failure.clone().map_or(Cell::Empty, |f| Cell::Text(format!("\"{}\"", f.replace('"', "'")))),
                    ]);
                }
                self.table("estimate", &t, Format::Csv, json!({}))
            }
        }
    }

    fn optimize(&self, a: &OptimizeArgs) -> Result<i32, CliError> {
        let spin = match (a.j, a.n) {
            (Some(j), _) => Spin::from_j(j)?,
            (None, Some(n)) => Spin::from_qubits(n),
            (None, None) => return Err(CliError::input("give --j or --N")),
        };
        let res = maximize_with(
            spin,
            &OptimizerConfig {
                restarts: a.restarts,
                tol: a.tol,
                max_iter: a.max_iter,
                seed: a.seed,
            },
        )?;
        self.json("optimize", &res)?;
        if res.converged {
            Ok(EXIT_OK)
        } else {
            eprintln!("warning: no restart converged within {} iterations", a.max_iter);
            Ok(EXIT_NOT_CONVERGED)
        }
    }

    fn majorana(&self, a: &MajoranaArgs) -> Result<i32, CliError> {
        let mut state = match (&a.ghz, &a.state) {
            (Some(n), _) => ghz_state(*n, a.delta)?,
            (None, Some(path)) => load_state_file(&path.to_string_lossy())?,
            (None, None) => return Err(CliError::input("give --ghz or --state")),
        };
        if let Some(r) = &a.rotate {
            if r.len() != 3 {
                return Err(CliError::input("--rotate takes alpha,beta,gamma"));
            }
            let e = EulerAngles::new(self.angle(r[0]), self.angle(r[1]), self.angle(r[2]));
            state = state.evolve(&rotation(state.spin(), &e));
        }
        let pts = majorana_roots(&state)?;
        let points: Vec<_> = pts
            .points
            .iter()
            .map(|p| {
                let [x, y, z] = p.unit_vector();
                json!({ "theta": p.theta, "phi": p.phi, "x": x, "y": y, "z": z })
            })
            .collect();
        self.json("majorana", &json!({ "j": state.spin().j(), "points": points }))
    }
}

/// `Tr F^{-1}`, refusing the gimbal-locked chart before inverting.
fn fisher_inverse_trace(f: &QfiMatrix, beta: f64) -> Result<f64> {
    let s = beta.sin();
    if s.abs() <= SIN_BETA_GUARD {
        return Err(Error::SingularRotation { sin_beta: s });
    }
    f.trace_inverse()
}

fn load_probe(p: &ProbeArgs) -> Result<SpinState> {
    if p.state == "ghz" {
        let n = p
            .n
            .ok_or_else(|| Error::InvalidArgument("--N is required for the GHZ probe".into()))?;
        return ghz_state(n, p.delta);
    }
    let state = load_state_file(&p.state)?;
    if let Some(n) = p.n {
        if n != state.spin().n_qubits() {
            return Err(Error::InvalidArgument(format!(
                "--N {n} does not match the state file (2j = {})",
                state.spin().n_qubits()
            )));
        }
    }
    Ok(state)
}

/// Reads `{"j": .., "amplitudes": [[re, im], ...]}` and normalizes it.
pub fn load_state_file(path: &str) -> Result<SpinState> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::StateFile(format!("{path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| Error::StateFile(format!("{path}: {e}")))
}
