//! Serializable reports and their human, JSON and CSV renderings.
//!
//! JSON output wraps every result as `{command, seed, input, result}`; the
//! `result` object carries exactly the fields of the corresponding report.
//! Complex numbers are `[re, im]` pairs. CSV numbers use 17 significant
//! digits.

use std::fmt::Write as _;

use serde::Serialize;
use tecost_core::tecost::Regime;
use tecost_core::{Complex64, ComplexMatrix, FidelityResult, TECostResult};

use crate::error::CliResult;

pub fn pair(z: &Complex64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn pairs(v: &[Complex64]) -> Vec<[f64; 2]> {
    v.iter().map(pair).collect()
}

fn matrix_pairs(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.rows()).map(|i| pairs(m.row(i))).collect()
}

/// Full-precision CSV number.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub command: &'a str,
    pub seed: u64,
    pub input: &'a str,
    pub result: &'a T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TeCostReport {
    pub cos_value: f64,
    pub angle: f64,
    pub optimal_v: Vec<[f64; 2]>,
    pub witness: Vec<[f64; 2]>,
    pub converged: bool,
    pub regime: Regime,
    pub certificate_gap: f64,
}

impl From<&TECostResult> for TeCostReport {
    fn from(r: &TECostResult) -> Self {
        Self {
            cos_value: r.cos_value,
            angle: r.angle,
            optimal_v: pairs(&r.optimal_v),
            witness: pairs(r.witness.amplitudes()),
            converged: r.converged,
            regime: r.regime,
            certificate_gap: r.certificate_gap,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointStateReport {
    pub dim_a: usize,
    pub dim_b: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FidelityReport {
    pub value: f64,
    pub minimizer: JointStateReport,
    pub reduced_state: Vec<Vec<[f64; 2]>>,
    pub optimal_w: Option<Vec<[f64; 2]>>,
    pub iterations: usize,
    pub restarts_used: usize,
    pub converged: bool,
    pub gradient_norm: f64,
    pub possibly_zero: bool,
}

impl From<&FidelityResult> for FidelityReport {
    fn from(r: &FidelityResult) -> Self {
        Self {
            value: r.value,
            minimizer: JointStateReport {
                dim_a: r.minimizer.dim_a(),
                dim_b: r.minimizer.dim_b(),
                amplitudes: pairs(r.minimizer.amplitudes()),
            },
            reduced_state: matrix_pairs(r.reduced_state.matrix()),
            optimal_w: r.optimal_w.as_deref().map(pairs),
            iterations: r.iterations,
            restarts_used: r.restarts_used,
            converged: r.converged,
            gradient_norm: r.gradient_norm,
            possibly_zero: r.possibly_zero,
        }
    }
}

/// Outcome of checking F_min = max(cos‖K‖, 0) on one channel.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub channel: String,
    pub fmin_value: f64,
    pub cos_cost: f64,
    pub clamped_cos: f64,
    pub abs_gap: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// F_min ≥ cos‖K‖ − 1e-7, which must hold in every regime.
    pub one_sided_ok: bool,
    pub regime: Regime,
    pub fmin_converged: bool,
    pub fmin_iterations: usize,
    pub fmin_possibly_zero: bool,
    pub cost_converged: bool,
    pub certificate_gap: f64,
    pub fmin_seconds: f64,
    pub cost_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub q: f64,
    pub fmin_solver: f64,
    pub fmin_closed: f64,
    pub cost_solver: f64,
    pub cost_closed: f64,
    pub no_entanglement_fidelity: f64,
    pub fmin_gap: f64,
    pub cost_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteRow {
    pub n: usize,
    pub d: usize,
    pub trial: usize,
    pub seed: u64,
    pub fmin_value: f64,
    pub cos_cost: f64,
    pub clamped_cos: f64,
    pub abs_gap: f64,
    pub pass: bool,
    pub one_sided_ok: bool,
    pub regime: Regime,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteSummary {
    pub trials: usize,
    pub max_gap: f64,
    pub failures: usize,
    pub one_sided_failures: usize,
    pub tolerance: f64,
    pub wall_seconds: f64,
    pub fmin_seconds: f64,
    pub cost_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Suite {
    pub summary: SuiteSummary,
    pub rows: Vec<SuiteRow>,
}

fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::Positive => "Positive",
        Regime::NonPositive => "NonPositive",
        Regime::Boundary => "Boundary",
    }
}

pub fn json<T: Serialize>(command: &str, seed: u64, input: &str, result: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(&Envelope {
        command,
        seed,
        input,
        result,
    })?;
    s.push('\n');
    Ok(s)
}

/// Renders a header and rows of string fields as CSV.
pub fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| crate::error::CliError::Encode(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn fmt_vec(v: &[[f64; 2]]) -> String {
    let parts: Vec<String> = v.iter().map(|[re, im]| format!("{re:+.9}{im:+.9}i")).collect();
    format!("[{}]", parts.join(", "))
}

impl TeCostReport {
    pub fn human(&self, input: &str, seed: u64) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "channel          {input}");
        let _ = writeln!(s, "seed             {seed}");
        let _ = writeln!(s, "angle            {:.12}", self.angle);
        let _ = writeln!(s, "cos_value        {:.12}", self.cos_value);
        let _ = writeln!(s, "clamped cos      {:.12}", self.cos_value.max(0.0));
        let _ = writeln!(s, "regime           {}", regime_name(self.regime));
        let _ = writeln!(s, "converged        {}", self.converged);
        let _ = writeln!(s, "certificate_gap  {:.3e}", self.certificate_gap);
        let _ = writeln!(s, "optimal_v        {}", fmt_vec(&self.optimal_v));
        let _ = writeln!(s, "witness          {}", fmt_vec(&self.witness));
        s
    }

    pub fn csv(&self) -> CliResult<String> {
        csv_table(
            &["cos_value", "angle", "regime", "converged", "certificate_gap"],
            [vec![
                num(self.cos_value),
                num(self.angle),
                regime_name(self.regime).to_string(),
                self.converged.to_string(),
                num(self.certificate_gap),
            ]],
        )
    }
}

impl FidelityReport {
    pub fn human(&self, input: &str, seed: u64) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "channel          {input}");
        let _ = writeln!(s, "seed             {seed}");
        let _ = writeln!(s, "F_min            {:.12}", self.value);
        let _ = writeln!(s, "possibly_zero    {}", self.possibly_zero);
        let _ = writeln!(s, "converged        {}", self.converged);
        let _ = writeln!(s, "iterations       {}", self.iterations);
        let _ = writeln!(s, "restarts         {}", self.restarts_used);
        let _ = writeln!(s, "gradient_norm    {:.3e}", self.gradient_norm);
        let _ = writeln!(
            s,
            "minimizer        ({}x{}) {}",
            self.minimizer.dim_a,
            self.minimizer.dim_b,
            fmt_vec(&self.minimizer.amplitudes)
        );
        match &self.optimal_w {
            Some(w) => {
                let _ = writeln!(s, "optimal_w        {}", fmt_vec(w));
            }
            None => {
                let _ = writeln!(s, "optimal_w        undefined (fidelity at zero)");
            }
        }
        s
    }

    pub fn csv(&self) -> CliResult<String> {
        csv_table(
            &[
                "value",
                "possibly_zero",
                "converged",
                "iterations",
                "restarts_used",
                "gradient_norm",
            ],
            [vec![
                num(self.value),
                self.possibly_zero.to_string(),
                self.converged.to_string(),
                self.iterations.to_string(),
                self.restarts_used.to_string(),
                num(self.gradient_norm),
            ]],
        )
    }
}

impl VerifyReport {
    pub fn human(&self, seed: u64) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "channel          {}", self.channel);
        let _ = writeln!(s, "seed             {seed}");
        let _ = writeln!(s, "F_min (descent)  {:.12}", self.fmin_value);
        let _ = writeln!(s, "cos cost         {:.12}", self.cos_cost);
        let _ = writeln!(s, "max(cos, 0)      {:.12}", self.clamped_cos);
        let _ = writeln!(
            s,
            "gap              {:.3e} (tolerance {:.1e})",
            self.abs_gap, self.tolerance
        );
        let _ = writeln!(s, "F_min >= cos     {}", self.one_sided_ok);
        let _ = writeln!(s, "regime           {}", regime_name(self.regime));
        let _ = writeln!(
            s,
            "solvers          descent {} in {} iterations ({:.3}s), cost {} ({:.3}s)",
            if self.fmin_converged {
                "converged"
            } else {
                "not converged"
            },
            self.fmin_iterations,
            self.fmin_seconds,
            if self.cost_converged {
                "converged"
            } else {
                "not converged"
            },
            self.cost_seconds
        );
        let _ = writeln!(s, "result           {}", if self.pass { "PASS" } else { "FAIL" });
        s
    }

    pub fn csv(&self) -> CliResult<String> {
        csv_table(
            &[
                "channel",
                "fmin_value",
                "cos_cost",
                "clamped_cos",
                "abs_gap",
                "tolerance",
                "pass",
                "one_sided_ok",
                "regime",
            ],
            [vec![
                self.channel.clone(),
                num(self.fmin_value),
                num(self.cos_cost),
                num(self.clamped_cos),
                num(self.abs_gap),
                num(self.tolerance),
                self.pass.to_string(),
                self.one_sided_ok.to_string(),
                regime_name(self.regime).to_string(),
            ]],
        )
    }
}

pub fn sweep_csv(rows: &[SweepRow]) -> CliResult<String> {
    csv_table(
        &[
            "q",
            "fmin_solver",
            "fmin_closed",
            "cost_solver",
            "cost_closed",
            "no_entanglement_fidelity",
            "fmin_gap",
            "cost_gap",
        ],
        rows.iter().map(|r| {
            [
                r.q,
                r.fmin_solver,
                r.fmin_closed,
                r.cost_solver,
                r.cost_closed,
                r.no_entanglement_fidelity,
                r.fmin_gap,
                r.cost_gap,
            ]
            .into_iter()
            .map(num)
            .collect()
        }),
    )
}

pub fn sweep_human(n: usize, rows: &[SweepRow]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "depolarizing channel, n = {n}");
    let _ = writeln!(
        s,
        "{:>10} {:>12} {:>12} {:>12} {:>12} {:>12} {:>10} {:>10}",
        "q", "fmin", "fmin_closed", "cost", "cost_closed", "no_ent_F", "fmin_gap", "cost_gap"
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{:>10.6} {:>12.9} {:>12.9} {:>12.9} {:>12.9} {:>12.9} {:>10.2e} {:>10.2e}",
            r.q,
            r.fmin_solver,
            r.fmin_closed,
            r.cost_solver,
            r.cost_closed,
            r.no_entanglement_fidelity,
            r.fmin_gap,
            r.cost_gap
        );
    }
    let _ = writeln!(
        s,
        "fidelity without entanglement, √(q + (1 − q)/n), exceeds F_min on every row with q < 1"
    );
    s
}

impl Suite {
    /// Per-trial rows only; timings stay out so equal seeds give equal bytes.
    pub fn csv(&self) -> CliResult<String> {
        csv_table(
            &[
                "n",
                "d",
                "trial",
                "seed",
                "fmin_value",
                "cos_cost",
                "clamped_cos",
                "abs_gap",
                "pass",
                "one_sided_ok",
                "regime",
            ],
            self.rows.iter().map(|r| {
                vec![
                    r.n.to_string(),
                    r.d.to_string(),
                    r.trial.to_string(),
                    r.seed.to_string(),
                    num(r.fmin_value),
                    num(r.cos_cost),
                    num(r.clamped_cos),
                    num(r.abs_gap),
                    r.pass.to_string(),
                    r.one_sided_ok.to_string(),
                    regime_name(r.regime).to_string(),
                ]
            }),
        )
    }

    pub fn summary_human(&self) -> String {
        let m = &self.summary;
        format!(
            "trials {}  max gap {:.3e}  failures {}  one-sided failures {}  tolerance {:.1e}\n\
             wall {:.2}s  descent {:.2}s  cost {:.2}s\n",
            m.trials,
            m.max_gap,
            m.failures,
            m.one_sided_failures,
            m.tolerance,
            m.wall_seconds,
            m.fmin_seconds,
            m.cost_seconds
        )
    }

    pub fn human(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:>2} {:>2} {:>5} {:>14} {:>14} {:>10} {:>12}  result",
            "n", "d", "trial", "F_min", "cos", "gap", "regime"
        );
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:>2} {:>2} {:>5} {:>14.10} {:>14.10} {:>10.2e} {:>12}  {}",
                r.n,
                r.d,
                r.trial,
                r.fmin_value,
                r.cos_cost,
                r.abs_gap,
                regime_name(r.regime),
                if r.pass && r.one_sided_ok { "PASS" } else { "FAIL" }
            );
        }
        s.push_str(&self.summary_human());
        s
    }
}
