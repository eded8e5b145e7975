//! Parameter sweeps over the model, CSV/JSON output and detection of
//! sudden-change points along a swept curve.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rayon::prelude::*;
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{
    bures_from_fidelity, bures_gqd, finish, hellinger_gqd, hellinger_gqd_model_with, trace_gqd_model,
    trace_gqd_xstate, Branch, Diagnostics, Measure, MeasureResult, Method,
};
use crate::oracles::{bures_maxfid_grid, hellinger_gqd_bruteforce, trace_gqd_bruteforce, TraceBudget};
use crate::spin::{equilibrium_state, ModelParams};

/// Grid level of the Hellinger oracle used by `--method oracle`.
pub const HELLINGER_ORACLE_LEVEL: u32 = 3;
/// Grid level of the Bures oracle used by `--method oracle`.
pub const BURES_ORACLE_LEVEL: u32 = 7;

pub const CSV_HEADER: &str = "J,B,D,T,Q_T,Q_H,Q_B,method";

/// A model parameter that can be swept or used as a family label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Param {
    J,
    B,
    D,
    T,
}

impl Param {
    pub fn get(&self, p: &ModelParams) -> f64 {
        match self {
            Param::J => p.j,
            Param::B => p.b,
            Param::D => p.d,
            Param::T => p.t,
        }
    }

    pub fn set(&self, p: &mut ModelParams, v: f64) {
        match self {
            Param::J => p.j = v,
            Param::B => p.b = v,
            Param::D => p.d = v,
            Param::T => p.t = v,
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Param::J => "J",
            Param::B => "B",
            Param::D => "D",
            Param::T => "T",
        };
        f.write_str(s)
    }
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "J" | "j" => Ok(Param::J),
            "B" | "b" => Ok(Param::B),
            "D" | "d" => Ok(Param::D),
            "T" | "t" => Ok(Param::T),
            _ => Err(Error::InvalidSweep(format!("unknown parameter `{s}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub vary: Param,
    pub from: f64,
    pub to: f64,
    /// Number of grid points, endpoints included.
    pub steps: usize,
    /// Values of the parameters that are not swept.
    pub base: ModelParams,
    pub family: Option<(Param, Vec<f64>)>,
    pub measures: Vec<Measure>,
    pub method: Method,
    /// Use the uncorrected closed-form Hellinger constants.
    pub verbatim: bool,
    /// Seed of the trace oracle under `Method::Oracle`.
    pub seed: u64,
}

impl SweepSpec {
    pub fn new(vary: Param, from: f64, to: f64, steps: usize, base: ModelParams) -> Self {
        Self {
            vary,
            from,
            to,
            steps,
            base,
            family: None,
            measures: Measure::ALL.to_vec(),
            method: Method::ClosedForm,
            verbatim: false,
            seed: 0,
        }
    }

    pub fn with_family(mut self, param: Param, values: Vec<f64>) -> Self {
        self.family = Some((param, values));
        self
    }

    pub fn with_measures(mut self, measures: &[Measure]) -> Self {
        self.measures = measures.to_vec();
        self
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSweep(msg));
        if self.steps < 2 {
            return bad(format!("steps must be at least 2, got {}", self.steps));
        }
        if !(self.from.is_finite() && self.to.is_finite()) || self.from > self.to {
            return bad(format!("invalid range {}..{}", self.from, self.to));
        }
        if self.method == Method::PaperVerbatim {
            return bad("paper_verbatim is a flag, not a method".into());
        }
        if self.measures.is_empty() {
            return bad("no measures requested".into());
        }
        if let Some((param, values)) = &self.family {
            if *param == self.vary {
                return bad(format!("family parameter {param} is also the swept parameter"));
            }
            if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
                return bad("family values must be finite and non-empty".into());
            }
        }
        for p in self.points() {
            if !(p.j.is_finite() && p.b.is_finite() && p.d.is_finite()) || !(p.t >= 0.0) || p.t.is_infinite() {
                return bad(format!("invalid grid point J={} B={} D={} T={}", p.j, p.b, p.d, p.t));
            }
        }
        Ok(())
    }

    /// Values of the swept parameter.
    pub fn axis(&self) -> Vec<f64> {
        let n = self.steps;
        (0..n)
            .map(|i| if i + 1 == n { self.to } else { self.from + (self.to - self.from) * i as f64 / (n - 1) as f64 })
            .collect()
    }

    /// Grid points ordered by family member, then along the axis.
    pub fn points(&self) -> Vec<ModelParams> {
        let members: Vec<Option<f64>> = match &self.family {
            Some((_, values)) => values.iter().copied().map(Some).collect(),
            None => vec![None],
        };
        let axis = self.axis();
        let mut out = Vec::with_capacity(members.len() * axis.len());
        for m in members {
            let mut base = self.base;
            if let (Some(v), Some((param, _))) = (m, &self.family) {
                param.set(&mut base, v);
            }
            for &x in &axis {
                let mut p = base;
                self.vary.set(&mut p, x);
                out.push(p);
            }
        }
        out
    }

    fn label(&self) -> &'static str {
        if self.verbatim && self.method == Method::ClosedForm {
            Method::PaperVerbatim.as_str()
        } else {
            self.method.as_str()
        }
    }
}

/// Evaluate one measure at one parameter point. `T = 0` uses the ground
/// state. Bures has no closed form, so `ClosedForm` falls back to the
/// definitional optimiser for it.
pub fn compute_point(p: &ModelParams, measure: Measure, method: Method, verbatim: bool, seed: u64) -> Result<MeasureResult> {
    match (measure, method) {
        (Measure::Trace, Method::ClosedForm) => trace_gqd_model(p),
        (Measure::Hellinger, Method::ClosedForm) => hellinger_gqd_model_with(p, verbatim),
        (Measure::Hellinger, Method::PaperVerbatim) => hellinger_gqd_model_with(p, true),
        (_, Method::PaperVerbatim) => compute_point(p, measure, Method::ClosedForm, verbatim, seed),
        (Measure::Trace, Method::Definitional) => trace_gqd_xstate(&equilibrium_state(p)?),
        (Measure::Hellinger, Method::Definitional) => hellinger_gqd(&equilibrium_state(p)?),
        (Measure::Bures, Method::ClosedForm | Method::Definitional) => bures_gqd(&equilibrium_state(p)?),
        (Measure::Trace, Method::Oracle) => {
            let budget = TraceBudget { seed, ..TraceBudget::default() };
            let o = trace_gqd_bruteforce(&equilibrium_state(p)?, &budget)?;
            let diag = Diagnostics { evaluations: Some(o.evaluations), ..Default::default() };
            finish(Measure::Trace, Method::Oracle, o.value, diag)
        }
        (Measure::Hellinger, Method::Oracle) => {
            let v = hellinger_gqd_bruteforce(&equilibrium_state(p)?, HELLINGER_ORACLE_LEVEL)?;
            finish(Measure::Hellinger, Method::Oracle, v, Diagnostics::default())
        }
        (Measure::Bures, Method::Oracle) => {
            let f = bures_maxfid_grid(&equilibrium_state(p)?, BURES_ORACLE_LEVEL)?;
            let diag = Diagnostics { max_fidelity: Some(f), ..Default::default() };
            finish(Measure::Bures, Method::Oracle, bures_from_fidelity(f), diag)
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepRow {
    pub params: ModelParams,
    /// Index into the family values (0 without a family).
    pub member: usize,
    /// Indexed like [`Measure::ALL`]; `None` when not requested.
    pub results: [Option<MeasureResult>; 3],
    pub method: &'static str,
}

impl SweepRow {
    pub fn value(&self, m: Measure) -> Option<f64> {
        self.results[index(m)].as_ref().map(|r| r.value)
    }

    pub fn branch(&self, m: Measure) -> Option<Branch> {
        self.results[index(m)].as_ref().and_then(|r| r.branch())
    }
}

impl Serialize for SweepRow {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(8))?;
        map.serialize_entry("J", &self.params.j)?;
        map.serialize_entry("B", &self.params.b)?;
        map.serialize_entry("D", &self.params.d)?;
        map.serialize_entry("T", &self.params.t)?;
        for m in Measure::ALL {
            map.serialize_entry(m.column(), &self.value(m))?;
        }
        map.serialize_entry("method", self.method)?;
        map.end()
    }
}

fn index(m: Measure) -> usize {
    match m {
        Measure::Trace => 0,
        Measure::Hellinger => 1,
        Measure::Bures => 2,
    }
}

#[derive(Clone, Debug)]
pub struct SweepTable {
    pub spec: SweepSpec,
    pub rows: Vec<SweepRow>,
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let points = spec.points();
    let per_member = spec.steps;
    let label = spec.label();
    let rows = points
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let mut results: [Option<MeasureResult>; 3] = [None, None, None];
            for &m in &spec.measures {
                results[index(m)] = Some(compute_point(p, m, spec.method, spec.verbatim, spec.seed)?);
            }
            Ok(SweepRow { params: *p, member: i / per_member, results, method: label })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable { spec: spec.clone(), rows })
}

/// Scientific notation with 12 significant digits.
pub fn format_value(v: f64) -> String {
    format!("{v:.11e}")
}

impl SweepTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let p = &r.params;
            for v in [p.j, p.b, p.d, p.t] {
                out.push_str(&format_value(v));
                out.push(',');
            }
            for m in Measure::ALL {
                if let Some(v) = r.value(m) {
                    out.push_str(&format_value(v));
                }
                out.push(',');
            }
            out.push_str(r.method);
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.rows)?)
    }

    /// Rows of one family member, in axis order.
    pub fn member(&self, member: usize) -> &[SweepRow] {
        let n = self.spec.steps;
        &self.rows[member * n..(member + 1) * n]
    }

    pub fn members(&self) -> usize {
        self.spec.family.as_ref().map_or(1, |(_, v)| v.len())
    }

    /// `(x, value)` pairs of one measure for one family member.
    pub fn series(&self, member: usize, m: Measure) -> Vec<(f64, f64)> {
        self.member(member)
            .iter()
            .filter_map(|r| r.value(m).map(|v| (self.spec.vary.get(&r.params), v)))
            .collect()
    }

    pub fn tags(&self, member: usize, m: Measure) -> Vec<Option<Branch>> {
        self.member(member).iter().map(|r| r.branch(m)).collect()
    }

    /// Sudden-change points of every requested measure and family member,
    /// argmax switches refined by re-evaluating the model.
    pub fn sudden_changes(&self) -> Vec<(usize, SuddenChangePoint)> {
        let mut out = Vec::new();
        for member in 0..self.members() {
            let base = self.member(member)[0].params;
            for &m in &self.spec.measures {
                let probe = |x: f64| {
                    let mut p = base;
                    self.spec.vary.set(&mut p, x);
                    compute_point(&p, m, self.spec.method, self.spec.verbatim, self.spec.seed)
                        .ok()
                        .and_then(|r| r.branch())
                };
                let found = detect_sudden_change(&self.series(member, m), &self.tags(member, m), Some(&probe), m);
                out.extend(found.into_iter().map(|c| (member, c)));
            }
        }
        out
    }
}

/// Parse a file produced by [`SweepTable::to_csv`]: one `[J, B, D, T]` and
/// `[Q_T, Q_H, Q_B]` pair per row plus the method label.
pub fn parse_csv(text: &str) -> Result<Vec<([f64; 4], [Option<f64>; 3], String)>> {
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(Error::InvalidSweep("missing CSV header".into()));
    }
    let num = |s: &str| s.parse::<f64>().map_err(|e| Error::InvalidSweep(format!("bad number `{s}`: {e}")));
    lines
        .filter(|l| !l.is_empty())
        .map(|line| {
            let cells: Vec<&str> = line.split(',').collect();
            if cells.len() != 8 {
                return Err(Error::InvalidSweep(format!("expected 8 cells: {line}")));
            }
            let params = [num(cells[0])?, num(cells[1])?, num(cells[2])?, num(cells[3])?];
            let mut q = [None; 3];
            for k in 0..3 {
                if !cells[4 + k].is_empty() {
                    q[k] = Some(num(cells[4 + k])?);
                }
            }
            Ok((params, q, cells[7].to_string()))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChangeKind {
    /// The optimal measurement axis jumps between branches.
    ArgmaxSwitch,
    /// Isolated jump of the slope with no branch change.
    NonSmoothKink,
    /// Smooth minimum ending the decrease that follows an argmax switch.
    TurningPoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SuddenChangePoint {
    pub location: f64,
    pub kind: ChangeKind,
    pub series: Measure,
}

/// Bisection steps used to refine a branch switch inside a grid interval.
pub const BISECTION_STEPS: usize = 8;

/// Slope jumps larger than this multiple of the neighbouring ones count as
/// kinks.
const KINK_RATIO: f64 = 8.0;
const KINK_FLOOR: f64 = 1e-7;

/// Locate sudden changes along a sampled curve.
///
/// A change of branch tag between neighbours is an argmax switch, refined by
/// bisection through `probe` when given (otherwise placed at the midpoint).
/// After a switch followed by a decrease, the next local minimum is reported
/// as a turning point. Slope jumps away from any switch are reported as
/// non-smooth kinks.
pub fn detect_sudden_change(
    series: &[(f64, f64)],
    tags: &[Option<Branch>],
    probe: Option<&dyn Fn(f64) -> Option<Branch>>,
    measure: Measure,
) -> Vec<SuddenChangePoint> {
    let mut out = Vec::new();
    let n = series.len();
    let mut switch_intervals = Vec::new();
    for i in 0..n.saturating_sub(1) {
        let (a, b) = (tags.get(i).copied().flatten(), tags.get(i + 1).copied().flatten());
        if a.is_none() || b.is_none() || a == b {
            continue;
        }
        let (mut lo, mut hi) = (series[i].0, series[i + 1].0);
        if let Some(probe) = probe {
            for _ in 0..BISECTION_STEPS {
                let mid = 0.5 * (lo + hi);
                if probe(mid) == a {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
        }
        out.push(SuddenChangePoint { location: 0.5 * (lo + hi), kind: ChangeKind::ArgmaxSwitch, series: measure });
        switch_intervals.push(i);

        // decrease right after the switch: follow it to its minimum
        if i + 2 < n && series[i + 2].1 < series[i + 1].1 {
            let mut k = i + 2;
            while k + 1 < n && series[k + 1].1 < series[k].1 {
                k += 1;
            }
            if k + 1 < n {
                out.push(SuddenChangePoint {
                    location: parabola_vertex(series[k - 1], series[k], series[k + 1]),
                    kind: ChangeKind::TurningPoint,
                    series: measure,
                });
            }
        }
    }

    // jumps[k] is the slope change at grid point k + 1; a kink inside an
    // interval splits over two neighbouring jumps
    let slopes: Vec<f64> = series.windows(2).map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0)).collect();
    let jumps: Vec<f64> = slopes.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let scale = series.iter().map(|p| p.1.abs()).fold(0.0, f64::max);
    let pair = |k: usize| jumps[k] + jumps.get(k + 1).copied().unwrap_or(0.0);
    for k in 0..jumps.len() {
        let background = if k >= 1 { jumps[k - 1] } else { 0.0 }.max(jumps.get(k + 2).copied().unwrap_or(0.0));
        let peak = pair(k);
        let is_max = (k == 0 || peak >= pair(k - 1)) && (k + 1 >= jumps.len() || peak > pair(k + 1));
        let near_switch = switch_intervals.iter().any(|&i| i <= k + 2 && k <= i + 1);
        if is_max && !near_switch && peak > KINK_FLOOR * scale.max(1e-300) && peak > KINK_RATIO * background {
            // weights with the smooth curvature contribution removed
            let smooth = 0.5 * (if k >= 1 { jumps[k - 1] } else { 0.0 } + jumps.get(k + 2).copied().unwrap_or(0.0));
            let w0 = (jumps[k] - smooth).max(0.0);
            let w1 = (jumps.get(k + 1).copied().unwrap_or(0.0) - smooth).max(0.0);
            let location = match series.get(k + 2) {
                Some(next) if w0 + w1 > 0.0 => (w0 * series[k + 1].0 + w1 * next.0) / (w0 + w1),
                _ => series[k + 1].0,
            };
            out.push(SuddenChangePoint { location, kind: ChangeKind::NonSmoothKink, series: measure });
        }
    }
    out.sort_by(|a, b| a.location.total_cmp(&b.location));
    out
}

/// Abscissa of the vertex of the parabola through three points.
fn parabola_vertex((x0, y0): (f64, f64), (x1, y1): (f64, f64), (x2, y2): (f64, f64)) -> f64 {
    let den = (x0 - x1) * (x0 - x2) * (x1 - x2);
    let a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / den;
    let b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / den;
    if a > 0.0 {
        (-b / (2.0 * a)).clamp(x0, x2)
    } else {
        x1
    }
}

/// Human-readable summary of sudden-change points, one per line.
pub fn describe_changes(table: &SweepTable, changes: &[(usize, SuddenChangePoint)]) -> String {
    let mut s = String::new();
    for (member, c) in changes {
        let family = match &table.spec.family {
            Some((param, values)) => format!("{param}={} ", values[*member]),
            None => String::new(),
        };
        let kind = match c.kind {
            ChangeKind::ArgmaxSwitch => "argmax-switch",
            ChangeKind::NonSmoothKink => "non-smooth-kink",
            ChangeKind::TurningPoint => "turning-point",
        };
        let _ = writeln!(s, "# {family}{} {kind} at {}={:.6}", c.series.column(), table.spec.vary, c.location);
    }
    s
}
