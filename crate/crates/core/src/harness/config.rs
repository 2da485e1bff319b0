//! TOML run configurations.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use toml::Spanned;

use super::HarnessError;
use crate::config::{NeighborhoodSpec, SolverConfig};
use crate::game::StrategyBox;
use crate::scenarios::{
    dbm_to_watts, AptParams, EavesdropParams, HetNetParams, Scenario, SyntheticParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    Eavesdrop,
    Apt,
    Hetnet,
    SyntheticConcave,
}

impl ScenarioKind {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "eavesdrop" => Some(Self::Eavesdrop),
            "apt" => Some(Self::Apt),
            "hetnet" => Some(Self::Hetnet),
            "synthetic_concave" => Some(Self::SyntheticConcave),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Eavesdrop => "eavesdrop",
            Self::Apt => "apt",
            Self::Hetnet => "hetnet",
            Self::SyntheticConcave => "synthetic_concave",
        }
    }

    /// Parameter names with their defaults; `None` marks a required key.
    fn schema(&self) -> &'static [(&'static str, Option<f64>)] {
        match self {
            Self::Eavesdrop => &[
                ("h_rd_sq", Some(0.7)),
                ("h_ed_sq", Some(0.5)),
                ("noise", Some(0.05)),
                ("d1", Some(1.0)),
                ("d2", Some(1.0)),
                ("d3", Some(0.1)),
                ("d4", Some(0.8)),
            ],
            Self::Apt => &[("c_a", None), ("c_d", None), ("rho", None)],
            Self::Hetnet => &[
                ("lambda_m", Some(40.0)),
                ("theta", Some(0.1)),
                ("tau", Some(1.0)),
                ("lambda_j", Some(3.0)),
                ("alpha", Some(0.5)),
                ("omega", Some(0.5)),
                ("g_je_sq", Some(0.5)),
                ("g_me_sq", Some(0.2)),
                ("n0", Some(1.0)),
                ("p_m", Some(1.0)),
                ("p_m_dbm", Some(30.0)),
                ("sigma_ke", Some(0.0)),
                ("r_m", Some(5.0)),
            ],
            Self::SyntheticConcave => &[("a", Some(0.5)), ("b", Some(0.5)), ("c", Some(0.5)), ("d", Some(1.0))],
        }
    }
}

const BOX_KEYS: [&str; 6] = ["x_min", "x_max", "y_min", "y_max", "z_min", "z_max"];

/// A scenario kind plus every explicitly given parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub kind: ScenarioKind,
    values: BTreeMap<String, f64>,
}

impl ScenarioSpec {
    pub fn new(kind: ScenarioKind) -> Self {
        ScenarioSpec { kind, values: BTreeMap::new() }
    }

    pub fn has_param(&self, name: &str) -> bool {
        BOX_KEYS.contains(&name) || self.kind.schema().iter().any(|(k, _)| *k == name)
    }

    pub fn set(&mut self, name: &str, v: f64) -> Result<(), HarnessError> {
        if !self.has_param(name) {
            return Err(HarnessError::Config(format!(
                "scenario `{}` has no parameter `{name}`",
                self.kind.name()
            )));
        }
        if name == "p_m" {
            self.values.remove("p_m_dbm");
        } else if name == "p_m_dbm" {
            self.values.remove("p_m");
        }
        self.values.insert(name.to_string(), v);
        Ok(())
    }

    pub fn with(mut self, name: &str, v: f64) -> Result<Self, HarnessError> {
        self.set(name, v)?;
        Ok(self)
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.values.get(name).copied()
    }

    fn value(&self, name: &str) -> Result<f64, HarnessError> {
        if let Some(v) = self.values.get(name) {
            return Ok(*v);
        }
        match self.kind.schema().iter().find(|(k, _)| *k == name) {
            Some((_, Some(d))) => Ok(*d),
            _ => Err(HarnessError::Config(format!(
                "scenario `{}` needs `{name}`",
                self.kind.name()
            ))),
        }
    }

    fn strategy_box(&self, default: &StrategyBox) -> Result<StrategyBox, HarnessError> {
        let d = [
            default.x.lo(),
            default.x.hi(),
            default.y.lo(),
            default.y.hi(),
            default.z.lo(),
            default.z.hi(),
        ];
        let mut b = [0.0; 6];
        for (k, name) in BOX_KEYS.iter().enumerate() {
            b[k] = self.values.get(*name).copied().unwrap_or(d[k]);
        }
        Ok(StrategyBox::from_bounds(b)?)
    }

    /// Concrete parameters; invariant violations surface as config errors.
    pub fn instantiate(&self) -> Result<Scenario, HarnessError> {
        let v = |n: &str| self.value(n);
        let s = match self.kind {
            ScenarioKind::Apt => {
                let rho = v("rho")?;
                let default = StrategyBox::from_bounds([0.05, 1.0, 0.0, rho, 0.2, 2.0])?;
                let p = AptParams { c_a: v("c_a")?, c_d: v("c_d")?, rho, strategy_box: self.strategy_box(&default)? };
                p.validate()?;
                Scenario::Apt(p)
            }
            ScenarioKind::Eavesdrop => {
                let mut p = EavesdropParams::preset(0.7)?;
                p.h_rd_sq = v("h_rd_sq")?;
                p.h_ed_sq = v("h_ed_sq")?;
                p.noise = v("noise")?;
                p.d1 = v("d1")?;
                p.d2 = v("d2")?;
                p.d3 = v("d3")?;
                p.d4 = v("d4")?;
                p.strategy_box = self.strategy_box(&p.strategy_box)?;
                p.validate()?;
                Scenario::Eavesdrop(p)
            }
            ScenarioKind::Hetnet => {
                let mut p = HetNetParams::preset(3.0, 30.0)?;
                p.lambda_m = v("lambda_m")?;
                p.theta = v("theta")?;
                p.tau = v("tau")?;
                p.lambda_j = v("lambda_j")?;
                p.alpha = v("alpha")?;
                p.omega = v("omega")?;
                p.g_je_sq = v("g_je_sq")?;
                p.g_me_sq = v("g_me_sq")?;
                p.n0 = v("n0")?;
                p.p_m = match self.values.get("p_m") {
                    Some(w) => *w,
                    None => dbm_to_watts(v("p_m_dbm")?),
                };
                p.sigma_ke = v("sigma_ke")?;
                p.r_m = v("r_m")?;
                p.strategy_box = self.strategy_box(&p.strategy_box)?;
                p.validate()?;
                Scenario::HetNet(p)
            }
            ScenarioKind::SyntheticConcave => {
                let mut p = SyntheticParams::default();
                p.a = v("a")?;
                p.b = v("b")?;
                p.c = v("c")?;
                p.d = v("d")?;
                p.strategy_box = self.strategy_box(&p.strategy_box)?;
                p.validate()?;
                Scenario::Synthetic(p)
            }
        };
        Ok(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellTask {
    SolveSe,
    SolveNe,
    Thm1,
    Cor1,
    Thm2,
    Eq2,
    Eq3,
    HetnetCond,
    Closeness,
    UtilitiesUnderProfiles,
}

/// One swept parameter: an evenly spaced range or an explicit value list.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub param: String,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub steps: Option<usize>,
    pub values: Option<Vec<f64>>,
}

impl SweepAxis {
    pub fn range(param: &str, lo: f64, hi: f64, steps: usize) -> Self {
        SweepAxis { param: param.into(), lo: Some(lo), hi: Some(hi), steps: Some(steps), values: None }
    }

    pub fn list(param: &str, values: &[f64]) -> Self {
        SweepAxis { param: param.into(), lo: None, hi: None, steps: None, values: Some(values.to_vec()) }
    }

    pub fn points(&self) -> Result<Vec<f64>, HarnessError> {
        match (&self.values, self.lo, self.hi, self.steps) {
            (Some(v), None, None, None) => {
                if v.is_empty() || v.iter().any(|x| !x.is_finite()) {
                    return Err(HarnessError::Config(format!("axis `{}`: values must be finite and nonempty", self.param)));
                }
                Ok(v.clone())
            }
            (None, Some(lo), Some(hi), Some(steps)) => {
                if steps < 2 {
                    return Err(HarnessError::Config(format!("axis `{}`: steps must be at least 2", self.param)));
                }
                if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                    return Err(HarnessError::Config(format!("axis `{}`: need lo < hi", self.param)));
                }
                let last = (steps - 1) as f64;
                Ok((0..steps)
                    .map(|k| if k + 1 == steps { hi } else { lo + (hi - lo) * k as f64 / last })
                    .collect())
            }
            _ => Err(HarnessError::Config(format!(
                "axis `{}`: give either lo/hi/steps or values",
                self.param
            ))),
        }
    }
}

fn default_block() -> usize {
    5
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub axis1: SweepAxis,
    pub axis2: Option<SweepAxis>,
    #[serde(default)]
    pub per_cell: Vec<CellTask>,
    /// Side of the square blocks averaged in the coincidence-ratio map.
    #[serde(default = "default_block")]
    pub ratio_block: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: ScenarioSpec,
    pub solver: SolverConfig,
    pub neighborhood: NeighborhoodSpec,
    pub sweep: Option<SweepSpec>,
    pub output_dir: PathBuf,
    pub seed: u64,
    pub closeness_samples: usize,
}

impl RunConfig {
    pub fn new(scenario: ScenarioSpec) -> Self {
        RunConfig {
            scenario,
            solver: SolverConfig::default(),
            neighborhood: NeighborhoodSpec::default(),
            sweep: None,
            output_dir: PathBuf::from("out"),
            seed: 0,
            closeness_samples: 400,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    seed: Option<u64>,
    closeness_samples: Option<usize>,
    scenario: BTreeMap<Spanned<String>, Spanned<toml::Value>>,
    #[serde(default)]
    solver: SolverConfig,
    #[serde(default)]
    neighborhood: NeighborhoodSpec,
    sweep: Option<SweepSpec>,
    output: Option<RawOutput>,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

pub fn load_config(path: &Path) -> Result<RunConfig, HarnessError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
    parse_config(&text).map_err(|e| match e {
        HarnessError::Config(m) => HarnessError::Config(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn parse_config(text: &str) -> Result<RunConfig, HarnessError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
    let kind_entry = raw
        .scenario
        .iter()
        .find(|(k, _)| k.get_ref() == "kind")
        .ok_or_else(|| HarnessError::Config("[scenario] needs `kind`".into()))?;
    let kind_str = kind_entry.1.get_ref().as_str().unwrap_or("");
    let kind = ScenarioKind::parse(kind_str).ok_or_else(|| {
        HarnessError::Config(format!(
            "line {}: unknown scenario kind `{kind_str}`, expected eavesdrop, apt, hetnet or synthetic_concave",
            line_of(text, kind_entry.1.span().start)
        ))
    })?;
    let mut spec = ScenarioSpec::new(kind);
    for (key, val) in &raw.scenario {
        let name = key.get_ref().as_str();
        if name == "kind" {
            continue;
        }
        let line = line_of(text, key.span().start);
        if !spec.has_param(name) {
            let mut known: Vec<&str> = kind.schema().iter().map(|(k, _)| *k).collect();
            known.extend(BOX_KEYS);
            return Err(HarnessError::Config(format!(
                "line {line}: unknown key `{name}` in [scenario] for kind `{}`, expected one of {}",
                kind.name(),
                known.join(", ")
            )));
        }
        let v = match val.get_ref() {
            toml::Value::Float(f) => *f,
            toml::Value::Integer(i) => *i as f64,
            _ => {
                return Err(HarnessError::Config(format!("line {line}: `{name}` must be a number")))
            }
        };
        if name.starts_with("p_m") && spec.values.contains_key(if name == "p_m" { "p_m_dbm" } else { "p_m" }) {
            return Err(HarnessError::Config(format!("line {line}: give only one of p_m and p_m_dbm")));
        }
        spec.values.insert(name.to_string(), v);
    }
    raw.solver.validate()?;
    raw.neighborhood.validate()?;
    if let Some(sw) = &raw.sweep {
        for axis in std::iter::once(&sw.axis1).chain(sw.axis2.as_ref()) {
            if !spec.has_param(&axis.param) {
                return Err(HarnessError::Config(format!(
                    "swept parameter `{}` is not a `{}` parameter",
                    axis.param,
                    kind.name()
                )));
            }
            axis.points()?;
        }
        if sw.ratio_block == 0 {
            return Err(HarnessError::Config("ratio_block must be positive".into()));
        }
    }
    // instantiate once so invariant violations are reported at load time
    spec.instantiate()?;
    let closeness_samples = raw.closeness_samples.unwrap_or(400);
    if closeness_samples < 100 {
        return Err(HarnessError::Config("closeness_samples must be at least 100".into()));
    }
    Ok(RunConfig {
        scenario: spec,
        solver: raw.solver,
        neighborhood: raw.neighborhood,
        sweep: raw.sweep,
        output_dir: raw.output.and_then(|o| o.dir).unwrap_or_else(|| PathBuf::from("out")),
        seed: raw.seed.unwrap_or(0),
        closeness_samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_apt() {
        let c = parse_config("[scenario]\nkind = \"apt\"\nc_a = 1.0\nc_d = 0.5\nrho = 0.5\n").unwrap();
        assert_eq!(c.solver, SolverConfig::default());
        assert_eq!(c.seed, 0);
        match c.scenario.instantiate().unwrap() {
            Scenario::Apt(p) => assert_eq!(p.strategy_box.y.hi(), 0.5),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn insider_cap_is_config_error() {
        let e = parse_config("[scenario]\nkind = \"apt\"\nc_a = 1.0\nc_d = 0.5\nrho = 0.5\ny_max = 0.6\n").unwrap_err();
        assert!(matches!(e, HarnessError::Config(ref m) if m.contains("rho")), "{e}");
    }

    #[test]
    fn unknown_key_names_line() {
        let e = parse_config("[scenario]\nkind = \"apt\"\nc_a = 1.0\nc_d = 0.5\nrho = 0.5\nc_z = 2\n").unwrap_err();
        let m = e.to_string();
        assert!(m.contains("c_z") && m.contains("line 6"), "{m}");
        let e = parse_config("[scenario]\nkind = \"apt\"\nc_a = 1.0\nc_d = 0.5\nrho = 0.5\n[solver]\ngrid = 3\n").unwrap_err();
        assert!(e.to_string().contains("grid"), "{e}");
    }

    #[test]
    fn sweep_axis_checked() {
        let base = "[scenario]\nkind = \"apt\"\nc_a = 1.0\nc_d = 0.5\nrho = 0.5\n[sweep]\n";
        let ok = format!("{base}axis1 = {{ param = \"c_a\", lo = 0.44, hi = 1.25, steps = 3 }}\nper_cell = [\"eq3\"]\n");
        let c = parse_config(&ok).unwrap();
        assert_eq!(c.sweep.unwrap().axis1.points().unwrap(), vec![0.44, 0.845, 1.25]);
        let bad = format!("{base}axis1 = {{ param = \"lambda_j\", lo = 0.1, hi = 1.0, steps = 3 }}\n");
        assert!(parse_config(&bad).is_err());
        let bad = format!("{base}axis1 = {{ param = \"c_a\", lo = 0.1, hi = 1.0, steps = 1 }}\n");
        assert!(parse_config(&bad).is_err());
    }
}
