//! TOML overrides for grid parameters, cost coefficients and solver limits.
//!
//! ```toml
//! [costs]
//! preset = "formula"        # or "printed"
//! interest_rate = 0.08
//! formula_cap = true
//! [costs.annual]
//! veh = 40000
//!
//! [grid]
//! p_max = 350
//! carbon_intensity = 0.2    # flat, or one value per step
//!
//! [solver]
//! time_limit_s = 60
//! ```

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use drayplan::costs::DEFAULT_INTEREST_RATE;
use drayplan::milp::SolverParams;
use drayplan::{CostBook, Instance};
use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub costs: Option<CostConfig>,
    #[serde(default)]
    pub grid: Option<GridConfig>,
    #[serde(default)]
    pub solver: Option<SolverConfig>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostConfig {
    pub preset: Option<String>,
    pub interest_rate: Option<f64>,
    #[serde(default)]
    pub formula_cap: bool,
    #[serde(default)]
    pub annual: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum PerStep {
    Flat(f64),
    Steps(Vec<f64>),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub p_max: Option<f64>,
    pub e_base: Option<f64>,
    pub soc_min: Option<f64>,
    pub soc_max: Option<f64>,
    pub kappa: Option<f64>,
    pub pf: Option<f64>,
    pub p_upg_std: Option<f64>,
    pub days_per_year: Option<f64>,
    pub carbon_intensity: Option<PerStep>,
    pub tou_price: Option<PerStep>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    pub time_limit_s: Option<f64>,
    pub node_limit: Option<usize>,
    pub rel_gap: Option<f64>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn cost_book(&self, base: &CostBook) -> Result<Option<CostBook>> {
        let Some(c) = &self.costs else {
            return Ok(None);
        };
        let rate = c.interest_rate.unwrap_or(base.interest_rate);
        let mut book = match c.preset.as_deref() {
            None => {
                let mut b = base.clone();
                b.interest_rate = rate;
                b
            }
            Some("printed") => {
                let mut b = CostBook::printed();
                b.interest_rate = c.interest_rate.unwrap_or(DEFAULT_INTEREST_RATE);
                b
            }
            Some("formula") => CostBook::amortized(rate),
            Some(other) => bail!("unknown cost preset `{other}` (use `printed` or `formula`)"),
        };
        if c.formula_cap {
            book = book.with_formula_cap();
        }
        for (name, &annual) in &c.annual {
            let row = match name.as_str() {
                "veh" => &mut book.veh,
                "btr" => &mut book.btr,
                "ctr" => &mut book.ctr,
                "cap" => &mut book.cap,
                "chg" => &mut book.chg,
                "lne" => &mut book.lne,
                "upg_std" => &mut book.upg_std,
                "upg_var" => &mut book.upg_var,
                _ => bail!("unknown cost row `{name}`"),
            };
            row.annual = annual;
        }
        Ok(Some(book))
    }

    /// Applies cost and grid overrides in place. Replacing the cost book
    /// also re-derives the per-step tariff from its schedule.
    pub fn apply(&self, inst: &mut Instance) -> Result<()> {
        if let Some(book) = self.cost_book(&inst.costs)? {
            inst.params.tou_price = book.tou.prices(&inst.grid);
            inst.costs = book;
        }
        let Some(g) = &self.grid else { return Ok(()) };
        let p = &mut inst.params;
        let fields = [
            (g.p_max, &mut p.p_max),
            (g.e_base, &mut p.e_base),
            (g.soc_min, &mut p.soc_min),
            (g.soc_max, &mut p.soc_max),
            (g.kappa, &mut p.kappa),
            (g.pf, &mut p.pf),
            (g.p_upg_std, &mut p.p_upg_std),
            (g.days_per_year, &mut p.days_per_year),
        ];
        for (value, slot) in fields {
            if let Some(v) = value {
                *slot = v;
            }
        }
        let n = inst.grid.step_count;
        for (name, value, slot) in [
            (
                "carbon_intensity",
                &g.carbon_intensity,
                &mut p.carbon_intensity,
            ),
            ("tou_price", &g.tou_price, &mut p.tou_price),
        ] {
            match value {
                None => {}
                Some(PerStep::Flat(v)) => *slot = vec![*v; n],
                Some(PerStep::Steps(v)) if v.len() == n => slot.clone_from(v),
                Some(PerStep::Steps(v)) => bail!("{name} has {} values for {n} steps", v.len()),
            }
        }
        Ok(())
    }

    pub fn apply_solver(&self, params: &mut SolverParams) {
        let Some(s) = &self.solver else { return };
        if let Some(t) = s.time_limit_s {
            params.time_limit = Some(Duration::from_secs_f64(t));
        }
        if s.node_limit.is_some() {
            params.node_limit = s.node_limit;
        }
        if let Some(g) = s.rel_gap {
            params.rel_gap = g;
        }
    }
}
