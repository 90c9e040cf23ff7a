//! Discrete charger types: per-step tier indicators, charger counts and the
//! station deployment indicator that replace the per-kW charger cost.

use std::collections::BTreeMap;
use std::path::Path;

use milp::{ConstraintSense::*, ModelIr, Name, VarId, VarKind};
use serde::{Deserialize, Serialize};

use crate::bigm::EPSILON_KW;
use crate::builder::{add_session_rows, PlanModel};
use crate::domain::Instance;
use crate::error::BuildError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChargerTier {
    pub kw: f64,
    /// Annual cost per installed charger.
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChargerCatalog {
    pub tiers: Vec<ChargerTier>,
}

impl ChargerCatalog {
    pub fn new(tiers: Vec<ChargerTier>) -> Result<Self, BuildError> {
        let c = ChargerCatalog { tiers };
        c.check()?;
        Ok(c)
    }

    pub fn check(&self) -> Result<(), BuildError> {
        if self.tiers.is_empty() {
            return Err(BuildError::Catalog("at least one tier is required".into()));
        }
        let mut prev = 0.0;
        for t in &self.tiers {
            if !(t.kw > prev) {
                return Err(BuildError::Catalog(format!(
                    "tier powers must be positive and strictly increasing, got {} after {prev}",
                    t.kw
                )));
            }
            if !(t.cost >= 0.0) {
                return Err(BuildError::Catalog(format!("tier {} kW has negative cost", t.kw)));
            }
            prev = t.kw;
        }
        Ok(())
    }

    pub fn max_kw(&self) -> f64 {
        self.tiers.last().map_or(0.0, |t| t.kw)
    }

    /// `p^{m-1}` for 1-based `m`, with `p^0 = 0`.
    pub fn floor_kw(&self, m: usize) -> f64 {
        if m == 1 {
            0.0
        } else {
            self.tiers[m - 2].kw
        }
    }

    pub fn smallest_gap(&self) -> f64 {
        let mut prev = 0.0;
        let mut gap = f64::INFINITY;
        for t in &self.tiers {
            gap = gap.min(t.kw - prev);
            prev = t.kw;
        }
        gap
    }

    pub fn from_json(s: &str) -> Result<Self, BuildError> {
        let c: ChargerCatalog = serde_json::from_str(s).map_err(|e| BuildError::Catalog(e.to_string()))?;
        c.check()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self, BuildError> {
        let s = std::fs::read_to_string(path).map_err(|e| BuildError::Catalog(format!("{}: {e}", path.display())))?;
        Self::from_json(&s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TierLinParams {
    pub g: f64,
    pub epsilon: f64,
}

impl TierLinParams {
    /// `G = p_max + max tier`, `eps = 1e-3` kW.
    pub fn for_catalog(catalog: &ChargerCatalog, p_max: f64) -> Self {
        TierLinParams {
            g: p_max + catalog.max_kw(),
            epsilon: EPSILON_KW,
        }
    }
}

/// Exact-tier indicator by direct evaluation: entry `m` is 1 when
/// `p^{m-1} < power <= p^m`. A power within `eps/2` above a boundary counts
/// toward the lower tier.
pub fn tier_indicator_exact(power: f64, beta: bool, catalog: &ChargerCatalog) -> Result<Vec<u8>, BuildError> {
    let mut out = vec![0u8; catalog.tiers.len()];
    if !beta || power <= 0.0 {
        return Ok(out);
    }
    let tol = EPSILON_KW / 2.0;
    match catalog.tiers.iter().position(|t| power <= t.kw + tol) {
        Some(m) => {
            out[m] = 1;
            Ok(out)
        }
        None => Err(BuildError::Catalog(format!(
            "{power} kW exceeds catalog maximum {} kW",
            catalog.max_kw()
        ))),
    }
}

/// Indicator variables for one power quantity, tiers 1-based in the maps.
#[derive(Debug, Clone, PartialEq)]
pub struct TierIndicator {
    /// `at_least[m-1]`: power is in tier `m` or above.
    pub at_least: Vec<VarId>,
    /// `exact[m-1]`: power is in tier `m`.
    pub exact: Vec<VarId>,
}

/// Adds the indicator pair for one power variable. `power = None` stands
/// for an inaccessible slot: every indicator is fixed to 0.
pub fn add_tier_indicator(
    ir: &mut ModelIr,
    power: Option<VarId>,
    catalog: &ChargerCatalog,
    lin: &TierLinParams,
    idx: &[usize],
) -> Result<TierIndicator, BuildError> {
    let tiers = catalog.tiers.len();
    let key = |m: usize| -> Vec<usize> {
        let mut v = vec![m];
        v.extend_from_slice(idx);
        v
    };
    let hi = if power.is_some() { 1.0 } else { 0.0 };
    let mut at_least = Vec::with_capacity(tiers);
    for m in 1..=tiers {
        at_least.push(ir.add_var(Name::new("xup", &key(m)), VarKind::Binary, 0.0, hi)?);
    }
    let mut exact = Vec::with_capacity(tiers);
    for m in 1..=tiers {
        let xh = ir.add_continuous(Name::new("xhat", &key(m)), 0.0, hi)?;
        let mut terms = vec![(xh, 1.0), (at_least[m - 1], -1.0)];
        if m < tiers {
            terms.push((at_least[m], 1.0));
        }
        ir.add_constraint(Name::new("xhat_def", &key(m)), &terms, Eq, 0.0)?;
        exact.push(xh);
    }
    if let Some(pw) = power {
        for m in 1..=tiers {
            let floor = catalog.floor_kw(m);
            let up = at_least[m - 1];
            ir.add_constraint(Name::new("tier_lin1", &key(m)), &[(pw, 1.0), (up, -lin.g)], Le, floor)?;
            ir.add_constraint(
                Name::new("tier_lin2", &key(m)),
                &[(pw, 1.0), (up, -lin.g)],
                Ge,
                floor - lin.g + lin.epsilon,
            )?;
        }
    }
    Ok(TierIndicator { at_least, exact })
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TierVars {
    pub indicators: BTreeMap<(usize, usize, usize), TierIndicator>,
    /// `(m, j, t)` chargers of tier `m` in use.
    pub in_use: BTreeMap<(usize, usize, usize), VarId>,
    /// `(m, j)` chargers of tier `m` installed.
    pub installed: BTreeMap<(usize, usize), VarId>,
}

/// Tier indicators for every access triple, charger counts, the
/// one-charger rule and the session lock.
pub fn build_tier_constraints(
    inst: &Instance,
    pm: &mut PlanModel,
    catalog: &ChargerCatalog,
    lin: &TierLinParams,
) -> Result<(), BuildError> {
    catalog.check()?;
    let p_max = inst.params.p_max;
    if catalog.max_kw() < p_max {
        return Err(BuildError::Catalog(format!(
            "largest tier {} kW is below p_max {p_max} kW",
            catalog.max_kw()
        )));
    }
    if !(lin.g > p_max) || !(lin.epsilon > 0.0 && lin.epsilon < catalog.smallest_gap()) {
        return Err(BuildError::Catalog("need G > p_max and 0 < eps < smallest tier gap".into()));
    }
    let tiers = catalog.tiers.len();
    let mut tv = TierVars::default();
    let triples: Vec<_> = pm.vars.ptrk.iter().map(|(&k, &v)| (k, v)).collect();
    for ((i, j, t), v) in triples {
        let ind = add_tier_indicator(&mut pm.ir, Some(v), catalog, lin, &[i, j, t])?;
        tv.indicators.insert((i, j, t), ind);
    }
    for j in pm.active_stations() {
        let cap = pm.subsets.max_simultaneous(j) as f64;
        for m in 1..=tiers {
            let installed = pm.ir.add_var(Name::new("N", &[m, j]), VarKind::Integer, 0.0, cap)?;
            tv.installed.insert((m, j), installed);
            for t in 0..inst.grid.step_count {
                let present = &pm.subsets.i_jt[j][t];
                if present.is_empty() {
                    continue;
                }
                let used = pm.ir.add_continuous(Name::new("n", &[m, j, t]), 0.0, cap)?;
                let mut terms = vec![(used, 1.0)];
                terms.extend(present.iter().map(|&i| (tv.indicators[&(i, j, t)].exact[m - 1], -1.0)));
                pm.ir.add_constraint(Name::new("n_def", &[m, j, t]), &terms, Eq, 0.0)?;
                pm.ir.add_constraint(Name::new("n_cap", &[m, j, t]), &[(used, 1.0), (installed, -1.0)], Le, 0.0)?;
                tv.in_use.insert((m, j, t), used);
            }
        }
    }
    // Summed over tiers the exact indicators equal the tier-1 indicator.
    let first: BTreeMap<_, _> = tv.indicators.iter().map(|(&k, ind)| (k, ind.at_least[0])).collect();
    add_session_rows(inst, pm, &first, "one_charger")?;
    pm.tier_vars = Some(tv);
    Ok(())
}

/// `sum_m N^m_j <= M * Nhat_j` for each active station.
pub fn build_station_deploy_indicator(pm: &mut PlanModel) -> Result<(), BuildError> {
    let tv = pm
        .tier_vars
        .as_ref()
        .ok_or_else(|| BuildError::Catalog("tier variables missing".into()))?;
    let mut by_station: BTreeMap<usize, Vec<VarId>> = BTreeMap::new();
    for (&(_, j), &v) in &tv.installed {
        by_station.entry(j).or_default().push(v);
    }
    for (j, counts) in by_station {
        let m: f64 = counts.iter().map(|&v| pm.ir.var(v).upper).sum();
        let hat = pm.vars.deployed[&j];
        let mut terms: Vec<_> = counts.iter().map(|&v| (v, 1.0)).collect();
        terms.push((hat, -m));
        pm.ir.add_constraint(Name::new("deploy", &[j]), &terms, Le, 0.0)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two() -> ChargerCatalog {
        ChargerCatalog::new(vec![
            ChargerTier { kw: 350.0, cost: 1.0 },
            ChargerTier { kw: 500.0, cost: 2.0 },
        ])
        .unwrap()
    }

    #[test]
    fn exact_tiers() {
        let c = two();
        assert_eq!(tier_indicator_exact(400.0, true, &c).unwrap(), vec![0, 1]);
        assert_eq!(tier_indicator_exact(200.0, true, &c).unwrap(), vec![1, 0]);
        assert_eq!(tier_indicator_exact(0.0, true, &c).unwrap(), vec![0, 0]);
        assert_eq!(tier_indicator_exact(400.0, false, &c).unwrap(), vec![0, 0]);
        assert_eq!(tier_indicator_exact(350.0, true, &c).unwrap(), vec![1, 0]);
        assert!(tier_indicator_exact(501.0, true, &c).is_err());
    }

    #[test]
    fn catalog_rejects_unsorted() {
        assert!(ChargerCatalog::new(vec![
            ChargerTier { kw: 500.0, cost: 0.0 },
            ChargerTier { kw: 350.0, cost: 0.0 },
        ])
        .is_err());
        assert!(ChargerCatalog::new(vec![]).is_err());
    }
}
