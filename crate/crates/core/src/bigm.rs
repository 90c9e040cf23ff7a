//! Constants for the indicator linearizations, sized from the instance so
//! each one just covers the quantity it switches off.

use serde::{Deserialize, Serialize};

use crate::domain::{Instance, Subsets};

pub const EPSILON_KW: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BigMBook {
    /// Per station: peak possible load, `p_max` times the most trucks present at once.
    pub m_station_select: Vec<f64>,
    /// Per station, per neighbor in `k_j` order: bound on the flow to that substation.
    pub m_substation_flow: Vec<Vec<f64>>,
    /// Bound on variable upgrade size, shared by all substations.
    pub m_upgrade_var: f64,
    pub epsilon: f64,
}

impl BigMBook {
    pub fn flow(&self, subsets: &Subsets, j: usize, k: usize) -> f64 {
        let pos = subsets.k_j[j]
            .iter()
            .position(|&(kk, _)| kk == k)
            .expect("substation is a neighbor of the station");
        self.m_substation_flow[j][pos]
    }
}

pub fn compute_bigm(inst: &Instance) -> BigMBook {
    compute_bigm_with(inst, &inst.subsets())
}

pub fn compute_bigm_with(inst: &Instance, subsets: &Subsets) -> BigMBook {
    let p = &inst.params;
    let m_station_select: Vec<f64> = (0..inst.stations.len())
        .map(|j| p.p_max * subsets.max_simultaneous(j) as f64)
        .collect();
    let m_upgrade_var: f64 = m_station_select.iter().sum();
    let max_upgrade = p.p_upg_std * p.pf + m_upgrade_var;
    let m_substation_flow = subsets
        .k_j
        .iter()
        .enumerate()
        .map(|(j, ks)| {
            ks.iter()
                .map(|&(k, _)| {
                    m_station_select[j].min(inst.substations[k].remaining_capacity + max_upgrade)
                })
                .collect()
        })
        .collect();
    BigMBook {
        m_station_select,
        m_substation_flow,
        m_upgrade_var,
        epsilon: EPSILON_KW,
    }
}
