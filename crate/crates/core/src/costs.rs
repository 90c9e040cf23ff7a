//! Annualized investment costs and the time-of-use electricity tariff.

use serde::{Deserialize, Serialize};

use crate::domain::TimeGrid;

pub const DEFAULT_INTEREST_RATE: f64 = 0.10;

/// Annuity-due payment: equal yearly amounts paid at the start of each year.
pub fn amortize(investment: f64, lifespan_years: f64, rate: f64) -> f64 {
    assert!(lifespan_years >= 1.0, "lifespan must be at least one year");
    assert!(rate >= 0.0, "interest rate must be non-negative");
    if rate == 0.0 {
        return investment / lifespan_years;
    }
    investment * rate / (1.0 - (1.0 + rate).powf(-lifespan_years)) / (1.0 + rate)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostRow {
    pub investment: f64,
    pub lifespan_years: f64,
    /// Annual cost used by the model.
    pub annual: f64,
}

impl CostRow {
    pub fn printed(investment: f64, lifespan_years: f64, annual: f64) -> Self {
        CostRow {
            investment,
            lifespan_years,
            annual,
        }
    }

    pub fn amortized(investment: f64, lifespan_years: f64, rate: f64) -> Self {
        CostRow {
            investment,
            lifespan_years,
            annual: amortize(investment, lifespan_years, rate),
        }
    }

    pub fn formula(&self, rate: f64) -> f64 {
        amortize(self.investment, self.lifespan_years, rate)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TouPeriod {
    pub start_hour: f64,
    pub end_hour: f64,
    pub price: f64,
}

/// Prices by hour of day. A step takes the price of the period holding its
/// midpoint; anything uncovered is off-peak.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TouSchedule {
    pub periods: Vec<TouPeriod>,
    pub off_peak: f64,
}

impl Default for TouSchedule {
    fn default() -> Self {
        let p = |start_hour, end_hour, price| TouPeriod {
            start_hour,
            end_hour,
            price,
        };
        TouSchedule {
            periods: vec![p(16.0, 21.0, 0.232), p(14.0, 16.0, 0.177), p(21.0, 23.0, 0.177)],
            off_peak: 0.130,
        }
    }
}

impl TouSchedule {
    pub fn flat(price: f64) -> Self {
        TouSchedule {
            periods: Vec::new(),
            off_peak: price,
        }
    }

    pub fn price_at(&self, hour: f64) -> f64 {
        let h = hour.rem_euclid(24.0);
        self.periods
            .iter()
            .find(|p| p.start_hour <= h && h < p.end_hour)
            .map_or(self.off_peak, |p| p.price)
    }

    pub fn prices(&self, grid: &TimeGrid) -> Vec<f64> {
        (0..grid.step_count).map(|t| self.price_at(grid.midpoint_hour(t))).collect()
    }
}

/// Investment rows with their annual coefficients.
///
/// Units: `veh` per vehicle, `btr` per kWh, `ctr` per station, `cap` and
/// `chg` per kW, `lne` per mile, `upg_std` per upgrade, `upg_var` per MW.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostBook {
    pub interest_rate: f64,
    pub veh: CostRow,
    pub btr: CostRow,
    pub ctr: CostRow,
    pub cap: CostRow,
    pub chg: CostRow,
    pub lne: CostRow,
    pub upg_std: CostRow,
    pub upg_var: CostRow,
    pub tou: TouSchedule,
}

impl Default for CostBook {
    fn default() -> Self {
        Self::printed()
    }
}

impl CostBook {
    /// The published annual costs, including the rounded $20/kW power
    /// equipment figure.
    pub fn printed() -> Self {
        CostBook {
            interest_rate: DEFAULT_INTEREST_RATE,
            veh: CostRow::printed(250_000.0, 10.0, 36_988.0),
            btr: CostRow::printed(150.0, 10.0, 22.0),
            ctr: CostRow::printed(1_000_000.0, 20.0, 106_781.0),
            cap: CostRow::printed(200.0, 20.0, 20.0),
            chg: CostRow::printed(587.0, 10.0, 87.0),
            lne: CostRow::printed(1_200_000.0, 30.0, 115_723.0),
            upg_std: CostRow::printed(4_600_000.0, 25.0, 460_703.0),
            upg_var: CostRow::printed(200_000.0, 25.0, 20_031.0),
            tou: TouSchedule::default(),
        }
    }

    /// Every annual coefficient recomputed from its row at `rate`.
    pub fn amortized(rate: f64) -> Self {
        let mut b = Self::printed();
        b.interest_rate = rate;
        for row in b.rows_mut() {
            row.annual = row.formula(rate);
        }
        b
    }

    /// Replaces only the power-equipment figure with its formula value.
    pub fn with_formula_cap(mut self) -> Self {
        self.cap.annual = self.cap.formula(self.interest_rate);
        self
    }

    fn rows_mut(&mut self) -> [&mut CostRow; 8] {
        [
            &mut self.veh,
            &mut self.btr,
            &mut self.ctr,
            &mut self.cap,
            &mut self.chg,
            &mut self.lne,
            &mut self.upg_std,
            &mut self.upg_var,
        ]
    }

    pub fn rows(&self) -> [(&'static str, &CostRow); 8] {
        [
            ("veh", &self.veh),
            ("btr", &self.btr),
            ("ctr", &self.ctr),
            ("cap", &self.cap),
            ("chg", &self.chg),
            ("lne", &self.lne),
            ("upg_std", &self.upg_std),
            ("upg_var", &self.upg_var),
        ]
    }

    pub fn coefficients(&self) -> Vec<(&'static str, f64)> {
        self.rows().iter().map(|(k, r)| (*k, r.annual)).collect()
    }

    /// Variable upgrade cost per kW; the row itself is per MW.
    pub fn upg_var_per_kw(&self) -> f64 {
        self.upg_var.annual / 1000.0
    }
}
