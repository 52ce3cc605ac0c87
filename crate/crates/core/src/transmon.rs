//! Back-of-the-envelope numbers for a transmon implementation.
//!
//! Couplings and detunings are in MHz, collision timescales in ns and the
//! relaxation time `T1` in μs.

use std::fmt;

use crate::error::{Error, Result};

/// Minimum `|Δ|/g` for a qubit-resonator pair to count as dispersive.
pub const DISPERSIVE_RATIO: f64 = 5.0;

/// Run time of a classical classifier, in μs (millisecond-scale CPU time).
pub const CLASSICAL_BASELINE_US: f64 = 1000.0;

const NS_PER_US: f64 = 1000.0;

/// Two qubits coupled to a shared resonator with couplings `g_i` and
/// detunings `Δ_i = ω_i − ω_r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersivePair {
    pub g1: f64,
    pub g2: f64,
    pub delta1: f64,
    pub delta2: f64,
}

impl DispersivePair {
    pub fn new(g1: f64, g2: f64, delta1: f64, delta2: f64) -> Result<Self> {
        for (name, g) in [("g1", g1), ("g2", g2)] {
            if !(g >= 0.0 && g.is_finite()) {
                return Err(Error::param(name, format!("must be finite and >= 0, got {g}")));
            }
        }
        for (name, d) in [("delta1", delta1), ("delta2", delta2)] {
            if d == 0.0 || !d.is_finite() {
                return Err(Error::param(name, format!("must be finite and nonzero, got {d}")));
            }
        }
        Ok(Self { g1, g2, delta1, delta2 })
    }

    /// `|Δ_i| ≥ 5 g_i` for both qubits.
    pub fn is_dispersive(&self) -> bool {
        self.delta1.abs() >= DISPERSIVE_RATIO * self.g1 && self.delta2.abs() >= DISPERSIVE_RATIO * self.g2
    }
}

/// Resonator-mediated qubit-qubit coupling `J = (g₁g₂/2)(1/Δ₁ + 1/Δ₂)` in MHz.
pub fn effective_coupling(pair: &DispersivePair) -> Result<f64> {
    if pair.delta1 == 0.0 || pair.delta2 == 0.0 {
        return Err(Error::param("delta", "zero detuning"));
    }
    Ok(0.5 * pair.g1 * pair.g2 * (1.0 / pair.delta1 + 1.0 / pair.delta2))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimingBudget {
    /// Qubit-resonator interaction time per collision, ns.
    pub tau_int_ns: f64,
    /// Ancilla preparation time per collision, ns.
    pub tau_pr_ns: f64,
    /// Ancilla reset time per collision, ns.
    pub tau_r_ns: f64,
    pub n_collisions: u64,
    /// Energy relaxation time of the system qubit, μs.
    pub t1_us: f64,
}

impl TimingBudget {
    pub fn new(tau_int_ns: f64, tau_pr_ns: f64, tau_r_ns: f64, n_collisions: u64, t1_us: f64) -> Result<Self> {
        if !(tau_int_ns > 0.0 && tau_int_ns.is_finite()) {
            return Err(Error::param("tau_int", format!("must be > 0, got {tau_int_ns}")));
        }
        for (name, v) in [("tau_pr", tau_pr_ns), ("tau_r", tau_r_ns)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::param(name, format!("must be >= 0, got {v}")));
            }
        }
        if n_collisions == 0 {
            return Err(Error::param("n_collisions", "must be > 0"));
        }
        if !(t1_us > 0.0 && t1_us.is_finite()) {
            return Err(Error::param("t1", format!("must be > 0, got {t1_us}")));
        }
        Ok(Self {
            tau_int_ns,
            tau_pr_ns,
            tau_r_ns,
            n_collisions,
            t1_us,
        })
    }

    /// Two thousand 5 ns collisions against `T1 = 20 μs`.
    pub fn reference() -> Self {
        Self::new(5.0, 0.0, 0.0, 2000, 20.0).expect("valid constants")
    }

    /// Period between switch-on events, `τ_int + τ_pr + τ_r`, ns.
    pub fn period_ns(&self) -> f64 {
        self.tau_int_ns + self.tau_pr_ns + self.tau_r_ns
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BudgetReport {
    pub total_us: f64,
    pub t1_us: f64,
    pub feasible: bool,
    pub classical_baseline_us: f64,
    /// Classical baseline divided by the total run time.
    pub speedup: f64,
}

pub fn budget_report(budget: &TimingBudget) -> BudgetReport {
    let total_us = budget.n_collisions as f64 * budget.period_ns() / NS_PER_US;
    BudgetReport {
        total_us,
        t1_us: budget.t1_us,
        feasible: total_us < budget.t1_us,
        classical_baseline_us: CLASSICAL_BASELINE_US,
        speedup: CLASSICAL_BASELINE_US / total_us,
    }
}

/// Collisions of period `period_ns` that fit in `duration_us`.
pub fn collisions_within(duration_us: f64, period_ns: f64) -> u64 {
    (duration_us * NS_PER_US / period_ns).floor() as u64
}

impl fmt::Display for BudgetReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "total={} μs, {} (T1={} μs); speedup={}x vs {} ms classical baseline",
            fmt_num(self.total_us),
            if self.feasible { "feasible" } else { "infeasible" },
            fmt_num(self.t1_us),
            fmt_num(self.speedup),
            fmt_num(self.classical_baseline_us / 1000.0),
        )
    }
}

fn fmt_num(x: f64) -> String {
    if (x - x.round()).abs() < 1e-9 {
        format!("{}", x.round())
    } else {
        format!("{x:.3}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_pair_reduces_to_g_squared_over_delta() {
        let pair = DispersivePair::new(100.0, 100.0, 1000.0, 1000.0).unwrap();
        assert!((effective_coupling(&pair).unwrap() - 10.0).abs() < 1e-12);
        let g = 37.0;
        let d = -420.0;
        let pair = DispersivePair::new(g, g, d, d).unwrap();
        assert!((effective_coupling(&pair).unwrap() - g * g / d).abs() < 1e-12);
    }

    #[test]
    fn decoupled_qubit_gives_zero() {
        let pair = DispersivePair::new(0.0, 100.0, 1000.0, 800.0).unwrap();
        assert_eq!(effective_coupling(&pair).unwrap(), 0.0);
    }

    #[test]
    fn coupling_is_symmetric_and_sign_follows_detuning() {
        let a = DispersivePair::new(80.0, 120.0, 900.0, 1500.0).unwrap();
        let b = DispersivePair::new(120.0, 80.0, 1500.0, 900.0).unwrap();
        assert_eq!(effective_coupling(&a).unwrap(), effective_coupling(&b).unwrap());
        let neg = DispersivePair::new(80.0, 120.0, -900.0, -1500.0).unwrap();
        assert!(effective_coupling(&neg).unwrap() < 0.0);
        assert!(neg.is_dispersive());
    }

    #[test]
    fn zero_detuning_rejected() {
        assert!(DispersivePair::new(100.0, 100.0, 0.0, 1000.0).is_err());
        let pair = DispersivePair {
            g1: 1.0,
            g2: 1.0,
            delta1: 0.0,
            delta2: 1.0,
        };
        assert!(effective_coupling(&pair).is_err());
    }

    #[test]
    fn dispersive_flag() {
        assert!(!DispersivePair::new(300.0, 100.0, 1000.0, 1000.0).unwrap().is_dispersive());
        assert!(DispersivePair::new(200.0, 100.0, 1000.0, 1000.0).unwrap().is_dispersive());
    }

    #[test]
    fn reference_budget_is_feasible() {
        let report = budget_report(&TimingBudget::reference());
        assert!((report.total_us - 10.0).abs() < 1e-12);
        assert!(report.feasible);
        assert!((report.speedup - 100.0).abs() < 1e-9);
        assert_eq!(
            report.to_string(),
            "total=10 μs, feasible (T1=20 μs); speedup=100x vs 1 ms classical baseline"
        );
    }

    #[test]
    fn short_t1_is_infeasible() {
        let budget = TimingBudget::new(5.0, 0.0, 0.0, 2000, 5.0).unwrap();
        assert!(!budget_report(&budget).feasible);
    }

    #[test]
    fn total_time_is_linear_in_collisions() {
        let t = |n| budget_report(&TimingBudget::new(5.0, 0.5, 1.0, n, 20.0).unwrap()).total_us;
        assert!((t(3000) - 3.0 * t(1000)).abs() < 1e-12);
        assert!((t(1) - 0.0065).abs() < 1e-15);
    }

    #[test]
    fn shorter_end_of_range_is_1500_collisions() {
        assert_eq!(collisions_within(7.5, 5.0), 1500);
        assert_eq!(collisions_within(10.0, 5.0), 2000);
    }

    #[test]
    fn invalid_budgets_rejected() {
        assert!(TimingBudget::new(0.0, 0.0, 0.0, 10, 20.0).is_err());
        assert!(TimingBudget::new(5.0, -1.0, 0.0, 10, 20.0).is_err());
        assert!(TimingBudget::new(5.0, 0.0, 0.0, 0, 20.0).is_err());
        assert!(TimingBudget::new(5.0, 0.0, 0.0, 10, 0.0).is_err());
    }
}
