//! Investment vectors and game outcomes shared by all strategy solvers.

use std::collections::BTreeMap;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::StrategyError;

/// Slack allowed on the budget constraint.
pub const BUDGET_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Allocation {
    pub amounts: Vec<f64>,
    pub budget: f64,
    /// Per-node upper bound, `None` in the unbounded settings.
    pub cap: Option<f64>,
}

impl Allocation {
    pub fn zeros(n: usize, budget: f64, cap: Option<f64>) -> Self {
        Allocation {
            amounts: vec![0.0; n],
            budget,
            cap,
        }
    }

    pub fn new(amounts: Vec<f64>, budget: f64, cap: Option<f64>) -> Self {
        Allocation {
            amounts,
            budget,
            cap,
        }
    }

    pub fn total(&self) -> f64 {
        self.amounts.iter().sum()
    }

    /// Checks nonnegativity, the budget, and the cap.
    pub fn validate(&self) -> Result<(), StrategyError> {
        for (i, &a) in self.amounts.iter().enumerate() {
            if !a.is_finite() || a < 0.0 {
                return Err(StrategyError::InvalidInput(format!(
                    "amount {a} at node {i} is negative or non-finite"
                )));
            }
            if let Some(c) = self.cap {
                if a > c + BUDGET_TOL {
                    return Err(StrategyError::InvalidInput(format!(
                        "amount {a} at node {i} exceeds cap {c}"
                    )));
                }
            }
        }
        let total = self.total();
        if total > self.budget + BUDGET_TOL {
            return Err(StrategyError::InvalidInput(format!(
                "total {total} exceeds budget {}",
                self.budget
            )));
        }
        Ok(())
    }
}

impl Deref for Allocation {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.amounts
    }
}

/// Result of solving one game setting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameOutcome {
    pub x: Allocation,
    pub y: Allocation,
    /// Opinion sum at the computed strategies.
    pub value: f64,
    pub meta: BTreeMap<String, serde_json::Value>,
}

impl GameOutcome {
    pub fn new(x: Allocation, y: Allocation, value: f64) -> Self {
        GameOutcome {
            x,
            y,
            value,
            meta: BTreeMap::new(),
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.meta.insert(key.to_string(), value.into());
        self
    }

    pub fn meta_f64(&self, key: &str) -> Option<f64> {
        self.meta.get(key).and_then(serde_json::Value::as_f64)
    }
}

/// Validates a nonnegative finite budget.
pub(crate) fn check_budget(budget: f64) -> Result<(), StrategyError> {
    if !budget.is_finite() || budget < 0.0 {
        return Err(StrategyError::InvalidInput(format!(
            "budget must be finite and nonnegative, got {budget}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Allocation::new(vec![0.5, 0.5], 1.0, Some(1.0))
            .validate()
            .is_ok());
        assert!(Allocation::new(vec![0.5, 0.6], 1.0, None)
            .validate()
            .is_err());
        assert!(Allocation::new(vec![1.5], 2.0, Some(1.0))
            .validate()
            .is_err());
        assert!(Allocation::new(vec![-0.1], 2.0, None).validate().is_err());
        assert!(Allocation::new(vec![1.0 + 5e-10], 1.0, Some(1.0))
            .validate()
            .is_ok());
    }
}
