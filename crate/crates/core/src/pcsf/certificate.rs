//! Per-iteration dual certificate.
//!
//! Round `i` records the core count `|T_i|`, the common radius `R_i`, the
//! number of cores removed `h_i` and the payment `P_i`. The union of disks has
//! dual value `R_i * |T_i|`, so every such product is a lower bound on the
//! optimum; together with `P_i <= 2 h_i R_i` the rounds bound the objective
//! by `2 H_{2h}` times the optimum.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::rational::{int, serde_rational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RoundKind {
    PenaltyTight,
    VertexTight,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct CertificateRound {
    pub core_count: usize,
    #[serde(with = "serde_rational")]
    pub radius: Rational,
    pub removed: usize,
    #[serde(with = "serde_rational")]
    pub payment: Rational,
    pub kind: RoundKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct DualCertificate {
    pub rounds: Vec<CertificateRound>,
    #[serde(with = "serde_rational")]
    pub objective: Rational,
    #[serde(with = "serde_rational")]
    pub lower_bound: Rational,
    #[serde(with = "serde_rational")]
    pub total_cost: Rational,
    #[serde(with = "serde_rational")]
    pub total_penalty_paid: Rational,
}

impl DualCertificate {
    pub fn new(rounds: Vec<CertificateRound>, total_cost: Rational, total_penalty_paid: Rational, objective: Rational) -> Self {
        let lower_bound = rounds
            .iter()
            .map(|r| &r.radius * int(r.core_count as i64))
            .max()
            .unwrap_or_else(Rational::zero);
        Self { rounds, objective, lower_bound, total_cost, total_penalty_paid }
    }

    pub fn total_payment(&self) -> Rational {
        self.rounds.iter().fold(Rational::zero(), |acc, r| acc + &r.payment)
    }

    /// Checks the internal arithmetic: `P_i <= 2 h_i R_i`, `h_i >= 1`, core
    /// counts dropping by exactly `h_i` down to zero, the stored lower bound,
    /// and `Σ P_i >= objective = cost + penalties`.
    pub fn check(&self) -> std::result::Result<(), String> {
        for (i, r) in self.rounds.iter().enumerate() {
            if r.removed == 0 {
                return Err(format!("round {i} removes no core"));
            }
            if r.removed > r.core_count {
                return Err(format!("round {i} removes more cores than exist"));
            }
            let bound = int(2) * int(r.removed as i64) * &r.radius;
            if r.payment > bound {
                return Err(format!("round {i}: payment {} exceeds 2*h*R = {}", r.payment, bound));
            }
            let expected_next = r.core_count - r.removed;
            let next = self.rounds.get(i + 1).map_or(0, |n| n.core_count);
            if next != expected_next {
                return Err(format!("round {i}: core count {} - {} does not reach {next}", r.core_count, r.removed));
            }
        }
        let lower = self.rounds.iter().map(|r| &r.radius * int(r.core_count as i64)).max().unwrap_or_else(Rational::zero);
        if lower != self.lower_bound {
            return Err("stored lower bound does not match the rounds".into());
        }
        if &self.total_cost + &self.total_penalty_paid != self.objective {
            return Err("objective differs from cost plus paid penalties".into());
        }
        if self.total_payment() < self.objective {
            return Err("payments do not cover the objective".into());
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> crate::Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
