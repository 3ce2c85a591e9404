//! One-shot evaluation of a metrology scenario into a flat report.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::dephasing::{Correlation, DephasingModel, ProbeKind, ProbeState};
use crate::error::{input, unsupported, Error, Result};
use crate::purification::purify;
use crate::qfi::{minimize_ansatz, optimal_h, system_qfi, AnsatzBasis};
use crate::resolution::{parity_limit, resolution_from_qfi, ParityClass};

/// Largest environment for which the complete Pauli basis is offered.
pub const COMPLETE_BASIS_MAX_ENV: usize = 4;

/// Which environment operators the variational bound is minimized over.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnsatzChoice {
    /// Collective Paulis for per-particle and shared environments, the
    /// nine-generator symmetric set for partially correlated ones.
    #[default]
    Auto,
    Collective,
    TwoQubit,
    Complete,
    None,
}

impl AnsatzChoice {
    pub fn name(&self) -> &'static str {
        match self {
            AnsatzChoice::Auto => "auto",
            AnsatzChoice::Collective => "collective",
            AnsatzChoice::TwoQubit => "two-qubit",
            AnsatzChoice::Complete => "complete",
            AnsatzChoice::None => "none",
        }
    }

    pub fn basis(&self, correlation: Correlation, n_env: usize) -> Result<AnsatzBasis> {
        match self {
            AnsatzChoice::Auto => match correlation {
                Correlation::Partial { .. } => AnsatzBasis::two_qubit_symmetric(),
                _ => AnsatzBasis::collective(n_env),
            },
            AnsatzChoice::Collective => AnsatzBasis::collective(n_env),
            AnsatzChoice::TwoQubit if n_env == 2 => AnsatzBasis::two_qubit_symmetric(),
            AnsatzChoice::TwoQubit => Err(input(format!(
                "the two-qubit ansatz needs a two-qubit environment, this one has {n_env}"
            ))),
            AnsatzChoice::Complete if n_env <= COMPLETE_BASIS_MAX_ENV => AnsatzBasis::complete(n_env),
            AnsatzChoice::Complete => Err(input(format!(
                "the complete ansatz is limited to {COMPLETE_BASIS_MAX_ENV} environment qubits, this one has {n_env}"
            ))),
            AnsatzChoice::None => Ok(AnsatzBasis::empty(n_env)),
        }
    }
}

impl fmt::Display for AnsatzChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AnsatzChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "auto" => AnsatzChoice::Auto,
            "collective" => AnsatzChoice::Collective,
            "two-qubit" => AnsatzChoice::TwoQubit,
            "complete" => AnsatzChoice::Complete,
            "none" => AnsatzChoice::None,
            other => return Err(input(format!("unknown ansatz '{other}'"))),
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Scenario {
    pub model: DephasingModel,
    pub probe: ProbeKind,
    pub t: f64,
    pub total_time: f64,
    pub phi: f64,
    pub ansatz: AnsatzChoice,
}

/// Flat description of a [`Scenario`] as it appears in reports.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScenarioRecord {
    pub correlation: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    pub probe: String,
    pub n: usize,
    pub gamma: f64,
    pub nu: f64,
    pub t: f64,
    pub total_time: f64,
    pub phi: f64,
    pub ansatz: String,
}

impl From<&Scenario> for ScenarioRecord {
    fn from(s: &Scenario) -> Self {
        let c = s.model.correlation();
        let (amplitude, theta) = match c {
            Correlation::Partial { amplitude } => (Some(amplitude), None),
            Correlation::Mixed { theta } => (None, Some(theta)),
            _ => (None, None),
        };
        Self {
            correlation: c.name().into(),
            amplitude,
            theta,
            probe: s.probe.name().into(),
            n: s.model.n(),
            gamma: s.model.gamma(),
            nu: s.model.nu(),
            t: s.t,
            total_time: s.total_time,
            phi: s.phi,
            ansatz: s.ansatz.name().into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QfiReport {
    /// Exact QFI of the reduced system state.
    pub qfi_oracle: f64,
    /// Variational bound minimized over the chosen ansatz.
    pub cq_ansatz: f64,
    /// Variational bound at the exact optimal environment operator.
    pub cq_exact_opt: f64,
    pub coefficients: Vec<f64>,
    pub coefficient_labels: Vec<String>,
    /// `√(t/(T·qfi_oracle))`.
    pub resolution: f64,
    /// Long-time parity class, reported for the shared-environment family.
    pub parity: Option<ParityClass>,
    pub scenario: ScenarioRecord,
}

impl QfiReport {
    /// `cq_ansatz ≥ cq_exact_opt ≥ qfi_oracle`, each with slack `1e-8·max(1, value)`.
    pub fn ordering_holds(&self) -> bool {
        let slack = |v: f64| 1e-8 * v.abs().max(1.0);
        self.cq_ansatz >= self.cq_exact_opt - slack(self.cq_exact_opt)
            && self.cq_exact_opt >= self.qfi_oracle - slack(self.qfi_oracle)
            && (self.cq_exact_opt - self.qfi_oracle).abs() <= slack(self.qfi_oracle)
    }
}

impl Scenario {
    pub fn evaluate(&self) -> Result<QfiReport> {
        if let Correlation::Mixed { .. } = self.model.correlation() {
            return Err(unsupported(
                "QFI reports need a purification; mixed correlation only provides a coherence factor",
            ));
        }
        if !(self.total_time.is_finite() && self.total_time > 0.0) {
            return Err(input(format!("total time must be positive, got {}", self.total_time)));
        }
        if !self.phi.is_finite() {
            return Err(input("phi must be finite"));
        }
        let probe = ProbeState::of_kind(self.probe, self.model.n())?;
        let purified = purify(&probe, &self.model, self.t, self.phi)?;
        let basis = self.ansatz.basis(self.model.correlation(), purified.n_env())?;
        let qfi_oracle = system_qfi(&purified)?;
        let fit = minimize_ansatz(&purified, &basis)?;
        let opt = optimal_h(&purified)?;
        let parity = match self.model.correlation() {
            Correlation::MaxCorrelated => Some(parity_limit(self.model.n(), self.model.nu()).class),
            _ => None,
        };
        Ok(QfiReport {
            qfi_oracle,
            cq_ansatz: fit.value,
            cq_exact_opt: opt.value,
            coefficients: fit.coefficients,
            coefficient_labels: basis.labels().to_vec(),
            resolution: resolution_from_qfi(qfi_oracle, self.t, self.total_time),
            parity,
            scenario: self.into(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario(model: DephasingModel, probe: ProbeKind, t: f64) -> Scenario {
        Scenario {
            model,
            probe,
            t,
            total_time: 1.0,
            phi: 0.0,
            ansatz: AnsatzChoice::Auto,
        }
    }

    #[test]
    fn noiseless_single_qubit() {
        let m = DephasingModel::uncorrelated(0.0, 1.0, 1).unwrap();
        let r = scenario(m, ProbeKind::ProductPlus, 1.0).evaluate().unwrap();
        assert!((r.qfi_oracle - 1.0).abs() < 1e-12);
        assert!(r.ordering_holds());
    }

    #[test]
    fn ghz_pair_oracle_matches_optimum() {
        let m = DephasingModel::uncorrelated(0.25, 1.0, 2).unwrap();
        let r = scenario(m, ProbeKind::Ghz, 1.0).evaluate().unwrap();
        assert!((r.qfi_oracle - r.cq_exact_opt).abs() < 1e-8);
        assert!(r.ordering_holds());
        assert_eq!(r.coefficient_labels, ["sum_X", "sum_Y", "sum_Z"]);
    }

    #[test]
    fn parity_flag_for_shared_environment() {
        let m = DephasingModel::max_correlated(6.0, 1.0, 2).unwrap();
        let r = scenario(m, ProbeKind::Ghz, 1.0).evaluate().unwrap();
        assert_eq!(r.parity, Some(ParityClass::Unbounded));
        assert_eq!(r.parity.unwrap().label(), "even/unbounded");
    }

    #[test]
    fn unsupported_combinations() {
        let m = DephasingModel::new(0.1, 1.0, 2, Correlation::Mixed { theta: 0.3 }).unwrap();
        assert!(matches!(
            scenario(m, ProbeKind::Ghz, 1.0).evaluate(),
            Err(Error::Unsupported(_))
        ));
        let m = DephasingModel::uncorrelated(0.1, 1.0, 3).unwrap();
        let mut s = scenario(m, ProbeKind::Ghz, 1.0);
        s.ansatz = AnsatzChoice::TwoQubit;
        assert!(s.evaluate().is_err());
        assert_eq!("two-qubit".parse::<AnsatzChoice>().unwrap(), AnsatzChoice::TwoQubit);
        assert!("bogus".parse::<AnsatzChoice>().is_err());
    }
}
