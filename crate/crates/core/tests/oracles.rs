//! Cross-module examples checked against independently computed values.

use dephase_core::dephasing::{dephased_state, Correlation, DephasingModel, ProbeKind, ProbeState};
use dephase_core::linalg::eigh;
use dephase_core::purification::purify;
use dephase_core::qfi::{minimize_ansatz, system_qfi, AnsatzBasis};
use dephase_core::report::{AnsatzChoice, Scenario};
use dephase_core::resolution::{
    closed_form_uncorrelated, correlated_closed_form, partial_corr_asymptote, qfi_from_resolution, ResolutionQuery,
};

#[test]
fn single_qubit_qfi_closed_form() {
    // 2×2 density matrix with coherence e^{-γt}/2: F = t²e^{-2γt}.
    for (g, t) in [(0.3, 1.0), (1.0, 0.5), (0.05, 4.0)] {
        let m = DephasingModel::uncorrelated(g, 1.0, 1).unwrap();
        let f = system_qfi(&purify(&ProbeState::product_plus(1).unwrap(), &m, t, 0.4).unwrap()).unwrap();
        let want = t * t * (-2.0 * g * t).exp();
        assert!((f - want).abs() < 1e-12 * want.max(1.0), "{f} vs {want}");
    }
}

#[test]
fn single_qubit_resolution_matches_oracle() {
    let (g, t, total) = (0.4, 0.9, 3.0);
    let m = DephasingModel::uncorrelated(g, 1.0, 1).unwrap();
    let probe = ProbeState::product_plus(1).unwrap();
    let closed = closed_form_uncorrelated(&ResolutionQuery::for_probe(m, &probe, t, total)).unwrap();
    let oracle = system_qfi(&purify(&probe, &m, t, 0.0).unwrap()).unwrap();
    let from_oracle = (t / (total * oracle)).sqrt();
    assert!((closed / from_oracle - 1.0).abs() < 1e-12);
}

#[test]
fn correlated_ghz_pair_against_purification() {
    // n = 2, ν = 1, γt = 0.5: angle = arccos(e^{-0.5})/2 and F = t²·4·cos²(4·angle).
    let (t, g) = (1.0, 0.5);
    let angle = 0.5 * (-0.5f64).exp().acos();
    let explicit = t * t * 4.0 * (4.0 * angle).cos().powi(2);
    let dw = correlated_closed_form(2, 1.0, g, t, ProbeKind::Ghz).unwrap();
    let m = DephasingModel::max_correlated(g, 1.0, 2).unwrap();
    let oracle = system_qfi(&purify(&ProbeState::ghz(2).unwrap(), &m, t, 0.0).unwrap()).unwrap();
    assert!((qfi_from_resolution(dw, t, 1.0) - oracle).abs() < 1e-10);
    assert!((oracle - explicit).abs() < 1e-10);
}

#[test]
fn partial_product_probe_matches_asymptote() {
    // The long-time form with the normalized environment agrees with the
    // nine-generator ansatz when ⟨Z1Z2⟩ = 0.
    let t = 8.0;
    // A = 0 leaves a vanishing denominator: the long-time information decays to zero.
    assert!(partial_corr_asymptote(0.0, 0.0, t).is_err());
    for a in [0.25, 0.5, 0.75, 1.0] {
        let m = DephasingModel::new(1.0, 1.0, 2, Correlation::Partial { amplitude: a }).unwrap();
        let probe = ProbeState::product_plus(2).unwrap();
        let fit = minimize_ansatz(
            &purify(&probe, &m, t, 0.0).unwrap(),
            &AnsatzBasis::two_qubit_symmetric().unwrap(),
        )
        .unwrap();
        let engine = (t / fit.value).sqrt();
        let closed = partial_corr_asymptote(a, probe.zz_correlation(0, 1), t).unwrap();
        assert!((engine / closed - 1.0).abs() < 1e-5, "A={a}: {engine} vs {closed}");
    }
}

#[test]
fn report_for_partial_pair() {
    let m = DephasingModel::new(0.5, 1.0, 2, Correlation::Partial { amplitude: 0.5 }).unwrap();
    let r = Scenario {
        model: m,
        probe: ProbeKind::Ghz,
        t: 2.0,
        total_time: 1.0,
        phi: 0.1,
        ansatz: AnsatzChoice::Auto,
    }
    .evaluate()
    .unwrap();
    assert_eq!(r.coefficients.len(), 9);
    assert!(r.ordering_holds());
    assert_eq!(r.scenario.amplitude, Some(0.5));
    let complete = Scenario {
        model: m,
        probe: ProbeKind::Ghz,
        t: 2.0,
        total_time: 1.0,
        phi: 0.1,
        ansatz: AnsatzChoice::Complete,
    }
    .evaluate()
    .unwrap();
    assert!((complete.cq_ansatz - complete.qfi_oracle).abs() < 1e-8);
}

#[test]
fn correlated_channel_loses_positivity_past_nu_two() {
    // Product probe, n = 2: the sector-coherence matrix over m ∈ {2, 0, -2} is
    // [[1, a, b], [a, 1, a], [b, a, 1]] with a = e^{-γ t^ν}, b = e^{-γ (2t)^ν},
    // whose smallest eigenvalue 1 + (b - √(b² + 8a²))/2 turns negative once ν > 2.
    // The state is that kernel weighted by positive populations, so the signs agree.
    let (gamma, t) = (1.0, 0.5f64);
    for nu in [1.0, 2.0, 3.0] {
        let a = (-gamma * t.powf(nu)).exp();
        let b = (-gamma * (2.0 * t).powf(nu)).exp();
        let sector_min = 1.0 + (b - (b * b + 8.0 * a * a).sqrt()) / 2.0;
        let m = DephasingModel::max_correlated(gamma, nu, 2).unwrap();
        let rho = dephased_state(&ProbeState::product_plus(2).unwrap(), &m, t, 0.0).unwrap();
        let min = eigh(&rho).unwrap().eigenvalues[0];
        assert_eq!(sector_min < 0.0, nu > 2.0, "nu={nu}: {sector_min}");
        assert_eq!(min < -1e-12, sector_min < 0.0, "nu={nu}: {min} vs {sector_min}");
    }
}
