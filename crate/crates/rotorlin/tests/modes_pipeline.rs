//! Mode-identification checks on the real pipeline: the classical mode
//! labels must emerge from the dominance patterns of the decoupled models.

use rotorlin::config::{complete_parameters, xcell, TrimTargets};
use rotorlin::linearize::{assemble_linear_model, decouple};
use rotorlin::modal::{apply_normalization, eigen_analysis, mode_dominance};
use rotorlin::trim::{trim_forward, trim_hover};

#[test]
fn hover_longitudinal_modes_carry_classical_labels() {
    let (p, _) = complete_parameters(&xcell(), &TrimTargets::default()).unwrap();
    let t = trim_hover(&p).unwrap();
    let lm = assemble_linear_model(&t, &p, false).unwrap();
    let d = decouple(&lm, &t, true, &p);
    let mut report = eigen_analysis(&d.long_a).unwrap();
    let labels: Vec<&str> = d.long_state_labels.clone();
    apply_normalization(&mut report, &labels, &p).unwrap();
    let dom = mode_dominance(&report, &labels);

    // short period: the fast oscillatory pair, dominated by pitch/flapping
    let sp = report
        .modes
        .iter()
        .zip(&dom)
        .filter(|(m, _)| m.eigenvalue.im > 0.0)
        .max_by(|a, b| a.0.frequency.partial_cmp(&b.0.frequency).unwrap())
        .expect("oscillatory mode");
    assert_eq!(sp.1.label.as_deref(), Some("short period"), "{:?}", sp.1);
    assert!(sp.1.dominant_states.iter().all(|s| ["q", "theta", "a1s"].contains(&s.as_str())));

    // heaving: the pure-real vertical mode, w dominating by >= 2 orders
    let heave = dom
        .iter()
        .find(|d| d.label.as_deref() == Some("heaving"))
        .expect("heaving mode identified");
    assert_eq!(heave.ranking[0].0, "w");
    assert!(heave.ranking[0].1 >= 100.0 * heave.ranking[1].1);

    // phugoid: the slow oscillatory pair, u and theta
    let ph = report
        .modes
        .iter()
        .zip(&dom)
        .filter(|(m, _)| m.eigenvalue.im > 0.0)
        .min_by(|a, b| a.0.frequency.partial_cmp(&b.0.frequency).unwrap())
        .unwrap();
    assert_eq!(ph.1.label.as_deref(), Some("phugoid"), "{:?}", ph.1);
}

#[test]
fn forward_lateral_pair_is_dutch_roll_like() {
    let (p, _) = complete_parameters(&xcell(), &TrimTargets::default()).unwrap();
    let t = trim_forward(&p, (16.5557, 0.7456, 0.2585)).unwrap();
    let lm = assemble_linear_model(&t, &p, false).unwrap();
    let d = decouple(&lm, &t, false, &p);
    let mut report = eigen_analysis(&d.lat_a).unwrap();
    let labels: Vec<&str> = d.lat_state_labels.clone();
    apply_normalization(&mut report, &labels, &p).unwrap();
    let dom = mode_dominance(&report, &labels);
    let pair = report
        .modes
        .iter()
        .zip(&dom)
        .find(|(m, _)| m.eigenvalue.im > 1e-9)
        .expect("oscillatory lateral mode");
    // roll/yaw combination
    assert_eq!(pair.1.label.as_deref(), Some("dutch roll"), "{:?}", pair.1);
}
