//! Projective measurement with Born-rule sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::correlation::MeasurementSetting;
use crate::error::Result;
use crate::gates::{apply_gate1, Gate1};
use crate::state::PureState;

/// Probabilities of outcome 0 (eigenvalue +1) and 1 (eigenvalue −1).
pub fn outcome_probabilities(state: &PureState, setting: MeasurementSetting) -> Result<[f64; 2]> {
    let rotated = apply_gate1(state, &Gate1::rotation(setting.theta), setting.site)?;
    let p = rotated.lattice().require(setting.site)?;
    let mut probs = [0.0; 2];
    for (key, amp) in rotated.amplitudes() {
        probs[key.get(p) as usize] += amp.norm_sqr();
    }
    Ok(probs)
}

/// Samples an outcome of `cos θ·Z + sin θ·X` on one site and returns it
/// with the collapsed, renormalized state. Deterministic given `seed`.
pub fn sample_measurement(state: &PureState, setting: MeasurementSetting, seed: u64) -> Result<(u8, PureState)> {
    let rot = Gate1::rotation(setting.theta);
    let rotated = apply_gate1(state, &rot, setting.site)?;
    let p = rotated.lattice().require(setting.site)?;
    let p0: f64 = rotated.amplitudes().iter().filter(|(k, _)| k.get(p) == 0).map(|(_, a)| a.norm_sqr()).sum();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let outcome: u8 = if rng.random::<f64>() < p0 { 0 } else { 1 };
    let kept = rotated.amplitudes().iter().filter(|(k, _)| k.get(p) == outcome).map(|(k, a)| (k.clone(), *a));
    let weight = if outcome == 0 { p0 } else { 1.0 - p0 };
    let scale = 1.0 / weight.sqrt();
    let projected = PureState::from_parts(rotated.lattice_arc().clone(), kept.map(|(k, a)| (k, a * scale)).collect());
    let post = apply_gate1(&projected, &rot.adjoint(), setting.site)?;
    Ok((outcome, post))
}
