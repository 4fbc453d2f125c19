use rand::Rng;

use crate::fields::ScalarField2D;

/// Random trigonometric polynomial `sum c_ab cos(a x + b y + phase_ab)` with
/// `0 <= a <= degree`, `|b| <= degree`, amplitudes decaying with frequency.
pub fn random_trig_field<R: Rng>(rng: &mut R, degree: i32) -> ScalarField2D {
    let mut terms = Vec::new();
    for a in 0..=degree {
        for b in -degree..=degree {
            let c: f64 = rng.gen_range(-1.0..1.0) / (1.0 + (a + b.abs()) as f64);
            let phase: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            terms.push((a as f64, b as f64, c, phase));
        }
    }
    let bound: f64 = terms.iter().map(|t| t.2.abs()).sum();
    ScalarField2D::new(move |x, y| terms.iter().map(|&(a, b, c, ph)| c * (a * x + b * y + ph).cos()).sum())
        .with_sup_bound(bound)
}
