#![allow(dead_code)]

use std::io::Write;

use nnsampling::fields::{make_grid, sample_field, Rect, ScalarField2D};
use rand::Rng;

/// Random trigonometric polynomial `sum c cos(a x + b y + phase)` with
/// amplitudes decaying in the frequency. The sup bound is the sum of `|c|`.
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

/// Largest `|f|` on a dense node lattice of `rect`.
pub fn dense_sup(f: &ScalarField2D, rect: Rect, nodes: usize) -> f64 {
    let grid = make_grid(rect, nodes, nodes).unwrap();
    sample_field(f, &grid).unwrap().max_abs()
}

/// Print a verdict line that is visible even when test output is captured.
pub fn verdict(id: &str, name: &str, pass: bool, detail: &str) {
    let line = format!("[{}] criterion {id}: {name}: {detail}\n", if pass { "PASS" } else { "FAIL" });
    let out = std::io::stdout();
    let mut lock = out.lock();
    let _ = lock.write_all(line.as_bytes());
    let _ = lock.flush();
}

pub fn note(id: &str, text: &str) {
    let line = format!("[INFO] criterion {id}: {text}\n");
    let _ = std::io::stdout().lock().write_all(line.as_bytes());
}
