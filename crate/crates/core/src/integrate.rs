//! Adaptive one-dimensional quadrature.
//!
//! A 7/15 Gauss–Kronrod pair drives a globally adaptive bisection: the
//! interval with the largest error estimate is split until the accumulated
//! error estimate meets the tolerance. Endpoint singularities integrable by
//! bisection (any `x^a` with `a > -1`) are handled by the refinement itself;
//! callers remove stronger endpoint weights by substitution before invoking
//! the driver.

use crate::sum::Neumaier;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

// Abscissae of the 15-point Kronrod rule on [-1, 1], positive half, with the
// embedded 7-point Gauss rule at the odd indices.
const XGK: [f64; 8] = [
    0.991_455_371_120_813,
    0.949_107_912_342_759,
    0.864_864_423_359_769,
    0.741_531_185_599_394,
    0.586_087_235_467_691,
    0.405_845_151_377_397,
    0.207_784_955_007_898,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529,
    0.063_092_092_629_979,
    0.104_790_010_322_250,
    0.140_653_259_715_525,
    0.169_004_726_639_267,
    0.190_350_578_064_785,
    0.204_432_940_075_298,
    0.209_482_141_084_728,
];

const WG: [f64; 4] = [
    0.129_484_966_168_870,
    0.279_705_391_489_277,
    0.381_830_050_505_119,
    0.417_959_183_673_469,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

fn qk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_g = fc * WG[3];
    let mut res_k = fc * WGK[7];
    for (i, &x) in XGK.iter().enumerate().take(7) {
        let dx = half * x;
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        res_k += WGK[i] * (f1 + f2);
        if i % 2 == 1 {
            res_g += WG[i / 2] * (f1 + f2);
        }
    }
    let value = res_k * half;
    let err = ((res_k - res_g) * half).abs();
    (value, err)
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        // Max-heap on the error estimate; ties broken on the left endpoint
        // so the refinement order is deterministic.
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
            .then_with(|| self.a.partial_cmp(&other.a).unwrap_or(Ordering::Equal))
    }
}

/// Integrate `f` over `[a, b]` to the requested tolerances.
///
/// The error target per pass is `max(abs_tol, rel_tol * |integral|)`. The
/// returned error is the accumulated Kronrod estimate, which tends to be
/// pessimistic by one or two orders of magnitude.
pub fn adaptive<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_intervals: usize,
) -> QuadResult {
    if a == b {
        return QuadResult { value: 0.0, error: 0.0, intervals: 0 };
    }
    let (v0, e0) = qk15(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value: v0, error: e0 });
    let mut total_value = v0;
    let mut total_error = e0;

    while heap.len() < max_intervals {
        let target = abs_tol.max(rel_tol * total_value.abs());
        if total_error <= target || !total_error.is_finite() {
            break;
        }
        let worst = match heap.pop() {
            Some(s) => s,
            None => break,
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval at machine resolution; put it back and stop.
            heap.push(worst);
            break;
        }
        let (vl, el) = qk15(&f, worst.a, mid);
        let (vr, er) = qk15(&f, mid, worst.b);
        total_value += vl + vr - worst.value;
        total_error += el + er - worst.error;
        heap.push(Segment { a: worst.a, b: mid, value: vl, error: el });
        heap.push(Segment { a: mid, b: worst.b, value: vr, error: er });
    }

    // Recompute the total with compensation, in ascending interval order.
    let mut segments: Vec<Segment> = heap.into_vec();
    segments.sort_by(|s, t| s.a.partial_cmp(&t.a).unwrap_or(Ordering::Equal));
    let mut acc = Neumaier::new();
    let mut err = Neumaier::new();
    for s in &segments {
        acc.add(s.value);
        err.add(s.error);
    }
    QuadResult {
        value: acc.total(),
        error: err.total(),
        intervals: segments.len(),
    }
}

/// Adaptive integration with the default tolerances used by the kernel and
/// constant evaluations in this crate.
pub fn adaptive_default<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> QuadResult {
    adaptive(f, a, b, 1e-12, 1e-300, 4000)
}
