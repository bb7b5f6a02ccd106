//! Gauss–Kronrod (7, 15) rules, adaptive bisection and graded panels.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

// QUADPACK qk15 abscissae and weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// `(Kronrod value, |Kronrod − Gauss|)` on `[a, b]`.
pub fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let x = h * XGK[i];
        let s = f(c - x) + f(c + x);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Adaptive G7K15 over the given breakpoints (each gap split into
/// `initial` panels), bisecting the worst panel until the summed error
/// estimate is below `tol` or `max_panels` is reached.
pub fn adaptive<F: FnMut(f64) -> f64>(
    mut f: F,
    breaks: &[f64],
    initial: usize,
    tol: f64,
    max_panels: usize,
) -> (f64, f64) {
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    for w in breaks.windows(2) {
        let h = (w[1] - w[0]) / initial as f64;
        for k in 0..initial {
            let a = w[0] + k as f64 * h;
            let b = if k + 1 == initial { w[1] } else { a + h };
            let (value, err) = gk15(&mut f, a, b);
            total += err;
            heap.push(Panel { a, b, value, err });
        }
    }
    while total > tol && heap.len() < max_panels {
        let worst = heap.pop().expect("non-empty panel set");
        total -= worst.err;
        let m = 0.5 * (worst.a + worst.b);
        if m <= worst.a || m >= worst.b {
            heap.push(Panel { err: 0.0, ..worst });
            continue;
        }
        for (a, b) in [(worst.a, m), (m, worst.b)] {
            let (value, err) = gk15(&mut f, a, b);
            total += err;
            heap.push(Panel { a, b, value, err });
        }
    }
    let value = heap.iter().map(|p| p.value).sum();
    let err = heap.iter().map(|p| p.err).sum();
    (value, err)
}

const GRADE: f64 = 0.25;

/// `∫_a^b f` with panels shrinking geometrically toward `a` down to a
/// relative width `floor`; `[a, a + floor·(b − a)]` is skipped.
pub fn graded_toward_start<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64, floor: f64) -> (f64, f64) {
    let len = b - a;
    if len <= 0.0 {
        return (0.0, 0.0);
    }
    let (mut value, mut err) = (0.0, 0.0);
    let mut hi = 1.0;
    while hi > floor {
        let lo = if hi * GRADE > floor { hi * GRADE } else { floor };
        let (v, e) = gk15(f, a + lo * len, a + hi * len);
        value += v;
        err += e;
        hi = lo;
    }
    (value, err)
}

/// Same, shrinking toward `b`.
pub fn graded_toward_end<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64, floor: f64) -> (f64, f64) {
    let mut g = |t: f64| f(a + b - t);
    graded_toward_start(&mut g, a, b, floor)
}

/// Point `index` of the Halton sequence in `[0, 1)²`, bases 2 and 3.
pub fn halton(index: u64) -> (f64, f64) {
    fn radical(mut i: u64, base: u64) -> f64 {
        let (mut f, mut r) = (1.0, 0.0);
        while i > 0 {
            f /= base as f64;
            r += f * (i % base) as f64;
            i /= base;
        }
        r
    }
    (radical(index, 2), radical(index, 3))
}
