//! Adaptive Gauss–Kronrod (7/15) quadrature.

use alloc::vec::Vec;

use crate::error::{Error, Result};

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

/// Gauss weights for the odd-indexed Kronrod nodes (and the centre).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_INTERVALS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UpperLimit {
    Finite(f64),
    Infinity,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error_bound: f64,
    pub intervals: usize,
}

#[derive(Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = half * XGK[i];
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    Segment {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// `∫_a^b f` to absolute tolerance `tol`. An infinite upper limit is mapped
/// to `[0, 1)` with `x = a + t / (1 − t)`.
pub fn quad_adaptive<F: Fn(f64) -> f64>(f: F, a: f64, upper: UpperLimit, tol: f64) -> Result<Quadrature> {
    if !(tol > 0.0) {
        return Err(Error::Domain {
            what: "quadrature tolerance",
            value: tol,
        });
    }
    match upper {
        UpperLimit::Finite(b) => integrate(&f, a, b, tol),
        UpperLimit::Infinity => {
            let g = |t: f64| {
                let s = 1.0 - t;
                let v = f(a + t / s);
                if v == 0.0 {
                    0.0
                } else {
                    v / (s * s)
                }
            };
            integrate(&g, 0.0, 1.0, tol)
        }
    }
}

fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<Quadrature> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain {
            what: "finite integration limit",
            value: if a.is_finite() { b } else { a },
        });
    }
    if a == b {
        return Ok(Quadrature {
            value: 0.0,
            error_bound: 0.0,
            intervals: 0,
        });
    }
    let mut segments: Vec<Segment> = alloc::vec![gk15(f, a, b)];
    loop {
        let (value, error) = segments.iter().fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
        if !value.is_finite() {
            return Err(Error::Accuracy {
                estimate: value,
                error_bound: error,
            });
        }
        if error <= tol {
            return Ok(Quadrature {
                value,
                error_bound: error,
                intervals: segments.len(),
            });
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let seg = segments[worst];
        let mid = 0.5 * (seg.a + seg.b);
        let too_narrow = !(seg.a < mid && mid < seg.b);
        if segments.len() >= MAX_INTERVALS || too_narrow {
            return Err(Error::Accuracy {
                estimate: value,
                error_bound: error,
            });
        }
        segments[worst] = gk15(f, seg.a, mid);
        segments.push(gk15(f, mid, seg.b));
    }
}
