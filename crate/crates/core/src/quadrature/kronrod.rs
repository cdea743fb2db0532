//! Globally adaptive 21-point Gauss–Kronrod integration on a finite
//! interval, seeded with a caller-supplied partition.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_22,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_725,
    0.054_755_896_574_351_995,
    0.075_039_674_810_919_96,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_84,
    0.134_709_217_311_473_34,
    0.142_775_938_577_060_09,
    0.147_739_104_901_338_49,
    0.149_445_554_002_916_9,
];

// Gauss weights for the odd-indexed Kronrod nodes
const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_35,
    0.295_524_224_714_752_87,
];

#[derive(Debug, Clone, Copy)]
pub(crate) struct Integral {
    pub value: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    /// the estimate is the roundoff floor, so bisection cannot improve it
    at_floor: bool,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
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
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = 0.0;
    let mut abs_sum = kronrod.abs();
    let mut fv = [0.0f64; 20];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[2 * j] = f1;
        fv[2 * j + 1] = f2;
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        asc += WGK[j] * ((fv[2 * j] - mean).abs() + (fv[2 * j + 1] - mean).abs());
    }
    let value = kronrod * half;
    let res_abs = abs_sum * half.abs();
    let res_asc = asc * half.abs();

    // QUADPACK error rescaling
    let mut error = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    let mut at_floor = false;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let floor = 50.0 * f64::EPSILON * res_abs;
        if floor >= error {
            error = floor;
            at_floor = true;
        }
    }
    Panel {
        a,
        b,
        value,
        error,
        at_floor,
    }
}

/// Splits `[a, b]` into equal panels no wider than `max_width`.
pub(crate) fn partition(a: f64, b: f64, max_width: f64) -> Vec<f64> {
    let n = (((b - a) / max_width).ceil() as usize).max(1);
    (0..=n)
        .map(|i| if i == n { b } else { a + (b - a) * i as f64 / n as f64 })
        .collect()
}

/// Integrates `f` over `[breaks[0], breaks[last]]`, refining the panel with
/// the largest error estimate until the summed estimate drops below
/// `max(abs_tol, rel_tol · |I|)`.
pub(crate) fn integrate<F: Fn(f64) -> f64>(
    f: F,
    breaks: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    max_subdivisions: usize,
) -> Result<Integral> {
    debug_assert!(breaks.len() >= 2);
    let mut heap: BinaryHeap<Panel> = breaks
        .windows(2)
        .map(|w| gauss_kronrod(&f, w[0], w[1]))
        .collect();
    // panels that bisection cannot improve are parked here
    let mut settled = 0.0;
    let mut settled_err = 0.0;
    let mut subdivisions = heap.len();

    loop {
        let value: f64 = settled + heap.iter().map(|p| p.value).sum::<f64>();
        let error: f64 = settled_err + heap.iter().map(|p| p.error).sum::<f64>();
        if error <= abs_tol.max(rel_tol * value.abs()) || heap.is_empty() {
            return Ok(Integral { value, error });
        }
        if subdivisions >= max_subdivisions {
            return Err(Error::Convergence {
                estimate: value,
                error,
                subdivisions,
            });
        }
        let worst = heap.pop().expect("non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        let too_narrow = worst.b - worst.a <= 8.0 * f64::EPSILON * worst.a.abs().max(worst.b.abs());
        if worst.at_floor || too_narrow || mid <= worst.a || mid >= worst.b {
            settled += worst.value;
            settled_err += worst.error;
            continue;
        }
        heap.push(gauss_kronrod(&f, worst.a, mid));
        heap.push(gauss_kronrod(&f, mid, worst.b));
        subdivisions += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let r = integrate(|x| x.powi(5) - 3.0 * x * x, &[0.0, 2.0], 1e-14, 0.0, 10).unwrap();
        assert!((r.value - (64.0 / 6.0 - 8.0)).abs() < 1e-13);
    }

    #[test]
    fn oscillatory_integral() {
        // ∫_0^π sin(40x)² dx = π/2
        let breaks = partition(0.0, std::f64::consts::PI, 0.1);
        let r = integrate(|x| (40.0 * x).sin().powi(2), &breaks, 1e-12, 0.0, 1000).unwrap();
        assert!((r.value - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn endpoint_singularity_converges() {
        // ∫_0^1 x^{-1/2} dx = 2
        let r = integrate(|x| 1.0 / x.sqrt(), &[0.0, 1.0], 1e-9, 0.0, 2000).unwrap();
        assert!((r.value - 2.0).abs() < 1e-8, "{r:?}");
    }

    #[test]
    fn subdivision_budget_is_enforced() {
        let err = integrate(|x| (1.0 / x).sin() / x, &[1e-9, 1.0], 1e-14, 0.0, 20).unwrap_err();
        assert!(matches!(err, Error::Convergence { subdivisions: 20, .. }));
    }

    #[test]
    fn partition_respects_width() {
        let p = partition(0.1, 60.0, 0.03);
        assert_eq!(*p.first().unwrap(), 0.1);
        assert_eq!(*p.last().unwrap(), 60.0);
        assert!(p.windows(2).all(|w| w[1] - w[0] <= 0.03 + 1e-15));
    }
}
