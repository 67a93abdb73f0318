//! Adaptive 15-point Gauss-Kronrod quadrature.

use crate::summation::CompensatedSum;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// Sum of per-panel |Kronrod − Gauss| estimates.
    pub error: f64,
    pub panels: usize,
}

/// One Kronrod panel; returns (kronrod, |kronrod − gauss|).
fn panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let sum = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * sum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * sum;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Integrate `f` over `[a, b]` to absolute tolerance `abs_tol`.
///
/// The interval is first cut into `initial_panels` equal pieces, which lets
/// oscillatory integrands start from a resolved mesh. Panels are bisected
/// until each meets its share of the tolerance or `max_depth` is reached.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    initial_panels: usize,
    max_depth: u32,
) -> QuadResult {
    let n = initial_panels.max(1);
    let width = (b - a) / n as f64;
    let mut value = CompensatedSum::new();
    let mut error = 0.0;
    let mut panels = 0;
    let mut stack: Vec<(f64, f64, u32)> = (0..n)
        .rev()
        .map(|i| {
            let lo = a + width * i as f64;
            let hi = if i + 1 == n { b } else { lo + width };
            (lo, hi, 0)
        })
        .collect();
    let total = (b - a).abs().max(f64::MIN_POSITIVE);
    while let Some((lo, hi, depth)) = stack.pop() {
        let (v, e) = panel(&f, lo, hi);
        let share = abs_tol * ((hi - lo).abs() / total);
        if e <= share.max(1e-17 * v.abs()) || depth >= max_depth {
            value.add(v);
            error += e;
            panels += 1;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
    QuadResult {
        value: value.value(),
        error,
        panels,
    }
}
