use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Integration rule and tolerances used by the certification functionals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub max_depth: u32,
    pub tail: TailPolicy,
}

/// How the `[M, ∞)` part of an improper integral is handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailPolicy {
    /// Series expansion of `1/(E r² + b r⁵)` in powers of `E/(b r³)`,
    /// truncated once the remainder is below the tolerance.
    AnalyticSeries,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-10,
            max_depth: 50,
            tail: TailPolicy::AnalyticSeries,
        }
    }
}

/// Composite Simpson rule over uniformly spaced samples.
///
/// An even number of samples falls back to the 3/8 rule on the last three
/// intervals, so the result stays exact for cubics either way.
pub fn quad_profile(samples: &[f64], dr: f64) -> Result<f64> {
    let n = samples.len();
    if n < 3 {
        return Err(Error::InvalidData("quadrature needs at least 3 samples"));
    }
    if !(dr > 0.0) || !dr.is_finite() {
        return Err(Error::Domain { what: "grid spacing", value: dr });
    }
    let simpson_end = if n % 2 == 1 { n - 1 } else { n - 4 };
    let mut acc = 0.0;
    if simpson_end >= 2 {
        acc += samples[0] + samples[simpson_end];
        for (i, v) in samples[1..simpson_end].iter().enumerate() {
            acc += if i % 2 == 0 { 4.0 * v } else { 2.0 * v };
        }
        acc *= dr / 3.0;
    }
    if n % 2 == 0 {
        let s = &samples[simpson_end..];
        acc += 3.0 * dr / 8.0 * (s[0] + 3.0 * s[1] + 3.0 * s[2] + s[3]);
    }
    if acc.is_finite() {
        Ok(acc)
    } else {
        Err(Error::NonFinite("quad_profile"))
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
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
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One 15-point Kronrod panel with its embedded 7-point Gauss estimate.
/// Returns `(kronrod, |kronrod - gauss|)`.
pub fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let pair = f(c - x) + f(c + x);
        k += WGK[j] * pair;
        if j % 2 == 1 {
            g += WG[j / 2] * pair;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive bisection on G7–K15 panels until the summed error estimate is
/// below `abs_tol`. Panels are refined largest-error first.
pub fn quad_adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let (v, e) = gauss_kronrod(&f, a, b);
    let mut panels: Vec<(f64, f64, f64, f64, u32)> = alloc::vec![(a, b, v, e, 0)];
    let mut total_err = e;
    let budget = 1usize << 14;
    while total_err > spec.abs_tol {
        let (idx, _) = panels
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (i, p)| if p.3 > best.1 { (i, p.3) } else { best });
        let (lo, hi, _, err, depth) = panels.swap_remove(idx);
        if depth >= spec.max_depth || panels.len() > budget {
            return Err(Error::NoConvergence("adaptive quadrature"));
        }
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gauss_kronrod(&f, lo, mid);
        let (v2, e2) = gauss_kronrod(&f, mid, hi);
        total_err += e1 + e2 - err;
        panels.push((lo, mid, v1, e1, depth + 1));
        panels.push((mid, hi, v2, e2, depth + 1));
        // Re-sum now and then so cancellation in the running total cannot
        // stall the loop.
        if panels.len() % 64 == 0 {
            total_err = panels.iter().map(|p| p.3).sum();
        }
    }
    // Sum smallest panels first.
    panels.sort_by(|x, y| x.0.total_cmp(&y.0));
    let value: f64 = panels.iter().map(|p| p.2).sum();
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite("quad_adaptive"))
    }
}

/// `∫₁^∞ dr / (E r² + b r⁵)` for `E, b ≥ 0`, not both zero.
///
/// The finite part `[1, M]` is integrated adaptively; the tail beyond `M`
/// uses the convergent expansion
/// `∫_M^∞ dr/(b r⁵ (1 + q/r³)) = Σ_k (−q)^k / (b (4 + 3k) M^{4+3k})`, `q = E/b`,
/// with `M` chosen so that `q/M³ ≤ 1/8`. For `b = 0` the integral is `1/E`.
pub fn quad_improper(e: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(e >= 0.0) || !(b >= 0.0) || !e.is_finite() || !b.is_finite() {
        return Err(Error::Domain { what: "improper integrand coefficient", value: if e >= 0.0 { b } else { e } });
    }
    if e == 0.0 && b == 0.0 {
        return Err(Error::Domain { what: "improper integrand coefficients (both zero)", value: 0.0 });
    }
    if b == 0.0 {
        return Ok(1.0 / e);
    }
    let q = e / b;
    let m = crate::math::powf(8.0 * q, 1.0 / 3.0).max(2.0);
    let TailPolicy::AnalyticSeries = spec.tail;
    let mut tail = 0.0;
    let x = q / (m * m * m);
    let mut term = 1.0 / (4.0 * b * m * m * m * m);
    let mut k = 0u32;
    loop {
        let contrib = term * 4.0 / (4.0 + 3.0 * k as f64);
        tail += contrib;
        // Alternating series with decreasing terms: remainder < next term.
        if contrib.abs() * x < 0.01 * spec.abs_tol || k > 200 {
            break;
        }
        term *= -x;
        k += 1;
    }
    let inner_spec = QuadratureSpec { abs_tol: 0.5 * spec.abs_tol, ..*spec };
    let body = quad_adaptive(|r| 1.0 / (e * r * r + b * r * r * r * r * r), 1.0, m, &inner_spec)?;
    Ok(body + tail)
}
