//! Small numeric helpers shared across modules.

/// Neumaier's compensated summation.
///
/// Reductions that must agree between serial and parallel runs feed their
/// partial results through this accumulator in index order.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for v in iter {
            self.add(v);
        }
    }
}

/// Compensated sum of an iterator, in iteration order.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = CompensatedSum::new();
    acc.extend(values);
    acc.value()
}

/// Fractional part of `k * x`, computed from the exact product and rounded
/// once.
///
/// `x` is split into its 53-bit significand and binary exponent, the product
/// with `k` is formed in 128-bit integer arithmetic, and the integer part is
/// discarded before converting back to floating point. This keeps full
/// precision where the naive `(k as f64 * x).fract()` loses every fractional
/// bit (large `k`). The result lies in `[0, 1)`; a value that rounds up to
/// `1.0` is returned as `0.0` (the torus identification).
pub fn fract_mul(k: i64, x: f64) -> f64 {
    assert!(x.is_finite(), "fract_mul requires a finite multiplier");
    if k == 0 || x == 0.0 {
        return 0.0;
    }
    let bits = x.to_bits();
    let negative = (bits >> 63 == 1) != (k < 0);
    let biased_exp = ((bits >> 52) & 0x7ff) as i32;
    let fraction = bits & ((1u64 << 52) - 1);
    let (significand, exp) = if biased_exp == 0 {
        (fraction, -1074)
    } else {
        (fraction | (1u64 << 52), biased_exp - 1075)
    };
    if exp >= 0 {
        return 0.0;
    }
    let shift = (-exp) as u32;
    // |k| < 2^63 and significand < 2^53, so the product fits in 116 bits.
    let product = u128::from(k.unsigned_abs()) * u128::from(significand);
    let frac = if shift < 128 {
        let rem = product & ((1u128 << shift) - 1);
        scale_pow2(rem as f64, shift)
    } else {
        scale_pow2(product as f64, shift)
    };
    let frac = if negative && frac != 0.0 {
        1.0 - frac
    } else {
        frac
    };
    if frac >= 1.0 {
        0.0
    } else {
        frac
    }
}

/// `value * 2^-shift` without intermediate underflow of the scale factor.
fn scale_pow2(mut value: f64, mut shift: u32) -> f64 {
    while shift > 0 {
        let step = shift.min(1022);
        // 2^-step is a normal double, assembled directly from its exponent.
        value *= f64::from_bits(u64::from(1023 - step) << 52);
        shift -= step;
    }
    value
}
