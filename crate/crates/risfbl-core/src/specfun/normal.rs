//! Gaussian tail probability Q(x) and its inverse.
//!
//! The complementary error function below is based on erf.go from Go
//! (in turn derived from FreeBSD msun s_erf.c), which carries this notice:
//!
//! ====================================================
//! Copyright (C) 1993 by Sun Microsystems, Inc. All rights reserved.
//!
//! Developed at SunPro, a Sun Microsystems, Inc. business.
//! Permission to use, copy, modify, and distribute this
//! software is freely granted, provided that this notice
//! is preserved.
//! ====================================================

#![allow(clippy::excessive_precision)] // constants carried verbatim from their sources

use super::SpecFunError;

const ERX: f64 = 8.450_629_115_104_675_29e-01;

// erf coefficients on [0, 0.84375]
const PP0: f64 = 1.283_791_670_955_125_59e-01;
const PP1: f64 = -3.250_421_072_470_014_99e-01;
const PP2: f64 = -2.848_174_957_559_851_05e-02;
const PP3: f64 = -5.770_270_296_489_441_59e-03;
const PP4: f64 = -2.376_301_665_665_016_26e-05;
const QQ1: f64 = 3.979_172_239_591_553_53e-01;
const QQ2: f64 = 6.502_224_998_876_729_44e-02;
const QQ3: f64 = 5.081_306_281_875_765_63e-03;
const QQ4: f64 = 1.324_947_380_043_216_45e-04;
const QQ5: f64 = -3.960_228_278_775_368_12e-06;

// erf coefficients on [0.84375, 1.25]
const PA0: f64 = -2.362_118_560_752_659_44e-03;
const PA1: f64 = 4.148_561_186_837_483_32e-01;
const PA2: f64 = -3.722_078_760_357_013_24e-01;
const PA3: f64 = 3.183_466_199_011_617_54e-01;
const PA4: f64 = -1.108_946_942_823_966_77e-01;
const PA5: f64 = 3.547_830_432_561_823_59e-02;
const PA6: f64 = -2.166_375_594_868_790_84e-03;
const QA1: f64 = 1.064_208_804_008_442_28e-01;
const QA2: f64 = 5.403_979_177_021_710_49e-01;
const QA3: f64 = 7.182_865_441_419_626_63e-02;
const QA4: f64 = 1.261_712_198_087_616_42e-01;
const QA5: f64 = 1.363_708_391_202_905_07e-02;
const QA6: f64 = 1.198_449_984_679_910_74e-02;

// erfc coefficients on [1.25, 1/0.35]
const RA0: f64 = -9.864_944_034_847_148_23e-03;
const RA1: f64 = -6.938_585_727_071_817_64e-01;
const RA2: f64 = -1.055_862_622_532_329_10e+01;
const RA3: f64 = -6.237_533_245_032_600_60e+01;
const RA4: f64 = -1.623_966_694_625_734_70e+02;
const RA5: f64 = -1.846_050_929_067_110_36e+02;
const RA6: f64 = -8.128_743_550_630_659_34e+01;
const RA7: f64 = -9.814_329_344_169_145_49e+00;
const SA1: f64 = 1.965_127_166_743_925_71e+01;
const SA2: f64 = 1.376_577_541_435_190_43e+02;
const SA3: f64 = 4.345_658_774_752_292_29e+02;
const SA4: f64 = 6.453_872_717_332_678_80e+02;
const SA5: f64 = 4.290_081_400_275_678_33e+02;
const SA6: f64 = 1.086_350_055_417_794_35e+02;
const SA7: f64 = 6.570_249_770_319_281_70e+00;
const SA8: f64 = -6.042_441_521_485_809_87e-02;

// erfc coefficients on [1/0.35, 28]
const RB0: f64 = -9.864_942_924_700_099_29e-03;
const RB1: f64 = -7.992_832_376_805_230_07e-01;
const RB2: f64 = -1.775_795_491_775_475_20e+01;
const RB3: f64 = -1.606_363_848_558_219_16e+02;
const RB4: f64 = -6.375_664_433_683_896_28e+02;
const RB5: f64 = -1.025_095_131_611_077_25e+03;
const RB6: f64 = -4.835_191_916_086_513_97e+02;
const SB1: f64 = 3.033_806_074_348_245_83e+01;
const SB2: f64 = 3.257_925_129_965_739_19e+02;
const SB3: f64 = 1.536_729_586_084_436_96e+03;
const SB4: f64 = 3.199_858_219_508_595_54e+03;
const SB5: f64 = 2.553_050_406_433_164_43e+03;
const SB6: f64 = 4.745_285_412_069_553_67e+02;
const SB7: f64 = -2.244_095_244_658_581_83e+01;

const TINY: f64 = 1.387_778_780_781_445_7e-17; // 2^-56

/// Complementary error function, erfc(x) = 1 - erf(x).
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x == f64::INFINITY {
        return 0.0;
    }
    if x == f64::NEG_INFINITY {
        return 2.0;
    }
    let sign = x < 0.0;
    let x = x.abs();

    if x < 0.84375 {
        let temp = if x < TINY {
            x
        } else {
            let z = x * x;
            let r = PP0 + z * (PP1 + z * (PP2 + z * (PP3 + z * PP4)));
            let s = 1.0 + z * (QQ1 + z * (QQ2 + z * (QQ3 + z * (QQ4 + z * QQ5))));
            let y = r / s;
            if x < 0.25 {
                x + x * y
            } else {
                0.5 + (x * y + (x - 0.5))
            }
        };
        return if sign { 1.0 + temp } else { 1.0 - temp };
    }
    if x < 1.25 {
        let s = x - 1.0;
        let p = PA0 + s * (PA1 + s * (PA2 + s * (PA3 + s * (PA4 + s * (PA5 + s * PA6)))));
        let q = 1.0 + s * (QA1 + s * (QA2 + s * (QA3 + s * (QA4 + s * (QA5 + s * QA6)))));
        return if sign { 1.0 + ERX + p / q } else { 1.0 - ERX - p / q };
    }
    if x < 28.0 {
        let s = 1.0 / (x * x);
        let (r, q);
        if x < 1.0 / 0.35 {
            r = RA0 + s * (RA1 + s * (RA2 + s * (RA3 + s * (RA4 + s * (RA5 + s * (RA6 + s * RA7))))));
            q = 1.0
                + s * (SA1
                    + s * (SA2 + s * (SA3 + s * (SA4 + s * (SA5 + s * (SA6 + s * (SA7 + s * SA8)))))));
        } else {
            if sign && x > 6.0 {
                return 2.0;
            }
            r = RB0 + s * (RB1 + s * (RB2 + s * (RB3 + s * (RB4 + s * (RB5 + s * RB6)))));
            q = 1.0 + s * (SB1 + s * (SB2 + s * (SB3 + s * (SB4 + s * (SB5 + s * (SB6 + s * SB7))))));
        }
        // Split x into a 20-bit head so the exp argument is computed exactly.
        let z = f64::from_bits(x.to_bits() & 0xffff_ffff_0000_0000);
        let v = (-z * z - 0.5625).exp() * ((z - x) * (z + x) + r / q).exp();
        return if sign { 2.0 - v / x } else { v / x };
    }
    if sign {
        2.0
    } else {
        0.0
    }
}

/// Upper-tail standard normal probability
/// Q(x) = (1/√(2π)) ∫_x^∞ e^{-t²/2} dt = erfc(x/√2)/2.
pub fn q_function(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// Standard normal density.
fn phi(x: f64) -> f64 {
    const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
    (-0.5 * x * x).exp() * INV_SQRT_2PI
}

// Acklam's rational approximation to the normal quantile.
const ACK_A: [f64; 6] = [
    -3.969_683_028_665_376e+01,
    2.209_460_984_245_205e+02,
    -2.759_285_104_469_687e+02,
    1.383_577_518_672_690e+02,
    -3.066_479_806_614_716e+01,
    2.506_628_277_459_239e+00,
];
const ACK_B: [f64; 5] = [
    -5.447_609_879_822_406e+01,
    1.615_858_368_580_409e+02,
    -1.556_989_798_598_866e+02,
    6.680_131_188_771_972e+01,
    -1.328_068_155_288_572e+01,
];
const ACK_C: [f64; 6] = [
    -7.784_894_002_430_293e-03,
    -3.223_964_580_411_365e-01,
    -2.400_758_277_161_838e+00,
    -2.549_732_539_343_734e+00,
    4.374_664_141_464_968e+00,
    2.938_163_982_698_783e+00,
];
const ACK_D: [f64; 4] = [
    7.784_695_709_041_462e-03,
    3.224_671_290_700_398e-01,
    2.445_134_137_142_996e+00,
    3.754_408_661_907_416e+00,
];

/// Lower quantile of the standard normal (Φ^{-1}) via Acklam's rational fit.
fn norm_ppf(p: f64) -> f64 {
    const P_LOW: f64 = 0.02425;
    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((ACK_C[0] * q + ACK_C[1]) * q + ACK_C[2]) * q + ACK_C[3]) * q + ACK_C[4]) * q
            + ACK_C[5])
            / ((((ACK_D[0] * q + ACK_D[1]) * q + ACK_D[2]) * q + ACK_D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((ACK_A[0] * r + ACK_A[1]) * r + ACK_A[2]) * r + ACK_A[3]) * r + ACK_A[4]) * r
            + ACK_A[5])
            * q
            / (((((ACK_B[0] * r + ACK_B[1]) * r + ACK_B[2]) * r + ACK_B[3]) * r + ACK_B[4]) * r
                + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((ACK_C[0] * q + ACK_C[1]) * q + ACK_C[2]) * q + ACK_C[3]) * q + ACK_C[4]) * q
            + ACK_C[5])
            / ((((ACK_D[0] * q + ACK_D[1]) * q + ACK_D[2]) * q + ACK_D[3]) * q + 1.0)
    }
}

/// Inverse of [`q_function`]: returns x with Q(x) = p, for p in (0, 1).
///
/// Rational initial guess refined by two Newton steps on Q itself; the far
/// tail (p ~ 1e-9 and below) keeps full relative accuracy.
pub fn inv_q(p: f64) -> Result<f64, SpecFunError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(SpecFunError::Domain { func: "inv_q", detail: format!("p={p}") });
    }
    // Q(x) = p  <=>  Φ(x) = 1 - p; Acklam evaluated at the smaller tail.
    let mut x = -norm_ppf(p);
    for _ in 0..2 {
        let err = q_function(x) - p;
        let d = phi(x);
        if d <= 0.0 {
            break;
        }
        x += err / d;
    }
    Ok(x)
}
