//! Gaussian tail function, its inverse, and the normal approximation of
//! the finite-blocklength AWGN channel.
//!
//! The achievable rate at blocklength `R` and error probability `Pe` is
//! approximated as `L = R·C(γ) − Q⁻¹(Pe)·√(R·V(γ))`. The logarithmic
//! remainder term of the full expansion is not modelled.

use std::f64::consts::{FRAC_1_SQRT_2, LN_2};

use libm::erfc;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// Gaussian tail probability `Q(x) = Pr[N(0,1) > x]`.
pub fn q_func(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain(format!(
            "q_func requires a finite argument, got {x}"
        )));
    }
    Ok(q_unchecked(x))
}

#[inline]
fn q_unchecked(x: f64) -> f64 {
    0.5 * erfc(x * FRAC_1_SQRT_2)
}

/// Inverse of [`q_func`].
///
/// Acklam's rational approximation of the normal quantile followed by one
/// Halley refinement step against `q_func`.
pub fn q_inv(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!(
            "q_inv requires p in (0, 1), got {p}"
        )));
    }
    if p == 0.5 {
        return Ok(0.0);
    }
    // Work in the upper tail where `p` carries full relative precision.
    if p > 0.5 {
        return Ok(-upper_tail_inverse(1.0 - p));
    }
    Ok(upper_tail_inverse(p))
}

/// Returns `x > 0` with `Q(x) = p` for `0 < p < 0.5`.
fn upper_tail_inverse(p: f64) -> f64 {
    // Φ⁻¹(p) is negative here and Q(x) = Φ(−x).
    let z = acklam_quantile(p);
    let x = -z;
    let err = q_unchecked(x) - p;
    // d/dx Q(x) = −φ(x); Halley step on f(x) = Q(x) − p.
    let u = err * SQRT_2PI * (0.5 * x * x).exp();
    x + u / (1.0 - 0.5 * x * u)
}

fn acklam_quantile(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.02425;

    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    }
}

/// AWGN Shannon capacity `log₂(1 + γ)` in bits per channel use.
pub fn shannon_capacity(sinr_linear: f64) -> Result<f64> {
    check_sinr(sinr_linear)?;
    Ok(sinr_linear.ln_1p() / LN_2)
}

/// AWGN channel dispersion `(1 − 1/(1+γ)²) / ln(2)²`.
pub fn channel_dispersion(sinr_linear: f64) -> Result<f64> {
    check_sinr(sinr_linear)?;
    // 1 − (1+γ)⁻² = γ(2+γ)/(1+γ)², exact for small γ as well.
    let one_plus = 1.0 + sinr_linear;
    Ok(sinr_linear * (2.0 + sinr_linear) / (one_plus * one_plus) / (LN_2 * LN_2))
}

fn check_sinr(sinr_linear: f64) -> Result<()> {
    if sinr_linear > 0.0 && sinr_linear.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "SINR must be a positive finite linear value, got {sinr_linear}"
        )))
    }
}

pub fn db_to_linear(x_db: f64) -> f64 {
    10f64.powf(x_db / 10.0)
}

pub fn linear_to_db(x: f64) -> Result<f64> {
    if x > 0.0 {
        Ok(10.0 * x.log10())
    } else {
        Err(Error::domain(format!(
            "linear_to_db requires a positive value, got {x}"
        )))
    }
}

/// Payload size and link quality for a finite-blocklength evaluation,
/// together with the derived capacity and dispersion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FblContext {
    payload_bits: u32,
    sinr_linear: f64,
    capacity: f64,
    dispersion: f64,
}

impl FblContext {
    pub fn new(payload_bits: u32, sinr_linear: f64) -> Result<Self> {
        if payload_bits == 0 {
            return Err(Error::domain("payload_bits must be at least 1"));
        }
        Ok(Self {
            payload_bits,
            sinr_linear,
            capacity: shannon_capacity(sinr_linear)?,
            dispersion: channel_dispersion(sinr_linear)?,
        })
    }

    pub fn from_db(payload_bits: u32, sinr_db: f64) -> Result<Self> {
        Self::new(payload_bits, db_to_linear(sinr_db))
    }

    /// Same payload at a different SINR.
    pub fn with_sinr(&self, sinr_linear: f64) -> Result<Self> {
        Self::new(self.payload_bits, sinr_linear)
    }

    pub fn payload_bits(&self) -> u32 {
        self.payload_bits
    }

    pub fn sinr_linear(&self) -> f64 {
        self.sinr_linear
    }

    pub fn capacity(&self) -> f64 {
        self.capacity
    }

    pub fn dispersion(&self) -> f64 {
        self.dispersion
    }

    /// Channel uses needed to carry the payload at block error rate `bler`.
    ///
    /// This is the positive root of `L = R·C − Q⁻¹(bler)·√(R·V)` seen as a
    /// quadratic in `√R`, evaluated as `((a + √(a² + 4LC)) / 2C)²` with
    /// `a = Q⁻¹(bler)·√V`. The root is only the physical one for
    /// `Q⁻¹(bler) ≥ 0`, hence the restriction `bler < 0.5`.
    pub fn channel_use(&self, bler: f64) -> Result<f64> {
        if !(bler > 0.0 && bler < 0.5) {
            return Err(Error::domain(format!(
                "channel_use requires bler in (0, 0.5), got {bler}"
            )));
        }
        let a = q_inv(bler)? * self.dispersion.sqrt();
        let l = f64::from(self.payload_bits);
        let c = self.capacity;
        let sqrt_r = (a + (a * a + 4.0 * l * c).sqrt()) / (2.0 * c);
        Ok(sqrt_r * sqrt_r)
    }

    /// Block error rate reached when the payload is sent in `channel_uses`
    /// channel uses: `Q((R·C − L) / √(R·V))`.
    pub fn achieved_bler(&self, channel_uses: f64) -> Result<f64> {
        if !(channel_uses > 0.0 && channel_uses.is_finite()) {
            return Err(Error::domain(format!(
                "channel_uses must be positive and finite, got {channel_uses}"
            )));
        }
        let l = f64::from(self.payload_bits);
        let arg = (channel_uses * self.capacity - l) / (channel_uses * self.dispersion).sqrt();
        q_func(arg)
    }

    /// Bits carried by `channel_uses` at error rate `bler`, i.e. the
    /// forward normal approximation.
    pub fn information_bits(&self, channel_uses: f64, bler: f64) -> Result<f64> {
        let q = q_inv(bler)?;
        Ok(channel_uses * self.capacity - q * (channel_uses * self.dispersion).sqrt())
    }
}
