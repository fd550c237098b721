//! Quantization of wavenumbers between two Type I boundaries, and trapped modes.

use crate::scalar::{cx, Cx, Real};
use crate::weights::RuleParams;

use super::planewave::{dispersion_omega, reflection_type1, reflection_type1_right};
use super::SpectralError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuantizedMode<T> {
    pub k: T,
    pub omega: T,
}

/// `sin(Nk) sin(theta) - sin(k) cos(theta) cos(Nk)`: the pole-free form of
/// `tan(Nk) - sin(k) cot(theta)`.
pub fn quantization_function<T: Real>(n: usize, theta: T, k: T) -> T {
    let nk = T::of_usize(n) * k;
    nk.sin() * theta.sin() - k.sin() * theta.cos() * nk.cos()
}

fn bisect<T: Real>(mut lo: T, mut hi: T, f: impl Fn(T) -> T) -> T {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = (lo + hi) * T::lit(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == T::zero() {
            return mid;
        }
        if (fm > T::zero()) == (flo > T::zero()) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    let (a, b) = (f(lo).abs(), f(hi).abs());
    if a <= b {
        lo
    } else {
        hi
    }
}

/// Wavenumbers `0 < k < pi` allowed on `N` sites between two Type I boundaries with
/// `rho = 0`, `upsilon = 0`.
///
/// Brackets are the poles `(n + 1/2) pi / N`, each subdivided so that a second root
/// in one interval is not missed. The endpoints `k = 0, pi` solve the equation but
/// their eigenfunction vanishes identically, so they are not returned.
pub fn quantization_roots<T: Real>(n: usize, theta: T) -> Vec<QuantizedMode<T>> {
    let f = |k: T| quantization_function(n, theta, k);
    let pi = T::PI();
    let mut edges: Vec<T> = vec![T::zero()];
    edges.extend((0..n).map(|i| (T::of_usize(i) + T::lit(0.5)) * pi / T::of_usize(n)));
    edges.push(pi);
    const SUB: usize = 32;
    let mut roots = Vec::new();
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        let step = (b - a) / T::of_usize(SUB);
        for s in 0..SUB {
            let lo = a + step * T::of_usize(s);
            let hi = if s + 1 == SUB { b } else { lo + step };
            // stay clear of the trivial endpoint roots
            let lo = if lo == T::zero() {
                step * T::lit(1e-6)
            } else {
                lo
            };
            let hi = if hi == pi {
                pi - step * T::lit(1e-6)
            } else {
                hi
            };
            let (flo, fhi) = (f(lo), f(hi));
            if flo == T::zero() {
                roots.push(lo);
            } else if (flo > T::zero()) != (fhi > T::zero()) && fhi != T::zero() {
                roots.push(bisect(lo, hi, f));
            }
        }
    }
    roots.dedup_by(|a, b| (*a - *b).abs() < T::lit(1e-12));
    roots
        .into_iter()
        .map(|k| QuantizedMode {
            k,
            omega: dispersion_omega(k, RuleParams::new(T::zero(), theta)),
        })
        .collect()
}

/// General Type I quantization: `k` where the left and right reflection amplitudes
/// agree, found from sign changes of their phase mismatch on a grid.
pub fn quantization_roots_general<T: Real>(
    n: usize,
    p: RuleParams<T>,
    upsilon: T,
) -> Vec<QuantizedMode<T>> {
    let mismatch = |k: T| -> Option<T> {
        let l = reflection_type1(k, 1, p, upsilon).ok()?;
        let r = reflection_type1_right(k, 1, p, upsilon, n).ok()?;
        Some((l / r).arg())
    };
    let pi = T::PI();
    let m = 64 * n.max(4);
    let h = pi / T::of_usize(m);
    let mut out = Vec::new();
    let mut prev: Option<(T, T)> = None;
    for i in 1..m {
        let k = h * T::of_usize(i);
        let cur = mismatch(k).map(|v| (k, v));
        if let (Some((ka, va)), Some((kb, vb))) = (prev, cur) {
            let half = T::FRAC_PI_2();
            // a genuine zero crossing, not a wrap through +-pi
            if (va > T::zero()) != (vb > T::zero()) && va.abs() < half && vb.abs() < half {
                let k = bisect(ka, kb, |x| mismatch(x).unwrap_or(T::nan()));
                out.push(QuantizedMode {
                    k,
                    omega: dispersion_omega(k, p),
                });
            }
        }
        prev = cur;
    }
    out
}

/// A boundary-localized solution with complex wavenumber.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrappedMode<T> {
    /// `e^{ik}`.
    pub z: Cx<T>,
    /// `k = -i ln z`, principal branch.
    pub k: Cx<T>,
    /// Frequency implied by the dispersion relation at `rho = 0`.
    pub omega: T,
    /// Residual `|cos omega - cos k cos theta|` with `cos k = (z + 1/z) / 2`.
    pub dispersion_residual: T,
    /// `|z| < 1`: amplitude shrinks with increasing `x` (a left-boundary mode).
    pub decays_rightward: bool,
    /// `|z| = 1`: the mode sits on the band edge and is not localized.
    pub band_edge: bool,
}

/// The two solutions `e^{ik} = -tan(theta) +- sec(theta)` of the trapped-mode condition.
pub fn trapped_wavenumbers<T: Real>(theta: T) -> Result<[TrappedMode<T>; 2], SpectralError> {
    let ct = theta.cos();
    if ct.abs() < T::lit(1e-14) {
        return Err(SpectralError::DenominatorNearZero {
            what: "trapped modes need cos(theta) != 0",
            modulus: ct.abs().to_f64_lossy(),
        });
    }
    let (t, s) = (theta.tan(), ct.recip());
    let make = |zr: T| {
        let z = cx(zr, T::zero());
        let cos_k = (z + z.inv()) * T::lit(0.5);
        let cos_w = cos_k * ct;
        let omega = cos_w.re.max(-T::one()).min(T::one()).acos();
        let k = z.ln() * cx(T::zero(), -T::one());
        let m = zr.abs();
        let edge = (m - T::one()).abs() < T::lit(1e-12);
        TrappedMode {
            z,
            k,
            omega,
            dispersion_residual: (cos_w - cx(omega.cos(), T::zero())).norm(),
            decays_rightward: m < T::one() && !edge,
            band_edge: edge,
        }
    };
    Ok([make(-t + s), make(-t - s)])
}
