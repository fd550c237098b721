//! Plane waves, the dispersion relation, reflection amplitudes and assembled
//! single-boundary eigenfunctions.

use crate::dynamics::State;
use crate::lattice::{assemble_operator, Boundaries, Boundary, LatticeConfig};
use crate::scalar::{cx, phase, re, Cx, Real};
use crate::weights::{type3_boundary_row, RuleParams};

use super::SpectralError;

/// Smallest denominator modulus accepted by the reflection formulas.
pub const DENOMINATOR_FLOOR: f64 = 1e-13;
/// Largest condition number accepted in the Type III solve.
pub const CONDITION_CAP: f64 = 1e12;
/// Sites in the probe lattice used for eigenfunction residuals: two boundary rows
/// and eight interior ones are checked.
pub const PROBE_SITES: usize = 11;

/// `omega in [0, pi]` with `cos omega = cos k cos theta cos rho + sin theta sin rho`.
pub fn dispersion_omega<T: Real>(k: T, p: RuleParams<T>) -> T {
    let c = k.cos() * p.theta.cos() * p.rho.cos() + p.theta.sin() * p.rho.sin();
    c.max(-T::one()).min(T::one()).acos()
}

/// `(omega_min, omega_max)` of the dispersion relation over real `k`.
pub fn band_range<T: Real>(p: RuleParams<T>) -> (T, T) {
    let s = p.theta.sin() * p.rho.sin();
    let c = (p.theta.cos() * p.rho.cos()).abs();
    let lo = (s + c).min(T::one()).acos();
    let hi = (s - c).max(-T::one()).acos();
    (lo, hi)
}

/// Plane wave `e^{ikx} spinor` solving `D(k) spinor = lambda spinor`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaneWave<T> {
    /// `e^{ik}`; carrying this rather than `k` keeps complex wavenumbers off branch cuts.
    pub z: Cx<T>,
    pub epsilon: i8,
    /// `e^{-i eps omega}`.
    pub lambda: Cx<T>,
    /// `-arg(lambda)`.
    pub omega: T,
    /// Unnormalized `(-b, a - lambda)` with `D(k) = [[a, b], [c, d]]`.
    pub spinor: [Cx<T>; 2],
    pub unit: [Cx<T>; 2],
}

/// `D(k) = w_{-1} e^{-ik} + w_0 + w_{+1} e^{ik}` as a function of `z = e^{ik}`.
pub fn symbol<T: Real>(z: Cx<T>, p: RuleParams<T>) -> [[Cx<T>; 2]; 2] {
    let (st, ct) = p.theta.sin_cos();
    let (sr, cr) = p.rho.sin_cos();
    let zi = z.inv();
    let i = cx(T::zero(), T::one());
    let a = z * (cr * ct) + re(sr * st);
    let b = i * (zi * (cr * st) - re(sr * ct));
    let c = i * (z * (cr * st) - re(sr * ct));
    let d = zi * (cr * ct) + re(sr * st);
    [[a, b], [c, d]]
}

/// Plane wave at (possibly complex) wavenumber `k`.
pub fn planewave_spinor<T: Real>(
    k: Cx<T>,
    epsilon: i8,
    p: RuleParams<T>,
) -> Result<PlaneWave<T>, SpectralError> {
    planewave_from_z((k * cx(T::zero(), T::one())).exp(), epsilon, p)
}

/// Plane wave parameterized by `z = e^{ik}`.
pub fn planewave_from_z<T: Real>(
    z: Cx<T>,
    epsilon: i8,
    p: RuleParams<T>,
) -> Result<PlaneWave<T>, SpectralError> {
    let d = symbol(z, p);
    // det D = 1, so the eigenvalues are cos w -/+ i sin w
    let cos_w = (d[0][0] + d[1][1]) * T::lit(0.5);
    let sin_w = (re(T::one()) - cos_w * cos_w).sqrt();
    let sign = if epsilon >= 0 { -T::one() } else { T::one() };
    let lambda = cos_w + cx(T::zero(), sign) * sin_w;
    let spinor = [-d[0][1], d[0][0] - lambda];
    let norm = (spinor[0].norm_sqr() + spinor[1].norm_sqr()).sqrt();
    if norm <= T::lit(1e-12) {
        return Err(SpectralError::ZeroSpinor {
            z: (z.re.to_f64_lossy(), z.im.to_f64_lossy()),
        });
    }
    Ok(PlaneWave {
        z,
        epsilon,
        lambda,
        omega: -lambda.arg(),
        spinor,
        unit: [spinor[0] / norm, spinor[1] / norm],
    })
}

fn checked_ratio<T: Real>(
    num: Cx<T>,
    den: Cx<T>,
    what: &'static str,
) -> Result<Cx<T>, SpectralError> {
    if den.norm() < T::lit(DENOMINATOR_FLOOR) {
        return Err(SpectralError::DenominatorNearZero {
            what,
            modulus: den.norm().to_f64_lossy(),
        });
    }
    Ok(-num / den)
}

fn pair<T: Real>(
    k: T,
    epsilon: i8,
    p: RuleParams<T>,
) -> Result<(PlaneWave<T>, PlaneWave<T>), SpectralError> {
    let kk = Cx::new(k, T::zero());
    Ok((
        planewave_spinor(kk, epsilon, p)?,
        planewave_spinor(-kk, epsilon, p)?,
    ))
}

/// Reflection amplitude of a left Type I boundary.
///
/// `A = -[(e^{iv} - sin rho) a_- - i cos rho e^{-ik} a_+] / [(e^{iv} - sin rho) b_- - i cos rho e^{ik} b_+]`
/// with `a`, `b` the spinors of `k` and `-k`.
pub fn reflection_type1<T: Real>(
    k: T,
    epsilon: i8,
    p: RuleParams<T>,
    upsilon: T,
) -> Result<Cx<T>, SpectralError> {
    let (a, b) = pair(k, epsilon, p)?;
    let g = phase(upsilon) - re(p.rho.sin());
    let icr = cx(T::zero(), p.rho.cos());
    let z = phase(k);
    let num = g * a.spinor[0] - icr * z.inv() * a.spinor[1];
    let den = g * b.spinor[0] - icr * z * b.spinor[1];
    checked_ratio(num, den, "typeI reflection")
}

/// Reflection amplitude forced by a right Type I boundary at site `n - 1`.
///
/// `A = -e^{2ik(N-1)} [(e^{iv} - sin rho) a_+ - i cos rho e^{ik} a_-] / [(e^{iv} - sin rho) b_+ - i cos rho e^{-ik} b_-]`
pub fn reflection_type1_right<T: Real>(
    k: T,
    epsilon: i8,
    p: RuleParams<T>,
    upsilon: T,
    n: usize,
) -> Result<Cx<T>, SpectralError> {
    let (a, b) = pair(k, epsilon, p)?;
    let g = phase(upsilon) - re(p.rho.sin());
    let icr = cx(T::zero(), p.rho.cos());
    let z = phase(k);
    let num = g * a.spinor[1] - icr * z * a.spinor[0];
    let den = g * b.spinor[1] - icr * z.inv() * b.spinor[0];
    let shift = phase(T::lit(2.0) * k * T::of_usize(n.saturating_sub(1)));
    Ok(checked_ratio(num, den, "right typeI reflection")? * shift)
}

/// Reflection amplitude of a left Type II boundary with phase `zeta`.
///
/// `A = -[(e^{iz} sin rho - lambda) a_+ + i e^{iz} cos rho e^{ik} a_-] / [(e^{iz} sin rho - lambda) b_+ + i e^{iz} cos rho e^{-ik} b_-]`
pub fn reflection_type2<T: Real>(
    k: T,
    epsilon: i8,
    p: RuleParams<T>,
    zeta: T,
) -> Result<Cx<T>, SpectralError> {
    let (a, b) = pair(k, epsilon, p)?;
    let ez = phase(zeta);
    let g = ez * p.rho.sin() - a.lambda;
    let h = ez * cx(T::zero(), p.rho.cos());
    let z = phase(k);
    let num = g * a.spinor[1] + h * z * a.spinor[0];
    let den = g * b.spinor[1] + h * z.inv() * b.spinor[0];
    checked_ratio(num, den, "typeII reflection")
}

/// A left-boundary eigenfunction on a short probe lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryEigenfunction<T> {
    pub omega: T,
    pub lambda: Cx<T>,
    /// Coefficient of the reflected `-k` wave.
    pub amplitude: Cx<T>,
    /// `psi_-(0)`; differs from the plane-wave value only for Type III.
    pub psi_minus_0: Cx<T>,
    /// Unit-norm eigenfunction on sites `0..PROBE_SITES`.
    pub state: State<T>,
    /// `max |(U psi - lambda psi)(x)|` over rows `0..PROBE_SITES - 1`.
    pub residual: T,
}

fn superpose<T: Real>(a: &PlaneWave<T>, b: &PlaneWave<T>, amp: Cx<T>, sites: usize) -> State<T> {
    State::from_amplitudes(
        (0..sites)
            .map(|x| {
                let ea = a.z.powu(x as u32);
                let eb = b.z.powu(x as u32) * amp;
                [
                    ea * a.spinor[0] + eb * b.spinor[0],
                    ea * a.spinor[1] + eb * b.spinor[1],
                ]
            })
            .collect(),
    )
}

/// Residual of `psi` against the operator with `left` at site 0, skipping the last
/// row (its right neighbour lies outside the ansatz).
fn probe_residual<T: Real>(
    p: RuleParams<T>,
    left: Boundary<T>,
    state: &State<T>,
    lambda: Cx<T>,
) -> Result<T, SpectralError> {
    let n = state.size();
    let cfg = LatticeConfig::homogeneous(
        n,
        p,
        Boundaries::Open {
            left,
            right: Boundary::TypeI { upsilon: T::zero() },
        },
    )
    .map_err(SpectralError::Config)?;
    let op = assemble_operator(&cfg);
    let psi = state.amplitudes();
    let mut worst = T::zero();
    for x in 0..n - 1 {
        let out = op.apply_row(psi, x);
        for c in 0..2 {
            worst = worst.max((out[c] - lambda * psi[x][c]).norm());
        }
    }
    Ok(worst)
}

fn finish<T: Real>(
    p: RuleParams<T>,
    left: Boundary<T>,
    a: &PlaneWave<T>,
    amplitude: Cx<T>,
    state: State<T>,
) -> Result<BoundaryEigenfunction<T>, SpectralError> {
    let psi_minus_0 = state.amplitudes()[0][0];
    let state = state.normalized();
    let residual = probe_residual(p, left, &state, a.lambda)?;
    Ok(BoundaryEigenfunction {
        omega: a.omega,
        lambda: a.lambda,
        amplitude,
        psi_minus_0,
        state,
        residual,
    })
}

pub fn eigenfunction_type1<T: Real>(
    k: T,
    epsilon: i8,
    p: RuleParams<T>,
    upsilon: T,
) -> Result<BoundaryEigenfunction<T>, SpectralError> {
    let amp = reflection_type1(k, epsilon, p, upsilon)?;
    let (a, b) = pair(k, epsilon, p)?;
    let state = superpose(&a, &b, amp, PROBE_SITES);
    finish(p, Boundary::TypeI { upsilon }, &a, amp, state)
}

/// Type II eigenfunction: plane waves for `x >= 1`, `psi_+(0)` continued from them
/// and the corner amplitude `psi_-(0)` set to zero.
pub fn eigenfunction_type2<T: Real>(
    k: T,
    epsilon: i8,
    p: RuleParams<T>,
    zeta: T,
) -> Result<BoundaryEigenfunction<T>, SpectralError> {
    let amp = reflection_type2(k, epsilon, p, zeta)?;
    let (a, b) = pair(k, epsilon, p)?;
    let mut state = superpose(&a, &b, amp, PROBE_SITES);
    state.amplitudes_mut()[0][0] = Cx::new(T::zero(), T::zero());
    finish(p, Boundary::TypeII { zeta }, &a, amp, state)
}

/// Type III eigenfunction: solves the two boundary-row equations for the reflection
/// amplitude and the free corner amplitude `psi_-(0)`.
pub fn eigenfunction_type3<T: Real>(
    k: T,
    epsilon: i8,
    p: RuleParams<T>,
    theta_prime: T,
    upsilon: T,
    zeta: T,
) -> Result<BoundaryEigenfunction<T>, SpectralError> {
    let (a, b) = pair(k, epsilon, p)?;
    let row = type3_boundary_row(p, theta_prime, upsilon, zeta);
    let lam = a.lambda;
    let m = |r: usize, c: usize| row.zero.get(r, c) - if r == c { lam } else { re(T::zero()) };
    let z = a.z;
    let pa = row.plus.mul_vec([a.spinor[0] * z, a.spinor[1] * z]);
    let pb = row.plus.mul_vec([b.spinor[0] / z, b.spinor[1] / z]);
    // unknowns (u, A): u m[:,0] + A (m[:,1] b_+ + plus b / z) = -(m[:,1] a_+ + plus a z)
    let sys = [
        [m(0, 0), m(0, 1) * b.spinor[1] + pb[0]],
        [m(1, 0), m(1, 1) * b.spinor[1] + pb[1]],
    ];
    let rhs = [
        -(m(0, 1) * a.spinor[1] + pa[0]),
        -(m(1, 1) * a.spinor[1] + pa[1]),
    ];
    let cond = condition_number(&sys);
    if !(cond <= T::lit(CONDITION_CAP)) {
        return Err(SpectralError::SingularSystem {
            condition: cond.to_f64_lossy(),
        });
    }
    let det = sys[0][0] * sys[1][1] - sys[0][1] * sys[1][0];
    let u = (rhs[0] * sys[1][1] - sys[0][1] * rhs[1]) / det;
    let amp = (sys[0][0] * rhs[1] - sys[1][0] * rhs[0]) / det;
    let mut state = superpose(&a, &b, amp, PROBE_SITES);
    state.amplitudes_mut()[0][0] = u;
    finish(
        p,
        Boundary::TypeIII {
            theta_prime,
            upsilon,
            zeta,
        },
        &a,
        amp,
        state,
    )
}

/// Ratio of singular values of a 2x2 complex matrix.
fn condition_number<T: Real>(m: &[[Cx<T>; 2]; 2]) -> T {
    let fro2 = m
        .iter()
        .flatten()
        .fold(T::zero(), |acc, z| acc + z.norm_sqr());
    let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).norm();
    // s1^2 + s2^2 = fro2, s1 s2 = det
    let disc = (fro2 * fro2 - T::lit(4.0) * det * det)
        .max(T::zero())
        .sqrt();
    let s1 = ((fro2 + disc) * T::lit(0.5)).sqrt();
    let s2 = if s1 > T::zero() { det / s1 } else { T::zero() };
    if s2 > T::zero() {
        s1 / s2
    } else {
        T::infinity()
    }
}
