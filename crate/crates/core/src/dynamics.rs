//! One-particle states, binomial wave packets and time evolution.

use std::io::{self, Write};

use thiserror::Error;

use crate::lattice::{GlobalOperator, OperatorError};
use crate::scalar::{phase, Cx, Real};
use crate::spectral::{planewave_spinor, SpectralError};
use crate::weights::RuleParams;

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error("packet {center} +/- {half} does not fit a lattice of {size} sites")]
    OutOfRange {
        center: usize,
        half: usize,
        size: usize,
    },
    #[error("packet width {0} must be even")]
    OddWidth(usize),
    #[error("bad site range {from}..={to} on {size} sites")]
    BadRange { from: usize, to: usize, size: usize },
    #[error("packet spinor: {0}")]
    Spinor(#[from] SpectralError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
}

/// Amplitudes `(psi_-(x), psi_+(x))` for every site.
#[derive(Clone, Debug, PartialEq)]
pub struct State<T> {
    amps: Vec<[Cx<T>; 2]>,
}

impl<T: Real> State<T> {
    pub fn zeros(n: usize) -> Self {
        let z = Cx::new(T::zero(), T::zero());
        Self {
            amps: vec![[z, z]; n],
        }
    }

    pub fn from_amplitudes(amps: Vec<[Cx<T>; 2]>) -> Self {
        Self { amps }
    }

    /// From the flattened `2N` vector (left-mover first at each site).
    pub fn from_flat(v: &[Cx<T>]) -> Self {
        assert!(v.len().is_multiple_of(2), "flat state has odd length");
        Self {
            amps: v.chunks(2).map(|c| [c[0], c[1]]).collect(),
        }
    }

    pub fn to_flat(&self) -> Vec<Cx<T>> {
        self.amps.iter().flat_map(|a| a.iter().copied()).collect()
    }

    /// Basis state with unit amplitude at flattened index `i`.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut s = Self::zeros(n);
        s.amps[i / 2][i % 2] = Cx::new(T::one(), T::zero());
        s
    }

    pub fn size(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[[Cx<T>; 2]] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [[Cx<T>; 2]] {
        &mut self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps
            .iter()
            .fold(T::zero(), |acc, a| acc + a[0].norm_sqr() + a[1].norm_sqr())
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(&self) -> Self {
        let s = self.norm().recip();
        Self {
            amps: self.amps.iter().map(|a| [a[0] * s, a[1] * s]).collect(),
        }
    }

    /// `(|psi_-|^2, |psi_+|^2)` per site.
    pub fn site_probabilities(&self) -> Vec<[T; 2]> {
        self.amps
            .iter()
            .map(|a| [a[0].norm_sqr(), a[1].norm_sqr()])
            .collect()
    }

    /// Total probability on sites `from..=to`.
    pub fn region_probability(&self, from: usize, to: usize) -> Result<T, DynamicsError> {
        if from > to || to >= self.size() {
            return Err(DynamicsError::BadRange {
                from,
                to,
                size: self.size(),
            });
        }
        Ok(self.amps[from..=to]
            .iter()
            .fold(T::zero(), |acc, a| acc + a[0].norm_sqr() + a[1].norm_sqr()))
    }

    /// Probability-weighted mean site.
    pub fn centroid(&self) -> T {
        let mut num = T::zero();
        let mut den = T::zero();
        for (x, a) in self.amps.iter().enumerate() {
            let p = a[0].norm_sqr() + a[1].norm_sqr();
            num += p * T::of_usize(x);
            den += p;
        }
        num / den
    }

    /// Largest amplitude difference from `other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.amps
            .iter()
            .zip(&other.amps)
            .flat_map(|(a, b)| [(a[0] - b[0]).norm(), (a[1] - b[1]).norm()])
            .fold(T::zero(), T::max)
    }

    /// Parity image: site `x` to `N - 1 - x` with the movers swapped.
    pub fn mirrored(&self) -> Self {
        Self {
            amps: self.amps.iter().rev().map(|a| [a[1], a[0]]).collect(),
        }
    }
}

/// Binomial packet parameters: carrier wavenumber, centre, even width, branch.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PacketSpec<T> {
    pub k0: T,
    pub center: usize,
    pub width: usize,
    pub epsilon: i8,
}

fn ln_binomial(n: usize, k: usize) -> f64 {
    let lf = |m: usize| (1..=m).map(|i| (i as f64).ln()).sum::<f64>();
    lf(n) - lf(k) - lf(n - k)
}

/// `sqrt(C(w, x - x0 + w/2)) e^{i k0 x} v(k0, eps)` on `|x - x0| <= w/2`, normalized.
///
/// `v` is the unit plane-wave spinor of `params`.
pub fn binomial_packet<T: Real>(
    spec: &PacketSpec<T>,
    params: RuleParams<T>,
    n: usize,
) -> Result<State<T>, DynamicsError> {
    if !spec.width.is_multiple_of(2) {
        return Err(DynamicsError::OddWidth(spec.width));
    }
    let half = spec.width / 2;
    if spec.center < half || spec.center + half >= n {
        return Err(DynamicsError::OutOfRange {
            center: spec.center,
            half,
            size: n,
        });
    }
    let v = planewave_spinor(Cx::new(spec.k0, T::zero()), spec.epsilon, params)?.unit;
    let mut s = State::zeros(n);
    for x in spec.center - half..=spec.center + half {
        // log space keeps large widths finite
        let env = T::lit((0.5 * ln_binomial(spec.width, x + half - spec.center)).exp());
        let carrier = phase(spec.k0 * T::of_usize(x)) * env;
        s.amps[x] = [v[0] * carrier, v[1] * carrier];
    }
    Ok(s.normalized())
}

/// Packet for a given operator: spinor from the segment containing the centre, masked
/// corner amplitudes zeroed before normalizing.
pub fn binomial_packet_for<T: Real>(
    spec: &PacketSpec<T>,
    op: &GlobalOperator<T>,
) -> Result<State<T>, DynamicsError> {
    let mut s = binomial_packet(
        spec,
        op.params_at(spec.center.min(op.size() - 1)),
        op.size(),
    )?;
    let z = Cx::new(T::zero(), T::zero());
    for c in op.corners() {
        s.amps[c.site][c.mover as usize] = z;
    }
    Ok(s.normalized())
}

/// One recorded time slice.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame<T> {
    pub t: usize,
    pub probabilities: Vec<[T; 2]>,
    pub norm: T,
    /// Present only when amplitudes were requested.
    pub state: Option<State<T>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory<T> {
    pub frames: Vec<Frame<T>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvolveOptions {
    pub steps: usize,
    /// Record every `stride` steps; the final step is always recorded.
    pub stride: usize,
    pub keep_amplitudes: bool,
}

/// Applies `op` `steps` times, recording at `t = 0, stride, 2 stride, ..., steps`.
pub fn evolve<T: Real>(
    op: &GlobalOperator<T>,
    initial: &State<T>,
    opts: EvolveOptions,
) -> Result<Trajectory<T>, DynamicsError> {
    let stride = opts.stride.max(1);
    let record = |t: usize, s: &State<T>| Frame {
        t,
        probabilities: s.site_probabilities(),
        norm: s.norm(),
        state: opts.keep_amplitudes.then(|| s.clone()),
    };
    let mut state = initial.clone();
    if state.size() != op.size() {
        return Err(OperatorError::LengthMismatch {
            expected: op.size(),
            got: state.size(),
        }
        .into());
    }
    let mut frames = vec![record(0, &state)];
    for t in 1..=opts.steps {
        state = op.apply(&state)?;
        if t % stride == 0 || t == opts.steps {
            frames.push(record(t, &state));
        }
    }
    Ok(Trajectory { frames })
}

impl<T: Real> Trajectory<T> {
    /// CSV `t,x,p_minus,p_plus,p_total`, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "t,x,p_minus,p_plus,p_total")?;
        for f in &self.frames {
            for (x, p) in f.probabilities.iter().enumerate() {
                writeln!(
                    w,
                    "{},{},{:.16e},{:.16e},{:.16e}",
                    f.t,
                    x,
                    p[0],
                    p[1],
                    p[0] + p[1]
                )?;
            }
        }
        Ok(())
    }

    pub fn max_norm_drift(&self) -> T {
        let n0 = self.frames[0].norm;
        self.frames
            .iter()
            .map(|f| (f.norm - n0).abs())
            .fold(T::zero(), T::max)
    }
}
