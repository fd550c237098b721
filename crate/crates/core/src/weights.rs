//! Closed-form 2x2 weight blocks: bulk rule, boundary rows and junction blocks.
//!
//! Index 0 of every block is the left-mover component (velocity -1), index 1 the
//! right-mover component (velocity +1). A block row `(minus, zero, plus)` acts on
//! the amplitudes at `x - 1`, `x` and `x + 1` respectively.

use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::{im, phase, re, Cx, Real};

/// Angle pair parameterizing the homogeneous rule: advection coupling `rho` and
/// mass angle `theta`, both in radians.
#[derive(Clone, Copy, Debug, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct RuleParams<T> {
    pub rho: T,
    pub theta: T,
}

impl<T: Real> RuleParams<T> {
    pub fn new(rho: T, theta: T) -> Self {
        Self { rho, theta }
    }

    pub fn is_finite(&self) -> bool {
        self.rho.is_finite() && self.theta.is_finite()
    }
}

/// A 2x2 complex matrix, stored row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightBlock<T>(pub [[Cx<T>; 2]; 2]);

impl<T: Real> WeightBlock<T> {
    pub fn new(a: Cx<T>, b: Cx<T>, c: Cx<T>, d: Cx<T>) -> Self {
        Self([[a, b], [c, d]])
    }

    pub fn zero() -> Self {
        let z = Cx::new(T::zero(), T::zero());
        Self([[z, z], [z, z]])
    }

    pub fn identity() -> Self {
        let z = Cx::new(T::zero(), T::zero());
        let o = Cx::new(T::one(), T::zero());
        Self([[o, z], [z, o]])
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Cx<T> {
        self.0[row][col]
    }

    pub fn scale(&self, s: Cx<T>) -> Self {
        let m = &self.0;
        Self([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    pub fn scale_re(&self, s: T) -> Self {
        self.scale(re(s))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Self([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    #[inline]
    pub fn mul_vec(&self, v: [Cx<T>; 2]) -> [Cx<T>; 2] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    /// Column `col` as a 2-vector.
    pub fn column(&self, col: usize) -> [Cx<T>; 2] {
        [self.0[0][col], self.0[1][col]]
    }

    /// `P B P` with `P = [[0,1],[1,0]]`: exchanges the roles of the two movers.
    pub fn parity(&self) -> Self {
        let m = &self.0;
        Self([[m[1][1], m[1][0]], [m[0][1], m[0][0]]])
    }

    pub fn max_abs(&self) -> T {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(T::zero(), T::max)
    }

    pub fn is_zero(&self) -> bool {
        self.0
            .iter()
            .flatten()
            .all(|z| z.re == T::zero() && z.im == T::zero())
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        (*self - *other).max_abs()
    }

    pub fn is_finite(&self) -> bool {
        self.0
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl<T: Real> Add for WeightBlock<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let (a, b) = (&self.0, &o.0);
        Self([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }
}

impl<T: Real> Sub for WeightBlock<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<T: Real> Neg for WeightBlock<T> {
    type Output = Self;
    fn neg(self) -> Self {
        let a = &self.0;
        Self([[-a[0][0], -a[0][1]], [-a[1][0], -a[1][1]]])
    }
}

impl<T: Real> Mul for WeightBlock<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (a, b) = (&self.0, &o.0);
        Self([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }
}

/// The three blocks acting on one site's row of the global operator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockRow<T> {
    pub minus: WeightBlock<T>,
    pub zero: WeightBlock<T>,
    pub plus: WeightBlock<T>,
}

impl<T: Real> BlockRow<T> {
    pub fn parity(&self) -> Self {
        // mirroring swaps which neighbour each advection block reaches
        Self {
            minus: self.plus.parity(),
            zero: self.zero.parity(),
            plus: self.minus.parity(),
        }
    }
}

/// Blocks a boundary overrides, written for a left boundary at site 0.
///
/// `zero` and `plus` replace row 0; `inner` replaces the `minus` block of row 1,
/// i.e. the amplitude for a right-mover at site 0 to advect to site 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryRow<T> {
    pub zero: WeightBlock<T>,
    pub plus: WeightBlock<T>,
    pub inner: WeightBlock<T>,
}

/// Advection block toward `x - 1` neighbour: `cos(rho) [[0, i sin(theta)], [0, cos(theta)]]`.
pub fn w_minus<T: Real>(p: RuleParams<T>) -> WeightBlock<T> {
    let (st, ct) = p.theta.sin_cos();
    let z = re(T::zero());
    WeightBlock::new(z, im(st), z, re(ct)).scale_re(p.rho.cos())
}

pub fn w_plus<T: Real>(p: RuleParams<T>) -> WeightBlock<T> {
    let (st, ct) = p.theta.sin_cos();
    let z = re(T::zero());
    WeightBlock::new(re(ct), z, im(st), z).scale_re(p.rho.cos())
}

pub fn w_zero<T: Real>(p: RuleParams<T>) -> WeightBlock<T> {
    let (st, ct) = p.theta.sin_cos();
    WeightBlock::new(re(st), im(-ct), im(-ct), re(st)).scale_re(p.rho.sin())
}

/// The parity-invariant bulk rule `(w_{-1}, w_0, w_{+1})`.
pub fn bulk_weights<T: Real>(p: RuleParams<T>) -> BlockRow<T> {
    BlockRow {
        minus: w_minus(p),
        zero: w_zero(p),
        plus: w_plus(p),
    }
}

/// On-site weight of a Type I (coupling) boundary with phase `upsilon`.
///
/// Second column coincides with `w_0`; the first column carries `e^{i upsilon}`
/// in place of `sin(rho)`.
pub fn type1_boundary_w0<T: Real>(p: RuleParams<T>, upsilon: T) -> WeightBlock<T> {
    let (st, ct) = p.theta.sin_cos();
    let sr = p.rho.sin();
    let e = phase(upsilon);
    WeightBlock::new(e * st, im(-ct * sr), e * im(-ct), re(st * sr))
}

/// On-site weight at a Type I junction: left-mover column scaled by `sin(rho_left)`,
/// right-mover column by `sin(rho_right)`, common mass angle `theta`.
pub fn type1_junction_w0<T: Real>(rho_left: T, theta: T, rho_right: T) -> WeightBlock<T> {
    let (st, ct) = theta.sin_cos();
    let (sl, sr) = (rho_left.sin(), rho_right.sin());
    WeightBlock::new(re(st * sl), im(-ct * sr), im(-ct * sl), re(st * sr))
}

pub fn type1_boundary_row<T: Real>(p: RuleParams<T>, upsilon: T) -> BoundaryRow<T> {
    BoundaryRow {
        zero: type1_boundary_w0(p, upsilon),
        plus: w_plus(p),
        inner: w_minus(p),
    }
}

/// Left Type II (mass) boundary row `(e^{i zeta} w_0', e^{i zeta} w_{+1}')` with
/// `w' = w(rho, pi/2)`, plus the untouched `w_{-1}` of the next row.
pub fn type2_boundary_row<T: Real>(p: RuleParams<T>, zeta: T) -> BoundaryRow<T> {
    let e = phase(zeta);
    // written out so cos(pi/2) contributes an exact zero
    let sr = p.rho.sin();
    let cr = p.rho.cos();
    let z = re(T::zero());
    BoundaryRow {
        zero: WeightBlock::identity().scale(e * re(sr)),
        plus: WeightBlock::new(z, z, im(cr), z).scale(e),
        inner: w_minus(p),
    }
}

/// Left Type III boundary row with boundary mass angle `theta_prime` and phases
/// `upsilon` (corner column) and `zeta` (inward column).
pub fn type3_boundary_row<T: Real>(
    p: RuleParams<T>,
    theta_prime: T,
    upsilon: T,
    zeta: T,
) -> BoundaryRow<T> {
    let (stp, ctp) = theta_prime.sin_cos();
    let sr = p.rho.sin();
    let eu = phase(upsilon);
    let ez = phase(zeta);
    let zero = WeightBlock::new(
        eu * re(stp),
        ez * im(-ctp * sr),
        eu * im(-ctp),
        ez * re(stp * sr),
    );
    BoundaryRow {
        zero,
        plus: w_plus(RuleParams::new(p.rho, theta_prime)).scale(ez),
        inner: w_minus(p),
    }
}

/// Blocks at a combined (coupling and mass) junction between `left = (rho', theta')`
/// and `right = (rho, theta)`.
///
/// Returns `(hat_minus, hat_zero, hat_plus)`: `hat_zero` and `hat_plus` sit in the
/// last row of the left segment, `hat_minus` in the first row of the right one.
pub fn combined_junction_blocks<T: Real>(
    left: RuleParams<T>,
    right: RuleParams<T>,
) -> (WeightBlock<T>, WeightBlock<T>, WeightBlock<T>) {
    (
        w_minus(right),
        type1_junction_w0(left.rho, left.theta, right.rho),
        w_plus(RuleParams::new(right.rho, left.theta)),
    )
}

/// `P B P`.
pub fn parity_transform<T: Real>(block: &WeightBlock<T>) -> WeightBlock<T> {
    block.parity()
}

/// Converts a left-boundary recipe into the right-boundary one: every block is
/// conjugated by `P`. The assembler places `zero` at `(N-1, N-1)`, `plus` at
/// `(N-1, N-2)` and `inner` at `(N-2, N-1)`.
pub fn parity_reflect_boundary<T: Real>(row: &BoundaryRow<T>) -> BoundaryRow<T> {
    BoundaryRow {
        zero: row.zero.parity(),
        plus: row.plus.parity(),
        inner: row.inner.parity(),
    }
}
