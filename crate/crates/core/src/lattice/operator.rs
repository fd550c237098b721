//! Assembled block-tridiagonal evolution operator.

use thiserror::Error;

use super::config::{Boundaries, Boundary, JunctionKind, LatticeConfig, Side};
use crate::dynamics::State;
use crate::linalg::DenseMatrix;
use crate::scalar::{phase, Cx, Real};
use crate::weights::{
    bulk_weights, combined_junction_blocks, parity_reflect_boundary, type1_boundary_row,
    type1_junction_w0, type2_boundary_row, type3_boundary_row, w_minus, w_plus, BlockRow,
    BoundaryRow, RuleParams, WeightBlock,
};

/// Default limit on `N` for dense materialization.
pub const DEFAULT_DENSE_CAP: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperatorError {
    #[error("state has {got} sites, operator has {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("lattice of {size} sites exceeds the dense cap of {cap}")]
    CapExceeded { size: usize, cap: usize },
}

/// Velocity component of a basis state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mover {
    Left = 0,
    Right = 1,
}

/// A decoupled Type II corner state excluded from the physical subspace.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Corner<T> {
    pub side: Side,
    pub site: usize,
    pub mover: Mover,
    /// Eigenvalue the corner state is mapped to, `e^{i zeta} sin(rho)`.
    pub expected: Cx<T>,
}

impl<T> Corner<T> {
    /// Index in the flattened `2N` basis.
    pub fn index(&self) -> usize {
        2 * self.site + self.mover as usize
    }
}

/// Per-site block rows of `U`, plus the corner mask.
#[derive(Clone, Debug, PartialEq)]
pub struct GlobalOperator<T> {
    rows: Vec<BlockRow<T>>,
    periodic: bool,
    corners: Vec<Corner<T>>,
    site_params: Vec<RuleParams<T>>,
}

fn boundary_row<T: Real>(b: Boundary<T>, p: RuleParams<T>) -> BoundaryRow<T> {
    match b {
        Boundary::TypeI { upsilon } => type1_boundary_row(p, upsilon),
        Boundary::TypeII { zeta } => type2_boundary_row(p, zeta),
        Boundary::TypeIII {
            theta_prime,
            upsilon,
            zeta,
        } => type3_boundary_row(p, theta_prime, upsilon, zeta),
    }
}

/// Builds `U` from a validated configuration.
pub fn assemble_operator<T: Real>(cfg: &LatticeConfig<T>) -> GlobalOperator<T> {
    let n = cfg.size();
    let site_params: Vec<_> = (0..n).map(|x| cfg.params_at(x)).collect();
    let mut rows: Vec<BlockRow<T>> = site_params.iter().map(|&p| bulk_weights(p)).collect();
    let segs = cfg.segments();

    for j in cfg.junctions() {
        // the two segments the junction joins (wrapping at a periodic seam)
        let (li, ri) = match j.kind {
            JunctionKind::TypeI => {
                let li = segs.iter().position(|s| s.to == j.site).unwrap_or_else(|| {
                    let r = segs.iter().position(|s| s.from == j.site).unwrap();
                    (r + segs.len() - 1) % segs.len()
                });
                (li, (li + 1) % segs.len())
            }
            _ => {
                let li = segs.iter().position(|s| s.to == j.site).unwrap();
                (li, (li + 1) % segs.len())
            }
        };
        let (l, r) = (segs[li].params, segs[ri].params);
        let site = j.site;
        match j.kind {
            JunctionKind::TypeI => {
                rows[site] = BlockRow {
                    minus: w_minus(l),
                    zero: type1_junction_w0(l.rho, l.theta, r.rho),
                    plus: w_plus(r),
                };
            }
            // hatted blocks coincide with the bulk ones on either side
            JunctionKind::TypeII => {}
            JunctionKind::Combined => {
                let (_, hat_zero, hat_plus) = combined_junction_blocks(l, r);
                rows[site].zero = hat_zero;
                rows[site].plus = hat_plus;
            }
        }
    }

    let mut corners = Vec::new();
    if let Boundaries::Open { left, right } = *cfg.boundaries() {
        let lb = boundary_row(left, site_params[0]);
        rows[0].minus = WeightBlock::zero();
        rows[0].zero = lb.zero;
        rows[0].plus = lb.plus;
        rows[1].minus = lb.inner;

        let rb = parity_reflect_boundary(&boundary_row(right, site_params[n - 1]));
        rows[n - 1].plus = WeightBlock::zero();
        rows[n - 1].zero = rb.zero;
        rows[n - 1].minus = rb.plus;
        rows[n - 2].plus = rb.inner;

        for (side, b, site, mover, p) in [
            (Side::Left, left, 0, Mover::Left, site_params[0]),
            (Side::Right, right, n - 1, Mover::Right, site_params[n - 1]),
        ] {
            if let Boundary::TypeII { zeta } = b {
                corners.push(Corner {
                    side,
                    site,
                    mover,
                    expected: phase(zeta) * p.rho.sin(),
                });
            }
        }
    }

    GlobalOperator {
        rows,
        periodic: cfg.is_periodic(),
        corners,
        site_params,
    }
}

/// Entrywise residuals of `U^dagger U - I` and `U U^dagger - I`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitarityReport<T> {
    pub full_left: T,
    pub full_right: T,
    /// Same residuals restricted to the complement of the corner mask.
    pub physical_left: T,
    pub physical_right: T,
    /// Largest amplitude leaking between a corner state and the rest of the basis.
    pub corner_leakage: T,
    pub corners: Vec<CornerReport<T>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CornerReport<T> {
    pub corner: Corner<T>,
    /// `<c| U |c>`.
    pub amplitude: Cx<T>,
}

impl<T: Real> UnitarityReport<T> {
    pub fn full_residual(&self) -> T {
        self.full_left.max(self.full_right)
    }

    pub fn physical_residual(&self) -> T {
        self.physical_left.max(self.physical_right)
    }

    /// Unitary on the physical subspace, which is invariant, within `tol`.
    pub fn physical_ok(&self, tol: T) -> bool {
        self.physical_residual() <= tol && self.corner_leakage <= tol
    }
}

impl<T: Real> GlobalOperator<T> {
    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[BlockRow<T>] {
        &self.rows
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    pub fn corners(&self) -> &[Corner<T>] {
        &self.corners
    }

    /// Bulk parameters of the segment containing `site`.
    pub fn params_at(&self, site: usize) -> RuleParams<T> {
        self.site_params[site]
    }

    pub fn site_params(&self) -> &[RuleParams<T>] {
        &self.site_params
    }

    /// Flattened basis indices not covered by the corner mask.
    pub fn physical_indices(&self) -> Vec<usize> {
        (0..2 * self.size())
            .filter(|i| self.corners.iter().all(|c| c.index() != *i))
            .collect()
    }

    /// Neighbour of `x` at offset -1 / +1, or `None` past an open edge.
    fn neighbour(&self, x: usize, offset: isize) -> Option<usize> {
        let n = self.size() as isize;
        let y = x as isize + offset;
        if (0..n).contains(&y) {
            Some(y as usize)
        } else if self.periodic {
            Some(y.rem_euclid(n) as usize)
        } else {
            None
        }
    }

    /// Output amplitudes at site `x` for the input `psi`.
    pub fn apply_row(&self, psi: &[[Cx<T>; 2]], x: usize) -> [Cx<T>; 2] {
        let row = &self.rows[x];
        let mut out = row.zero.mul_vec(psi[x]);
        for (block, offset) in [(&row.minus, -1), (&row.plus, 1)] {
            if let Some(y) = self.neighbour(x, offset) {
                let v = block.mul_vec(psi[y]);
                out[0] += v[0];
                out[1] += v[1];
            }
        }
        out
    }

    /// One time step `psi(t+1) = U psi(t)`.
    pub fn apply(&self, state: &State<T>) -> Result<State<T>, OperatorError> {
        let n = self.size();
        if state.size() != n {
            return Err(OperatorError::LengthMismatch {
                expected: n,
                got: state.size(),
            });
        }
        let psi = state.amplitudes();
        Ok(State::from_amplitudes(
            (0..n).map(|x| self.apply_row(psi, x)).collect(),
        ))
    }

    /// Dense `2N x 2N` matrix, refusing lattices larger than `cap` sites.
    pub fn dense_capped(&self, cap: usize) -> Result<DenseMatrix<T>, OperatorError> {
        let n = self.size();
        if n > cap {
            return Err(OperatorError::CapExceeded { size: n, cap });
        }
        let mut m = DenseMatrix::zeros(2 * n);
        for x in 0..n {
            let row = &self.rows[x];
            let mut place = |y: usize, b: &WeightBlock<T>| {
                for r in 0..2 {
                    for c in 0..2 {
                        // += so the two wrap blocks of a periodic N = 2 lattice add up
                        m[(2 * x + r, 2 * y + c)] += b.get(r, c);
                    }
                }
            };
            place(x, &row.zero);
            if let Some(y) = self.neighbour(x, -1) {
                place(y, &row.minus);
            }
            if let Some(y) = self.neighbour(x, 1) {
                place(y, &row.plus);
            }
        }
        Ok(m)
    }

    pub fn dense(&self) -> Result<DenseMatrix<T>, OperatorError> {
        self.dense_capped(DEFAULT_DENSE_CAP)
    }

    pub fn unitarity_report(&self) -> Result<UnitarityReport<T>, OperatorError> {
        let u = self.dense()?;
        let ud = u.adjoint();
        let full_left = (&ud * &u).max_identity_deviation();
        let full_right = (&u * &ud).max_identity_deviation();

        let keep = self.physical_indices();
        let up = u.restrict(&keep);
        let upd = up.adjoint();
        let physical_left = (&upd * &up).max_identity_deviation();
        let physical_right = (&up * &upd).max_identity_deviation();

        let mut corner_leakage = T::zero();
        let mut corners = Vec::new();
        for c in &self.corners {
            let i = c.index();
            for j in 0..u.dim() {
                if j != i {
                    corner_leakage = corner_leakage.max(u[(i, j)].norm()).max(u[(j, i)].norm());
                }
            }
            corners.push(CornerReport {
                corner: *c,
                amplitude: u[(i, i)],
            });
        }
        Ok(UnitarityReport {
            full_left,
            full_right,
            physical_left,
            physical_right,
            corner_leakage,
            corners,
        })
    }

    /// Conjugation by the site reversal combined with `P` on every site.
    pub fn mirrored(&self) -> Self {
        let n = self.size();
        let rows = self.rows.iter().rev().map(|r| r.parity()).collect();
        let corners = self
            .corners
            .iter()
            .map(|c| Corner {
                side: match c.side {
                    Side::Left => Side::Right,
                    Side::Right => Side::Left,
                },
                site: n - 1 - c.site,
                mover: match c.mover {
                    Mover::Left => Mover::Right,
                    Mover::Right => Mover::Left,
                },
                expected: c.expected,
            })
            .collect();
        Self {
            rows,
            periodic: self.periodic,
            corners,
            site_params: self.site_params.iter().rev().copied().collect(),
        }
    }

    /// Largest entrywise difference of all blocks, for operators of equal size.
    pub fn max_block_diff(&self, other: &Self) -> T {
        assert_eq!(self.size(), other.size());
        self.rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| {
                a.minus
                    .max_abs_diff(&b.minus)
                    .max(a.zero.max_abs_diff(&b.zero))
                    .max(a.plus.max_abs_diff(&b.plus))
            })
            .fold(T::zero(), T::max)
    }
}
