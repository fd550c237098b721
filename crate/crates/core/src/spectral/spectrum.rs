//! Full numeric spectra of assembled operators and boundary-parameter sweeps.

use std::fmt;
use std::io::{self, Write};

use rayon::prelude::*;

use crate::lattice::{assemble_operator, Boundaries, Boundary, GlobalOperator, LatticeConfig};
use crate::scalar::{Cx, Real};

use super::eigen::eigen_decompose;
use super::planewave::band_range;
use super::roots::QuantizedMode;
use super::SpectralError;

/// Slack on band edges when classifying eigenfrequencies.
pub const BAND_TOLERANCE: f64 = 1e-9;
/// Corner weight above which an eigenvector counts as a corner state.
pub const CORNER_WEIGHT: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeClass {
    InBand,
    Trapped,
    Corner,
}

impl fmt::Display for ModeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModeClass::InBand => "in-band",
            ModeClass::Trapped => "trapped",
            ModeClass::Corner => "corner",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mode<T> {
    pub lambda: Cx<T>,
    /// `-arg(lambda)` in `(-pi, pi]`.
    pub omega: T,
    pub modulus: T,
    /// Unit-norm eigenvector in the flattened `2N` basis.
    pub vector: Vec<Cx<T>>,
    /// `||U v - lambda v||_inf`.
    pub residual: T,
    /// Squared weight of the vector on masked corner states.
    pub corner_weight: T,
    pub class: ModeClass,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralResult<T> {
    /// Sorted by `omega`.
    pub modes: Vec<Mode<T>>,
}

/// Whether `|omega|` lies in the band of any parameter pair, with slack `tol`.
pub fn in_band<T: Real>(omega: T, bands: &[(T, T)], tol: T) -> bool {
    let w = omega.abs();
    bands.iter().any(|&(lo, hi)| w >= lo - tol && w <= hi + tol)
}

fn bands_of<T: Real>(op: &GlobalOperator<T>) -> Vec<(T, T)> {
    let mut bands: Vec<(T, T)> = Vec::new();
    for p in op.site_params() {
        let b = band_range(*p);
        if !bands.contains(&b) {
            bands.push(b);
        }
    }
    bands
}

/// All `2N` eigenpairs of the dense operator, classified and sorted by frequency.
pub fn full_spectrum<T: Real>(op: &GlobalOperator<T>) -> Result<SpectralResult<T>, SpectralError> {
    let u = op.dense()?;
    let eig = eigen_decompose(&u)?;
    let bands = bands_of(op);
    let tol = T::lit(BAND_TOLERANCE);
    let corner_idx: Vec<usize> = op.corners().iter().map(|c| c.index()).collect();
    let mut modes: Vec<Mode<T>> = eig
        .values
        .into_iter()
        .zip(eig.vectors)
        .zip(eig.residuals)
        .map(|((lambda, vector), residual)| {
            let omega = -lambda.arg();
            let corner_weight = corner_idx
                .iter()
                .fold(T::zero(), |acc, &i| acc + vector[i].norm_sqr());
            let class = if corner_weight > T::lit(CORNER_WEIGHT) {
                ModeClass::Corner
            } else if in_band(omega, &bands, tol) {
                ModeClass::InBand
            } else {
                ModeClass::Trapped
            };
            Mode {
                lambda,
                omega,
                modulus: lambda.norm(),
                vector,
                residual,
                corner_weight,
                class,
            }
        })
        .collect();
    modes.sort_by(|a, b| {
        a.omega
            .partial_cmp(&b.omega)
            .unwrap()
            .then(a.modulus.partial_cmp(&b.modulus).unwrap())
            .then(a.lambda.re.partial_cmp(&b.lambda.re).unwrap())
    });
    Ok(SpectralResult { modes })
}

impl<T: Real> SpectralResult<T> {
    pub fn omegas(&self) -> Vec<T> {
        self.modes.iter().map(|m| m.omega).collect()
    }

    pub fn max_residual(&self) -> T {
        self.modes
            .iter()
            .map(|m| m.residual)
            .fold(T::zero(), T::max)
    }

    /// Modes with corner weight at most `tol`.
    pub fn relevant(&self, tol: T) -> impl Iterator<Item = &Mode<T>> {
        self.modes.iter().filter(move |m| m.corner_weight <= tol)
    }

    pub fn count(&self, class: ModeClass) -> usize {
        self.modes.iter().filter(|m| m.class == class).count()
    }

    /// Spectrum CSV rows; `param` fills the first column (empty when `None`).
    pub fn write_csv_rows<W: Write>(&self, param: Option<T>, w: &mut W) -> io::Result<()> {
        let label = param.map(|p| format!("{p:.16e}")).unwrap_or_default();
        for (i, m) in self.modes.iter().enumerate() {
            writeln!(
                w,
                "{},{},{:.16e},{:.16e},{:.16e},{:.16e},{}",
                label, i, m.lambda.re, m.lambda.im, m.omega, m.modulus, m.class
            )?;
        }
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{SPECTRUM_HEADER}")?;
        self.write_csv_rows(None, &mut w)
    }
}

pub const SPECTRUM_HEADER: &str = "param,index,re_lambda,im_lambda,omega,modulus,classification";

/// Boundary parameter varied in a sweep; applied to both boundaries at once.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepParam {
    Upsilon,
    Zeta,
    ThetaPrime,
}

impl SweepParam {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "upsilon" => Some(Self::Upsilon),
            "zeta" => Some(Self::Zeta),
            "theta_prime" => Some(Self::ThetaPrime),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Upsilon => "upsilon",
            Self::Zeta => "zeta",
            Self::ThetaPrime => "theta_prime",
        }
    }

    fn set<T: Real>(&self, b: Boundary<T>, v: T) -> Option<Boundary<T>> {
        Some(match (self, b) {
            (Self::Upsilon, Boundary::TypeI { .. }) => Boundary::TypeI { upsilon: v },
            (Self::Zeta, Boundary::TypeII { .. }) => Boundary::TypeII { zeta: v },
            (
                Self::Upsilon,
                Boundary::TypeIII {
                    theta_prime, zeta, ..
                },
            ) => Boundary::TypeIII {
                theta_prime,
                upsilon: v,
                zeta,
            },
            (
                Self::Zeta,
                Boundary::TypeIII {
                    theta_prime,
                    upsilon,
                    ..
                },
            ) => Boundary::TypeIII {
                theta_prime,
                upsilon,
                zeta: v,
            },
            (Self::ThetaPrime, Boundary::TypeIII { upsilon, zeta, .. }) => Boundary::TypeIII {
                theta_prime: v,
                upsilon,
                zeta,
            },
            _ => return None,
        })
    }

    /// `template` with this parameter set to `v` on both sides.
    pub fn apply<T: Real>(
        &self,
        template: &LatticeConfig<T>,
        v: T,
    ) -> Result<LatticeConfig<T>, SpectralError> {
        let Boundaries::Open { left, right } = *template.boundaries() else {
            return Err(SpectralError::ParamNotApplicable {
                param: self.name(),
                boundary: "periodic".into(),
            });
        };
        let set = |b: Boundary<T>| {
            self.set(b, v)
                .ok_or_else(|| SpectralError::ParamNotApplicable {
                    param: self.name(),
                    boundary: format!("{b:?}"),
                })
        };
        template
            .with_boundaries(Boundaries::Open {
                left: set(left)?,
                right: set(right)?,
            })
            .map_err(SpectralError::Config)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint<T> {
    pub value: T,
    pub spectrum: SpectralResult<T>,
}

/// Spectra across `grid`, evaluated in parallel and returned in grid order.
pub fn boundary_sweep<T: Real>(
    template: &LatticeConfig<T>,
    param: SweepParam,
    grid: &[T],
) -> Result<Vec<SweepPoint<T>>, SpectralError> {
    grid.par_iter()
        .map(|&value| {
            let cfg = param.apply(template, value)?;
            let spectrum = full_spectrum(&assemble_operator(&cfg))?;
            Ok(SweepPoint { value, spectrum })
        })
        .collect()
}

pub fn write_sweep_csv<T: Real, W: Write>(points: &[SweepPoint<T>], mut w: W) -> io::Result<()> {
    writeln!(w, "{SPECTRUM_HEADER}")?;
    for p in points {
        p.spectrum.write_csv_rows(Some(p.value), &mut w)?;
    }
    Ok(())
}

/// Roots CSV `index,k,omega`.
pub fn write_roots_csv<T: Real, W: Write>(roots: &[QuantizedMode<T>], mut w: W) -> io::Result<()> {
    writeln!(w, "index,k,omega")?;
    for (i, r) in roots.iter().enumerate() {
        writeln!(w, "{},{:.16e},{:.16e}", i, r.k, r.omega)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::dispersion_omega;
    use crate::weights::RuleParams;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn flat_band_multiplicity() {
        let theta = 0.4;
        let cfg =
            LatticeConfig::homogeneous(6, RuleParams::new(FRAC_PI_2, theta), Boundaries::Periodic)
                .unwrap();
        let s = full_spectrum(&assemble_operator(&cfg)).unwrap();
        let w = FRAC_PI_2 - theta;
        assert_eq!(
            s.modes
                .iter()
                .filter(|m| (m.omega - w).abs() < 1e-9)
                .count(),
            6
        );
        assert_eq!(
            s.modes
                .iter()
                .filter(|m| (m.omega + w).abs() < 1e-9)
                .count(),
            6
        );
    }

    #[test]
    fn periodic_spectrum_matches_fourier() {
        let p = RuleParams::new(0.3, 0.8);
        let n = 8;
        let cfg = LatticeConfig::homogeneous(n, p, Boundaries::Periodic).unwrap();
        let s = full_spectrum(&assemble_operator(&cfg)).unwrap();
        let mut expect: Vec<f64> = (0..n)
            .flat_map(|j| {
                let w = dispersion_omega(2.0 * PI * j as f64 / n as f64, p);
                [w, -w]
            })
            .collect();
        expect.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in s.omegas().iter().zip(&expect) {
            assert!((a - b).abs() < 1e-10);
        }
        assert_eq!(s.count(ModeClass::InBand), 2 * n);
    }

    #[test]
    fn sweep_rejects_inapplicable_parameter() {
        let cfg = LatticeConfig::homogeneous(
            6,
            RuleParams::new(0.3, 0.8),
            Boundaries::Open {
                left: Boundary::TypeI { upsilon: 0.0 },
                right: Boundary::TypeI { upsilon: 0.0 },
            },
        )
        .unwrap();
        assert!(matches!(
            boundary_sweep(&cfg, SweepParam::Zeta, &[0.0]),
            Err(SpectralError::ParamNotApplicable { .. })
        ));
        let pts = boundary_sweep(&cfg, SweepParam::Upsilon, &[0.0, 1.0, 2.0]).unwrap();
        assert_eq!(
            pts.iter().map(|p| p.value).collect::<Vec<_>>(),
            vec![0.0, 1.0, 2.0]
        );
    }
}
