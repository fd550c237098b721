//! Lattice description: JSON schema, validated configuration and its checks.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Real;
use crate::weights::RuleParams;

/// Absolute tolerance for angle-equality checks across junctions.
pub const ANGLE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

// ---------------------------------------------------------------------------
// raw (file) form

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RawBoundaryKind {
    #[serde(rename = "periodic")]
    Periodic,
    #[serde(rename = "typeI")]
    TypeI,
    #[serde(rename = "typeII")]
    TypeII,
    #[serde(rename = "typeIII")]
    TypeIII,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawBoundary {
    pub kind: RawBoundaryKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_prime: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawBoundaries {
    pub left: RawBoundary,
    pub right: RawBoundary,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSegment {
    pub from: usize,
    pub to: usize,
    pub rho: f64,
    pub theta: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum JunctionKind {
    #[serde(rename = "typeI")]
    TypeI,
    #[serde(rename = "typeII")]
    TypeII,
    #[serde(rename = "combined")]
    Combined,
}

impl fmt::Display for JunctionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            JunctionKind::TypeI => "typeI",
            JunctionKind::TypeII => "typeII",
            JunctionKind::Combined => "combined",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Junction {
    pub kind: JunctionKind,
    pub site: usize,
}

/// Configuration exactly as read from a JSON file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub size: usize,
    pub boundaries: RawBoundaries,
    pub segments: Vec<RawSegment>,
    #[serde(default)]
    pub junctions: Vec<Junction>,
}

impl RawConfig {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

// ---------------------------------------------------------------------------
// validated form

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Boundary<T> {
    TypeI { upsilon: T },
    TypeII { zeta: T },
    TypeIII { theta_prime: T, upsilon: T, zeta: T },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Boundaries<T> {
    Periodic,
    Open {
        left: Boundary<T>,
        right: Boundary<T>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment<T> {
    pub from: usize,
    /// Inclusive.
    pub to: usize,
    pub params: RuleParams<T>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("lattice of size {size} is too small: {reason}")]
    SizeTooSmall { size: usize, reason: &'static str },
    #[error("no segment covers sites {from}..={to}")]
    GapInSegments { from: usize, to: usize },
    #[error("segments overlap at site {site}")]
    OverlapInSegments { site: usize },
    #[error("segment {from}..={to} is empty or reaches past the lattice")]
    BadSegment { from: usize, to: usize },
    #[error("typeI junction at site {site} joins different theta ({left} vs {right})")]
    ThetaMismatchAtTypeI { site: usize, left: f64, right: f64 },
    #[error("typeII junction at site {site} joins different rho ({left} vs {right})")]
    RhoMismatchAtTypeII { site: usize, left: f64, right: f64 },
    #[error("{side} boundary: {detail}")]
    BoundaryParamMismatch { side: Side, detail: String },
    #[error("periodic must be set on both sides")]
    PeriodicMismatch,
    #[error("segments ending at site {site} and starting at {next} have no junction")]
    MissingJunction { site: usize, next: usize },
    #[error("{kind} junction at site {site} does not sit between two segments")]
    MisplacedJunction { kind: JunctionKind, site: usize },
    #[error("more than one junction between the segments meeting at site {site}")]
    DuplicateJunction { site: usize },
    #[error("non-finite angle in {what}")]
    NonFiniteAngle { what: String },
    #[error("{what} at site {site} is too close to {other}; junctions and boundaries need separating sites")]
    Crowded {
        what: String,
        site: usize,
        other: String,
    },
}

/// Every violation found in one validation pass.
#[derive(Debug, Clone, PartialEq, Error)]
pub struct ValidationErrors(pub Vec<ConfigError>);

impl fmt::Display for ValidationErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// A lattice description that passed [`validate_config`].
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeConfig<T> {
    size: usize,
    boundaries: Boundaries<T>,
    segments: Vec<Segment<T>>,
    junctions: Vec<Junction>,
}

impl<T: Real> LatticeConfig<T> {
    /// Validates a configuration given directly in typed form.
    pub fn new(
        size: usize,
        boundaries: Boundaries<T>,
        segments: Vec<Segment<T>>,
        junctions: Vec<Junction>,
    ) -> Result<Self, ValidationErrors> {
        let cfg = Self {
            size,
            boundaries,
            segments,
            junctions,
        };
        let errors = cfg.check();
        if errors.is_empty() {
            Ok(cfg)
        } else {
            Err(ValidationErrors(errors))
        }
    }

    /// One segment covering the whole lattice.
    pub fn homogeneous(
        size: usize,
        params: RuleParams<T>,
        boundaries: Boundaries<T>,
    ) -> Result<Self, ValidationErrors> {
        let to = size.saturating_sub(1);
        Self::new(
            size,
            boundaries,
            vec![Segment {
                from: 0,
                to,
                params,
            }],
            vec![],
        )
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn boundaries(&self) -> &Boundaries<T> {
        &self.boundaries
    }

    pub fn segments(&self) -> &[Segment<T>] {
        &self.segments
    }

    pub fn junctions(&self) -> &[Junction] {
        &self.junctions
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self.boundaries, Boundaries::Periodic)
    }

    /// Rule parameters of the segment containing `site`.
    pub fn params_at(&self, site: usize) -> RuleParams<T> {
        self.segments
            .iter()
            .find(|s| s.from <= site && site <= s.to)
            .map(|s| s.params)
            .expect("validated segments tile the lattice")
    }

    /// Same configuration with both boundaries replaced.
    pub fn with_boundaries(&self, boundaries: Boundaries<T>) -> Result<Self, ValidationErrors> {
        Self::new(
            self.size,
            boundaries,
            self.segments.clone(),
            self.junctions.clone(),
        )
    }

    /// Parity image: site `x` maps to `N - 1 - x` and the boundaries swap sides.
    ///
    /// Combined junctions are not parity symmetric (the mirrored operator is not
    /// of the same form), so configurations containing one return `None`.
    pub fn mirrored(&self) -> Option<Self> {
        let n = self.size;
        if self
            .junctions
            .iter()
            .any(|j| j.kind == JunctionKind::Combined)
        {
            return None;
        }
        let segments = self
            .segments
            .iter()
            .rev()
            .map(|s| Segment {
                from: n - 1 - s.to,
                to: n - 1 - s.from,
                params: s.params,
            })
            .collect();
        let junctions = self
            .junctions
            .iter()
            .map(|j| Junction {
                kind: j.kind,
                site: match j.kind {
                    JunctionKind::TypeI => n - 1 - j.site,
                    // bond (j, j+1) maps to bond (n-2-j, n-1-j)
                    _ => (2 * n - 2 - j.site) % n,
                },
            })
            .collect();
        let boundaries = match self.boundaries {
            Boundaries::Periodic => Boundaries::Periodic,
            Boundaries::Open { left, right } => Boundaries::Open {
                left: right,
                right: left,
            },
        };
        Self::new(n, boundaries, segments, junctions).ok()
    }

    fn check(&self) -> Vec<ConfigError> {
        let mut errs = Vec::new();
        let n = self.size;
        let tol = T::lit(ANGLE_TOLERANCE);

        match self.boundaries {
            Boundaries::Periodic if n < 2 => errs.push(ConfigError::SizeTooSmall {
                size: n,
                reason: "periodic lattices need at least 2 sites",
            }),
            Boundaries::Open { left, right } => {
                let needs_three = |b: &Boundary<T>| !matches!(b, Boundary::TypeI { .. });
                if n < 2 {
                    errs.push(ConfigError::SizeTooSmall {
                        size: n,
                        reason: "two boundaries need at least 2 sites",
                    });
                } else if n < 3 && (needs_three(&left) || needs_three(&right)) {
                    errs.push(ConfigError::SizeTooSmall {
                        size: n,
                        reason: "typeII and typeIII boundaries need at least 3 sites",
                    });
                }
                for (side, b) in [(Side::Left, left), (Side::Right, right)] {
                    let finite = match b {
                        Boundary::TypeI { upsilon } => upsilon.is_finite(),
                        Boundary::TypeII { zeta } => zeta.is_finite(),
                        Boundary::TypeIII {
                            theta_prime,
                            upsilon,
                            zeta,
                        } => theta_prime.is_finite() && upsilon.is_finite() && zeta.is_finite(),
                    };
                    if !finite {
                        errs.push(ConfigError::NonFiniteAngle {
                            what: format!("{side} boundary"),
                        });
                    }
                }
            }
            _ => {}
        }
        if !errs.is_empty() {
            return errs;
        }

        // segments must tile 0..n in order
        if self.segments.is_empty() {
            errs.push(ConfigError::GapInSegments { from: 0, to: n - 1 });
            return errs;
        }
        let mut next = 0usize;
        for s in &self.segments {
            if s.from > s.to || s.to >= n {
                errs.push(ConfigError::BadSegment {
                    from: s.from,
                    to: s.to,
                });
                continue;
            }
            if !s.params.is_finite() {
                errs.push(ConfigError::NonFiniteAngle {
                    what: format!("segment {}..={}", s.from, s.to),
                });
            }
            if s.from > next {
                errs.push(ConfigError::GapInSegments {
                    from: next,
                    to: s.from - 1,
                });
            } else if s.from < next {
                errs.push(ConfigError::OverlapInSegments { site: s.from });
            }
            next = next.max(s.to + 1);
        }
        if next < n {
            errs.push(ConfigError::GapInSegments {
                from: next,
                to: n - 1,
            });
        }
        if !errs.is_empty() {
            return errs;
        }

        // every meeting point of two segments needs exactly one junction
        let mut pairs: Vec<(usize, usize, bool)> = self
            .segments
            .windows(2)
            .enumerate()
            .map(|(i, _)| (i, i + 1, true))
            .collect();
        if self.is_periodic() && self.segments.len() > 1 {
            let (first, last) = (
                self.segments[0].params,
                self.segments[self.segments.len() - 1].params,
            );
            let same =
                (first.rho - last.rho).abs() <= tol && (first.theta - last.theta).abs() <= tol;
            pairs.push((self.segments.len() - 1, 0, !same));
        }
        let mut used = vec![false; self.junctions.len()];
        for &(li, ri, required) in &pairs {
            let (l, r) = (&self.segments[li], &self.segments[ri]);
            let here: Vec<usize> = self
                .junctions
                .iter()
                .enumerate()
                .filter(|(_, j)| match j.kind {
                    JunctionKind::TypeI => j.site == l.to || j.site == r.from,
                    _ => j.site == l.to,
                })
                .map(|(i, _)| i)
                .collect();
            match here.len() {
                0 if required => errs.push(ConfigError::MissingJunction {
                    site: l.to,
                    next: r.from,
                }),
                0 => {}
                1 => {
                    used[here[0]] = true;
                    let j = self.junctions[here[0]];
                    let (lp, rp) = (l.params, r.params);
                    match j.kind {
                        JunctionKind::TypeI if (lp.theta - rp.theta).abs() > tol => {
                            errs.push(ConfigError::ThetaMismatchAtTypeI {
                                site: j.site,
                                left: lp.theta.to_f64_lossy(),
                                right: rp.theta.to_f64_lossy(),
                            })
                        }
                        JunctionKind::TypeII if (lp.rho - rp.rho).abs() > tol => {
                            errs.push(ConfigError::RhoMismatchAtTypeII {
                                site: j.site,
                                left: lp.rho.to_f64_lossy(),
                                right: rp.rho.to_f64_lossy(),
                            })
                        }
                        _ => {}
                    }
                }
                _ => {
                    for &i in &here {
                        used[i] = true;
                    }
                    errs.push(ConfigError::DuplicateJunction { site: l.to });
                }
            }
        }
        for (j, u) in self.junctions.iter().zip(&used) {
            if !u {
                errs.push(ConfigError::MisplacedJunction {
                    kind: j.kind,
                    site: j.site,
                });
            }
        }
        if !errs.is_empty() {
            return errs;
        }

        self.check_spacing(&mut errs);
        errs
    }

    /// Rows overridden by junctions and boundaries must not collide.
    fn check_spacing(&self, errs: &mut Vec<ConfigError>) {
        let n = self.size;
        // (label, first row touched, last row touched), rows taken modulo n
        let mut claims: Vec<(String, usize, usize)> = Vec::new();
        for j in &self.junctions {
            let (a, b) = match j.kind {
                JunctionKind::TypeI => (j.site, j.site),
                JunctionKind::TypeII | JunctionKind::Combined => (j.site, j.site + 1),
            };
            claims.push((format!("{} junction", j.kind), a, b));
        }
        if let Boundaries::Open { .. } = self.boundaries {
            claims.push(("left boundary".into(), 0, 1));
            claims.push(("right boundary".into(), n - 2, n - 1));
        }
        for (i, (la, a0, a1)) in claims.iter().enumerate() {
            for (lb, b0, b1) in claims.iter().skip(i + 1) {
                if la.ends_with("boundary") && lb.ends_with("boundary") {
                    continue;
                }
                let touch = |x: usize, y: usize| {
                    let d = x.abs_diff(y);
                    if self.is_periodic() {
                        d.min(n - d) == 0
                    } else {
                        d == 0
                    }
                };
                let overlaps = [a0, a1]
                    .iter()
                    .any(|x| [b0, b1].iter().any(|y| touch(**x, **y)));
                if overlaps {
                    errs.push(ConfigError::Crowded {
                        what: la.clone(),
                        site: *a0,
                        other: lb.clone(),
                    });
                }
            }
        }
    }
}

fn boundary_from_raw(side: Side, b: &RawBoundary) -> Result<Option<Boundary<f64>>, ConfigError> {
    let mismatch = |detail: &str| ConfigError::BoundaryParamMismatch {
        side,
        detail: detail.to_string(),
    };
    let need = |v: Option<f64>, name: &str| v.ok_or_else(|| mismatch(&format!("missing {name}")));
    let forbid = |v: Option<f64>, name: &str, kind: &str| match v {
        Some(_) => Err(mismatch(&format!("{name} is not a parameter of {kind}"))),
        None => Ok(()),
    };
    Ok(match b.kind {
        RawBoundaryKind::Periodic => {
            forbid(b.upsilon, "upsilon", "periodic")?;
            forbid(b.zeta, "zeta", "periodic")?;
            forbid(b.theta_prime, "theta_prime", "periodic")?;
            None
        }
        RawBoundaryKind::TypeI => {
            forbid(b.zeta, "zeta", "typeI")?;
            forbid(b.theta_prime, "theta_prime", "typeI")?;
            Some(Boundary::TypeI {
                upsilon: need(b.upsilon, "upsilon")?,
            })
        }
        RawBoundaryKind::TypeII => {
            forbid(b.upsilon, "upsilon", "typeII")?;
            forbid(b.theta_prime, "theta_prime", "typeII")?;
            Some(Boundary::TypeII {
                zeta: need(b.zeta, "zeta")?,
            })
        }
        RawBoundaryKind::TypeIII => Some(Boundary::TypeIII {
            theta_prime: need(b.theta_prime, "theta_prime")?,
            upsilon: need(b.upsilon, "upsilon")?,
            zeta: need(b.zeta, "zeta")?,
        }),
    })
}

fn cast<T: Real>(x: f64) -> T {
    T::lit(x)
}

fn cast_boundary<T: Real>(b: Boundary<f64>) -> Boundary<T> {
    match b {
        Boundary::TypeI { upsilon } => Boundary::TypeI {
            upsilon: cast(upsilon),
        },
        Boundary::TypeII { zeta } => Boundary::TypeII { zeta: cast(zeta) },
        Boundary::TypeIII {
            theta_prime,
            upsilon,
            zeta,
        } => Boundary::TypeIII {
            theta_prime: cast(theta_prime),
            upsilon: cast(upsilon),
            zeta: cast(zeta),
        },
    }
}

/// Turns a raw file configuration into a validated one, collecting every violation.
pub fn validate_config<T: Real>(raw: &RawConfig) -> Result<LatticeConfig<T>, ValidationErrors> {
    let mut errs = Vec::new();
    let left = boundary_from_raw(Side::Left, &raw.boundaries.left);
    let right = boundary_from_raw(Side::Right, &raw.boundaries.right);
    let boundaries = match (left, right) {
        (Ok(None), Ok(None)) => Some(Boundaries::Periodic),
        (Ok(Some(l)), Ok(Some(r))) => Some(Boundaries::Open {
            left: cast_boundary(l),
            right: cast_boundary(r),
        }),
        (Ok(_), Ok(_)) => {
            errs.push(ConfigError::PeriodicMismatch);
            None
        }
        (l, r) => {
            errs.extend(l.err());
            errs.extend(r.err());
            None
        }
    };
    let Some(boundaries) = boundaries else {
        return Err(ValidationErrors(errs));
    };
    let segments = raw
        .segments
        .iter()
        .map(|s| Segment {
            from: s.from,
            to: s.to,
            params: RuleParams::new(cast(s.rho), cast(s.theta)),
        })
        .collect();
    LatticeConfig::new(raw.size, boundaries, segments, raw.junctions.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4};

    fn raw(json: &str) -> RawConfig {
        RawConfig::from_json(json).unwrap()
    }

    fn errors(json: &str) -> Vec<ConfigError> {
        validate_config::<f64>(&raw(json)).unwrap_err().0
    }

    #[test]
    fn single_periodic_segment() {
        let cfg = validate_config::<f64>(&raw(
            r#"{"size": 8, "boundaries": {"left": {"kind": "periodic"}, "right": {"kind": "periodic"}},
                "segments": [{"from": 0, "to": 7, "rho": 0.3, "theta": 0.5}]}"#,
        ))
        .unwrap();
        assert!(cfg.is_periodic());
        assert_eq!(cfg.size(), 8);
    }

    #[test]
    fn type1_junction_with_equal_theta() {
        let json = format!(
            r#"{{"size": 64, "boundaries": {{"left": {{"kind": "typeI", "upsilon": 0}}, "right": {{"kind": "typeI", "upsilon": 0}}}},
                "segments": [{{"from": 0, "to": 31, "rho": 0, "theta": {t}}}, {{"from": 32, "to": 63, "rho": {t}, "theta": {t}}}],
                "junctions": [{{"kind": "typeI", "site": 31}}]}}"#,
            t = FRAC_PI_4
        );
        assert!(validate_config::<f64>(&raw(&json)).is_ok());
    }

    #[test]
    fn type1_junction_with_theta_jump() {
        let json = format!(
            r#"{{"size": 64, "boundaries": {{"left": {{"kind": "typeI", "upsilon": 0}}, "right": {{"kind": "typeI", "upsilon": 0}}}},
                "segments": [{{"from": 0, "to": 31, "rho": 0, "theta": {}}}, {{"from": 32, "to": 63, "rho": 0, "theta": {}}}],
                "junctions": [{{"kind": "typeI", "site": 31}}]}}"#,
            FRAC_PI_4, FRAC_PI_3
        );
        let e = errors(&json);
        assert!(
            matches!(e[..], [ConfigError::ThetaMismatchAtTypeI { site: 31, .. }]),
            "{e:?}"
        );
    }

    #[test]
    fn type2_junction_with_rho_jump() {
        let e = errors(
            r#"{"size": 10, "boundaries": {"left": {"kind": "typeII", "zeta": 0}, "right": {"kind": "typeII", "zeta": 0}},
                "segments": [{"from": 0, "to": 4, "rho": 0.1, "theta": 0.5}, {"from": 5, "to": 9, "rho": 0.2, "theta": 0.5}],
                "junctions": [{"kind": "typeII", "site": 4}]}"#,
        );
        assert!(
            matches!(e[..], [ConfigError::RhoMismatchAtTypeII { site: 4, .. }]),
            "{e:?}"
        );
    }

    #[test]
    fn gaps_and_overlaps() {
        let e = errors(
            r#"{"size": 10, "boundaries": {"left": {"kind": "typeI", "upsilon": 0}, "right": {"kind": "typeI", "upsilon": 0}},
                "segments": [{"from": 0, "to": 3, "rho": 0, "theta": 0.5}, {"from": 5, "to": 9, "rho": 0, "theta": 0.5}]}"#,
        );
        assert!(e.contains(&ConfigError::GapInSegments { from: 4, to: 4 }));
        let e = errors(
            r#"{"size": 10, "boundaries": {"left": {"kind": "typeI", "upsilon": 0}, "right": {"kind": "typeI", "upsilon": 0}},
                "segments": [{"from": 0, "to": 5, "rho": 0, "theta": 0.5}, {"from": 5, "to": 9, "rho": 0, "theta": 0.5}]}"#,
        );
        assert!(e.contains(&ConfigError::OverlapInSegments { site: 5 }));
        let e = errors(
            r#"{"size": 10, "boundaries": {"left": {"kind": "typeI", "upsilon": 0}, "right": {"kind": "typeI", "upsilon": 0}},
                "segments": [{"from": 0, "to": 7, "rho": 0, "theta": 0.5}]}"#,
        );
        assert!(e.contains(&ConfigError::GapInSegments { from: 8, to: 9 }));
    }

    #[test]
    fn boundary_parameter_checks() {
        let e = errors(
            r#"{"size": 4, "boundaries": {"left": {"kind": "typeII", "zeta": 0, "upsilon": 1}, "right": {"kind": "typeI", "upsilon": 0}},
                "segments": [{"from": 0, "to": 3, "rho": 0, "theta": 0.5}]}"#,
        );
        assert!(matches!(
            e[..],
            [ConfigError::BoundaryParamMismatch {
                side: Side::Left,
                ..
            }]
        ));
        let e = errors(
            r#"{"size": 4, "boundaries": {"left": {"kind": "typeI", "upsilon": 0}, "right": {"kind": "typeIII", "upsilon": 0, "zeta": 0}},
                "segments": [{"from": 0, "to": 3, "rho": 0, "theta": 0.5}]}"#,
        );
        assert!(matches!(
            e[..],
            [ConfigError::BoundaryParamMismatch {
                side: Side::Right,
                ..
            }]
        ));
        let e = errors(
            r#"{"size": 4, "boundaries": {"left": {"kind": "periodic"}, "right": {"kind": "typeI", "upsilon": 0}},
                "segments": [{"from": 0, "to": 3, "rho": 0, "theta": 0.5}]}"#,
        );
        assert_eq!(e, vec![ConfigError::PeriodicMismatch]);
    }

    #[test]
    fn size_limits() {
        let e = errors(
            r#"{"size": 1, "boundaries": {"left": {"kind": "periodic"}, "right": {"kind": "periodic"}},
                "segments": [{"from": 0, "to": 0, "rho": 0, "theta": 0.5}]}"#,
        );
        assert!(matches!(e[..], [ConfigError::SizeTooSmall { size: 1, .. }]));
        let e = errors(
            r#"{"size": 2, "boundaries": {"left": {"kind": "typeII", "zeta": 0}, "right": {"kind": "typeI", "upsilon": 0}},
                "segments": [{"from": 0, "to": 1, "rho": 0, "theta": 0.5}]}"#,
        );
        assert!(matches!(e[..], [ConfigError::SizeTooSmall { size: 2, .. }]));
        assert!(validate_config::<f64>(&raw(
            r#"{"size": 2, "boundaries": {"left": {"kind": "typeI", "upsilon": 0}, "right": {"kind": "typeI", "upsilon": 0}},
                "segments": [{"from": 0, "to": 1, "rho": 0, "theta": 0.5}]}"#
        ))
        .is_ok());
    }

    #[test]
    fn junction_bookkeeping() {
        let e = errors(
            r#"{"size": 10, "boundaries": {"left": {"kind": "typeI", "upsilon": 0}, "right": {"kind": "typeI", "upsilon": 0}},
                "segments": [{"from": 0, "to": 4, "rho": 0, "theta": 0.5}, {"from": 5, "to": 9, "rho": 0.2, "theta": 0.5}]}"#,
        );
        assert_eq!(e, vec![ConfigError::MissingJunction { site: 4, next: 5 }]);
        let e = errors(
            r#"{"size": 10, "boundaries": {"left": {"kind": "typeI", "upsilon": 0}, "right": {"kind": "typeI", "upsilon": 0}},
                "segments": [{"from": 0, "to": 4, "rho": 0, "theta": 0.5}, {"from": 5, "to": 9, "rho": 0.2, "theta": 0.5}],
                "junctions": [{"kind": "typeI", "site": 4}, {"kind": "typeII", "site": 7}]}"#,
        );
        assert_eq!(
            e,
            vec![ConfigError::MisplacedJunction {
                kind: JunctionKind::TypeII,
                site: 7
            }]
        );
    }

    #[test]
    fn periodic_seam_needs_junction_only_when_parameters_differ() {
        let seam = |theta2: f64, junctions: &str| {
            format!(
                r#"{{"size": 12, "boundaries": {{"left": {{"kind": "periodic"}}, "right": {{"kind": "periodic"}}}},
                    "segments": [{{"from": 0, "to": 5, "rho": 0.3, "theta": 0.5}}, {{"from": 6, "to": 11, "rho": 0.3, "theta": {theta2}}}],
                    "junctions": [{junctions}]}}"#
            )
        };
        assert!(
            validate_config::<f64>(&raw(&seam(0.5, r#"{"kind": "typeII", "site": 5}"#))).is_ok()
        );
        let e = errors(&seam(0.9, r#"{"kind": "typeII", "site": 5}"#));
        assert_eq!(e, vec![ConfigError::MissingJunction { site: 11, next: 0 }]);
        assert!(validate_config::<f64>(&raw(&seam(
            0.9,
            r#"{"kind": "typeII", "site": 5}, {"kind": "typeII", "site": 11}"#
        )))
        .is_ok());
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(RawConfig::from_json(
            r#"{"size": 4, "boundaries": {"left": {"kind": "typeIV"}, "right": {"kind": "typeI"}}, "segments": []}"#
        )
        .is_err());
        assert!(RawConfig::from_json(
            r#"{"size": 4, "extra": 1, "boundaries": {"left": {"kind": "periodic"}, "right": {"kind": "periodic"}}, "segments": []}"#
        )
        .is_err());
    }

    #[test]
    fn raw_json_round_trip() {
        let r = raw(
            r#"{"size": 4, "boundaries": {"left": {"kind": "typeIII", "theta_prime": 0.1, "upsilon": 0.2, "zeta": 0.3},
                "right": {"kind": "typeII", "zeta": 1.5}}, "segments": [{"from": 0, "to": 3, "rho": 0, "theta": 0.5}]}"#,
        );
        assert_eq!(RawConfig::from_json(&r.to_json()).unwrap(), r);
    }
}
