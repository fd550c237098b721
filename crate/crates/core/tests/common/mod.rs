#![allow(dead_code)]

use proptest::prelude::*;
use qlga::lattice::{Boundaries, Boundary, Junction, JunctionKind, LatticeConfig, Segment};
use qlga::weights::RuleParams;
use std::f64::consts::{FRAC_PI_2, PI};

pub fn angle() -> impl Strategy<Value = f64> {
    0.0..FRAC_PI_2
}

pub fn phase() -> impl Strategy<Value = f64> {
    0.0..2.0 * PI
}

pub fn boundary() -> impl Strategy<Value = Boundary<f64>> {
    prop_oneof![
        phase().prop_map(|upsilon| Boundary::TypeI { upsilon }),
        phase().prop_map(|zeta| Boundary::TypeII { zeta }),
        (0.0..PI, phase(), phase()).prop_map(|(theta_prime, upsilon, zeta)| Boundary::TypeIII {
            theta_prime,
            upsilon,
            zeta
        }),
    ]
}

pub fn boundaries() -> impl Strategy<Value = Boundaries<f64>> {
    prop_oneof![
        1 => Just(Boundaries::Periodic),
        4 => (boundary(), boundary()).prop_map(|(left, right)| Boundaries::Open { left, right }),
    ]
}

pub fn junction_kind() -> impl Strategy<Value = JunctionKind> {
    prop_oneof![
        Just(JunctionKind::TypeI),
        Just(JunctionKind::TypeII),
        Just(JunctionKind::Combined)
    ]
}

/// Segments of at least three sites joined by random junctions, plus random
/// boundaries. Parameters obey each junction's continuity rule.
pub fn config() -> impl Strategy<Value = LatticeConfig<f64>> {
    (
        prop::collection::vec((3usize..12, junction_kind(), angle(), angle()), 1..5),
        angle(),
        angle(),
        boundaries(),
    )
        .prop_filter_map("invalid layout", |(pieces, rho0, theta0, bounds)| {
            let mut segments = Vec::new();
            let mut junctions = Vec::new();
            let mut from = 0;
            let mut params = RuleParams::new(rho0, theta0);
            for (i, &(len, kind, r, t)) in pieces.iter().enumerate() {
                if i > 0 {
                    let prev: &Segment<f64> = segments.last().unwrap();
                    params = match kind {
                        JunctionKind::TypeI => RuleParams::new(r, params.theta),
                        JunctionKind::TypeII => RuleParams::new(params.rho, t),
                        JunctionKind::Combined => RuleParams::new(r, t),
                    };
                    junctions.push(Junction {
                        kind,
                        site: prev.to,
                    });
                }
                segments.push(Segment {
                    from,
                    to: from + len - 1,
                    params,
                });
                from += len;
            }
            let n = from;
            if let Boundaries::Periodic = bounds {
                // close the seam with a combined junction when needed
                let (a, b) = (segments[0].params, segments.last().unwrap().params);
                if segments.len() > 1 && a != b {
                    junctions.push(Junction {
                        kind: JunctionKind::Combined,
                        site: n - 1,
                    });
                }
            }
            LatticeConfig::new(n, bounds, segments, junctions).ok()
        })
}

pub fn random_state(n: usize) -> impl Strategy<Value = qlga::State64> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 2 * n).prop_map(|v| {
        let flat: Vec<_> = v.into_iter().map(|(a, b)| qlga::Cx::new(a, b)).collect();
        qlga::State64::from_flat(&flat).normalized()
    })
}
