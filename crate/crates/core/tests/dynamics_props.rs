use std::f64::consts::{FRAC_PI_3, FRAC_PI_4};

use qlga::dynamics::{binomial_packet_for, evolve, EvolveOptions, PacketSpec, State};
use qlga::lattice::{
    assemble_operator, Boundaries, Boundary, Junction, JunctionKind, LatticeConfig, Segment,
};
use qlga::spectral::{dispersion_omega, planewave_spinor};
use qlga::weights::RuleParams;
use qlga::Cx;

fn opts(steps: usize) -> EvolveOptions {
    EvolveOptions {
        steps,
        stride: 1,
        keep_amplitudes: true,
    }
}

fn two_mass_config() -> LatticeConfig<f64> {
    let (a, b) = (
        RuleParams::new(FRAC_PI_4, FRAC_PI_4),
        RuleParams::new(FRAC_PI_4, FRAC_PI_3),
    );
    LatticeConfig::new(
        64,
        Boundaries::Open {
            left: Boundary::TypeII { zeta: 0.0 },
            right: Boundary::TypeII { zeta: 0.0 },
        },
        vec![
            Segment {
                from: 0,
                to: 31,
                params: a,
            },
            Segment {
                from: 32,
                to: 63,
                params: b,
            },
        ],
        vec![Junction {
            kind: JunctionKind::TypeII,
            site: 31,
        }],
    )
    .unwrap()
}

fn packet() -> PacketSpec<f64> {
    PacketSpec {
        k0: FRAC_PI_4,
        center: 16,
        width: 32,
        epsilon: 1,
    }
}

#[test]
fn mass_step_mostly_transmits() {
    let op = assemble_operator(&two_mass_config());
    let s0 = binomial_packet_for(&packet(), &op).unwrap();
    let tr = evolve(&op, &s0, opts(256)).unwrap();
    let s = tr.frames[64].state.as_ref().unwrap();
    assert!(s.region_probability(32, 63).unwrap() > s.region_probability(0, 31).unwrap());
    assert!(tr.max_norm_drift() <= 1e-10);
    for f in &tr.frames {
        let st = f.state.as_ref().unwrap();
        for c in op.corners() {
            assert_eq!(st.amplitudes()[c.site][c.mover as usize], Cx::new(0.0, 0.0));
        }
    }
}

#[test]
fn packet_reflects_off_coupling_boundary() {
    let p = RuleParams::new(0.0, FRAC_PI_4);
    let cfg = LatticeConfig::homogeneous(
        64,
        p,
        Boundaries::Open {
            left: Boundary::TypeI { upsilon: 0.0 },
            right: Boundary::TypeI { upsilon: 0.0 },
        },
    )
    .unwrap();
    let op = assemble_operator(&cfg);
    let s0 = binomial_packet_for(&packet(), &op).unwrap();
    let tr = evolve(&op, &s0, opts(128)).unwrap();
    let c: Vec<f64> = tr
        .frames
        .iter()
        .map(|f| f.state.as_ref().unwrap().centroid())
        .collect();
    // heads right first, then comes back after meeting the wall
    assert!(c[16] > c[0] + 4.0);
    let peak = c.iter().cloned().fold(f64::MIN, f64::max);
    assert!(c[128] < peak - 4.0, "centroid {} after peak {peak}", c[128]);
    assert!(tr.max_norm_drift() <= 1e-10);
}

#[test]
fn centroid_moves_at_group_velocity() {
    let p = RuleParams::new(0.0, FRAC_PI_4);
    let cfg = LatticeConfig::homogeneous(128, p, Boundaries::Periodic).unwrap();
    let op = assemble_operator(&cfg);
    let spec = PacketSpec {
        k0: FRAC_PI_4,
        center: 40,
        width: 64,
        epsilon: 1,
    };
    let s0 = binomial_packet_for(&spec, &op).unwrap();
    let tr = evolve(&op, &s0, opts(16)).unwrap();
    let dx = tr.frames[16].state.as_ref().unwrap().centroid() - s0.centroid();
    let k = spec.k0;
    let w = dispersion_omega(k, p);
    let vg = p.theta.cos() * p.rho.cos() * k.sin() / w.sin();
    assert!(
        ((dx / 16.0) - vg).abs() <= 0.1 * vg,
        "moved {dx}, expected {}",
        16.0 * vg
    );
}

#[test]
fn plane_wave_probabilities_are_stationary() {
    let n = 32;
    let p = RuleParams::new(0.2, 0.6);
    let k = 2.0 * std::f64::consts::PI * 5.0 / n as f64;
    let w = planewave_spinor(Cx::new(k, 0.0), -1, p).unwrap();
    let s = State::from_amplitudes(
        (0..n)
            .map(|x| {
                let e = Cx::from_polar(1.0, k * x as f64);
                [w.unit[0] * e, w.unit[1] * e]
            })
            .collect(),
    )
    .normalized();
    let cfg = LatticeConfig::homogeneous(n, p, Boundaries::Periodic).unwrap();
    let tr = evolve(&assemble_operator(&cfg), &s, opts(100)).unwrap();
    let p0 = &tr.frames[0].probabilities;
    for f in &tr.frames {
        for (a, b) in f.probabilities.iter().zip(p0) {
            assert!((a[0] - b[0]).abs() <= 1e-10 && (a[1] - b[1]).abs() <= 1e-10);
        }
    }
}

#[test]
fn evolution_is_deterministic() {
    let op = assemble_operator(&two_mass_config());
    let s0 = binomial_packet_for(&packet(), &op).unwrap();
    let run = || {
        let mut buf = Vec::new();
        evolve(
            &op,
            &s0,
            EvolveOptions {
                steps: 50,
                stride: 7,
                keep_amplitudes: false,
            },
        )
        .unwrap()
        .write_csv(&mut buf)
        .unwrap();
        buf
    };
    assert_eq!(run(), run());
}
