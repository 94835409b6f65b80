use shiftmetric::harness::{sweep_s2, SweepConfig};
use shiftmetric::numeric::quadrature::QuadratureConfig;
use shiftmetric::polydyn::CriticalHeights;
use shiftmetric::rosemetric::{circuit_count, path_length, LengthFunction, MetricGraph};
use shiftmetric::shiftlocus::{
    base_length, cauchy_probe, entropy_asymptotics, index_set, segment_entropy_length, twist_length, twist_segment,
    AsymptoticCase, Segment, SequenceFamily, TwistState,
};

fn hs(v: &[f64]) -> CriticalHeights {
    CriticalHeights::new(v.to_vec()).unwrap()
}

#[test]
fn circuits_of_length_one() {
    let g = MetricGraph::rose(2).unwrap();
    let l = LengthFunction::constant(2, 1.0).unwrap();
    assert_eq!(circuit_count(&g, &l, 1.0).unwrap(), 4);
    assert_eq!(circuit_count(&g, &l, 0.99).unwrap(), 0);
}

#[test]
fn base_and_twist_examples() {
    assert_eq!(base_length(&hs(&[2.0, 1.0])).unwrap().as_slice(), &[2.0, 0.5, 1.0, 1.0]);
    assert_eq!(base_length(&hs(&[3.0])).unwrap().as_slice(), &[3.0, 1.0]);
    assert_eq!(base_length(&hs(&[1.0, 1.0, 1.0])).unwrap().as_slice(), &[1.0; 6]);
    let t = twist_length(&TwistState::new(hs(&[2.0, 1.0]), vec![0.1, -0.2]).unwrap()).unwrap();
    let want = [2.0, 0.5, 1.05, 0.9];
    for (a, b) in t.as_slice().iter().zip(want) {
        assert!((a - b).abs() < 1e-15);
    }
}

// Ratio-table oracle: petals whose ratio to the shortest petal does not decay
// across the probes, read directly from the base lengths.
fn oracle_index_set(fam: &SequenceFamily, probes: &[f64]) -> Vec<usize> {
    let rows: Vec<Vec<f64>> = probes
        .iter()
        .map(|&k| base_length(&fam.heights(k).unwrap()).unwrap().as_slice().to_vec())
        .collect();
    let n = rows[0].len();
    (0..n)
        .filter(|&i| {
            let r: Vec<f64> = rows
                .iter()
                .map(|l| l.iter().cloned().fold(f64::INFINITY, f64::min) / l[i])
                .collect();
            r[r.len() - 1] >= 0.5 * r[0]
        })
        .collect()
}

#[test]
fn index_set_examples() {
    let probes = [1e2, 1e3, 1e4];
    let cases = [
        (
            SequenceFamily::named(3, "h2=a*h1", 0.5, probes.to_vec()),
            vec![1, 2, 3],
            false,
        ),
        (
            SequenceFamily::power(vec![1.0, 1.0], vec![1.0, 0.5], probes.to_vec()),
            vec![1],
            true,
        ),
        (
            SequenceFamily::named(3, "h2=a*h1^2", 0.3, probes.to_vec()),
            vec![0, 1],
            false,
        ),
    ];
    for (fam, want, singular) in cases {
        let r = index_set(&fam, &probes).unwrap();
        assert_eq!(r.index_set, want, "{}", fam.regime);
        assert_eq!(oracle_index_set(&fam, &probes), want);
        assert_eq!(r.singular, singular);
    }
}

#[test]
fn index_set_needs_three_probes() {
    let fam = SequenceFamily::named(3, "h2=a*h1", 0.5, vec![]);
    assert!(index_set(&fam, &[1.0, 2.0]).is_err());
}

#[test]
fn proportional_cubic_family_has_finite_entropy_limit() {
    let probes = [1e2, 1e3, 1e4];
    for a in [0.25, 0.5, 1.0] {
        let fam = SequenceFamily::named(3, "h2=a*h1", a, probes.to_vec());
        let r = entropy_asymptotics(&fam, &probes).unwrap();
        assert_eq!(r.case, AsymptoticCase::Finite);
        let e = &r.entropies;
        assert!((e[2] - e[1]).abs() < 1e-6 * e[2] && e[2] > 0.0, "{e:?}");
    }
}

#[test]
fn quadratic_entropy_goes_to_zero() {
    let probes = [1e1, 1e2, 1e3, 1e4];
    let fam = SequenceFamily::power(vec![1.0], vec![1.0], probes.to_vec());
    let r = entropy_asymptotics(&fam, &probes).unwrap();
    assert_eq!(r.case, AsymptoticCase::QuadraticToZero);
    assert!(r.entropies[3] < 1e-2, "{:?}", r.entropies);
}

#[test]
fn cauchy_probe_examples() {
    let grid: Vec<f64> = (1..=12).map(|k| 2f64.powi(k)).collect();
    let quad = QuadratureConfig::default();
    for a in [0.2, 0.7] {
        let fam = SequenceFamily::named(3, "h2=a*h1", a, grid.clone());
        let r = cauchy_probe(&fam, &grid, &quad).unwrap();
        assert!(r.cauchy_consistent && r.tail_bound < 1e-6, "{r:?}");
    }
    // h2 = 2^k / k when h1 = 2^k.
    let fam = SequenceFamily::named(3, "h2=h1/log(h1)", 1.0, grid.clone());
    assert!(!cauchy_probe(&fam, &grid, &quad).unwrap().cauchy_consistent);
    // h1 = 2^-k, h2 = a 4^-k.
    let fam = SequenceFamily::named(3, "h2=a*h1^2", 0.5, grid.clone());
    assert!(cauchy_probe(&fam, &grid, &quad).unwrap().cauchy_consistent);
}

#[test]
fn segment_length_is_stable_under_quadrature_refinement() {
    let seg = Segment::Height(shiftmetric::shiftlocus::height_segment(&hs(&[3.0, 0.4]), &hs(&[9.0, 7.0])).unwrap());
    let coarse = segment_entropy_length(
        &seg,
        &QuadratureConfig {
            order: 10,
            ..Default::default()
        },
    )
    .unwrap();
    let fine = segment_entropy_length(
        &seg,
        &QuadratureConfig {
            order: 20,
            ..Default::default()
        },
    )
    .unwrap();
    assert!((coarse - fine).abs() < 1e-8);
    assert!(coarse > 0.0);
}

#[test]
fn twist_scale_is_frozen_under_subdivision() {
    let h = hs(&[0.5, 0.2]);
    let quad = QuadratureConfig::default();
    let whole = segment_entropy_length(
        &Segment::Twist(twist_segment(&h, &[-0.5, 0.3], &[0.5, -0.3]).unwrap()),
        &quad,
    )
    .unwrap();
    let first = twist_segment(&h, &[-0.5, 0.3], &[0.0, 0.0]).unwrap();
    let h0 = first.from.h0;
    let second_path = shiftmetric::rosemetric::PathSpec::Linear {
        from: twist_length(&TwistState::with_scale(h.clone(), vec![0.0, 0.0], h0).unwrap())
            .unwrap()
            .as_slice()
            .to_vec(),
        to: twist_length(&TwistState::with_scale(h.clone(), vec![0.5, -0.3], h0).unwrap())
            .unwrap()
            .as_slice()
            .to_vec(),
    };
    let parts =
        segment_entropy_length(&Segment::Twist(first), &quad).unwrap() + path_length(&second_path, &quad).unwrap();
    assert!((whole - parts).abs() < 1e-9 * whole, "{whole} vs {parts}");
}

#[test]
fn sweep_refinement_and_shape() {
    let coarse = sweep_s2(
        &[0.05, 1.0, 20.0],
        &SweepConfig {
            samples: 128,
            ..Default::default()
        },
    )
    .unwrap();
    let fine = sweep_s2(
        &[0.05, 1.0, 20.0],
        &SweepConfig {
            samples: 256,
            ..Default::default()
        },
    )
    .unwrap();
    for i in [0, 2] {
        let change = (fine[i].length - coarse[i].length).abs() / fine[i].length;
        assert!(change < 0.05, "level {}: {change}", fine[i].h);
    }
    assert!(fine[0].length < fine[1].length && fine[2].length < fine[1].length);
}
