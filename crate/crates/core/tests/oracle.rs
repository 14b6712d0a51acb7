mod common;

use std::f64::consts::PI;

use proptest::prelude::*;
use sphervol::embedding::{monte_carlo_hits, polytope, symmetry_defect, CONTAINMENT_TOL};
use sphervol::trig::{isosceles_triangle_angles, regular_ngon_half_angle};
use sphervol::volume::{antiprism_volume_along_a, SPHERE_VOLUME};
use sphervol::*;

use common::{a_max, c_range, interior_grid, spec_at};

fn quad() -> QuadratureConfig {
    QuadratureConfig::default()
}

#[test]
fn every_vertex_lies_in_every_halfspace() {
    for n in 2..=8 {
        for spec in interior_grid(n, 8) {
            let poly = polytope(&spec).unwrap_or_else(|e| panic!("{spec:?}: {e}"));
            for face in &poly.faces {
                let normal = face.normal.unwrap();
                for v in &poly.vertices {
                    let off: f64 = normal.iter().zip(v.coords()).map(|(p, q)| p * q).sum();
                    assert!(off >= -CONTAINMENT_TOL);
                }
            }
        }
    }
}

#[test]
fn embedding_reproduces_edge_lengths_and_center_distance() {
    for n in 2..=8 {
        for spec in interior_grid(n, 8) {
            let poly = embed(&spec).unwrap();
            let nn = n as usize;
            for k in 0..nn {
                let top = &poly.vertices[poly.top(k)];
                let cos_a = top.dot(&poly.vertices[poly.top(k + 1)]);
                let cos_c1 = top.dot(&poly.vertices[poly.bottom(k)]);
                let cos_c2 = poly.vertices[poly.bottom(k)].dot(&poly.vertices[poly.top(k + 1)]);
                assert!((cos_a - spec.a.cos()).abs() <= 1e-12);
                assert!((cos_c1 - spec.c.cos()).abs() <= 1e-12);
                assert!((cos_c2 - spec.c.cos()).abs() <= 1e-12);
            }
            let frame = center_distance(&spec).unwrap();
            assert!((poly.face_center_cos() - frame.cos_center_distance).abs() <= 1e-12);
            assert!((frame.pole_angle - frame.center_distance).abs() <= 1e-9);
        }
    }
}

#[test]
fn mirror_rotation_is_a_symmetry() {
    for n in 2..=8 {
        for spec in interior_grid(n, 5) {
            let defect = symmetry_defect(&embed(&spec).unwrap());
            assert!(defect <= 1e-13, "{spec:?}: {defect:e}");
        }
    }
}

#[test]
fn vertex_figure_matches_face_angles_and_trapezoid_formula() {
    for n in 3..=8 {
        for spec in interior_grid(n, 6) {
            let vf = vertex_figure_trapezoid(&polytope(&spec).unwrap()).unwrap();
            let (cos_hx, sin_hx) = regular_ngon_half_angle(n, spec.a).unwrap();
            let lateral = isosceles_triangle_angles(spec.a, spec.c).unwrap();
            assert!((vf.x - 2.0 * sin_hx.atan2(cos_hx)).abs() <= 1e-10);
            assert!((vf.y - lateral.y()).abs() <= 1e-10);
            assert!((vf.z - lateral.z()).abs() <= 1e-10);
            assert!((vf.y - vf.y_other).abs() <= 1e-12);
            let (a, c) = trapezoid_angles(TrapezoidShape::new(vf.x, vf.y, vf.z).unwrap()).unwrap();
            assert!((vf.a_angle - a).abs() <= 1e-10, "{spec:?}");
            assert!((vf.c_angle - c).abs() <= 1e-10, "{spec:?}");
        }
    }
}

#[test]
fn vertex_figure_for_n_two_has_a_point_base() {
    for spec in interior_grid(2, 5) {
        let poly = polytope(&spec).unwrap();
        let vf = vertex_figure_trapezoid(&poly).unwrap();
        assert_eq!(vf.x, 0.0);
        let (_, sin_hx) = regular_ngon_half_angle(2, spec.a).unwrap();
        assert!(sin_hx.abs() < 1e-15);
        let d = dihedral_angles(&spec).unwrap();
        assert!((vf.a_angle - d.a_edge).abs() <= 1e-10);
        assert!((vf.c_angle - d.c_edge).abs() <= 1e-10);
    }
}

#[test]
fn sampling_does_not_depend_on_worker_count() {
    let poly = polytope(&spec_at(5, 0.5, 0.5)).unwrap();
    let normals = poly.normals().unwrap();
    let cfg = McConfig {
        samples: 1_000_003,
        seed: 77,
    };
    let counts: Vec<u64> = [1, 2, 3, 8]
        .iter()
        .map(|&threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| monte_carlo_hits(&normals, &cfg).unwrap())
        })
        .collect();
    assert!(counts.windows(2).all(|w| w[0] == w[1]), "{counts:?}");
}

#[test]
fn orthant_hit_rate() {
    let poly = polytope(&AntiprismSpec::new(2, PI / 2.0, PI / 2.0).unwrap()).unwrap();
    let v = monte_carlo_volume(
        &poly,
        &McConfig {
            samples: 10_000_000,
            seed: 2024,
        },
    )
    .unwrap();
    assert!((v.error_bound - 1.5e-3).abs() < 1e-4);
    assert!((v.value - SPHERE_VOLUME / 16.0).abs() <= 4.0 * v.error_bound);
}

#[test]
fn reported_standard_error_matches_spread() {
    let spec = spec_at(4, 0.5, 0.5);
    let poly = polytope(&spec).unwrap();
    let estimates: Vec<VolumeEstimate> = (0..50)
        .map(|seed| {
            monte_carlo_volume(
                &poly,
                &McConfig {
                    samples: 100_000,
                    seed,
                },
            )
            .unwrap()
        })
        .collect();
    let mean = estimates.iter().map(|e| e.value).sum::<f64>() / 50.0;
    let var = estimates
        .iter()
        .map(|e| (e.value - mean).powi(2))
        .sum::<f64>()
        / 49.0;
    let sd = var.sqrt();
    let se = estimates.iter().map(|e| e.error_bound).sum::<f64>() / 50.0;
    assert!((sd / se - 1.0).abs() <= 0.3, "sd {sd:e}, reported {se:e}");
    let quad = antiprism_volume(&spec, &quad()).unwrap().value;
    assert!((mean - quad).abs() <= 4.0 * se / 50f64.sqrt());
}

#[test]
fn family_reduction_examples() {
    let v = antiprism_volume(&AntiprismSpec::new(2, 0.3, 0.3).unwrap(), &quad()).unwrap();
    assert!((v.value - tetra_volume_by_edge(0.3, &quad()).unwrap().value).abs() <= 1e-6);
    let v = antiprism_volume(&AntiprismSpec::new(3, 0.4, 0.4).unwrap(), &quad()).unwrap();
    assert!((v.value - octa_volume_by_edge(0.4, &quad()).unwrap().value).abs() <= 1e-6);
}

#[test]
fn volume_is_monotone_in_c() {
    for n in 2..=8 {
        for frac in [0.2, 0.5, 0.8] {
            let a = a_max(n) * frac;
            let (lo, hi) = c_range(n, a);
            let mut prev = -1.0;
            for j in 0..=30 {
                let c = lo + (hi - lo) * f64::from(j) / 30.0;
                let v = antiprism_volume(&AntiprismSpec::new(n, a, c).unwrap(), &quad())
                    .unwrap()
                    .value;
                assert!(v > prev, "n={n} a={a} c={c}");
                prev = v;
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn volume_is_bounded(n in 2u32..=10, a_frac in 0.0..1.0f64, t in 0.0..=1.0f64) {
        let a = a_max(n) * a_frac;
        let (lo, hi) = c_range(n, a);
        let spec = AntiprismSpec::new(n, a, (lo + (hi - lo) * t).min(hi)).unwrap();
        let v = antiprism_volume(&spec, &quad()).unwrap();
        prop_assert!(v.value >= 0.0 && v.value <= SPHERE_VOLUME);
        prop_assert!(v.error_bound >= 0.0 && v.error_bound <= quad().target(v.value));
    }

    #[test]
    fn integration_paths_agree(n in 2u32..=8, a_frac in 0.05..0.95f64, t in 0.05..0.95f64) {
        let spec = spec_at(n, a_frac, t);
        let vertical = antiprism_volume(&spec, &quad()).unwrap().value;
        let horizontal = antiprism_volume_along_a(&spec, &quad()).unwrap().value;
        prop_assert!((vertical - horizontal).abs() <= 2e-10 * vertical.max(1.0),
            "{:?}: {} vs {}", spec, vertical, horizontal);
    }

    #[test]
    fn dihedrals_match_coordinates(n in 2u32..=12, a_frac in 0.02..0.98f64, t in 0.02..0.98f64) {
        let spec = spec_at(n, a_frac, t);
        let measured = measured_dihedrals(&polytope(&spec).unwrap()).unwrap();
        let formula = dihedral_angles(&spec).unwrap();
        prop_assert!((measured.a_edge - formula.a_edge).abs() <= 1e-9);
        prop_assert!((measured.c_edge - formula.c_edge).abs() <= 1e-9);
    }

    #[test]
    fn both_tetra_forms_agree(frac in 0.0..=1.0f64) {
        let lo = (1.0f64 / 3.0).acos();
        let angle = lo + (PI - lo) * frac;
        let by_angle = tetra_volume_by_angle(angle, &quad()).unwrap().value;
        let by_edge = tetra_volume_by_edge(tetra_edge_from_angle(angle).unwrap(), &quad()).unwrap().value;
        prop_assert!((by_angle - by_edge).abs() <= 2e-10);
    }
}
