use causet::distances::{
    cone_cell_volumes, distortion, dminus_lower_tdiam, dminus_upper, dr_metric, dtimes_upper,
    exact_min_distortion, local_search_min_distortion, order_correspondence, phi_times_metrics,
    tau_matrix, Correspondence,
};
use causet::rng::stream;
use causet::spacetime::{FlatCylinder, LightconeSquare, Model, Point, Spacetime};
use causet::sprinkling::{sprinkle, sprinkle_points};
use proptest::prelude::*;

fn plus(t: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    t.into_iter().map(|r| r.into_iter().map(|v| v.max(0.0)).collect()).collect()
}

fn models() -> Vec<Model> {
    vec![
        LightconeSquare.into(),
        FlatCylinder::new(1.0, 1).unwrap().into(),
        FlatCylinder::new(3.0, 1).unwrap().into(),
    ]
}

#[test]
fn local_search_finds_the_exact_optimum_on_five_point_nets() {
    let ms = models();
    for inst in 0..20u64 {
        let mx = &ms[inst as usize % 3];
        let my = &ms[(inst as usize / 3 + 1) % 3];
        let a = plus(tau_matrix(mx, &sprinkle_points(mx, 5, 100 + inst)).unwrap());
        let b = plus(tau_matrix(my, &sprinkle_points(my, 5, 200 + inst)).unwrap());
        let exact = exact_min_distortion(&a, &b).unwrap();
        let heur = local_search_min_distortion(&a, &b, &Correspondence::identity(5), 20_000, inst).unwrap();
        assert!(
            (exact.distortion - heur.distortion).abs() <= 1e-12,
            "instance {inst}: exact {} vs local {}",
            exact.distortion,
            heur.distortion
        );
        // the exact value really is attained
        assert_eq!(distortion(&exact.correspondence, &a, &b).unwrap(), exact.distortion);
    }
}

#[test]
fn exact_optimum_beats_every_bijection() {
    let m = FlatCylinder::new(2.0, 1).unwrap();
    let a = plus(tau_matrix(&m, &sprinkle_points(&m, 4, 1)).unwrap());
    let b = plus(tau_matrix(&LightconeSquare, &sprinkle_points(&LightconeSquare, 4, 2)).unwrap());
    let exact = exact_min_distortion(&a, &b).unwrap().distortion;
    let mut perm = [0, 1, 2, 3];
    let mut best = f64::INFINITY;
    // Heap's algorithm over all 24 bijections
    fn heap(k: usize, p: &mut [usize; 4], f: &mut dyn FnMut(&[usize; 4])) {
        if k == 1 {
            f(p);
            return;
        }
        for i in 0..k {
            heap(k - 1, p, f);
            if k % 2 == 0 { p.swap(i, k - 1) } else { p.swap(0, k - 1) }
        }
    }
    heap(4, &mut perm, &mut |p| {
        let c = Correspondence::new((0..4).map(|i| (i, p[i])).collect(), 4, 4).unwrap();
        best = best.min(distortion(&c, &a, &b).unwrap());
    });
    assert!(exact <= best + 1e-15);
}

#[test]
fn self_distance_is_zero_and_budget_only_helps() {
    for m in models() {
        for n in [4, 9] {
            let r = dminus_upper(&m, &m, n, 500, 7).unwrap();
            assert_eq!(r.report.estimate, 0.0);
        }
    }
    let x = FlatCylinder::new(1.0, 1).unwrap();
    let y = FlatCylinder::new(1.6, 1).unwrap();
    let mut last = f64::INFINITY;
    for budget in [0, 10, 100, 1000, 4000] {
        let r = dminus_upper(&x, &y, 10, budget, 3).unwrap();
        assert!(r.report.estimate >= 0.0);
        assert!(r.report.estimate <= last, "budget {budget}");
        last = r.report.estimate;
    }
}

#[test]
fn cylinders_of_different_height_are_far_apart() {
    let c1 = FlatCylinder::new(1.0, 1).unwrap();
    let c2 = FlatCylinder::new(2.0, 1).unwrap();
    assert_eq!(dminus_lower_tdiam(&c1, &c2), 1.0);
    // a net of C(2) containing a near-diameter pair
    let mut net_y = sprinkle_points(&c2, 4, 5);
    net_y.push(Point::new(&[0.0, 0.2]));
    net_y.push(Point::new(&[2.0, 0.2]));
    let net_x = sprinkle_points(&c1, 6, 6);
    let a = plus(tau_matrix(&c1, &net_x).unwrap());
    let b = plus(tau_matrix(&c2, &net_y).unwrap());
    assert!(exact_min_distortion(&a, &b).unwrap().distortion >= 1.0);
}

#[test]
fn worked_cone_metric_on_the_square() {
    let m = LightconeSquare;
    let x = Point::new(&[0.3, 0.3]);
    let y = Point::new(&[0.7, 0.7]);
    let n = 100_000;
    let cells = cone_cell_volumes(&m, &x, &y, n, 1).unwrap();
    let pp = cells.volume(0, 0);
    assert!((pp.value - 0.09).abs() <= 4.0 * pp.std_error);
    let total: u64 = cells.counts.iter().flatten().sum();
    assert_eq!(total, n);
    let d = dr_metric(&m, &x, &y, -1.0, n, 1).unwrap();
    assert!((d.value - 0.4f64.sqrt()).abs() <= 4.0 * d.std_error, "{d:?}");
}

#[test]
fn cell_formulas_match_direct_indicator_estimates() {
    let m = FlatCylinder::new(1.3, 1).unwrap();
    let mut rng = stream(17);
    for trial in 0..5u64 {
        let x = m.sample_uniform(&mut rng);
        let y = m.sample_uniform(&mut rng);
        let n = 60_000;
        let cells = dr_metric(&m, &x, &y, -1.0, n, trial).unwrap();
        let d0 = dr_metric(&m, &x, &y, 0.0, n, trial).unwrap();
        // independent samples: indicator of the past symmetric difference and
        // the squared half-difference of the causal signs
        let mut r2 = stream(1000 + trial);
        let (mut sym, mut sgn) = (0.0, 0.0);
        for _ in 0..n {
            let z = m.sample_uniform(&mut r2);
            let sign = |p: &Point| -> f64 {
                if m.leq(&z, p) {
                    -1.0
                } else if m.leq(p, &z) {
                    1.0
                } else {
                    0.0
                }
            };
            if m.leq(&z, &x) != m.leq(&z, &y) {
                sym += 1.0;
            }
            sgn += (0.5 * sign(&x) - 0.5 * sign(&y)).powi(2);
        }
        let p = sym / n as f64;
        let se = (p * (1.0 - p) / n as f64).sqrt();
        let sq = cells.value.powi(2);
        let sq_se = 2.0 * cells.value * cells.std_error;
        assert!((sq - p).abs() <= 4.0 * sq_se.hypot(se) + 1e-12, "past symmetric difference {sq} vs {p}");
        let q = sgn / n as f64;
        let q_se = (q * (1.0 - q).max(0.0) / n as f64).sqrt();
        let sq0 = d0.value.powi(2);
        assert!((sq0 - q).abs() <= 4.0 * (2.0 * d0.value * d0.std_error).hypot(q_se) + 1e-12, "{sq0} vs {q}");
    }
}

#[test]
fn cone_metrics_are_symmetric_and_satisfy_the_triangle_inequality() {
    for m in models() {
        let net = sprinkle_points(&m, 12, 3);
        let phi = phi_times_metrics(&m, &net, 20_000, 4).unwrap();
        let mut rng = stream(5);
        for c in 0..3 {
            let d = &phi.metrics[c].d;
            let se = &phi.std_errors[c];
            for i in 0..12 {
                assert_eq!(d[i][i], 0.0);
                for j in 0..12 {
                    assert_eq!(d[i][j], d[j][i]);
                }
            }
            for _ in 0..100 {
                use rand::Rng;
                let (i, j, k) = (rng.random_range(0..12), rng.random_range(0..12), rng.random_range(0..12));
                let sigma = (se[i][k].powi(2) + se[i][j].powi(2) + se[j][k].powi(2)).sqrt();
                assert!(d[i][k] <= d[i][j] + d[j][k] + 3.0 * sigma);
            }
        }
    }
}

#[test]
fn shared_correspondence_is_at_least_the_separate_minima() {
    let m = LightconeSquare;
    let s = sprinkle(&m, 60, 1).unwrap();
    let net_x = sprinkle_points(&m, 5, 2);
    let net_y = sprinkle_points(&m, 5, 3);
    let corr = order_correspondence(&m, &s, &net_x, &m, &s, &net_y).unwrap();
    let px = phi_times_metrics(&m, &net_x, 10_000, 4).unwrap();
    let py = phi_times_metrics(&m, &net_y, 10_000, 4).unwrap();
    let d = dtimes_upper(&corr.correspondence, &px, &py, Some(1000), 0).unwrap();
    let ind = d.independent.unwrap();
    assert!(d.shared >= ind.iter().cloned().fold(0.0, f64::max) - 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn identity_has_zero_distortion(n in 1usize..10, seed in any::<u64>()) {
        let m = FlatCylinder::new(1.7, 1).unwrap();
        let t = tau_matrix(&m, &sprinkle_points(&m, n, seed)).unwrap();
        prop_assert_eq!(distortion(&Correspondence::identity(n), &t, &t).unwrap(), 0.0);
    }
}
