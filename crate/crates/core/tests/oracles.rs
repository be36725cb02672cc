use mirror_core::builtin;
use mirror_core::invariants::invariants_default;
use mirror_core::oracle;
use mirror_core::rational::{q, q_frac};
use mirror_core::toric::CurveClass;

fn k(manifold: &str, bundle: &str, d_max: u32) -> Vec<mirror_core::rational::Q> {
    let m = builtin::manifold(manifold).unwrap();
    let r = invariants_default(&m, &builtin::bundle(bundle).unwrap(), d_max).unwrap();
    (1..=d_max as i64).map(|d| r.table.k[&CurveClass(vec![d])].clone()).collect()
}

#[test]
fn degree_one_matches_lines() {
    assert_eq!(k("P4", "quintic", 1)[0], oracle::lines_convex(4, 5).unwrap());
    assert_eq!(k("P3", "quartic_P3", 1)[0], oracle::lines_convex(3, 4).unwrap());
    assert_eq!(k("P2", "cubic_P2", 1)[0], oracle::lines_convex(2, 3).unwrap());
    assert_eq!(k("P2", "local_P2", 1)[0], oracle::lines_concave(2, 3).unwrap());
    assert_eq!(k("P1", "local_P1_O-2", 1)[0], oracle::lines_concave(1, 2).unwrap());
}

#[test]
fn degree_two_matches_graph_sums() {
    for (m, b, n) in [
        ("P4", "quintic", 4),
        ("P3", "quartic_P3", 3),
        ("P2", "cubic_P2", 2),
        ("P2", "local_P2", 2),
        ("P1", "conifold", 1),
        ("P1", "local_P1_O-2", 1),
    ] {
        let spec = builtin::bundle(b).unwrap();
        let pipeline = k(m, b, 2);
        for d in 1..=2 {
            assert_eq!(pipeline[d as usize - 1], oracle::graph_sum_kd(n, &spec, d).unwrap(), "{b} d={d}");
        }
    }
}

#[test]
fn oracles_agree_with_each_other() {
    let quintic = builtin::bundle("quintic").unwrap();
    assert_eq!(oracle::graph_sum_kd(4, &quintic, 1).unwrap(), oracle::lines_convex(4, 5).unwrap());
    let local = builtin::bundle("local_P2").unwrap();
    assert_eq!(oracle::graph_sum_kd(2, &local, 1).unwrap(), oracle::lines_concave(2, 3).unwrap());
}

#[test]
fn frozen_values() {
    assert_eq!(k("P2", "local_P2", 2), vec![q(3), q_frac(-45, 8)]);
    assert_eq!(k("P2", "cubic_P2", 2), vec![q(21), q_frac(189, 8)]);
    assert_eq!(k("P3", "quartic_P3", 2), vec![q(320), q(5056)]);
}
