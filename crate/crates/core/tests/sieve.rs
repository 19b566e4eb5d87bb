use std::time::Instant;

use trigonal_core::ff::{make_field, FieldElem};
use trigonal_core::par::Exec;
use trigonal_core::plane::{Family, FamilyKind, ProjPoint};
use trigonal_core::sieve::{closed_form_total, count_solutions, linear_system, run_sieve, OrbitRep};

fn pt(x: u64, y: u64, z: u64) -> OrbitRep {
    OrbitRep { degree: 1, point: ProjPoint { x: FieldElem(x), y: FieldElem(y), z: FieldElem(z) } }
}

fn split3() -> Family {
    Family::new(FamilyKind::Split, 3).unwrap()
}

fn rational_points(q: u64) -> Vec<[u64; 3]> {
    let mut out = Vec::new();
    for y in 0..q {
        for z in 0..q {
            out.push([1, y, z]);
        }
    }
    for z in 0..q {
        out.push([0, 1, z]);
    }
    out
}

fn det3(a: [u64; 3], b: [u64; 3], c: [u64; 3], q: u64) -> u64 {
    let t = |i: usize, j: usize, k: usize| (a[i] * b[j] % q) * c[k] % q;
    let pos = t(0, 1, 2) + t(1, 2, 0) + t(2, 0, 1);
    let neg = t(2, 1, 0) + t(0, 2, 1) + t(1, 0, 2);
    (pos + 3 * q - neg) % q
}

fn subsets(n: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for i in 0..n {
        let extra: Vec<Vec<usize>> =
            out.iter().filter(|s| s.len() < max).map(|s| s.iter().copied().chain([i]).collect()).collect();
        out.extend(extra);
    }
    out
}

/// No three of `S ∪ {P}` collinear through `P` and no four of `S` on a line.
fn general_position(pts: &[[u64; 3]], q: u64) -> bool {
    let p = [0, 0, 1];
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if det3(p, pts[i], pts[j], q) == 0 {
                return false;
            }
        }
    }
    if pts.len() == 4 {
        let collinear = (0..4).all(|k| det3(pts[(k + 1) % 4], pts[(k + 2) % 4], pts[(k + 3) % 4], q) == 0);
        if collinear {
            return false;
        }
    }
    true
}

#[test]
fn general_position_conditions_are_independent() {
    let q = 3;
    let pts = rational_points(q);
    let split = split3();
    let nonsplit = Family::new(FamilyKind::NonSplit, q).unwrap();
    let cusp = Family::new(FamilyKind::Cusp, q).unwrap();
    let mut checked = 0;
    for s in subsets(pts.len(), 4) {
        let chosen: Vec<[u64; 3]> = s.iter().map(|&i| pts[i]).collect();
        if !general_position(&chosen, q) {
            continue;
        }
        let reps: Vec<OrbitRep> = chosen.iter().map(|c| pt(c[0], c[1], c[2])).collect();
        let k = 3 * reps.len() as u32;
        assert_eq!(linear_system(&split, &reps).unwrap().rank() as u32, k, "{chosen:?}");
        assert_eq!(count_solutions(&split, &reps).unwrap(), q.pow(15 - k));
        assert_eq!(count_solutions(&nonsplit, &reps).unwrap(), q.pow(15 - k));
        if reps.len() <= 3 {
            assert_eq!(count_solutions(&cusp, &reps).unwrap(), q.pow(15 - k) - q.pow(14 - k));
        }
        checked += 1;
    }
    assert!(checked > 100);
}

#[test]
fn cusp_is_empty_with_two_points_on_a_line_through_p() {
    let q = 3;
    let pts = rational_points(q);
    let cusp = Family::new(FamilyKind::Cusp, q).unwrap();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if det3([0, 0, 1], pts[i], pts[j], q) == 0 {
                let reps = [pt(pts[i][0], pts[i][1], pts[i][2]), pt(pts[j][0], pts[j][1], pts[j][2])];
                assert_eq!(count_solutions(&cusp, &reps).unwrap(), 0);
            }
        }
    }
}

#[test]
fn degenerate_configurations() {
    let f = split3();
    let count = |s: &[OrbitRep]| count_solutions(&f, s).unwrap();
    // The tangent lines y = 0 and x = 0 pass through P.
    let on_y0 = [pt(1, 0, 0), pt(1, 0, 1), pt(1, 0, 2)];
    let on_x0 = [pt(0, 1, 0), pt(0, 1, 1)];
    // P and two more points on a line, n points elsewhere.
    assert_eq!(count(&on_y0[..2]), 3u64.pow(10));
    assert_eq!(count(&[on_y0[0], on_y0[1], pt(1, 1, 1)]), 3u64.pow(7));
    // P and three more points on a line.
    assert_eq!(count(&on_y0), 3u64.pow(9));
    assert_eq!(count(&[on_y0[0], on_y0[1], on_y0[2], pt(1, 1, 1)]), 3u64.pow(6));
    // P with three points on one line and two on another.
    assert_eq!(count(&[on_y0[0], on_y0[1], on_y0[2], on_x0[0], on_x0[1]]), 3u64.pow(4));
    // P with two points on each of two lines.
    assert_eq!(count(&[on_y0[0], on_y0[1], on_x0[0], on_x0[1]]), 3u64.pow(5));
    // A line through P that is not a tangent cannot carry two more singular points.
    assert_eq!(count(&[pt(1, 1, 0), pt(1, 1, 1)]), 0);
    // Four points on z = 0.
    let z0 = [pt(1, 0, 0), pt(0, 1, 0), pt(1, 1, 0), pt(1, 2, 0)];
    assert_eq!(count(&z0), 3u64.pow(5));
    // ... plus a point making three collinear with P.
    assert_eq!(count(&[z0[0], z0[1], z0[2], z0[3], pt(1, 0, 1)]), 3u64.pow(3));
    // Five points on z = 0: three rational and a conjugate pair.
    let fd9 = make_field(3, 1, 2).unwrap();
    let pair = OrbitRep { degree: 2, point: ProjPoint { x: FieldElem(1), y: fd9.generator(), z: FieldElem(0) } };
    assert_eq!(count(&[z0[0], z0[1], z0[2], pair]), 3u64.pow(4));
}

#[test]
fn totals_at_three_match_closed_forms() {
    let start = Instant::now();
    let expected =
        [(FamilyKind::Split, 72 * 118098), (FamilyKind::NonSplit, 144 * 59049), (FamilyKind::Cusp, 108 * 52488)];
    for (kind, value) in expected {
        assert_eq!(closed_form_total(kind, 3), value);
        let report = run_sieve(kind, 3, Exec::default()).unwrap();
        assert!(report.total_matches(), "{report:?}");
        assert_eq!(report.per_w[0] as u64, Family::new(kind, 3).unwrap().size());
    }
    assert!(start.elapsed().as_secs() < 600);
}

#[test]
fn thread_count_does_not_change_sums() {
    let seq = run_sieve(FamilyKind::Cusp, 2, Exec::Sequential).unwrap();
    let par = run_sieve(FamilyKind::Cusp, 2, Exec::with_threads(4)).unwrap();
    assert_eq!(seq, par);
}
