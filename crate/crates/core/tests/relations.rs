use krwlab::boolcore::{BitString, BooleanMatrix, TruthTable};
use krwlab::relations::{compose_standard, compose_strong, kw, kw_rectangle, mux, mux_compose, Output, Point};

fn bits(s: &str) -> BitString {
    s.parse().unwrap()
}

fn mat(s: &str) -> Point {
    Point::Matrix(BooleanMatrix::parse(2, 2, s).unwrap())
}

#[test]
fn kw_rectangles() {
    let r = kw_rectangle(&[bits("11")], &[bits("00")]).unwrap();
    assert_eq!(r.valid_outputs(0, 0), vec![Output::Coord(0), Output::Coord(1)]);
    let r = kw_rectangle(&[bits("10")], &[bits("01")]).unwrap();
    assert_eq!(r.valid_outputs(0, 0).len(), 2);
    assert!(kw_rectangle(&[bits("10")], &[bits("10")]).is_err());

    let and = TruthTable::and(2);
    let a: Vec<_> = and.preimage(true).into_iter().map(|v| BitString::new(2, v)).collect();
    let b: Vec<_> = and.preimage(false).into_iter().map(|v| BitString::new(2, v)).collect();
    let rect = kw_rectangle(&a, &b).unwrap();
    let rel = kw(&and).unwrap();
    assert_eq!((rect.x_points(), rect.y_points()), (rel.x_points(), rel.y_points()));
    for i in 0..rel.x_len() {
        for j in 0..rel.y_len() {
            assert_eq!(rect.valid_mask(i, j), rel.valid_mask(i, j));
        }
    }
}

#[test]
fn strong_and_standard_compositions() {
    let (and, or) = (TruthTable::and(2), TruthTable::or(2));
    let strong = compose_strong(&and, &or).unwrap();
    let standard = compose_standard(&and, &or).unwrap();
    let (x, y) = (mat("10/01"), mat("00/01"));
    let (xi, yi) = (strong.x_index(&x).unwrap(), strong.y_index(&y).unwrap());
    assert_eq!(strong.valid_outputs(xi, yi), vec![Output::Entry(0, 0)]);
    let (sxi, syi) = (standard.x_index(&x).unwrap(), standard.y_index(&y).unwrap());
    assert!(standard.valid_outputs(sxi, syi).contains(&Output::Entry(0, 0)));

    // Same domain, and strong solutions are standard ones, strictly fewer overall.
    assert_eq!(strong.x_points(), standard.x_points());
    let (mut s_count, mut t_count) = (0, 0);
    for i in 0..strong.x_len() {
        for j in 0..strong.y_len() {
            assert_ne!(strong.x_point(i), strong.y_point(j));
            for o in strong.valid_outputs(i, j) {
                assert!(standard.solves(i, j, &o));
            }
            s_count += strong.valid_outputs(i, j).len();
            t_count += standard.valid_outputs(i, j).len();
        }
    }
    assert!(s_count < t_count);

    let xor = TruthTable::parity(2);
    assert!(compose_strong(&xor, &xor).unwrap().is_total());
}

#[test]
fn multiplexor() {
    let r = mux(2).unwrap();
    assert!(r.is_total());
    let xor = TruthTable::parity(2);
    let x = Point::Mux { func: xor.clone(), input: bits("10") };
    let y = Point::Mux { func: xor.clone(), input: bits("00") };
    let (xi, yi) = (r.x_index(&x).unwrap(), r.y_index(&y).unwrap());
    assert_eq!(r.valid_outputs(xi, yi), vec![Output::Coord(0)]);

    // Different functions on the same string: only ⊥ is valid.
    let and = TruthTable::and(2);
    for i in 0..r.x_len() {
        for j in 0..r.y_len() {
            let (p, q) = (r.x_point(i), r.y_point(j));
            if p.func() != q.func() && p.string() == q.string() {
                assert_eq!(r.valid_outputs(i, j), vec![Output::Bottom]);
            }
        }
    }
    let x = Point::Mux { func: and.clone(), input: bits("11") };
    assert!(r.x_index(&x).is_some());
}

#[test]
fn multiplexor_composition() {
    let and = TruthTable::and(2);
    let strong = mux_compose(&and, 2, true).unwrap();
    let standard = mux_compose(&and, 2, false).unwrap();
    assert!(strong.is_total());
    for i in 0..strong.x_len() {
        for j in 0..strong.y_len() {
            let valid = strong.valid_outputs(i, j);
            if strong.x_point(i).func() == strong.y_point(j).func() {
                assert!(valid.iter().any(|o| *o != Output::Bottom));
                assert!(!valid.contains(&Output::Bottom));
            }
            for o in valid {
                assert!(standard.solves(i, j, &o));
            }
        }
    }
}
