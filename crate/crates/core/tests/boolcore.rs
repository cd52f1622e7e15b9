use krwlab::boolcore::{
    apply_rowwise, binary_entropy, binomial_entropy_bounds, build_parity_formula, cosets, eval_composition,
    find_linear_code, BitString, BooleanMatrix, Depth, LinearCode, TruthTable,
};

fn mat(rows: usize, cols: usize, s: &str) -> BooleanMatrix {
    BooleanMatrix::parse(rows, cols, s).unwrap()
}

#[test]
fn composition_evaluation() {
    let (and, or) = (TruthTable::and(2), TruthTable::or(2));
    assert!(!eval_composition(&and, &or, &mat(2, 2, "10/00")).unwrap());
    assert!(eval_composition(&and, &or, &mat(2, 2, "10/01")).unwrap());
    let one = TruthTable::constant(2, true);
    for f in TruthTable::all(2) {
        for x in BooleanMatrix::all(2, 2) {
            assert_eq!(eval_composition(&f, &one, &x).unwrap(), f.eval(0b11));
        }
    }
}

#[test]
fn rowwise_application() {
    let v = apply_rowwise(&TruthTable::parity(2), &mat(2, 2, "10/11")).unwrap();
    assert_eq!(v.bits(), vec![true, false]);
    let zero = apply_rowwise(&TruthTable::constant(2, false), &mat(3, 2, "11/01/10")).unwrap();
    assert_eq!(zero.weight(), 0);
    let v = apply_rowwise(&TruthTable::or(2), &mat(3, 2, "00/01/11")).unwrap();
    assert_eq!(v.bits(), vec![false, true, true]);
    assert!(apply_rowwise(&TruthTable::or(3), &mat(3, 2, "00/01/11")).is_err());
}

#[test]
fn entropy_values() {
    assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
    assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
    assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
    assert!((binary_entropy(0.25).unwrap() - 0.811_278_124_459_132_9).abs() < 1e-12);
    assert!(binary_entropy(1.5).is_err());

    let b = binomial_entropy_bounds(4, 2).unwrap();
    assert_eq!(b.exact, 6);
    assert!((b.lower - 16.0 / 5.0).abs() < 1e-9 && (b.upper - 16.0).abs() < 1e-9);
    let b = binomial_entropy_bounds(8, 4).unwrap();
    assert_eq!(b.exact, 70);
    assert!((b.lower - 256.0 / 9.0).abs() < 1e-9 && (b.upper - 256.0).abs() < 1e-9);
    let b = binomial_entropy_bounds(7, 0).unwrap();
    assert_eq!(b.exact, 1);
    assert!((b.lower - 1.0 / 8.0).abs() < 1e-12 && (b.upper - 1.0).abs() < 1e-12);
}

#[test]
fn parity_formulas() {
    let one = build_parity_formula(1);
    assert_eq!((one.size(), one.depth()), (1, Depth::Finite(0)));
    assert_eq!(build_parity_formula(2).size(), 4);
    assert_eq!(build_parity_formula(2).truth_table(2), TruthTable::parity(2));
    assert_eq!(build_parity_formula(4).size(), 16);
}

#[test]
fn linear_codes() {
    for m in 1..=6 {
        let found = find_linear_code(m, m).unwrap();
        assert_eq!(found.code.dimension(), 1);
        assert_eq!(found.code.codewords(), LinearCode::repetition(m).codewords());
    }
    let hamming = find_linear_code(7, 3).unwrap();
    assert!(hamming.code.dimension() >= 4);
    assert!(hamming.code.distance().unwrap() >= 3);
    let rep4 = find_linear_code(4, 4).unwrap().code;
    let mut words = rep4.codewords();
    words.sort();
    assert_eq!(words, vec![0b0000, 0b1111]);
}

#[test]
fn coset_representatives() {
    let full = LinearCode::new(3, vec![0b100, 0b010, 0b001]).unwrap();
    assert_eq!(cosets(&full).unwrap().len(), 1);
    let rep = LinearCode::repetition(4);
    let reps = cosets(&rep).unwrap();
    assert_eq!(reps.len(), 8);
    // Every word sits in exactly one coset, which has two elements.
    for v in 0..16u32 {
        assert_eq!(reps.iter().filter(|&&r| rep.same_coset(r, v)).count(), 1);
        assert!(rep.same_coset(v, v ^ 0b1111));
    }
    for a in 0..16u32 {
        for b in 0..16u32 {
            assert_eq!(rep.same_coset(a, b), rep.contains(a ^ b));
        }
    }
}

#[test]
fn msb_first_conventions() {
    let x = BitString::new(3, 0b100);
    assert!(x.bit(0) && !x.bit(2));
    assert_eq!(x.to_string(), "100");
    assert_eq!(TruthTable::and(2).to_hex(), "8");
    assert_eq!(TruthTable::parity(2).to_hex(), "6");
    assert!(TruthTable::literal(2, 0).eval(0b10));
}
