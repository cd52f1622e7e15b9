use krwlab::bits::IndexSet;
use krwlab::boolcore::{BitString, Depth, TruthTable};
use krwlab::detcc::{
    check_subadditivity, exact_cc, exact_protocol_size, find_fortified_subset, formula_complexity_rect, formula_oracle,
    is_fortified, obvious_protocol, optimal_protocol, validate_protocol, Player, ProtocolTree, SearchBudget,
    MAX_SIZE_CAP,
};
use krwlab::relations::{compose_standard, compose_strong, kw, kw_rectangle, Output};

fn side(f: &TruthTable, v: bool) -> Vec<BitString> {
    f.preimage(v).into_iter().map(|x| BitString::new(f.arity(), x)).collect()
}

fn budget() -> SearchBudget {
    SearchBudget::default()
}

#[test]
fn kw_values_for_two_bit_gates() {
    let (and, xor) = (TruthTable::and(2), TruthTable::parity(2));
    assert_eq!(exact_cc(&kw(&and).unwrap(), budget()).unwrap(), Depth::Finite(1));
    assert_eq!(exact_cc(&kw(&xor).unwrap(), budget()).unwrap(), Depth::Finite(2));
    assert_eq!(exact_protocol_size(&kw(&and).unwrap(), budget()).unwrap(), 2);
    assert_eq!(exact_protocol_size(&kw(&xor).unwrap(), budget()).unwrap(), 4);

    let mono = kw_rectangle(&["11".parse().unwrap()], &["00".parse().unwrap()]).unwrap();
    assert_eq!(exact_cc(&mono, budget()).unwrap(), Depth::Finite(0));
    assert_eq!(exact_protocol_size(&mono, budget()).unwrap(), 1);
    let leaf = ProtocolTree::leaf(IndexSet::full(1), IndexSet::full(1), Output::Coord(0));
    assert!(validate_protocol(&leaf, &mono).is_valid());
}

#[test]
fn bad_leaf_is_flagged() {
    let rel = kw(&TruthTable::parity(2)).unwrap();
    let leaf = ProtocolTree::leaf(IndexSet::full(rel.x_len()), IndexSet::full(rel.y_len()), Output::Coord(0));
    assert!(!validate_protocol(&leaf, &rel).is_valid());
}

#[test]
fn rectangle_complexities() {
    let xor = TruthTable::parity(2);
    assert_eq!(formula_complexity_rect(&[], &side(&xor, false), budget()).unwrap(), (0, Depth::NegInf));
    assert_eq!(formula_complexity_rect(&side(&xor, true), &[], budget()).unwrap(), (0, Depth::NegInf));
    assert_eq!(
        formula_complexity_rect(&side(&xor, true), &side(&xor, false), budget()).unwrap(),
        (4, Depth::Finite(2))
    );
    let (l, d) = formula_complexity_rect(&["101".parse().unwrap()], &["011".parse().unwrap()], budget()).unwrap();
    assert_eq!((l, d), (1, Depth::Finite(0)));
}

#[test]
fn oracle_values() {
    let lit = formula_oracle(&TruthTable::literal(1, 0), MAX_SIZE_CAP).unwrap();
    assert_eq!((lit.size, lit.depth), (Some(1), Depth::Finite(0)));
    let and = formula_oracle(&TruthTable::and(2), MAX_SIZE_CAP).unwrap();
    assert_eq!((and.size, and.depth), (Some(2), Depth::Finite(1)));
    let xor = formula_oracle(&TruthTable::parity(2), MAX_SIZE_CAP).unwrap();
    assert_eq!((xor.size, xor.depth), (Some(4), Depth::Finite(2)));
    let xor3 = formula_oracle(&TruthTable::parity(3), MAX_SIZE_CAP).unwrap();
    assert_eq!(xor3.size, Some(10));
}

#[test]
fn obvious_protocol_for_and_of_and() {
    let and = TruthTable::and(2);
    let p = optimal_protocol(&kw(&and).unwrap(), budget()).unwrap();
    let composed = obvious_protocol(&and, &and, &p, &p).unwrap();
    assert!(composed.depth() <= 2);
    assert_eq!(composed.depth(), 2 * p.depth());
    assert!(validate_protocol(&composed, &compose_standard(&and, &and).unwrap()).is_valid());
    assert!(validate_protocol(&composed, &compose_strong(&and, &and).unwrap()).is_valid());
}

#[test]
fn subadditivity() {
    let xor = TruthTable::parity(2);
    let (a, b) = (side(&xor, true), side(&xor, false));
    let trivial = check_subadditivity(&a, &b, &a, Player::Alice, budget()).unwrap();
    assert!(trivial.holds);
    assert_eq!((trivial.whole, trivial.part1), (trivial.part0, 0));
    for k in 0..a.len() {
        let r = check_subadditivity(&a, &b, &a[k..=k], Player::Alice, budget()).unwrap();
        assert!(r.holds && r.whole <= r.part0 + r.part1);
    }
    let maj = TruthTable::majority(3);
    let (a, b) = (side(&maj, true), side(&maj, false));
    for mask in 0u32..1 << a.len() {
        let part: Vec<_> = (0..a.len()).filter(|i| mask >> i & 1 == 1).map(|i| a[i]).collect();
        assert!(check_subadditivity(&a, &b, &part, Player::Alice, budget()).unwrap().holds);
        let part: Vec<_> = (0..b.len()).filter(|i| mask >> i & 1 == 1).map(|i| b[i]).collect();
        assert!(check_subadditivity(&a, &b, &part, Player::Bob, budget()).unwrap().holds);
    }
}

#[test]
fn fortification() {
    let xor = TruthTable::parity(2);
    let (a, b) = (side(&xor, true), side(&xor, false));
    assert!(is_fortified(&a[..1], &b, 1.0, Player::Alice, budget()).unwrap());
    assert!(is_fortified(&a, &b, 0.0, Player::Alice, budget()).unwrap());
    let single = find_fortified_subset(&a[..1], &b, 0.5, Player::Alice, budget()).unwrap();
    assert_eq!(single.subset, a[..1].to_vec());

    let found = find_fortified_subset(&a, &b, 0.125, Player::Alice, budget()).unwrap();
    assert!(4 * found.complexity >= found.full_complexity);
    assert!(is_fortified(&found.subset, &b, 0.125, Player::Alice, budget()).unwrap());

    // A side whose halves are cheap: {x : x1 = 1} against {000}.
    let a: Vec<BitString> = ["100", "101", "110", "111", "011"].iter().map(|s| s.parse().unwrap()).collect();
    let b: Vec<BitString> = vec!["000".parse().unwrap()];
    assert!(!is_fortified(&a, &b, 0.99, Player::Alice, budget()).unwrap());
    let already = find_fortified_subset(&a[..1], &b, 1.0, Player::Alice, budget()).unwrap();
    assert_eq!(already.subset, a[..1].to_vec());
}
