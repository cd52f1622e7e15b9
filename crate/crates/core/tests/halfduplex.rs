use krwlab::boolcore::TruthTable;
use krwlab::detcc::{optimal_protocol, SearchBudget};
use krwlab::halfduplex::*;
use krwlab::relations::{kw, mux_compose, Output};

fn and2() -> TruthTable {
    TruthTable::and(2)
}

#[test]
fn lifted_standard_protocol_behaves_identically() {
    for f in [TruthTable::and(2), TruthTable::parity(2), TruthTable::majority(3)] {
        let rel = kw(&f).unwrap();
        let std = optimal_protocol(&rel, SearchBudget::default()).unwrap();
        let hd = lift_standard(&std);
        assert!(validate_hd(&hd).is_valid(), "{:?}", validate_hd(&hd));
        assert_eq!(hd.depth(), std.depth());
        assert!(check_solves(&hd, &rel).unwrap().is_valid());
        for x in 0..rel.x_len() as u32 {
            for y in 0..rel.y_len() as u32 {
                let traces = execute_all(&hd, x, y).unwrap();
                assert_eq!(traces.len(), 1);
                assert!(traces[0].rounds.iter().all(|r| r.class == RoundClass::Classical));
                let (bits, out) = std.run(x, y).unwrap();
                assert_eq!(traces[0].output, out);
                // The full transcript recovers the standard leaf rectangle.
                let cons = consistent_inputs(&hd, &bits).unwrap();
                let leaf = std.node_at(&bits).unwrap();
                assert_eq!((cons.x, cons.y), (leaf.x.clone(), leaf.y.clone()));
            }
        }
    }
}

#[test]
fn and2_lift_has_depth_one() {
    let rel = kw(&and2()).unwrap();
    let hd = lift_standard(&optimal_protocol(&rel, SearchBudget::default()).unwrap());
    assert_eq!(hd.depth(), 1);
    let empty = consistent_inputs(&hd, &[]).unwrap();
    assert_eq!((empty.x.len(), empty.y.len()), (rel.x_len(), rel.y_len()));
}

#[test]
fn mismatched_depths_are_flagged() {
    let alice =
        HdTree::from_strategy(1, 4, |_, v| if v.is_empty() { Move::Send(true) } else { Move::Halt(Output::Bottom) })
            .unwrap();
    let bob = HdTree::from_strategy(1, 4, |_, v| if v.len() < 2 { Move::Receive } else { Move::Halt(Output::Bottom) })
        .unwrap();
    let p = HdProtocol { x_len: 1, y_len: 1, alice, bob };
    let report = validate_hd(&p);
    assert!(report.violations.iter().any(|v| v.contains("depths differ")), "{report:?}");
}

#[test]
fn adversary_desynchronization_is_flagged() {
    // Both receive in round 1; Alice stops after hearing 0, Bob never does.
    let alice = HdTree::from_strategy(1, 4, |_, v| match v {
        [] => Move::Receive,
        [Edge::Rc(false)] => Move::Halt(Output::Bottom),
        [_] => Move::Receive,
        _ => Move::Halt(Output::Bottom),
    })
    .unwrap();
    let bob = HdTree::from_strategy(1, 4, |_, v| if v.len() < 2 { Move::Receive } else { Move::Halt(Output::Bottom) })
        .unwrap();
    let p = HdProtocol { x_len: 1, y_len: 1, alice, bob };
    assert_eq!(p.alice.depth(), p.bob.depth());
    let report = validate_hd(&p);
    assert!(report.violations.iter().any(|v| v.contains("halts before")), "{report:?}");
    // Silent rounds branch on both adversary bits.
    assert!(execute_all(&p, 0, 0).is_err());
}

#[test]
fn silent_rounds_branch_four_ways() {
    let recv_then_halt = |_: u32, v: &[krwlab::halfduplex::Edge]| {
        if v.len() < 2 {
            Move::Receive
        } else {
            Move::Halt(Output::Bottom)
        }
    };
    let p = HdProtocol {
        x_len: 1,
        y_len: 1,
        alice: HdTree::from_strategy(1, 2, recv_then_halt).unwrap(),
        bob: HdTree::from_strategy(1, 2, recv_then_halt).unwrap(),
    };
    assert!(validate_hd(&p).is_valid());
    let traces = execute_all(&p, 0, 0).unwrap();
    assert_eq!(traces.len(), 16);
    assert!(traces.iter().all(|t| t.rounds.iter().all(|r| r.class == RoundClass::Silent && r.adversary.is_some())));
}

#[test]
fn both_sending_is_not_partially_half_duplex() {
    let rel = mux_compose(&and2(), 1, true).unwrap();
    let send_then_halt = |_: u32, v: &[Edge]| if v.is_empty() { Move::Send(false) } else { Move::Halt(Output::Bottom) };
    let p = HdProtocol {
        x_len: rel.x_len(),
        y_len: rel.y_len(),
        alice: HdTree::from_strategy(rel.x_len(), 1, send_then_halt).unwrap(),
        bob: HdTree::from_strategy(rel.y_len(), 1, send_then_halt).unwrap(),
    };
    assert!(validate_hd(&p).is_valid());
    assert!(!is_partially_hd(&p, &rel).unwrap());
    assert!(!check_solves(&p, &rel).unwrap().is_valid());
    assert!(is_partially_hd(&p, &kw(&and2()).unwrap()).is_err());
}

fn check_reduction(f: &TruthTable, n: usize, strong: bool) {
    let subs = optimal_sub_protocols(f, n, strong, SearchBudget::default()).unwrap();
    let red = reduction_transform(f, n, &subs, strong).unwrap();
    let p = &red.protocol;
    assert!(validate_hd(p).is_valid(), "{:?}", validate_hd(p));
    assert!(is_partially_hd(p, &red.relation).unwrap());
    assert!(check_solves(p, &red.relation).unwrap().is_valid());
    assert_eq!(p.depth(), red.expected_depth());
    // ⊥ only when the functions differ.
    for x in 0..red.relation.x_len() {
        for y in 0..red.relation.y_len() {
            if red.relation.x_point(x).func() == red.relation.y_point(y).func() {
                let o = outcomes(p, x as u32, y as u32).unwrap();
                assert!(!o.outputs.contains(&Output::Bottom));
            }
        }
    }
    // Transcript prefixes shrink the consistency sets, and each input sits in
    // exactly one consistent vertex.
    let mut pi = Vec::new();
    let mut prev = consistent_inputs(p, &pi).unwrap();
    for k in 0..p.depth() {
        pi.push(k % 3 == 0);
        let next = consistent_inputs(p, &pi).unwrap();
        assert!(next.x.is_subset(&prev.x) && next.y.is_subset(&prev.y));
        prev = next;
    }
}

#[test]
fn reduction_for_and2_strong() {
    check_reduction(&and2(), 2, true);
}

#[test]
fn reduction_for_xor2_strong() {
    check_reduction(&TruthTable::parity(2), 2, true);
}

#[test]
fn reduction_standard_mode_is_one_round_shorter() {
    check_reduction(&and2(), 1, false);
    let subs = optimal_sub_protocols(&and2(), 1, false, SearchBudget::default()).unwrap();
    let red = reduction_transform(&and2(), 1, &subs, false).unwrap();
    assert_eq!(red.protocol.depth(), red.c + red.index_bits + 2);
}

#[test]
fn reduction_requires_every_protocol() {
    let mut subs = optimal_sub_protocols(&and2(), 1, true, SearchBudget::default()).unwrap();
    let g = subs.keys().next().unwrap().clone();
    subs.remove(&g);
    assert!(reduction_transform(&and2(), 1, &subs, true).is_err());
}
