use krwlab::ndcc::{
    graph_eq, graph_ineq, graph_invariants, min_rect_cover, verify_graph_eq_ncc, verify_graph_ineq_bounds,
    verify_ncc_vs_concc, Cell, PromiseMatrix, SimpleGraph,
};
use krwlab::report::Status;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn cover_examples() {
    assert_eq!(min_rect_cover(&PromiseMatrix::new(3, 4, Cell::Yes)).unwrap().count, 1);
    for t in 1..=6 {
        let c = min_rect_cover(&PromiseMatrix::equality(t)).unwrap();
        assert_eq!(c.count, t);
        assert!((c.log2 - (t as f64).log2()).abs() < 1e-12);
    }
    assert_eq!(min_rect_cover(&graph_eq(&SimpleGraph::empty(5))).unwrap().count, 1);
    assert_eq!(min_rect_cover(&PromiseMatrix::new(2, 2, Cell::No)).unwrap().count, 0);
}

#[test]
fn graph_matrices() {
    assert_eq!(graph_eq(&SimpleGraph::complete(2)), PromiseMatrix::equality(2));
    let empty = graph_eq(&SimpleGraph::empty(4));
    assert_eq!((empty.count(Cell::Yes), empty.count(Cell::No), empty.count(Cell::DontCare)), (4, 0, 12));
    let c5 = graph_eq(&SimpleGraph::cycle(5));
    assert_eq!((c5.count(Cell::Yes), c5.count(Cell::No), c5.count(Cell::DontCare)), (5, 10, 10));
    for i in 0..5 {
        for j in 0..5 {
            assert_eq!(c5.get(i, j), c5.get(j, i));
        }
    }
    let ineq = graph_ineq(&SimpleGraph::cycle(5));
    assert_eq!(ineq.count(Cell::No), 5);
}

#[test]
fn invariants() {
    assert_eq!(graph_invariants(&SimpleGraph::complete(3)).unwrap(), (3, 3, 1));
    assert_eq!(graph_invariants(&SimpleGraph::cycle(5)).unwrap(), (3, 2, 2));
    assert_eq!(graph_invariants(&SimpleGraph::empty(6)).unwrap(), (1, 1, 6));
    assert_eq!(graph_invariants(&SimpleGraph::petersen()).unwrap(), (3, 2, 4));
}

#[test]
fn graph_equality_identity() {
    let k3 = verify_graph_eq_ncc(&SimpleGraph::complete(3)).unwrap();
    assert!(k3.passed(), "{}", k3.detail);
    assert!(verify_graph_eq_ncc(&SimpleGraph::empty(3)).unwrap().passed());
    // Induced subgraphs of the Petersen graph.
    let p = SimpleGraph::petersen();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let keep: Vec<usize> = (0..10).filter(|_| rng.gen_bool(0.8)).collect();
        let edges: Vec<(usize, usize)> = p
            .edges()
            .into_iter()
            .filter_map(|(u, v)| Some((keep.iter().position(|&k| k == u)?, keep.iter().position(|&k| k == v)?)))
            .collect();
        let g = SimpleGraph::from_edges(keep.len(), &edges).unwrap();
        assert!(verify_graph_eq_ncc(&g).unwrap().passed());
    }
}

#[test]
fn graph_inequality_bracket() {
    let k4 = verify_graph_ineq_bounds(&SimpleGraph::complete(4)).unwrap();
    assert!(k4.passed(), "{}", k4.detail);
    let cover = min_rect_cover(&graph_ineq(&SimpleGraph::complete(4))).unwrap().count;
    assert!((2..=4).contains(&cover));
    assert!(verify_graph_ineq_bounds(&SimpleGraph::complete(2)).unwrap().passed());
    assert_eq!(verify_graph_ineq_bounds(&SimpleGraph::empty(3)).unwrap().status, Status::Vacuous);
}

#[test]
fn cover_versus_complement_cover() {
    let eq4 = PromiseMatrix::equality(4);
    assert_eq!(min_rect_cover(&eq4.negate()).unwrap().count, 4);
    assert!(verify_ncc_vs_concc(&eq4).unwrap().passed());
    assert!(verify_ncc_vs_concc(&PromiseMatrix::new(3, 3, Cell::Yes)).unwrap().passed());
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20 {
        let bits: u64 = rng.gen();
        let p = PromiseMatrix::from_bool(6, 6, |i, j| bits >> (i * 6 + j) & 1 == 1);
        assert!(verify_ncc_vs_concc(&p).unwrap().passed());
    }
    assert!(verify_ncc_vs_concc(&graph_eq(&SimpleGraph::cycle(4))).is_err());
}
