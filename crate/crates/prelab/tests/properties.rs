use proptest::prelude::*;

use prelab::grammar::{contracts, oracle_reaches, oracle_reduces, reduce, Lexicon, SimpleType};
use prelab::order::{full, members};
use prelab::prelation::{Galois, Prelation};
use prelab::Preorder;

fn preorder(max: usize) -> impl Strategy<Value = Preorder> {
    (1..=max).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..=n * 2).prop_map(move |g| Preorder::close(n, &g).unwrap())
    })
}

fn prelation(max: usize) -> impl Strategy<Value = Prelation> {
    (preorder(max), preorder(max)).prop_flat_map(|(a, b)| {
        let (n, m) = (a.size(), b.size());
        prop::collection::vec((0..n, 0..m), 0..=3).prop_map(move |g| Prelation::close(a.clone(), b.clone(), &g).unwrap())
    })
}

fn map(max: usize) -> impl Strategy<Value = Prelation> {
    (preorder(max), preorder(max)).prop_flat_map(|(a, b)| {
        let (n, m) = (a.size(), b.size());
        prop::collection::vec(0..m, n)
            .prop_filter_map("monotone functions only", move |f| Prelation::from_map(a.clone(), b.clone(), &f).ok())
    })
}

fn chain_of(dom: &Preorder, max: usize) -> impl Strategy<Value = (Prelation, Prelation)> {
    let dom = dom.clone();
    (preorder(max), preorder(max)).prop_flat_map(move |(b, c)| {
        let (n, m, k) = (dom.size(), b.size(), c.size());
        let dom = dom.clone();
        (prop::collection::vec((0..n, 0..m), 0..=3), prop::collection::vec((0..m, 0..k), 0..=3)).prop_map(
            move |(g1, g2)| {
                (
                    Prelation::close(dom.clone(), b.clone(), &g1).unwrap(),
                    Prelation::close(b.clone(), c.clone(), &g2).unwrap(),
                )
            },
        )
    })
}

fn valid(phi: &Prelation) -> bool {
    Prelation::from_rows(phi.dom().clone(), phi.cod().clone(), phi.rows().to_vec()).is_ok()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn closure_is_a_preorder(p in preorder(5)) {
        let n = p.size();
        for x in 0..n {
            prop_assert!(p.derr(x, x));
            for y in members(p.down(x)) {
                prop_assert_eq!(p.down(y) & !p.down(x), 0);
            }
        }
        prop_assert_eq!(p.opposite().opposite(), p.clone());
        let (q, class) = p.quotient();
        prop_assert!(q.is_antisymmetric());
        for x in 0..n {
            for y in 0..n {
                prop_assert_eq!(p.derr(x, y), q.derr(class[x], class[y]));
            }
        }
    }

    #[test]
    fn dagger_laws(phi in prelation(4)) {
        let dd = phi.ddag().ddag();
        prop_assert!(phi.is_subset(&dd));
        prop_assert_eq!(phi.ddag(), dd.ddag());
        prop_assert_eq!(phi.op_dual().op_dual(), phi.clone());
        prop_assert!(valid(&phi.ddag()));
        prop_assert!(valid(&phi.converse()));
        prop_assert!(valid(&phi.op_dual()));
    }

    #[test]
    fn composition_laws(phi in prelation(3)) {
        let id_a = Prelation::identity(phi.dom());
        let id_b = Prelation::identity(phi.cod());
        prop_assert_eq!(id_a.compose(&phi).unwrap(), phi.clone());
        prop_assert_eq!(phi.compose(&id_b).unwrap(), phi.clone());
        let empty = Prelation::empty(phi.cod().clone(), phi.cod().clone());
        prop_assert!(phi.compose(&empty).unwrap().is_empty());
        let t = Prelation::tensor(&phi, &phi).unwrap();
        prop_assert!(valid(&t));
    }

    #[test]
    fn composition_is_associative(
        (phi, psi) in preorder(3).prop_flat_map(|a| chain_of(&a, 3)),
        c2 in preorder(3),
        gens in prop::collection::vec((0..3usize, 0..3usize), 0..=3),
    ) {
        let k = psi.cod().size();
        let g: Vec<(usize, usize)> = gens.into_iter().filter(|&(x, y)| x < k && y < c2.size()).collect();
        let chi = Prelation::close(psi.cod().clone(), c2, &g).unwrap();
        let l = phi.compose(&psi).unwrap().compose(&chi).unwrap();
        let r = phi.compose(&psi.compose(&chi).unwrap()).unwrap();
        prop_assert!(valid(&l));
        prop_assert_eq!(l, r);
    }

    #[test]
    fn map_characterization(phi in prelation(3)) {
        let v = phi.is_map();
        let dag = phi.converse();
        let id_a = Prelation::identity(phi.dom());
        let id_b = Prelation::identity(phi.cod());
        prop_assert_eq!(v.total, id_a.is_subset(&phi.compose(&dag).unwrap()));
        prop_assert_eq!(v.single_valued, dag.compose(&phi).unwrap().is_subset(&id_b));
        prop_assert_eq!(v.representative.is_some(), v.total && v.single_valued);
    }

    #[test]
    fn converse_of_a_map(phi in map(4)) {
        let v = phi.is_map();
        let f = v.representative.expect("generated from a function");
        let dag = phi.converse();
        for a in 0..phi.dom().size() {
            prop_assert_eq!(phi.row(a), phi.cod().down(f[a]));
            for b in 0..phi.cod().size() {
                prop_assert_eq!(dag.get(b, a), phi.cod().derr(b, f[a]));
            }
        }
    }

    #[test]
    fn galois_connections(phi in prelation(3)) {
        let g = Galois::new(&phi);
        let (n, m) = (phi.dom().size(), phi.cod().size());
        for v in 0..=full(n) {
            for l in 0..=full(m) {
                let lhs = v & !g.upper_star(l) == 0;
                prop_assert_eq!(lhs, l & !g.lower_star(v) == 0);
                prop_assert_eq!(v & !g.lower_sharp(l) == 0, l & !g.upper_sharp(v) == 0);
            }
        }
    }
}

fn lexicon(basics: usize, leq: Vec<(usize, usize)>, target: usize) -> Lexicon {
    Lexicon::new((0..basics).map(|i| format!("b{i}")).collect(), leq, target).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 512, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn recognizer_agrees_with_rewriting(
        basics in 1..=3usize,
        raw_leq in prop::collection::vec((0..3usize, 0..3usize), 0..=3),
        raw in prop::collection::vec((0..3usize, -2..=2i32), 1..=6),
        target in 0..3usize,
    ) {
        let leq: Vec<(usize, usize)> = raw_leq.into_iter().filter(|&(p, q)| p < basics && q < basics).collect();
        let lex = lexicon(basics, leq, target % basics);
        let s: Vec<SimpleType> = raw.into_iter().map(|(b, e)| SimpleType::new(b % basics, e)).collect();
        prop_assert_eq!(reduce(&lex, &s).is_some(), oracle_reduces(&lex, &s).unwrap());
    }
}

#[test]
fn pair_contractions_match_rewriting() {
    for leq in [vec![], vec![(0, 1)], vec![(0, 1), (1, 2)], vec![(0, 1), (1, 0)]] {
        let lex = lexicon(3, leq, 0);
        let w = lex.window();
        for a in (0..3).flat_map(|b| (-w..=w).map(move |e| SimpleType::new(b, e))) {
            for b in (0..3).flat_map(|b| (-w..=w).map(move |e| SimpleType::new(b, e))) {
                assert_eq!(contracts(a, b, &lex), oracle_reaches(&lex, &[a, b], &[]).unwrap(), "{a:?} {b:?}");
            }
        }
    }
}
