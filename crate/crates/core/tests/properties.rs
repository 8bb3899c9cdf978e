use proptest::prelude::*;

use tworay::algebra::module::{ext1_dim, hom_dim, is_isomorphic, string_module, tau, Iso, Rep};
use tworay::algebra::{Algebra, Matrix, Q};
use tworay::quiver::{Arrow, BoundQuiver, Path, Vertex};
use tworay::system::{branch_options, DefiningSystem};

fn system() -> impl Strategy<Value = DefiningSystem> {
    (1usize..=3)
        .prop_flat_map(|n| (prop::collection::vec(1u32..=5, n), prop::collection::vec(1u32..=3, n)))
        .prop_filter("Σp ≥ 2", |(p, _)| p.iter().sum::<u32>() >= 2)
        .prop_flat_map(|(p, q)| {
            let picks: Vec<_> = p.iter().map(|&pi| 0..branch_options(pi, 2).len()).collect();
            (Just(p), Just(q), picks)
        })
        .prop_map(|(p, q, picks)| {
            let (mut s, mut t) = (Vec::new(), Vec::new());
            for (&pi, k) in p.iter().zip(picks) {
                let (si, ti) = branch_options(pi, 2).swap_remove(k);
                s.push(si);
                t.push(ti);
            }
            DefiningSystem::new_valid(p, q, s, t).expect("branch options are valid")
        })
}

/// A walk taking one step per choice until it reaches a sink.
fn walk(bq: &BoundQuiver, start: usize, choices: &[usize]) -> Path {
    let mut at = bq.vertices()[start % bq.vertices().len()];
    let source = at;
    let mut arrows: Vec<Arrow> = Vec::new();
    for &c in choices {
        let out: Vec<_> = bq.arrows().iter().filter(|a| a.source == at).collect();
        if out.is_empty() {
            break;
        }
        let a = out[c % out.len()];
        arrows.push(a.arrow);
        at = a.target;
    }
    bq.path(source, &arrows).expect("walk follows arrows")
}

/// Conjugates `m` by `g_v = I + (v + 1) E_{0,1}`, a different unipotent matrix per vertex.
fn twist(m: &Rep, alg: &Algebra) -> Rep {
    let g: Vec<Matrix> = m
        .dims
        .iter()
        .enumerate()
        .map(|(v, &d)| {
            let mut g = Matrix::identity(d);
            if d > 1 {
                g[(0, 1)] = Q::from_integer(v as i64 + 1);
            }
            g
        })
        .collect();
    let maps = (0..alg.arrow_count())
        .map(|a| {
            let (s, t) = (alg.arrow_source(a), alg.arrow_target(a));
            g[t].mul(&m.maps[a]).mul(&g[s].inverse().expect("unipotent"))
        })
        .collect();
    Rep { dims: m.dims.clone(), maps }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn quiver_is_acyclic_and_sized(ds in system()) {
        let bq = BoundQuiver::build(&ds);
        prop_assert!(bq.is_acyclic());
        let expected: u32 = (1..=ds.n())
            .map(|i| ds.top(i) + 1 + (ds.q_at(i) - 1) + ds.s_of(i).len() as u32)
            .sum();
        prop_assert_eq!(bq.vertices().len() as u32, expected);
    }

    #[test]
    fn normal_forms_multiply_associatively(ds in system(), picks in prop::collection::vec(0usize..10_000, 3)) {
        let alg = Algebra::new(&ds).unwrap();
        let v = picks[0] % alg.vertex_count();
        let from_v = alg.paths_from(v);
        let a = &from_v[picks[1] % from_v.len()];
        let from_a = alg.paths_from(a.target);
        let b = &from_a[picks[2] % from_a.len()];
        let from_b = alg.paths_from(b.target);
        let c = &from_b[(picks[1] + picks[2]) % from_b.len()];
        let left = alg.product(&a.word, &b.word).and_then(|ab| alg.product(&ab, &c.word));
        let right = alg.product(&b.word, &c.word).and_then(|bc| alg.product(&a.word, &bc));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn string_module_hom_is_at_most_one(
        ds in system(),
        s1 in 0usize..100, w1 in prop::collection::vec(0usize..4, 0..5),
        s2 in 0usize..100, w2 in prop::collection::vec(0usize..4, 0..5),
    ) {
        let alg = Algebra::new(&ds).unwrap();
        let bq = alg.quiver();
        let (p1, p2) = (walk(bq, s1, &w1), walk(bq, s2, &w2));
        if let (Ok(m1), Ok(m2)) = (string_module(&alg, &p1), string_module(&alg, &p2)) {
            prop_assert!(hom_dim(&alg, &m1, &m2) <= 1);
            prop_assert_eq!(hom_dim(&alg, &m1, &m1), 1);
        }
    }

    #[test]
    fn twisted_modules_are_isomorphic(ds in system(), s in 0usize..100, w in prop::collection::vec(0usize..4, 0..4)) {
        let alg = Algebra::new(&ds).unwrap();
        let p = walk(alg.quiver(), s, &w);
        if let Ok(m) = string_module(&alg, &p) {
            let sum = m.direct_sum(&m);
            let twisted = twist(&sum, &alg);
            prop_assert!(twisted.violated_relation(&alg).is_none());
            prop_assert!(p.is_trivial() || twisted != sum);
            prop_assert_eq!(is_isomorphic(&alg, &sum, &twisted), Iso::Yes);
            let other = Rep { dims: sum.dims.iter().map(|d| d + 1).collect(), maps: sum.maps.clone() };
            prop_assert_eq!(is_isomorphic(&alg, &sum, &other), Iso::No);
        }
    }

    #[test]
    fn tau_and_ext_are_additive(ds in system(), s in 0usize..100, w in prop::collection::vec(0usize..4, 0..4), t in 0usize..100) {
        let alg = Algebra::new(&ds).unwrap();
        let bq = alg.quiver();
        let p = walk(bq, s, &w);
        let q = walk(bq, t, &[]);
        if let (Ok(m), Ok(n)) = (string_module(&alg, &p), string_module(&alg, &q)) {
            let (tm, _) = tau(&alg, &m);
            let (tn, _) = tau(&alg, &n);
            let (tmn, _) = tau(&alg, &m.direct_sum(&n));
            prop_assert_eq!(tmn.total_dim(), tm.total_dim() + tn.total_dim());
            prop_assert_eq!(ext1_dim(&alg, &m.direct_sum(&n), &n), ext1_dim(&alg, &m, &n) + ext1_dim(&alg, &n, &n));
        }
    }
}

#[test]
fn simple_at_source_of_arrow_extends_simple_at_target() {
    let ds = DefiningSystem::fundamental(vec![3], vec![2]).unwrap();
    let alg = Algebra::new(&ds).unwrap();
    let simple = |v| string_module(&alg, &Path::trivial(v)).unwrap();
    assert_eq!(ext1_dim(&alg, &simple(Vertex::X(1, 2)), &simple(Vertex::X(1, 1))), 1);
    assert_eq!(ext1_dim(&alg, &simple(Vertex::X(1, 1)), &simple(Vertex::X(1, 2))), 0);
    assert_eq!(ext1_dim(&alg, &simple(Vertex::X(1, 2)), &simple(Vertex::X(1, 0))), 0);
}
