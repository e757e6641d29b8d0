use confalg::algebra::rational::{int, ratio};
use confalg::growth::{gk_profile, in_rational_span, span_rank, Growth};
use confalg::linalg::{Echelon, SparseVec};
use confalg::sample::Sampler;
use confalg::*;

const CAP: u32 = 64;

fn unit(c: &ConformalAlgebra, i: u16, j: u16) -> ConformalElement {
    let b = Basis { block: 0, deg: 0, row: i - 1, col: j - 1 };
    ConformalElement::tilde(&AlgebraElement::basis(c.shape(), b))
}

fn gens(c: &ConformalAlgebra, names: &[&str]) -> GeneratorSet {
    GeneratorSet::new(
        names
            .iter()
            .map(|n| (n.to_string(), cend_generator(c, n).unwrap()))
            .collect(),
    )
    .unwrap()
}

fn matrix_gens(c: &ConformalAlgebra, units: &[(u16, u16)]) -> GeneratorSet {
    GeneratorSet::new(
        units
            .iter()
            .map(|&(i, j)| (format!("e{i}{j}"), unit(c, i, j)))
            .collect(),
    )
    .unwrap()
}

#[test]
fn cend1_table() {
    let c = make_cend(1).unwrap();
    let t = product_table(&c, &gens(&c, &["L0", "L1"]), CAP).unwrap();
    let l = |n: &str| cend_generator(&c, n).unwrap();
    let expect = [
        ("L0", 0, "L0", l("L0")),
        ("L0", 0, "L1", l("L1")),
        ("L1", 0, "L0", l("L1")),
        ("L0", 1, "L1", -&l("L0")),
        ("L1", 0, "L1", l("L2")),
        ("L1", 1, "L1", -&l("L1")),
    ];
    assert_eq!(t.entries.len(), expect.len());
    for (a, n, b, v) in &expect {
        assert_eq!(t.get(a, *n, b), Some(v), "{a} ({n}) {b}");
    }
    assert_eq!(t.get("L1", 1, "L0"), None);
}

#[test]
fn small_tables() {
    let k = make_current(&BaseAlgebra::scalar());
    let e = ConformalElement::tilde(&AlgebraElement::one(k.shape()));
    let g = GeneratorSet::new(vec![("e".into(), e.clone())]).unwrap();
    let t = product_table(&k, &g, CAP).unwrap();
    assert_eq!(t.entries.len(), 1);
    assert_eq!(t.get("e", 0, "e"), Some(&e));

    let m = make_current(&BaseAlgebra::matrix(2).unwrap());
    let t = product_table(&m, &matrix_gens(&m, &[(1, 2)]), CAP).unwrap();
    assert!(t.entries.is_empty());
    assert!(GeneratorSet::new(vec![]).is_err());
}

#[test]
fn zero_derivation_matches_current() {
    let b = BaseAlgebra::matrix_poly(2).unwrap();
    let cur = make_current(&b);
    let dif = make_differential(&b, &Derivation::zero(b.shape()), 4).unwrap();
    let basis: Vec<_> = b
        .spanning_up_to(2)
        .iter()
        .enumerate()
        .map(|(i, x)| (format!("b{i}"), ConformalElement::tilde(x)))
        .collect();
    let g = GeneratorSet::new(basis).unwrap();
    assert_eq!(product_table(&cur, &g, CAP).unwrap(), product_table(&dif, &g, CAP).unwrap());
}

#[test]
fn dif_matrix_ad_e12() {
    let b = BaseAlgebra::matrix(2).unwrap();
    let r = AlgebraElement::basis(b.shape(), Basis { block: 0, deg: 0, row: 0, col: 1 });
    let c = make_differential(&b, &Derivation::inner(r), 4).unwrap();
    // e21 ⓵ e21 = −(e21·[e12, e21])~ = −(e21(e11 − e22))~ = −(e21)~
    assert_eq!(c.nprod(&unit(&c, 2, 1), 1, &unit(&c, 2, 1)).unwrap(), -&unit(&c, 2, 1));
    // e21 ⓵ e11 = −(e21·[e12, e11])~ = (e21·e12)~ = (e22)~
    assert_eq!(c.nprod(&unit(&c, 2, 1), 1, &unit(&c, 1, 1)).unwrap(), unit(&c, 2, 2));
}

#[test]
fn cend_generators() {
    let c2 = make_cend(2).unwrap();
    let l0 = cend_generator(&c2, "L0").unwrap();
    for name in ["L0_12", "L1_21", "L2_11", "L1"] {
        let a = cend_generator(&c2, name).unwrap();
        assert_eq!(c2.nprod(&l0, 0, &a).unwrap(), a);
    }
    assert!(cend_generator(&c2, "L1_31").is_err());
    assert!(cend_generator(&c2, "M1").is_err());
    assert!(make_cend(0).is_err());
    let cur = make_current(&BaseAlgebra::scalar());
    assert!(cend_generator(&cur, "L0").is_err());
}

#[test]
fn closure_examples() {
    let c = make_cend(1).unwrap();
    let span = generate_closure(&c, &gens(&c, &["L0", "L1"]), 3, CAP).unwrap();
    let expect: Vec<_> = ["L0", "L1", "L2", "L3"].iter().map(|n| cend_generator(&c, n).unwrap()).collect();
    assert_eq!(span_rank(&span), 4);
    assert_eq!(span_rank(&[span.clone(), expect].concat()), 4);

    let m = make_current(&BaseAlgebra::matrix(2).unwrap());
    let span = generate_closure(&m, &matrix_gens(&m, &[(1, 1), (2, 2)]), 5, CAP).unwrap();
    assert_eq!(span.len(), 2);

    let k = make_current(&BaseAlgebra::scalar());
    let e = ConformalElement::tilde(&AlgebraElement::one(k.shape()));
    let g = GeneratorSet::new(vec![("e".into(), e.clone())]).unwrap();
    assert_eq!(generate_closure(&k, &g, 4, CAP).unwrap(), vec![e]);
    assert!(generate_closure(&k, &g, 0, CAP).is_err());
}

#[test]
fn closure_is_monotone_and_local() {
    let c = make_cend(1).unwrap();
    let g = gens(&c, &["L0", "L1"]);
    let mut prev: Vec<ConformalElement> = Vec::new();
    for r in 1..=6 {
        let cur = generate_closure(&c, &g, r, CAP).unwrap();
        for x in &prev {
            assert!(in_rational_span(&cur, x));
        }
        for a in &cur {
            for b in &cur {
                assert!(locality_degree(&c, a, b, CAP).is_ok());
            }
        }
        prev = cur;
    }
}

fn flat(e: &ConformalElement) -> SparseVec<(Basis, usize)> {
    let mut v = SparseVec::new();
    for (b, p) in e.terms() {
        for (k, c) in p.coeffs().iter().enumerate() {
            if *c != int(0) {
                v.insert((*b, k), c.clone());
            }
        }
    }
    v
}

/// Every product of at most `rounds` generators in every bracketing and every
/// order, reduced to a ℚ-basis per length.
fn full_bracketing<P: NProduct>(p: &P, g: &GeneratorSet, rounds: usize) -> Vec<ConformalElement> {
    let mut by_len: Vec<Vec<ConformalElement>> = vec![Vec::new(), g.elements().to_vec()];
    for len in 2..=rounds {
        let mut echelon = Echelon::new();
        let mut out = Vec::new();
        for left in 1..len {
            for a in &by_len[left] {
                for b in &by_len[len - left] {
                    let bound = p.algebra().structural_bound(a, b).unwrap();
                    for n in 0..=bound {
                        let c = p.nprod(a, n, b).unwrap();
                        if !c.is_zero() && echelon.insert(&flat(&c)) {
                            out.push(c);
                        }
                    }
                }
            }
        }
        by_len.push(out);
    }
    by_len.into_iter().flatten().collect()
}

#[test]
fn left_normed_closure_spans_all_bracketings() {
    let c = make_cend(1).unwrap();
    let cases: Vec<(ConformalAlgebra, GeneratorSet)> = vec![
        (c.clone(), gens(&c, &["L0", "L1"])),
        (c.clone(), gens(&c, &["L1", "L2"])),
        {
            let m = make_current(&BaseAlgebra::matrix(2).unwrap());
            let g = matrix_gens(&m, &[(1, 2), (2, 1)]);
            (m, g)
        },
        {
            let c2 = make_cend(2).unwrap();
            let g = gens(&c2, &["L1_12", "L0_21"]);
            (c2, g)
        },
    ];
    for (alg, g) in &cases {
        for rounds in 1..=4 {
            let left = generate_closure(alg, g, rounds, CAP).unwrap();
            let full = full_bracketing(alg, g, rounds as usize);
            assert_eq!(span_rank(&left), span_rank(&full), "rounds {rounds}");
            assert_eq!(span_rank(&[left.clone(), full].concat()), span_rank(&left));
        }
    }
}

#[test]
fn span_rank_examples() {
    let c = make_cend(1).unwrap();
    let l = |n: &str| cend_generator(&c, n).unwrap();
    assert_eq!(span_rank(&[l("L1"), l("L1").partial(1)]), 1);
    assert_eq!(span_rank(&[l("L0"), l("L1"), &l("L0") + &l("L1").partial(1)]), 2);
    let m = make_current(&BaseAlgebra::matrix(2).unwrap());
    assert_eq!(span_rank(&[unit(&m, 1, 1), unit(&m, 2, 2)]), 2);
    assert_eq!(span_rank(&[]), 0);
}

/// Rank after substituting ∂ = `at`, over ℚ.
fn rank_at(elems: &[ConformalElement], at: &Rational) -> usize {
    let mut e = Echelon::new();
    for x in elems {
        let v: SparseVec<Basis> = x
            .terms()
            .iter()
            .map(|(b, p)| (*b, p.eval(at)))
            .filter(|(_, c)| *c != int(0))
            .collect();
        e.insert(&v);
    }
    e.rank()
}

#[test]
fn span_rank_agrees_with_evaluation() {
    let c = make_cend(2).unwrap();
    let base = c.base().spanning_up_to(1);
    let mut rng = Sampler::new(5);
    let points = [ratio(7, 3), ratio(-11, 5), ratio(23, 2)];
    for trial in 0..40 {
        // Few base directions, many elements: forces genuine dependencies.
        let span: Vec<_> = base.iter().take(2 + trial % 4).cloned().collect();
        let elems: Vec<_> = (0..1 + trial % 6).map(|_| rng.conformal_element(&span)).collect();
        let numeric = points.iter().map(|p| rank_at(&elems, p)).max().unwrap();
        assert_eq!(span_rank(&elems), numeric, "trial {trial}");
    }
}

#[test]
fn growth_profiles() {
    let c = make_cend(1).unwrap();
    let p = gk_profile(&c, &gens(&c, &["L0", "L1"]), 12, CAP).unwrap();
    let expect: Vec<_> = (1..=12).map(|r| (r, r as usize + 1)).collect();
    assert_eq!(p.ranks, expect);
    assert_eq!(p.classification, Growth::Linear);
    assert!((p.exponent - 1.0).abs() <= 0.15, "{}", p.exponent);

    let q = gk_profile(&c, &gens(&c, &["L0", "L1", "L2"]), 8, CAP).unwrap();
    assert_eq!(q.classification, Growth::Linear);

    let m = make_current(&BaseAlgebra::matrix(2).unwrap());
    let g = matrix_gens(&m, &[(1, 1), (1, 2), (2, 1), (2, 2)]);
    let p = gk_profile(&m, &g, 8, CAP).unwrap();
    assert!(p.ranks.iter().all(|&(_, k)| k == 4));
    assert_eq!(p.classification, Growth::Zero);

    let k = make_current(&BaseAlgebra::scalar());
    let e = ConformalElement::tilde(&AlgebraElement::one(k.shape()));
    let g = GeneratorSet::new(vec![("e".into(), e)]).unwrap();
    let p = gk_profile(&k, &g, 6, CAP).unwrap();
    assert!(p.ranks.iter().all(|&(_, k)| k == 1));
    assert_eq!(p.classification, Growth::Zero);
    assert!(gk_profile(&k, &g, 3, CAP).is_err());
}

#[test]
fn dif_subalgebra_growth_is_monotone() {
    let mp = BaseAlgebra::matrix_poly(2).unwrap();
    let r = AlgebraElement::basis(mp.shape(), Basis { block: 0, deg: 0, row: 0, col: 1 });
    let c = make_differential(&mp, &Derivation::inner(r), 4).unwrap();
    let x21 = AlgebraElement::basis(mp.shape(), Basis { block: 0, deg: 1, row: 1, col: 0 });
    let g = GeneratorSet::new(vec![("a".into(), ConformalElement::tilde(&x21))]).unwrap();
    let p = gk_profile(&c, &g, 6, CAP).unwrap();
    assert!(p.ranks.windows(2).all(|w| w[0].1 <= w[1].1));
}
