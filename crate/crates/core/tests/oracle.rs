use confalg::algebra::ore::CoefficientRing;
use confalg::algebra::rational::int;
use confalg::oracle::{
    coeff_assoc_check, coefficient_ring, dist_nprod, oracle_check, to_distribution, DEFAULT_WINDOW,
};
use confalg::sample::Sampler;
use confalg::*;
use std::sync::Arc;

fn unit(c: &ConformalAlgebra, deg: u32, i: u16, j: u16) -> ConformalElement {
    let b = Basis { block: 0, deg, row: i - 1, col: j - 1 };
    ConformalElement::tilde(&AlgebraElement::basis(c.shape(), b))
}

fn l(c: &ConformalAlgebra, name: &str) -> ConformalElement {
    cend_generator(c, name).unwrap()
}

#[test]
fn basis_realization_is_b_t_n() {
    let c = make_cend(1).unwrap();
    let x = l(&c, "L1");
    let f = to_distribution(&x, 2).unwrap();
    assert_eq!(f.range(), (-2, 2));
    for n in -2..=2 {
        let expect = OreElement::monomial(x.component(0), n);
        assert_eq!(f.coeff(n).unwrap(), expect);
    }
    let df = to_distribution(&x.partial(1), 2).unwrap();
    for n in -2..=2 {
        let expect = OreElement::monomial(x.component(0), n - 1).scale(&int(-n));
        assert_eq!(df.coeff(n).unwrap(), expect);
    }
    assert!(to_distribution(&ConformalElement::zero(c.shape()), 2).unwrap().is_zero());
}

#[test]
fn partial_matches_d_dz() {
    let c = make_cend(2).unwrap();
    let span = c.base().spanning_up_to(3);
    let mut rng = Sampler::new(11);
    for _ in 0..10 {
        let a = rng.conformal_element(&span);
        let lhs = to_distribution(&a.partial(1), DEFAULT_WINDOW).unwrap();
        let rhs = to_distribution(&a, DEFAULT_WINDOW).unwrap().derivative();
        let (lo, hi) = rhs.range();
        assert_eq!(lhs.restrict(lo, hi), rhs);
    }
}

#[test]
fn current_collapse() {
    let c = make_current(&BaseAlgebra::matrix(2).unwrap());
    let ring = coefficient_ring(&c);
    let e12 = unit(&c, 0, 1, 2);
    let e21 = unit(&c, 0, 2, 1);
    let f = to_distribution(&e12, DEFAULT_WINDOW).unwrap();
    let g = to_distribution(&e21, DEFAULT_WINDOW).unwrap();
    for m in 1..=6 {
        assert!(dist_nprod(&ring, &f, m, &g).unwrap().is_zero(), "m = {m}");
    }
    let p = dist_nprod(&ring, &f, 0, &g).unwrap();
    let e11 = to_distribution(&unit(&c, 0, 1, 1), DEFAULT_WINDOW).unwrap();
    assert_eq!(p, e11.restrict(-8, 8));
}

#[test]
fn identity_zero_product_restricts() {
    let c = make_cend(1).unwrap();
    let ring = coefficient_ring(&c);
    let one = to_distribution(&l(&c, "L0"), 8).unwrap();
    let g = to_distribution(&l(&c, "L3"), 8).unwrap();
    assert_eq!(dist_nprod(&ring, &one, 0, &g).unwrap(), g);
}

#[test]
fn cend1_first_product_pointwise() {
    let c = make_cend(1).unwrap();
    let ring = coefficient_ring(&c);
    let x = l(&c, "L1");
    let f = to_distribution(&x, 8).unwrap();
    let p = dist_nprod(&ring, &f, 1, &f).unwrap();
    assert_eq!(p.range(), (-8, 7));
    for n in -8..=7 {
        assert_eq!(p.coeff(n).unwrap(), OreElement::monomial(x.component(0), n).scale(&int(-1)));
    }
}

#[test]
fn oracle_examples() {
    let c = make_cend(1).unwrap();
    let ring = coefficient_ring(&c);
    let l1 = l(&c, "L1");
    let r = oracle_check(&c, &ring, &l1, 1, &l1, 8).unwrap();
    assert!(r.matches);
    assert_eq!(r.compared, (-8, 7));
    let cur = make_current(&BaseAlgebra::matrix(2).unwrap());
    let ring = coefficient_ring(&cur);
    let r = oracle_check(&cur, &ring, &unit(&cur, 0, 1, 2), 0, &unit(&cur, 0, 2, 1), 8).unwrap();
    assert!(r.matches);
    assert!(oracle_check(&cur, &ring, &unit(&cur, 0, 1, 2), 9, &unit(&cur, 0, 2, 1), 8).is_err());
}

/// The expected table lists `L¹ ⓵ L⁰ = −L⁰`; the residue product says 0.
#[test]
fn oracle_settles_l1_first_l0() {
    let c = make_cend(1).unwrap();
    let ring = coefficient_ring(&c);
    let (l0, l1) = (l(&c, "L0"), l(&c, "L1"));
    let f = to_distribution(&l1, 8).unwrap();
    let g = to_distribution(&l0, 8).unwrap();
    assert!(dist_nprod(&ring, &f, 1, &g).unwrap().is_zero());
    assert!(c.nprod(&l1, 1, &l0).unwrap().is_zero());
}

/// Negates one basis entry of the table, `x̃ ⓵ x̃`.
struct FlippedEntry(ConformalAlgebra);

impl NProduct for FlippedEntry {
    fn algebra(&self) -> &ConformalAlgebra {
        &self.0
    }
    fn nprod(&self, a: &ConformalElement, n: u32, b: &ConformalElement) -> Result<ConformalElement> {
        let p = self.0.nprod(a, n, b)?;
        let x = cend_generator(&self.0, "L1").unwrap();
        Ok(if n == 1 && *a == x && *b == x { -&p } else { p })
    }
}

#[test]
fn sabotaged_entry_is_located() {
    let c = make_cend(1).unwrap();
    let ring = coefficient_ring(&c);
    let x = l(&c, "L1");
    let bad = FlippedEntry(c.clone());
    let r = oracle_check(&bad, &ring, &x, 1, &x, 8).unwrap();
    assert!(!r.matches);
    assert_eq!(r.mismatches.len(), 16);
    assert_eq!(r.mismatches[0].n, -8);
    assert!(oracle_check(&bad, &ring, &x, 0, &x, 8).unwrap().matches);
}

fn check_random(c: &ConformalAlgebra, seed: u64, pairs: usize) {
    let ring = coefficient_ring(c);
    let span = c.base().spanning_up_to(3);
    let mut rng = Sampler::new(seed);
    for _ in 0..pairs {
        let a = rng.conformal_element(&span);
        let b = rng.conformal_element(&span);
        let top = c.structural_bound(&a, &b).unwrap() + 1;
        for m in 0..=top.min(DEFAULT_WINDOW as u32) {
            let r = oracle_check(c, &ring, &a, m, &b, DEFAULT_WINDOW).unwrap();
            assert!(r.matches, "{a} ({m}) {b}: {:?}", r.mismatches.first());
        }
    }
}

#[test]
fn random_pairs_match_oracle() {
    check_random(&make_cend(1).unwrap(), 1, 15);
    check_random(&make_current(&BaseAlgebra::matrix(2).unwrap()), 2, 15);
    let mp = BaseAlgebra::matrix_poly(2).unwrap();
    let r = AlgebraElement::basis(mp.shape(), Basis { block: 0, deg: 0, row: 0, col: 1 });
    let dif = make_differential(&mp, &Derivation::inner(r), 6).unwrap();
    check_random(&dif, 3, 15);
}

#[test]
fn every_basis_pair_matches_oracle() {
    let c = make_cend(2).unwrap();
    let ring = coefficient_ring(&c);
    let basis: Vec<_> = c.base().spanning_up_to(2).iter().map(ConformalElement::tilde).collect();
    for a in &basis {
        for b in &basis {
            let top = locality_degree(&c, a, b, 16).unwrap().degree.map_or(0, |n| n + 1);
            for m in 0..=top {
                assert!(oracle_check(&c, &ring, a, m, b, 8).unwrap().matches);
            }
        }
    }
}

#[test]
fn coefficient_associativity() {
    let c = make_cend(1).unwrap();
    let ring = coefficient_ring(&c);
    let (l0, l1) = (l(&c, "L0"), l(&c, "L1"));
    let orders = [(0, 0), (1, 0), (0, 1), (1, 1), (2, 1)];
    let r = coeff_assoc_check(&ring, &l0, &l1, &l1, &orders, 6).unwrap();
    assert!(r.passed, "{:?}", r.iterated);
    assert!(r.triples > 0);
    assert_eq!(r.iterated.len(), orders.len());
    let cur = make_current(&BaseAlgebra::matrix(2).unwrap());
    let ring = coefficient_ring(&cur);
    let es: Vec<_> = [(1, 1), (1, 2), (2, 1)].iter().map(|&(i, j)| unit(&cur, 0, i, j)).collect();
    assert!(coeff_assoc_check(&ring, &es[0], &es[1], &es[2], &[(0, 0)], 4).unwrap().passed);
    assert!(coeff_assoc_check(&ring, &es[0], &es[1], &es[2], &[(0, 0), (5, 4)], 8).is_err());
}

/// The iterated residue identity agrees with the conformal products.
#[test]
fn iterated_identity_matches_conformal_side() {
    let c = make_cend(1).unwrap();
    let (l1, l2) = (l(&c, "L1"), l(&c, "L2"));
    let ab = c.nprod(&l1, 1, &l2).unwrap();
    let abc = c.nprod(&ab, 1, &l2).unwrap();
    let mut rhs = ConformalElement::zero(c.shape());
    for s in 0..=1u32 {
        let inner = c.nprod(&l2, 1 + s, &l2).unwrap();
        let term = c.nprod(&l1, 1 - s, &inner).unwrap();
        rhs.add_scaled(&term, &int(if s % 2 == 0 { 1 } else { -1 }));
    }
    assert_eq!(abc, rhs);
}

/// Truncates the commutation `t^k b = Σ_i C(k,i)(−1)^i δ^i(b) t^(k−i)` after
/// two terms: still an exact rule for `t¹`, wrong for higher powers.
struct TruncatedOre(OreRing);

impl CoefficientRing for TruncatedOre {
    fn shape(&self) -> &Arc<Shape> {
        self.0.shape()
    }
    fn mul(&self, x: &OreElement, y: &OreElement) -> Result<OreElement> {
        let mut out = OreElement::zero(x.shape());
        for (q, b) in y.terms() {
            for (p, a) in x.terms() {
                for (k, c) in self.0.commute(*p, b)?.terms() {
                    if *p >= 2 && *k < p - 1 {
                        continue;
                    }
                    out.add_term(k + q, &a.mul(c)?, &int(1));
                }
            }
        }
        Ok(out)
    }
}

#[test]
fn broken_ore_table_fails_associativity() {
    let c = make_cend(1).unwrap();
    let ring = TruncatedOre(coefficient_ring(&c));
    let (l1, l2) = (l(&c, "L1"), l(&c, "L2"));
    let r = coeff_assoc_check(&ring, &l1, &l2, &l2, &[(0, 0)], 4).unwrap();
    assert!(!r.passed);
    assert!(!r.triple_failures.is_empty());
}
