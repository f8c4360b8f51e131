mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use ternary_covariants::coeff_engine::{Case, GConfig};
use ternary_covariants::covariants::{eval_s, eval_t};
use ternary_covariants::family::{build_f_c, InterpNodes};
use ternary_covariants::forms::{HomForm, LinearForm, WeightedPower};

use common::{q, random_unimodular, rng, to_rat};

fn pulled_back(terms: &[WeightedPower<BigInt>], m: &[[BigInt; 3]; 3]) -> Vec<WeightedPower<BigInt>> {
    terms
        .iter()
        .map(|t| WeightedPower::new(t.weight.clone(), t.form.pullback(m)))
        .collect()
}

#[test]
fn s_and_t_commute_with_unimodular_substitution() {
    let g = GConfig::standard(Case::D1).g_terms();
    let mut r = rng(0x5e3);
    for _ in 0..5 {
        let m = random_unimodular(&mut r);
        let gm = pulled_back(&g, &m);
        assert_eq!(eval_s(&gm, 37).unwrap(), eval_s(&g, 37).unwrap().substitute(&m));
        assert_eq!(eval_t(&gm, 38).unwrap(), eval_t(&g, 38).unwrap().substitute(&m));
    }
}

#[test]
fn equivariance_with_weights_at_small_degree() {
    let terms: Vec<WeightedPower<BigInt>> = [(3, [1, 2, 0]), (-2, [0, 1, 5]), (1, [4, -1, 1]), (5, [2, 2, -3]), (-1, [1, 0, 1])]
        .iter()
        .map(|&(w, l)| WeightedPower::new(BigInt::from(w), LinearForm::int(l[0], l[1], l[2])))
        .collect();
    let mut r = rng(77);
    for _ in 0..5 {
        let m = random_unimodular(&mut r);
        let tm = pulled_back(&terms, &m);
        assert_eq!(eval_s(&tm, 7).unwrap(), eval_s(&terms, 7).unwrap().substitute(&m));
        assert_eq!(eval_t(&tm, 8).unwrap(), eval_t(&terms, 8).unwrap().substitute(&m));
    }
}

/// g + s h1 + t h2 with h1 = f(c1), h2 = f(c2) on the same nodes and line,
/// merged into one list of weighted powers.
fn combination(
    g: &[WeightedPower<BigRational>],
    h1: &[WeightedPower<BigRational>],
    h2: &[WeightedPower<BigRational>],
    s: i64,
    t: i64,
) -> Vec<WeightedPower<BigRational>> {
    let k = h1.len() - 1;
    let mut out = g.to_vec();
    for i in 0..k {
        assert_eq!(h1[i].form, h2[i].form);
        out.push(WeightedPower::new(
            &h1[i].weight * q(s) + &h2[i].weight * q(t),
            h1[i].form.clone(),
        ));
    }
    out.push(WeightedPower::new(&h1[k].weight * q(s), h1[k].form.clone()));
    out.push(WeightedPower::new(&h2[k].weight * q(t), h2[k].form.clone()));
    out
}

#[test]
fn restriction_to_base_locus_family_is_affine() {
    let n = 12;
    let d = 3 * n + 1;
    let k = 2 * n as usize + 3;
    let g = to_rat(&GConfig::standard(Case::D1).g_terms());
    let b = InterpNodes::consecutive(k);
    let y = LinearForm::new(q(0), q(2), q(-1));
    let h1 = build_f_c(&b, &y, d, &q(-3)).unwrap();
    let h2 = build_f_c(&b, &y, d, &q(40)).unwrap();
    let at = |s: i64, t: i64| -> HomForm<BigRational> { eval_s(&combination(&g, &h1, &h2, s, t), d).unwrap() };
    let f00 = at(0, 0);
    let (f10, f01) = (at(1, 0), at(0, 1));
    let zero = HomForm::zero(4);
    assert_eq!(at(2, 0) - f10.clone().scale(&q(2)) + f00.clone(), zero);
    assert_eq!(at(0, 2) - f01.clone().scale(&q(2)) + f00.clone(), zero);
    assert_eq!(at(1, 1) - f10.clone() - f01.clone() + f00.clone(), zero);
    assert_ne!(f10 - f00, zero);
}
