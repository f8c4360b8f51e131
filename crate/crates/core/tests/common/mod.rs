#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ternary_covariants::covariants::is_unimodular;
use ternary_covariants::forms::{LinearForm, WeightedPower};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

pub fn to_rat(terms: &[WeightedPower<BigInt>]) -> Vec<WeightedPower<BigRational>> {
    terms
        .iter()
        .map(|t| {
            WeightedPower::new(
                BigRational::from_integer(t.weight.clone()),
                t.form.map(|v| BigRational::from_integer(v.clone())),
            )
        })
        .collect()
}

/// Product of random elementary matrices with a random permutation sign fix.
pub fn random_unimodular(rng: &mut ChaCha8Rng) -> [[BigInt; 3]; 3] {
    let mut m = [[0i64; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    for _ in 0..6 {
        let (r, s) = loop {
            let r = rng.gen_range(0..3);
            let s = rng.gen_range(0..3);
            if r != s {
                break (r, s);
            }
        };
        let k = rng.gen_range(-2i64..=2);
        let src = m[s];
        for (dst, v) in m[r].iter_mut().zip(src) {
            *dst += k * v;
        }
    }
    let out = m.map(|row| row.map(BigInt::from));
    assert!(is_unimodular(&out));
    out
}

pub fn random_linear(rng: &mut ChaCha8Rng, bound: i64) -> LinearForm<BigInt> {
    loop {
        let l = LinearForm::int(
            rng.gen_range(-bound..=bound),
            rng.gen_range(-bound..=bound),
            rng.gen_range(-bound..=bound),
        );
        if !l.is_zero() {
            return l;
        }
    }
}

/// Nonzero lambda x2 + mu x3.
pub fn random_direction(rng: &mut ChaCha8Rng) -> LinearForm<BigRational> {
    loop {
        let a = rng.gen_range(-5i64..=5);
        let b = rng.gen_range(-5i64..=5);
        if a != 0 || b != 0 {
            return LinearForm::new(q(0), q(a), q(b));
        }
    }
}

/// K distinct integer nodes and a parameter c off the nodes.
pub fn random_nodes(rng: &mut ChaCha8Rng, k: usize) -> (Vec<i64>, i64) {
    let mut nodes: Vec<i64> = Vec::with_capacity(k);
    while nodes.len() < k {
        let v = rng.gen_range(-200i64..=200);
        if !nodes.contains(&v) {
            nodes.push(v);
        }
    }
    let c = loop {
        let v = rng.gen_range(-200i64..=200);
        if !nodes.contains(&v) {
            break v;
        }
    };
    (nodes, c)
}
