//! The covariants S_d: V(d) -> V(4) and T_d: V(d) -> V(8) of plane curves.
//!
//! Symbolically S_d = I^n a_x b_x c_x e_x and T_d = I^n a_x^2 b_x^2 c_x^2 e_x^2
//! where I is the Clebsch invariant, a product of four brackets. They are
//! evaluated on forms written as sums of powers of linear forms by the
//! multilinearity formula
//!
//! ```text
//! S_d(sum_k w_k l_k^d) = 24 * sum_{a<b<c<p} w_a w_b w_c w_p S_d(l_a, l_b, l_c, l_p)
//! ```
//!
//! For small d the full symbolic expansion is also available; it serves as
//! an oracle for the multilinear evaluator and for checking the weight
//! structure of the covariant's monomials.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::forms::{
    mul_linear_squares, mul_linears, ACoords, HomForm, LinearForm, Monomial, MultiIndex,
    WeightedPower,
};
use crate::scalars::Ring;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CovariantError {
    #[error("degree {0} is divisible by 3; no covariant of this family exists")]
    DegreeDivisibleByThree(u32),
    #[error("degree {d} does not match the {kind:?} covariant")]
    WrongResidue { d: u32, kind: CovariantKind },
    #[error("full symbolic expansion is only supported for d <= {max}, got {d}")]
    ExpansionTooLarge { d: u32, max: u32 },
}

/// Which covariant: S (d = 3n+1, values in quartics) or T (d = 3n+2, octics).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum CovariantKind {
    S,
    T,
}

impl CovariantKind {
    /// Kind and exponent n for a degree d not divisible by 3.
    pub fn for_degree(d: u32) -> Result<(Self, u32), CovariantError> {
        match d % 3 {
            1 => Ok((Self::S, (d - 1) / 3)),
            2 => Ok((Self::T, (d - 2) / 3)),
            _ => Err(CovariantError::DegreeDivisibleByThree(d)),
        }
    }

    pub fn degree(&self, n: u32) -> u32 {
        match self {
            Self::S => 3 * n + 1,
            Self::T => 3 * n + 2,
        }
    }

    /// Degree of the target forms: 4 or 8.
    pub fn order(&self) -> u32 {
        4 * self.factor_power()
    }

    /// Each symbolic linear factor appears to this power.
    pub fn factor_power(&self) -> u32 {
        match self {
            Self::S => 1,
            Self::T => 2,
        }
    }

    /// Exponent of x1 in the generators of the linear subspace of the base
    /// locus: 2n+3 for S, 2n+5 for T.
    pub fn base_locus_exponent(&self, n: u32) -> u32 {
        match self {
            Self::S => 2 * n + 3,
            Self::T => 2 * n + 5,
        }
    }
}

/// The bracket (u v w): determinant of the three coefficient rows.
pub fn bracket<T: Ring>(u: &LinearForm<T>, v: &LinearForm<T>, w: &LinearForm<T>) -> T {
    let [u1, u2, u3] = &u.0;
    let [v1, v2, v3] = &v.0;
    let [w1, w2, w3] = &w.0;
    u1.clone() * (v2.clone() * w3.clone() - v3.clone() * w2.clone())
        - u2.clone() * (v1.clone() * w3.clone() - v3.clone() * w1.clone())
        + u3.clone() * (v1.clone() * w2.clone() - v2.clone() * w1.clone())
}

/// Clebsch invariant I(a, b, c, e) = (abc)(abe)(ace)(bce).
pub fn clebsch_i<T: Ring>(
    l1: &LinearForm<T>,
    l2: &LinearForm<T>,
    l3: &LinearForm<T>,
    l4: &LinearForm<T>,
) -> T {
    bracket(l1, l2, l3) * bracket(l1, l2, l4) * bracket(l1, l3, l4) * bracket(l2, l3, l4)
}

/// I(l1..l4)^n times the product of the four forms (squared for T).
pub fn quadruple_value<T: Ring>(
    kind: CovariantKind,
    ls: [&LinearForm<T>; 4],
    n: u32,
) -> HomForm<T, Monomial> {
    let i = clebsch_i(ls[0], ls[1], ls[2], ls[3]);
    if i.is_zero() {
        return HomForm::zero(kind.order());
    }
    let forms: Vec<LinearForm<T>> = ls.iter().map(|l| (*l).clone()).collect();
    let product = match kind {
        CovariantKind::S => mul_linears(&forms),
        CovariantKind::T => mul_linear_squares(&forms),
    };
    product.scale(&i.pow(n as u64))
}

pub fn s_quadruple<T: Ring>(ls: [&LinearForm<T>; 4], n: u32) -> HomForm<T, Monomial> {
    quadruple_value(CovariantKind::S, ls, n)
}

pub fn t_quadruple<T: Ring>(ls: [&LinearForm<T>; 4], n: u32) -> HomForm<T, Monomial> {
    quadruple_value(CovariantKind::T, ls, n)
}

/// Brackets of all increasing triples of a list of forms, indexed
/// `(a*N + b)*N + c` for a < b < c.
pub(crate) struct BracketTable<T> {
    n: usize,
    values: Vec<T>,
}

impl<T: Ring> BracketTable<T> {
    pub(crate) fn new(forms: &[&LinearForm<T>]) -> Self {
        let n = forms.len();
        let mut values = vec![T::zero(); n * n * n];
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    values[(a * n + b) * n + c] = bracket(forms[a], forms[b], forms[c]);
                }
            }
        }
        Self { n, values }
    }

    #[inline]
    pub(crate) fn get(&self, a: usize, b: usize, c: usize) -> &T {
        &self.values[(a * self.n + b) * self.n + c]
    }

    /// I for an increasing quadruple, or `None` when a bracket vanishes.
    pub(crate) fn clebsch(&self, q: [usize; 4]) -> Option<T> {
        let [a, b, c, p] = q;
        let brs = [
            self.get(a, b, c),
            self.get(a, b, p),
            self.get(a, c, p),
            self.get(b, c, p),
        ];
        if brs.iter().any(|x| x.is_zero()) {
            return None;
        }
        Some(brs[0].clone() * brs[1].clone() * brs[2].clone() * brs[3].clone())
    }
}

/// 24 * sum over increasing quadruples, for a covariant of the given kind.
pub fn eval_multilinear<T: Ring>(
    kind: CovariantKind,
    terms: &[WeightedPower<T>],
    n: u32,
) -> HomForm<T, Monomial> {
    let forms: Vec<&LinearForm<T>> = terms.iter().map(|t| &t.form).collect();
    let table = BracketTable::new(&forms);
    let linear: Vec<HomForm<T, Monomial>> = forms
        .iter()
        .map(|l| {
            let f = HomForm::from_linear(l);
            match kind {
                CovariantKind::S => f,
                CovariantKind::T => f.mul(&f),
            }
        })
        .collect();

    let len = terms.len();
    let mut acc = HomForm::zero(kind.order());
    for a in 0..len {
        for b in a + 1..len {
            for c in b + 1..len {
                for p in c + 1..len {
                    let Some(i) = table.clebsch([a, b, c, p]) else {
                        continue;
                    };
                    let w = terms[a].weight.clone()
                        * terms[b].weight.clone()
                        * terms[c].weight.clone()
                        * terms[p].weight.clone();
                    if w.is_zero() {
                        continue;
                    }
                    let prod = linear[a].mul(&linear[b]).mul(&linear[c]).mul(&linear[p]);
                    acc = acc + prod.scale(&(w * i.pow(n as u64)));
                }
            }
        }
    }
    acc.scale(&T::from_i64(24))
}

/// S_d of the form sum_k w_k l_k^d; requires d = 3n+1.
pub fn eval_s<T: Ring>(terms: &[WeightedPower<T>], d: u32) -> Result<HomForm<T>, CovariantError> {
    eval_kind(CovariantKind::S, terms, d)
}

/// T_d of the form sum_k w_k l_k^d; requires d = 3n+2.
pub fn eval_t<T: Ring>(terms: &[WeightedPower<T>], d: u32) -> Result<HomForm<T>, CovariantError> {
    eval_kind(CovariantKind::T, terms, d)
}

/// S_d or T_d, whichever matches d mod 3.
pub fn eval_covariant<T: Ring>(
    terms: &[WeightedPower<T>],
    d: u32,
) -> Result<HomForm<T>, CovariantError> {
    let (kind, n) = CovariantKind::for_degree(d)?;
    Ok(eval_multilinear(kind, terms, n))
}

fn eval_kind<T: Ring>(
    kind: CovariantKind,
    terms: &[WeightedPower<T>],
    d: u32,
) -> Result<HomForm<T>, CovariantError> {
    let (actual, n) = CovariantKind::for_degree(d)?;
    if actual != kind {
        return Err(CovariantError::WrongResidue { d, kind });
    }
    Ok(eval_multilinear(kind, terms, n))
}

/// One term c * A_i A_j A_k A_l x^e of the covariant as a polynomial in the
/// A-coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadMonomial {
    pub i: MultiIndex,
    pub j: MultiIndex,
    pub k: MultiIndex,
    pub l: MultiIndex,
    pub e: MultiIndex,
    pub coeff: BigInt,
}

impl QuadMonomial {
    pub fn symbols(&self) -> [MultiIndex; 4] {
        [self.i, self.j, self.k, self.l]
    }
}

/// Largest d for which [`expand_covariant`] is attempted.
pub const MAX_EXPANSION_DEGREE: u32 = 8;

// 12 symbol exponents (a1 a2 a3 b1 .. e3) followed by x1 x2 x3.
type SymKey = [u8; 15];
type SymPoly = HashMap<SymKey, i128>;

fn sym_mul(a: &SymPoly, b: &SymPoly) -> SymPoly {
    let mut out = SymPoly::with_capacity(a.len().max(b.len()) * 4);
    for (ka, ca) in a {
        for (kb, cb) in b {
            let mut k = *ka;
            for r in 0..15 {
                k[r] += kb[r];
            }
            let v = out.entry(k).or_insert(0);
            *v = v.checked_add(ca.checked_mul(*cb).expect("coefficient overflow")).expect("coefficient overflow");
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

fn sym_bracket(s: [usize; 3]) -> SymPoly {
    const PERMS: [([usize; 3], i128); 6] = [
        ([0, 1, 2], 1),
        ([1, 2, 0], 1),
        ([2, 0, 1], 1),
        ([0, 2, 1], -1),
        ([2, 1, 0], -1),
        ([1, 0, 2], -1),
    ];
    let mut out = SymPoly::new();
    for (perm, sign) in PERMS {
        let mut k = [0u8; 15];
        for row in 0..3 {
            k[s[row] * 3 + perm[row]] += 1;
        }
        *out.entry(k).or_insert(0) += sign;
    }
    out
}

fn sym_linear_factor(slot: usize) -> SymPoly {
    (0..3)
        .map(|r| {
            let mut k = [0u8; 15];
            k[slot * 3 + r] = 1;
            k[12 + r] = 1;
            (k, 1)
        })
        .collect()
}

/// Full expansion of the symbolic expression of S_d or T_d (whichever
/// matches d mod 3), with like terms collected.
///
/// Only small d are feasible; the number of terms grows very quickly.
pub fn expand_covariant(d: u32) -> Result<Vec<QuadMonomial>, CovariantError> {
    let (kind, n) = CovariantKind::for_degree(d)?;
    if d > MAX_EXPANSION_DEGREE {
        return Err(CovariantError::ExpansionTooLarge {
            d,
            max: MAX_EXPANSION_DEGREE,
        });
    }
    let clebsch = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]
        .into_iter()
        .fold(SymPoly::from([([0u8; 15], 1)]), |acc, s| {
            sym_mul(&acc, &sym_bracket(s))
        });
    let mut poly = SymPoly::from([([0u8; 15], 1)]);
    for _ in 0..n {
        poly = sym_mul(&poly, &clebsch);
    }
    for slot in 0..4 {
        for _ in 0..kind.factor_power() {
            poly = sym_mul(&poly, &sym_linear_factor(slot));
        }
    }

    let idx = |k: &SymKey, off: usize| {
        MultiIndex::new(k[off] as u32, k[off + 1] as u32, k[off + 2] as u32)
    };
    let mut out: Vec<QuadMonomial> = poly
        .into_iter()
        .map(|(k, c)| QuadMonomial {
            i: idx(&k, 0),
            j: idx(&k, 3),
            k: idx(&k, 6),
            l: idx(&k, 9),
            e: idx(&k, 12),
            coeff: BigInt::from(c),
        })
        .collect();
    out.sort_by_key(|m| (m.i, m.j, m.k, m.l, m.e));
    Ok(out)
}

/// Expansion of S_d; only d = 4 and d = 7 are in range.
pub fn expand_s(d: u32) -> Result<Vec<QuadMonomial>, CovariantError> {
    let (kind, _) = CovariantKind::for_degree(d)?;
    if kind != CovariantKind::S {
        return Err(CovariantError::WrongResidue { d, kind: CovariantKind::S });
    }
    expand_covariant(d)
}

/// Evaluates an expansion at a form given in A-coordinates.
pub fn substitute_expansion(
    expansion: &[QuadMonomial],
    order: u32,
    f: &HomForm<BigRational, ACoords>,
) -> HomForm<BigRational, Monomial> {
    let mut cache: HashMap<MultiIndex, BigRational> = HashMap::new();
    let mut a = |i: &MultiIndex| cache.entry(*i).or_insert_with(|| f.coeff(i)).clone();
    let mut out = HomForm::zero(order);
    for m in expansion {
        let v = a(&m.i) * a(&m.j) * a(&m.k) * a(&m.l);
        if v.is_zero() {
            continue;
        }
        out.add_term(m.e, v * BigRational::from_integer(m.coeff.clone()));
    }
    out
}

/// Outcome of checking that the linear subspace x1^K * (forms of degree d-K)
/// lies in the base locus with a full triple structure.
#[derive(Debug, Clone)]
pub struct TripleStructureReport {
    pub d: u32,
    pub kind: CovariantKind,
    pub n: u32,
    pub threshold: u32,
    pub monomials: usize,
    /// Monomials whose symbol indices violate sum of r-th entries = 4n + e_r.
    pub weight_violations: Vec<QuadMonomial>,
    /// Monomials with two or more symbol indices having first entry >= threshold.
    pub triple_violations: Vec<QuadMonomial>,
}

impl TripleStructureReport {
    pub fn passed(&self) -> bool {
        self.monomials > 0 && self.weight_violations.is_empty() && self.triple_violations.is_empty()
    }
}

pub fn check_triple_structure(d: u32) -> Result<TripleStructureReport, CovariantError> {
    let (kind, n) = CovariantKind::for_degree(d)?;
    let expansion = expand_covariant(d)?;
    let threshold = kind.base_locus_exponent(n);
    let mut weight_violations = Vec::new();
    let mut triple_violations = Vec::new();
    for m in &expansion {
        let syms = m.symbols();
        let weights_ok = (0..3).all(|r| {
            let total: u32 = syms.iter().map(|s| s.0[r]).sum();
            total == 4 * n + m.e.0[r]
        });
        if !weights_ok {
            weight_violations.push(m.clone());
        }
        let high = syms.iter().filter(|s| s.first() >= threshold).count();
        if high >= 2 {
            triple_violations.push(m.clone());
        }
    }
    Ok(TripleStructureReport {
        d,
        kind,
        n,
        threshold,
        monomials: expansion.len(),
        weight_violations,
        triple_violations,
    })
}

/// Unimodular matrices act on forms by substitution, f(x) -> f(Mx).
pub fn is_unimodular<T: Ring>(m: &[[T; 3]; 3]) -> bool {
    let rows = [
        LinearForm(m[0].clone()),
        LinearForm(m[1].clone()),
        LinearForm(m[2].clone()),
    ];
    bracket(&rows[0], &rows[1], &rows[2]) == T::one()
}
