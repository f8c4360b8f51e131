//! Interpolation families inside the base locus.
//!
//! With x = x1, y = lambda x2 + mu x3, nodes b_1..b_K and l_i = b_i x + y,
//!
//! ```text
//! f(c) = p_1(c) l_1^d + ... + p_K(c) l_K^d - (c x + y)^d
//! ```
//!
//! is divisible by x^K for every c (p_i are the Lagrange basis polynomials of
//! the nodes). For K = 2n+3 (resp. 2n+5) these are elements of the linear
//! space on which S_d (resp. T_d) vanishes to order three.
//!
//! [`q_series_direct`] expands S_d(f(c) + g) as a polynomial in c by
//! carrying c through the multilinear quadruple sum. It includes every
//! quadruple of the K + 1 + |g| summands and is the slow reference for the
//! closed forms in [`crate::coeff_engine`].

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::One;
use thiserror::Error;

use crate::covariants::{BracketTable, CovariantKind};
use crate::forms::{HomForm, LinearForm, Monomial, WeightedPower};
use crate::poly::UniPoly;
use crate::scalars::Ring;

pub type CPoly = UniPoly<BigRational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("interpolation nodes must be nonempty")]
    NoNodes,
    #[error("interpolation nodes {0} and {1} coincide")]
    DuplicateNode(usize, usize),
    #[error("node index {index} out of range for {len} nodes")]
    NodeIndexOutOfRange { index: usize, len: usize },
    #[error("parameter c = {0} coincides with an interpolation node")]
    NodeCollision(String),
    #[error("degree d = {d} must exceed the number of nodes K = {k}")]
    DegreeTooSmall { d: u32, k: usize },
    #[error("y must be a nonzero combination of x2 and x3")]
    InvalidDirection,
}

/// Pairwise distinct interpolation nodes b_1..b_K.
#[derive(Debug, Clone, PartialEq)]
pub struct InterpNodes {
    nodes: Vec<BigRational>,
}

impl InterpNodes {
    pub fn new(nodes: Vec<BigRational>) -> Result<Self, FamilyError> {
        if nodes.is_empty() {
            return Err(FamilyError::NoNodes);
        }
        for i in 0..nodes.len() {
            for j in i + 1..nodes.len() {
                if nodes[i] == nodes[j] {
                    return Err(FamilyError::DuplicateNode(i, j));
                }
            }
        }
        Ok(Self { nodes })
    }

    pub fn from_ints(values: &[i64]) -> Result<Self, FamilyError> {
        Self::new(values.iter().map(|&v| BigRational::from_integer(v.into())).collect())
    }

    /// 0, 1, ..., k-1.
    pub fn consecutive(k: usize) -> Self {
        Self::from_ints(&(0..k as i64).collect::<Vec<_>>()).expect("distinct nodes")
    }

    /// 1, 2, 4, ..., 2^(k-1).
    pub fn powers_of_two(k: usize) -> Self {
        Self::new(
            (0..k)
                .map(|e| BigRational::from_integer(BigInt::one() << e))
                .collect(),
        )
        .expect("distinct nodes")
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[BigRational] {
        &self.nodes
    }
}

/// Lagrange basis polynomial p_i (0-based) of degree K-1.
pub fn interp_poly(b: &InterpNodes, i: usize) -> Result<CPoly, FamilyError> {
    let nodes = b.nodes();
    if i >= nodes.len() {
        return Err(FamilyError::NodeIndexOutOfRange {
            index: i,
            len: nodes.len(),
        });
    }
    let mut num = CPoly::one();
    let mut den = BigRational::one();
    for (j, bj) in nodes.iter().enumerate() {
        if j == i {
            continue;
        }
        num = num * CPoly::new(vec![-bj.clone(), BigRational::one()]);
        den *= &nodes[i] - bj;
    }
    Ok(num.scale(&den.recip()))
}

fn check_direction<T: Ring>(y: &LinearForm<T>) -> Result<(), FamilyError> {
    if !y.0[0].is_zero() || y.is_zero() {
        return Err(FamilyError::InvalidDirection);
    }
    Ok(())
}

/// f(c) at a numeric parameter, as K + 1 weighted powers: the interpolation
/// terms p_i(c) (b_i x + y)^d followed by -(c x + y)^d.
pub fn build_f_c(
    b: &InterpNodes,
    y: &LinearForm<BigRational>,
    d: u32,
    c: &BigRational,
) -> Result<Vec<WeightedPower<BigRational>>, FamilyError> {
    check_direction(y)?;
    if d as usize <= b.len() {
        return Err(FamilyError::DegreeTooSmall { d, k: b.len() });
    }
    if b.nodes().contains(c) {
        return Err(FamilyError::NodeCollision(c.to_string()));
    }
    let x = LinearForm::<BigRational>::x(0);
    let mut out = Vec::with_capacity(b.len() + 1);
    for (i, bi) in b.nodes().iter().enumerate() {
        let weight = interp_poly(b, i)?.eval(c);
        out.push(WeightedPower::new(weight, x.scale(bi).add(y)));
    }
    out.push(WeightedPower::new(-BigRational::one(), x.scale(c).add(y)));
    Ok(out)
}

/// Q_0 + Q_1 c + ... + Q_D c^D with forms Q_t of a fixed order.
#[derive(Debug, Clone, PartialEq)]
pub struct CPolyForm {
    order: u32,
    coeffs: Vec<HomForm<BigRational>>,
}

impl CPolyForm {
    fn from_poly_form(order: u32, f: &HomForm<CPoly>) -> Self {
        let top = f
            .terms()
            .filter_map(|(_, p)| p.degree())
            .max()
            .map_or(0, |d| d + 1);
        let coeffs = (0..top)
            .map(|t| HomForm::from_terms(order, f.terms().map(|(i, p)| (*i, p.coeff(t)))))
            .collect();
        Self { order, coeffs }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Degree in c; `None` if identically zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Q_t, zero past the degree.
    pub fn q(&self, t: usize) -> HomForm<BigRational> {
        self.coeffs
            .get(t)
            .cloned()
            .unwrap_or_else(|| HomForm::zero(self.order))
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self {
            order: self.order,
            coeffs: self.coeffs.iter().map(|q| q.scale(s)).collect(),
        }
    }
}

/// S_d(f(c) + g) (or T_d, by `kind`) with d = kind.degree(n), as a
/// polynomial in c.
pub fn q_series_direct(
    kind: CovariantKind,
    g: &[WeightedPower<BigInt>],
    b: &InterpNodes,
    y: &LinearForm<BigInt>,
    n: u32,
) -> Result<CPolyForm, FamilyError> {
    let d = kind.degree(n);
    if d as usize <= b.len() {
        return Err(FamilyError::DegreeTooSmall { d, k: b.len() });
    }
    series(kind, g, b.nodes(), y, n)
}

/// S_d(-(c x + y)^d + g) as a polynomial in c: the family without its
/// interpolation terms.
pub fn q_series_line(
    kind: CovariantKind,
    g: &[WeightedPower<BigInt>],
    y: &LinearForm<BigInt>,
    n: u32,
) -> Result<CPolyForm, FamilyError> {
    series(kind, g, &[], y, n)
}

type IPoly = UniPoly<BigInt>;

/// Integer data of the interpolation terms. With b_i = a_i / e_i,
/// p_i(c) l_i^d = r_i N_i(c) (a_i x + e_i y)^d where
/// N_i(c) = prod_{j != i} (e_j c - a_j) and r_i is a rational scalar.
struct IntegralNodes {
    forms: Vec<LinearForm<BigInt>>,
    numerators: Vec<IPoly>,
    scalars: Vec<BigRational>,
}

impl IntegralNodes {
    fn new(nodes: &[BigRational], y: &LinearForm<BigInt>, d: u32) -> Self {
        let x = LinearForm::<BigInt>::x(0);
        let mut out = Self {
            forms: Vec::with_capacity(nodes.len()),
            numerators: Vec::with_capacity(nodes.len()),
            scalars: Vec::with_capacity(nodes.len()),
        };
        for (i, bi) in nodes.iter().enumerate() {
            let (a, e) = (bi.numer().clone(), bi.denom().clone());
            out.forms.push(x.scale(&a).add(&y.scale(&e)));
            let mut num = IPoly::one();
            let mut den = BigRational::from_integer(e.pow(d));
            for (j, bj) in nodes.iter().enumerate() {
                if j == i {
                    continue;
                }
                num = num * IPoly::new(vec![-bj.numer().clone(), bj.denom().clone()]);
                den *= (bi - bj) * BigRational::from_integer(bj.denom().clone());
            }
            out.numerators.push(num);
            out.scalars.push(den.recip());
        }
        out
    }
}

fn series(
    kind: CovariantKind,
    g: &[WeightedPower<BigInt>],
    nodes: &[BigRational],
    y: &LinearForm<BigInt>,
    n: u32,
) -> Result<CPolyForm, FamilyError> {
    check_direction(y)?;
    let d = kind.degree(n);
    let k = nodes.len();
    let interp = IntegralNodes::new(nodes, y, d);
    let konst = |v: &BigInt| IPoly::constant(v.clone());
    let lift = |l: &LinearForm<BigInt>| l.map(konst);
    let x_c = LinearForm::<IPoly>::x(0);

    // Summands: interpolation terms 0..k (weights applied at the end), the
    // line term c x + y at index k, then g.
    let mut forms: Vec<LinearForm<IPoly>> = interp.forms.iter().map(lift).collect();
    forms.push(x_c.scale(&IPoly::var()).add(&lift(y)));
    forms.extend(g.iter().map(|t| lift(&t.form)));
    let mut other_weights: Vec<IPoly> = vec![IPoly::one(); k];
    other_weights.push(-IPoly::one());
    other_weights.extend(g.iter().map(|t| konst(&t.weight)));

    let refs: Vec<&LinearForm<IPoly>> = forms.iter().collect();
    let table = BracketTable::new(&refs);
    let linear: Vec<HomForm<IPoly>> = forms
        .iter()
        .map(|l| {
            let f = HomForm::from_linear(l);
            match kind {
                CovariantKind::S => f,
                CovariantKind::T => f.mul(&f),
            }
        })
        .collect();

    // Contributions grouped by which interpolation terms they contain, so
    // the node weights are multiplied in once per group.
    let mut groups: HashMap<Vec<usize>, HomForm<IPoly>> = HashMap::new();
    let len = forms.len();
    for a in 0..len {
        for bb in a + 1..len {
            let ab = linear[a].mul(&linear[bb]);
            for c in bb + 1..len {
                let mut abc = None;
                for p in c + 1..len {
                    let quad = [a, bb, c, p];
                    let Some(i) = table.clebsch(quad) else {
                        continue;
                    };
                    let w = quad
                        .iter()
                        .fold(IPoly::one(), |acc, &q| acc * other_weights[q].clone());
                    let abc = abc.get_or_insert_with(|| ab.mul(&linear[c]));
                    let contribution = abc.mul(&linear[p]).scale(&(w * i.pow(n as u64)));
                    let key: Vec<usize> = quad.iter().copied().filter(|&q| q < k).collect();
                    let acc = groups
                        .entry(key)
                        .or_insert_with(|| HomForm::zero(kind.order()));
                    *acc = std::mem::replace(acc, HomForm::zero(kind.order())) + contribution;
                }
            }
        }
    }

    // sum_G F_G prod_{i in G} r_i N_i over the common denominator of the r.
    let mut keys: Vec<&Vec<usize>> = groups.keys().collect();
    keys.sort();
    let scalar = |key: &[usize]| {
        key.iter()
            .fold(BigRational::one(), |acc, &q| acc * &interp.scalars[q])
    };
    let common = keys
        .iter()
        .fold(BigInt::one(), |acc, key| acc.lcm(scalar(key).denom()));
    let mut total: HomForm<IPoly> = HomForm::zero(kind.order());
    for key in keys {
        let r = scalar(key) * BigRational::from_integer(common.clone());
        let w = key
            .iter()
            .fold(IPoly::constant(r.to_integer()), |acc, &q| acc * interp.numerators[q].clone());
        total = total + groups[key].scale(&w);
    }
    let total: HomForm<CPoly, Monomial> =
        total.map(|p| p.map(|v| BigRational::new(v * 24, common.clone())));
    Ok(CPolyForm::from_poly_form(kind.order(), &total))
}

/// True if every monomial of f has x1-exponent at least k.
pub fn divisible_by_x1_power<T: Ring>(f: &HomForm<T>, k: u32) -> bool {
    f.terms().all(|(i, _)| i.first() >= k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{sum_of_powers, MultiIndex};
    use num_traits::Zero;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn interp_two_nodes() {
        let b = InterpNodes::from_ints(&[0, 1]).unwrap();
        assert_eq!(interp_poly(&b, 0).unwrap(), CPoly::new(vec![q(1), q(-1)]));
        assert_eq!(interp_poly(&b, 1).unwrap(), CPoly::new(vec![q(0), q(1)]));
        assert!(matches!(
            interp_poly(&b, 2),
            Err(FamilyError::NodeIndexOutOfRange { index: 2, len: 2 })
        ));
    }

    #[test]
    fn interpolation_properties() {
        for b in [InterpNodes::consecutive(6), InterpNodes::powers_of_two(5)] {
            let ps: Vec<_> = (0..b.len()).map(|i| interp_poly(&b, i).unwrap()).collect();
            for (i, p) in ps.iter().enumerate() {
                assert_eq!(p.degree(), Some(b.len() - 1));
                for (j, bj) in b.nodes().iter().enumerate() {
                    let expect = if i == j { q(1) } else { q(0) };
                    assert_eq!(p.eval(bj), expect);
                }
            }
            let sum = ps.into_iter().fold(CPoly::zero(), |a, p| a + p);
            assert_eq!(sum, CPoly::one());
        }
    }

    #[test]
    fn node_validation() {
        assert_eq!(InterpNodes::from_ints(&[]), Err(FamilyError::NoNodes));
        assert_eq!(
            InterpNodes::from_ints(&[3, 1, 3]),
            Err(FamilyError::DuplicateNode(0, 2))
        );
    }

    #[test]
    fn build_f_c_small_example() {
        let b = InterpNodes::from_ints(&[0, 1]).unwrap();
        let y = LinearForm([q(0), q(1), q(0)]);
        let terms = build_f_c(&b, &y, 5, &q(2)).unwrap();
        assert_eq!(terms.len(), 3);
        let f = sum_of_powers(&terms, 5).to_monomial();
        assert!(f.coeff(&MultiIndex::new(0, 5, 0)).is_zero());
        assert!(f.coeff(&MultiIndex::new(1, 4, 0)).is_zero());
        assert_eq!(f.coeff(&MultiIndex::new(2, 3, 0)), q(-20));
        assert!(divisible_by_x1_power(&f, 2));
        assert!(!f.is_zero());
    }

    #[test]
    fn build_f_c_errors() {
        let b = InterpNodes::from_ints(&[0, 1, 2]).unwrap();
        let y = LinearForm([q(0), q(1), q(1)]);
        assert!(matches!(
            build_f_c(&b, &y, 5, &q(1)),
            Err(FamilyError::NodeCollision(_))
        ));
        assert_eq!(
            build_f_c(&b, &y, 3, &q(7)),
            Err(FamilyError::DegreeTooSmall { d: 3, k: 3 })
        );
        assert_eq!(
            build_f_c(&b, &LinearForm([q(1), q(1), q(0)]), 5, &q(7)),
            Err(FamilyError::InvalidDirection)
        );
        assert_eq!(
            build_f_c(&b, &LinearForm([q(0), q(0), q(0)]), 5, &q(7)),
            Err(FamilyError::InvalidDirection)
        );
    }

    #[test]
    fn small_series_matches_pointwise_evaluation() {
        // S_10 (n = 3, K = 9): the series evaluated at a number equals S_10
        // of f(c) + g at that number.
        let n = 3;
        let g: Vec<_> = [[1, 3, 9], [-10, 1, 4], [8, 4, 6], [1, 6, -10], [4, -8, -10]]
            .iter()
            .map(|l| WeightedPower::unit(LinearForm::int(l[0], l[1], l[2])))
            .collect();
        let b = InterpNodes::consecutive(9);
        let y = LinearForm::int(0, 1, 0);
        let series = q_series_direct(CovariantKind::S, &g, &b, &y, n).unwrap();
        assert!(series.degree().unwrap() <= 10);

        let c = q(11);
        let y_q = y.map(|v| BigRational::from_integer(v.clone()));
        let mut terms = build_f_c(&b, &y_q, 10, &c).unwrap();
        terms.extend(g.iter().map(|t| {
            WeightedPower::new(BigRational::from_integer(t.weight.clone()), t.form.map(|v| BigRational::from_integer(v.clone())))
        }));
        let direct = crate::covariants::eval_s(&terms, 10).unwrap();
        let mut at_c = HomForm::zero(4);
        let mut power = q(1);
        for t in 0..=series.degree().unwrap() {
            at_c = at_c + series.q(t).scale(&power);
            power *= &c;
        }
        assert_eq!(at_c, direct);
    }
}
