//! The window entries as quasi-polynomials in n over F_p.
//!
//! When xi_ik, xi_ij, xi_jk are units mod p, the coefficient of c^(3n-w) in
//! I(c x + y, m_i, m_j, m_k)^n is rho^n P_w(n) with
//! rho = (m_i m_j m_k) xi_ik xi_ij xi_jk and
//!
//! ```text
//! P_w(n) = sum_{p'+q'+r' = w} C(n,p') C(n,q') C(n,r') a_ik^p' a_ij^q' a_jk^r',
//! a = eta / xi.
//! ```
//!
//! For w < p every C(n, k) is a polynomial in n over F_p, and P_w is
//! divisible by C(n, floor(w/3)). Each matrix entry is then a sum of
//! rho^n times a polynomial of degree below p, which is periodic in n with
//! period p(p-1). Triples with a vanishing xi are evaluated through the
//! exact path instead.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{r_divisor, top_coeffs_from_factors, EngineError, GConfig, LinePrep, TriplePrep};
use crate::forms::LinearForm;
use crate::scalars::{reduce_mod, PrimeField};
use num_rational::BigRational;

/// Polynomial in n over F_p, residues stored low degree first and trimmed.
#[derive(Clone, PartialEq, Eq)]
pub struct FpPoly {
    field: PrimeField,
    coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn new(field: PrimeField, mut coeffs: Vec<u64>) -> Self {
        let p = field.modulus();
        for c in &mut coeffs {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { field, coeffs }
    }

    pub fn zero(field: PrimeField) -> Self {
        Self::new(field, Vec::new())
    }

    pub fn constant(field: PrimeField, c: u64) -> Self {
        Self::new(field, vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// C(n, k) = n(n-1)...(n-k+1) / k!, for k < p.
    pub fn binomial(field: PrimeField, k: u32) -> Self {
        assert!((k as u64) < field.modulus(), "C(n, {k}) has no F_p form");
        let mut acc = Self::constant(field, 1);
        let mut fact = 1u64;
        for i in 0..k as u64 {
            let lin = Self::new(field, vec![field.sub_raw(0, i % field.modulus()), 1]);
            acc = acc.mul(&lin);
            fact = field.mul_raw(fact, i + 1);
        }
        acc.scale(field.inv_raw(fact).expect("k! is a unit"))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let f = self.field;
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let v = (0..len)
            .map(|i| {
                f.add_raw(
                    *self.coeffs.get(i).unwrap_or(&0),
                    *rhs.coeffs.get(i).unwrap_or(&0),
                )
            })
            .collect();
        Self::new(f, v)
    }

    pub fn scale(&self, s: u64) -> Self {
        let f = self.field;
        Self::new(f, self.coeffs.iter().map(|&c| f.mul_raw(c, s % f.modulus())).collect())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(self.field);
        }
        let f = self.field;
        let mut out = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = f.add_raw(out[i + j], f.mul_raw(a, b));
            }
        }
        Self::new(f, out)
    }

    pub fn eval(&self, n: u64) -> u64 {
        let f = self.field;
        let x = n % f.modulus();
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| f.add_raw(f.mul_raw(acc, x), c))
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let f = self.field;
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead_inv = f.inv_raw(divisor.coeffs[dd]).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(f), self.clone());
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = f.mul_raw(rem[k + dd], lead_inv);
            quot[k] = c;
            if c == 0 {
                continue;
            }
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = f.sub_raw(rem[k + j], f.mul_raw(c, b));
            }
        }
        (Self::new(f, quot), Self::new(f, rem))
    }
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} mod {}", self.coeffs, self.field.modulus())
    }
}

/// rho^n P(n) over F_p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiPolynomial {
    pub rho: u64,
    pub poly: FpPoly,
}

impl QuasiPolynomial {
    pub fn eval(&self, n: u64) -> u64 {
        let f = self.poly.field;
        f.mul_raw(f.pow_raw(self.rho, n), self.poly.eval(n))
    }
}

struct UnitFactors {
    rho: u64,
    alphas: [u64; 3],
}

fn unit_factors(tp: &TriplePrep, field: &PrimeField) -> Result<UnitFactors, EngineError> {
    let mut rho = field.from_bigint(&tp.rho).residue();
    let mut alphas = [0u64; 3];
    let [i, j, k] = tp.triple;
    let pairs = [(i, k), (i, j), (j, k)];
    for (slot, (f, pair)) in tp.factors.iter().zip(pairs).enumerate() {
        let xi = field.from_bigint(&f.xi).residue();
        let inv = field
            .inv_raw(xi)
            .ok_or(EngineError::XiNotInvertible(pair.0, pair.1))?;
        rho = field.mul_raw(rho, xi);
        alphas[slot] = field.mul_raw(field.from_bigint(&f.eta).residue(), inv);
    }
    Ok(UnitFactors { rho, alphas })
}

fn p_w(alphas: &[u64; 3], w: u32, field: PrimeField) -> FpPoly {
    let binoms: Vec<FpPoly> = (0..=w).map(|k| FpPoly::binomial(field, k)).collect();
    let pows = |a: u64| -> Vec<u64> { (0..=w).map(|k| field.pow_raw(a, k as u64)).collect() };
    let (pa, pb, pc) = (pows(alphas[0]), pows(alphas[1]), pows(alphas[2]));
    let mut acc = FpPoly::zero(field);
    for p in 0..=w {
        for q in 0..=w - p {
            let r = w - p - q;
            let c = field.mul_raw(field.mul_raw(pa[p as usize], pb[q as usize]), pc[r as usize]);
            if c == 0 {
                continue;
            }
            let term = binoms[p as usize]
                .mul(&binoms[q as usize])
                .mul(&binoms[r as usize])
                .scale(c);
            acc = acc.add(&term);
        }
    }
    acc
}

/// Quasi-polynomial form of the coefficient of c^(3n-w) in
/// I(c x + y, m_i, m_j, m_k)^n, reduced mod p. Requires w < p.
pub fn quasi_poly(
    triple: [usize; 3],
    w: u32,
    y: &LinearForm<BigInt>,
    cfg: &GConfig,
) -> Result<QuasiPolynomial, EngineError> {
    let (factors, rho) = super::triple_factors(cfg, triple, y);
    let tp = TriplePrep {
        triple,
        factors,
        rho,
        parts: Vec::new(),
    };
    let u = unit_factors(&tp, &cfg.field)?;
    Ok(QuasiPolynomial {
        rho: u.rho,
        poly: p_w(&u.alphas, w, cfg.field),
    })
}

/// Whether C(n, floor(w/3)) divides P_w in F_p[n].
pub fn divisible_by_floor_binomial(q: &QuasiPolynomial, w: u32, field: PrimeField) -> bool {
    q.poly.div_rem(&FpPoly::binomial(field, w / 3)).1.is_zero()
}

/// One matrix column (fixed y and offset u = d - t) as quasi-polynomials.
#[derive(Debug, Clone)]
pub struct QuasiColumn {
    pub line: usize,
    pub offset: u32,
    /// Per basis monomial, the terms rho^n P(n) from unit triples; the
    /// factor -24 is included.
    pub entries: Vec<Vec<QuasiPolynomial>>,
}

/// Quasi-polynomial description of the whole matrix for one case.
#[derive(Debug, Clone)]
pub struct QuasiMatrix {
    pub columns: Vec<QuasiColumn>,
    /// (line, triple) pairs that fall back to the exact path.
    pub fallback: Vec<(usize, [usize; 3])>,
    preps: Vec<LinePrep>,
    fallback_idx: Vec<Vec<usize>>,
}

impl QuasiMatrix {
    /// Builds every column once, asserting the divisibility of each P_w by
    /// the column divisor C(n, m) in F_p[n].
    pub fn build(cfg: &GConfig) -> Result<Self, EngineError> {
        let field = cfg.field;
        let p = cfg.prime() as u32;
        let e = cfg.case.kind().factor_power();
        let delta = cfg.case.residue();
        let minus24 = field.elem(-24).residue();
        let preps: Vec<LinePrep> = cfg.ys.iter().map(|y| LinePrep::new(cfg, y)).collect();
        let mut columns = Vec::new();
        let mut fallback = Vec::new();
        let mut fallback_idx = vec![Vec::new(); preps.len()];
        let mut units = Vec::with_capacity(preps.len());
        for (line, prep) in preps.iter().enumerate() {
            let mut per_line = Vec::new();
            for (idx, tp) in prep.triples.iter().enumerate() {
                match unit_factors(tp, &field) {
                    Ok(u) => per_line.push((idx, u)),
                    Err(EngineError::XiNotInvertible(..)) => {
                        fallback.push((line, tp.triple));
                        fallback_idx[line].push(idx);
                    }
                    Err(other) => return Err(other),
                }
            }
            units.push(per_line);
        }
        for (line, prep) in preps.iter().enumerate() {
            let rows = prep.triples[0].parts[0].len();
            for u in 0..p {
                let m = cfg.case.divisor_index(u);
                let divisor = (m > 0).then(|| FpPoly::binomial(field, m as u32));
                let mut entries = vec![Vec::new(); rows];
                for (idx, uf) in &units[line] {
                    let tp = &prep.triples[*idx];
                    let mut per_entry = vec![FpPoly::zero(field); rows];
                    for r in 0..=e {
                        let Some(w) = (u + r).checked_sub(delta) else { continue };
                        let pw = p_w(&uf.alphas, w, field);
                        let reduced = match &divisor {
                            None => pw,
                            Some(div) => {
                                let (q, rem) = pw.div_rem(div);
                                if !rem.is_zero() {
                                    return Err(EngineError::NotDivisible {
                                        triple: tp.triple,
                                        offset: u,
                                        w,
                                        m,
                                    });
                                }
                                q
                            }
                        };
                        for (acc, &small) in per_entry.iter_mut().zip(&tp.parts[r as usize]) {
                            if small != 0 {
                                let s = field.elem(small).residue();
                                *acc = acc.add(&reduced.scale(field.mul_raw(s, minus24)));
                            }
                        }
                    }
                    for (slot, poly) in entries.iter_mut().zip(per_entry) {
                        if !poly.is_zero() {
                            slot.push(QuasiPolynomial { rho: uf.rho, poly });
                        }
                    }
                }
                columns.push(QuasiColumn {
                    line,
                    offset: u,
                    entries,
                });
            }
        }
        Ok(Self {
            columns,
            fallback,
            preps,
            fallback_idx,
        })
    }

    /// Entries at n, column-major in the matrix column order.
    pub fn evaluate(&self, n: u32, cfg: &GConfig) -> Result<Vec<Vec<u64>>, EngineError> {
        let field = cfg.field;
        let fallback = self.fallback_columns(n, cfg)?;
        Ok(self
            .columns
            .iter()
            .enumerate()
            .map(|(c, col)| {
                col.entries
                    .iter()
                    .enumerate()
                    .map(|(row, terms)| {
                        terms
                            .iter()
                            .fold(fallback[c][row], |acc, q| field.add_raw(acc, q.eval(n as u64)))
                    })
                    .collect()
            })
            .collect())
    }

    /// Contribution of the fallback triples, reduced mod p column by column.
    fn fallback_columns(&self, n: u32, cfg: &GConfig) -> Result<Vec<Vec<u64>>, EngineError> {
        let p = cfg.prime() as u32;
        let e = cfg.case.kind().factor_power();
        let d = cfg.case.degree(n);
        let mut out = Vec::with_capacity(self.columns.len());
        for (line, prep) in self.preps.iter().enumerate() {
            let rows = prep.triples[0].parts[0].len();
            let mut sums = vec![vec![BigInt::zero(); rows]; p as usize];
            for &idx in &self.fallback_idx[line] {
                let tp = &prep.triples[idx];
                let top = top_coeffs_from_factors(&tp.factors, &tp.rho, n, p - 1);
                for (u, sum) in sums.iter_mut().enumerate() {
                    let t = d - u as u32;
                    for r in 0..=e {
                        let s = t - r;
                        if s > 3 * n {
                            continue;
                        }
                        let coef = &top[(3 * n - s) as usize];
                        for (acc, &small) in sum.iter_mut().zip(&tp.parts[r as usize]) {
                            *acc += coef * small;
                        }
                    }
                }
            }
            for (u, sum) in sums.into_iter().enumerate() {
                let div = r_divisor(n, cfg.case.divisor_index(u as u32));
                let col = sum
                    .into_iter()
                    .map(|v| {
                        let q = BigRational::new(v * -24, div.clone());
                        reduce_mod(&q, &cfg.field)
                            .map(|f| f.residue())
                            .map_err(|_| EngineError::XiNotInvertible(0, 0))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                out.push(col);
            }
        }
        Ok(out)
    }
}
