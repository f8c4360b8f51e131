//! Closed-form coefficients of the family S_d(f(c) + g) for arbitrary n.
//!
//! For t >= K only the line term -(c x + y)^d of f(c) contributes, so
//!
//! ```text
//! Q_t = coefficient of c^t in
//!       -24 * sum_{i<j<k} I(c x + y, m_i, m_j, m_k)^n (c x + y)^e (m_i m_j m_k)^e
//! ```
//!
//! with e = 1 for S and e = 2 for T. The bracket factors are linear in c:
//! (c x + y, m_i, m_k) = xi_ik c + eta_ik, so the coefficient of c^s in
//! I^n is a triple binomial sum. Only the top `p` coefficients in c are ever
//! needed, and those are computed by truncated convolution of the top
//! coefficients of the three binomial powers.
//!
//! This exact big-integer path is the path of record; [`quasi`] rebuilds the
//! same entries as quasi-polynomials over F_p as a cross-check.

pub mod quasi;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::covariants::{bracket, CovariantKind};
use crate::forms::{basis, mul_linear_squares, mul_linears, HomForm, LinearForm, MultiIndex, WeightedPower};
use crate::scalars::{binom_exact, reduce_mod, PrimeField, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("t = {t} is outside the window [{lo}, {hi}] for n = {n}")]
    OutOfWindow { n: u32, t: u32, lo: i64, hi: u32 },
    #[error("R_t is not {p}-integral at n = {n}, t = {t}, monomial {monomial:?}: {value}")]
    NotPIntegral {
        n: u32,
        t: u32,
        p: u64,
        monomial: MultiIndex,
        value: String,
    },
    #[error("xi for the pair ({0}, {1}) vanishes mod p; quasi-polynomial form unavailable")]
    XiNotInvertible(usize, usize),
    #[error("offset {offset}: polynomial P_{w}(n) of triple {triple:?} is not divisible by C(n, {m}) over F_p")]
    NotDivisible {
        triple: [usize; 3],
        offset: u32,
        w: u32,
        m: i64,
    },
}

/// d = 3n+1 with S_d into quartics, or d = 3n+2 with T_d into octics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    D1,
    D2,
}

impl Case {
    pub fn kind(&self) -> CovariantKind {
        match self {
            Case::D1 => CovariantKind::S,
            Case::D2 => CovariantKind::T,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Case::D1 => "d1",
            Case::D2 => "d2",
        }
    }

    /// d - 3n.
    pub fn residue(&self) -> u32 {
        match self {
            Case::D1 => 1,
            Case::D2 => 2,
        }
    }

    pub fn degree(&self, n: u32) -> u32 {
        3 * n + self.residue()
    }

    pub fn order(&self) -> u32 {
        self.kind().order()
    }

    pub fn prime(&self) -> u64 {
        match self {
            Case::D1 => 11,
            Case::D2 => 19,
        }
    }

    pub fn period(&self) -> u32 {
        let p = self.prime() as u32;
        p * (p - 1)
    }

    /// Number K of interpolation nodes: 2n+3 or 2n+5.
    pub fn nodes(&self, n: u32) -> u32 {
        self.kind().base_locus_exponent(n)
    }

    /// Smallest n with d - p + 1 >= K, so the whole window lies above K.
    pub fn min_n(&self) -> u32 {
        let (r, k0, p) = (self.residue(), self.nodes(0), self.prime() as u32);
        // 3n + r - p + 1 >= 2n + k0
        (k0 + p).saturating_sub(r + 1)
    }

    /// Index m in the divisor C(n, m) of R_t, for t = d - offset. It does
    /// not depend on n.
    pub fn divisor_index(&self, offset: u32) -> i64 {
        Integer::div_floor(&(offset as i64 - self.residue() as i64), &3)
    }
}

/// The point g = m_1^d + ... + m_9^d, the precision p and the lines y.
#[derive(Debug, Clone)]
pub struct GConfig {
    pub case: Case,
    pub forms: Vec<LinearForm<BigInt>>,
    pub field: PrimeField,
    pub ys: Vec<LinearForm<BigInt>>,
}

/// Coefficient vectors of m_1..m_9.
pub const G_FORMS: [[i64; 3]; 9] = [
    [1, 3, 9],
    [-10, 1, 4],
    [8, 4, 6],
    [1, 6, -10],
    [4, -8, -10],
    [-3, 7, -4],
    [0, -3, 2],
    [8, -4, -4],
    [-10, 4, 6],
];

impl GConfig {
    pub fn standard(case: Case) -> Self {
        let ys = match case {
            Case::D1 => vec![LinearForm::int(0, 1, 0), LinearForm::int(0, 0, 1)],
            Case::D2 => vec![
                LinearForm::int(0, 1, 0),
                LinearForm::int(0, 0, 1),
                LinearForm::int(0, 1, 1),
            ],
        };
        Self {
            case,
            forms: G_FORMS
                .iter()
                .map(|l| LinearForm::int(l[0], l[1], l[2]))
                .collect(),
            field: PrimeField::new(case.prime()).expect("configured precision is prime"),
            ys,
        }
    }

    pub fn g_terms(&self) -> Vec<WeightedPower<BigInt>> {
        self.forms.iter().cloned().map(WeightedPower::unit).collect()
    }

    pub fn prime(&self) -> u64 {
        self.field.modulus()
    }

    /// Window t = d, d-1, ..., d-p+1, in column order.
    pub fn window(&self, n: u32) -> Vec<u32> {
        let d = self.case.degree(n);
        (0..self.prime() as u32)
            .filter_map(|u| d.checked_sub(u))
            .collect()
    }

    fn check_window(&self, n: u32, t: u32) -> Result<u32, EngineError> {
        let d = self.case.degree(n);
        let lo = d as i64 - self.prime() as i64 + 1;
        if t > d || (t as i64) < lo {
            return Err(EngineError::OutOfWindow { n, t, lo, hi: d });
        }
        Ok(d - t)
    }

    pub fn triples(&self) -> Vec<[usize; 3]> {
        let m = self.forms.len();
        let mut out = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                for k in j + 1..m {
                    out.push([i, j, k]);
                }
            }
        }
        out
    }
}

/// (c x + y, m_i, m_k) = xi c + eta.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XiEta {
    pub xi: BigInt,
    pub eta: BigInt,
}

impl XiEta {
    pub fn new(cfg: &GConfig, i: usize, k: usize, y: &LinearForm<BigInt>) -> Self {
        let x = LinearForm::x(0);
        Self {
            xi: bracket(&x, &cfg.forms[i], &cfg.forms[k]),
            eta: bracket(y, &cfg.forms[i], &cfg.forms[k]),
        }
    }
}

/// The three factors of I(c x + y, m_i, m_j, m_k) that involve c, in the
/// order (i,k), (i,j), (j,k), and the constant bracket (m_i m_j m_k).
pub(crate) fn triple_factors(cfg: &GConfig, [i, j, k]: [usize; 3], y: &LinearForm<BigInt>) -> ([XiEta; 3], BigInt) {
    (
        [XiEta::new(cfg, i, k, y), XiEta::new(cfg, i, j, y), XiEta::new(cfg, j, k, y)],
        bracket(&cfg.forms[i], &cfg.forms[j], &cfg.forms[k]),
    )
}

/// Coefficient of c^s in I(c x + y, m_i, m_j, m_k)^n, by the offset form of
/// the triple binomial sum:
///
/// ```text
/// (m_i m_j m_k)^n * sum_{p'+q'+r' = 3n-s} C(n,p')C(n,q')C(n,r')
///     xi_ik^(n-p') xi_ij^(n-q') xi_jk^(n-r') eta_ik^p' eta_ij^q' eta_jk^r'
/// ```
pub fn coeff_i_power(s: i64, n: u32, triple: [usize; 3], y: &LinearForm<BigInt>, cfg: &GConfig) -> BigInt {
    let w = 3 * n as i64 - s;
    if s < 0 || w < 0 {
        return BigInt::zero();
    }
    let ([ik, ij, jk], rho) = triple_factors(cfg, triple, y);
    let n64 = n as i64;
    let mut sum = BigInt::zero();
    for p in 0..=w.min(n64) {
        for q in 0..=(w - p).min(n64) {
            let r = w - p - q;
            if r > n64 {
                continue;
            }
            let term = binom_exact(n as u64, p)
                * binom_exact(n as u64, q)
                * binom_exact(n as u64, r)
                * ik.xi.pow((n64 - p) as u32)
                * ij.xi.pow((n64 - q) as u32)
                * jk.xi.pow((n64 - r) as u32)
                * ik.eta.pow(p as u32)
                * ij.eta.pow(q as u32)
                * jk.eta.pow(r as u32);
            sum += term;
        }
    }
    rho.pow(n) * sum
}

/// Top coefficients of (xi c + eta)^n: entry o is the coefficient of
/// c^(n-o), o = 0..=depth.
fn top_binomial_coeffs(f: &XiEta, n: u32, depth: u32) -> Vec<BigInt> {
    let depth = depth.min(n);
    let mut out = Vec::with_capacity(depth as usize + 1);
    // xi^(n-o) built downward from xi^(n-depth).
    let mut xi_pows = Vec::with_capacity(depth as usize + 1);
    let mut acc = f.xi.pow(n - depth);
    xi_pows.push(acc.clone());
    for _ in 0..depth {
        acc *= &f.xi;
        xi_pows.push(acc.clone());
    }
    let mut eta_pow = BigInt::one();
    for o in 0..=depth {
        out.push(binom_exact(n as u64, o as i64) * &xi_pows[(depth - o) as usize] * &eta_pow);
        eta_pow *= &f.eta;
    }
    out
}

fn truncated_convolution(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Entry w is the coefficient of c^(3n-w) in I(c x + y, m_i, m_j, m_k)^n,
/// for w = 0..=depth.
pub fn top_i_power_coeffs(
    n: u32,
    triple: [usize; 3],
    y: &LinearForm<BigInt>,
    cfg: &GConfig,
    depth: u32,
) -> Vec<BigInt> {
    let (factors, rho) = triple_factors(cfg, triple, y);
    top_coeffs_from_factors(&factors, &rho, n, depth)
}

pub(crate) fn top_coeffs_from_factors(factors: &[XiEta; 3], rho: &BigInt, n: u32, depth: u32) -> Vec<BigInt> {
    let len = depth as usize + 1;
    let tops: Vec<Vec<BigInt>> = factors
        .iter()
        .map(|f| top_binomial_coeffs(f, n, depth))
        .collect();
    let prod = truncated_convolution(&truncated_convolution(&tops[0], &tops[1], len), &tops[2], len);
    let rho_n = rho.pow(n);
    prod.into_iter().map(|v| v * &rho_n).collect()
}

/// Per-triple data for one line y: the c-factors and the small forms
/// binom(e, r) x^r y^(e-r) (m_i m_j m_k)^e, r = 0..=e, in dense basis order.
#[derive(Debug, Clone)]
pub(crate) struct TriplePrep {
    pub(crate) triple: [usize; 3],
    pub(crate) factors: [XiEta; 3],
    pub(crate) rho: BigInt,
    pub(crate) parts: Vec<Vec<i64>>,
}

#[derive(Debug, Clone)]
pub(crate) struct LinePrep {
    pub(crate) triples: Vec<TriplePrep>,
}

impl LinePrep {
    pub(crate) fn new(cfg: &GConfig, y: &LinearForm<BigInt>) -> Self {
        let kind = cfg.case.kind();
        let e = kind.factor_power();
        let x = LinearForm::<BigInt>::x(0);
        let triples = cfg
            .triples()
            .into_iter()
            .map(|triple| {
                let (factors, rho) = triple_factors(cfg, triple, y);
                let ms: Vec<LinearForm<BigInt>> = triple.iter().map(|&i| cfg.forms[i].clone()).collect();
                let m_e = match kind {
                    CovariantKind::S => mul_linears(&ms),
                    CovariantKind::T => mul_linear_squares(&ms),
                };
                let parts = (0..=e)
                    .map(|r| {
                        let mut ls = vec![x.clone(); r as usize];
                        ls.extend(std::iter::repeat_n(y.clone(), (e - r) as usize));
                        let f = mul_linears(&ls)
                            .mul(&m_e)
                            .scale(&binom_exact(e as u64, r as i64));
                        f.dense()
                            .into_iter()
                            .map(|v| v.to_i64().expect("small form coefficient"))
                            .collect()
                    })
                    .collect();
                TriplePrep {
                    triple,
                    factors,
                    rho,
                    parts,
                }
            })
            .collect();
        Self { triples }
    }
}

/// Exact Q_t for every t of the window (column order t = d, d-1, ...), as
/// dense vectors over the basis of the target forms.
pub(crate) fn q_window_dense(n: u32, prep: &LinePrep, cfg: &GConfig) -> Vec<Vec<BigInt>> {
    let p = cfg.prime() as u32;
    let kind = cfg.case.kind();
    let e = kind.factor_power();
    let rows = basis(kind.order()).len();
    let d = cfg.case.degree(n);
    let window = cfg.window(n);
    // Offsets w = 3n - s range over [0, p - 1] for s in the window.
    let depth = p - 1;
    let mut out = vec![vec![BigInt::zero(); rows]; window.len()];
    for tp in &prep.triples {
        let top = top_coeffs_from_factors(&tp.factors, &tp.rho, n, depth);
        for (col, &t) in window.iter().enumerate() {
            debug_assert_eq!(d - t, col as u32);
            for r in 0..=e {
                let Some(s) = t.checked_sub(r) else { continue };
                if s > 3 * n {
                    continue;
                }
                let w = (3 * n - s) as usize;
                let Some(coef) = top.get(w) else {
                    unreachable!("window offset {w} beyond depth {depth}");
                };
                if coef.is_zero() {
                    continue;
                }
                for (acc, &small) in out[col].iter_mut().zip(&tp.parts[r as usize]) {
                    if small != 0 {
                        *acc += coef * small;
                    }
                }
            }
        }
    }
    for col in &mut out {
        for v in col.iter_mut() {
            *v *= -24;
        }
    }
    out
}

/// Q_t for d - p + 1 <= t <= d, in monomial coordinates.
pub fn q_t(n: u32, t: u32, y: &LinearForm<BigInt>, cfg: &GConfig) -> Result<HomForm<BigInt>, EngineError> {
    let u = cfg.check_window(n, t)?;
    let prep = LinePrep::new(cfg, y);
    let cols = q_window_dense(n, &prep, cfg);
    Ok(HomForm::from_dense(cfg.case.order(), cols[u as usize].clone()))
}

/// C(n, m), with the convention C(n, m) = 1 for m <= 0.
pub fn r_divisor(n: u32, m: i64) -> BigInt {
    if m <= 0 {
        BigInt::one()
    } else {
        binom_exact(n as u64, m)
    }
}

/// R_t = Q_t / C(n, n - ceil(t/3)) and its reduction mod p.
#[derive(Debug, Clone, PartialEq)]
pub struct RForm {
    pub n: u32,
    pub t: u32,
    pub divisor: BigInt,
    pub exact: HomForm<BigRational>,
    /// Residues in basis order.
    pub reduced: Vec<u64>,
    /// Whether every coefficient of Q_t was divisible by the divisor in Z.
    pub integral_over_z: bool,
}

pub(crate) fn r_from_dense(
    n: u32,
    t: u32,
    q: &[BigInt],
    cfg: &GConfig,
) -> Result<RForm, EngineError> {
    let u = cfg.case.degree(n) - t;
    let m = n as i64 - Integer::div_floor(&(t as i64 + 2), &3);
    debug_assert_eq!(m, cfg.case.divisor_index(u));
    let divisor = r_divisor(n, m);
    let order = cfg.case.order();
    let mut integral_over_z = true;
    let mut reduced = Vec::with_capacity(q.len());
    let mut exact = Vec::with_capacity(q.len());
    for (mono, v) in basis(order).into_iter().zip(q) {
        let r = BigRational::new(v.clone(), divisor.clone());
        if !r.is_integer() {
            integral_over_z = false;
        }
        let red = reduce_mod(&r, &cfg.field).map_err(|e| match e {
            ScalarError::NotIntegral { value, p } => EngineError::NotPIntegral {
                n,
                t,
                p,
                monomial: mono,
                value,
            },
            other => unreachable!("{other}"),
        })?;
        reduced.push(red.residue());
        exact.push(r);
    }
    Ok(RForm {
        n,
        t,
        divisor,
        exact: HomForm::from_dense(order, exact),
        reduced,
        integral_over_z,
    })
}

pub fn r_t(n: u32, t: u32, y: &LinearForm<BigInt>, cfg: &GConfig) -> Result<RForm, EngineError> {
    let q = q_t(n, t, y, cfg)?;
    r_from_dense(n, t, &q.dense(), cfg)
}

/// All R_t^y of the window for every configured line, in column order.
pub fn r_window(n: u32, cfg: &GConfig) -> Result<Vec<RForm>, EngineError> {
    let mut out = Vec::new();
    for y in &cfg.ys {
        let prep = LinePrep::new(cfg, y);
        let cols = q_window_dense(n, &prep, cfg);
        for (t, q) in cfg.window(n).into_iter().zip(&cols) {
            out.push(r_from_dense(n, t, q, cfg)?);
        }
    }
    Ok(out)
}

/// Sign-insensitive size of the largest entry, for diagnostics.
pub fn max_bits(values: &[BigInt]) -> u64 {
    values.iter().map(|v| v.abs().bits()).max().unwrap_or(0)
}
