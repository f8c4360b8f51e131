//! Rank certificates for the mod-p window matrices over a full period of n.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeff_engine::quasi::QuasiMatrix;
use crate::coeff_engine::{r_window, Case, EngineError, GConfig};
use crate::covariants::CovariantKind;
use crate::forms::basis;
use crate::scalars::PrimeField;

/// Dense matrix over F_p, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl FpMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(field: PrimeField, rows: &[Vec<u64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(field, rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (c, &v) in row.iter().enumerate() {
                m.set(r, c, v);
            }
        }
        m
    }

    /// Builds from columns, each a vector of row entries.
    pub fn from_columns(field: PrimeField, columns: &[Vec<u64>]) -> Self {
        let rows = columns.first().map_or(0, Vec::len);
        let mut m = Self::zeros(field, rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "ragged columns");
            for (r, &v) in col.iter().enumerate() {
                m.set(r, c, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v % self.field.modulus();
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Gaussian elimination; the matrix is consumed as scratch space.
    pub fn rank(mut self) -> usize {
        let f = self.field;
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        for c in 0..cols {
            if rank == rows {
                break;
            }
            let Some(pivot) = (rank..rows).find(|&r| self.get(r, c) != 0) else {
                continue;
            };
            if pivot != rank {
                for k in 0..cols {
                    self.data.swap(pivot * cols + k, rank * cols + k);
                }
            }
            let inv = f.inv_raw(self.get(rank, c)).expect("pivot is nonzero");
            for r in rank + 1..rows {
                let factor = f.mul_raw(self.get(r, c), inv);
                if factor == 0 {
                    continue;
                }
                for k in c..cols {
                    let v = f.sub_raw(self.get(r, k), f.mul_raw(factor, self.get(rank, k)));
                    self.data[r * cols + k] = v;
                }
            }
            rank += 1;
        }
        rank
    }
}

pub fn rank_mod_p(m: &FpMatrix) -> usize {
    m.clone().rank()
}

/// The matrix at one n with the bookkeeping of its exact divisions.
#[derive(Debug, Clone)]
pub struct WindowMatrix {
    pub n: u32,
    pub matrix: FpMatrix,
    pub divisions: usize,
    pub non_integral_quotients: usize,
}

/// Rows indexed by the monomial basis of the target forms, columns by
/// (y, t) with y in configured order and t = d, d-1, ..., d-p+1.
pub fn build_matrix(n: u32, cfg: &GConfig) -> Result<WindowMatrix, EngineError> {
    let forms = r_window(n, cfg)?;
    let columns: Vec<Vec<u64>> = forms.iter().map(|r| r.reduced.clone()).collect();
    Ok(WindowMatrix {
        n,
        matrix: FpMatrix::from_columns(cfg.field, &columns),
        divisions: forms.iter().map(|r| r.reduced.len()).sum(),
        non_integral_quotients: forms
            .iter()
            .map(|r| r.exact.terms().filter(|(_, v)| !v.is_integer()).count())
            .sum(),
    })
}

#[derive(Debug, Clone, Error)]
pub enum SweepError {
    #[error("n_start = {n_start} is below the smallest admissible n = {min}")]
    NStartTooSmall { n_start: u32, min: u32 },
    #[error("count must be positive")]
    EmptyRange,
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepOptions {
    pub case: Case,
    pub n_start: u32,
    pub count: u32,
    /// Additional n past the range, each compared with n - period.
    pub extra: u32,
    /// Number of leading n re-derived through the quasi-polynomial path.
    pub oracle_crosscheck: u32,
    pub threads: Option<usize>,
}

impl SweepOptions {
    pub fn full_period(case: Case) -> Self {
        Self {
            case,
            n_start: case.min_n(),
            count: case.period(),
            extra: 0,
            oracle_crosscheck: 1,
            threads: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankEntry {
    pub n: u32,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnLabel {
    pub y: [i64; 3],
    pub t_offset: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrosscheckEntry {
    pub n: u32,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrosscheckReport {
    pub fallback_triples: usize,
    pub samples: Vec<CrosscheckEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicitySample {
    pub n: u32,
    pub n_minus_period: u32,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibilityLedger {
    /// Exact quotients Q_t / C(n, m) formed.
    pub divisions: usize,
    /// All of them p-integral; otherwise the sweep stops with a failure.
    pub all_p_integral: bool,
    /// Quotients that are p-integral rationals but not integers.
    pub non_integral_quotients: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankCertificate {
    pub tool: String,
    pub tool_version: String,
    pub case: Case,
    pub covariant: CovariantKind,
    pub prime: u64,
    pub period: u32,
    pub n_start: u32,
    pub count: u32,
    pub extra: u32,
    pub covers_full_period: bool,
    pub g_forms: Vec<[i64; 3]>,
    pub rows: usize,
    pub cols: usize,
    pub row_order: Vec<[u32; 3]>,
    pub column_order: Vec<ColumnLabel>,
    pub ranks: Vec<RankEntry>,
    pub all_full_rank: bool,
    pub divisibility: DivisibilityLedger,
    pub oracle_crosscheck: CrosscheckReport,
    pub periodicity_samples: Vec<PeriodicitySample>,
    pub failure: Option<String>,
    pub wall_time_seconds: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    FullRank,
    RankDeficient,
    EntryFailure,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        match self {
            Outcome::FullRank => 0,
            Outcome::RankDeficient => 2,
            Outcome::EntryFailure => 3,
        }
    }
}

impl RankCertificate {
    pub fn outcome(&self) -> Outcome {
        let crosscheck_ok = self.oracle_crosscheck.samples.iter().all(|s| s.agree)
            && self.periodicity_samples.iter().all(|s| s.equal);
        if self.failure.is_some() || !crosscheck_ok {
            Outcome::EntryFailure
        } else if self.all_full_rank {
            Outcome::FullRank
        } else {
            Outcome::RankDeficient
        }
    }

    /// JSON with `wall_time_seconds` zeroed, for byte comparisons.
    pub fn canonical_json(&self) -> String {
        let mut c = self.clone();
        c.wall_time_seconds = 0.0;
        serde_json::to_string_pretty(&c).expect("certificate serializes")
    }
}

fn y_label(cfg: &GConfig, i: usize) -> [i64; 3] {
    use num_traits::ToPrimitive;
    let y = &cfg.ys[i];
    [0, 1, 2].map(|k| y.0[k].to_i64().expect("small line"))
}

pub fn sweep(opts: &SweepOptions) -> Result<RankCertificate, SweepError> {
    let case = opts.case;
    if opts.count == 0 {
        return Err(SweepError::EmptyRange);
    }
    if opts.n_start < case.min_n() {
        return Err(SweepError::NStartTooSmall {
            n_start: opts.n_start,
            min: case.min_n(),
        });
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = opts.threads {
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| SweepError::ThreadPool(e.to_string()))?;
    let start = Instant::now();
    let cfg = GConfig::standard(case);
    let period = case.period();
    let total = opts.count + opts.extra;
    let ns: Vec<u32> = (opts.n_start..opts.n_start + total).collect();

    let built: Vec<Result<WindowMatrix, EngineError>> =
        pool.install(|| ns.par_iter().map(|&n| build_matrix(n, &cfg)).collect());

    let mut failure = None;
    let mut ranks = Vec::new();
    let mut matrices = Vec::new();
    let mut ledger = DivisibilityLedger {
        divisions: 0,
        all_p_integral: true,
        non_integral_quotients: 0,
    };
    for res in built {
        match res {
            Ok(wm) => {
                ledger.divisions += wm.divisions;
                ledger.non_integral_quotients += wm.non_integral_quotients;
                ranks.push(RankEntry {
                    n: wm.n,
                    rank: rank_mod_p(&wm.matrix),
                });
                matrices.push(wm);
            }
            Err(e) => {
                if matches!(e, EngineError::NotPIntegral { .. }) {
                    ledger.all_p_integral = false;
                }
                failure = Some(e.to_string());
                break;
            }
        }
    }

    let rows = basis(case.order()).len();
    let cols = cfg.ys.len() * cfg.prime() as usize;

    let mut crosscheck = CrosscheckReport {
        fallback_triples: 0,
        samples: Vec::new(),
    };
    if failure.is_none() && opts.oracle_crosscheck > 0 {
        match QuasiMatrix::build(&cfg) {
            Ok(qm) => {
                crosscheck.fallback_triples = qm.fallback.len();
                for wm in matrices.iter().take(opts.oracle_crosscheck as usize) {
                    match qm.evaluate(wm.n, &cfg) {
                        Ok(cols) => crosscheck.samples.push(CrosscheckEntry {
                            n: wm.n,
                            agree: FpMatrix::from_columns(cfg.field, &cols) == wm.matrix,
                        }),
                        Err(e) => {
                            failure = Some(e.to_string());
                            break;
                        }
                    }
                }
            }
            Err(e) => failure = Some(e.to_string()),
        }
    }

    let periodicity_samples = matrices
        .iter()
        .filter_map(|wm| {
            let back = wm.n.checked_sub(period)?;
            let earlier = matrices.iter().find(|m| m.n == back)?;
            Some(PeriodicitySample {
                n: wm.n,
                n_minus_period: back,
                equal: earlier.matrix == wm.matrix,
            })
        })
        .collect();

    let all_full_rank = failure.is_none() && ranks.iter().all(|r| r.rank == rows.min(cols));
    Ok(RankCertificate {
        tool: env!("CARGO_PKG_NAME").to_string(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        case,
        covariant: case.kind(),
        prime: cfg.prime(),
        period,
        n_start: opts.n_start,
        count: opts.count,
        extra: opts.extra,
        covers_full_period: opts.count >= period,
        g_forms: crate::coeff_engine::G_FORMS.to_vec(),
        rows,
        cols,
        row_order: basis(case.order()).into_iter().map(|m| m.0).collect(),
        column_order: (0..cfg.ys.len())
            .flat_map(|i| {
                let y = y_label(&cfg, i);
                (0..cfg.prime() as u32).map(move |t_offset| ColumnLabel { y, t_offset })
            })
            .collect(),
        ranks,
        all_full_rank,
        divisibility: ledger,
        oracle_crosscheck: crosscheck,
        periodicity_samples,
        failure,
        wall_time_seconds: start.elapsed().as_secs_f64(),
    })
}
