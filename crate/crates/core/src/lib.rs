//! Exact evaluation of the SL3-covariants S_d and T_d of plane curves of
//! degree d, and finite-field rank certification of the matrices that show
//! these covariants restrict surjectively to a special family of linear
//! subspaces.
//!
//! Module map:
//!
//! * [`scalars`]: big integers and rationals, F_p, binomials.
//! * [`forms`]: ternary forms, multi-indices, both coordinate systems.
//! * [`covariants`]: brackets, the Clebsch invariant, S_d and T_d.
//! * [`family`]: interpolation-polynomial families f(c) in the base locus and
//!   the direct expansion of S_d(f(c) + g) in c.
//! * [`coeff_engine`]: closed-form coefficients Q_t, R_t for arbitrary n.
//! * [`certifier`]: the matrices M(n), their ranks mod p, certificates.

pub mod certifier;
pub mod coeff_engine;
pub mod covariants;
pub mod family;
pub mod forms;
pub mod poly;
pub mod scalars;
