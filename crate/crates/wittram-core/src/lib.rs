//! Exact computation engine for truncated de Rham–Witt complexes of
//! equal-characteristic local fields `K = F_q((π))`.
//!
//! The crate is organized in layers:
//!
//! * [`fq`] — the residue field `F_q` (`q = p^e`, `p ≤ 13`, `e ≤ 4`) with a
//!   fixed table of primitive defining polynomials;
//! * [`wring`] — truncated Witt rings `W_r(F_q)` of the residue field,
//!   realized as Galois rings `(Z/p^r)[x]/(f̃)` so that the additive group is
//!   literally `(Z/p^r)^e`;
//! * [`series`] — truncated Laurent series over `F_q` with a hard precision
//!   contract: reading an unknown digit is a loud error, never a silent zero;
//! * [`witt`] — generic `p`-typical Witt vectors over any coefficient ring,
//!   driven by structure polynomials generated from the ghost recursion over
//!   the integers (with exact-division checks) and cached to disk; plus the
//!   independent ghost-component oracle used by the test suite;
//! * [`linalg`] — exact linear algebra over `Z/p^m` (Howell normal form) for
//!   window groups, degenerating to Gaussian elimination when the exponent
//!   is `p`;
//! * [`drw`] — the canonical direct-sum decomposition of `W_m Ω^q_K`
//!   (`q ≤ 1`) indexed by integers `n`, with closed-form component actions of
//!   `d, F, V, R, C, p̄`, multiplication, and conversions to and from Witt
//!   coordinates;
//! * [`filtration`] — pole-order filtrations `fil_n`, window spaces, and the
//!   structural verifiers (restriction sequence, `F̄`/`C̄` inverses, kernel
//!   identities);
//! * [`ramification`] — the `(1−C)`-complexes, `T^{m,q}_n` spaces,
//!   Artin–Schreier–Witt conductors with an independent brute-force oracle,
//!   and the graded ladder verifiers;
//! * [`multivar`] — the `m = 1` multivariate theory over
//!   `F_q[[x_1..x_d]]` with log poles along a normal crossing divisor:
//!   Cartier operator, relative-log exact sequence, `Z_i/B_i` ladders, and
//!   the Čech `H^2_𝔪` injectivity check;
//! * [`report`] — machine-checkable verification reports (JSON).
//!
//! Everything is exact: no floating point, no probabilistic identity
//! testing. Randomness appears only in seeded sampling of test instances.

pub mod caps;
pub mod drw;
pub mod error;
pub mod filtration;
pub mod fq;
pub mod linalg;
pub mod multivar;
pub mod ramification;
pub mod report;
pub mod sample;
pub mod series;
pub mod witt;
pub mod wring;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
