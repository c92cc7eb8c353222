//! Finite fields, the polynomial ring A = F_q[T], and its primes.

pub mod ext;
pub mod factor;
pub mod fq;
pub mod poly;
pub mod text;

pub use ext::{ExtCtx, ExtElem, ExtSpec, Kp, KpExt, ResidueField};
pub use factor::{
    count_irreducibles, enumerate_irreducibles, factor, factor_in_a, factor_seeded, is_irreducible,
    Factorization, PrimeOfA,
};
pub use fq::{FieldSpec, FqElem, MAX_Q};
pub use poly::Poly;
pub use text::{format_poly, format_tau, parse_fq, parse_poly, parse_tau, FqPoly};
