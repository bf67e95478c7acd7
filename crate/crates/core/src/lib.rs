//! Exact arithmetic for Carlitz cyclotomic function fields over `F_q(t)`:
//! residue-class characters, relative class numbers via `L(0, χ)`, and
//! certification of the inequalities that force infinite Hilbert
//! `(p, S)`-class field towers.

pub mod carlitz;
pub mod classminus;
pub mod cyclo;
pub(crate) mod decimal;
pub mod field;
pub mod ledger;
pub mod poly;
pub mod residue;
pub mod tower;
pub mod zarith;

pub use carlitz::{carlitz_polynomial, euler_phi, place_counts, CarlitzError, CarlitzPolynomial};
pub use classminus::{h_minus, minus_regular, ClassError, HMinusOptions, RelClassResult};
pub use cyclo::{CycloError, CyclotomicInt};
pub use field::{FieldDesc, FieldError, FieldInfo, Fq};
pub use ledger::{as_disc_exponent, compositum_ledger, DiscLedger, LedgerError};
pub use poly::{ParseError, PolyA, PolyError, PolyRing};
pub use residue::{DirichletCharacter, Parity, ResidueError, ResidueUnitGroup};
pub use tower::{
    certify, condition_margins, recheck, search, CertMode, CertifyOptions, PlusRegularSource,
    SearchOptions, SearchReport, TowerCertificate, Verdict,
};
pub use zarith::{factorize, is_prime, mult_order, FactorList, Primality, ZarithError};
