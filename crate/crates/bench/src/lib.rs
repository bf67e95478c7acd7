//! Fixed inputs shared by the benchmarks.

use towerforge_core::{FieldDesc, PolyA, PolyRing};

/// `(F_3, 𝔭, m)` with `𝔭` parsed in `F_3[t]`.
pub fn f3_case(prime: &str, m: u32) -> (FieldDesc, PolyA, u32) {
    let field = FieldDesc::prime(3).expect("3 is prime");
    let prime = PolyRing::new(field.clone())
        .parse(prime)
        .expect("fixture parses");
    (field, prime, m)
}

/// Class-number workloads of increasing size over `F_3`.
pub const CLASS_CASES: [(&str, u32); 4] = [("t", 4), ("t^2+1", 2), ("t^4+2*t+2", 1), ("t", 8)];

/// Integers from the degree-4 example: `h̃⁻` and two of its prime factors.
pub const FACTOR_TARGETS: [&str; 3] = ["104956587861829889", "63648628175761", "532611841"];
