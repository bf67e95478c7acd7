//! The unit group `(A/𝔭^m)*`, its canonical invariant-factor decomposition,
//! and its Dirichlet characters.
//!
//! The group is built by exhaustive enumeration: generators are adjoined
//! greedily (in residue-index order) until the whole group is covered, the
//! resulting relation lattice is brought to Smith normal form, and the
//! discrete-log table is rewritten in the canonical basis `n_1 | ... | n_k`.

use thiserror::Error;

use crate::field::FieldDesc;
use crate::poly::{PolyA, PolyRing};

/// Default ceiling on `q^{d·m}`, the number of residues enumerated.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

const NOT_A_UNIT: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResidueError {
    #[error("residue ring has {size} elements, over the budget of {budget}")]
    BudgetExceeded { size: u128, budget: u64 },
    #[error("modulus prime must be irreducible of positive degree")]
    ReducibleModulusPrime,
    #[error("level m must be at least 1")]
    ZeroLevel,
}

/// `(A/𝔭^m)*` with a complete discrete-log table.
pub struct ResidueUnitGroup {
    ring: PolyRing,
    prime: PolyA,
    m: u32,
    modulus: PolyA,
    size: u64,
    generators: Vec<PolyA>,
    orders: Vec<u64>,
    /// `orders.len()` exponents per residue index; `NOT_A_UNIT` marks non-units.
    dlog: Vec<u32>,
    scalar_generator_dlog: Vec<u32>,
}

impl std::fmt::Debug for ResidueUnitGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ResidueUnitGroup")
            .field("prime", &self.ring.render(&self.prime))
            .field("m", &self.m)
            .field("orders", &self.orders)
            .finish()
    }
}

impl ResidueUnitGroup {
    pub fn new(field: &FieldDesc, prime: &PolyA, m: u32) -> Result<Self, ResidueError> {
        Self::with_budget(field, prime, m, DEFAULT_BUDGET)
    }

    pub fn with_budget(
        field: &FieldDesc,
        prime: &PolyA,
        m: u32,
        budget: u64,
    ) -> Result<Self, ResidueError> {
        if m == 0 {
            return Err(ResidueError::ZeroLevel);
        }
        let ring = PolyRing::new(field.clone());
        if !ring.is_irreducible(prime) {
            return Err(ResidueError::ReducibleModulusPrime);
        }
        let prime = ring.make_monic(prime);
        let d = prime.degree().expect("irreducible is nonzero");
        let dm = d as u32 * m;
        let size = (field.q() as u128).checked_pow(dm).unwrap_or(u128::MAX);
        if size > budget as u128 || size > u32::MAX as u128 {
            return Err(ResidueError::BudgetExceeded { size, budget });
        }
        let size = size as u64;
        let modulus = ring.pow(&prime, m);
        let mut group = ResidueUnitGroup {
            ring,
            prime,
            m,
            modulus,
            size,
            generators: Vec::new(),
            orders: Vec::new(),
            dlog: Vec::new(),
            scalar_generator_dlog: Vec::new(),
        };
        group.decompose();
        let g0 = PolyA::constant(field.primitive_element());
        group.scalar_generator_dlog = group.dlog(&g0).expect("scalars are units").to_vec();
        Ok(group)
    }

    fn is_unit_index(&self, idx: u64) -> bool {
        let a = self.ring.from_index(idx);
        !self.ring.rem(&a, &self.prime).expect("nonzero").is_zero()
    }

    fn mul_index(&self, a: u64, b: u64) -> u64 {
        let x = self.ring.from_index(a);
        let y = self.ring.from_index(b);
        let z = self
            .ring
            .mulmod(&x, &y, &self.modulus)
            .expect("nonzero modulus");
        self.ring.to_index(&z)
    }

    fn decompose(&mut self) {
        let size = self.size as usize;
        let one = self.ring.to_index(&PolyA::one()) as usize;
        // Greedy phase: every member of the current subgroup H has a unique
        // exponent vector with 0 <= x_i < k_i on the raw generators.
        let mut member = vec![false; size];
        let mut exps: Vec<Vec<u32>> = vec![Vec::new(); size];
        let mut members: Vec<usize> = vec![one];
        member[one] = true;
        let mut raw_gens: Vec<u64> = Vec::new();
        let mut relations: Vec<Vec<i128>> = Vec::new();

        let mut cursor = 0usize;
        loop {
            while cursor < size && (member[cursor] || !self.is_unit_index(cursor as u64)) {
                cursor += 1;
            }
            if cursor == size {
                break;
            }
            let g = cursor as u64;
            let r = raw_gens.len();
            // smallest k with g^k in H
            let mut powers = vec![one as u64];
            let mut x = g;
            while !member[x as usize] {
                powers.push(x);
                x = self.mul_index(x, g);
            }
            let k = powers.len();
            let mut rel = vec![0i128; r + 1];
            for (i, &e) in exps[x as usize].iter().enumerate() {
                rel[i] = -(e as i128);
            }
            rel[r] = k as i128;
            for row in relations.iter_mut() {
                row.push(0);
            }
            relations.push(rel);

            for &h in &members {
                exps[h].push(0);
            }
            let base: Vec<usize> = members.clone();
            for (j, &gj) in powers.iter().enumerate().skip(1) {
                for &h in &base {
                    let y = self.mul_index(gj, h as u64) as usize;
                    debug_assert!(!member[y]);
                    member[y] = true;
                    let mut v = exps[h].clone();
                    v[r] = j as u32;
                    exps[y] = v;
                    members.push(y);
                }
            }
            raw_gens.push(g);
        }

        let r = raw_gens.len();
        let snf = smith::normal_form(relations);
        let keep: Vec<usize> = (0..r).filter(|&j| snf.diag[j] > 1).collect();
        let total: i128 = snf.diag.iter().product();

        self.orders = keep.iter().map(|&j| snf.diag[j] as u64).collect();
        self.generators = keep
            .iter()
            .map(|&j| {
                let mut acc = PolyA::one();
                for (i, &g) in raw_gens.iter().enumerate() {
                    let e = snf.v_inv[j][i].rem_euclid(total) as u64;
                    let gi = self.ring.from_index(g);
                    let p = self.ring.powmod(&gi, e, &self.modulus).expect("nonzero");
                    acc = self.ring.mulmod(&acc, &p, &self.modulus).expect("nonzero");
                }
                acc
            })
            .collect();

        let k = keep.len();
        let mut dlog = vec![NOT_A_UNIT; size * k.max(1)];
        for &h in &members {
            let x = &exps[h];
            for (slot, &j) in keep.iter().enumerate() {
                let d = snf.diag[j];
                let y: i128 = (0..r).map(|i| x[i] as i128 * snf.v[i][j]).sum();
                dlog[h * k.max(1) + slot] = y.rem_euclid(d) as u32;
            }
            if k == 0 {
                dlog[h] = 0;
            }
        }
        self.dlog = dlog;
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn prime(&self) -> &PolyA {
        &self.prime
    }

    pub fn level(&self) -> u32 {
        self.m
    }

    /// `𝔭^m`
    pub fn modulus(&self) -> &PolyA {
        &self.modulus
    }

    /// Invariant factors `n_1 | n_2 | ... | n_k`, all greater than 1.
    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn generators(&self) -> &[PolyA] {
        &self.generators
    }

    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    /// Exponent `N = n_k` of the group (1 for the trivial group).
    pub fn exponent(&self) -> u64 {
        self.orders.last().copied().unwrap_or(1)
    }

    /// Number of residues `q^{d·m}`.
    pub fn residue_count(&self) -> u64 {
        self.size
    }

    pub fn residue_index(&self, a: &PolyA) -> u64 {
        let r = self.ring.rem(a, &self.modulus).expect("nonzero modulus");
        self.ring.to_index(&r)
    }

    fn stride(&self) -> usize {
        self.orders.len().max(1)
    }

    /// Exponent vector of a residue index, `None` for non-units.
    pub fn dlog_index(&self, idx: u64) -> Option<&[u32]> {
        let s = self.stride();
        let start = idx as usize * s;
        let v = &self.dlog[start..start + s];
        if v[0] == NOT_A_UNIT {
            None
        } else {
            Some(&v[..self.orders.len()])
        }
    }

    pub fn dlog(&self, a: &PolyA) -> Option<&[u32]> {
        self.dlog_index(self.residue_index(a))
    }

    /// `Π generators^{exponents}` reduced mod `𝔭^m`.
    pub fn element(&self, exponents: &[u64]) -> PolyA {
        self.generators
            .iter()
            .zip(exponents)
            .fold(PolyA::one(), |acc, (g, &e)| {
                let p = self.ring.powmod(g, e, &self.modulus).expect("nonzero");
                self.ring.mulmod(&acc, &p, &self.modulus).expect("nonzero")
            })
    }

    /// Residue indices of all units, ascending.
    pub fn unit_indices(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.size).filter(|&i| self.dlog_index(i).is_some())
    }

    /// Dlog of the fixed generator of `F_q*` embedded as constants.
    pub fn scalar_generator_dlog(&self) -> &[u32] {
        &self.scalar_generator_dlog
    }

    /// All `Π n_j` characters, lexicographic in their exponent vectors.
    pub fn characters(&self) -> Vec<DirichletCharacter<'_>> {
        let total = self.order() as usize;
        let mut out = Vec::with_capacity(total);
        let mut k = vec![0u64; self.orders.len()];
        for _ in 0..total {
            out.push(DirichletCharacter::new(self, k.clone()));
            for j in (0..k.len()).rev() {
                k[j] += 1;
                if k[j] < self.orders[j] {
                    break;
                }
                k[j] = 0;
            }
        }
        out
    }

    /// Checks every structural invariant; used by tests and debug tooling.
    pub fn verify(&self) -> Result<(), String> {
        let phi = self.size
            - self.size / (self.ring.field().q() as u64).pow(self.prime.degree().unwrap() as u32);
        if self.order() != phi {
            return Err(format!("order {} but φ = {phi}", self.order()));
        }
        for w in self.orders.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(format!(
                    "invariant factors {:?} not a divisor chain",
                    self.orders
                ));
            }
        }
        for (g, &n) in self.generators.iter().zip(&self.orders) {
            let gn = self.ring.powmod(g, n, &self.modulus).unwrap();
            if !gn.is_one() {
                return Err(format!(
                    "generator {} has order not dividing {n}",
                    self.ring.render(g)
                ));
            }
            for r in prime_factors(n) {
                if self.ring.powmod(g, n / r, &self.modulus).unwrap().is_one() {
                    return Err(format!(
                        "generator {} has order below {n}",
                        self.ring.render(g)
                    ));
                }
            }
        }
        for idx in self.unit_indices() {
            let x: Vec<u64> = self
                .dlog_index(idx)
                .unwrap()
                .iter()
                .map(|&e| e as u64)
                .collect();
            if self.ring.to_index(&self.element(&x)) != idx {
                return Err(format!("dlog of residue {idx} does not reconstruct"));
            }
        }
        Ok(())
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut r = 2;
    while r * r <= n {
        if n.is_multiple_of(r) {
            out.push(r);
            while n.is_multiple_of(r) {
                n /= r;
            }
        }
        r += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

impl std::fmt::Display for Parity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Value of a character: zero off the units, otherwise `ζ_N^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharValue {
    Zero,
    Root(u64),
}

/// Character of `(A/𝔭^m)*` given by exponents `k_j` on the canonical
/// generators: `χ(g_j) = ζ_N^{k_j·N/n_j}`.
#[derive(Clone)]
pub struct DirichletCharacter<'g> {
    group: &'g ResidueUnitGroup,
    exponents: Vec<u64>,
    parity: Parity,
}

impl std::fmt::Debug for DirichletCharacter<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "χ{:?}({})", self.exponents, self.parity)
    }
}

impl PartialEq for DirichletCharacter<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.group, other.group) && self.exponents == other.exponents
    }
}

impl<'g> DirichletCharacter<'g> {
    pub fn new(group: &'g ResidueUnitGroup, mut exponents: Vec<u64>) -> Self {
        assert_eq!(
            exponents.len(),
            group.orders.len(),
            "one exponent per generator"
        );
        for (k, &n) in exponents.iter_mut().zip(&group.orders) {
            *k %= n;
        }
        let mut chi = DirichletCharacter {
            group,
            exponents,
            parity: Parity::Even,
        };
        let v = chi.value_exponent(group.scalar_generator_dlog());
        chi.parity = if v == 0 { Parity::Even } else { Parity::Odd };
        chi
    }

    pub fn group(&self) -> &'g ResidueUnitGroup {
        self.group
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn is_odd(&self) -> bool {
        self.parity == Parity::Odd
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&k| k == 0)
    }

    /// Root-of-unity order `N` of the value tokens.
    pub fn value_order(&self) -> u64 {
        self.group.exponent()
    }

    /// `Σ k_j y_j N/n_j mod N` for a dlog vector `y`.
    #[inline]
    pub fn value_exponent(&self, dlog: &[u32]) -> u64 {
        let n = self.group.exponent();
        let mut acc = 0u128;
        for ((&k, &y), &nj) in self.exponents.iter().zip(dlog).zip(&self.group.orders) {
            acc += k as u128 * y as u128 * (n / nj) as u128;
        }
        (acc % n as u128) as u64
    }

    pub fn eval_index(&self, idx: u64) -> CharValue {
        match self.group.dlog_index(idx) {
            None => CharValue::Zero,
            Some(y) => CharValue::Root(self.value_exponent(y)),
        }
    }

    pub fn eval(&self, a: &PolyA) -> CharValue {
        self.eval_index(self.group.residue_index(a))
    }

    pub fn conj(&self) -> Self {
        let e = self
            .exponents
            .iter()
            .zip(&self.group.orders)
            .map(|(&k, &n)| (n - k) % n)
            .collect();
        DirichletCharacter::new(self.group, e)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert!(
            std::ptr::eq(self.group, other.group),
            "characters of different groups"
        );
        let e = self
            .exponents
            .iter()
            .zip(&other.exponents)
            .zip(&self.group.orders)
            .map(|((&a, &b), &n)| (a + b) % n)
            .collect();
        DirichletCharacter::new(self.group, e)
    }

    /// Least `j` such that `χ` is trivial on units `≡ 1 mod 𝔭^j`.
    pub fn conductor_exponent(&self) -> u32 {
        let g = self.group;
        let ring = &g.ring;
        let d = g.prime.degree().unwrap();
        let q = ring.field().q() as u64;
        for j in 0..g.m {
            if j == 0 {
                if self.is_trivial() {
                    return 0;
                }
                continue;
            }
            let pj = ring.pow(&g.prime, j);
            let span = q.pow(d as u32 * (g.m - j));
            let trivial = (0..span).all(|b| {
                let u = ring.add(&PolyA::one(), &ring.mul(&pj, &ring.from_index(b)));
                self.eval(&u) == CharValue::Root(0)
            });
            if trivial {
                return j;
            }
        }
        g.m
    }

    /// `deg` of the conductor `𝔭^j`.
    pub fn conductor_degree(&self) -> usize {
        self.conductor_exponent() as usize * self.group.prime.degree().unwrap()
    }
}

mod smith {
    //! Smith normal form of a square relation matrix, tracking the column
    //! transform `V` and its inverse.

    pub struct Snf {
        pub diag: Vec<i128>,
        pub v: Vec<Vec<i128>>,
        pub v_inv: Vec<Vec<i128>>,
    }

    fn identity(n: usize) -> Vec<Vec<i128>> {
        (0..n)
            .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
            .collect()
    }

    pub fn normal_form(mut a: Vec<Vec<i128>>) -> Snf {
        let n = a.len();
        let mut v = identity(n);
        let mut v_inv = identity(n);

        let swap_cols = |a: &mut Vec<Vec<i128>>,
                         v: &mut Vec<Vec<i128>>,
                         vi: &mut Vec<Vec<i128>>,
                         i: usize,
                         j: usize| {
            if i == j {
                return;
            }
            for row in a.iter_mut() {
                row.swap(i, j);
            }
            for row in v.iter_mut() {
                row.swap(i, j);
            }
            vi.swap(i, j);
        };
        // col_j -= f * col_t
        let col_op = |a: &mut Vec<Vec<i128>>,
                      v: &mut Vec<Vec<i128>>,
                      vi: &mut Vec<Vec<i128>>,
                      t: usize,
                      j: usize,
                      f: i128| {
            if f == 0 {
                return;
            }
            for row in a.iter_mut() {
                row[j] -= f * row[t];
            }
            for row in v.iter_mut() {
                row[j] -= f * row[t];
            }
            let rj = vi[j].clone();
            for (x, y) in vi[t].iter_mut().zip(rj) {
                *x += f * y;
            }
        };

        for t in 0..n {
            loop {
                let pivot = (t..n)
                    .flat_map(|i| (t..n).map(move |j| (i, j)))
                    .filter(|&(i, j)| a[i][j] != 0)
                    .min_by_key(|&(i, j)| a[i][j].abs());
                let Some((pi, pj)) = pivot else {
                    break;
                };
                a.swap(t, pi);
                swap_cols(&mut a, &mut v, &mut v_inv, t, pj);

                let mut clean = true;
                for i in t + 1..n {
                    let f = a[i][t] / a[t][t];
                    if f != 0 {
                        let rt = a[t].clone();
                        for (x, y) in a[i].iter_mut().zip(rt) {
                            *x -= f * y;
                        }
                    }
                    clean &= a[i][t] == 0;
                }
                for j in t + 1..n {
                    let f = a[t][j] / a[t][t];
                    col_op(&mut a, &mut v, &mut v_inv, t, j, f);
                    clean &= a[t][j] == 0;
                }
                if !clean {
                    continue;
                }
                let d = a[t][t];
                let bad = (t + 1..n).find(|&i| (t + 1..n).any(|j| a[i][j] % d != 0));
                match bad {
                    Some(i) => {
                        let ri = a[i].clone();
                        for (x, y) in a[t].iter_mut().zip(ri) {
                            *x += y;
                        }
                    }
                    None => break,
                }
            }
            if a[t][t] < 0 {
                for x in a[t].iter_mut() {
                    *x = -*x;
                }
            }
        }
        Snf {
            diag: (0..n).map(|i| a[i][i]).collect(),
            v,
            v_inv,
        }
    }

}
