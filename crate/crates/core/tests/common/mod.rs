//! Independent oracles shared by the integration suites. Everything here works
//! on plain coefficient vectors over `Z/p` and never calls into the library.

#![allow(dead_code)]

pub mod props;

use std::f64::consts::PI;

/// Little-endian coefficient vectors over `Z/p`, trimmed of trailing zeros.
pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn mul_mod_poly(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    rem_poly(prod, m, p)
}

/// Remainder modulo a monic `m`.
pub fn rem_poly(mut a: Vec<u64>, m: &[u64], p: u64) -> Vec<u64> {
    let d = m.len() - 1;
    while a.len() > d {
        let lead = *a.last().unwrap();
        let shift = a.len() - 1 - d;
        for (i, &c) in m.iter().enumerate() {
            a[shift + i] = (a[shift + i] + (p - c) * lead) % p;
        }
        a.pop();
        a = trim(a);
    }
    trim(a)
}

fn encode(a: &[u64], p: u64) -> usize {
    a.iter()
        .rev()
        .fold(0usize, |acc, &c| acc * p as usize + c as usize)
}

fn decode(mut idx: usize, p: u64, len: usize) -> Vec<u64> {
    let mut v = Vec::with_capacity(len);
    for _ in 0..len {
        v.push((idx % p as usize) as u64);
        idx /= p as usize;
    }
    trim(v)
}

/// `|Π_{χ odd} L(0, χ)|` in double precision for `(F_p[t]/modulus)*` when
/// that group is cyclic, with characters and logs built by brute force.
/// `None` when the group is not cyclic.
pub fn cyclic_h_minus_f64(p: u64, modulus: &[u64]) -> Option<f64> {
    let d = modulus.len() - 1;
    let size = (p as usize).pow(d as u32);
    let elems: Vec<Vec<u64>> = (0..size).map(|i| decode(i, p, d)).collect();
    let one = vec![1u64];
    let is_unit: Vec<bool> = elems
        .iter()
        .map(|a| !a.is_empty() && elems.iter().any(|b| mul_mod_poly(a, b, modulus, p) == one))
        .collect();
    let n = is_unit.iter().filter(|&&u| u).count();
    let order_of = |g: &[u64]| {
        let mut x = g.to_vec();
        let mut k = 1;
        while x != one {
            x = mul_mod_poly(&x, g, modulus, p);
            k += 1;
        }
        k
    };
    let gen = (0..size).find(|&i| is_unit[i] && order_of(&elems[i]) == n)?;
    let mut dlog = vec![usize::MAX; size];
    let mut x = one.clone();
    for k in 0..n {
        dlog[encode(&x, p)] = k;
        x = mul_mod_poly(&x, &elems[gen], modulus, p);
    }
    // scalars 1..p-1 as constants; χ_k is odd when nontrivial on some scalar
    let scalar_logs: Vec<usize> = (1..p).map(|c| dlog[c as usize]).collect();
    let mut re = 1.0f64;
    let mut im = 0.0f64;
    for k in 1..n {
        let odd = scalar_logs.iter().any(|&l| (k * l) % n != 0);
        if !odd {
            continue;
        }
        // monic a of degree < d: every residue with a monic leading term
        let (mut lr, mut li) = (0.0, 0.0);
        for (idx, a) in elems.iter().enumerate() {
            if a.last() != Some(&1) || !is_unit[idx] {
                continue;
            }
            let ang = 2.0 * PI * ((k * dlog[idx]) % n) as f64 / n as f64;
            lr += ang.cos();
            li += ang.sin();
        }
        let nr = re * lr - im * li;
        let ni = re * li + im * lr;
        re = nr;
        im = ni;
    }
    Some((re * re + im * im).sqrt())
}

/// `t^m` and `𝔭^m` as coefficient vectors.
pub fn poly_pow(a: &[u64], m: u32, p: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for _ in 0..m {
        let mut prod = vec![0u64; out.len() + a.len() - 1];
        for (i, &x) in out.iter().enumerate() {
            for (j, &y) in a.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        out = prod;
    }
    out
}

/// Trial-division primality.
pub fn trial_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Order of `p` modulo `h` by repeated multiplication.
pub fn naive_order(p: u64, h: u64) -> u64 {
    let mut x = p % h;
    let mut k = 1;
    while x != 1 {
        x = ((x as u128 * p as u128) % h as u128) as u64;
        k += 1;
    }
    k
}
