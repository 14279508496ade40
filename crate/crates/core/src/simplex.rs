//! Iteration over regular grids on the probability simplex.
//!
//! Grid points are compositions `(k_1, ..., k_n)` of `m` into `n` parts,
//! mapped to probabilities `k_i / m`. Used by the brute-force oracles.

/// Number of grid points for `n` coordinates with `m` subdivisions:
/// `C(m + n - 1, n - 1)`, computed in u128 to survive large grids.
pub fn grid_point_count(n: usize, m: usize) -> u128 {
    let mut c: u128 = 1;
    for k in 1..n {
        c = c * (m as u128 + k as u128) / k as u128;
    }
    c
}

/// Advances `k` to the next composition in lexicographic order.
/// Returns false once the last composition `(m, 0, ..., 0)` has been seen.
pub fn next_composition(k: &mut [usize]) -> bool {
    let n = k.len();
    if n <= 1 {
        return false;
    }
    // Find the rightmost position with mass strictly to its right; move one
    // unit onto it and flush the remainder back to the tail.
    let mut rest = 0usize;
    let mut j = n - 1;
    loop {
        rest += k[j];
        if j == 0 {
            return false;
        }
        j -= 1;
        if rest > 0 {
            break;
        }
    }
    k[j] += 1;
    for x in k[j + 1..].iter_mut() {
        *x = 0;
    }
    k[n - 1] = rest - 1;
    true
}

/// Walks every composition of `m` into `n` non-negative parts in
/// lexicographic order, calling `f` on each.
pub fn for_each_composition<F: FnMut(&[usize])>(n: usize, m: usize, mut f: F) {
    assert!(n >= 1);
    let mut k = vec![0usize; n];
    k[n - 1] = m;
    loop {
        f(&k);
        if !next_composition(&mut k) {
            return;
        }
    }
}
