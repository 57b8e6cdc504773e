/// Binary colour-occupation string in {0,1}^n, bit i-1 for colour i.
pub type StateVec = u32;

#[inline]
pub fn has(a: StateVec, i: usize) -> u32 {
    (a >> (i - 1)) & 1
}

#[inline]
pub fn e(i: usize) -> StateVec {
    if i == 0 {
        0
    } else {
        1 << (i - 1)
    }
}

#[inline]
pub fn size(a: StateVec) -> u32 {
    a.count_ones()
}

/// A_(i,n] = number of colours strictly above i present in A.
#[inline]
pub fn above(a: StateVec, i: usize) -> u32 {
    (a >> i).count_ones()
}

pub fn full(n: usize) -> StateVec {
    if n == 0 {
        0
    } else {
        (1u32 << n) - 1
    }
}

/// phi(X, Y) = sum_{i<j} X_i Y_j for integer vectors.
pub fn phi(x: &[i64], y: &[i64]) -> i64 {
    let mut acc = 0;
    let mut xs = 0;
    for j in 0..x.len() {
        acc += xs * y[j];
        xs += x[j];
    }
    acc
}

pub fn to_vec(n: usize, a: StateVec) -> Vec<i64> {
    (1..=n).map(|i| has(a, i) as i64).collect()
}

/// Checks A + e_b = C + e_d coordinatewise.
pub fn conserves(n: usize, a: StateVec, b: usize, c: StateVec, d: usize) -> bool {
    (1..=n).all(|i| has(a, i) + (b == i) as u32 == has(c, i) + (d == i) as u32)
}

pub fn parse_state(n: usize, s: &str) -> Option<StateVec> {
    if s.len() != n {
        return None;
    }
    let mut a = 0;
    for (k, ch) in s.chars().enumerate() {
        match ch {
            '0' => {}
            '1' => a |= 1 << k,
            _ => return None,
        }
    }
    Some(a)
}

pub fn fmt_state(n: usize, a: StateVec) -> String {
    (1..=n).map(|i| if has(a, i) == 1 { '1' } else { '0' }).collect()
}
