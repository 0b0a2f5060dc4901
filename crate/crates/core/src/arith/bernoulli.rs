use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

static TABLE: OnceLock<RwLock<Vec<BigRational>>> = OnceLock::new();

/// Bernoulli number B_n with B_1 = -1/2. Values are memoised in a table
/// shared by all threads.
pub fn bernoulli(n: usize) -> BigRational {
    let table = TABLE.get_or_init(|| RwLock::new(vec![BigRational::one()]));
    {
        let t = table.read().expect("bernoulli table poisoned");
        if let Some(b) = t.get(n) {
            return b.clone();
        }
    }
    let mut t = table.write().expect("bernoulli table poisoned");
    while t.len() <= n {
        let m = t.len();
        // sum_{j<m} C(m+1, j) B_j = -(m+1) B_m
        let mut binom = BigInt::one();
        let mut acc = BigRational::zero();
        for (j, b) in t.iter().enumerate() {
            acc += b * BigRational::from_integer(binom.clone());
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        let bm = -acc / BigRational::from_integer(BigInt::from(m + 1));
        t.push(bm);
    }
    t[n].clone()
}
