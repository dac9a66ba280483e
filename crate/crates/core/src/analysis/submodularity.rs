use crate::error::{Error, Result};
use crate::problems::SetFunction;
use crate::solution::Solution;

/// Largest ground set a [`TabulatedSetFunction`] may have.
pub const TABULATION_GUARD: usize = 16;

/// A set function stored as a table of all `2^n` values. Subset `X` sits
/// at the index whose bit `i` is set iff item `i` is in `X`.
#[derive(Clone, Debug, PartialEq)]
pub struct TabulatedSetFunction {
    n: usize,
    values: Vec<f64>,
}

impl TabulatedSetFunction {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if n > TABULATION_GUARD {
            return Err(Error::Parameter(format!(
                "tabulation is limited to n <= {TABULATION_GUARD}, got {n}"
            )));
        }
        if values.len() != 1 << n {
            return Err(Error::Parameter(format!(
                "a table over {n} items needs {} values, got {}",
                1usize << n,
                values.len()
            )));
        }
        Ok(TabulatedSetFunction { n, values })
    }

    pub fn from_function<F: SetFunction + ?Sized>(f: &F) -> Result<Self> {
        let n = f.ground_size();
        if n > TABULATION_GUARD {
            return Err(Error::Parameter(format!(
                "tabulation is limited to n <= {TABULATION_GUARD}, got {n}"
            )));
        }
        let values = (0..1u64 << n).map(|c| f.value(&Solution::from_code(n, c))).collect();
        Ok(TabulatedSetFunction { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn at(&self, set: usize) -> f64 {
        self.values[set]
    }

    /// Checks `f(X) <= f(X + v)` for every `X` and `v`.
    pub fn check_monotone(&self) -> Result<()> {
        for set in 0..self.values.len() {
            for v in (0..self.n).filter(|v| set >> v & 1 == 0) {
                if self.values[set | 1 << v] < self.values[set] {
                    return Err(Error::Validation(format!(
                        "set function is not monotone: f({set:#b}) = {} > f({:#b}) = {}",
                        self.values[set],
                        set | 1 << v,
                        self.values[set | 1 << v]
                    )));
                }
            }
        }
        Ok(())
    }
}

impl SetFunction for TabulatedSetFunction {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn value(&self, x: &Solution) -> f64 {
        self.values[x.code() as usize]
    }
}

// Minimum over L subset of `x_mask` and S disjoint from L with 1 <= |S| <= l
// of sum_{v in S} (f(L+v) - f(L)) / (f(L u S) - f(L)); pairs with a
// non-positive denominator are skipped.
fn ratio_unchecked(f: &TabulatedSetFunction, x_mask: usize, l: usize) -> f64 {
    let full = (1usize << f.n) - 1;
    let mut best = f64::INFINITY;
    let mut lsub = x_mask;
    loop {
        let base = f.at(lsub);
        let rest = full & !lsub;
        let mut s = rest;
        while s != 0 {
            if s.count_ones() as usize <= l {
                let denom = f.at(lsub | s) - base;
                if denom > 0.0 {
                    let mut num = 0.0;
                    let mut bits = s;
                    while bits != 0 {
                        let v = bits.trailing_zeros();
                        num += f.at(lsub | 1 << v) - base;
                        bits &= bits - 1;
                    }
                    best = best.min(num / denom);
                }
            }
            s = (s - 1) & rest;
        }
        if lsub == 0 {
            break;
        }
        lsub = (lsub - 1) & x_mask;
    }
    if best.is_finite() {
        best
    } else {
        1.0
    }
}

/// The submodularity ratio `gamma_{X,l}(f)`, by exhaustive enumeration.
///
/// Returns 1 when no pair `(L, S)` has a positive denominator.
pub fn submodularity_ratio(f: &TabulatedSetFunction, x: &Solution, l: usize) -> Result<f64> {
    if x.len() != f.n() {
        return Err(Error::Contract(format!(
            "subset has length {}, table has {} items",
            x.len(),
            f.n()
        )));
    }
    if l == 0 {
        return Err(Error::Parameter("l must be >= 1".into()));
    }
    f.check_monotone()?;
    Ok(ratio_unchecked(f, x.code() as usize, l))
}

/// `min over |X| = k - 1` of `gamma_{X,k}(f)`.
pub fn gamma_min(f: &TabulatedSetFunction, k: usize) -> Result<f64> {
    if k == 0 || k > f.n() {
        return Err(Error::Parameter(format!("k must satisfy 1 <= k <= {}, got {k}", f.n())));
    }
    f.check_monotone()?;
    Ok((0..1usize << f.n())
        .filter(|x| x.count_ones() as usize == k - 1)
        .map(|x| ratio_unchecked(f, x, k))
        .fold(f64::INFINITY, f64::min))
}
