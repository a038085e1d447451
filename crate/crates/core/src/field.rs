//! Prime-field arithmetic and dense linear algebra over `F_p` for `p < 2^63`.
//!
//! Elements are canonical `u64` residues; products go through `u128`.
//! Determinants and ranks use plain Gaussian elimination with exact modular
//! inverses, tracking the sign of row swaps.

use num_bigint::BigInt;
use num_traits::Signed;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("bad prime {0}: composite or out of range")]
    BadPrime(u64),
}

/// The field `F_p` for a verified prime `p < 2^63`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p < 2 || p >= (1 << 63) || !is_prime_u64(p) {
            return Err(FieldError::BadPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    pub fn reduce_bigint(&self, v: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        let mut r = v % &p;
        if r.is_negative() {
            r += &p;
        }
        let (_, digits) = r.to_u64_digits();
        digits.first().copied().unwrap_or(0)
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a as u128 + b as u128;
        (s % self.p as u128) as u64
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat; panics on zero.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(a % self.p != 0, "zero has no inverse");
        self.pow(a, self.p - 2)
    }

    /// Determinant of a square matrix, by elimination. The empty matrix has
    /// determinant 1.
    pub fn det(&self, matrix: &[Vec<u64>]) -> u64 {
        let n = matrix.len();
        let mut m: Vec<Vec<u64>> = matrix
            .iter()
            .map(|row| {
                assert_eq!(row.len(), n, "determinant needs a square matrix");
                row.iter().map(|&v| v % self.p).collect()
            })
            .collect();
        let mut det = 1u64;
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| m[r][col] != 0) else {
                return 0;
            };
            if pivot != col {
                m.swap(pivot, col);
                det = self.neg(det);
            }
            let lead = m[col][col];
            det = self.mul(det, lead);
            let lead_inv = self.inv(lead);
            for r in col + 1..n {
                if m[r][col] == 0 {
                    continue;
                }
                let factor = self.mul(m[r][col], lead_inv);
                for c in col..n {
                    let sub = self.mul(factor, m[col][c]);
                    m[r][c] = self.sub(m[r][c], sub);
                }
            }
        }
        det
    }

    /// Rank of a (possibly rectangular) matrix.
    pub fn rank(&self, matrix: &[Vec<u64>]) -> usize {
        if matrix.is_empty() {
            return 0;
        }
        let cols = matrix[0].len();
        let mut m: Vec<Vec<u64>> = matrix
            .iter()
            .map(|row| {
                assert_eq!(row.len(), cols, "ragged matrix");
                row.iter().map(|&v| v % self.p).collect()
            })
            .collect();
        let mut rank = 0;
        for col in 0..cols {
            let Some(pivot) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
                continue;
            };
            m.swap(pivot, rank);
            let lead_inv = self.inv(m[rank][col]);
            for r in rank + 1..m.len() {
                if m[r][col] == 0 {
                    continue;
                }
                let factor = self.mul(m[r][col], lead_inv);
                for c in col..cols {
                    let sub = self.mul(factor, m[rank][c]);
                    m[r][c] = self.sub(m[r][c], sub);
                }
            }
            rank += 1;
            if rank == m.len() {
                break;
            }
        }
        rank
    }
}

/// Deterministic Miller-Rabin for `u64` (the standard 12-base witness set).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut base: u64, mut exp: u64| {
        let mut acc = 1u64;
        base %= n;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            exp >>= 1;
        }
        acc
    };
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The default testing modulus `2^61 - 1`.
pub const MERSENNE61: u64 = (1 << 61) - 1;

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::{One, Zero};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn primality() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(MERSENNE61));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64((1 << 61) - 3));
        assert!(!is_prime_u64(u64::MAX));
        assert!(PrimeField::new(MERSENNE61).is_ok());
        assert!(PrimeField::new(91).is_err());
    }

    #[test]
    fn inverses() {
        let f = PrimeField::new(MERSENNE61).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..50 {
            let a = rng.gen_range(1..f.modulus());
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }

    #[test]
    fn det_and_rank_basics() {
        let f = PrimeField::new(MERSENNE61).unwrap();
        let id: Vec<Vec<u64>> = (0..4)
            .map(|i| (0..4).map(|j| u64::from(i == j)).collect())
            .collect();
        assert_eq!(f.det(&id), 1);
        assert_eq!(f.rank(&id), 4);
        let zero = vec![vec![0u64; 3]; 3];
        assert_eq!(f.det(&zero), 0);
        assert_eq!(f.rank(&zero), 0);
        // empty matrix
        assert_eq!(f.det(&[]), 1);
    }

    /// Fraction-free (Bareiss) integer determinant, the independent oracle.
    fn bareiss_det(matrix: &[Vec<i64>]) -> BigInt {
        let n = matrix.len();
        if n == 0 {
            return BigInt::one();
        }
        let mut m: Vec<Vec<BigInt>> = matrix
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                let Some(swap) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                    return BigInt::zero();
                };
                m.swap(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = num / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        sign * m[n - 1][n - 1].clone()
    }

    #[test]
    fn det_matches_integer_oracle() {
        let f = PrimeField::new(MERSENNE61).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(99);
        for _ in 0..20 {
            let n = rng.gen_range(1..=10usize);
            let ints: Vec<Vec<i64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.gen_range(-50..=50)).collect())
                .collect();
            let modded: Vec<Vec<u64>> = ints
                .iter()
                .map(|r| r.iter().map(|&v| f.reduce_i64(v)).collect())
                .collect();
            let expected = f.reduce_bigint(&bareiss_det(&ints));
            assert_eq!(f.det(&modded), expected);
        }
    }

    #[test]
    fn rank_of_constructed_matrices() {
        let f = PrimeField::new(MERSENNE61).unwrap();
        // rank-2 matrix: third row is the sum of the first two
        let m = vec![vec![1u64, 2, 3], vec![4, 5, 6], vec![5, 7, 9]];
        assert_eq!(f.rank(&m), 2);
        let wide = vec![vec![1u64, 0, 0, 7], vec![0, 0, 1, 3]];
        assert_eq!(f.rank(&wide), 2);
    }
}
