//! Dense integer polynomials in the color count `n`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul};

/// Integer polynomial in `n`, coefficients in ascending degree.
///
/// Always canonical: no trailing zero coefficients, so the zero polynomial
/// has an empty coefficient list.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polynomial {
    coeffs: Vec<i64>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: i64) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `n - shift`
    pub fn shifted_n(shift: i64) -> Self {
        Self::from_coeffs(vec![-shift, 1])
    }

    pub fn from_coeffs(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> i64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn eval(&self, n: i64) -> i64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * n + c)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(1), |acc, _| &acc * self)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len)
            .map(|i| self.coeffs.get(i).unwrap_or(&0) + rhs.coeffs.get(i).unwrap_or(&0))
            .collect();
        Polynomial::from_coeffs(coeffs)
    }
}

impl Add for Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        *self = &*self + rhs;
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial::from_coeffs(coeffs)
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl fmt::Display for Polynomial {
    /// Highest degree first, e.g. `n^2 - n + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (deg, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let abs = c.unsigned_abs();
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c < 0 { " - " } else { " + " })?;
            }
            first = false;
            match (deg, abs) {
                (0, _) => write!(f, "{abs}")?,
                (_, 1) => {}
                _ => write!(f, "{abs}")?,
            }
            match deg {
                0 => {}
                1 => f.write_str("n")?,
                _ => write!(f, "n^{deg}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_trailing_zeros() {
        assert_eq!(Polynomial::from_coeffs(vec![1, 0, 0]), Polynomial::constant(1));
        assert!(Polynomial::from_coeffs(vec![0, 0]).is_zero());
        assert_eq!(Polynomial::zero().degree(), None);
    }

    #[test]
    fn falling_factorial_product() {
        // n(n-1) = n^2 - n
        let p = &Polynomial::shifted_n(0) * &Polynomial::shifted_n(1);
        assert_eq!(p.coeffs(), &[0, -1, 1]);
        assert_eq!(p.eval(5), 20);
        assert_eq!(p.to_string(), "n^2 - n");
    }

    #[test]
    fn display_forms() {
        assert_eq!(Polynomial::from_coeffs(vec![-1, 2]).to_string(), "2n - 1");
        assert_eq!(Polynomial::from_coeffs(vec![1, 0, 1]).to_string(), "n^2 + 1");
        assert_eq!(Polynomial::constant(-3).to_string(), "-3");
        assert_eq!(Polynomial::zero().to_string(), "0");
    }

    #[test]
    fn pow_and_add() {
        let sq = Polynomial::shifted_n(2).pow(2);
        assert_eq!(sq.eval(7), 25);
        let sum = &sq + &Polynomial::constant(-25);
        assert_eq!(sum.eval(7), 0);
        assert_eq!(Polynomial::shifted_n(0).pow(0), Polynomial::constant(1));
    }
}
