use crate::{Error, Result};

pub const MAX_HERMITE_DEGREE: u32 = 300;

/// Physicists' Hermite polynomial `H_n(x)` by the three-term recurrence
/// `H_{k+1} = 2x H_k - 2k H_{k-1}`.
pub fn hermite(n: u32, x: f64) -> Result<f64> {
    if n > MAX_HERMITE_DEGREE {
        return Err(Error::Domain { what: "Hermite degree", value: n as f64 });
    }
    if !x.is_finite() {
        return Err(Error::Domain { what: "Hermite argument", value: x });
    }
    let mut prev = 1.0;
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
        if !cur.is_finite() {
            return Err(Error::Overflow { what: "Hermite polynomial" });
        }
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

    #[test]
    fn low_degrees() {
        assert_eq!(hermite(0, 3.7).unwrap(), 1.0);
        assert_eq!(hermite(1, FRAC_1_SQRT_2).unwrap(), SQRT_2);
        assert_eq!(hermite(3, 0.5).unwrap(), -5.0);
        // H_4 = 16x^4 - 48x^2 + 12
        let x = 1.3f64;
        let want = 16.0 * x.powi(4) - 48.0 * x * x + 12.0;
        assert!((hermite(4, x).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn parity() {
        for n in 0..40 {
            let s = if n % 2 == 0 { 1.0 } else { -1.0 };
            let a = hermite(n, 0.83).unwrap();
            let b = hermite(n, -0.83).unwrap();
            assert!((a - s * b).abs() <= 1e-14 * a.abs());
        }
    }

    #[test]
    fn reference_values() {
        // arbitrary-precision reference values
        let h250 = hermite(250, FRAC_1_SQRT_2).unwrap();
        assert!((h250 / 2.190_448_467_091_891_3e283 - 1.0).abs() < 1e-11);
        let h40 = hermite(40, 1.3).unwrap();
        assert!((h40 / 4.837_258_446_558_268e29 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn overflow_and_degree_limit() {
        assert!(matches!(hermite(300, 5.0), Err(Error::Overflow { .. })));
        assert!(matches!(hermite(301, 0.1), Err(Error::Domain { .. })));
    }
}
