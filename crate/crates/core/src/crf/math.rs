/// `ln(exp(a) + exp(b))` without overflow.
#[inline]
pub fn logsumexp2(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY && b == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if a > b {
        a + (b - a).exp().ln_1p()
    } else {
        b + (a - b).exp().ln_1p()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        // log(e^0.5 + e^2)
        let expected = (0.5f64.exp() + 2f64.exp()).ln();
        assert!((logsumexp2(0.5, 2.0) - expected).abs() < 1e-15);
        assert!((logsumexp2(0.0, 0.0) - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn large_values_do_not_overflow() {
        // 1232 + log(e^2 + 1)
        let expected = 1232.0 + (2f64.exp() + 1.0).ln();
        assert!((logsumexp2(1234.0, 1232.0) - expected).abs() < 1e-12);
        assert!((1234f64.exp() + 1232f64.exp()).ln().is_infinite());
    }

    #[test]
    fn negative_infinity() {
        assert_eq!(logsumexp2(f64::NEG_INFINITY, 2.0), 2.0);
        assert_eq!(
            logsumexp2(f64::NEG_INFINITY, f64::NEG_INFINITY),
            f64::NEG_INFINITY
        );
    }
}
