//! Exact curve fitting used by the asymptotic checks.

use num_traits::{Signed, Zero};

use crate::rational::Rational;

/// Smallest `C ≥ 0` with `|r| ≤ C · x^{-power}` on every `(x, r)`, i.e.
/// `max |r|·x^{power}`. Negative powers are allowed (`power = -2` gives the
/// constant for `|r| ≤ C·x²`).
pub fn fit_power_constant<'a>(rows: impl IntoIterator<Item = (&'a Rational, &'a Rational)>, power: i32) -> Rational {
    rows.into_iter()
        .map(|(x, r)| r.abs() * x.pow(power))
        .fold(Rational::zero(), |a, b| a.max(b))
}

/// Leading coefficient of the polynomial of degree `degree` through the last
/// `degree + 1` samples, provided that polynomial reproduces every sample.
pub fn polynomial_leading_coefficient(samples: &[(Rational, Rational)], degree: usize) -> Option<Rational> {
    if samples.len() < degree + 1 {
        return None;
    }
    let nodes = &samples[samples.len() - degree - 1..];
    let eval = |x: &Rational| -> Rational {
        nodes
            .iter()
            .enumerate()
            .map(|(i, (xi, yi))| {
                let mut term = yi.clone();
                for (j, (xj, _)) in nodes.iter().enumerate() {
                    if i != j {
                        term *= (x - xj) / (xi - xj);
                    }
                }
                term
            })
            .sum()
    };
    if samples.iter().any(|(x, y)| eval(x) != *y) {
        return None;
    }
    Some(
        nodes
            .iter()
            .enumerate()
            .map(|(i, (xi, yi))| {
                let denom: Rational = nodes
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, (xj, _))| xi - xj)
                    .product();
                yi / denom
            })
            .sum(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn leading_coefficient_of_quadratic() {
        let samples: Vec<(Rational, Rational)> = (1..8).map(|m| (int(m), int(m * m - 1))).collect();
        assert_eq!(polynomial_leading_coefficient(&samples, 2), Some(int(1)));
        let mut broken = samples.clone();
        broken[0].1 = int(5);
        assert_eq!(polynomial_leading_coefficient(&broken, 2), None);
    }

    #[test]
    fn power_constant() {
        let rows = [(int(2), rat(-1, 8)), (int(4), rat(1, 64))];
        assert_eq!(fit_power_constant(rows.iter().map(|(a, b)| (a, b)), 1), rat(1, 4));
        assert_eq!(fit_power_constant(rows.iter().map(|(a, b)| (a, b)), -2), rat(1, 32));
    }
}
