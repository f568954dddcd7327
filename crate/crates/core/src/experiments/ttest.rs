//! Paired Student's t-test with the t CDF evaluated through the
//! regularized incomplete beta function (Lanczos log-gamma plus a Lentz
//! continued fraction, converged to relative 1e-14 per step).

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which tail the p-value covers. One-tailed tests H1: mean(b − a) > 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tail {
    One,
    Two,
}

impl Tail {
    pub fn parse(s: &str) -> Result<Tail> {
        match s {
            "one" => Ok(Tail::One),
            "two" => Ok(Tail::Two),
            other => Err(Error::TTest(format!(
                "tail must be `one` or `two`, got `{other}`"
            ))),
        }
    }
}

impl fmt::Display for Tail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tail::One => "one",
            Tail::Two => "two",
        })
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct TTestResult {
    pub t: f64,
    pub df: usize,
    pub p: f64,
    pub tail: Tail,
}

/// Paired t-test on differences d = b − a: t = mean(d) / (sd(d) / √n) with
/// df = n − 1. Errors on mismatched lengths, fewer than two pairs, or zero
/// variance of the differences.
pub fn paired_ttest(a: &[f64], b: &[f64], tail: Tail) -> Result<TTestResult> {
    if a.len() != b.len() {
        return Err(Error::TTest(format!(
            "length mismatch: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let n = a.len();
    if n < 2 {
        return Err(Error::TTest("need at least 2 pairs".to_string()));
    }
    let d: Vec<f64> = b.iter().zip(a.iter()).map(|(y, x)| y - x).collect();
    let mean = d.iter().sum::<f64>() / n as f64;
    let var = d.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
    let sd = var.sqrt();
    if sd == 0.0 || sd < 1e-12 * mean.abs().max(1.0) {
        return Err(Error::TTest(
            "zero variance: all differences are identical".to_string(),
        ));
    }
    let t = mean / (sd / (n as f64).sqrt());
    let df = n - 1;
    let p = match tail {
        Tail::One => t_survival(t, df as f64),
        Tail::Two => 2.0 * t_survival(t.abs(), df as f64),
    };
    Ok(TTestResult { t, df, p, tail })
}

/// P(T > t) for Student's t with `df` degrees of freedom.
pub fn t_survival(t: f64, df: f64) -> f64 {
    let x = df / (df + t * t);
    let half = 0.5 * inc_beta(x, df / 2.0, 0.5);
    if t >= 0.0 {
        half
    } else {
        1.0 - half
    }
}

/// ln Γ(z) for z > 0, Lanczos approximation.
fn ln_gamma(z: f64) -> f64 {
    if z <= 0.0 {
        let s = (PI * z).sin();
        if s.abs() < 1e-300 {
            return f64::INFINITY;
        }
        return PI.ln() - s.abs().ln() - ln_gamma(1.0 - z);
    }
    const COEFFS: [f64; 6] = [
        76.180_091_729_471_46,
        -86.505_320_329_416_77,
        24.014_098_240_830_91,
        -1.231_739_572_450_155,
        0.120_865_097_386_617_9e-2,
        -0.539_523_938_495_3e-5,
    ];
    let mut sum = 1.000_000_000_190_015;
    for (i, c) in COEFFS.iter().enumerate() {
        sum += c / (z + i as f64 + 1.0);
    }
    let tmp = z + 5.5;
    (z + 0.5) * tmp.ln() - tmp + (2.506_628_274_631_000_5 * sum / z).ln()
}

/// Regularized incomplete beta Iₓ(a, b) via the symmetric continued
/// fraction, evaluated with the modified Lentz method.
pub(crate) fn inc_beta(x: f64, a: f64, b: f64) -> f64 {
    if !(0.0..=1.0).contains(&x) || a <= 0.0 || b <= 0.0 {
        return f64::NAN;
    }
    if x == 0.0 {
        return 0.0;
    }
    if x == 1.0 {
        return 1.0;
    }
    if x > (a + 1.0) / (a + b + 2.0) {
        return 1.0 - inc_beta(1.0 - x, b, a);
    }

    let ln_front = a * x.ln() + b * (1.0 - x).ln() - (ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b));
    let front = ln_front.exp();

    const MAX_ITER: usize = 300;
    const EPSILON: f64 = 1e-14;
    const TINY: f64 = 1e-30;

    let mut f = 1.0f64;
    let mut c = 1.0f64;
    let mut d = 0.0f64;
    for m in 0..MAX_ITER {
        let m_f = m as f64;

        let odd = -(a + m_f) * (a + b + m_f) * x / ((a + 2.0 * m_f) * (a + 2.0 * m_f + 1.0));
        let delta = lentz_step(odd, &mut c, &mut d, TINY);
        f *= delta;
        if (delta - 1.0).abs() < EPSILON {
            break;
        }

        let even =
            (m_f + 1.0) * (b - m_f - 1.0) * x / ((a + 2.0 * m_f + 1.0) * (a + 2.0 * m_f + 2.0));
        let delta = lentz_step(even, &mut c, &mut d, TINY);
        f *= delta;
        if (delta - 1.0).abs() < EPSILON {
            break;
        }
    }
    front / (f * a)
}

fn lentz_step(coeff: f64, c: &mut f64, d: &mut f64, tiny: f64) -> f64 {
    *d = 1.0 + coeff * *d;
    if d.abs() < tiny {
        *d = tiny;
    }
    *d = 1.0 / *d;
    *c = 1.0 + coeff / *c;
    if c.abs() < tiny {
        *c = tiny;
    }
    *c * *d
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // Published mean accuracies of the monolingual and all-languages
    // training setups over the four target languages; the documented
    // reference pair for this test.
    const COLUMN_A: [f64; 4] = [0.697, 0.641, 0.618, 0.682];
    const COLUMN_B: [f64; 4] = [0.814, 0.648, 0.685, 0.717];

    #[test]
    fn reference_columns_one_tailed() {
        let r = paired_ttest(&COLUMN_A, &COLUMN_B, Tail::One).unwrap();
        // Closed-form oracle: d = b − a = [.117, .007, .067, .035],
        // mean = .0565, sd = .04719814..., t = mean / (sd / 2).
        assert_relative_eq!(r.t, 2.394_160_935_248_404, epsilon = 1e-12);
        assert_eq!(r.df, 3);
        assert_relative_eq!(r.p, 0.048_189_756_437_508_2, epsilon = 1e-8);
    }

    #[test]
    fn reference_columns_two_tailed() {
        let r = paired_ttest(&COLUMN_A, &COLUMN_B, Tail::Two).unwrap();
        assert_relative_eq!(r.p, 0.096_379_512_875_016_4, epsilon = 1e-8);
    }

    #[test]
    fn swapping_sides_negates_t() {
        let r1 = paired_ttest(&COLUMN_A, &COLUMN_B, Tail::One).unwrap();
        let r2 = paired_ttest(&COLUMN_B, &COLUMN_A, Tail::One).unwrap();
        assert_relative_eq!(r1.t, -r2.t, epsilon = 1e-12);
        assert_relative_eq!(r1.p + r2.p, 1.0, epsilon = 1e-10);
        let two1 = paired_ttest(&COLUMN_A, &COLUMN_B, Tail::Two).unwrap();
        let two2 = paired_ttest(&COLUMN_B, &COLUMN_A, Tail::Two).unwrap();
        assert_relative_eq!(two1.p, two2.p, epsilon = 1e-12);
    }

    #[test]
    fn constant_shift_is_rejected() {
        let a = [0.5, 1.0, 1.5, 2.25];
        let b: Vec<f64> = a.iter().map(|x| x + 0.25).collect();
        assert!(paired_ttest(&a, &b, Tail::One).is_err());
    }

    #[test]
    fn argument_validation() {
        assert!(paired_ttest(&[1.0, 2.0], &[1.0], Tail::One).is_err());
        assert!(paired_ttest(&[1.0], &[2.0], Tail::One).is_err());
    }

    #[test]
    fn t_survival_reference_values() {
        // Checked against an independent t-distribution implementation.
        assert_relative_eq!(t_survival(1.0, 1.0), 0.25, max_relative = 1e-10);
        assert_relative_eq!(t_survival(0.0, 4.0), 0.5, max_relative = 1e-12);
        assert_relative_eq!(
            t_survival(2.0, 5.0),
            0.050_969_739_414_929_14,
            max_relative = 1e-10
        );
        assert_relative_eq!(
            t_survival(-1.5, 7.0),
            0.911_350_756_505_015,
            max_relative = 1e-10
        );
        // Classic two-sided 5% critical values.
        assert_relative_eq!(t_survival(12.706_204_736, 1.0), 0.025, max_relative = 1e-7);
        assert_relative_eq!(t_survival(2.776_445_105, 4.0), 0.025, max_relative = 1e-7);
    }

    #[test]
    fn inc_beta_reference_values() {
        assert_relative_eq!(inc_beta(0.5, 2.0, 3.0), 0.6875, max_relative = 1e-12);
        assert_relative_eq!(
            inc_beta(0.1, 0.5, 0.5),
            0.204_832_764_699_133_45,
            max_relative = 1e-10
        );
        assert_relative_eq!(inc_beta(0.9, 5.0, 2.0), 0.885_735, max_relative = 1e-10);
        assert_eq!(inc_beta(0.0, 1.0, 1.0), 0.0);
        assert_eq!(inc_beta(1.0, 1.0, 1.0), 1.0);
    }

    #[test]
    fn tail_parsing() {
        assert_eq!(Tail::parse("one").unwrap(), Tail::One);
        assert_eq!(Tail::parse("two").unwrap(), Tail::Two);
        assert!(Tail::parse("three").is_err());
    }
}
