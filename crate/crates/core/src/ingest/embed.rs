use super::Trajectory;
use crate::error::{Error, Result};

/// Point i is `(x_i, x_{i+τ}, …, x_{i+(dim−1)τ})`, timed by its index.
pub fn delay_embed(series: &[f64], tau: usize, dim: usize) -> Result<Trajectory> {
    if dim == 0 || tau == 0 {
        return Err(Error::InvalidParameter("tau and dim must be positive".into()));
    }
    let span = (dim - 1) * tau;
    if series.len() <= span {
        return Err(Error::SeriesTooShort { len: series.len(), dim, tau });
    }
    let n = series.len() - span;
    let points = (0..n).map(|i| (0..dim).map(|k| series[i + k * tau]).collect()).collect();
    Trajectory::new((0..n).map(|i| i as f64).collect(), points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lengths() {
        let s = vec![0.5; 1183];
        let t = delay_embed(&s, 5, 3).unwrap();
        assert_eq!(t.len(), 1173);
        assert!(t.points.iter().all(|p| p == &vec![0.5; 3]));
        assert!(matches!(delay_embed(&s[..10], 5, 3), Err(Error::SeriesTooShort { .. })));
    }

    #[test]
    fn quarter_period_sine_is_a_circle() {
        let period = 40;
        let s: Vec<f64> = (0..400).map(|i| (2.0 * std::f64::consts::PI * i as f64 / period as f64).sin()).collect();
        let t = delay_embed(&s, period / 4, 2).unwrap();
        for p in &t.points {
            assert!((p[0].hypot(p[1]) - 1.0).abs() < 1e-9);
        }
    }
}
