use serde::{Deserialize, Serialize};

/// `1 / (1 + e^{-x})` without overflow for large `|x|`.
#[inline]
pub fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^x)`, accurate in both tails.
#[inline]
pub fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Logistic growth `amplitude / (1 + e^{-rate (t - inflection)})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmoidParams {
    pub amplitude: f64,
    pub rate: f64,
    pub inflection: f64,
}

impl SigmoidParams {
    pub fn new(amplitude: f64, rate: f64, inflection: f64) -> Self {
        Self {
            amplitude,
            rate,
            inflection,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.amplitude * logistic(self.rate * (t - self.inflection))
    }

    /// `αβσ(1−σ)`; identical to `αβs/(1+s)²` with `s = e^{-β(t−γ)}`.
    pub fn derivative(&self, t: f64) -> f64 {
        let s = logistic(self.rate * (t - self.inflection));
        self.amplitude * self.rate * s * (1.0 - s)
    }

    pub fn second_derivative(&self, t: f64) -> f64 {
        let s = logistic(self.rate * (t - self.inflection));
        self.amplitude * self.rate * self.rate * s * (1.0 - s) * (1.0 - 2.0 * s)
    }

    /// `∫_{t0}^{t1}` of the curve, in value·hour.
    pub fn integral(&self, t0: f64, t1: f64) -> f64 {
        let b = self.rate;
        let c = self.inflection;
        self.amplitude / b * (softplus(b * (t1 - c)) - softplus(b * (t0 - c)))
    }

    pub fn is_valid(&self) -> bool {
        self.amplitude > 0.0
            && self.rate > 0.0
            && self.amplitude.is_finite()
            && self.rate.is_finite()
            && self.inflection.is_finite()
    }
}

/// Two successive logistic phases, ordered by inflection time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiSigmoidParams {
    pub phase1: SigmoidParams,
    pub phase2: SigmoidParams,
}

impl BiSigmoidParams {
    /// Builds the pair, swapping phases if needed so that
    /// `phase1.inflection <= phase2.inflection`.
    pub fn ordered(a: SigmoidParams, b: SigmoidParams) -> Self {
        if a.inflection <= b.inflection {
            Self {
                phase1: a,
                phase2: b,
            }
        } else {
            Self {
                phase1: b,
                phase2: a,
            }
        }
    }
}

/// A fitted area or perimeter trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum GrowthCurve {
    Sigmoid(SigmoidParams),
    BiSigmoid(BiSigmoidParams),
}

impl GrowthCurve {
    pub fn phases(&self) -> Vec<SigmoidParams> {
        match self {
            GrowthCurve::Sigmoid(p) => vec![*p],
            GrowthCurve::BiSigmoid(b) => vec![b.phase1, b.phase2],
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.phases().iter().map(|p| p.eval(t)).sum()
    }

    pub fn derivative(&self, t: f64) -> f64 {
        self.phases().iter().map(|p| p.derivative(t)).sum()
    }

    pub fn second_derivative(&self, t: f64) -> f64 {
        self.phases().iter().map(|p| p.second_derivative(t)).sum()
    }

    pub fn integral(&self, t0: f64, t1: f64) -> f64 {
        self.phases().iter().map(|p| p.integral(t0, t1)).sum()
    }

    /// Long-time asymptote `Σ αᵢ`.
    pub fn total_amplitude(&self) -> f64 {
        self.phases().iter().map(|p| p.amplitude).sum()
    }
}

impl From<SigmoidParams> for GrowthCurve {
    fn from(p: SigmoidParams) -> Self {
        GrowthCurve::Sigmoid(p)
    }
}

impl From<BiSigmoidParams> for GrowthCurve {
    fn from(p: BiSigmoidParams) -> Self {
        GrowthCurve::BiSigmoid(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::trapezoid;

    fn p() -> SigmoidParams {
        SigmoidParams::new(20.0, 0.5, 10.0)
    }

    #[test]
    fn half_amplitude_at_inflection() {
        assert_eq!(p().eval(10.0), 10.0);
        assert_eq!(p().eval(1e6), 20.0);
        let q = SigmoidParams::new(1.0, 1.0, 0.0);
        assert!((q.eval(3f64.ln()) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn derivative_peak_and_finite_difference() {
        assert!((p().derivative(10.0) - 2.5).abs() < 1e-15);
        assert_eq!(p().second_derivative(10.0), 0.0);
        let h = 1e-5;
        for &t in &[3.0, 10.0, 17.5] {
            let fd = (p().eval(t + h) - p().eval(t - h)) / (2.0 * h);
            assert!((fd - p().derivative(t)).abs() < 1e-6);
            let fd2 = (p().derivative(t + h) - p().derivative(t - h)) / (2.0 * h);
            assert!((fd2 - p().second_derivative(t)).abs() < 1e-6);
        }
    }

    #[test]
    fn integral_known_value() {
        let q = SigmoidParams::new(1.0, 1.0, 0.0);
        let expected = (1.0 + std::f64::consts::E).ln() - 2f64.ln();
        assert!((q.integral(0.0, 1.0) - expected).abs() < 1e-15);
        assert!((expected - 0.62011).abs() < 1e-5);
    }

    #[test]
    fn integral_matches_trapezoid() {
        let q = p();
        let n = 24_000;
        let t: Vec<f64> = (0..=n).map(|i| i as f64 * 1e-3).collect();
        let y: Vec<f64> = t.iter().map(|&x| q.eval(x)).collect();
        let exact = q.integral(0.0, 24.0);
        assert!(((trapezoid(&t, &y) - exact) / exact).abs() < 1e-6);
    }

    #[test]
    fn late_slope_is_amplitude() {
        let q = SigmoidParams::new(1.0, 1.0, 0.0);
        let slope = q.integral(0.0, 1001.0) - q.integral(0.0, 1000.0);
        assert!((slope - 1.0).abs() < 1e-12);
    }

    #[test]
    fn extreme_arguments_stay_finite() {
        let q = SigmoidParams::new(3.0, 7.0, 0.0);
        for &t in &[-100.0, 100.0] {
            assert!(q.eval(t).is_finite());
            assert!(q.derivative(t).is_finite());
            assert!(q.integral(0.0, t).is_finite());
        }
    }

    #[test]
    fn bisigmoid_orders_phases() {
        let a = SigmoidParams::new(1.0, 1.0, 30.0);
        let b = SigmoidParams::new(2.0, 1.0, 5.0);
        let bi = BiSigmoidParams::ordered(a, b);
        assert_eq!(bi.phase1.inflection, 5.0);
        let c = GrowthCurve::from(bi);
        assert_eq!(c.total_amplitude(), 3.0);
    }
}
