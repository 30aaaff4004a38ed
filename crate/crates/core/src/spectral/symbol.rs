use std::fmt;
use std::sync::Arc;

/// A real function of wavenumber magnitude, applied as a diagonal Fourier
/// multiplier.
///
/// `eval(0)` must be finite. Symbols that are singular at the origin (negative
/// powers) are defined to vanish there.
#[derive(Clone)]
pub struct RadialSymbol {
    label: String,
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl RadialSymbol {
    pub fn new(label: impl Into<String>, eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        RadialSymbol {
            label: label.into(),
            eval: Arc::new(eval),
        }
    }

    /// `r^p` with `0^0 = 1` and `0^p = 0` for every `p ≠ 0`.
    pub fn power(p: f64) -> Self {
        RadialSymbol::new(format!("r^{p}"), move |r| radial_power(r, p))
    }

    pub fn constant(c: f64) -> Self {
        RadialSymbol::new(format!("{c}"), move |_| c)
    }

    #[inline]
    pub fn eval(&self, r: f64) -> f64 {
        (self.eval)(r)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Pointwise product of two symbols.
    pub fn product(&self, other: &RadialSymbol) -> RadialSymbol {
        let (a, b) = (self.eval.clone(), other.eval.clone());
        RadialSymbol {
            label: format!("({})·({})", self.label, other.label),
            eval: Arc::new(move |r| a(r) * b(r)),
        }
    }
}

impl fmt::Debug for RadialSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialSymbol").field("label", &self.label).finish()
    }
}

/// `r^p` with the origin convention used by every multiplier in the crate.
#[inline]
pub fn radial_power(r: f64, p: f64) -> f64 {
    if p == 0.0 {
        1.0
    } else if r == 0.0 {
        0.0
    } else {
        r.powf(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_conventions() {
        assert_eq!(RadialSymbol::power(0.0).eval(0.0), 1.0);
        assert_eq!(RadialSymbol::power(2.5).eval(0.0), 0.0);
        assert_eq!(RadialSymbol::power(-1.0).eval(0.0), 0.0);
        assert_eq!(RadialSymbol::power(-1.0).eval(2.0), 0.5);
    }
}
