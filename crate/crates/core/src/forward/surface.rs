use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};

/// One term `amp * sin(freq * x + phase)` of an inline profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SineTerm {
    pub amp: f64,
    pub freq: f64,
    pub phase: f64,
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Example1,
    Example2,
    Example3,
    Flat(f64),
    Sines { offset: f64, terms: Vec<SineTerm> },
}

/// Height function x2 = f(x1) of the rough surface.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceProfile {
    kind: Kind,
}

/// a exp(-c (alpha x + beta)^2) and its first two derivatives.
fn gauss(x: f64, a: f64, c: f64, alpha: f64, beta: f64) -> (f64, f64, f64) {
    let u = alpha * x + beta;
    let g = a * (-c * u * u).exp();
    let s = -2.0 * c * alpha * u;
    (g, g * s, g * (s * s - 2.0 * c * alpha * alpha))
}

/// a sin(b x + p) and its first two derivatives.
fn sine(x: f64, a: f64, b: f64, p: f64) -> (f64, f64, f64) {
    let (s, c) = (b * x + p).sin_cos();
    (a * s, a * b * c, -a * b * b * s)
}

impl SurfaceProfile {
    pub fn example1() -> Self {
        SurfaceProfile { kind: Kind::Example1 }
    }

    pub fn example2() -> Self {
        SurfaceProfile { kind: Kind::Example2 }
    }

    pub fn example3() -> Self {
        SurfaceProfile { kind: Kind::Example3 }
    }

    pub fn flat(height: f64) -> Self {
        SurfaceProfile { kind: Kind::Flat(height) }
    }

    pub fn sines(offset: f64, terms: Vec<SineTerm>) -> Self {
        SurfaceProfile { kind: Kind::Sines { offset, terms } }
    }

    /// Build from a profile name and an optional coefficient string.
    ///
    /// `flat` takes a single height; `sines` takes `offset; a,b,p; a,b,p; ...`
    /// meaning `offset + sum a sin(b x + p)`.
    pub fn from_spec(name: &str, coefficients: Option<&str>) -> Result<Self> {
        let coeff = coefficients.map(str::trim).filter(|s| !s.is_empty());
        let bad = |msg: &str| Error::Config(format!("surface '{name}': {msg}"));
        match name {
            "example1" => Ok(Self::example1()),
            "example2" => Ok(Self::example2()),
            "example3" => Ok(Self::example3()),
            "flat" => {
                let h = match coeff {
                    None => 0.0,
                    Some(c) => c.parse().map_err(|_| bad("flat height must be a number"))?,
                };
                Ok(Self::flat(h))
            }
            "sines" => {
                let c = coeff.ok_or_else(|| bad("missing coefficients"))?;
                let mut parts = c.split(';');
                let offset: f64 = parts
                    .next()
                    .unwrap_or("")
                    .trim()
                    .parse()
                    .map_err(|_| bad("offset must be a number"))?;
                let mut terms = Vec::new();
                for p in parts.map(str::trim).filter(|p| !p.is_empty()) {
                    let v: Vec<f64> = p
                        .split(',')
                        .map(|x| x.trim().parse::<f64>())
                        .collect::<std::result::Result<_, _>>()
                        .map_err(|_| bad("terms are 'amp,freq,phase'"))?;
                    if v.len() != 3 {
                        return Err(bad("terms are 'amp,freq,phase'"));
                    }
                    terms.push(SineTerm { amp: v[0], freq: v[1], phase: v[2] });
                }
                Ok(Self::sines(offset, terms))
            }
            "" => Err(Error::Config("surface name is empty".into())),
            other => Err(Error::Config(format!("unknown surface '{other}'"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            Kind::Example1 => "example1",
            Kind::Example2 => "example2",
            Kind::Example3 => "example3",
            Kind::Flat(_) => "flat",
            Kind::Sines { .. } => "sines",
        }
    }

    /// Coefficient string accepted by [`SurfaceProfile::from_spec`], if any.
    pub fn coefficients(&self) -> Option<String> {
        match &self.kind {
            Kind::Flat(h) => Some(format!("{h:?}")),
            Kind::Sines { offset, terms } => {
                let mut s = format!("{offset:?}");
                for t in terms {
                    s.push_str(&format!("; {:?},{:?},{:?}", t.amp, t.freq, t.phase));
                }
                Some(s)
            }
            _ => None,
        }
    }

    /// (f, f', f'') at x.
    pub fn eval(&self, x: f64) -> (f64, f64, f64) {
        match &self.kind {
            Kind::Example1 => {
                let (a, da, dda) = sine(x - 1.0, 0.03, 2.5 * PI, 0.0);
                let (b, db, ddb) = sine(x - 1.0, 0.12, 0.4 * PI, 0.0);
                (0.5 + a + b, da + db, dda + ddb)
            }
            Kind::Example2 => {
                let g1 = gauss(x, 0.1, 25.0, 0.15, -0.5);
                let g2 = gauss(x, 0.2, 49.0, 0.15, 0.6);
                let g3 = gauss(x, -0.25, 4.0, 1.0, 0.0);
                (0.5 + g1.0 + g2.0 + g3.0, g1.1 + g2.1 + g3.1, g1.2 + g2.2 + g3.2)
            }
            Kind::Example3 => {
                let a = sine(x, 0.1, PI, 0.0);
                let b = sine(x, 0.1, 0.5 * PI, 0.0);
                (0.5 + a.0 + b.0, a.1 + b.1, a.2 + b.2)
            }
            Kind::Flat(h) => (*h, 0.0, 0.0),
            Kind::Sines { offset, terms } => terms.iter().fold((*offset, 0.0, 0.0), |acc, t| {
                let s = sine(x, t.amp, t.freq, t.phase);
                (acc.0 + s.0, acc.1 + s.1, acc.2 + s.2)
            }),
        }
    }

    pub fn f(&self, x: f64) -> f64 {
        self.eval(x).0
    }

    pub fn f_prime(&self, x: f64) -> f64 {
        self.eval(x).1
    }

    /// (min f, max f, max |f'|) over [-half_width, half_width] by dense sampling.
    pub fn bounds(&self, half_width: f64) -> (f64, f64, f64) {
        let n = ((2.0 * half_width) / 1e-3).ceil().max(16.0) as usize;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut slope: f64 = 0.0;
        for i in 0..=n {
            let x = -half_width + 2.0 * half_width * i as f64 / n as f64;
            let (f, df, _) = self.eval(x);
            lo = lo.min(f);
            hi = hi.max(f);
            slope = slope.max(df.abs());
        }
        (lo, hi, slope)
    }
}

impl fmt::Display for SurfaceProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.coefficients() {
            Some(c) => write!(f, "{}({})", self.name(), c),
            None => write!(f, "{}", self.name()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivatives_match_finite_differences() {
        let profiles = [
            SurfaceProfile::example1(),
            SurfaceProfile::example2(),
            SurfaceProfile::example3(),
            SurfaceProfile::from_spec("sines", Some("0.3; 0.1,2.0,0.5; 0.05,7.0,-1")).unwrap(),
        ];
        let h = 1e-4;
        for p in &profiles {
            for i in 0..50 {
                let x = -9.0 + 0.37 * i as f64;
                let (_, d, dd) = p.eval(x);
                let fd1 = (p.f(x + h) - p.f(x - h)) / (2.0 * h);
                let fd2 = (p.f(x + h) - 2.0 * p.f(x) + p.f(x - h)) / (h * h);
                assert!((d - fd1).abs() < 1e-7, "{p} at {x}");
                assert!((dd - fd2).abs() < 1e-4, "{p} at {x}");
            }
        }
    }

    #[test]
    fn example_values() {
        assert!((SurfaceProfile::example3().f(0.0) - 0.5).abs() < 1e-15);
        let d = SurfaceProfile::example3().f_prime(0.0);
        assert!((d - 0.15 * PI).abs() < 1e-15);
        let e1 = SurfaceProfile::example1().f(1.0);
        assert!((e1 - 0.5).abs() < 1e-15);
    }

    #[test]
    fn spec_round_trip() {
        let p = SurfaceProfile::from_spec("sines", Some("0.5; 0.1,3,0; 0.2,1.5,0.25")).unwrap();
        let q = SurfaceProfile::from_spec(p.name(), p.coefficients().as_deref()).unwrap();
        assert_eq!(p, q);
        assert!(SurfaceProfile::from_spec("nope", None).is_err());
        assert!(SurfaceProfile::from_spec("", None).is_err());
        assert!(SurfaceProfile::from_spec("sines", Some("0.5; 1,2")).is_err());
    }
}
