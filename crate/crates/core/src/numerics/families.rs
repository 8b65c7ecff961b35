//! Named analytic families and the random samplers used by the fuzzing suites.

use num_complex::Complex64;
use rand::Rng;

use super::powerlog::PowerLogFamily;
use super::{Domain, GridFunction, NumericsError};
use crate::exponent::{Exponent, Rational};

/// Smooth bump `exp(1 - 1/(1 - r²))` with `r = (x - center)/width`, peak 1, zero for `|r| ≥ 1`.
pub fn bump(center: f64, width: f64) -> impl Fn(f64) -> f64 {
    move |x| {
        let r = (x - center) / width;
        if r.abs() < 1.0 {
            (1.0 - 1.0 / (1.0 - r * r)).exp()
        } else {
            0.0
        }
    }
}

/// Indicator of `[a, b)`.
pub fn indicator(a: f64, b: f64) -> impl Fn(f64) -> f64 {
    move |x| if (a..b).contains(&x) { 1.0 } else { 0.0 }
}

fn parse_f64(s: &str, spec: &str) -> Result<f64, NumericsError> {
    if let Ok(r) = s.trim().parse::<Rational>() {
        return Ok(*r.numer() as f64 / *r.denom() as f64);
    }
    s.trim()
        .parse()
        .map_err(|_| NumericsError::Parameter(spec.to_string()))
}

fn parse_rational(s: &str, spec: &str) -> Result<Rational, NumericsError> {
    s.trim()
        .parse()
        .map_err(|_| NumericsError::Parameter(spec.to_string()))
}

/// `powerlog:alpha=1/2,beta=0`, `bump:center,width`, `indicator:a,b`, `const:c`.
pub fn parse_family(spec: &str, domain: Domain, resolution: usize) -> Result<GridFunction, NumericsError> {
    let (name, args) = spec
        .split_once(':')
        .ok_or_else(|| NumericsError::Family(spec.to_string()))?;
    let args: Vec<&str> = args.split(',').collect();
    match (name.trim(), args.as_slice()) {
        ("powerlog", [a, b]) => {
            let get = |kv: &str, key: &str| -> Result<Rational, NumericsError> {
                match kv.split_once('=') {
                    Some((k, v)) if k.trim() == key => parse_rational(v, spec),
                    _ => Err(NumericsError::Parameter(spec.to_string())),
                }
            };
            let fam = PowerLogFamily::new(get(a, "alpha")?, get(b, "beta")?)?;
            if domain != Domain::UnitInterval {
                return Err(NumericsError::Parameter(spec.to_string()));
            }
            fam.sample(resolution)
        }
        ("bump", [c, w]) => {
            let (c, w) = (parse_f64(c, spec)?, parse_f64(w, spec)?);
            if w <= 0.0 {
                return Err(NumericsError::Parameter(spec.to_string()));
            }
            GridFunction::from_real_fn(domain, resolution, bump(c, w))
        }
        ("indicator", [a, b]) => {
            GridFunction::from_real_fn(domain, resolution, indicator(parse_f64(a, spec)?, parse_f64(b, spec)?))
        }
        ("const", [c]) => GridFunction::constant(domain, resolution, parse_f64(c, spec)?),
        _ => Err(NumericsError::Family(spec.to_string())),
    }
}

fn complex_unit<G: Rng + ?Sized>(rng: &mut G) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Trigonometric polynomial of degree ≤ 4 with complex coefficients on `[0,1]`.
pub fn random_smooth_unit<G: Rng + ?Sized>(resolution: usize, rng: &mut G) -> GridFunction {
    let coeffs: Vec<Complex64> = (0..5)
        .map(|k| complex_unit(rng) / (1.0 + k as f64))
        .collect();
    GridFunction::from_fn(Domain::UnitInterval, resolution, |x| {
        coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 * x))
            .sum()
    })
    .expect("resolution validated by caller")
}

/// One to three bumps with complex amplitudes, supported in `[-T/2, T/2]`.
pub fn random_compact_window<G: Rng + ?Sized>(half_width: u32, resolution: usize, rng: &mut G) -> GridFunction {
    let quarter = half_width as f64 / 2.0;
    let bumps: Vec<(Complex64, f64, f64)> = (0..rng.gen_range(1..=3))
        .map(|_| {
            let w = rng.gen_range(0.1..quarter.max(0.2)).min(quarter);
            let radius = quarter - w;
            let c = if radius > 0.0 { rng.gen_range(-radius..radius) } else { 0.0 };
            (complex_unit(rng), c, w)
        })
        .collect();
    GridFunction::from_fn(Domain::RealWindow { half_width }, resolution, |x| {
        bumps.iter().map(|&(a, c, w)| a * bump(c, w)(x)).sum()
    })
    .expect("resolution validated by caller")
}

/// Bumps anywhere in the window, a slowly decaying tail and a mild integrable spike, so
/// that local and global behavior differ.
pub fn random_window<G: Rng + ?Sized>(half_width: u32, resolution: usize, rng: &mut G) -> GridFunction {
    let t = half_width as f64;
    let bumps: Vec<(Complex64, f64, f64)> = (0..rng.gen_range(1..=3))
        .map(|_| (complex_unit(rng) * 2.0, rng.gen_range(-t..t), rng.gen_range(0.1..1.5)))
        .collect();
    let tail_amp = rng.gen_range(0.0..1.0);
    let tail_pow = rng.gen_range(0.2..1.0);
    let spike_at = rng.gen_range(-t..t);
    let spike_amp = rng.gen_range(0.0..0.5);
    let spike_pow = rng.gen_range(0.1..0.6);
    GridFunction::from_fn(Domain::RealWindow { half_width }, resolution, |x| {
        let b: Complex64 = bumps.iter().map(|&(a, c, w)| a * bump(c, w)(x)).sum();
        let tail = tail_amp * (1.0 + x * x).powf(-tail_pow);
        let spike = spike_amp * ((x - spike_at).abs() + 0.01).powf(-spike_pow);
        b + tail + spike
    })
    .expect("resolution validated by caller")
}

/// `p = k/den` uniformly among the grid points of `[lo, hi]`; `lo ≥ 1`.
pub fn random_rational_exponent<G: Rng + ?Sized>(lo: i64, hi: i64, den: i64, rng: &mut G) -> Exponent {
    Exponent::p(rng.gen_range(lo * den..=hi * den), den)
}
