//! The interval multiplier on finite sequences.
//!
//! Two independent evaluation routes:
//!
//! * [`apply_direct`] sums the closed-form kernel row by row (O(N^2) entries,
//!   each O(1) from precomputed polynomial data);
//! * [`apply_fast`] evaluates the five-term decomposition of each half-line
//!   piece: edge-weight multipliers around discrete Hilbert and Hankel-type
//!   transforms plus the diagonal, O(N log N) via FFT.
//!
//! Diagonal entries `K_b(n, n)` dominate runtime; they are memoized in a
//! [`DiagonalCache`] that can persist to disk between CLI runs. Values never
//! depend on whether they came from the cache: each diagonal is computed by a
//! fixed rule ladder whose result is independent of batch size.

use crate::error::{Error, Result};
use crate::jacobi::JacobiParams;
use crate::kernel;
use crate::quadrature::DEFAULT_TOL;
use crate::seq_ops::{self, lp_norm, EvalMode, FiniteSequence, WeightSeq};
use rayon::prelude::*;
use std::collections::HashMap;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::RwLock;

/// Geometry and truncation of one multiplier application.
#[derive(Debug, Clone, Copy)]
pub struct MultiplierSpec {
    params: JacobiParams,
    a: f64,
    b: f64,
    n_in: usize,
    n_out: usize,
}

impl MultiplierSpec {
    /// Standard constructor; requires `alpha, beta >= -1/2`.
    pub fn new(params: JacobiParams, a: f64, b: f64, n_in: usize, n_out: usize) -> Result<Self> {
        if !params.standard_range() {
            return Err(Error::OutsideStandardRange {
                alpha: params.alpha(),
                beta: params.beta(),
            });
        }
        Self::nonstandard(params, a, b, n_in, n_out)
    }

    /// Override constructor admitting any `alpha, beta > -1`. Kernel-summation
    /// evaluation still works there; the fast decomposition does not.
    pub fn nonstandard(
        params: JacobiParams,
        a: f64,
        b: f64,
        n_in: usize,
        n_out: usize,
    ) -> Result<Self> {
        crate::quadrature::check_interval(a, b)?;
        if n_in == 0 || n_out == 0 {
            return Err(Error::EmptySequence);
        }
        Ok(Self {
            params,
            a,
            b,
            n_in,
            n_out,
        })
    }

    pub fn params(&self) -> &JacobiParams {
        &self.params
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }

    /// Default output truncation for an input: four times its top support
    /// index plus 64, enough that the `1/|m-n|` kernel tail is controllable
    /// for exponents above 1.
    pub fn default_n_out(f: &FiniteSequence) -> usize {
        4 * f.top_support().unwrap_or(0) + 64
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct DiagKey {
    alpha: u64,
    beta: u64,
    b: u64,
    n: usize,
}

impl DiagKey {
    fn new(params: &JacobiParams, b: f64, n: usize) -> Self {
        Self {
            alpha: params.alpha().to_bits(),
            beta: params.beta().to_bits(),
            b: b.to_bits(),
            n,
        }
    }
}

/// Memo for kernel diagonal values keyed by `(alpha, beta, b, n)`, safe for
/// concurrent readers with single-writer insertion.
#[derive(Default)]
pub struct DiagonalCache {
    map: RwLock<HashMap<DiagKey, f64>>,
}

impl DiagonalCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `K_b(n, n)` for `n < len`, at the default quadrature tolerance.
    pub fn diagonal_batch(&self, params: &JacobiParams, b: f64, len: usize) -> Result<Vec<f64>> {
        if len == 0 {
            return Ok(Vec::new());
        }
        {
            let map = self.map.read().expect("cache lock");
            let hits: Vec<f64> = (0..len)
                .map_while(|n| map.get(&DiagKey::new(params, b, n)).copied())
                .collect();
            if hits.len() == len {
                return Ok(hits);
            }
        }
        let values = kernel::halfline_diagonal_batch(params, b, len, DEFAULT_TOL)?;
        let mut map = self.map.write().expect("cache lock");
        for (n, &v) in values.iter().enumerate() {
            map.entry(DiagKey::new(params, b, n)).or_insert(v);
        }
        Ok(values)
    }

    pub fn diagonal(&self, params: &JacobiParams, b: f64, n: usize) -> Result<f64> {
        Ok(self.diagonal_batch(params, b, n + 1)?[n])
    }

    /// Appends every entry of a `diagonals.csv` written by [`Self::save_csv`];
    /// returns the number of entries loaded.
    pub fn load_csv(&self, path: &Path) -> Result<usize> {
        let file = std::fs::File::open(path)
            .map_err(|e| Error::io(format!("opening cache file {}", path.display()), e))?;
        let mut loaded = 0usize;
        let mut map = self.map.write().expect("cache lock");
        for line in BufReader::new(file).lines() {
            let line = line.map_err(|e| Error::io("reading cache file", e))?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with("alpha") {
                continue;
            }
            let fields: Vec<&str> = trimmed.split(',').collect();
            if fields.len() != 5 {
                return Err(Error::Parse {
                    what: "diagonal cache row",
                    detail: trimmed.to_string(),
                });
            }
            let parse = |s: &str| -> Result<f64> {
                s.trim().parse().map_err(|_| Error::Parse {
                    what: "diagonal cache number",
                    detail: s.to_string(),
                })
            };
            let alpha = parse(fields[0])?;
            let beta = parse(fields[1])?;
            let b = parse(fields[2])?;
            let n: usize = fields[3].trim().parse().map_err(|_| Error::Parse {
                what: "diagonal cache index",
                detail: fields[3].to_string(),
            })?;
            let value = parse(fields[4])?;
            let params = JacobiParams::new(alpha, beta)?;
            map.insert(DiagKey::new(&params, b, n), value);
            loaded += 1;
        }
        Ok(loaded)
    }

    /// Writes all entries as CSV sorted by key, so identical caches produce
    /// byte-identical files. 17 significant digits round-trip exactly.
    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let map = self.map.read().expect("cache lock");
        let mut entries: Vec<(&DiagKey, &f64)> = map.iter().collect();
        entries.sort_by_key(|(k, _)| (k.alpha, k.beta, k.b, k.n));
        let mut file = std::fs::File::create(path)
            .map_err(|e| Error::io(format!("creating cache file {}", path.display()), e))?;
        writeln!(file, "alpha,beta,b,n,value").map_err(|e| Error::io("writing cache", e))?;
        for (key, value) in entries {
            writeln!(
                file,
                "{:.16e},{:.16e},{:.16e},{},{:.16e}",
                f64::from_bits(key.alpha),
                f64::from_bits(key.beta),
                f64::from_bits(key.b),
                key.n,
                value
            )
            .map_err(|e| Error::io("writing cache", e))?;
        }
        Ok(())
    }
}

/// Precomputed data for one half-line kernel `K_b`.
enum HalfKernel {
    /// `b = -1`: the kernel vanishes.
    Zero,
    /// `b = 1`: the kernel is the identity.
    Identity,
    Closed {
        prefactor: f64,
        param_sum: f64,
        values: Vec<f64>,
        derivatives: Vec<f64>,
        diagonal: Vec<f64>,
    },
}

impl HalfKernel {
    fn build(
        params: &JacobiParams,
        b: f64,
        len: usize,
        diag_len: usize,
        cache: &DiagonalCache,
    ) -> Result<Self> {
        if b == -1.0 {
            return Ok(HalfKernel::Zero);
        }
        if b == 1.0 {
            return Ok(HalfKernel::Identity);
        }
        Ok(HalfKernel::Closed {
            prefactor: kernel::prefactor(params, b),
            param_sum: params.alpha() + params.beta(),
            values: params.orthonormal_family(b, len)?,
            derivatives: params.orthonormal_derivative_family(b, len)?,
            diagonal: cache.diagonal_batch(params, b, diag_len)?,
        })
    }

    #[inline]
    fn entry(&self, m: usize, n: usize) -> f64 {
        match self {
            HalfKernel::Zero => 0.0,
            HalfKernel::Identity => {
                if m == n {
                    1.0
                } else {
                    0.0
                }
            }
            HalfKernel::Closed {
                prefactor,
                param_sum,
                values,
                derivatives,
                diagonal,
            } => {
                if m == n {
                    diagonal[n]
                } else {
                    kernel::closed_entry(*prefactor, *param_sum, values, derivatives, m, n)
                }
            }
        }
    }
}

/// Direct kernel summation: `out(n) = sum_{m < n_in} f(m) K_[a,b](m, n)`.
pub fn apply_direct(
    spec: &MultiplierSpec,
    f: &FiniteSequence,
    cache: &DiagonalCache,
) -> Result<FiniteSequence> {
    if f.len() != spec.n_in {
        return Err(Error::LengthMismatch {
            what: "input sequence",
            expected: spec.n_in,
            got: f.len(),
        });
    }
    let len = spec.n_in.max(spec.n_out);
    let diag_len = spec.n_in.min(spec.n_out);
    let upper = HalfKernel::build(&spec.params, spec.b, len, diag_len, cache)?;
    let lower = HalfKernel::build(&spec.params, spec.a, len, diag_len, cache)?;
    let input = f.values();
    let out: Vec<f64> = (0..spec.n_out)
        .into_par_iter()
        .map(|n| {
            let mut acc = 0.0;
            for (m, &fm) in input.iter().enumerate() {
                acc += fm * (upper.entry(m, n) - lower.entry(m, n));
            }
            acc
        })
        .collect();
    Ok(FiniteSequence::from_raw(out))
}

/// One half-line application through the five-term decomposition.
fn fast_halfline(
    params: &JacobiParams,
    b: f64,
    f: &FiniteSequence,
    n_out: usize,
    cache: &DiagonalCache,
) -> Result<Vec<f64>> {
    if b == -1.0 {
        return Ok(vec![0.0; n_out]);
    }
    if b == 1.0 {
        return Ok(f.resized(n_out).values().to_vec());
    }
    let len = f.len().max(n_out);
    let padded = f.resized(len);
    let value_w = kernel::value_edge_weight_family(params, b, len)?;
    let deriv_w = kernel::derivative_edge_weight_family(params, b, len)?;
    let weighted_v: Vec<f64> = padded
        .values()
        .iter()
        .zip(&value_w)
        .map(|(f, w)| f * w)
        .collect();
    let weighted_d: Vec<f64> = padded
        .values()
        .iter()
        .zip(&deriv_w)
        .map(|(f, w)| f * w)
        .collect();
    let a_sum = params.alpha() + params.beta() + 1.0;
    let h_of_d = seq_ops::hilbert_raw(&weighted_d, EvalMode::Fast);
    let h_of_v = seq_ops::hilbert_raw(&weighted_v, EvalMode::Fast);
    let q_of_d = seq_ops::q_raw(&weighted_d, a_sum, EvalMode::Fast, false);
    let q_of_v = seq_ops::q_raw(&weighted_v, a_sum, EvalMode::Fast, false);
    let diag_len = f.len().min(n_out);
    let diagonal = cache.diagonal_batch(params, b, diag_len)?;
    let mut out = vec![0.0; n_out];
    for (n, slot) in out.iter_mut().enumerate() {
        let mut acc = value_w[n] * h_of_d[n]
            - deriv_w[n] * h_of_v[n]
            - value_w[n] * q_of_d[n]
            - deriv_w[n] * q_of_v[n];
        if n < diag_len {
            acc += f.values()[n] * diagonal[n];
        }
        *slot = acc;
    }
    Ok(out)
}

/// Fast application of `T_[a,b]` as the difference of two half-line pieces.
/// Requires `alpha, beta >= -1/2`.
pub fn apply_fast(
    spec: &MultiplierSpec,
    f: &FiniteSequence,
    cache: &DiagonalCache,
) -> Result<FiniteSequence> {
    if !spec.params.standard_range() {
        return Err(Error::OutsideStandardRange {
            alpha: spec.params.alpha(),
            beta: spec.params.beta(),
        });
    }
    if f.len() != spec.n_in {
        return Err(Error::LengthMismatch {
            what: "input sequence",
            expected: spec.n_in,
            got: f.len(),
        });
    }
    if spec.a == spec.b {
        return Ok(FiniteSequence::from_raw(vec![0.0; spec.n_out]));
    }
    let upper = fast_halfline(&spec.params, spec.b, f, spec.n_out, cache)?;
    let lower = fast_halfline(&spec.params, spec.a, f, spec.n_out, cache)?;
    Ok(FiniteSequence::from_raw(
        upper.iter().zip(&lower).map(|(u, l)| u - l).collect(),
    ))
}

/// The symmetric multiplier of `[-r, r]`, `0 < r < 1`, via the fast path.
pub fn symmetric_multiplier(
    params: &JacobiParams,
    r: f64,
    f: &FiniteSequence,
    n_out: usize,
    cache: &DiagonalCache,
) -> Result<FiniteSequence> {
    if !(r.is_finite() && r > 0.0 && r < 1.0) {
        return Err(Error::OutOfDomain {
            value: r,
            domain: "(0, 1)",
        });
    }
    let spec = MultiplierSpec::new(*params, -r, r, f.len(), n_out)?;
    apply_fast(&spec, f, cache)
}

/// Windowed recovery error together with a tail bound.
#[derive(Debug, Clone, Copy)]
pub struct ConvergenceMeasurement {
    /// `l^p` norm of the recovery defect over the output window.
    pub window_error: f64,
    /// Bound on the `l^p` mass beyond the window, from the observed `1/(n-M)`
    /// decay of the defect; absent at `p = 1`, where the truncated value is a
    /// lower bound and the growth itself is the phenomenon under study.
    pub tail_bound: Option<f64>,
}

/// Recovery error of the symmetric multiplier: the `l^p` norm of
/// `T_[-r,r] f - f` over `[0, n_out)`.
pub fn convergence_error(
    params: &JacobiParams,
    r: f64,
    f: &FiniteSequence,
    p: f64,
    n_out: usize,
    cache: &DiagonalCache,
) -> Result<ConvergenceMeasurement> {
    if !(p.is_finite() && p >= 1.0) {
        return Err(Error::InvalidExponent { p });
    }
    let recovered = symmetric_multiplier(params, r, f, n_out, cache)?;
    let padded = f.resized(n_out);
    let defect: Vec<f64> = recovered
        .values()
        .iter()
        .zip(padded.values())
        .map(|(t, f)| t - f)
        .collect();
    let defect = FiniteSequence::from_raw(defect);
    let window_error = lp_norm(&defect, p, &WeightSeq::ones(n_out))?;
    let tail_bound = if p > 1.0 {
        let top = f.top_support().unwrap_or(0);
        let observed: f64 = defect
            .values()
            .iter()
            .enumerate()
            .filter(|(n, _)| *n > top)
            .map(|(n, v)| v.abs() * (n - top) as f64)
            .fold(0.0, f64::max);
        if n_out > top + 1 {
            // sum_{n >= n_out} (n - top)^{-p} <= (n_out - 1 - top)^{1-p} / (p - 1)
            let tail_sum = ((n_out - 1 - top) as f64).powf(1.0 - p) / (p - 1.0);
            Some(observed * tail_sum.powf(1.0 / p))
        } else {
            None
        }
    } else {
        None
    };
    Ok(ConvergenceMeasurement {
        window_error,
        tail_bound,
    })
}
