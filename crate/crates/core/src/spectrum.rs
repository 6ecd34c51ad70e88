//! Orbit-set action spectra and Weyl-law diagnostics.
//!
//! Given the actions of finitely many simple orbits, the orbit-set spectrum is
//! the sorted multiset of all nonnegative integer combinations. Spectral
//! invariants of the underlying contact form take values in this set; the
//! enumeration here produces the candidate values only, so reports label it
//! "orbit-set action spectrum (spectrality candidates)" rather than claiming
//! the invariants themselves.
//!
//! Enumeration generates every combination with value below a bound, growing
//! the bound geometrically until the requested index is covered, then sorts.
//! Each value keeps its exact multiplicity vector, so float collisions between
//! distinct orbit sets stay distinguishable and ties are ordered
//! deterministically.

use crate::error::{Error, Result};

/// Hard cap on generator count; the flat witness layout assumes it.
pub const MAX_GENERATORS: usize = 8;

/// Lazily enumerable orbit-set action spectrum.
#[derive(Debug, Clone)]
pub struct ActionSpectrum {
    generators: Vec<f64>,
    volume_hint: Option<f64>,
    /// Work cap for one enumeration pass (number of generated combinations).
    budget: usize,
    values: Vec<f64>,
    /// Flat multiplicity witnesses, `generators.len()` entries per value.
    witnesses: Vec<u32>,
    /// Values are complete and correctly ordered below this bound.
    valid_below: f64,
}

impl ActionSpectrum {
    pub fn new(generators: Vec<f64>) -> Result<Self> {
        if generators.is_empty() || generators.len() > MAX_GENERATORS {
            return Err(Error::InvalidInput(format!(
                "need between 1 and {MAX_GENERATORS} generators, got {}",
                generators.len()
            )));
        }
        if let Some(bad) = generators.iter().find(|g| !(**g > 0.0) || !g.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "generator actions must be positive and finite, got {bad}"
            )));
        }
        Ok(Self {
            generators,
            volume_hint: None,
            budget: 40_000_000,
            values: Vec::new(),
            witnesses: Vec::new(),
            valid_below: 0.0,
        })
    }

    pub fn with_volume_hint(mut self, volume: f64) -> Self {
        self.volume_hint = Some(volume);
        self
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn generators(&self) -> &[f64] {
        &self.generators
    }

    pub fn volume_hint(&self) -> Option<f64> {
        self.volume_hint
    }

    /// `k`-th smallest orbit-set action (0-indexed, with multiplicity).
    pub fn value(&mut self, k: usize) -> Result<f64> {
        self.ensure(k)?;
        Ok(self.values[k])
    }

    /// Sorted prefix `values[0..=k]`.
    pub fn prefix(&mut self, k: usize) -> Result<&[f64]> {
        self.ensure(k)?;
        Ok(&self.values[..=k])
    }

    /// Multiplicity witness of the `k`-th value.
    pub fn witness(&mut self, k: usize) -> Result<&[u32]> {
        self.ensure(k)?;
        let g = self.generators.len();
        Ok(&self.witnesses[k * g..(k + 1) * g])
    }

    fn ensure(&mut self, k: usize) -> Result<()> {
        if self.values.len() > k && self.values[k] < self.valid_below * (1.0 - 1e-12) {
            return Ok(());
        }
        // initial guess from the leading-order count bound^g / (g! * prod a)
        let g = self.generators.len() as f64;
        let prod: f64 = self.generators.iter().product();
        let fact: f64 = (1..=self.generators.len()).map(|i| i as f64).product();
        let mut bound = (((k + 1) as f64) * fact * prod)
            .powf(1.0 / g)
            .max(self.generators.iter().cloned().fold(0.0, f64::max));
        loop {
            let count = self.count_below(bound);
            if count > self.budget {
                return Err(Error::BudgetExceeded(format!(
                    "spectrum enumeration to bound {bound:.6e} needs {count} entries \
                     (budget {})",
                    self.budget
                )));
            }
            if count > k {
                self.materialize(bound, count);
                if self.values.len() > k && self.values[k] < bound * (1.0 - 1e-12) {
                    return Ok(());
                }
            }
            bound *= 1.6;
        }
    }

    fn count_below(&self, bound: f64) -> usize {
        fn rec(gens: &[f64], bound: f64) -> usize {
            if gens.len() == 1 {
                return (bound / gens[0]).floor() as usize + 1;
            }
            let a = gens[0];
            let mut total = 0;
            let mut m = 0usize;
            loop {
                let used = m as f64 * a;
                if used > bound {
                    break;
                }
                total += rec(&gens[1..], bound - used);
                m += 1;
            }
            total
        }
        rec(&self.generators, bound)
    }

    fn materialize(&mut self, bound: f64, count_hint: usize) {
        let g = self.generators.len();
        let mut values = Vec::with_capacity(count_hint);
        let mut witnesses = Vec::with_capacity(count_hint * g);
        let mut current = vec![0u32; g];
        fn rec(
            gens: &[f64],
            idx: usize,
            acc: f64,
            bound: f64,
            current: &mut [u32],
            values: &mut Vec<f64>,
            witnesses: &mut Vec<u32>,
        ) {
            if idx == gens.len() - 1 {
                let a = gens[idx];
                let max_m = ((bound - acc) / a).floor() as u32;
                for m in 0..=max_m {
                    current[idx] = m;
                    values.push(acc + m as f64 * a);
                    witnesses.extend_from_slice(current);
                }
                current[idx] = 0;
                return;
            }
            let a = gens[idx];
            let mut m = 0u32;
            loop {
                let used = acc + m as f64 * a;
                if used > bound {
                    break;
                }
                current[idx] = m;
                rec(gens, idx + 1, used, bound, current, values, witnesses);
                m += 1;
            }
            current[idx] = 0;
        }
        rec(
            &self.generators,
            0,
            0.0,
            bound,
            &mut current,
            &mut values,
            &mut witnesses,
        );
        // sort by value, ties by witness vector for a deterministic order
        let mut order: Vec<u32> = (0..values.len() as u32).collect();
        order.sort_unstable_by(|&i, &j| {
            let (i, j) = (i as usize, j as usize);
            values[i]
                .partial_cmp(&values[j])
                .unwrap()
                .then_with(|| witnesses[i * g..(i + 1) * g].cmp(&witnesses[j * g..(j + 1) * g]))
        });
        self.values = order.iter().map(|&i| values[i as usize]).collect();
        let mut sorted_witness = Vec::with_capacity(witnesses.len());
        for &i in &order {
            let i = i as usize;
            sorted_witness.extend_from_slice(&witnesses[i * g..(i + 1) * g]);
        }
        self.witnesses = sorted_witness;
        self.valid_below = bound;
    }
}

/// Normalized Weyl-law sample at one index.
#[derive(Debug, Clone, Copy)]
pub struct WeylDiagnostic {
    pub k: usize,
    pub value: f64,
    /// `value^2 / (2 * volume * k)`; tends to 1 under the Weyl law.
    pub normalized: f64,
}

/// Normalized Weyl ratios at the requested indices (`k = 0` is skipped).
pub fn weyl_diagnostics(spec: &mut ActionSpectrum, ks: &[usize]) -> Result<Vec<WeylDiagnostic>> {
    let volume = spec
        .volume_hint
        .ok_or_else(|| Error::InvalidInput("weyl diagnostics require a volume hint".into()))?;
    let mut out = Vec::with_capacity(ks.len());
    for &k in ks {
        if k == 0 {
            continue;
        }
        let value = spec.value(k)?;
        out.push(WeylDiagnostic {
            k,
            value,
            normalized: value * value / (2.0 * volume * k as f64),
        });
    }
    Ok(out)
}

/// Mean deviation `|normalized - 1|` over one dyadic index block.
#[derive(Debug, Clone, Copy)]
pub struct WeylBlock {
    pub k_lo: usize,
    pub k_hi: usize,
    pub mean_abs_dev: f64,
}

/// Dyadic-block convergence diagnostic for the Weyl law.
#[derive(Debug, Clone)]
pub struct WeylTrend {
    pub blocks: Vec<WeylBlock>,
    pub nonincreasing: bool,
    /// Least-squares slope of `log |dev|` against `log k` over block means;
    /// reported without pass/fail semantics.
    pub empirical_exponent: f64,
}

/// Average `|value^2/(2 vol k) - 1|` over dyadic blocks `[k_lo 2^j, k_lo 2^(j+1))`
/// intersected with `[k_lo, k_hi]`.
pub fn weyl_trend(spec: &mut ActionSpectrum, k_lo: usize, k_hi: usize) -> Result<WeylTrend> {
    if k_lo == 0 || k_hi <= k_lo {
        return Err(Error::InvalidInput(format!(
            "need 0 < k_lo < k_hi, got ({k_lo}, {k_hi})"
        )));
    }
    let volume = spec
        .volume_hint
        .ok_or_else(|| Error::InvalidInput("weyl trend requires a volume hint".into()))?;
    let values = spec.prefix(k_hi)?;
    let mut blocks = Vec::new();
    let mut lo = k_lo;
    while lo < k_hi {
        let hi = (lo * 2).min(k_hi);
        let mut acc = 0.0;
        for (k, v) in values.iter().enumerate().take(hi).skip(lo) {
            acc += (v * v / (2.0 * volume * k as f64) - 1.0).abs();
        }
        blocks.push(WeylBlock {
            k_lo: lo,
            k_hi: hi,
            mean_abs_dev: acc / (hi - lo) as f64,
        });
        lo = hi;
    }
    let nonincreasing = blocks
        .windows(2)
        .all(|w| w[1].mean_abs_dev <= w[0].mean_abs_dev);
    // log-log fit of block mean deviation against block midpoint
    let pts: Vec<(f64, f64)> = blocks
        .iter()
        .filter(|b| b.mean_abs_dev > 0.0)
        .map(|b| ((0.5 * (b.k_lo + b.k_hi) as f64).ln(), b.mean_abs_dev.ln()))
        .collect();
    let empirical_exponent = if pts.len() >= 2 {
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        (n * sxy - sx * sy) / (n * sxx - sx * sx)
    } else {
        f64::NAN
    };
    Ok(WeylTrend {
        blocks,
        nonincreasing,
        empirical_exponent,
    })
}

/// Deviation row of the explicit-constant Weyl bound.
#[derive(Debug, Clone, Copy)]
pub struct ExplicitConstantRow {
    pub k: usize,
    pub deviation: f64,
    pub bound: f64,
    pub within: bool,
}

/// Check `|value - sqrt(2 vol k)| <= 8 sqrt(2) C (vol^{1/4} + vol^{-1/4}) k^{1/4}`
/// for a user-supplied boundary constant `C`. Callers without a constant skip
/// this diagnostic entirely.
pub fn explicit_constant_check(
    spec: &mut ActionSpectrum,
    c: f64,
    ks: &[usize],
) -> Result<Vec<ExplicitConstantRow>> {
    let volume = spec.volume_hint.ok_or_else(|| {
        Error::InvalidInput("explicit-constant check requires a volume hint".into())
    })?;
    let mut rows = Vec::new();
    for &k in ks {
        if k == 0 {
            continue;
        }
        let value = spec.value(k)?;
        let deviation = (value - (2.0 * volume * k as f64).sqrt()).abs();
        let bound = 8.0
            * std::f64::consts::SQRT_2
            * c
            * (volume.powf(0.25) + volume.powf(-0.25))
            * (k as f64).powf(0.25);
        rows.push(ExplicitConstantRow {
            k,
            deviation,
            bound,
            within: deviation <= bound,
        });
    }
    Ok(rows)
}

/// `k`-th value of the disjoint union of several spectra:
/// the max over compositions `k_1 + ... + k_m = k` of the summed values,
/// computed by folding a max-plus convolution over spectrum pairs.
pub fn disjoint_union_value(specs: &mut [ActionSpectrum], k: usize) -> Result<f64> {
    if specs.is_empty() {
        return Err(Error::InvalidInput("disjoint union of no spectra".into()));
    }
    let mut acc: Vec<f64> = specs[0].prefix(k)?.to_vec();
    for spec in specs.iter_mut().skip(1) {
        let next = spec.prefix(k)?;
        let mut out = vec![f64::NEG_INFINITY; k + 1];
        for (n, slot) in out.iter_mut().enumerate() {
            let mut best = f64::NEG_INFINITY;
            for i in 0..=n {
                let candidate = acc[i] + next[n - i];
                if candidate > best {
                    best = candidate;
                }
            }
            *slot = best;
        }
        acc = out;
    }
    Ok(acc[k])
}
