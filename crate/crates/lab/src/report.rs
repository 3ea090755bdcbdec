use serde::{Deserialize, Serialize};

/// Largest accepted relative change of the max ratio under refinement, unless a check says otherwise.
pub const DEFAULT_STABILITY: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// Inputs violate the check's hypothesis; nothing was measured.
    Refused,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleRow {
    pub index: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

impl SampleRow {
    pub fn new(index: usize, lhs: f64, rhs: f64) -> Self {
        Self { index, lhs, rhs, ratio: lhs / rhs }
    }
}

/// Max ratio at a coarse and a refined resolution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stability {
    pub coarse: f64,
    pub fine: f64,
    pub relative_change: f64,
    pub tolerance: f64,
    pub stable: bool,
}

impl Stability {
    pub fn new(coarse: f64, fine: f64, tolerance: f64) -> Self {
        let relative_change = (fine - coarse).abs() / coarse.abs().max(f64::MIN_POSITIVE);
        Self { coarse, fine, relative_change, tolerance, stable: relative_change.is_finite() && relative_change <= tolerance }
    }

    /// Only growth counts: stable when fine ≤ coarse·(1 + tolerance).
    pub fn no_growth(coarse: f64, fine: f64, tolerance: f64) -> Self {
        let mut s = Self::new(coarse, fine, tolerance);
        s.stable = fine.is_finite() && fine <= coarse * (1.0 + tolerance);
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub check: String,
    pub params: serde_json::Value,
    pub seed: Option<u64>,
    pub samples: Vec<SampleRow>,
    pub max_ratio: f64,
    pub stability: Option<Stability>,
    /// Headline number for summaries (an empirical constant or a worst-case error).
    pub measured: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl RatioReport {
    pub fn new(check: &str, params: serde_json::Value, seed: Option<u64>, samples: Vec<SampleRow>) -> Self {
        let max_ratio = max_finite_ratio(&samples);
        Self {
            check: check.to_string(),
            params,
            seed,
            samples,
            max_ratio,
            stability: None,
            measured: max_ratio,
            tolerance: f64::NAN,
            verdict: Verdict::Pass,
            notes: Vec::new(),
        }
    }

    pub fn refused(check: &str, params: serde_json::Value, reason: String) -> Self {
        let mut r = Self::new(check, params, None, Vec::new());
        r.verdict = Verdict::Refused;
        r.notes.push(reason);
        r
    }

    pub fn all_finite(&self) -> bool {
        self.samples.iter().all(|s| s.lhs.is_finite() && s.rhs.is_finite() && s.ratio.is_finite())
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Downgrades the verdict to Fail when `ok` is false, recording `what`.
    pub fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.verdict = Verdict::Fail;
            self.notes.push(format!("failed: {}", what.into()));
        }
    }

    pub fn note(&mut self, what: impl Into<String>) {
        self.notes.push(what.into());
    }
}

pub fn max_finite_ratio(samples: &[SampleRow]) -> f64 {
    samples.iter().map(|s| s.ratio).filter(|r| r.is_finite()).fold(f64::NAN, f64::max)
}
