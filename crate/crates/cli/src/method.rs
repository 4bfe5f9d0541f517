use std::fmt;
use std::str::FromStr;

use fastkde::Kernel;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Engine {
    Exact,
    Binned,
    Naive,
}

/// An estimator label such as `exact-K4` or `binned-K1`; bare `naive` is
/// `naive-K4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Method {
    pub engine: Engine,
    pub alpha: usize,
}

impl Method {
    pub fn kernel(&self) -> Result<Kernel> {
        Ok(Kernel::k_alpha(self.alpha)?)
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("naive") {
            return Ok(Method { engine: Engine::Naive, alpha: 4 });
        }
        let (engine, rest) = s.split_once('-').ok_or_else(|| format!("unknown method {s:?}"))?;
        let engine = match engine.to_ascii_lowercase().as_str() {
            "exact" => Engine::Exact,
            "binned" => Engine::Binned,
            "naive" => Engine::Naive,
            _ => return Err(format!("unknown method {s:?} (expected exact-K<α>, binned-K<α> or naive-K<α>)")),
        };
        let alpha = rest
            .strip_prefix(['K', 'k'])
            .and_then(|a| a.parse().ok())
            .ok_or_else(|| format!("bad kernel in method {s:?}"))?;
        Ok(Method { engine, alpha })
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let engine = match self.engine {
            Engine::Exact => "exact",
            Engine::Binned => "binned",
            Engine::Naive => "naive",
        };
        write!(f, "{engine}-K{}", self.alpha)
    }
}

/// `k1`, `k4`, `k7`, or any `kN` / `alpha=N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelSpec(pub usize);

impl FromStr for KernelSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let t = s.trim().to_ascii_lowercase();
        let digits = t.strip_prefix("alpha=").or_else(|| t.strip_prefix('k'));
        digits
            .and_then(|d| d.parse().ok())
            .map(KernelSpec)
            .ok_or_else(|| format!("unknown kernel {s:?} (expected k1, k4, k7 or alpha=N)"))
    }
}

impl KernelSpec {
    pub fn build(self) -> Result<Kernel> {
        Kernel::k_alpha(self.0).map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BandwidthSpec {
    Silverman,
    Fixed(f64),
}

impl FromStr for BandwidthSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.trim().eq_ignore_ascii_case("silverman") {
            return Ok(BandwidthSpec::Silverman);
        }
        match s.trim().parse::<f64>() {
            Ok(h) if h > 0.0 && h.is_finite() => Ok(BandwidthSpec::Fixed(h)),
            _ => Err(format!("bandwidth must be 'silverman' or a positive number, got {s:?}")),
        }
    }
}

/// Benchmark density label `a`..`h`.
pub fn parse_label(s: &str) -> Result<char, String> {
    let mut chars = s.trim().chars();
    match (chars.next().map(|c| c.to_ascii_lowercase()), chars.next()) {
        (Some(c @ 'a'..='h'), None) => Ok(c),
        _ => Err(format!("density must be one of a..h, got {s:?}")),
    }
}
