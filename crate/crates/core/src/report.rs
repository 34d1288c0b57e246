//! Bound reports: one achieved quantity set against one closed-form bound.

use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Closed vocabulary of report tags.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TheoremTag {
    /// Derandomized transversal distance `<= D / sqrt(2r)`, for weighted
    /// families and for single sets (as `r` copies).
    #[serde(rename = "thm4")]
    Thm4,
    /// As `thm4` for a uniformly random transversal (holds in expectation only).
    #[serde(rename = "thm4-random")]
    Thm4Random,
    /// Frank-Wolfe transversal: distance `<= 2 sqrt(ln 4 / 3) D / sqrt(r - t + 1)`.
    #[serde(rename = "thm5")]
    Thm5,
    /// Perturbed targets: distance `<= D / sqrt(2r) * sqrt(1 + 2 r eta^2)`.
    #[serde(rename = "lemma3")]
    Lemma3,
    /// Balanced halving: centroid displacement within the even/odd closed form.
    #[serde(rename = "lemma5")]
    Lemma5,
    /// Colored Tverberg: `max_j d(c, conv Q_j) <= (1 + sqrt 2) D / sqrt r`.
    #[serde(rename = "thm9")]
    Thm9,
    /// Regular-simplex lower bound, checked as `bound <= achieved` (brute force).
    #[serde(rename = "tverberg-lower")]
    TverbergLower,
    /// Uncolored Tverberg: `(2 + sqrt 2) sqrt(k / n) D`.
    #[serde(rename = "thm3")]
    Thm3,
    /// Helly: minimax radius `<= 1 / sqrt(k)`.
    #[serde(rename = "thm2")]
    Thm2,
    /// Helly, precise: minimax radius `<= sqrt((n - k) / (k (n - 1)))`.
    #[serde(rename = "thm10")]
    Thm10,
    /// Colorful Helly counting: far transversals `>= prod m_i` (lower bound).
    #[serde(rename = "thm6")]
    Thm6,
    /// Hyperplane construction: far transversals `== prod m_i`.
    #[serde(rename = "thm6-tight")]
    Thm6Tight,
    /// Fractional colorful Helly: witness hits `>= ceil(beta n_i)` (lower bound).
    #[serde(rename = "thm7")]
    Thm7,
    /// Fractional Helly, single family: witness hits `>= ceil(beta n)` (lower bound).
    #[serde(rename = "thm8")]
    Thm8,
    /// Fractional construction: largest intersecting subfamily `== beta n_i + 1`.
    #[serde(rename = "thm7-tight")]
    Thm7Tight,
    /// Simplex inequality, affine spans: radius / inradius `>= lambda_n` (lower bound).
    #[serde(rename = "thm14")]
    Thm14,
    /// Simplex inequality, outer cones: radius / inradius `>= lambda_n` (lower bound).
    #[serde(rename = "lemma-strong")]
    LemmaStrong,
    /// Selection: verified hit count `>= ceil(r^-r C(n, r))` (lower bound).
    #[serde(rename = "thm12-selection")]
    Thm12Selection,
    /// Weak epsilon-net: `|F| <= r^r eps^-r`.
    #[serde(rename = "thm13")]
    Thm13,
    /// Weak epsilon-net certificate: uncovered subsets `== 0`.
    #[serde(rename = "thm13-cert")]
    Thm13Cert,
    /// Centerpoint: minimum halfspace fraction `>= 1 / k` (lower bound).
    #[serde(rename = "thm12-centerpoint")]
    Thm12Centerpoint,
}

impl TheoremTag {
    pub const ALL: [TheoremTag; 21] = [
        TheoremTag::Thm4,
        TheoremTag::Thm4Random,
        TheoremTag::Thm5,
        TheoremTag::Lemma3,
        TheoremTag::Lemma5,
        TheoremTag::Thm9,
        TheoremTag::TverbergLower,
        TheoremTag::Thm3,
        TheoremTag::Thm2,
        TheoremTag::Thm10,
        TheoremTag::Thm6,
        TheoremTag::Thm6Tight,
        TheoremTag::Thm7,
        TheoremTag::Thm8,
        TheoremTag::Thm7Tight,
        TheoremTag::Thm14,
        TheoremTag::LemmaStrong,
        TheoremTag::Thm12Selection,
        TheoremTag::Thm13,
        TheoremTag::Thm13Cert,
        TheoremTag::Thm12Centerpoint,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremTag::Thm4 => "thm4",
            TheoremTag::Thm4Random => "thm4-random",
            TheoremTag::Thm5 => "thm5",
            TheoremTag::Lemma3 => "lemma3",
            TheoremTag::Lemma5 => "lemma5",
            TheoremTag::Thm9 => "thm9",
            TheoremTag::TverbergLower => "tverberg-lower",
            TheoremTag::Thm3 => "thm3",
            TheoremTag::Thm2 => "thm2",
            TheoremTag::Thm10 => "thm10",
            TheoremTag::Thm6 => "thm6",
            TheoremTag::Thm6Tight => "thm6-tight",
            TheoremTag::Thm7 => "thm7",
            TheoremTag::Thm8 => "thm8",
            TheoremTag::Thm7Tight => "thm7-tight",
            TheoremTag::Thm14 => "thm14",
            TheoremTag::LemmaStrong => "lemma-strong",
            TheoremTag::Thm12Selection => "thm12-selection",
            TheoremTag::Thm13 => "thm13",
            TheoremTag::Thm13Cert => "thm13-cert",
            TheoremTag::Thm12Centerpoint => "thm12-centerpoint",
        }
    }

    /// One line per tag, for help text.
    pub fn vocabulary() -> String {
        Self::ALL
            .iter()
            .map(|t| format!("  {:<18} {}", t.as_str(), t.summary()))
            .collect::<Vec<_>>()
            .join("\n")
    }

    fn summary(self) -> &'static str {
        match self {
            TheoremTag::Thm4 => "derandomized transversal distance <= D/sqrt(2r)",
            TheoremTag::Thm4Random => "random transversal distance vs D/sqrt(2r) (in expectation)",
            TheoremTag::Thm5 => "Frank-Wolfe transversal distance <= 2sqrt(ln4/3) D/sqrt(r-t+1)",
            TheoremTag::Lemma3 => "perturbed-target transversal distance bound",
            TheoremTag::Lemma5 => "balanced halving displacement <= even/odd closed form",
            TheoremTag::Thm9 => "colored Tverberg distance <= (1+sqrt2) D/sqrt(r)",
            TheoremTag::TverbergLower => "simplex lower bound <= brute-force Tverberg value",
            TheoremTag::Thm3 => "uncolored Tverberg distance <= (2+sqrt2) sqrt(k/n) D",
            TheoremTag::Thm2 => "Helly minimax radius <= 1/sqrt(k)",
            TheoremTag::Thm10 => "Helly minimax radius <= sqrt((n-k)/(k(n-1)))",
            TheoremTag::Thm6 => "far transversals >= prod m_i",
            TheoremTag::Thm6Tight => "far transversals == prod m_i on the hyperplane family",
            TheoremTag::Thm7 => "fractional colorful Helly hits >= ceil(beta n_i)",
            TheoremTag::Thm8 => "fractional Helly hits >= ceil(beta n)",
            TheoremTag::Thm7Tight => "largest intersecting subfamily == beta n_i + 1",
            TheoremTag::Thm14 => "face-span ball ratio >= lambda_n",
            TheoremTag::LemmaStrong => "face-cone ball ratio >= lambda_n",
            TheoremTag::Thm12Selection => "selection hits >= ceil(r^-r C(n,r))",
            TheoremTag::Thm13 => "weak eps-net size <= r^r eps^-r",
            TheoremTag::Thm13Cert => "weak eps-net uncovered subsets == 0",
            TheoremTag::Thm12Centerpoint => "centerpoint halfspace fraction >= 1/k",
        }
    }
}

impl fmt::Display for TheoremTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Direction of the comparison between `achieved` and `bound`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    /// `achieved <= bound + slack`.
    AtMost,
    /// `achieved >= bound - slack`.
    AtLeast,
    /// `|achieved - bound| <= slack`.
    Equal,
}

impl Sense {
    pub fn holds(self, achieved: f64, bound: f64, slack: f64) -> bool {
        match self {
            Sense::AtMost => achieved <= bound + slack,
            Sense::AtLeast => achieved >= bound - slack,
            Sense::Equal => (achieved - bound).abs() <= slack,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub theorem_tag: TheoremTag,
    pub instance_ref: String,
    /// Number of points or bodies.
    pub n: usize,
    pub r_or_k: usize,
    pub dimension: usize,
    pub achieved: f64,
    pub bound: f64,
    /// `achieved / bound`; 0 when both vanish, infinite when only the bound does.
    pub ratio: f64,
    pub sense: Sense,
    pub slack: f64,
    /// Always `sense.holds(achieved, bound, slack)`.
    pub pass: bool,
    pub runtime_ms: f64,
    pub seed: u64,
    pub trial: usize,
}

/// Header of [`write_csv`].
pub const CSV_COLUMNS: [&str; 11] = [
    "theorem_tag",
    "instance_ref",
    "n",
    "r_or_k",
    "dimension",
    "achieved",
    "bound",
    "ratio",
    "pass",
    "runtime_ms",
    "seed",
];

impl BoundReport {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        theorem_tag: TheoremTag,
        instance_ref: &str,
        n: usize,
        r_or_k: usize,
        dimension: usize,
        achieved: f64,
        bound: f64,
        sense: Sense,
        slack: f64,
    ) -> Self {
        let ratio = if bound != 0.0 {
            achieved / bound
        } else if achieved == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        BoundReport {
            theorem_tag,
            instance_ref: instance_ref.to_string(),
            n,
            r_or_k,
            dimension,
            achieved,
            bound,
            ratio,
            sense,
            slack,
            pass: sense.holds(achieved, bound, slack),
            runtime_ms: 0.0,
            seed: 0,
            trial: 0,
        }
    }

    pub fn with_run(mut self, seed: u64, trial: usize) -> Self {
        self.seed = seed;
        self.trial = trial;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    theorem_tag: &'static str,
    instance_ref: &'a str,
    n: usize,
    r_or_k: usize,
    dimension: usize,
    achieved: f64,
    bound: f64,
    ratio: f64,
    pass: bool,
    runtime_ms: f64,
    seed: u64,
}

/// Writes the fixed CSV columns, header first.
pub fn write_csv<W: Write>(out: W, reports: &[BoundReport]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if reports.is_empty() {
        w.write_record(CSV_COLUMNS).map_err(csv_err)?;
    }
    for r in reports {
        w.serialize(CsvRow {
            theorem_tag: r.theorem_tag.as_str(),
            instance_ref: &r.instance_ref,
            n: r.n,
            r_or_k: r.r_or_k,
            dimension: r.dimension,
            achieved: r.achieved,
            bound: r.bound,
            ratio: r.ratio,
            pass: r.pass,
            runtime_ms: r.runtime_ms,
            seed: r.seed,
        })
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// Pretty-printed JSON array with every field, including `sense` and `slack`.
pub fn write_json<W: Write>(mut out: W, reports: &[BoundReport]) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, reports)?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn write_reports<W: Write>(out: W, reports: &[BoundReport], format: Format) -> Result<()> {
    match format {
        Format::Csv => write_csv(out, reports),
        Format::Json => write_json(out, reports),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_follows_sense() {
        let r = BoundReport::new(TheoremTag::Thm4, "x", 3, 2, 2, 1.0, 1.0 - 1e-10, Sense::AtMost, 1e-9);
        assert!(r.pass);
        let r = BoundReport::new(TheoremTag::Thm4, "x", 3, 2, 2, 1.0, 0.5, Sense::AtMost, 1e-9);
        assert!(!r.pass);
        assert_eq!(r.ratio, 2.0);
        let r = BoundReport::new(TheoremTag::Thm14, "x", 3, 1, 2, 1.9, 2.0, Sense::AtLeast, 1e-5);
        assert!(!r.pass);
        let r = BoundReport::new(TheoremTag::Thm6Tight, "x", 4, 2, 2, 6.0, 6.0, Sense::Equal, 0.0);
        assert!(r.pass);
        let r = BoundReport::new(TheoremTag::Thm9, "x", 1, 1, 2, 0.0, 0.0, Sense::AtMost, 0.0);
        assert_eq!(r.ratio, 0.0);
    }

    #[test]
    fn csv_has_fixed_columns() {
        let r = BoundReport::new(TheoremTag::Thm12Selection, "a,b", 5, 2, 3, 0.25, 0.5, Sense::AtLeast, 0.0)
            .with_run(7, 0);
        let mut buf = Vec::new();
        write_csv(&mut buf, &[r]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_COLUMNS.join(","));
        assert_eq!(lines.next().unwrap(), "thm12-selection,\"a,b\",5,2,3,0.25,0.5,0.5,false,0.0,7");
        let mut empty = Vec::new();
        write_csv(&mut empty, &[]).unwrap();
        assert_eq!(String::from_utf8(empty).unwrap().trim(), CSV_COLUMNS.join(","));
    }

    #[test]
    fn tags_round_trip_through_serde() {
        for t in TheoremTag::ALL {
            let s = serde_json::to_string(&t).unwrap();
            assert_eq!(s, format!("\"{}\"", t.as_str()));
            assert_eq!(serde_json::from_str::<TheoremTag>(&s).unwrap(), t);
        }
    }
}
