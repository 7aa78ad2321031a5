//! Serialized outputs: trajectory files, sweep tables and the run summary.
//!
//! All reals are written with 12 significant digits (see [`sig12`]) so that
//! output files are reproducible byte for byte.

use std::io::{self, Write};

use serde::ser::Error as _;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::belief::MemoryCounts;
use crate::engine::{RoundRecord, Trajectory};
use crate::montecarlo::SweepRow;
use crate::perception::{Impulse, Outcome};

/// Column order of sweep tables.
pub const SWEEP_COLUMNS: [&str; 12] = [
    "point_index",
    "parameter",
    "value",
    "mean_p0",
    "se_p0",
    "mean_p1",
    "se_p1",
    "invest_rate",
    "mean_fraction",
    "embezzle_rate",
    "empirical_success_freq",
    "closed_form_confidence",
];

/// Column order of trajectory tables; matches the JSON record field order.
pub const TRAJECTORY_COLUMNS: [&str; 14] = [
    "round_index",
    "p0",
    "invest_fraction",
    "p1",
    "h",
    "embezzled",
    "investor_outcome",
    "manager_outcome",
    "investor_impulse",
    "manager_impulse",
    "investor_successes_after",
    "investor_failures_after",
    "manager_successes_after",
    "manager_failures_after",
];

/// Formats a real with 12 significant digits: fixed notation for magnitudes
/// in `[1e-5, 1e12)`, scientific otherwise.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0.00000000000".to_string();
    }
    if !x.is_finite() {
        return "NaN".to_string();
    }
    let sci = format!("{x:.11e}");
    let exponent: i32 = sci[sci.find('e').expect("scientific format") + 1..]
        .parse()
        .expect("integer exponent");
    if (-5..12).contains(&exponent) {
        format!("{:.*}", (11 - exponent) as usize, x)
    } else {
        sci
    }
}

/// A real serialized as a JSON number with 12 significant digits.
#[derive(Debug, Clone, Copy)]
pub struct Sig(pub f64);

impl Serialize for Sig {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return serializer.serialize_none();
        }
        RawValue::from_string(sig12(self.0))
            .map_err(S::Error::custom)?
            .serialize(serializer)
    }
}

fn outcome_name(o: Outcome) -> &'static str {
    match o {
        Outcome::Success => "success",
        Outcome::Failure => "failure",
    }
}

fn impulse_name(i: Impulse) -> &'static str {
    match i {
        Impulse::Normal => "normal",
        Impulse::Misattributed => "misattributed",
    }
}

#[derive(Serialize)]
struct TrajectoryHeader<'a> {
    config_fingerprint: &'a str,
    seed: u64,
    rounds: usize,
}

#[derive(Serialize)]
struct JsonRound {
    round_index: u64,
    p0: Sig,
    invest_fraction: Sig,
    p1: Option<Sig>,
    h: Option<Sig>,
    embezzled: Option<bool>,
    investor_outcome: Option<&'static str>,
    manager_outcome: Option<&'static str>,
    investor_impulse: Option<&'static str>,
    manager_impulse: Option<&'static str>,
    investor_counts_after: MemoryCounts,
    manager_counts_after: MemoryCounts,
}

impl From<&RoundRecord> for JsonRound {
    fn from(r: &RoundRecord) -> Self {
        Self {
            round_index: r.round_index,
            p0: Sig(r.p0),
            invest_fraction: Sig(r.invest_fraction.fraction()),
            p1: r.p1.map(Sig),
            h: r.h.map(Sig),
            embezzled: r.embezzled,
            investor_outcome: r.investor_outcome.map(outcome_name),
            manager_outcome: r.manager_outcome.map(outcome_name),
            investor_impulse: r.investor_impulse.map(impulse_name),
            manager_impulse: r.manager_impulse.map(impulse_name),
            investor_counts_after: r.investor_counts_after,
            manager_counts_after: r.manager_counts_after,
        }
    }
}

/// Line-delimited JSON: a header line with the config fingerprint, seed and
/// round count, then one record per round with absent fields as `null`.
pub fn write_trajectory_jsonl<W: Write>(t: &Trajectory, mut out: W) -> io::Result<()> {
    let header = TrajectoryHeader {
        config_fingerprint: &t.config_fingerprint,
        seed: t.seed,
        rounds: t.rounds.len(),
    };
    serde_json::to_writer(&mut out, &header)?;
    out.write_all(b"\n")?;
    for r in &t.rounds {
        serde_json::to_writer(&mut out, &JsonRound::from(r))?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

fn opt<T>(value: Option<T>, f: impl FnOnce(T) -> String) -> String {
    value.map(f).unwrap_or_default()
}

/// CSV with [`TRAJECTORY_COLUMNS`]; absent fields are empty cells.
pub fn write_trajectory_csv<W: Write>(t: &Trajectory, mut out: W) -> io::Result<()> {
    writeln!(out, "{}", TRAJECTORY_COLUMNS.join(","))?;
    for r in &t.rounds {
        let cells = [
            r.round_index.to_string(),
            sig12(r.p0),
            sig12(r.invest_fraction.fraction()),
            opt(r.p1, sig12),
            opt(r.h, sig12),
            opt(r.embezzled, |b| b.to_string()),
            opt(r.investor_outcome, |o| outcome_name(o).to_string()),
            opt(r.manager_outcome, |o| outcome_name(o).to_string()),
            opt(r.investor_impulse, |i| impulse_name(i).to_string()),
            opt(r.manager_impulse, |i| impulse_name(i).to_string()),
            r.investor_counts_after.successes.to_string(),
            r.investor_counts_after.failures.to_string(),
            r.manager_counts_after.successes.to_string(),
            r.manager_counts_after.failures.to_string(),
        ];
        writeln!(out, "{}", cells.join(","))?;
    }
    out.flush()
}

/// CSV with [`SWEEP_COLUMNS`]: one header row and one row per grid point.
/// Absent statistics are empty cells.
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{}", SWEEP_COLUMNS.join(","))?;
    for row in rows {
        let s = &row.stats;
        let cells = [
            row.point_index.to_string(),
            row.parameter.to_string(),
            sig12(row.value),
            sig12(s.mean_p0),
            opt(s.se_p0, sig12),
            sig12(s.mean_p1),
            opt(s.se_p1, sig12),
            sig12(s.invest_rate),
            opt(s.mean_fraction, sig12),
            opt(s.embezzle_rate, sig12),
            opt(s.empirical_success_freq, sig12),
            opt(s.closed_form_confidence, sig12),
        ];
        writeln!(out, "{}", cells.join(","))?;
    }
    out.flush()
}

#[derive(Serialize)]
struct JsonSweepRow {
    point_index: usize,
    parameter: &'static str,
    value: Sig,
    mean_p0: Sig,
    se_p0: Option<Sig>,
    mean_p1: Sig,
    se_p1: Option<Sig>,
    invest_rate: Sig,
    mean_fraction: Option<Sig>,
    embezzle_rate: Option<Sig>,
    empirical_success_freq: Option<Sig>,
    closed_form_confidence: Option<Sig>,
    seed: u64,
    episodes: u64,
    rounds: u64,
    invested_rounds: u64,
    embezzlements: u64,
}

#[derive(Serialize)]
struct JsonSweep {
    standard_error: &'static str,
    rows: Vec<JsonSweepRow>,
}

/// JSON document `{"standard_error": ..., "rows": [...]}`; row keys start
/// with [`SWEEP_COLUMNS`] and add the point seed and raw counts.
pub fn write_sweep_json<W: Write>(rows: &[SweepRow], mut out: W) -> io::Result<()> {
    let doc = JsonSweep {
        standard_error: "normal approximation across replications",
        rows: rows
            .iter()
            .map(|row| {
                let s = &row.stats;
                JsonSweepRow {
                    point_index: row.point_index,
                    parameter: row.parameter,
                    value: Sig(row.value),
                    mean_p0: Sig(s.mean_p0),
                    se_p0: s.se_p0.map(Sig),
                    mean_p1: Sig(s.mean_p1),
                    se_p1: s.se_p1.map(Sig),
                    invest_rate: Sig(s.invest_rate),
                    mean_fraction: s.mean_fraction.map(Sig),
                    embezzle_rate: s.embezzle_rate.map(Sig),
                    empirical_success_freq: s.empirical_success_freq.map(Sig),
                    closed_form_confidence: s.closed_form_confidence.map(Sig),
                    seed: row.seed,
                    episodes: s.episodes,
                    rounds: s.rounds,
                    invested_rounds: s.invested_rounds,
                    embezzlements: s.embezzlements,
                }
            })
            .collect(),
    };
    serde_json::to_writer_pretty(&mut out, &doc)?;
    out.write_all(b"\n")?;
    out.flush()
}

/// One-line description of an episode.
pub fn summary_line(t: &Trajectory, final_p0: f64, final_p1: f64) -> String {
    let invested = t
        .rounds
        .iter()
        .filter(|r| r.invest_fraction.invests())
        .count();
    let embezzled = t
        .rounds
        .iter()
        .filter(|r| r.embezzled == Some(true))
        .count();
    let (investor, manager) = t.final_counts().unwrap_or_default();
    format!(
        "rounds={} invested={} embezzled={} final_p0={} final_p1={} investor_counts=({},{}) manager_counts=({},{})",
        t.rounds.len(),
        invested,
        embezzled,
        sig12(final_p0),
        sig12(final_p1),
        investor.successes,
        investor.failures,
        manager.successes,
        manager.failures,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig12(0.75), "0.750000000000");
        assert_eq!(sig12(0.6 / 0.8), "0.750000000000");
        assert_eq!(sig12(1.0), "1.00000000000");
        assert_eq!(sig12(2.0 / 3.0), "0.666666666667");
        assert_eq!(sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(sig12(0.0), "0.00000000000");
        assert_eq!(sig12(-0.0), "0.00000000000");
        assert_eq!(sig12(123.456), "123.456000000");
        assert_eq!(sig12(1.1107e-4), "0.000111070000000");
        assert_eq!(sig12(3.0e-7), "3.00000000000e-7");
        assert_eq!(sig12(0.99999999999999), "1.00000000000");
    }

    #[test]
    fn sig_serializes_as_number() {
        let s = serde_json::to_string(&[Sig(0.5), Sig(1e-9)]).unwrap();
        assert_eq!(s, "[0.500000000000,1.00000000000e-9]");
        let back: Vec<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, vec![0.5, 1e-9]);
    }
}
