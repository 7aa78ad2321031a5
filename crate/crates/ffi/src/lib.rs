//! C interface to the psyrisk engine.
//!
//! Objects are opaque handles created and released through this API. Every
//! fallible function returns a [`PsyriskStatus`]; on failure a message is
//! available from [`psyrisk_last_error`] on the calling thread. Panics never
//! cross the boundary: they are reported as `PSYRISK_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fs::File;
use std::io::BufWriter;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use psyrisk::config::RunConfig;
use psyrisk::engine::{run_episode, Trajectory};
use psyrisk::montecarlo::run_replications;
use psyrisk::perception::{
    asymptotic_confidence, default_recollection, Impulse, Outcome, PerceptionMatrix,
    TrueFrequencies,
};
use psyrisk::{belief::BeliefParams, output, Error};

/// Result of a call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsyriskStatus {
    Ok = 0,
    NullPointer = 1,
    /// Invalid configuration or parameter value.
    Config = 2,
    /// Degenerate model or missing data.
    Runtime = 3,
    Io = 4,
    /// Malformed argument, such as an index out of bounds or bad UTF-8.
    InvalidArgument = 5,
    Panic = 6,
}

/// Run configuration.
pub struct PsyriskConfig {
    inner: RunConfig,
}

/// Rounds of one simulated episode.
pub struct PsyriskTrajectory {
    inner: Trajectory,
}

/// One round. Reals that do not apply are NaN; tri-state fields are -1 when
/// absent. Outcomes are 1 for success and 0 for failure; impulses are 0 for
/// normal and 1 for misattributed.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsyriskRound {
    pub round_index: u64,
    pub p0: f64,
    pub invest_fraction: f64,
    pub p1: f64,
    pub h: f64,
    pub embezzled: i8,
    pub investor_outcome: i8,
    pub manager_outcome: i8,
    pub investor_impulse: i8,
    pub manager_impulse: i8,
    pub investor_successes: u64,
    pub investor_failures: u64,
    pub manager_successes: u64,
    pub manager_failures: u64,
}

/// Aggregate over replications. Statistics that do not apply are NaN.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsyriskAggregate {
    pub episodes: u64,
    pub rounds: u64,
    pub invested_rounds: u64,
    pub embezzlements: u64,
    pub mean_p0: f64,
    pub se_p0: f64,
    pub mean_p1: f64,
    pub se_p1: f64,
    pub invest_rate: f64,
    pub mean_fraction: f64,
    pub embezzle_rate: f64,
    pub empirical_success_freq: f64,
    pub closed_form_confidence: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

struct Failure(PsyriskStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::OutOfRange { .. } | Error::Config(_) => PsyriskStatus::Config,
            Error::Degenerate(_) | Error::NoData(_) => PsyriskStatus::Runtime,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(PsyriskStatus::NullPointer, format!("{what} is null"))
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> PsyriskStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => PsyriskStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            set_last_error(format!("panic: {message}"));
            PsyriskStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        Failure(
            PsyriskStatus::InvalidArgument,
            format!("{what} is not UTF-8"),
        )
    })
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

/// Message of the last failed call on this thread, or null if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn psyrisk_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn psyrisk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Built-in default configuration.
///
/// # Safety
/// `out` must be valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn psyrisk_config_default(out: *mut *mut PsyriskConfig) -> PsyriskStatus {
    guard(|| {
        let handle = Box::new(PsyriskConfig {
            inner: RunConfig::default(),
        });
        write_out(out, Box::into_raw(handle), "out")
    })
}

/// Parses and validates a TOML configuration.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn psyrisk_config_from_toml(
    text: *const c_char,
    out: *mut *mut PsyriskConfig,
) -> PsyriskStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = RunConfig::from_toml_str(read_str(text, "text")?)?;
        write_out(out, Box::into_raw(Box::new(PsyriskConfig { inner })), "out")
    })
}

/// Releases a configuration. Null is ignored.
///
/// # Safety
/// `config` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn psyrisk_config_free(config: *mut PsyriskConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// Seed stored in the configuration.
///
/// # Safety
/// `config` must be a live handle; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn psyrisk_config_seed(
    config: *const PsyriskConfig,
    out: *mut u64,
) -> PsyriskStatus {
    guard(|| {
        let config = config.as_ref().ok_or_else(|| null("config"))?;
        write_out(out, config.inner.simulation.seed, "out")
    })
}

/// Plays one episode of `config` with `seed`.
///
/// # Safety
/// `config` must be a live handle; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn psyrisk_simulate(
    config: *const PsyriskConfig,
    seed: u64,
    out: *mut *mut PsyriskTrajectory,
) -> PsyriskStatus {
    guard(|| {
        let config = config.as_ref().ok_or_else(|| null("config"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = run_episode(&config.inner.to_episode()?, seed)?;
        write_out(
            out,
            Box::into_raw(Box::new(PsyriskTrajectory { inner })),
            "out",
        )
    })
}

/// Number of rounds, or 0 for null.
///
/// # Safety
/// `trajectory` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn psyrisk_trajectory_len(trajectory: *const PsyriskTrajectory) -> usize {
    trajectory.as_ref().map_or(0, |t| t.inner.rounds.len())
}

fn outcome_code(o: Option<Outcome>) -> i8 {
    match o {
        None => -1,
        Some(Outcome::Failure) => 0,
        Some(Outcome::Success) => 1,
    }
}

fn impulse_code(i: Option<Impulse>) -> i8 {
    match i {
        None => -1,
        Some(Impulse::Normal) => 0,
        Some(Impulse::Misattributed) => 1,
    }
}

/// Copies round `index` into `out`.
///
/// # Safety
/// `trajectory` must be a live handle; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn psyrisk_trajectory_round(
    trajectory: *const PsyriskTrajectory,
    index: usize,
    out: *mut PsyriskRound,
) -> PsyriskStatus {
    guard(|| {
        let t = trajectory.as_ref().ok_or_else(|| null("trajectory"))?;
        let r = t.inner.rounds.get(index).ok_or_else(|| {
            Failure(
                PsyriskStatus::InvalidArgument,
                format!("round {index} out of {}", t.inner.rounds.len()),
            )
        })?;
        let round = PsyriskRound {
            round_index: r.round_index,
            p0: r.p0,
            invest_fraction: r.invest_fraction.fraction(),
            p1: r.p1.unwrap_or(f64::NAN),
            h: r.h.unwrap_or(f64::NAN),
            embezzled: r.embezzled.map_or(-1, i8::from),
            investor_outcome: outcome_code(r.investor_outcome),
            manager_outcome: outcome_code(r.manager_outcome),
            investor_impulse: impulse_code(r.investor_impulse),
            manager_impulse: impulse_code(r.manager_impulse),
            investor_successes: r.investor_counts_after.successes,
            investor_failures: r.investor_counts_after.failures,
            manager_successes: r.manager_counts_after.successes,
            manager_failures: r.manager_counts_after.failures,
        };
        write_out(out, round, "out")
    })
}

/// Writes the trajectory as line-delimited JSON to `path`.
///
/// # Safety
/// `trajectory` must be a live handle; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn psyrisk_trajectory_write_jsonl(
    trajectory: *const PsyriskTrajectory,
    path: *const c_char,
) -> PsyriskStatus {
    guard(|| {
        let t = trajectory.as_ref().ok_or_else(|| null("trajectory"))?;
        let path = read_str(path, "path")?;
        let io = |e: std::io::Error| Failure(PsyriskStatus::Io, format!("writing {path}: {e}"));
        let file = File::create(path).map_err(io)?;
        output::write_trajectory_jsonl(&t.inner, BufWriter::new(file)).map_err(io)
    })
}

/// Releases a trajectory. Null is ignored.
///
/// # Safety
/// `trajectory` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn psyrisk_trajectory_free(trajectory: *mut PsyriskTrajectory) {
    if !trajectory.is_null() {
        drop(Box::from_raw(trajectory));
    }
}

/// Confidence after `successes` and `failures` recalled experiences.
///
/// # Safety
/// `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn psyrisk_confidence(
    successes: f64,
    failures: f64,
    prior_success: f64,
    prior_failure: f64,
    out: *mut f64,
) -> PsyriskStatus {
    guard(|| {
        let params = BeliefParams::new(prior_success, prior_failure)?;
        write_out(out, params.confidence_at(successes, failures)?, "out")
    })
}

/// Long-run confidence with distortion `gamma`, true success frequency
/// `p_success` and the default recollection process.
///
/// # Safety
/// `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn psyrisk_asymptotic_confidence(
    gamma: f64,
    p_success: f64,
    out: *mut f64,
) -> PsyriskStatus {
    guard(|| {
        let matrix = PerceptionMatrix::new(gamma)?;
        let freq = TrueFrequencies::new(p_success)?;
        let value = asymptotic_confidence(&matrix, &default_recollection(), &freq)?;
        write_out(out, value, "out")
    })
}

/// Runs `replications` episodes of `config` from `base_seed`.
///
/// # Safety
/// `config` must be a live handle; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn psyrisk_run_replications(
    config: *const PsyriskConfig,
    replications: u64,
    base_seed: u64,
    out: *mut PsyriskAggregate,
) -> PsyriskStatus {
    guard(|| {
        let config = config.as_ref().ok_or_else(|| null("config"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let episode = config.inner.to_episode()?;
        let s = run_replications(&episode, replications, base_seed)?;
        let nan = |x: Option<f64>| x.unwrap_or(f64::NAN);
        let aggregate = PsyriskAggregate {
            episodes: s.episodes,
            rounds: s.rounds,
            invested_rounds: s.invested_rounds,
            embezzlements: s.embezzlements,
            mean_p0: s.mean_p0,
            se_p0: nan(s.se_p0),
            mean_p1: s.mean_p1,
            se_p1: nan(s.se_p1),
            invest_rate: s.invest_rate,
            mean_fraction: nan(s.mean_fraction),
            embezzle_rate: nan(s.embezzle_rate),
            empirical_success_freq: nan(s.empirical_success_freq),
            closed_form_confidence: nan(s.closed_form_confidence),
        };
        write_out(out, aggregate, "out")
    })
}
