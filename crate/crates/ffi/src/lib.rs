//! C ABI over the `hyperalloc` allocators.
//!
//! Handles are opaque and owned by the caller once returned; release them
//! with the matching `*_free` function. Every fallible call returns an
//! [`HaStatus`]; on failure a message is available from
//! [`ha_last_error_message`] on the same thread until the next failing
//! call.
//!
//! Channel buffers use one `int64_t` per vertex (cellular UEs first, then
//! D2D pairs) with `-1` for an unallocated vertex.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hyperalloc::evaluator::{brute_force_optimal, cell_capacity};
use hyperalloc::harness::trial_gains;
use hyperalloc::rng::{self, Purpose};
use hyperalloc::{conflict_graph, hypergraph_alloc, Allocation, Error, LinkGains, SimConfig};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidConfig = 2,
    InvalidArgument = 3,
    BufferTooSmall = 4,
    TooLarge = 5,
    ConstraintViolation = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HaAlgorithm {
    Graph = 0,
    Hypergraph = 1,
    Optimal = 2,
}

/// Simulation parameters.
pub struct HaConfig {
    inner: SimConfig,
}

/// One drop: positions and fading for a trial index under a config.
pub struct HaTrial {
    config: SimConfig,
    trial_index: u64,
    gains: LinkGains,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: HaStatus, msg: impl Into<String>) -> HaStatus {
    set_error(msg);
    status
}

fn status_of(e: &Error) -> HaStatus {
    match e {
        Error::InvalidConfig(_) | Error::Json(_) | Error::Parse(_) => HaStatus::InvalidConfig,
        Error::InstanceTooLarge { .. } => HaStatus::TooLarge,
        Error::Violation(_) => HaStatus::ConstraintViolation,
        _ => HaStatus::InvalidArgument,
    }
}

fn from_error(e: Error) -> HaStatus {
    fail(status_of(&e), e.to_string())
}

fn guard(f: impl FnOnce() -> HaStatus) -> HaStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(HaStatus::Panic, "internal panic"))
}

/// Last error message on this thread, or NULL. Valid until the next
/// failing call on this thread.
#[no_mangle]
pub extern "C" fn ha_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Default parameters.
#[no_mangle]
pub unsafe extern "C" fn ha_config_default(out: *mut *mut HaConfig) -> HaStatus {
    guard(|| {
        if out.is_null() {
            return fail(HaStatus::NullPointer, "out is null");
        }
        *out = Box::into_raw(Box::new(HaConfig {
            inner: SimConfig::default(),
        }));
        HaStatus::Ok
    })
}

/// Parses a JSON config; absent keys take defaults.
#[no_mangle]
pub unsafe extern "C" fn ha_config_from_json(json: *const c_char, out: *mut *mut HaConfig) -> HaStatus {
    guard(|| {
        if json.is_null() || out.is_null() {
            return fail(HaStatus::NullPointer, "json or out is null");
        }
        let text = match CStr::from_ptr(json).to_str() {
            Ok(t) => t,
            Err(_) => return fail(HaStatus::InvalidConfig, "config is not UTF-8"),
        };
        match SimConfig::from_json_str(text) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(HaConfig { inner }));
                HaStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn ha_config_free(config: *mut HaConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// N + M, or 0 for NULL.
#[no_mangle]
pub unsafe extern "C" fn ha_config_n_vertices(config: *const HaConfig) -> usize {
    config.as_ref().map_or(0, |c| c.inner.n_vertices())
}

/// Draws the drop and fading of trial `trial_index`.
#[no_mangle]
pub unsafe extern "C" fn ha_trial_new(config: *const HaConfig, trial_index: u64, out: *mut *mut HaTrial) -> HaStatus {
    guard(|| {
        let (Some(config), false) = (config.as_ref(), out.is_null()) else {
            return fail(HaStatus::NullPointer, "config or out is null");
        };
        if let Err(e) = config.inner.validate() {
            return from_error(e);
        }
        let gains = trial_gains(&config.inner, trial_index);
        *out = Box::into_raw(Box::new(HaTrial {
            config: config.inner.clone(),
            trial_index,
            gains,
        }));
        HaStatus::Ok
    })
}

#[no_mangle]
pub unsafe extern "C" fn ha_trial_free(trial: *mut HaTrial) {
    if !trial.is_null() {
        drop(Box::from_raw(trial));
    }
}

/// N + M, or 0 for NULL.
#[no_mangle]
pub unsafe extern "C" fn ha_trial_n_vertices(trial: *const HaTrial) -> usize {
    trial.as_ref().map_or(0, |t| t.gains.n_vertices())
}

/// Runs an allocator and writes one channel per vertex into `channels`
/// (`len` must be at least N + M).
#[no_mangle]
pub unsafe extern "C" fn ha_allocate(
    trial: *const HaTrial,
    algorithm: HaAlgorithm,
    channels: *mut i64,
    len: usize,
) -> HaStatus {
    guard(|| {
        let (Some(t), false) = (trial.as_ref(), channels.is_null()) else {
            return fail(HaStatus::NullPointer, "trial or channels is null");
        };
        let v = t.gains.n_vertices();
        if len < v {
            return fail(HaStatus::BufferTooSmall, format!("buffer holds {len}, need {v}"));
        }
        let alloc = match algorithm {
            HaAlgorithm::Graph => {
                let mut r = rng::stream(t.config.master_seed, t.trial_index, Purpose::GraphColoring);
                conflict_graph::allocate(&t.gains, &t.config, &mut r)
            }
            HaAlgorithm::Hypergraph => {
                let mut r = rng::stream(t.config.master_seed, t.trial_index, Purpose::HypergraphColoring);
                hypergraph_alloc::allocate(&t.gains, &t.config, &mut r)
            }
            HaAlgorithm::Optimal => match brute_force_optimal(&t.gains, &t.config) {
                Ok((a, _)) => a,
                Err(e) => return from_error(e),
            },
        };
        let out = std::slice::from_raw_parts_mut(channels, v);
        for (slot, ch) in out.iter_mut().zip(alloc.assignment()) {
            *slot = ch.map_or(-1, |c| c as i64);
        }
        HaStatus::Ok
    })
}

/// Cell capacity in bit/s/Hz of the allocation in `channels`.
#[no_mangle]
pub unsafe extern "C" fn ha_capacity(
    trial: *const HaTrial,
    channels: *const i64,
    len: usize,
    out_capacity: *mut f64,
) -> HaStatus {
    guard(|| {
        let (Some(t), false, false) = (trial.as_ref(), channels.is_null(), out_capacity.is_null()) else {
            return fail(HaStatus::NullPointer, "trial, channels or out_capacity is null");
        };
        let v = t.gains.n_vertices();
        if len != v {
            return fail(HaStatus::InvalidArgument, format!("expected {v} channels, got {len}"));
        }
        let raw = std::slice::from_raw_parts(channels, len);
        let mut assignment = Vec::with_capacity(len);
        for &c in raw {
            match c {
                -1 => assignment.push(None),
                c if c >= 0 => assignment.push(Some(c as usize)),
                _ => return fail(HaStatus::InvalidArgument, format!("bad channel {c}")),
            }
        }
        match cell_capacity(&Allocation::new(t.config.n_cellular, assignment), &t.gains, &t.config) {
            Ok(c) => {
                *out_capacity = c;
                HaStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}
