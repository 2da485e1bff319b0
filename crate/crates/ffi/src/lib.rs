//! C ABI over `stackne-core`.
//!
//! Games and equilibrium sets are opaque handles owned by the caller and
//! released with the matching `*_free`. Every fallible call returns a
//! [`StackneStatus`]; the message of the last failure on the calling thread is
//! available from [`stackne_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use stackne_core::closeness::hausdorff;
use stackne_core::coincidence::{check_thm1, check_thm2, thm1_holds};
use stackne_core::equilibrium::{solve_ne, solve_se};
use stackne_core::scenarios::{
    apt_condition_eq3, build_apt, build_eavesdrop, build_hetnet, build_synthetic, AptParams,
    EavesdropParams, HetNetParams, SyntheticParams,
};
use stackne_core::{EquilibriumSet, Error, GameDefinition, NeighborhoodSpec, Profile, SolverConfig};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StackneStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParams = 2,
    Domain = 3,
    Numeric = 4,
    Precondition = 5,
    OutOfRange = 6,
    Panic = 7,
}

/// Opaque game handle.
pub struct StackneGame(GameDefinition);

/// Opaque equilibrium-set handle.
pub struct StackneSet(EquilibriumSet);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StackneProfile {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// Solver knobs; get the defaults from [`stackne_solver_config_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StackneSolverConfig {
    pub grid_points_per_axis: usize,
    pub refine_iterations: usize,
    pub value_tol: f64,
    pub arg_tol: f64,
    pub tie_tol: f64,
    pub fd_step: f64,
    pub eps_equilibrium: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> StackneStatus {
    match e {
        Error::Domain(_) => StackneStatus::Domain,
        Error::Numeric(_) => StackneStatus::Numeric,
        Error::Precondition(_) => StackneStatus::Precondition,
        Error::InvalidParams(_) => StackneStatus::InvalidParams,
    }
}

fn guard<F: FnOnce() -> Result<(), StackneStatus>>(f: F) -> StackneStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => StackneStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside stackne".into());
            StackneStatus::Panic
        }
    }
}

fn check<T>(r: stackne_core::Result<T>) -> Result<T, StackneStatus> {
    r.map_err(|e| {
        let s = status_of(&e);
        set_error(e.to_string());
        s
    })
}

fn non_null<T>(p: *const T, what: &str) -> Result<(), StackneStatus> {
    if p.is_null() {
        set_error(format!("{what} is null"));
        return Err(StackneStatus::NullPointer);
    }
    Ok(())
}

unsafe fn solver(cfg: *const StackneSolverConfig) -> SolverConfig {
    let mut out = SolverConfig::default();
    if let Some(c) = cfg.as_ref() {
        out.grid_points_per_axis = c.grid_points_per_axis;
        out.refine_iterations = c.refine_iterations;
        out.value_tol = c.value_tol;
        out.arg_tol = c.arg_tol;
        out.tie_tol = c.tie_tol;
        out.fd_step = c.fd_step;
        out.eps_equilibrium = c.eps_equilibrium;
    }
    out
}

/// Message of the last failure on this thread, or null. Valid until the next
/// failing call on the same thread.
#[no_mangle]
pub extern "C" fn stackne_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `out` must be null or point to writable memory.
#[no_mangle]
pub unsafe extern "C" fn stackne_solver_config_default(out: *mut StackneSolverConfig) -> StackneStatus {
    guard(|| {
        non_null(out, "out")?;
        let d = SolverConfig::default();
        *out = StackneSolverConfig {
            grid_points_per_axis: d.grid_points_per_axis,
            refine_iterations: d.refine_iterations,
            value_tol: d.value_tol,
            arg_tol: d.arg_tol,
            tie_tol: d.tie_tol,
            fd_step: d.fd_step,
            eps_equilibrium: d.eps_equilibrium,
        };
        Ok(())
    })
}

unsafe fn emit_game(out: *mut *mut StackneGame, g: stackne_core::Result<GameDefinition>) -> Result<(), StackneStatus> {
    non_null(out, "out")?;
    let g = check(g)?;
    *out = Box::into_raw(Box::new(StackneGame(g)));
    Ok(())
}

/// APT game on the default box `x∈[0.05,1], y∈[0,rho], z∈[0.2,2]`.
///
/// # Safety
/// `out` must be null or point to writable memory.
#[no_mangle]
pub unsafe extern "C" fn stackne_game_apt(c_a: f64, c_d: f64, rho: f64, out: *mut *mut StackneGame) -> StackneStatus {
    guard(|| emit_game(out, AptParams::new(c_a, c_d, rho).and_then(|p| build_apt(&p))))
}

/// Relay/eavesdropper game with the default preset and the given relay gain.
///
/// # Safety
/// `out` must be null or point to writable memory.
#[no_mangle]
pub unsafe extern "C" fn stackne_game_eavesdrop(h_rd_sq: f64, out: *mut *mut StackneGame) -> StackneStatus {
    guard(|| emit_game(out, EavesdropParams::preset(h_rd_sq).and_then(|p| build_eavesdrop(&p))))
}

/// Heterogeneous-network game with the default preset.
///
/// # Safety
/// `out` must be null or point to writable memory.
#[no_mangle]
pub unsafe extern "C" fn stackne_game_hetnet(lambda_j: f64, p_m_dbm: f64, out: *mut *mut StackneGame) -> StackneStatus {
    guard(|| emit_game(out, HetNetParams::preset(lambda_j, p_m_dbm).and_then(|p| build_hetnet(&p))))
}

/// Quadratic strongly concave test game on the unit box.
///
/// # Safety
/// `out` must be null or point to writable memory.
#[no_mangle]
pub unsafe extern "C" fn stackne_game_synthetic(a: f64, b: f64, c: f64, d: f64, out: *mut *mut StackneGame) -> StackneStatus {
    guard(|| {
        let p = SyntheticParams { a, b, c, d, ..SyntheticParams::default() };
        emit_game(out, build_synthetic(&p))
    })
}

/// # Safety
/// `game` must be null or a handle from a `stackne_game_*` constructor, freed once.
#[no_mangle]
pub unsafe extern "C" fn stackne_game_free(game: *mut StackneGame) {
    if !game.is_null() {
        drop(Box::from_raw(game));
    }
}

/// Utilities `[U_X, U_Y, U_Z]` at a profile.
///
/// # Safety
/// `game` must be a live handle; `out` must hold three doubles.
#[no_mangle]
pub unsafe extern "C" fn stackne_game_evaluate(game: *const StackneGame, p: StackneProfile, out: *mut f64) -> StackneStatus {
    guard(|| {
        non_null(game, "game")?;
        non_null(out, "out")?;
        let u = check((*game).0.evaluate(&Profile::new(p.x, p.y, p.z)))?;
        *out = u.x;
        *out.add(1) = u.y;
        *out.add(2) = u.z;
        Ok(())
    })
}

unsafe fn emit_set(out: *mut *mut StackneSet, s: stackne_core::Result<EquilibriumSet>) -> Result<(), StackneStatus> {
    non_null(out, "out")?;
    let s = check(s)?;
    *out = Box::into_raw(Box::new(StackneSet(s)));
    Ok(())
}

/// # Safety
/// `game` must be a live handle; `cfg` null (defaults) or valid; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn stackne_solve_se(
    game: *const StackneGame,
    cfg: *const StackneSolverConfig,
    out: *mut *mut StackneSet,
) -> StackneStatus {
    guard(|| {
        non_null(game, "game")?;
        emit_set(out, solve_se(&(*game).0, &solver(cfg)))
    })
}

/// # Safety
/// `game` must be a live handle; `cfg` null (defaults) or valid; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn stackne_solve_ne(
    game: *const StackneGame,
    cfg: *const StackneSolverConfig,
    out: *mut *mut StackneSet,
) -> StackneStatus {
    guard(|| {
        non_null(game, "game")?;
        emit_set(out, solve_ne(&(*game).0, &solver(cfg)))
    })
}

/// # Safety
/// `set` must be null or a handle from a solver, freed once.
#[no_mangle]
pub unsafe extern "C" fn stackne_set_free(set: *mut StackneSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Number of clustered profiles; 0 for a null handle.
///
/// # Safety
/// `set` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn stackne_set_len(set: *const StackneSet) -> usize {
    set.as_ref().map_or(0, |s| s.0.len())
}

/// # Safety
/// `set` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn stackne_set_profile(set: *const StackneSet, index: usize, out: *mut StackneProfile) -> StackneStatus {
    guard(|| {
        non_null(set, "set")?;
        non_null(out, "out")?;
        let s = &*set;
        let Some(p) = s.0.profiles.get(index) else {
            set_error(format!("index {index} out of range"));
            return Err(StackneStatus::OutOfRange);
        };
        *out = StackneProfile { x: p.x, y: p.y, z: p.z };
        Ok(())
    })
}

/// Whether every SE in `se` is an NE, with the default neighborhood search.
///
/// # Safety
/// Handles must be live, `se` from [`stackne_solve_se`] on `game`; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn stackne_check_thm1(
    game: *const StackneGame,
    se: *const StackneSet,
    cfg: *const StackneSolverConfig,
    out: *mut bool,
) -> StackneStatus {
    guard(|| {
        non_null(game, "game")?;
        non_null(se, "se")?;
        non_null(out, "out")?;
        let r = check(check_thm1(&(*game).0, &(*se).0, &NeighborhoodSpec::default(), &solver(cfg)))?;
        *out = thm1_holds(&r);
        Ok(())
    })
}

/// Whether some SE in `se` is an NE.
///
/// # Safety
/// Handles must be live, `se` from [`stackne_solve_se`] on `game`; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn stackne_check_thm2(
    game: *const StackneGame,
    se: *const StackneSet,
    cfg: *const StackneSolverConfig,
    out: *mut bool,
) -> StackneStatus {
    guard(|| {
        non_null(game, "game")?;
        non_null(se, "se")?;
        non_null(out, "out")?;
        let r = check(check_thm2(&(*game).0, &(*se).0, &NeighborhoodSpec::default(), &solver(cfg)))?;
        *out = r.exists;
        Ok(())
    })
}

/// Hausdorff distance between two equilibrium sets.
///
/// # Safety
/// Handles must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn stackne_hausdorff(a: *const StackneSet, b: *const StackneSet, out: *mut f64) -> StackneStatus {
    guard(|| {
        non_null(a, "a")?;
        non_null(b, "b")?;
        non_null(out, "out")?;
        *out = check(hausdorff(&(*a).0.profiles, &(*b).0.profiles))?;
        Ok(())
    })
}

/// The closed-form APT coincidence condition on the default box.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn stackne_apt_condition(c_a: f64, c_d: f64, rho: f64, out: *mut bool) -> StackneStatus {
    guard(|| {
        non_null(out, "out")?;
        let p = check(AptParams::new(c_a, c_d, rho))?;
        *out = check(apt_condition_eq3(&p))?;
        Ok(())
    })
}
