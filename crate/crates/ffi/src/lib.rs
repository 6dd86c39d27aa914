//! C ABI over the `altes` library.
//!
//! Every fallible function returns an [`AltesStatus`]; on failure the message for the most
//! recent error on the calling thread is available from [`altes_last_error_message`].
//! Handles are created by `*_new` style functions and released with the matching
//! `*_free`. Output buffers are caller-owned; a buffer that is too short yields
//! `ALTES_STATUS_BUFFER_TOO_SMALL` and nothing is written.

use altes::chirplet::{classic_to_modern, spectrum_to_time, synth_spectrum, ChirpletParams, ClassicAltesParams};
use altes::properties::{analytic_admissibility, analytic_energy};
use altes::sweep::fft_size_advisor;
use altes::transform::{hct, morlet_cwt, Scalogram};
use altes::{AltesError, AnalyticSignal};
use num_complex::Complex64;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AltesStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    SingularChirpRate = 3,
    InvalidLength = 4,
    Localization = 5,
    DegenerateScale = 6,
    EmptyInput = 7,
    TransformTooLarge = 8,
    BufferTooSmall = 9,
    Io = 10,
    Panic = 11,
}

/// Complex sample, layout-compatible with `double[2]`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AltesComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for AltesComplex {
    fn from(c: Complex64) -> Self {
        Self { re: c.re, im: c.im }
    }
}

/// Derived quantities of a chirplet.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AltesChirpletInfo {
    pub omega0: f64,
    pub omega_c: f64,
    pub lambda: f64,
    pub kc_level: f64,
    pub kappa_c: f64,
    pub bandwidth: f64,
    pub lower_cutoff: f64,
    pub intrinsic_k: f64,
    pub energy: f64,
    pub admissibility_constant: f64,
}

/// Opaque chirplet parameter set.
pub struct AltesChirplet {
    params: ChirpletParams,
}

/// Opaque transform result, `n_scales` rows of `n_shifts` coefficients.
pub struct AltesScalogram {
    inner: Scalogram,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Fail(AltesStatus, String);

impl From<AltesError> for Fail {
    fn from(e: AltesError) -> Self {
        let status = match &e {
            AltesError::InvalidParameter(_) | AltesError::Domain(_) => AltesStatus::InvalidParameter,
            AltesError::SingularChirpRate => AltesStatus::SingularChirpRate,
            AltesError::InvalidLength(_) => AltesStatus::InvalidLength,
            AltesError::Localization(_) => AltesStatus::Localization,
            AltesError::DegenerateScale { .. } => AltesStatus::DegenerateScale,
            AltesError::Empty(_) => AltesStatus::EmptyInput,
            AltesError::TransformTooLarge { .. } => AltesStatus::TransformTooLarge,
            AltesError::Format(_) | AltesError::Io(_) | AltesError::Json(_) | AltesError::Csv(_) => AltesStatus::Io,
        };
        Fail(status, e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(AltesStatus::NullPointer, format!("{what} is null"))
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> AltesStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AltesStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            AltesStatus::Panic
        }
    }
}

unsafe fn input<'a, T>(ptr: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

unsafe fn output<'a, T>(ptr: *mut T, len: usize, needed: usize, what: &str) -> Result<&'a mut [T], Fail> {
    if len < needed {
        return Err(Fail(
            AltesStatus::BufferTooSmall,
            format!("{what} holds {len} elements, {needed} needed"),
        ));
    }
    if needed == 0 {
        return Ok(&mut []);
    }
    if ptr.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts_mut(ptr, needed))
}

unsafe fn handle<'a, T>(ptr: *const T, what: &str) -> Result<&'a T, Fail> {
    ptr.as_ref().ok_or_else(|| null(what))
}

unsafe fn emit<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output handle pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn altes_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn altes_status_message(status: AltesStatus) -> *const c_char {
    let s: &'static CStr = match status {
        AltesStatus::Ok => c"ok",
        AltesStatus::NullPointer => c"null pointer argument",
        AltesStatus::InvalidParameter => c"invalid parameter",
        AltesStatus::SingularChirpRate => c"chirp rate lambda = 1 is singular",
        AltesStatus::InvalidLength => c"invalid length",
        AltesStatus::Localization => c"localization failed",
        AltesStatus::DegenerateScale => c"scale too small for the transform length",
        AltesStatus::EmptyInput => c"empty input",
        AltesStatus::TransformTooLarge => c"waveform exceeds the largest transform size",
        AltesStatus::BufferTooSmall => c"output buffer too small",
        AltesStatus::Io => c"format or i/o error",
        AltesStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}

/// Copies the last error message of this thread into `buf` (truncated, always
/// NUL-terminated when `len > 0`). Returns the full message length plus one, or 0 when no
/// error has been recorded.
///
/// # Safety
/// `buf` must be valid for `len` bytes or null with `len == 0`.
#[no_mangle]
pub unsafe extern "C" fn altes_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        let bytes = msg.as_bytes_with_nul();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len);
            std::ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buf, n);
            *buf.add(n - 1) = 0;
        }
        bytes.len()
    })
}

/// Chirplet from center frequency, upper cutoff and chirp rate at the default -40 dB level.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn altes_chirplet_new(
    omega0: f64,
    omega_c: f64,
    lambda: f64,
    out: *mut *mut AltesChirplet,
) -> AltesStatus {
    guard(|| {
        let params = ChirpletParams::new(omega0, omega_c, lambda)?;
        emit(out, AltesChirplet { params })
    })
}

/// Like [`altes_chirplet_new`] with an explicit cutoff level `kc_level` in `(0, 1)`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn altes_chirplet_new_with_level(
    omega0: f64,
    omega_c: f64,
    lambda: f64,
    kc_level: f64,
    out: *mut *mut AltesChirplet,
) -> AltesStatus {
    guard(|| {
        let params = ChirpletParams::with_level(omega0, omega_c, lambda, kc_level)?;
        emit(out, AltesChirplet { params })
    })
}

/// Chirplet from the classic `{nu, k, c}` parameters.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn altes_chirplet_from_classic(
    nu: f64,
    k: f64,
    c: f64,
    kc_level: f64,
    out: *mut *mut AltesChirplet,
) -> AltesStatus {
    guard(|| {
        let params = classic_to_modern(&ClassicAltesParams::new(nu, k, c)?, kc_level)?;
        emit(out, AltesChirplet { params })
    })
}

/// Releases a chirplet; null is ignored.
///
/// # Safety
/// `chirplet` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn altes_chirplet_free(chirplet: *mut AltesChirplet) {
    if !chirplet.is_null() {
        drop(Box::from_raw(chirplet));
    }
}

/// # Safety
/// `chirplet` must be a live handle and `info` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn altes_chirplet_info(
    chirplet: *const AltesChirplet,
    info: *mut AltesChirpletInfo,
) -> AltesStatus {
    guard(|| {
        let p = &handle(chirplet, "chirplet")?.params;
        let info = info.as_mut().ok_or_else(|| null("info"))?;
        *info = AltesChirpletInfo {
            omega0: p.omega0(),
            omega_c: p.omega_c(),
            lambda: p.lambda(),
            kc_level: p.kc_level(),
            kappa_c: p.kappa_c(),
            bandwidth: p.bandwidth(),
            lower_cutoff: p.lower_cutoff(),
            intrinsic_k: p.intrinsic_k(),
            energy: analytic_energy(p),
            admissibility_constant: analytic_admissibility(p),
        };
        Ok(())
    })
}

/// Frequency response at `omega`; zero for `omega <= 0`.
///
/// # Safety
/// `chirplet` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn altes_chirplet_response(
    chirplet: *const AltesChirplet,
    omega: f64,
    out: *mut AltesComplex,
) -> AltesStatus {
    guard(|| {
        let p = &handle(chirplet, "chirplet")?.params;
        *out.as_mut().ok_or_else(|| null("out"))? = p.response(omega).into();
        Ok(())
    })
}

/// One-sided spectrum on `[0, pi]`: writes `n_fft / 2 + 1` bins.
///
/// # Safety
/// `out` must be valid for `out_len` elements.
#[no_mangle]
pub unsafe extern "C" fn altes_chirplet_spectrum(
    chirplet: *const AltesChirplet,
    n_fft: usize,
    out: *mut AltesComplex,
    out_len: usize,
) -> AltesStatus {
    guard(|| {
        let p = &handle(chirplet, "chirplet")?.params;
        let s = synth_spectrum(p, n_fft)?;
        let dst = output(out, out_len, s.values.len(), "out")?;
        for (d, v) in dst.iter_mut().zip(&s.values) {
            *d = (*v).into();
        }
        Ok(())
    })
}

/// Analytic time series of length `n_fft`, envelope peak near sample 0 (circular).
///
/// # Safety
/// `out` must be valid for `out_len` elements.
#[no_mangle]
pub unsafe extern "C" fn altes_chirplet_time(
    chirplet: *const AltesChirplet,
    n_fft: usize,
    out: *mut AltesComplex,
    out_len: usize,
) -> AltesStatus {
    guard(|| {
        let p = &handle(chirplet, "chirplet")?.params;
        let sig = spectrum_to_time(&synth_spectrum(p, n_fft)?);
        let dst = output(out, out_len, sig.len(), "out")?;
        for (d, v) in dst.iter_mut().zip(&sig.samples) {
            *d = (*v).into();
        }
        Ok(())
    })
}

/// Smallest power-of-two transform holding the chirplet's -K_c delay spread.
///
/// # Safety
/// `chirplet` must be a live handle and `n_fft` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn altes_chirplet_advised_fft_size(
    chirplet: *const AltesChirplet,
    n_fft: *mut usize,
) -> AltesStatus {
    guard(|| {
        let p = &handle(chirplet, "chirplet")?.params;
        *n_fft.as_mut().ok_or_else(|| null("n_fft"))? = fft_size_advisor(p)?;
        Ok(())
    })
}

unsafe fn signal_from(signal: *const AltesComplex, len: usize) -> Result<AnalyticSignal, Fail> {
    let s = input(signal, len, "signal")?;
    Ok(AnalyticSignal::new(
        s.iter().map(|c| Complex64::new(c.re, c.im)).collect(),
    ))
}

/// Hyperbolic chirplet transform of a power-of-two length analytic signal over
/// strictly increasing positive scales.
///
/// # Safety
/// `signal` and `scales` must be valid for their lengths; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn altes_hct(
    chirplet: *const AltesChirplet,
    signal: *const AltesComplex,
    signal_len: usize,
    scales: *const f64,
    n_scales: usize,
    out: *mut *mut AltesScalogram,
) -> AltesStatus {
    guard(|| {
        let p = &handle(chirplet, "chirplet")?.params;
        let sig = signal_from(signal, signal_len)?;
        let inner = hct(&sig, p, input(scales, n_scales, "scales")?)?;
        emit(out, AltesScalogram { inner })
    })
}

/// Morlet continuous wavelet transform with center frequency `center` in `(0, pi)`.
///
/// # Safety
/// `signal` and `scales` must be valid for their lengths; `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn altes_morlet_cwt(
    center: f64,
    signal: *const AltesComplex,
    signal_len: usize,
    scales: *const f64,
    n_scales: usize,
    out: *mut *mut AltesScalogram,
) -> AltesStatus {
    guard(|| {
        let sig = signal_from(signal, signal_len)?;
        let inner = morlet_cwt(&sig, center, input(scales, n_scales, "scales")?)?;
        emit(out, AltesScalogram { inner })
    })
}

/// Releases a scalogram; null is ignored.
///
/// # Safety
/// `scalogram` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn altes_scalogram_free(scalogram: *mut AltesScalogram) {
    if !scalogram.is_null() {
        drop(Box::from_raw(scalogram));
    }
}

/// # Safety
/// `scalogram` must be a live handle; `n_scales` and `n_shifts` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn altes_scalogram_dims(
    scalogram: *const AltesScalogram,
    n_scales: *mut usize,
    n_shifts: *mut usize,
) -> AltesStatus {
    guard(|| {
        let sc = &handle(scalogram, "scalogram")?.inner;
        *n_scales.as_mut().ok_or_else(|| null("n_scales"))? = sc.n_scales();
        *n_shifts.as_mut().ok_or_else(|| null("n_shifts"))? = sc.n_shifts();
        Ok(())
    })
}

/// Coefficients in row-major order, one row per scale.
///
/// # Safety
/// `out` must be valid for `out_len` elements.
#[no_mangle]
pub unsafe extern "C" fn altes_scalogram_coefficients(
    scalogram: *const AltesScalogram,
    out: *mut AltesComplex,
    out_len: usize,
) -> AltesStatus {
    guard(|| {
        let sc = &handle(scalogram, "scalogram")?.inner;
        let dst = output(out, out_len, sc.n_scales() * sc.n_shifts(), "out")?;
        for (d, v) in dst.iter_mut().zip(sc.coefficients.iter().flatten()) {
            *d = (*v).into();
        }
        Ok(())
    })
}

/// Coefficient magnitudes in row-major order.
///
/// # Safety
/// `out` must be valid for `out_len` elements.
#[no_mangle]
pub unsafe extern "C" fn altes_scalogram_magnitudes(
    scalogram: *const AltesScalogram,
    out: *mut f64,
    out_len: usize,
) -> AltesStatus {
    guard(|| {
        let sc = &handle(scalogram, "scalogram")?.inner;
        let dst = output(out, out_len, sc.n_scales() * sc.n_shifts(), "out")?;
        for (d, v) in dst.iter_mut().zip(sc.coefficients.iter().flatten()) {
            *d = v.norm();
        }
        Ok(())
    })
}

/// The scales of each row, ascending.
///
/// # Safety
/// `out` must be valid for `out_len` elements.
#[no_mangle]
pub unsafe extern "C" fn altes_scalogram_scales(
    scalogram: *const AltesScalogram,
    out: *mut f64,
    out_len: usize,
) -> AltesStatus {
    guard(|| {
        let sc = &handle(scalogram, "scalogram")?.inner;
        output(out, out_len, sc.scales.len(), "out")?.copy_from_slice(&sc.scales);
        Ok(())
    })
}
