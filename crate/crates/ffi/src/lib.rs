//! C ABI over the ssm2sysml compiler.
//!
//! Models live behind an opaque [`Ssm2SysmlModel`] handle. Every function
//! returns an [`Ssm2SysmlStatus`]; on failure a message is available from
//! [`ssm2sysml_last_error`] until the next call on the same thread. Strings
//! handed out by this library must be released with [`ssm2sysml_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ssm2sysml::conformance;
use ssm2sysml::diagnostic::Diagnostic;
use ssm2sysml::mapper::map_context;
use ssm2sysml::ssm::{parse_ssm, validate_context};
use ssm2sysml::sysml::ast::Package;
use ssm2sysml::sysml::{emit, parse_sysml, ModelIndex};
use ssm2sysml::trace::{self, Direction};

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ssm2SysmlStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The input text does not parse.
    ParseError = 3,
    /// The SSM input parsed but failed validation. The last error holds the
    /// diagnostics as a JSON array.
    InvalidModel = 4,
    /// Mapping or emission failed.
    MappingError = 5,
    /// A named element or view does not exist.
    NotFound = 6,
    /// An internal panic was caught at the boundary.
    Panic = 7,
}

/// Opaque handle to a SysML package.
pub struct Ssm2SysmlModel {
    package: Package,
    file: String,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

type Failure = (Ssm2SysmlStatus, String);

/// Runs `f` with panics and errors translated into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> Ssm2SysmlStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => Ssm2SysmlStatus::Ok,
        Ok(Err((status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            Ssm2SysmlStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err((Ssm2SysmlStatus::NullArgument, format!("`{what}` is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (Ssm2SysmlStatus::InvalidUtf8, format!("`{what}` is not valid UTF-8")))
}

unsafe fn model_arg<'a>(p: *const Ssm2SysmlModel) -> Result<&'a Ssm2SysmlModel, Failure> {
    p.as_ref()
        .ok_or_else(|| (Ssm2SysmlStatus::NullArgument, "`model` is null".to_string()))
}

fn out_arg<T>(p: *mut T) -> Result<(), Failure> {
    if p.is_null() {
        Err((Ssm2SysmlStatus::NullArgument, "output pointer is null".to_string()))
    } else {
        Ok(())
    }
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("nul bytes removed").into_raw()
}

fn diagnostics_json(diags: &[Diagnostic], file: &str) -> String {
    let values: Vec<_> = diags.iter().map(|d| d.to_json(file)).collect();
    serde_json::Value::Array(values).to_string()
}

/// Parses, validates and maps SSM source text into a SysML model.
///
/// # Safety
/// `source` and `file_name` must be null or NUL-terminated strings; `out`
/// must be null or point to writable storage for one handle pointer.
#[no_mangle]
pub unsafe extern "C" fn ssm2sysml_compile(
    source: *const c_char,
    file_name: *const c_char,
    out: *mut *mut Ssm2SysmlModel,
) -> Ssm2SysmlStatus {
    guard(|| {
        out_arg(out)?;
        let src = str_arg(source, "source")?;
        let file = str_arg(file_name, "file_name")?;
        let ctx = parse_ssm(src, file).map_err(|e| (Ssm2SysmlStatus::ParseError, e.to_string()))?;
        let diags = validate_context(&ctx);
        if diags.iter().any(Diagnostic::is_error) {
            return Err((Ssm2SysmlStatus::InvalidModel, diagnostics_json(&diags, file)));
        }
        let (package, _) = map_context(&ctx).map_err(|e| (Ssm2SysmlStatus::MappingError, e.to_string()))?;
        *out = Box::into_raw(Box::new(Ssm2SysmlModel {
            package,
            file: file.to_string(),
        }));
        Ok(())
    })
}

/// Parses SysML source text into a model.
///
/// # Safety
/// Same contract as [`ssm2sysml_compile`].
#[no_mangle]
pub unsafe extern "C" fn ssm2sysml_parse_sysml(
    source: *const c_char,
    file_name: *const c_char,
    out: *mut *mut Ssm2SysmlModel,
) -> Ssm2SysmlStatus {
    guard(|| {
        out_arg(out)?;
        let src = str_arg(source, "source")?;
        let file = str_arg(file_name, "file_name")?;
        let package = parse_sysml(src, file).map_err(|e| (Ssm2SysmlStatus::ParseError, e.to_string()))?;
        *out = Box::into_raw(Box::new(Ssm2SysmlModel {
            package,
            file: file.to_string(),
        }));
        Ok(())
    })
}

/// Writes the canonical SysML text of `model` to `*out`.
///
/// # Safety
/// `model` must be null or a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn ssm2sysml_model_emit(
    model: *const Ssm2SysmlModel,
    out: *mut *mut c_char,
) -> Ssm2SysmlStatus {
    guard(|| {
        out_arg(out)?;
        let m = model_arg(model)?;
        let text = emit(&m.package).map_err(|e| (Ssm2SysmlStatus::MappingError, e.to_string()))?;
        *out = c_string(text);
        Ok(())
    })
}

/// Runs every conformance rule and writes the diagnostics to `*out` as a
/// JSON array. `*error_count` receives the number of error-severity entries.
///
/// # Safety
/// `model` must be null or a live handle; `out` and `error_count` must be
/// null or writable.
#[no_mangle]
pub unsafe extern "C" fn ssm2sysml_model_check_json(
    model: *const Ssm2SysmlModel,
    out: *mut *mut c_char,
    error_count: *mut usize,
) -> Ssm2SysmlStatus {
    guard(|| {
        out_arg(out)?;
        out_arg(error_count)?;
        let m = model_arg(model)?;
        let diags = conformance::check(&m.package);
        *error_count = diags.iter().filter(|d| d.is_error()).count();
        *out = c_string(diagnostics_json(&diags, &m.file));
        Ok(())
    })
}

/// Writes the element paths reachable from `from` to `*out` as a JSON
/// object `{"query", "elements"}`. Follows edges backward when `backward`
/// is nonzero.
///
/// # Safety
/// `model` must be null or a live handle; `from` must be null or a
/// NUL-terminated string; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn ssm2sysml_model_trace_json(
    model: *const Ssm2SysmlModel,
    from: *const c_char,
    backward: i32,
    out: *mut *mut c_char,
) -> Ssm2SysmlStatus {
    guard(|| {
        out_arg(out)?;
        let m = model_arg(model)?;
        let name = str_arg(from, "from")?;
        let idx = ModelIndex::new(&m.package);
        let id = idx
            .find(name)
            .ok_or_else(|| (Ssm2SysmlStatus::NotFound, format!("no element `{name}`")))?;
        let path = idx.path(id).to_string();
        let (dir, flag) = if backward != 0 {
            (Direction::Backward, "--backward")
        } else {
            (Direction::Forward, "--forward")
        };
        let graph = trace::build_graph(&m.package);
        let found = trace::reach(&graph, &path, dir, None).map_err(|e| (Ssm2SysmlStatus::NotFound, e.to_string()))?;
        *out = c_string(trace::query_json(&format!("trace {path} {flag}"), &found).to_string());
        Ok(())
    })
}

/// Writes the elements selected by the named view to `*out` as JSON.
///
/// # Safety
/// Same contract as [`ssm2sysml_model_trace_json`].
#[no_mangle]
pub unsafe extern "C" fn ssm2sysml_model_view_json(
    model: *const Ssm2SysmlModel,
    view: *const c_char,
    out: *mut *mut c_char,
) -> Ssm2SysmlStatus {
    guard(|| {
        out_arg(out)?;
        let m = model_arg(model)?;
        let name = str_arg(view, "view")?;
        let v = trace::render_view(&m.package, name).map_err(|e| (Ssm2SysmlStatus::NotFound, e.to_string()))?;
        *out = c_string(v.to_json().to_string());
        Ok(())
    })
}

/// Releases a model handle. Null is ignored.
///
/// # Safety
/// `model` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ssm2sysml_model_free(model: *mut Ssm2SysmlModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ssm2sysml_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The message for the last failed call on this thread, or null. Owned by
/// the library and valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn ssm2sysml_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ssm2sysml_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn guard_maps_panics() {
        assert_eq!(guard(|| panic!("boom")), Ssm2SysmlStatus::Panic);
        assert!(!ssm2sysml_last_error().is_null());
        assert_eq!(guard(|| Ok(())), Ssm2SysmlStatus::Ok);
        assert!(ssm2sysml_last_error().is_null());
    }

    #[test]
    fn nul_bytes_in_messages_are_replaced() {
        set_last_error("a\0b");
        let s = unsafe { CStr::from_ptr(ssm2sysml_last_error()) };
        assert_eq!(s.to_str().unwrap(), "a b");
    }
}
