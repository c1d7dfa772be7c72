//! C ABI over the `ksystem` library.
//!
//! Objects are opaque heap handles created by `*_from_json`, `*_generate`
//! and friends, and released with the matching `*_free`. Every fallible
//! function returns a [`KsStatus`]; on failure `ks_last_error` gives a
//! message for the calling thread. Strings returned through out-pointers
//! are owned by the caller and released with `ks_string_free`.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ksystem::certificate::{
    facets_from_2faces, verify_aof_certificate, verify_face_certificate, verify_larger_system,
    AofCertificate, FaceCertificate, Verdict,
};
use ksystem::format::{
    graph_from_any, graph_to_value, instance_from_value, instance_to_value, orientation_for,
    orientation_to_value, parse_value, set_system_from_value, set_system_to_value,
    to_canonical_string,
};
use ksystem::graph::{hk_sum, indegree_histogram, HkMode, Orientation, PolytopeGraph};
use ksystem::ksystem::{validate_k_system, SetSystem};
use ksystem::oracle::{
    default_weights, faces_from_incidence, generate, geometric_aof, is_aof_oracle, Family, Instance,
};
use ksystem::search::minimize_hk;
use ksystem::Error;
use num_bigint::BigInt;
use num_rational::BigRational;

/// Status code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    FingerprintMismatch = 3,
    KOutOfRange = 4,
    NotAcyclic = 5,
    NotKSystem = 6,
    InconsistentTransport = 7,
    NoCoordinates = 8,
    DegenerateWeights = 9,
    BudgetExceeded = 10,
    BufferTooSmall = 11,
    Panic = 12,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KsVerdict {
    Verified = 0,
    Refuted = 1,
}

pub struct KsGraph(PolytopeGraph);
pub struct KsOrientation(Orientation);
pub struct KsSetSystem(SetSystem);
pub struct KsInstance(Instance);

/// Passed as `k` to request `H = sum h_i 2^i`.
pub const KS_HK_ALL: i32 = -1;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> KsStatus {
    match e {
        Error::FingerprintMismatch { .. } => KsStatus::FingerprintMismatch,
        Error::KOutOfRange { .. } | Error::KMismatch(..) | Error::DimensionTooSmall(_) => {
            KsStatus::KOutOfRange
        }
        Error::NotAcyclic => KsStatus::NotAcyclic,
        Error::NotKSystem(_) | Error::NotCycleSystem(_) => KsStatus::NotKSystem,
        Error::InconsistentTransport { .. } => KsStatus::InconsistentTransport,
        Error::NoCoordinates => KsStatus::NoCoordinates,
        Error::DegenerateWeights(..) => KsStatus::DegenerateWeights,
        Error::BudgetExceeded { .. } | Error::CandidateCapExceeded(_) => KsStatus::BudgetExceeded,
        _ => KsStatus::InvalidInput,
    }
}

enum Fail {
    Null,
    Lib(Error),
    Buffer,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> KsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => KsStatus::Ok,
        Ok(Err(Fail::Null)) => {
            set_error("null pointer argument".into());
            KsStatus::NullPointer
        }
        Ok(Err(Fail::Buffer)) => {
            set_error("output buffer too small".into());
            KsStatus::BufferTooSmall
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            KsStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null)
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null);
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::Lib(Error::Parse("input is not UTF-8".into())))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null);
    }
    out.write(value);
    Ok(())
}

unsafe fn write_handle<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    write_out(out, Box::into_raw(Box::new(value)))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).expect("JSON has no nul bytes");
    write_out(out, c.into_raw())
}

fn verdict(v: Verdict) -> KsVerdict {
    if v.is_verified() {
        KsVerdict::Verified
    } else {
        KsVerdict::Refuted
    }
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ks_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub unsafe extern "C" fn ks_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a graph document (or an instance document's embedded graph).
#[no_mangle]
pub unsafe extern "C" fn ks_graph_from_json(
    json: *const c_char,
    out: *mut *mut KsGraph,
) -> KsStatus {
    guard(|| {
        let g = graph_from_any(&parse_value(read_str(json)?)?)?;
        write_handle(out, KsGraph(g))
    })
}

#[no_mangle]
pub unsafe extern "C" fn ks_graph_to_json(g: *const KsGraph, out: *mut *mut c_char) -> KsStatus {
    guard(|| write_string(out, to_canonical_string(&graph_to_value(&borrow(g)?.0))))
}

#[no_mangle]
pub unsafe extern "C" fn ks_graph_free(g: *mut KsGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

#[no_mangle]
pub unsafe extern "C" fn ks_graph_dim(g: *const KsGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.dim())
}

#[no_mangle]
pub unsafe extern "C" fn ks_graph_vertex_count(g: *const KsGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.vertex_count())
}

#[no_mangle]
pub unsafe extern "C" fn ks_graph_edge_count(g: *const KsGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.edge_count())
}

#[no_mangle]
pub unsafe extern "C" fn ks_graph_fingerprint(
    g: *const KsGraph,
    out: *mut *mut c_char,
) -> KsStatus {
    guard(|| write_string(out, borrow(g)?.0.fingerprint().to_string()))
}

/// Generates an instance from a family spec such as `cube:3`, `fig1` or
/// `product(cube:1,simplex:2)`.
#[no_mangle]
pub unsafe extern "C" fn ks_instance_generate(
    spec: *const c_char,
    out: *mut *mut KsInstance,
) -> KsStatus {
    guard(|| {
        let family: Family = read_str(spec)?.parse()?;
        write_handle(out, KsInstance(generate(&family)?))
    })
}

#[no_mangle]
pub unsafe extern "C" fn ks_instance_from_json(
    json: *const c_char,
    out: *mut *mut KsInstance,
) -> KsStatus {
    guard(|| {
        let inst = instance_from_value(&parse_value(read_str(json)?)?)?;
        write_handle(out, KsInstance(inst))
    })
}

#[no_mangle]
pub unsafe extern "C" fn ks_instance_to_json(
    inst: *const KsInstance,
    out: *mut *mut c_char,
) -> KsStatus {
    guard(|| {
        write_string(
            out,
            to_canonical_string(&instance_to_value(&borrow(inst)?.0)),
        )
    })
}

#[no_mangle]
pub unsafe extern "C" fn ks_instance_free(inst: *mut KsInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Copies the instance's graph into a new handle.
#[no_mangle]
pub unsafe extern "C" fn ks_instance_graph(
    inst: *const KsInstance,
    out: *mut *mut KsGraph,
) -> KsStatus {
    guard(|| write_handle(out, KsGraph(borrow(inst)?.0.graph.clone())))
}

/// Vertex sets of the k-faces, `0 <= k <= d - 1`.
#[no_mangle]
pub unsafe extern "C" fn ks_instance_faces(
    inst: *const KsInstance,
    k: usize,
    out: *mut *mut KsSetSystem,
) -> KsStatus {
    guard(|| write_handle(out, KsSetSystem(faces_from_incidence(&borrow(inst)?.0, k)?)))
}

/// Orientation from the linear function with weights `num[i] / den[i]`.
/// Pass `len == 0` for the default weights `1, 2, 4, ...`.
#[no_mangle]
pub unsafe extern "C" fn ks_instance_geometric_aof(
    inst: *const KsInstance,
    num: *const i64,
    den: *const i64,
    len: usize,
    out: *mut *mut KsOrientation,
) -> KsStatus {
    guard(|| {
        let inst = &borrow(inst)?.0;
        let weights = if len == 0 {
            default_weights(inst.dim())
        } else {
            if num.is_null() || den.is_null() {
                return Err(Fail::Null);
            }
            let (num, den) = (
                std::slice::from_raw_parts(num, len),
                std::slice::from_raw_parts(den, len),
            );
            num.iter()
                .zip(den)
                .map(|(&a, &b)| {
                    if b == 0 {
                        Err(Fail::Lib(Error::Parse("zero denominator".into())))
                    } else {
                        Ok(BigRational::new(BigInt::from(a), BigInt::from(b)))
                    }
                })
                .collect::<Result<Vec<_>, _>>()?
        };
        write_handle(out, KsOrientation(geometric_aof(inst, &weights)?))
    })
}

#[no_mangle]
pub unsafe extern "C" fn ks_is_aof(
    inst: *const KsInstance,
    o: *const KsOrientation,
    out: *mut bool,
) -> KsStatus {
    guard(|| write_out(out, is_aof_oracle(&borrow(inst)?.0, &borrow(o)?.0)?))
}

/// Parses an orientation document and checks it is bound to `g`.
#[no_mangle]
pub unsafe extern "C" fn ks_orientation_from_json(
    g: *const KsGraph,
    json: *const c_char,
    out: *mut *mut KsOrientation,
) -> KsStatus {
    guard(|| {
        let o = orientation_for(&borrow(g)?.0, &parse_value(read_str(json)?)?)?;
        write_handle(out, KsOrientation(o))
    })
}

#[no_mangle]
pub unsafe extern "C" fn ks_orientation_to_json(
    o: *const KsOrientation,
    out: *mut *mut c_char,
) -> KsStatus {
    guard(|| {
        write_string(
            out,
            to_canonical_string(&orientation_to_value(&borrow(o)?.0)),
        )
    })
}

#[no_mangle]
pub unsafe extern "C" fn ks_orientation_free(o: *mut KsOrientation) {
    if !o.is_null() {
        drop(Box::from_raw(o));
    }
}

/// Writes `h_0 .. h_d` into `out` (capacity `cap`); `written` gets `d + 1`.
#[no_mangle]
pub unsafe extern "C" fn ks_indegree_histogram(
    g: *const KsGraph,
    o: *const KsOrientation,
    out: *mut u64,
    cap: usize,
    written: *mut usize,
) -> KsStatus {
    guard(|| {
        let h = indegree_histogram(&borrow(g)?.0, &borrow(o)?.0)?;
        write_out(written, h.0.len())?;
        if cap < h.0.len() {
            return Err(Fail::Buffer);
        }
        if out.is_null() {
            return Err(Fail::Null);
        }
        std::slice::from_raw_parts_mut(out, h.0.len()).copy_from_slice(&h.0);
        Ok(())
    })
}

/// `H^k` of the orientation's h-vector; `k = KS_HK_ALL` gives `H`.
#[no_mangle]
pub unsafe extern "C" fn ks_hk_sum(
    g: *const KsGraph,
    o: *const KsOrientation,
    k: i32,
    out: *mut u64,
) -> KsStatus {
    guard(|| {
        let h = indegree_histogram(&borrow(g)?.0, &borrow(o)?.0)?;
        let mode = if k < 0 {
            HkMode::All
        } else {
            HkMode::K(k as usize)
        };
        write_out(out, hk_sum(&h, mode)?)
    })
}

/// Exhaustive minimum of `H^k` over acyclic orientations (`k = KS_HK_ALL`
/// for `H`), with a witness.
#[no_mangle]
pub unsafe extern "C" fn ks_minimize_hk(
    g: *const KsGraph,
    k: i32,
    budget: u64,
    value: *mut u64,
    witness: *mut *mut KsOrientation,
) -> KsStatus {
    guard(|| {
        let mode = if k < 0 {
            HkMode::All
        } else {
            HkMode::K(k as usize)
        };
        let (v, o) = minimize_hk(&borrow(g)?.0, mode, budget)?;
        write_out(value, v)?;
        write_handle(witness, KsOrientation(o))
    })
}

/// Parses a set system document and checks it is bound to `g`.
#[no_mangle]
pub unsafe extern "C" fn ks_set_system_from_json(
    g: *const KsGraph,
    json: *const c_char,
    out: *mut *mut KsSetSystem,
) -> KsStatus {
    guard(|| {
        let g = &borrow(g)?.0;
        let s = set_system_from_value(&parse_value(read_str(json)?)?)?;
        if s.graph_fingerprint() != g.fingerprint() {
            return Err(Fail::Lib(Error::FingerprintMismatch {
                expected: g.fingerprint(),
                found: s.graph_fingerprint(),
            }));
        }
        write_handle(out, KsSetSystem(s))
    })
}

#[no_mangle]
pub unsafe extern "C" fn ks_set_system_to_json(
    s: *const KsSetSystem,
    out: *mut *mut c_char,
) -> KsStatus {
    guard(|| {
        write_string(
            out,
            to_canonical_string(&set_system_to_value(&borrow(s)?.0)),
        )
    })
}

#[no_mangle]
pub unsafe extern "C" fn ks_set_system_len(s: *const KsSetSystem) -> usize {
    s.as_ref().map_or(0, |s| s.0.len())
}

#[no_mangle]
pub unsafe extern "C" fn ks_set_system_free(s: *mut KsSetSystem) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

#[no_mangle]
pub unsafe extern "C" fn ks_validate_k_system(
    g: *const KsGraph,
    s: *const KsSetSystem,
    out: *mut bool,
) -> KsStatus {
    guard(|| {
        write_out(
            out,
            validate_k_system(&borrow(g)?.0, &borrow(s)?.0)?.is_valid(),
        )
    })
}

#[no_mangle]
pub unsafe extern "C" fn ks_verify_face_certificate(
    g: *const KsGraph,
    sets: *const KsSetSystem,
    witness: *const KsOrientation,
    out: *mut KsVerdict,
) -> KsStatus {
    guard(|| {
        let cert = FaceCertificate::new(borrow(sets)?.0.clone(), borrow(witness)?.0.clone())?;
        write_out(out, verdict(verify_face_certificate(&borrow(g)?.0, &cert)?))
    })
}

#[no_mangle]
pub unsafe extern "C" fn ks_verify_aof_certificate(
    g: *const KsGraph,
    candidate: *const KsOrientation,
    two_system: *const KsSetSystem,
    out: *mut KsVerdict,
) -> KsStatus {
    guard(|| {
        let cert =
            AofCertificate::new(borrow(candidate)?.0.clone(), borrow(two_system)?.0.clone())?;
        write_out(out, verdict(verify_aof_certificate(&borrow(g)?.0, &cert)?))
    })
}

#[no_mangle]
pub unsafe extern "C" fn ks_verify_larger_system(
    g: *const KsGraph,
    sets: *const KsSetSystem,
    larger: *const KsSetSystem,
    out: *mut KsVerdict,
) -> KsStatus {
    guard(|| {
        let v = verify_larger_system(&borrow(g)?.0, &borrow(sets)?.0, &borrow(larger)?.0)?;
        write_out(out, verdict(v))
    })
}

#[no_mangle]
pub unsafe extern "C" fn ks_facets_from_2faces(
    g: *const KsGraph,
    two_faces: *const KsSetSystem,
    out: *mut *mut KsSetSystem,
) -> KsStatus {
    guard(|| {
        write_handle(
            out,
            KsSetSystem(facets_from_2faces(&borrow(g)?.0, &borrow(two_faces)?.0)?),
        )
    })
}
