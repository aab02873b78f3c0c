use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use dirichlet_arg_ffi::*;

fn last_error() -> String {
    let p = da_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn family_lifecycle() {
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { da_family_new(5, &mut f) }, DaStatus::Ok);
    assert!(da_last_error_message().is_null());
    assert_eq!(unsafe { da_family_len(f) }, 4);
    assert_eq!(unsafe { da_family_generator(f) }, 2);
    let (mut re, mut im) = (0.0, 0.0);
    assert_eq!(unsafe { da_character_value(f, 2, 4, &mut re, &mut im) }, DaStatus::Ok);
    assert_eq!((re, im), (1.0, 0.0));
    // L(1, (·/5)) = 2 log φ/√5.
    assert_eq!(unsafe { da_l_value(f, 2, 1.0, 0.0, &mut re, &mut im) }, DaStatus::Ok);
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    assert!((re - 2.0 * phi.ln() / 5f64.sqrt()).abs() < 1e-12 && im.abs() < 1e-12);
    unsafe { da_family_free(f) };
    unsafe { da_family_free(ptr::null_mut()) };
}

#[test]
fn errors_carry_status_and_message() {
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { da_family_new(9, &mut f) }, DaStatus::Domain);
    assert!(f.is_null());
    assert!(!last_error().is_empty());
    assert_eq!(unsafe { da_family_new(5, ptr::null_mut()) }, DaStatus::NullPointer);
    assert!(last_error().contains("out_family"));
    let mut v = 0.0;
    assert_eq!(unsafe { da_sqrt_d(1.156, 0.2, 0.1249, 1, 0.25, &mut v) }, DaStatus::Constraint);
    assert!(last_error().contains("δ < 2/(8k+3)"));
    assert_eq!(unsafe { da_s_of_t(ptr::null(), 1, 0.0, &mut v) }, DaStatus::NullPointer);
    assert_eq!(unsafe { da_family_len(ptr::null()) }, 0);
}

#[test]
fn zero_list_handle() {
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { da_family_new(3, &mut f) }, DaStatus::Ok);
    let mut z = ptr::null_mut();
    assert_eq!(unsafe { da_zeros_new(f, 1, 0.0, 30.0, &mut z) }, DaStatus::Ok);
    let n = unsafe { da_zeros_len(z) };
    let ords = unsafe { std::slice::from_raw_parts(da_zeros_ordinates(z), n) };
    assert!((ords[0] - 8.039_737_155_681_4).abs() < 1e-9);
    assert!(ords.windows(2).all(|w| w[0] < w[1]));
    assert!(unsafe { da_zeros_validated(z) });
    let mut s = 0.0;
    assert_eq!(unsafe { da_s_of_t(f, 1, 0.0, &mut s) }, DaStatus::Ok);
    assert!(s.abs() < 1e-12);
    unsafe { da_zeros_free(z) };
    unsafe { da_family_free(f) };
}

#[test]
fn constants_through_the_abi() {
    let mut v = 0.0;
    assert_eq!(unsafe { da_mean_square_bound(0.0, &mut v) }, DaStatus::Ok);
    assert_eq!(v, 3_857_296.0);
    assert_eq!(unsafe { da_sqrt_d(1.156, 0.16, 0.1249, 1, 0.25, &mut v) }, DaStatus::Ok);
    assert!(v > 981.0 && v < 982.0);
    let version = unsafe { CStr::from_ptr(da_version()) }.to_str().unwrap();
    assert_eq!(version, env!("CARGO_PKG_VERSION"));
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include "dirichlet_arg.h"

int main(void) {
    DaFamily *f = NULL;
    if (da_family_new(7, &f) != DA_STATUS_OK) return 1;
    if (da_family_len(f) != 6) return 2;
    DaZeroList *z = NULL;
    if (da_zeros_new(f, 3, 0.0, 20.0, &z) != DA_STATUS_OK) return 3;
    printf("%zu %.12f\n", da_zeros_len(z), da_zeros_ordinates(z)[0]);
    da_zeros_free(z);
    da_family_free(f);
    DaFamily *bad = NULL;
    if (da_family_new(8, &bad) != DA_STATUS_DOMAIN) return 4;
    if (da_last_error_message() == NULL) return 5;
    return 0;
}
"#;

#[test]
fn header_compiles_and_links_from_c() {
    let Ok(cc) = which("cc") else {
        eprintln!("no C compiler; skipped");
        return;
    };
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let lib_dir = exe.parent().unwrap().parent().unwrap().to_path_buf();
    if !lib_dir.join("libdirichlet_arg_ffi.so").exists() {
        eprintln!("shared library not built; skipped");
        return;
    }
    let work = std::env::temp_dir().join(format!("dirichlet-arg-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&work).unwrap();
    let src = work.join("main.c");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let bin = work.join("main");
    let status = Command::new(cc)
        .arg("-std=c11")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&src)
        .arg("-L")
        .arg(&lib_dir)
        .arg("-ldirichlet_arg_ffi")
        .arg("-o")
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).env("LD_LIBRARY_PATH", &lib_dir).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut parts = text.split_whitespace();
    let count: usize = parts.next().unwrap().parse().unwrap();
    let first: f64 = parts.next().unwrap().parse().unwrap();
    assert!(count > 0 && first > 0.0 && first < 20.0, "{text}");
    std::fs::remove_dir_all(&work).unwrap();
}

fn which(name: &str) -> Result<PathBuf, ()> {
    let path = std::env::var_os("PATH").ok_or(())?;
    std::env::split_paths(&path).map(|d| d.join(name)).find(|p| p.is_file()).ok_or(())
}
