//! Compiles C code against the generated header and, when the static library is present,
//! links and runs it.

use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include "altes.h"
#include <math.h>
#include <stdio.h>

int main(void) {
    AltesChirplet *c = NULL;
    if (altes_chirplet_new(M_PI / 10.0, M_PI, 0.75, &c) != ALTES_STATUS_OK) return 1;
    size_t n = 0;
    if (altes_chirplet_advised_fft_size(c, &n) != ALTES_STATUS_OK || n != 512) return 2;
    AltesComplex buf[512];
    if (altes_chirplet_time(c, 512, buf, 512) != ALTES_STATUS_OK) return 3;
    double scales[2] = {1.0, 1.5};
    AltesScalogram *s = NULL;
    if (altes_hct(c, buf, 512, scales, 2, &s) != ALTES_STATUS_OK) return 4;
    size_t rows = 0, cols = 0;
    altes_scalogram_dims(s, &rows, &cols);
    if (rows != 2 || cols != 512) return 5;
    AltesChirplet *bad = NULL;
    if (altes_chirplet_new(1.0, 0.5, 0.5, &bad) != ALTES_STATUS_INVALID_PARAMETER) return 6;
    char msg[128];
    if (altes_last_error_message(msg, sizeof msg) == 0) return 7;
    altes_scalogram_free(s);
    altes_chirplet_free(c);
    printf("ok %s\n", altes_version());
    return 0;
}
"#;

fn include_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include")
}

fn compiler() -> Option<String> {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    Command::new(&cc).arg("--version").output().ok().map(|_| cc)
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(include_dir().join("altes.h")).unwrap();
    let source = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("src/lib.rs")).unwrap();
    let exported: Vec<&str> = source
        .split("extern \"C\" fn ")
        .skip(1)
        .map(|s| s.split('(').next().unwrap())
        .collect();
    assert!(exported.len() >= 18);
    for name in exported {
        assert!(header.contains(&format!("{name}(")), "{name} missing from altes.h");
    }
}

#[test]
fn c_program_compiles_and_runs() {
    let Some(cc) = compiler() else {
        eprintln!("no C compiler; skipped");
        return;
    };
    let tmp = tempfile::tempdir().unwrap();
    let src = tmp.path().join("smoke.c");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new(&cc)
        .args([
            "-std=c11",
            "-D_DEFAULT_SOURCE",
            "-Wall",
            "-Werror",
            "-fsyntax-only",
            "-I",
        ])
        .arg(include_dir())
        .arg(&src)
        .status()
        .unwrap();
    assert!(status.success(), "header does not compile as C11");

    // target/<profile>/deps/<test binary>
    let profile_dir = std::env::current_exe()
        .unwrap()
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf();
    let lib = profile_dir.join("libaltes_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; link step skipped", lib.display());
        return;
    }
    let exe = tmp.path().join("smoke");
    let status = Command::new(&cc)
        .args(["-std=c11", "-D_DEFAULT_SOURCE", "-I"])
        .arg(include_dir())
        .arg(&src)
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "link against the static library failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "C program exited with {:?}", out.status.code());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
