//! Checks the generated header and, when a C compiler is on PATH, builds and
//! runs a small C program against the static library.

use std::path::{Path, PathBuf};
use std::process::Command;

const HEADER: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/include/tricorr.h");

#[test]
fn header_declares_the_api() {
    let text = std::fs::read_to_string(HEADER).expect("header generated by build.rs");
    for decl in [
        "typedef struct TcState TcState;",
        "TC_STATUS_OK = 0",
        "TC_STATUS_PANIC = 5",
        "const char *tc_last_error_message(void);",
        "enum TcStatus tc_state_ghz(double a, double b, struct TcState **out);",
        "void tc_state_free(struct TcState *state);",
        "enum TcStatus tc_esd_time(double y, double *out, bool *has_root);",
    ] {
        assert!(text.contains(decl), "header is missing `{decl}`");
    }
}

fn target_dir() -> PathBuf {
    // .../target/<profile>/deps/header-<hash>
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

const PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include "tricorr.h"

int main(void) {
    TcState *s = NULL;
    if (tc_state_ghz(0.6, 0.8, &s) != TC_STATUS_OK) return 1;
    double cf = 0.0, c = 0.0;
    if (tc_concurrence_fill(s, &cf) != TC_STATUS_OK) return 2;
    if (tc_pcc_tripartite(s, "X", &c, NULL) != TC_STATUS_OK) return 3;
    TcState *bad = NULL;
    if (tc_state_w(9.0, &bad) != TC_STATUS_INVALID_ARGUMENT) return 4;
    if (tc_last_error_message() == NULL) return 5;
    tc_state_free(s);
    printf("%.12f %.12f\n", cf, c);
    return fabs(cf - 0.9216) < 1e-12 && fabs(c - 0.96) < 1e-12 ? 0 : 6;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let lib = target_dir().join("libtricorr_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() || !lib.exists() {
        eprintln!("skipping C link test: no `cc` on PATH or {} missing", lib.display());
        return;
    }
    let work = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let src = work.join("tricorr_smoke.c");
    let exe = work.join("tricorr_smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(Path::new(HEADER).parent().unwrap())
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compile/link failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "C program exited with {:?}", out.status.code());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "0.921600000000 0.960000000000");
}
