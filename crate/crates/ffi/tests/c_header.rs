//! Compiles and runs a small C program against `include/cho.h` and the
//! static library.

use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include "cho.h"

int main(void) {
    ChoParams *p = NULL;
    if (cho_params_from_beat(1.0, 1.0, 0.1, 10.0, &p) != CHO_STATUS_OK) return 1;
    ChoFrequencies f;
    if (cho_params_frequencies(p, &f) != CHO_STATUS_OK) return 2;
    if (fabs(f.delta_omega - 0.1) > 1e-12) return 3;
    ChoParams *bad = NULL;
    if (cho_params_new(1.0, -1.0, 0.0, 10.0, &bad) != CHO_STATUS_INVALID_PARAMS) return 4;
    if (cho_last_error_message() == NULL) return 5;
    ChoTrajectory *tr = NULL;
    double lg = -1.0;
    if (cho_trajectory_integrate(p, 0.0, -1.0, 10.0, 1e-9, 1e-12, &tr, &lg) != CHO_STATUS_OK) return 6;
    ChoPoint pt;
    if (cho_trajectory_eval(tr, 5.0, &pt) != CHO_STATUS_OK) return 7;
    printf("%.6f %.6f\n", pt.x1, pt.x2);
    cho_trajectory_free(tr);
    cho_params_free(p);
    return 0;
}
"#;

fn which(tool: &str) -> bool {
    Command::new(tool).arg("--version").output().is_ok()
}

fn target_dir() -> PathBuf {
    // .../target/<profile>/deps/c_header-<hash>
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn header_compiles_and_links() {
    if !which("cc") {
        eprintln!("no C compiler; skipping");
        return;
    }
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let lib = target_dir().join("libcho_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let tmp = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let src = tmp.join("cho_smoke.c");
    let exe = tmp.join("cho_smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&exe)
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .status()
        .unwrap();
    assert!(status.success(), "C build failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    let text = String::from_utf8(out.stdout).unwrap();
    let v: Vec<f64> = text.split_whitespace().map(|s| s.parse().unwrap()).collect();
    // the reduced field conserves the distance from the origin
    assert!((v[0].hypot(v[1]) - 1.0).abs() < 1e-6, "{text}");
}
