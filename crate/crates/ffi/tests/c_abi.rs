// Copyright 2026 The predsieve Authors
// SPDX-License-Identifier: Apache-2.0

//! Compiles a small C program against the generated header and the static
//! library, then runs it.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "predsieve.h"

int main(void) {
    double n = 0.0;
    if (ps_thermal_occupation(0.6931471805599453, &n) != PS_STATUS_OK || n < 0.999999 || n > 1.000001) return 1;
    if (ps_thermal_occupation(-1.0, &n) != PS_STATUS_INVALID_ARGUMENT) return 2;
    if (strlen(ps_last_error()) == 0) return 3;

    PsModel cl = { PS_MODEL_KIND_CL, 0.01, 5.0 };
    PsSieve *s = NULL;
    if (ps_sieve_run(NULL, &cl, 0.25, 4.0, 33, PS_MEASURE_PERIOD_AVERAGED, PS_EVALUATION_ANALYTIC, &s) != PS_STATUS_OK) return 4;
    double values[33];
    size_t len = 0;
    if (ps_sieve_values(s, values, 33, &len) != PS_STATUS_OK || len != 33) return 5;
    double best = 0.0;
    if (ps_sieve_argmin(s, NULL, &best, NULL) != PS_STATUS_OK || best != 1.0) return 6;
    ps_sieve_free(s);

    PsModel full = { PS_MODEL_KIND_CL_FULL, 0.5, 1.0 };
    double ev = 0.0;
    bool ok = true;
    if (ps_cp_check(NULL, PS_GENERATOR_CL_FULL, &full, 6, &ev, &ok) != PS_STATUS_OK || ok) return 7;

    PsModel qome = { PS_MODEL_KIND_QOME, 0.1, 0.0 };
    PsTrajectory *t = NULL;
    if (ps_propagate(NULL, &qome, 1.0, 0.0, 1.0, 256, 10.0, 30, 0.01, 100, &t) != PS_STATUS_OK) return 8;
    if (ps_trajectory_len(t) != 101) return 9;
    ps_trajectory_free(t);
    printf("ok %s\n", ps_version());
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // The test binary lives in target/<profile>/deps beside the library.
    let exe = std::env::current_exe().unwrap();
    let deps = exe.parent().unwrap();
    let lib = [deps, deps.parent().unwrap()]
        .iter()
        .map(|d| d.join("libpredsieve_ffi.a"))
        .find(|p| p.exists())
        .unwrap_or_else(|| panic!("static library not found near {}", deps.display()));

    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let bin = dir.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(&cc)
        .arg("-std=c11")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&bin)
        .status()
        .unwrap_or_else(|e| panic!("cannot run {cc}: {e}"));
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "C program exited with {:?}", out.status.code());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
