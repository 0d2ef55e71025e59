// Copyright 2026 The predsieve Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

fn main() {
    let dir = PathBuf::from(std::env::var("CARGO_MANIFEST_DIR").unwrap());
    println!("cargo:rerun-if-changed=src/lib.rs");
    let config = cbindgen::Config {
        language: cbindgen::Language::C,
        include_guard: Some("PREDSIEVE_H".into()),
        header: Some("/* Copyright 2026 The predsieve Authors\n * SPDX-License-Identifier: Apache-2.0 */".into()),
        autogen_warning: Some("/* Generated by cbindgen; do not edit. */".into()),
        cpp_compat: true,
        enumeration: cbindgen::EnumConfig {
            prefix_with_name: true,
            rename_variants: cbindgen::RenameRule::ScreamingSnakeCase,
            ..Default::default()
        },
        ..Default::default()
    };
    match cbindgen::Builder::new().with_crate(&dir).with_config(config).generate() {
        Ok(b) => {
            b.write_to_file(dir.join("include/predsieve.h"));
        }
        // A header failure must not break the library build.
        Err(e) => println!("cargo:warning=cbindgen: {e}"),
    }
}
