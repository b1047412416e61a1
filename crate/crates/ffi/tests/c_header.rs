//! Compiles a C program against the generated header and links it with the
//! static library built alongside this test.

use std::path::{Path, PathBuf};
use std::process::Command;

fn compiler() -> Option<String> {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    Command::new(&cc).arg("--version").output().ok().map(|_| cc)
}

fn static_lib() -> PathBuf {
    // target/<profile>/deps/<this test> -> target/<profile>/libswiperkit_ffi.a
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().join("libswiperkit_ffi.a")
}

#[test]
fn c_program_links_and_runs() {
    let Some(cc) = compiler() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let lib = static_lib();
    assert!(lib.exists(), "{} not built", lib.display());
    let crate_dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let out = Path::new(env!("CARGO_TARGET_TMPDIR")).join("swiperkit_smoke");
    let status = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Wextra", "-Werror", "-I"])
        .arg(crate_dir.join("include"))
        .arg(crate_dir.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let run = Command::new(&out).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(String::from_utf8_lossy(&run.stdout), format!("ok {}\n", env!("CARGO_PKG_VERSION")));
}
