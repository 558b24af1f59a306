//! Compiles a small C program against the generated header and the static
//! library. Skipped when no C compiler is on the path.

use std::path::{Path, PathBuf};
use std::process::Command;

fn static_lib() -> Option<PathBuf> {
    // target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().ok()?;
    let profile_dir = exe.parent()?.parent()?;
    let lib = profile_dir.join("libreeb_ffi.a");
    lib.exists().then_some(lib)
}

fn compiler() -> Option<&'static str> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok_and(|o| o.status.success()))
}

#[test]
fn c_program_links_and_runs() {
    let (Some(cc), Some(lib)) = (compiler(), static_lib()) else {
        eprintln!("skipping: no C compiler or static library");
        return;
    };
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::temp_dir().join(format!("reeb-smoke-{}", std::process::id()));
    let status = Command::new(cc)
        .arg(root.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(root.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "smoke exited with {:?}", out.status.code());
    assert!(String::from_utf8_lossy(&out.stdout).contains("line 1"));
}
