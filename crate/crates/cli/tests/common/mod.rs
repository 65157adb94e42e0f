use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

/// One directory under `tests/golden`: `cmd` holds the arguments, and the
/// binary runs inside the directory so `--input input.json` resolves there.
pub struct GoldenCase {
    pub name: String,
    pub dir: PathBuf,
    pub args: Vec<String>,
}

pub struct GoldenRun {
    pub stdout: String,
    pub code: i32,
}

pub fn golden_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

pub fn golden_cases() -> Vec<GoldenCase> {
    let mut cases: Vec<GoldenCase> = fs::read_dir(golden_root())
        .expect("golden directory exists")
        .map(|entry| entry.unwrap().path())
        .filter(|p| p.is_dir())
        .map(|dir| {
            let cmd = fs::read_to_string(dir.join("cmd")).expect("every case has a cmd file");
            GoldenCase {
                name: dir.file_name().unwrap().to_string_lossy().into_owned(),
                args: cmd.split_whitespace().map(str::to_string).collect(),
                dir,
            }
        })
        .collect();
    cases.sort_by(|a, b| a.name.cmp(&b.name));
    cases
}

impl GoldenCase {
    pub fn run(&self) -> GoldenRun {
        let out = Command::new(env!("CARGO_BIN_EXE_dsmt"))
            .args(&self.args)
            .current_dir(&self.dir)
            .output()
            .expect("binary runs");
        GoldenRun {
            stdout: String::from_utf8(out.stdout).expect("utf-8 output"),
            code: out.status.code().expect("exit code"),
        }
    }

    pub fn expected(&self) -> GoldenRun {
        let stdout = fs::read_to_string(self.dir.join("expected.stdout")).expect("expected.stdout");
        let code = fs::read_to_string(self.dir.join("expected.code")).expect("expected.code");
        GoldenRun { stdout, code: code.trim().parse().expect("numeric exit code") }
    }

    /// `Err` describes the first mismatch.
    pub fn check(&self) -> Result<(), String> {
        let (got, want) = (self.run(), self.expected());
        if got.code != want.code {
            return Err(format!("{}: exit code {} instead of {}", self.name, got.code, want.code));
        }
        if got.stdout != want.stdout {
            return Err(format!("{}: stdout differs\n--- expected\n{}--- got\n{}", self.name, want.stdout, got.stdout));
        }
        Ok(())
    }

    #[allow(dead_code)]
    pub fn bless(&self) {
        let got = self.run();
        fs::write(self.dir.join("expected.stdout"), got.stdout).unwrap();
        fs::write(self.dir.join("expected.code"), format!("{}\n", got.code)).unwrap();
    }
}
