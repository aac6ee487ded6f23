//! Output plumbing: stdout or file, and the CSV-plus-JSON-sidecar pattern
//! used by the synthesis commands.

use std::io::Write;
use std::path::Path;

use carleman::synth::FunctionRep;

/// Write text to the path or stdout.
pub fn sink(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Write a CSV to `--out` (default name otherwise) and its diagnostics
/// sidecar next to it with the extension replaced by `.json`.
pub fn write_with_sidecar(
    out: Option<&Path>,
    default_name: &str,
    csv: &str,
    sidecar: &serde_json::Value,
) -> anyhow::Result<()> {
    let path = out
        .map(|p| p.to_path_buf())
        .unwrap_or_else(|| std::path::PathBuf::from(default_name));
    std::fs::write(&path, csv)?;
    let sidecar_path = path.with_extension("json");
    std::fs::write(&sidecar_path, serde_json::to_string_pretty(sidecar)?)?;
    eprintln!("wrote {} and {}", path.display(), sidecar_path.display());
    Ok(())
}

/// CSV body `x,re_f,im_f` for a synthesized function.
pub fn write_function_csv(rep: &FunctionRep) -> String {
    let mut csv = String::from("x,re_f,im_f\n");
    for (k, v) in rep.samples().iter().enumerate() {
        csv.push_str(&format!("{:.9e},{:.17e},{:.17e}\n", rep.grid.x(k), v.re, v.im));
    }
    csv
}
