use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Context;
use fjsched::io::format_rational;
use fjsched::{Algorithm, Error, Rational, SolveOptions};
use log::warn;

use crate::{load_instance, write_out};

pub const HEADER: &str = "instance,algorithm,makespan,oracle,gap,certificate_honored,ms";

/// One CSV row per instance and algorithm. Algorithms whose preconditions
/// an instance does not meet get a row with empty values.
pub fn run(
    instances: &[PathBuf],
    algorithms: &[Algorithm],
    no_oracle: bool,
    no_timing: bool,
    opts: &SolveOptions<Rational>,
    output: Option<&Path>,
) -> anyhow::Result<()> {
    let mut csv = String::from(HEADER);
    csv.push('\n');
    for path in instances {
        let inst = load_instance(path)?;
        let name = path.file_name().map_or_else(
            || path.display().to_string(),
            |n| n.to_string_lossy().into_owned(),
        );
        let oracle = if no_oracle {
            None
        } else {
            let r = fjsched::solve(&inst, Algorithm::Oracle, opts)
                .with_context(|| format!("oracle on {name} (use --no-oracle to skip)"))?;
            Some(r.makespan)
        };
        for &alg in algorithms {
            let started = Instant::now();
            let result = fjsched::solve(&inst, alg, opts);
            let ms = if no_timing {
                0.0
            } else {
                started.elapsed().as_secs_f64() * 1e3
            };
            let cells = match result {
                Ok(report) => {
                    let (opt, gap, honored) = match &oracle {
                        Some(o) => (
                            format_rational(o),
                            format_rational(&(report.makespan.clone() - o.clone())),
                            report.guarantee.holds(&report.makespan, o).to_string(),
                        ),
                        None => (String::new(), String::new(), String::new()),
                    };
                    [format_rational(&report.makespan), opt, gap, honored]
                }
                Err(e @ (Error::Precondition(_) | Error::LimitExceeded(_))) => {
                    warn!("{alg} on {name}: {e}");
                    [String::new(), String::new(), String::new(), String::new()]
                }
                Err(e) => return Err(e).with_context(|| format!("{alg} on {name}")),
            };
            csv.push_str(&format!(
                "{},{},{},{},{},{},{:.3}\n",
                escape(&name),
                alg,
                cells[0],
                cells[1],
                cells[2],
                cells[3],
                ms
            ));
        }
    }
    write_out(output, &csv)
}

fn escape(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}
