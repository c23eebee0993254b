//! CSV export of trajectories and grid scans from a report.

use crate::scenario::{AnalysisResult, Report};
use std::fs;
use std::io::Write;
use std::path::Path;

/// Write one CSV file per exportable analysis (replicator trajectories and
/// equilibrium scans) into `dir`. Returns the written file names.
pub fn export_report(report: &Report, dir: &Path) -> std::io::Result<Vec<String>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for (index, analysis) in report.analyses.iter().enumerate() {
        match analysis {
            AnalysisResult::Replicate { trajectory, .. } => {
                let name = format!("analysis{index:02}_trajectory.csv");
                let mut file = fs::File::create(dir.join(&name))?;
                let n = trajectory.terminal.len();
                let header: Vec<String> = (1..=n).map(|k| format!("freq{k}")).collect();
                writeln!(file, "time,{}", header.join(","))?;
                for (time, freqs) in &trajectory.samples {
                    let row: Vec<String> = freqs.iter().map(|f| format!("{f:.12}")).collect();
                    writeln!(file, "{time:.6},{}", row.join(","))?;
                }
                written.push(name);
            }
            AnalysisResult::NeScan { scan } => {
                let name = format!("analysis{index:02}_ne_scan.csv");
                let mut file = fs::File::create(dir.join(&name))?;
                writeln!(file, "coord1,coord2,margin,cluster_size")?;
                for point in &scan.equilibria {
                    writeln!(
                        file,
                        "{:.12},{:.12},{:.6e},{}",
                        point.point[0], point.point[1], point.margin, point.cluster_size
                    )?;
                }
                written.push(name);
            }
            AnalysisResult::NeScanPairs { equilibria } => {
                let name = format!("analysis{index:02}_equilibria.csv");
                let mut file = fs::File::create(dir.join(&name))?;
                writeln!(file, "p,q")?;
                for (p, q) in &equilibria.equilibria {
                    writeln!(file, "{p:.12},{q:.12}")?;
                }
                written.push(name);
            }
            _ => {}
        }
    }
    Ok(written)
}
