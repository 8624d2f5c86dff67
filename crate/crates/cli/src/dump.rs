//! Grid-state dump files: a text header followed by little-endian complex128
//! samples, branch by branch.
//!
//! ```text
//! gkpstate v1
//! modes <k>
//! qubits <q>
//! axis <i> <x_min> <dx> <n>     (one line per mode)
//! data complex128-le <total>
//! <binary payload>
//! ```

use gkp_core::sim::HybridGridState;
use std::io::Write;
use std::path::Path;

pub fn dump_state(state: &HybridGridState, path: &Path) -> std::io::Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "gkpstate v1")?;
    writeln!(f, "modes {}", state.axes.len())?;
    writeln!(f, "qubits {}", state.qubits)?;
    for (i, a) in state.axes.iter().enumerate() {
        writeln!(f, "axis {i} {:.17e} {:.17e} {}", a.x_min, a.dx, a.n)?;
    }
    let total: usize = state.branches.iter().map(|b| b.len()).sum();
    writeln!(f, "data complex128-le {total}")?;
    for b in &state.branches {
        for v in b {
            f.write_all(&v.re.to_le_bytes())?;
            f.write_all(&v.im.to_le_bytes())?;
        }
    }
    Ok(())
}
