//! Companion gnuplot scripts for exported CSV data.

use std::path::Path;

use phasespace::grid::GridSpec;
use phasespace::{Result, WignerField};

/// Heat-map script for a Wigner field CSV (with a commented surface variant).
pub fn field_script(csv_name: &str, title: &str, field: &WignerField) -> String {
    let g: &GridSpec = field.grid();
    format!(
        "# gnuplot script for {csv_name}\n\
         set datafile separator \",\"\n\
         set datafile commentschars \"#\"\n\
         set xlabel \"q\"\n\
         set ylabel \"p\"\n\
         set title \"{title}\"\n\
         set view map\n\
         splot \"{csv_name}\" matrix using ({qmin} + $1*{dq}):({pmin} + $2*{dp}):3 with image notitle\n\
         # surface rendering:\n\
         # unset view\n\
         # set hidden3d\n\
         # splot \"{csv_name}\" matrix using ({qmin} + $1*{dq}):({pmin} + $2*{dp}):3 every 4:4 with lines notitle\n",
        qmin = g.q_min(),
        dq = g.dq(),
        pmin = g.p_min(),
        dp = g.dp(),
    )
}

/// Line-plot script for two-column (s, value) profile data.
pub fn profile_script(csv_name: &str, title: &str, xlabel: &str) -> String {
    format!(
        "# gnuplot script for {csv_name}\n\
         set datafile separator \",\"\n\
         set datafile commentschars \"#\"\n\
         set xlabel \"{xlabel}\"\n\
         set ylabel \"W\"\n\
         set title \"{title}\"\n\
         plot \"{csv_name}\" using 1:2 with lines notitle\n"
    )
}

pub fn write_script(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content)?;
    Ok(())
}
