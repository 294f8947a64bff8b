//! Gnuplot script emission. Scripts reference the CSV by path; no images are
//! rendered here.

use std::path::Path;

use eitsim_core::{Observable, Picture};

pub fn spectrum_script(csv_path: &Path, picture: Picture, observable: Observable, title: &str) -> String {
    // electrical files carry an extra f_hz column before the value
    let value_col = match picture {
        Picture::Mechanical => 2,
        Picture::Electrical => 3,
    };
    let ylabel = match observable {
        Observable::Absorption => "Re(P_s)",
        Observable::Dispersion => "Re(N)",
        Observable::Phase => "arg(N) [rad]",
        Observable::CircuitPowerOpen | Observable::CircuitPowerClosed => "P2 [W]",
    };
    format!(
        "set datafile separator ','\n\
         set xlabel 'omega_s [rad/s]'\n\
         set ylabel '{ylabel}'\n\
         set grid\n\
         plot '{}' skip 1 using 1:{value_col} with lines title '{title}'\n",
        csv_path.display()
    )
}

pub fn trajectory_script(csv_path: &Path, title: &str) -> String {
    format!(
        "set datafile separator ','\n\
         set xlabel 't'\n\
         set ylabel 'x1'\n\
         set grid\n\
         plot '{}' skip 1 using 1:2 with lines title '{title}'\n",
        csv_path.display()
    )
}
