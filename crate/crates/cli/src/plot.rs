//! Companion gnuplot scripts for the CSV outputs.

use std::path::Path;

use crate::output::write_atomic;
use crate::CliError;

const PREAMBLE: &str = "set datafile separator ','\nset key autotitle columnhead\nset grid\n";

/// (file name, body) of every script.
pub fn scripts() -> Vec<(&'static str, String)> {
    vec![
        (
            "spectrum_sweep.gp",
            format!(
                "{PREAMBLE}# energies from `zeropi sweep` (spectrum.csv)\n\
                 set xlabel 'sweep parameter'\nset ylabel 'E (GHz)'\n\
                 plot for [l=0:14] 'spectrum.csv' using 1:($3==l ? $5 : 1/0) with lines title sprintf('l=%d', l)\n"
            ),
        ),
        (
            "dressed_ladder.gp",
            format!(
                "{PREAMBLE}# dressed states from `zeropi spectrum`\n\
                 set xlabel 'label n'\nset ylabel 'E (GHz)'\n\
                 plot 'spectrum.csv' using 4:5:3 with points palette pt 7 title 'E(l, n)'\n"
            ),
        ),
        (
            "dispersive_shifts.gp",
            format!(
                "{PREAMBLE}# chi_l and Lambda_l from `zeropi dispersive` at one working point\n\
                 set xlabel 'level l'\nset ylabel 'GHz'\n\
                 plot 'dispersive.csv' using 1:2 with linespoints title 'chi_l', \
                 '' using 1:3 with linespoints title 'Lambda_l'\n"
            ),
        ),
        (
            "shot_noise.gp",
            format!(
                "{PREAMBLE}# shot-noise dephasing from `zeropi dispersive` with a [sweep] section\n\
                 set logscale y\nset xlabel 'sweep parameter'\nset ylabel 'T_phi^SN (s)'\n\
                 plot 'shot_noise.csv' using 1:5 with lines title 'full', \
                 '' using 1:6 with lines dt 2 title 'small chi', '' using 1:7 with lines dt 3 title 'large chi'\n"
            ),
        ),
        (
            "coherence.gp",
            format!(
                "{PREAMBLE}# channel times from `zeropi coherence` with a [sweep] section\n\
                 set logscale y\nset xlabel 'sweep parameter'\nset ylabel 'time (s)'\n\
                 channels = 'Tphi_flux_1f Tphi_Ic_1f Tphi_charge_1f Tphi_shot'\n\
                 t1channels = 'T1_Ic T1_flux_1f T1_fluxline T1_purcell'\n\
                 set multiplot layout 1,2\n\
                 plot for [c in channels] 'coherence.csv' using 1:(strcol(2) eq c ? $3 : 1/0) with lines title c, \
                 '' using 1:(strcol(2) eq 'combined' ? $3 : 1/0) with lines dt 2 lc black title 'combined'\n\
                 plot for [c in t1channels] 'coherence.csv' using 1:(strcol(2) eq c ? $4 : 1/0) with lines title c, \
                 '' using 1:(strcol(2) eq 'combined' ? $4 : 1/0) with lines dt 2 lc black title 'combined'\n\
                 unset multiplot\n"
            ),
        ),
        (
            "purcell.gp",
            format!(
                "{PREAMBLE}# exact vs perturbative Purcell rates from `zeropi purcell` with a [sweep] section\n\
                 set logscale y\nset xlabel 'sweep parameter'\nset ylabel 'T1 Purcell (s)'\n\
                 plot 'purcell.csv' using 1:(1/$3) with lines title 'exact', '' using 1:(1/$4) with lines dt 2 title 'perturbative'\n"
            ),
        ),
    ]
}

pub fn write_scripts(dir: &Path) -> Result<Vec<String>, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let mut names = Vec::new();
    for (name, body) in scripts() {
        write_atomic(dir, name, body.as_bytes())?;
        names.push(name.to_string());
    }
    Ok(names)
}
