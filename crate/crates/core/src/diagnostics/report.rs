//! CSV tables. Floats are written as `{:.17e}` so that identical values give
//! identical bytes and round-trip exactly.

use std::io::Write;

use super::commutator::CommutatorSample;
use super::energy::EnergyRecord;
use super::monitor::NormSeries;
use super::spectra::{BlockEnergy, ShellEnergy};
use super::sweep::SweepCell;
use crate::error::Result;

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.17e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

pub const LEDGER_HEADER: [&str; 12] = [
    "t",
    "kinetic",
    "micro",
    "dissipation_u",
    "dissipation_w",
    "damping",
    "graddiv",
    "cross",
    "cross_wu",
    "cross_uw",
    "net_loss",
    "residual",
];

pub fn write_ledger_csv<W: Write>(out: W, records: &[EnergyRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(LEDGER_HEADER)?;
    for r in records {
        let mut row: Vec<String> = [
            r.t,
            r.kinetic,
            r.micro,
            r.dissipation_u,
            r.dissipation_w,
            r.damping,
            r.graddiv,
            r.cross,
            r.cross_wu,
            r.cross_uw,
            r.net_loss(),
        ]
        .into_iter()
        .map(fmt_f64)
        .collect();
        row.push(fmt_opt(r.residual));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Columns `t, lambda_u[σ]…, lambda_w[σ]…, grad_u_inf, w_inf, hs,
/// int_grad_u_inf, int_w_inf_sq`.
pub fn write_norms_csv<W: Write>(out: W, series: &NormSeries) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t".to_string()];
    header.extend(series.sigmas().iter().map(|s| format!("lambda_u[{s}]")));
    header.extend(series.sigmas().iter().map(|s| format!("lambda_w[{s}]")));
    header.extend(
        ["grad_u_inf", "w_inf", &format!("hs[{}]", series.s()), "int_grad_u_inf", "int_w_inf_sq"]
            .map(String::from),
    );
    w.write_record(&header)?;
    for (i, r) in series.records().iter().enumerate() {
        let mut row = vec![fmt_f64(r.t)];
        row.extend(r.lambda_u.iter().chain(&r.lambda_w).map(|&x| fmt_f64(x)));
        row.extend(
            [
                r.grad_u_inf,
                r.w_inf,
                r.hs,
                series.integral_grad_u()[i],
                series.integral_w_sq()[i],
            ]
            .map(fmt_f64),
        );
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_sweep_csv<W: Write>(out: W, cells: &[SweepCell]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "alpha",
        "beta",
        "status",
        "t_reached",
        "growth",
        "int_grad_u_inf",
        "int_w_inf_sq",
        "message",
    ])?;
    for c in cells {
        w.write_record([
            fmt_f64(c.alpha),
            fmt_f64(c.beta),
            c.status.clone(),
            fmt_f64(c.t_reached),
            fmt_f64(c.growth),
            fmt_f64(c.int_grad_u_inf),
            fmt_f64(c.int_w_inf_sq),
            c.message.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_block_energy_csv<W: Write>(out: W, blocks: &[BlockEnergy]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["j", "energy"])?;
    for b in blocks {
        w.write_record([b.j.to_string(), fmt_f64(b.energy)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_shell_spectrum_csv<W: Write>(out: W, shells: &[ShellEnergy]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["k", "energy"])?;
    for s in shells {
        w.write_record([s.k.to_string(), fmt_f64(s.energy)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_commutator_csv<W: Write>(out: W, samples: &[CommutatorSample]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["sample", "s", "lhs", "rhs_bound", "ratio"])?;
    for (i, c) in samples.iter().enumerate() {
        w.write_record([i.to_string(), fmt_f64(c.s), fmt_f64(c.lhs), fmt_f64(c.rhs_bound), fmt_f64(c.ratio)])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ledger_round_trip() {
        let r = EnergyRecord {
            t: 0.1,
            kinetic: 1.0 / 3.0,
            micro: 2.0,
            dissipation_u: 0.5,
            dissipation_w: 0.25,
            damping: 1.0,
            graddiv: 0.0,
            cross: -0.125,
            cross_wu: -0.0625,
            cross_uw: -0.0625,
            residual: None,
        };
        let mut buf = Vec::new();
        write_ledger_csv(&mut buf, &[r.clone(), EnergyRecord { residual: Some(1e-9), ..r }]).unwrap();
        let mut rd = csv::Reader::from_reader(buf.as_slice());
        assert_eq!(rd.headers().unwrap().len(), LEDGER_HEADER.len());
        let rows: Vec<_> = rd.records().map(|x| x.unwrap()).collect();
        assert_eq!(rows[0][1].parse::<f64>().unwrap(), 1.0 / 3.0);
        assert_eq!(&rows[0][11], "");
        assert_eq!(rows[1][11].parse::<f64>().unwrap(), 1e-9);
    }
}
