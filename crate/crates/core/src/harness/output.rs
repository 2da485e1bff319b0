use std::fs;
use std::path::Path;

use super::config::RunConfig;
use super::run::ResultRow;
use super::HarnessError;

/// Columns after `cell_i, cell_j` and the swept parameters.
pub const CSV_TAIL: [&str; 22] = [
    "x_se", "y_se", "z_se", "ux_se", "x_ne", "y_ne", "z_ne", "ux_ne", "thm1", "cor1", "thm2",
    "eq_condition", "l", "kappa1", "kappa2", "eta", "bound", "hausdorff", "ux_case1", "ux_case2",
    "ux_case3", "error",
];

/// `%g`-style formatting with 12 significant digits.
pub fn format_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{v:.decimals$}");
        let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
        if s == "-0" {
            "0".into()
        } else {
            s
        }
    } else {
        let s = format!("{v:.11e}");
        let (mant, e) = s.split_once('e').unwrap_or((&s, "0"));
        let mant = if mant.contains('.') { mant.trim_end_matches('0').trim_end_matches('.') } else { mant };
        format!("{mant}e{e}")
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(format_sig).unwrap_or_default()
}

fn opt_bool(v: Option<bool>) -> String {
    v.map(|b| b.to_string()).unwrap_or_default()
}

fn param_names(config: &RunConfig) -> Vec<String> {
    match &config.sweep {
        Some(sw) => std::iter::once(&sw.axis1)
            .chain(sw.axis2.as_ref())
            .map(|a| a.param.clone())
            .collect(),
        None => Vec::new(),
    }
}

fn row_record(row: &ResultRow) -> Vec<String> {
    let mut rec = vec![row.cell_i.to_string(), row.cell_j.to_string()];
    rec.extend(row.params.iter().map(|v| format_sig(*v)));
    let se = row.se.first();
    let ne = row.ne.first();
    rec.extend([se.map(|p| p.x), se.map(|p| p.y), se.map(|p| p.z), row.ux_se].map(opt));
    rec.extend([ne.map(|p| p.x), ne.map(|p| p.y), ne.map(|p| p.z), row.ux_ne].map(opt));
    rec.extend([row.thm1, row.cor1, row.thm2, row.eq_condition].map(opt_bool));
    let c = row.closeness.as_ref();
    rec.extend(
        [
            c.map(|c| c.constants.l),
            c.map(|c| c.constants.kappa1),
            c.map(|c| c.constants.kappa2),
            c.map(|c| c.constants.eta),
            c.and_then(|c| c.bound),
            c.map(|c| c.measured_hausdorff),
            row.ux_case1,
            row.ux_case2,
            row.ux_case3,
        ]
        .map(opt),
    );
    rec.push(row.error.clone().unwrap_or_default());
    rec
}

/// results.csv: header plus one row per cell in cell order.
pub fn write_csv(path: &Path, params: &[String], rows: &[ResultRow]) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header: Vec<String> = vec!["cell_i".into(), "cell_j".into()];
    header.extend(params.iter().cloned());
    header.extend(CSV_TAIL.iter().map(|s| s.to_string()));
    w.write_record(&header)?;
    for row in rows {
        w.write_record(row_record(row))?;
    }
    w.flush()?;
    Ok(())
}

fn write_table(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

/// results.csv plus whichever figure data the rows support, each with a
/// gnuplot script.
pub fn write_outputs(config: &RunConfig, rows: &[ResultRow], dir: &Path) -> Result<(), HarnessError> {
    fs::create_dir_all(dir)?;
    let names = param_names(config);
    write_csv(&dir.join("results.csv"), &names, rows)?;
    let p1 = names.first().cloned().unwrap_or_else(|| "cell".into());
    let p2 = names.get(1).cloned();

    let indicator = |r: &ResultRow| r.eq_condition.or(r.thm1);
    if let Some(p2) = &p2 {
        if rows.iter().any(|r| indicator(r).is_some()) {
            heatmap(config, rows, dir, &p1, p2, &indicator)?;
        }
    }
    if rows.iter().any(|r| r.ux_case1.is_some()) {
        let table: Vec<Vec<String>> = rows
            .iter()
            .map(|r| {
                let mut v = vec![r.cell_i.to_string(), r.cell_j.to_string()];
                v.push(opt(r.params.first().copied()));
                v.push(opt(r.params.get(1).copied()));
                v.extend([r.ux_case1, r.ux_case2, r.ux_case3, r.ux_se, r.ux_ne].map(opt));
                v
            })
            .collect();
        write_table(
            &dir.join("utilities.csv"),
            &["cell_i", "cell_j", "p1", "p2", "case1", "case2", "case3", "ux_se", "ux_ne"],
            &table,
        )?;
        fs::write(
            dir.join("utilities.gp"),
            format!(
                "set datafile separator ','\nset key autotitle columnhead\nset xlabel '{p1}'\nset ylabel 'U_X'\n\
                 plot 'utilities.csv' using 3:5 with linespoints title 'case 1 (SE)', \\\n\
                 \x20    '' using 3:6 with linespoints title 'case 2 (x_SE, y_NE, z_NE)', \\\n\
                 \x20    '' using 3:7 with linespoints title 'case 3 (NE)'\n"
            ),
        )?;
    }
    if rows.iter().any(|r| !r.se.is_empty() || !r.ne.is_empty()) {
        let mut table = Vec::new();
        for r in rows {
            for (kind, set) in [("SE", &r.se), ("NE", &r.ne)] {
                for p in set.iter() {
                    table.push(vec![
                        r.cell_i.to_string(),
                        r.cell_j.to_string(),
                        kind.to_string(),
                        format_sig(p.x),
                        format_sig(p.y),
                        format_sig(p.z),
                    ]);
                }
            }
        }
        write_table(&dir.join("projections.csv"), &["cell_i", "cell_j", "kind", "x", "y", "z"], &table)?;
        fs::write(
            dir.join("projections.gp"),
            "set datafile separator ','\nset xlabel 'x'\nset ylabel 'z'\n\
             plot 'projections.csv' using (strcol(3) eq 'SE' ? $4 : 1/0):6 with points pt 7 title 'SE', \\\n\
             \x20    '' using (strcol(3) eq 'NE' ? $4 : 1/0):6 with points pt 6 ps 2 title 'NE'\n",
        )?;
    }
    let bounded: Vec<&ResultRow> = rows
        .iter()
        .filter(|r| r.closeness.as_ref().is_some_and(|c| c.bound.is_some()))
        .collect();
    if !bounded.is_empty() {
        let eta_max = bounded
            .iter()
            .map(|r| r.closeness.as_ref().map_or(0.0, |c| c.constants.eta))
            .fold(0.0, f64::max);
        let eta_max = if eta_max > 0.0 { eta_max } else { 1.0 };
        let mut lines = Vec::new();
        let mut slopes = Vec::new();
        for r in &bounded {
            let c = r.closeness.as_ref().expect("filtered");
            let k = &c.constants;
            let slope = (1.0 + k.l) * (k.kappa1 + k.kappa2) / (k.kappa1 * k.kappa2);
            for s in 0..=10 {
                let eta = eta_max * s as f64 / 10.0;
                lines.push(vec![
                    r.cell_i.to_string(),
                    r.cell_j.to_string(),
                    opt(r.params.first().copied()),
                    format_sig(eta),
                    format_sig(slope * eta),
                ]);
            }
            slopes.push(vec![
                r.cell_i.to_string(),
                r.cell_j.to_string(),
                opt(r.params.first().copied()),
                format_sig(slope),
                format_sig(k.l),
                format_sig(k.kappa1),
                format_sig(k.kappa2),
                format_sig(k.eta),
                opt(c.bound),
                format_sig(c.measured_hausdorff),
            ]);
        }
        write_table(&dir.join("bound_lines.csv"), &["cell_i", "cell_j", "p1", "eta", "bound"], &lines)?;
        write_table(
            &dir.join("slopes.csv"),
            &["cell_i", "cell_j", "p1", "slope", "l", "kappa1", "kappa2", "eta", "bound", "hausdorff"],
            &slopes,
        )?;
        fs::write(
            dir.join("bound_lines.gp"),
            format!(
                "set datafile separator ','\nset xlabel 'eta'\nset ylabel 'bound on H'\nset key left top\n\
                 plot for [i=0:{}] 'bound_lines.csv' every ::1 using ($1==i ? $4 : 1/0):5 with lines title sprintf('{p1} #%d', i)\n",
                bounded.iter().map(|r| r.cell_i).max().unwrap_or(0)
            ),
        )?;
    }
    Ok(())
}

fn heatmap(
    config: &RunConfig,
    rows: &[ResultRow],
    dir: &Path,
    p1: &str,
    p2: &str,
    indicator: &dyn Fn(&ResultRow) -> Option<bool>,
) -> Result<(), HarnessError> {
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.cell_i.to_string(),
                r.cell_j.to_string(),
                opt(r.params.first().copied()),
                opt(r.params.get(1).copied()),
                indicator(r).map(|b| if b { "1" } else { "0" }.to_string()).unwrap_or_default(),
            ]
        })
        .collect();
    write_table(&dir.join("heatmap.csv"), &["cell_i", "cell_j", "p1", "p2", "indicator"], &table)?;

    let k = config.sweep.as_ref().map_or(5, |s| s.ratio_block);
    let ni = rows.iter().map(|r| r.cell_i).max().unwrap_or(0) + 1;
    let nj = rows.iter().map(|r| r.cell_j).max().unwrap_or(0) + 1;
    let mut ratio = Vec::new();
    for bi in 0..ni.div_ceil(k) {
        for bj in 0..nj.div_ceil(k) {
            let members: Vec<&ResultRow> = rows
                .iter()
                .filter(|r| r.cell_i / k == bi && r.cell_j / k == bj)
                .collect();
            let known: Vec<bool> = members.iter().filter_map(|r| indicator(r)).collect();
            if known.is_empty() {
                continue;
            }
            let mean = |f: &dyn Fn(&ResultRow) -> f64| members.iter().map(|r| f(r)).sum::<f64>() / members.len() as f64;
            let c1 = mean(&|r| r.params.first().copied().unwrap_or(0.0));
            let c2 = mean(&|r| r.params.get(1).copied().unwrap_or(0.0));
            let share = known.iter().filter(|b| **b).count() as f64 / known.len() as f64;
            ratio.push(vec![bi.to_string(), bj.to_string(), format_sig(c1), format_sig(c2), format_sig(share)]);
        }
    }
    write_table(&dir.join("ratio.csv"), &["block_i", "block_j", "p1", "p2", "ratio"], &ratio)?;
    fs::write(
        dir.join("heatmap.gp"),
        format!(
            "set datafile separator ','\nset xlabel '{p1}'\nset ylabel '{p2}'\nset palette gray negative\n\
             set cbrange [0:1]\nset multiplot layout 1,2\n\
             plot 'heatmap.csv' every ::1 using 3:4:5 with points pt 5 palette title 'coincidence'\n\
             plot 'ratio.csv' every ::1 using 3:4:5 with points pt 5 ps 4 palette title 'ratio ({k}x{k} blocks)'\n\
             unset multiplot\n"
        ),
    )?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(0.125), "0.125");
        assert_eq!(format_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_sig(-2.5), "-2.5");
        assert_eq!(format_sig(123456.0), "123456");
        assert_eq!(format_sig(1e-9), "1e-9");
        assert_eq!(format_sig(2.0 / 3.0 * 1e-7), "6.66666666667e-8");
        let v = 0.12345678901234567;
        assert!((format_sig(v).parse::<f64>().unwrap() - v).abs() < 1e-12);
    }
}
