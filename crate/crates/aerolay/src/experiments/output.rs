//! CSV output. Floats carry 9 significant digits so files byte-compare
//! across runs of the same (config, seed).

use std::path::Path;

use crate::error::Result;

/// One row of the long-format results schema.
pub struct Row<'a> {
    pub grid_value: f64,
    pub link: &'a str,
    pub mode: &'a str,
    pub engine: &'a str,
    pub value: f64,
    /// Empty for analytical rows.
    pub ci: Option<f64>,
    /// Extra columns appended after the fixed ones.
    pub extra: Vec<(&'a str, String)>,
}

pub fn fmt_sig9(v: f64) -> String {
    format!("{v:.8e}")
}

/// Writes the long schema: the grid column named after the swept
/// variable, then link, mode, engine, value, ci (plus any extras).
pub fn write_long_csv(path: &Path, variable_column: &str, rows: &[Row<'_>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let extra_headers: Vec<&str> = rows
        .first()
        .map(|r| r.extra.iter().map(|(h, _)| *h).collect())
        .unwrap_or_default();
    let mut header = vec![variable_column, "link", "mode", "engine", "value", "ci"];
    header.extend(&extra_headers);
    w.write_record(&header)?;
    for row in rows {
        let mut rec = vec![
            fmt_sig9(row.grid_value),
            row.link.to_string(),
            row.mode.to_string(),
            row.engine.to_string(),
            fmt_sig9(row.value),
            row.ci.map(fmt_sig9).unwrap_or_default(),
        ];
        debug_assert_eq!(row.extra.len(), extra_headers.len());
        rec.extend(row.extra.iter().map(|(_, v)| v.clone()));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(fmt_sig9(0.1), "1.00000000e-1");
        assert_eq!(fmt_sig9(123456.789), "1.23456789e5");
    }

    #[test]
    fn long_csv_layout() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let rows = vec![Row {
            grid_value: -5.0,
            link: "u2u",
            mode: "underlay",
            engine: "analytical",
            value: 0.5,
            ci: None,
            extra: vec![("epsilon_u", fmt_sig9(0.6))],
        }];
        write_long_csv(&path, "t_db", &rows).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "t_db,link,mode,engine,value,ci,epsilon_u"
        );
        assert_eq!(
            lines.next().unwrap(),
            "-5.00000000e0,u2u,underlay,analytical,5.00000000e-1,,6.00000000e-1"
        );
    }
}
