//! Tab-separated tables with several (key, value) column pairs side by side,
//! filled column-major as in printed tables.

/// Lays out `cells` in `pairs` column pairs. Row count is ceil(len / pairs);
/// trailing empty slots are omitted from the last row.
pub fn paired_columns(header: (&str, &str), cells: &[(String, String)], pairs: usize) -> String {
    let pairs = pairs.max(1);
    let rows = cells.len().div_ceil(pairs);
    let used = if rows == 0 {
        1
    } else {
        cells.len().div_ceil(rows)
    };
    let mut out = String::new();
    let head: Vec<String> = (0..used)
        .map(|_| format!("{}\t{}", header.0, header.1))
        .collect();
    out.push_str(&head.join("\t"));
    out.push('\n');
    for row in 0..rows {
        let line: Vec<String> = (0..used)
            .filter_map(|col| cells.get(col * rows + row))
            .map(|(k, v)| format!("{k}\t{v}"))
            .collect();
        out.push_str(&line.join("\t"));
        out.push('\n');
    }
    out
}
