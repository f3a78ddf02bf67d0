//! Report rendering: JSON (stable key order) and flat CSV.

use khinlit::verify::{Verdict, VerificationReport};

/// One JSON object per report, keys in declaration order.
pub fn report_to_json(r: &VerificationReport) -> String {
    serde_json::to_string(r).expect("report serializes")
}

pub fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::Inconclusive => "inconclusive",
    }
}

/// Column order of the CSV flattening.
pub const REPORT_CSV_HEADER: &str =
    "claim_id,lhs,rhs,constant_value,constant_branch,margin,verdict,params,notes";

/// One CSV line per report; `params` flattens to `key=value` pairs
/// joined by `;`.
pub fn report_to_csv(r: &VerificationReport) -> String {
    let params = r
        .params
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(";");
    format!(
        "{},{},{},{},{},{},{},{},{}",
        csv_field(&r.claim_id),
        r.lhs,
        r.rhs,
        r.constant.value,
        csv_field(&r.constant.branch),
        r.margin,
        verdict_str(r.verdict),
        csv_field(&params),
        csv_field(&r.notes),
    )
}

/// Quotes a field when it contains separators or quotes.
pub fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use khinlit::verify::{verify_multiple_khinchine, KhinchineMode, VerifyOptions};
    use khinlit::{Complex64, ComplexTensor};

    fn sample_report() -> VerificationReport {
        let a = ComplexTensor::new(
            vec![2],
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.5, -0.5)],
        )
        .unwrap();
        verify_multiple_khinchine(
            &a,
            2.0,
            KhinchineMode::Discrete { order: 4 },
            &VerifyOptions::default(),
        )
        .unwrap()
    }

    #[test]
    fn json_has_stable_declaration_order() {
        let text = report_to_json(&sample_report());
        let claim = text.find("\"claim_id\"").unwrap();
        let lhs = text.find("\"lhs\"").unwrap();
        let verdict = text.find("\"verdict\"").unwrap();
        let notes = text.find("\"notes\"").unwrap();
        assert!(claim < lhs && lhs < verdict && verdict < notes);
    }

    #[test]
    fn csv_line_matches_the_header_arity() {
        let line = report_to_csv(&sample_report());
        // the notes field is quoted; count unquoted separators
        let mut in_quotes = false;
        let fields = line
            .chars()
            .filter(|&c| {
                if c == '"' {
                    in_quotes = !in_quotes;
                }
                c == ',' && !in_quotes
            })
            .count()
            + 1;
        assert_eq!(fields, REPORT_CSV_HEADER.split(',').count());
    }

    #[test]
    fn csv_escaping() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }
}
