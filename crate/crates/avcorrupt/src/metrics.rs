//! Robustness evaluation: accuracy, multilabel mean average precision,
//! accuracy-drop robustness scores, retrieval recall, and per-benchmark
//! report aggregation.

use std::collections::BTreeSet;
use std::path::Path;

use thiserror::Error;

use crate::catalog::CorruptionFamily;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("no rows match family '{family}' severity {severity}")]
    NoRows { family: String, severity: u8 },
    #[error("operation requires multilabel = {expected}, log has {found}")]
    MultilabelMismatch { expected: bool, found: bool },
    #[error("no class has a positive example")]
    NoPositives,
    #[error("clean accuracy must be positive, got {0}")]
    ZeroClean(f64),
    #[error("k = {k} invalid for an {n}x{n} similarity matrix")]
    BadK { k: usize, n: usize },
    #[error("corrupt log contains clip ids absent from the clean log: {0:?}")]
    ClipSetMismatch(Vec<String>),
    #[error("eval log schema error: {0}")]
    Schema(String),
    #[error("similarity matrix length {len} is not n*n for n = {n}")]
    NotSquare { len: usize, n: usize },
    #[error("io failure: {0}")]
    Io(#[from] std::io::Error),
}

/// One prediction record: per-class scores plus the ground-truth label set.
#[derive(Clone, Debug)]
pub struct EvalRow {
    pub clip_id: String,
    pub family: String,
    pub severity: u8,
    pub true_labels: Vec<usize>,
    pub scores: Vec<f64>,
}

/// A set of prediction records with a fixed class count.
#[derive(Clone, Debug)]
pub struct EvalLog {
    pub rows: Vec<EvalRow>,
    pub multilabel: bool,
    pub class_count: usize,
}

impl EvalLog {
    pub fn new(rows: Vec<EvalRow>, multilabel: bool) -> Result<Self, MetricsError> {
        let class_count = rows
            .first()
            .map(|r| r.scores.len())
            .ok_or_else(|| MetricsError::Schema("empty log".into()))?;
        for row in &rows {
            if row.scores.len() != class_count {
                return Err(MetricsError::Schema(format!(
                    "row '{}' has {} scores, expected {class_count}",
                    row.clip_id,
                    row.scores.len()
                )));
            }
            if let Some(&label) = row.true_labels.iter().find(|&&l| l >= class_count) {
                return Err(MetricsError::Schema(format!(
                    "row '{}' label {label} out of range",
                    row.clip_id
                )));
            }
        }
        Ok(EvalLog {
            rows,
            multilabel,
            class_count,
        })
    }

    fn select(&self, family: &str, severity: u8) -> Vec<&EvalRow> {
        self.rows
            .iter()
            .filter(|r| r.family == family && r.severity == severity)
            .collect()
    }

    /// Distinct (family, severity) cells, clean rows excluded.
    pub fn cells(&self) -> Vec<(String, u8)> {
        let mut cells = BTreeSet::new();
        for row in &self.rows {
            if row.family != "clean" {
                cells.insert((row.family.clone(), row.severity));
            }
        }
        cells.into_iter().collect()
    }

    pub fn clip_ids(&self) -> BTreeSet<&str> {
        self.rows.iter().map(|r| r.clip_id.as_str()).collect()
    }
}

/// Top-1 accuracy in percent. Argmax ties break toward the lowest class
/// index; a row counts as correct when the winner is in its label set.
pub fn accuracy(log: &EvalLog, family: &str, severity: u8) -> Result<f64, MetricsError> {
    if log.multilabel {
        return Err(MetricsError::MultilabelMismatch {
            expected: false,
            found: true,
        });
    }
    let rows = log.select(family, severity);
    if rows.is_empty() {
        return Err(MetricsError::NoRows {
            family: family.to_string(),
            severity,
        });
    }
    let correct = rows
        .iter()
        .filter(|row| row.true_labels.contains(&argmax(&row.scores)))
        .count();
    Ok(100.0 * correct as f64 / rows.len() as f64)
}

fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

/// Non-interpolated mean average precision in percent, macro-averaged over
/// classes with at least one positive. Ranking ties break by clip id.
pub fn mean_average_precision(
    log: &EvalLog,
    family: &str,
    severity: u8,
) -> Result<f64, MetricsError> {
    if !log.multilabel {
        return Err(MetricsError::MultilabelMismatch {
            expected: true,
            found: false,
        });
    }
    let rows = log.select(family, severity);
    if rows.is_empty() {
        return Err(MetricsError::NoRows {
            family: family.to_string(),
            severity,
        });
    }
    let mut ap_sum = 0.0;
    let mut eligible = 0usize;
    for class in 0..log.class_count {
        let positives = rows
            .iter()
            .filter(|r| r.true_labels.contains(&class))
            .count();
        if positives == 0 {
            continue;
        }
        let mut ranked: Vec<&&EvalRow> = rows.iter().collect();
        ranked.sort_by(|a, b| {
            b.scores[class]
                .partial_cmp(&a.scores[class])
                .expect("finite scores")
                .then_with(|| a.clip_id.cmp(&b.clip_id))
        });
        let mut hits = 0usize;
        let mut precision_sum = 0.0;
        for (rank0, row) in ranked.iter().enumerate() {
            if row.true_labels.contains(&class) {
                hits += 1;
                precision_sum += hits as f64 / (rank0 + 1) as f64;
            }
        }
        ap_sum += precision_sum / positives as f64;
        eligible += 1;
    }
    if eligible == 0 {
        return Err(MetricsError::NoPositives);
    }
    Ok(100.0 * ap_sum / eligible as f64)
}

/// Accuracy drop and the two robustness scores derived from it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Robustness {
    pub delta_a: f64,
    pub alpha: f64,
    pub rho: f64,
}

/// `delta = clean - corrupt`, `alpha = 1 - delta/100`, `rho = 1 - delta/clean`.
/// Values are exact and unclamped: a model that improves under corruption
/// yields scores above one, which the report flags rather than hides.
pub fn robustness(a_clean: f64, a_corrupt: f64) -> Result<Robustness, MetricsError> {
    if a_clean <= 0.0 {
        return Err(MetricsError::ZeroClean(a_clean));
    }
    let delta_a = a_clean - a_corrupt;
    Ok(Robustness {
        delta_a,
        alpha: 1.0 - delta_a / 100.0,
        rho: 1.0 - delta_a / a_clean,
    })
}

/// Fraction of rows whose diagonal entry ranks in the row's top `k`
/// (ties resolved toward the lowest column index).
pub fn recall_at_k(similarity: &[f64], n: usize, k: usize) -> Result<f64, MetricsError> {
    if similarity.len() != n * n {
        return Err(MetricsError::NotSquare {
            len: similarity.len(),
            n,
        });
    }
    if k == 0 || k > n {
        return Err(MetricsError::BadK { k, n });
    }
    let mut hits = 0usize;
    let mut order: Vec<usize> = Vec::with_capacity(n);
    for row in 0..n {
        let values = &similarity[row * n..(row + 1) * n];
        order.clear();
        order.extend(0..n);
        order.sort_by(|&a, &b| {
            values[b]
                .partial_cmp(&values[a])
                .expect("finite similarities")
                .then_with(|| a.cmp(&b))
        });
        if order[..k].contains(&row) {
            hits += 1;
        }
    }
    Ok(hits as f64 / n as f64)
}

/// One (family, severity) line of a robustness report.
#[derive(Clone, Debug)]
pub struct ReportCell {
    pub family: String,
    pub severity: u8,
    pub metric: f64,
    pub delta_a: f64,
    pub alpha: f64,
    pub rho: f64,
    /// True when the model scored better under corruption than clean.
    pub improved: bool,
}

#[derive(Clone, Debug)]
pub struct RobustnessReport {
    pub multilabel: bool,
    pub clean_metric: f64,
    pub cells: Vec<ReportCell>,
    pub mean_metric: f64,
    pub mean_alpha: f64,
    pub mean_rho: f64,
    /// Distinct corruption families present, out of the full fifteen.
    pub families_covered: usize,
}

impl RobustnessReport {
    pub fn full_coverage(&self) -> bool {
        self.families_covered == CorruptionFamily::ALL.len()
    }

    /// CSV with one row per cell plus a trailing mean row. Values carry full
    /// precision; display rounding is the consumer's choice.
    pub fn to_csv(&self) -> String {
        let metric_name = if self.multilabel { "map" } else { "accuracy" };
        let mut out = format!("family,severity,{metric_name},clean,delta_a,alpha,rho,improved\n");
        for cell in &self.cells {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                cell.family,
                cell.severity,
                cell.metric,
                self.clean_metric,
                cell.delta_a,
                cell.alpha,
                cell.rho,
                cell.improved
            ));
        }
        out.push_str(&format!(
            "mean,,{},{},{},{},{},\n",
            self.mean_metric,
            self.clean_metric,
            self.clean_metric - self.mean_metric,
            self.mean_alpha,
            self.mean_rho,
        ));
        out
    }
}

/// Builds the full report: clean reference from `clean_log` (family
/// "clean", severity 0), one cell per corrupt (family, severity), and
/// means over cells.
pub fn aggregate_report(
    log: &EvalLog,
    clean_log: &EvalLog,
) -> Result<RobustnessReport, MetricsError> {
    if log.multilabel != clean_log.multilabel {
        return Err(MetricsError::MultilabelMismatch {
            expected: clean_log.multilabel,
            found: log.multilabel,
        });
    }
    let clean_ids = clean_log.clip_ids();
    let missing: Vec<String> = log
        .clip_ids()
        .difference(&clean_ids)
        .map(|s| s.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(MetricsError::ClipSetMismatch(missing));
    }

    let metric = |l: &EvalLog, family: &str, severity: u8| {
        if l.multilabel {
            mean_average_precision(l, family, severity)
        } else {
            accuracy(l, family, severity)
        }
    };
    let clean_metric = metric(clean_log, "clean", 0)?;

    let mut cells = Vec::new();
    let mut families = BTreeSet::new();
    for (family, severity) in log.cells() {
        let value = metric(log, &family, severity)?;
        let r = robustness(clean_metric, value)?;
        families.insert(family.clone());
        cells.push(ReportCell {
            family,
            severity,
            metric: value,
            delta_a: r.delta_a,
            alpha: r.alpha,
            rho: r.rho,
            improved: r.delta_a < 0.0,
        });
    }
    if cells.is_empty() {
        return Err(MetricsError::NoRows {
            family: "(any)".into(),
            severity: 0,
        });
    }
    let n = cells.len() as f64;
    Ok(RobustnessReport {
        multilabel: log.multilabel,
        clean_metric,
        mean_metric: cells.iter().map(|c| c.metric).sum::<f64>() / n,
        mean_alpha: cells.iter().map(|c| c.alpha).sum::<f64>() / n,
        mean_rho: cells.iter().map(|c| c.rho).sum::<f64>() / n,
        families_covered: families.len(),
        cells,
    })
}

/// Reads the eval-log CSV: `clip_id,family,severity,true_labels,score_0...`
/// with semicolon-joined labels. Clean rows use family "clean", severity 0.
pub fn read_eval_log(path: &Path, multilabel: bool) -> Result<EvalLog, MetricsError> {
    let text = std::fs::read_to_string(path)?;
    parse_eval_log(&text, multilabel)
}

pub fn parse_eval_log(text: &str, multilabel: bool) -> Result<EvalLog, MetricsError> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| MetricsError::Schema("empty file".into()))?;
    let columns: Vec<&str> = header.split(',').collect();
    if columns.len() < 5
        || columns[0] != "clip_id"
        || columns[1] != "family"
        || columns[2] != "severity"
        || columns[3] != "true_labels"
    {
        return Err(MetricsError::Schema(format!(
            "unexpected header '{header}'"
        )));
    }
    let class_count = columns.len() - 4;
    for (i, col) in columns[4..].iter().enumerate() {
        if *col != format!("score_{i}") {
            return Err(MetricsError::Schema(format!(
                "expected column score_{i}, found '{col}'"
            )));
        }
    }

    let mut rows = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != class_count + 4 {
            return Err(MetricsError::Schema(format!(
                "line {}: expected {} fields, found {}",
                lineno + 2,
                class_count + 4,
                fields.len()
            )));
        }
        let parse_err =
            |what: &str| MetricsError::Schema(format!("line {}: bad {what}", lineno + 2));
        let severity: u8 = fields[2].parse().map_err(|_| parse_err("severity"))?;
        let true_labels = if fields[3].is_empty() {
            Vec::new()
        } else {
            fields[3]
                .split(';')
                .map(|l| l.parse::<usize>().map_err(|_| parse_err("label")))
                .collect::<Result<_, _>>()?
        };
        let scores = fields[4..]
            .iter()
            .map(|s| s.parse::<f64>().map_err(|_| parse_err("score")))
            .collect::<Result<_, _>>()?;
        rows.push(EvalRow {
            clip_id: fields[0].to_string(),
            family: fields[1].to_string(),
            severity,
            true_labels,
            scores,
        });
    }
    EvalLog::new(rows, multilabel)
}

/// Writes the eval-log CSV format accepted by [`read_eval_log`].
pub fn write_eval_log(log: &EvalLog, path: &Path) -> Result<(), MetricsError> {
    let mut out = String::from("clip_id,family,severity,true_labels");
    for i in 0..log.class_count {
        out.push_str(&format!(",score_{i}"));
    }
    out.push('\n');
    for row in &log.rows {
        let labels = row
            .true_labels
            .iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>()
            .join(";");
        out.push_str(&format!(
            "{},{},{},{}",
            row.clip_id, row.family, row.severity, labels
        ));
        for s in &row.scores {
            out.push_str(&format!(",{s}"));
        }
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(clip: &str, family: &str, severity: u8, labels: &[usize], scores: &[f64]) -> EvalRow {
        EvalRow {
            clip_id: clip.to_string(),
            family: family.to_string(),
            severity,
            true_labels: labels.to_vec(),
            scores: scores.to_vec(),
        }
    }

    #[test]
    fn accuracy_ratio_and_ties() {
        let log = EvalLog::new(
            vec![
                row("a", "snow", 3, &[0], &[0.9, 0.1]),
                row("b", "snow", 3, &[1], &[0.2, 0.8]),
                row("c", "snow", 3, &[0], &[0.4, 0.6]), // wrong
                row("d", "snow", 3, &[1], &[0.1, 0.9]),
            ],
            false,
        )
        .unwrap();
        assert_eq!(accuracy(&log, "snow", 3).unwrap(), 75.0);

        // All-equal scores resolve to class 0.
        let ties = EvalLog::new(
            vec![
                row("a", "clean", 0, &[0], &[0.5, 0.5, 0.5]),
                row("b", "clean", 0, &[0], &[0.5, 0.5, 0.5]),
            ],
            false,
        )
        .unwrap();
        assert_eq!(accuracy(&ties, "clean", 0).unwrap(), 100.0);

        assert!(matches!(
            accuracy(&log, "rain", 1),
            Err(MetricsError::NoRows { .. })
        ));
    }

    #[test]
    fn map_matches_hand_enumeration() {
        // One class; positives rank 1st and 3rd of 4:
        // AP = (1/1 + 2/3) / 2 = 0.83333...
        let log = EvalLog::new(
            vec![
                row("a", "rain", 5, &[0], &[0.9]),
                row("b", "rain", 5, &[], &[0.8]),
                row("c", "rain", 5, &[0], &[0.7]),
                row("d", "rain", 5, &[], &[0.6]),
            ],
            true,
        )
        .unwrap();
        let map = mean_average_precision(&log, "rain", 5).unwrap();
        assert!((map - 100.0 * (1.0 + 2.0 / 3.0) / 2.0).abs() < 1e-9);

        // Perfect ranking.
        let perfect = EvalLog::new(
            vec![
                row("a", "rain", 5, &[0], &[0.9]),
                row("b", "rain", 5, &[0], &[0.8]),
                row("c", "rain", 5, &[], &[0.1]),
            ],
            true,
        )
        .unwrap();
        assert!((mean_average_precision(&perfect, "rain", 5).unwrap() - 100.0).abs() < 1e-12);

        // Degenerate single row.
        let single = EvalLog::new(vec![row("a", "rain", 5, &[0], &[0.7])], true).unwrap();
        assert!((mean_average_precision(&single, "rain", 5).unwrap() - 100.0).abs() < 1e-12);

        // No positives anywhere.
        let empty = EvalLog::new(vec![row("a", "rain", 5, &[], &[0.7])], true).unwrap();
        assert!(matches!(
            mean_average_precision(&empty, "rain", 5),
            Err(MetricsError::NoPositives)
        ));
    }

    /// Brute-force AP oracle: for each positive, rescan the whole ranking to
    /// count positives at or above it (no incremental state).
    pub(super) fn brute_force_map(rows: &[EvalRow], class_count: usize) -> Option<f64> {
        let mut ap_sum = 0.0;
        let mut eligible = 0;
        for class in 0..class_count {
            let mut ranked: Vec<&EvalRow> = rows.iter().collect();
            ranked.sort_by(|a, b| {
                b.scores[class]
                    .partial_cmp(&a.scores[class])
                    .unwrap()
                    .then_with(|| a.clip_id.cmp(&b.clip_id))
            });
            let positives: Vec<usize> = (0..ranked.len())
                .filter(|&i| ranked[i].true_labels.contains(&class))
                .collect();
            if positives.is_empty() {
                continue;
            }
            let mut precision_sum = 0.0;
            for &at in &positives {
                let k = at + 1;
                let hits = ranked[..k]
                    .iter()
                    .filter(|r| r.true_labels.contains(&class))
                    .count();
                precision_sum += hits as f64 / k as f64;
            }
            ap_sum += precision_sum / positives.len() as f64;
            eligible += 1;
        }
        (eligible > 0).then(|| 100.0 * ap_sum / eligible as f64)
    }

    #[test]
    fn map_agrees_with_brute_force_on_random_logs() {
        let mut rng = crate::rng::RngStream::from_fields([b"map-oracle".as_slice()]);
        for _ in 0..50 {
            let classes = 1 + rng.below(5);
            let n = 1 + rng.below(20);
            let rows: Vec<EvalRow> = (0..n)
                .map(|i| {
                    let labels = (0..classes).filter(|_| rng.unit() < 0.3).collect::<Vec<_>>();
                    let scores = (0..classes).map(|_| rng.unit()).collect::<Vec<_>>();
                    row(&format!("clip-{i:02}"), "x", 1, &labels, &scores)
                })
                .collect();
            let oracle = brute_force_map(&rows, classes);
            let log = EvalLog::new(rows, true).unwrap();
            match (mean_average_precision(&log, "x", 1), oracle) {
                (Ok(got), Some(want)) => {
                    assert!((got - want).abs() < 1e-9, "{got} vs {want}")
                }
                (Err(MetricsError::NoPositives), None) => {}
                (got, want) => panic!("mismatch: {got:?} vs {want:?}"),
            }
        }
    }

    #[test]
    fn robustness_reproduces_published_cells() {
        // Three (clean, corrupt) pairs with known 2-decimal scores.
        let cases = [
            (65.50, 35.54, 0.70, 0.54),
            (88.10, 58.15, 0.70, 0.66),
            (65.80, 27.41, 0.62, 0.42),
        ];
        for (clean, corrupt, alpha2, rho2) in cases {
            let r = robustness(clean, corrupt).unwrap();
            assert!(((r.alpha * 100.0).round() / 100.0 - alpha2).abs() < 1e-12);
            assert!(((r.rho * 100.0).round() / 100.0 - rho2).abs() < 1e-12);
        }
        // Zero drop.
        let r = robustness(42.0, 42.0).unwrap();
        assert_eq!(r.alpha, 1.0);
        assert_eq!(r.rho, 1.0);
        assert!(robustness(0.0, 10.0).is_err());
    }

    #[test]
    fn robustness_delta_is_exact_to_machine_precision() {
        for a in [5.0f64, 35.54, 65.50, 99.99] {
            for d in [0.0f64, 1.25, 29.96, 60.0] {
                let r = robustness(a, a - d).unwrap();
                // One rounding of (a - d) plus one of the subtraction.
                assert!((r.delta_a - d).abs() <= 64.0 * f64::EPSILON * a.max(1.0));
            }
        }
    }

    #[test]
    fn recall_identity_and_antidiagonal() {
        let n = 4;
        let mut identity = vec![0.0; n * n];
        for i in 0..n {
            identity[i * n + i] = 1.0;
        }
        assert_eq!(recall_at_k(&identity, n, 1).unwrap(), 1.0);

        let mut anti = vec![0.0; n * n];
        for i in 0..n {
            anti[i * n + (n - 1 - i)] = 1.0;
        }
        assert_eq!(recall_at_k(&anti, n, 1).unwrap(), 0.0);
        // With k = n every diagonal is always included.
        assert_eq!(recall_at_k(&anti, n, n).unwrap(), 1.0);

        assert!(matches!(
            recall_at_k(&identity, n, 0),
            Err(MetricsError::BadK { .. })
        ));
        assert!(matches!(
            recall_at_k(&identity, n, 5),
            Err(MetricsError::BadK { .. })
        ));
    }

    #[test]
    fn recall_with_three_forced_diagonals() {
        let n = 10;
        let mut rng = crate::rng::RngStream::from_fields([b"recall".as_slice()]);
        let mut sim: Vec<f64> = (0..n * n).map(|_| rng.unit()).collect();
        // Force rows 2, 5, 8 to have their diagonal strictly maximal.
        for &r in &[2usize, 5, 8] {
            sim[r * n + r] = 2.0;
        }
        // Force the remaining diagonals strictly minimal.
        for r in 0..n {
            if ![2, 5, 8].contains(&r) {
                sim[r * n + r] = -1.0;
            }
        }
        assert_eq!(recall_at_k(&sim, n, 1).unwrap(), 0.3);
    }

    #[test]
    fn aggregate_identical_logs_scores_one() {
        let clean = EvalLog::new(
            vec![
                row("a", "clean", 0, &[0], &[0.9, 0.1]),
                row("b", "clean", 0, &[1], &[0.2, 0.8]),
            ],
            false,
        )
        .unwrap();
        let corrupt = EvalLog::new(
            vec![
                row("a", "snow", 5, &[0], &[0.9, 0.1]),
                row("b", "snow", 5, &[1], &[0.2, 0.8]),
            ],
            false,
        )
        .unwrap();
        let report = aggregate_report(&corrupt, &clean).unwrap();
        assert_eq!(report.mean_alpha, 1.0);
        assert_eq!(report.mean_rho, 1.0);
        assert_eq!(report.families_covered, 1);
        assert!(!report.full_coverage());
    }

    #[test]
    fn aggregate_reproduces_the_published_mean() {
        // Fifteen families whose accuracies average 35.54 against a clean
        // accuracy of 65.50 must report mean alpha 0.70 and mean rho 0.54
        // at two decimals.
        let spread: Vec<f64> = (0..15).map(|i| 35.54 + (i as f64 - 7.0) * 0.8).collect();
        let mean: f64 = spread.iter().sum::<f64>() / 15.0;
        assert!((mean - 35.54).abs() < 1e-9);

        // Build logs over 10,000 synthetic clips per family cell so each
        // cell's accuracy is exactly its target percentage.
        let mut clean_rows = Vec::new();
        let mut corrupt_rows = Vec::new();
        let n = 10_000usize;
        for i in 0..n {
            // Clean accuracy 65.50%: first 6550 correct.
            let correct = i < 6550;
            let scores = if correct { [0.9, 0.1] } else { [0.1, 0.9] };
            clean_rows.push(row(&format!("c{i:05}"), "clean", 0, &[0], &scores));
        }
        for (f, target) in spread.iter().enumerate() {
            let correct_count = (target / 100.0 * n as f64).round() as usize;
            for i in 0..n {
                let scores = if i < correct_count { [0.9, 0.1] } else { [0.1, 0.9] };
                corrupt_rows.push(row(
                    &format!("c{i:05}"),
                    CorruptionFamily::ALL[f].name(),
                    5,
                    &[0],
                    &scores,
                ));
            }
        }
        let clean = EvalLog::new(clean_rows, false).unwrap();
        let corrupt = EvalLog::new(corrupt_rows, false).unwrap();
        let report = aggregate_report(&corrupt, &clean).unwrap();
        assert!((report.clean_metric - 65.50).abs() < 1e-9);
        assert!((report.mean_metric - 35.54).abs() < 0.01);
        assert!(((report.mean_alpha * 100.0).round() / 100.0 - 0.70).abs() < 1e-12);
        assert!(((report.mean_rho * 100.0).round() / 100.0 - 0.54).abs() < 1e-12);
        assert!(report.full_coverage());
    }

    #[test]
    fn aggregate_flags_partial_coverage_and_mismatch() {
        let clean = EvalLog::new(vec![row("a", "clean", 0, &[0], &[1.0, 0.0])], false).unwrap();
        let mut rows = Vec::new();
        for family in CorruptionFamily::ALL.iter().take(14) {
            rows.push(row("a", family.name(), 5, &[0], &[1.0, 0.0]));
        }
        let corrupt = EvalLog::new(rows, false).unwrap();
        let report = aggregate_report(&corrupt, &clean).unwrap();
        assert_eq!(report.families_covered, 14);
        assert!(!report.full_coverage());

        let stranger = EvalLog::new(vec![row("zz", "snow", 5, &[0], &[1.0, 0.0])], false).unwrap();
        assert!(matches!(
            aggregate_report(&stranger, &clean),
            Err(MetricsError::ClipSetMismatch(_))
        ));
    }

    #[test]
    fn csv_round_trip_preserves_the_log() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("log.csv");
        let log = EvalLog::new(
            vec![
                row("a", "clean", 0, &[0, 2], &[0.5, -1.25, 3.5]),
                row("b", "snow", 4, &[], &[0.125, 0.25, 0.375]),
            ],
            true,
        )
        .unwrap();
        write_eval_log(&log, &path).unwrap();
        let back = read_eval_log(&path, true).unwrap();
        assert_eq!(back.class_count, 3);
        assert_eq!(back.rows.len(), 2);
        assert_eq!(back.rows[0].true_labels, vec![0, 2]);
        assert_eq!(back.rows[0].scores, vec![0.5, -1.25, 3.5]);
        assert_eq!(back.rows[1].family, "snow");
        assert!(back.rows[1].true_labels.is_empty());
    }

    #[test]
    fn malformed_csv_is_rejected() {
        assert!(matches!(
            parse_eval_log("not,a,header\n", false),
            Err(MetricsError::Schema(_))
        ));
        assert!(matches!(
            parse_eval_log("clip_id,family,severity,true_labels,score_0\nx,snow,9z,0,1.0\n", false),
            Err(MetricsError::Schema(_))
        ));
    }
}
