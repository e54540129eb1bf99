//! Accuracy tables as printed in the original study, for side-by-side display.
//! Every number here is published, not reproduced.

/// Column order of every table.
pub const DATASETS: [&str; 6] = ["iris", "cancer", "liver", "pima", "seed", "vertebral"];

/// Label shown next to these numbers in any output.
pub const DISCLAIMER: &str = "published, not reproduced";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublishedRow {
    pub algorithm: &'static str,
    pub mean: [f64; 6],
    pub stddev: [f64; 6],
    pub rank: [f64; 6],
    pub average_rank: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublishedTable {
    pub title: &'static str,
    pub rows: &'static [PublishedRow],
}

pub const TABLES: [PublishedTable; 3] = [
    PublishedTable {
        title: "DE-based trainers",
        rows: TABLE_I,
    },
    PublishedTable {
        title: "Gradient-based trainers",
        rows: TABLE_II,
    },
    PublishedTable {
        title: "Population-based trainers",
        rows: TABLE_III,
    },
];

pub const TABLE_I: &[PublishedRow] = &[
    PublishedRow {
        algorithm: "DE",
        mean: [92.00, 97.36, 67.81, 76.94, 70.00, 85.16],
        stddev: [5.26, 2.06, 8.21, 4.97, 11.01, 5.31],
        rank: [4.0, 4.0, 4.0, 4.0, 2.0, 4.0],
        average_rank: 3.67,
    },
    PublishedRow {
        algorithm: "QODE",
        mean: [95.33, 98.10, 76.82, 79.55, 67.62, 88.39],
        stddev: [6.32, 0.99, 9.46, 4.95, 3.01, 8.76],
        rank: [3.0, 3.0, 2.0, 3.0, 3.5, 1.5],
        average_rank: 2.58,
    },
    PublishedRow {
        algorithm: "RDE-OP",
        mean: [96.67, 98.82, 75.63, 80.21, 67.62, 86.77],
        stddev: [6.48, 1.67, 6.45, 5.73, 4.92, 4.42],
        rank: [2.00, 1.00, 3.00, 2.00, 3.50, 3.00],
        average_rank: 2.42,
    },
    PublishedRow {
        algorithm: "CenDE-DOBL",
        mean: [98.67, 98.68, 78.79, 81.90, 90.95, 88.39],
        stddev: [2.81, 1.08, 8.64, 3.17, 10.15, 5.09],
        rank: [1.0, 2.0, 1.0, 1.0, 1.0, 1.5],
        average_rank: 1.33,
    },
];

pub const TABLE_II: &[PublishedRow] = &[
    PublishedRow {
        algorithm: "GDM",
        mean: [92.00, 92.99, 59.47, 67.98, 47.62, 76.13],
        stddev: [8.20, 7.60, 15.05, 13.03, 29.95, 9.15],
        rank: [12.0, 11.0, 12.0, 13.0, 13.0, 12.0],
        average_rank: 12.17,
    },
    PublishedRow {
        algorithm: "GDA",
        mean: [94.67, 95.90, 58.24, 75.91, 82.38, 80.65],
        stddev: [5.26, 2.04, 6.53, 4.52, 6.75, 5.27],
        rank: [10.0, 10.0, 13.0, 9.0, 9.5, 10.0],
        average_rank: 10.25,
    },
    PublishedRow {
        algorithm: "GDMA",
        mean: [82.67, 90.47, 60.66, 73.20, 80.00, 72.90],
        stddev: [16.98, 5.94, 13.99, 6.74, 16.47, 17.62],
        rank: [13.0, 13.0, 11.0, 12.0, 12.0, 13.0],
        average_rank: 12.33,
    },
    PublishedRow {
        algorithm: "CG-FR",
        mean: [95.33, 96.19, 60.86, 76.69, 86.67, 83.87],
        stddev: [4.50, 1.72, 8.29, 6.20, 9.73, 7.60],
        rank: [7.5, 7.0, 10.0, 5.0, 5.5, 4.0],
        average_rank: 6.50,
    },
    PublishedRow {
        algorithm: "CG-PR",
        mean: [96.00, 97.07, 65.18, 75.12, 85.24, 80.97],
        stddev: [6.44, 1.39, 8.47, 3.57, 9.90, 4.92],
        rank: [4.0, 2.0, 8.0, 11.0, 8.0, 8.5],
        average_rank: 6.92,
    },
    PublishedRow {
        algorithm: "CG-PBR",
        mean: [94.00, 96.49, 67.18, 76.04, 88.10, 82.90],
        stddev: [5.84, 2.95, 9.09, 5.06, 7.86, 6.09],
        rank: [11.0, 5.0, 3.0, 7.0, 3.5, 6.0],
        average_rank: 5.92,
    },
    PublishedRow {
        algorithm: "BFGS",
        mean: [95.33, 96.92, 65.22, 76.70, 86.67, 84.19],
        stddev: [4.50, 1.28, 7.06, 3.11, 9.73, 5.98],
        rank: [7.5, 3.0, 7.0, 4.0, 5.5, 3.0],
        average_rank: 5.00,
    },
    PublishedRow {
        algorithm: "LM",
        mean: [96.67, 96.04, 65.55, 76.04, 88.10, 83.55],
        stddev: [4.71, 2.51, 10.44, 4.66, 7.53, 7.04],
        rank: [2.0, 9.0, 6.0, 8.0, 3.5, 5.0],
        average_rank: 5.58,
    },
    PublishedRow {
        algorithm: "OSS",
        mean: [95.33, 96.34, 64.89, 76.58, 86.67, 80.97],
        stddev: [4.50, 2.21, 8.01, 4.30, 5.85, 8.93],
        rank: [7.5, 6.0, 9.0, 6.0, 7.0, 8.5],
        average_rank: 7.33,
    },
    PublishedRow {
        algorithm: "RP",
        mean: [95.33, 96.05286, 65.82, 76.83, 80.48, 78.39],
        stddev: [5.49, 2.47, 5.21, 4.50, 9.38, 5.05],
        rank: [7.5, 8.0, 5.0, 3.0, 11.0, 11.0],
        average_rank: 7.58,
    },
    PublishedRow {
        algorithm: "SCG",
        mean: [96.00, 96.63, 66.97, 78.52, 82.38, 82.26],
        stddev: [8.43, 2.09, 9.60, 3.05, 9.54, 8.50],
        rank: [4.0, 4.0, 4.0, 2.0, 9.5, 7.0],
        average_rank: 5.08,
    },
    PublishedRow {
        algorithm: "BR",
        mean: [96.00, 91.81, 70.71, 75.89, 90.95, 84.52],
        stddev: [7.17, 3.82, 6.93, 5.37, 7.60, 6.94],
        rank: [4.0, 12.0, 2.0, 10.0, 1.5, 2.0],
        average_rank: 5.25,
    },
    PublishedRow {
        algorithm: "CenDE-DOBL",
        mean: [98.67, 98.68, 78.79, 81.90, 90.95, 88.39],
        stddev: [2.81, 1.08, 8.64, 3.17, 10.15, 5.09],
        rank: [1.0, 1.0, 1.0, 1.0, 1.5, 1.0],
        average_rank: 1.08,
    },
];

pub const TABLE_III: &[PublishedRow] = &[
    PublishedRow {
        algorithm: "PSO",
        mean: [96.00, 97.95, 73.36, 77.60, 78.10, 86.45],
        stddev: [5.62, 1.72, 6.28, 3.24, 11.92, 8.02],
        rank: [5.0, 6.0, 3.0, 8.0, 6.0, 3.0],
        average_rank: 5.17,
    },
    PublishedRow {
        algorithm: "ABC",
        mean: [84.67, 97.95, 70.75, 78.26, 72.38, 82.90],
        stddev: [9.45, 1.03, 6.47, 4.45, 8.03, 5.70],
        rank: [12.0, 5.0, 7.0, 5.0, 8.5, 7.0],
        average_rank: 7.42,
    },
    PublishedRow {
        algorithm: "ICA",
        mean: [96.67, 97.22, 72.39, 79.42, 84.76, 86.77],
        stddev: [4.71, 1.46, 11.99, 5.77, 10.24, 4.67],
        rank: [4.00, 10.00, 5.00, 2.00, 2.00, 2.00],
        average_rank: 4.17,
    },
    PublishedRow {
        algorithm: "FA",
        mean: [92.00, 97.66, 73.55, 78.90, 72.38, 85.81],
        stddev: [5.26, 1.97, 12.64, 4.35, 14.69, 6.12],
        rank: [9.0, 8.0, 2.0, 4.0, 8.5, 4.5],
        average_rank: 6.00,
    },
    PublishedRow {
        algorithm: "GWO",
        mean: [93.33, 98.10, 73.01, 67.45, 78.10, 81.94],
        stddev: [4.44, 1.39, 9.74, 2.79, 10.09, 7.93],
        rank: [7.0, 2.0, 4.0, 12.0, 5.0, 10.5],
        average_rank: 6.75,
    },
    PublishedRow {
        algorithm: "ALO",
        mean: [94.67, 98.10, 71.06, 78.12, 80.48, 85.48],
        stddev: [2.81, 0.99, 6.20, 5.89, 8.53, 4.37],
        rank: [6.0, 3.0, 6.0, 6.0, 4.0, 6.0],
        average_rank: 5.17,
    },
    PublishedRow {
        algorithm: "DA",
        mean: [92.67, 97.51, 70.42, 77.85, 70.48, 81.94],
        stddev: [5.84, 1.83, 7.01, 5.40, 7.03, 5.31],
        rank: [8.0, 9.0, 9.0, 7.0, 11.5, 10.5],
        average_rank: 9.17,
    },
    PublishedRow {
        algorithm: "SCA",
        mean: [90.67, 97.08, 65.50, 74.47, 71.43, 82.26],
        stddev: [7.83, 1.82, 5.96, 4.20, 8.98, 10.67],
        rank: [10.0, 11.0, 11.0, 11.0, 10.0, 9.0],
        average_rank: 10.33,
    },
    PublishedRow {
        algorithm: "WOA",
        mean: [87.33, 97.07, 62.87, 76.95, 70.48, 79.03],
        stddev: [8.58, 1.96, 6.40, 3.65, 8.92, 10.99],
        rank: [11.0, 12.0, 12.0, 10.0, 11.5, 12.0],
        average_rank: 11.42,
    },
    PublishedRow {
        algorithm: "GOA",
        mean: [98.00, 98.09, 70.73, 79.03, 84.29, 82.58],
        stddev: [3.22, 1.84, 6.45, 3.72, 12.10, 6.49],
        rank: [2.5, 4.0, 8.0, 3.0, 3.0, 8.0],
        average_rank: 4.75,
    },
    PublishedRow {
        algorithm: "SSA",
        mean: [98.00, 97.80, 69.85, 77.34, 77.62, 85.81],
        stddev: [3.22, 2.42, 7.78, 6.50, 9.27, 7.16],
        rank: [2.5, 7.0, 10.0, 9.0, 7.0, 4.5],
        average_rank: 6.67,
    },
    PublishedRow {
        algorithm: "CenDE-DOBL",
        mean: [98.67, 98.68, 78.79, 81.90, 90.95, 88.39],
        stddev: [2.81, 1.08, 8.64, 3.17, 10.15, 5.09],
        rank: [1.0, 1.0, 1.0, 1.0, 1.0, 1.0],
        average_rank: 1.00,
    },
];
pub fn dataset_column(name: &str) -> Option<usize> {
    DATASETS.iter().position(|d| d.eq_ignore_ascii_case(name))
}

pub fn find_row(table: &PublishedTable, algorithm: &str) -> Option<&'static PublishedRow> {
    table.rows.iter().find(|r| r.algorithm.eq_ignore_ascii_case(algorithm))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn proposed_method_rows_agree_across_tables() {
        let rows: Vec<_> = TABLES.iter().map(|t| find_row(t, "CenDE-DOBL").unwrap()).collect();
        for r in &rows[1..] {
            assert_eq!(r.mean, rows[0].mean);
            assert_eq!(r.stddev, rows[0].stddev);
        }
    }

    #[test]
    fn table_shapes() {
        assert_eq!(TABLE_I.len(), 4);
        assert_eq!(TABLE_II.len(), 13);
        assert_eq!(TABLE_III.len(), 12);
        assert_eq!(dataset_column("Seed"), Some(4));
    }
}
