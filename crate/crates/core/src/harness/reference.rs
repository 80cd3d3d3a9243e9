//! Published results quoted for side-by-side comparison. Competitor columns
//! (ROAD and its variants) are reproduced only as quoted numbers.

/// Median test error in percent with the standard error in parentheses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuotedCell {
    pub median: f64,
    pub se: f64,
}

const fn c(median: f64, se: f64) -> QuotedCell {
    QuotedCell { median, se }
}

pub(crate) const RHO_GRID: [f64; 10] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

pub(crate) const EQUAL_CORR_COLUMNS: [&str; 7] = [
    "D-criterion",
    "ROAD",
    "S-ROAD1",
    "S-ROAD2",
    "NB",
    "Oracle",
    "T-criterion",
];

/// Equal correlation, normal samples.
pub(crate) const TABLE1: [[QuotedCell; 7]; 10] = [
    [
        c(9.6, 1.55),
        c(9.4, 2.91),
        c(11.4, 3.54),
        c(9.6, 3.24),
        c(6.6, 1.23),
        c(5.6, 1.13),
        c(6.2, 1.18),
    ],
    [
        c(9.2, 1.52),
        c(8.4, 2.50),
        c(8.6, 2.58),
        c(8.4, 2.50),
        c(12.4, 1.57),
        c(5.4, 1.12),
        c(12.4, 1.57),
    ],
    [
        c(8.0, 1.49),
        c(7.2, 2.39),
        c(7.4, 2.42),
        c(7.2, 2.39),
        c(16.8, 1.77),
        c(4.4, 1.06),
        c(16.8, 1.76),
    ],
    [
        c(6.4, 1.37),
        c(6.0, 1.87),
        c(6.0, 1.86),
        c(6.0, 1.87),
        c(20.2, 1.88),
        c(3.4, 0.96),
        c(20.2, 1.87),
    ],
    [
        c(5.0, 1.24),
        c(4.6, 1.55),
        c(4.6, 1.55),
        c(4.6, 1.55),
        c(22.6, 1.94),
        c(2.4, 0.82),
        c(22.6, 1.94),
    ],
    [
        c(3.4, 1.04),
        c(3.2, 1.02),
        c(3.2, 1.02),
        c(3.2, 1.02),
        c(24.6, 2.00),
        c(1.6, 0.65),
        c(24.6, 1.99),
    ],
    [
        c(2.0, 0.79),
        c(1.8, 0.73),
        c(1.8, 0.74),
        c(1.8, 0.73),
        c(26.2, 2.04),
        c(0.8, 0.46),
        c(26.2, 2.03),
    ],
    [
        c(0.8, 0.51),
        c(0.8, 0.47),
        c(0.8, 0.47),
        c(0.8, 0.47),
        c(27.4, 2.06),
        c(0.2, 0.26),
        c(27.4, 2.05),
    ],
    [
        c(0.2, 0.22),
        c(0.2, 0.20),
        c(0.2, 0.20),
        c(0.2, 0.20),
        c(28.6, 2.08),
        c(0.0, 0.09),
        c(28.6, 2.07),
    ],
    [
        c(0.0, 0.02),
        c(0.0, 0.02),
        c(0.0, 0.02),
        c(0.0, 0.02),
        c(29.6, 2.10),
        c(0.0, 0.00),
        c(29.6, 2.10),
    ],
];

/// Equal correlation, Student t samples with 7 degrees of freedom.
pub(crate) const TABLE2: [[QuotedCell; 7]; 10] = [
    [
        c(12.0, 1.55),
        c(9.0, 2.76),
        c(9.0, 2.80),
        c(9.0, 3.24),
        c(9.1, 1.29),
        c(7.8, 1.29),
        c(8.6, 1.24),
    ],
    [
        c(11.6, 1.56),
        c(9.8, 3.11),
        c(15.2, 6.32),
        c(11.6, 3.61),
        c(15.2, 4.17),
        c(7.6, 1.27),
        c(14.8, 3.40),
    ],
    [
        c(10.4, 1.48),
        c(8.6, 2.81),
        c(19.6, 6.76),
        c(11.4, 3.44),
        c(19.2, 7.00),
        c(6.6, 1.23),
        c(19.0, 5.79),
    ],
    [
        c(9.0, 1.38),
        c(7.4, 2.36),
        c(24.0, 7.26),
        c(10.6, 3.00),
        c(22.4, 8.83),
        c(5.6, 1.16),
        c(22.0, 7.58),
    ],
    [
        c(7.6, 1.27),
        c(6.0, 1.50),
        c(27.6, 8.06),
        c(9.2, 2.73),
        c(24.8, 10.15),
        c(4.6, 1.06),
        c(24.2, 8.99),
    ],
    [
        c(6.0, 1.13),
        c(4.8, 1.00),
        c(28.9, 9.35),
        c(7.8, 2.26),
        c(27.0, 11.11),
        c(3.4, 0.91),
        c(26.2, 10.11),
    ],
    [
        c(4.4, 0.97),
        c(3.4, 0.84),
        c(29.2, 10.83),
        c(6.0, 1.73),
        c(29.0, 11.90),
        c(2.4, 0.75),
        c(27.6, 11.02),
    ],
    [
        c(2.8, 0.78),
        c(2.0, 0.65),
        c(29.2, 12.32),
        c(4.0, 1.26),
        c(30.6, 12.51),
        c(1.4, 0.57),
        c(29.0, 11.79),
    ],
    [
        c(1.2, 0.53),
        c(0.8, 0.43),
        c(28.8, 13.74),
        c(2.0, 0.90),
        c(32.0, 13.01),
        c(0.6, 0.36),
        c(30.2, 12.44),
    ],
    [
        c(0.2, 0.23),
        c(0.2, 0.20),
        c(28.6, 15.06),
        c(0.4, 0.39),
        c(33.4, 13.35),
        c(0.0, 0.14),
        c(31.2, 12.96),
    ],
];

pub(crate) const AR1_COLUMNS: [&str; 6] = [
    "D-criterion",
    "ROAD",
    "S-ROAD1",
    "S-ROAD2",
    "Oracle",
    "T-criterion",
];

/// Autoregressive correlation, normal samples.
pub(crate) const TABLE3: [[QuotedCell; 6]; 10] = [
    [
        c(9.6, 1.55),
        c(9.4, 2.91),
        c(11.6, 3.54),
        c(9.6, 3.24),
        c(5.6, 1.13),
        c(6.2, 1.18),
    ],
    [
        c(11.8, 1.68),
        c(11.4, 3.42),
        c(12.8, 3.67),
        c(11.6, 3.61),
        c(0.0, 0.09),
        c(8.0, 1.31),
    ],
    [
        c(14.2, 1.80),
        c(13.4, 4.27),
        c(14.4, 4.02),
        c(13.6, 4.39),
        c(0.0, 0.15),
        c(10.0, 1.44),
    ],
    [
        c(16.4, 1.89),
        c(15.4, 5.48),
        c(16.0, 4.61),
        c(15.6, 5.55),
        c(0.4, 0.33),
        c(12.2, 1.57),
    ],
    [
        c(18.6, 1.99),
        c(17.4, 6.78),
        c(17.8, 5.95),
        c(17.6, 6.73),
        c(1.8, 0.64),
        c(14.8, 1.70),
    ],
    [
        c(20.8, 2.07),
        c(19.6, 7.54),
        c(20.0, 7.29),
        c(19.8, 7.52),
        c(4.6, 1.02),
        c(17.8, 1.81),
    ],
    [
        c(22.6, 2.16),
        c(22.0, 7.53),
        c(22.6, 7.34),
        c(22.2, 7.46),
        c(8.6, 1.38),
        c(21.4, 1.92),
    ],
    [
        c(23.6, 2.26),
        c(23.8, 7.71),
        c(26.0, 7.54),
        c(24.0, 7.64),
        c(12.6, 1.71),
        c(25.0, 2.03),
    ],
    [
        c(22.8, 2.38),
        c(23.2, 8.14),
        c(30.6, 7.67),
        c(23.8, 8.19),
        c(14.6, 1.94),
        c(31.0, 2.12),
    ],
    [
        c(17.0, 2.39),
        c(17.0, 7.31),
        c(33.4, 9.13),
        c(18.0, 8.26),
        c(11.4, 1.93),
        c(37.0, 2.19),
    ],
];

pub(crate) const TABLE4_SIZES: [usize; 9] = [100, 150, 200, 250, 300, 350, 400, 450, 500];

/// T-criterion, p = 500, Σ = I, delocalized means.
pub(crate) const TABLE4: [QuotedCell; 9] = [
    c(13.00, 2.52),
    c(11.00, 1.90),
    c(9.75, 1.57),
    c(9.00, 1.35),
    c(8.50, 1.20),
    c(8.14, 1.11),
    c(7.88, 1.01),
    c(7.56, 0.95),
    c(7.40, 0.89),
];

/// Leukemia data: (method, training errors, testing errors, genes used).
pub const QUOTED_TABLE5: [(&str, usize, usize, usize); 6] = [
    ("T-criterion", 0, 2, 7129),
    ("ROAD", 0, 1, 40),
    ("SCRDA", 1, 2, 264),
    ("FAIR", 1, 1, 11),
    ("NSC", 1, 3, 24),
    ("NB", 0, 5, 7129),
];
