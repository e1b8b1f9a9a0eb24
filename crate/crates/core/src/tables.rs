//! The published curves with induced mod-3 and mod-5 representations,
//! together with their recorded image group and quadratic field.

use crate::curve::GenusTwoCurve;
use crate::gsp4::GroupLabel;

#[derive(Debug, Clone, Copy)]
pub struct TableCurve {
    pub label: &'static str,
    pub equation: &'static str,
    pub p: u64,
    /// Recorded discriminant as `(prime, exponent)` pairs.
    pub disc: &'static [(u64, u32)],
    pub image: GroupLabel,
    pub delta_f: u64,
}

impl TableCurve {
    pub fn curve(&self) -> GenusTwoCurve {
        GenusTwoCurve::parse(self.equation)
            .expect("table curves are valid")
            .with_label(self.label)
    }
}

use GroupLabel::*;

pub const TABLE: [TableCurve; 17] = [
    TableCurve {
        label: "p3-01",
        equation: "y^2 = x^6 - 10x^4 + 2x^3 + 31x^2 - 13x - 18",
        p: 3,
        disc: &[(2, 8), (5, 3), (7, 3)],
        image: G480,
        delta_f: 5,
    },
    TableCurve {
        label: "p3-02",
        equation: "y^2 = -5x^6 - 20x^5 - 10x^4 + 36x^3 + 22x^2 - 20x",
        p: 3,
        disc: &[(2, 20), (5, 4), (7, 3)],
        image: G768Prime,
        delta_f: 5,
    },
    TableCurve {
        label: "p3-03",
        equation: "y^2 + y = -4x^5 - 23x^4 - 22x^3 + 74x^2 - 40x + 6",
        p: 3,
        disc: &[(2, 19), (5, 7), (7, 2)],
        image: G2304,
        delta_f: 5,
    },
    TableCurve {
        label: "p3-04",
        equation: "y^2 = 16x^6 - 46x^4 + 10x^3 + 46x^2 - 9x - 17",
        p: 3,
        disc: &[(2, 19), (5, 9), (7, 4)],
        image: G480,
        delta_f: 5,
    },
    TableCurve {
        label: "p3-05",
        equation: "y^2 = 2x^5 - 8x^4 + 26x^2 - 7x - 26",
        p: 3,
        disc: &[(2, 16), (5, 3)],
        image: G2304,
        delta_f: 8,
    },
    TableCurve {
        label: "p3-06",
        equation: "y^2 = x^5 - x^4 - 4x^3 - 44x^2 - 60x - 100",
        p: 3,
        disc: &[(2, 33), (5, 3), (7, 1)],
        image: G2304,
        delta_f: 8,
    },
    TableCurve {
        label: "p3-07",
        equation: "y^2 = x^5 - 17x^4 + 70x^3 + 26x^2 - 35x - 29",
        p: 3,
        disc: &[(2, 37), (5, 3), (7, 1)],
        image: G2304,
        delta_f: 8,
    },
    TableCurve {
        label: "p3-08",
        equation: "y^2 + x^2 y = 13x^6 - 29x^5 - 10x^4 + 41x^3 + 6x^2 + 20x + 20",
        p: 3,
        disc: &[(2, 16), (5, 2), (7, 16)],
        image: G2304,
        delta_f: 8,
    },
    TableCurve {
        label: "p3-09",
        equation: "y^2 = x^5 - 11x^4 - 2x^3 - 34x^2 - 5x - 25",
        p: 3,
        disc: &[(2, 21), (5, 3), (7, 3)],
        image: G768,
        delta_f: 8,
    },
    TableCurve {
        label: "p3-10",
        equation: "y^2 = -2x^6 - 41x^5 - 48x^4 + 54x^3 + 42x^2 - 49x",
        p: 3,
        disc: &[(2, 32), (5, 2), (7, 11)],
        image: G2304,
        delta_f: 8,
    },
    TableCurve {
        label: "p3-11",
        equation: "y^2 = 2x^5 + 34x^4 - 16x^3 - 52x^2 - 13x - 1",
        p: 3,
        disc: &[(2, 20), (5, 5), (7, 6)],
        image: G768Prime,
        delta_f: 8,
    },
    TableCurve {
        label: "p3-12",
        equation: "y^2 = 8x^6 - 24x^5 - 4x^4 + 20x^3 + 49x^2 - 21x - 28",
        p: 3,
        disc: &[(2, 23), (5, 6), (7, 9)],
        image: G2304,
        delta_f: 8,
    },
    TableCurve {
        label: "p3-13",
        equation: "y^2 + (x + 1)y = 64x^5 - 8x^4 + 39x^3 + x^2 + 2x + 1",
        p: 3,
        disc: &[(2, 27), (5, 6), (7, 6)],
        image: G480,
        delta_f: 40,
    },
    TableCurve {
        label: "p3-14",
        equation: "y^2 = 15x^5 + 23x^4 + 20x^3 + 28x^2 + 12x - 4",
        p: 3,
        disc: &[(2, 33), (3, 2), (5, 4)],
        image: G2304,
        delta_f: 40,
    },
    TableCurve {
        label: "p3-15",
        equation: "y^2 = 3x^5 + 7x^4 + 28x^3 + 20x^2 + 28x - 36",
        p: 3,
        disc: &[(2, 36), (3, 2), (5, 4)],
        image: G2304,
        delta_f: 40,
    },
    TableCurve {
        label: "p5-01",
        equation: "y^2 + xy = 7x^6 - 22x^5 - 7x^4 + 61x^3 - 3x^2 - 54x - 12",
        p: 5,
        disc: &[(2, 11), (3, 9), (7, 4)],
        image: G115200,
        delta_f: 8,
    },
    TableCurve {
        label: "p5-02",
        equation: "y^2 = 8x^6 - 24x^5 - 30x^4 + 8x^3 - 24x^2 - 48x - 8",
        p: 5,
        disc: &[(2, 51), (3, 8), (7, 1)],
        image: G115200,
        delta_f: 8,
    },
];

/// The curve with a mod-3 representation that looks induced from
/// `Q(sqrt 7)` up to 100 but is not.
pub const FALSE_POSITIVE: &str = "y^2 = x^5 - 2x^4 + 6x^3 + 5x^2 + 10x + 5";

/// A smaller twist of the `p3-05` row.
pub const TWIST_OF_P3_05: &str = "y^2 = 4x^5 + 6x^4 + 4x^3 + 6x^2 + 2x + 3";

pub fn table_curves(p: Option<u64>) -> impl Iterator<Item = &'static TableCurve> {
    TABLE.iter().filter(move |t| p.is_none_or(|p| t.p == p))
}
