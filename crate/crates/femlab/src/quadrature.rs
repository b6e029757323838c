//! Symmetric triangle rules in barycentric coordinates; weights sum to one.

use std::sync::OnceLock;

pub type Rule = [([f64; 3], f64)];

fn orbit(a: f64, b: f64, w: f64) -> [([f64; 3], f64); 3] {
    [([a, b, b], w), ([b, a, b], w), ([b, b, a], w)]
}

/// Six points, exact for degree 4.
pub fn degree4() -> &'static Rule {
    static RULE: OnceLock<Vec<([f64; 3], f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let mut r = Vec::with_capacity(6);
        r.extend(orbit(0.108_103_018_168_070, 0.445_948_490_915_965, 0.223_381_589_678_011));
        r.extend(orbit(0.816_847_572_980_459, 0.091_576_213_509_771, 0.109_951_743_655_322));
        r
    })
}

/// Seven points, exact for degree 5.
pub fn degree5() -> &'static Rule {
    static RULE: OnceLock<Vec<([f64; 3], f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let s = 15f64.sqrt();
        let b1 = (6.0 + s) / 21.0;
        let b2 = (6.0 - s) / 21.0;
        let mut r = vec![([1.0 / 3.0; 3], 9.0 / 40.0)];
        r.extend(orbit(1.0 - 2.0 * b1, b1, (155.0 + s) / 1200.0));
        r.extend(orbit(1.0 - 2.0 * b2, b2, (155.0 - s) / 1200.0));
        r
    })
}

/// Maps barycentric coordinates onto the triangle `p`.
pub fn point(p: &[[f64; 2]; 3], bary: &[f64; 3]) -> [f64; 2] {
    [
        bary[0] * p[0][0] + bary[1] * p[1][0] + bary[2] * p[2][0],
        bary[0] * p[0][1] + bary[1] * p[1][1] + bary[2] * p[2][1],
    ]
}
