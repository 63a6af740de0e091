//! Fixed-rule quadratures shared by the geometry and asymptotics code.

const GL_NODES: [f64; 5] = [
    0.148_874_338_981_631_2,
    0.433_395_394_129_247_2,
    0.679_409_568_299_024_4,
    0.865_063_366_688_984_5,
    0.973_906_528_517_171_7,
];
const GL_WEIGHTS: [f64; 5] = [
    0.295_524_224_714_752_9,
    0.269_266_719_309_996_3,
    0.219_086_362_515_982,
    0.149_451_349_150_580_6,
    0.066_671_344_308_688_1,
];

/// Composite 10-point Gauss–Legendre over `[a, b]` with `panels` equal panels.
pub(crate) fn gauss_legendre(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for i in 0..panels {
        let mid = a + (i as f64 + 0.5) * h;
        let half = 0.5 * h;
        let mut s = 0.0;
        for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
            s += w * (f(mid - half * x) + f(mid + half * x));
        }
        total += s * half;
    }
    total
}

/// Tanh-sinh nodes on (−1, 1) as `(x, 1 − |x|, weight)` with step `h`.
///
/// The complement `1 − |x|` is computed without cancellation so callers can
/// evaluate endpoint singularities accurately.
pub(crate) fn tanh_sinh_nodes(h: f64) -> Vec<(f64, f64, f64)> {
    use std::f64::consts::FRAC_PI_2;
    let mut nodes = Vec::new();
    let mut k = 0i64;
    loop {
        let t = k as f64 * h;
        let u = FRAC_PI_2 * t.sinh();
        let cosh_u = u.cosh();
        let x = u.tanh();
        let complement = 1.0 / (u.exp() * cosh_u);
        let weight = h * FRAC_PI_2 * t.cosh() / (cosh_u * cosh_u);
        if complement < 1e-300 || weight < 1e-300 {
            break;
        }
        if k == 0 {
            nodes.push((0.0, 1.0, weight));
        } else {
            nodes.push((x, complement, weight));
            nodes.push((-x, complement, weight));
        }
        k += 1;
    }
    nodes
}
