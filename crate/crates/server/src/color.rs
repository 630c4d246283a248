//! Min-max normalisation of node values onto a blue-to-red spectral ramp.

/// ColorBrewer "Spectral" (11 classes), ordered from low (blue) to high (red).
pub const SPECTRAL: [[u8; 3]; 11] = [
    [0x5e, 0x4f, 0xa2],
    [0x32, 0x88, 0xbd],
    [0x66, 0xc2, 0xa5],
    [0xab, 0xdd, 0xa4],
    [0xe6, 0xf5, 0x98],
    [0xff, 0xff, 0xbf],
    [0xfe, 0xe0, 0x8b],
    [0xfd, 0xae, 0x61],
    [0xf4, 0x6d, 0x43],
    [0xd5, 0x3e, 0x4f],
    [0x9e, 0x01, 0x42],
];

/// Positions in `[0, 1]`; constant (or empty) input maps to 0.5. Non-finite
/// values are treated as the midpoint and ignored for the range.
pub fn normalize(values: &[f64]) -> Vec<f64> {
    let finite = values.iter().copied().filter(|v| v.is_finite());
    let (lo, hi) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    let span = hi - lo;
    values
        .iter()
        .map(|&v| if span.is_nan() || span <= 0.0 || !v.is_finite() { 0.5 } else { ((v - lo) / span).clamp(0.0, 1.0) })
        .collect()
}

pub fn spectral(t: f64) -> [u8; 3] {
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.5 };
    let x = t * (SPECTRAL.len() - 1) as f64;
    let k = (x.floor() as usize).min(SPECTRAL.len() - 2);
    let f = x - k as f64;
    let (a, b) = (SPECTRAL[k], SPECTRAL[k + 1]);
    [0, 1, 2].map(|c| (a[c] as f64 + f * (b[c] as f64 - a[c] as f64)).round() as u8)
}

pub fn hex(rgb: [u8; 3]) -> String {
    format!("#{:02x}{:02x}{:02x}", rgb[0], rgb[1], rgb[2])
}
