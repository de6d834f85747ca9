use super::image::{BinaryImage, GrayImage};

/// Threshold maximizing between-class variance for a 256-bin histogram.
///
/// Class 0 holds intensities `<= t`. Ties resolve to the smallest `t`. A
/// histogram with a single occupied bin returns that bin. Scores are compared
/// exactly for totals up to 2^27 samples.
pub fn otsu_level(hist: &[u64; 256]) -> u8 {
    let total: u64 = hist.iter().sum();
    let total_sum: u64 = hist.iter().enumerate().map(|(i, &c)| i as u64 * c).sum();
    if total == 0 {
        return 0;
    }

    let (mut n0, mut s0) = (0u64, 0u64);
    let mut best: Option<(u8, u128, u128)> = None;
    for (t, &count) in hist.iter().enumerate() {
        n0 += count;
        s0 += t as u64 * count;
        let n1 = total - n0;
        if n0 == 0 || n1 == 0 {
            continue;
        }
        // N² · σ_B² = (s0·N − S·n0)² / (n0·n1), kept as an exact fraction.
        let diff = (s0 as i128 * total as i128 - total_sum as i128 * n0 as i128).unsigned_abs();
        let (num, den) = (diff * diff, n0 as u128 * n1 as u128);
        if best.is_none_or(|(_, bn, bd)| fraction_gt(num, den, bn, bd)) {
            best = Some((t as u8, num, den));
        }
    }
    match best {
        Some((t, _, _)) => t,
        // Single occupied bin.
        None => hist.iter().position(|&c| c > 0).unwrap_or(0) as u8,
    }
}

/// `a/b > c/d` for positive denominators, without overflow.
fn fraction_gt(a: u128, b: u128, c: u128, d: u128) -> bool {
    let (qa, ra) = (a / b, a % b);
    let (qc, rc) = (c / d, c % d);
    if qa != qc {
        return qa > qc;
    }
    // Remainders are below the denominators, which fit in 2^64 each.
    ra * d > rc * b
}

/// Otsu binarization: pixels above the level become foreground.
pub fn otsu_threshold(img: &GrayImage) -> (u8, BinaryImage) {
    let t = otsu_level(&img.histogram());
    (t, BinaryImage::threshold(img, t))
}
