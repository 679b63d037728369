//! Exact Euclidean distance transform (Felzenszwalb & Huttenlocher).

/// Distance from every pixel to the nearest pixel where `inside` is false.
/// Pixels beyond the raster border count as outside, so a support touching
/// the edge still has distance 1 there.
pub fn interior_distance(inside: &[bool], width: usize, height: usize) -> Vec<f64> {
    assert_eq!(inside.len(), width * height);
    // pad by one ring of outside pixels
    let (pw, ph) = (width + 2, height + 2);
    let mut grid = vec![0.0f64; pw * ph];
    for y in 0..height {
        for x in 0..width {
            if inside[y * width + x] {
                grid[(y + 1) * pw + x + 1] = f64::INFINITY;
            }
        }
    }

    let mut column = vec![0.0; ph];
    let mut out = vec![0.0; ph];
    for x in 0..pw {
        for y in 0..ph {
            column[y] = grid[y * pw + x];
        }
        transform_1d(&column, &mut out);
        for y in 0..ph {
            grid[y * pw + x] = out[y];
        }
    }
    let mut row = vec![0.0; pw];
    let mut out = vec![0.0; pw];
    for y in 0..ph {
        row.copy_from_slice(&grid[y * pw..(y + 1) * pw]);
        transform_1d(&row, &mut out);
        grid[y * pw..(y + 1) * pw].copy_from_slice(&out);
    }

    let mut dist = vec![0.0; width * height];
    for y in 0..height {
        for x in 0..width {
            dist[y * width + x] = grid[(y + 1) * pw + x + 1].sqrt();
        }
    }
    dist
}

/// 1D squared distance transform of a sampled function (lower envelope of
/// parabolas).
fn transform_1d(f: &[f64], d: &mut [f64]) {
    let n = f.len();
    let mut v = vec![0usize; n];
    let mut z = vec![0.0f64; n + 1];
    let mut k = 0usize;
    // first finite sample
    let Some(first) = f.iter().position(|x| x.is_finite()) else {
        d.iter_mut().for_each(|x| *x = f64::INFINITY);
        return;
    };
    v[0] = first;
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;
    for q in first + 1..n {
        if !f[q].is_finite() {
            continue;
        }
        loop {
            let p = v[k];
            let s = ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64)) / (2.0 * (q as f64 - p as f64));
            if s <= z[k] {
                if k == 0 {
                    v[0] = q;
                    z[0] = f64::NEG_INFINITY;
                    z[1] = f64::INFINITY;
                    break;
                }
                k -= 1;
            } else {
                k += 1;
                v[k] = q;
                z[k] = s;
                z[k + 1] = f64::INFINITY;
                break;
            }
        }
    }
    k = 0;
    for (q, dq) in d.iter_mut().enumerate() {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let p = v[k];
        let dx = q as f64 - p as f64;
        *dq = dx * dx + f[p];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(inside: &[bool], w: usize, h: usize) -> Vec<f64> {
        let mut out = vec![0.0; w * h];
        for y in 0..h {
            for x in 0..w {
                if !inside[y * w + x] {
                    continue;
                }
                let mut best = f64::INFINITY;
                for yy in -1..=h as isize {
                    for xx in -1..=w as isize {
                        let outside = xx < 0
                            || yy < 0
                            || xx >= w as isize
                            || yy >= h as isize
                            || !inside[yy as usize * w + xx as usize];
                        if outside {
                            let d = ((xx - x as isize).pow(2) + (yy - y as isize).pow(2)) as f64;
                            best = best.min(d);
                        }
                    }
                }
                out[y * w + x] = best.sqrt();
            }
        }
        out
    }

    #[test]
    fn matches_brute_force() {
        let (w, h) = (23, 17);
        let inside: Vec<bool> = (0..w * h)
            .map(|i| {
                let (x, y) = (i % w, i / w);
                let dx = x as f64 - 10.0;
                let dy = y as f64 - 8.0;
                dx * dx + dy * dy < 60.0 || (x > 15 && y > 3 && y < 14)
            })
            .collect();
        let fast = interior_distance(&inside, w, h);
        let slow = brute(&inside, w, h);
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn full_support_measures_to_border() {
        let inside = vec![true; 5 * 5];
        let d = interior_distance(&inside, 5, 5);
        assert_eq!(d[0], 1.0);
        assert_eq!(d[12], 3.0);
    }
}
