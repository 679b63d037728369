//! Correlation matcher: band-pass, binarize, then search translations and
//! rotations for the best normalized cross-correlation.

use rustfft::num_complex::Complex64;

use super::spectral::{smooth_size, Fft2};
use crate::capture::blur_gaussian;
use crate::error::{ensure_dims, Error, Result};
use crate::raster::{ColorImage, GrayImage};
use crate::ridge::ShapeMask;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MatcherParams {
    /// Translation search radius in full-resolution pixels.
    pub max_shift: usize,
    pub max_rotation_deg: f64,
    pub rotation_step_deg: f64,
    /// Inner and outer sigma of the difference-of-Gaussians band-pass.
    pub band_sigmas: (f64, f64),
    /// Pixels closer than this to the silhouette edge are ignored.
    pub edge_margin: f64,
}

impl Default for MatcherParams {
    fn default() -> Self {
        Self {
            max_shift: 24,
            max_rotation_deg: 10.0,
            rotation_step_deg: 1.0,
            band_sigmas: (1.5, 4.5),
            edge_margin: 8.0,
        }
    }
}

impl MatcherParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.max_rotation_deg >= 0.0 && self.rotation_step_deg > 0.0) {
            return Err(Error::param("rotation", "range must be non-negative and step positive"));
        }
        if !(self.band_sigmas.0 > 0.0 && self.band_sigmas.0 < self.band_sigmas.1) {
            return Err(Error::param("band_sigmas", "need 0 < inner < outer"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct SimilarityScore(f64);

impl SimilarityScore {
    pub fn value(&self) -> f64 {
        self.0
    }
}

/// Binarized ridge image at full and half resolution plus the padded
/// spectrum of the half-resolution copy.
#[derive(Clone, Debug)]
pub struct Template {
    signs: Vec<f64>,
    fine: Vec<i8>,
    fine_energy: f64,
    energy: f64,
    spectrum: Vec<Complex64>,
}

impl Template {
    /// The ternary ridge image (+1, -1, 0 outside) at half resolution.
    pub fn signs(&self) -> &[f64] {
        &self.signs
    }

    /// The ternary ridge image at full resolution.
    pub fn fine_signs(&self) -> &[i8] {
        &self.fine
    }
}

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Spectrum of one rotated copy of a template.
#[derive(Clone, Debug)]
pub struct RotatedSpectrum {
    energy: f64,
    spectrum: Vec<Complex64>,
}

/// Precomputed plans for a fixed image size.
pub struct Matcher {
    params: MatcherParams,
    dims: (usize, usize),
    half: (usize, usize),
    shift: usize,
    fft: Fft2,
    angles: Vec<f64>,
}

impl Matcher {
    pub fn new(dims: (usize, usize), params: MatcherParams) -> Result<Self> {
        params.validate()?;
        let half = (dims.0 / 2, dims.1 / 2);
        let shift = params.max_shift / 2;
        let fft = Fft2::new(smooth_size(half.0 + shift), smooth_size(half.1 + shift));
        let steps = (params.max_rotation_deg / params.rotation_step_deg + 1e-9).floor() as i64;
        let angles = (-steps..=steps)
            .map(|k| (k as f64 * params.rotation_step_deg).to_radians())
            .collect();
        Ok(Self {
            params,
            dims,
            half,
            shift,
            fft,
            angles,
        })
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn rotation_count(&self) -> usize {
        self.angles.len()
    }

    /// Ridge signs of `img`; the support is every non-black pixel.
    pub fn template(&self, img: &ColorImage) -> Result<Template> {
        ensure_dims(self.dims, img.dims())?;
        let shape = ShapeMask::from_foreground(img)?;
        let (w, h) = self.dims;
        let support = GrayImage::from_fn(w, h, |x, y| if shape.in_support(x, y) { 1.0 } else { 0.0 });
        let gray = img.gray().zip_map(&support, |g, m| g * m)?;
        let normalized = |sigma: f64| -> Result<GrayImage> {
            let num = blur_gaussian(&gray, sigma);
            let den = blur_gaussian(&support, sigma);
            num.zip_map(&den, |n, d| if d > 1e-6 { n / d } else { 0.0 })
        };
        let band = normalized(self.params.band_sigmas.0)?.zip_map(&normalized(self.params.band_sigmas.1)?, |a, b| a - b)?;

        let deep = |x: usize, y: usize| shape.distance().get(x, y) >= self.params.edge_margin;
        let fine: Vec<i8> = (0..w * h)
            .map(|i| if deep(i % w, i / w) { sign(band.pixels()[i]) as i8 } else { 0 })
            .collect();
        let fine_energy = fine.iter().map(|&v| (v as f64).abs()).sum();

        let (hw, hh) = self.half;
        let mut signs = vec![0.0; hw * hh];
        for y in 0..hh {
            for x in 0..hw {
                let (fx, fy) = (2 * x, 2 * y);
                if [(0, 0), (1, 0), (0, 1), (1, 1)].iter().all(|&(dx, dy)| deep(fx + dx, fy + dy)) {
                    let v = band.get(fx, fy) + band.get(fx + 1, fy) + band.get(fx, fy + 1) + band.get(fx + 1, fy + 1);
                    signs[y * hw + x] = sign(v);
                }
            }
        }
        let (energy, spectrum) = self.spectrum_of(&signs);
        Ok(Template {
            signs,
            fine,
            fine_energy,
            energy,
            spectrum,
        })
    }

    fn spectrum_of(&self, half_res: &[f64]) -> (f64, Vec<Complex64>) {
        let (pw, ph) = self.fft.dims();
        let (hw, hh) = self.half;
        let mut data = vec![Complex64::default(); pw * ph];
        let mut energy = 0.0;
        for y in 0..hh {
            for x in 0..hw {
                let v = half_res[y * hw + x];
                energy += v * v;
                data[y * pw + x] = Complex64::new(v, 0.0);
            }
        }
        self.fft.forward(&mut data);
        (energy, data)
    }

    fn rotate(&self, t: &Template, angle: f64) -> Vec<f64> {
        let (hw, hh) = self.half;
        rotate_about_centre(&GrayImage::from_vec(hw, hh, t.signs.clone()), angle)
    }

    /// Spectra of the template rotated about its centre by every search
    /// angle. Two real images share one complex transform.
    pub fn rotated_spectra(&self, t: &Template) -> Vec<RotatedSpectrum> {
        let (pw, ph) = self.fft.dims();
        let (hw, hh) = self.half;
        let mut out = Vec::with_capacity(self.angles.len());
        for pair in self.angles.chunks(2) {
            let a = self.rotate(t, pair[0]);
            let b = pair.get(1).map(|&angle| self.rotate(t, angle));
            let mut data = vec![Complex64::default(); pw * ph];
            let (mut ea, mut eb) = (0.0, 0.0);
            for y in 0..hh {
                for x in 0..hw {
                    let va = a[y * hw + x];
                    let vb = b.as_ref().map_or(0.0, |b| b[y * hw + x]);
                    ea += va * va;
                    eb += vb * vb;
                    data[y * pw + x] = Complex64::new(va, vb);
                }
            }
            self.fft.forward(&mut data);
            // split by Hermitian symmetry: A = (X + conj X-) / 2, B = (X - conj X-) / 2i
            let mirror = |i: usize| {
                let (kx, ky) = (i / ph, i % ph);
                ((pw - kx) % pw) * ph + (ph - ky) % ph
            };
            let mut sa = vec![Complex64::default(); pw * ph];
            let mut sb = vec![Complex64::default(); pw * ph];
            for i in 0..pw * ph {
                let x = data[i];
                let xm = data[mirror(i)].conj();
                sa[i] = (x + xm) * 0.5;
                sb[i] = (x - xm) * Complex64::new(0.0, -0.5);
            }
            out.push(RotatedSpectrum {
                energy: ea,
                spectrum: sa,
            });
            if b.is_some() {
                out.push(RotatedSpectrum {
                    energy: eb,
                    spectrum: sb,
                });
            }
        }
        out
    }

    /// Best normalized correlation of `reference` against any rotated copy
    /// of `probe`, in `[-1, 1]`. The rotation and translation window is
    /// searched at half resolution (two rotations per inverse transform);
    /// the winning candidate is then re-measured at full resolution over the
    /// 3x3 lags around it, which recovers odd-pixel offsets.
    pub fn directional(&self, reference: &Template, probe: &Template, rotated: &[RotatedSpectrum]) -> f64 {
        let (pw, ph) = self.fft.dims();
        let s = self.shift as isize;
        // (correlation, angle index, dx, dy)
        let mut best = (f64::NEG_INFINITY, 0usize, 0isize, 0isize);
        for (chunk, pair) in rotated.chunks(2).enumerate() {
            let (r1, r2) = (&pair[0], pair.get(1));
            let mut buf: Vec<Complex64> = match r2 {
                Some(r2) => reference
                    .spectrum
                    .iter()
                    .zip(&r1.spectrum)
                    .zip(&r2.spectrum)
                    .map(|((a, b1), b2)| a * b1.conj() + Complex64::i() * (a * b2.conj()))
                    .collect(),
                None => reference.spectrum.iter().zip(&r1.spectrum).map(|(a, b)| a * b.conj()).collect(),
            };
            self.fft.inverse(&mut buf);
            for (k, r) in [Some(r1), r2].into_iter().enumerate() {
                let Some(r) = r else { continue };
                let norm = (reference.energy * r.energy).sqrt();
                if norm == 0.0 {
                    continue;
                }
                for dy in -s..=s {
                    let y = dy.rem_euclid(ph as isize) as usize;
                    for dx in -s..=s {
                        let x = dx.rem_euclid(pw as isize) as usize;
                        let c = buf[y * pw + x];
                        let v = if k == 1 { c.im } else { c.re } / norm;
                        if v > best.0 {
                            best = (v, 2 * chunk + k, dx, dy);
                        }
                    }
                }
            }
        }
        if best.0 == f64::NEG_INFINITY {
            return 0.0;
        }
        self.refine(reference, probe, self.angles[best.1], (2 * best.2, 2 * best.3))
            .clamp(-1.0, 1.0)
    }

    /// Full-resolution normalized correlation of `reference` with `probe`
    /// rotated by `angle`, maximized over the 3x3 lags around `lag`.
    fn refine(&self, reference: &Template, probe: &Template, angle: f64, lag: (isize, isize)) -> f64 {
        let (w, h) = self.dims;
        let src = GrayImage::from_vec(w, h, probe.fine.iter().map(|&v| v as f64).collect());
        let rotated = rotate_about_centre(&src, angle);
        let energy: f64 = rotated.iter().map(|v| v * v).sum();
        let norm = (reference.fine_energy * energy).sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        let mut best = f64::NEG_INFINITY;
        for ly in lag.1 - 1..=lag.1 + 1 {
            for lx in lag.0 - 1..=lag.0 + 1 {
                // reference pixel x + lag pairs with probe pixel x
                let mut acc = 0.0;
                for y in 0..h as isize {
                    let ry = y + ly;
                    if ry < 0 || ry >= h as isize {
                        continue;
                    }
                    let x0 = (-lx).max(0);
                    let x1 = (w as isize - lx).min(w as isize);
                    let rrow = &reference.fine[ry as usize * w..][..w];
                    let prow = &rotated[y as usize * w..][..w];
                    for x in x0..x1 {
                        acc += rrow[(x + lx) as usize] as f64 * prow[x as usize];
                    }
                }
                best = best.max(acc / norm);
            }
        }
        best
    }

    /// Symmetric similarity: max of both search directions, mapped to `[0, 1]`.
    pub fn score(&self, a: &Template, b: &Template) -> SimilarityScore {
        let ab = self.directional(a, b, &self.rotated_spectra(b));
        let ba = self.directional(b, a, &self.rotated_spectra(a));
        combine(ab, ba)
    }
}

/// Maps the better of two directional correlations to `[0, 1]`.
pub fn combine(ab: f64, ba: f64) -> SimilarityScore {
    SimilarityScore(((1.0 + ab.max(ba)) / 2.0).clamp(0.0, 1.0))
}

/// Bilinear rotation about the raster centre; zero outside the source.
fn rotate_about_centre(src: &GrayImage, angle: f64) -> Vec<f64> {
    let (w, h) = src.dims();
    let (cx, cy) = ((w as f64 - 1.0) / 2.0, (h as f64 - 1.0) / 2.0);
    let (s, c) = angle.sin_cos();
    (0..w * h)
        .map(|i| {
            let (x, y) = ((i % w) as f64 - cx, (i / w) as f64 - cy);
            sample_zero(src, cx + c * x + s * y, cy - s * x + c * y)
        })
        .collect()
}

fn sample_zero(img: &GrayImage, x: f64, y: f64) -> f64 {
    let (w, h) = img.dims();
    if x < 0.0 || y < 0.0 || x > (w - 1) as f64 || y > (h - 1) as f64 {
        return 0.0;
    }
    img.sample_bilinear(x, y)
}

pub fn match_score(a: &ColorImage, b: &ColorImage) -> Result<SimilarityScore> {
    match_score_with(a, b, &MatcherParams::default())
}

pub fn match_score_with(a: &ColorImage, b: &ColorImage, params: &MatcherParams) -> Result<SimilarityScore> {
    ensure_dims(a.dims(), b.dims())?;
    let m = Matcher::new(a.dims(), *params)?;
    Ok(m.score(&m.template(a)?, &m.template(b)?))
}
