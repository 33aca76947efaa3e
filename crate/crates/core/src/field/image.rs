use std::io::Write;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::{Channel, FieldGrid, PheromoneId};

/// Three-channel image composited from pheromone fields; what the robots see.
#[derive(Debug, Clone, PartialEq)]
pub struct ColourImage<T> {
    width: usize,
    height: usize,
    cell_size: T,
    pixels: Vec<[T; 3]>,
}

/// Quantizes a `[0, 1]` intensity to 8 bits, rounding half up.
#[inline]
pub fn to_byte<T: Scalar>(v: T) -> u8 {
    let scaled = v.clamp01().as_f64() * 255.0;
    (scaled + 0.5).floor() as u8
}

impl<T: Scalar> ColourImage<T> {
    pub fn black(width: usize, height: usize, cell_size: T) -> Self {
        Self {
            width,
            height,
            cell_size,
            pixels: vec![[T::zero(); 3]; width * height],
        }
    }

    /// Image whose every pixel has the same colour (clamped).
    pub fn uniform(width: usize, height: usize, cell_size: T, rgb: [T; 3]) -> Self {
        let px = rgb.map(Scalar::clamp01);
        Self {
            width,
            height,
            cell_size,
            pixels: vec![px; width * height],
        }
    }

    /// Builds an image by evaluating `f` at every cell centre (cm).
    pub fn from_fn(
        width: usize,
        height: usize,
        cell_size: T,
        mut f: impl FnMut(T, T) -> [T; 3],
    ) -> Self {
        let half = T::lit(0.5);
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                let cx = (T::from_count(x) + half) * cell_size;
                let cy = (T::from_count(y) + half) * cell_size;
                pixels.push(f(cx, cy).map(Scalar::clamp01));
            }
        }
        Self {
            width,
            height,
            cell_size,
            pixels,
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn cell_size(&self) -> T {
        self.cell_size
    }

    /// Extent in centimetres.
    pub fn extent(&self) -> (T, T) {
        (
            T::from_count(self.width) * self.cell_size,
            T::from_count(self.height) * self.cell_size,
        )
    }

    #[inline]
    pub fn pixel(&self, x: usize, y: usize) -> [T; 3] {
        self.pixels[y * self.width + x]
    }

    pub fn set_pixel(&mut self, x: usize, y: usize, rgb: [T; 3]) {
        self.pixels[y * self.width + x] = rgb.map(Scalar::clamp01);
    }

    pub fn pixels(&self) -> &[[T; 3]] {
        &self.pixels
    }

    /// Row-major RGB bytes, rounding half up.
    pub fn to_rgb8(&self) -> Vec<u8> {
        self.pixels.iter().flat_map(|px| px.map(to_byte)).collect()
    }

    /// Writes a binary portable pixmap (P6, maxval 255). Row 0 is arena `y = 0`.
    pub fn write_ppm<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        write!(out, "P6\n{} {}\n255\n", self.width, self.height)?;
        out.write_all(&self.to_rgb8())
    }
}

/// Maps one pheromone onto one colour channel with an effect factor.
#[derive(Debug, Clone, PartialEq)]
pub struct Binding<T> {
    pub pheromone: PheromoneId,
    pub channel: Channel,
    pub effect_k: T,
}

/// How pheromone fields combine into the displayed colour image.
#[derive(Debug, Clone, PartialEq)]
pub struct ComposeSpec<T> {
    pub bindings: Vec<Binding<T>>,
    /// Number of emitters contributing fields (metadata; fields are summed regardless).
    pub emitter_count: usize,
}

impl<T: Scalar> ComposeSpec<T> {
    pub fn new() -> Self {
        Self {
            bindings: Vec::new(),
            emitter_count: 1,
        }
    }

    pub fn bind(
        mut self,
        pheromone: impl Into<PheromoneId>,
        channel: Channel,
        effect_k: T,
    ) -> Self {
        self.bindings.push(Binding {
            pheromone: pheromone.into(),
            channel,
            effect_k,
        });
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (i, b) in self.bindings.iter().enumerate() {
            if !(b.effect_k >= T::zero()) {
                return Err(Error::range("effect_k", b.effect_k, "effect_k >= 0"));
            }
            if self.bindings[..i]
                .iter()
                .any(|o| o.pheromone == b.pheromone && o.channel == b.channel)
            {
                return Err(Error::config(format!(
                    "duplicate binding of `{}` to {}",
                    b.pheromone, b.channel
                )));
            }
        }
        Ok(())
    }

    pub fn channel_of(&self, pheromone: &PheromoneId) -> Option<Channel> {
        self.bindings
            .iter()
            .find(|b| &b.pheromone == pheromone)
            .map(|b| b.channel)
    }
}

impl<T: Scalar> Default for ComposeSpec<T> {
    fn default() -> Self {
        Self::new()
    }
}

/// Composites fields: `I(x,y,c) = clamp01(sum of k * phi(x,y))` over bindings to `c`.
pub fn compose_image<T: Scalar>(
    fields: &[&FieldGrid<T>],
    spec: &ComposeSpec<T>,
) -> Result<ColourImage<T>> {
    spec.validate()?;
    let Some(first) = fields.first() else {
        return Err(Error::config("compose_image needs at least one field"));
    };
    let (w, h) = (first.width(), first.height());
    let mut sums = vec![[T::zero(); 3]; w * h];
    for f in fields {
        if !f.same_shape(first) {
            return Err(Error::config(format!(
                "field `{}` is {}x{}, expected {w}x{h}",
                f.pheromone(),
                f.width(),
                f.height()
            )));
        }
        let mut bound = false;
        for b in spec
            .bindings
            .iter()
            .filter(|b| &b.pheromone == f.pheromone())
        {
            bound = true;
            let c = b.channel.index();
            for (px, &v) in sums.iter_mut().zip(f.values()) {
                px[c] += b.effect_k * v;
            }
        }
        if !bound {
            return Err(Error::config(format!(
                "no colour binding for pheromone `{}`",
                f.pheromone()
            )));
        }
    }
    for px in &mut sums {
        *px = px.map(Scalar::clamp01);
    }
    Ok(ColourImage {
        width: w,
        height: h,
        cell_size: first.cell_size(),
        pixels: sums,
    })
}

/// Bilinear interpolation between the four surrounding cell centres.
///
/// Positions between the image border and the outermost centres take the
/// edge values. Positions outside the image extent are rejected.
pub fn sample_bilinear<T: Scalar>(image: &ColourImage<T>, pos: (T, T)) -> Result<[T; 3]> {
    let (ex, ey) = image.extent();
    let (px, py) = pos;
    if !(px >= T::zero() && px <= ex && py >= T::zero() && py <= ey) {
        return Err(Error::OutOfBounds {
            x: px.as_f64(),
            y: py.as_f64(),
        });
    }
    let half = T::lit(0.5);
    let max_u = T::from_count(image.width - 1);
    let max_v = T::from_count(image.height - 1);
    let u = (px / image.cell_size - half).max(T::zero()).min(max_u);
    let v = (py / image.cell_size - half).max(T::zero()).min(max_v);
    let x0 = u.floor().to_usize().unwrap_or(0).min(image.width - 2);
    let y0 = v.floor().to_usize().unwrap_or(0).min(image.height - 2);
    let fx = u - T::from_count(x0);
    let fy = v - T::from_count(y0);

    let p00 = image.pixel(x0, y0);
    let p10 = image.pixel(x0 + 1, y0);
    let p01 = image.pixel(x0, y0 + 1);
    let p11 = image.pixel(x0 + 1, y0 + 1);
    let one = T::one();
    let mut out = [T::zero(); 3];
    for c in 0..3 {
        let top = p00[c] * (one - fx) + p10[c] * fx;
        let bottom = p01[c] * (one - fx) + p11[c] * fx;
        out[c] = top * (one - fy) + bottom * fy;
    }
    Ok(out)
}
