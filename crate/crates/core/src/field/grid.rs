use std::fmt;
use std::io::Write;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Colour channel of the composited image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Channel {
    Red,
    Green,
    Blue,
}

impl Channel {
    pub const ALL: [Channel; 3] = [Channel::Red, Channel::Green, Channel::Blue];

    #[inline]
    pub fn index(self) -> usize {
        match self {
            Channel::Red => 0,
            Channel::Green => 1,
            Channel::Blue => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Channel::Red => "red",
            Channel::Green => "green",
            Channel::Blue => "blue",
        }
    }

    pub fn parse(s: &str) -> Option<Channel> {
        match s.to_ascii_lowercase().as_str() {
            "r" | "red" => Some(Channel::Red),
            "g" | "green" => Some(Channel::Green),
            "b" | "blue" => Some(Channel::Blue),
            _ => None,
        }
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Names one pheromone type, e.g. `LAP` or `AGP`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PheromoneId(pub String);

impl PheromoneId {
    pub fn new(name: impl Into<String>) -> Self {
        PheromoneId(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for PheromoneId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for PheromoneId {
    fn from(s: &str) -> Self {
        PheromoneId(s.to_string())
    }
}

/// Strength of one pheromone type over a `width x height` lattice of square cells.
///
/// Values are stored row-major (`y * width + x`) and kept in `[0, 1]`. Cell
/// `(x, y)` covers `[x*cell_size, (x+1)*cell_size) x [y*cell_size, (y+1)*cell_size)`
/// in arena centimetres.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid<T> {
    width: usize,
    height: usize,
    cell_size: T,
    values: Vec<T>,
    pheromone: PheromoneId,
}

impl<T: Scalar> FieldGrid<T> {
    /// All-zero grid.
    pub fn new(
        width: usize,
        height: usize,
        cell_size: T,
        pheromone: impl Into<PheromoneId>,
    ) -> Result<Self> {
        Self::filled(width, height, cell_size, pheromone, T::zero())
    }

    pub fn filled(
        width: usize,
        height: usize,
        cell_size: T,
        pheromone: impl Into<PheromoneId>,
        value: T,
    ) -> Result<Self> {
        if width < 2 || height < 2 {
            return Err(Error::config(format!(
                "field grid must be at least 2x2 cells, got {width}x{height}"
            )));
        }
        if !(cell_size > T::zero()) || !cell_size.is_finite() {
            return Err(Error::range("cell_size", cell_size, "cell_size > 0"));
        }
        Ok(Self {
            width,
            height,
            cell_size,
            values: vec![value.clamp01(); width * height],
            pheromone: pheromone.into(),
        })
    }

    /// Smallest grid covering an arena of the given extent in centimetres.
    pub fn covering(
        arena_width: T,
        arena_height: T,
        cell_size: T,
        pheromone: impl Into<PheromoneId>,
    ) -> Result<Self> {
        let w = (arena_width / cell_size).ceil().to_usize().unwrap_or(0);
        let h = (arena_height / cell_size).ceil().to_usize().unwrap_or(0);
        Self::new(w, h, cell_size, pheromone)
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

    pub fn pheromone(&self) -> &PheromoneId {
        &self.pheromone
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize) -> usize {
        debug_assert!(x < self.width && y < self.height);
        y * self.width + x
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> T {
        self.values[self.index(x, y)]
    }

    /// Sets a cell, clamping into `[0, 1]`.
    pub fn set(&mut self, x: usize, y: usize, v: T) {
        let i = self.index(x, y);
        self.values[i] = v.clamp01();
    }

    /// Centre of cell `(x, y)` in arena centimetres.
    #[inline]
    pub fn cell_center(&self, x: usize, y: usize) -> (T, T) {
        let half = T::lit(0.5);
        (
            (T::from_count(x) + half) * self.cell_size,
            (T::from_count(y) + half) * self.cell_size,
        )
    }

    pub fn same_shape<U: Scalar>(&self, other: &FieldGrid<U>) -> bool {
        self.width == other.width
            && self.height == other.height
            && self.cell_size.as_f64() == other.cell_size.as_f64()
    }

    pub fn total(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, &v| acc + v)
    }

    /// Zero-valued grid with the same shape and pheromone.
    pub fn zeroed(&self) -> Self {
        Self {
            values: vec![T::zero(); self.values.len()],
            ..self.clone()
        }
    }

    pub(crate) fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub(crate) fn with_values(&self, values: Vec<T>) -> Self {
        debug_assert_eq!(values.len(), self.values.len());
        Self {
            width: self.width,
            height: self.height,
            cell_size: self.cell_size,
            values,
            pheromone: self.pheromone.clone(),
        }
    }

    /// Writes the grid as a plain-text matrix: one row per line, values
    /// space-separated in shortest round-trip decimal form.
    pub fn write_matrix<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for row in self.values.chunks(self.width) {
            let mut first = true;
            for v in row {
                if !first {
                    out.write_all(b" ")?;
                }
                first = false;
                write!(out, "{v}")?;
            }
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    /// Parses the output of [`write_matrix`](Self::write_matrix).
    pub fn read_matrix(
        text: &str,
        cell_size: T,
        pheromone: impl Into<PheromoneId>,
    ) -> Result<Self> {
        let mut values = Vec::new();
        let mut width = None;
        let mut height = 0;
        for (ln, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let mut n = 0;
            for tok in line.split_whitespace() {
                let v: f64 = tok.parse().map_err(|_| Error::Syntax {
                    line: ln + 1,
                    msg: format!("bad number `{tok}`"),
                })?;
                values.push(T::lit(v));
                n += 1;
            }
            match width {
                None => width = Some(n),
                Some(w) if w != n => {
                    return Err(Error::Syntax {
                        line: ln + 1,
                        msg: format!("row has {n} values, expected {w}"),
                    })
                }
                _ => {}
            }
            height += 1;
        }
        let mut g = Self::new(width.unwrap_or(0), height, cell_size, pheromone)?;
        for (dst, v) in g.values.iter_mut().zip(values) {
            *dst = v.clamp01();
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_dimensions() {
        assert!(FieldGrid::<f64>::new(1, 5, 0.25, "x").is_err());
        assert!(FieldGrid::<f64>::new(5, 1, 0.25, "x").is_err());
        assert!(FieldGrid::<f64>::new(5, 5, 0.0, "x").is_err());
    }

    #[test]
    fn covering_rounds_up() {
        let g = FieldGrid::<f64>::covering(143.9, 80.9, 0.25, "LAP").unwrap();
        assert_eq!((g.width(), g.height()), (576, 324));
    }

    #[test]
    fn set_clamps() {
        let mut g = FieldGrid::<f32>::new(3, 3, 1.0, "x").unwrap();
        g.set(1, 1, 4.0);
        g.set(0, 0, -2.0);
        assert_eq!(g.get(1, 1), 1.0);
        assert_eq!(g.get(0, 0), 0.0);
    }

    #[test]
    fn matrix_text_round_trips() {
        let mut g = FieldGrid::<f64>::new(3, 2, 0.5, "x").unwrap();
        g.set(0, 0, 0.1);
        g.set(2, 1, 1.0 / 3.0);
        let mut buf = Vec::new();
        g.write_matrix(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 2);
        let back = FieldGrid::<f64>::read_matrix(&text, 0.5, "x").unwrap();
        assert_eq!(back, g);
    }
}
