//! Sampled real fields to complex bivector series (analytic signal) and
//! concomitant time series.
//!
//! CSV formats, UTF-8 with LF line endings:
//!
//! * real input: `t,Ex,Ey,Ez,Bx,By,Bz`
//! * pre-complexified input: `t,Ex_re,Ex_im,Ey_re,Ey_im,Ez_re,Ez_im,Bx_re,Bx_im,By_re,By_im,Bz_re,Bz_im`
//! * output: `t,<selected columns>`, every value printed with the shortest
//!   representation that parses back to the same `f64`.

use std::f64::consts::PI;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::bivector::Bivector;
use crate::concomitants::oracle::{eb_valence2, EbValence2};
use crate::error::SignalError;
use crate::scalar::Complex64;

/// Largest relative deviation of a sampling step from the mean step.
pub const UNIFORM_TOLERANCE: f64 = 1e-9;
pub const MIN_SAMPLES: usize = 4;

pub const REAL_HEADER: [&str; 7] = ["t", "Ex", "Ey", "Ez", "Bx", "By", "Bz"];
pub const COMPLEX_HEADER: [&str; 13] =
    ["t", "Ex_re", "Ex_im", "Ey_re", "Ey_im", "Ez_re", "Ez_im", "Bx_re", "Bx_im", "By_re", "By_im", "Bz_re", "Bz_im"];

fn check_times(t: &[f64]) -> Result<(), SignalError> {
    if t.len() < MIN_SAMPLES {
        return Err(SignalError::TooShort(t.len()));
    }
    if let Some(i) = t.iter().position(|x| !x.is_finite()) {
        return Err(SignalError::NonFinite(i));
    }
    if let Some(i) = t.windows(2).position(|w| w[1] <= w[0]) {
        return Err(SignalError::NotIncreasing(i + 1));
    }
    let mean = (t[t.len() - 1] - t[0]) / (t.len() - 1) as f64;
    for (i, w) in t.windows(2).enumerate() {
        let deviation = ((w[1] - w[0]) - mean).abs() / mean;
        if deviation > UNIFORM_TOLERANCE {
            return Err(SignalError::NonUniform { index: i + 1, deviation });
        }
    }
    Ok(())
}

/// Uniformly sampled real `E` and `B`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSampleSeries {
    t: Vec<f64>,
    e: Vec<[f64; 3]>,
    b: Vec<[f64; 3]>,
}

impl FieldSampleSeries {
    pub fn new(t: Vec<f64>, e: Vec<[f64; 3]>, b: Vec<[f64; 3]>) -> Result<Self, SignalError> {
        check_times(&t)?;
        for len in [e.len(), b.len()] {
            if len != t.len() {
                return Err(SignalError::LengthMismatch { expected: t.len(), found: len });
            }
        }
        if let Some(i) = (0..t.len()).find(|&i| e[i].iter().chain(&b[i]).any(|x| !x.is_finite())) {
            return Err(SignalError::NonFinite(i));
        }
        Ok(Self { t, e, b })
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.t
    }

    pub fn e(&self) -> &[[f64; 3]] {
        &self.e
    }

    pub fn b(&self) -> &[[f64; 3]] {
        &self.b
    }

    /// Channel `k` in `Ex,Ey,Ez,Bx,By,Bz` order.
    fn channel(&self, k: usize) -> Vec<f64> {
        if k < 3 {
            self.e.iter().map(|v| v[k]).collect()
        } else {
            self.b.iter().map(|v| v[k - 3]).collect()
        }
    }
}

/// Complex bivector per sample.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticBivectorSeries {
    pub t: Vec<f64>,
    pub bivectors: Vec<Bivector<Complex64>>,
}

impl AnalyticBivectorSeries {
    /// Pre-complexified input: same sampling rules as [`FieldSampleSeries`].
    pub fn new(t: Vec<f64>, bivectors: Vec<Bivector<Complex64>>) -> Result<Self, SignalError> {
        check_times(&t)?;
        if bivectors.len() != t.len() {
            return Err(SignalError::LengthMismatch { expected: t.len(), found: bivectors.len() });
        }
        let finite = |f: &Bivector<Complex64>| f.components().iter().all(|c| c.re.is_finite() && c.im.is_finite());
        if let Some(i) = bivectors.iter().position(|f| !finite(f)) {
            return Err(SignalError::NonFinite(i));
        }
        Ok(Self { t, bivectors })
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }
}

/// One-sided spectrum weighting of a single real channel.
pub fn analytic_channel(x: &[f64], planner: &mut FftPlanner<f64>) -> Vec<Complex64> {
    let n = x.len();
    let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    planner.plan_fft_forward(n).process(&mut buf);
    // bins 1..ceil(n/2) are strictly positive; n/2 is Nyquist for even n
    let positive_end = n.div_ceil(2);
    for (k, c) in buf.iter_mut().enumerate() {
        if k == 0 || (n % 2 == 0 && k == n / 2) {
            continue;
        }
        *c = if k < positive_end { *c * 2.0 } else { Complex64::new(0.0, 0.0) };
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter().map(|c| c * scale).collect()
}

/// Analytic signal of every Cartesian channel.
pub fn analytic_signal(series: &FieldSampleSeries) -> AnalyticBivectorSeries {
    let mut planner = FftPlanner::new();
    let channels: Vec<Vec<Complex64>> = (0..6).map(|k| analytic_channel(&series.channel(k), &mut planner)).collect();
    let bivectors = (0..series.len())
        .map(|i| Bivector::new(std::array::from_fn(|k| channels[k][i]), std::array::from_fn(|k| channels[k + 3][i])))
        .collect();
    AnalyticBivectorSeries { t: series.t.clone(), bivectors }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TensorFamily {
    T,
    Q,
    D,
    X,
}

/// A column of the concomitant series registry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    Lplus,
    Lminus,
    /// Contravariant component `family^{ab}`.
    Tensor(TensorFamily, usize, usize),
}

impl Component {
    /// Every registered column name.
    pub fn registry() -> Vec<Component> {
        let mut v = vec![Component::Lplus, Component::Lminus];
        for fam in [TensorFamily::T, TensorFamily::Q, TensorFamily::D, TensorFamily::X] {
            for a in 0..4 {
                for b in 0..4 {
                    v.push(Component::Tensor(fam, a, b));
                }
            }
        }
        v
    }

    pub fn evaluate(self, v: &EbValence2<Complex64>) -> f64 {
        match self {
            Component::Lplus => v.scalars.lplus.re,
            Component::Lminus => v.scalars.lminus.re,
            Component::Tensor(fam, a, b) => {
                let t = match fam {
                    TensorFamily::T => &v.t2,
                    TensorFamily::Q => &v.q2,
                    TensorFamily::D => &v.d2,
                    TensorFamily::X => &v.x2,
                };
                t[[a, b]].re
            }
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::Lplus => f.write_str("Lplus"),
            Component::Lminus => f.write_str("Lminus"),
            Component::Tensor(fam, a, b) => write!(f, "{fam:?}{a}{b}"),
        }
    }
}

impl FromStr for Component {
    type Err = SignalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let name = s.trim();
        let unknown = || SignalError::UnknownComponent(name.to_string());
        match name {
            "Lplus" => return Ok(Component::Lplus),
            "Lminus" => return Ok(Component::Lminus),
            _ => {}
        }
        let mut chars = name.chars();
        let fam = match chars.next() {
            Some('T') => TensorFamily::T,
            Some('Q') => TensorFamily::Q,
            Some('D') => TensorFamily::D,
            Some('X') => TensorFamily::X,
            _ => return Err(unknown()),
        };
        let digits: Vec<usize> = chars.map(|c| c.to_digit(10).map(|d| d as usize)).collect::<Option<_>>().ok_or_else(unknown)?;
        match digits[..] {
            [a, b] if a < 4 && b < 4 => Ok(Component::Tensor(fam, a, b)),
            _ => Err(unknown()),
        }
    }
}

/// Parses a comma-separated component list.
pub fn parse_selection(s: &str) -> Result<Vec<Component>, SignalError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).filter(|p| !p.is_empty()).collect();
    if parts.is_empty() {
        return Err(SignalError::EmptySelection);
    }
    parts.into_iter().map(str::parse).collect()
}

/// Named real columns over shared sample times.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcomitantSeries {
    pub t: Vec<f64>,
    pub columns: Vec<(String, Vec<f64>)>,
}

impl ConcomitantSeries {
    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_slice())
    }
}

/// Evaluates the selected components on every sample.
pub fn concomitant_series(
    series: &AnalyticBivectorSeries,
    selection: &[Component],
) -> Result<ConcomitantSeries, SignalError> {
    if selection.is_empty() {
        return Err(SignalError::EmptySelection);
    }
    let per_sample: Vec<EbValence2<Complex64>> = series.bivectors.iter().map(eb_valence2).collect();
    let columns = selection
        .iter()
        .map(|c| (c.to_string(), per_sample.iter().map(|v| c.evaluate(v)).collect()))
        .collect();
    Ok(ConcomitantSeries { t: series.t.clone(), columns })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Polarization {
    Linear,
    CircularLeft,
    CircularRight,
}

impl FromStr for Polarization {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "linear" => Ok(Polarization::Linear),
            "circular-left" => Ok(Polarization::CircularLeft),
            "circular-right" => Ok(Polarization::CircularRight),
            other => Err(format!("unknown polarization `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    /// `(u, v, k)` with `u × v = k`; `E` lives in the `u,v` plane.
    fn frame(self) -> [[f64; 3]; 3] {
        let (x, y, z) = ([1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]);
        match self {
            Axis::X => [y, z, x],
            Axis::Y => [z, x, y],
            Axis::Z => [x, y, z],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneWaveParams {
    pub amplitude: f64,
    /// Cycles per unit time.
    pub frequency: f64,
    pub polarization: Polarization,
    pub axis: Axis,
    pub samples: usize,
    pub sample_rate: f64,
    /// Phase offset in radians.
    pub phase: f64,
}

impl Default for PlaneWaveParams {
    fn default() -> Self {
        Self {
            amplitude: 1.0,
            frequency: 8.0,
            polarization: Polarization::CircularLeft,
            axis: Axis::Z,
            samples: 1024,
            sample_rate: 1024.0,
            phase: 0.0,
        }
    }
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Monochromatic plane wave with `B = k̂ × E`. Circular-left rotates `E` from
/// `u` towards `v` where `u × v = k̂`.
pub fn synth_plane_wave(p: &PlaneWaveParams) -> Result<FieldSampleSeries, SignalError> {
    let nyquist = p.sample_rate / 2.0;
    if !(p.frequency > 0.0 && p.frequency < nyquist) {
        return Err(SignalError::AboveNyquist { frequency: p.frequency, nyquist });
    }
    let [u, v, k] = p.axis.frame();
    let sv = match p.polarization {
        Polarization::Linear => 0.0,
        Polarization::CircularLeft => 1.0,
        Polarization::CircularRight => -1.0,
    };
    let t: Vec<f64> = (0..p.samples).map(|n| n as f64 / p.sample_rate).collect();
    let e: Vec<[f64; 3]> = t
        .iter()
        .map(|&tn| {
            let w = 2.0 * PI * p.frequency * tn + p.phase;
            let (c, s) = (w.cos(), w.sin());
            std::array::from_fn(|i| p.amplitude * (c * u[i] + sv * s * v[i]))
        })
        .collect();
    let b = e.iter().map(|&ei| cross(k, ei)).collect();
    FieldSampleSeries::new(t, e, b)
}

/// Either kind of CSV input.
#[derive(Debug, Clone, PartialEq)]
pub enum SeriesInput {
    Real(FieldSampleSeries),
    Complex(AnalyticBivectorSeries),
}

fn csv_err(e: impl fmt::Display) -> SignalError {
    SignalError::Csv(e.to_string())
}

/// Reads a 7-column real or 13-column pre-complexified CSV, chosen by header.
pub fn read_csv<R: Read>(reader: R) -> Result<SeriesInput, SignalError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let header: Vec<String> = rdr.headers().map_err(csv_err)?.iter().map(str::to_string).collect();
    let complex = if header == REAL_HEADER {
        false
    } else if header == COMPLEX_HEADER {
        true
    } else {
        return Err(SignalError::Csv(format!(
            "header must be `{}` or `{}`",
            REAL_HEADER.join(","),
            COMPLEX_HEADER.join(",")
        )));
    };
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let row = rec
            .iter()
            .map(|s| s.parse::<f64>().map_err(|_| SignalError::Csv(format!("row {}: bad number `{s}`", line + 1))))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    let t: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    if complex {
        let c = |r: &[f64], k: usize| Complex64::new(r[1 + 2 * k], r[2 + 2 * k]);
        let bivectors = rows
            .iter()
            .map(|r| Bivector::new(std::array::from_fn(|k| c(r, k)), std::array::from_fn(|k| c(r, k + 3))))
            .collect();
        Ok(SeriesInput::Complex(AnalyticBivectorSeries::new(t, bivectors)?))
    } else {
        let e = rows.iter().map(|r| [r[1], r[2], r[3]]).collect();
        let b = rows.iter().map(|r| [r[4], r[5], r[6]]).collect();
        Ok(SeriesInput::Real(FieldSampleSeries::new(t, e, b)?))
    }
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w)
}

fn write_rows<W: Write>(w: W, header: &[String], rows: impl Iterator<Item = Vec<f64>>) -> Result<(), SignalError> {
    let mut out = writer(w);
    out.write_record(header).map_err(csv_err)?;
    for row in rows {
        // `+ 0.0` maps -0 to 0
        out.write_record(row.iter().map(|x| (x + 0.0).to_string())).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_series_csv<W: Write>(series: &ConcomitantSeries, w: W) -> Result<(), SignalError> {
    let header: Vec<String> = std::iter::once("t".to_string()).chain(series.columns.iter().map(|(n, _)| n.clone())).collect();
    let rows = (0..series.t.len())
        .map(|i| std::iter::once(series.t[i]).chain(series.columns.iter().map(|(_, v)| v[i])).collect());
    write_rows(w, &header, rows)
}

pub fn write_field_csv<W: Write>(series: &FieldSampleSeries, w: W) -> Result<(), SignalError> {
    let header: Vec<String> = REAL_HEADER.iter().map(|s| s.to_string()).collect();
    let rows = (0..series.len()).map(|i| {
        let (e, b) = (series.e[i], series.b[i]);
        vec![series.t[i], e[0], e[1], e[2], b[0], b[1], b[2]]
    });
    write_rows(w, &header, rows)
}

pub fn write_analytic_csv<W: Write>(series: &AnalyticBivectorSeries, w: W) -> Result<(), SignalError> {
    let header: Vec<String> = COMPLEX_HEADER.iter().map(|s| s.to_string()).collect();
    let rows = (0..series.len()).map(|i| {
        std::iter::once(series.t[i]).chain(series.bivectors[i].components().iter().flat_map(|c| [c.re, c.im])).collect()
    });
    write_rows(w, &header, rows)
}

/// Parses a concomitant CSV written by [`write_series_csv`].
pub fn read_series_csv<R: Read>(reader: R) -> Result<ConcomitantSeries, SignalError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let header: Vec<String> = rdr.headers().map_err(csv_err)?.iter().map(str::to_string).collect();
    if header.first().map(String::as_str) != Some("t") {
        return Err(SignalError::Csv("first column must be `t`".into()));
    }
    let mut t = Vec::new();
    let mut cols: Vec<Vec<f64>> = vec![Vec::new(); header.len() - 1];
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        for (k, s) in rec.iter().enumerate() {
            let x: f64 = s.parse().map_err(|_| SignalError::Csv(format!("bad number `{s}`")))?;
            if k == 0 {
                t.push(x);
            } else {
                cols[k - 1].push(x);
            }
        }
    }
    Ok(ConcomitantSeries { t, columns: header.into_iter().skip(1).zip(cols).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sel(s: &str) -> Vec<Component> {
        parse_selection(s).unwrap()
    }

    fn constant(x: f64) -> FieldSampleSeries {
        let n = 16;
        FieldSampleSeries::new((0..n).map(|i| i as f64).collect(), vec![[x, 0.0, 0.0]; n], vec![[0.0; 3]; n]).unwrap()
    }

    #[test]
    fn dc_is_untouched() {
        let a = analytic_signal(&constant(1.0));
        for f in &a.bivectors {
            assert!((f.e[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
        assert!(analytic_signal(&constant(0.0)).bivectors.iter().all(|f| f.components().iter().all(|c| c.norm() == 0.0)));
    }

    #[test]
    fn cosine_becomes_exponential() {
        let n = 1024;
        let w = 2.0 * PI * 5.0 / n as f64;
        let x: Vec<f64> = (0..n).map(|i| (w * i as f64).cos()).collect();
        let a = analytic_channel(&x, &mut FftPlanner::new());
        for (i, c) in a.iter().enumerate() {
            assert!((c - Complex64::from_polar(1.0, w * i as f64)).norm() < 1e-10);
        }
    }

    #[test]
    fn odd_length_real_part_preserved() {
        let x = [0.3, -1.0, 2.5, 0.25, 7.0];
        let a = analytic_channel(&x, &mut FftPlanner::new());
        for (c, v) in a.iter().zip(x) {
            assert!((c.re - v).abs() < 1e-12);
        }
    }

    #[test]
    fn sampling_validation() {
        assert!(matches!(FieldSampleSeries::new(vec![0.0, 1.0], vec![[0.0; 3]; 2], vec![[0.0; 3]; 2]), Err(SignalError::TooShort(2))));
        let t = vec![0.0, 1.0, 2.0, 3.5];
        assert!(matches!(FieldSampleSeries::new(t, vec![[0.0; 3]; 4], vec![[0.0; 3]; 4]), Err(SignalError::NonUniform { .. })));
        let t = vec![0.0, 1.0, 1.0, 2.0];
        assert!(matches!(FieldSampleSeries::new(t, vec![[0.0; 3]; 4], vec![[0.0; 3]; 4]), Err(SignalError::NotIncreasing(2))));
    }

    #[test]
    fn circular_wave_columns() {
        let wave = synth_plane_wave(&PlaneWaveParams::default()).unwrap();
        let s = concomitant_series(&analytic_signal(&wave), &sel("T00,Q30,T30,Lplus,Lminus")).unwrap();
        for (name, expected) in [("T00", 2.0), ("Q30", 2.0), ("T30", 2.0), ("Lplus", 0.0), ("Lminus", 0.0)] {
            assert!(s.column(name).unwrap().iter().all(|v| (v - expected).abs() < 1e-9), "{name}");
        }
        let right = PlaneWaveParams { polarization: Polarization::CircularRight, ..Default::default() };
        let s = concomitant_series(&analytic_signal(&synth_plane_wave(&right).unwrap()), &sel("Q30")).unwrap();
        assert!(s.column("Q30").unwrap().iter().all(|v| (v + 2.0).abs() < 1e-9));
    }

    #[test]
    fn linear_wave_and_nyquist() {
        let p = PlaneWaveParams { polarization: Polarization::Linear, axis: Axis::X, ..Default::default() };
        let w = synth_plane_wave(&p).unwrap();
        let max = w.e().iter().map(|e| e[1].abs()).fold(0.0, f64::max);
        assert!((max - 1.0).abs() < 1e-12);
        assert!(w.e().iter().all(|e| e[0] == 0.0 && e[2] == 0.0));
        let bad = PlaneWaveParams { frequency: 512.0, ..Default::default() };
        assert!(matches!(synth_plane_wave(&bad), Err(SignalError::AboveNyquist { .. })));
    }

    #[test]
    fn registry_names_round_trip() {
        for c in Component::registry() {
            assert_eq!(c.to_string().parse::<Component>().unwrap(), c);
        }
        assert!(matches!("T4".parse::<Component>(), Err(SignalError::UnknownComponent(_))));
        assert!(matches!("Y00".parse::<Component>(), Err(SignalError::UnknownComponent(_))));
        assert!(matches!(parse_selection(" , "), Err(SignalError::EmptySelection)));
    }

    #[test]
    fn csv_round_trip() {
        let wave = synth_plane_wave(&PlaneWaveParams { samples: 8, sample_rate: 8.0, frequency: 1.0, ..Default::default() }).unwrap();
        let mut buf = Vec::new();
        write_field_csv(&wave, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("t,Ex,Ey,Ez,Bx,By,Bz\n") && !text.contains('\r'));
        assert_eq!(read_csv(&buf[..]).unwrap(), SeriesInput::Real(wave.clone()));

        let a = analytic_signal(&wave);
        let mut buf = Vec::new();
        write_analytic_csv(&a, &mut buf).unwrap();
        assert_eq!(read_csv(&buf[..]).unwrap(), SeriesInput::Complex(a.clone()));

        let s = concomitant_series(&a, &sel("T00,D10")).unwrap();
        let mut buf = Vec::new();
        write_series_csv(&s, &mut buf).unwrap();
        assert_eq!(read_series_csv(&buf[..]).unwrap(), s);
        assert!(matches!(read_csv(&b"t,a\n1,2\n"[..]), Err(SignalError::Csv(_))));
    }
}
