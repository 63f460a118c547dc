//! Scalar fields sampled on a rectilinear grid.
//!
//! Samples are stored x-fastest: the sample at `(i, j, k)` lives at
//! `i + nx * (j + ny * k)`. Classification against an isovalue uses a
//! closed rule on the upper side, so a sample that equals the isovalue is
//! [`Sign::Inside`].

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::{Error, Result, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub dims: [usize; 3],
    pub origin: [f64; 3],
    pub spacing: [f64; 3],
}

impl GridSpec {
    pub fn new(dims: [usize; 3], origin: [f64; 3], spacing: [f64; 3]) -> Result<Self> {
        let spec = Self {
            dims,
            origin,
            spacing,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Grid of `dims` samples spanning the box `[lo, hi]` on every axis.
    pub fn spanning(dims: [usize; 3], lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || hi <= lo {
            return Err(Error::InvalidGrid(format!("empty span [{lo}, {hi}]")));
        }
        let step = |n: usize| (hi - lo) / (n.max(2) - 1) as f64;
        Self::new(dims, [lo; 3], [step(dims[0]), step(dims[1]), step(dims[2])])
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(n) = self.dims.iter().find(|&&n| n < 2) {
            return Err(Error::InvalidGrid(format!("dimension {n} < 2")));
        }
        if let Some(s) = self.spacing.iter().find(|&&s| !(s > 0.0 && s.is_finite())) {
            return Err(Error::InvalidGrid(format!("spacing {s} is not positive")));
        }
        if self.origin.iter().any(|o| !o.is_finite()) {
            return Err(Error::InvalidGrid("origin is not finite".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, [i, j, k]: [usize; 3]) -> usize {
        i + self.dims[0] * (j + self.dims[1] * k)
    }

    /// World coordinate of grid point `(i, j, k)`.
    #[inline]
    pub fn world(&self, p: [usize; 3]) -> Vec3 {
        Vec3::new(
            self.origin[0] + p[0] as f64 * self.spacing[0],
            self.origin[1] + p[1] as f64 * self.spacing[1],
            self.origin[2] + p[2] as f64 * self.spacing[2],
        )
    }

    /// Number of cells along each axis.
    pub fn cells(&self) -> [usize; 3] {
        [self.dims[0] - 1, self.dims[1] - 1, self.dims[2] - 1]
    }

    pub fn points(&self) -> impl Iterator<Item = [usize; 3]> + '_ {
        let [nx, ny, nz] = self.dims;
        (0..nz).flat_map(move |k| (0..ny).flat_map(move |j| (0..nx).map(move |i| [i, j, k])))
    }
}

/// The built-in implicit functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Analytic {
    /// `|p - center|² - radius²`
    Sphere { radius: f64, center: [f64; 3] },
    /// `ws·((x+1)² + (y+1)² + (z+1)² - 1) + wh·(xyz - 3)`
    SphereHyperboloidBlend {
        sphere_weight: f64,
        hyperboloid_weight: f64,
    },
}

impl Analytic {
    /// Parses a field name and its parameter list.
    ///
    /// `sphere` takes `[radius]` or `[radius, cx, cy, cz]` (default radius 1).
    /// `sphere_hyperboloid_blend` (alias `blend`) takes
    /// `[sphere_weight, hyperboloid_weight]`, default `[0.75, 0.25]`.
    pub fn from_name(name: &str, params: &[f64]) -> Result<Self> {
        let invalid = |reason: &str| Error::InvalidParams {
            field: name.to_string(),
            reason: reason.to_string(),
        };
        if params.iter().any(|p| !p.is_finite()) {
            return Err(invalid("parameters must be finite"));
        }
        match name {
            "sphere" => {
                let (radius, center) = match params {
                    [] => (1.0, [0.0; 3]),
                    [r] => (*r, [0.0; 3]),
                    [r, cx, cy, cz] => (*r, [*cx, *cy, *cz]),
                    _ => return Err(invalid("expected [radius] or [radius, cx, cy, cz]")),
                };
                if radius <= 0.0 {
                    return Err(invalid("radius must be positive"));
                }
                Ok(Analytic::Sphere { radius, center })
            }
            "sphere_hyperboloid_blend" | "blend" => {
                let (ws, wh) = match params {
                    [] => (0.75, 0.25),
                    [ws, wh] => (*ws, *wh),
                    _ => return Err(invalid("expected [sphere_weight, hyperboloid_weight]")),
                };
                if ws == 0.0 && wh == 0.0 {
                    return Err(invalid("weights must not both be zero"));
                }
                Ok(Analytic::SphereHyperboloidBlend {
                    sphere_weight: ws,
                    hyperboloid_weight: wh,
                })
            }
            other => Err(Error::UnknownField(other.to_string())),
        }
    }

    pub fn eval(&self, p: &Vec3) -> f64 {
        match *self {
            Analytic::Sphere { radius, center } => {
                let (x, y, z) = (p.x - center[0], p.y - center[1], p.z - center[2]);
                x * x + y * y + z * z - radius * radius
            }
            Analytic::SphereHyperboloidBlend {
                sphere_weight,
                hyperboloid_weight,
            } => {
                let (x, y, z) = (p.x + 1.0, p.y + 1.0, p.z + 1.0);
                sphere_weight * (x * x + y * y + z * z - 1.0)
                    + hyperboloid_weight * (p.x * p.y * p.z - 3.0)
            }
        }
    }

    /// Distance from `p` to the zero level set, when it has a closed form.
    pub fn distance(&self, p: &Vec3) -> Option<f64> {
        match *self {
            Analytic::Sphere { radius, center } => {
                Some(((p - Vec3::from(center)).norm() - radius).abs())
            }
            Analytic::SphereHyperboloidBlend { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RawDtype {
    Uint8,
    Float32,
}

impl RawDtype {
    pub fn size(self) -> usize {
        match self {
            RawDtype::Uint8 => 1,
            RawDtype::Float32 => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RawDtype::Uint8 => "uint8",
            RawDtype::Float32 => "float32",
        }
    }
}

/// JSON sidecar describing a raw volume payload.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RawHeader {
    pub dims: [usize; 3],
    pub origin: [f64; 3],
    pub spacing: [f64; 3],
    pub dtype: RawDtype,
}

impl RawHeader {
    pub fn grid(&self) -> Result<GridSpec> {
        GridSpec::new(self.dims, self.origin, self.spacing)
    }

    /// Sidecar path for a payload: same stem with a `.json` extension.
    pub fn sidecar_path(payload: &Path) -> PathBuf {
        payload.with_extension("json")
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldSource {
    Analytic(Analytic),
    Raw { path: PathBuf, dtype: RawDtype },
    Samples,
}

#[derive(Debug, Clone)]
pub struct ScalarField {
    spec: GridSpec,
    samples: Vec<f64>,
    source: FieldSource,
}

impl ScalarField {
    pub fn from_samples(spec: GridSpec, samples: Vec<f64>) -> Result<Self> {
        Self::with_source(spec, samples, FieldSource::Samples)
    }

    fn with_source(spec: GridSpec, samples: Vec<f64>, source: FieldSource) -> Result<Self> {
        spec.validate()?;
        if samples.len() != spec.len() {
            return Err(Error::InvalidGrid(format!(
                "{} samples for a {:?} grid",
                samples.len(),
                spec.dims
            )));
        }
        if let Some(index) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self {
            spec,
            samples,
            source,
        })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn source(&self) -> &FieldSource {
        &self.source
    }

    pub fn analytic(&self) -> Option<&Analytic> {
        match &self.source {
            FieldSource::Analytic(a) => Some(a),
            _ => None,
        }
    }

    #[inline]
    pub fn value(&self, p: [usize; 3]) -> f64 {
        self.samples[self.spec.index(p)]
    }

    /// Central-difference gradient at a grid point, one-sided on the boundary.
    pub fn gradient(&self, p: [usize; 3]) -> Vec3 {
        let mut g = [0.0; 3];
        for (axis, g) in g.iter_mut().enumerate() {
            let mut lo = p;
            let mut hi = p;
            if p[axis] > 0 {
                lo[axis] -= 1;
            }
            if p[axis] + 1 < self.spec.dims[axis] {
                hi[axis] += 1;
            }
            let h = (hi[axis] - lo[axis]) as f64 * self.spec.spacing[axis];
            *g = (self.value(hi) - self.value(lo)) / h;
        }
        Vec3::from(g)
    }
}

/// Samples a built-in implicit function at every grid point.
pub fn make_analytic(name: &str, params: &[f64], spec: GridSpec) -> Result<ScalarField> {
    spec.validate()?;
    let analytic = Analytic::from_name(name, params)?;
    let samples = spec
        .points()
        .map(|p| analytic.eval(&spec.world(p)))
        .collect();
    ScalarField::with_source(spec, samples, FieldSource::Analytic(analytic))
}

/// Loads a little-endian raw volume in x-fastest order.
pub fn load_raw(path: &Path, header: &RawHeader) -> Result<ScalarField> {
    let spec = header.grid()?;
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let expected = spec.len() * header.dtype.size();
    if bytes.len() != expected {
        return Err(Error::SizeMismatch {
            path: path.to_path_buf(),
            expected,
            found: bytes.len(),
        });
    }
    let samples: Vec<f64> = match header.dtype {
        RawDtype::Uint8 => bytes.iter().map(|&b| b as f64).collect(),
        RawDtype::Float32 => bytes
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]) as f64)
            .collect(),
    };
    let source = FieldSource::Raw {
        path: path.to_path_buf(),
        dtype: header.dtype,
    };
    ScalarField::with_source(spec, samples, source)
}

/// Encodes samples for [`load_raw`]. Fails if a sample is not exactly
/// representable in `dtype`.
pub fn encode_raw(field: &ScalarField, dtype: RawDtype) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(field.samples.len() * dtype.size());
    for (index, &value) in field.samples.iter().enumerate() {
        let unencodable = || Error::Unencodable {
            index,
            value,
            dtype: dtype.name(),
        };
        match dtype {
            RawDtype::Uint8 => {
                if value.fract() != 0.0 || !(0.0..=255.0).contains(&value) {
                    return Err(unencodable());
                }
                out.push(value as u8);
            }
            RawDtype::Float32 => {
                let narrow = value as f32;
                if narrow as f64 != value {
                    return Err(unencodable());
                }
                out.extend_from_slice(&narrow.to_le_bytes());
            }
        }
    }
    Ok(out)
}

/// Writes the payload and its JSON sidecar next to it.
pub fn write_raw(field: &ScalarField, path: &Path, dtype: RawDtype) -> Result<RawHeader> {
    let bytes = encode_raw(field, dtype)?;
    fs::write(path, bytes).map_err(|e| Error::io(path, e))?;
    let header = RawHeader {
        dims: field.spec.dims,
        origin: field.spec.origin,
        spacing: field.spec.spacing,
        dtype,
    };
    let sidecar = RawHeader::sidecar_path(path);
    let text = serde_json::to_string_pretty(&header)?;
    fs::write(&sidecar, text).map_err(|e| Error::io(&sidecar, e))?;
    Ok(header)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Inside,
    Outside,
}

impl Sign {
    #[inline]
    pub fn of(value: f64, iso: f64) -> Self {
        if value - iso >= 0.0 {
            Sign::Inside
        } else {
            Sign::Outside
        }
    }

    pub fn is_inside(self) -> bool {
        self == Sign::Inside
    }
}

#[derive(Debug, Clone)]
pub struct SignGrid {
    pub iso: f64,
    spec: GridSpec,
    signs: Vec<Sign>,
}

impl SignGrid {
    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    #[inline]
    pub fn sign(&self, p: [usize; 3]) -> Sign {
        self.signs[self.spec.index(p)]
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn inside_count(&self) -> usize {
        self.signs.iter().filter(|s| s.is_inside()).count()
    }
}

pub fn classify(field: &ScalarField, iso: f64) -> SignGrid {
    debug_assert!(iso.is_finite());
    SignGrid {
        iso,
        spec: field.spec,
        signs: field.samples.iter().map(|&v| Sign::of(v, iso)).collect(),
    }
}
