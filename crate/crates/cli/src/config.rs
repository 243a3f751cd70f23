//! Run configuration: a TOML file with a `scene`, a `[params]` table and a
//! list of `[[outputs]]`, overridden field by field from the command line.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use heis_core::integrate::DEFAULT_SEED;
use serde::{Deserialize, Deserializer};

use crate::error::CliError;

pub const SEED_ENV: &str = "HEIS_SEED";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scene {
    Lemniscate,
    Lift,
    SigmaCylinder,
    Torus,
    Foliation,
    Band,
    Halfplane,
}

impl Scene {
    pub const ALL: [Scene; 7] = [
        Scene::Lemniscate,
        Scene::Lift,
        Scene::SigmaCylinder,
        Scene::Torus,
        Scene::Foliation,
        Scene::Band,
        Scene::Halfplane,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scene::Lemniscate => "lemniscate",
            Scene::Lift => "lift",
            Scene::SigmaCylinder => "sigma-cylinder",
            Scene::Torus => "torus",
            Scene::Foliation => "foliation",
            Scene::Band => "band",
            Scene::Halfplane => "halfplane",
        }
    }
}

impl fmt::Display for Scene {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scene {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Scene::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| CliError::Config(format!("unknown scene {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Obj,
}

impl Format {
    pub fn from_path(p: &Path) -> Option<Format> {
        match p.extension()?.to_str()? {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            "obj" => Some(Format::Obj),
            _ => None,
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Obj => "obj",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: PathBuf,
    pub format: Format,
}

/// Seeds are written either as integers or as strings such as `"0x5EED"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Seed(pub u64);

impl FromStr for Seed {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let s = s.trim();
        let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
            Some(hex) => u64::from_str_radix(hex, 16),
            None => s.parse(),
        };
        parsed.map(Seed).map_err(|_| CliError::Config(format!("invalid seed {s:?}")))
    }
}

impl<'de> Deserialize<'de> for Seed {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(Seed(v)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub curve: Option<String>,
    pub radius: Option<f64>,
    pub sign: Option<i32>,
    pub samples: Option<usize>,
    pub r: Option<f64>,
    #[serde(rename = "R")]
    pub big_r: Option<f64>,
    pub n: Option<u32>,
    pub h: Option<f64>,
    pub phi_max: Option<f64>,
    pub resolution: Option<[usize; 2]>,
    pub panels: Option<[usize; 2]>,
    pub seed: Option<Seed>,
    pub forms: Option<usize>,
    pub tolerance: Option<f64>,
    pub quadrature_tolerance: Option<f64>,
    pub close_tolerance: Option<f64>,
    pub arclength: Option<f64>,
    pub start: Option<[f64; 2]>,
}

impl Params {
    /// Fields set in `other` replace those of `self`.
    pub fn overridden_by(mut self, other: &Params) -> Params {
        macro_rules! take {
            ($($f:ident),*) => {
                $(if other.$f.is_some() { self.$f = other.$f.clone(); })*
            };
        }
        take!(
            curve,
            radius,
            sign,
            samples,
            r,
            big_r,
            n,
            h,
            phi_max,
            resolution,
            panels,
            seed,
            forms,
            tolerance,
            quadrature_tolerance,
            close_tolerance,
            arclength,
            start
        );
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scene: Option<Scene>,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub outputs: Vec<OutputSpec>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<RunConfig, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<RunConfig, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        RunConfig::from_toml(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Layers command-line values over the file: `scene` and every set
    /// parameter replace the file's; an output path replaces the file's
    /// output list.
    pub fn merged(mut self, scene: Option<Scene>, flags: &Params, output: Option<&Path>) -> Result<RunConfig, CliError> {
        if scene.is_some() {
            self.scene = scene;
        }
        self.params = self.params.overridden_by(flags);
        if let Some(p) = output {
            let format = Format::from_path(p)
                .ok_or_else(|| CliError::Config(format!("cannot infer a format from {}", p.display())))?;
            self.outputs = vec![OutputSpec {
                path: p.to_path_buf(),
                format,
            }];
        }
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let p = &self.params;
        let positive = [
            ("quadrature_tolerance", p.quadrature_tolerance),
            ("close_tolerance", p.close_tolerance),
            ("r", p.r),
            ("R", p.big_r),
            ("h", p.h),
            ("phi_max", p.phi_max),
            ("radius", p.radius),
            ("arclength", p.arclength),
        ];
        for (name, v) in positive {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(CliError::Config(format!("{name} must be positive and finite, got {v}")));
                }
            }
        }
        // a zero acceptance threshold is allowed; it fails every nonzero residual
        if let Some(t) = p.tolerance {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(CliError::Config(format!("tolerance must be nonnegative, got {t}")));
            }
        }
        if let Some(s) = p.sign {
            if s != 1 && s != -1 {
                return Err(CliError::Config(format!("sign must be +1 or -1, got {s}")));
            }
        }
        for (name, v) in [("resolution", p.resolution), ("panels", p.panels)] {
            if let Some([a, b]) = v {
                if a < 2 || b < 2 {
                    return Err(CliError::Config(format!("{name} entries must be at least 2, got [{a}, {b}]")));
                }
            }
        }
        if p.samples == Some(0) || p.samples == Some(1) {
            return Err(CliError::Config("samples must be at least 2".into()));
        }
        if p.n == Some(0) {
            return Err(CliError::Config("n must be positive".into()));
        }
        Ok(())
    }

    pub fn scene_or(&self, default: Scene) -> Scene {
        self.scene.unwrap_or(default)
    }

    /// The command-line seed, else `HEIS_SEED`, else the file's, else the default.
    pub fn seed(&self, flag: Option<Seed>) -> Result<u64, CliError> {
        if let Some(Seed(s)) = flag {
            return Ok(s);
        }
        if let Ok(v) = std::env::var(SEED_ENV) {
            return Ok(v.parse::<Seed>()?.0);
        }
        Ok(self.params.seed.map_or(DEFAULT_SEED, |s| s.0))
    }

    pub fn output(&self, format: Format) -> Option<&Path> {
        self.outputs.iter().find(|o| o.format == format).map(|o| o.path.as_path())
    }

    /// Path for `format`: the configured one, or a sibling of the first
    /// configured output with the matching extension.
    pub fn output_or_sibling(&self, format: Format) -> Option<PathBuf> {
        self.output(format)
            .map(Path::to_path_buf)
            .or_else(|| self.outputs.first().map(|o| o.path.with_extension(format.extension())))
    }
}

/// `stem.<suffix>.<ext>` next to `path`.
pub fn sibling(path: &Path, suffix: &str, ext: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    path.with_file_name(format!("{stem}.{suffix}.{ext}"))
}
